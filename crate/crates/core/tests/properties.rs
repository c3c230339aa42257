mod common;

use clonelab::ordered::{
    auto_archimedean_finite, dadic_arith, enumerate_positive_cones, nonpositive_weight_witness, w_of_phi, DadicOp,
    DadicOutcome, PreorderedRing, SampledMap,
};
use clonelab::{
    commutant, generate_clone, matrices_commute, multiop_commutes, op_commutes, CloneSlice, DadicFraction, FiniteRig,
    GeneratorSet, MultiOp, OpTable, RigHandle, RigMatrix, SearchOptions, Side, Value,
};
use common::*;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn opts() -> SearchOptions {
    SearchOptions { budget: clonelab::DEFAULT_BUDGET, ..SearchOptions::default() }
}

fn table(k: usize, max_arity: usize) -> impl Strategy<Value = OpTable> {
    (0..=max_arity).prop_flat_map(move |n| {
        proptest::collection::vec(0..k, k.pow(n as u32)).prop_map(move |out| OpTable::new(k, n, out).unwrap())
    })
}

fn gens(k: usize, max_arity: usize, max_len: usize) -> impl Strategy<Value = Vec<OpTable>> {
    proptest::collection::vec(table(k, max_arity), 1..=max_len)
}

fn sorted(slice: &CloneSlice) -> Vec<Vec<usize>> {
    let mut v = outputs(slice.ops());
    v.sort();
    v
}

/// `p / d^e` as a numerator over a power of `d`, compared by cross
/// multiplication.
fn rational(x: &DadicFraction) -> (BigInt, BigInt) {
    (x.numerator().clone(), BigInt::from(x.base()).pow(x.exponent()))
}

fn same(a: (BigInt, BigInt), b: (BigInt, BigInt)) -> bool {
    a.0 * &b.1 == b.0 * &a.1
}

fn dadic(base: u64) -> impl Strategy<Value = DadicFraction> {
    (-10_000i64..10_000, 0u32..8).prop_map(move |(p, e)| DadicFraction::new(base, p, e).unwrap())
}

fn dadic_pair() -> impl Strategy<Value = (DadicFraction, DadicFraction)> {
    prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|d| (dadic(d), dadic(d)))
}

fn value(outcome: DadicOutcome) -> DadicFraction {
    match outcome {
        DadicOutcome::Value(v) => v,
        DadicOutcome::Bool(b) => panic!("expected a value, got {b}"),
    }
}

fn truth(outcome: DadicOutcome) -> bool {
    match outcome {
        DadicOutcome::Bool(b) => b,
        DadicOutcome::Value(v) => panic!("expected a boolean, got {v}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn dadic_arithmetic_matches_rationals((a, b) in dadic_pair()) {
        let (ra, rb) = (rational(&a), rational(&b));
        let sum = value(dadic_arith(DadicOp::Add, &a, Some(&b)).unwrap());
        prop_assert!(same(rational(&sum), (&ra.0 * &rb.1 + &rb.0 * &ra.1, &ra.1 * &rb.1)));
        let prod = value(dadic_arith(DadicOp::Mul, &a, Some(&b)).unwrap());
        prop_assert!(same(rational(&prod), (&ra.0 * &rb.0, &ra.1 * &rb.1)));
        let neg = value(dadic_arith(DadicOp::Neg, &a, None).unwrap());
        prop_assert!(same(rational(&neg), (-&ra.0, ra.1.clone())));
        let leq = truth(dadic_arith(DadicOp::Leq, &a, Some(&b)).unwrap());
        prop_assert_eq!(leq, &ra.0 * &rb.1 <= &rb.0 * &ra.1);
        let pos = truth(dadic_arith(DadicOp::IsPositive, &a, None).unwrap());
        prop_assert_eq!(pos, !ra.0.is_negative());
        for x in [&sum, &prod, &neg] {
            let d = BigInt::from(x.base());
            if x.numerator().is_zero() {
                prop_assert_eq!(x.exponent(), 0);
            } else if x.exponent() > 0 {
                prop_assert!(!(x.numerator() % &d).is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weights_roundtrip_through_restriction(
        w in proptest::collection::vec((0i64..5000, 0u32..6), 1..=4),
        probe in proptest::collection::vec((0i64..100, 0u32..4), 3),
    ) {
        let r = RigHandle::by_name("dadic2").unwrap();
        let pr = PreorderedRing::natural(&r).unwrap();
        let w: Vec<Value> = w.into_iter().map(|(p, e)| Value::dadic(DadicFraction::new(2, p, e).unwrap())).collect();
        let x: Vec<Value> = probe
            .into_iter()
            .take(w.len() - 1)
            .map(|(p, e)| Value::dadic(DadicFraction::new(2, p, e).unwrap()))
            .collect();
        let phi = SampledMap::restrict(&pr, &w, vec![x]).unwrap();
        prop_assert_eq!(w_of_phi(&r, &phi).unwrap(), w);
    }

    #[test]
    fn dadic_positive_part_is_closed((a, b) in dadic_pair()) {
        let abs = |x: DadicFraction| if x.is_positive() { x } else { x.neg() };
        let (a, b) = (abs(a), abs(b));
        prop_assert!(a.try_add(&b).unwrap().is_positive());
        prop_assert!(a.try_mul(&b).unwrap().is_positive());
    }

    #[test]
    fn symmetric_and_matches_grid_oracle(a in table(3, 2), b in table(3, 2)) {
        let ab = op_commutes(&a, &b).unwrap();
        prop_assert_eq!(ab, op_commutes(&b, &a).unwrap());
        prop_assert_eq!(ab, naive_commutes(&a, &b));
    }

    #[test]
    fn symmetric_on_two_points(a in table(2, 3), b in table(2, 3)) {
        prop_assert_eq!(op_commutes(&a, &b).unwrap(), op_commutes(&b, &a).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutant_matches_exhaustive_oracle_on_two_points(g in gens(2, 2, 2), n in 0usize..=3) {
        let set = GeneratorSet::new(2, g.clone()).unwrap();
        let found = commutant(&set, n, &opts()).unwrap();
        prop_assert_eq!(sorted(&found.slice), naive_commutant(2, &g, n));
    }

    #[test]
    fn commutant_is_a_clone_slice(g in gens(2, 2, 2), picks in proptest::collection::vec(any::<prop::sample::Index>(), 3)) {
        let set = GeneratorSet::new(2, g).unwrap();
        let slice = commutant(&set, 2, &opts()).unwrap().slice;
        prop_assert!(slice.contains_projections());
        let ops = slice.ops();
        let [f, h1, h2] = [0, 1, 2].map(|i| &ops[picks[i].index(ops.len())]);
        let composite = f.compose(&[h1.clone(), h2.clone()]).unwrap();
        prop_assert!(slice.contains(&composite));
    }

    #[test]
    fn commutant_ignores_closing_the_generators(g in gens(2, 2, 2), n in 0usize..=2) {
        let set = GeneratorSet::new(2, g).unwrap();
        let closed: Vec<CloneSlice> = (0..=2).map(|a| generate_clone(&set, a).unwrap()).collect();
        let bigger = GeneratorSet::from_slices(2, &closed).unwrap();
        prop_assert_eq!(commutant(&set, n, &opts()).unwrap().slice, commutant(&bigger, n, &opts()).unwrap().slice);
    }

    #[test]
    fn commutant_is_antitone(g in gens(2, 2, 2), extra in gens(2, 2, 1), n in 0usize..=2) {
        let small = GeneratorSet::new(2, g.clone()).unwrap();
        let large = small.clone().with(extra).unwrap();
        let a = commutant(&small, n, &opts()).unwrap().slice;
        let b = commutant(&large, n, &opts()).unwrap().slice;
        prop_assert!(b.is_subset_of(&a));
    }

    #[test]
    fn generators_lie_in_double_commutant(g in gens(2, 2, 2)) {
        let set = GeneratorSet::new(2, g.clone()).unwrap();
        let first: Vec<CloneSlice> = (0..=2).map(|a| commutant(&set, a, &opts()).unwrap().slice).collect();
        let c = GeneratorSet::from_slices(2, &first).unwrap();
        for op in &g {
            let dc = commutant(&c, op.arity(), &opts()).unwrap().slice;
            prop_assert!(dc.contains(op));
        }
    }

    #[test]
    fn generate_clone_matches_term_closure(g in gens(2, 2, 2), n in 0usize..=2) {
        let set = GeneratorSet::new(2, g.clone()).unwrap();
        prop_assert_eq!(sorted(&generate_clone(&set, n).unwrap()), term_closure(2, &g, n));
    }

    #[test]
    fn generate_clone_matches_term_closure_on_three_points(g in gens(3, 2, 2), n in 0usize..=1) {
        let set = GeneratorSet::new(3, g.clone()).unwrap();
        prop_assert_eq!(sorted(&generate_clone(&set, n).unwrap()), term_closure(3, &g, n));
    }

    #[test]
    fn matrices_commute_iff_left_linear_maps_commute(
        rig in prop::sample::select(vec!["bool2", "zmod3", "ut2"]),
        dims in (0usize..=2, 1usize..=2, 0usize..=2, 1usize..=2),
        seed in proptest::collection::vec(0usize..8, 8),
    ) {
        let r = RigHandle::by_name(rig).unwrap();
        let k = r.size().unwrap();
        let (m, n, mp, np) = dims;
        let mut it = seed.into_iter().cycle();
        let x = RigMatrix::from_fn(&r, m, n, |_, _| Value::Elem(it.next().unwrap() % k)).unwrap();
        let y = RigMatrix::from_fn(&r, mp, np, |_, _| Value::Elem(it.next().unwrap() % k)).unwrap();
        let (mu, nu) = (MultiOp::from_matrix(&x, Side::Left).unwrap(), MultiOp::from_matrix(&y, Side::Left).unwrap());
        prop_assert_eq!(matrices_commute(&x, &y).unwrap(), multiop_commutes(&mu, &nu).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn commutant_matches_exhaustive_oracle_on_three_points(g in gens(3, 2, 1), n in 0usize..=2) {
        let set = GeneratorSet::new(3, g.clone()).unwrap();
        let found = commutant(&set, n, &opts()).unwrap();
        prop_assert_eq!(sorted(&found.slice), naive_commutant(3, &g, n));
    }
}

fn gf4() -> RigHandle {
    // Elements a + b t with t^2 = t + 1, stored at a + 2b.
    let mul = |x: usize, y: usize| {
        let (a, b, c, d) = (x & 1, x >> 1, y & 1, y >> 1);
        let (lo, mid, hi) = (a & c, (a & d) ^ (b & c), b & d);
        (lo ^ hi) | ((mid ^ hi) << 1)
    };
    let rig = FiniteRig {
        size: 4,
        add: (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect(),
        mul: (0..4).map(|x| (0..4).map(|y| mul(x, y)).collect()).collect(),
        zero: 0,
        one: 1,
    };
    RigHandle::from_finite("gf4", &rig).unwrap()
}

fn klein() -> RigHandle {
    let rig = FiniteRig {
        size: 4,
        add: (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect(),
        mul: (0..4).map(|x| (0..4).map(|y| x & y).collect()).collect(),
        zero: 0,
        one: 3,
    };
    RigHandle::from_finite("z2xz2", &rig).unwrap()
}

/// For every cone on a few small rings: positivity is a subrig, and the
/// weight criterion agrees with the auto-archimedean decision.
#[test]
fn finite_cones_satisfy_weight_criterion() {
    let mut rings: Vec<RigHandle> = (1..=6).map(|m| RigHandle::by_name(&format!("zmod{m}")).unwrap()).collect();
    rings.extend([gf4(), klein()]);
    let mut checked = 0;
    for ring in &rings {
        let t = ring.require_finite().unwrap();
        for cone in enumerate_positive_cones(ring).unwrap() {
            let pr = PreorderedRing::with_cone(ring, &cone).unwrap();
            assert!(cone.contains(&t.zero()) && cone.contains(&t.one()));
            for &a in &cone {
                for &b in &cone {
                    assert!(cone.contains(&t.add(a, b)) && cone.contains(&t.mul(a, b)));
                }
            }
            let auto = auto_archimedean_finite(&pr).unwrap();
            for n in 0..=2 {
                let witness = nonpositive_weight_witness(&pr, n).unwrap();
                assert_eq!(auto.holds, witness.is_none(), "{} cone {cone:?} n = {n}", ring.name());
            }
            checked += 1;
        }
    }
    assert!(checked > rings.len());
}

#[test]
fn gf4_has_a_proper_cone() {
    let cones = enumerate_positive_cones(&gf4()).unwrap();
    assert!(cones.contains(&vec![0, 1]));
    assert!(cones.contains(&vec![0, 1, 2, 3]));
}
