//! Finitary operations on a finite carrier `0..k`, stored as lookup tables.
//!
//! An `n`-ary table has `k^n` outputs. Argument tuples are encoded
//! little-endian, `x_0 + k*x_1 + k^2*x_2 + ...`, so that for `n = 2` the code
//! of `(v, t)` is the matrix pair index `v + k*t`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, parameter, structural, Result};
use crate::matrix::RigMatrix;
use crate::rig::{RigHandle, Value};

/// Largest table this crate will allocate (`k^n` outputs).
pub const MAX_TABLE_LEN: usize = 1 << 24;

/// `k^n`, rejecting tables larger than [`MAX_TABLE_LEN`].
pub fn table_len(k: usize, n: usize) -> Result<usize> {
    let mut len: usize = 1;
    for _ in 0..n {
        len = len
            .checked_mul(k)
            .filter(|&l| l <= MAX_TABLE_LEN)
            .ok_or_else(|| parameter(format!("{k}^{n} table entries exceed {MAX_TABLE_LEN}")))?;
    }
    Ok(len)
}

/// Little-endian radix-`k` code of a tuple.
pub fn encode_tuple(digits: &[usize], k: usize) -> Result<usize> {
    let mut code = 0usize;
    for &d in digits.iter().rev() {
        if d >= k {
            return Err(structural(format!("digit {d} out of range 0..{k}")));
        }
        code = code * k + d;
    }
    Ok(code)
}

/// Inverse of [`encode_tuple`] for tuples of length `n`.
pub fn decode_tuple(mut code: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(code % k);
        code /= k;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OpTable {
    #[serde(rename = "carrier")]
    k: usize,
    arity: usize,
    outputs: Vec<usize>,
}

impl PartialOrd for OpTable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on outputs; ties (different shapes) broken by arity, carrier.
impl Ord for OpTable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.outputs
            .cmp(&other.outputs)
            .then(self.arity.cmp(&other.arity))
            .then(self.k.cmp(&other.k))
    }
}

impl<'de> Deserialize<'de> for OpTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "carrier")]
            k: usize,
            arity: usize,
            outputs: Vec<usize>,
        }
        let raw = Raw::deserialize(d)?;
        OpTable::new(raw.k, raw.arity, raw.outputs).map_err(serde::de::Error::custom)
    }
}

impl OpTable {
    pub fn new(k: usize, arity: usize, outputs: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(structural("carrier must be nonempty"));
        }
        let len = table_len(k, arity)?;
        if outputs.len() != len {
            return Err(structural(format!(
                "arity-{arity} table over {k} elements needs {len} outputs, got {}",
                outputs.len()
            )));
        }
        if let Some(bad) = outputs.iter().find(|&&o| o >= k) {
            return Err(structural(format!("output {bad} out of range 0..{k}")));
        }
        Ok(OpTable { k, arity, outputs })
    }

    /// Tabulates `f` over every tuple in code order.
    pub fn from_fn(k: usize, arity: usize, mut f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let len = table_len(k, arity)?;
        let mut digits = vec![0usize; arity];
        let mut outputs = Vec::with_capacity(len);
        for _ in 0..len {
            outputs.push(f(&digits));
            // odometer, first digit fastest
            for d in digits.iter_mut() {
                *d += 1;
                if *d < k {
                    break;
                }
                *d = 0;
            }
        }
        Self::new(k, arity, outputs)
    }

    pub fn projection(n: usize, i: usize, k: usize) -> Result<Self> {
        if i >= n {
            return Err(parameter(format!("projection index {i} out of range 0..{n}")));
        }
        Self::from_fn(k, n, |x| x[i])
    }

    pub fn constant(k: usize, arity: usize, c: usize) -> Result<Self> {
        Self::new(k, arity, vec![c; table_len(k, arity)?])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| structural(format!("bad op table JSON: {e}")))
    }

    pub fn carrier_size(&self) -> usize {
        self.k
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    #[inline]
    pub fn eval_code(&self, code: usize) -> usize {
        self.outputs[code]
    }

    /// Panics if the tuple has the wrong length or an out-of-range digit.
    pub fn eval(&self, args: &[usize]) -> usize {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        self.outputs[encode_tuple(args, self.k).expect("argument out of range")]
    }

    pub fn is_projection(&self) -> bool {
        (0..self.arity).any(|i| Self::projection(self.arity, i, self.k).is_ok_and(|p| &p == self))
    }

    /// Superposition `outer(inners[0](x), ..., inners[m-1](x))`.
    pub fn compose(&self, inners: &[OpTable]) -> Result<OpTable> {
        if inners.len() != self.arity {
            return Err(structural(format!(
                "arity-{} operation composed with {} operations",
                self.arity,
                inners.len()
            )));
        }
        let n = match inners.first() {
            Some(first) => first.arity,
            None => {
                return Err(structural(
                    "composing a constant needs the target arity; use compose_at",
                ))
            }
        };
        self.compose_at(n, inners)
    }

    /// Like [`compose`](Self::compose), with the target arity explicit so
    /// that constants (no inners) can be lifted to any arity.
    pub fn compose_at(&self, n: usize, inners: &[OpTable]) -> Result<OpTable> {
        let k = self.k;
        if inners.len() != self.arity {
            return Err(structural(format!(
                "arity-{} operation composed with {} operations",
                self.arity,
                inners.len()
            )));
        }
        if let Some(bad) = inners.iter().find(|g| g.k != k || g.arity != n) {
            return Err(structural(format!(
                "inner operation has carrier {} arity {}, expected carrier {k} arity {n}",
                bad.k, bad.arity
            )));
        }
        let len = table_len(k, n)?;
        let outputs = (0..len)
            .map(|x| {
                let code = inners.iter().rev().fold(0usize, |acc, g| acc * k + g.outputs[x]);
                self.outputs[code]
            })
            .collect();
        Ok(OpTable { k, arity: n, outputs })
    }

    /// `x -> sum_i w_i x_i` (left) or `x -> sum_i x_i w_i` (right) for a row
    /// vector `w` over a finite rig.
    pub fn from_row(w: &RigMatrix, side: Side) -> Result<OpTable> {
        if w.rows() != 1 {
            return Err(structural(format!("expected a row vector, got {} rows", w.rows())));
        }
        let t = w.rig().require_finite()?;
        let coeffs: Vec<usize> = w.row(0).iter().map(|v| v.as_elem().expect("finite rig")).collect();
        Self::from_fn(t.size(), coeffs.len(), |x| {
            coeffs.iter().zip(x).fold(t.zero(), |acc, (&wi, &xi)| {
                let term = match side {
                    Side::Left => t.mul(wi, xi),
                    Side::Right => t.mul(xi, wi),
                };
                t.add(acc, term)
            })
        })
    }

    /// `x -> w_0 + sum_i x_i w_i` for `w` of length `1 + n`.
    pub fn from_pointed(rig: &RigHandle, w: &[Value]) -> Result<OpTable> {
        let t = rig.require_finite()?;
        let (w0, rest) = w
            .split_first()
            .ok_or_else(|| structural("pointed vector must have length at least 1"))?;
        let elem = |v: &Value| {
            v.as_elem()
                .filter(|&i| i < t.size())
                .ok_or_else(|| structural(format!("{v} is not an element of {rig}")))
        };
        let w0 = elem(w0)?;
        let coeffs = rest.iter().map(elem).collect::<Result<Vec<usize>>>()?;
        Self::from_fn(t.size(), coeffs.len(), |x| {
            coeffs
                .iter()
                .zip(x)
                .fold(w0, |acc, (&wi, &xi)| t.add(acc, t.mul(xi, wi)))
        })
    }
}

impl fmt::Display for OpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.outputs)
    }
}

pub fn projection(n: usize, i: usize, k: usize) -> Result<OpTable> {
    OpTable::projection(n, i, k)
}

pub fn compose(outer: &OpTable, inners: &[OpTable]) -> Result<OpTable> {
    outer.compose(inners)
}

pub fn op_from_row(w: &RigMatrix, side: Side) -> Result<OpTable> {
    OpTable::from_row(w, side)
}

pub fn op_pointed(rig: &RigHandle, w: &[Value]) -> Result<OpTable> {
    if rig.tables().is_none() {
        return Err(domain(format!("rig {rig} has no finite carrier")));
    }
    OpTable::from_pointed(rig, w)
}

/// A map `R^n -> R^m` given by `m` component operations of arity `n`.
/// `m = 0` is the unique map into the empty power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiOp {
    k: usize,
    arity: usize,
    components: Vec<OpTable>,
}

impl MultiOp {
    pub fn new(k: usize, arity: usize, components: Vec<OpTable>) -> Result<Self> {
        if let Some(bad) = components.iter().find(|c| c.k != k || c.arity != arity) {
            return Err(structural(format!(
                "component has carrier {} arity {}, expected carrier {k} arity {arity}",
                bad.k, bad.arity
            )));
        }
        Ok(MultiOp { k, arity, components })
    }

    /// The rows of a matrix over a finite rig, read as operations.
    pub fn from_matrix(a: &RigMatrix, side: Side) -> Result<Self> {
        let t = a.rig().require_finite()?;
        let rows = (0..a.rows())
            .map(|i| {
                let row = RigMatrix::new(a.rig(), 1, a.cols(), a.row(i).to_vec())?;
                OpTable::from_row(&row, side)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(t.size(), a.cols(), rows)
    }

    pub fn carrier_size(&self) -> usize {
        self.k
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn components(&self) -> &[OpTable] {
        &self.components
    }

    pub fn eval(&self, args: &[usize]) -> Vec<usize> {
        self.components.iter().map(|c| c.eval(args)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;

    fn rig(name: &str) -> RigHandle {
        RigHandle::by_name(name).unwrap()
    }

    fn join2() -> OpTable {
        OpTable::from_fn(2, 2, |x| x[0] | x[1]).unwrap()
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(encode_tuple(&[1, 0], 2).unwrap(), 1);
        assert_eq!(encode_tuple(&[0, 1], 2).unwrap(), 2);
        assert_eq!(encode_tuple(&[2, 1, 0], 3).unwrap(), 5);
        assert_eq!(encode_tuple(&[], 3).unwrap(), 0);
        assert!(matches!(encode_tuple(&[2], 2), Err(Error::Structural(_))));
    }

    #[test]
    fn encoding_matches_matrix_pairs() {
        for k in 1..=4 {
            for v in 0..k {
                for t in 0..k {
                    assert_eq!(encode_tuple(&[v, t], k).unwrap(), crate::matrix::pair_index(v, t, k));
                }
            }
        }
    }

    #[test]
    fn encode_decode_roundtrip_exhaustive() {
        for k in 1..=4 {
            for n in 0..=5 {
                for code in 0..table_len(k, n).unwrap() {
                    let digits = decode_tuple(code, k, n);
                    assert_eq!(encode_tuple(&digits, k).unwrap(), code);
                }
            }
        }
    }

    #[test]
    fn projection_tables() {
        assert_eq!(OpTable::projection(2, 0, 2).unwrap().outputs(), &[0, 1, 0, 1]);
        for k in 1..=4 {
            let id = OpTable::projection(1, 0, k).unwrap();
            assert_eq!(id.outputs(), (0..k).collect::<Vec<_>>().as_slice());
        }
        assert_eq!(OpTable::projection(3, 2, 3).unwrap().eval(&[0, 1, 2]), 2);
        assert!(matches!(OpTable::projection(2, 2, 2), Err(Error::Parameter(_))));
    }

    #[test]
    fn constants_are_arity_zero_tables() {
        let c = OpTable::constant(3, 0, 2).unwrap();
        assert_eq!(c.outputs(), &[2]);
        assert_eq!(c.eval(&[]), 2);
    }

    #[test]
    fn compose_examples() {
        let j = join2();
        let p0 = OpTable::projection(1, 0, 2).unwrap();
        assert_eq!(j.compose(&[p0.clone(), p0.clone()]).unwrap(), p0);

        let pi = |i| OpTable::projection(3, i, 2).unwrap();
        let inner = j.compose(&[pi(0), pi(1)]).unwrap();
        let ternary = j.compose(&[inner, pi(2)]).unwrap();
        assert_eq!(ternary, OpTable::from_fn(2, 3, |x| x[0] | x[1] | x[2]).unwrap());
    }

    #[test]
    fn constant_lifts_to_any_arity() {
        let c = OpTable::constant(2, 0, 1).unwrap();
        assert_eq!(c.compose_at(2, &[]).unwrap(), OpTable::constant(2, 2, 1).unwrap());
        assert!(c.compose(&[]).is_err());
    }

    #[test]
    fn compose_rejects_mismatches() {
        let j = join2();
        let p = OpTable::projection(1, 0, 2).unwrap();
        assert!(matches!(j.compose(std::slice::from_ref(&p)), Err(Error::Structural(_))));
        let q = OpTable::projection(2, 0, 2).unwrap();
        assert!(matches!(j.compose(&[p, q]), Err(Error::Structural(_))));
        let r = OpTable::projection(1, 0, 3).unwrap();
        assert!(matches!(j.compose(&[r.clone(), r]), Err(Error::Structural(_))));
    }

    #[test]
    fn rows_as_operations() {
        let b = rig("bool2");
        let w = RigMatrix::from_i64(&b, &[&[1, 1]]).unwrap();
        assert_eq!(OpTable::from_row(&w, Side::Left).unwrap().outputs(), &[0, 1, 1, 1]);
        let z3 = rig("zmod3");
        let w = RigMatrix::from_i64(&z3, &[&[2]]).unwrap();
        assert_eq!(OpTable::from_row(&w, Side::Left).unwrap().outputs(), &[0, 2, 1]);
        let z = rig("int");
        let w = RigMatrix::from_i64(&z, &[&[2]]).unwrap();
        assert!(matches!(OpTable::from_row(&w, Side::Left), Err(Error::Domain(_))));
    }

    #[test]
    fn left_and_right_rows_differ_over_noncommutative_rig() {
        let r = rig("ut2");
        let found = (0..8).any(|a| {
            let w = RigMatrix::new(&r, 1, 1, vec![Value::Elem(a)]).unwrap();
            OpTable::from_row(&w, Side::Left).unwrap() != OpTable::from_row(&w, Side::Right).unwrap()
        });
        assert!(found);
    }

    #[test]
    fn left_equals_right_over_commutative_rigs() {
        for name in ["bool2", "zmod3", "zmod4"] {
            let r = rig(name);
            let k = r.size().unwrap();
            for n in 0..=2 {
                for code in 0..table_len(k, n).unwrap() {
                    let w = decode_tuple(code, k, n).into_iter().map(Value::Elem).collect();
                    let w = RigMatrix::new(&r, 1, n, w).unwrap();
                    assert_eq!(
                        OpTable::from_row(&w, Side::Left).unwrap(),
                        OpTable::from_row(&w, Side::Right).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn pointed_examples() {
        let z3 = rig("zmod3");
        let e = |v: &[usize]| v.iter().map(|&i| Value::Elem(i)).collect::<Vec<_>>();
        assert_eq!(op_pointed(&z3, &e(&[1, 2])).unwrap().outputs(), &[1, 0, 2]);
        for name in ["bool2", "zmod3", "ut2"] {
            let r = rig(name);
            let id = OpTable::projection(1, 0, r.size().unwrap()).unwrap();
            let w = vec![r.zero(), r.one()];
            assert_eq!(op_pointed(&r, &w).unwrap(), id);
        }
        let b = rig("bool2");
        let a = op_pointed(&b, &e(&[1, 0])).unwrap();
        let c = op_pointed(&b, &e(&[1, 1])).unwrap();
        assert_eq!(a, c);
        assert_eq!(a, OpTable::constant(2, 1, 1).unwrap());
        assert_eq!(op_pointed(&z3, &e(&[2])).unwrap(), OpTable::constant(3, 0, 2).unwrap());
        assert!(matches!(op_pointed(&rig("int"), &[Value::int(1)]), Err(Error::Domain(_))));
        assert!(op_pointed(&z3, &[]).is_err());
    }

    #[test]
    fn pointed_at_zero_is_the_base_point() {
        let z4 = rig("zmod4");
        for code in 0..table_len(4, 3).unwrap() {
            let w: Vec<Value> = decode_tuple(code, 4, 3).into_iter().map(Value::Elem).collect();
            let op = op_pointed(&z4, &w).unwrap();
            assert_eq!(Value::Elem(op.eval(&[0, 0])), w[0]);
        }
    }

    #[test]
    fn json_format() {
        let j = join2();
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"carrier":2,"arity":2,"outputs":[0,1,1,1]}"#);
        assert_eq!(OpTable::from_json(r#"{"carrier":2,"arity":2,"outputs":[0,1,1,1]}"#).unwrap(), j);
        assert!(OpTable::from_json(r#"{"carrier":2,"arity":2,"outputs":[0,1,1]}"#).is_err());
        assert!(OpTable::from_json(r#"{"carrier":2,"arity":1,"outputs":[0,2]}"#).is_err());
    }

    #[test]
    fn multiop_checks_components() {
        let p = OpTable::projection(2, 0, 2).unwrap();
        let q = OpTable::projection(1, 0, 2).unwrap();
        assert!(MultiOp::new(2, 2, vec![p.clone(), q]).is_err());
        let empty = MultiOp::new(2, 3, vec![]).unwrap();
        assert!(empty.eval(&[0, 1, 1]).is_empty());
        let m = MultiOp::new(2, 2, vec![p, join2()]).unwrap();
        assert_eq!(m.eval(&[0, 1]), vec![0, 1]);
    }

    fn arb_table(k: usize, n: usize) -> impl Strategy<Value = OpTable> {
        prop::collection::vec(0..k, table_len(k, n).unwrap())
            .prop_map(move |o| OpTable::new(k, n, o).unwrap())
    }

    proptest! {
        #[test]
        fn projections_are_right_units(mu in (1usize..=3, 0usize..=3).prop_flat_map(|(k, n)| arb_table(k, n))) {
            let n = mu.arity();
            let k = mu.carrier_size();
            let ps: Vec<_> = (0..n).map(|i| OpTable::projection(n, i, k).unwrap()).collect();
            prop_assert_eq!(mu.compose_at(n, &ps).unwrap(), mu);
        }

        #[test]
        fn superposition_is_associative(
            f in arb_table(2, 2),
            g in prop::collection::vec(arb_table(2, 3), 2),
            h in prop::collection::vec(arb_table(2, 2), 3),
        ) {
            // f(g0(h), g1(h)) computed two ways
            let gh: Vec<_> = g.iter().map(|gi| gi.compose_at(2, &h).unwrap()).collect();
            let left = f.compose_at(2, &gh).unwrap();
            let fg = f.compose_at(3, &g).unwrap();
            let right = fg.compose_at(2, &h).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
