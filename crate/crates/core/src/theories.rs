//! Named theories over a finite rig: their arity slices, finite generating
//! sets and predicted slice sizes.
//!
//! Names are written `family@rig`, e.g. `mat-left@zmod4`, `aff@bool2`,
//! `pointed@zmod3`, `full@bool2`, or bare `uslat`, `slat-top`, `fincard`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::clone::{generate_clone_with, CloneSlice, GeneratorSet, SearchOptions};
use crate::error::{domain, parameter, Error, Result};
use crate::matrix::RigMatrix;
use crate::optable::{table_len, OpTable, Side, MAX_TABLE_LEN};
use crate::par::for_each_tuple;
use crate::rig::{RigHandle, StandardRig, Tables, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoryTag {
    FullSetTheory,
    FincardOp,
    MatLeft,
    MatRight,
    MatAffine,
    PointedRightModule,
    Uslat,
    SlatWithTop,
}

impl TheoryTag {
    pub const ALL: [TheoryTag; 8] = [
        TheoryTag::FullSetTheory,
        TheoryTag::FincardOp,
        TheoryTag::MatLeft,
        TheoryTag::MatRight,
        TheoryTag::MatAffine,
        TheoryTag::PointedRightModule,
        TheoryTag::Uslat,
        TheoryTag::SlatWithTop,
    ];

    /// The short family name used in theory strings.
    pub fn family(self) -> &'static str {
        match self {
            TheoryTag::FullSetTheory => "full",
            TheoryTag::FincardOp => "fincard",
            TheoryTag::MatLeft => "mat-left",
            TheoryTag::MatRight => "mat-right",
            TheoryTag::MatAffine => "aff",
            TheoryTag::PointedRightModule => "pointed",
            TheoryTag::Uslat => "uslat",
            TheoryTag::SlatWithTop => "slat-top",
        }
    }

    fn from_family(s: &str) -> Option<Self> {
        Some(match s {
            "full" | "full_set_theory" => TheoryTag::FullSetTheory,
            "fincard" | "fincard_op" => TheoryTag::FincardOp,
            "mat-left" | "mat_left" => TheoryTag::MatLeft,
            "mat-right" | "mat_right" => TheoryTag::MatRight,
            "aff" | "mat-affine" | "mat_affine" => TheoryTag::MatAffine,
            "pointed" | "pointed_right_module" => TheoryTag::PointedRightModule,
            "uslat" => TheoryTag::Uslat,
            "slat-top" | "slat_with_top" => TheoryTag::SlatWithTop,
            _ => return None,
        })
    }

    fn needs_bool2(self) -> bool {
        matches!(self, TheoryTag::Uslat | TheoryTag::SlatWithTop)
    }

    /// Families that are meaningful without naming a rig; they default to bool2.
    fn rig_optional(self) -> bool {
        matches!(
            self,
            TheoryTag::Uslat | TheoryTag::SlatWithTop | TheoryTag::FincardOp | TheoryTag::FullSetTheory
        )
    }
}

/// A theory family together with the finite rig it lives over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryName {
    tag: TheoryTag,
    rig: RigHandle,
}

impl TheoryName {
    pub fn new(tag: TheoryTag, rig: RigHandle) -> Result<Self> {
        let size = rig.require_finite()?.size();
        if tag.needs_bool2() && !is_bool2(&rig) {
            return Err(domain(format!("{} lives over bool2, not {}", tag.family(), rig.name())));
        }
        if size == 0 {
            return Err(domain("theories need a nonempty carrier"));
        }
        Ok(TheoryName { tag, rig })
    }

    /// Parses a theory string; `default_rig` is used when no `@rig` is given.
    pub fn parse(s: &str, default_rig: Option<&RigHandle>) -> Result<Self> {
        let s = s.trim();
        let (family, rig_name) = match s.split_once('@') {
            Some((f, r)) => (f, Some(r)),
            None => (s, None),
        };
        let tag = TheoryTag::from_family(family)
            .ok_or_else(|| parameter(format!("unknown theory {family:?}")))?;
        let rig = match (rig_name, default_rig) {
            (Some(r), _) => RigHandle::by_name(r)?,
            (None, Some(r)) => r.clone(),
            (None, None) if tag.rig_optional() => RigHandle::standard(StandardRig::Bool2)?,
            (None, None) => return Err(parameter(format!("theory {family:?} needs a rig, e.g. {family}@zmod3"))),
        };
        Self::new(tag, rig)
    }

    pub fn tag(&self) -> TheoryTag {
        self.tag
    }

    pub fn rig(&self) -> &RigHandle {
        &self.rig
    }

    pub fn carrier_size(&self) -> usize {
        self.tables().size()
    }

    fn tables(&self) -> &Tables {
        self.rig.tables().expect("checked finite at construction")
    }
}

impl fmt::Display for TheoryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.tag.family(), self.rig.name())
    }
}

impl FromStr for TheoryName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

impl Serialize for TheoryName {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn is_bool2(rig: &RigHandle) -> bool {
    RigHandle::standard(StandardRig::Bool2).is_ok_and(|b| &b == rig)
}

fn rows(t: &Tables, n: usize, mut visit: impl FnMut(&[usize])) {
    for_each_tuple(t.size(), n, |w| visit(w));
}

fn row_op(rig: &RigHandle, w: &[usize], side: Side) -> Result<OpTable> {
    let entries = w.iter().map(|&i| Value::Elem(i)).collect();
    OpTable::from_row(&RigMatrix::new(rig, 1, w.len(), entries)?, side)
}

fn is_affine_row(t: &Tables, w: &[usize]) -> bool {
    w.iter().fold(t.zero(), |acc, &x| t.add(acc, x)) == t.one()
}

fn check_enumeration(count: Option<usize>) -> Result<usize> {
    count
        .filter(|&c| c <= MAX_TABLE_LEN)
        .ok_or_else(|| parameter("theory slice too large to enumerate"))
}

/// Every table of arity `n` on `k` points, optionally filtered.
fn all_tables(k: usize, n: usize, keep: impl Fn(&[usize]) -> bool) -> Result<Vec<OpTable>> {
    let len = table_len(k, n)?;
    let count = check_enumeration(u32::try_from(len).ok().and_then(|l| k.checked_pow(l)))?;
    check_enumeration(count.checked_mul(len.max(1)))?;
    let mut out = Vec::new();
    for_each_tuple(k, len, |outs| {
        if keep(outs) {
            out.push(outs.to_vec());
        }
    });
    out.into_iter().map(|o| OpTable::new(k, n, o)).collect()
}

/// The arity-`n` operations of the named theory, as tables.
pub fn theory_slice(t: &TheoryName, n: usize) -> Result<CloneSlice> {
    let rig = &t.rig;
    let tab = t.tables();
    let k = tab.size();
    check_enumeration(u32::try_from(n).ok().and_then(|e| k.checked_pow(e + 1)))?;
    let mut ops = Vec::new();
    match t.tag {
        TheoryTag::FullSetTheory => ops = all_tables(k, n, |_| true)?,
        TheoryTag::FincardOp => {
            for i in 0..n {
                ops.push(OpTable::projection(n, i, k)?);
            }
        }
        TheoryTag::MatLeft | TheoryTag::MatRight | TheoryTag::MatAffine => {
            let side = if t.tag == TheoryTag::MatRight { Side::Right } else { Side::Left };
            let affine_only = t.tag == TheoryTag::MatAffine;
            let mut err = None;
            rows(tab, n, |w| {
                if affine_only && !is_affine_row(tab, w) {
                    return;
                }
                match row_op(rig, w, side) {
                    Ok(op) => ops.push(op),
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        TheoryTag::PointedRightModule => {
            let mut err = None;
            rows(tab, n + 1, |w| {
                let w: Vec<Value> = w.iter().map(|&i| Value::Elem(i)).collect();
                match OpTable::from_pointed(rig, &w) {
                    Ok(op) => ops.push(op),
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        TheoryTag::Uslat => {
            let opts = SearchOptions { budget: u64::MAX, ..SearchOptions::default() };
            return generate_clone_with(&GeneratorSet::new(2, vec![join2()])?, n, &opts);
        }
        TheoryTag::SlatWithTop => {
            // codes on 2^n are bitmasks, so pointwise join is bitwise or
            ops = all_tables(2, n, |f| {
                (0..f.len()).all(|x| (0..f.len()).all(|y| f[x | y] == (f[x] | f[y])))
            })?;
        }
    }
    CloneSlice::new(k, n, ops)
}

fn join2() -> OpTable {
    OpTable::from_fn(2, 2, |x| x[0] | x[1]).expect("binary table on two points")
}

fn scalar_ops(t: &Tables, side: Side) -> Result<Vec<OpTable>> {
    (0..t.size())
        .map(|a| {
            OpTable::from_fn(t.size(), 1, |x| match side {
                Side::Left => t.mul(a, x[0]),
                Side::Right => t.mul(x[0], a),
            })
        })
        .collect()
}

fn module_generators(t: &Tables, side: Side) -> Result<Vec<OpTable>> {
    let k = t.size();
    let mut gens = vec![
        OpTable::from_fn(k, 2, |x| t.add(x[0], x[1]))?,
        OpTable::constant(k, 0, t.zero())?,
    ];
    gens.extend(scalar_ops(t, side)?);
    Ok(gens)
}

/// A finite generating set for the named theory.
pub fn theory_generators(t: &TheoryName) -> Result<GeneratorSet> {
    let tab = t.tables();
    let k = tab.size();
    let gens = match t.tag {
        TheoryTag::MatLeft => module_generators(tab, Side::Left)?,
        TheoryTag::MatRight => module_generators(tab, Side::Right)?,
        TheoryTag::PointedRightModule => {
            let mut g = module_generators(tab, Side::Right)?;
            g.push(OpTable::constant(k, 0, tab.one())?);
            g
        }
        TheoryTag::MatAffine if is_bool2(&t.rig) => vec![join2()],
        TheoryTag::MatAffine if t.rig.is_ring() => {
            vec![OpTable::from_fn(k, 3, |x| {
                let neg = tab.neg(x[1]).expect("ring");
                tab.add(tab.add(x[0], neg), x[2])
            })?]
        }
        TheoryTag::MatAffine => {
            return Err(domain(format!(
                "no generating set for the affine theory over {}",
                t.rig.name()
            )))
        }
        TheoryTag::Uslat => vec![join2()],
        TheoryTag::SlatWithTop => vec![join2(), OpTable::constant(2, 0, 0)?, OpTable::constant(2, 0, 1)?],
        TheoryTag::FincardOp => Vec::new(),
        TheoryTag::FullSetTheory => {
            return Err(domain("the full theory has no bundled generating set"))
        }
    };
    GeneratorSet::new(k, gens)
}

/// The predicted number of arity-`n` operations.
pub fn expected_count(t: &TheoryName, n: usize) -> Result<BigUint> {
    let tab = t.tables();
    let k = BigUint::from(tab.size());
    let pow = |b: &BigUint, e: usize| -> Result<BigUint> {
        u32::try_from(e).map(|e| b.pow(e)).map_err(|_| parameter("arity too large"))
    };
    let two = BigUint::from(2u32);
    Ok(match t.tag {
        TheoryTag::MatLeft | TheoryTag::MatRight => pow(&k, n)?,
        TheoryTag::MatAffine => {
            let mut c = 0usize;
            rows(tab, n, |w| c += usize::from(is_affine_row(tab, w)));
            BigUint::from(c)
        }
        TheoryTag::PointedRightModule => {
            if t.rig.is_ring() {
                pow(&k, n + 1)?
            } else {
                let mut seen = BTreeSet::new();
                let mut err = None;
                rows(tab, n + 1, |w| {
                    let w: Vec<Value> = w.iter().map(|&i| Value::Elem(i)).collect();
                    match OpTable::from_pointed(&t.rig, &w) {
                        Ok(op) => {
                            seen.insert(op);
                        }
                        Err(e) => err = Some(e),
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
                BigUint::from(seen.len())
            }
        }
        TheoryTag::Uslat => pow(&two, n)? - BigUint::one(),
        TheoryTag::SlatWithTop => pow(&two, n)? + BigUint::one(),
        TheoryTag::FullSetTheory => {
            let len = pow(&k, n)?;
            let e = u32::try_from(&len).map_err(|_| parameter("arity too large"))?;
            k.pow(e)
        }
        TheoryTag::FincardOp => BigUint::from(n),
    })
}
