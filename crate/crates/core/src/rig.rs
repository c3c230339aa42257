//! Rigs (semirings) and rings with finite-table and exact-arithmetic backends.
//!
//! Finite carriers are the indices `0..k`; the designated zero and one are
//! arbitrary indices. Exact rigs are the integers and the d-adic fractions
//! `Z[1/d]`, both commutative rings with arbitrary-precision values.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, parameter, structural, Result};
use crate::ordered::DadicFraction;

/// Largest modulus accepted by [`StandardRig::Zmod`]; tables are `m*m`.
pub const MAX_ZMOD: u64 = 1024;

/// A finite rig as entered by a user: square operation tables over `0..size`.
///
/// This is the unvalidated candidate; [`validate_rig`] checks the axioms and
/// [`RigHandle::from_finite`] turns a valid candidate into a usable rig.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteRig {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

impl FiniteRig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| structural(format!("bad rig JSON: {e}")))
    }

    fn tabulate(size: usize, f: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
        (0..size).map(|a| (0..size).map(|b| f(a, b)).collect()).collect()
    }

    pub fn bool2() -> Self {
        FiniteRig {
            size: 2,
            add: Self::tabulate(2, |a, b| a | b),
            mul: Self::tabulate(2, |a, b| a & b),
            zero: 0,
            one: 1,
        }
    }

    pub fn zmod(m: usize) -> Self {
        FiniteRig {
            size: m,
            add: Self::tabulate(m, |a, b| (a + b) % m),
            mul: Self::tabulate(m, |a, b| (a * b) % m),
            zero: 0,
            one: 1 % m,
        }
    }

    /// The 8-element ring of upper-triangular 2x2 matrices over `Z/2`.
    ///
    /// `[[a, b], [0, c]]` is stored at index `a + 2b + 4c`; the identity is 5.
    pub fn upper_triangular_z2() -> Self {
        let split = |x: usize| (x & 1, (x >> 1) & 1, (x >> 2) & 1);
        let join = |a: usize, b: usize, c: usize| a | (b << 1) | (c << 2);
        FiniteRig {
            size: 8,
            add: Self::tabulate(8, |x, y| x ^ y),
            mul: Self::tabulate(8, |x, y| {
                let (a, b, c) = split(x);
                let (a2, b2, c2) = split(y);
                join(a & a2, (a & b2) ^ (b & c2), c & c2)
            }),
            zero: 0,
            one: 5,
        }
    }

    fn check_shape(&self) -> Result<()> {
        let k = self.size;
        if k == 0 {
            return Err(structural("rig carrier must be nonempty"));
        }
        for (label, table) in [("add", &self.add), ("mul", &self.mul)] {
            if table.len() != k || table.iter().any(|row| row.len() != k) {
                return Err(structural(format!("{label} table is not {k}x{k}")));
            }
            if let Some(bad) = table.iter().flatten().find(|&&v| v >= k) {
                return Err(structural(format!("{label} table entry {bad} out of range 0..{k}")));
            }
        }
        if self.zero >= k || self.one >= k {
            return Err(structural(format!(
                "zero/one indices ({}, {}) out of range 0..{k}",
                self.zero, self.one
            )));
        }
        Ok(())
    }
}

/// One rig axiom, as reported by [`validate_rig`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    AddAssociative,
    AddCommutative,
    AddIdentity,
    MulAssociative,
    MulIdentity,
    LeftDistributive,
    RightDistributive,
    ZeroAnnihilates,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Axiom::AddAssociative => "addition is not associative",
            Axiom::AddCommutative => "addition is not commutative",
            Axiom::AddIdentity => "zero is not an additive identity",
            Axiom::MulAssociative => "multiplication is not associative",
            Axiom::MulIdentity => "one is not a multiplicative identity",
            Axiom::LeftDistributive => "multiplication does not distribute on the left",
            Axiom::RightDistributive => "multiplication does not distribute on the right",
            Axiom::ZeroAnnihilates => "zero does not annihilate",
        };
        f.write_str(msg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub message: String,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every rig axiom exhaustively; each failing axiom is reported once
/// with the first witness found in lexicographic order.
pub fn validate_rig(candidate: &FiniteRig) -> Result<ValidationReport> {
    candidate.check_shape()?;
    let k = candidate.size;
    let add = |a: usize, b: usize| candidate.add[a][b];
    let mul = |a: usize, b: usize| candidate.mul[a][b];
    let (zero, one) = (candidate.zero, candidate.one);

    let mut report = ValidationReport::default();
    let mut note = |axiom: Axiom, witness: Option<Vec<usize>>| {
        if let Some(witness) = witness {
            report.violations.push(Violation {
                axiom,
                message: axiom.to_string(),
                witness,
            });
        }
    };

    let unary = |bad: &dyn Fn(usize) -> bool| (0..k).find(|&a| bad(a)).map(|a| vec![a]);
    let binary = |bad: &dyn Fn(usize, usize) -> bool| {
        (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .find(|&(a, b)| bad(a, b))
            .map(|(a, b)| vec![a, b])
    };
    let ternary = |bad: &dyn Fn(usize, usize, usize) -> bool| {
        (0..k)
            .flat_map(|a| (0..k).flat_map(move |b| (0..k).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| bad(a, b, c))
            .map(|(a, b, c)| vec![a, b, c])
    };

    note(Axiom::AddAssociative, ternary(&|a, b, c| add(add(a, b), c) != add(a, add(b, c))));
    note(Axiom::AddCommutative, binary(&|a, b| add(a, b) != add(b, a)));
    note(Axiom::AddIdentity, unary(&|a| add(zero, a) != a || add(a, zero) != a));
    note(Axiom::MulAssociative, ternary(&|a, b, c| mul(mul(a, b), c) != mul(a, mul(b, c))));
    note(Axiom::MulIdentity, unary(&|a| mul(one, a) != a || mul(a, one) != a));
    note(
        Axiom::LeftDistributive,
        ternary(&|a, b, c| mul(a, add(b, c)) != add(mul(a, b), mul(a, c))),
    );
    note(
        Axiom::RightDistributive,
        ternary(&|a, b, c| mul(add(b, c), a) != add(mul(b, a), mul(c, a))),
    );
    note(Axiom::ZeroAnnihilates, unary(&|a| mul(zero, a) != zero || mul(a, zero) != zero));
    Ok(report)
}

/// Flat operation tables of a validated finite rig, for hot loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    size: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
    neg: Option<Vec<usize>>,
}

impl Tables {
    fn from_rig(r: &FiniteRig) -> Self {
        let k = r.size;
        let add: Vec<usize> = r.add.iter().flatten().copied().collect();
        let mul: Vec<usize> = r.mul.iter().flatten().copied().collect();
        let neg: Option<Vec<usize>> = (0..k)
            .map(|a| (0..k).find(|&b| add[a * k + b] == r.zero))
            .collect();
        Tables { size: k, add, mul, zero: r.zero, one: r.one, neg }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b]
    }

    pub fn neg(&self, a: usize) -> Option<usize> {
        self.neg.as_ref().map(|n| n[a])
    }

    fn is_commutative(&self) -> bool {
        let k = self.size;
        (0..k).all(|a| (0..k).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    fn opposite(&self) -> Self {
        let k = self.size;
        let mul = (0..k * k).map(|i| self.mul[(i % k) * k + i / k]).collect();
        Tables { mul, ..self.clone() }
    }

    fn to_rig(&self) -> FiniteRig {
        let k = self.size;
        FiniteRig {
            size: k,
            add: self.add.chunks(k).map(<[usize]>::to_vec).collect(),
            mul: self.mul.chunks(k).map(<[usize]>::to_vec).collect(),
            zero: self.zero,
            one: self.one,
        }
    }
}

/// Exact commutative rings with unbounded carriers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactKind {
    Integers,
    Dadic(u64),
}

/// The named rigs every front end can address.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardRig {
    Bool2,
    Zmod(u64),
    Integers,
    Dadic(u64),
}

#[derive(Debug, PartialEq, Eq)]
enum Backend {
    Finite(Tables),
    Exact(ExactKind),
}

#[derive(Debug)]
struct RigInner {
    name: String,
    backend: Backend,
    is_ring: bool,
    is_commutative: bool,
}

/// A validated rig. Cloning is cheap; values are immutable and shareable
/// across threads.
#[derive(Clone, Debug)]
pub struct RigHandle(Arc<RigInner>);

impl PartialEq for RigHandle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.backend == other.0.backend
    }
}

impl Eq for RigHandle {}

/// An element of some rig: a carrier index, an integer or a d-adic fraction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Elem(usize),
    Int(BigInt),
    Dadic(DadicKey),
}

/// Ordering wrapper so `Value` can derive `Ord`; the order is structural,
/// not the ring preorder.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DadicKey(pub DadicFraction);

impl PartialOrd for DadicKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DadicKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.base(), self.0.numerator(), self.0.exponent()).cmp(&(
            other.0.base(),
            other.0.numerator(),
            other.0.exponent(),
        ))
    }
}

impl Value {
    pub fn dadic(x: DadicFraction) -> Self {
        Value::Dadic(DadicKey(x))
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Value::Int(n.into())
    }

    pub fn as_elem(&self) -> Option<usize> {
        match self {
            Value::Elem(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_dadic(&self) -> Option<&DadicFraction> {
        match self {
            Value::Dadic(DadicKey(x)) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Elem(i) => write!(f, "{i}"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Dadic(DadicKey(x)) => write!(f, "{x}"),
        }
    }
}

impl RigHandle {
    pub fn standard(which: StandardRig) -> Result<Self> {
        match which {
            StandardRig::Bool2 => Self::from_finite("bool2", &FiniteRig::bool2()),
            StandardRig::Zmod(m) => {
                if m < 1 {
                    return Err(parameter("zmod modulus must be at least 1"));
                }
                if m > MAX_ZMOD {
                    return Err(parameter(format!("zmod modulus {m} exceeds {MAX_ZMOD}")));
                }
                Self::from_finite(&format!("zmod{m}"), &FiniteRig::zmod(m as usize))
            }
            StandardRig::Integers => Ok(Self::exact(ExactKind::Integers)),
            StandardRig::Dadic(d) => {
                if d < 2 {
                    return Err(parameter(format!("d-adic base must be at least 2, got {d}")));
                }
                Ok(Self::exact(ExactKind::Dadic(d)))
            }
        }
    }

    /// Resolves `bool2`, `zmod4` / `zmod(4)`, `int` / `integers`,
    /// `dadic2` / `dadic(2)` / `d_adic(2)`, and the bundled `ut2` example.
    pub fn by_name(name: &str) -> Result<Self> {
        let name = name.trim();
        let numeric = |prefix: &str| -> Option<Result<u64>> {
            let rest = name.strip_prefix(prefix)?;
            let rest = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(rest);
            Some(
                rest.parse::<u64>()
                    .map_err(|_| parameter(format!("bad rig parameter in {name:?}"))),
            )
        };
        match name {
            "bool2" | "2" => return Self::standard(StandardRig::Bool2),
            "int" | "integers" | "Z" => return Self::standard(StandardRig::Integers),
            "ut2" => return Self::from_finite("ut2", &FiniteRig::upper_triangular_z2()),
            _ => {}
        }
        if let Some(m) = numeric("zmod") {
            return Self::standard(StandardRig::Zmod(m?));
        }
        for prefix in ["d_adic", "dadic"] {
            if let Some(d) = numeric(prefix) {
                return Self::standard(StandardRig::Dadic(d?));
            }
        }
        Err(parameter(format!("unknown rig {name:?}")))
    }

    /// Validates a table rig; axiom failures are domain errors.
    pub fn from_finite(name: &str, rig: &FiniteRig) -> Result<Self> {
        let report = validate_rig(rig)?;
        if let Some(v) = report.violations.first() {
            return Err(domain(format!("not a rig: {} (witness {:?})", v.message, v.witness)));
        }
        Ok(Self::from_tables(name.to_string(), Tables::from_rig(rig)))
    }

    fn from_tables(name: String, tables: Tables) -> Self {
        let is_ring = tables.neg.is_some();
        let is_commutative = tables.is_commutative();
        RigHandle(Arc::new(RigInner {
            name,
            backend: Backend::Finite(tables),
            is_ring,
            is_commutative,
        }))
    }

    fn exact(kind: ExactKind) -> Self {
        let name = match kind {
            ExactKind::Integers => "int".to_string(),
            ExactKind::Dadic(d) => format!("dadic{d}"),
        };
        RigHandle(Arc::new(RigInner {
            name,
            backend: Backend::Exact(kind),
            is_ring: true,
            is_commutative: true,
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn is_ring(&self) -> bool {
        self.0.is_ring
    }

    pub fn is_commutative(&self) -> bool {
        self.0.is_commutative
    }

    pub fn tables(&self) -> Option<&Tables> {
        match &self.0.backend {
            Backend::Finite(t) => Some(t),
            Backend::Exact(_) => None,
        }
    }

    /// Like [`tables`](Self::tables) but a domain error for exact rigs.
    pub fn require_finite(&self) -> Result<&Tables> {
        self.tables()
            .ok_or_else(|| domain(format!("rig {} has no finite carrier", self.name())))
    }

    pub fn exact_kind(&self) -> Option<ExactKind> {
        match &self.0.backend {
            Backend::Finite(_) => None,
            Backend::Exact(k) => Some(*k),
        }
    }

    pub fn size(&self) -> Option<usize> {
        self.tables().map(Tables::size)
    }

    pub fn to_finite_rig(&self) -> Option<FiniteRig> {
        self.tables().map(Tables::to_rig)
    }

    /// All carrier elements, for finite rigs.
    pub fn elements(&self) -> Option<Vec<Value>> {
        self.size().map(|k| (0..k).map(Value::Elem).collect())
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (&self.0.backend, v) {
            (Backend::Finite(t), Value::Elem(i)) => *i < t.size,
            (Backend::Exact(ExactKind::Integers), Value::Int(_)) => true,
            (Backend::Exact(ExactKind::Dadic(d)), Value::Dadic(DadicKey(x))) => x.base() == *d,
            _ => false,
        }
    }

    pub fn zero(&self) -> Value {
        match &self.0.backend {
            Backend::Finite(t) => Value::Elem(t.zero),
            Backend::Exact(ExactKind::Integers) => Value::Int(BigInt::zero()),
            Backend::Exact(ExactKind::Dadic(d)) => Value::dadic(DadicFraction::zero(*d).unwrap()),
        }
    }

    pub fn one(&self) -> Value {
        match &self.0.backend {
            Backend::Finite(t) => Value::Elem(t.one),
            Backend::Exact(ExactKind::Integers) => Value::int(1),
            Backend::Exact(ExactKind::Dadic(d)) => Value::dadic(DadicFraction::one(*d).unwrap()),
        }
    }

    fn foreign(&self, v: &Value) -> ! {
        panic!("value {v} does not belong to rig {}", self.name())
    }

    fn binary_op(
        &self,
        a: &Value,
        b: &Value,
        finite: impl Fn(&Tables, usize, usize) -> usize,
        int: impl Fn(&BigInt, &BigInt) -> BigInt,
        dadic: impl Fn(&DadicFraction, &DadicFraction) -> Result<DadicFraction>,
    ) -> Value {
        if !self.contains(a) {
            self.foreign(a);
        }
        if !self.contains(b) {
            self.foreign(b);
        }
        match (&self.0.backend, a, b) {
            (Backend::Finite(t), Value::Elem(x), Value::Elem(y)) => Value::Elem(finite(t, *x, *y)),
            (_, Value::Int(x), Value::Int(y)) => Value::Int(int(x, y)),
            (_, Value::Dadic(DadicKey(x)), Value::Dadic(DadicKey(y))) => {
                Value::dadic(dadic(x, y).expect("same base"))
            }
            _ => unreachable!("membership checked above"),
        }
    }

    /// Panics if either value does not belong to this rig.
    pub fn add(&self, a: &Value, b: &Value) -> Value {
        self.binary_op(a, b, Tables::add, |x, y| x + y, DadicFraction::try_add)
    }

    /// Panics if either value does not belong to this rig.
    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        self.binary_op(a, b, Tables::mul, |x, y| x * y, DadicFraction::try_mul)
    }

    /// Additive inverse, `None` when it does not exist.
    pub fn neg(&self, a: &Value) -> Option<Value> {
        match (&self.0.backend, a) {
            (Backend::Finite(t), Value::Elem(x)) => t
                .neg
                .as_ref()
                .map(|n| n[*x])
                .or_else(|| (0..t.size).find(|&y| t.add(*x, y) == t.zero))
                .map(Value::Elem),
            (Backend::Exact(_), Value::Int(x)) => Some(Value::Int(-x)),
            (Backend::Exact(_), Value::Dadic(DadicKey(x))) => Some(Value::dadic(x.neg())),
            _ => self.foreign(a),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Option<Value> {
        self.neg(b).map(|nb| self.add(a, &nb))
    }

    pub fn sum<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> Value {
        values
            .into_iter()
            .fold(self.zero(), |acc, v| self.add(&acc, v))
    }

    /// Same carrier and addition, multiplication arguments swapped.
    pub fn opposite(&self) -> Self {
        let name = match self.name().strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name()),
        };
        match &self.0.backend {
            Backend::Finite(t) => Self::from_tables(name, t.opposite()),
            Backend::Exact(kind) => RigHandle(Arc::new(RigInner {
                name,
                backend: Backend::Exact(*kind),
                is_ring: true,
                is_commutative: true,
            })),
        }
    }

    /// The image of `n` under the unique rig morphism from the integers
    /// (natural numbers, for rigs that are not rings).
    pub fn embed_integer(&self, n: i64) -> Result<Value> {
        if n < 0 && !self.is_ring() {
            return Err(domain(format!(
                "cannot embed negative integer {n} into non-ring {}",
                self.name()
            )));
        }
        match &self.0.backend {
            Backend::Finite(t) => {
                // double-and-add on |n|
                let mut acc = t.zero;
                let mut base = t.one;
                let mut m = n.unsigned_abs();
                while m > 0 {
                    if m & 1 == 1 {
                        acc = t.add(acc, base);
                    }
                    base = t.add(base, base);
                    m >>= 1;
                }
                if n < 0 {
                    acc = t.neg(acc).expect("ring has negatives");
                }
                Ok(Value::Elem(acc))
            }
            Backend::Exact(ExactKind::Integers) => Ok(Value::int(n)),
            Backend::Exact(ExactKind::Dadic(d)) => {
                Ok(Value::dadic(DadicFraction::from_integer(*d, n)?))
            }
        }
    }

    /// Parses a value literal: an index for finite rigs, a decimal integer,
    /// or `"p/d^e"` (bare integers allowed) for d-adic rigs.
    pub fn parse_value(&self, s: &str) -> Result<Value> {
        let s = s.trim();
        let v = match &self.0.backend {
            Backend::Finite(_) => Value::Elem(
                s.parse()
                    .map_err(|_| parameter(format!("bad carrier index {s:?}")))?,
            ),
            Backend::Exact(ExactKind::Integers) => Value::Int(
                s.parse()
                    .map_err(|_| parameter(format!("bad integer literal {s:?}")))?,
            ),
            Backend::Exact(ExactKind::Dadic(d)) => {
                Value::dadic(DadicFraction::parse_with_base(s, *d)?)
            }
        };
        if !self.contains(&v) {
            return Err(structural(format!("{s} is not an element of {}", self.name())));
        }
        Ok(v)
    }

    pub fn value_from_json(&self, j: &serde_json::Value) -> Result<Value> {
        match j {
            serde_json::Value::Number(n) => self.parse_value(&n.to_string()),
            serde_json::Value::String(s) => self.parse_value(s),
            other => Err(structural(format!("expected a number or string, got {other}"))),
        }
    }

    /// Indices and machine-sized integers become JSON numbers; everything
    /// else becomes a string literal.
    pub fn value_to_json(&self, v: &Value) -> serde_json::Value {
        match v {
            Value::Elem(i) => serde_json::Value::from(*i),
            Value::Int(n) => match n.to_i64() {
                Some(x) => serde_json::Value::from(x),
                None => serde_json::Value::String(n.to_string()),
            },
            Value::Dadic(DadicKey(x)) => serde_json::Value::String(x.to_string()),
        }
    }
}

impl fmt::Display for RigHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Convenience wrapper matching [`RigHandle::standard`].
pub fn standard_rig(which: StandardRig) -> Result<RigHandle> {
    RigHandle::standard(which)
}

pub fn opposite_rig(rig: &RigHandle) -> RigHandle {
    rig.opposite()
}

pub fn embed_integer(rig: &RigHandle, n: i64) -> Result<Value> {
    rig.embed_integer(n)
}
