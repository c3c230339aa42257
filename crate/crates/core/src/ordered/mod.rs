//! Preordered rings and affine maps between their positive parts.
//!
//! A preordered ring is a ring `R` with a subrig `R_+` of positive elements;
//! `a <= b` means `b - a` lies in `R_+`. Over a finite carrier `R_+` is an
//! explicit subset, checked to be a subrig; over the integers and the d-adic
//! fractions it is the natural sign cone.
//!
//! The affine maps `R^n -> R` are the maps `phi_w(x) = w_0 + sum_i x_i w_i`.
//! A map `phi` on `R_+^n` is recovered from its values at `0` and at the
//! basis vectors by [`w_of_phi`]; [`affine_extension_check`] tests that
//! recovery on sample points.

mod dadic;

use std::fmt;

use serde::Serialize;

pub use dadic::DadicFraction;

use crate::error::{domain, parameter, structural, Result};
use crate::par::for_each_tuple;
use crate::rig::{ExactKind, RigHandle, Value};

/// The operations of [`dadic_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DadicOp {
    Add,
    Mul,
    Neg,
    Leq,
    IsPositive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DadicOutcome {
    Value(DadicFraction),
    Bool(bool),
}

impl fmt::Display for DadicOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DadicOutcome::Value(x) => write!(f, "{x}"),
            DadicOutcome::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Binary operations need `b`; unary ones ignore it.
pub fn dadic_arith(op: DadicOp, a: &DadicFraction, b: Option<&DadicFraction>) -> Result<DadicOutcome> {
    let rhs = || b.ok_or_else(|| structural(format!("{op:?} needs two operands")));
    Ok(match op {
        DadicOp::Add => DadicOutcome::Value(a.try_add(rhs()?)?),
        DadicOp::Mul => DadicOutcome::Value(a.try_mul(rhs()?)?),
        DadicOp::Neg => DadicOutcome::Value(a.neg()),
        DadicOp::Leq => DadicOutcome::Bool(a.try_leq(rhs()?)?),
        DadicOp::IsPositive => DadicOutcome::Bool(a.is_positive()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Cone {
    Finite(Vec<bool>),
    Sign,
}

/// Declared facts about the exact preordered rings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KnownProperties {
    pub archimedean: bool,
    pub one_is_order_unit: bool,
    pub affine_extension: bool,
}

impl KnownProperties {
    pub fn firmly_archimedean(&self) -> bool {
        self.archimedean && self.one_is_order_unit
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreorderedRing {
    ring: RigHandle,
    cone: Cone,
}

impl PreorderedRing {
    /// A finite ring with the positive part given by carrier indices.
    pub fn with_cone(ring: &RigHandle, positive: &[usize]) -> Result<Self> {
        let t = ring.require_finite()?;
        if !ring.is_ring() {
            return Err(domain(format!("{} is not a ring", ring.name())));
        }
        let mut mask = vec![false; t.size()];
        for &p in positive {
            if p >= t.size() {
                return Err(structural(format!("{p} is not an element of {}", ring.name())));
            }
            mask[p] = true;
        }
        if !is_subrig(ring, &mask) {
            return Err(domain(format!(
                "positive part {positive:?} of {} is not a subrig",
                ring.name()
            )));
        }
        Ok(PreorderedRing { ring: ring.clone(), cone: Cone::Finite(mask) })
    }

    /// The whole carrier for finite rings, the sign cone for exact ones.
    pub fn natural(ring: &RigHandle) -> Result<Self> {
        if !ring.is_ring() {
            return Err(domain(format!("{} is not a ring", ring.name())));
        }
        match ring.size() {
            Some(k) => Self::with_cone(ring, &(0..k).collect::<Vec<_>>()),
            None => Ok(PreorderedRing { ring: ring.clone(), cone: Cone::Sign }),
        }
    }

    pub fn ring(&self) -> &RigHandle {
        &self.ring
    }

    pub fn is_positive(&self, v: &Value) -> bool {
        match (&self.cone, v) {
            (Cone::Finite(mask), Value::Elem(i)) => mask.get(*i).copied().unwrap_or(false),
            (Cone::Sign, Value::Int(n)) => n.sign() != num_bigint::Sign::Minus,
            (Cone::Sign, Value::Dadic(k)) => k.0.is_positive(),
            _ => false,
        }
    }

    /// `a <= b` iff `b - a` is positive.
    pub fn leq(&self, a: &Value, b: &Value) -> bool {
        self.ring.sub(b, a).is_some_and(|d| self.is_positive(&d))
    }

    /// Carrier indices of the positive part, for finite rings.
    pub fn positive_elements(&self) -> Option<Vec<usize>> {
        match &self.cone {
            Cone::Finite(mask) => Some((0..mask.len()).filter(|&i| mask[i]).collect()),
            Cone::Sign => None,
        }
    }

    /// Declared properties of the integers and the d-adic fractions under
    /// their natural order; `None` for finite rings.
    pub fn known_properties(&self) -> Option<KnownProperties> {
        match (&self.cone, self.ring.exact_kind()?) {
            (Cone::Sign, ExactKind::Integers) => Some(KnownProperties {
                archimedean: true,
                one_is_order_unit: true,
                affine_extension: false,
            }),
            (Cone::Sign, ExactKind::Dadic(_)) => Some(KnownProperties {
                archimedean: true,
                one_is_order_unit: true,
                affine_extension: true,
            }),
            _ => None,
        }
    }
}

fn is_subrig(ring: &RigHandle, mask: &[bool]) -> bool {
    let t = ring.tables().expect("finite");
    let members: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    mask[t.zero()]
        && mask[t.one()]
        && members
            .iter()
            .all(|&a| members.iter().all(|&b| mask[t.add(a, b)] && mask[t.mul(a, b)]))
}

/// Every positive part a finite ring admits, as sorted index lists.
pub fn enumerate_positive_cones(ring: &RigHandle) -> Result<Vec<Vec<usize>>> {
    let t = ring.require_finite()?;
    let k = t.size();
    if k > 20 {
        return Err(parameter(format!("cone enumeration limited to 20 elements, got {k}")));
    }
    let mut cones = Vec::new();
    for bits in 0u32..(1 << k) {
        let mask: Vec<bool> = (0..k).map(|i| bits >> i & 1 == 1).collect();
        if is_subrig(ring, &mask) {
            cones.push((0..k).filter(|&i| mask[i]).collect());
        }
    }
    cones.sort();
    Ok(cones)
}

/// `w_0 + sum_i x_i w_i`.
pub fn phi_w(ring: &RigHandle, w: &[Value], x: &[Value]) -> Result<Value> {
    let (w0, rest) = w
        .split_first()
        .ok_or_else(|| structural("weight vector must have length at least 1"))?;
    if rest.len() != x.len() {
        return Err(structural(format!(
            "weight vector of length {} applied to {} arguments",
            w.len(),
            x.len()
        )));
    }
    if let Some(v) = w.iter().chain(x).find(|v| !ring.contains(v)) {
        return Err(structural(format!("{v} is not an element of {}", ring.name())));
    }
    Ok(rest
        .iter()
        .zip(x)
        .fold(w0.clone(), |acc, (wi, xi)| ring.add(&acc, &ring.mul(xi, wi))))
}

/// A map `R_+^n -> R_+` known at `0`, at the basis vectors and at probes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledMap {
    arity: usize,
    at_zero: Value,
    at_basis: Vec<Value>,
    probes: Vec<(Vec<Value>, Value)>,
}

impl SampledMap {
    pub fn new(
        r: &PreorderedRing,
        at_zero: Value,
        at_basis: Vec<Value>,
        probes: Vec<(Vec<Value>, Value)>,
    ) -> Result<Self> {
        let arity = at_basis.len();
        let ring = r.ring();
        for (x, _) in &probes {
            if x.len() != arity {
                return Err(structural(format!("probe of length {} for arity {arity}", x.len())));
            }
        }
        let values = std::iter::once(&at_zero)
            .chain(&at_basis)
            .chain(probes.iter().flat_map(|(x, y)| x.iter().chain(std::iter::once(y))));
        for v in values {
            if !ring.contains(v) {
                return Err(structural(format!("{v} is not an element of {}", ring.name())));
            }
            if !r.is_positive(v) {
                return Err(domain(format!("{v} is not in the positive part")));
            }
        }
        Ok(SampledMap { arity, at_zero, at_basis, probes })
    }

    /// Samples `phi_w` at `0`, the basis vectors and the given probe points.
    pub fn restrict(r: &PreorderedRing, w: &[Value], probe_points: Vec<Vec<Value>>) -> Result<Self> {
        let ring = r.ring();
        let n = w.len().checked_sub(1).ok_or_else(|| structural("empty weight vector"))?;
        let zero = vec![ring.zero(); n];
        let at_zero = phi_w(ring, w, &zero)?;
        let at_basis = (0..n)
            .map(|i| {
                let mut b = zero.clone();
                b[i] = ring.one();
                phi_w(ring, w, &b)
            })
            .collect::<Result<Vec<_>>>()?;
        let probes = probe_points
            .into_iter()
            .map(|x| {
                let y = phi_w(ring, w, &x)?;
                Ok((x, y))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(r, at_zero, at_basis, probes)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn at_zero(&self) -> &Value {
        &self.at_zero
    }

    pub fn at_basis(&self) -> &[Value] {
        &self.at_basis
    }

    pub fn probes(&self) -> &[(Vec<Value>, Value)] {
        &self.probes
    }
}

/// `(phi(0), phi(b_1) - phi(0), ..., phi(b_n) - phi(0))`.
pub fn w_of_phi(ring: &RigHandle, phi: &SampledMap) -> Result<Vec<Value>> {
    if !ring.is_ring() {
        return Err(domain(format!("{} is not a ring", ring.name())));
    }
    let mut w = vec![phi.at_zero.clone()];
    for b in &phi.at_basis {
        w.push(ring.sub(b, &phi.at_zero).expect("ring"));
    }
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionVerdict {
    HoldsOnProbes,
    /// `lhs = phi(x)` differs from the affine prediction `rhs`.
    Violated { witness: Vec<Value>, lhs: Value, rhs: Value },
}

/// Compares every probe value with `phi(0) + sum_i x_i (phi(b_i) - phi(0))`.
pub fn affine_extension_check(r: &PreorderedRing, phi: &SampledMap) -> Result<ExtensionVerdict> {
    let ring = r.ring();
    let w = w_of_phi(ring, phi)?;
    for (x, y) in &phi.probes {
        let rhs = phi_w(ring, &w, x)?;
        if &rhs != y {
            return Ok(ExtensionVerdict::Violated { witness: x.clone(), lhs: y.clone(), rhs });
        }
    }
    Ok(ExtensionVerdict::HoldsOnProbes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoArchimedean {
    pub holds: bool,
    /// An `r` whose ray `{s r : s >= 0}` is bounded above although `r > 0`
    /// fails, with the bound.
    pub witness: Option<(usize, usize)>,
}

/// Decides the auto-archimedean property by enumerating rays and bounds.
pub fn auto_archimedean_finite(r: &PreorderedRing) -> Result<AutoArchimedean> {
    let ring = r.ring();
    let t = ring.require_finite()?;
    let pos = r.positive_elements().expect("finite cone");
    let le = |a: usize, b: usize| r.leq(&Value::Elem(a), &Value::Elem(b));
    for x in 0..t.size() {
        let ray: Vec<usize> = pos.iter().map(|&s| t.mul(s, x)).collect();
        let bound = (0..t.size()).find(|&b| ray.iter().all(|&y| le(y, b)));
        if let Some(b) = bound {
            if !le(x, t.zero()) {
                return Ok(AutoArchimedean { holds: false, witness: Some((x, b)) });
            }
        }
    }
    Ok(AutoArchimedean { holds: true, witness: None })
}

/// Searches `w` in `R^{1+n}` with `phi_w(R_+^n)` inside `R_+` but `w` not
/// positive. `None` means every such `w` is positive.
pub fn nonpositive_weight_witness(r: &PreorderedRing, n: usize) -> Result<Option<Vec<usize>>> {
    let ring = r.ring();
    let t = ring.require_finite()?;
    let pos = r.positive_elements().expect("finite cone");
    let mut found = None;
    let mut failure = None;
    for_each_tuple(t.size(), n + 1, |w| {
        if found.is_some() || failure.is_some() {
            return;
        }
        let wv: Vec<Value> = w.iter().map(|&i| Value::Elem(i)).collect();
        if wv.iter().all(|v| r.is_positive(v)) {
            return;
        }
        let mut preserves = true;
        for_each_tuple(pos.len(), n, |idx| {
            if !preserves {
                return;
            }
            let x: Vec<Value> = idx.iter().map(|&i| Value::Elem(pos[i])).collect();
            match phi_w(ring, &wv, &x) {
                Ok(y) => preserves = r.is_positive(&y),
                Err(e) => failure = Some(e),
            }
        });
        if preserves {
            found = Some(w.to_vec());
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// The least `e` with `x <= d^e`.
pub fn order_unit_exponent(x: &DadicFraction) -> Result<u32> {
    dadic::least_power_bound(x)
}

/// Checks exactly in `Z[1/d]` that `m + 1` is the affine combination
/// `(1/d) m + ((d-2)/d)(m+1) + (1/d)(m+2)` with positive coefficients.
pub fn common_difference_identity(d: u64, m: u64) -> Result<bool> {
    let c = |n: i64| DadicFraction::new(d, n, 1);
    let int = |n: u64| DadicFraction::from_integer(d, n);
    let d_signed = i64::try_from(d).map_err(|_| parameter("base too large"))?;
    let (a, b) = (c(1)?, c(d_signed - 2)?);
    let coeffs = [a.clone(), b.clone(), a.clone()];
    let points = [int(m)?, int(m + 1)?, int(m + 2)?];
    let one = DadicFraction::one(d)?;
    let mut total = DadicFraction::zero(d)?;
    let mut weight = DadicFraction::zero(d)?;
    for (coef, p) in coeffs.iter().zip(&points) {
        total = total.try_add(&coef.try_mul(p)?)?;
        weight = weight.try_add(coef)?;
    }
    Ok(coeffs.iter().all(DadicFraction::is_positive) && weight == one && total == points[1])
}
