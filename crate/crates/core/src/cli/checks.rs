//! Built-in theorem checks: each compares commutants or generated clones
//! against named theory slices and reports per-arity counts.

use num_bigint::BigUint;
use serde::Serialize;

use crate::clone::{commutant, generate_clone_with, CloneSlice, GeneratorSet, SearchOptions};
use crate::error::{structural, Error, Result};
use crate::optable::OpTable;
use crate::ordered::common_difference_identity;
use crate::rig::RigHandle;
use crate::theories::{expected_count, theory_generators, theory_slice, TheoryName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    BalancedSlat,
    UslatTop,
    RingAffine { modulus: u64 },
    ModulesMutual { modulus: u64 },
    Saturation,
    DadicIdentity { base: u64, max_m: u64 },
    Mutual { left: String, right: String, max_arity: usize },
    All,
}

impl Suite {
    pub fn name(&self) -> String {
        match self {
            Suite::BalancedSlat => "balanced-slat".into(),
            Suite::UslatTop => "uslat-top".into(),
            Suite::RingAffine { modulus } => format!("ring-affine({modulus})"),
            Suite::ModulesMutual { modulus } => format!("modules-mutual({modulus})"),
            Suite::Saturation => "saturation".into(),
            Suite::DadicIdentity { base, .. } => format!("dadic-identity({base})"),
            Suite::Mutual { left, right, .. } => format!("mutual({left},{right})"),
            Suite::All => "all".into(),
        }
    }

    /// The suites run by `all`.
    pub fn standard() -> Vec<Suite> {
        let mut suites = vec![Suite::BalancedSlat, Suite::UslatTop];
        suites.extend([2, 3].map(|modulus| Suite::RingAffine { modulus }));
        suites.extend([2, 3, 4].map(|modulus| Suite::ModulesMutual { modulus }));
        suites.push(Suite::Saturation);
        suites.extend([2, 3, 5].map(|base| Suite::DadicIdentity { base, max_m: 10 }));
        suites
    }
}

/// One compared arity: `actual` is the computed slice, `reference` the
/// slice it must equal, `expected` the predicted size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceRow {
    pub direction: String,
    pub arity: usize,
    pub expected: String,
    pub actual: usize,
    pub reference: usize,
    pub equal: bool,
    pub visited: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRow {
    pub base: u64,
    pub m: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CheckRow {
    Slice(SliceRow),
    Identity(IdentityRow),
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        match self {
            CheckRow::Slice(r) => r.equal && r.expected == r.actual.to_string(),
            CheckRow::Identity(r) => r.holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<CheckRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckReport>,
    /// Set when a search ran out of budget; the rows are then partial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhausted: Option<String>,
}

impl CheckReport {
    fn new(suite: String) -> Self {
        CheckReport { suite, pass: false, rows: Vec::new(), checks: Vec::new(), exhausted: None }
    }

    fn finish(mut self) -> Self {
        self.pass = self.exhausted.is_none()
            && self.rows.iter().all(CheckRow::passed)
            && self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted.is_some() || self.checks.iter().any(CheckReport::is_exhausted)
    }
}

fn theory(s: &str) -> Result<TheoryName> {
    TheoryName::parse(s, None)
}

fn join2() -> GeneratorSet {
    let join = OpTable::from_fn(2, 2, |x| x[0] | x[1]).expect("binary table");
    GeneratorSet::new(2, vec![join]).expect("one carrier")
}

fn slice_row(direction: &str, arity: usize, expected: BigUint, actual: &CloneSlice, reference: &CloneSlice, visited: u64) -> Result<CheckRow> {
    Ok(CheckRow::Slice(SliceRow {
        direction: direction.to_string(),
        arity,
        expected: expected.to_string(),
        actual: actual.len(),
        reference: reference.len(),
        equal: crate::clone::clones_equal_at_arity(actual, reference)?,
        visited,
    }))
}

/// Rows comparing `commutant(gens, n)` with `theory_slice(target, n)`.
fn commutant_rows(
    report: &mut CheckReport,
    direction: &str,
    gens: &GeneratorSet,
    target: &TheoryName,
    arities: std::ops::RangeInclusive<usize>,
    opts: &SearchOptions,
) -> Result<bool> {
    if gens.carrier_size() != target.carrier_size() {
        return Err(structural(format!(
            "generators over carrier {} compared with {target} over carrier {}",
            gens.carrier_size(),
            target.carrier_size()
        )));
    }
    for n in arities {
        let found = match commutant(gens, n, opts) {
            Ok(found) => found,
            Err(e @ Error::Resource { .. }) => {
                report.exhausted = Some(e.to_string());
                return Ok(false);
            }
            Err(e) => return Err(e),
        };
        let reference = theory_slice(target, n)?;
        report.rows.push(slice_row(direction, n, expected_count(target, n)?, &found.slice, &reference, found.visited)?);
    }
    Ok(true)
}

fn mutual(report: &mut CheckReport, left: &TheoryName, right: &TheoryName, max_arity: usize, opts: &SearchOptions) -> Result<()> {
    let dir = |a: &TheoryName, b: &TheoryName| format!("commutant({a}) = {b}");
    if commutant_rows(report, &dir(left, right), &theory_generators(left)?, right, 0..=max_arity, opts)? {
        commutant_rows(report, &dir(right, left), &theory_generators(right)?, left, 0..=max_arity, opts)?;
    }
    Ok(())
}

fn saturation(report: &mut CheckReport, opts: &SearchOptions) -> Result<()> {
    let g = join2();
    let mut first = Vec::new();
    for a in 0..=2 {
        match commutant(&g, a, opts) {
            Ok(found) => first.push(found.slice),
            Err(e @ Error::Resource { .. }) => {
                report.exhausted = Some(e.to_string());
                return Ok(());
            }
            Err(e) => return Err(e),
        }
    }
    let double = GeneratorSet::from_slices(2, &first)?;
    let uslat = theory("uslat")?;
    for n in 0..=3 {
        let found = match commutant(&double, n, opts) {
            Ok(found) => found,
            Err(e @ Error::Resource { .. }) => {
                report.exhausted = Some(e.to_string());
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let generated = generate_clone_with(&g, n, opts)?;
        report.rows.push(slice_row(
            "commutant(commutant(join) at arities <= 2) = clone(join)",
            n,
            expected_count(&uslat, n)?,
            &found.slice,
            &generated,
            found.visited,
        )?);
    }
    Ok(())
}

/// Runs a suite; budget exhaustion yields a partial report, not an error.
pub fn run_suite(suite: &Suite, opts: &SearchOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new(suite.name());
    match suite {
        Suite::All => {
            for s in Suite::standard() {
                let sub = run_suite(&s, opts)?;
                let stop = sub.is_exhausted();
                report.checks.push(sub);
                if stop {
                    report.exhausted = Some(format!("budget exhausted in {}", s.name()));
                    break;
                }
            }
        }
        Suite::BalancedSlat => {
            let gens = join2().with([OpTable::constant(2, 0, 0)?])?;
            commutant_rows(&mut report, "commutant(join, 0) = mat-left@bool2", &gens, &theory("mat-left@bool2")?, 0..=3, opts)?;
        }
        Suite::UslatTop => {
            let top = theory("slat-top")?;
            let aff = theory("aff@bool2")?;
            if commutant_rows(&mut report, "commutant(uslat) = slat-top", &theory_generators(&theory("uslat")?)?, &top, 0..=3, opts)? {
                commutant_rows(&mut report, "commutant(slat-top) = aff@bool2", &theory_generators(&top)?, &aff, 0..=3, opts)?;
            }
        }
        Suite::RingAffine { modulus } => {
            let rig = RigHandle::by_name(&format!("zmod{modulus}"))?;
            let aff = TheoryName::parse("aff", Some(&rig))?;
            let pointed = TheoryName::parse("pointed", Some(&rig))?;
            let dir = format!("commutant({aff}) = {pointed}");
            commutant_rows(&mut report, &dir, &theory_generators(&aff)?, &pointed, 0..=2, opts)?;
        }
        Suite::ModulesMutual { modulus } => {
            let rig = RigHandle::by_name(&format!("zmod{modulus}"))?;
            let left = TheoryName::parse("mat-left", Some(&rig))?;
            let right = TheoryName::parse("mat-right", Some(&rig))?;
            mutual(&mut report, &left, &right, 2, opts)?;
        }
        Suite::Saturation => saturation(&mut report, opts)?,
        Suite::DadicIdentity { base, max_m } => {
            for m in 0..=*max_m {
                let holds = common_difference_identity(*base, m)?;
                report.rows.push(CheckRow::Identity(IdentityRow { base: *base, m, holds }));
            }
        }
        Suite::Mutual { left, right, max_arity } => {
            mutual(&mut report, &theory(left)?, &theory(right)?, *max_arity, opts)?;
        }
    }
    Ok(report.finish())
}
