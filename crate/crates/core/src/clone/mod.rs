//! Commutation of finitary operations, clones on a finite carrier, and the
//! two ways of producing them: closure of a generator set and commutants.
//!
//! An operation `mu` of arity `j` commutes with `nu` of arity `k` when, for
//! every `j x k` grid of carrier elements, applying `mu` down each column and
//! then `nu` to the results agrees with applying `nu` along each row and then
//! `mu` to the results.

mod generate;
mod search;

use serde::Serialize;

use crate::error::{structural, Result};
use crate::optable::{table_len, MultiOp, OpTable};

pub use generate::{generate_clone, generate_clone_with};
pub use search::{commutant, CommutantResult, SearchOptions, DEFAULT_BUDGET};

/// A `j x k` grid, `grid[v][t]`, witnessing that two operations fail to commute.
pub type Grid = Vec<Vec<usize>>;

fn same_carrier(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(structural(format!("carrier mismatch: {a} vs {b}")))
    }
}

/// The first grid (in column-code order) on which `mu` and `nu` disagree.
pub fn commutation_witness(mu: &OpTable, nu: &OpTable) -> Result<Option<Grid>> {
    let k = mu.carrier_size();
    same_carrier(k, nu.carrier_size())?;
    let (j, m) = (mu.arity(), nu.arity());
    let col_space = table_len(k, j)?;
    // every grid is a choice of m column codes; check the grid count fits
    table_len(k, j * m)?;

    let col_digits: Vec<Vec<usize>> = (0..col_space)
        .map(|c| crate::optable::decode_tuple(c, k, j))
        .collect();
    let mut witness = None;
    crate::par::for_each_tuple(col_space, m, |cols| {
        if witness.is_some() {
            return;
        }
        let lhs = nu.eval_code(cols.iter().rev().fold(0, |acc, &c| acc * k + mu.eval_code(c)));
        let rhs_code = (0..j).rev().fold(0, |acc, v| {
            let row_code = cols.iter().rev().fold(0, |a, &c| a * k + col_digits[c][v]);
            acc * k + nu.eval_code(row_code)
        });
        if lhs != mu.eval_code(rhs_code) {
            witness = Some(
                (0..j)
                    .map(|v| cols.iter().map(|&c| col_digits[c][v]).collect())
                    .collect(),
            );
        }
    });
    Ok(witness)
}

pub fn op_commutes(mu: &OpTable, nu: &OpTable) -> Result<bool> {
    Ok(commutation_witness(mu, nu)?.is_none())
}

/// Componentwise reduction: maps into powers commute iff all their
/// components commute pairwise.
pub fn multiop_commutes(mu: &MultiOp, nu: &MultiOp) -> Result<bool> {
    same_carrier(mu.carrier_size(), nu.carrier_size())?;
    for a in mu.components() {
        for b in nu.components() {
            if !op_commutes(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A finite set of operations on one carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    carrier: usize,
    generators: Vec<OpTable>,
}

impl GeneratorSet {
    pub fn new(carrier: usize, generators: Vec<OpTable>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.carrier_size() != carrier) {
            return Err(structural(format!(
                "generator over carrier {} in a set over carrier {carrier}",
                g.carrier_size()
            )));
        }
        Ok(GeneratorSet { carrier, generators })
    }

    pub fn empty(carrier: usize) -> Self {
        GeneratorSet { carrier, generators: Vec::new() }
    }

    /// Every operation of every slice, in slice order.
    pub fn from_slices(carrier: usize, slices: &[CloneSlice]) -> Result<Self> {
        Self::new(carrier, slices.iter().flat_map(|s| s.ops().iter().cloned()).collect())
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier
    }

    pub fn generators(&self) -> &[OpTable] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn with(mut self, more: impl IntoIterator<Item = OpTable>) -> Result<Self> {
        self.generators.extend(more);
        Self::new(self.carrier, self.generators)
    }
}

/// The arity-`n` operations of a clone, sorted by output table with no
/// duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CloneSlice {
    carrier: usize,
    arity: usize,
    ops: Vec<OpTable>,
}

impl CloneSlice {
    pub fn new(carrier: usize, arity: usize, mut ops: Vec<OpTable>) -> Result<Self> {
        if let Some(op) = ops
            .iter()
            .find(|op| op.carrier_size() != carrier || op.arity() != arity)
        {
            return Err(structural(format!(
                "slice over carrier {carrier} arity {arity} given an operation over carrier {} arity {}",
                op.carrier_size(),
                op.arity()
            )));
        }
        ops.sort();
        ops.dedup();
        Ok(CloneSlice { carrier, arity, ops })
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ops(&self) -> &[OpTable] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn contains(&self, op: &OpTable) -> bool {
        self.ops.binary_search(op).is_ok()
    }

    pub fn is_subset_of(&self, other: &CloneSlice) -> bool {
        self.ops.iter().all(|op| other.contains(op))
    }

    pub fn contains_projections(&self) -> bool {
        (0..self.arity).all(|i| {
            OpTable::projection(self.arity, i, self.carrier).is_ok_and(|p| self.contains(&p))
        })
    }
}

pub fn clones_equal_at_arity(a: &CloneSlice, b: &CloneSlice) -> Result<bool> {
    if a.carrier != b.carrier || a.arity != b.arity {
        return Err(structural(format!(
            "comparing slices over (carrier {}, arity {}) and (carrier {}, arity {})",
            a.carrier, a.arity, b.carrier, b.arity
        )));
    }
    Ok(a.ops == b.ops)
}
