//! Matrices over a rig, read as morphisms `n -> m` (an `m x n` matrix) of the
//! theory of left modules.
//!
//! Pairs `(v, t)` with `v < j` and `t < k` are encoded as `v + j*t`, so the
//! first coordinate varies fastest. Both Kronecker products below index their
//! rows and columns this way; with it the first product is the classical
//! Kronecker product `Y ⊗ X`.

use std::fmt;

use serde::Deserialize;

use crate::error::{structural, Result};
use crate::rig::{FiniteRig, RigHandle, Value};

/// `v + j*t`, the index of the pair `(v, t)` in `j*k`.
#[inline]
pub fn pair_index(v: usize, t: usize, j: usize) -> usize {
    v + j * t
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigMatrix {
    rig: RigHandle,
    rows: usize,
    cols: usize,
    entries: Vec<Value>,
}

impl RigMatrix {
    pub fn new(rig: &RigHandle, rows: usize, cols: usize, entries: Vec<Value>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(structural(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !rig.contains(v)) {
            return Err(structural(format!("entry {bad} is not an element of {rig}")));
        }
        Ok(RigMatrix { rig: rig.clone(), rows, cols, entries })
    }

    /// Builds from row vectors; `cols` is needed to type the `0 x n` case.
    pub fn from_rows(rig: &RigHandle, cols: usize, rows: Vec<Vec<Value>>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(structural(format!("ragged matrix: row of length {} in a {cols}-column matrix", r.len())));
        }
        let m = rows.len();
        Self::new(rig, m, cols, rows.into_iter().flatten().collect())
    }

    /// Convenience for finite rigs and the integers: entries given as `i64`.
    pub fn from_i64(rig: &RigHandle, rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| rig.parse_value(&x.to_string())).collect())
            .collect::<Result<Vec<Vec<Value>>>>()?;
        Self::from_rows(rig, cols, rows)
    }

    pub fn from_fn(rig: &RigHandle, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Value) -> Result<Self> {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self::new(rig, rows, cols, entries)
    }

    pub fn zeros(rig: &RigHandle, rows: usize, cols: usize) -> Self {
        RigMatrix {
            rig: rig.clone(),
            rows,
            cols,
            entries: vec![rig.zero(); rows * cols],
        }
    }

    pub fn identity(rig: &RigHandle, n: usize) -> Self {
        let mut m = Self::zeros(rig, n, n);
        for i in 0..n {
            m.entries[i * n + i] = rig.one();
        }
        m
    }

    /// The standard basis row vector with a one in position `i`.
    pub fn basis_row(rig: &RigHandle, n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(structural(format!("basis index {i} out of range 0..{n}")));
        }
        let mut m = Self::zeros(rig, 1, n);
        m.entries[i] = rig.one();
        Ok(m)
    }

    pub fn rig(&self) -> &RigHandle {
        &self.rig
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Value] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Value] {
        &self.entries
    }

    fn same_rig(&self, other: &Self) -> Result<()> {
        if self.rig == other.rig {
            Ok(())
        } else {
            Err(structural(format!("rig mismatch: {} vs {}", self.rig, other.rig)))
        }
    }

    /// Composition in the matrix theory; empty sums are zero.
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        self.same_rig(other)?;
        if self.cols != other.rows {
            return Err(structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.rig;
        Self::from_fn(r, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(r.zero(), |acc, t| {
                r.add(&acc, &r.mul(self.get(i, t), other.get(t, j)))
            })
        })
    }

    /// First Kronecker product of `self = X` (`j' x j`) with `Y` (`k' x k`):
    /// entry `(<u,s>, <v,t>)` is `Y[s][t] * X[u][v]`.
    pub fn kron_first(&self, y: &Self) -> Result<Self> {
        self.kron_with(y, |r, x, y| r.mul(y, x))
    }

    /// Second Kronecker product: entry `(<u,s>, <v,t>)` is `X[u][v] * Y[s][t]`.
    pub fn kron_second(&self, y: &Self) -> Result<Self> {
        self.kron_with(y, |r, x, y| r.mul(x, y))
    }

    fn kron_with(&self, y: &Self, entry: impl Fn(&RigHandle, &Value, &Value) -> Value) -> Result<Self> {
        self.same_rig(y)?;
        let (jp, j) = (self.rows, self.cols);
        let (kp, k) = (y.rows, y.cols);
        let mut out = Self::zeros(&self.rig, jp * kp, j * k);
        let width = j * k;
        for u in 0..jp {
            for s in 0..kp {
                let row = pair_index(u, s, jp);
                for v in 0..j {
                    for t in 0..k {
                        let col = pair_index(v, t, j);
                        out.entries[row * width + col] = entry(&self.rig, self.get(u, v), y.get(s, t));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether the two Kronecker products agree.
    pub fn commutes_with(&self, y: &Self) -> Result<bool> {
        Ok(self.kron_first(y)? == self.kron_second(y)?)
    }

    /// Every row sums to one. A matrix with rows but no columns is affine
    /// only over the trivial rig.
    pub fn is_affine(&self) -> bool {
        let one = self.rig.one();
        (0..self.rows).all(|i| self.rig.sum(self.row(i)) == one)
    }

    /// Transposition, landing in the opposite rig.
    pub fn transpose_to_opposite(&self) -> Self {
        let op = self.rig.opposite();
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        RigMatrix { rig: op, rows: self.cols, cols: self.rows, entries }
    }

    /// Parses an entries array such as `[[1,2],[3,4]]` over a known rig.
    pub fn entries_from_json(rig: &RigHandle, j: &serde_json::Value) -> Result<Self> {
        let rows = j
            .as_array()
            .ok_or_else(|| structural("matrix entries must be an array of rows"))?;
        let parsed = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| structural("matrix row must be an array"))?
                    .iter()
                    .map(|v| rig.value_from_json(v))
                    .collect::<Result<Vec<Value>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, Vec::len);
        Self::from_rows(rig, cols, parsed)
    }

    /// Parses the full matrix document
    /// `{"rig": <name or table>, "rows": m, "cols": n, "entries": [[...]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum RigSpec {
            Name(String),
            Table(FiniteRig),
        }
        #[derive(Deserialize)]
        struct Doc {
            rig: RigSpec,
            rows: usize,
            cols: usize,
            entries: serde_json::Value,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| structural(format!("bad matrix JSON: {e}")))?;
        let rig = match doc.rig {
            RigSpec::Name(name) => RigHandle::by_name(&name)?,
            RigSpec::Table(t) => RigHandle::from_finite("inline", &t)?,
        };
        let m = Self::entries_from_json(&rig, &doc.entries)?;
        if doc.rows == 0 && m.rows == 0 {
            return Ok(Self::zeros(&rig, 0, doc.cols));
        }
        if (m.rows, m.cols) != (doc.rows, doc.cols) {
            return Err(structural(format!(
                "declared {}x{} but entries are {}x{}",
                doc.rows, doc.cols, m.rows, m.cols
            )));
        }
        Ok(m)
    }

    pub fn entries_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(self.row(i).iter().map(|v| self.rig.value_to_json(v)).collect())
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rig = match self.rig.to_finite_rig() {
            Some(t) if RigHandle::by_name(self.rig.name()).is_err() => serde_json::to_value(t).expect("plain data"),
            _ => serde_json::Value::String(self.rig.name().to_string()),
        };
        serde_json::json!({
            "rig": rig,
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries_json(),
        })
    }
}

impl fmt::Display for RigMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (c, v) in self.row(i).iter().enumerate() {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub fn mat_mul(a: &RigMatrix, b: &RigMatrix) -> Result<RigMatrix> {
    a.mat_mul(b)
}

pub fn kron_first(x: &RigMatrix, y: &RigMatrix) -> Result<RigMatrix> {
    x.kron_first(y)
}

pub fn kron_second(x: &RigMatrix, y: &RigMatrix) -> Result<RigMatrix> {
    x.kron_second(y)
}

pub fn matrices_commute(x: &RigMatrix, y: &RigMatrix) -> Result<bool> {
    x.commutes_with(y)
}

pub fn is_affine_matrix(a: &RigMatrix) -> bool {
    a.is_affine()
}

pub fn transpose_to_opposite(a: &RigMatrix) -> RigMatrix {
    a.transpose_to_opposite()
}
