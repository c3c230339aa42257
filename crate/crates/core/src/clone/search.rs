//! Backtracking search for the operations commuting with a generator set.
//!
//! Output positions are filled in code order. Each commutation constraint
//! `g(f[p_0], ..., f[p_{m-1}]) = f[q]` is examined once its last input
//! position `max(p)` is filled: it is checked when `f[q]` is known and
//! otherwise forces `f[q]`.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{parameter, Error, Result};
use crate::optable::{decode_tuple, table_len, OpTable, MAX_TABLE_LEN};
use crate::par::{for_each_tuple, map_slice, Execution};

use super::{CloneSlice, GeneratorSet};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
const BUDGET_ENV: &str = "CLONELAB_BUDGET";
const UNSET: usize = usize::MAX;
const MAX_FLUSH: u64 = 1024;
const MIN_PREFIXES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Upper bound on visited search nodes.
    pub budget: u64,
    pub execution: Execution,
}

impl Default for SearchOptions {
    /// Budget from `CLONELAB_BUDGET` when set and valid, else [`DEFAULT_BUDGET`].
    fn default() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        SearchOptions { budget, execution: Execution::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantResult {
    pub slice: CloneSlice,
    /// Search nodes visited; independent of the execution mode.
    pub visited: u64,
}

/// Constraints grouped by trigger position, stored flat as
/// `[generator, q, p_0, ..., p_{m-1}]`.
struct Constraints {
    start: Vec<usize>,
    data: Vec<u32>,
}

impl Constraints {
    fn build(gens: &[&OpTable], k: usize, n: usize, len: usize) -> Result<Self> {
        let digits: Vec<Vec<usize>> = (0..len).map(|c| decode_tuple(c, k, n)).collect();
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); len];
        let mut row = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            let m = g.arity();
            for_each_tuple(len, m, |ps| {
                let q = (0..n).rev().fold(0, |acc, v| {
                    row.clear();
                    row.extend(ps.iter().map(|&p| digits[p][v]));
                    acc * k + g.eval(&row)
                });
                let trigger = ps.iter().copied().max().unwrap_or(0);
                let b = &mut buckets[trigger];
                b.push(gi as u32);
                b.push(q as u32);
                b.extend(ps.iter().map(|&p| p as u32));
            });
        }
        let mut start = Vec::with_capacity(len + 1);
        let mut data = Vec::new();
        for b in buckets {
            start.push(data.len());
            data.extend(b);
        }
        start.push(data.len());
        if data.len() > MAX_TABLE_LEN * 4 {
            return Err(parameter("commutant constraint system too large"));
        }
        Ok(Constraints { start, data })
    }
}

struct Searcher<'a> {
    k: usize,
    gens: &'a [&'a OpTable],
    cons: &'a Constraints,
    budget: u64,
    total: &'a AtomicU64,
    pending: u64,
    flush_every: u64,
    aborted: bool,
    f: Vec<usize>,
    trail: Vec<usize>,
}

impl Searcher<'_> {
    fn tick(&mut self) {
        self.pending += 1;
        if self.pending >= self.flush_every {
            self.flush();
        }
    }

    fn flush(&mut self) {
        let now = self.total.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.pending = 0;
        if now > self.budget {
            self.aborted = true;
        }
    }

    fn propagate(&mut self, i: usize) -> bool {
        let (lo, hi) = (self.cons.start[i], self.cons.start[i + 1]);
        let mut at = lo;
        while at < hi {
            let g = self.gens[self.cons.data[at] as usize];
            let q = self.cons.data[at + 1] as usize;
            let m = g.arity();
            let ps = &self.cons.data[at + 2..at + 2 + m];
            at += 2 + m;
            let code = ps.iter().rev().fold(0, |acc, &p| acc * self.k + self.f[p as usize]);
            let lhs = g.eval_code(code);
            match self.f[q] {
                UNSET => {
                    self.f[q] = lhs;
                    self.trail.push(q);
                }
                v if v != lhs => return false,
                _ => {}
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let q = self.trail.pop().unwrap();
            self.f[q] = UNSET;
        }
    }

    fn dfs(&mut self, i: usize, limit: usize, sink: &mut dyn FnMut(&[usize])) {
        if self.aborted {
            return;
        }
        if i == limit {
            sink(&self.f);
            return;
        }
        let mark = self.trail.len();
        if self.f[i] != UNSET {
            self.tick();
            if self.propagate(i) {
                self.dfs(i + 1, limit, sink);
            }
            self.undo(mark);
            return;
        }
        for c in 0..self.k {
            self.tick();
            if self.aborted {
                break;
            }
            self.f[i] = c;
            if self.propagate(i) {
                self.dfs(i + 1, limit, sink);
            }
            self.undo(mark);
        }
        self.f[i] = UNSET;
    }
}

/// The arity-`n` slice of the commutant of `gens`: every operation of arity
/// `n` commuting with each generator.
pub fn commutant(gens: &GeneratorSet, n: usize, opts: &SearchOptions) -> Result<CommutantResult> {
    let k = gens.carrier_size();
    let len = table_len(k, n)?;
    let budget = opts.budget;
    let resource = |visited| Error::Resource { visited, budget };

    let mut grids: u64 = 0;
    for g in gens.generators().iter().filter(|g| g.arity() > 0) {
        let count = u32::try_from(g.arity())
            .ok()
            .and_then(|m| (len as u64).checked_pow(m))
            .ok_or_else(|| resource(u64::MAX))?;
        grids = grids.saturating_add(count);
    }
    if grids > budget {
        return Err(resource(grids));
    }

    let empty = |visited| -> Result<CommutantResult> {
        Ok(CommutantResult { slice: CloneSlice::new(k, n, Vec::new())?, visited })
    };
    let mut f = vec![UNSET; len];
    let diag_stride = (0..n).fold(0, |acc, _| acc * k + 1);
    for g in gens.generators().iter().filter(|g| g.arity() == 0) {
        let c = g.eval_code(0);
        let at = c * diag_stride;
        if f[at] != UNSET && f[at] != c {
            return empty(0);
        }
        f[at] = c;
    }

    let positive: Vec<&OpTable> = gens.generators().iter().filter(|g| g.arity() > 0).collect();
    let cons = Constraints::build(&positive, k, n, len)?;
    let total = AtomicU64::new(0);
    let flush_every = (budget / 1024).clamp(1, MAX_FLUSH);
    let searcher = |f: Vec<usize>| Searcher {
        k,
        gens: &positive,
        cons: &cons,
        budget,
        total: &total,
        pending: 0,
        flush_every,
        aborted: total.load(Ordering::Relaxed) > budget,
        f,
        trail: Vec::new(),
    };

    let mut depth = 0;
    let mut width = 1usize;
    while depth < len && width < MIN_PREFIXES {
        depth += 1;
        width = width.saturating_mul(k);
    }
    let mut prefixes = Vec::new();
    {
        let mut s = searcher(f);
        s.dfs(0, depth, &mut |f: &[usize]| prefixes.push(f.to_vec()));
        s.flush();
    }

    let found: Vec<Vec<Vec<usize>>> = map_slice(opts.execution, &prefixes, |prefix| {
        let mut s = searcher(prefix.clone());
        let mut out = Vec::new();
        s.dfs(depth, len, &mut |f: &[usize]| out.push(f.to_vec()));
        s.flush();
        out
    });

    let visited = total.load(Ordering::Relaxed);
    if visited > budget {
        return Err(resource(visited));
    }
    let ops = found
        .into_iter()
        .flatten()
        .map(|outputs| OpTable::new(k, n, outputs))
        .collect::<Result<Vec<_>>>()?;
    Ok(CommutantResult { slice: CloneSlice::new(k, n, ops)?, visited })
}
