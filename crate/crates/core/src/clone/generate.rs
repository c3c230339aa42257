//! Closure of a generator set under superposition, one arity at a time.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::optable::OpTable;
use crate::par::map_range;

use super::{CloneSlice, GeneratorSet, SearchOptions};

/// The arity-`n` slice of the clone generated by `gens`.
pub fn generate_clone(gens: &GeneratorSet, n: usize) -> Result<CloneSlice> {
    generate_clone_with(gens, n, &SearchOptions::default())
}

/// As [`generate_clone`]; the budget bounds the number of compositions tried.
pub fn generate_clone_with(gens: &GeneratorSet, n: usize, opts: &SearchOptions) -> Result<CloneSlice> {
    let k = gens.carrier_size();
    let mut found: Vec<OpTable> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut admit = |op: OpTable, found: &mut Vec<OpTable>| {
        if seen.insert(op.outputs().to_vec()) {
            found.push(op);
        }
    };

    for i in 0..n {
        admit(OpTable::projection(n, i, k)?, &mut found);
    }
    for g in gens.generators().iter().filter(|g| g.arity() == 0) {
        admit(g.compose_at(n, &[])?, &mut found);
    }

    let mut spent: u64 = 0;
    let mut frontier = 0;
    loop {
        let end = found.len();
        let mut fresh = Vec::new();
        for g in gens.generators().iter().filter(|g| g.arity() > 0) {
            let m = g.arity();
            let all = checked_power(end, m);
            let old = checked_power(frontier, m);
            let work = all.zip(old).map(|(a, o)| (a - o) as u64);
            spent = work
                .and_then(|w| spent.checked_add(w))
                .filter(|&s| s <= opts.budget)
                .ok_or(Error::Resource { visited: spent, budget: opts.budget })?;
            let all = all.unwrap_or(0);

            let pool = &found[..end];
            let results = map_range(opts.execution, 0..all, |mut code| {
                let mut idx = Vec::with_capacity(m);
                for _ in 0..m {
                    idx.push(code % end);
                    code /= end;
                }
                if idx.iter().all(|&i| i < frontier) {
                    return None;
                }
                let inners: Vec<OpTable> = idx.iter().map(|&i| pool[i].clone()).collect();
                Some(g.compose_at(n, &inners))
            });
            for r in results.into_iter().flatten() {
                fresh.push(r?);
            }
        }
        for op in fresh {
            admit(op, &mut found);
        }
        if found.len() == end {
            break;
        }
        frontier = end;
    }
    CloneSlice::new(k, n, found)
}

fn checked_power(base: usize, exp: usize) -> Option<usize> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::par::{for_each_tuple, Execution};

    /// Brute force: every op reachable by explicit term trees of bounded depth.
    fn by_terms(gens: &GeneratorSet, n: usize, depth: usize) -> Vec<Vec<usize>> {
        let k = gens.carrier_size();
        let mut level: Vec<OpTable> = (0..n).map(|i| OpTable::projection(n, i, k).unwrap()).collect();
        for _ in 0..depth {
            let mut next = level.clone();
            for g in gens.generators() {
                for_each_tuple(level.len(), g.arity(), |idx| {
                    let inners: Vec<_> = idx.iter().map(|&i| level[i].clone()).collect();
                    next.push(g.compose_at(n, &inners).unwrap());
                });
            }
            next.sort();
            next.dedup();
            level = next;
        }
        level.into_iter().map(|o| o.outputs().to_vec()).collect()
    }

    #[test]
    fn agrees_with_term_enumeration() {
        let maj = OpTable::from_fn(2, 3, |x| usize::from(x[0] + x[1] + x[2] >= 2)).unwrap();
        let not = OpTable::from_fn(2, 1, |x| 1 - x[0]).unwrap();
        let g = GeneratorSet::new(2, vec![maj, not]).unwrap();
        for n in 1..=2 {
            let s = generate_clone(&g, n).unwrap();
            let outs: Vec<_> = s.ops().iter().map(|o| o.outputs().to_vec()).collect();
            assert_eq!(outs, by_terms(&g, n, 4));
        }
    }

    #[test]
    fn modes_agree() {
        let sub = OpTable::from_fn(3, 3, |x| (x[0] + 3 - x[1] + x[2]) % 3).unwrap();
        let g = GeneratorSet::new(3, vec![sub]).unwrap();
        let a = generate_clone_with(&g, 2, &SearchOptions { budget: u64::MAX, execution: Execution::Sequential }).unwrap();
        let b = generate_clone_with(&g, 2, &SearchOptions { budget: u64::MAX, execution: Execution::Parallel }).unwrap();
        assert_eq!(a, b);
        // affine maps a x + b y with a + b = 1 over Z/3
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn budget_applies() {
        let join = OpTable::from_fn(2, 2, |x| x[0] | x[1]).unwrap();
        let g = GeneratorSet::new(2, vec![join]).unwrap();
        let opts = SearchOptions { budget: 3, execution: Execution::Sequential };
        assert!(matches!(generate_clone_with(&g, 3, &opts), Err(Error::Resource { .. })));
    }
}
