//! Independent oracles shared by the integration tests. None of them call
//! the library routine they are used to check.

#![allow(dead_code)]

use clonelab::{OpTable, RigMatrix, Value};

/// Little-endian digits of `code` in base `k`.
pub fn digits(mut code: usize, k: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = code % k;
            code /= k;
            d
        })
        .collect()
}

pub fn code(digits: &[usize], k: usize) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * k + d)
}

pub fn apply(op: &OpTable, args: &[usize]) -> usize {
    op.outputs()[code(args, op.carrier_size())]
}

/// Direct grid check of the commutation law, enumerating every `j x m` grid.
pub fn naive_commutes(mu: &OpTable, nu: &OpTable) -> bool {
    let k = mu.carrier_size();
    let (j, m) = (mu.arity(), nu.arity());
    let cells = j * m;
    let grids = k.pow(cells as u32);
    (0..grids).all(|g| {
        let flat = digits(g, k, cells);
        let at = |v: usize, t: usize| flat[v * m + t];
        let cols: Vec<usize> = (0..m)
            .map(|t| apply(mu, &(0..j).map(|v| at(v, t)).collect::<Vec<_>>()))
            .collect();
        let rows: Vec<usize> = (0..j)
            .map(|v| apply(nu, &(0..m).map(|t| at(v, t)).collect::<Vec<_>>()))
            .collect();
        apply(nu, &cols) == apply(mu, &rows)
    })
}

/// Every table of arity `n` on `k` points, in code order.
pub fn all_ops(k: usize, n: usize) -> Vec<OpTable> {
    let len = k.pow(n as u32);
    let count = k.pow(len as u32);
    (0..count)
        .map(|c| OpTable::new(k, n, digits(c, k, len)).unwrap())
        .collect()
}

/// Exhaustive commutant: filter every table by the grid oracle. Sorted.
pub fn naive_commutant(k: usize, gens: &[OpTable], n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = all_ops(k, n)
        .into_iter()
        .filter(|f| gens.iter().all(|g| naive_commutes(f, g)))
        .map(|f| f.outputs().to_vec())
        .collect();
    out.sort();
    out
}

/// Direct definition for maps `mu: R^n -> R^m`, `nu: R^n' -> R^m'` given by
/// component lists: for every `n x n'` argument matrix, applying `mu` down
/// columns then `nu` along rows must equal the reverse order.
pub fn naive_multi_commutes(k: usize, n: usize, mu: &[OpTable], np: usize, nu: &[OpTable]) -> bool {
    let cells = n * np;
    (0..k.pow(cells as u32)).all(|g| {
        let flat = digits(g, k, cells);
        let x = |v: usize, t: usize| flat[v * np + t];
        // mu on each column: m x n'
        let a: Vec<Vec<usize>> = mu
            .iter()
            .map(|c| (0..np).map(|t| apply(c, &(0..n).map(|v| x(v, t)).collect::<Vec<_>>())).collect())
            .collect();
        let lhs: Vec<Vec<usize>> = a
            .iter()
            .map(|row| nu.iter().map(|c| apply(c, row)).collect())
            .collect();
        // nu on each row: n x m'
        let b: Vec<Vec<usize>> = (0..n)
            .map(|v| nu.iter().map(|c| apply(c, &(0..np).map(|t| x(v, t)).collect::<Vec<_>>())).collect())
            .collect();
        let rhs: Vec<Vec<usize>> = mu
            .iter()
            .map(|c| (0..nu.len()).map(|s| apply(c, &b.iter().map(|r| r[s]).collect::<Vec<_>>())).collect())
            .collect();
        lhs == rhs
    })
}

/// Closure by explicit terms: start from projections and repeatedly apply
/// every generator to every tuple of known terms until nothing new appears.
pub fn term_closure(k: usize, gens: &[OpTable], n: usize) -> Vec<Vec<usize>> {
    let len = k.pow(n as u32);
    let proj = |i: usize| (0..len).map(|x| digits(x, k, n)[i]).collect::<Vec<usize>>();
    let mut known: Vec<Vec<usize>> = (0..n).map(proj).collect();
    known.sort();
    known.dedup();
    loop {
        let mut next = known.clone();
        for g in gens {
            let m = g.arity();
            let tuples = known.len().pow(m as u32);
            for t in 0..tuples {
                let idx = digits(t, known.len().max(1), m);
                let table: Vec<usize> = (0..len)
                    .map(|x| apply(g, &idx.iter().map(|&i| known[i][x]).collect::<Vec<_>>()))
                    .collect();
                next.push(table);
            }
        }
        next.sort();
        next.dedup();
        if next == known {
            return known;
        }
        known = next;
    }
}

/// Integer matrices modulo `m` as plain nested vectors.
pub type IntMatrix = Vec<Vec<u64>>;

pub fn int_mul(a: &IntMatrix, b: &IntMatrix, cols: usize, m: u64) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().enumerate().map(|(t, &x)| x * b[t][j]).sum::<u64>() % m)
                .collect()
        })
        .collect()
}

/// `(j' * Y) . (X * k)`: the first Kronecker product as a composite of two
/// block matrices, with pairs `<a, b>` indexed `a + |A| b`.
pub fn kron_first_blocks(x: &IntMatrix, jp: usize, j: usize, y: &IntMatrix, kp: usize, k: usize, m: u64) -> IntMatrix {
    let mut xk = vec![vec![0; j * k]; jp * k];
    for u in 0..jp {
        for t in 0..k {
            for v in 0..j {
                xk[u + jp * t][v + j * t] = x[u][v];
            }
        }
    }
    let mut jy = vec![vec![0; jp * k]; jp * kp];
    for u in 0..jp {
        for s in 0..kp {
            for t in 0..k {
                jy[u + jp * s][u + jp * t] = y[s][t];
            }
        }
    }
    int_mul(&jy, &xk, j * k, m)
}

/// `(X * k') . (j * Y)`: the second Kronecker product as a block composite.
pub fn kron_second_blocks(x: &IntMatrix, jp: usize, j: usize, y: &IntMatrix, kp: usize, k: usize, m: u64) -> IntMatrix {
    let mut xk = vec![vec![0; j * kp]; jp * kp];
    for u in 0..jp {
        for s in 0..kp {
            for v in 0..j {
                xk[u + jp * s][v + j * s] = x[u][v];
            }
        }
    }
    let mut jy = vec![vec![0; j * k]; j * kp];
    for v in 0..j {
        for s in 0..kp {
            for t in 0..k {
                jy[v + j * s][v + j * t] = y[s][t];
            }
        }
    }
    int_mul(&xk, &jy, j * k, m)
}

pub fn as_ints(a: &RigMatrix) -> IntMatrix {
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|v| match v {
                    Value::Elem(e) => *e as u64,
                    other => panic!("expected a carrier element, got {other}"),
                })
                .collect()
        })
        .collect()
}

/// `x -> sum_i w_i x_i mod m` on `Z/m`, directly.
pub fn linear_table(w: &[usize], m: usize) -> Vec<usize> {
    let n = w.len();
    (0..m.pow(n as u32))
        .map(|c| digits(c, m, n).iter().zip(w).map(|(x, wi)| x * wi).sum::<usize>() % m)
        .collect()
}

/// `x -> w_0 + sum_i x_i w_i mod m` on `Z/m`, deduplicated and sorted.
pub fn pointed_slice(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..m.pow(n as u32 + 1))
        .map(|c| {
            let w = digits(c, m, n + 1);
            linear_table(&w[1..], m).into_iter().map(|y| (y + w[0]) % m).collect()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Tables `x -> sum_i w_i x_i` over `Z/m` with `sum_i w_i = 1`.
pub fn affine_slice(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..m.pow(n as u32))
        .map(|c| digits(c, m, n))
        .filter(|w| w.iter().sum::<usize>() % m == 1 % m)
        .map(|w| linear_table(&w, m))
        .collect();
    out.sort();
    out
}

pub fn outputs(ops: &[OpTable]) -> Vec<Vec<usize>> {
    ops.iter().map(|o| o.outputs().to_vec()).collect()
}

pub fn join2() -> OpTable {
    OpTable::new(2, 2, vec![0, 1, 1, 1]).unwrap()
}

pub fn meet2() -> OpTable {
    OpTable::new(2, 2, vec![0, 0, 0, 1]).unwrap()
}

pub fn const2(c: usize) -> OpTable {
    OpTable::new(2, 0, vec![c]).unwrap()
}
