use num_bigint::BigInt;

use crate::matrix::ExactMatrix;

fn signature(m: &ExactMatrix, v: usize) -> (BigInt, Vec<BigInt>, Vec<BigInt>) {
    let mut row = m.row(v).to_vec();
    let mut col = m.column(v);
    row.sort();
    col.sort();
    (m.get(v, v).clone(), row, col)
}

/// A permutation `π` with `m[i][j] = n[π(i)][π(j)]` for all `i, j`, i.e.
/// `m = Pᵀ·n·P` for `P = ExactMatrix::permutation(π)`. Among all such
/// permutations the lexicographically least is returned. Matrices of
/// different shapes are simply not isomorphic.
pub fn isomorphic_stationary(m: &ExactMatrix, n: &ExactMatrix) -> Option<Vec<usize>> {
    if !m.is_square() || !n.is_square() || m.rows() != n.rows() {
        return None;
    }
    let size = m.rows();
    let sig_m: Vec<_> = (0..size).map(|v| signature(m, v)).collect();
    let sig_n: Vec<_> = (0..size).map(|v| signature(n, v)).collect();
    let mut a = sig_m.clone();
    let mut b = sig_n.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let mut perm = Vec::with_capacity(size);
    let mut used = vec![false; size];
    extend(m, n, &sig_m, &sig_n, &mut perm, &mut used).then_some(perm)
}

fn extend(
    m: &ExactMatrix,
    n: &ExactMatrix,
    sig_m: &[(BigInt, Vec<BigInt>, Vec<BigInt>)],
    sig_n: &[(BigInt, Vec<BigInt>, Vec<BigInt>)],
    perm: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let i = perm.len();
    if i == used.len() {
        return true;
    }
    for cand in 0..used.len() {
        if used[cand] || sig_m[i] != sig_n[cand] {
            continue;
        }
        let consistent = perm.iter().enumerate().all(|(k, &pk)| {
            m.get(i, k) == n.get(cand, pk) && m.get(k, i) == n.get(pk, cand)
        });
        if !consistent {
            continue;
        }
        perm.push(cand);
        used[cand] = true;
        if extend(m, n, sig_m, sig_n, perm, used) {
            return true;
        }
        used[cand] = false;
        perm.pop();
    }
    false
}
