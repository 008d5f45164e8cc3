//! Brute-force reference computations kept independent of the library:
//! exterior monomials are bitmasks, signs come from popcounts, and ranks from
//! dense elimination over `BigRational`.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Structure constants as `(i, j, k, c)` meaning `[e_i, e_j] += c e_k` for `i < j`.
pub type Brackets = Vec<(usize, usize, usize, i64)>;

pub fn heisenberg_brackets(l: usize, _r: usize) -> Brackets {
    // basis p_1..p_l, q_1..q_l, h, u_1..u_r
    (0..l).map(|j| (j, l + j, 2 * l, 1)).collect()
}

/// Dense matrix of d_k : Λ^k → Λ^{k+1} for the CE differential
/// dα^t = -Σ_{i<j} c_ij^t α^i α^j, rows indexed by (k+1)-subsets.
pub fn ce_matrix(m: usize, brackets: &Brackets, k: usize) -> Vec<Vec<BigRational>> {
    let src: Vec<u32> = (0u32..(1 << m)).filter(|s| s.count_ones() as usize == k).collect();
    let dst: Vec<u32> = (0u32..(1 << m)).filter(|s| s.count_ones() as usize == k + 1).collect();
    let mut mat = vec![vec![BigRational::zero(); src.len()]; dst.len()];
    for (col, &s) in src.iter().enumerate() {
        // walk the factors of s in ascending order
        let mut before = 0u32;
        for t in 0..m {
            if s & (1 << t) == 0 {
                continue;
            }
            let prefix_sign = if before.count_ones().is_multiple_of(2) { 1 } else { -1 };
            let rest = s & !(1 << t);
            for &(i, j, kk, c) in brackets {
                if kk != t {
                    continue;
                }
                if rest & (1 << i) != 0 || rest & (1 << j) != 0 {
                    continue;
                }
                let prefix = s & ((1u32 << t) - 1);
                let suffix = s & !((1u32 << (t + 1)) - 1);
                // α_prefix (-c α^i α^j) α_suffix, then sort the word
                let sign = -c * prefix_sign * sort_sign(prefix, i, j, suffix);
                let target = rest | (1 << i) | (1 << j);
                let row = dst.iter().position(|&x| x == target).unwrap();
                mat[row][col] += BigRational::from_integer(BigInt::from(sign));
            }
            before |= 1 << t;
        }
    }
    mat
}

/// Sign of sorting the word (prefix)(i)(j)(suffix) into ascending order.
fn sort_sign(prefix: u32, i: usize, j: usize, suffix: u32) -> i64 {
    // word as a list
    let mut word: Vec<usize> = Vec::new();
    for b in 0..32 {
        if prefix & (1 << b) != 0 {
            word.push(b);
        }
    }
    word.push(i);
    word.push(j);
    for b in 0..32 {
        if suffix & (1 << b) != 0 {
            word.push(b);
        }
    }
    let mut inversions = 0;
    for a in 0..word.len() {
        for b in a + 1..word.len() {
            if word[a] > word[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn dense_rank(mut mat: Vec<Vec<BigRational>>) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !mat[r][c].is_zero()) else {
            continue;
        };
        mat.swap(rank, p);
        let pivot = mat[rank][c].clone();
        for r in 0..rows {
            if r == rank || mat[r][c].is_zero() {
                continue;
            }
            let f = &mat[r][c] / &pivot;
            for cc in c..cols {
                if mat[rank][cc].is_zero() {
                    continue;
                }
                let delta = &f * &mat[rank][cc];
                mat[r][cc] -= delta;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Betti numbers of the CE complex of the algebra given by `brackets`.
pub fn ce_betti(m: usize, brackets: &Brackets) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=m).map(|k| dense_rank(ce_matrix(m, brackets, k))).collect();
    (0..=m)
        .map(|k| {
            let kernel = binomial(m, k) - ranks[k];
            let image = if k == 0 { 0 } else { ranks[k - 1] };
            kernel - image
        })
        .collect()
}

pub fn ce_betti_heisenberg(l: usize, r: usize) -> Vec<usize> {
    ce_betti(2 * l + 1 + r, &heisenberg_brackets(l, r))
}

/// Betti numbers of the span of the exterior monomials selected by
/// `allowed`, which must be closed under the CE differential.
pub fn ce_subcomplex_betti(m: usize, brackets: &Brackets, allowed: impl Fn(u32) -> bool) -> Vec<usize> {
    let masks = |k: usize| -> Vec<u32> { (0u32..(1 << m)).filter(|s| s.count_ones() as usize == k).collect() };
    let mut ranks = Vec::new();
    let mut dims = Vec::new();
    for k in 0..=m {
        let full = ce_matrix(m, brackets, k);
        let cols: Vec<usize> = masks(k)
            .iter()
            .enumerate()
            .filter(|(_, s)| allowed(**s))
            .map(|(i, _)| i)
            .collect();
        let mut rows = Vec::new();
        for (r, &s) in masks(k + 1).iter().enumerate() {
            if allowed(s) {
                rows.push(cols.iter().map(|&c| full[r][c].clone()).collect::<Vec<_>>());
            } else {
                assert!(
                    cols.iter().all(|&c| full[r][c].is_zero()),
                    "selection is not a subcomplex"
                );
            }
        }
        dims.push(cols.len());
        ranks.push(if cols.is_empty() { 0 } else { dense_rank(rows) });
    }
    (0..=m)
        .map(|k| dims[k] - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
        .collect()
}
