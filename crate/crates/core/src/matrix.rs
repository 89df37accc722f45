//! Exact integer and rational linear algebra on tiny dense matrices.
//!
//! Everything here runs over arbitrary-precision integers or rationals; the
//! matrices involved are at most (rays) x (dimension) sized, so correctness is
//! worth far more than speed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMat = Vec<Vec<BigInt>>;

pub fn int_mat_from_i64(rows: &[Vec<i64>]) -> IntMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Determinant by cofactor expansion; fine for the d <= 6 matrices we see.
pub fn det(m: &IntMat) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = BigInt::zero();
            for k in 0..n {
                if m[0][k].is_zero() {
                    continue;
                }
                let minor: IntMat = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&j| j != k)
                            .map(|j| m[i][j].clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][k] * det(&minor);
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Solve M x = rhs for square integer M with det ±1 (Cramer). Returns None if
/// the determinant is not a unit.
pub fn solve_unimodular(m: &IntMat, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = m.len();
    let d = det(m);
    if !d.is_one() && d != BigInt::from(-1) {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let mut mc = m.clone();
        for (row, v) in rhs.iter().enumerate() {
            mc[row][col] = v.clone();
        }
        out.push(det(&mc) / &d);
    }
    Some(out)
}

/// Diagonalization U * A * V = D with only U tracked. The returned diagonal
/// carries the elementary divisors up to units; `rank` is the number of
/// nonzero diagonal entries.
pub struct LeftDiagonalization {
    pub diag: Vec<BigInt>,
    pub left: IntMat,
    pub rank: usize,
}

/// Smith-style reduction of an (n x d) integer matrix, tracking the left
/// transform only. Column operations act on the right and never touch U.
pub fn diagonalize_with_left(a: &IntMat) -> LeftDiagonalization {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut t = 0usize;
    while t < rows.min(cols) {
        // pick the absolutely smallest nonzero entry of the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        if pj != t {
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
        }
        // reduce the pivot column (row ops, tracked) and pivot row (col ops)
        let mut dirty = false;
        for i in 0..rows {
            if i == t || m[i][t].is_zero() {
                continue;
            }
            let q = &m[i][t] / &m[t][t];
            if !q.is_zero() {
                for j in 0..cols {
                    let s = &q * &m[t][j];
                    m[i][j] -= s;
                }
                for j in 0..rows {
                    let s = &q * &u[t][j];
                    u[i][j] -= s;
                }
            }
            if !m[i][t].is_zero() {
                dirty = true;
            }
        }
        for j in 0..cols {
            if j == t || m[t][j].is_zero() {
                continue;
            }
            let q = &m[t][j] / &m[t][t];
            if !q.is_zero() {
                for row in m.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
            }
            if !m[t][j].is_zero() {
                dirty = true;
            }
        }
        if !dirty {
            t += 1;
        }
    }
    let rank = (0..rows.min(cols)).take_while(|&i| !m[i][i].is_zero()).count();
    LeftDiagonalization {
        diag: (0..rows.min(cols)).map(|i| m[i][i].clone()).collect(),
        left: u,
        rank,
    }
}

pub type RatMat = Vec<Vec<BigRational>>;

/// Gaussian elimination solve for a square rational system; None when the
/// matrix is singular.
pub fn solve_rational(a: &RatMat, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, piv);
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for k in c..=n {
                    let s = &f * &m[c][k];
                    m[i][k] -= s;
                }
            }
        }
    }
    Some((0..n).map(|i| &m[i][n] / &m[i][i]).collect())
}

/// Rank of a set of rational vectors.
pub fn rank_rational(vecs: &[Vec<BigRational>]) -> usize {
    if vecs.is_empty() {
        return 0;
    }
    let cols = vecs[0].len();
    let mut m: Vec<Vec<BigRational>> = vecs.to_vec();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for k in c..cols {
                    let s = &f * &m[rank][k];
                    m[i][k] -= s;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Rank over GF(2) of a small 0/1 matrix given as row bitmasks.
pub fn rank_mod2(rows: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0usize;
    for &row in rows {
        let mut v = row;
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                rank += 1;
                break;
            }
            v ^= basis[lead];
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(rows: &[&[i64]]) -> IntMat {
        int_mat_from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn det_small() {
        assert_eq!(det(&bi(&[&[1, 0], &[0, 1]])), BigInt::from(1));
        assert_eq!(det(&bi(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            det(&bi(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]])),
            BigInt::from(24)
        );
    }

    #[test]
    fn unimodular_solve() {
        let m = bi(&[&[1, 0], &[1, 1]]);
        let rhs = vec![BigInt::from(1), BigInt::from(1)];
        let x = solve_unimodular(&m, &rhs).unwrap();
        assert_eq!(x, vec![BigInt::from(1), BigInt::from(0)]);
        let sing = bi(&[&[2, 0], &[0, 1]]);
        assert!(solve_unimodular(&sing, &rhs).is_none());
    }

    #[test]
    fn diagonalize_projective_plane_rays() {
        // ray matrix of P^2; cokernel is Z, diag all units
        let h = bi(&[&[1, 0], &[0, 1], &[-1, -1]]);
        let d = diagonalize_with_left(&h);
        assert_eq!(d.rank, 2);
        for v in &d.diag {
            assert_eq!(v.abs(), BigInt::one());
        }
        // bottom row of U kills the column space: u_bottom * H = 0
        let bottom = &d.left[2];
        for col in 0..2 {
            let s: BigInt = (0..3).map(|i| &bottom[i] * &h[i][col]).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn diagonalize_detects_torsion() {
        // columns span an index-2 sublattice
        let h = bi(&[&[2], &[0]]);
        let d = diagonalize_with_left(&h);
        assert_eq!(d.rank, 1);
        assert_eq!(d.diag[0].abs(), BigInt::from(2));
    }

    #[test]
    fn mod2_rank() {
        assert_eq!(rank_mod2(&[0b11, 0b01]), 2);
        assert_eq!(rank_mod2(&[0b11, 0b11]), 1);
        assert_eq!(rank_mod2(&[0b0]), 0);
    }
}
