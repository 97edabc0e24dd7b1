//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Nonzero invariant factors (diagonal of the Smith normal form), in
/// divisibility order. The length of the result is the rank.
#[allow(clippy::needless_range_loop)]
pub fn invariant_factors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = matrix.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut diag = Vec::new();

    for t in 0..rows.min(cols) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return diag;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &m[t][j] * &q;
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for i in t..rows {
                    let v = &m[i][t] * &q;
                    m[i][j] -= v;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block.
            let mut bad_row = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !m[i][j].is_multiple_of(&m[t][t]) {
                        bad_row = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    for j in t..cols {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
    }
    diag
}

/// Rank over the rationals.
#[allow(clippy::needless_range_loop)]
pub fn rational_rank(matrix: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = matrix
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = BigRational::one() / m[rank][c].clone();
        for r in 0..rows {
            if r == rank || m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for k in c..cols {
                let v = &f * &m[rank][k];
                m[r][k] -= v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(data: &[&[i64]]) -> Vec<Vec<BigInt>> {
        data.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    /// gcd of all k x k minors, by brute force.
    fn minor_gcd(m: &[Vec<BigInt>], k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = combos(n - 1, k);
            for mut c in combos(n - 1, k - 1) {
                c.push(n - 1);
                out.push(c);
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in combos(m.len(), k) {
            for cs in combos(m[0].len(), k) {
                let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        g
    }

    #[test]
    fn diagonal_two_two() {
        assert_eq!(invariant_factors(&mat(&[&[2, 0], &[0, 2]])), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn nim_columns_are_unimodular() {
        // columns (1,0), (0,1), (-1,1)
        assert_eq!(invariant_factors(&mat(&[&[1, 0, -1], &[0, 1, 1]])), vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn products_of_invariant_factors_match_minor_gcds() {
        let cases: Vec<Vec<Vec<BigInt>>> = vec![
            mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]),
            mat(&[&[1, 2, 3], &[4, 5, 6]]),
            mat(&[&[6, 10], &[10, 15], &[15, 6]]),
            mat(&[&[0, 0], &[0, 0]]),
            mat(&[&[3, 1, -2, 0], &[-1, 1, 1, 2], &[2, 2, -1, 2]]),
        ];
        for m in cases {
            let f = invariant_factors(&m);
            assert_eq!(f.len(), rational_rank(&m));
            let mut prod = BigInt::one();
            for (k, v) in f.iter().enumerate() {
                prod *= v;
                assert_eq!(prod, minor_gcd(&m, k + 1), "matrix {m:?}");
                if k > 0 {
                    assert!(v.is_multiple_of(&f[k - 1]));
                }
            }
        }
    }

    #[test]
    fn rank_detects_dependence() {
        assert_eq!(rational_rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rational_rank(&mat(&[&[2, 0, 0], &[0, 2, 2]])), 2);
    }
}
