//! Phase-one simplex for `A x = b, x >= 0` feasibility.
//!
//! Bland's rule is used for both the entering and leaving choice, so the
//! method terminates without cycling. Over an exact field the answer is exact.

use crate::scalar::Field;

/// Returns a feasible `x` for `A x = b, x >= 0`, or `None` if the system is
/// infeasible. `a` is given row-major, every row of length `n`.
pub fn feasible_point<F: Field>(a: &[Vec<F>], b: &[F], n: usize) -> Option<Vec<F>> {
    let m = a.len();
    assert_eq!(b.len(), m, "row count mismatch");
    if m == 0 {
        return Some(vec![F::zero(); n]);
    }
    let width = n + m + 1;
    let rhs = n + m;

    let mut tab: Vec<Vec<F>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "column count mismatch");
        let flip = b[i].is_negative_tol();
        let mut t = vec![F::zero(); width];
        for j in 0..n {
            t[j] = if flip { -row[j].clone() } else { row[j].clone() };
        }
        t[n + i] = F::one();
        t[rhs] = if flip { -b[i].clone() } else { b[i].clone() };
        tab.push(t);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs for minimising the sum of artificials; last entry holds
    // minus the objective value.
    let mut cost = vec![F::zero(); width];
    for t in &tab {
        for j in 0..n {
            cost[j] = cost[j].clone() - t[j].clone();
        }
        cost[rhs] = cost[rhs].clone() - t[rhs].clone();
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative_tol()) {
        let mut leave: Option<(usize, F)> = None;
        for i in 0..m {
            let coef = &tab[i][enter];
            if !coef.is_positive_tol() {
                continue;
            }
            let ratio = tab[i][rhs].clone() / coef.clone();
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        // Phase-one objective is bounded below by zero.
        let (row, _) = leave.expect("unbounded phase-one problem");
        pivot(&mut tab, &mut cost, row, enter);
        basis[row] = enter;
    }

    if (-cost[rhs].clone()).is_positive_tol() {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot<F: Field>(tab: &mut [Vec<F>], cost: &mut [F], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let pivot_row = tab[row].clone();
    for (i, t) in tab.iter_mut().enumerate() {
        if i == row || t[col].is_zero_tol() {
            continue;
        }
        let f = t[col].clone();
        for (v, pv) in t.iter_mut().zip(&pivot_row) {
            *v = v.clone() - f.clone() * pv.clone();
        }
    }
    if !cost[col].is_zero_tol() {
        let f = cost[col].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            *v = v.clone() - f.clone() * pv.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Ratio};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rows(data: &[&[i64]]) -> Vec<Vec<BigRational>> {
        data.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    fn satisfies(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) -> bool {
        x.iter().all(|v| *v >= q(0))
            && a.iter().zip(b).all(|(row, bi)| {
                row.iter().zip(x).fold(q(0), |acc, (c, v)| acc + c * v) == *bi
            })
    }

    #[test]
    fn simple_feasible_system() {
        let a = rows(&[&[1, 1, 0], &[1, -1, 1]]);
        let b = vec![q(2), q(1)];
        let x = feasible_point(&a, &b, 3).expect("feasible");
        assert!(satisfies(&a, &b, &x));
    }

    #[test]
    fn infeasible_sign_system() {
        // x1 + x2 = -1 with x >= 0
        let a = rows(&[&[1, 1]]);
        assert!(feasible_point(&a, &[q(-1)], 2).is_none());
    }

    #[test]
    fn contradictory_rows() {
        let a = rows(&[&[1, 2], &[2, 4]]);
        assert!(feasible_point(&a, &[q(1), q(3)], 2).is_none());
        let x = feasible_point(&a, &[q(1), q(2)], 2).unwrap();
        assert!(satisfies(&a, &[q(1), q(2)], &x));
    }

    #[test]
    fn degenerate_redundant_rows() {
        let a = rows(&[&[1, 1, 1], &[1, 1, 1], &[0, 0, 0]]);
        let b = vec![q(3), q(3), q(0)];
        let x = feasible_point(&a, &b, 3).unwrap();
        assert!(satisfies(&a, &b, &x));
    }

    #[test]
    fn fractional_solution_is_exact() {
        // 3x = 1
        let a = rows(&[&[3]]);
        let x = feasible_point(&a, &[q(1)], 1).unwrap();
        assert_eq!(x[0], BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn machine_rationals_and_floats_agree_with_bigrational() {
        let data: &[&[i64]] = &[&[2, -1, 0, 1], &[-1, 3, 1, 0]];
        let b = [4i64, 5];
        let big = feasible_point(&rows(data), &b.map(q), 4).is_some();
        let small: Vec<Vec<Ratio<i64>>> = data.iter().map(|r| r.iter().map(|&v| Ratio::from_integer(v)).collect()).collect();
        let sb: Vec<Ratio<i64>> = b.iter().map(|&v| Ratio::from_integer(v)).collect();
        let fl: Vec<Vec<f64>> = data.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
        let fb: Vec<f64> = b.iter().map(|&v| v as f64).collect();
        assert_eq!(feasible_point(&small, &sb, 4).is_some(), big);
        assert_eq!(feasible_point(&fl, &fb, 4).is_some(), big);
    }
}
