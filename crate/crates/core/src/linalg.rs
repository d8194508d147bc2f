//! Exact linear algebra over the integers and the rationals.
//!
//! Everything here works on `BigInt` / `BigRational` and never touches
//! floating point. Matrices are plain row-major `Vec<Vec<_>>`; sizes in
//! this crate stay small (a handful of rows), so clarity wins over
//! clever storage.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Classical adjugate (transpose of the cofactor matrix).
pub fn adjugate(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = rows.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = rows
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let cof = determinant(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

/// Outcome of an exact integer solve of a square system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerSolve {
    Unique(Vec<BigInt>),
    /// The rational solution exists but is not integral.
    NonIntegral,
    Singular,
}

/// Solves `rows · x = rhs` for a square matrix via `adj(A)·rhs / det(A)`.
pub fn solve_integer(rows: &[Vec<BigInt>], rhs: &[BigInt]) -> IntegerSolve {
    let det = determinant(rows);
    if det.is_zero() {
        return IntegerSolve::Singular;
    }
    let adj = adjugate(rows);
    let mut x = Vec::with_capacity(rows.len());
    for adj_row in &adj {
        let num: BigInt = adj_row.iter().zip(rhs).map(|(a, b)| a * b).sum();
        let (q, r) = num.div_rem(&det);
        if !r.is_zero() {
            return IntegerSolve::NonIntegral;
        }
        x.push(q);
    }
    IntegerSolve::Unique(x)
}

/// Solves a square system over the rationals; `None` when singular.
pub fn solve_square_rational(rows: &[Vec<BigInt>], rhs: &[BigInt]) -> Option<Vec<BigRational>> {
    let det = determinant(rows);
    if det.is_zero() {
        return None;
    }
    let adj = adjugate(rows);
    Some(
        adj.iter()
            .map(|adj_row| {
                let num: BigInt = adj_row.iter().zip(rhs).map(|(a, b)| a * b).sum();
                BigRational::new(num, det.clone())
            })
            .collect(),
    )
}

/// Solves `a · x = b` (any shape) over the rationals by Gauss–Jordan
/// elimination. Returns one solution (free variables set to zero) when the
/// system is consistent.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Rank over the rationals, computed by fraction-free elimination on
/// integer rows (rows are divided by their content to keep entries small).
pub fn rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                row[j] = &row[j] * &pivot_row[c] - &f * &pivot_row[j];
            }
            let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !g.is_zero() && !g.is_one() {
                for v in row.iter_mut() {
                    *v = &*v / &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Decides whether `{x : a·x = b, x >= 0}` is nonempty.
///
/// Phase one of the simplex method over `BigRational`, with Bland's rule
/// for entering and leaving variables, so it always terminates.
pub fn feasible_nonnegative(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let k = a[0].len();
    let width = k + m;
    // tableau rows: [original | artificial | rhs]
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs.is_negative();
        let mut r: Vec<BigRational> = row
            .iter()
            .map(|v| if flip { -v } else { v.clone() })
            .collect();
        r.extend((0..m).map(|j| {
            if j == i {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        r.push(if flip { -rhs } else { rhs.clone() });
        t.push(r);
    }
    let mut basis: Vec<usize> = (k..width).collect();

    loop {
        // reduced cost of column j: c_j - sum_i c_{B_i} t_ij, c = 1 on artificials
        let entering = (0..width).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut d = if j >= k {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            for (i, &bv) in basis.iter().enumerate() {
                if bv >= k {
                    d -= &t[i][j];
                }
            }
            d.is_negative()
        });
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][width] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // phase one is bounded below by zero, so an improving column always has a pivot row
        let Some((p, _)) = leave else { break };
        let inv = t[p][e].recip();
        for v in t[p].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m {
            if i != p && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..=width {
                    let sub = &f * &t[p][j];
                    t[i][j] -= sub;
                }
            }
        }
        basis[p] = e;
    }
    basis
        .iter()
        .enumerate()
        .all(|(i, &bv)| bv < k || t[i][width].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn rats(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect()
            })
            .collect()
    }

    fn rvec(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(&ints(&[&[2, 1], &[1, 1]])), BigInt::from(1));
        assert_eq!(determinant(&ints(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])),
            BigInt::from(0)
        );
        assert_eq!(
            determinant(&ints(&[&[0, 2, 1], &[3, 0, 1], &[1, 1, 0]])),
            BigInt::from(5)
        );
    }

    #[test]
    fn adjugate_inverts_unimodular() {
        let a = ints(&[&[-1, -1, -1], &[0, 1, 0], &[0, 0, 1]]);
        let adj = adjugate(&a);
        let det = determinant(&a);
        for i in 0..3 {
            for j in 0..3 {
                let v: BigInt = (0..3).map(|k| &a[i][k] * &adj[k][j]).sum();
                let expect = if i == j { det.clone() } else { BigInt::zero() };
                assert_eq!(v, expect);
            }
        }
    }

    #[test]
    fn integer_solve_reports_non_integral() {
        let a = ints(&[&[2, 0], &[0, 1]]);
        let rhs = vec![BigInt::from(1), BigInt::from(3)];
        assert_eq!(solve_integer(&a, &rhs), IntegerSolve::NonIntegral);
        let rhs = vec![BigInt::from(4), BigInt::from(3)];
        assert_eq!(
            solve_integer(&a, &rhs),
            IntegerSolve::Unique(vec![BigInt::from(2), BigInt::from(3)])
        );
        assert_eq!(
            solve_integer(&ints(&[&[1, 1], &[2, 2]]), &rhs),
            IntegerSolve::Singular
        );
    }

    #[test]
    fn rational_solve_overdetermined() {
        let a = rats(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve_rational(&a, &rvec(&[1, 2, 3])), Some(rvec(&[1, 2])));
        assert_eq!(solve_rational(&a, &rvec(&[1, 2, 4])), None);
    }

    #[test]
    fn rank_cases() {
        assert_eq!(rank(ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank(ints(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(ints(&[&[1, -1, 0], &[0, 1, -1], &[-1, 0, 1]])), 2);
        assert_eq!(rank(vec![]), 0);
    }

    #[test]
    fn feasibility_basic() {
        // x + y = 1, x - y = 0 -> (1/2, 1/2)
        assert!(feasible_nonnegative(
            &rats(&[&[1, 1], &[1, -1]]),
            &rvec(&[1, 0])
        ));
        // x + y = -1 has no nonnegative solution
        assert!(!feasible_nonnegative(&rats(&[&[1, 1]]), &rvec(&[-1])));
        // x - y = -2, x + y = 1 -> y = 3/2, x = -1/2: infeasible
        assert!(!feasible_nonnegative(
            &rats(&[&[1, -1], &[1, 1]]),
            &rvec(&[-2, 1])
        ));
        // degenerate redundant rows
        assert!(feasible_nonnegative(
            &rats(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]),
            &rvec(&[2, 2, 0])
        ));
    }
}
