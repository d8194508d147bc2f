//! Closed-form first cohomology on the one-point blow-up, and the
//! vanishing predicates for one and several blown-up points.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::divisor::ToricDivisor;
use crate::error::{Error, Result};
use crate::lattice_fan::BlowupLayout;

/// `C(top, k)` for `top >= 0`; zero when `top < k`.
fn binomial(top: &BigInt, k: usize) -> BigInt {
    if top.is_negative() || *top < BigInt::from(k) {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 1..=k {
        acc = acc * (top - BigInt::from(k) + BigInt::from(j)) / BigInt::from(j);
    }
    acc
}

/// `h^1` of `lambda_0 D_e0 + ... + lambda_n D_en + lambda_{n+1} D_u0` on the
/// one-point blow-up of P^n: the number of `m` in `Z^n` with
/// `lambda_0 < m_1 + ... + m_n < -lambda_{n+1}` and `m_i >= -lambda_i`.
///
/// Shifting `m_i' = m_i + lambda_i >= 0` turns each level `sum m' = s`
/// into `C(s + n - 1, n - 1)` points; the levels telescope to a
/// difference of two binomials.
pub fn h1_closed_form_onept(n: usize, lambda: &[BigInt]) -> Result<BigInt> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    if lambda.len() != n + 2 {
        return Err(Error::DimensionMismatch {
            expected: n + 2,
            found: lambda.len(),
        });
    }
    let shift: BigInt = lambda[1..=n].iter().sum();
    // levels s of sum m' with lambda_0 + shift < s < shift - lambda_{n+1}
    let lo = (&lambda[0] + &shift + 1u32).max(BigInt::zero());
    let hi = &shift - &lambda[n + 1] - 1u32;
    if hi < lo {
        return Ok(BigInt::zero());
    }
    // sum_{s=0}^{S} C(s+n-1, n-1) = C(S+n, n)
    Ok(binomial(&(&hi + n), n) - binomial(&(&lo - 1u32 + n), n))
}

/// Reads `(lambda_0, ..., lambda_n, lambda_{n+1})` off a divisor on the
/// one-point blow-up fan (`lambda_{n+1}` is the coefficient of `u_0`).
pub fn onept_lambda(layout: BlowupLayout, d: &ToricDivisor) -> Result<Vec<BigInt>> {
    if layout.points != 1 {
        return Err(Error::InvalidParams("expected a one-point blow-up".into()));
    }
    if d.num_rays() != layout.num_rays() {
        return Err(Error::DimensionMismatch {
            expected: layout.num_rays(),
            found: d.num_rays(),
        });
    }
    let mut lambda: Vec<BigInt> = (0..=layout.n)
        .map(|j| d.coeff(layout.e(j)).clone())
        .collect();
    lambda.push(d.coeff(layout.u(0)).clone());
    Ok(lambda)
}

/// Vanishing of `h^1(O(-aE) (x) pi^* O(b))` on the one-point blow-up:
/// `a <= 0 or a <= b + 1`.
pub fn onept_vanishing_predicate(a: &BigInt, b: &BigInt) -> bool {
    !a.is_positive() || *a <= b + 1u32
}

/// Vanishing criterion for `q + 1 >= 2` points, read literally: every
/// pairwise sum `a_i + a_j <= b + 1`, and, when exactly one `a_k` is
/// positive, also `a_k <= b + 1`.
pub fn multipoint_vanishing_predicate(a: &[BigInt], b: &BigInt) -> Result<bool> {
    if a.len() < 2 {
        return Err(Error::InvalidParams(
            "the several-point criterion needs at least two points; use onept_vanishing_predicate"
                .into(),
        ));
    }
    let bound = b + 1u32;
    let pairs_ok = (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] + &a[j] <= bound));
    let positive: Vec<&BigInt> = a.iter().filter(|x| x.is_positive()).collect();
    let single_ok = positive.len() != 1 || *positive[0] <= bound;
    Ok(pairs_ok && single_ok)
}

/// The predicate matching the number of points in `a`.
pub fn vanishing_predicate(a: &[BigInt], b: &BigInt) -> Result<bool> {
    match a {
        [] => Err(Error::InvalidParams("no points".into())),
        [a0] => Ok(onept_vanishing_predicate(a0, b)),
        _ => multipoint_vanishing_predicate(a, b),
    }
}
