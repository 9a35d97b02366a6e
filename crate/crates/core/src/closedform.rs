//! Closed-form generating functions: the second, independent route to the
//! Poincaré polynomials.
//!
//! Degrees 2 and 3 are rational functions in `q` times the Grassmannian
//! polynomial `P_G`. The whole numerator is multiplied out before one exact
//! division, so a nonzero remainder is a genuine failure of the formula.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qpoly::{qbinomial, qbinomial_or_zero, QPolynomial};

/// Coefficients of `F_1 .. F_4`, ascending from `q^0`.
pub const F1: [i64; 12] = [1, 0, 2, 3, 3, -1, 1, -3, -3, -2, 0, -1];
pub const F2: [i64; 8] = [1, 6, 3, 2, -2, -3, -6, -1];
pub const F3: [i64; 8] = [1, 0, 5, 2, -2, -5, 0, -1];
pub const F4: [i64; 8] = [2, 0, 3, 1, -1, -3, 0, -2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormResult {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub numerator: QPolynomial,
    pub denominator: QPolynomial,
    pub poincare: QPolynomial,
}

fn q(e: i64) -> QPolynomial {
    QPolynomial::q_pow(e)
}

fn one_minus(e: i64) -> QPolynomial {
    QPolynomial::one_minus_q_pow(e)
}

fn one_plus(e: i64) -> QPolynomial {
    QPolynomial::one() + q(e)
}

fn check_pair(k: usize, n: usize) -> Result<(i64, i64)> {
    if k == 0 || k >= n {
        return Err(Error::domain(format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    Ok((k as i64, n as i64))
}

/// `prod_{i<=n} (1 - q^i) / (prod_{i<=n-k} (1 - q^i) prod_{i<=k} (1 - q^i))`.
pub fn poincare_grassmannian(k: usize, n: usize) -> Result<QPolynomial> {
    if k > n {
        return Err(Error::domain(format!("G({k},{n}) needs k <= n")));
    }
    let factorial = |m: usize| -> QPolynomial { (1..=m as i64).map(one_minus).product() };
    factorial(n).exact_div(&(factorial(n - k) * factorial(k)))
}

fn finish(k: usize, n: usize, d: usize, numerator: QPolynomial, denominator: QPolynomial) -> Result<ClosedFormResult> {
    let poincare = numerator.exact_div(&denominator).map_err(|e| match e {
        Error::NotDivisible { remainder } => Error::TheoremViolation { k, n, d, remainder },
        other => other,
    })?;
    Ok(ClosedFormResult { k, n, d, numerator, denominator, poincare })
}

/// Lines in `G(k, n)`: the partial flag variety `Fl(k-1, k+1; n)`, with
/// Poincaré polynomial `C(n, k-1)_q C(n-k+1, 2)_q`.
pub fn closed_form_degree1(k: usize, n: usize) -> Result<ClosedFormResult> {
    let (ki, ni) = check_pair(k, n)?;
    let numerator = qbinomial(ni, ki - 1)? * qbinomial(ni - ki + 1, 2)?;
    finish(k, n, 1, numerator, QPolynomial::one())
}

pub fn closed_form_degree2(k: usize, n: usize) -> Result<ClosedFormResult> {
    let (ki, ni) = check_pair(k, n)?;
    let bracket = one_plus(ni) * one_plus(3) - q(1) * one_plus(1) * (q(ki) + q(ni - ki));
    let numerator = one_minus(ki) * one_minus(ni - ki) * bracket * poincare_grassmannian(k, n)?;
    let denominator = one_minus(1).pow(2) * one_minus(2).pow(2);
    finish(k, n, 2, numerator, denominator)
}

pub fn closed_form_degree3(k: usize, n: usize) -> Result<ClosedFormResult> {
    let (ki, ni) = check_pair(k, n)?;
    let (f1, f2, f3, f4) = (
        QPolynomial::from_coeffs(&F1),
        QPolynomial::from_coeffs(&F2),
        QPolynomial::from_coeffs(&F3),
        QPolynomial::from_coeffs(&F4),
    );
    let inner = f3 * q(ni) * one_plus(2) - f4 * q(1) * one_plus(ni) * (q(ki) + q(ni - ki));
    let bracket = f1 * one_plus(2 * ni) + f2 * q(2) * (q(2 * ki) + q(2 * ni - 2 * ki)) + one_plus(1).pow(2) * inner;
    let numerator = one_minus(ki) * one_minus(ni - ki) * bracket * poincare_grassmannian(k, n)?;
    let denominator = one_minus(1).pow(2) * one_minus(2).pow(3) * one_minus(3).pow(2);
    finish(k, n, 3, numerator, denominator)
}

pub fn closed_form(k: usize, n: usize, d: usize) -> Result<ClosedFormResult> {
    match d {
        1 => closed_form_degree1(k, n),
        2 => closed_form_degree2(k, n),
        3 => closed_form_degree3(k, n),
        0 => Err(Error::domain("degree must be at least 1")),
        _ => Err(Error::UnsupportedDegree(d)),
    }
}

pub fn poincare_degree2(k: usize, n: usize) -> Result<QPolynomial> {
    closed_form_degree2(k, n).map(|r| r.poincare)
}

pub fn poincare_degree3(k: usize, n: usize) -> Result<QPolynomial> {
    closed_form_degree3(k, n).map(|r| r.poincare)
}

fn qb(n: i64, k: i64) -> QPolynomial {
    qbinomial_or_zero(n, k)
}

/// Contribution of the `(ij),(jj'),(ij')` family in degree 2:
/// `q^4 C(k+1,3) C(n+1,k+2) - q^7 C(k+2,4) C(n,k+2) + q^8 C(k+1,4) C(n,k+2)`.
pub fn expression6(k: usize, n: usize) -> QPolynomial {
    let (k, n) = (k as i64, n as i64);
    q(4) * qb(k + 1, 3) * qb(n + 1, k + 2) - q(7) * qb(k + 2, 4) * qb(n, k + 2)
        + q(8) * qb(k + 1, 4) * qb(n, k + 2)
}

/// Contribution of the `(j)` centre with two `(i)` leaves, `j < i`, in degree 2.
pub fn expression7(k: usize, n: usize) -> QPolynomial {
    let (k, n) = (k as i64, n as i64);
    let inner = qb(k + 2, 3) * qb(n + 1, k + 2) - q(2) * qb(k + 1, 3) * qb(n + 1, k + 2)
        - q(2) * qb(k + 3, 4) * qb(n, k + 2)
        + q(3) * qb(k + 2, 4) * qb(n, k + 2)
        + q(5) * qb(k + 2, 4) * qb(n, k + 2)
        - q(6) * qb(k + 1, 4) * qb(n, k + 2);
    q(2) * inner
}

/// The triangle family's contribution as the raw nested sum over placements
/// `i < j < j'` and splits `i_0 + i_1 + i_2 + i_3 = k - 2` of the gaps, before
/// any q-binomial identity is applied.
pub fn expression5_bruteforce(k: usize, n: usize) -> Result<QPolynomial> {
    if k < 2 || n <= k {
        return Err(Error::domain(format!("need 2 <= k < n, got k={k}, n={n}")));
    }
    let (k, n) = (k as i64, n as i64);
    let mut total = QPolynomial::zero();
    for i in 1..=n {
        for j in i + 1..=n {
            for jp in j + 1..=n {
                let gaps = [i - 1, j - i - 1, jp - j - 1, n - jp];
                for i0 in 0..=gaps[0] {
                    for i1 in 0..=gaps[1] {
                        for i2 in 0..=gaps[2] {
                            let i3 = k - 2 - i0 - i1 - i2;
                            if i3 < 0 || i3 > gaps[3] {
                                continue;
                            }
                            let [j0, j1, j2, j3] =
                                [gaps[0] - i0, gaps[1] - i1, gaps[2] - i2, gaps[3] - i3];
                            let e = 4 + 3 * i0 + 2 * i1 + i2 + j1 + 2 * j2 + 4 * j3
                                + i0 * j1 + i0 * j2 + i0 * j3 + i1 * j2 + i1 * j3 + i2 * j3;
                            total += &(q(e)
                                * qb(i0 + j0, i0)
                                * qb(i1 + j1, i1)
                                * qb(i2 + j2, i2)
                                * qb(i3 + j3, i3));
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}
