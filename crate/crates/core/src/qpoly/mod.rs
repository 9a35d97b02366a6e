//! Exact Laurent polynomials in a single formal variable `q`.
//!
//! [`QPolynomial`] is the result type of every Poincaré polynomial computed
//! by this crate. Coefficients are arbitrary-precision integers and the
//! representation is a sparse exponent map with no stored zeros, so two
//! polynomials are equal exactly when their maps are equal.
//!
//! Gaussian binomials and the identity checks live in the submodules.

mod binomial;
pub mod identities;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use binomial::{partition_sum, qbinomial, qbinomial_or_zero};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    coeffs: BTreeMap<i64, BigInt>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    /// `1 - q^e`.
    pub fn one_minus_q_pow(e: i64) -> Self {
        Self::one() - Self::q_pow(e)
    }

    /// Builds `c_0 + c_1 q + c_2 q^2 + ...` from a dense ascending list.
    pub fn from_coeffs<C: Into<BigInt> + Clone>(coeffs: &[C]) -> Self {
        let mut p = Self::zero();
        for (e, c) in coeffs.iter().enumerate() {
            p.add_term(e as i64, c.clone().into());
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents accumulate.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn lowest_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&x, c)| (x + e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Dense coefficient list `[c_0, c_1, ..., c_deg]`; for the Betti
    /// numbers of a space this is `(b_0, b_2, b_4, ...)`.
    ///
    /// Fails if a negative exponent is present.
    pub fn dense(&self) -> Result<Vec<BigInt>> {
        let Some(deg) = self.degree() else {
            return Ok(Vec::new());
        };
        if self.lowest_exponent().unwrap_or(0) < 0 {
            return Err(Error::domain(format!(
                "polynomial {self} has negative exponents and no dense form"
            )));
        }
        Ok((0..=deg).map(|e| self.coeff(e)).collect())
    }

    /// `q^top * p(1/q)`: the coefficient of `q^i` becomes that of `q^(top-i)`.
    pub fn reverse(&self, top: i64) -> Result<Self> {
        if let Some(low) = self.lowest_exponent() {
            if low < 0 {
                return Err(Error::domain(format!("cannot reverse {self}: negative exponent {low}")));
            }
        }
        if let Some(deg) = self.degree() {
            if deg > top {
                return Err(Error::domain(format!(
                    "cannot reverse {self} about {top}: degree {deg} exceeds it"
                )));
            }
        }
        Ok(Self {
            coeffs: self.coeffs.iter().map(|(&e, c)| (top - e, c.clone())).collect(),
        })
    }

    /// Poincaré duality in dimension `top`: `q^top p(1/q) == p`.
    pub fn is_palindromic(&self, top: i64) -> bool {
        self.reverse(top).map(|r| &r == self).unwrap_or(false)
    }

    /// Exact quotient `self / den`.
    ///
    /// Long division on ascending exponents: each step cancels the lowest
    /// term of the running remainder against the lowest term of `den`.
    /// The quotient cannot exceed degree `deg(self) - deg(den)`, so the
    /// loop stops there and any leftover is reported as the remainder.
    pub fn exact_div(&self, den: &QPolynomial) -> Result<QPolynomial> {
        let (Some(den_low), Some(den_deg)) = (den.lowest_exponent(), den.degree()) else {
            return Err(Error::domain("division by the zero polynomial"));
        };
        let Some(num_deg) = self.degree() else {
            return Ok(Self::zero());
        };
        let den_lead = den.coeffs[&den_low].clone();
        let max_quot_exp = num_deg - den_deg;

        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(low) = rem.lowest_exponent() {
            let qe = low - den_low;
            if qe > max_quot_exp {
                break;
            }
            let (qc, r) = rem.coeffs[&low].div_rem(&den_lead);
            if !r.is_zero() {
                break;
            }
            for (&e, c) in &den.coeffs {
                rem.add_term(e + qe, -(c * &qc));
            }
            quot.add_term(qe, qc);
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(Error::NotDivisible { remainder: rem })
        }
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("q")?,
                1 => write!(f, "{mag}q")?,
                _ if unit => write!(f, "q^{e}")?,
                _ => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial({self})")
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        -&self
    }
}

impl AddAssign<&QPolynomial> for QPolynomial {
    fn add_assign(&mut self, rhs: &QPolynomial) {
        for (&e, c) in &rhs.coeffs {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&QPolynomial> for QPolynomial {
    fn sub_assign(&mut self, rhs: &QPolynomial) {
        for (&e, c) in &rhs.coeffs {
            self.add_term(e, -c);
        }
    }
}

impl Mul<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = QPolynomial::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &rhs.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl $tr<&QPolynomial> for &QPolynomial {
            type Output = QPolynomial;
            fn $method(self, rhs: &QPolynomial) -> QPolynomial {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl $tr<QPolynomial> for QPolynomial {
            type Output = QPolynomial;
            fn $method(mut self, rhs: QPolynomial) -> QPolynomial {
                self.$assign(&rhs);
                self
            }
        }
        impl $tr<&QPolynomial> for QPolynomial {
            type Output = QPolynomial;
            fn $method(mut self, rhs: &QPolynomial) -> QPolynomial {
                self.$assign(&rhs);
                self
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl Mul<QPolynomial> for QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: QPolynomial) -> QPolynomial {
        &self * &rhs
    }
}

impl Mul<&QPolynomial> for QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        &self * rhs
    }
}

impl std::iter::Sum for QPolynomial {
    fn sum<I: Iterator<Item = QPolynomial>>(iter: I) -> Self {
        iter.fold(QPolynomial::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for QPolynomial {
    fn product<I: Iterator<Item = QPolynomial>>(iter: I) -> Self {
        iter.fold(QPolynomial::one(), |acc, p| acc * p)
    }
}

// {"coeffs": [[exponent, "decimal"], ...]}, ascending exponents.
#[derive(Serialize, Deserialize)]
struct WireQPolynomial {
    coeffs: Vec<(i64, String)>,
}

impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        WireQPolynomial {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c.to_string())).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = WireQPolynomial::deserialize(deserializer)?;
        let mut p = QPolynomial::zero();
        for (e, s) in wire.coeffs {
            let c: BigInt = s
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {s:?}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}
