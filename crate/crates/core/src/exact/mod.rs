//! Exact arithmetic: rationals, sparse multivariate polynomials, linear
//! forms, rational functions with factored linear denominators, univariate
//! polynomials and dense matrices with fraction-free determinants.

mod charpoly;
mod factored;
mod linear;
mod matrix;
mod poly;
mod symbol;
mod unipoly;

use std::fmt;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use charpoly::interpolate_charpoly;
pub use factored::{common_denominator, lcm_denominators, FactoredRational};
pub use linear::{FactorProduct, LinearForm};
pub(crate) use matrix::expect_len;
pub use matrix::{bareiss_det, bareiss_det_integer, det_rational, rank_rational, Matrix};
pub use poly::{Assignment, Monomial, Poly};
pub use symbol::Symbol;
pub use unipoly::UniPoly;

use crate::error::{Error, Result};

/// Operations shared by every exact scalar type used as a matrix entry.
///
/// All values are kept in canonical form, so `==` is value equality.
pub trait ExactScalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Quotient in the scalar's own ring, when it exists there.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
    /// The value as a rational number, if it is one.
    fn to_rational(&self) -> Option<BigRational>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&rat(n))
    }

    fn scale(&self, q: &BigRational) -> Self {
        self.mul(&Self::from_rational(q))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl ExactScalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn scale(&self, q: &BigRational) -> Self {
        self * q
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^k` for possibly negative `k`.
pub fn pow2(k: i64) -> BigRational {
    let p = BigInt::one() << k.unsigned_abs() as usize;
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Parses `"p/q"` or an integer into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den, den_offset) = match s.find('/') {
        Some(i) => (&s[..i], Some(&s[i + 1..]), i + 1),
        None => (s, None, 0),
    };
    let parse_int = |part: &str, offset: usize| -> Result<BigInt> {
        if part.is_empty() {
            return Err(Error::Parse {
                position: offset,
                message: "expected an integer".into(),
            });
        }
        let digits_from = usize::from(part.starts_with(['-', '+']));
        if let Some(pos) = part[digits_from..].find(|c: char| !c.is_ascii_digit()) {
            return Err(Error::Parse {
                position: offset + digits_from + pos,
                message: format!(
                    "unexpected character {:?} in exact rational",
                    part[digits_from + pos..].chars().next().unwrap()
                ),
            });
        }
        part.parse::<BigInt>().map_err(|e| Error::Parse {
            position: offset,
            message: e.to_string(),
        })
    };
    let p = parse_int(num, 0)?;
    let q = match den {
        Some(d) => parse_int(d, den_offset)?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(Error::Parse {
            position: den_offset,
            message: "zero denominator".into(),
        });
    }
    Ok(BigRational::new(p, q))
}

/// Accepts an exact rational or a decimal literal; decimals are converted
/// exactly to the rational they denote in base ten.
pub fn parse_rational_or_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some(dot) = t.find('.') {
        let (int_part, frac_part) = (&t[..dot], &t[dot + 1..]);
        if frac_part.contains(['e', 'E']) || int_part.contains(['e', 'E']) {
            return Err(Error::Parse {
                position: dot,
                message: "exponent notation is not supported".into(),
            });
        }
        let digits = format!("{int_part}{frac_part}");
        let numer = parse_rational(&digits).map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse {
                position: if position >= dot { position + 1 } else { position },
                message,
            },
            other => other,
        })?;
        let mut den = BigInt::one();
        for _ in 0..frac_part.len() {
            den *= 10;
        }
        return Ok(numer / BigRational::from_integer(den));
    }
    parse_rational(t)
}

pub(crate) fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Exponent `k` when `q = 2^k` with `k >= 0`.
pub(crate) fn power_of_two(q: &BigRational) -> Option<u64> {
    if !is_integer(q) || !q.is_positive() {
        return None;
    }
    let n = q.numer();
    let k = n.bits() - 1;
    (BigInt::one() << k as usize == *n).then_some(k)
}

pub(crate) fn lcm_int(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

pub(crate) fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b)
}
