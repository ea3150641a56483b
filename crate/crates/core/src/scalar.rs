//! Scalar abstractions: the generic floating-point lane used by numeric
//! evaluation and integration, and the exact complex-rational constants
//! carried by symbolic expressions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Floating-point scalar the numeric lane is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// Exact complex number with rational real and imaginary parts.
///
/// Symbolic constants stay exact through every transformation; floats only
/// appear when an expression is evaluated at a numeric point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        CRational {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        CRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_real(re: BigRational) -> Self {
        CRational {
            re,
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        CRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        CRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        CRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True iff the value is a real integer.
    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    /// The value as `i64` when it is a real integer small enough to fit.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        CRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        assert!(!norm.is_zero(), "division by zero");
        CRational {
            re: &self.re / &norm,
            im: -&self.im / &norm,
        }
    }

    /// Exact integer power (negative exponents invert; the value must be
    /// nonzero for those).
    pub fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 { self.recip() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = CRational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Conversion into a complex float of the requested precision.
    pub fn to_complex<R: Real>(&self) -> Complex<R> {
        let re = R::from_f64(self.re.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(R::nan);
        let im = R::from_f64(self.im.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(R::nan);
        Complex::new(re, im)
    }
}

impl Add for &CRational {
    type Output = CRational;
    fn add(self, rhs: &CRational) -> CRational {
        CRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &CRational {
    type Output = CRational;
    fn sub(self, rhs: &CRational) -> CRational {
        CRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &CRational {
    type Output = CRational;
    fn mul(self, rhs: &CRational) -> CRational {
        CRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &CRational {
    type Output = CRational;
    fn div(self, rhs: &CRational) -> CRational {
        self * &rhs.recip()
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl fmt::Debug for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

/// Parses a decimal or integer literal into an exact rational
/// (`"0.25"` becomes 1/4).
pub fn rational_from_decimal(text: &str) -> Option<BigRational> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits: String = format!("{}{}", int_part, frac_part);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = digits.parse().ok()?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = CRational::i();
        assert_eq!(&i * &i, CRational::from_int(-1));
    }

    #[test]
    fn powi_handles_negative_exponents() {
        let half = CRational::ratio(1, 2);
        assert_eq!(half.powi(-2), CRational::from_int(4));
        assert_eq!(CRational::i().powi(3), &CRational::zero() - &CRational::i());
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(
            rational_from_decimal("9.8").unwrap(),
            BigRational::new(BigInt::from(49), BigInt::from(5))
        );
        assert_eq!(
            rational_from_decimal("0.25").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert!(rational_from_decimal(".").is_none());
    }

    #[test]
    fn conversion_to_floats() {
        let q = CRational::ratio(49, 5);
        let c64: Complex<f64> = q.to_complex();
        assert_eq!(c64.re, 9.8);
        let c32: Complex<f32> = q.to_complex();
        assert_eq!(c32.re, 9.8f32);
    }
}
