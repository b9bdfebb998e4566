//! Exact scalars and integer combinatorics.
//!
//! [`ExactRational`] wraps an arbitrary-precision rational that is always kept
//! in lowest terms with a positive denominator, so two equal values always
//! render to the same string.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed rational in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Builds `numer / denom`, reducing eagerly.
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "ExactRational with zero denominator");
        ExactRational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The integer value, if the denominator is 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        ExactRational(self.0.recip())
    }

    /// Integer power; negative exponents invert. Panics on `0^negative`.
    pub fn pow(&self, exp: i32) -> Self {
        if exp < 0 {
            return self.recip().pow(-exp);
        }
        ExactRational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// `(-1)^e` for any integer `e`.
    pub fn sign_power(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }

    /// Floor of the value.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        self.0.round().to_integer()
    }

    /// Lossy conversion for trend displays only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Fixed-point decimal rendering with `frac_digits` digits after the point,
    /// rounded half away from zero.
    pub fn to_decimal(&self, frac_digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), frac_digits);
        let scaled = (self.abs() * ExactRational::from_integer(scale)).round();
        let mut digits = scaled.to_string();
        if digits.len() <= frac_digits {
            digits = format!("{}{}", "0".repeat(frac_digits + 1 - digits.len()), digits);
        }
        let (int_part, frac_part) = digits.split_at(digits.len() - frac_digits);
        let sign = if self.is_negative() && !scaled.is_zero() {
            "-"
        } else {
            ""
        };
        if frac_digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Scientific rendering `d.ddd…e±x` with `sig_digits` significant digits,
    /// truncated (not rounded) so the printed mantissa never overstates the value.
    pub fn to_scientific(&self, sig_digits: usize) -> String {
        assert!(sig_digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let x = self.abs();
        let ten = ExactRational::from_integer(10);
        let mut exp: i32 = x.numer().to_string().len() as i32 - x.denom().to_string().len() as i32;
        // bring 10^exp <= x < 10^(exp+1)
        while ten.pow(exp) > x {
            exp -= 1;
        }
        while ten.pow(exp + 1) <= x {
            exp += 1;
        }
        let mantissa = (&x * &ten.pow(sig_digits as i32 - 1 - exp)).floor().to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let (lead, rest) = mantissa.split_at(1);
        if rest.is_empty() {
            format!("{sign}{lead}e{exp}")
        } else {
            format!("{sign}{lead}.{rest}e{exp}")
        }
    }
}

impl Default for ExactRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse {s:?} as a rational"));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(ExactRational::new(p, q))
            }
            None => Ok(ExactRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl PartialEq<i64> for ExactRational {
    fn eq(&self, other: &i64) -> bool {
        self.0.denom().is_one() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for ExactRational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'b ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $assign_trait<ExactRational> for ExactRational {
            fn $assign(&mut self, rhs: ExactRational) {
                self.0 = std::mem::take(&mut self.0).$method(rhs.0);
            }
        }
        impl<'a> $assign_trait<&'a ExactRational> for ExactRational {
            fn $assign(&mut self, rhs: &'a ExactRational) {
                self.0 = std::mem::take(&mut self.0).$method(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div<ExactRational> for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational(self.0 / rhs.0)
    }
}

impl Div<&ExactRational> for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational(&self.0 / &rhs.0)
    }
}

impl<'a> Div<&'a ExactRational> for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &'a ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational(self.0 / &rhs.0)
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl Product for ExactRational {
    fn product<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |acc, x| acc * x)
    }
}

/// `n!` for `n >= 0`.
pub fn factorial(n: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::Domain(format!("factorial of negative integer {n}")));
    }
    Ok((1..=n).map(BigInt::from).product())
}

/// Binomial coefficient with `C(n, k) = 0` for `k < 0` and the falling-factorial
/// product `n(n-1)...(n-k+1)/k!` otherwise, so negative `n` is allowed.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    // symmetric shortcut only valid for nonnegative n
    let k = if n >= 0 && 2 * k > n { n - k } else { k };
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// `(2n-1)!! = 1 * 3 * ... * (2n-1)`, with `(-1)!! = 1` for `n = 0`.
pub fn double_factorial_odd(n: u64) -> BigInt {
    (1..=n).map(|i| BigInt::from(2 * i - 1)).product()
}

/// `1! * 2! * ... * m!`.
pub fn superfactorial(m: u64) -> BigInt {
    let mut fact = BigInt::one();
    let mut acc = BigInt::one();
    for i in 1..=m {
        fact *= BigInt::from(i);
        acc *= &fact;
    }
    acc
}

/// `(-1)^e` as a big integer.
pub(crate) fn sign_int(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        BigInt::from_biguint(Sign::Minus, One::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> ExactRational {
        ExactRational::new(p, d)
    }

    #[test]
    fn lowest_terms_and_rendering() {
        let x = q(-830, 6912);
        assert_eq!(x.to_string(), "-415/3456");
        assert_eq!(q(4, -8).to_string(), "-1/2");
        assert_eq!(q(0, 7).to_string(), "0");
        assert_eq!(q(0, 7).denom(), &BigInt::one());
        assert_eq!(q(6, 3).to_string(), "2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["-415/3456", "0", "96547/259200", "17"] {
            assert_eq!(s.parse::<ExactRational>().unwrap().to_string(), s);
        }
        assert_eq!("6/4".parse::<ExactRational>().unwrap().to_string(), "3/2");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x".parse::<ExactRational>().is_err());
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0).unwrap(), BigInt::from(1));
        assert_eq!(factorial(4).unwrap(), BigInt::from(24));
        assert_eq!(factorial(6).unwrap(), BigInt::from(720));
        assert!(matches!(factorial(-1), Err(Error::Domain(_))));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, -1), BigInt::from(0));
        assert_eq!(binomial(2, 1), BigInt::from(2));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-3, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn binomial_in_counting_identity_context() {
        // n = 3, q = 2: sum_i C(n-i-1, q-i-1) * <<3,i>> with row 1, 8, 6, 0
        let row = [1, 8, 6, 0];
        let total: BigInt = (0..=3)
            .map(|i| binomial(3 - i - 1, 2 - i - 1) * BigInt::from(row[i as usize]))
            .sum();
        assert_eq!(total, BigInt::from(10));
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial_odd(0), BigInt::from(1));
        assert_eq!(double_factorial_odd(3), BigInt::from(15));
        assert_eq!(double_factorial_odd(5), BigInt::from(945));
    }

    #[test]
    fn superfactorial_values() {
        assert_eq!(superfactorial(1), BigInt::from(1));
        assert_eq!(superfactorial(4), BigInt::from(288));
        let scaled = ExactRational::from_integer(superfactorial(4)) * q(14, 9);
        assert_eq!(scaled, 448);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q(1, 3).to_decimal(5), "0.33333");
        assert_eq!(q(2, 3).to_decimal(3), "0.667");
        assert_eq!(q(-1, 8).to_decimal(2), "-0.13");
        assert_eq!(q(96547, 259200).to_decimal(6), "0.372481");
        assert_eq!(q(5, 1).to_decimal(0), "5");
        assert_eq!(q(1, 1000).to_scientific(3), "1.00e-3");
        assert_eq!(q(-12345, 100).to_scientific(2), "-1.2e2");
        assert_eq!(q(9, 1).to_scientific(1), "9e0");
    }

    proptest! {
        #[test]
        fn add_sub_and_mul_div_are_exact(a in -1000i64..1000, b in 1i64..1000,
                                         c in -1000i64..1000, d in 1i64..1000) {
            let x = q(a, b);
            let y = q(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x);
            }
        }

        #[test]
        fn pascal_rule_with_negative_upper(n in -30i64..30, k in 1i64..20) {
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k) + binomial(n - 1, k - 1));
        }

        #[test]
        fn factorial_ratio(n in 1i64..60) {
            prop_assert_eq!(factorial(n).unwrap() / factorial(n - 1).unwrap(), BigInt::from(n));
        }
    }
}
