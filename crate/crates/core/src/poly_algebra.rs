//! Dense univariate polynomials, canonical rational functions with a
//! structural `(1-lambda)^p` or `(1+zeta)^p` denominator, and truncated power
//! series, all over [`ExactRational`].

use std::fmt;

use crate::error::{Error, Result};
use crate::exact_arith::{binomial, ExactRational};

/// The formal variable a polynomial lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// The tree variable `lambda = T(z)`; canonical denominator `1 - lambda`.
    Lambda,
    /// The endofunction variable `zeta = lambda / (1 - lambda)`; canonical denominator `1 + zeta`.
    Zeta,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Lambda => "lambda",
            Var::Zeta => "zeta",
        }
    }

    /// The sign `s` in the base factor `1 + s*v`.
    fn base_sign(self) -> i64 {
        match self {
            Var::Lambda => -1,
            Var::Zeta => 1,
        }
    }

    /// Root of the base factor.
    fn base_root(self) -> ExactRational {
        ExactRational::from(-self.base_sign())
    }

    pub fn base_label(self) -> &'static str {
        match self {
            Var::Lambda => "1-lambda",
            Var::Zeta => "1+zeta",
        }
    }

    pub fn other(self) -> Var {
        match self {
            Var::Lambda => Var::Zeta,
            Var::Zeta => Var::Lambda,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense polynomial; `coeffs[k]` is the coefficient of `v^k`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    var: Var,
    coeffs: Vec<ExactRational>,
}

impl Polynomial {
    pub fn new(var: Var, mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(ExactRational::is_zero) {
            coeffs.pop();
        }
        Polynomial { var, coeffs }
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| ExactRational::from(c)).collect())
    }

    pub fn zero(var: Var) -> Self {
        Polynomial {
            var,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(var: Var, c: ExactRational) -> Self {
        Self::new(var, vec![c])
    }

    pub fn one(var: Var) -> Self {
        Self::constant(var, ExactRational::one())
    }

    pub fn monomial(var: Var, c: ExactRational, k: usize) -> Self {
        let mut coeffs = vec![ExactRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(var, coeffs)
    }

    /// The polynomial `v`.
    pub fn variable(var: Var) -> Self {
        Self::monomial(var, ExactRational::one(), 1)
    }

    /// The canonical linear factor: `1 - lambda` or `1 + zeta`.
    pub fn base(var: Var) -> Self {
        Self::from_ints(var, &[1, var.base_sign()])
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ExactRational> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> ExactRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> ExactRational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_var(&self, other: &Polynomial) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch {
                left: self.var.name(),
                right: other.var.name(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            self.var,
            (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        ))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            self.var,
            (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect(),
        ))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_var(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.var));
        }
        let mut out = vec![ExactRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self::new(self.var, out))
    }

    pub fn scale(&self, c: &ExactRational) -> Polynomial {
        Self::new(self.var, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![ExactRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.var, coeffs)
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Self::one(self.var);
        for _ in 0..n {
            acc = acc.mul(self).expect("same variable");
        }
        acc
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.coeffs
            .iter()
            .rev()
            .fold(ExactRational::zero(), |acc, c| acc * x + c)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Polynomial {
        Self::new(
            self.var,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ExactRational::from(k as i64))
                .collect(),
        )
    }

    /// `F -> integral_0^v F(r) (1 - r) / r dr`, i.e. `v^k -> v^k/k - v^(k+1)/(k+1)`.
    ///
    /// Only defined on lambda-polynomials without constant term.
    pub fn weighted_integral(&self) -> Result<Polynomial> {
        if self.var != Var::Lambda {
            return Err(Error::VariableMismatch {
                left: Var::Lambda.name(),
                right: self.var.name(),
            });
        }
        if !self.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm(self.coeff(0).to_string()));
        }
        let mut out = vec![ExactRational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out[k] += c / &ExactRational::from(k as i64);
            out[k + 1] -= c / &ExactRational::from(k as i64 + 1);
        }
        Ok(Self::new(self.var, out))
    }

    /// Exact quotient by the base factor, or `None` if it does not divide.
    pub fn div_by_base(&self) -> Option<Polynomial> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let root = self.var.base_root();
        let d = self.coeffs.len() - 1;
        if d == 0 {
            return None;
        }
        // synthetic division by (v - root)
        let mut q = vec![ExactRational::zero(); d];
        q[d - 1] = self.coeffs[d].clone();
        for i in (1..d).rev() {
            q[i - 1] = &self.coeffs[i] + &(&root * &q[i]);
        }
        let remainder = &self.coeffs[0] + &(&root * &q[0]);
        if !remainder.is_zero() {
            return None;
        }
        // 1 + s*v = s*(v - root) since s = +-1
        let s = ExactRational::from(self.var.base_sign());
        Some(Self::new(self.var, q).scale(&s))
    }

    /// Largest `b` such that `base^b` divides the polynomial, with the cofactor.
    /// The zero polynomial is reported as `(0, 0)`.
    pub fn split_base_power(&self) -> (u32, Polynomial) {
        let mut cur = self.clone();
        let mut b = 0;
        if cur.is_zero() {
            return (0, cur);
        }
        while let Some(q) = cur.div_by_base() {
            cur = q;
            b += 1;
        }
        (b, cur)
    }

    /// Ascending-power term list such as `1+8lambda+6lambda^2`.
    fn write_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let mag = c.abs();
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str(self.var.name())?,
                _ => write!(f, "{}^{}", self.var.name(), k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}](", self.var)?;
        self.write_terms(f)?;
        f.write_str(")")
    }
}

/// `numerator / base^power` with `base = 1 - lambda` or `1 + zeta`, kept in
/// lowest terms: when `power > 0` the base does not divide the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numerator: Polynomial,
    power: u32,
}

/// Direction of the fractional-linear change of variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `lambda = zeta / (1 + zeta)`.
    LambdaToZeta,
    /// `zeta = lambda / (1 - lambda)`.
    ZetaToLambda,
}

impl Direction {
    pub fn source(self) -> Var {
        match self {
            Direction::LambdaToZeta => Var::Lambda,
            Direction::ZetaToLambda => Var::Zeta,
        }
    }
}

impl RationalFunction {
    /// Builds `numerator / base^power` and reduces to lowest terms.
    pub fn new(numerator: Polynomial, power: u32) -> Self {
        let mut numerator = numerator;
        let mut power = power;
        if numerator.is_zero() {
            power = 0;
        }
        while power > 0 {
            match numerator.div_by_base() {
                Some(q) => {
                    numerator = q;
                    power -= 1;
                }
                None => break,
            }
        }
        RationalFunction { numerator, power }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction { numerator: p, power: 0 }
    }

    pub fn var(&self) -> Var {
        self.numerator.var
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn base(&self) -> Polynomial {
        Polynomial::base(self.var())
    }

    pub fn is_polynomial(&self) -> bool {
        self.power == 0
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.numerator)
    }

    /// True iff the lowest-terms invariant holds.
    pub fn is_canonical(&self) -> bool {
        self.power == 0 || self.numerator.div_by_base().is_none()
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<RationalFunction> {
        Ok(Self::new(self.numerator.mul(p)?, self.power))
    }

    /// Multiplication by `base^e` for any integer `e`.
    pub fn mul_base_pow(&self, e: i64) -> RationalFunction {
        if e >= 0 {
            let factor = self.base().pow(e as u32);
            Self::new(self.numerator.mul(&factor).expect("same variable"), self.power)
        } else {
            Self::new(self.numerator.clone(), self.power + (-e) as u32)
        }
    }

    /// `d/dv [N / B^p] = (N' B - p s N) / B^(p+1)` where `B = 1 + s v`.
    pub fn derivative(&self) -> RationalFunction {
        let n = &self.numerator;
        let b = self.base();
        let ps = ExactRational::from(self.power as i64 * self.var().base_sign());
        let top = n
            .derivative()
            .mul(&b)
            .and_then(|x| x.sub(&n.scale(&ps)))
            .expect("same variable");
        Self::new(top, self.power + 1)
    }

    /// Taylor coefficients at 0 through `order`.
    pub fn series_expand(&self, order: usize) -> PowerSeries {
        // 1/(1 + s v)^p = sum_n C(n+p-1, n) (-s)^n v^n
        let p = self.power as i64;
        let minus_s = -self.var().base_sign();
        let inv_base: Vec<ExactRational> = (0..=order as i64)
            .map(|n| {
                if p == 0 {
                    if n == 0 {
                        ExactRational::one()
                    } else {
                        ExactRational::zero()
                    }
                } else {
                    ExactRational::from_integer(
                        binomial(n + p - 1, n) * num_bigint::BigInt::from(minus_s).pow(n as u32),
                    )
                }
            })
            .collect();
        let num = PowerSeries::from_polynomial(&self.numerator, order);
        num.mul(&PowerSeries::new(inv_base))
    }

    fn write_display(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.var();
        let name = var.name();
        // expanded form for lambda-polynomials, factored form otherwise
        if var == Var::Lambda && self.power == 0 {
            return self.numerator.write_terms(f);
        }
        if self.numerator.is_zero() {
            return f.write_str("0");
        }
        let val = self.numerator.valuation().unwrap_or(0);
        let rest = Polynomial::new(var, self.numerator.coeffs[val..].to_vec());
        let (b, rest) = if self.power == 0 {
            rest.split_base_power()
        } else {
            (0, rest)
        };
        let mut wrote_factor = false;
        match val {
            0 => {}
            1 => {
                f.write_str(name)?;
                wrote_factor = true;
            }
            _ => {
                write!(f, "{name}^{val}")?;
                wrote_factor = true;
            }
        }
        if b > 0 {
            write!(f, "({})", var.base_label())?;
            if b > 1 {
                write!(f, "^{b}")?;
            }
            wrote_factor = true;
        }
        let rest_is_one = rest.coeffs.len() == 1 && rest.coeffs[0].is_one();
        if !rest_is_one {
            let single_term = rest.coeffs.iter().filter(|c| !c.is_zero()).count() == 1;
            if wrote_factor || (self.power > 0 && !single_term) {
                f.write_str("(")?;
                rest.write_terms(f)?;
                f.write_str(")")?;
            } else {
                rest.write_terms(f)?;
            }
        } else if !wrote_factor {
            f.write_str("1")?;
        }
        if self.power > 0 {
            write!(f, "/({})", var.base_label())?;
            if self.power > 1 {
                write!(f, "^{}", self.power)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for RationalFunction {
    /// Display form, e.g. `lambda(1+8lambda+6lambda^2)/(1-lambda)^7`
    /// or `zeta(1+zeta)^3(1+3zeta)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_display(f)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction[{}](", self.var())?;
        self.write_display(f)?;
        f.write_str(")")
    }
}

/// Exact change of variable between `lambda` and `zeta`.
///
/// Both directions have the shape `v = w / B_w`, `B_v = 1 / B_w`, so a
/// numerator `sum c_k v^k` of degree `d` over `B_v^p` becomes
/// `(sum c_k w^k B_w^(d-k)) * B_w^(p-d)`.
pub fn mobius_substitute(f: &RationalFunction, direction: Direction) -> Result<RationalFunction> {
    let src = direction.source();
    if f.var() != src {
        return Err(Error::VariableMismatch {
            left: src.name(),
            right: f.var().name(),
        });
    }
    let dst = src.other();
    let Some(d) = f.numerator.degree() else {
        return Ok(RationalFunction::from_polynomial(Polynomial::zero(dst)));
    };
    let target_base = Polynomial::base(dst);
    let mut homogenized = Polynomial::zero(dst);
    for (k, c) in f.numerator.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = Polynomial::monomial(dst, c.clone(), k).mul(&target_base.pow((d - k) as u32))?;
        homogenized = homogenized.add(&term)?;
    }
    Ok(RationalFunction::new(homogenized, 0).mul_base_pow(f.power as i64 - d as i64))
}

/// Truncated power series `c_0 + c_1 x + ... + c_N x^N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<ExactRational>,
}

impl PowerSeries {
    /// Panics on an empty coefficient list (order would be undefined).
    pub fn new(coeffs: Vec<ExactRational>) -> Self {
        assert!(!coeffs.is_empty(), "power series needs at least c_0");
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![ExactRational::zero(); order + 1],
        }
    }

    /// The constant series `1`.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ExactRational::one();
        s
    }

    /// The series `x`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = ExactRational::one();
        }
        s
    }

    pub fn from_polynomial(p: &Polynomial, order: usize) -> Self {
        PowerSeries {
            coeffs: (0..=order).map(|k| p.coeff(k)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> ExactRational {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> PowerSeries {
        PowerSeries {
            coeffs: (0..=order).map(|n| self.coeff(n)).collect(),
        }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn scale(&self, c: &ExactRational) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Truncated Cauchy product at the smaller of the two orders.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        let mut out = vec![ExactRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    /// `1 / self`, requiring a nonzero constant term.
    pub fn reciprocal(&self) -> Result<PowerSeries> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Domain("reciprocal of a series with zero constant term".into()));
        }
        let inv0 = c0.recip();
        let mut out: Vec<ExactRational> = vec![inv0.clone()];
        for n in 1..=self.order() {
            let s: ExactRational = (1..=n).map(|j| &self.coeffs[j] * &out[n - j]).sum();
            out.push(-(s * &inv0));
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `outer(inner(x))` truncated to the common order, by Horner's rule.
    pub fn compose(&self, inner: &PowerSeries) -> Result<PowerSeries> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroInnerConstant(inner.coeffs[0].to_string()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = PowerSeries::zero(n);
        for c in self.coeffs.iter().take(n + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

/// Convenience for `series_compose(outer, inner)`.
pub fn series_compose(outer: &PowerSeries, inner: &PowerSeries) -> Result<PowerSeries> {
    outer.compose(inner)
}

/// Convenience for `series_expand(f, order)`.
pub fn series_expand(f: &RationalFunction, order: usize) -> PowerSeries {
    f.series_expand(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> ExactRational {
        ExactRational::new(p, d)
    }

    fn lam(coeffs: &[(i64, i64)]) -> Polynomial {
        Polynomial::new(Var::Lambda, coeffs.iter().map(|&(p, d)| q(p, d)).collect())
    }

    fn series(coeffs: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::new(coeffs.iter().map(|&(p, d)| q(p, d)).collect())
    }

    #[test]
    fn arithmetic_basics() {
        let l = Polynomial::variable(Var::Lambda);
        assert_eq!(l.add(&l).unwrap(), Polynomial::from_ints(Var::Lambda, &[0, 2]));
        let g2 = lam(&[(0, 1), (1, 1), (-1, 2)]);
        assert_eq!(g2.mul(&Polynomial::one(Var::Lambda)).unwrap(), g2);
        let p = Polynomial::from_ints(Var::Lambda, &[1, 2]);
        assert_eq!(p.mul(&Polynomial::base(Var::Lambda).pow(0)).unwrap(), p);
        assert_eq!(l.sub(&l).unwrap(), Polynomial::zero(Var::Lambda));
        assert_eq!(l.sub(&l).unwrap().degree(), None);
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let a = Polynomial::variable(Var::Lambda);
        let b = Polynomial::variable(Var::Zeta);
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::VariableMismatch { .. })));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            Polynomial::variable(Var::Lambda).derivative(),
            Polynomial::one(Var::Lambda)
        );
        let g2 = lam(&[(0, 1), (1, 1), (-1, 2)]);
        assert_eq!(g2.derivative(), lam(&[(1, 1), (-1, 1)]));
        assert!(Polynomial::from_ints(Var::Lambda, &[5]).derivative().is_zero());
    }

    #[test]
    fn weighted_integral_examples() {
        let l = Polynomial::variable(Var::Lambda);
        let g2 = l.weighted_integral().unwrap();
        assert_eq!(g2, lam(&[(0, 1), (1, 1), (-1, 2)]));
        let g3 = g2.weighted_integral().unwrap();
        assert_eq!(g3, lam(&[(0, 1), (1, 1), (-3, 4), (1, 6)]));
        assert!(Polynomial::zero(Var::Lambda).weighted_integral().unwrap().is_zero());
        assert!(matches!(
            Polynomial::one(Var::Lambda).weighted_integral(),
            Err(Error::NonzeroConstantTerm(_))
        ));
    }

    #[test]
    fn canonical_reduction() {
        // (lambda - lambda^2) / (1-lambda)^2 = lambda / (1-lambda)
        let f = RationalFunction::new(Polynomial::from_ints(Var::Lambda, &[0, 1, -1]), 2);
        assert_eq!(f.numerator(), &Polynomial::variable(Var::Lambda));
        assert_eq!(f.power(), 1);
        assert!(f.is_canonical());
        let z = RationalFunction::new(Polynomial::from_ints(Var::Zeta, &[1, 2, 1]), 3);
        assert_eq!(z.numerator(), &Polynomial::one(Var::Zeta));
        assert_eq!(z.power(), 1);
    }

    #[test]
    fn mobius_examples() {
        let g0 = RationalFunction::new(Polynomial::variable(Var::Lambda), 1);
        let h0 = mobius_substitute(&g0, Direction::LambdaToZeta).unwrap();
        assert_eq!(h0, RationalFunction::from_polynomial(Polynomial::variable(Var::Zeta)));

        let g2 = RationalFunction::from_polynomial(lam(&[(0, 1), (1, 1), (-1, 2)]));
        let h2 = mobius_substitute(&g2, Direction::LambdaToZeta).unwrap();
        assert_eq!(h2.power(), 2);
        assert_eq!(
            h2.numerator(),
            &Polynomial::new(Var::Zeta, vec![q(0, 1), q(1, 1), q(1, 2)])
        );
        assert_eq!(h2.to_string(), "zeta(1+1/2zeta)/(1+zeta)^2");

        let gm1 = RationalFunction::new(Polynomial::variable(Var::Lambda), 3);
        let hm1 = mobius_substitute(&gm1, Direction::LambdaToZeta).unwrap();
        assert_eq!(hm1.power(), 0);
        assert_eq!(hm1.numerator(), &Polynomial::from_ints(Var::Zeta, &[0, 1, 2, 1]));
        assert_eq!(hm1.to_string(), "zeta(1+zeta)^2");

        assert!(mobius_substitute(&hm1, Direction::LambdaToZeta).is_err());
    }

    #[test]
    fn series_expand_examples() {
        let g0 = RationalFunction::new(Polynomial::variable(Var::Lambda), 1);
        assert_eq!(g0.series_expand(4), series(&[(0, 1), (1, 1), (1, 1), (1, 1), (1, 1)]));
        let gm1 = RationalFunction::new(Polynomial::variable(Var::Lambda), 3);
        assert_eq!(gm1.series_expand(3), series(&[(0, 1), (1, 1), (3, 1), (6, 1)]));
        let p = RationalFunction::from_polynomial(Polynomial::from_ints(Var::Lambda, &[2, 0, 5]));
        assert_eq!(p.series_expand(4), series(&[(2, 1), (0, 1), (5, 1), (0, 1), (0, 1)]));
    }

    #[test]
    fn series_expand_times_denominator_recovers_numerator() {
        // brute multiplication: series(f) * (1-lambda)^3 must be the numerator
        let gm2 = RationalFunction::new(Polynomial::from_ints(Var::Lambda, &[0, 1, 2]), 5);
        let s = gm2.series_expand(10);
        let back = s.mul(&PowerSeries::from_polynomial(&Polynomial::base(Var::Lambda).pow(5), 10));
        assert_eq!(back, PowerSeries::from_polynomial(gm2.numerator(), 10));
        let h = RationalFunction::new(Polynomial::from_ints(Var::Zeta, &[0, 3, 1]), 4);
        let back = h
            .series_expand(9)
            .mul(&PowerSeries::from_polynomial(&Polynomial::base(Var::Zeta).pow(4), 9));
        assert_eq!(back, PowerSeries::from_polynomial(h.numerator(), 9));
    }

    #[test]
    fn compose_examples() {
        // tree prefix n^(n-1)/n!
        let tree = series(&[(0, 1), (1, 1), (1, 1), (3, 2), (8, 3), (125, 24)]);
        let id = PowerSeries::identity(5);
        assert_eq!(id.compose(&tree).unwrap(), tree);

        let g2 = PowerSeries::from_polynomial(&lam(&[(0, 1), (1, 1), (-1, 2)]), 5);
        // n^(n-2)/n!: 0, 1, 1/2, 1/2, 2/3, 25/24
        assert_eq!(
            g2.compose(&tree).unwrap(),
            series(&[(0, 1), (1, 1), (1, 2), (1, 2), (2, 3), (25, 24)])
        );

        let outer = series(&[(7, 1), (1, 1), (3, 1)]);
        assert_eq!(
            outer.compose(&PowerSeries::zero(2)).unwrap(),
            series(&[(7, 1), (0, 1), (0, 1)])
        );

        assert!(matches!(
            outer.compose(&series(&[(1, 1), (1, 1), (0, 1)])),
            Err(Error::NonzeroInnerConstant(_))
        ));
    }

    #[test]
    fn reciprocal_of_geometric() {
        let one_minus_x = series(&[(1, 1), (-1, 1), (0, 1), (0, 1)]);
        assert_eq!(
            one_minus_x.reciprocal().unwrap(),
            series(&[(1, 1), (1, 1), (1, 1), (1, 1)])
        );
        assert!(PowerSeries::identity(3).reciprocal().is_err());
    }

    #[test]
    fn rendering() {
        let p = Polynomial::from_ints(Var::Lambda, &[1, 8, 6]);
        assert_eq!(p.to_string(), "1+8lambda+6lambda^2");
        let g = RationalFunction::new(p.shift(1), 7);
        assert_eq!(g.to_string(), "lambda(1+8lambda+6lambda^2)/(1-lambda)^7");
        assert_eq!(
            RationalFunction::new(Polynomial::variable(Var::Lambda), 1).to_string(),
            "lambda/(1-lambda)"
        );
        assert_eq!(
            RationalFunction::new(Polynomial::variable(Var::Zeta), 1).to_string(),
            "zeta/(1+zeta)"
        );
        let g3 = RationalFunction::from_polynomial(lam(&[(0, 1), (1, 1), (-3, 4), (1, 6)]));
        assert_eq!(g3.to_string(), "lambda-3/4lambda^2+1/6lambda^3");
        let h = RationalFunction::new(Polynomial::from_ints(Var::Zeta, &[1, 1]), 2);
        assert_eq!(h.to_string(), "1/(1+zeta)");
    }

    fn arb_poly(var: Var) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((-20i64..20, 1i64..6), 0..6)
            .prop_map(move |cs| Polynomial::new(var, cs.into_iter().map(|(p, d)| q(p, d)).collect()))
    }

    proptest! {
        #[test]
        fn mobius_round_trip(p in arb_poly(Var::Lambda), power in 0u32..6) {
            let f = RationalFunction::new(p, power);
            let z = mobius_substitute(&f, Direction::LambdaToZeta).unwrap();
            prop_assert!(z.is_canonical());
            let back = mobius_substitute(&z, Direction::ZetaToLambda).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn mobius_round_trip_from_zeta(p in arb_poly(Var::Zeta), power in 0u32..6) {
            let f = RationalFunction::new(p, power);
            let l = mobius_substitute(&f, Direction::ZetaToLambda).unwrap();
            prop_assert_eq!(mobius_substitute(&l, Direction::LambdaToZeta).unwrap(), f);
        }

        #[test]
        fn expansion_truncation_is_consistent(p in arb_poly(Var::Lambda), power in 0u32..5, n in 1usize..10) {
            let f = RationalFunction::new(p, power);
            prop_assert_eq!(f.series_expand(n).truncate(n - 1), f.series_expand(n - 1));
        }

        #[test]
        fn carlitz_derivative_undoes_weighted_integral(p in arb_poly(Var::Lambda), n in 1usize..10) {
            // drop the constant term so the integral is defined
            let mut cs = p.coeffs().to_vec();
            if !cs.is_empty() { cs[0] = ExactRational::zero(); }
            let p = Polynomial::new(Var::Lambda, cs);
            let ip = p.weighted_integral().unwrap();
            prop_assert!(ip.coeff(0).is_zero());
            // D(q) = (lambda/(1-lambda)) q'
            let d = RationalFunction::new(ip.derivative().shift(1), 1);
            prop_assert_eq!(d.series_expand(n), PowerSeries::from_polynomial(&p, n));
        }
    }
}
