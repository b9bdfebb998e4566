//! The bilateral sequence `G_m(lambda) = H_m(zeta) = R_m(z)`.
//!
//! Entries with `m >= 1` are produced from `G_1 = lambda` by the weighted
//! integral operator; entries with `m <= 0` by the Carlitz differential
//! operator `(lambda/(1-lambda)) d/dlambda`. The zeta form is always the
//! Möbius pullback of the lambda form. Every built entry is compared against
//! the closed forms assembled from the coefficient triangles.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::ExactRational;
use crate::poly_algebra::{mobius_substitute, Direction, Polynomial, RationalFunction, Var};
use crate::triangles::{Rule, Tables};

pub const DEFAULT_BOUND: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceEntry {
    pub m: i64,
    pub lambda_form: RationalFunction,
    pub zeta_form: RationalFunction,
}

impl SequenceEntry {
    /// Pairs a lambda form with its zeta pullback.
    pub fn from_lambda(m: i64, lambda_form: RationalFunction) -> Result<Self> {
        let zeta_form = mobius_substitute(&lambda_form, Direction::LambdaToZeta)?;
        Ok(SequenceEntry {
            m,
            lambda_form,
            zeta_form,
        })
    }

    pub fn form(&self, var: Var) -> &RationalFunction {
        match var {
            Var::Lambda => &self.lambda_form,
            Var::Zeta => &self.zeta_form,
        }
    }

    /// `G_{-3}`-style label.
    pub fn label(&self, var: Var) -> String {
        let letter = match var {
            Var::Lambda => 'G',
            Var::Zeta => 'H',
        };
        if self.m < 0 {
            format!("{letter}_{{{}}}", self.m)
        } else {
            format!("{letter}_{}", self.m)
        }
    }

    /// One display line, e.g. `G_{-3} = lambda(1+8lambda+6lambda^2)/(1-lambda)^7`.
    pub fn render(&self, var: Var) -> String {
        format!("{} = {}", self.label(var), self.form(var))
    }

    pub fn to_record(&self, var: Var) -> EntryRecord {
        let f = self.form(var);
        EntryRecord {
            m: self.m,
            variable: var.name(),
            numerator_coeffs: f.numerator().coeffs().iter().map(ToString::to_string).collect(),
            base: var.base_label(),
            power: f.power(),
        }
    }
}

/// Structured form of one sequence entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryRecord {
    pub m: i64,
    pub variable: &'static str,
    pub numerator_coeffs: Vec<String>,
    pub base: &'static str,
    pub power: u32,
}

/// `(lambda/(1-lambda)) d/dlambda`.
pub fn carlitz_lambda(f: &RationalFunction) -> Result<RationalFunction> {
    if f.var() != Var::Lambda {
        return Err(Error::VariableMismatch {
            left: "lambda",
            right: f.var().name(),
        });
    }
    Ok(f.derivative()
        .mul_poly(&Polynomial::variable(Var::Lambda))?
        .mul_base_pow(-1))
}

/// `zeta (1+zeta)^2 d/dzeta`.
pub fn carlitz_zeta(f: &RationalFunction) -> Result<RationalFunction> {
    if f.var() != Var::Zeta {
        return Err(Error::VariableMismatch {
            left: "zeta",
            right: f.var().name(),
        });
    }
    Ok(f.derivative()
        .mul_poly(&Polynomial::variable(Var::Zeta))?
        .mul_base_pow(2))
}

/// `G_m -> G_{m+1}` by the weighted integral; polynomial regime only.
pub fn apply_integral_operator(entry: &SequenceEntry) -> Result<SequenceEntry> {
    let Some(p) = entry.lambda_form.as_polynomial() else {
        return Err(Error::NotPolynomial(entry.lambda_form.power()));
    };
    if entry.m < 1 {
        return Err(Error::OutOfRange(format!(
            "integral operator needs m >= 1, got {}",
            entry.m
        )));
    }
    let next = RationalFunction::from_polynomial(p.weighted_integral()?);
    SequenceEntry::from_lambda(entry.m + 1, next)
}

/// `G_m -> G_{m-1}`; the zeta form follows by pullback.
pub fn apply_diff_operator_lambda(entry: &SequenceEntry) -> Result<SequenceEntry> {
    SequenceEntry::from_lambda(entry.m - 1, carlitz_lambda(&entry.lambda_form)?)
}

/// `H_m -> H_{m-1}`; the lambda form follows by the inverse pullback.
pub fn apply_diff_operator_zeta(entry: &SequenceEntry) -> Result<SequenceEntry> {
    let zeta_form = carlitz_zeta(&entry.zeta_form)?;
    let lambda_form = mobius_substitute(&zeta_form, Direction::ZetaToLambda)?;
    Ok(SequenceEntry {
        m: entry.m - 1,
        lambda_form,
        zeta_form,
    })
}

/// `G_m` and `H_m` assembled directly from triangle coefficients:
///
/// - `m >= 1`: `G_m = sum (-1)^(k-1) g(m,k) lambda^k`, `H_m = sum h(m,k) zeta^k / (1+zeta)^m`
/// - `m = -n <= 0`: `G_m = lambda sum <<n,k>> lambda^k / (1-lambda)^(2n+1)`,
///   `H_m = (1+zeta)^(n+1) sum_{k=1}^n {{n+k,k}} zeta^k` (with `H_0 = zeta`)
pub fn closed_form(tables: &mut Tables, m: i64) -> SequenceEntry {
    let q = ExactRational::from_integer;
    if m >= 1 {
        let mut lam = vec![ExactRational::zero()];
        lam.extend((1..=m).map(|k| ExactRational::sign_power(k - 1) * tables.g_rec(m, k)));
        let mut zeta = vec![ExactRational::zero()];
        zeta.extend((1..=m).map(|k| tables.h_rec(m, k)));
        SequenceEntry {
            m,
            lambda_form: RationalFunction::new(Polynomial::new(Var::Lambda, lam), 0),
            zeta_form: RationalFunction::new(Polynomial::new(Var::Zeta, zeta), m as u32),
        }
    } else {
        let n = -m;
        let lam: Vec<ExactRational> = std::iter::once(ExactRational::zero())
            .chain((0..=n).map(|k| q(tables.eulerian2(n, k))))
            .collect();
        let lambda_form = RationalFunction::new(Polynomial::new(Var::Lambda, lam), (2 * n + 1) as u32);
        let zeta_form = if n == 0 {
            RationalFunction::from_polynomial(Polynomial::variable(Var::Zeta))
        } else {
            let mut z = vec![ExactRational::zero()];
            z.extend((1..=n).map(|k| q(tables.stirling2_assoc(n + k, k))));
            RationalFunction::from_polynomial(Polynomial::new(Var::Zeta, z)).mul_base_pow(n + 1)
        };
        SequenceEntry {
            m,
            lambda_form,
            zeta_form,
        }
    }
}

/// A coefficient row read back out of a canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientRow {
    pub rule: Rule,
    pub m: i64,
    pub values: Vec<ExactRational>,
}

fn shape_error(entry: &SequenceEntry, var: Var, what: &str) -> Error {
    Error::NotCanonical(format!("{}: {what}", entry.render(var)))
}

/// Reads the defining coefficient row out of one form of an entry, without
/// consulting the triangles.
///
/// - lambda, `m >= 1`: the `g(m,k)` row (signs removed)
/// - lambda, `m <= 0`: the `<<|m|,k>>` row
/// - zeta, `m >= 1`: the `h(m,k)` row
/// - zeta, `m <= -1`: the `{{|m|+k,k}}` values, `k = 1..|m|`
pub fn read_row(entry: &SequenceEntry, var: Var) -> Result<CoefficientRow> {
    let f = entry.form(var);
    if !f.is_canonical() {
        return Err(shape_error(entry, var, "numerator divisible by the base factor"));
    }
    let m = entry.m;
    let num = f.numerator();
    if !num.coeff(0).is_zero() {
        return Err(shape_error(entry, var, "nonzero constant term"));
    }
    let (rule, values) = match (var, m >= 1) {
        (Var::Lambda, true) => {
            if f.power() != 0 || num.degree() != Some(m as usize) {
                return Err(shape_error(entry, var, "expected a degree-m polynomial"));
            }
            let vals = (1..=m)
                .map(|k| ExactRational::sign_power(k - 1) * num.coeff(k as usize))
                .collect();
            (Rule::G, vals)
        }
        (Var::Lambda, false) => {
            let n = -m;
            if f.power() as i64 != 2 * n + 1 {
                return Err(shape_error(entry, var, "expected denominator power 2|m|+1"));
            }
            let len = n.max(1) as usize;
            if num.degree().unwrap_or(0) > len {
                return Err(shape_error(entry, var, "numerator degree too large"));
            }
            (Rule::Eulerian2, (1..=len).map(|k| num.coeff(k)).collect())
        }
        (Var::Zeta, true) => {
            if f.power() as i64 != m || num.degree().is_some_and(|d| d > m as usize) {
                return Err(shape_error(entry, var, "expected (1+zeta)^m denominator"));
            }
            (Rule::H, (1..=m).map(|k| num.coeff(k as usize)).collect())
        }
        (Var::Zeta, false) => {
            let n = -m;
            if n == 0 {
                return Err(shape_error(entry, var, "H_0 = zeta carries no coefficient row"));
            }
            let mut cur = num.clone();
            for _ in 0..=n {
                cur = cur
                    .div_by_base()
                    .ok_or_else(|| shape_error(entry, var, "missing (1+zeta)^(|m|+1) factor"))?;
            }
            if cur.degree() != Some(n as usize) {
                return Err(shape_error(entry, var, "cofactor has the wrong degree"));
            }
            (Rule::Stirling2Assoc, (1..=n).map(|k| cur.coeff(k as usize)).collect())
        }
    };
    Ok(CoefficientRow { rule, m, values })
}

/// [`read_row`], then asserts the row equals the triangle module's values.
pub fn extract_row(tables: &mut Tables, entry: &SequenceEntry, var: Var) -> Result<CoefficientRow> {
    let row = read_row(entry, var)?;
    let m = entry.m;
    let expected: Vec<ExactRational> = match row.rule {
        Rule::G => (1..=m).map(|k| tables.g_rec(m, k)).collect(),
        Rule::H => (1..=m).map(|k| tables.h_rec(m, k)).collect(),
        Rule::Eulerian2 => (0..(-m).max(1))
            .map(|k| ExactRational::from_integer(tables.eulerian2(-m, k)))
            .collect(),
        Rule::Stirling2Assoc => (1..=-m)
            .map(|k| ExactRational::from_integer(tables.stirling2_assoc(-m + k, k)))
            .collect(),
        Rule::N => unreachable!("N is never read from a sequence entry"),
    };
    if expected != row.values {
        return Err(Error::Internal(format!(
            "{} row of {} disagrees with the {} triangle",
            var,
            entry.label(var),
            row.rule.name()
        )));
    }
    Ok(row)
}

/// Memoized builder for `G_m` / `H_m` with `|m| <= bound`.
#[derive(Clone, Debug)]
pub struct CarlitzSequence {
    bound: i64,
    entries: BTreeMap<i64, SequenceEntry>,
    tables: Tables,
}

impl Default for CarlitzSequence {
    fn default() -> Self {
        Self::new()
    }
}

impl CarlitzSequence {
    pub fn new() -> Self {
        Self::with_bound(DEFAULT_BOUND)
    }

    pub fn with_bound(bound: i64) -> Self {
        let g1 = SequenceEntry::from_lambda(1, RationalFunction::from_polynomial(Polynomial::variable(Var::Lambda)))
            .expect("lambda pulls back");
        let mut entries = BTreeMap::new();
        entries.insert(1, g1);
        CarlitzSequence {
            bound,
            entries,
            tables: Tables::new(),
        }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn tables(&mut self) -> &mut Tables {
        &mut self.tables
    }

    /// Builds (or returns the cached) entry for `m`, checked against [`closed_form`].
    pub fn build(&mut self, m: i64) -> Result<SequenceEntry> {
        if m.abs() > self.bound {
            return Err(Error::BoundExceeded { m, bound: self.bound });
        }
        if let Some(e) = self.entries.get(&m) {
            return Ok(e.clone());
        }
        let step: i64 = if m >= 1 { 1 } else { -1 };
        // nearest cached entry on the path from G_1
        let mut cur = m;
        while !self.entries.contains_key(&cur) {
            cur -= step;
        }
        while cur != m {
            let prev = &self.entries[&cur];
            let next = if step > 0 {
                apply_integral_operator(prev)?
            } else {
                apply_diff_operator_lambda(prev)?
            };
            let expected = closed_form(&mut self.tables, next.m);
            if expected != next {
                return Err(Error::Internal(format!(
                    "operator-built {} = {} but closed form gives {}",
                    next.label(Var::Lambda),
                    next.lambda_form,
                    expected.lambda_form
                )));
            }
            cur = next.m;
            self.entries.insert(cur, next);
        }
        Ok(self.entries[&m].clone())
    }

    /// Entries `m_min..=m_max` in increasing `m`.
    pub fn range(&mut self, m_min: i64, m_max: i64) -> Result<Vec<SequenceEntry>> {
        if m_min > m_max {
            return Err(Error::OutOfRange(format!("m_min {m_min} > m_max {m_max}")));
        }
        if let Some(m) = [m_min, m_max].into_iter().find(|m| m.abs() > self.bound) {
            return Err(Error::BoundExceeded { m, bound: self.bound });
        }
        (m_min..=m_max).map(|m| self.build(m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExactRational {
        ExactRational::new(p, d)
    }

    fn lam_poly(coeffs: &[(i64, i64)]) -> RationalFunction {
        RationalFunction::from_polynomial(Polynomial::new(
            Var::Lambda,
            coeffs.iter().map(|&(p, d)| q(p, d)).collect(),
        ))
    }

    #[test]
    fn integral_operator_examples() {
        let mut seq = CarlitzSequence::new();
        let g1 = seq.build(1).unwrap();
        let g2 = apply_integral_operator(&g1).unwrap();
        assert_eq!(g2.lambda_form, lam_poly(&[(0, 1), (1, 1), (-1, 2)]));
        let g3 = seq.build(3).unwrap();
        let g4 = apply_integral_operator(&g3).unwrap();
        assert_eq!(g4.lambda_form, lam_poly(&[(0, 1), (1, 1), (-7, 8), (11, 36), (-1, 24)]));
        let g6 = apply_integral_operator(&seq.build(5).unwrap()).unwrap();
        assert_eq!(g6.lambda_form.numerator().coeff(5), q(137, 7200));

        let g0 = seq.build(0).unwrap();
        assert!(matches!(apply_integral_operator(&g0), Err(Error::NotPolynomial(1))));
    }

    #[test]
    fn lambda_diff_operator_examples() {
        let mut seq = CarlitzSequence::new();
        let g0 = apply_diff_operator_lambda(&seq.build(1).unwrap()).unwrap();
        assert_eq!(g0.lambda_form.to_string(), "lambda/(1-lambda)");
        let gm1 = apply_diff_operator_lambda(&g0).unwrap();
        assert_eq!(gm1.lambda_form.to_string(), "lambda/(1-lambda)^3");
        let gm3 = apply_diff_operator_lambda(&seq.build(-2).unwrap()).unwrap();
        assert_eq!(gm3.lambda_form.to_string(), "lambda(1+8lambda+6lambda^2)/(1-lambda)^7");
    }

    #[test]
    fn zeta_diff_operator_examples() {
        let mut seq = CarlitzSequence::new();
        let h1 = seq.build(1).unwrap();
        assert_eq!(h1.zeta_form.to_string(), "zeta/(1+zeta)");
        let h0 = apply_diff_operator_zeta(&h1).unwrap();
        assert_eq!(h0.zeta_form.to_string(), "zeta");
        let hm1 = apply_diff_operator_zeta(&h0).unwrap();
        assert_eq!(hm1.zeta_form.to_string(), "zeta(1+zeta)^2");
        let hm2 = apply_diff_operator_zeta(&hm1).unwrap();
        assert_eq!(hm2.zeta_form.to_string(), "zeta(1+zeta)^3(1+3zeta)");
        assert_eq!(hm2, seq.build(-2).unwrap());
    }

    #[test]
    fn build_examples() {
        let mut seq = CarlitzSequence::new();
        let e0 = seq.build(0).unwrap();
        assert_eq!(e0.lambda_form.to_string(), "lambda/(1-lambda)");
        assert_eq!(e0.zeta_form.to_string(), "zeta");
        let e = seq.build(-4).unwrap();
        assert_eq!(
            e.lambda_form.to_string(),
            "lambda(1+22lambda+58lambda^2+24lambda^3)/(1-lambda)^9"
        );
        assert_eq!(e.zeta_form.to_string(), "zeta(1+zeta)^5(1+25zeta+105zeta^2+105zeta^3)");
        let g5 = seq.build(5).unwrap();
        assert_eq!(
            g5.lambda_form,
            lam_poly(&[(0, 1), (1, 1), (-15, 16), (85, 216), (-25, 288), (1, 120)])
        );
        assert!(matches!(seq.build(65), Err(Error::BoundExceeded { .. })));
        assert!(matches!(
            CarlitzSequence::with_bound(3).build(-4),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn extract_row_examples() {
        let mut seq = CarlitzSequence::new();
        let mut t = Tables::new();
        let strs = |r: CoefficientRow| r.values.iter().map(ToString::to_string).collect::<Vec<_>>();

        let r = extract_row(&mut t, &seq.build(-5).unwrap(), Var::Lambda).unwrap();
        assert_eq!(r.rule, Rule::Eulerian2);
        assert_eq!(strs(r), ["1", "52", "328", "444", "120"]);

        let r = extract_row(&mut t, &seq.build(6).unwrap(), Var::Lambda).unwrap();
        assert_eq!(r.rule, Rule::G);
        assert_eq!(strs(r), ["1", "31/32", "575/1296", "415/3456", "137/7200", "1/720"]);

        let r = extract_row(&mut t, &seq.build(5).unwrap(), Var::Zeta).unwrap();
        assert_eq!(r.rule, Rule::H);
        assert_eq!(strs(r), ["1", "49/16", "1547/432", "1631/864", "1631/4320"]);

        let r = extract_row(&mut t, &seq.build(-5).unwrap(), Var::Zeta).unwrap();
        assert_eq!(r.rule, Rule::Stirling2Assoc);
        assert_eq!(strs(r), ["1", "56", "490", "1260", "945"]);

        let r = extract_row(&mut t, &seq.build(0).unwrap(), Var::Lambda).unwrap();
        assert_eq!(strs(r), ["1"]);
        assert!(extract_row(&mut t, &seq.build(0).unwrap(), Var::Zeta).is_err());
    }

    #[test]
    fn extract_row_rejects_wrong_shape() {
        let mut t = Tables::new();
        let bogus = SequenceEntry::from_lambda(3, lam_poly(&[(0, 1), (1, 1)])).unwrap();
        assert!(matches!(
            extract_row(&mut t, &bogus, Var::Lambda),
            Err(Error::NotCanonical(_))
        ));
        let wrong_values = SequenceEntry::from_lambda(2, lam_poly(&[(0, 1), (1, 1), (-1, 3)])).unwrap();
        assert!(matches!(
            extract_row(&mut t, &wrong_values, Var::Lambda),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn operator_round_trip() {
        let mut seq = CarlitzSequence::new();
        for m in 1..=12 {
            let g = seq.build(m).unwrap();
            let back = apply_diff_operator_lambda(&apply_integral_operator(&g).unwrap()).unwrap();
            assert_eq!(back, g, "m={m}");
        }
    }

    #[test]
    fn dual_construction_and_commutation() {
        let mut seq = CarlitzSequence::new();
        let mut t = Tables::new();
        for m in -8..=12 {
            let e = seq.build(m).unwrap();
            assert_eq!(e, closed_form(&mut t, m), "m={m}");
            let via_lambda = apply_diff_operator_lambda(&e).unwrap();
            let via_zeta = apply_diff_operator_zeta(&e).unwrap();
            assert_eq!(via_lambda, via_zeta, "m={m}");
        }
    }

    #[test]
    fn leading_and_trailing_coefficients() {
        let mut seq = CarlitzSequence::new();
        for m in 1..=12i64 {
            let g = seq.build(m).unwrap();
            let fact = crate::exact_arith::factorial(m).unwrap();
            let expect = ExactRational::sign_power(m - 1) / ExactRational::from_integer(fact);
            assert_eq!(g.lambda_form.numerator().leading_coeff(), expect);
            assert_eq!(g.lambda_form.numerator().degree(), Some(m as usize));

            let gm = seq.build(-m).unwrap();
            let fact = crate::exact_arith::factorial(m).unwrap();
            assert_eq!(
                gm.lambda_form.numerator().leading_coeff(),
                ExactRational::from_integer(fact)
            );
            assert!(gm
                .lambda_form
                .numerator()
                .coeffs()
                .iter()
                .all(|c| c.is_integer() && *c >= 0));
        }
    }

    #[test]
    fn json_record_of_g0() {
        let mut seq = CarlitzSequence::new();
        let rec = seq.build(0).unwrap().to_record(Var::Lambda);
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"m":0,"variable":"lambda","numerator_coeffs":["0","1"],"base":"1-lambda","power":1}"#
        );
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

        #[test]
        fn forms_are_canonical_and_agree(m in -16i64..=16) {
            let mut seq = CarlitzSequence::new();
            let e = seq.build(m).unwrap();
            proptest::prop_assert!(e.lambda_form.is_canonical() && e.zeta_form.is_canonical());
            let back = mobius_substitute(&e.zeta_form, Direction::ZetaToLambda).unwrap();
            proptest::prop_assert_eq!(&back, &e.lambda_form);
            proptest::prop_assert_eq!(&closed_form(seq.tables(), m), &e);
        }

        #[test]
        fn operators_are_mutually_inverse(m in -12i64..=12) {
            let mut seq = CarlitzSequence::new();
            let e = seq.build(m).unwrap();
            let down = apply_diff_operator_lambda(&e).unwrap();
            proptest::prop_assert_eq!(&down, &seq.build(m - 1).unwrap());
            let zeta_down = carlitz_zeta(&e.zeta_form).unwrap();
            proptest::prop_assert_eq!(&zeta_down, &down.zeta_form);
            if m >= 1 {
                proptest::prop_assert_eq!(&apply_integral_operator(&down).unwrap(), &e);
            }
        }
    }
}
