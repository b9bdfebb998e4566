//! Ground truth taken directly from the defining sums.
//!
//! Closed forms are checked by composing them with truncations of
//! `T(z) = sum n^(n-1) z^n/n!` and `Z(z) = sum n^n z^n/n!` and comparing with
//! `R_m(z) = sum n^(n-m) z^n/n!` term by term. Nothing here shares a code
//! path with the recurrences that build the closed forms, apart from the
//! generic series arithmetic.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::carlitz_seq::CarlitzSequence;
use crate::error::{Error, Result};
use crate::exact_arith::{factorial, ExactRational};
use crate::poly_algebra::{PowerSeries, Var};

/// Default cap on the number of matrices [`g_probability_bruteforce`] may visit.
pub const DEFAULT_ENUM_BUDGET: u64 = 200_000;

/// Which defining series a prefix truncates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EgfKind {
    /// `T(z)`, coefficients `n^(n-1)/n!`.
    Tree,
    /// `Z(z)`, coefficients `n^n/n!`.
    Endo,
    /// `R_m(z)`, coefficients `n^(n-m)/n!`.
    ROfM(i64),
}

impl EgfKind {
    fn shift(self) -> i64 {
        match self {
            EgfKind::Tree => 1,
            EgfKind::Endo => 0,
            EgfKind::ROfM(m) => m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgfPrefix {
    pub kind: EgfKind,
    pub series: PowerSeries,
}

impl EgfPrefix {
    pub fn order(&self) -> usize {
        self.series.order()
    }
}

/// Exact coefficients `n^(n-m)/n!` for `1 <= n <= order`; the exponent may be negative.
pub fn egf_prefix(kind: EgfKind, order: usize) -> EgfPrefix {
    let m = kind.shift();
    let coeffs = (0..=order as i64)
        .map(|n| {
            if n == 0 {
                return ExactRational::zero();
            }
            let e = i32::try_from(n - m).expect("exponent fits in i32");
            ExactRational::from(n).pow(e) / ExactRational::from_integer(factorial(n).expect("n >= 0"))
        })
        .collect();
    EgfPrefix {
        kind,
        series: PowerSeries::new(coeffs),
    }
}

/// Checks `Z = T / (1 - T)` through `order`, by series division.
pub fn verify_lambda_zeta_relation(order: usize) -> bool {
    let t = egf_prefix(EgfKind::Tree, order).series;
    let endo = egf_prefix(EgfKind::Endo, order).series;
    let one_minus_t = PowerSeries::one(order).sub(&t);
    match one_minus_t.reciprocal() {
        Ok(inv) => t.mul(&inv) == endo,
        Err(_) => false,
    }
}

/// Outcome of checking one entry against the defining series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub m: i64,
    pub order: usize,
    pub lambda_ok: bool,
    pub zeta_ok: bool,
}

impl ClosedFormCheck {
    pub fn passed(&self) -> bool {
        self.lambda_ok && self.zeta_ok
    }
}

/// Composes `G_m` with `T(z)` and `H_m` with `Z(z)` and compares both with `R_m(z)`.
pub fn check_closed_form(seq: &mut CarlitzSequence, m: i64, order: usize) -> Result<ClosedFormCheck> {
    let entry = seq.build(m)?;
    let target = egf_prefix(EgfKind::ROfM(m), order).series;
    let tree = egf_prefix(EgfKind::Tree, order).series;
    let endo = egf_prefix(EgfKind::Endo, order).series;
    let g = entry.form(Var::Lambda).series_expand(order).compose(&tree)?;
    let h = entry.form(Var::Zeta).series_expand(order).compose(&endo)?;
    Ok(ClosedFormCheck {
        m,
        order,
        lambda_ok: g == target,
        zeta_ok: h == target,
    })
}

pub fn verify_closed_form(seq: &mut CarlitzSequence, m: i64, order: usize) -> bool {
    check_closed_form(seq, m, order).is_ok_and(|c| c.passed())
}

/// All permutations of `0..k` (value `0` plays the role of the number 1).
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// Over all `k x (m-k+1)` matrices whose columns are permutations of
/// `{1..k}`, the fraction in which no value lies strictly below the entry `1`
/// in every column.
///
/// By inclusion-exclusion over the set of values forced below `1`, this
/// fraction is `sum_j C(k-1,j) (-1)^j / (j+1)^(m-k+1) = (k-1)! g(m,k)`. It
/// therefore equals `g(m,k)` only for `k <= 2`.
pub fn g_probability_bruteforce(m: i64, k: i64, budget: u64) -> Result<ExactRational> {
    if k < 1 || k > m {
        return Err(Error::OutOfRange(format!("need 1 <= k <= m, got m={m}, k={k}")));
    }
    let cols = (m - k + 1) as u32;
    let total: BigInt = factorial(k)?.pow(cols);
    if total > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: total.to_string(),
            budget,
        });
    }
    let k = k as usize;
    // bitmask of values sitting strictly below the 1 in each column permutation
    let masks: Vec<u64> = permutations(k)
        .iter()
        .map(|p| {
            let pos_of_one = p.iter().position(|&v| v == 0).expect("permutation holds 0");
            p[pos_of_one + 1..].iter().fold(0u64, |acc, &v| acc | (1 << v))
        })
        .collect();

    fn walk(masks: &[u64], cols_left: u32, acc: u64, good: &mut u64) {
        if cols_left == 0 {
            if acc == 0 {
                *good += 1;
            }
            return;
        }
        for &mk in masks {
            walk(masks, cols_left - 1, acc & mk, good);
        }
    }
    let mut good = 0u64;
    let all_values = (if k >= 64 { u64::MAX } else { (1u64 << k) - 1 }) & !1;
    walk(&masks, cols, all_values, &mut good);
    Ok(ExactRational::new(BigInt::from(good), total))
}

/// Every `(m,k)` with `1 <= k <= m <= m_max` and `(k!)^(m-k+1) <= budget`.
pub fn probability_cells(m_max: i64, budget: u64) -> Vec<(i64, i64)> {
    let mut cells = Vec::new();
    for m in 1..=m_max {
        for k in 1..=m {
            let size = factorial(k).expect("k >= 1").pow((m - k + 1) as u32);
            if size.to_u64().is_some_and(|s| s <= budget) {
                cells.push((m, k));
            }
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangles::Tables;

    fn q(p: i64, d: i64) -> ExactRational {
        ExactRational::new(p, d)
    }

    fn series(coeffs: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::new(coeffs.iter().map(|&(p, d)| q(p, d)).collect())
    }

    #[test]
    fn prefix_examples() {
        assert_eq!(
            egf_prefix(EgfKind::Tree, 4).series,
            series(&[(0, 1), (1, 1), (1, 1), (3, 2), (8, 3)])
        );
        assert_eq!(
            egf_prefix(EgfKind::Endo, 3).series,
            series(&[(0, 1), (1, 1), (2, 1), (9, 2)])
        );
        assert_eq!(
            egf_prefix(EgfKind::ROfM(2), 3).series,
            series(&[(0, 1), (1, 1), (1, 2), (1, 2)])
        );
        // n^(n-m) with m > n becomes 1/n^(m-n)
        assert_eq!(egf_prefix(EgfKind::ROfM(5), 2).series.coeff(2), q(1, 16));
    }

    #[test]
    fn prefix_aliases() {
        assert_eq!(
            egf_prefix(EgfKind::ROfM(1), 12).series,
            egf_prefix(EgfKind::Tree, 12).series
        );
        assert_eq!(
            egf_prefix(EgfKind::ROfM(0), 12).series,
            egf_prefix(EgfKind::Endo, 12).series
        );
    }

    #[test]
    fn lambda_zeta_relation() {
        assert!(verify_lambda_zeta_relation(1));
        assert!(verify_lambda_zeta_relation(8));
        assert!(verify_lambda_zeta_relation(12));
    }

    #[test]
    fn closed_form_examples() {
        let mut seq = CarlitzSequence::new();
        assert!(verify_closed_form(&mut seq, 2, 8));
        assert!(verify_closed_form(&mut seq, -3, 10));
        assert!(verify_closed_form(&mut seq, 0, 12));
    }

    #[test]
    fn closed_form_detects_wrong_index() {
        // G_2 composed with T is R_2, not R_3
        let entry = CarlitzSequence::new().build(2).unwrap();
        let tree = egf_prefix(EgfKind::Tree, 6).series;
        let composed = entry.lambda_form.series_expand(6).compose(&tree).unwrap();
        assert_ne!(composed, egf_prefix(EgfKind::ROfM(3), 6).series);
    }

    #[test]
    fn probability_examples() {
        assert_eq!(g_probability_bruteforce(2, 2, DEFAULT_ENUM_BUDGET).unwrap(), q(1, 2));
        // single column of {1,2,3}: only "1 at the bottom" succeeds
        assert_eq!(g_probability_bruteforce(3, 3, DEFAULT_ENUM_BUDGET).unwrap(), q(1, 3));
        assert_eq!(g_probability_bruteforce(4, 2, DEFAULT_ENUM_BUDGET).unwrap(), q(7, 8));
        assert!(matches!(
            g_probability_bruteforce(12, 4, DEFAULT_ENUM_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(g_probability_bruteforce(2, 3, DEFAULT_ENUM_BUDGET).is_err());
    }

    #[test]
    fn probability_is_scaled_g_on_small_cells() {
        let mut t = Tables::new();
        for (m, k) in probability_cells(7, 20_000) {
            let scale = ExactRational::from_integer(factorial(k - 1).unwrap());
            let p = g_probability_bruteforce(m, k, 20_000).unwrap();
            assert_eq!(p, scale * t.g_rec(m, k), "({m},{k})");
            if k <= 2 {
                assert_eq!(p, t.g_rec(m, k));
            }
        }
    }

    #[test]
    fn cells_respect_budget() {
        let cells = probability_cells(18, DEFAULT_ENUM_BUDGET);
        assert!(cells.contains(&(18, 2)));
        assert!(!cells.contains(&(9, 3)));
        assert!(cells.contains(&(8, 3)));
        assert!(cells.contains(&(8, 8)));
        assert!(!cells.contains(&(9, 9)));
    }
}
