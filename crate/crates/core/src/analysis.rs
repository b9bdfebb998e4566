//! Quantitative laws for `h(m,k)` and the Eulerian row sums.
//!
//! Decimal output is produced from exact rationals; comparisons against `1/e`
//! use a rational partial sum with an explicit error bound, so every verdict
//! is certified rather than read off a float.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{binomial, double_factorial_odd, factorial, superfactorial, ExactRational};
use crate::triangles::Tables;

/// Terms of the alternating series used for `1/e`.
const INV_E_TERMS: i64 = 60;

/// Significant digits printed for the `1/e` gaps.
pub const GAP_DIGITS: usize = 30;

/// `sum_{j=0}^{J} (-1)^j / j!` and the bound `1/(J+1)!` on its distance to `1/e`.
pub fn inv_e_approx(terms: i64) -> (ExactRational, ExactRational) {
    let mut sum = ExactRational::zero();
    let mut fact = BigInt::from(1);
    for j in 0..=terms {
        if j > 0 {
            fact *= BigInt::from(j);
        }
        sum += ExactRational::sign_power(j) / ExactRational::from_integer(fact.clone());
    }
    let err = ExactRational::from_integer(factorial(terms + 1).expect("nonnegative")).recip();
    (sum, err)
}

/// `sum_{j=1}^m (-1)^(j-1) h(m,j)` and whether it equals `1/m!`.
pub fn alternating_sum_h(tables: &mut Tables, m: i64) -> Result<(ExactRational, bool)> {
    if m < 1 {
        return Err(Error::OutOfRange(format!("need m >= 1, got {m}")));
    }
    let s: ExactRational = (1..=m)
        .map(|j| ExactRational::sign_power(j - 1) * tables.h_rec(m, j))
        .sum();
    let target = ExactRational::from_integer(factorial(m)?).recip();
    let ok = s == target;
    Ok((s, ok))
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagPoint {
    pub m: i64,
    #[serde(serialize_with = "ser_display")]
    pub h: ExactRational,
    /// `|h(m,m) - E|` where `E` approximates `1/e`.
    #[serde(skip)]
    pub gap: ExactRational,
    pub gap_decimal: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagTrend {
    pub points: Vec<DiagPoint>,
    /// Certified: each gap exceeds the next by more than twice the `1/e` error bound.
    pub strictly_decreasing: bool,
    #[serde(skip)]
    pub inv_e_error: ExactRational,
    pub precision: String,
}

impl DiagTrend {
    /// Certified `|h(m,m) - 1/e| < bound` for the point at `m`.
    pub fn gap_below(&self, m: i64, bound: &ExactRational) -> Option<bool> {
        self.points
            .iter()
            .find(|p| p.m == m)
            .map(|p| &(&p.gap + &self.inv_e_error) < bound)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# |h(m,m) - 1/e|, {}", self.precision);
        for p in &self.points {
            let _ = writeln!(out, "{:>4}  {:<28}  {}", p.m, p.h.to_string(), p.gap_decimal);
        }
        let _ = writeln!(out, "strictly_decreasing {}", self.strictly_decreasing);
        out
    }
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Gaps between `h(m,m)` and `1/e` for `2 <= m <= max_m`.
pub fn diag_limit_trend(tables: &mut Tables, max_m: i64) -> Result<DiagTrend> {
    if max_m < 2 {
        return Err(Error::OutOfRange(format!("need M >= 2, got {max_m}")));
    }
    let (inv_e, err) = inv_e_approx(INV_E_TERMS);
    let points: Vec<DiagPoint> = (2..=max_m)
        .map(|m| {
            let h = tables.h_rec(m, m);
            let gap = (&h - &inv_e).abs();
            let gap_decimal = gap.to_scientific(GAP_DIGITS);
            DiagPoint { m, h, gap, gap_decimal }
        })
        .collect();
    let twice_err = &err + &err;
    let strictly_decreasing = points.windows(2).all(|w| &w[0].gap - &w[1].gap > twice_err);
    Ok(DiagTrend {
        points,
        strictly_decreasing,
        precision: format!(
            "{GAP_DIGITS} significant digits (truncated); 1/e within {}",
            err.to_scientific(3)
        ),
        inv_e_error: err,
    })
}

/// Both `1!2!...m! h(m,k)` and `(1!2!...k!)^(m-k+1) h(m,k)` are integers for all `1 <= k <= m`.
pub fn integrality_check(tables: &mut Tables, m: i64) -> bool {
    if m < 1 {
        return false;
    }
    let sf_m = ExactRational::from_integer(superfactorial(m as u64));
    (1..=m).all(|k| {
        let h = tables.h_rec(m, k);
        let sf_k = ExactRational::from_integer(superfactorial(k as u64)).pow((m - k + 1) as i32);
        (&sf_m * &h).is_integer() && (&sf_k * &h).is_integer()
    })
}

/// `sum_k <<n,k>> = (2n-1)!!`.
pub fn eulerian2_rowsum_check(tables: &mut Tables, n: i64) -> bool {
    if n < 1 {
        return false;
    }
    let s: BigInt = (0..n).map(|k| tables.eulerian2(n, k)).sum();
    s == double_factorial_odd(n as u64)
}

/// Iterated forward differences; row `j` has `len - j` entries.
pub fn difference_table(values: &[ExactRational]) -> Vec<Vec<ExactRational>> {
    let mut rows = vec![values.to_vec()];
    while rows.last().is_some_and(|r| r.len() > 1) {
        let prev = rows.last().unwrap();
        let next = prev.windows(2).map(|w| &w[1] - &w[0]).collect();
        rows.push(next);
    }
    rows
}

/// `(k-1)! h(m,k)`.
pub fn scaled_h(tables: &mut Tables, m: i64, k: i64) -> ExactRational {
    ExactRational::from_integer(factorial(k - 1).expect("k >= 1")) * tables.h_rec(m, k)
}

#[derive(Clone, Debug)]
pub struct FitTolerance {
    /// Maximum gap between the last two `(k-1)`-th differences.
    pub stabilization: ExactRational,
    /// Maximum distance of an interpolated coefficient from the integer it is rounded to.
    pub coefficient: ExactRational,
}

impl Default for FitTolerance {
    fn default() -> Self {
        FitTolerance {
            stabilization: ExactRational::new(1, 1_000_000),
            coefficient: ExactRational::new(1, 1_000_000),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AsymptoticReport {
    pub k: i64,
    pub m_range: (i64, i64),
    pub scaled_values: Vec<ExactRational>,
    pub difference_table: Vec<Vec<ExactRational>>,
    /// `|last - previous|` in the `(k-1)`-th difference row.
    pub stabilization_gap: ExactRational,
    pub stabilized: bool,
    /// Forward differences at the anchor `m_0`, so `p(m) = sum_j c_j C(m - m_0, j)`.
    pub newton_anchor: i64,
    pub newton_coeffs: Vec<ExactRational>,
    /// The exact degree-`(k-1)` interpolant through the last `k` points, in powers of `m`.
    pub interpolant: Vec<ExactRational>,
    /// Integer coefficients in powers of `m`, present when stabilized and every
    /// interpolated coefficient is within tolerance of an integer.
    pub fitted_polynomial: Option<Vec<BigInt>>,
    /// The fitted polynomial in powers of `m - 3`.
    pub shifted_basis: Option<Vec<BigInt>>,
}

/// Shift of argument: coefficients of `p(x + s)` given those of `p(x)`.
fn taylor_shift(coeffs: &[ExactRational], s: i64) -> Vec<ExactRational> {
    let n = coeffs.len();
    (0..n)
        .map(|j| {
            (j..n)
                .map(|i| {
                    &coeffs[i]
                        * &ExactRational::from_integer(binomial(i as i64, j as i64))
                        * ExactRational::from(s).pow((i - j) as i32)
                })
                .sum()
        })
        .collect()
}

/// Newton form at `anchor` converted to powers of `m`.
fn newton_to_monomial(newton: &[ExactRational], anchor: i64) -> Vec<ExactRational> {
    // build sum_j c_j C(x, j) in powers of x = m - anchor, then shift back
    let n = newton.len();
    let mut acc = vec![ExactRational::zero(); n];
    // falling factorial x(x-1)...(x-j+1) / j!
    let mut basis = vec![ExactRational::one()];
    for (j, c) in newton.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            acc[i] += c * b;
        }
        // basis *= (x - j) / (j + 1)
        let mut next = vec![ExactRational::zero(); basis.len() + 1];
        let denom = ExactRational::from(j as i64 + 1);
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b / &denom;
            next[i] -= b * &ExactRational::from(j as i64) / denom.clone();
        }
        basis = next;
    }
    taylor_shift(&acc, -anchor)
}

fn round_within(coeffs: &[ExactRational], tol: &ExactRational) -> Option<Vec<BigInt>> {
    coeffs
        .iter()
        .map(|c| {
            let r = c.round();
            ((c - &ExactRational::from_integer(r.clone())).abs() <= *tol).then_some(r)
        })
        .collect()
}

/// Difference-table fit of `(k-1)! h(m,k)` over a window ending at `max_m`.
///
/// The window is `[max_m - w + 1, max_m]` with `w = max(9, k + 1)` points.
pub fn asym_fit(tables: &mut Tables, k: i64, max_m: i64, tol: &FitTolerance) -> Result<AsymptoticReport> {
    if k < 2 {
        return Err(Error::Domain(format!(
            "k = {k}: h(m,1) = 1 for every m, so there is nothing to fit (need k >= 2)"
        )));
    }
    let w = 9i64.max(k + 1);
    if max_m < k + w - 1 {
        return Err(Error::OutOfRange(format!(
            "need m_max >= {} for k = {k}, got {max_m}",
            k + w - 1
        )));
    }
    let lo = max_m - w + 1;
    let scaled_values: Vec<ExactRational> = (lo..=max_m).map(|m| scaled_h(tables, m, k)).collect();
    let table = difference_table(&scaled_values);
    let d = (k - 1) as usize;
    let row = &table[d];
    let stabilization_gap = (&row[row.len() - 1] - &row[row.len() - 2]).abs();
    let stabilized = stabilization_gap < tol.stabilization;

    // interpolate through the last k points
    let anchor = max_m - k + 1;
    let start = (anchor - lo) as usize;
    let newton: Vec<ExactRational> = (0..=d).map(|j| table[j][start].clone()).collect();
    let interpolant = newton_to_monomial(&newton, anchor);
    let fitted_polynomial = if stabilized {
        round_within(&interpolant, &tol.coefficient)
    } else {
        None
    };
    let shifted_basis = fitted_polynomial.as_ref().map(|p| {
        let as_q: Vec<ExactRational> = p.iter().cloned().map(ExactRational::from_integer).collect();
        taylor_shift(&as_q, 3)
            .into_iter()
            .map(|c| c.to_integer().expect("integer shift of integer polynomial"))
            .collect()
    });
    Ok(AsymptoticReport {
        k,
        m_range: (lo, max_m),
        scaled_values,
        difference_table: table,
        stabilization_gap,
        stabilized,
        newton_anchor: anchor,
        newton_coeffs: newton,
        interpolant,
        fitted_polynomial,
        shifted_basis,
    })
}

/// `|Delta^order [(k-1)! h(., k)](m)|` for `m_from <= m <= m_to`.
pub fn difference_magnitudes(
    tables: &mut Tables,
    k: i64,
    order: usize,
    m_from: i64,
    m_to: i64,
) -> Vec<(i64, ExactRational)> {
    let values: Vec<ExactRational> = (m_from..=m_to + order as i64).map(|m| scaled_h(tables, m, k)).collect();
    let table = difference_table(&values);
    table[order]
        .iter()
        .enumerate()
        .map(|(i, v)| (m_from + i as i64, v.abs()))
        .collect()
}

/// Renders integer coefficients (ascending powers) as e.g. `m^2-5m+7`.
pub fn render_poly(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if i == 0 || mag != BigInt::from(1) {
            let _ = write!(out, "{mag}");
        }
        match i {
            0 => {}
            1 => out.push_str(var),
            _ => {
                let _ = write!(out, "{var}^{i}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl AsymptoticReport {
    pub fn fitted_string(&self) -> Option<String> {
        self.fitted_polynomial.as_ref().map(|p| render_poly(p, "m"))
    }

    pub fn shifted_string(&self) -> Option<String> {
        self.shifted_basis.as_ref().map(|p| render_poly(p, "(m-3)"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[ExactRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        let ints = |v: &Vec<BigInt>| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        serde_json::json!({
            "k": self.k,
            "m_range": [self.m_range.0, self.m_range.1],
            "scaled_values": strs(&self.scaled_values),
            "difference_table": self.difference_table.iter().map(|r| strs(r)).collect::<Vec<_>>(),
            "stabilization_gap": self.stabilization_gap.to_scientific(6),
            "stabilized": self.stabilized,
            "newton_anchor": self.newton_anchor,
            "newton_coeffs": strs(&self.newton_coeffs),
            "interpolant": strs(&self.interpolant),
            "fitted_polynomial": self.fitted_polynomial.as_ref().map(ints),
            "fitted": self.fitted_string(),
            "shifted_basis": self.shifted_basis.as_ref().map(ints),
            "shifted": self.shifted_string(),
        })
    }

    /// Aligned columns: `m`, the scaled value in decimal, then the first
    /// `k + 1` difference rows in decimal.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# (k-1)! h(m,k), k = {}, m in [{}, {}]",
            self.k, self.m_range.0, self.m_range.1
        );
        let cols = (self.k as usize + 1).min(self.difference_table.len());
        let _ = write!(out, "{:>4}", "m");
        for j in 0..cols {
            let _ = write!(out, "  {:>22}", format!("D^{j}"));
        }
        out.push('\n');
        for (i, m) in (self.m_range.0..=self.m_range.1).enumerate() {
            let _ = write!(out, "{m:>4}");
            for row in self.difference_table.iter().take(cols) {
                match row.get(i) {
                    Some(v) => {
                        let _ = write!(out, "  {:>22}", v.to_scientific(12));
                    }
                    None => {
                        let _ = write!(out, "  {:>22}", "");
                    }
                }
            }
            out.push('\n');
        }
        let _ = writeln!(out, "stabilization_gap {}", self.stabilization_gap.to_scientific(6));
        let _ = writeln!(out, "stabilized {}", self.stabilized);
        let newton: Vec<String> = self.newton_coeffs.iter().map(|c| c.to_scientific(12)).collect();
        let _ = writeln!(out, "newton_form at m0={}: [{}]", self.newton_anchor, newton.join(", "));
        match (self.fitted_string(), self.shifted_string()) {
            (Some(f), Some(s)) => {
                let _ = writeln!(out, "fit {f}");
                let _ = writeln!(out, "fit_shifted {s}");
            }
            _ => {
                let _ = writeln!(out, "fit none");
            }
        }
        out
    }
}
