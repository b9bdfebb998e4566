//! Coefficient triangles and the identities that connect them.
//!
//! Five triangles are generated by recurrence and memoized row by row:
//!
//! | rule | recurrence |
//! | ---- | ---------- |
//! | `eulerian2` | `<<m,k>> = (k+1)<<m-1,k>> + (2m-k-1)<<m-1,k-1>>`, `<<0,0>> = 1` |
//! | `stirling2assoc` | `{{m,k}} = k{{m-1,k}} + (m-1){{m-2,k-1}}`, `{{0,0}} = 1` |
//! | `g` | `k g(m,k) = g(m-1,k) + g(m-1,k-1)`, `g(m,1) = 1`, `g(m,k) = 0` for `k > m` |
//! | `h` | `k h(m,k) = h(m-1,k) + (m-k+1) h(m,k-1)`, `h(1,1) = 1`, `h(m,0) = 0` |
//! | `N` | `N(m,k) = (k-1)! N(m-1,k) + k^(m-k) N(m-1,k-1)`, `N(m,1) = 1` |
//!
//! The `N` recurrence is the `g` recurrence rescaled by `(k!)^(m-k+1)`; it is
//! checked against both the scaled `g` values and the product generating function.
//!
//! `g(m,k)` also has four closed forms ([`g_egyptian`], [`g_difference`],
//! [`g_genfunc`], [`g_hypercube`]) that do not touch the recurrence.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{binomial, factorial, sign_int, ExactRational};
use crate::poly_algebra::{Polynomial, PowerSeries, Var};

/// Generator tag of a [`Triangle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Eulerian2,
    Stirling2Assoc,
    G,
    H,
    N,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Eulerian2 => "eulerian2",
            Rule::Stirling2Assoc => "stirling2assoc",
            Rule::G => "g",
            Rule::H => "h",
            Rule::N => "N",
        }
    }

    /// The `k` range that is printed for row `m`.
    pub fn support(self, m: i64) -> RangeInclusive<i64> {
        match self {
            Rule::Eulerian2 => 0..=(m - 1).max(0),
            Rule::Stirling2Assoc if m == 0 => 0..=0,
            Rule::Stirling2Assoc => 1..=m / 2,
            Rule::G | Rule::H | Rule::N => 1..=m,
        }
    }

    /// Rows start at `m = 0` for the integer triangles and `m = 1` otherwise.
    pub fn first_row(self) -> i64 {
        match self {
            Rule::Eulerian2 | Rule::Stirling2Assoc => 0,
            Rule::G | Rule::H | Rule::N => 1,
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eulerian2" => Ok(Rule::Eulerian2),
            "stirling2assoc" | "stirling2_assoc" => Ok(Rule::Stirling2Assoc),
            "g" => Ok(Rule::G),
            "h" => Ok(Rule::H),
            "N" | "n" => Ok(Rule::N),
            _ => Err(Error::Domain(format!("unknown triangle {s:?}"))),
        }
    }
}

/// Memoized triangle, filled row-major on demand. Entry `(m, k)` is zero for
/// `k < 0`, `k > m` or `m` below the first row.
///
/// Every recurrence reads only columns `<= k`, so rows are stored up to a
/// column cap that grows with the largest `k` requested.
#[derive(Clone, Debug)]
pub struct Triangle {
    rule: Rule,
    rows: Vec<Vec<ExactRational>>,
    cap: i64,
}

impl Triangle {
    pub fn new(rule: Rule) -> Self {
        Triangle {
            rule,
            rows: Vec::new(),
            cap: 0,
        }
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// Number of rows currently cached.
    pub fn cached_rows(&self) -> usize {
        self.rows.len()
    }

    fn stored(&self, m: i64, k: i64) -> ExactRational {
        if m < 0 || k < 0 || k > m {
            return ExactRational::zero();
        }
        self.rows[m as usize][k as usize].clone()
    }

    fn ensure(&mut self, m: i64, k: i64) {
        if k > self.cap {
            self.cap = k;
            for r in 0..self.rows.len() as i64 {
                for c in self.rows[r as usize].len() as i64..=r.min(self.cap) {
                    let v = self.entry(r, c);
                    self.rows[r as usize].push(v);
                }
            }
        }
        while (self.rows.len() as i64) <= m {
            let r = self.rows.len() as i64;
            self.rows.push(Vec::new());
            for c in 0..=r.min(self.cap) {
                let v = self.entry(r, c);
                self.rows[r as usize].push(v);
            }
        }
    }

    /// Value at `(m, k)` from rows `< m` and columns `< k` of row `m`.
    fn entry(&self, m: i64, k: i64) -> ExactRational {
        let int = |x: i64| ExactRational::from(x);
        let one_at = |kk: i64| {
            if k == kk {
                ExactRational::one()
            } else {
                ExactRational::zero()
            }
        };
        match self.rule {
            Rule::Eulerian2 if m == 0 => one_at(0),
            Rule::Eulerian2 => int(k + 1) * self.stored(m - 1, k) + int(2 * m - k - 1) * self.stored(m - 1, k - 1),
            Rule::Stirling2Assoc if m == 0 => one_at(0),
            Rule::Stirling2Assoc => int(k) * self.stored(m - 1, k) + int(m - 1) * self.stored(m - 2, k - 1),
            Rule::G | Rule::N if k == 0 => ExactRational::zero(),
            Rule::G | Rule::N if k == 1 => ExactRational::one(),
            Rule::G => (self.stored(m - 1, k) + self.stored(m - 1, k - 1)) / int(k),
            Rule::N => {
                let f = ExactRational::from_integer(factorial(k - 1).expect("k >= 1"));
                let p = int(k).pow((m - k) as i32);
                f * self.stored(m - 1, k) + p * self.stored(m - 1, k - 1)
            }
            Rule::H if k == 0 => ExactRational::zero(),
            Rule::H if m == 1 => ExactRational::one(),
            Rule::H => (self.stored(m - 1, k) + int(m - k + 1) * self.stored(m, k - 1)) / int(k),
        }
    }

    pub fn get(&mut self, m: i64, k: i64) -> ExactRational {
        if m < 0 || k < 0 || k > m {
            return ExactRational::zero();
        }
        self.ensure(m, k);
        self.stored(m, k)
    }

    /// Row `m` over [`Rule::support`].
    pub fn row(&mut self, m: i64) -> Vec<ExactRational> {
        self.rule.support(m).map(|k| self.get(m, k)).collect()
    }

    /// `m,k,value` lines for rows `first_row..=max_m`, with a header.
    pub fn to_csv(&mut self, max_m: i64) -> String {
        let mut out = String::from("m,k,value\n");
        for m in self.rule.first_row().max(1)..=max_m {
            for k in self.rule.support(m) {
                let v = self.get(m, k);
                let _ = writeln!(out, "{m},{k},{v}");
            }
        }
        out
    }

    /// Rows `1..=max_m` as arrays of exact-fraction strings.
    pub fn to_json(&mut self, max_m: i64) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (1..=max_m)
            .map(|m| self.row(m).iter().map(ToString::to_string).collect())
            .collect();
        serde_json::json!(rows)
    }
}

/// All five triangles, sharing one owner so the identity checks can reuse caches.
#[derive(Clone, Debug)]
pub struct Tables {
    pub eulerian2: Triangle,
    pub stirling2: Triangle,
    pub g: Triangle,
    pub h: Triangle,
    pub n: Triangle,
}

impl Default for Tables {
    fn default() -> Self {
        Self::new()
    }
}

fn as_int(x: ExactRational) -> BigInt {
    x.to_integer().expect("integer triangle entry")
}

impl Tables {
    pub fn new() -> Self {
        Tables {
            eulerian2: Triangle::new(Rule::Eulerian2),
            stirling2: Triangle::new(Rule::Stirling2Assoc),
            g: Triangle::new(Rule::G),
            h: Triangle::new(Rule::H),
            n: Triangle::new(Rule::N),
        }
    }

    pub fn triangle(&mut self, rule: Rule) -> &mut Triangle {
        match rule {
            Rule::Eulerian2 => &mut self.eulerian2,
            Rule::Stirling2Assoc => &mut self.stirling2,
            Rule::G => &mut self.g,
            Rule::H => &mut self.h,
            Rule::N => &mut self.n,
        }
    }

    /// Second-order Eulerian number `<<m,k>>`.
    pub fn eulerian2(&mut self, m: i64, k: i64) -> BigInt {
        as_int(self.eulerian2.get(m, k))
    }

    /// Associated Stirling number of the second kind `{{m,k}}`.
    pub fn stirling2_assoc(&mut self, m: i64, k: i64) -> BigInt {
        as_int(self.stirling2.get(m, k))
    }

    pub fn g_rec(&mut self, m: i64, k: i64) -> ExactRational {
        self.g.get(m, k)
    }

    pub fn h_rec(&mut self, m: i64, k: i64) -> ExactRational {
        self.h.get(m, k)
    }

    /// `N(m,k)` from its integer recurrence.
    pub fn numerator_n_rec(&mut self, m: i64, k: i64) -> BigInt {
        as_int(self.n.get(m, k))
    }
}

fn check_k_le_m(m: i64, k: i64) -> Result<()> {
    if k < 1 || k > m {
        return Err(Error::OutOfRange(format!("need 1 <= k <= m, got m={m}, k={k}")));
    }
    Ok(())
}

fn fact_q(n: i64) -> ExactRational {
    ExactRational::from_integer(factorial(n).expect("nonnegative"))
}

/// `g(m,k) = (1/k!) sum_{1 <= i_1 <= ... <= i_{m-k} <= k} 1/(i_1 ... i_{m-k})`,
/// by explicit enumeration of the weakly increasing tuples.
pub fn g_egyptian(m: i64, k: i64) -> Result<ExactRational> {
    check_k_le_m(m, k)?;
    fn walk(len: i64, lo: i64, k: i64, acc: &ExactRational, total: &mut ExactRational) {
        if len == 0 {
            *total += acc;
            return;
        }
        for i in lo..=k {
            let next = acc / &ExactRational::from(i);
            walk(len - 1, i, k, &next, total);
        }
    }
    let mut total = ExactRational::zero();
    walk(m - k, 1, k, &ExactRational::one(), &mut total);
    Ok(total / fact_q(k))
}

/// `g(m,k) = (1/(k-1)!) sum_{j=0}^{k-1} C(k-1,j) (-1)^j / (j+1)^(m-k+1)`.
pub fn g_difference(m: i64, k: i64) -> Result<ExactRational> {
    check_k_le_m(m, k)?;
    let e = (m - k + 1) as i32;
    let s: ExactRational = (0..k)
        .map(|j| ExactRational::from_integer(binomial(k - 1, j) * sign_int(j)) / ExactRational::from(j + 1).pow(e))
        .sum();
    Ok(s / fact_q(k - 1))
}

/// `g(m,k) = [z^(m-k)] prod_{p=1}^k 1/(p - z)`, by truncated series products.
pub fn g_genfunc(m: i64, k: i64) -> Result<ExactRational> {
    check_k_le_m(m, k)?;
    let order = (m - k) as usize;
    let mut acc = PowerSeries::one(order);
    for p in 1..=k {
        // 1/(p - z) = (1/p) sum_j (z/p)^j
        let inv_p = ExactRational::new(1, p);
        let geo = PowerSeries::new((0..=order as i32).map(|j| inv_p.pow(j + 1)).collect());
        acc = acc.mul(&geo);
    }
    Ok(acc.coeff(order))
}

/// `g(m,k) = (1/(k-1)!) * integral over [0,1]^d of (1 - x_1...x_d)^(k-1)`, `d = m-k+1`.
///
/// The integrand is expanded as a polynomial in `u = x_1...x_d` by repeated
/// multiplication, and each `u^j` integrates coordinate-wise to `(1/(j+1))^d`.
pub fn g_hypercube(m: i64, k: i64) -> Result<ExactRational> {
    check_k_le_m(m, k)?;
    let d = (m - k + 1) as usize;
    // the product variable u; the tag is irrelevant here
    let one_minus_u = Polynomial::from_ints(Var::Lambda, &[1, -1]);
    let integrand = one_minus_u.pow((k - 1) as u32);
    let integral: ExactRational = integrand
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let per_axis = ExactRational::new(1, j as i64 + 1);
            (0..d).fold(c.clone(), |acc, _| acc * &per_axis)
        })
        .sum();
    Ok(integral / fact_q(k - 1))
}

/// `N(m,k) = g(m,k) (k!)^(m-k+1)`, checked for integrality and against
/// `[z^(m-k)] prod_{p=1}^k 1/(1 - (k!/p) z)` and the integer recurrence.
pub fn numerator_n(tables: &mut Tables, m: i64, k: i64) -> Result<BigInt> {
    check_k_le_m(m, k)?;
    let scale = fact_q(k).pow((m - k + 1) as i32);
    let scaled = tables.g_rec(m, k) * scale;
    let Some(from_g) = scaled.to_integer() else {
        return Err(Error::Internal(format!(
            "g({m},{k}) * (k!)^(m-k+1) = {scaled} is not an integer"
        )));
    };
    let from_gf = numerator_n_genfunc(m, k);
    if from_gf != from_g {
        return Err(Error::Internal(format!(
            "N({m},{k}): scaled g gives {from_g}, generating function gives {from_gf}"
        )));
    }
    let from_rec = tables.numerator_n_rec(m, k);
    if from_rec != from_g {
        return Err(Error::Internal(format!(
            "N({m},{k}): scaled g gives {from_g}, recurrence gives {from_rec}"
        )));
    }
    Ok(from_g)
}

/// Integer-only evaluation of the `N(m,k)` product generating function.
pub fn numerator_n_genfunc(m: i64, k: i64) -> BigInt {
    if k < 1 || k > m {
        return BigInt::zero();
    }
    let order = (m - k) as usize;
    let kf = factorial(k).expect("k >= 1");
    let mut acc = vec![BigInt::zero(); order + 1];
    acc[0] = BigInt::one();
    for p in 1..=k {
        let r = &kf / BigInt::from(p);
        // multiply by 1/(1 - r z): prefix recurrence b_n = a_n + r b_{n-1}
        for n in 1..=order {
            let prev = acc[n - 1].clone();
            acc[n] += &r * prev;
        }
    }
    acc[order].clone()
}

/// `h(m,k) = sum_{j=1}^k (-1)^(j-1) C(m-j, k-j) g(m,j)`.
pub fn h_from_g(tables: &mut Tables, m: i64, k: i64) -> Result<ExactRational> {
    check_k_le_m(m, k)?;
    Ok((1..=k)
        .map(|j| ExactRational::from_integer(sign_int(j - 1) * binomial(m - j, k - j)) * tables.g_rec(m, j))
        .sum())
}

/// Virtual Stirling number of the first kind `s(-k, n) = (-1)^k g(n+k, k)` for `neg_k = -k <= -1`.
pub fn virtual_stirling(tables: &mut Tables, neg_k: i64, n: i64) -> Result<ExactRational> {
    if neg_k > -1 || n < 0 {
        return Err(Error::OutOfRange(format!(
            "need neg_k <= -1 and n >= 0, got ({neg_k}, {n})"
        )));
    }
    let k = -neg_k;
    Ok(ExactRational::sign_power(k) * tables.g_rec(n + k, k))
}

/// Generalized Bernoulli number of negative degree `B_{-m}^{(-k)} = -g(m,k) / C(m-1,k)`.
pub fn gen_bernoulli_neg(tables: &mut Tables, m: i64, k: i64) -> Result<ExactRational> {
    if k < 1 || k > m - 1 {
        return Err(Error::OutOfRange(format!("need 1 <= k <= m-1, got m={m}, k={k}")));
    }
    let c = ExactRational::from_integer(binomial(m - 1, k));
    Ok(-(tables.g_rec(m, k) / c))
}

/// Both sides of `sum_k <<m,k>> (1+zeta)^(m-k-1) zeta^k = sum_k {{m+k,k}} zeta^(k-1)`.
pub fn eq5_sides(tables: &mut Tables, m: i64) -> Result<(Polynomial, Polynomial)> {
    if m < 1 {
        return Err(Error::OutOfRange(format!("need m >= 1, got {m}")));
    }
    let base = Polynomial::base(Var::Zeta);
    let mut left = Polynomial::zero(Var::Zeta);
    for k in 0..=m {
        let e = tables.eulerian2(m, k);
        if e.is_zero() {
            continue;
        }
        let exp = m - k - 1;
        if exp < 0 {
            return Err(Error::Internal(format!(
                "<<{m},{k}>> = {e} nonzero with negative exponent"
            )));
        }
        let term = base
            .pow(exp as u32)
            .shift(k as usize)
            .scale(&ExactRational::from_integer(e));
        left = left.add(&term)?;
    }
    let right = Polynomial::new(
        Var::Zeta,
        (1..=m)
            .map(|k| ExactRational::from_integer(tables.stirling2_assoc(m + k, k)))
            .collect(),
    );
    Ok((left, right))
}

pub fn verify_eq5(tables: &mut Tables, m: i64) -> bool {
    matches!(eq5_sides(tables, m), Ok((l, r)) if l == r)
}

/// `{{n+q,q}} = sum_{i=0}^n C(n-i-1, q-i-1) <<n,i>>`.
pub fn verify_eq6(tables: &mut Tables, n: i64, q: i64) -> bool {
    let left = tables.stirling2_assoc(n + q, q);
    let right: BigInt = (0..=n)
        .map(|i| binomial(n - i - 1, q - i - 1) * tables.eulerian2(n, i))
        .sum();
    left == right
}

/// `<<n,q>> = sum_{i=0}^n (-1)^(q-i) C(n-i-1, q-i) {{n+i+1, i+1}}`.
pub fn verify_eq7(tables: &mut Tables, n: i64, q: i64) -> bool {
    let left = tables.eulerian2(n, q);
    let right: BigInt = (0..=n)
        .map(|i| sign_int(q - i) * binomial(n - i - 1, q - i) * tables.stirling2_assoc(n + i + 1, i + 1))
        .sum();
    left == right
}

/// Expands `1/((x+1)(x+2)...(x+k))` to order `order` and compares coefficient
/// `n` with `(-1)^n g(k+n, k)`.
pub fn connection_series(tables: &mut Tables, k: i64, order: usize) -> bool {
    if k < 1 {
        return false;
    }
    let mut acc = PowerSeries::one(order);
    for p in 1..=k {
        // 1/(x+p) = (1/p) sum_j (-x/p)^j
        let r = ExactRational::new(-1, p);
        let geo = PowerSeries::new((0..=order as i32).map(|j| r.pow(j) / ExactRational::from(p)).collect());
        acc = acc.mul(&geo);
    }
    (0..=order).all(|n| acc.coeff(n) == ExactRational::sign_power(n as i64) * tables.g_rec(k + n as i64, k))
}
