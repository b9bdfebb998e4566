//! Command-line front end.
//!
//! [`run`] does all the work and returns the bytes to print plus an exit
//! status, so the binary is a thin wrapper and tests can call it in-process.
//! Status codes: 0 all checks pass, 1 a mathematical check failed, 2 usage
//! error (bad flags, out-of-bound indices, rejected parameters).

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{self, FitTolerance};
use crate::carlitz_seq::{CarlitzSequence, DEFAULT_BOUND};
use crate::error::Error;
use crate::exact_arith::{factorial, ExactRational};
use crate::poly_algebra::Var;
use crate::series_oracle::{self, DEFAULT_ENUM_BUDGET};
use crate::triangles::{self, Rule, Tables};

/// Environment variable overriding the brute-force enumeration budget.
pub const ENUM_BUDGET_VAR: &str = "CARLITZ_ENUM_BUDGET";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "carlitz",
    version,
    about = "Exact G_m / H_m closed forms, coefficient triangles and checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print G_m (lambda) or H_m (zeta) for m_min <= m <= m_max.
    Sequence {
        #[arg(long, value_enum)]
        var: VarArg,
        #[arg(long, allow_hyphen_values = true)]
        m_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        m_max: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print rows 1..=max_m of a coefficient triangle.
    Table {
        #[arg(long, value_enum)]
        triangle: TriangleArg,
        #[arg(long)]
        max_m: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run verification suites up to the given depth.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        depth: i64,
    },
    /// Compare closed forms with the defining series.
    Oracle {
        #[arg(long, allow_hyphen_values = true)]
        m_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        m_max: i64,
        #[arg(long)]
        order: usize,
        /// Also compare the matrix-enumeration probability with g(m,k) on
        /// every cell with m <= m_max that fits the enumeration budget.
        #[arg(long)]
        probability: bool,
    },
    /// Difference-table fit of (k-1)! h(m,k).
    Asym {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        m_max: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VarArg {
    Lambda,
    Zeta,
}

impl From<VarArg> for Var {
    fn from(v: VarArg) -> Var {
        match v {
            VarArg::Lambda => Var::Lambda,
            VarArg::Zeta => Var::Zeta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TriangleArg {
    Eulerian2,
    Stirling2assoc,
    G,
    H,
    #[value(name = "N", alias = "n")]
    N,
}

impl From<TriangleArg> for Rule {
    fn from(t: TriangleArg) -> Rule {
        match t {
            TriangleArg::Eulerian2 => Rule::Eulerian2,
            TriangleArg::Stirling2assoc => Rule::Stirling2Assoc,
            TriangleArg::G => Rule::G,
            TriangleArg::H => Rule::H,
            TriangleArg::N => Rule::N,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Oracle,
    Integrality,
    Formulas,
    All,
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Output {
            stdout: String::new(),
            stderr,
            code: EXIT_USAGE,
        }
    }
}

fn error_output(e: Error) -> Output {
    let code = match e {
        Error::Domain(_) | Error::OutOfRange(_) | Error::BoundExceeded { .. } | Error::BudgetExceeded { .. } => {
            EXIT_USAGE
        }
        _ => EXIT_FAIL,
    };
    Output {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_USAGE,
                }
            } else {
                Output {
                    stdout: text,
                    stderr: String::new(),
                    code: EXIT_PASS,
                }
            };
        }
    };
    let budget = match std::env::var(ENUM_BUDGET_VAR) {
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(b) => b,
            Err(_) => return Output::usage(format!("error: {ENUM_BUDGET_VAR}={s:?} is not a nonnegative integer")),
        },
        Err(_) => DEFAULT_ENUM_BUDGET,
    };
    execute(&cli.command, budget)
}

/// Runs an already parsed command.
pub fn execute(cmd: &Command, enum_budget: u64) -> Output {
    match *cmd {
        Command::Sequence {
            var,
            m_min,
            m_max,
            format,
        } => cmd_sequence(var.into(), m_min, m_max, format),
        Command::Table {
            triangle,
            max_m,
            format,
        } => cmd_table(triangle.into(), max_m, format),
        Command::Verify { suite, depth } => cmd_verify(suite, depth),
        Command::Oracle {
            m_min,
            m_max,
            order,
            probability,
        } => cmd_oracle(m_min, m_max, order, probability.then_some(enum_budget)),
        Command::Asym { k, m_max, format } => cmd_asym(k, m_max, format),
    }
}

fn check_bound(name: &str, v: i64, lo: i64) -> Result<(), Output> {
    if v < lo || v > DEFAULT_BOUND {
        return Err(Output::usage(format!(
            "error: --{name} {v} outside [{lo}, {DEFAULT_BOUND}]"
        )));
    }
    Ok(())
}

pub fn cmd_sequence(var: Var, m_min: i64, m_max: i64, format: Format) -> Output {
    if m_min > m_max {
        return Output::usage(format!("error: --m-min {m_min} exceeds --m-max {m_max}"));
    }
    let mut seq = CarlitzSequence::new();
    let entries = match seq.range(m_min, m_max) {
        Ok(e) => e,
        Err(e) => return error_output(e),
    };
    let mut out = String::new();
    match format {
        Format::Text => {
            for e in &entries {
                let _ = writeln!(out, "{}", e.render(var));
            }
        }
        Format::Csv => {
            out.push_str("m,variable,base,power,k,coefficient\n");
            for e in &entries {
                let f = e.form(var);
                for (k, c) in f.numerator().coeffs().iter().enumerate() {
                    let _ = writeln!(out, "{},{},{},{},{k},{c}", e.m, var.name(), var.base_label(), f.power());
                }
            }
        }
        Format::Json => {
            // one object per line
            for e in &entries {
                let line = serde_json::to_string(&e.to_record(var)).expect("record serializes");
                let _ = writeln!(out, "{line}");
            }
        }
    }
    Output {
        stdout: out,
        stderr: String::new(),
        code: EXIT_PASS,
    }
}

pub fn cmd_table(rule: Rule, max_m: i64, format: Format) -> Output {
    if let Err(o) = check_bound("max-m", max_m, 1) {
        return o;
    }
    let mut tables = Tables::new();
    let tri = tables.triangle(rule);
    let stdout = match format {
        Format::Text => {
            let mut out = String::new();
            for m in 1..=max_m {
                let row: Vec<String> = tri.row(m).iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
            out
        }
        Format::Csv => tri.to_csv(max_m),
        Format::Json => format!("{}\n", tri.to_json(max_m)),
    };
    Output {
        stdout,
        stderr: String::new(),
        code: EXIT_PASS,
    }
}

/// One line of a verification summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub scope: String,
    pub count: usize,
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn line(&self) -> String {
        match &self.failure {
            None => format!("PASS {} [{}] {} checks", self.name, self.scope, self.count),
            Some(f) => format!("FAIL {} [{}] first counterexample: {f}", self.name, self.scope),
        }
    }
}

/// Runs `cases` in order, stopping at the first failure.
fn run_check<C>(
    name: &str,
    scope: String,
    cases: impl IntoIterator<Item = C>,
    mut test: impl FnMut(&C) -> Result<(), String>,
) -> CheckResult {
    let mut count = 0;
    for c in cases {
        count += 1;
        if let Err(f) = test(&c) {
            return CheckResult {
                name: name.to_string(),
                scope,
                count,
                failure: Some(f),
            };
        }
    }
    CheckResult {
        name: name.to_string(),
        scope,
        count,
        failure: None,
    }
}

fn square(d: i64) -> Vec<(i64, i64)> {
    (1..=d).flat_map(|a| (1..=d).map(move |b| (a, b))).collect()
}

fn lower(d: i64) -> Vec<(i64, i64)> {
    (1..=d).flat_map(|m| (1..=m).map(move |k| (m, k))).collect()
}

fn truth(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn identities_suite(tables: &mut Tables, d: i64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(run_check(
        "eulerian_stirling_polynomial",
        format!("1<=m<={d}"),
        1..=d,
        |&m| match triangles::eq5_sides(tables, m) {
            Ok((l, r)) => truth(l == r, || format!("m={m}: left {l} right {r}")),
            Err(e) => Err(format!("m={m}: {e}")),
        },
    ));
    out.push(run_check(
        "stirling_from_eulerian",
        format!("1<=n,q<={d}"),
        square(d),
        |&(n, q)| truth(triangles::verify_eq6(tables, n, q), || format!("n={n}, q={q}")),
    ));
    out.push(run_check(
        "eulerian_from_stirling",
        format!("1<=n,q<={d}"),
        square(d),
        |&(n, q)| truth(triangles::verify_eq7(tables, n, q), || format!("n={n}, q={q}")),
    ));
    out.push(run_check(
        "h_from_g",
        format!("1<=k<=m<={d}"),
        lower(d),
        |&(m, k)| match triangles::h_from_g(tables, m, k) {
            Ok(v) => {
                let h = tables.h_rec(m, k);
                truth(v == h, || format!("m={m}, k={k}: h_from_g {v} h_rec {h}"))
            }
            Err(e) => Err(format!("m={m}, k={k}: {e}")),
        },
    ));
    out
}

pub fn oracle_suite(d: i64) -> Vec<CheckResult> {
    let order = d as usize;
    let lo = -(d.min(8));
    let mut seq = CarlitzSequence::new();
    vec![
        run_check(
            "closed_form_series",
            format!("{lo}<=m<={d}, order {order}"),
            lo..=d,
            |&m| match series_oracle::check_closed_form(&mut seq, m, order) {
                Ok(c) => truth(c.passed(), || {
                    format!("m={m}: lambda {} zeta {}", c.lambda_ok, c.zeta_ok)
                }),
                Err(e) => Err(format!("m={m}: {e}")),
            },
        ),
        run_check("lambda_zeta_relation", format!("order {order}"), [order], |&o| {
            truth(series_oracle::verify_lambda_zeta_relation(o), || format!("order {o}"))
        }),
    ]
}

pub fn integrality_suite(tables: &mut Tables, d: i64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(run_check(
        "alternating_sum_h",
        format!("1<=m<={d}"),
        1..=d,
        |&m| match analysis::alternating_sum_h(tables, m) {
            Ok((s, ok)) => truth(ok, || format!("m={m}: sum {s}")),
            Err(e) => Err(format!("m={m}: {e}")),
        },
    ));
    out.push(run_check(
        "superfactorial_scalings",
        format!("1<=m<={d}"),
        1..=d,
        |&m| truth(analysis::integrality_check(tables, m), || format!("m={m}")),
    ));
    out.push(run_check(
        "n_integral_two_routes",
        format!("1<=k<=m<={d}"),
        lower(d),
        |&(m, k)| {
            triangles::numerator_n(tables, m, k)
                .map(|_| ())
                .map_err(|e| format!("m={m}, k={k}: {e}"))
        },
    ));
    out.push(run_check("eulerian2_rowsum", format!("1<=n<={d}"), 1..=d, |&n| {
        truth(analysis::eulerian2_rowsum_check(tables, n), || format!("n={n}"))
    }));
    if d >= 3 {
        out.push(run_check(
            "diag_gap_decreasing",
            format!("2<=m<={d}"),
            [d],
            |&d| match analysis::diag_limit_trend(tables, d) {
                Ok(t) => truth(t.strictly_decreasing, || {
                    let w = t.points.windows(2).find(|w| w[0].gap <= w[1].gap);
                    match w {
                        Some(w) => format!(
                            "m={} gap {} vs m={} gap {}",
                            w[0].m, w[0].gap_decimal, w[1].m, w[1].gap_decimal
                        ),
                        None => "gaps not separated by the 1/e error bound".to_string(),
                    }
                }),
                Err(e) => Err(e.to_string()),
            },
        ));
    }
    out
}

pub fn formulas_suite(tables: &mut Tables, d: i64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(run_check(
        "g_five_routes",
        format!("1<=k<=m<={d}"),
        lower(d),
        |&(m, k)| {
            let r = tables.g_rec(m, k);
            let routes = [
                ("egyptian", triangles::g_egyptian(m, k)),
                ("difference", triangles::g_difference(m, k)),
                ("genfunc", triangles::g_genfunc(m, k)),
                ("hypercube", triangles::g_hypercube(m, k)),
            ];
            for (name, v) in routes {
                match v {
                    Ok(v) if v == r => {}
                    Ok(v) => return Err(format!("m={m}, k={k}: rec {r} {name} {v}")),
                    Err(e) => return Err(format!("m={m}, k={k}: {name}: {e}")),
                }
            }
            Ok(())
        },
    ));
    let order = d as usize;
    out.push(run_check(
        "connection_series",
        format!("1<=k<={d}, order {order}"),
        1..=d,
        |&k| truth(triangles::connection_series(tables, k, order), || format!("k={k}")),
    ));
    out
}

pub fn cmd_verify(suite: Suite, depth: i64) -> Output {
    if let Err(o) = check_bound("depth", depth, 1) {
        return o;
    }
    let mut tables = Tables::new();
    let mut sections: Vec<(&str, Vec<CheckResult>)> = Vec::new();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Identities) {
        sections.push(("identities", identities_suite(&mut tables, depth)));
    }
    if want(Suite::Oracle) {
        sections.push(("oracle", oracle_suite(depth)));
    }
    if want(Suite::Integrality) {
        sections.push(("integrality", integrality_suite(&mut tables, depth)));
    }
    if want(Suite::Formulas) {
        sections.push(("formulas", formulas_suite(&mut tables, depth)));
    }
    let mut out = String::new();
    let mut failed = 0;
    let mut total = 0;
    for (name, checks) in &sections {
        let _ = writeln!(out, "# {name} (depth {depth})");
        for c in checks {
            total += 1;
            if !c.passed() {
                failed += 1;
            }
            let _ = writeln!(out, "{}", c.line());
        }
    }
    let verdict = if failed == 0 { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "{verdict} {} of {total} checks passed", total - failed);
    Output {
        stdout: out,
        stderr: String::new(),
        code: if failed == 0 { EXIT_PASS } else { EXIT_FAIL },
    }
}

pub fn cmd_oracle(m_min: i64, m_max: i64, order: usize, probability_budget: Option<u64>) -> Output {
    if m_min > m_max {
        return Output::usage(format!("error: --m-min {m_min} exceeds --m-max {m_max}"));
    }
    if order < 1 {
        return Output::usage("error: --order must be at least 1");
    }
    let mut seq = CarlitzSequence::new();
    let mut out = String::new();
    let mut ok = true;
    for m in m_min..=m_max {
        match series_oracle::check_closed_form(&mut seq, m, order) {
            Ok(c) => {
                ok &= c.passed();
                let mark = |b: bool| if b { "ok" } else { "MISMATCH" };
                let _ = writeln!(
                    out,
                    "{} m={m} order={order} G_m(T)={} H_m(Z)={}",
                    if c.passed() { "PASS" } else { "FAIL" },
                    mark(c.lambda_ok),
                    mark(c.zeta_ok)
                );
            }
            Err(e) => return error_output(e),
        }
    }
    let rel = series_oracle::verify_lambda_zeta_relation(order);
    ok &= rel;
    let _ = writeln!(
        out,
        "{} zeta=lambda/(1-lambda) order={order}",
        if rel { "PASS" } else { "FAIL" }
    );
    if let Some(budget) = probability_budget {
        let tables = seq.tables();
        let cells = series_oracle::probability_cells(m_max.max(0), budget);
        let _ = writeln!(out, "# probability oracle, budget {budget}, {} cells", cells.len());
        for (m, k) in cells {
            let p = match series_oracle::g_probability_bruteforce(m, k, budget) {
                Ok(p) => p,
                Err(e) => return error_output(e),
            };
            let g = tables.g_rec(m, k);
            let scaled = ExactRational::from_integer(factorial(k - 1).expect("k >= 1")) * &g;
            let matches = p == g;
            ok &= matches;
            let _ = writeln!(
                out,
                "{} m={m} k={k} probability={p} g={g} (k-1)!g={scaled}",
                if matches { "PASS" } else { "FAIL" }
            );
        }
    }
    Output {
        stdout: out,
        stderr: String::new(),
        code: if ok { EXIT_PASS } else { EXIT_FAIL },
    }
}

pub fn cmd_asym(k: i64, m_max: i64, format: Format) -> Output {
    if let Err(o) = check_bound("m-max", m_max, 1) {
        return o;
    }
    let mut tables = Tables::new();
    let report = match analysis::asym_fit(&mut tables, k, m_max, &FitTolerance::default()) {
        Ok(r) => r,
        Err(e) => return error_output(e),
    };
    let stdout = match format {
        Format::Text => report.render_text(),
        Format::Json => format!("{}\n", report.to_json()),
        Format::Csv => {
            let mut out = String::from("order,m,value\n");
            for (j, row) in report.difference_table.iter().enumerate() {
                for (i, v) in row.iter().enumerate() {
                    let _ = writeln!(out, "{j},{},{v}", report.m_range.0 + i as i64);
                }
            }
            out
        }
    };
    let code = if report.fitted_polynomial.is_some() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    Output {
        stdout,
        stderr: String::new(),
        code,
    }
}
