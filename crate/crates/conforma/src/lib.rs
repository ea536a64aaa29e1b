//! `conforma`: command-line front end for the conformable fractional
//! calculus library. Exit codes: 0 success, 2 user error (bad flags,
//! malformed expressions, out-of-domain requests), 3 numeric failure
//! (tolerance not met, non-convergent limits).

pub mod expr;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};

use conformable::{
    builtin_series, eval_series, gronwall_check, higher_left_deriv, higher_right_deriv,
    laplace_numeric, laplace_table, left_deriv, left_integral, picard_partial, right_deriv,
    right_integral, rl_integral, sequential_left_deriv, solve_scalar, solve_system,
    write_trajectory_csv, DerivBackend, Error, FracOrder, FracSeries, GronwallInstance,
    LinearFracSystem, QuadratureSpec, RealFn, SeriesKind, TableKind, TransformQuery,
};

use output::{Format, Output};

#[derive(Parser)]
#[command(
    name = "conforma",
    version,
    about = "Conformable fractional calculus toolkit"
)]
struct Cli {
    /// Relative tolerance for all quadrature (default 1e-10; the
    /// CONFORMA_TOL environment variable overrides the default, this flag
    /// overrides both).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    /// Difference-quotient limit with Richardson extrapolation.
    Limit,
    /// Weight times classical derivative (symbolic hooks).
    Reduction,
}

impl BackendArg {
    fn build(self) -> DerivBackend {
        match self {
            BackendArg::Limit => DerivBackend::limit_quotient(),
            BackendArg::Reduction => DerivBackend::reduction(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKindArg {
    Fexp,
    Fsin,
    Fcos,
    Fgeom,
}

impl SeriesKindArg {
    fn build(self) -> SeriesKind {
        match self {
            SeriesKindArg::Fexp => SeriesKind::FracExp,
            SeriesKindArg::Fsin => SeriesKind::FracSin,
            SeriesKindArg::Fcos => SeriesKind::FracCos,
            SeriesKindArg::Fgeom => SeriesKind::FracGeom,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKindArg {
    One,
    T,
    Tpow,
    Fexp,
    Fsin,
    Fcos,
    Damped,
}

#[derive(Args)]
struct GridArgs {
    /// Single evaluation point.
    #[arg(long, conflicts_with = "grid", allow_negative_numbers = true)]
    t: Option<f64>,
    /// Evaluation grid `min:max:count`.
    #[arg(long)]
    grid: Option<String>,
}

impl GridArgs {
    fn points(&self) -> Result<Vec<f64>, CliError> {
        match (&self.t, &self.grid) {
            (Some(t), None) => Ok(vec![*t]),
            (None, Some(spec)) => parse_grid(spec),
            (None, None) => Err(CliError::user("one of --t or --grid is required")),
            (Some(_), Some(_)) => unreachable!("clap conflict"),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Left conformable derivative T_alpha^a of an expression in t.
    /// Orders above 1 use the n-th classical derivative automatically;
    /// --count applies the order-alpha operator repeatedly (sequential
    /// derivative, alpha <= 1).
    Deriv {
        /// Expression in t, e.g. "t^2 + sin(t)".
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Left base point.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[command(flatten)]
        at: GridArgs,
        #[arg(long, value_enum, default_value_t = BackendArg::Reduction)]
        backend: BackendArg,
        /// Apply the operator this many times (sequential derivative).
        #[arg(long)]
        count: Option<u32>,
    },
    /// Right conformable derivative terminating at --b.
    Rderiv {
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Right terminal point.
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[command(flatten)]
        at: GridArgs,
        #[arg(long, value_enum, default_value_t = BackendArg::Reduction)]
        backend: BackendArg,
    },
    /// Left conformable integral I_alpha^a (or the Riemann–Liouville
    /// integral with --riemann-liouville).
    Integ {
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[command(flatten)]
        at: GridArgs,
        /// Use the Riemann–Liouville kernel instead of the conformable one.
        #[arg(long)]
        riemann_liouville: bool,
    },
    /// Right conformable integral from t to --b.
    Rinteg {
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[command(flatten)]
        at: GridArgs,
    },
    /// Built-in fractional power series: print the text form, or evaluate
    /// at --t / --grid. --load reads a previously saved series instead.
    Series {
        #[arg(long, value_enum, required_unless_present = "load")]
        kind: Option<SeriesKindArg>,
        #[arg(long, required_unless_present = "load", allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        /// Highest stored slot index K.
        #[arg(long, default_value_t = 8)]
        terms: usize,
        /// Read a series from a text file (header `t0 alpha K radius`).
        #[arg(long)]
        load: Option<PathBuf>,
        #[arg(long, conflicts_with = "grid", allow_negative_numbers = true)]
        t: Option<f64>,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Numeric fractional Laplace transform of an expression.
    Laplace {
        #[arg(long)]
        f: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Transform variable.
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        /// Growth constant c with |f(t0+(alpha u)^(1/alpha))| <= C e^(c u).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        tail_bound: f64,
    },
    /// Closed-form fractional Laplace transform table entry.
    Table {
        #[arg(long, value_enum)]
        kind: TableKindArg,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        /// Exponent for t^p.
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        /// Rate for the fractional exponential.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        /// Frequency for the fractional sine/cosine.
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<f64>,
        /// Damping constant (damped entry).
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        /// Inner entry of the damped transform.
        #[arg(long, value_enum)]
        inner: Option<TableKindArg>,
    },
    /// Scalar linear problem T_alpha^a y = lambda y, y(a) = y0:
    /// closed-form solution, or the n-th Picard iterate with --picard.
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        y0: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[command(flatten)]
        at: GridArgs,
        /// Return the n-th Picard iterate instead of the closed form.
        #[arg(long)]
        picard: Option<u32>,
    },
    /// Linear system T_alpha^a y = A y + f from a matrix file:
    /// first line n, then n rows of n numbers, then n numbers for c.
    System {
        /// Matrix/initial-value file.
        #[arg(long)]
        file: PathBuf,
        /// Forcing components, semicolon-separated expressions in t.
        #[arg(long)]
        f: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[command(flatten)]
        at: GridArgs,
    },
    /// Gronwall inequality check: per-point hypothesis and conclusion
    /// slack for r on [a, b].
    Gronwall {
        /// Expression for r(t) (continuous, nonnegative).
        #[arg(long)]
        r: String,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        /// Grid size.
        #[arg(long, default_value_t = 9)]
        points: usize,
    },
    /// Sampled trajectory CSV of a scalar problem (--lambda) or a system
    /// (--file), written to stdout or --out.
    Export {
        #[arg(long, conflicts_with = "file", allow_negative_numbers = true)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        y0: f64,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Forcing for the system case, semicolon-separated.
        #[arg(long)]
        f: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        /// Sample grid `min:max:count`.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Internal error carrying the process exit code.
struct CliError {
    code: i32,
    msg: String,
}

impl CliError {
    fn user(msg: impl Into<String>) -> Self {
        CliError {
            code: 2,
            msg: msg.into(),
        }
    }

    fn numeric(msg: impl Into<String>) -> Self {
        CliError {
            code: 3,
            msg: msg.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_)
            | Error::Precondition(_)
            | Error::Singularity(_)
            | Error::Divergence(_) => CliError::user(e.to_string()),
            Error::Convergence(_) | Error::Accuracy { .. } => CliError::numeric(e.to_string()),
        }
    }
}

impl From<expr::ParseError> for CliError {
    fn from(e: expr::ParseError) -> Self {
        CliError::user(e.to_string())
    }
}

impl From<expr::EvalError> for CliError {
    fn from(e: expr::EvalError) -> Self {
        CliError::user(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::numeric(format!("i/o error: {e}"))
    }
}

/// Entry point used by `main` and by tests; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run_to(args, &mut stdout, &mut stderr)
}

pub fn run_to<I, T, W, E>(args: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output; those are success.
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.msg);
            e.code
        }
    }
}

fn quad_spec(tol_flag: Option<f64>) -> Result<QuadratureSpec, CliError> {
    let env_tol = std::env::var("CONFORMA_TOL")
        .ok()
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| CliError::user(format!("CONFORMA_TOL is not a number: {v}")))
        })
        .transpose()?;
    let spec = QuadratureSpec::default();
    let tol = tol_flag.or(env_tol);
    match tol {
        Some(t) if t > 0.0 && t < 1.0 => Ok(spec.with_rel_tol(t)),
        Some(t) => Err(CliError::user(format!(
            "tolerance must lie in (0, 1), got {t}"
        ))),
        None => Ok(spec),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::user(format!(
            "grid must be `min:max:count`, got `{spec}`"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::user(format!("bad grid minimum `{}`", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::user(format!("bad grid maximum `{}`", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::user(format!("bad grid count `{}`", parts[2])))?;
    if count == 0 {
        return Err(CliError::user("grid count must be at least 1"));
    }
    if min > max {
        return Err(CliError::user(format!(
            "grid needs min <= max, got {min} > {max}"
        )));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let step = (max - min) / (count - 1) as f64;
    Ok((0..count).map(|i| min + step * i as f64).collect())
}

fn check_finite(v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::numeric(
            "result is not finite (domain violation in the expression during evaluation?)",
        ))
    }
}

fn parse_forcing(src: &str, dim: usize, hooks: u32) -> Result<Vec<RealFn>, CliError> {
    let components: Vec<&str> = src.split(';').collect();
    if components.len() != dim {
        return Err(CliError::user(format!(
            "forcing has {} component(s), system dimension is {dim}",
            components.len()
        )));
    }
    components
        .iter()
        .map(|c| Ok(expr::to_realfn(&expr::parse_expr(c.trim())?, hooks)))
        .collect()
}

fn read_system_file(path: &Path) -> Result<(DMatrix<f64>, DVector<f64>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::user(format!("cannot read {}: {e}", path.display())))?;
    let mut numbers = text.split_whitespace().map(|tok| {
        tok.parse::<f64>()
            .map_err(|_| CliError::user(format!("bad number `{tok}` in {}", path.display())))
    });
    let n = match numbers.next() {
        Some(Ok(v)) if v.fract() == 0.0 && (1.0..=64.0).contains(&v) => v as usize,
        Some(Ok(v)) => return Err(CliError::user(format!("bad dimension {v} in system file"))),
        Some(Err(e)) => return Err(e),
        None => return Err(CliError::user("empty system file")),
    };
    let mut values = Vec::with_capacity(n * n + n);
    for _ in 0..n * n + n {
        match numbers.next() {
            Some(v) => values.push(v?),
            None => {
                return Err(CliError::user(format!(
                    "system file ends early: expected {} numbers after the dimension",
                    n * n + n
                )))
            }
        }
    }
    if numbers.next().is_some() {
        return Err(CliError::user("trailing numbers in system file"));
    }
    let a = DMatrix::from_row_slice(n, n, &values[..n * n]);
    let c = DVector::from_column_slice(&values[n * n..]);
    Ok((a, c))
}

fn dispatch<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    let spec = quad_spec(cli.tol)?;
    match &cli.cmd {
        Cmd::Deriv {
            f,
            alpha,
            a,
            at,
            backend,
            count,
        } => {
            let ast = expr::parse_expr(f)?;
            let ord = FracOrder::new(*alpha).map_err(CliError::from)?;
            let hooks = (ord.n() + 1).max(count.unwrap_or(0)).min(6);
            let func = expr::to_realfn(&ast, hooks);
            let mut table = Output::new(&["t", "value"]);
            table.echo("f", f);
            table.echo("alpha", alpha);
            table.echo("a", a);
            if let Some(c) = count {
                table.echo("count", c);
            }
            for t in at.points()? {
                let v = match count {
                    Some(c) => sequential_left_deriv(&func, *a, *alpha, *c, t)?,
                    None if ord.n() == 0 => left_deriv(&func, *a, ord, t, &backend.build())?,
                    None => higher_left_deriv(&func, *a, ord, t)?,
                };
                table.push(vec![t, check_finite(v)?]);
            }
            table.emit(cli.format, out)?;
        }
        Cmd::Rderiv {
            f,
            alpha,
            b,
            at,
            backend,
        } => {
            let ast = expr::parse_expr(f)?;
            let ord = FracOrder::new(*alpha).map_err(CliError::from)?;
            let func = expr::to_realfn(&ast, (ord.n() + 1).min(6));
            let mut table = Output::new(&["t", "value"]);
            table.echo("f", f);
            table.echo("alpha", alpha);
            table.echo("b", b);
            for t in at.points()? {
                let v = if ord.n() == 0 {
                    right_deriv(&func, *b, ord, t, &backend.build())?
                } else {
                    higher_right_deriv(&func, *b, ord, t)?
                };
                table.push(vec![t, check_finite(v)?]);
            }
            table.emit(cli.format, out)?;
        }
        Cmd::Integ {
            f,
            alpha,
            a,
            at,
            riemann_liouville,
        } => {
            let ast = expr::parse_expr(f)?;
            let func = expr::to_realfn(&ast, 0);
            let ord = FracOrder::new(*alpha).map_err(CliError::from)?;
            let mut table = Output::new(&["t", "value"]);
            table.echo("f", f);
            table.echo("alpha", alpha);
            table.echo("a", a);
            table.echo(
                "kernel",
                if *riemann_liouville {
                    "riemann-liouville"
                } else {
                    "conformable"
                },
            );
            for t in at.points()? {
                let v = if *riemann_liouville {
                    rl_integral(&func, *a, *alpha, t, &spec)?
                } else {
                    left_integral(&func, *a, ord, t, &spec)?
                };
                table.push(vec![t, check_finite(v)?]);
            }
            table.emit(cli.format, out)?;
        }
        Cmd::Rinteg { f, alpha, b, at } => {
            let ast = expr::parse_expr(f)?;
            let func = expr::to_realfn(&ast, 0);
            let ord = FracOrder::new(*alpha).map_err(CliError::from)?;
            let mut table = Output::new(&["t", "value"]);
            table.echo("f", f);
            table.echo("alpha", alpha);
            table.echo("b", b);
            for t in at.points()? {
                let v = right_integral(&func, *b, ord, t, &spec)?;
                table.push(vec![t, check_finite(v)?]);
            }
            table.emit(cli.format, out)?;
        }
        Cmd::Series {
            kind,
            alpha,
            t0,
            terms,
            load,
            t,
            grid,
        } => {
            let series = match load {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        CliError::user(format!("cannot read {}: {e}", path.display()))
                    })?;
                    FracSeries::from_text(&text)?
                }
                None => {
                    let kind = kind.expect("clap required_unless_present");
                    let alpha = alpha.expect("clap required_unless_present");
                    builtin_series(kind.build(), *t0, alpha, *terms)?
                }
            };
            let points = match (t, grid) {
                (Some(t), None) => Some(vec![*t]),
                (None, Some(g)) => Some(parse_grid(g)?),
                (None, None) => None,
                (Some(_), Some(_)) => unreachable!("clap conflict"),
            };
            match points {
                None => {
                    // No evaluation request: emit the serialized form.
                    write!(out, "{}", series.to_text())?;
                }
                Some(ts) => {
                    let mut table = Output::new(&["t", "value"]);
                    table.echo("t0", series.t0());
                    table.echo("alpha", series.alpha());
                    table.echo("terms", series.degree());
                    table.echo("radius", series.radius());
                    for t in ts {
                        table.push(vec![t, check_finite(eval_series(&series, t)?)?]);
                    }
                    table.emit(cli.format, out)?;
                }
            }
        }
        Cmd::Laplace {
            f,
            alpha,
            s,
            t0,
            tail_bound,
        } => {
            let ast = expr::parse_expr(f)?;
            let func = expr::to_realfn(&ast, 0);
            let query = TransformQuery::new(*t0, *alpha, *s, *tail_bound)?;
            let v = laplace_numeric(&func, &query, &spec)?;
            let mut table = Output::new(&["s", "value"]);
            table.echo("f", f);
            table.echo("alpha", alpha);
            table.echo("t0", t0);
            table.push(vec![*s, check_finite(v)?]);
            table.emit(cli.format, out)?;
        }
        Cmd::Table {
            kind,
            alpha,
            s,
            t0,
            p,
            lambda,
            omega,
            k,
            inner,
        } => {
            let entry = build_table_kind(*kind, *p, *lambda, *omega, *k, *inner)?;
            let v = laplace_table(&entry, *t0, *alpha, *s)?;
            let mut table = Output::new(&["s", "value"]);
            table.echo("kind", format!("{kind:?}").to_lowercase());
            table.echo("alpha", alpha);
            table.echo("t0", t0);
            table.push(vec![*s, check_finite(v)?]);
            table.emit(cli.format, out)?;
        }
        Cmd::Solve {
            lambda,
            y0,
            alpha,
            a,
            at,
            picard,
        } => {
            let mut table = Output::new(&["t", "y"]);
            table.echo("lambda", lambda);
            table.echo("y0", y0);
            table.echo("alpha", alpha);
            table.echo("a", a);
            if let Some(n) = picard {
                table.echo("picard", n);
            }
            for t in at.points()? {
                let v = match picard {
                    Some(n) => picard_partial(*lambda, *y0, *a, *alpha, *n, t)?,
                    None => solve_scalar(*lambda, *y0, *a, *alpha, t)?,
                };
                table.push(vec![t, check_finite(v)?]);
            }
            table.emit(cli.format, out)?;
        }
        Cmd::System {
            file,
            f,
            alpha,
            a,
            at,
        } => {
            let (matrix, initial) = read_system_file(file)?;
            let dim = matrix.nrows();
            let forcing = match f {
                Some(src) => parse_forcing(src, dim, 0)?,
                None => Vec::new(),
            };
            let sys = LinearFracSystem::new(matrix, forcing, initial, *a, *alpha)?;
            let mut columns: Vec<String> = vec!["t".into()];
            for i in 1..=dim {
                columns.push(format!("y{i}"));
            }
            let column_refs: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
            let mut table = Output::new(&column_refs);
            table.echo("file", file.display());
            table.echo("alpha", alpha);
            table.echo("a", a);
            for t in at.points()? {
                let y = solve_system(&sys, t, &spec)?;
                let mut row = vec![t];
                for v in y.iter() {
                    row.push(check_finite(*v)?);
                }
                table.push(row);
            }
            table.emit(cli.format, out)?;
        }
        Cmd::Gronwall {
            r,
            delta,
            k,
            alpha,
            a,
            b,
            points,
        } => {
            let ast = expr::parse_expr(r)?;
            let func = expr::to_realfn(&ast, 0);
            let inst = GronwallInstance::new(func, *delta, *k, *a, *b, *alpha)?;
            let report = gronwall_check(&inst, *points, &spec)?;
            let mut table = Output::new(&["t", "r", "hypothesis_slack", "conclusion_slack"]);
            table.echo("r", r);
            table.echo("delta", delta);
            table.echo("k", k);
            table.echo("alpha", alpha);
            table.echo("hypothesis_holds", report.hypothesis_holds());
            table.echo("conclusion_holds", report.conclusion_holds());
            table.echo("violations", report.violations().len());
            for p in &report.points {
                table.push(vec![p.t, p.r_value, p.hypothesis_slack, p.conclusion_slack]);
            }
            table.emit(cli.format, out)?;
        }
        Cmd::Export {
            lambda,
            y0,
            file,
            f,
            alpha,
            a,
            grid,
            out: out_path,
        } => {
            let points = parse_grid(grid)?;
            let trajectory: Vec<(f64, DVector<f64>)> = match (lambda, file) {
                (Some(l), None) => points
                    .iter()
                    .map(|&t| {
                        solve_scalar(*l, *y0, *a, *alpha, t)
                            .map(|v| (t, DVector::from_vec(vec![v])))
                            .map_err(CliError::from)
                    })
                    .collect::<Result<_, _>>()?,
                (None, Some(path)) => {
                    let (matrix, initial) = read_system_file(path)?;
                    let dim = matrix.nrows();
                    let forcing = match f {
                        Some(src) => parse_forcing(src, dim, 0)?,
                        None => Vec::new(),
                    };
                    let sys = LinearFracSystem::new(matrix, forcing, initial, *a, *alpha)?;
                    conformable::sample_trajectory(&sys, &points, &spec)?
                }
                _ => {
                    return Err(CliError::user(
                        "export needs exactly one of --lambda or --file",
                    ))
                }
            };
            match out_path {
                Some(path) => {
                    let mut file = std::fs::File::create(path)?;
                    write_trajectory_csv(&mut file, &trajectory)?;
                }
                None => write_trajectory_csv(out, &trajectory)?,
            }
        }
    }
    Ok(())
}

fn build_table_kind(
    kind: TableKindArg,
    p: Option<f64>,
    lambda: Option<f64>,
    omega: Option<f64>,
    k: Option<f64>,
    inner: Option<TableKindArg>,
) -> Result<TableKind, CliError> {
    let need = |opt: Option<f64>, flag: &str| {
        opt.ok_or_else(|| CliError::user(format!("this table entry needs --{flag}")))
    };
    Ok(match kind {
        TableKindArg::One => TableKind::One,
        TableKindArg::T => TableKind::Time,
        TableKindArg::Tpow => TableKind::TimePow { p: need(p, "p")? },
        TableKindArg::Fexp => TableKind::FracExp {
            lambda: need(lambda, "lambda")?,
        },
        TableKindArg::Fsin => TableKind::FracSin {
            omega: need(omega, "omega")?,
        },
        TableKindArg::Fcos => TableKind::FracCos {
            omega: need(omega, "omega")?,
        },
        TableKindArg::Damped => {
            let inner_kind = inner.ok_or_else(|| CliError::user("damped entry needs --inner"))?;
            if matches!(inner_kind, TableKindArg::Damped) {
                return Err(CliError::user(
                    "nested damped entries are not supported on the CLI",
                ));
            }
            TableKind::Damped {
                k: need(k, "k")?,
                inner: Box::new(build_table_kind(inner_kind, p, lambda, omega, None, None)?),
            }
        }
    })
}
