//! Command-line front end. Exit codes: 0 success, 1 failed verification,
//! 2 input error, 3 no convergence, 4 numerical degeneracy.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cascade::{format_bytes, memory_estimate, FlopReport};
use crate::complex_io::{format_complex, format_general, parse_complex, to_pair};
use crate::driver::{
    clamp_orders, fit_adaptive, fit_direct, FitOptions, NullspaceMethod, SplitChoice,
    VariableOrder, DEFAULT_MEMORY_LIMIT,
};
use crate::error::Error;
use crate::grid::DataSource;
use crate::loewner::{build_loewner_nd, detect_orders, AxisSelection, DEFAULT_REL_TOL};
use crate::model::{max_error, BarycentricModel};
use crate::realize::{build_realization, GeneralizedRealization, VariableSplit};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ndloewner",
    version,
    about = "Multivariate rational interpolation with Loewner matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate per-variable degrees from one-variable Loewner ranks.
    OrderDetect {
        #[arg(long)]
        data: PathBuf,
        /// Random frozen combinations per variable.
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fit a model at given or detected degrees.
    Fit {
        #[command(flatten)]
        source: SourceArgs,
        /// Comma-separated degrees; detected when omitted.
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Cascade)]
        method: Method,
        /// `auto`, `natural`, or a comma-separated list of names or 1-based indices.
        #[arg(long, default_value = "auto")]
        order: String,
        #[arg(long, default_value_t = DEFAULT_REL_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest dense Loewner matrix allowed, in bytes.
        #[arg(long, default_value_t = DEFAULT_MEMORY_LIMIT)]
        memory_limit: u128,
        #[arg(long)]
        out: PathBuf,
        /// Also write the realization (first variable on the right).
        #[arg(long)]
        realization: Option<PathBuf>,
    },
    /// Grow the support greedily until the grid error drops below a tolerance.
    FitAdaptive {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Method::Cascade)]
        method: Method,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Evaluate a model at one point.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated coordinates such as `1.5,2-0.5i`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Build the generalized realization of a model.
    Realize {
        #[arg(long)]
        model: PathBuf,
        /// `first`, `auto`, or `right|left` groups such as `s,t|p`.
        #[arg(long, default_value = "first")]
        split: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a model against data and optionally against its realization.
    Verify {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        realization: Option<PathBuf>,
        /// Largest acceptable grid error.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Flop and memory estimates for given degrees.
    Flops {
        #[arg(long, allow_hyphen_values = true)]
        degrees: String,
        /// `given`, `auto`, or a comma-separated list of 1-based indices.
        #[arg(long, default_value = "given")]
        order: String,
    },
    /// Sample a model along one variable as CSV.
    PlotData {
        #[arg(long)]
        model: PathBuf,
        /// `name=lo:hi:count`.
        #[arg(long, allow_hyphen_values = true)]
        sweep: String,
        /// `name=value` pairs for the other variables, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        frozen: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Dense tableau JSON.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Expression oracle JSON.
    #[arg(long)]
    oracle: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Full,
    Cascade,
}

impl From<Method> for NullspaceMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Full => NullspaceMethod::Full,
            Method::Cascade => NullspaceMethod::Cascaded,
        }
    }
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Degenerate(_) | Error::Pole(_) => EXIT_DEGENERATE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CliResult = std::result::Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn json(&mut self, value: &Value) {
        let _ = writeln!(
            self.out,
            "{}",
            serde_json::to_string_pretty(value).unwrap_or_default()
        );
    }

    fn warn(&mut self, warnings: &[String]) {
        for w in warnings {
            let _ = writeln!(self.err, "warning: {w}");
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    match execute(cli.command, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, io: &mut Io<'_>) -> CliResult {
    match command {
        Command::OrderDetect {
            data,
            budget,
            tol,
            seed,
        } => {
            let source = DataSource::load(&data)?;
            let det = detect_orders(&source, budget, tol, seed)?;
            io.warn(&det.warnings);
            io.json(&json!({ "degrees": det.degrees, "warnings": det.warnings }));
            Ok(EXIT_OK)
        }
        Command::Fit {
            source,
            degrees,
            method,
            order,
            tol,
            budget,
            seed,
            memory_limit,
            out,
            realization,
        } => {
            let src = source.load()?;
            let names = src.names();
            let mut options = FitOptions {
                method: method.into(),
                order: parse_order(&order, &names, true)?,
                degrees: None,
                rel_tol: tol,
                detection_budget: budget,
                seed,
                split: SplitChoice::FirstVariable,
                memory_limit,
            };
            if let Some(text) = degrees {
                let d = parse_usize_list(&text)?;
                if d.len() != names.len() {
                    return Err(input(format!(
                        "{} degrees given for {} variables",
                        d.len(),
                        names.len()
                    )));
                }
                let (orders, warnings) = clamp_orders(&src, &d);
                io.warn(&warnings);
                options.degrees = Some(orders.iter().map(|k| k - 1).collect());
            }
            let fit = fit_direct(&src, &options)?;
            io.warn(&fit.warnings);
            write_atomic(&out, &fit.model.to_json()?)?;
            if let Some(path) = realization {
                write_atomic(&path, &fit.realization.to_json()?)?;
            }
            let mut value = report_json(&fit.report, &names, options.method);
            value["degrees"] = json!(fit.degrees);
            value["warnings"] = json!(fit.warnings);
            io.json(&value);
            Ok(EXIT_OK)
        }
        Command::FitAdaptive {
            source,
            tol,
            method,
            out,
            log,
        } => {
            let src = source.load()?;
            let options = FitOptions {
                method: method.into(),
                ..FitOptions::default()
            };
            let res = fit_adaptive(&src, tol, &options)?;
            io.warn(&res.warnings);
            write_atomic(&out, &res.model.to_json()?)?;
            if let Some(path) = log {
                write_atomic(
                    &path,
                    &serde_json::to_string_pretty(&res.log).map_err(Error::from)?,
                )?;
            }
            let last = res.log.iterations.last();
            io.json(&json!({
                "converged": res.converged,
                "iterations": res.log.iterations.len(),
                "columns": res.model.orders(),
                "max_error": last.map(|i| i.max_error),
                "flops": res.log.iterations.iter().map(|i| i.flops).collect::<Vec<_>>(),
            }));
            if res.converged {
                Ok(EXIT_OK)
            } else {
                let _ = writeln!(io.err, "error: no convergence to {tol}; best model saved");
                Ok(EXIT_NOT_CONVERGED)
            }
        }
        Command::Eval { model, point } => {
            let model = BarycentricModel::load(&model)?;
            let point = parse_point(&point)?;
            let value = model.eval(&point)?;
            let _ = writeln!(io.out, "{}", format_complex(value));
            Ok(EXIT_OK)
        }
        Command::Realize { model, split, out } => {
            let model = BarycentricModel::load(&model)?;
            let split = parse_split(&split, model.names())?.resolve(&model.orders())?;
            let real = build_realization(&model, &split)?;
            write_atomic(&out, &real.to_json()?)?;
            let names = model.names();
            io.json(&json!({
                "m": real.size(),
                "kappa": real.kappa(),
                "ell": real.ell(),
                "compressed_size": real.compress().size(),
                "split": {
                    "right": split.right.iter().map(|&v| &names[v]).collect::<Vec<_>>(),
                    "left": split.left.iter().map(|&v| &names[v]).collect::<Vec<_>>(),
                },
            }));
            Ok(EXIT_OK)
        }
        Command::Verify {
            model,
            source,
            realization,
            tol,
        } => {
            let model = BarycentricModel::load(&model)?;
            let src = source.load()?;
            let real = realization
                .as_deref()
                .map(GeneralizedRealization::load)
                .transpose()?;
            let (value, passed) = verify(&model, &src, real.as_ref(), tol)?;
            io.json(&value);
            Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Flops { degrees, order } => {
            let d = parse_usize_list(&degrees)?;
            if d.is_empty() {
                return Err(input("no degrees given"));
            }
            let ks: Vec<usize> = d.iter().map(|x| x + 1).collect();
            let names: Vec<String> = (1..=ks.len()).map(|i| i.to_string()).collect();
            let order = parse_order(&order, &names, false)?.resolve(&ks);
            crate::cascade::validate_order(&order, ks.len())?;
            let report = FlopReport::new(&ks, &order);
            let mem = memory_estimate(&ks);
            io.json(&json!({
                "degrees": d,
                "columns": ks,
                "order": order.iter().map(|v| v + 1).collect::<Vec<_>>(),
                "cascaded_flops": report.cascaded_flops,
                "full_flops": report.full_flops,
                "cascaded_bytes": mem.cascaded_bytes,
                "full_bytes": mem.full_bytes,
                "cascaded_memory": format_bytes(mem.cascaded_bytes),
                "full_memory": format_bytes(mem.full_bytes),
            }));
            Ok(EXIT_OK)
        }
        Command::PlotData {
            model,
            sweep,
            frozen,
            out,
        } => {
            let model = BarycentricModel::load(&model)?;
            let csv = plot_csv(&model, &sweep, frozen.as_deref())?;
            match out {
                Some(path) => write_atomic(&path, &csv)?,
                None => {
                    let _ = write!(io.out, "{csv}");
                }
            }
            Ok(EXIT_OK)
        }
    }
}

impl SourceArgs {
    fn load(&self) -> std::result::Result<DataSource, Failure> {
        let (path, want_oracle) = match (&self.data, &self.oracle) {
            (Some(p), None) => (p, false),
            (None, Some(p)) => (p, true),
            _ => return Err(input("give exactly one of --data and --oracle")),
        };
        let src = DataSource::load(path)?;
        match (&src, want_oracle) {
            (DataSource::Oracle(_), false) => Err(input(format!(
                "{} is an oracle file; use --oracle",
                path.display()
            ))),
            (DataSource::Dense(_), true) => Err(input(format!(
                "{} is a data file; use --data",
                path.display()
            ))),
            _ => Ok(src),
        }
    }
}

fn report_json(report: &FlopReport, names: &[String], method: NullspaceMethod) -> Value {
    let flops = match method {
        NullspaceMethod::Full => report.full_flops,
        NullspaceMethod::Cascaded => report.cascaded_flops,
    };
    json!({
        "method": match method { NullspaceMethod::Full => "full", NullspaceMethod::Cascaded => "cascade" },
        "columns": report.columns,
        "order": report.order.iter().map(|&v| &names[v]).collect::<Vec<_>>(),
        "flops": flops,
        "cascaded_flops": report.cascaded_flops,
        "full_flops": report.full_flops,
        "reanchor_flops": report.reanchor_flops,
        "cascaded_bytes": report.cascaded_bytes,
        "full_bytes": report.full_bytes,
    })
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(Error::from)?;
    tmp.write_all(contents.as_bytes()).map_err(Error::from)?;
    tmp.persist(path).map_err(|e| Error::from(e.error))?;
    Ok(())
}

fn parse_usize_list(text: &str) -> std::result::Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| input(format!("'{t}' is not a nonnegative integer")))
        })
        .collect()
}

fn variable_index(token: &str, names: &[String]) -> std::result::Result<usize, Failure> {
    if let Some(i) = names.iter().position(|n| n == token) {
        return Ok(i);
    }
    match token.parse::<usize>() {
        Ok(i) if (1..=names.len()).contains(&i) => Ok(i - 1),
        _ => Err(input(format!("unknown variable '{token}'"))),
    }
}

fn parse_order(
    text: &str,
    names: &[String],
    auto_default: bool,
) -> std::result::Result<VariableOrder, Failure> {
    match text.trim() {
        "auto" => Ok(VariableOrder::Optimal),
        "natural" | "given" => Ok(VariableOrder::Natural),
        "" if auto_default => Ok(VariableOrder::Optimal),
        list => {
            let order = list
                .split(',')
                .map(|t| variable_index(t.trim(), names))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            crate::cascade::validate_order(&order, names.len())?;
            Ok(VariableOrder::Explicit(order))
        }
    }
}

fn parse_split(text: &str, names: &[String]) -> std::result::Result<SplitChoice, Failure> {
    match text.trim() {
        "first" | "default" => Ok(SplitChoice::FirstVariable),
        "auto" => Ok(SplitChoice::Optimal),
        groups => {
            let (right, left) = groups
                .split_once('|')
                .ok_or_else(|| input(format!("split '{groups}' needs the form right|left")))?;
            let list = |s: &str| {
                s.split(',')
                    .map(|t| t.trim())
                    .filter(|t| !t.is_empty())
                    .map(|t| variable_index(t, names))
                    .collect::<std::result::Result<Vec<_>, _>>()
            };
            let split = VariableSplit {
                right: list(right)?,
                left: list(left)?,
            };
            split.validate(names.len())?;
            Ok(SplitChoice::Explicit(split))
        }
    }
}

fn parse_point(text: &str) -> std::result::Result<Vec<Complex64>, Failure> {
    text.split(',')
        .map(|t| parse_complex(t).map_err(Failure::from))
        .collect()
}

fn verify(
    model: &BarycentricModel,
    source: &DataSource,
    realization: Option<&GeneralizedRealization>,
    tol: f64,
) -> std::result::Result<(Value, bool), Failure> {
    let mut checks = Vec::new();

    let grid = max_error(model, source)?;
    checks.push(json!({
        "name": "grid_error",
        "passed": grid.max_error <= tol,
        "value": grid.max_error,
        "argmax": grid.point.iter().copied().map(to_pair).collect::<Vec<_>>(),
    }));

    // Selected columns and rows per variable, when the support lies on the grid.
    let support = model.support();
    let selection: Option<Vec<AxisSelection>> = source
        .grids()
        .iter()
        .zip(support)
        .map(|(g, s)| {
            let columns: Option<Vec<usize>> = s.iter().map(|&z| g.index_of(z)).collect();
            columns.map(|columns| {
                let rows = (0..g.len())
                    .filter(|i| !columns.contains(i))
                    .take(columns.len())
                    .collect();
                AxisSelection { columns, rows }
            })
        })
        .collect();

    // Barycentric forms match their support for any weights, so the check
    // also covers the row points the weights were fitted to.
    let mut interp_err: f64 = 0.0;
    let mut check = |point: &[Complex64], truth: Complex64| {
        let err = match model.eval(point) {
            Ok(v) => (v - truth).norm() / truth.norm().max(1.0),
            Err(_) => f64::INFINITY,
        };
        interp_err = interp_err.max(err);
    };
    match &selection {
        Some(sel) => {
            let axes: Vec<Vec<usize>> = sel
                .iter()
                .map(|a| a.columns.iter().chain(&a.rows).copied().collect())
                .collect();
            let extents: Vec<usize> = axes.iter().map(Vec::len).collect();
            for m in crate::grid::multi_indices(&extents) {
                let idx: Vec<usize> = m.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
                let point: Vec<Complex64> = source
                    .grids()
                    .iter()
                    .zip(&idx)
                    .map(|(g, &i)| g.point(i))
                    .collect();
                check(&point, source.value_at_indices(&idx)?);
            }
        }
        None => {
            for (j, idx) in crate::grid::multi_indices(&model.orders()).enumerate() {
                let point: Vec<Complex64> = support.iter().zip(&idx).map(|(s, &i)| s[i]).collect();
                check(&point, model.values()[j]);
            }
        }
    }
    checks.push(json!({
        "name": "interpolation",
        "passed": interp_err <= 1e-9,
        "value": interp_err,
    }));

    // Sylvester identity of the Loewner matrix on the model's support.
    match selection.map(|sel| build_loewner_nd(source, &sel, Some(DEFAULT_MEMORY_LIMIT))) {
        Some(Ok(lw)) => {
            let residual = lw.sylvester_residual();
            checks.push(json!({
                "name": "sylvester",
                "passed": residual <= 1e-12,
                "value": residual,
            }));
        }
        Some(Err(Error::MemoryGuard { .. })) => checks.push(json!({
            "name": "sylvester",
            "passed": true,
            "skipped": "dense Loewner matrix exceeds the memory limit",
        })),
        Some(Err(e)) => return Err(e.into()),
        None => checks.push(json!({
            "name": "sylvester",
            "passed": true,
            "skipped": "support is not on the data grid",
        })),
    }

    if let Some(real) = realization {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let point: Vec<Complex64> = support
                .iter()
                .map(|s| {
                    let scale = s.iter().map(|z| z.norm()).fold(1.0, f64::max);
                    Complex64::new(
                        rng.random_range(-scale..scale),
                        rng.random_range(-scale..scale),
                    )
                })
                .collect();
            let (Ok(a), Ok(b)) = (model.eval(&point), real.eval(&point)) else {
                continue;
            };
            worst = worst.max((a - b).norm() / a.norm().max(1.0));
        }
        checks.push(json!({
            "name": "realization",
            "passed": worst <= 1e-8,
            "value": worst,
        }));
    }

    let passed = checks.iter().all(|c| c["passed"] == json!(true));
    Ok((json!({ "passed": passed, "checks": checks }), passed))
}

fn plot_csv(
    model: &BarycentricModel,
    sweep: &str,
    frozen: Option<&str>,
) -> std::result::Result<String, Failure> {
    let names = model.names();
    let (var, range) = sweep
        .split_once('=')
        .ok_or_else(|| input("sweep needs the form name=lo:hi:count"))?;
    let free = variable_index(var.trim(), names)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(input("sweep needs the form name=lo:hi:count"));
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| input(format!("bad bound '{lo}'")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| input(format!("bad bound '{hi}'")))?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| input(format!("bad count '{count}'")))?;
    if count < 2 {
        return Err(input("sweep count must be at least 2"));
    }

    let mut point: Vec<Option<Complex64>> = vec![None; names.len()];
    for pair in frozen
        .unwrap_or("")
        .split(',')
        .filter(|p| !p.trim().is_empty())
    {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| input(format!("frozen value '{pair}' needs name=value")))?;
        point[variable_index(name.trim(), names)?] = Some(parse_complex(value)?);
    }
    if let Some(v) = (0..names.len()).find(|&v| v != free && point[v].is_none()) {
        return Err(input(format!("no frozen value for variable {}", names[v])));
    }

    let mut csv = String::from("point,re,im,abs\n");
    for i in 0..count {
        let x = lo + (hi - lo) * i as f64 / (count - 1) as f64;
        point[free] = Some(Complex64::new(x, 0.0));
        let full: Vec<Complex64> = point.iter().map(|z| z.expect("all set")).collect();
        let g = |v: f64| format_general(v, 12);
        match model.eval(&full) {
            Ok(v) => csv.push_str(&format!(
                "{},{},{},{}\n",
                g(x),
                g(v.re),
                g(v.im),
                g(v.norm())
            )),
            Err(Error::Pole(_)) => csv.push_str(&format!("{},nan,nan,inf\n", g(x))),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(csv)
}
