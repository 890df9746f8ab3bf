//! End-to-end fitting: direct fits at known or detected orders, and greedy
//! adaptive fits that grow the support until a tolerance is met.

use serde::Serialize;

use crate::cascade::{cascaded_nullspace, optimal_variable_order, CascadeOptions, FlopReport};
use crate::complex_io::{to_pair, Pair};
use crate::error::{Error, Result};
use crate::grid::{ensure_disjoint, multi_indices, DataSource};
use crate::loewner::{
    build_loewner_nd, detect_orders, leading_selection, nullspace_vector, AxisSelection, Nullity,
    DEFAULT_REL_TOL,
};
use crate::model::{max_error, BarycentricModel};
use crate::realize::{build_realization, optimal_split, GeneralizedRealization, VariableSplit};

/// Default ceiling for a dense Loewner matrix: 2 GiB.
pub const DEFAULT_MEMORY_LIMIT: u128 = 2 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullspaceMethod {
    Full,
    Cascaded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VariableOrder {
    Natural,
    /// Decreasing column count.
    Optimal,
    Explicit(Vec<usize>),
}

impl VariableOrder {
    pub fn resolve(&self, orders: &[usize]) -> Vec<usize> {
        match self {
            VariableOrder::Natural => (0..orders.len()).collect(),
            VariableOrder::Optimal => optimal_variable_order(orders),
            VariableOrder::Explicit(o) => o.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitChoice {
    FirstVariable,
    Optimal,
    Explicit(VariableSplit),
}

impl SplitChoice {
    pub fn resolve(&self, orders: &[usize]) -> Result<VariableSplit> {
        let split = match self {
            SplitChoice::FirstVariable => VariableSplit::first_variable(orders.len()),
            SplitChoice::Optimal => {
                optimal_split(&orders.iter().map(|k| k - 1).collect::<Vec<_>>())?
            }
            SplitChoice::Explicit(s) => s.clone(),
        };
        split.validate(orders.len())?;
        Ok(split)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub method: NullspaceMethod,
    pub order: VariableOrder,
    /// Degrees per variable; detected from the data when absent.
    pub degrees: Option<Vec<usize>>,
    pub rel_tol: f64,
    /// Random frozen combinations per variable during order detection.
    pub detection_budget: usize,
    pub seed: u64,
    pub split: SplitChoice,
    pub memory_limit: u128,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            method: NullspaceMethod::Cascaded,
            order: VariableOrder::Optimal,
            degrees: None,
            rel_tol: DEFAULT_REL_TOL,
            detection_budget: 8,
            seed: 0,
            split: SplitChoice::FirstVariable,
            memory_limit: DEFAULT_MEMORY_LIMIT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub model: BarycentricModel,
    pub realization: GeneralizedRealization,
    pub degrees: Vec<usize>,
    pub selection: Vec<AxisSelection>,
    pub report: FlopReport,
    pub warnings: Vec<String>,
}

struct Solved {
    model: BarycentricModel,
    report: FlopReport,
    warnings: Vec<String>,
}

fn solve(source: &DataSource, selection: &[AxisSelection], options: &FitOptions) -> Result<Solved> {
    let orders: Vec<usize> = selection.iter().map(AxisSelection::order).collect();
    let order = options.order.resolve(&orders);
    let mut report = FlopReport::new(&orders, &order);
    let mut warnings = Vec::new();
    let grids = source.grids();
    let (vector, values) = match options.method {
        NullspaceMethod::Full => {
            let lw = build_loewner_nd(source, selection, Some(options.memory_limit))?;
            let ns = nullspace_vector(&lw.matrix, options.rel_tol)?;
            match ns.nullity {
                Nullity::Multiple => {
                    return Err(Error::Degenerate(format!(
                        "the Loewner matrix has a {}-dimensional null space; reduce the degrees",
                        lw.matrix.ncols() - ns.rank
                    )))
                }
                Nullity::Trivial => warnings.push(
                    "the Loewner matrix has full column rank; using the least-squares vector"
                        .into(),
                ),
                Nullity::Exact => {}
            }
            (ns.vector, lw.column_values)
        }
        NullspaceMethod::Cascaded => {
            let res = cascaded_nullspace(
                source,
                selection,
                &CascadeOptions {
                    order: order.clone(),
                    anchors: None,
                    rel_tol: options.rel_tol,
                },
            )?;
            report.cascaded_flops = res.flops;
            report.reanchor_flops = res.reanchor_flops;
            if res.least_squares_blocks > 0 {
                warnings.push(format!(
                    "{} one-variable problems had no exact null direction",
                    res.least_squares_blocks
                ));
            }
            let values = multi_indices(&orders)
                .map(|m| {
                    let idx: Vec<usize> = m
                        .iter()
                        .zip(selection)
                        .map(|(&i, a)| a.columns[i])
                        .collect();
                    source.value_at_indices(&idx)
                })
                .collect::<Result<Vec<_>>>()?;
            (res.vector, values)
        }
    };
    let support = grids
        .iter()
        .zip(selection)
        .map(|(g, a)| a.columns.iter().map(|&i| g.point(i)).collect())
        .collect();
    let model = BarycentricModel::new(source.names(), support, vector, values)?;
    Ok(Solved {
        model,
        report,
        warnings,
    })
}

/// Column counts for the given degrees, capped so every variable keeps at
/// least as many candidate rows as columns minus one.
pub fn clamp_orders(source: &DataSource, degrees: &[usize]) -> (Vec<usize>, Vec<String>) {
    let mut warnings = Vec::new();
    let orders = source
        .grids()
        .iter()
        .zip(degrees)
        .map(|(g, &d)| {
            let cap = g.len().div_ceil(2);
            let k = d.saturating_add(1);
            if k > cap {
                warnings.push(format!(
                    "degree {d} of variable {} exceeds what {} points support; clamped to {}",
                    g.name(),
                    g.len(),
                    cap - 1
                ));
            }
            k.min(cap)
        })
        .collect();
    (orders, warnings)
}

/// Fits at the given degrees, or at degrees detected from one-variable ranks.
pub fn fit_direct(source: &DataSource, options: &FitOptions) -> Result<FitResult> {
    ensure_disjoint(source.grids())?;
    let n = source.num_variables();
    let mut warnings = Vec::new();
    let degrees = match &options.degrees {
        Some(d) => {
            if d.len() != n {
                return Err(Error::Input(format!(
                    "{} degrees given for {n} variables",
                    d.len()
                )));
            }
            d.clone()
        }
        None => {
            let det = detect_orders(
                source,
                options.detection_budget,
                options.rel_tol,
                options.seed,
            )?;
            warnings.extend(det.warnings);
            det.degrees
        }
    };
    let (orders, clamped) = clamp_orders(source, &degrees);
    warnings.extend(clamped);
    let selection = leading_selection(source, &orders)?;
    let solved = solve(source, &selection, options)?;
    warnings.extend(solved.warnings);
    let split = options.split.resolve(&orders)?;
    let realization = build_realization(&solved.model, &split)?;
    Ok(FitResult {
        degrees: orders.iter().map(|k| k - 1).collect(),
        model: solved.model,
        realization,
        selection,
        report: solved.report,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdaptiveIteration {
    pub iteration: usize,
    /// Point promoted to the support per variable, if any.
    pub added: Vec<Option<Pair>>,
    pub columns: Vec<usize>,
    pub flops: u128,
    pub max_error: f64,
    pub argmax: Vec<Pair>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AdaptiveLog {
    pub iterations: Vec<AdaptiveIteration>,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct AdaptiveResult {
    /// Converged model, or the one with the smallest error otherwise.
    pub model: BarycentricModel,
    pub report: FlopReport,
    pub log: AdaptiveLog,
    pub converged: bool,
    pub warnings: Vec<String>,
}

/// Every non-support index for the cascade, which picks its own rows per
/// one-variable problem; the dense method keeps a square matrix.
fn adaptive_rows(columns: &[usize], extent: usize, method: NullspaceMethod) -> Vec<usize> {
    let free = (0..extent).filter(|i| !columns.contains(i));
    match method {
        NullspaceMethod::Cascaded => free.collect(),
        NullspaceMethod::Full => free.take(columns.len()).collect(),
    }
}

/// Greedy support growth: each iteration promotes, per variable, the coordinate
/// of the worst grid point into the support unless it is already there.
/// The first iteration uses the largest data magnitude, the error of the zero model.
pub fn fit_adaptive(source: &DataSource, tol: f64, options: &FitOptions) -> Result<AdaptiveResult> {
    ensure_disjoint(source.grids())?;
    let grids = source.grids();
    let n = grids.len();
    let extents: Vec<usize> = grids.iter().map(|g| g.len()).collect();

    let mut worst: Option<(f64, Vec<usize>)> = None;
    for idx in multi_indices(&extents) {
        let v = source.value_at_indices(&idx)?.norm();
        if worst.as_ref().is_none_or(|(b, _)| v > *b) {
            worst = Some((v, idx));
        }
    }
    let mut target = worst.expect("grid is nonempty").1;

    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut log = AdaptiveLog::default();
    let mut warnings = Vec::new();
    let mut best: Option<(f64, BarycentricModel, FlopReport)> = None;
    loop {
        let mut added = vec![None; n];
        for l in 0..n {
            let cap = grids[l].len().div_ceil(2);
            if !columns[l].contains(&target[l]) && columns[l].len() < cap {
                columns[l].push(target[l]);
                added[l] = Some(to_pair(grids[l].point(target[l])));
            }
        }
        if added.iter().all(Option::is_none) {
            warnings.push("no new support point could be added; stopping".into());
            break;
        }
        let selection: Vec<AxisSelection> = columns
            .iter()
            .zip(&extents)
            .map(|(cols, &e)| AxisSelection {
                columns: cols.clone(),
                rows: adaptive_rows(cols, e, options.method),
            })
            .collect();
        let solved = match solve(source, &selection, options) {
            Ok(s) => s,
            Err(Error::Degenerate(msg)) => {
                warnings.push(format!("stopping at a degenerate support: {msg}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let report = max_error(&solved.model, source)?;
        let flops = match options.method {
            NullspaceMethod::Full => solved.report.full_flops,
            NullspaceMethod::Cascaded => solved.report.cascaded_flops,
        };
        log.iterations.push(AdaptiveIteration {
            iteration: log.iterations.len() + 1,
            added,
            columns: columns.iter().map(Vec::len).collect(),
            flops,
            max_error: report.max_error,
            argmax: report.point.iter().copied().map(to_pair).collect(),
        });
        let converged = report.max_error <= tol;
        if best.as_ref().is_none_or(|(e, _, _)| report.max_error < *e) || converged {
            best = Some((report.max_error, solved.model, solved.report));
        }
        if converged {
            log.converged = true;
            break;
        }
        target = report.argmax;
    }
    let (_, model, report) =
        best.ok_or_else(|| Error::Degenerate("the adaptive fit produced no model".into()))?;
    Ok(AdaptiveResult {
        model,
        report,
        converged: log.converged,
        log,
        warnings,
    })
}
