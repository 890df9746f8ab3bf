//! Loewner matrices, their Sylvester structure, and SVD null vectors.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{multi_indices, DataSource};

/// Relative threshold below which a preferred anchor entry is considered zero.
pub const ANCHOR_REL_TOL: f64 = 1e-10;

/// Default relative singular value threshold for rank decisions.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Union indices chosen as interpolation columns and data rows for one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisSelection {
    pub columns: Vec<usize>,
    pub rows: Vec<usize>,
}

impl AxisSelection {
    pub fn order(&self) -> usize {
        self.columns.len()
    }
}

/// Columns are the first `k` points of the union grid; rows are the data points
/// followed by unused interpolation points, truncated to `k`.
pub fn leading_selection(source: &DataSource, orders: &[usize]) -> Result<Vec<AxisSelection>> {
    let grids = source.grids();
    if orders.len() != grids.len() {
        return Err(Error::Shape(format!(
            "{} orders for {} variables",
            orders.len(),
            grids.len()
        )));
    }
    grids
        .iter()
        .zip(orders)
        .map(|(g, &k)| {
            if k == 0 || k > g.len() {
                return Err(Error::InsufficientPoints(format!(
                    "variable {} needs {k} columns but has {} points",
                    g.name(),
                    g.len()
                )));
            }
            let columns: Vec<usize> = (0..k).collect();
            let rows = (g.interpolation().len()..g.len())
                .chain(0..g.interpolation().len())
                .filter(|i| !columns.contains(i))
                .take(k)
                .collect();
            Ok(AxisSelection { columns, rows })
        })
        .collect()
}

/// Builds the one-variable Loewner matrix `(v_i - w_j) / (mu_i - lambda_j)`.
pub fn build_loewner_1d(
    columns: &[Complex64],
    column_values: &[Complex64],
    rows: &[Complex64],
    row_values: &[Complex64],
) -> Result<DMatrix<Complex64>> {
    if columns.len() != column_values.len() || rows.len() != row_values.len() {
        return Err(Error::Shape("points and values differ in length".into()));
    }
    if let Some(&z) = rows.iter().find(|z| columns.contains(z)) {
        return Err(Error::CoincidentPoints {
            variable: "1".into(),
            value: z,
        });
    }
    Ok(DMatrix::from_fn(rows.len(), columns.len(), |i, j| {
        (row_values[i] - column_values[j]) / (rows[i] - columns[j])
    }))
}

/// An n-variable Loewner matrix with the data it was built from.
#[derive(Debug, Clone)]
pub struct LoewnerMatrix {
    pub matrix: DMatrix<Complex64>,
    /// Per variable, the interpolation points in column order.
    pub column_points: Vec<Vec<Complex64>>,
    /// Per variable, the data points in row order.
    pub row_points: Vec<Vec<Complex64>>,
    /// Sampled values at every column tuple, first variable slowest.
    pub column_values: Vec<Complex64>,
    /// Sampled values at every row tuple, first variable slowest.
    pub row_values: Vec<Complex64>,
}

/// Bytes of a dense complex `rows x cols` matrix.
pub fn dense_bytes(rows: usize, cols: usize) -> u128 {
    16 * rows as u128 * cols as u128
}

pub fn build_loewner_nd(
    source: &DataSource,
    selection: &[AxisSelection],
    memory_limit: Option<u128>,
) -> Result<LoewnerMatrix> {
    let grids = source.grids();
    if selection.len() != grids.len() {
        return Err(Error::Shape(format!(
            "selection covers {} of {} variables",
            selection.len(),
            grids.len()
        )));
    }
    let col_ext: Vec<usize> = selection.iter().map(|a| a.columns.len()).collect();
    let row_ext: Vec<usize> = selection.iter().map(|a| a.rows.len()).collect();
    let k: usize = col_ext.iter().product();
    let q: usize = row_ext.iter().product();
    if let Some(limit) = memory_limit {
        let required = dense_bytes(q, k);
        if required > limit {
            return Err(Error::MemoryGuard { required, limit });
        }
    }
    let column_points: Vec<Vec<Complex64>> = grids
        .iter()
        .zip(selection)
        .map(|(g, a)| a.columns.iter().map(|&i| g.point(i)).collect())
        .collect();
    let row_points: Vec<Vec<Complex64>> = grids
        .iter()
        .zip(selection)
        .map(|(g, a)| a.rows.iter().map(|&i| g.point(i)).collect())
        .collect();
    for (l, (cols, rows)) in column_points.iter().zip(&row_points).enumerate() {
        if let Some(&z) = rows.iter().find(|z| cols.contains(z)) {
            return Err(Error::CoincidentPoints {
                variable: grids[l].name().to_string(),
                value: z,
            });
        }
    }
    let sample = |ext: &[usize], pick: fn(&AxisSelection) -> &Vec<usize>| {
        multi_indices(ext)
            .map(|m| {
                let idx: Vec<usize> = m.iter().zip(selection).map(|(&i, a)| pick(a)[i]).collect();
                source.value_at_indices(&idx)
            })
            .collect::<Result<Vec<_>>>()
    };
    let column_values = sample(&col_ext, |a| &a.columns)?;
    let row_values = sample(&row_ext, |a| &a.rows)?;

    // Per-variable tables of mu_i - lambda_j.
    let gaps: Vec<DMatrix<Complex64>> = column_points
        .iter()
        .zip(&row_points)
        .map(|(c, r)| DMatrix::from_fn(r.len(), c.len(), |i, j| r[i] - c[j]))
        .collect();
    let row_multi: Vec<Vec<usize>> = multi_indices(&row_ext).collect();
    let col_multi: Vec<Vec<usize>> = multi_indices(&col_ext).collect();
    let matrix = DMatrix::from_fn(q, k, |i, j| {
        let den = row_multi[i]
            .iter()
            .zip(&col_multi[j])
            .zip(&gaps)
            .fold(Complex64::new(1.0, 0.0), |acc, ((&a, &b), g)| {
                acc * g[(a, b)]
            });
        (row_values[i] - column_values[j]) / den
    });
    Ok(LoewnerMatrix {
        matrix,
        column_points,
        row_points,
        column_values,
        row_values,
    })
}

/// Diagonal Kronecker factors and value vectors of the Sylvester chain.
///
/// `column_diagonals[l]` is the diagonal of `I (x) .. (x) diag(lambda_l) (x) .. (x) I`
/// and `row_diagonals[l]` is the analogous diagonal built from the data points.
#[derive(Debug, Clone)]
pub struct SylvesterOperands {
    pub column_diagonals: Vec<Vec<Complex64>>,
    pub row_diagonals: Vec<Vec<Complex64>>,
    /// Row vector `W` of column values.
    pub column_values: Vec<Complex64>,
    /// Column vector `V` of row values.
    pub row_values: Vec<Complex64>,
}

fn expanded_diagonals(points: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let ext: Vec<usize> = points.iter().map(Vec::len).collect();
    (0..points.len())
        .map(|l| multi_indices(&ext).map(|m| points[l][m[l]]).collect())
        .collect()
}

impl LoewnerMatrix {
    pub fn sylvester_operands(&self) -> SylvesterOperands {
        SylvesterOperands {
            column_diagonals: expanded_diagonals(&self.column_points),
            row_diagonals: expanded_diagonals(&self.row_points),
            column_values: self.column_values.clone(),
            row_values: self.row_values.clone(),
        }
    }

    /// Applies `X <- M_l X - X Lambda_l` for every variable starting from the
    /// Loewner matrix and returns `||X - (V 1^T - 1 W)||_F / ||V 1^T - 1 W||_F`.
    pub fn sylvester_residual(&self) -> f64 {
        let ops = self.sylvester_operands();
        let mut x = self.matrix.clone();
        for (m, lam) in ops.row_diagonals.iter().zip(&ops.column_diagonals) {
            for j in 0..x.ncols() {
                for i in 0..x.nrows() {
                    x[(i, j)] *= m[i] - lam[j];
                }
            }
        }
        let target = DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| {
            ops.row_values[i] - ops.column_values[j]
        });
        let scale = target.norm();
        let diff = (x - target).norm();
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

/// How many null directions the matrix has at the rank threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nullity {
    /// Exactly one: the interpolant is unique up to scaling.
    Exact,
    /// None: the returned vector is a least-squares minimizer.
    Trivial,
    /// Several: the orders are too high for the data.
    Multiple,
}

#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Right singular vector of the smallest singular value, scaled so that
    /// `vector[anchor] == 1`.
    pub vector: Vec<Complex64>,
    pub anchor: usize,
    /// Singular values in descending order, one per column.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub nullity: Nullity,
}

impl NullSpace {
    pub fn is_degenerate(&self) -> bool {
        self.nullity != Nullity::Exact
    }
}

/// Entry used for normalization: `preferred` unless it is negligible, else the largest.
pub fn choose_anchor(v: &[Complex64], preferred: usize) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if v[preferred].norm() > ANCHOR_REL_TOL * max {
        preferred
    } else {
        v.iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .unwrap_or(preferred)
    }
}

/// Null vector with the last entry as preferred anchor.
pub fn nullspace_vector(m: &DMatrix<Complex64>, rel_tol: f64) -> Result<NullSpace> {
    nullspace_vector_anchored(m, rel_tol, m.ncols().saturating_sub(1))
}

pub fn nullspace_vector_anchored(
    m: &DMatrix<Complex64>,
    rel_tol: f64,
    preferred_anchor: usize,
) -> Result<NullSpace> {
    let k = m.ncols();
    if k == 0 {
        return Err(Error::Shape("matrix has no columns".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Degenerate("matrix has non-finite entries".into()));
    }
    // A thin SVD of a wide matrix lacks the trailing right singular vectors.
    let padded = if m.nrows() < k {
        let mut p = DMatrix::zeros(k, k);
        p.rows_mut(0, m.nrows()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd_unordered(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smallest = *order.last().expect("at least one column");
    let raw: Vec<Complex64> = v_t.row(smallest).iter().map(|z| z.conj()).collect();

    let max = singular_values[0];
    let rank = if max == 0.0 {
        0
    } else {
        singular_values
            .iter()
            .filter(|&&s| s > rel_tol * max)
            .count()
    };
    let nullity = match k - rank {
        0 => Nullity::Trivial,
        1 => Nullity::Exact,
        _ => Nullity::Multiple,
    };
    let anchor = choose_anchor(&raw, preferred_anchor.min(k - 1));
    let pivot = raw[anchor];
    let vector = raw.iter().map(|z| z / pivot).collect();
    Ok(NullSpace {
        vector,
        anchor,
        singular_values,
        rank,
        nullity,
    })
}

/// Numerical rank with the relative threshold.
pub fn numerical_rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderDetection {
    pub degrees: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Estimates each variable's degree as the largest rank of its one-variable
/// Loewner matrices, with the other variables frozen at the first interpolation
/// points and at `budget` further random grid combinations.
pub fn detect_orders(
    source: &DataSource,
    budget: usize,
    rel_tol: f64,
    seed: u64,
) -> Result<OrderDetection> {
    let grids = source.grids();
    let n = grids.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees = Vec::with_capacity(n);
    let mut warnings = Vec::new();
    for (l, g) in grids.iter().enumerate() {
        let k = g.interpolation().len();
        let q = g.data().len();
        if q == 0 {
            return Err(Error::InsufficientPoints(format!(
                "variable {} has no data points",
                g.name()
            )));
        }
        let mut combos = vec![vec![0; n]];
        for _ in 0..budget {
            combos.push(grids.iter().map(|h| rng.random_range(0..h.len())).collect());
        }
        let mut best = 0;
        for frozen in &combos {
            let fiber = source.fiber(l, frozen)?;
            let mat = build_loewner_1d(g.interpolation(), &fiber[..k], g.data(), &fiber[k..])?;
            best = best.max(numerical_rank(&mat, rel_tol));
        }
        if best == k.min(q) {
            warnings.push(format!(
                "variable {}: rank {best} saturates the {q}x{k} Loewner matrix; the degree may be higher",
                g.name()
            ));
        }
        degrees.push(best);
    }
    Ok(OrderDetection { degrees, warnings })
}
