//! Generalized realizations `H(x) = C Phi(x)^{-1} B` of barycentric models.
//!
//! The variables are split into a right group, whose Kronecker companion
//! `Gamma` multiplies the lag matrices from the right, and a left group with
//! companion `Delta`. The realization size is `2 ell + kappa - 1`, where
//! `kappa` and `ell` are the products of the column counts in each group.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex_io::{from_pairs, to_pairs, Pair};
use crate::error::{Error, Result};
use crate::grid::{multi_indices, strides};
use crate::loewner::numerical_rank;
use crate::model::BarycentricModel;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Above this many points the weights are accumulated in log form.
const LOG_WEIGHTS_THRESHOLD: usize = 300;

/// `q_i = 1 / prod_{k != i} (lambda_i - lambda_k)`.
pub fn lagrange_weights(points: &[Complex64]) -> Vec<Complex64> {
    let n = points.len();
    (0..n)
        .map(|i| {
            let others = (0..n).filter(|&k| k != i).map(|k| points[i] - points[k]);
            if n > LOG_WEIGHTS_THRESHOLD {
                let log: Complex64 = others.map(|d| d.ln()).sum();
                (-log).exp()
            } else {
                others.fold(one(), |acc, d| acc * d).inv()
            }
        })
        .collect()
}

/// Determinant-one companion of a variable's support points: the first rows
/// hold `x - lambda_1` against `-(x - lambda_{i+1})`, the last row the weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoCompanion {
    name: String,
    points: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl PseudoCompanion {
    pub fn new(name: impl Into<String>, points: Vec<Complex64>) -> Result<Self> {
        for (i, a) in points.iter().enumerate() {
            if points[..i].contains(a) {
                return Err(Error::InvalidGrid(format!("repeated support point {a}")));
            }
        }
        if points.is_empty() {
            return Err(Error::InvalidGrid("companion needs a point".into()));
        }
        let weights = lagrange_weights(&points);
        Ok(Self {
            name: name.into(),
            points,
            weights,
        })
    }

    /// Companion with explicitly given last-row weights.
    pub fn with_weights(
        name: impl Into<String>,
        points: Vec<Complex64>,
        weights: Vec<Complex64>,
    ) -> Result<Self> {
        if points.len() != weights.len() || points.is_empty() {
            return Err(Error::Shape("companion points and weights differ".into()));
        }
        Ok(Self {
            name: name.into(),
            points,
            weights,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn matrix(&self, x: Complex64) -> DMatrix<Complex64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m[(i, 0)] = x - self.points[0];
            m[(i, i + 1)] = -(x - self.points[i + 1]);
        }
        for (j, &q) in self.weights.iter().enumerate() {
            m[(n - 1, j)] = q;
        }
        m
    }

    /// Last row of `X(x)^{-T}`: `prod_{k != i} (x - lambda_k)`.
    pub fn inverse_transpose_last_row(&self, x: Complex64) -> Vec<Complex64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&k| k != i)
                    .fold(one(), |acc, k| acc * (x - self.points[k]))
            })
            .collect()
    }
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

fn kron_all(mats: impl IntoIterator<Item = DMatrix<Complex64>>) -> DMatrix<Complex64> {
    mats.into_iter()
        .fold(DMatrix::from_element(1, 1, one()), |acc, m| kron(&acc, &m))
}

fn kron_vectors(vs: impl IntoIterator<Item = Vec<Complex64>>) -> Vec<Complex64> {
    vs.into_iter().fold(vec![one()], |acc, v| {
        acc.iter()
            .flat_map(|a| v.iter().map(move |b| a * b))
            .collect()
    })
}

/// Partition of the variables into right and left groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSplit {
    pub right: Vec<usize>,
    pub left: Vec<usize>,
}

impl VariableSplit {
    /// First variable on the right, the rest on the left.
    pub fn first_variable(n: usize) -> Self {
        Self {
            right: vec![0],
            left: (1..n).collect(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &v in self.right.iter().chain(&self.left) {
            if v >= n || seen[v] {
                return Err(Error::Input(format!("split {self:?} is not a partition")));
            }
            seen[v] = true;
        }
        if seen.contains(&false) || self.right.is_empty() || (n > 1 && self.left.is_empty()) {
            return Err(Error::Input(format!(
                "split {self:?} must cover all variables with both groups nonempty"
            )));
        }
        Ok(())
    }

    /// `(kappa, ell)` for column counts in natural order.
    pub fn group_sizes(&self, orders: &[usize]) -> (usize, usize) {
        let kappa = self.right.iter().map(|&v| orders[v]).product();
        let ell = self.left.iter().map(|&v| orders[v]).product();
        (kappa, ell)
    }

    pub fn realization_size(&self, orders: &[usize]) -> usize {
        let (kappa, ell) = self.group_sizes(orders);
        if self.left.is_empty() {
            kappa
        } else {
            2 * ell + kappa - 1
        }
    }
}

/// Split of smallest realization size for the given degrees.
///
/// Ties go to the smaller compressed size `kappa + ell - 1`, then to fewer
/// left variables, then to the lexicographically first right group. Beyond
/// sixteen variables a greedy balance is used instead of enumeration.
pub fn optimal_split(degrees: &[usize]) -> Result<VariableSplit> {
    let n = degrees.len();
    if n == 0 {
        return Err(Error::Input("no variables".into()));
    }
    if n == 1 {
        return Ok(VariableSplit::first_variable(1));
    }
    let orders: Vec<usize> = degrees.iter().map(|d| d + 1).collect();
    if n > 16 {
        return Ok(greedy_split(&orders));
    }
    let mut best: Option<((u128, u128, usize), VariableSplit)> = None;
    for mask in 1u32..(1 << n) - 1 {
        let (left, right): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| mask >> v & 1 == 1);
        let kappa: u128 = right.iter().map(|&v| orders[v] as u128).product();
        let ell: u128 = left.iter().map(|&v| orders[v] as u128).product();
        let key = (2 * ell + kappa - 1, kappa + ell - 1, left.len());
        let split = VariableSplit { right, left };
        let better = match &best {
            None => true,
            Some((k, s)) => key < *k || (key == *k && split.right < s.right),
        };
        if better {
            best = Some((key, split));
        }
    }
    Ok(best.expect("at least one bipartition").1)
}

fn greedy_split(orders: &[usize]) -> VariableSplit {
    let mut by_size: Vec<usize> = (0..orders.len()).collect();
    by_size.sort_by(|&a, &b| orders[b].cmp(&orders[a]));
    let (mut right, mut left) = (Vec::new(), Vec::new());
    let (mut kappa, mut ell) = (1.0f64, 1.0f64);
    for v in by_size {
        let k = orders[v] as f64;
        // Grow whichever side keeps 2 ell + kappa smaller.
        if kappa * k + 2.0 * ell <= kappa + 2.0 * ell * k {
            right.push(v);
            kappa *= k;
        } else {
            left.push(v);
            ell *= k;
        }
    }
    if left.is_empty() {
        left.push(right.pop().expect("two or more variables"));
    }
    right.sort_unstable();
    left.sort_unstable();
    VariableSplit { right, left }
}

/// Lag matrices of a model for a split, both `ell x kappa`: entry `(q, r)`
/// holds the coefficient at left multi-index `q` and right multi-index `r`.
/// With a single variable the first is `-c^T` and the second `(c .* w)^T`.
pub fn arrange_coefficients(
    model: &BarycentricModel,
    split: &VariableSplit,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let orders = model.orders();
    split.validate(orders.len())?;
    let (kappa, ell) = split.group_sizes(&orders);
    let st = strides(&orders);
    let right_ext: Vec<usize> = split.right.iter().map(|&v| orders[v]).collect();
    let left_ext: Vec<usize> = split.left.iter().map(|&v| orders[v]).collect();
    let right_multi: Vec<Vec<usize>> = multi_indices(&right_ext).collect();
    let left_multi: Vec<Vec<usize>> = multi_indices(&left_ext).collect();
    let flat = |q: usize, r: usize| -> usize {
        let mut idx = 0;
        for (t, &v) in split.left.iter().enumerate() {
            idx += left_multi[q][t] * st[v];
        }
        for (t, &v) in split.right.iter().enumerate() {
            idx += right_multi[r][t] * st[v];
        }
        idx
    };
    let c = model.weights();
    let beta = model.numerator_weights();
    if split.left.is_empty() {
        let a = DMatrix::from_fn(1, kappa, |_, r| -c[flat(0, r)]);
        let b = DMatrix::from_fn(1, kappa, |_, r| beta[flat(0, r)]);
        return Ok((a, b));
    }
    let a = DMatrix::from_fn(ell, kappa, |q, r| c[flat(q, r)]);
    let b = DMatrix::from_fn(ell, kappa, |q, r| beta[flat(q, r)]);
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedRealization {
    names: Vec<String>,
    split: VariableSplit,
    right: Vec<PseudoCompanion>,
    left: Vec<PseudoCompanion>,
    a_lag: DMatrix<Complex64>,
    b_lag: DMatrix<Complex64>,
}

/// Rank test of `[Phi B]` and `[C; Phi]` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Minimality {
    pub size: usize,
    pub controllable_rank: usize,
    pub observable_rank: usize,
}

impl Minimality {
    pub fn is_minimal(&self) -> bool {
        self.controllable_rank == self.size && self.observable_rank == self.size
    }
}

pub fn build_realization(
    model: &BarycentricModel,
    split: &VariableSplit,
) -> Result<GeneralizedRealization> {
    let (a_lag, b_lag) = arrange_coefficients(model, split)?;
    let companion =
        |&v: &usize| PseudoCompanion::new(model.names()[v].clone(), model.support()[v].clone());
    Ok(GeneralizedRealization {
        names: model.names().to_vec(),
        split: split.clone(),
        right: split.right.iter().map(companion).collect::<Result<_>>()?,
        left: split.left.iter().map(companion).collect::<Result<_>>()?,
        a_lag,
        b_lag,
    })
}

impl GeneralizedRealization {
    pub fn split(&self) -> &VariableSplit {
        &self.split
    }

    pub fn kappa(&self) -> usize {
        self.right.iter().map(PseudoCompanion::size).product()
    }

    pub fn ell(&self) -> usize {
        self.left.iter().map(PseudoCompanion::size).product()
    }

    pub fn size(&self) -> usize {
        if self.left.is_empty() {
            self.kappa()
        } else {
            2 * self.ell() + self.kappa() - 1
        }
    }

    pub fn a_lag(&self) -> &DMatrix<Complex64> {
        &self.a_lag
    }

    pub fn b_lag(&self) -> &DMatrix<Complex64> {
        &self.b_lag
    }

    pub fn right_companions(&self) -> &[PseudoCompanion] {
        &self.right
    }

    pub fn left_companions(&self) -> &[PseudoCompanion] {
        &self.left
    }

    /// Replaces the companion of variable `name` (used to probe degenerate cases).
    pub fn replace_companion(&mut self, companion: PseudoCompanion) -> Result<()> {
        let slot = self
            .right
            .iter_mut()
            .chain(self.left.iter_mut())
            .find(|c| c.name == companion.name)
            .ok_or_else(|| Error::Input(format!("no companion named {}", companion.name)))?;
        if slot.size() != companion.size() {
            return Err(Error::Shape("companion size differs".into()));
        }
        *slot = companion;
        Ok(())
    }

    fn check_point(&self, point: &[Complex64]) -> Result<()> {
        if point.len() != self.names.len() {
            return Err(Error::Shape(format!(
                "realization has {} variables, point has {}",
                self.names.len(),
                point.len()
            )));
        }
        Ok(())
    }

    pub fn gamma(&self, point: &[Complex64]) -> DMatrix<Complex64> {
        kron_all(
            self.split
                .right
                .iter()
                .zip(&self.right)
                .map(|(&v, c)| c.matrix(point[v])),
        )
    }

    pub fn delta(&self, point: &[Complex64]) -> DMatrix<Complex64> {
        kron_all(
            self.split
                .left
                .iter()
                .zip(&self.left)
                .map(|(&v, c)| c.matrix(point[v])),
        )
    }

    /// Constant last row of `Delta`, the Kronecker product of the left weights.
    fn delta_last_row(&self) -> Vec<Complex64> {
        kron_vectors(self.left.iter().map(|c| c.weights.clone()))
    }

    pub fn phi(&self, point: &[Complex64]) -> Result<DMatrix<Complex64>> {
        self.check_point(point)?;
        let kappa = self.kappa();
        let gamma = self.gamma(point);
        let m = self.size();
        let mut phi = DMatrix::zeros(m, m);
        phi.view_mut((0, 0), (kappa - 1, kappa))
            .copy_from(&gamma.rows(0, kappa - 1));
        if self.left.is_empty() {
            phi.view_mut((kappa - 1, 0), (1, kappa))
                .copy_from(&self.a_lag);
            return Ok(phi);
        }
        let ell = self.ell();
        let delta_t = self.delta(point).transpose();
        phi.view_mut((kappa - 1, 0), (ell, kappa))
            .copy_from(&self.a_lag);
        phi.view_mut((kappa - 1, kappa), (ell, ell - 1))
            .copy_from(&delta_t.columns(0, ell - 1));
        phi.view_mut((kappa + ell - 1, 0), (ell, kappa))
            .copy_from(&self.b_lag);
        phi.view_mut((kappa + ell - 1, kappa + ell - 1), (ell, ell))
            .copy_from(&delta_t);
        Ok(phi)
    }

    pub fn b(&self) -> DVector<Complex64> {
        let m = self.size();
        let kappa = self.kappa();
        let mut b = DVector::zeros(m);
        if self.left.is_empty() {
            b[m - 1] = -one();
        } else {
            for (i, q) in self.delta_last_row().into_iter().enumerate() {
                b[kappa - 1 + i] = q;
            }
        }
        b
    }

    pub fn c(&self) -> DVector<Complex64> {
        let m = self.size();
        if self.left.is_empty() {
            return DVector::from_iterator(m, self.b_lag.iter().copied());
        }
        let mut c = DVector::zeros(m);
        c[m - 1] = -one();
        c
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        let phi = self.phi(point)?;
        solve_transfer(phi, &self.b(), &self.c(), point)
    }

    pub fn minimality(&self, point: &[Complex64], rel_tol: f64) -> Result<Minimality> {
        let phi = self.phi(point)?;
        let m = self.size();
        let mut wide = DMatrix::zeros(m, m + 1);
        wide.view_mut((0, 0), (m, m)).copy_from(&phi);
        wide.set_column(m, &self.b());
        let mut tall = DMatrix::zeros(m + 1, m);
        tall.set_row(0, &self.c().transpose());
        tall.view_mut((1, 0), (m, m)).copy_from(&phi);
        Ok(Minimality {
            size: m,
            controllable_rank: numerical_rank(&wide, rel_tol),
            observable_rank: numerical_rank(&tall, rel_tol),
        })
    }

    /// Eliminates the trailing `Delta^T` block.
    pub fn compress(&self) -> CompressedRealization {
        CompressedRealization { full: self.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        let rows = |m: &DMatrix<Complex64>| -> Vec<Vec<Pair>> {
            m.row_iter()
                .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                .collect()
        };
        let companions = self
            .right
            .iter()
            .chain(&self.left)
            .map(|c| CompanionFile {
                name: c.name.clone(),
                points: to_pairs(&c.points),
                q: to_pairs(&c.weights),
            })
            .collect();
        let name = |v: &usize| self.names[*v].clone();
        let file = RealizationFile {
            variables: self.names.clone(),
            split: SplitFile {
                right: self.split.right.iter().map(name).collect(),
                left: self.split.left.iter().map(name).collect(),
            },
            size: self.size(),
            kappa: self.kappa(),
            ell: self.ell(),
            a_lag: rows(&self.a_lag),
            b_lag: rows(&self.b_lag),
            companions,
            c: to_pairs(self.c().as_slice()),
            b: to_pairs(self.b().as_slice()),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RealizationFile = serde_json::from_str(text)?;
        let index = |name: &String| {
            file.variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Input(format!("unknown variable {name} in split")))
        };
        let split = VariableSplit {
            right: file.split.right.iter().map(index).collect::<Result<_>>()?,
            left: file.split.left.iter().map(index).collect::<Result<_>>()?,
        };
        split.validate(file.variables.len())?;
        let companion = |&v: &usize| -> Result<PseudoCompanion> {
            let name = &file.variables[v];
            let c = file
                .companions
                .iter()
                .find(|c| &c.name == name)
                .ok_or_else(|| Error::Input(format!("missing companion for {name}")))?;
            PseudoCompanion::with_weights(name.clone(), from_pairs(&c.points), from_pairs(&c.q))
        };
        let right: Vec<_> = split.right.iter().map(companion).collect::<Result<_>>()?;
        let left: Vec<_> = split.left.iter().map(companion).collect::<Result<_>>()?;
        let matrix = |rows: &[Vec<Pair>]| -> Result<DMatrix<Complex64>> {
            let ncols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != ncols) {
                return Err(Error::Shape("ragged lag matrix".into()));
            }
            Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| {
                Complex64::new(rows[i][j][0], rows[i][j][1])
            }))
        };
        let real = Self {
            names: file.variables.clone(),
            split,
            right,
            left,
            a_lag: matrix(&file.a_lag)?,
            b_lag: matrix(&file.b_lag)?,
        };
        let (kappa, ell) = (real.kappa(), real.ell());
        let expected_rows = if real.left.is_empty() { 1 } else { ell };
        for m in [&real.a_lag, &real.b_lag] {
            if m.nrows() != expected_rows || m.ncols() != kappa {
                return Err(Error::Shape(format!(
                    "lag matrix is {}x{}, expected {expected_rows}x{kappa}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(real)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn solve_transfer(
    phi: DMatrix<Complex64>,
    b: &DVector<Complex64>,
    c: &DVector<Complex64>,
    point: &[Complex64],
) -> Result<Complex64> {
    let x = phi
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Pole(format!("realization is singular at {point:?}")))?;
    let value = c.dot(&x);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Pole(format!("realization is singular at {point:?}")));
    }
    Ok(value)
}

/// Realization of size `kappa + ell - 1` with a point-dependent output row.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedRealization {
    full: GeneralizedRealization,
}

impl CompressedRealization {
    pub fn size(&self) -> usize {
        if self.full.left.is_empty() {
            self.full.size()
        } else {
            self.full.kappa() + self.full.ell() - 1
        }
    }

    pub fn phi(&self, point: &[Complex64]) -> Result<DMatrix<Complex64>> {
        let phi = self.full.phi(point)?;
        let s = self.size();
        Ok(phi.view((0, 0), (s, s)).into_owned())
    }

    pub fn b(&self) -> DVector<Complex64> {
        self.full.b().rows(0, self.size()).into_owned()
    }

    /// `e_ell^T Delta^{-T} [B_lag 0]`.
    pub fn c(&self, point: &[Complex64]) -> Result<DVector<Complex64>> {
        self.full.check_point(point)?;
        if self.full.left.is_empty() {
            return Ok(self.full.c());
        }
        let last = kron_vectors(
            self.full
                .split
                .left
                .iter()
                .zip(&self.full.left)
                .map(|(&v, c)| c.inverse_transpose_last_row(point[v])),
        );
        let kappa = self.full.kappa();
        let mut c = DVector::zeros(self.size());
        for r in 0..kappa {
            c[r] = last
                .iter()
                .enumerate()
                .map(|(q, w)| w * self.full.b_lag[(q, r)])
                .sum();
        }
        Ok(c)
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        let phi = self.phi(point)?;
        solve_transfer(phi, &self.b(), &self.c(point)?, point)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeterminantForm {
    /// `[(Gamma (x) Delta)(1:end-1, :); vec(A)^T]`.
    Kronecker,
    /// `[Gamma(1:kappa-1, :) 0; A Delta(1:ell-1, :)^T]`, sign-normalized.
    Bordered,
}

/// Determinant of a companion-bordered form of the coefficient matrix `a_lag`
/// (`ell x kappa`), which evaluates the polynomial with those Lagrange
/// coefficients at `point` (natural variable order).
pub fn polynomial_determinant(
    a_lag: &DMatrix<Complex64>,
    split: &VariableSplit,
    right: &[PseudoCompanion],
    left: &[PseudoCompanion],
    point: &[Complex64],
    form: DeterminantForm,
) -> Result<Complex64> {
    let eval = |comps: &[PseudoCompanion], vars: &[usize]| {
        kron_all(comps.iter().zip(vars).map(|(c, &v)| c.matrix(point[v])))
    };
    let gamma = eval(right, &split.right);
    let delta = eval(left, &split.left);
    let (kappa, ell) = (gamma.nrows(), delta.nrows());
    if a_lag.nrows() != ell || a_lag.ncols() != kappa {
        return Err(Error::Shape(format!(
            "coefficients are {}x{}, companions need {ell}x{kappa}",
            a_lag.nrows(),
            a_lag.ncols()
        )));
    }
    let m = match form {
        DeterminantForm::Kronecker => {
            let mut m = kron(&gamma, &delta);
            let n = kappa * ell;
            for r in 0..kappa {
                for q in 0..ell {
                    m[(n - 1, r * ell + q)] = a_lag[(q, r)];
                }
            }
            m
        }
        DeterminantForm::Bordered => {
            let s = kappa + ell - 1;
            let mut m = DMatrix::zeros(s, s);
            m.view_mut((0, 0), (kappa - 1, kappa))
                .copy_from(&gamma.rows(0, kappa - 1));
            m.view_mut((kappa - 1, 0), (ell, kappa)).copy_from(a_lag);
            m.view_mut((kappa - 1, kappa), (ell, ell - 1))
                .copy_from(&delta.rows(0, ell - 1).transpose());
            // The literal block layout carries a factor (-1)^(ell-1).
            if ell % 2 == 0 {
                m.row_mut(s - 1).neg_mut();
            }
            m
        }
    };
    Ok(m.determinant())
}

#[derive(Serialize, Deserialize)]
struct CompanionFile {
    name: String,
    points: Vec<Pair>,
    q: Vec<Pair>,
}

#[derive(Serialize, Deserialize)]
struct SplitFile {
    right: Vec<String>,
    left: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RealizationFile {
    variables: Vec<String>,
    split: SplitFile,
    size: usize,
    kappa: usize,
    ell: usize,
    #[serde(rename = "A_lag")]
    a_lag: Vec<Vec<Pair>>,
    #[serde(rename = "B_lag")]
    b_lag: Vec<Vec<Pair>>,
    companions: Vec<CompanionFile>,
    #[serde(rename = "C")]
    c: Vec<Pair>,
    #[serde(rename = "B")]
    b: Vec<Pair>,
}
