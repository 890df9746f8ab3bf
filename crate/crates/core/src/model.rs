//! Multivariate barycentric rational models.
//!
//! `H(x) = sum_J beta_J / prod_l (x_l - lambda_{j_l})  /  sum_J c_J / prod_l (x_l - lambda_{j_l})`
//! with `beta = c .* w`, where `w` holds the data at the support tuples.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex_io::{from_pairs, to_pairs, Pair};
use crate::error::{Error, Result};
use crate::grid::{multi_indices, DataSource};

/// Denominator magnitudes below this are reported as poles.
/// Denominator magnitude, relative to the sum of its term magnitudes, below
/// which a point counts as a pole.
pub const POLE_TOL: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricModel {
    names: Vec<String>,
    support: Vec<Vec<Complex64>>,
    weights: Vec<Complex64>,
    values: Vec<Complex64>,
    numerator: Vec<Complex64>,
}

impl BarycentricModel {
    /// `weights` is the null vector `c`, `values` the data `w` at the support
    /// tuples; both are ordered with the first variable slowest.
    pub fn new(
        names: Vec<String>,
        support: Vec<Vec<Complex64>>,
        weights: Vec<Complex64>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if names.len() != support.len() || support.is_empty() {
            return Err(Error::Shape(format!(
                "{} names for {} support lists",
                names.len(),
                support.len()
            )));
        }
        if support.iter().any(Vec::is_empty) {
            return Err(Error::Shape("empty support list".into()));
        }
        let k: usize = support.iter().map(Vec::len).product();
        if weights.len() != k || values.len() != k {
            return Err(Error::Shape(format!(
                "support needs {k} weights and values, got {} and {}",
                weights.len(),
                values.len()
            )));
        }
        let numerator = weights.iter().zip(&values).map(|(c, w)| c * w).collect();
        Ok(Self {
            names,
            support,
            weights,
            values,
            numerator,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn support(&self) -> &[Vec<Complex64>] {
        &self.support
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Products `c .* w` used in the numerator.
    pub fn numerator_weights(&self) -> &[Complex64] {
        &self.numerator
    }

    pub fn orders(&self) -> Vec<usize> {
        self.support.iter().map(Vec::len).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.support.iter().map(|s| s.len() - 1).collect()
    }

    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.support.len() {
            return Err(Error::Shape(format!(
                "model has {} variables, point has {}",
                self.support.len(),
                point.len()
            )));
        }
        // On a support coordinate the sum over that variable collapses to one term.
        let kernels: Vec<Vec<Complex64>> = self
            .support
            .iter()
            .zip(point)
            .map(|(lams, &x)| match lams.iter().position(|&l| l == x) {
                Some(j) => (0..lams.len())
                    .map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                    .collect(),
                None => lams.iter().map(|&l| (x - l).inv()).collect(),
            })
            .collect();
        let mut num = self.numerator.clone();
        let mut den = self.weights.clone();
        let mut scale: Vec<Complex64> = self
            .weights
            .iter()
            .map(|c| Complex64::new(c.norm(), 0.0))
            .collect();
        for kernel in kernels.iter().rev() {
            num = contract_last(&num, kernel);
            den = contract_last(&den, kernel);
            let magnitudes: Vec<Complex64> = kernel
                .iter()
                .map(|z| Complex64::new(z.norm(), 0.0))
                .collect();
            scale = contract_last(&scale, &magnitudes);
        }
        let (num, den) = (num[0], den[0]);
        if den.norm() <= POLE_TOL * scale[0].re || !den.re.is_finite() || !den.im.is_finite() {
            return Err(Error::Pole(format!(
                "model denominator vanishes at {point:?}"
            )));
        }
        Ok(num / den)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            variables: self.names.clone(),
            support: self.support.iter().map(|s| to_pairs(s)).collect(),
            c: to_pairs(&self.weights),
            w: to_pairs(&self.values),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        Self::new(
            file.variables,
            file.support.iter().map(|s| from_pairs(s)).collect(),
            from_pairs(&file.c),
            from_pairs(&file.w),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Sums the last axis of a row-major tensor against `kernel`.
fn contract_last(data: &[Complex64], kernel: &[Complex64]) -> Vec<Complex64> {
    data.chunks(kernel.len())
        .map(|chunk| chunk.iter().zip(kernel).map(|(a, b)| a * b).sum())
        .collect()
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    variables: Vec<String>,
    support: Vec<Vec<Pair>>,
    c: Vec<Pair>,
    w: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub max_error: f64,
    /// Union indices of the worst tuple; the first one in row-major order on ties.
    pub argmax: Vec<usize>,
    pub point: Vec<Complex64>,
}

/// Largest `|H(x) - model(x)|` over every tuple of the source's union grid.
/// A model pole counts as an infinite error.
pub fn max_error(model: &BarycentricModel, source: &DataSource) -> Result<ErrorReport> {
    let grids = source.grids();
    if grids.len() != model.support.len() {
        return Err(Error::Shape(format!(
            "model has {} variables, data has {}",
            model.support.len(),
            grids.len()
        )));
    }
    let extents: Vec<usize> = grids.iter().map(|g| g.len()).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for idx in multi_indices(&extents) {
        let point: Vec<Complex64> = grids.iter().zip(&idx).map(|(g, &i)| g.point(i)).collect();
        let truth = source.value_at_indices(&idx)?;
        let err = match model.eval(&point) {
            Ok(v) => (v - truth).norm(),
            Err(Error::Pole(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        let err = if err.is_nan() { f64::INFINITY } else { err };
        if best.as_ref().is_none_or(|(b, _)| err > *b) {
            best = Some((err, idx));
        }
    }
    let (max_error, argmax) = best.expect("grid is nonempty");
    let point = grids
        .iter()
        .zip(&argmax)
        .map(|(g, &i)| g.point(i))
        .collect();
    Ok(ErrorReport {
        max_error,
        argmax,
        point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn one_variable() -> BarycentricModel {
        BarycentricModel::new(
            vec!["s".into()],
            vec![vec![c(1.0), c(3.0), c(5.0)]],
            vec![c(1.0 / 3.0), c(-4.0 / 3.0), c(1.0)],
            vec![c(2.5), c(13.0 / 4.0), c(29.0 / 6.0)],
        )
        .unwrap()
    }

    #[test]
    fn reproduces_the_rational_function() {
        let m = one_variable();
        for x in [0.0, 2.0, 7.5, -3.0] {
            let want = (x * x + 4.0) / (x + 1.0);
            assert!((m.eval(&[c(x)]).unwrap() - c(want)).norm() < 1e-12);
        }
    }

    #[test]
    fn support_points_return_data() {
        let m = one_variable();
        assert!((m.eval(&[c(3.0)]).unwrap() - c(13.0 / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let m = one_variable();
        assert!(matches!(m.eval(&[c(-1.0)]), Err(Error::Pole(_))));
    }

    #[test]
    fn zero_weight_support_is_a_pole() {
        let m = BarycentricModel::new(
            vec!["s".into()],
            vec![vec![c(1.0), c(2.0)]],
            vec![c(0.0), c(1.0)],
            vec![c(1.0), c(1.0)],
        )
        .unwrap();
        assert!(matches!(m.eval(&[c(1.0)]), Err(Error::Pole(_))));
    }

    #[test]
    fn shapes_are_checked() {
        let err = BarycentricModel::new(vec!["s".into()], vec![vec![c(1.0)]], vec![], vec![]);
        assert!(matches!(err, Err(Error::Shape(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = one_variable();
        assert_eq!(
            BarycentricModel::from_json(&m.to_json().unwrap()).unwrap(),
            m
        );
    }
}
