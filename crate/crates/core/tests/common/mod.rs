#![allow(dead_code)]

use std::path::PathBuf;

use ndloewner::grid::{multi_indices, Tableau};
use ndloewner::{Complex64, DataSource, VariableGrid};
use rand::Rng;

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn frac(num: f64, den: f64) -> Complex64 {
    Complex64::new(num / den, 0.0)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn load(name: &str) -> DataSource {
    DataSource::load(data_path(name)).expect("bundled data loads")
}

/// Largest entrywise distance.
pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn scaled_to_last(v: &[Complex64]) -> Vec<Complex64> {
    let last = *v.last().expect("nonempty");
    v.iter().map(|z| z / last).collect()
}

/// `N(x) / D(x)` with dense tensor-product coefficients of the given
/// per-variable degrees; `D` has positive coefficients so it stays away from
/// zero on positive grids.
#[derive(Debug, Clone)]
pub struct RandomRational {
    pub degrees: Vec<usize>,
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
}

impl RandomRational {
    pub fn new(rng: &mut impl Rng, degrees: &[usize]) -> Self {
        let terms: usize = degrees.iter().map(|d| d + 1).product();
        Self {
            degrees: degrees.to_vec(),
            numerator: (0..terms).map(|_| rng.random_range(-1.0..1.0)).collect(),
            denominator: (0..terms).map(|_| rng.random_range(0.5..1.5)).collect(),
        }
    }

    fn poly(&self, coef: &[f64], x: &[Complex64]) -> Complex64 {
        let ext: Vec<usize> = self.degrees.iter().map(|d| d + 1).collect();
        multi_indices(&ext)
            .zip(coef)
            .map(|(powers, &a)| {
                powers
                    .iter()
                    .zip(x)
                    .fold(re(a), |acc, (&p, &xi)| acc * xi.powu(p as u32))
            })
            .sum()
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.poly(&self.numerator, x) / self.poly(&self.denominator, x)
    }
}

/// Interleaved positive grid: `k` interpolation and `q` data points in `[0.5, 2.5]`.
pub fn random_grid(rng: &mut impl Rng, name: &str, k: usize, q: usize) -> VariableGrid {
    let total = k + q;
    let step = 2.0 / total as f64;
    let mut pts: Vec<f64> = (0..total)
        .map(|i| 0.5 + step * (i as f64 + rng.random_range(0.2..0.8)))
        .collect();
    // Alternate between the two sets so both cover the interval.
    let mut interp = Vec::new();
    let mut data = Vec::new();
    for (i, p) in pts.drain(..).enumerate() {
        if (i % 2 == 0 && interp.len() < k) || data.len() >= q {
            interp.push(p);
        } else {
            data.push(p);
        }
    }
    VariableGrid::real(name, &interp, &data).expect("grid is disjoint")
}

pub fn dense_source(grids: Vec<VariableGrid>, f: impl Fn(&[Complex64]) -> Complex64) -> DataSource {
    let extents: Vec<usize> = grids.iter().map(VariableGrid::len).collect();
    let values = multi_indices(&extents)
        .map(|idx| {
            let x: Vec<Complex64> = grids.iter().zip(&idx).map(|(g, &i)| g.point(i)).collect();
            f(&x)
        })
        .collect();
    DataSource::Dense(Tableau::new(grids, values).expect("consistent tableau"))
}

/// Dense samples of a random rational function with `degrees[l] + 1` columns
/// and as many rows per variable.
pub fn random_source(rng: &mut impl Rng, degrees: &[usize]) -> (DataSource, RandomRational) {
    let f = RandomRational::new(rng, degrees);
    let grids = degrees
        .iter()
        .enumerate()
        .map(|(l, &d)| random_grid(rng, &format!("x{}", l + 1), d + 1, d + 1))
        .collect();
    let g = f.clone();
    (dense_source(grids, move |x| g.eval(x)), f)
}
