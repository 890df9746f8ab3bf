//! Per-variable point sets and the data sources sampled on them.
//!
//! Each variable owns interpolation (column) points and data (row) points.
//! Their concatenation, columns first, is the variable's union grid, and a
//! tableau holds one value per tuple of union indices with variable 1 slowest.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex_io::{from_pairs, to_pairs, Pair};
use crate::error::{Error, Result};
use crate::expr::{self, Expression};

#[derive(Debug, Clone, PartialEq)]
pub struct VariableGrid {
    name: String,
    interpolation: Vec<Complex64>,
    data: Vec<Complex64>,
}

impl VariableGrid {
    pub fn new(
        name: impl Into<String>,
        interpolation: Vec<Complex64>,
        data: Vec<Complex64>,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidGrid("variable name is empty".into()));
        }
        if interpolation.is_empty() {
            return Err(Error::InvalidGrid(format!(
                "variable {name} has no interpolation points"
            )));
        }
        for (label, list) in [("interpolation", &interpolation), ("data", &data)] {
            if list.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidGrid(format!(
                    "variable {name} has a non-finite {label} point"
                )));
            }
            for (i, a) in list.iter().enumerate() {
                if list[..i].contains(a) {
                    return Err(Error::InvalidGrid(format!(
                        "variable {name} repeats {label} point {a}"
                    )));
                }
            }
        }
        Ok(Self {
            name,
            interpolation,
            data,
        })
    }

    /// Real-valued convenience constructor.
    pub fn real(name: impl Into<String>, interpolation: &[f64], data: &[f64]) -> Result<Self> {
        let c = |xs: &[f64]| xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(name, c(interpolation), c(data))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn interpolation(&self) -> &[Complex64] {
        &self.interpolation
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Number of union points.
    pub fn len(&self) -> usize {
        self.interpolation.len() + self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, union_index: usize) -> Complex64 {
        let k = self.interpolation.len();
        if union_index < k {
            self.interpolation[union_index]
        } else {
            self.data[union_index - k]
        }
    }

    pub fn union(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.interpolation.iter().chain(self.data.iter()).copied()
    }

    /// Union index of an exactly matching point.
    pub fn index_of(&self, z: Complex64) -> Option<usize> {
        self.union().position(|p| p == z)
    }
}

/// A point that appears both as an interpolation and a data point.
#[derive(Debug, Clone, PartialEq)]
pub struct Coincidence {
    pub variable: usize,
    pub value: Complex64,
}

/// Lists every coincidence between interpolation and data points.
pub fn check_disjoint(grids: &[VariableGrid]) -> Vec<Coincidence> {
    let mut found = Vec::new();
    for (variable, g) in grids.iter().enumerate() {
        for &value in &g.interpolation {
            if g.data.contains(&value) {
                found.push(Coincidence { variable, value });
            }
        }
    }
    found
}

pub(crate) fn ensure_disjoint(grids: &[VariableGrid]) -> Result<()> {
    match check_disjoint(grids).first() {
        None => Ok(()),
        Some(c) => Err(Error::CoincidentPoints {
            variable: grids[c.variable].name.clone(),
            value: c.value,
        }),
    }
}

/// Row-major strides of a multi-index with the first axis slowest.
pub fn strides(extents: &[usize]) -> Vec<usize> {
    let mut s = vec![1; extents.len()];
    for l in (0..extents.len().saturating_sub(1)).rev() {
        s[l] = s[l + 1] * extents[l + 1];
    }
    s
}

/// Enumerates all multi-indices below `extents`, first axis slowest.
pub fn multi_indices(extents: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = extents.iter().product();
    let s = strides(extents);
    (0..total).map(move |flat| {
        extents
            .iter()
            .zip(&s)
            .map(|(&e, &st)| (flat / st) % e)
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tableau {
    grids: Vec<VariableGrid>,
    values: Vec<Complex64>,
}

impl Tableau {
    pub fn new(grids: Vec<VariableGrid>, values: Vec<Complex64>) -> Result<Self> {
        if grids.is_empty() {
            return Err(Error::InvalidGrid("no variables".into()));
        }
        check_names(&grids)?;
        let expected: usize = grids.iter().map(VariableGrid::len).product();
        if values.len() != expected {
            return Err(Error::Shape(format!(
                "tableau has {} values, grids require {expected}",
                values.len()
            )));
        }
        Ok(Self { grids, values })
    }

    pub fn grids(&self) -> &[VariableGrid] {
        &self.grids
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn extents(&self) -> Vec<usize> {
        self.grids.iter().map(VariableGrid::len).collect()
    }

    fn flat_index(&self, indices: &[usize]) -> usize {
        let s = strides(&self.extents());
        indices.iter().zip(&s).map(|(i, st)| i * st).sum()
    }
}

fn check_names(grids: &[VariableGrid]) -> Result<()> {
    for (i, g) in grids.iter().enumerate() {
        if grids[..i].iter().any(|h| h.name == g.name) {
            return Err(Error::InvalidGrid(format!(
                "duplicate variable name {}",
                g.name
            )));
        }
    }
    Ok(())
}

/// An analytic expression sampled on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Oracle {
    grids: Vec<VariableGrid>,
    expression: Expression,
}

impl Oracle {
    pub fn new(grids: Vec<VariableGrid>, expression: &str) -> Result<Self> {
        if grids.is_empty() {
            return Err(Error::InvalidGrid("no variables".into()));
        }
        check_names(&grids)?;
        let names: Vec<String> = grids.iter().map(|g| g.name.clone()).collect();
        let expression = expr::parse(expression, &names)?;
        Ok(Self { grids, expression })
    }

    pub fn expression(&self) -> &Expression {
        &self.expression
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        Ok(self.expression.evaluate(point)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Dense(Tableau),
    Oracle(Oracle),
}

impl DataSource {
    pub fn grids(&self) -> &[VariableGrid] {
        match self {
            DataSource::Dense(t) => &t.grids,
            DataSource::Oracle(o) => &o.grids,
        }
    }

    pub fn num_variables(&self) -> usize {
        self.grids().len()
    }

    pub fn names(&self) -> Vec<String> {
        self.grids().iter().map(|g| g.name.clone()).collect()
    }

    /// Value at a tuple of union indices.
    pub fn value_at_indices(&self, indices: &[usize]) -> Result<Complex64> {
        let grids = self.grids();
        if indices.len() != grids.len() {
            return Err(Error::Shape(format!(
                "expected {} indices, got {}",
                grids.len(),
                indices.len()
            )));
        }
        for (g, &i) in grids.iter().zip(indices) {
            if i >= g.len() {
                return Err(Error::Shape(format!(
                    "index {i} out of range for variable {}",
                    g.name
                )));
            }
        }
        match self {
            DataSource::Dense(t) => Ok(t.values[t.flat_index(indices)]),
            DataSource::Oracle(o) => {
                let point: Vec<_> = grids
                    .iter()
                    .zip(indices)
                    .map(|(g, &i)| g.point(i))
                    .collect();
                o.evaluate(&point)
            }
        }
    }

    /// Value at a point. Dense data must be hit exactly; an oracle takes any point.
    pub fn value_at(&self, point: &[Complex64]) -> Result<Complex64> {
        let grids = self.grids();
        if point.len() != grids.len() {
            return Err(Error::Shape(format!(
                "expected {} coordinates, got {}",
                grids.len(),
                point.len()
            )));
        }
        match self {
            DataSource::Oracle(o) => o.evaluate(point),
            DataSource::Dense(_) => {
                let indices = grids
                    .iter()
                    .zip(point)
                    .map(|(g, &z)| {
                        g.index_of(z).ok_or_else(|| Error::OffGrid {
                            variable: g.name.clone(),
                            value: z,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.value_at_indices(&indices)
            }
        }
    }

    /// Values along the whole union grid of `free`, the other variables held at
    /// the union indices in `frozen` (the entry for `free` is ignored).
    pub fn fiber(&self, free: usize, frozen: &[usize]) -> Result<Vec<Complex64>> {
        let len = self
            .grids()
            .get(free)
            .ok_or_else(|| Error::Shape(format!("no variable {free}")))?
            .len();
        let mut idx = frozen.to_vec();
        (0..len)
            .map(|i| {
                idx[free] = i;
                self.value_at_indices(&idx)
            })
            .collect()
    }

    /// Samples every union tuple into a dense tableau.
    pub fn materialize(&self) -> Result<Tableau> {
        match self {
            DataSource::Dense(t) => Ok(t.clone()),
            DataSource::Oracle(o) => {
                let extents: Vec<usize> = o.grids.iter().map(VariableGrid::len).collect();
                let values = multi_indices(&extents)
                    .map(|idx| self.value_at_indices(&idx))
                    .collect::<Result<Vec<_>>>()?;
                Tableau::new(o.grids.clone(), values)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SourceFile = serde_json::from_str(text)?;
        let grids = raw
            .variables
            .into_iter()
            .map(|v| VariableGrid::new(v.name, from_pairs(&v.lambda), from_pairs(&v.mu)))
            .collect::<Result<Vec<_>>>()?;
        match (raw.values, raw.expression) {
            (Some(values), None) => {
                Ok(DataSource::Dense(Tableau::new(grids, from_pairs(&values))?))
            }
            (None, Some(expression)) => Ok(DataSource::Oracle(Oracle::new(grids, &expression)?)),
            (Some(_), Some(_)) => Err(Error::Input(
                "data file has both \"values\" and \"expression\"".into(),
            )),
            (None, None) => Err(Error::Input(
                "data file needs \"values\" or \"expression\"".into(),
            )),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let variables = self
            .grids()
            .iter()
            .map(|g| GridFile {
                name: g.name.clone(),
                lambda: to_pairs(&g.interpolation),
                mu: to_pairs(&g.data),
            })
            .collect();
        let file = match self {
            DataSource::Dense(t) => SourceFile {
                variables,
                values: Some(to_pairs(&t.values)),
                expression: None,
            },
            DataSource::Oracle(o) => SourceFile {
                variables,
                values: None,
                expression: Some(o.expression.to_string()),
            },
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    name: String,
    lambda: Vec<Pair>,
    mu: Vec<Pair>,
}

#[derive(Serialize, Deserialize)]
struct SourceFile {
    variables: Vec<GridFile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    values: Option<Vec<Pair>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    expression: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn two_variable() -> DataSource {
        let s = VariableGrid::real("s", &[1.0, 3.0, 5.0], &[0.0, 2.0, 4.0]).unwrap();
        let t = VariableGrid::real("t", &[-1.0, -3.0], &[-2.0, -4.0]).unwrap();
        DataSource::Oracle(Oracle::new(vec![s, t], "s^2*t/(s-t+1)").unwrap())
    }

    #[test]
    fn strides_are_row_major() {
        assert_eq!(strides(&[6, 4]), vec![4, 1]);
        assert_eq!(strides(&[2, 3, 4]), vec![12, 4, 1]);
        let all: Vec<_> = multi_indices(&[2, 2]).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn tableau_entries_match_the_two_variable_table() {
        let src = two_variable();
        // Row s = 2 reads -1, -2, -8/5, -16/7.
        let row = src.fiber(1, &[4, 0]).unwrap();
        let expected = [-1.0, -2.0, -8.0 / 5.0, -16.0 / 7.0];
        for (a, b) in row.iter().zip(expected) {
            assert!((a - c(b)).norm() < 1e-14);
        }
        assert_eq!(src.value_at(&[c(5.0), c(-3.0)]).unwrap(), c(-25.0 / 3.0));
    }

    #[test]
    fn dense_and_oracle_agree() {
        let src = two_variable();
        let dense = DataSource::Dense(src.materialize().unwrap());
        for idx in multi_indices(&[6, 4]) {
            assert_eq!(
                dense.value_at_indices(&idx).unwrap(),
                src.value_at_indices(&idx).unwrap()
            );
        }
    }

    #[test]
    fn dense_rejects_off_grid_points() {
        let dense = DataSource::Dense(two_variable().materialize().unwrap());
        assert!(matches!(
            dense.value_at(&[c(1.5), c(-1.0)]),
            Err(Error::OffGrid { .. })
        ));
    }

    #[test]
    fn coincident_points_are_reported() {
        let g = VariableGrid::real("x", &[1.0, 2.0], &[2.0, 3.0]).unwrap();
        let found = check_disjoint(&[g]);
        assert_eq!(
            found,
            vec![Coincidence {
                variable: 0,
                value: c(2.0)
            }]
        );
    }

    #[test]
    fn repeated_points_are_rejected() {
        assert!(VariableGrid::real("x", &[1.0, 1.0], &[2.0]).is_err());
        assert!(VariableGrid::real("x", &[], &[2.0]).is_err());
    }

    #[test]
    fn value_count_is_checked() {
        let g = VariableGrid::real("x", &[1.0], &[2.0]).unwrap();
        assert!(matches!(
            Tableau::new(vec![g], vec![c(0.0)]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let src = two_variable();
        let back = DataSource::from_json(&src.to_json().unwrap()).unwrap();
        assert_eq!(back, src);
        let dense = DataSource::Dense(src.materialize().unwrap());
        let back = DataSource::from_json(&dense.to_json().unwrap()).unwrap();
        assert_eq!(back, dense);
    }
}
