//! Cascaded null-space computation.
//!
//! The n-variable null vector is assembled from one-variable problems. The
//! first variable in the recursion order is solved with the later variables
//! frozen at their anchor columns; each of its columns then spawns the same
//! recursion on the remaining variables, scaled by the parent coefficient.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{multi_indices, DataSource};
use crate::loewner::{
    build_loewner_1d, choose_anchor, nullspace_vector_anchored, AxisSelection, Nullity,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeOptions {
    /// Recursion order as a permutation of variable indices.
    pub order: Vec<usize>,
    /// Preferred anchor column per variable; the last column when absent.
    pub anchors: Option<Vec<usize>>,
    pub rel_tol: f64,
}

/// Per-level factor vectors whose Hadamard product is the null vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoupledWeights {
    pub order: Vec<usize>,
    /// Column count per variable in natural order.
    pub orders: Vec<usize>,
    /// `levels[j][b]` is the factor of variable `order[j]` for block `b`, the
    /// mixed-radix index of the column positions of the earlier levels.
    pub levels: Vec<Vec<Vec<Complex64>>>,
}

impl DecoupledWeights {
    fn level_orders(&self) -> Vec<usize> {
        self.order.iter().map(|&v| self.orders[v]).collect()
    }

    /// Level-`j` factor spread over the full index set, natural variable order.
    pub fn expanded(&self, level: usize) -> Vec<Complex64> {
        let ks = self.level_orders();
        multi_indices(&self.orders)
            .map(|natural| {
                let positions: Vec<usize> = self.order.iter().map(|&v| natural[v]).collect();
                let block = block_index(&ks, &positions[..level]);
                self.levels[level][block][positions[level]]
            })
            .collect()
    }

    /// Hadamard product of all expanded levels, deepest level first.
    pub fn recombine(&self) -> Vec<Complex64> {
        let n = self.order.len();
        let mut acc = self.expanded(n - 1);
        for level in (0..n - 1).rev() {
            for (a, f) in acc.iter_mut().zip(self.expanded(level)) {
                *a *= f;
            }
        }
        acc
    }
}

fn block_index(ks: &[usize], prefix: &[usize]) -> usize {
    prefix.iter().zip(ks).fold(0, |acc, (&p, &k)| acc * k + p)
}

#[derive(Debug, Clone)]
pub struct CascadeResult {
    /// Null vector in natural variable order, first variable slowest.
    pub vector: Vec<Complex64>,
    pub weights: DecoupledWeights,
    /// Cost of the one-variable problems on the default anchor path.
    pub flops: u128,
    /// Cost of the extra problems solved to bridge re-anchored blocks.
    pub reanchor_flops: u128,
    /// One-variable problems without an exact null direction.
    pub least_squares_blocks: usize,
}

struct Cascade<'a> {
    source: &'a DataSource,
    selection: &'a [AxisSelection],
    order: &'a [usize],
    ks: Vec<usize>,
    default_path: Vec<usize>,
    rel_tol: f64,
    levels: Vec<Vec<Vec<Complex64>>>,
    flops: u128,
    reanchor_flops: u128,
    least_squares_blocks: usize,
}

impl Cascade<'_> {
    /// Null vector of the one-variable problem at `level`, earlier levels held
    /// at `prefix` and later ones at `tail` (column positions).
    fn solve(&mut self, level: usize, prefix: &[usize], tail: &[usize]) -> Result<Vec<Complex64>> {
        let var = self.order[level];
        let axis = &self.selection[var];
        let grid = &self.source.grids()[var];
        let mut frozen = vec![0; self.order.len()];
        for (j, &p) in prefix.iter().enumerate() {
            let v = self.order[j];
            frozen[v] = self.selection[v].columns[p];
        }
        for (j, &p) in tail.iter().enumerate() {
            let v = self.order[level + 1 + j];
            frozen[v] = self.selection[v].columns[p];
        }
        let k = axis.columns.len();
        let mut sample = |indices: &[usize]| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
            let mut pts = Vec::with_capacity(indices.len());
            let mut vals = Vec::with_capacity(indices.len());
            for &i in indices {
                frozen[var] = i;
                pts.push(grid.point(i));
                vals.push(self.source.value_at_indices(&frozen)?);
            }
            Ok((pts, vals))
        };
        let (cp, cv) = sample(&axis.columns)?;
        let anchor = self.default_path[level];
        // All rows when they still leave a one-dimensional null space, which
        // is the better conditioned problem; otherwise k - 1 rows, which
        // always determine an interpolant.
        let mut tall = None;
        if axis.rows.len() >= k {
            let (rp, rv) = sample(&axis.rows)?;
            let ns = nullspace_vector_anchored(
                &build_loewner_1d(&cp, &cv, &rp, &rv)?,
                self.rel_tol,
                anchor,
            )?;
            tall = (ns.nullity == Nullity::Exact).then_some(ns);
        }
        let ns = match tall {
            Some(ns) => ns,
            None => {
                let (rp, rv) = sample(&axis.rows[..axis.rows.len().min(k - 1)])?;
                nullspace_vector_anchored(
                    &build_loewner_1d(&cp, &cv, &rp, &rv)?,
                    self.rel_tol,
                    anchor,
                )?
            }
        };
        match ns.nullity {
            Nullity::Multiple => Err(Error::Degenerate(format!(
                "variable {} has a {}-dimensional null space with {}; reduce its degree",
                grid.name(),
                k - ns.rank,
                self.describe(var, &frozen)
            ))),
            Nullity::Trivial => {
                self.least_squares_blocks += 1;
                Ok(ns.vector)
            }
            Nullity::Exact => Ok(ns.vector),
        }
    }

    fn describe(&self, free: usize, frozen: &[usize]) -> String {
        let grids = self.source.grids();
        let parts: Vec<String> = (0..grids.len())
            .filter(|&v| v != free)
            .map(|v| format!("{}={}", grids[v].name(), grids[v].point(frozen[v])))
            .collect();
        if parts.is_empty() {
            "no frozen variables".into()
        } else {
            format!("frozen {}", parts.join(", "))
        }
    }

    /// Entry of the (already normalized) subtree rooted below `prefix` at `path`.
    fn subtree_entry(&self, prefix: &[usize], path: &[usize]) -> Complex64 {
        let mut full = prefix.to_vec();
        let mut acc = Complex64::new(1.0, 0.0);
        for &p in path {
            let level = full.len();
            acc *= self.levels[level][block_index(&self.ks, &full)][p];
            full.push(p);
        }
        acc
    }

    /// Fills the factors below `prefix` and returns the anchor path from this level down.
    fn node(&mut self, prefix: &mut Vec<usize>) -> Result<Vec<usize>> {
        let level = prefix.len();
        let n = self.order.len();
        let default_tail = self.default_path[level + 1..].to_vec();
        let cost = (self.ks[level] as u128).pow(3);
        self.flops += cost;
        let v = self.solve(level, prefix, &default_tail)?;
        let block = block_index(&self.ks, prefix);
        if level + 1 == n {
            let anchor = choose_anchor(&v, self.default_path[level]);
            let pivot = v[anchor];
            self.levels[level][block] = v.iter().map(|z| z / pivot).collect();
            return Ok(vec![anchor]);
        }

        let k = self.ks[level];
        let mut paths = Vec::with_capacity(k);
        for i in 0..k {
            prefix.push(i);
            paths.push(self.node(prefix)?);
            prefix.pop();
        }

        let mut scale: Vec<Option<Complex64>> = (0..k)
            .map(|i| (paths[i] == default_tail).then_some(v[i]))
            .collect();
        let mut bridges: HashMap<Vec<usize>, Vec<Complex64>> = HashMap::new();
        while scale.iter().any(Option::is_none) {
            let mut progress = false;
            for i in 0..k {
                if scale[i].is_some() {
                    continue;
                }
                let path = paths[i].clone();
                if !bridges.contains_key(&path) {
                    self.reanchor_flops += cost;
                    let w = self.solve(level, prefix, &path)?;
                    bridges.insert(path.clone(), w);
                }
                let w = &bridges[&path];
                // Reference block with a known scale and a usable entry at this path.
                let reference = (0..k)
                    .filter_map(|r| {
                        let known = scale[r]?;
                        prefix.push(r);
                        let entry = self.subtree_entry(prefix, &path);
                        prefix.pop();
                        let weight = (known * entry).norm() * w[r].norm();
                        (weight > 0.0).then_some((r, known * entry, weight))
                    })
                    .max_by(|a, b| a.2.total_cmp(&b.2));
                if let Some((r, value, _)) = reference {
                    scale[i] = Some(w[i] / w[r] * value);
                    progress = true;
                }
            }
            if !progress {
                let mut frozen = vec![0; n];
                for (j, &p) in prefix.iter().enumerate() {
                    frozen[self.order[j]] = self.selection[self.order[j]].columns[p];
                }
                return Err(Error::Degenerate(format!(
                    "cannot relate the blocks of variable {} with {}",
                    self.source.grids()[self.order[level]].name(),
                    self.describe(self.order[level], &frozen)
                )));
            }
        }
        let s: Vec<Complex64> = scale.into_iter().map(Option::unwrap).collect();
        if s.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::Degenerate(format!(
                "all coefficients of variable {} vanish",
                self.source.grids()[self.order[level]].name()
            )));
        }
        let anchor = choose_anchor(&s, self.default_path[level]);
        let pivot = s[anchor];
        self.levels[level][block] = s.iter().map(|z| z / pivot).collect();
        let mut path = vec![anchor];
        path.extend_from_slice(&paths[anchor]);
        Ok(path)
    }
}

pub fn validate_order(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::Input(format!(
            "variable order has {} entries for {n} variables",
            order.len()
        )));
    }
    for &v in order {
        if v >= n || seen[v] {
            return Err(Error::Input(format!(
                "variable order {order:?} is not a permutation"
            )));
        }
        seen[v] = true;
    }
    Ok(())
}

pub fn cascaded_nullspace(
    source: &DataSource,
    selection: &[AxisSelection],
    options: &CascadeOptions,
) -> Result<CascadeResult> {
    let n = source.num_variables();
    if selection.len() != n {
        return Err(Error::Shape(format!(
            "selection covers {} of {n} variables",
            selection.len()
        )));
    }
    validate_order(&options.order, n)?;
    let orders: Vec<usize> = selection.iter().map(AxisSelection::order).collect();
    if orders.contains(&0) {
        return Err(Error::InsufficientPoints(
            "a variable has no columns".into(),
        ));
    }
    let anchors = match &options.anchors {
        Some(a) => {
            if a.len() != n || a.iter().zip(&orders).any(|(&x, &k)| x >= k) {
                return Err(Error::Input(format!("invalid anchors {a:?}")));
            }
            a.clone()
        }
        None => orders.iter().map(|k| k - 1).collect(),
    };
    let ks: Vec<usize> = options.order.iter().map(|&v| orders[v]).collect();
    let default_path = options.order.iter().map(|&v| anchors[v]).collect();
    let levels = (0..n)
        .map(|j| vec![Vec::new(); ks[..j].iter().product()])
        .collect();
    let mut run = Cascade {
        source,
        selection,
        order: &options.order,
        ks,
        default_path,
        rel_tol: options.rel_tol,
        levels,
        flops: 0,
        reanchor_flops: 0,
        least_squares_blocks: 0,
    };
    run.node(&mut Vec::new())?;
    let weights = DecoupledWeights {
        order: options.order.clone(),
        orders,
        levels: run.levels,
    };
    Ok(CascadeResult {
        vector: weights.recombine(),
        weights,
        flops: run.flops,
        reanchor_flops: run.reanchor_flops,
        least_squares_blocks: run.least_squares_blocks,
    })
}

/// Cost of the cascade with column counts given in recursion order:
/// `sum_j k_j^3 * prod_{l<j} k_l`.
pub fn flop_cascade(ks: &[usize]) -> u128 {
    let mut blocks: u128 = 1;
    let mut total: u128 = 0;
    for &k in ks {
        let k = k as u128;
        total += blocks * k * k * k;
        blocks *= k;
    }
    total
}

/// Cost of one SVD of the full square Loewner matrix.
pub fn flop_full(ks: &[usize]) -> u128 {
    let n: u128 = ks.iter().map(|&k| k as u128).product();
    n * n * n
}

/// Cascade cost with `n` variables of `k` columns: `k^3 + k^4 + .. + k^(n+2)`.
pub fn flop_worst_case(k: usize, n: usize) -> u128 {
    let k = k as u128;
    (0..n as u32).map(|i| k.pow(3 + i)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MemoryEstimate {
    /// Dense complex storage of the full square Loewner matrix.
    pub full_bytes: u128,
    /// Largest one-variable Loewner matrix in the cascade.
    pub cascaded_bytes: u128,
}

pub fn memory_estimate(ks: &[usize]) -> MemoryEstimate {
    let n: u128 = ks.iter().map(|&k| k as u128).product();
    let kmax = ks.iter().copied().max().unwrap_or(0) as u128;
    MemoryEstimate {
        full_bytes: 16 * n * n,
        cascaded_bytes: 16 * kmax * kmax,
    }
}

/// Human-readable size in binary multiples, labelled B, KB, MB, GB, TB.
pub fn format_bytes(bytes: u128) -> String {
    const UNITS: [&str; 5] = ["B", "KB", "MB", "GB", "TB"];
    let mut value = bytes as f64;
    let mut unit = 0;
    while value >= 1024.0 && unit + 1 < UNITS.len() {
        value /= 1024.0;
        unit += 1;
    }
    if unit == 0 {
        format!("{bytes} B")
    } else {
        format!("{value:.2} {}", UNITS[unit])
    }
}

/// Variables sorted by decreasing column count; ties keep their original order.
pub fn optimal_variable_order(ks: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ks.len()).collect();
    order.sort_by(|&a, &b| ks[b].cmp(&ks[a]));
    order
}

/// Cost and memory summary of a fit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlopReport {
    pub order: Vec<usize>,
    pub columns: Vec<usize>,
    pub cascaded_flops: u128,
    pub full_flops: u128,
    pub reanchor_flops: u128,
    pub cascaded_bytes: u128,
    pub full_bytes: u128,
}

impl FlopReport {
    /// Formula-based report for column counts `ks` (natural order) and a recursion order.
    pub fn new(ks: &[usize], order: &[usize]) -> Self {
        let ordered: Vec<usize> = order.iter().map(|&v| ks[v]).collect();
        let mem = memory_estimate(ks);
        Self {
            order: order.to_vec(),
            columns: ks.to_vec(),
            cascaded_flops: flop_cascade(&ordered),
            full_flops: flop_full(ks),
            reanchor_flops: 0,
            cascaded_bytes: mem.cascaded_bytes,
            full_bytes: mem.full_bytes,
        }
    }
}
