//! Rational interpolation of multivariate data with n-variable Loewner matrices.
//!
//! Data sources ([`grid`]) are sampled on per-variable interpolation and data
//! points. The null vector of the Loewner matrix ([`loewner`]), computed
//! directly or by the cascade of one-variable problems ([`cascade`]), gives the
//! weights of a barycentric model ([`model`]) that also admits a generalized
//! state-space realization ([`realize`]). [`driver`] ties these together.

pub mod cascade;
pub mod cli;
pub mod complex_io;
pub mod driver;
pub mod error;
pub mod expr;
pub mod grid;
pub mod loewner;
pub mod model;
pub mod realize;

pub use cascade::{
    cascaded_nullspace, flop_cascade, flop_full, flop_worst_case, memory_estimate,
    optimal_variable_order, CascadeOptions, CascadeResult, DecoupledWeights, FlopReport,
};
pub use driver::{
    fit_adaptive, fit_direct, FitOptions, NullspaceMethod, SplitChoice, VariableOrder,
};
pub use error::{Error, Result};
pub use grid::{DataSource, Oracle, Tableau, VariableGrid};
pub use loewner::{build_loewner_nd, detect_orders, nullspace_vector, AxisSelection};
pub use model::{max_error, BarycentricModel};
pub use num_complex::Complex64;
pub use realize::{build_realization, optimal_split, GeneralizedRealization, VariableSplit};
