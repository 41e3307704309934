//! Formal power-series construction of self-dual Einstein ACH metrics over
//! three-dimensional CR manifolds, and CR GJMS operators extracted from them.

pub mod cr;
pub mod error;
pub mod field;
pub mod gjms;
pub mod indicial;
pub mod io;
pub mod scalar;
pub mod series;
pub mod solver;
pub mod spectral;
pub mod theta;

pub use cr::{Background, BackgroundSpec, ChartSpec};
pub use error::{Error, Result};
pub use field::{FieldValue, GridGeom};
pub use gjms::{gjms_apply, gjms_matrix, GjmsOutput, GjmsRequest};
pub use indicial::{det_product_check, growth_probe, indicial_matrix, DetReport, GrowthProbe};
pub use num_complex::Complex64;
pub use scalar::{Coeff, ExactComplex, Mode};
pub use series::JetSeries;
pub use solver::{eta_extract, solve, verify, SolveConfig, SolveResult, VerifyReport};
pub use theta::MetricAnsatz;
