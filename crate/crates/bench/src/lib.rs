//! Shared fixtures for the benchmarks.

use achsolve::{Background, BackgroundSpec, Coeff, Complex64, ExactComplex, Result, SolveConfig, SolveResult};

/// Builds a named background in the requested scalar type.
pub fn background<C: Coeff>(name: &str) -> Result<Background<C>> {
    BackgroundSpec::parse(name)?.build::<C>(name)
}

/// Exact solve with `λ = 1`.
pub fn exact_solve(name: &str, order: usize) -> Result<SolveResult<ExactComplex>> {
    achsolve::solve(&background(name)?, SolveConfig::new(order, ExactComplex::one()))
}

/// Float solve with `λ = 1`.
pub fn float_solve(bg: &Background<Complex64>, order: usize) -> Result<SolveResult<Complex64>> {
    achsolve::solve(bg, SolveConfig::new(order, Complex64::one()))
}
