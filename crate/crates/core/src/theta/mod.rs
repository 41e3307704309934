//! Θ-frame tensor calculus for normal-form ACH metrics: extended connection,
//! difference tensor and the full curvature stack, all exact in series
//! arithmetic.
//!
//! Storage conventions: `T̄_{IJ}{}^K` as `[I, J, K]`, `D_{IJ}{}^K` as
//! `[I, J, K]`, `R_I{}^J{}_{KL}` as `[I, J, K, L]`; covariant derivatives put
//! the derivative index first.

pub mod curvature;
pub mod frame;
pub mod index;
pub mod metric;
pub mod tensor;

pub use curvature::{permutation_sign, Geometry, LeviCivita};
pub use frame::ThetaFrame;
pub use index::{Ix, BAR, INF, ONE, ZERO};
pub use metric::{inverse_metric, MetricAnsatz};
pub use tensor::{Dense, ThetaTensor, Variance};

use crate::cr::Background;
use crate::error::Result;
use crate::scalar::Coeff;

use Variance::{Lower, Upper};

/// `∇̄` of a Θ-tensor; the new (lower) index is the first slot.
pub fn extended_cov_derivative<C: Coeff>(bg: &Background<C>, t: &ThetaTensor<C>) -> Result<ThetaTensor<C>> {
    let frame = ThetaFrame::new(bg, t.order);
    let upper: Vec<bool> = t.variance.iter().map(|v| *v == Upper).collect();
    let d = frame.cov_derivative(&t.to_dense(), &upper)?;
    let mut variance = vec![Lower];
    variance.extend(&t.variance);
    Ok(ThetaTensor::from_dense(variance, &d))
}

/// `T̄_{IJ}{}^K`.
pub fn extended_torsion<C: Coeff>(bg: &Background<C>, order: usize) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower, Lower, Upper], &ThetaFrame::new(bg, order).torsion()?))
}

/// `R̄_I{}^J{}_{KL}`.
pub fn extended_curvature<C: Coeff>(bg: &Background<C>, order: usize) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower, Upper, Lower, Lower], &ThetaFrame::new(bg, order).curvature()?))
}

/// `D_{IJ}{}^K`.
pub fn difference_tensor<C: Coeff>(bg: &Background<C>, m: &MetricAnsatz<C>) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower, Lower, Upper], &Geometry::new(bg, m)?.d))
}

/// `R_I{}^J{}_{KL}`.
pub fn riemann<C: Coeff>(bg: &Background<C>, m: &MetricAnsatz<C>) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower, Upper, Lower, Lower], &Geometry::new(bg, m)?.riemann))
}

/// `Ric_IJ`.
pub fn ricci<C: Coeff>(bg: &Background<C>, m: &MetricAnsatz<C>) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower, Lower], &Geometry::new(bg, m)?.ricci))
}

/// `E_IJ = Ric_IJ + (3/2) g_IJ`.
pub fn einstein<C: Coeff>(bg: &Background<C>, m: &MetricAnsatz<C>) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower, Lower], &Geometry::new(bg, m)?.einstein))
}

/// `ε_IJKL`.
pub fn volume_epsilon<C: Coeff>(bg: &Background<C>, m: &MetricAnsatz<C>) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower; 4], &Geometry::new(bg, m)?.volume_form()?))
}

/// `P_IJ`.
pub fn schouten<C: Coeff>(bg: &Background<C>, m: &MetricAnsatz<C>) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower, Lower], &Geometry::new(bg, m)?.schouten()?))
}

/// `W^-_IJKL`.
pub fn weyl_asd<C: Coeff>(bg: &Background<C>, m: &MetricAnsatz<C>) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower; 4], &Geometry::new(bg, m)?.weyl_asd()?))
}

/// `C^-_IJK`.
pub fn cotton_asd<C: Coeff>(bg: &Background<C>, m: &MetricAnsatz<C>) -> Result<ThetaTensor<C>> {
    Ok(ThetaTensor::from_dense(vec![Lower; 3], &Geometry::new(bg, m)?.cotton_asd()?))
}
