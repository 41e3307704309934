//! Scalar fields on the boundary manifold: a constant, or samples on a
//! uniform periodic grid.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Mode};

/// Resolution and periods of a periodic grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridGeom {
    pub shape: [usize; 3],
    pub periods: [f64; 3],
}

impl GridGeom {
    pub fn new(shape: [usize; 3], periods: [f64; 3]) -> Self {
        Self { shape, periods }
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of node `n`.
    pub fn point(&self, n: usize) -> [f64; 3] {
        let k = n % self.shape[2];
        let j = (n / self.shape[2]) % self.shape[1];
        let i = n / (self.shape[1] * self.shape[2]);
        [
            self.periods[0] * i as f64 / self.shape[0] as f64,
            self.periods[1] * j as f64 / self.shape[1] as f64,
            self.periods[2] * k as f64 / self.shape[2] as f64,
        ]
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        (0..3).map(|a| self.periods[a] / self.shape[a] as f64).product()
    }
}

/// A complex scalar field on M.
#[derive(Clone, Debug)]
pub enum FieldValue<C> {
    Const(C),
    Grid { geom: GridGeom, data: Arc<Vec<C>> },
}

impl<C: Coeff> PartialEq for FieldValue<C> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldValue::Const(a), FieldValue::Const(b)) => a == b,
            (FieldValue::Grid { data: a, .. }, FieldValue::Grid { data: b, .. }) => a == b,
            (FieldValue::Const(c), FieldValue::Grid { data, .. })
            | (FieldValue::Grid { data, .. }, FieldValue::Const(c)) => data.iter().all(|v| v == c),
        }
    }
}

impl<C: Coeff> Default for FieldValue<C> {
    fn default() -> Self {
        FieldValue::zero()
    }
}

impl<C: Coeff> FieldValue<C> {
    pub fn zero() -> Self {
        FieldValue::Const(C::zero())
    }

    pub fn one() -> Self {
        FieldValue::Const(C::one())
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        FieldValue::Const(C::ratio(n, d))
    }

    pub fn grid(geom: GridGeom, data: Vec<C>) -> Result<Self> {
        if data.len() != geom.len() {
            return Err(Error::Invalid(format!(
                "grid of shape {:?} needs {} samples, got {}",
                geom.shape,
                geom.len(),
                data.len()
            )));
        }
        Ok(FieldValue::Grid { geom, data: Arc::new(data) })
    }

    pub fn geom(&self) -> Option<GridGeom> {
        match self {
            FieldValue::Const(_) => None,
            FieldValue::Grid { geom, .. } => Some(*geom),
        }
    }

    pub fn as_const(&self) -> Option<&C> {
        match self {
            FieldValue::Const(c) => Some(c),
            FieldValue::Grid { .. } => None,
        }
    }

    /// Structural zero: a constant zero (cheap test used to skip work).
    pub fn is_const_zero(&self) -> bool {
        matches!(self, FieldValue::Const(c) if c.is_zero())
    }

    /// Exact zero at every node.
    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Const(c) => c.is_zero(),
            FieldValue::Grid { data, .. } => data.iter().all(Coeff::is_zero),
        }
    }

    /// Value at node `n` (constants broadcast).
    pub fn at(&self, n: usize) -> C {
        match self {
            FieldValue::Const(c) => c.clone(),
            FieldValue::Grid { data, .. } => data[n].clone(),
        }
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        match self {
            FieldValue::Const(c) => FieldValue::Const(f(c)),
            FieldValue::Grid { geom, data } => {
                FieldValue::Grid { geom: *geom, data: Arc::new(data.iter().map(f).collect()) }
            }
        }
    }

    pub fn try_map(&self, f: impl Fn(usize, &C) -> Result<C>) -> Result<Self> {
        match self {
            FieldValue::Const(c) => Ok(FieldValue::Const(f(0, c)?)),
            FieldValue::Grid { geom, data } => {
                let v = data.iter().enumerate().map(|(i, c)| f(i, c)).collect::<Result<Vec<_>>>()?;
                Ok(FieldValue::Grid { geom: *geom, data: Arc::new(v) })
            }
        }
    }

    /// Pointwise binary operation; grids must share a shape.
    pub fn try_zip(&self, other: &Self, f: impl Fn(&C, &C) -> C) -> Result<Self> {
        match (self, other) {
            (FieldValue::Const(a), FieldValue::Const(b)) => Ok(FieldValue::Const(f(a, b))),
            (FieldValue::Const(a), FieldValue::Grid { geom, data }) => {
                Ok(FieldValue::Grid { geom: *geom, data: Arc::new(data.iter().map(|b| f(a, b)).collect()) })
            }
            (FieldValue::Grid { geom, data }, FieldValue::Const(b)) => {
                Ok(FieldValue::Grid { geom: *geom, data: Arc::new(data.iter().map(|a| f(a, b)).collect()) })
            }
            (FieldValue::Grid { geom: ga, data: a }, FieldValue::Grid { geom: gb, data: b }) => {
                if ga.shape != gb.shape {
                    return Err(Error::ShapeMismatch(ga.shape, gb.shape));
                }
                Ok(FieldValue::Grid {
                    geom: *ga,
                    data: Arc::new(a.iter().zip(b.iter()).map(|(x, y)| f(x, y)).collect()),
                })
            }
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if o.is_const_zero() {
            return Ok(self.clone());
        }
        if self.is_const_zero() {
            return Ok(o.clone());
        }
        self.try_zip(o, C::add)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        if o.is_const_zero() {
            return Ok(self.clone());
        }
        if self.is_const_zero() {
            return Ok(o.neg());
        }
        self.try_zip(o, C::sub)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.is_const_zero() || o.is_const_zero() {
            // Still validate shapes so mismatches never pass silently.
            if let (Some(a), Some(b)) = (self.geom(), o.geom()) {
                if a.shape != b.shape {
                    return Err(Error::ShapeMismatch(a.shape, b.shape));
                }
            }
            return Ok(Self::zero());
        }
        if let FieldValue::Const(c) = self {
            if *c == C::one() {
                return Ok(o.clone());
            }
        }
        if let FieldValue::Const(c) = o {
            if *c == C::one() {
                return Ok(self.clone());
            }
        }
        self.try_zip(o, C::mul)
    }

    /// In-place accumulation `self += o`.
    pub fn add_assign(&mut self, o: &Self) {
        if o.is_const_zero() {
            return;
        }
        match (&mut *self, o) {
            (FieldValue::Const(a), FieldValue::Const(b)) => a.add_assign(b),
            (FieldValue::Grid { data, .. }, FieldValue::Const(b)) => {
                for v in Arc::make_mut(data).iter_mut() {
                    v.add_assign(b);
                }
            }
            (FieldValue::Grid { geom: ga, data }, FieldValue::Grid { geom: gb, data: b }) => {
                assert_eq!(ga.shape, gb.shape, "field shapes must agree");
                for (v, w) in Arc::make_mut(data).iter_mut().zip(b.iter()) {
                    v.add_assign(w);
                }
            }
            (FieldValue::Const(_), FieldValue::Grid { .. }) => {
                *self = self.try_add(o).expect("field shapes must agree");
            }
        }
    }

    /// In-place `self += a * b` without materialising the product.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        if a.is_const_zero() || b.is_const_zero() {
            return;
        }
        match (&mut *self, a, b) {
            (FieldValue::Const(s), FieldValue::Const(x), FieldValue::Const(y)) => s.add_assign(&x.mul(y)),
            (FieldValue::Grid { data, .. }, _, _) => {
                let out = Arc::make_mut(data);
                match (a, b) {
                    (FieldValue::Const(x), FieldValue::Const(y)) => {
                        let p = x.mul(y);
                        out.iter_mut().for_each(|v| v.add_assign(&p));
                    }
                    (FieldValue::Const(x), FieldValue::Grid { data: yd, .. })
                    | (FieldValue::Grid { data: yd, .. }, FieldValue::Const(x)) => {
                        assert_eq!(out.len(), yd.len(), "field shapes must agree");
                        for (v, y) in out.iter_mut().zip(yd.iter()) {
                            v.add_assign(&x.mul(y));
                        }
                    }
                    (FieldValue::Grid { data: xd, .. }, FieldValue::Grid { data: yd, .. }) => {
                        assert!(out.len() == xd.len() && xd.len() == yd.len(), "field shapes must agree");
                        for ((v, x), y) in out.iter_mut().zip(xd.iter()).zip(yd.iter()) {
                            v.add_assign(&x.mul(y));
                        }
                    }
                }
            }
            _ => {
                let p = a.try_mul(b).expect("field shapes must agree");
                self.add_assign(&p);
            }
        }
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg)
    }

    pub fn conj(&self) -> Self {
        self.map(C::conj)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if *c == C::one() {
            return self.clone();
        }
        self.map(|v| v.mul(c))
    }

    pub fn real_part(&self) -> Self {
        self.map(C::real_part)
    }

    pub fn imag_part(&self) -> Self {
        self.map(C::imag_part)
    }

    /// Pointwise inverse; fails if any node is (numerically) zero.
    pub fn inv(&self) -> Result<Self> {
        self.try_map(|_, c| c.inv().ok_or(Error::NotInvertible))
    }

    /// Pointwise positive square root of a positive real field.
    pub fn sqrt_positive(&self) -> Result<Self> {
        self.try_map(|n, c| c.sqrt_positive().ok_or_else(|| Error::NotPositive(format!(" (value {c:?} at node {n})"))))
    }

    /// Largest modulus over the grid.
    pub fn max_norm(&self) -> f64 {
        match self {
            FieldValue::Const(c) => c.magnitude(),
            FieldValue::Grid { data, .. } => data.iter().map(Coeff::magnitude).fold(0.0, f64::max),
        }
    }

    /// Derivative along coordinate `axis`; constants differentiate to zero.
    pub fn coord_derivative(&self, axis: usize) -> Result<Self> {
        match self {
            FieldValue::Const(_) => Ok(Self::zero()),
            FieldValue::Grid { geom, data } => {
                if geom.shape[axis] <= 1 {
                    return Ok(Self::zero());
                }
                let d = C::spectral_diff(data, geom.shape, axis, geom.periods[axis])
                    .ok_or_else(|| Error::Unsupported(C::MODE, "spectral differentiation of grid fields".into()))?;
                Ok(FieldValue::Grid { geom: *geom, data: Arc::new(d) })
            }
        }
    }

    pub fn to_float(&self) -> FieldValue<Complex64> {
        match self {
            FieldValue::Const(c) => FieldValue::Const(c.to_c64()),
            FieldValue::Grid { geom, data } => {
                FieldValue::Grid { geom: *geom, data: Arc::new(data.iter().map(Coeff::to_c64).collect()) }
            }
        }
    }

    /// Materialises the field on `geom` (constants are broadcast).
    pub fn on_grid(&self, geom: GridGeom) -> Result<Self> {
        match self {
            FieldValue::Const(c) => Self::grid(geom, vec![c.clone(); geom.len()]),
            FieldValue::Grid { geom: g, .. } if g.shape == geom.shape => Ok(self.clone()),
            FieldValue::Grid { geom: g, .. } => Err(Error::ShapeMismatch(g.shape, geom.shape)),
        }
    }

    pub fn samples(&self) -> Option<&[C]> {
        match self {
            FieldValue::Const(_) => None,
            FieldValue::Grid { data, .. } => Some(data),
        }
    }

    /// JSON dump: `{"const": [re, im]}` or `{"shape", "periods", "samples"}`.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            FieldValue::Const(c) => serde_json::json!({ "const": c.to_json() }),
            FieldValue::Grid { geom, data } => serde_json::json!({
                "shape": geom.shape,
                "periods": geom.periods,
                "samples": data.iter().map(Coeff::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        if let Some(c) = v.get("const") {
            return Ok(FieldValue::Const(C::from_json(c)?));
        }
        let shape: [usize; 3] = serde_json::from_value(
            v.get("shape").cloned().ok_or_else(|| Error::Parse("field dump missing `shape`".into()))?,
        )?;
        let periods: [f64; 3] = serde_json::from_value(
            v.get("periods").cloned().ok_or_else(|| Error::Parse("field dump missing `periods`".into()))?,
        )?;
        let samples = v
            .get("samples")
            .and_then(|s| s.as_array())
            .ok_or_else(|| Error::Parse("field dump missing `samples`".into()))?;
        let data = samples.iter().map(C::from_json).collect::<Result<Vec<_>>>()?;
        Self::grid(GridGeom::new(shape, periods), data)
    }

    pub fn mode(&self) -> Mode {
        C::MODE
    }
}

impl<C: Coeff> Add for &FieldValue<C> {
    type Output = FieldValue<C>;
    fn add(self, o: Self) -> FieldValue<C> {
        self.try_add(o).expect("field shapes must agree")
    }
}

impl<C: Coeff> Sub for &FieldValue<C> {
    type Output = FieldValue<C>;
    fn sub(self, o: Self) -> FieldValue<C> {
        self.try_sub(o).expect("field shapes must agree")
    }
}

impl<C: Coeff> Mul for &FieldValue<C> {
    type Output = FieldValue<C>;
    fn mul(self, o: Self) -> FieldValue<C> {
        self.try_mul(o).expect("field shapes must agree")
    }
}

impl<C: Coeff> Neg for &FieldValue<C> {
    type Output = FieldValue<C>;
    fn neg(self) -> FieldValue<C> {
        FieldValue::neg(self)
    }
}
