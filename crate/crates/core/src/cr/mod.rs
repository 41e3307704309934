//! Pseudo-hermitian backgrounds: unitary admissible frame, Tanaka–Webster
//! connection, torsion, scalar curvature, Cartan tensor and obstruction
//! density.
//!
//! Frame conventions (unitary, `h_{11̄} = 1`):
//! `[Z_1, Z_1̄] = −iT + c Z_1 − c̄ Z_1̄` and `[T, Z_1] = b Z_1 − A_{11} Z_1̄`,
//! with connection form `ω = ω_1^1` given by `ω(T) = b`, `ω(Z_1) = c̄`,
//! `ω(Z_1̄) = −c`.

pub mod algebra;
pub mod chart;
pub mod spec;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldValue, GridGeom};
use crate::scalar::Coeff;

pub use algebra::FrameAlgebra;
pub use chart::{build_background_from_chart, ChartSpec, Component};
pub use spec::BackgroundSpec;

/// Frame directions on M: `T`, `Z_1`, `Z_1̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrIndex {
    Zero,
    One,
    Bar,
}

impl CrIndex {
    pub const ALL: [CrIndex; 3] = [CrIndex::Zero, CrIndex::One, CrIndex::Bar];

    pub fn conj(self) -> Self {
        match self {
            CrIndex::Zero => CrIndex::Zero,
            CrIndex::One => CrIndex::Bar,
            CrIndex::Bar => CrIndex::One,
        }
    }

    fn pos(self) -> usize {
        self as usize
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '0' => Ok(CrIndex::Zero),
            '1' => Ok(CrIndex::One),
            'b' => Ok(CrIndex::Bar),
            other => Err(Error::Parse(format!("bad frame index `{other}` (expected 0, 1 or b)"))),
        }
    }
}

impl fmt::Display for CrIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrIndex::Zero => "0",
            CrIndex::One => "1",
            CrIndex::Bar => "b",
        })
    }
}

/// Parses an index word such as `"1b0"`.
pub fn parse_word(s: &str) -> Result<Vec<CrIndex>> {
    s.chars().map(CrIndex::from_char).collect()
}

/// `#1 − #1̄` of an index word: the U(1) weight entering connection terms.
pub fn weight(word: &[CrIndex]) -> i64 {
    word.iter()
        .map(|i| match i {
            CrIndex::One => 1,
            CrIndex::Bar => -1,
            CrIndex::Zero => 0,
        })
        .sum()
}

/// Component of a tensor on M in the unitary frame.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexedField<C: Coeff> {
    pub word: Vec<CrIndex>,
    pub value: FieldValue<C>,
}

impl<C: Coeff> IndexedField<C> {
    pub fn scalar(value: FieldValue<C>) -> Self {
        Self { word: vec![], value }
    }

    pub fn new(word: Vec<CrIndex>, value: FieldValue<C>) -> Self {
        Self { word, value }
    }

    pub fn conj(&self) -> Self {
        Self { word: self.word.iter().map(|i| i.conj()).collect(), value: self.value.conj() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackgroundKind {
    Constant,
    Grid,
}

/// Frame data of a chart-built background.
#[derive(Clone, Debug)]
pub struct GridFrame<C: Coeff> {
    pub algebra: FrameAlgebra,
    pub geom: GridGeom,
    /// Contact form, in the coframe dual to the algebra basis.
    pub theta: [FieldValue<C>; 3],
    /// Unitary coframe element θ¹.
    pub theta1: [FieldValue<C>; 3],
    /// Reeb field in the algebra basis.
    pub t: [FieldValue<C>; 3],
    /// Unitary frame vector Z_1 in the algebra basis.
    pub z1: [FieldValue<C>; 3],
    /// `θ∧dθ` evaluated on the algebra basis.
    pub volume: FieldValue<C>,
    /// Per direction (T, Z_1, Z_1̄): coefficients of the coordinate derivatives.
    pub coord: [[FieldValue<C>; 3]; 3],
}

impl<C: Coeff> GridFrame<C> {
    pub(crate) fn new(
        algebra: FrameAlgebra,
        geom: GridGeom,
        theta: [FieldValue<C>; 3],
        theta1: [FieldValue<C>; 3],
        t: [FieldValue<C>; 3],
        z1: [FieldValue<C>; 3],
        volume: FieldValue<C>,
    ) -> Self {
        let z1b = [z1[0].conj(), z1[1].conj(), z1[2].conj()];
        let to_coord = |x: &[FieldValue<C>; 3]| -> [FieldValue<C>; 3] {
            std::array::from_fn(|axis| {
                let mut acc = FieldValue::zero();
                for (a, xa) in x.iter().enumerate() {
                    let m = algebra.action[a][axis];
                    if m != 0 {
                        acc.add_assign(&xa.scale(&C::from_i64(m)));
                    }
                }
                acc
            })
        };
        let coord = [to_coord(&t), to_coord(&z1), to_coord(&z1b)];
        Self { algebra, geom, theta, theta1, t, z1, volume, coord }
    }

    /// `V_a f` for the algebra basis vector `a`.
    pub fn basis_derivative(&self, a: usize, f: &FieldValue<C>) -> Result<FieldValue<C>> {
        let mut acc = FieldValue::zero();
        for axis in 0..3 {
            let m = self.algebra.action[a][axis];
            if m != 0 {
                acc.add_assign(&f.coord_derivative(axis)?.scale(&C::from_i64(m)));
            }
        }
        Ok(acc)
    }
}

/// A pseudo-hermitian structure in a unitary frame, with derived curvature data.
#[derive(Clone, Debug)]
pub struct Background<C: Coeff> {
    pub label: String,
    pub scal: FieldValue<C>,
    pub a11: FieldValue<C>,
    /// ω(T).
    pub omega_t: FieldValue<C>,
    /// ω(Z_1).
    pub omega_1: FieldValue<C>,
    /// ω(Z_1̄).
    pub omega_1bar: FieldValue<C>,
    pub frame: Option<GridFrame<C>>,
    /// `A_{11,1̄}`.
    pub a11_1bar: FieldValue<C>,
    /// Cartan tensor `Q_{11}`.
    pub cartan: FieldValue<C>,
    /// Obstruction density (real part).
    pub obstruction: FieldValue<C>,
    /// Largest imaginary part of the computed obstruction density.
    pub obstruction_imag_defect: f64,
    /// Spec the background was built from, for provenance and reloading.
    pub spec: Option<serde_json::Value>,
}

impl<C: Coeff> Background<C> {
    /// Derives the cached jets from the structure functions.
    pub fn assemble(
        label: impl Into<String>,
        scal: FieldValue<C>,
        a11: FieldValue<C>,
        omega: [FieldValue<C>; 3],
        frame: Option<GridFrame<C>>,
    ) -> Result<Self> {
        let [omega_t, omega_1, omega_1bar] = omega;
        let mut bg = Self {
            label: label.into(),
            scal,
            a11,
            omega_t,
            omega_1,
            omega_1bar,
            frame,
            a11_1bar: FieldValue::zero(),
            cartan: FieldValue::zero(),
            obstruction: FieldValue::zero(),
            obstruction_imag_defect: 0.0,
            spec: None,
        };
        let a = bg.torsion_field();
        bg.a11_1bar = bg.tw_derivative(&a, CrIndex::Bar)?.value;
        bg.cartan = cartan_tensor(&bg)?;
        let (o, defect) = obstruction_with_defect(&bg)?;
        bg.obstruction = o;
        bg.obstruction_imag_defect = defect;
        Ok(bg)
    }

    /// Homogeneous model with constant `Scal = s` and torsion `A_{11} = a`:
    /// `[Z_1, Z_1̄] = −iT`, `[T, Z_1] = −is Z_1 − a Z_1̄`.
    pub fn constant(scal: C, a11: C) -> Result<Self> {
        let label = format!("constant(scal={scal:?}, a11={a11:?})");
        Self::constant_labeled(label, scal, a11)
    }

    pub fn constant_labeled(label: impl Into<String>, scal: C, a11: C) -> Result<Self> {
        if !scal.imag_part().is_zero() && C::MODE == crate::scalar::Mode::Exact {
            return Err(Error::Invalid("scalar curvature must be real".into()));
        }
        let omega_t = C::imag_unit().neg().mul(&scal);
        Self::assemble(
            label,
            FieldValue::Const(scal),
            FieldValue::Const(a11),
            [FieldValue::Const(omega_t), FieldValue::zero(), FieldValue::zero()],
            None,
        )
    }

    /// The flat Heisenberg structure.
    pub fn heisenberg() -> Result<Self> {
        Self::constant_labeled("heisenberg", C::zero(), C::zero())
    }

    pub fn kind(&self) -> BackgroundKind {
        let fields = [&self.scal, &self.a11, &self.omega_t, &self.omega_1, &self.omega_1bar];
        if fields.iter().any(|f| f.geom().is_some()) {
            BackgroundKind::Grid
        } else {
            BackgroundKind::Constant
        }
    }

    pub fn geom(&self) -> Option<GridGeom> {
        self.frame.as_ref().map(|f| f.geom)
    }

    pub fn torsion_field(&self) -> IndexedField<C> {
        IndexedField::new(vec![CrIndex::One, CrIndex::One], self.a11.clone())
    }

    /// ω(Z_d).
    pub fn omega(&self, dir: CrIndex) -> &FieldValue<C> {
        match dir {
            CrIndex::Zero => &self.omega_t,
            CrIndex::One => &self.omega_1,
            CrIndex::Bar => &self.omega_1bar,
        }
    }

    /// Frame derivatives `(T f, Z_1 f, Z_1̄ f)`, sharing the coordinate derivatives.
    pub fn derivs(&self, f: &FieldValue<C>) -> Result<[FieldValue<C>; 3]> {
        let frame = match (&self.frame, f) {
            (None, _) | (_, FieldValue::Const(_)) => {
                return Ok([FieldValue::zero(), FieldValue::zero(), FieldValue::zero()])
            }
            (Some(fr), _) => fr,
        };
        let mut grads: [Option<FieldValue<C>>; 3] = [None, None, None];
        let mut out = [FieldValue::zero(), FieldValue::zero(), FieldValue::zero()];
        for (d, row) in frame.coord.iter().enumerate() {
            for axis in 0..3 {
                if row[axis].is_const_zero() {
                    continue;
                }
                if grads[axis].is_none() {
                    grads[axis] = Some(f.coord_derivative(axis)?);
                }
                let g = grads[axis].as_ref().expect("gradient computed above");
                out[d].add_product(&row[axis], g);
            }
        }
        Ok(out)
    }

    /// Single frame derivative `Z_d f`.
    pub fn deriv(&self, dir: CrIndex, f: &FieldValue<C>) -> Result<FieldValue<C>> {
        let frame = match (&self.frame, f) {
            (None, _) | (_, FieldValue::Const(_)) => return Ok(FieldValue::zero()),
            (Some(fr), _) => fr,
        };
        let mut acc = FieldValue::zero();
        for axis in 0..3 {
            let coef = &frame.coord[dir.pos()][axis];
            if !coef.is_const_zero() {
                acc.add_product(coef, &f.coord_derivative(axis)?);
            }
        }
        Ok(acc)
    }

    /// Tanaka–Webster covariant derivative in direction `dir`; the new index is
    /// appended to the word.
    pub fn tw_derivative(&self, field: &IndexedField<C>, dir: CrIndex) -> Result<IndexedField<C>> {
        let mut value = self.deriv(dir, &field.value)?;
        let w = weight(&field.word);
        if w != 0 {
            let corr = self.omega(dir) * &field.value;
            value = &value - &corr.scale(&C::from_i64(w));
        }
        let mut word = field.word.clone();
        word.push(dir);
        Ok(IndexedField { word, value })
    }

    /// Iterated covariant derivative: `dirs` applied left to right.
    pub fn tw_derivatives(&self, field: &IndexedField<C>, dirs: &[CrIndex]) -> Result<IndexedField<C>> {
        let mut f = field.clone();
        for &d in dirs {
            f = self.tw_derivative(&f, d)?;
        }
        Ok(f)
    }

    /// Sublaplacian `Δ_b f = −(f_{,1 1̄} + f_{,1̄ 1})` in the unitary frame.
    pub fn sublaplacian(&self, f: &FieldValue<C>) -> Result<FieldValue<C>> {
        let s = IndexedField::scalar(f.clone());
        let a = self.tw_derivatives(&s, &[CrIndex::One, CrIndex::Bar])?.value;
        let b = self.tw_derivatives(&s, &[CrIndex::Bar, CrIndex::One])?.value;
        Ok((&a + &b).neg())
    }

    /// Structure residuals of a chart-built background.
    pub fn structure_residuals(&self) -> Result<StructureResiduals> {
        let frame = self
            .frame
            .as_ref()
            .ok_or_else(|| Error::Invalid("structure residuals need a chart-built background".into()))?;
        chart::structure_residuals(self, frame)
    }
}

/// Max-norm residuals of the structure equations.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct StructureResiduals {
    /// `dθ − iθ¹∧θ^1̄`.
    pub contact: f64,
    /// `dθ¹ − θ¹∧ω − A^1_1̄ θ∧θ^1̄`.
    pub torsion: f64,
    /// `ω + ω̄`.
    pub metric: f64,
}

impl StructureResiduals {
    pub fn max(&self) -> f64 {
        self.contact.max(self.torsion).max(self.metric)
    }
}

/// `Q_{11} = (1/6)Scal_{,11} + (i/2) Scal A_{11} − A_{11,0} − (2i/3) A_{11,1̄1}`.
pub fn cartan_tensor<C: Coeff>(bg: &Background<C>) -> Result<FieldValue<C>> {
    use CrIndex::*;
    let scal = IndexedField::scalar(bg.scal.clone());
    let a = bg.torsion_field();
    let s11 = bg.tw_derivatives(&scal, &[One, One])?.value;
    let a0 = bg.tw_derivative(&a, Zero)?.value;
    let a1b1 = bg.tw_derivatives(&a, &[Bar, One])?.value;
    let i = C::imag_unit();
    let mut q = s11.scale(&C::ratio(1, 6));
    q = &q + &(&bg.scal * &bg.a11).scale(&i.mul(&C::ratio(1, 2)));
    q = &q - &a0;
    q = &q - &a1b1.scale(&i.mul(&C::ratio(2, 3)));
    Ok(q)
}

fn obstruction_with_defect<C: Coeff>(bg: &Background<C>) -> Result<(FieldValue<C>, f64)> {
    use CrIndex::*;
    let q = IndexedField::new(vec![One, One], bg.cartan.clone());
    let qbb = bg.tw_derivatives(&q, &[Bar, Bar])?.value;
    let abar_q = (&bg.a11.conj() * &bg.cartan).scale(&C::imag_unit());
    let o = &qbb - &abar_q;
    let defect = o.imag_part().max_norm();
    Ok((o.real_part(), defect))
}

/// `𝒪 = Q_{11,1̄1̄} − i A^{11} Q_{11}` (real part) and its imaginary defect.
pub fn obstruction_density<C: Coeff>(bg: &Background<C>) -> Result<(FieldValue<C>, f64)> {
    obstruction_with_defect(bg)
}
