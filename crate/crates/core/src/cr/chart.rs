//! Backgrounds built from a contact form and a `T^{1,0}` generator on a
//! periodic chart, by solving the structure equations pointwise.
//!
//! Forms and vector fields are expanded in a [`FrameAlgebra`] basis `V_a`
//! and its dual coframe `σ^a`, so `dσ^c = −½ c_ab^c σ^a∧σ^b`.

use num_complex::Complex64;
use serde_json::Value;

use super::{Background, FrameAlgebra, GridFrame, StructureResiduals};
use crate::error::{Error, Result};
use crate::field::{FieldValue, GridGeom};
use crate::scalar::{Coeff, Mode};

type Vec3<C> = [FieldValue<C>; 3];

/// One component of a form or vector field.
#[derive(Clone, Debug, PartialEq)]
pub enum Component {
    /// A constant, in any scalar JSON encoding (`1`, `"1/2"`, `[re, im]`).
    Const(Value),
    /// `Σ c · exp(i Σ_a k_a 2π x_a / P_a)`.
    Fourier(Vec<(Complex64, [i64; 3])>),
    /// Grid samples in row-major node order.
    Samples(Vec<Value>),
}

impl Component {
    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(terms) = v.get("fourier") {
            let terms = terms.as_array().ok_or_else(|| Error::Parse("`fourier` must be a list".into()))?;
            let parsed = terms
                .iter()
                .map(|t| {
                    let c = <Complex64 as Coeff>::from_json(
                        t.get("c").ok_or_else(|| Error::Parse("fourier term missing `c`".into()))?,
                    )?;
                    let k: [i64; 3] = serde_json::from_value(
                        t.get("k").cloned().ok_or_else(|| Error::Parse("fourier term missing `k`".into()))?,
                    )?;
                    Ok((c, k))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Component::Fourier(parsed));
        }
        if let Some(s) = v.get("samples") {
            let s = s.as_array().ok_or_else(|| Error::Parse("`samples` must be a list".into()))?;
            return Ok(Component::Samples(s.clone()));
        }
        match v {
            Value::Number(_) | Value::String(_) | Value::Array(_) => Ok(Component::Const(v.clone())),
            other => Err(Error::Parse(format!("bad chart component {other}"))),
        }
    }

    pub fn zero() -> Self {
        Component::Const(Value::from(0))
    }

    /// Inverse of [`Component::from_json`].
    pub fn to_json(&self) -> Value {
        match self {
            Component::Const(v) => v.clone(),
            Component::Fourier(terms) => serde_json::json!({
                "fourier": terms.iter().map(|(c, k)| serde_json::json!({"c": c.to_json(), "k": k})).collect::<Vec<_>>(),
            }),
            Component::Samples(s) => serde_json::json!({ "samples": s }),
        }
    }

    /// Samples the component on `geom`; non-constant data needs float mode.
    pub fn to_field<C: Coeff>(&self, geom: GridGeom) -> Result<FieldValue<C>> {
        match self {
            Component::Const(v) => Ok(FieldValue::Const(C::from_json(v)?)),
            Component::Fourier(terms) => {
                require_float::<C>("non-constant chart data")?;
                let data = crate::spectral::sample(geom.shape, geom.periods, |x| {
                    terms
                        .iter()
                        .map(|(c, k)| {
                            let phase: f64 =
                                (0..3).map(|a| k[a] as f64 * std::f64::consts::TAU * x[a] / geom.periods[a]).sum();
                            c * Complex64::from_polar(1.0, phase)
                        })
                        .sum()
                });
                FieldValue::grid(geom, data.into_iter().map(C::from_c64).collect())
            }
            Component::Samples(s) => {
                require_float::<C>("non-constant chart data")?;
                FieldValue::grid(geom, s.iter().map(C::from_json).collect::<Result<Vec<_>>>()?)
            }
        }
    }
}

fn require_float<C: Coeff>(what: &str) -> Result<()> {
    if C::MODE == Mode::Exact {
        Err(Error::Unsupported(Mode::Exact, what.into()))
    } else {
        Ok(())
    }
}

/// Contact form and CR generator on a periodic chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartSpec {
    pub periods: [f64; 3],
    pub resolution: [usize; 3],
    pub algebra: FrameAlgebra,
    /// θ in the coframe `σ^a`.
    pub theta: [Component; 3],
    /// Z in the frame `V_a`.
    pub z: [Component; 3],
    /// Optional conformal factor: θ is replaced by `e^Υ θ`.
    pub upsilon: Option<Component>,
    /// Optional deformation: Z is replaced by `Z + μ Z̄`.
    pub mu: Option<Component>,
    /// Tolerance for the structure-equation residuals (float mode).
    pub tol: f64,
}

pub const DEFAULT_CHART_TOL: f64 = 1e-8;

fn components(v: &Value, what: &str) -> Result<[Component; 3]> {
    let list: Vec<Value> = match v {
        Value::Array(a) => a.clone(),
        Value::Object(m) => (0..3).map(|i| m.get(&i.to_string()).cloned().unwrap_or(Value::from(0))).collect(),
        other => return Err(Error::Parse(format!("`{what}` must be a list of three components, found {other}"))),
    };
    if list.len() != 3 {
        return Err(Error::Parse(format!("`{what}` needs three components, got {}", list.len())));
    }
    Ok([Component::from_json(&list[0])?, Component::from_json(&list[1])?, Component::from_json(&list[2])?])
}

impl ChartSpec {
    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("chart spec missing `{k}`")));
        let periods: [f64; 3] = serde_json::from_value(get("periods")?.clone())?;
        let resolution: [usize; 3] = match v.get("resolution") {
            Some(Value::Number(n)) => {
                let n = n.as_u64().ok_or_else(|| Error::Parse("bad resolution".into()))? as usize;
                [n; 3]
            }
            Some(r) => serde_json::from_value(r.clone())?,
            None => [1, 1, 1],
        };
        if resolution.contains(&0) || periods.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::Invalid("chart periods must be positive and resolution nonzero".into()));
        }
        let algebra = match v.get("algebra") {
            None => FrameAlgebra::abelian(),
            Some(Value::String(name)) => FrameAlgebra::by_name(name)?,
            Some(custom) => {
                let brackets = serde_json::from_value(custom.get("brackets").cloned().unwrap_or(Value::Array(vec![])))?;
                let action = serde_json::from_value(
                    custom
                        .get("action")
                        .cloned()
                        .ok_or_else(|| Error::Parse("custom algebra missing `action`".into()))?,
                )?;
                FrameAlgebra { name: "custom".into(), brackets, action }
            }
        };
        Ok(Self {
            periods,
            resolution,
            algebra,
            theta: components(get("theta")?, "theta")?,
            z: components(get("z")?, "z")?,
            upsilon: v.get("upsilon").map(Component::from_json).transpose()?,
            mu: v.get("mu").map(Component::from_json).transpose()?,
            tol: v.get("tol").and_then(Value::as_f64).unwrap_or(DEFAULT_CHART_TOL),
        })
    }

    /// Full document accepted by [`ChartSpec::from_json`].
    pub fn to_json(&self) -> Value {
        let algebra = match FrameAlgebra::by_name(&self.algebra.name) {
            Ok(known) if known == self.algebra => Value::String(self.algebra.name.clone()),
            _ => serde_json::json!({"brackets": self.algebra.brackets, "action": self.algebra.action}),
        };
        let mut doc = serde_json::json!({
            "kind": "chart",
            "periods": self.periods,
            "resolution": self.resolution,
            "algebra": algebra,
            "theta": self.theta.iter().map(Component::to_json).collect::<Vec<_>>(),
            "z": self.z.iter().map(Component::to_json).collect::<Vec<_>>(),
            "tol": self.tol,
        });
        if let Some(u) = &self.upsilon {
            doc["upsilon"] = u.to_json();
        }
        if let Some(m) = &self.mu {
            doc["mu"] = m.to_json();
        }
        doc
    }

    pub fn geom(&self) -> GridGeom {
        GridGeom::new(self.resolution, self.periods)
    }

    /// Left-invariant Heisenberg structure: θ = σ², Z = V_0 − iV_1.
    pub fn heisenberg(n: usize, period: f64) -> Self {
        Self {
            periods: [period; 3],
            resolution: [n; 3],
            algebra: FrameAlgebra::heisenberg(),
            theta: [Component::zero(), Component::zero(), Component::Const(Value::from(1))],
            z: [Component::Const(Value::from(1)), Component::Const(serde_json::json!([0, -1])), Component::zero()],
            upsilon: None,
            mu: None,
            tol: DEFAULT_CHART_TOL,
        }
    }
}

fn sum_products<C: Coeff>(pairs: impl IntoIterator<Item = (FieldValue<C>, FieldValue<C>)>) -> FieldValue<C> {
    let mut acc = FieldValue::zero();
    for (a, b) in pairs {
        acc.add_product(&a, &b);
    }
    acc
}

fn conj3<C: Coeff>(x: &Vec3<C>) -> Vec3<C> {
    [x[0].conj(), x[1].conj(), x[2].conj()]
}

/// `α(X)` for a coframe-expanded 1-form and frame-expanded vector.
fn pair<C: Coeff>(alpha: &Vec3<C>, x: &Vec3<C>) -> FieldValue<C> {
    sum_products((0..3).map(|a| (alpha[a].clone(), x[a].clone())))
}

struct Calculus<'a, C: Coeff> {
    algebra: &'a FrameAlgebra,
    geom: GridGeom,
    _c: std::marker::PhantomData<C>,
}

impl<C: Coeff> Calculus<'_, C> {
    fn basis_derivative(&self, a: usize, f: &FieldValue<C>) -> Result<FieldValue<C>> {
        let mut acc = FieldValue::zero();
        for axis in 0..3 {
            let m = self.algebra.action[a][axis];
            if m != 0 && self.geom.shape[axis] > 1 {
                acc.add_assign(&f.coord_derivative(axis)?.scale(&C::from_i64(m)));
            }
        }
        Ok(acc)
    }

    fn apply(&self, x: &Vec3<C>, f: &FieldValue<C>) -> Result<FieldValue<C>> {
        let mut acc = FieldValue::zero();
        for (a, xa) in x.iter().enumerate() {
            if !xa.is_const_zero() {
                acc.add_product(xa, &self.basis_derivative(a, f)?);
            }
        }
        Ok(acc)
    }

    /// `dα(V_a, V_b) = V_a α_b − V_b α_a − c_ab^c α_c`.
    fn exterior(&self, alpha: &Vec3<C>) -> Result<[[FieldValue<C>; 3]; 3]> {
        let mut out: [[FieldValue<C>; 3]; 3] = Default::default();
        for a in 0..3 {
            for b in (a + 1)..3 {
                let mut v = &self.basis_derivative(a, &alpha[b])? - &self.basis_derivative(b, &alpha[a])?;
                for (c, ac) in alpha.iter().enumerate() {
                    let s = self.algebra.structure(a, b, c);
                    if s != 0 {
                        v = &v - &ac.scale(&C::from_i64(s));
                    }
                }
                out[b][a] = v.neg();
                out[a][b] = v;
            }
        }
        Ok(out)
    }

    fn bracket(&self, x: &Vec3<C>, y: &Vec3<C>) -> Result<Vec3<C>> {
        let mut out: Vec3<C> = Default::default();
        for (c, oc) in out.iter_mut().enumerate() {
            let mut v = &self.apply(x, &y[c])? - &self.apply(y, &x[c])?;
            for (a, xa) in x.iter().enumerate() {
                for (b, yb) in y.iter().enumerate() {
                    let s = self.algebra.structure(a, b, c);
                    if s != 0 {
                        v.add_product(xa, &yb.scale(&C::from_i64(s)));
                    }
                }
            }
            *oc = v;
        }
        Ok(out)
    }
}

fn wedge<C: Coeff>(a: &Vec3<C>, b: &Vec3<C>, i: usize, j: usize) -> FieldValue<C> {
    &(&a[i] * &b[j]) - &(&a[j] * &b[i])
}

/// Dual coframe to the frame with rows `x[0], x[1], x[2]`.
fn dual_coframe<C: Coeff>(x: [&Vec3<C>; 3]) -> Result<[Vec3<C>; 3]> {
    let m = |r: usize, c: usize| &x[r][c];
    let cof = |r: usize, c: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        &(m(r1, c1) * m(r2, c2)) - &(m(r1, c2) * m(r2, c1))
    };
    let det = sum_products((0..3).map(|c| (m(0, c).clone(), cof(0, c))));
    let inv_det = det.inv().map_err(|_| Error::Invalid("frame is degenerate".into()))?;
    // η^i_a = (F^{-1})_{a i} = cof(i, a) / det.
    Ok(std::array::from_fn(|i| std::array::from_fn(|a| &cof(i, a) * &inv_det)))
}

fn first_bad_node<C: Coeff>(f: &FieldValue<C>, bad: impl Fn(&C) -> bool) -> Option<usize> {
    match f {
        FieldValue::Const(c) => bad(c).then_some(0),
        FieldValue::Grid { data, .. } => data.iter().position(bad),
    }
}

fn exp_field<C: Coeff>(u: &FieldValue<C>) -> Result<FieldValue<C>> {
    if u.is_const_zero() {
        return Ok(FieldValue::one());
    }
    require_float::<C>("conformal factor e^Υ")?;
    Ok(u.map(|v| C::from_c64(v.to_c64().exp())))
}

/// Builds a unitary-frame background from a chart spec.
pub fn build_background_from_chart<C: Coeff>(spec: &ChartSpec) -> Result<Background<C>> {
    spec.algebra.validate()?;
    let geom = spec.geom();
    let calc = Calculus::<C> { algebra: &spec.algebra, geom, _c: std::marker::PhantomData };
    let exact = C::MODE == Mode::Exact;
    let tol = if exact { 0.0 } else { spec.tol };

    let mut theta: Vec3<C> =
        [spec.theta[0].to_field(geom)?, spec.theta[1].to_field(geom)?, spec.theta[2].to_field(geom)?];
    if let Some(u) = &spec.upsilon {
        let e = exp_field(&u.to_field::<C>(geom)?.real_part())?;
        theta = theta.map(|t| &t * &e);
    }
    let mut z: Vec3<C> = [spec.z[0].to_field(geom)?, spec.z[1].to_field(geom)?, spec.z[2].to_field(geom)?];
    if let Some(mu) = &spec.mu {
        let mu = mu.to_field::<C>(geom)?;
        let zb = conj3(&z);
        z = std::array::from_fn(|a| &z[a] + &(&mu * &zb[a]));
    }

    let tz = pair(&theta, &z);
    if let Some(node) = first_bad_node(&tz, |v| v.magnitude() > tol) {
        return Err(Error::NotTangent { node, value: tz.at(node).magnitude() });
    }
    let dtheta = calc.exterior(&theta)?;
    let v: Vec3<C> = [dtheta[1][2].clone(), dtheta[2][0].clone(), dtheta[0][1].clone()];
    let theta_v = pair(&theta, &v);
    let degenerate = |c: &C| c.magnitude() <= crate::scalar::FLOAT_PIVOT_TOL;
    if let Some(node) = first_bad_node(&theta_v, degenerate) {
        return Err(Error::NotContact(node));
    }
    let zb = conj3(&z);
    let mut h = FieldValue::zero();
    for a in 0..3 {
        for b in 0..3 {
            h.add_product(&dtheta[a][b], &(&z[a] * &zb[b]));
        }
    }
    let h = h.scale(&C::imag_unit().neg());
    let not_positive = |c: &C| {
        let re = c.real_part().to_c64().re;
        let im = c.imag_part().to_c64().re;
        re.is_nan() || re <= crate::scalar::FLOAT_PIVOT_TOL || im.abs() > tol.max(0.0) * re.max(1.0)
    };
    if let Some(node) = first_bad_node(&h, not_positive) {
        return Err(Error::NotPseudoconvex { node, value: format!("{:?}", h.at(node)) });
    }
    let scale = h.real_part().sqrt_positive()?.inv()?;
    let z1: Vec3<C> = z.map(|c| &c * &scale);
    let z1b = conj3(&z1);
    let inv_tv = theta_v.inv()?;
    let t: Vec3<C> = v.map(|c| &c * &inv_tv);

    let [_, theta1, theta1b] = dual_coframe([&t, &z1, &z1b])?;
    let br_11b = calc.bracket(&z1, &z1b)?;
    let br_t1 = calc.bracket(&t, &z1)?;
    let c = pair(&theta1, &br_11b);
    let b = pair(&theta1, &br_t1);
    let a11 = pair(&theta1b, &br_t1).neg();
    let omega_t = b.clone();
    let omega_1 = c.conj();
    let omega_1bar = c.neg();
    let z1c = calc.apply(&z1, &c)?;
    let z1bcb = calc.apply(&z1b, &c.conj())?;
    let mut scal = &(&z1c + &z1bcb).neg() + &b.scale(&C::imag_unit());
    scal = &scal - &(&c * &c.conj()).scale(&C::from_i64(2));

    let frame = GridFrame::new(spec.algebra.clone(), geom, theta, theta1, t, z1, theta_v);
    let label = format!("chart({})", spec.algebra.name);
    let bg = Background::assemble(label, scal.real_part(), a11, [omega_t, omega_1, omega_1bar], Some(frame))?;
    let res = bg.structure_residuals()?;
    for (which, r) in [("contact", res.contact), ("torsion", res.torsion), ("metric", res.metric)] {
        if r > tol {
            return Err(Error::StructureResidual { which, residual: r, tol });
        }
    }
    Ok(bg)
}

pub(super) fn structure_residuals<C: Coeff>(bg: &Background<C>, frame: &GridFrame<C>) -> Result<StructureResiduals> {
    let calc = Calculus::<C> { algebra: &frame.algebra, geom: frame.geom, _c: std::marker::PhantomData };
    let theta1b = conj3(&frame.theta1);
    let dtheta = calc.exterior(&frame.theta)?;
    let dtheta1 = calc.exterior(&frame.theta1)?;
    let omega: Vec3<C> = std::array::from_fn(|a| {
        sum_products([
            (bg.omega_t.clone(), frame.theta[a].clone()),
            (bg.omega_1.clone(), frame.theta1[a].clone()),
            (bg.omega_1bar.clone(), theta1b[a].clone()),
        ])
    });
    let abar = bg.a11.conj();
    let i = C::imag_unit();
    let mut contact: f64 = 0.0;
    let mut torsion: f64 = 0.0;
    for a in 0..3 {
        for b in (a + 1)..3 {
            let r = &dtheta[a][b] - &wedge(&frame.theta1, &theta1b, a, b).scale(&i);
            contact = contact.max(r.max_norm());
            let rhs = &wedge(&frame.theta1, &omega, a, b) + &(&abar * &wedge(&frame.theta, &theta1b, a, b));
            torsion = torsion.max((&dtheta1[a][b] - &rhs).max_norm());
        }
    }
    let metric = (&bg.omega_t + &bg.omega_t.conj()).max_norm().max((&bg.omega_1 + &bg.omega_1bar.conj()).max_norm());
    Ok(StructureResiduals { contact, torsion, metric })
}
