//! Background specifications: built-in names and JSON documents.
//!
//! Constant backgrounds are homogeneous models whose jets follow from the
//! structure constants; an optional jet table is checked against them.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::{build_background_from_chart, parse_word, Background, ChartSpec, Component, IndexedField};
use crate::error::{Error, Result};
use crate::scalar::{Coeff, Mode};

/// Parsed background description.
#[derive(Clone, Debug, PartialEq)]
pub enum BackgroundSpec {
    Constant {
        scal: Value,
        a11: Value,
        /// Covariant-derivative jets keyed `"<symbol>,<word>"` with symbol
        /// `Scal`, `A11` or `A1b1b` and word over `0`, `1`, `b`.
        jets: serde_json::Map<String, Value>,
        depth: Option<usize>,
    },
    Chart(Box<ChartSpec>),
}

/// Default grid size per axis for the deformed Heisenberg built-in.
pub const DEFORMED_RESOLUTION: usize = 16;

/// Tolerance for float comparisons of user-supplied jets.
const JET_TOL: f64 = 1e-10;

impl BackgroundSpec {
    /// Resolves a built-in name (`heisenberg`, `constant-scal:<s>`,
    /// `constant:<s>:<a>`, `heisenberg-chart[:<n>]`, `e2-chart`,
    /// `heisenberg-deformed:<eps>[:<n>]`) or parses a JSON document.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return Self::from_json(&serde_json::from_str(t)?);
        }
        let (name, arg) = t.split_once(':').map_or((t, None), |(a, b)| (a, Some(b)));
        let need_arg = || arg.ok_or_else(|| Error::Parse(format!("built-in `{name}` needs an argument")));
        match name {
            "heisenberg" => Ok(Self::constant_str("0", "0")),
            "constant-scal" => Ok(Self::constant_str(need_arg()?, "0")),
            "constant" => {
                let (s, a) = need_arg()?
                    .split_once(':')
                    .ok_or_else(|| Error::Parse("expected constant:<scal>:<a11>, a11 as re or re+im*i".into()))?;
                let (re, im) = split_complex(a)?;
                Ok(Self::Constant {
                    scal: Value::String(s.into()),
                    a11: json!([re, im]),
                    jets: Default::default(),
                    depth: None,
                })
            }
            "heisenberg-chart" => {
                let n = match arg {
                    Some(n) => n.parse().map_err(|_| Error::Parse(format!("bad resolution `{t}`")))?,
                    None => 1,
                };
                Ok(Self::Chart(Box::new(ChartSpec::heisenberg(n, std::f64::consts::TAU))))
            }
            "e2-chart" => Ok(Self::Chart(Box::new(euclidean_chart()))),
            "heisenberg-deformed" => {
                let arg = need_arg()?;
                let (eps, n) = arg.split_once(':').map_or((arg, None), |(a, b)| (a, Some(b)));
                let eps: f64 = eps.parse().map_err(|_| Error::Parse(format!("bad amplitude `{t}`")))?;
                let n: usize = match n {
                    Some(n) => n.parse().map_err(|_| Error::Parse(format!("bad resolution `{t}`")))?,
                    None => DEFORMED_RESOLUTION,
                };
                Ok(Self::Chart(Box::new(deformed_heisenberg(eps, n))))
            }
            other => Err(Error::Parse(format!("unknown background `{other}`"))),
        }
    }

    fn constant_str(scal: &str, a11: &str) -> Self {
        Self::Constant {
            scal: Value::String(scal.into()),
            a11: Value::String(a11.into()),
            jets: Default::default(),
            depth: None,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v.get("kind").and_then(Value::as_str) {
            Some("constant") => Ok(Self::Constant {
                scal: v.get("scal").cloned().unwrap_or(Value::from(0)),
                a11: v.get("a11").cloned().unwrap_or(Value::from(0)),
                jets: match v.get("jets") {
                    None | Some(Value::Null) => Default::default(),
                    Some(Value::Object(m)) => m.clone(),
                    Some(other) => return Err(Error::Parse(format!("`jets` must be an object, found {other}"))),
                },
                depth: v.get("depth").and_then(Value::as_u64).map(|d| d as usize),
            }),
            Some("chart") => Ok(Self::Chart(Box::new(ChartSpec::from_json(v)?))),
            Some("builtin") => Self::parse(
                v.get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse("builtin spec needs `name`".into()))?,
            ),
            _ => Err(Error::Parse("background spec needs \"kind\": \"constant\" or \"chart\"".into())),
        }
    }

    /// Whether every datum is constant, so exact arithmetic is possible.
    pub fn supports_exact(&self) -> bool {
        match self {
            Self::Constant { .. } => true,
            Self::Chart(c) => {
                let all = c.theta.iter().chain(c.z.iter()).chain(c.upsilon.iter()).chain(c.mu.iter());
                all.into_iter().all(|x| matches!(x, Component::Const(_)))
            }
        }
    }

    /// Canonical JSON form, reloadable by [`BackgroundSpec::from_json`].
    pub fn to_json(&self, source: &str) -> Value {
        match self {
            Self::Constant { scal, a11, jets, depth } => json!({
                "kind": "constant", "scal": scal, "a11": a11, "jets": jets, "depth": depth, "source": source,
            }),
            Self::Chart(c) => {
                let mut doc = c.to_json();
                doc["source"] = Value::String(source.into());
                doc
            }
        }
    }

    pub fn build<C: Coeff>(&self, label: &str) -> Result<Background<C>> {
        let mut bg = match self {
            Self::Constant { scal, a11, jets, .. } => {
                let s = C::from_json(scal)?;
                if !s.imag_part().is_zero() {
                    return Err(Error::Invalid("scalar curvature must be real".into()));
                }
                let bg = Background::constant_labeled(label, s, C::from_json(a11)?)?;
                check_jets(&bg, jets)?;
                bg
            }
            Self::Chart(c) => {
                let mut bg = build_background_from_chart::<C>(c)?;
                bg.label = label.into();
                bg
            }
        };
        bg.spec = Some(self.to_json(label));
        Ok(bg)
    }
}

fn split_complex(s: &str) -> Result<(String, String)> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        let cut = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
        return Ok(match cut {
            Some(i) => (body[..i].into(), body[i..].trim_start_matches('+').into()),
            None => ("0".into(), if body.is_empty() { "1".into() } else { body.into() }),
        });
    }
    Ok((s.into(), "0".into()))
}

/// Compares user-supplied jets with the values implied by the structure.
fn check_jets<C: Coeff>(bg: &Background<C>, jets: &serde_json::Map<String, Value>) -> Result<()> {
    for (key, val) in jets {
        let (symbol, word) = key.split_once(',').unwrap_or((key.as_str(), ""));
        let base = match symbol {
            "Scal" => IndexedField::scalar(bg.scal.clone()),
            "A11" => bg.torsion_field(),
            "A1b1b" => bg.torsion_field().conj(),
            other => return Err(Error::Parse(format!("unknown jet symbol `{other}`"))),
        };
        let found = C::from_json(val)?;
        let expected = bg.tw_derivatives(&base, &parse_word(word)?)?.value;
        let expected = expected.as_const().cloned().unwrap_or_else(C::zero);
        let agree = match C::MODE {
            Mode::Exact => expected == found,
            Mode::Float => expected.sub(&found).magnitude() <= JET_TOL * expected.magnitude().max(1.0),
        };
        if !agree {
            return Err(Error::JetMismatch {
                key: key.clone(),
                expected: format!("{expected:?}"),
                found: format!("{found:?}"),
            });
        }
    }
    Ok(())
}

/// Left-invariant structure on the Euclidean motion group: θ = σ⁰,
/// Z = (V_2 − iV_1)/√2.
pub fn euclidean_chart() -> ChartSpec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ChartSpec {
        periods: [1.0, 1.0, std::f64::consts::TAU],
        resolution: [1, 1, 1],
        algebra: super::FrameAlgebra::euclidean(),
        theta: [Component::Const(json!(1)), Component::zero(), Component::zero()],
        z: [Component::zero(), Component::Const(json!([0.0, -s])), Component::Const(json!(s))],
        upsilon: None,
        mu: None,
        tol: super::chart::DEFAULT_CHART_TOL,
    }
}

/// Heisenberg structure with a periodic conformal factor and a periodic
/// deformation `Z ← Z + μZ̄` of amplitude `eps`, on an `n³` grid of period 2π.
/// The data also varies along the central direction, which the frame does not
/// differentiate, so each slice is an independent two-variable family.
pub fn deformed_heisenberg(eps: f64, n: usize) -> ChartSpec {
    let mut spec = ChartSpec::heisenberg(n, std::f64::consts::TAU);
    let c = |re: f64, im: f64| Complex64::new(eps * re, eps * im);
    spec.upsilon = Some(Component::Fourier(vec![
        (c(0.5, 0.0), [1, 0, 0]),
        (c(0.5, 0.0), [-1, 0, 0]),
        (c(0.0, -0.25), [0, 1, 1]),
        (c(0.0, 0.25), [0, -1, -1]),
    ]));
    spec.mu =
        Some(Component::Fourier(vec![(c(0.5, 0.0), [1, 0, 0]), (c(0.0, 0.3), [0, -1, 0]), (c(0.2, 0.1), [1, 1, 1])]));
    spec
}
