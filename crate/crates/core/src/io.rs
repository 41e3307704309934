//! JSON and CSV forms of solve results. Exact scalars are written as
//! `"p/q"` strings, so a reloaded result is bit-identical.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FieldValue;
use crate::scalar::{Coeff, Mode};
use crate::series::JetSeries;
use crate::solver::{ResidualEntry, SolveResult};
use crate::theta::MetricAnsatz;

fn series_to_json<C: Coeff>(s: &JetSeries<C>) -> Value {
    Value::Array(s.coeffs().iter().map(FieldValue::to_json).collect())
}

fn series_from_json<C: Coeff>(v: Option<&Value>, name: &str) -> Result<JetSeries<C>> {
    let list = v.and_then(Value::as_array).ok_or_else(|| Error::Parse(format!("coefficients missing `{name}`")))?;
    Ok(JetSeries::from_coeffs(list.iter().map(FieldValue::from_json).collect::<Result<_>>()?))
}

fn floats(v: Option<&Value>, name: &str) -> Result<Vec<f64>> {
    serde_json::from_value(v.cloned().ok_or_else(|| Error::Parse(format!("result missing `{name}`")))?)
        .map_err(Error::from)
}

impl<C: Coeff> SolveResult<C> {
    pub fn to_json(&self) -> Value {
        let coefficients: serde_json::Map<String, Value> =
            self.ansatz.named().iter().map(|(name, s)| (name.to_string(), series_to_json(s))).collect();
        json!({
            "lambda": self.lambda.to_json(),
            "order": self.order,
            "mode": self.mode,
            "background": self.background,
            "background_spec": self.background_spec,
            "coefficients": coefficients,
            "eta": self.eta.to_json(),
            "obstruction": self.obstruction.to_json(),
            "residuals": self.residuals,
            "einstein_orders": self.einstein_orders,
            "weyl_orders": self.weyl_orders,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("result missing `{k}`")));
        let mode: Mode = serde_json::from_value(get("mode")?.clone())?;
        if mode != C::MODE {
            return Err(Error::Invalid(format!("result was written in {mode} mode, reading in {} mode", C::MODE)));
        }
        let coeffs = get("coefficients")?;
        let ansatz = MetricAnsatz {
            phi00: series_from_json(coeffs.get("g00"), "g00")?,
            phi01: series_from_json(coeffs.get("g01"), "g01")?,
            phi11: series_from_json(coeffs.get("g11"), "g11")?,
            phi11bar: series_from_json(coeffs.get("g11bar"), "g11bar")?,
        };
        ansatz.validate()?;
        let order = get("order")?.as_u64().ok_or_else(|| Error::Parse("`order` must be an integer".into()))? as usize;
        if ansatz.order() != order {
            return Err(Error::Parse(format!("coefficients have order {}, header says {order}", ansatz.order())));
        }
        Ok(Self {
            lambda: C::from_json(get("lambda")?)?,
            order,
            mode,
            background: get("background")?.as_str().unwrap_or_default().to_string(),
            background_spec: v.get("background_spec").filter(|s| !s.is_null()).cloned(),
            ansatz,
            eta: FieldValue::from_json(get("eta")?)?,
            obstruction: FieldValue::from_json(get("obstruction")?)?,
            residuals: serde_json::from_value(get("residuals")?.clone())?,
            einstein_orders: floats(v.get("einstein_orders"), "einstein_orders")?,
            weyl_orders: floats(v.get("weyl_orders"), "weyl_orders")?,
        })
    }
}

/// Flat residual table: `order,component,kind,max_norm,relative`.
pub fn residuals_csv(entries: &[ResidualEntry]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in entries {
        w.serialize(e).map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("csv: {e}")))
}
