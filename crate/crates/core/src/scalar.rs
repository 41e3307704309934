//! Coefficient fields for the series engine.
//!
//! Two modes share one interface: [`ExactComplex`] (complex numbers with
//! arbitrary-precision rational parts, compared with `==`) and
//! [`Complex64`] (double precision, compared against a tolerance).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arithmetic mode tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Magnitude below which a float leading coefficient is treated as zero.
pub const FLOAT_PIVOT_TOL: f64 = 1e-12;

/// A complex coefficient field.
///
/// Arithmetic takes references because exact coefficients are heap values.
pub trait Coeff: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    fn from_i64(n: i64) -> Self {
        Self::ratio(n, 1)
    }
    /// Structural zero test (exact equality, also in float mode).
    fn is_zero(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }
    fn conj(&self) -> Self;
    fn real_part(&self) -> Self;
    /// Imaginary part, returned as a real element.
    fn imag_part(&self) -> Self;

    /// Multiplicative inverse; `None` when the value is (numerically) zero.
    fn inv(&self) -> Option<Self>;
    /// Positive square root of a positive real value.
    fn sqrt_positive(&self) -> Option<Self>;

    fn to_c64(&self) -> Complex64;
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    /// Lossy import from a double; exact mode recovers the rational value of
    /// the binary float.
    fn from_c64(z: Complex64) -> Self;
    /// Import of an exact value (lossy in float mode).
    fn from_exact(z: &ExactComplex) -> Self;

    /// Serializes as `[re, im]`; exact values become `"p/q"` strings.
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self>;

    /// Spectral derivative of periodic samples along `axis`. Only available in
    /// float mode.
    fn spectral_diff(_data: &[Self], _shape: [usize; 3], _axis: usize, _period: f64) -> Option<Vec<Self>> {
        None
    }

    /// Numerically zero with respect to `tol` (exact mode ignores `tol`).
    fn is_negligible(&self, tol: f64) -> bool {
        match Self::MODE {
            Mode::Exact => self.is_zero(),
            Mode::Float => self.magnitude() <= tol,
        }
    }
}

/// A complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        Self { re: rat(re.0, re.1), im: rat(im.0, im.1) }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -self.im.clone())
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal (`"-0.125"`) exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int_val =
            if int_digits.is_empty() { BigInt::zero() } else { BigInt::from_str(int_digits).map_err(|_| bad())? };
        let frac_val = if frac.is_empty() { BigInt::zero() } else { BigInt::from_str(frac).map_err(|_| bad())? };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = BigRational::new(int_val * &scale + frac_val, scale);
        return Ok(if neg { -mag } else { mag });
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad())
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn json_rational(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                // A JSON float literal: read its decimal text exactly.
                parse_rational(&n.to_string())
            }
        }
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

fn json_pair(v: &serde_json::Value) -> Result<(&serde_json::Value, Option<&serde_json::Value>)> {
    match v {
        serde_json::Value::Array(a) if a.len() == 2 => Ok((&a[0], Some(&a[1]))),
        serde_json::Value::Array(a) if a.len() == 1 => Ok((&a[0], None)),
        serde_json::Value::String(_) | serde_json::Value::Number(_) => Ok((v, None)),
        other => Err(Error::Parse(format!("expected [re, im], found {other}"))),
    }
}

impl Coeff for ExactComplex {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn one() -> Self {
        Self::real(BigRational::one())
    }
    fn imag_unit() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }
    fn ratio(num: i64, den: i64) -> Self {
        Self::real(rat(num, den))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        let re = if o.re.is_zero() { self.re.clone() } else { &self.re + &o.re };
        let im = if o.im.is_zero() { self.im.clone() } else { &self.im + &o.im };
        Self { re, im }
    }
    fn sub(&self, o: &Self) -> Self {
        let re = if o.re.is_zero() { self.re.clone() } else { &self.re - &o.re };
        let im = if o.im.is_zero() { self.im.clone() } else { &self.im - &o.im };
        Self { re, im }
    }
    fn mul(&self, o: &Self) -> Self {
        let zero = BigRational::zero;
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => Self::real(&self.re * &o.re),
            (true, false) => Self { re: if o.re.is_zero() { zero() } else { &self.re * &o.re }, im: &self.re * &o.im },
            (false, true) => {
                Self { re: if self.re.is_zero() { zero() } else { &self.re * &o.re }, im: &self.im * &o.re }
            }
            (false, false) => {
                if self.re.is_zero() && o.re.is_zero() {
                    return Self::real(-(&self.im * &o.im));
                }
                Self { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
            }
        }
    }
    fn neg(&self) -> Self {
        Self { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn add_assign(&mut self, o: &Self) {
        if !o.re.is_zero() {
            self.re += &o.re;
        }
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
    fn real_part(&self) -> Self {
        Self::real(self.re.clone())
    }
    fn imag_part(&self) -> Self {
        Self::real(self.im.clone())
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(self.re.recip()));
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }
    fn sqrt_positive(&self) -> Option<Self> {
        if !self.im.is_zero() || !self.re.is_positive() {
            return None;
        }
        let n = self.re.numer().sqrt();
        let d = self.re.denom().sqrt();
        if &(&n * &n) == self.re.numer() && &(&d * &d) == self.re.denom() {
            Some(Self::real(BigRational::new(n, d)))
        } else {
            None
        }
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
    fn from_c64(z: Complex64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Self { re: conv(z.re), im: conv(z.im) }
    }
    fn from_exact(z: &ExactComplex) -> Self {
        z.clone()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([format_rational(&self.re), format_rational(&self.im)])
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        let (re, im) = json_pair(v)?;
        Ok(Self { re: json_rational(re)?, im: im.map(json_rational).transpose()?.unwrap_or_else(BigRational::zero) })
    }
}

impl Coeff for Complex64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn real_part(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }
    fn imag_part(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.norm() <= FLOAT_PIVOT_TOL {
            None
        } else {
            Some(Complex64::inv(self))
        }
    }
    fn sqrt_positive(&self) -> Option<Self> {
        if self.re > FLOAT_PIVOT_TOL && self.im.abs() <= 1e-9 * self.re {
            Some(Complex64::new(self.re.sqrt(), 0.0))
        } else {
            None
        }
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn from_exact(z: &ExactComplex) -> Self {
        z.to_c64()
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.re, self.im])
    }
    fn from_json(v: &serde_json::Value) -> Result<Self> {
        let (re, im) = json_pair(v)?;
        let num = |x: &serde_json::Value| -> Result<f64> {
            match x {
                serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
                serde_json::Value::String(s) => parse_rational(s)?.to_f64().ok_or_else(|| Error::Parse(s.clone())),
                other => Err(Error::Parse(format!("expected a number, found {other}"))),
            }
        };
        Ok(Complex64::new(num(re)?, im.map(num).transpose()?.unwrap_or(0.0)))
    }
    fn spectral_diff(data: &[Self], shape: [usize; 3], axis: usize, period: f64) -> Option<Vec<Self>> {
        Some(crate::spectral::diff_axis(data, shape, axis, period))
    }
}
