//! Θ-tensors: arrays over index words with series entries.
//!
//! [`Dense`] is the working representation (flat, every word present).
//! [`ThetaTensor`] is the public one: one stored representative per
//! conjugation orbit, so reality is structural.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::index::{conj_code, conj_word, decode, encode, is_canonical, word_string, Ix};
use crate::error::Result;
use crate::scalar::Coeff;
use crate::series::JetSeries;

/// Flat array of `4^rank` series indexed by [`encode`].
#[derive(Clone, Debug, PartialEq)]
pub struct Dense<C: Coeff> {
    pub rank: usize,
    pub order: usize,
    comps: Vec<JetSeries<C>>,
}

impl<C: Coeff> Dense<C> {
    pub fn zeros(rank: usize, order: usize) -> Self {
        Self { rank, order, comps: vec![JetSeries::zero(order); 1 << (2 * rank)] }
    }

    /// Evaluates `f` on canonical words and fills the rest by conjugation
    /// (the tensor is real).
    pub fn build(rank: usize, order: usize, mut f: impl FnMut(&[Ix]) -> Result<JetSeries<C>>) -> Result<Self> {
        let mut t = Self::zeros(rank, order);
        let n = t.comps.len();
        for code in 0..n {
            let w = decode(code, rank);
            if is_canonical(&w) {
                t.comps[code] = f(&w)?;
            }
        }
        t.fill_conjugates();
        Ok(t)
    }

    /// Like [`Dense::build`] for a tensor antisymmetric in slots `p < q`:
    /// `f` is only called with `w[p] < w[q]`.
    pub fn build_antisym(
        rank: usize,
        order: usize,
        (p, q): (usize, usize),
        mut f: impl FnMut(&[Ix]) -> Result<JetSeries<C>>,
    ) -> Result<Self> {
        let mut t = Self::zeros(rank, order);
        for code in 0..t.comps.len() {
            let w = decode(code, rank);
            if w[p] >= w[q] {
                continue;
            }
            let mut sw = w.clone();
            sw.swap(p, q);
            if is_canonical(&w) || is_canonical(&sw) {
                let s = f(&w)?;
                t.comps[encode(&sw)] = s.neg();
                t.comps[code] = s;
            }
        }
        t.fill_conjugates();
        Ok(t)
    }

    /// Overwrites non-canonical entries with conjugates of their representatives.
    pub fn fill_conjugates(&mut self) {
        for code in 0..self.comps.len() {
            let w = decode(code, self.rank);
            if !is_canonical(&w) {
                self.comps[code] = self.comps[conj_code(code, self.rank)].conj();
            }
        }
    }

    pub fn get(&self, w: &[Ix]) -> &JetSeries<C> {
        debug_assert_eq!(w.len(), self.rank);
        &self.comps[encode(w)]
    }

    pub fn at(&self, code: usize) -> &JetSeries<C> {
        &self.comps[code]
    }

    pub fn set(&mut self, w: &[Ix], s: JetSeries<C>) {
        let c = encode(w);
        self.comps[c] = s;
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<Ix>, &JetSeries<C>)> {
        self.comps.iter().enumerate().map(move |(c, s)| (decode(c, self.rank), s))
    }

    /// Largest coefficient modulus at order `k` over all components.
    pub fn max_norm_at(&self, k: usize) -> f64 {
        self.comps.iter().map(|s| if k <= s.order() { s.coeff(k).max_norm() } else { 0.0 }).fold(0.0, f64::max)
    }
}

/// Slot variance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Lower,
    Upper,
}

/// Public Θ-tensor with conjugation-orbit storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaTensor<C: Coeff> {
    pub variance: Vec<Variance>,
    pub order: usize,
    orbits: BTreeMap<Vec<Ix>, JetSeries<C>>,
}

impl<C: Coeff> ThetaTensor<C> {
    pub fn from_dense(variance: Vec<Variance>, d: &Dense<C>) -> Self {
        assert_eq!(variance.len(), d.rank, "variance must match the rank");
        let orbits = d.iter().filter(|(w, _)| is_canonical(w)).map(|(w, s)| (w, s.clone())).collect();
        Self { variance, order: d.order, orbits }
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    /// Component at any word (conjugating the stored representative if needed).
    pub fn get(&self, w: &[Ix]) -> JetSeries<C> {
        assert_eq!(w.len(), self.rank(), "word length must match the rank");
        if is_canonical(w) {
            self.orbits[w].clone()
        } else {
            self.orbits[&conj_word(w)].conj()
        }
    }

    /// Number of stored representatives.
    pub fn stored(&self) -> usize {
        self.orbits.len()
    }

    pub fn to_dense(&self) -> Dense<C> {
        let mut d = Dense::zeros(self.rank(), self.order);
        for (w, s) in &self.orbits {
            d.set(w, s.clone());
        }
        d.fill_conjugates();
        d
    }

    /// `{indices, truncation, components: {word: [[re, im] per order]}}`;
    /// grid coefficients are reported by their max-norm.
    pub fn to_json(&self) -> Value {
        let indices: Vec<&str> =
            self.variance.iter().map(|v| if *v == Variance::Lower { "lower" } else { "upper" }).collect();
        let mut comps = serde_json::Map::new();
        for (w, s) in &self.orbits {
            let coeffs: Vec<Value> = s
                .coeffs()
                .iter()
                .map(|c| match c.as_const() {
                    Some(v) => v.to_json(),
                    None => json!({ "max_norm": c.max_norm() }),
                })
                .collect();
            comps.insert(word_string(w), Value::Array(coeffs));
        }
        json!({ "indices": indices, "truncation": self.order, "components": comps })
    }
}
