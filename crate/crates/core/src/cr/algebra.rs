//! Frame algebras: a basis of vector fields `V_a` with constant structure
//! constants, acting on grid functions through constant-coefficient
//! coordinate derivatives.
//!
//! The plain coordinate chart is the abelian algebra with `V_a = ∂_a`. Lie
//! algebras of homogeneous models act on a function class where the derived
//! algebra acts trivially (e.g. the Heisenberg algebra on functions
//! independent of the central direction), so left-invariant structures can be
//! perturbed by periodic data without non-constant frame coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameAlgebra {
    pub name: String,
    /// Nonzero structure constants `[V_a, V_b] = value · V_c`, listed once with `a < b`.
    pub brackets: Vec<(usize, usize, usize, i64)>,
    /// `V_a = Σ_b action[a][b] ∂_b` on grid functions.
    pub action: [[i64; 3]; 3],
}

impl FrameAlgebra {
    /// Coordinate vector fields.
    pub fn abelian() -> Self {
        Self { name: "abelian".into(), brackets: vec![], action: [[1, 0, 0], [0, 1, 0], [0, 0, 1]] }
    }

    /// `[V_0, V_1] = −2 V_2`, acting on functions of the first two coordinates.
    pub fn heisenberg() -> Self {
        Self { name: "heisenberg".into(), brackets: vec![(0, 1, 2, -2)], action: [[1, 0, 0], [0, 1, 0], [0, 0, 0]] }
    }

    /// Euclidean motions of the plane, `[V_0, V_2] = −V_1`, `[V_1, V_2] = V_0`,
    /// acting on functions of the rotation angle (third coordinate).
    pub fn euclidean() -> Self {
        Self {
            name: "e2".into(),
            brackets: vec![(0, 2, 1, -1), (1, 2, 0, 1)],
            action: [[0, 0, 0], [0, 0, 0], [0, 0, 1]],
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "abelian" | "coordinates" => Ok(Self::abelian()),
            "heisenberg" => Ok(Self::heisenberg()),
            "e2" => Ok(Self::euclidean()),
            other => Err(Error::Invalid(format!("unknown frame algebra `{other}`"))),
        }
    }

    /// Structure constant `c_ab^c`.
    pub fn structure(&self, a: usize, b: usize, c: usize) -> i64 {
        self.brackets
            .iter()
            .map(|&(x, y, z, v)| {
                if z != c {
                    0
                } else if (x, y) == (a, b) {
                    v
                } else if (x, y) == (b, a) {
                    -v
                } else {
                    0
                }
            })
            .sum()
    }

    /// Checks the Jacobi identity and that brackets act as their
    /// constant-coefficient representatives (which commute).
    pub fn validate(&self) -> Result<()> {
        for &(a, b, c, _) in &self.brackets {
            if a >= 3 || b >= 3 || c >= 3 || a == b {
                return Err(Error::Invalid(format!("bad bracket entry ({a}, {b}, {c})")));
            }
        }
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for e in 0..3 {
                        let jac: i64 = (0..3)
                            .map(|d| {
                                self.structure(a, b, d) * self.structure(d, c, e)
                                    + self.structure(b, c, d) * self.structure(d, a, e)
                                    + self.structure(c, a, d) * self.structure(d, b, e)
                            })
                            .sum();
                        if jac != 0 {
                            return Err(Error::Invalid(format!("frame algebra `{}` violates Jacobi", self.name)));
                        }
                    }
                }
                for axis in 0..3 {
                    let img: i64 = (0..3).map(|c| self.structure(a, b, c) * self.action[c][axis]).sum();
                    if img != 0 {
                        return Err(Error::Invalid(format!(
                            "frame algebra `{}`: bracket [V{a}, V{b}] does not act trivially",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
