//! Order-m linearization of the Einstein and anti-self-dual Weyl equations in
//! the metric perturbation `ψ = (ψ_00, ψ_11̄, ψ_01, ψ_11) ρ^m`.

use crate::scalar::{Coeff, ExactComplex};

/// Rows of the variation map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariationRow {
    EInfInf,
    E00,
    E11Bar,
    EInf1,
    E01,
    E11,
    WInf1Inf1,
    WInf0Inf0,
}

impl VariationRow {
    pub const ALL: [VariationRow; 8] = [
        VariationRow::EInfInf,
        VariationRow::E00,
        VariationRow::E11Bar,
        VariationRow::EInf1,
        VariationRow::E01,
        VariationRow::E11,
        VariationRow::WInf1Inf1,
        VariationRow::WInf0Inf0,
    ];

    /// Θ-frame word of the component (`i` = ∞, `b` = 1̄).
    pub fn word(self) -> &'static str {
        match self {
            VariationRow::EInfInf => "ii",
            VariationRow::E00 => "00",
            VariationRow::E11Bar => "1b",
            VariationRow::EInf1 => "i1",
            VariationRow::E01 => "01",
            VariationRow::E11 => "11",
            VariationRow::WInf1Inf1 => "i1i1",
            VariationRow::WInf0Inf0 => "i0i0",
        }
    }
}

/// Columns: `(ψ_00, ψ_11̄, ψ_01, ψ_11)`.
pub const COLUMNS: [&str; 4] = ["psi00", "psi11bar", "psi01", "psi11"];

/// Exact coefficient matrix of the order-m variations.
#[derive(Clone, Debug, PartialEq)]
pub struct VariationMatrix {
    pub m: i64,
    pub rows: [[ExactComplex; 4]; 8],
}

impl VariationMatrix {
    pub fn row(&self, r: VariationRow) -> &[ExactComplex; 4] {
        &self.rows[r as usize]
    }

    /// Determinant of the `(E_00, E_11̄)` block in `(ψ_00, ψ_11̄)`.
    pub fn block_determinant(&self) -> ExactComplex {
        let a = self.row(VariationRow::E00);
        let b = self.row(VariationRow::E11Bar);
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0]))
    }

    /// The 2×2 block of two rows in `(ψ_00, ψ_11̄)`, converted to `C`.
    pub fn block<C: Coeff>(&self, r1: VariationRow, r2: VariationRow) -> [[C; 2]; 2] {
        let a = self.row(r1);
        let b = self.row(r2);
        [[C::from_exact(&a[0]), C::from_exact(&a[1])], [C::from_exact(&b[0]), C::from_exact(&b[1])]]
    }
}

/// `m ↦` coefficients of `δE_∞∞, δE_00, δE_11̄, δE_∞1, δE_01, δE_11,
/// δW^-_∞1∞1, δW^-_∞0∞0` in `ψ`. (`δE_∞0 = 0` identically.)
pub fn variation_matrix(m: i64) -> VariationMatrix {
    let r = |n: i64, d: i64| ExactComplex::ratio(n, d);
    let i = |n: i64, d: i64| ExactComplex::from_ratios((0, 1), (n, d));
    let z = ExactComplex::zero;
    let rows = [
        [r(-m * (m - 4), 2), r(-m * (m - 2), 1), z(), z()],
        [r(-(m * m - 6 * m - 4), 8), r(m - 2, 2), z(), z()],
        [r(m - 4, 8), r(-(m * m - 6 * m - 8), 8), z(), z()],
        [z(), z(), i(-(m + 1), 2), z()],
        [z(), z(), r(-(m + 1) * (m - 5), 8), z()],
        [z(), z(), z(), r(-m * (m - 4), 8)],
        [z(), z(), z(), r(m * m - 2 * m, 8)],
        [r(m * m + 3 * m + 2, 12), r(-(m * m + 4 * m + 4), 12), z(), z()],
    ];
    VariationMatrix { m, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_determinant_factorizes() {
        for m in -3..30i64 {
            let d = variation_matrix(m).block_determinant();
            assert_eq!(d, ExactComplex::ratio(m * (m + 2) * (m - 6) * (m - 8), 64), "m = {m}");
        }
        assert_eq!(variation_matrix(2).block_determinant(), ExactComplex::ratio(3, 1));
        assert!(variation_matrix(6).block_determinant().is_zero());
        assert!(variation_matrix(8).block_determinant().is_zero());
    }

    #[test]
    fn special_orders() {
        let v4 = variation_matrix(4);
        assert!(v4.row(VariationRow::E11)[3].is_zero());
        assert_eq!(v4.row(VariationRow::WInf1Inf1)[3], ExactComplex::one());
        let v6 = variation_matrix(6);
        assert_eq!(v6.row(VariationRow::EInfInf)[..2], [ExactComplex::ratio(-6, 1), ExactComplex::ratio(-24, 1)]);
        assert_eq!(v6.row(VariationRow::WInf0Inf0)[..2], [ExactComplex::ratio(14, 3), ExactComplex::ratio(-16, 3)]);
    }
}
