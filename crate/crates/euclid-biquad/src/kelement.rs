//! Exact symbolic arithmetic in the biquadratic field K = Q(√m1, √m2).
//!
//! Elements are stored as rational coordinates in the Q-basis
//! `{1, √m1, √m2, √m3}` where `m3 = m1 m2 / g^2` (g = gcd(m1, m2)) is the
//! squarefree kernel of the product. All products are closed in this basis.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::quadfield::{is_squarefree, squarefree_kernel};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The multiplication table data for Q(√m1, √m2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiquadBasis {
    pub m1: u64,
    pub m2: u64,
    /// Squarefree kernel of `m1 * m2`.
    pub m3: u64,
    /// gcd(m1, m2), so that `√m1 √m2 = g √m3`.
    pub g: u64,
}

impl BiquadBasis {
    pub fn new(m1: u64, m2: u64) -> Result<Self> {
        if m1 == m2 {
            return Err(Error::DegenerateField(m1));
        }
        if m1 < 2 || !is_squarefree(m1) {
            return Err(Error::NotSquarefree(m1));
        }
        if m2 < 2 || !is_squarefree(m2) {
            return Err(Error::NotSquarefree(m2));
        }
        let g = gcd(m1, m2);
        let m3 = squarefree_kernel(m1 * m2);
        debug_assert_eq!(m3, m1 / g * (m2 / g));
        Ok(BiquadBasis { m1, m2, m3, g })
    }

    /// The four real embeddings as sign choices for (√m1, √m2); the sign of
    /// √m3 is the product of the two.
    pub const EMBEDDING_SIGNS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
}

/// An element of K in the basis `{1, √m1, √m2, √m3}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KElement {
    pub basis: BiquadBasis,
    pub coeffs: [Rational; 4],
}

impl KElement {
    pub fn new(basis: BiquadBasis, coeffs: [Rational; 4]) -> Self {
        KElement { basis, coeffs }
    }

    pub fn one(basis: BiquadBasis) -> Self {
        KElement::new(
            basis,
            [Rational::from(1), Rational::new(), Rational::new(), Rational::new()],
        )
    }

    /// Embeds a subfield element `(x + y √m_i) / den` into K.
    /// `which` selects the radicand: 0 -> √m1, 1 -> √m2, 2 -> √m3.
    pub fn from_subfield(
        basis: BiquadBasis,
        which: usize,
        x: Rational,
        y: Rational,
    ) -> Self {
        let mut coeffs = [Rational::new(), Rational::new(), Rational::new(), Rational::new()];
        coeffs[0] = x;
        coeffs[which + 1] = y;
        KElement::new(basis, coeffs)
    }

    pub fn mul(&self, other: &KElement) -> KElement {
        assert_eq!(self.basis, other.basis);
        let b = &self.basis;
        let c = &self.coeffs;
        let d = &other.coeffs;
        let (m1, m2, m3, g) = (b.m1, b.m2, b.m3, b.g);
        let e0 = Rational::from(&c[0] * &d[0])
            + Rational::from(&c[1] * &d[1]) * m1
            + Rational::from(&c[2] * &d[2]) * m2
            + Rational::from(&c[3] * &d[3]) * m3;
        // √m2 √m3 = (m2/g) √m1,  √m1 √m3 = (m1/g) √m2,  √m1 √m2 = g √m3
        let e1 = Rational::from(&c[0] * &d[1])
            + Rational::from(&c[1] * &d[0])
            + (Rational::from(&c[2] * &d[3]) + Rational::from(&c[3] * &d[2])) * (m2 / g);
        let e2 = Rational::from(&c[0] * &d[2])
            + Rational::from(&c[2] * &d[0])
            + (Rational::from(&c[1] * &d[3]) + Rational::from(&c[3] * &d[1])) * (m1 / g);
        let e3 = Rational::from(&c[0] * &d[3])
            + Rational::from(&c[3] * &d[0])
            + (Rational::from(&c[1] * &d[2]) + Rational::from(&c[2] * &d[1])) * g;
        KElement::new(*b, [e0, e1, e2, e3])
    }

    pub fn square(&self) -> KElement {
        self.mul(self)
    }

    /// Numeric image under the embedding sending `√m1 -> s1 √m1`,
    /// `√m2 -> s2 √m2` (and hence `√m3 -> s1 s2 √m3`).
    pub fn embed(&self, s1: i8, s2: i8, prec: u32) -> Float {
        let b = &self.basis;
        let roots = [
            Float::with_val(prec, 1u32),
            Float::with_val(prec, b.m1).sqrt() * s1,
            Float::with_val(prec, b.m2).sqrt() * s2,
            Float::with_val(prec, b.m3).sqrt() * (s1 * s2),
        ];
        let mut acc = Float::with_val(prec, 0);
        for (c, r) in self.coeffs.iter().zip(roots) {
            acc += Float::with_val(prec, c) * r;
        }
        acc
    }

    /// Largest absolute numerator/denominator bit length over all coordinates.
    pub fn coeff_bits(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|c| c.numer().significant_bits().max(c.denom().significant_bits()))
            .max()
            .unwrap_or(0)
    }
}
