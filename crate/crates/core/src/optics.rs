//! Two-mode transfer-matrix algebra for lossless interferometric elements.
//!
//! Fields are column vectors over the two interferometer paths. The canonical
//! port order is `[signal, idler]`: the signal occupies the upper path and the
//! idler the lower one. The first-MZI phase `[ζ]`, written in the literature as
//! `diag(e^{iζ}, 1)` acting on `[E_I, E_S]`, therefore becomes
//! [`phase_lower`] in this ordering, and the coupled-MZI matrix is
//!
//! ```text
//! coupled_mzi_matrix(ζ', φ) = BS · phase_lower(φ) · BS · phase_lower(ζ')
//! ```
//!
//! exactly, with no residual global phase.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex field amplitude on one path, in units of the input amplitude.
pub type ComplexAmplitude = Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Field amplitudes on the two paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPair {
    pub upper: ComplexAmplitude,
    pub lower: ComplexAmplitude,
}

impl FieldPair {
    pub fn new(upper: ComplexAmplitude, lower: ComplexAmplitude) -> Self {
        Self { upper, lower }
    }

    /// Unit-modulus inputs carrying the given optical phases.
    pub fn from_phases(upper: f64, lower: f64) -> Self {
        Self::new(Complex64::from_polar(1.0, upper), Complex64::from_polar(1.0, lower))
    }

    /// Squared moduli on each path.
    pub fn intensities(&self) -> (f64, f64) {
        (self.upper.norm_sqr(), self.lower.norm_sqr())
    }

    /// Total power summed over both paths.
    pub fn power(&self) -> f64 {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.upper.is_finite() && self.lower.is_finite()
    }
}

/// A 2×2 complex matrix acting on a [`FieldPair`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix2 {
    pub m11: ComplexAmplitude,
    pub m12: ComplexAmplitude,
    pub m21: ComplexAmplitude,
    pub m22: ComplexAmplitude,
}

impl TransferMatrix2 {
    pub const fn new(
        m11: ComplexAmplitude,
        m12: ComplexAmplitude,
        m21: ComplexAmplitude,
        m22: ComplexAmplitude,
    ) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn entries(&self) -> [ComplexAmplitude; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(self.m11.conj(), self.m21.conj(), self.m12.conj(), self.m22.conj())
    }

    pub fn scale(&self, s: ComplexAmplitude) -> Self {
        Self::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M·M† − I|` over all entries.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint()).max_abs_diff(&Self::identity())
    }

    /// Finds the unit-modulus factor `g` minimising `max |g·self − other|`
    /// (anchored on the largest entry of `self`) and returns `(g, deviation)`.
    pub fn global_phase_to(&self, other: &Self) -> (ComplexAmplitude, f64) {
        let a = self.entries();
        let b = other.entries();
        let anchor = (0..4)
            .max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()))
            .unwrap_or(0);
        let g = if a[anchor].norm() == 0.0 || b[anchor].norm() == 0.0 {
            ONE
        } else {
            let r = b[anchor] / a[anchor];
            r / r.norm()
        };
        (g, self.scale(g).max_abs_diff(other))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }
}

impl Mul for TransferMatrix2 {
    type Output = TransferMatrix2;

    fn mul(self, r: TransferMatrix2) -> TransferMatrix2 {
        TransferMatrix2::new(
            self.m11 * r.m11 + self.m12 * r.m21,
            self.m11 * r.m12 + self.m12 * r.m22,
            self.m21 * r.m11 + self.m22 * r.m21,
            self.m21 * r.m12 + self.m22 * r.m22,
        )
    }
}

impl Mul<FieldPair> for TransferMatrix2 {
    type Output = FieldPair;

    fn mul(self, f: FieldPair) -> FieldPair {
        apply(&self, &f)
    }
}

/// Balanced lossless beam splitter, `(1/√2)·[[1, i], [i, 1]]`.
pub fn bs_matrix() -> TransferMatrix2 {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    TransferMatrix2::new(s, I * s, I * s, s)
}

/// Phase shift `e^{iζ}` on the upper path.
pub fn phase_upper(zeta: f64) -> TransferMatrix2 {
    TransferMatrix2::new(Complex64::from_polar(1.0, zeta), ZERO, ZERO, ONE)
}

/// Phase shift `e^{iφ}` on the lower path.
pub fn phase_lower(phi: f64) -> TransferMatrix2 {
    TransferMatrix2::new(ONE, ZERO, ZERO, Complex64::from_polar(1.0, phi))
}

/// Multiplies an element chain into one matrix. `elements[0]` is the first
/// element the field meets, so the product is `elements[n-1] · … · elements[0]`.
pub fn compose(elements: &[TransferMatrix2]) -> Result<TransferMatrix2> {
    let (first, rest) = elements
        .split_first()
        .ok_or_else(|| Error::config("elements", "cannot compose an empty element chain"))?;
    Ok(rest.iter().fold(*first, |acc, m| *m * acc))
}

pub fn apply(m: &TransferMatrix2, f: &FieldPair) -> FieldPair {
    FieldPair::new(
        m.m11 * f.upper + m.m12 * f.lower,
        m.m21 * f.upper + m.m22 * f.lower,
    )
}

/// Closed-form amplitude matrix of two directly coupled MZIs acting on
/// `[E_S, E_I]`:
///
/// ```text
/// ½ · [[ 1 − e^{iφ},   i·e^{iζ'}(1 + e^{iφ}) ],
///      [ i(1 + e^{iφ}), −e^{iζ'}(1 − e^{iφ}) ]]
/// ```
pub fn coupled_mzi_matrix(zeta_prime: f64, phi: f64) -> TransferMatrix2 {
    let ep = Complex64::from_polar(1.0, phi);
    let ez = Complex64::from_polar(1.0, zeta_prime);
    let half = Complex64::new(0.5, 0.0);
    TransferMatrix2::new(
        half * (ONE - ep),
        half * I * ez * (ONE + ep),
        half * I * (ONE + ep),
        -half * ez * (ONE - ep),
    )
}

/// The element chain realising [`coupled_mzi_matrix`], in propagation order.
pub fn coupled_mzi_chain(zeta_prime: f64, phi: f64) -> [TransferMatrix2; 4] {
    [phase_lower(zeta_prime), bs_matrix(), phase_lower(phi), bs_matrix()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < TOL
    }

    #[test]
    fn beam_splitter_on_upper_input() {
        let out = apply(&bs_matrix(), &FieldPair::new(ONE, ZERO));
        assert!(close(out.upper, c(FRAC_1_SQRT_2, 0.0)));
        assert!(close(out.lower, c(0.0, FRAC_1_SQRT_2)));
        assert!(bs_matrix().unitarity_defect() < TOL);
    }

    #[test]
    fn two_beam_splitters_swap_ports() {
        // (1/2)[[1,i],[i,1]]^2 = (1/2)[[0,2i],[2i,0]]
        let bb = compose(&[bs_matrix(), bs_matrix()]).unwrap();
        let expected = TransferMatrix2::new(ZERO, I, I, ZERO);
        assert!(bb.max_abs_diff(&expected) < TOL);
        let out = bb * FieldPair::new(ONE, ZERO);
        assert!(close(out.upper, ZERO));
        assert!(close(out.lower, I));
    }

    #[test]
    fn phase_elements() {
        assert!(phase_upper(0.0).max_abs_diff(&TransferMatrix2::identity()) < TOL);
        assert!(phase_lower(0.0).max_abs_diff(&TransferMatrix2::identity()) < TOL);
        let pi = TransferMatrix2::new(c(-1.0, 0.0), ZERO, ZERO, ONE);
        assert!(phase_upper(PI).max_abs_diff(&pi) < TOL);
        let half = TransferMatrix2::new(ONE, ZERO, ZERO, I);
        assert!(phase_lower(FRAC_PI_2).max_abs_diff(&half) < TOL);
    }

    #[test]
    fn compose_order_and_errors() {
        let id = TransferMatrix2::identity();
        assert_eq!(compose(&[id]).unwrap(), id);
        assert!(compose(&[]).is_err());
        // phase first, then splitter: BS · P, not P · BS
        let bp = compose(&[phase_upper(1.0), bs_matrix()]).unwrap();
        assert!(bp.max_abs_diff(&(bs_matrix() * phase_upper(1.0))) < TOL);
        assert!(bp.max_abs_diff(&(phase_upper(1.0) * bs_matrix())) > 0.1);
    }

    #[test]
    fn identity_leaves_field_unchanged() {
        let f = FieldPair::new(c(0.3, -0.2), c(-1.1, 0.7));
        assert_eq!(apply(&TransferMatrix2::identity(), &f), f);
    }

    #[test]
    fn coupled_matrix_at_zero_phi() {
        let z = 0.83;
        let m = coupled_mzi_matrix(z, 0.0);
        let expected = TransferMatrix2::new(ZERO, I * Complex64::from_polar(1.0, z), I, ZERO);
        assert!(m.max_abs_diff(&expected) < TOL);
    }

    #[test]
    fn coupled_matrix_matches_chain_exactly() {
        for &(z, p) in &[(0.0, 0.0), (0.7, 1.3), (-2.9, 0.4), (PI, -FRAC_PI_2)] {
            let closed = coupled_mzi_matrix(z, p);
            let chained = compose(&coupled_mzi_chain(z, p)).unwrap();
            let (g, dev) = chained.global_phase_to(&closed);
            assert!(dev < TOL, "deviation {dev} at ({z}, {p})");
            assert!(close(g, ONE));
        }
    }

    #[test]
    fn global_phase_is_recovered() {
        let m = coupled_mzi_matrix(0.4, 1.1);
        let g = Complex64::from_polar(1.0, 2.2);
        let (found, dev) = m.global_phase_to(&m.scale(g));
        assert!(close(found, g));
        assert!(dev < TOL);
    }
}
