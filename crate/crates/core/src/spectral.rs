//! Energy spectra, states in the energy eigenbasis, and Schrödinger phase
//! evolution.
//!
//! Everything downstream works in the energy eigenbasis of a finite,
//! nondegenerate truncation `E_0 < E_1 < ... < E_{N-1}`. Times are measured
//! in units of `hbar / energy`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, QtError, Result};

/// Default tolerance on `|sum |c_j|^2 - 1|` for a valid state.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Default tolerance on `|sum c_j|` for membership in S.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-10;

/// Physical constant and numeric tolerances shared by the verification routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsConfig {
    pub hbar: f64,
    pub norm_tolerance: f64,
    pub membership_tolerance: f64,
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            norm_tolerance: NORM_TOLERANCE,
            membership_tolerance: MEMBERSHIP_TOLERANCE,
        }
    }
}

impl PhysicsConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("norm_tolerance", self.norm_tolerance),
            ("membership_tolerance", self.membership_tolerance),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        Ok(())
    }
}

/// Standard level families used for experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpectrumKind {
    /// `E_j = hbar * omega * (j + 1/2)`
    Harmonic { omega: f64 },
    /// Particle in a box: `E_j = scale * (j + 1)^2`
    Box { scale: f64 },
    /// Levels given verbatim.
    Custom { levels: Vec<f64> },
}

/// A finite, strictly increasing list of energy levels.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    levels: Vec<f64>,
    hbar: f64,
    label: String,
}

impl EnergySpectrum {
    pub fn new(levels: Vec<f64>, hbar: f64, label: impl Into<String>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(QtError::TooFewLevels(levels.len()));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(invalid("hbar", format!("must be positive, got {hbar}")));
        }
        if let Some(bad) = levels.iter().position(|e| !e.is_finite()) {
            return Err(invalid("levels", format!("level {bad} is not finite")));
        }
        for (index, pair) in levels.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(QtError::Degenerate {
                    index,
                    prev: pair[0],
                    next: pair[1],
                });
            }
        }
        Ok(Self {
            levels,
            hbar,
            label: label.into(),
        })
    }

    pub fn harmonic(n_levels: usize, omega: f64, hbar: f64) -> Result<Self> {
        build_spectrum(&SpectrumKind::Harmonic { omega }, n_levels, hbar)
    }

    pub fn box_well(n_levels: usize, scale: f64, hbar: f64) -> Result<Self> {
        build_spectrum(&SpectrumKind::Box { scale }, n_levels, hbar)
    }

    pub fn custom(levels: Vec<f64>, hbar: f64) -> Result<Self> {
        Self::new(levels, hbar, "custom")
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Angular frequencies `E_j / hbar`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.levels.iter().map(|e| e / self.hbar).collect()
    }
}

/// Builds a spectrum of the given family with `n_levels` levels.
///
/// For [`SpectrumKind::Custom`] the level list must have exactly `n_levels`
/// entries.
pub fn build_spectrum(kind: &SpectrumKind, n_levels: usize, hbar: f64) -> Result<EnergySpectrum> {
    if n_levels < 2 {
        return Err(QtError::TooFewLevels(n_levels));
    }
    match kind {
        SpectrumKind::Harmonic { omega } => {
            if !(*omega > 0.0 && omega.is_finite()) {
                return Err(invalid("omega", format!("must be positive, got {omega}")));
            }
            let levels = (0..n_levels)
                .map(|j| hbar * omega * (j as f64 + 0.5))
                .collect();
            EnergySpectrum::new(levels, hbar, "harmonic")
        }
        SpectrumKind::Box { scale } => {
            if !(*scale > 0.0 && scale.is_finite()) {
                return Err(invalid("scale", format!("must be positive, got {scale}")));
            }
            let levels = (0..n_levels)
                .map(|j| {
                    let m = (j + 1) as f64;
                    scale * m * m
                })
                .collect();
            EnergySpectrum::new(levels, hbar, "box")
        }
        SpectrumKind::Custom { levels } => {
            if levels.len() != n_levels {
                return Err(QtError::Dimension {
                    expected: n_levels,
                    actual: levels.len(),
                });
            }
            EnergySpectrum::new(levels.clone(), hbar, "custom")
        }
    }
}

/// A unit-norm coefficient vector over the energy eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    coeffs: Vec<Complex64>,
}

impl QuantumState {
    /// Wraps coefficients that must already be normalized to [`NORM_TOLERANCE`].
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(coeffs, NORM_TOLERANCE)
    }

    pub fn with_tolerance(coeffs: Vec<Complex64>, tolerance: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("coeffs", "state has no coefficients"));
        }
        let norm_sq = norm_sqr(&coeffs);
        if norm_sq.is_nan() || (norm_sq - 1.0).abs() > tolerance {
            return Err(QtError::NotNormalized { norm_sq });
        }
        Ok(Self { coeffs })
    }

    /// Scales an arbitrary nonzero vector to unit norm.
    pub fn normalized(mut coeffs: Vec<Complex64>) -> Result<Self> {
        let norm = norm_sqr(&coeffs).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(invalid(
                "coeffs",
                "cannot normalize a zero or non-finite vector",
            ));
        }
        coeffs.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { coeffs })
    }

    /// Builds a state from separate real and imaginary parts.
    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(QtError::Dimension {
                expected: re.len(),
                actual: im.len(),
            });
        }
        Self::new(
            re.iter()
                .zip(im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect(),
        )
    }

    /// The energy eigenstate `|E_index>` in an `n`-level basis.
    pub fn eigenstate(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(QtError::Index { index, len: n });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[index] = Complex64::new(1.0, 0.0);
        Ok(Self { coeffs })
    }

    pub(crate) fn from_unit_unchecked(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.coeffs)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }

    pub fn imag_parts(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.im).collect()
    }
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(QtError::Dimension { expected, actual })
    }
}

/// Evolves a state for time `tau`: `c_j -> c_j * exp(-i E_j tau / hbar)`.
pub fn evolve(state: &QuantumState, spectrum: &EnergySpectrum, tau: f64) -> Result<QuantumState> {
    check_dim(spectrum.len(), state.len())?;
    let hbar = spectrum.hbar();
    let coeffs = state
        .coeffs
        .iter()
        .zip(spectrum.levels())
        .map(|(c, e)| c * Complex64::from_polar(1.0, -e * tau / hbar))
        .collect();
    Ok(QuantumState::from_unit_unchecked(coeffs))
}

/// `sum_j c_j`, the overlap with the unnormalizable all-ones ket.
pub fn coefficient_sum(state: &QuantumState) -> Complex64 {
    coefficient_sum_raw(&state.coeffs)
}

/// [`coefficient_sum`] on an arbitrary (possibly unnormalized) vector.
pub fn coefficient_sum_raw(coeffs: &[Complex64]) -> Complex64 {
    coeffs.iter().sum()
}

/// Whether `|sum_j c_j| <= tolerance`.
pub fn is_in_s(state: &QuantumState, tolerance: f64) -> bool {
    coefficient_sum(state).norm() <= tolerance
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn harmonic_levels() {
        let s = EnergySpectrum::harmonic(3, 1.0, 1.0).unwrap();
        assert_eq!(s.levels(), &[0.5, 1.5, 2.5]);
        assert_eq!(s.label(), "harmonic");
    }

    #[test]
    fn box_levels() {
        let s = EnergySpectrum::box_well(3, 1.0, 1.0).unwrap();
        assert_eq!(s.levels(), &[1.0, 4.0, 9.0]);
    }

    #[test]
    fn custom_degenerate_rejected() {
        let err = EnergySpectrum::custom(vec![1.0, 1.0], 1.0).unwrap_err();
        assert!(matches!(err, QtError::Degenerate { index: 0, .. }));
        let err = EnergySpectrum::custom(vec![2.0, 1.0], 1.0).unwrap_err();
        assert!(matches!(err, QtError::Degenerate { .. }));
    }

    #[test]
    fn size_and_parameter_errors() {
        assert_eq!(
            EnergySpectrum::harmonic(1, 1.0, 1.0).unwrap_err(),
            QtError::TooFewLevels(1)
        );
        assert!(EnergySpectrum::harmonic(3, 0.0, 1.0).is_err());
        assert!(EnergySpectrum::box_well(3, -1.0, 1.0).is_err());
        assert!(EnergySpectrum::harmonic(3, 1.0, 0.0).is_err());
        let err = build_spectrum(
            &SpectrumKind::Custom {
                levels: vec![1.0, 2.0],
            },
            3,
            1.0,
        );
        assert!(matches!(err, Err(QtError::Dimension { .. })));
    }

    #[test]
    fn evolve_identity_at_zero() {
        let s = EnergySpectrum::harmonic(3, 1.0, 1.0).unwrap();
        let psi = QuantumState::normalized(vec![c(1.0, 0.2), c(-0.3, 0.5), c(0.1, 0.0)]).unwrap();
        assert_eq!(evolve(&psi, &s, 0.0).unwrap(), psi);
    }

    #[test]
    fn evolve_ground_phase_at_pi() {
        let s = EnergySpectrum::harmonic(2, 1.0, 1.0).unwrap();
        let psi = QuantumState::eigenstate(2, 0).unwrap();
        let out = evolve(&psi, &s, PI).unwrap();
        assert!((out.coeffs()[0] - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(out.coeffs()[1], c(0.0, 0.0));
    }

    #[test]
    fn evolve_rejects_length_mismatch() {
        let s = EnergySpectrum::harmonic(3, 1.0, 1.0).unwrap();
        let psi = QuantumState::eigenstate(2, 0).unwrap();
        assert!(matches!(
            evolve(&psi, &s, 1.0),
            Err(QtError::Dimension {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn coefficient_sum_examples() {
        let anti = QuantumState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]).unwrap();
        assert_eq!(coefficient_sum(&anti), c(0.0, 0.0));
        assert!(is_in_s(&anti, MEMBERSHIP_TOLERANCE));
        let ground = QuantumState::eigenstate(2, 0).unwrap();
        assert_eq!(coefficient_sum(&ground), c(1.0, 0.0));
        assert!(!is_in_s(&ground, MEMBERSHIP_TOLERANCE));
    }

    #[test]
    fn state_validation() {
        assert!(matches!(
            QuantumState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(QtError::NotNormalized { .. })
        ));
        assert!(QuantumState::normalized(vec![c(0.0, 0.0); 3]).is_err());
        assert!(QuantumState::eigenstate(2, 2).is_err());
        assert!(QuantumState::from_parts(&[1.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn physics_config_defaults() {
        let cfg = PhysicsConfig::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.membership_tolerance, 1e-10);
        let bad = PhysicsConfig { hbar: 0.0, ..cfg };
        assert!(bad.validate().is_err());
    }
}
