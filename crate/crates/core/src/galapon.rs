//! The truncated Galapon operator `T_G`, the Hamiltonian, and their
//! commutator in exact and weak form.
//!
//! In an `N`-level truncation
//!
//! ```text
//! (T_G)_{jk} = i hbar / (E_j - E_k)   (j != k),   (T_G)_{jj} = 0
//! ```
//!
//! and `[T_G, H] = i hbar (I - J)` holds exactly as a matrix identity, where
//! `J` is the all-ones matrix. On `S_N = {psi : sum_j c_j = 0}` the `J` term
//! vanishes and the canonical commutation relation is recovered.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, QtError, Result};
use crate::spectral::{
    check_dim, coefficient_sum, evolve, norm_sqr, EnergySpectrum, QuantumState,
    MEMBERSHIP_TOLERANCE,
};

/// Entrywise tolerance for the Hermitian tag.
pub const HERMITIAN_TOLERANCE: f64 = 1e-13;

const POWER_ITERATION_TOL: f64 = 1e-10;
const POWER_ITERATION_CAP: usize = 10_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense square matrix in the energy eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    hermitian: bool,
}

/// JSON form of an [`OperatorMatrix`]: `{"n": N, "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl OperatorMatrix {
    /// Wraps a square matrix. When `hermitian` is set the entries are checked
    /// against their conjugate transpose to [`HERMITIAN_TOLERANCE`].
    pub fn new(entries: DMatrix<Complex64>, hermitian: bool) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(QtError::Dimension {
                expected: entries.nrows(),
                actual: entries.ncols(),
            });
        }
        let op = Self { entries, hermitian };
        if hermitian {
            let err = op.hermiticity_error();
            if err > HERMITIAN_TOLERANCE {
                return Err(invalid(
                    "entries",
                    format!("tagged hermitian but deviates by {err:e}"),
                ));
            }
        }
        Ok(op)
    }

    fn from_fn(n: usize, hermitian: bool, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            entries: DMatrix::from_fn(n, n, f),
            hermitian,
        }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn basis_size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn is_tagged_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `max_{jk} |A_jk - conj(A_kj)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.basis_size();
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..=j {
                let d = (self.entries[(j, k)] - self.entries[(k, j)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        check_dim(self.basis_size(), other.basis_size())?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Matrix-vector product `A v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dim(self.basis_size(), v.len())?;
        let out = &self.entries * DVector::from_column_slice(v);
        Ok(out.iter().copied().collect())
    }

    /// Largest singular value, by power iteration on `A^dagger A` with
    /// relative tolerance 1e-10 and a 10k iteration cap.
    pub fn spectral_norm(&self) -> f64 {
        let n = self.basis_size();
        let gram = self.entries.adjoint() * &self.entries;
        let mut v = DVector::from_fn(n, |j, _| {
            Complex64::new(1.0, 0.5 * (j as f64 + 1.0) / n as f64)
        });
        v /= Complex64::new(v.norm(), 0.0);
        let mut lambda = 0.0f64;
        for _ in 0..POWER_ITERATION_CAP {
            let w = &gram * &v;
            let next = v.dotc(&w).re;
            let w_norm = w.norm();
            if w_norm == 0.0 {
                return 0.0;
            }
            v = w / Complex64::new(w_norm, 0.0);
            if (next - lambda).abs() <= POWER_ITERATION_TOL * next.abs() {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.max(0.0).sqrt()
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Number of eigenvalues of modulus above `tol` (Hermitian input).
    pub fn hermitian_rank(&self, tol: f64) -> usize {
        self.hermitian_eigenvalues()
            .iter()
            .filter(|l| l.abs() > tol)
            .count()
    }

    pub fn to_record(&self) -> MatrixRecord {
        let n = self.basis_size();
        let rows = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|j| (0..n).map(|k| part(&self.entries[(j, k)])).collect())
                .collect()
        };
        MatrixRecord {
            n,
            re: rows(|c| c.re),
            im: rows(|c| c.im),
        }
    }

    /// Rebuilds a matrix from its JSON record; the Hermitian tag is set when
    /// the entries pass the Hermitian check.
    pub fn from_record(rec: &MatrixRecord) -> Result<Self> {
        let n = rec.n;
        let shape_ok = rec.re.len() == n
            && rec.im.len() == n
            && rec.re.iter().chain(&rec.im).all(|row| row.len() == n);
        if !shape_ok {
            return Err(invalid("matrix", format!("record is not {n}x{n}")));
        }
        let mut op = Self::from_fn(n, false, |j, k| Complex64::new(rec.re[j][k], rec.im[j][k]));
        op.hermitian = op.hermiticity_error() <= HERMITIAN_TOLERANCE;
        Ok(op)
    }
}

/// `T_G` for a nondegenerate spectrum.
pub fn build_t_g(spectrum: &EnergySpectrum) -> OperatorMatrix {
    let e = spectrum.levels();
    let hbar = spectrum.hbar();
    OperatorMatrix::from_fn(spectrum.len(), true, |j, k| {
        if j == k {
            ZERO
        } else {
            Complex64::new(0.0, hbar / (e[j] - e[k]))
        }
    })
}

/// `H = diag(E_j)`.
pub fn build_hamiltonian(spectrum: &EnergySpectrum) -> OperatorMatrix {
    let e = spectrum.levels();
    OperatorMatrix::from_fn(spectrum.len(), true, |j, k| {
        if j == k {
            Complex64::new(e[j], 0.0)
        } else {
            ZERO
        }
    })
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    check_dim(a.basis_size(), b.basis_size())?;
    let ab = &a.entries * &b.entries;
    let ba = &b.entries * &a.entries;
    Ok(OperatorMatrix {
        entries: ab - ba,
        hermitian: false,
    })
}

/// `i hbar (1 - |chi><chi|)` with `|chi> = sum_j |E_j>`, i.e. entries
/// `i hbar (delta_jk - 1)`.
pub fn weak_commutator(spectrum: &EnergySpectrum) -> OperatorMatrix {
    let hbar = spectrum.hbar();
    OperatorMatrix::from_fn(spectrum.len(), false, |j, k| {
        if j == k {
            ZERO
        } else {
            Complex64::new(0.0, -hbar)
        }
    })
}

/// `<psi|A|psi> = sum_{jk} conj(c_j) A_jk c_k`.
pub fn expectation(op: &OperatorMatrix, state: &QuantumState) -> Result<Complex64> {
    check_dim(op.basis_size(), state.len())?;
    let c = state.coeffs();
    let mut acc = ZERO;
    for (j, cj) in c.iter().enumerate() {
        let mut row = ZERO;
        for (k, ck) in c.iter().enumerate() {
            row += op.entries[(j, k)] * ck;
        }
        acc += cj.conj() * row;
    }
    Ok(acc)
}

/// A scan of some real quantity over an increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationSeries {
    taus: Vec<f64>,
    values: Vec<f64>,
}

impl DeviationSeries {
    pub fn new(taus: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_dim(taus.len(), values.len())?;
        validate_grid(&taus)?;
        Ok(Self { taus, values })
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.taus.iter().copied().zip(self.values.iter().copied())
    }
}

pub(crate) fn validate_grid(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(QtError::EmptyGrid);
    }
    if taus.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("taus", "grid must be strictly increasing"));
    }
    Ok(())
}

/// Deviation of `<T_G>` from covariant tracking:
/// `Re<T_G>_tau - Re<T_G>_0 - tau` for each `tau` in the grid.
///
/// `<T_G>_tau` is bounded by the spectral norm of `T_G`, so the deviation
/// grows like `-tau` once `tau` exceeds a few norms.
pub fn covariance_deviation(
    spectrum: &EnergySpectrum,
    state: &QuantumState,
    taus: &[f64],
) -> Result<DeviationSeries> {
    validate_grid(taus)?;
    check_dim(spectrum.len(), state.len())?;
    let t_g = build_t_g(spectrum);
    let base = expectation(&t_g, state)?.re;
    let values = taus
        .par_iter()
        .map(|&tau| {
            let moved = evolve(state, spectrum, tau)?;
            Ok(expectation(&t_g, &moved)?.re - base - tau)
        })
        .collect::<Result<Vec<f64>>>()?;
    DeviationSeries::new(taus.to_vec(), values)
}

/// `|sum_j c_j exp(-i E_j tau / hbar)|` over the grid for an initial state
/// in S. Nonzero values show the evolved state has left S.
pub fn s_membership_decay(
    spectrum: &EnergySpectrum,
    state: &QuantumState,
    taus: &[f64],
) -> Result<DeviationSeries> {
    validate_grid(taus)?;
    check_dim(spectrum.len(), state.len())?;
    let initial = coefficient_sum(state).norm();
    if initial > MEMBERSHIP_TOLERANCE {
        return Err(QtError::Precondition(format!(
            "initial state is not in S: |sum c_j| = {initial:e}"
        )));
    }
    let values = taus
        .par_iter()
        .map(|&tau| Ok(coefficient_sum(&evolve(state, spectrum, tau)?).norm()))
        .collect::<Result<Vec<f64>>>()?;
    DeviationSeries::new(taus.to_vec(), values)
}

/// Orthogonal projection onto `S_N` followed by renormalization.
pub fn project_onto_s(state: &QuantumState) -> Result<QuantumState> {
    let n = state.len() as f64;
    let mean = coefficient_sum(state) / n;
    let projected: Vec<Complex64> = state.coeffs().iter().map(|c| c - mean).collect();
    if norm_sqr(&projected).sqrt() <= 1e-12 {
        return Err(QtError::ZeroProjection);
    }
    QuantumState::normalized(projected)
}

/// The orthogonal projector `I - J/N` onto `S_N`.
pub fn s_projector(n: usize) -> OperatorMatrix {
    let inv = 1.0 / n as f64;
    OperatorMatrix::from_fn(n, true, |j, k| {
        let delta = if j == k { 1.0 } else { 0.0 };
        Complex64::new(delta - inv, 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StateSampler;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_level() -> EnergySpectrum {
        EnergySpectrum::harmonic(2, 1.0, 1.0).unwrap()
    }

    fn plus_state() -> QuantumState {
        QuantumState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }

    #[test]
    fn t_g_two_level_entries() {
        let t = build_t_g(&two_level());
        assert_eq!(t.get(0, 1), c(0.0, -1.0));
        assert_eq!(t.get(1, 0), c(0.0, 1.0));
        assert_eq!(t.get(0, 0), c(0.0, 0.0));
        assert_eq!(t.get(1, 1), c(0.0, 0.0));

        let b = build_t_g(&EnergySpectrum::box_well(2, 1.0, 1.0).unwrap());
        assert!((b.get(0, 1) - c(0.0, -1.0 / 3.0)).norm() < 1e-16);
    }

    #[test]
    fn hamiltonian_is_diagonal() {
        let h = build_hamiltonian(&EnergySpectrum::box_well(3, 1.0, 1.0).unwrap());
        for j in 0..3 {
            for k in 0..3 {
                let expect = if j == k {
                    ((j + 1) * (j + 1)) as f64
                } else {
                    0.0
                };
                assert_eq!(h.get(j, k), c(expect, 0.0));
            }
        }
        assert_eq!(h.hermiticity_error(), 0.0);
    }

    #[test]
    fn self_commutator_vanishes() {
        let h = build_hamiltonian(&EnergySpectrum::harmonic(5, 1.0, 1.0).unwrap());
        let z = commutator(&h, &h).unwrap();
        assert!(z.entries().iter().all(|v| *v == ZERO));
    }

    #[test]
    fn commutator_is_antisymmetric() {
        let s = EnergySpectrum::box_well(6, 0.7, 1.3).unwrap();
        let (t, h) = (build_t_g(&s), build_hamiltonian(&s));
        let ab = commutator(&t, &h).unwrap();
        let ba = commutator(&h, &t).unwrap();
        for (x, y) in ab.entries().iter().zip(ba.entries().iter()) {
            assert!((x + y).norm() < 1e-14);
        }
    }

    #[test]
    fn commutator_size_mismatch() {
        let a = build_hamiltonian(&EnergySpectrum::harmonic(2, 1.0, 1.0).unwrap());
        let b = build_hamiltonian(&EnergySpectrum::harmonic(3, 1.0, 1.0).unwrap());
        assert!(matches!(commutator(&a, &b), Err(QtError::Dimension { .. })));
    }

    #[test]
    fn weak_commutator_entries() {
        let w = weak_commutator(&EnergySpectrum::harmonic(3, 1.0, 1.0).unwrap());
        for j in 0..3 {
            for k in 0..3 {
                let expect = if j == k { c(0.0, 0.0) } else { c(0.0, -1.0) };
                assert_eq!(w.get(j, k), expect);
            }
        }
    }

    #[test]
    fn weak_commutator_acts_as_i_hbar_on_s() {
        let s = EnergySpectrum::harmonic(6, 1.0, 2.0).unwrap();
        let psi = StateSampler::new(11).s_state(6).unwrap();
        let out = weak_commutator(&s).apply(psi.coeffs()).unwrap();
        for (o, ci) in out.iter().zip(psi.coeffs()) {
            assert!((o - c(0.0, 2.0) * ci).norm() < 1e-14);
        }
    }

    #[test]
    fn expectation_examples() {
        let s = EnergySpectrum::harmonic(4, 1.0, 1.0).unwrap();
        let h = build_hamiltonian(&s);
        for j in 0..4 {
            let e = expectation(&h, &QuantumState::eigenstate(4, j).unwrap()).unwrap();
            assert_eq!(e, c(s.levels()[j], 0.0));
        }
        let t = build_t_g(&two_level());
        assert!(expectation(&t, &plus_state()).unwrap().norm() < 1e-16);
        assert!(matches!(
            expectation(&t, &QuantumState::eigenstate(3, 0).unwrap()),
            Err(QtError::Dimension { .. })
        ));
    }

    // Brute-force oracle: explicit matrix-vector product then inner product,
    // compared with the closed form -sin(tau).
    #[test]
    fn expectation_under_evolution_is_minus_sine() {
        let s = two_level();
        let t = build_t_g(&s);
        for k in 0..=64 {
            let tau = -8.0 + 0.25 * k as f64;
            let moved = evolve(&plus_state(), &s, tau).unwrap();
            let tv = t.apply(moved.coeffs()).unwrap();
            let brute: Complex64 = moved
                .coeffs()
                .iter()
                .zip(&tv)
                .map(|(a, b)| a.conj() * b)
                .sum();
            let fast = expectation(&t, &moved).unwrap();
            assert!((brute - fast).norm() < 1e-15);
            assert!((fast.re + tau.sin()).abs() < 1e-14, "tau={tau}");
            assert!(fast.im.abs() < 1e-15);
        }
    }

    #[test]
    fn covariance_deviation_two_level() {
        let taus = [0.0, 1.0, PI];
        let dev = covariance_deviation(&two_level(), &plus_state(), &taus).unwrap();
        assert_eq!(dev.values()[0], 0.0);
        assert!((dev.values()[1] - (-(1.0f64.sin()) - 1.0)).abs() < 1e-14);
        assert!((dev.values()[2] + PI).abs() < 1e-14);
    }

    #[test]
    fn covariance_deviation_grid_errors() {
        let s = two_level();
        assert_eq!(
            covariance_deviation(&s, &plus_state(), &[]).unwrap_err(),
            QtError::EmptyGrid
        );
        assert!(covariance_deviation(&s, &plus_state(), &[1.0, 0.5]).is_err());
    }

    #[test]
    fn s_membership_decay_two_level() {
        let anti = QuantumState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]).unwrap();
        let series = s_membership_decay(&two_level(), &anti, &[0.0, PI]).unwrap();
        assert_eq!(series.values()[0], 0.0);
        assert!((series.values()[1] - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            s_membership_decay(&two_level(), &plus_state(), &[0.0]),
            Err(QtError::Precondition(_))
        ));
    }

    #[test]
    fn projection_examples() {
        let ground = QuantumState::eigenstate(2, 0).unwrap();
        let p = project_onto_s(&ground).unwrap();
        assert!((p.coeffs()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((p.coeffs()[1] - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let n = 5;
        let uniform = QuantumState::normalized(vec![c(1.0, 0.0); n]).unwrap();
        assert_eq!(
            project_onto_s(&uniform).unwrap_err(),
            QtError::ZeroProjection
        );

        let in_s = StateSampler::new(5).s_state(7).unwrap();
        let again = project_onto_s(&in_s).unwrap();
        for (a, b) in in_s.coeffs().iter().zip(again.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn spectral_norm_matches_svd() {
        for (n, spec) in [
            (2, EnergySpectrum::harmonic(2, 1.0, 1.0).unwrap()),
            (9, EnergySpectrum::harmonic(9, 1.0, 1.0).unwrap()),
            (12, EnergySpectrum::box_well(12, 1.0, 1.0).unwrap()),
        ] {
            let t = build_t_g(&spec);
            let svd = t.entries().clone().svd(false, false);
            let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
            let pi = t.spectral_norm();
            assert!((pi - top).abs() <= 1e-8 * top, "n={n}: {pi} vs {top}");
        }
    }

    #[test]
    fn projector_rank() {
        for n in 2..10 {
            assert_eq!(s_projector(n).hermitian_rank(1e-10), n - 1);
        }
    }

    #[test]
    fn matrix_record_round_trip() {
        let t = build_t_g(&EnergySpectrum::box_well(4, 1.0, 1.0).unwrap());
        let back = OperatorMatrix::from_record(&t.to_record()).unwrap();
        assert_eq!(back, t);
        let bad = MatrixRecord {
            n: 2,
            re: vec![vec![0.0; 2]],
            im: vec![vec![0.0; 2]; 2],
        };
        assert!(OperatorMatrix::from_record(&bad).is_err());
    }

    #[test]
    fn non_hermitian_tag_rejected() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(OperatorMatrix::new(m.clone(), true).is_err());
        assert!(OperatorMatrix::new(m, false).is_ok());
    }
}
