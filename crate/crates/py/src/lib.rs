//! Python bindings for `qtime-core`.
//!
//! Matrices come back as nested lists of `complex`, series as lists of
//! `float`. Every physics error surfaces as `ValueError`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qtime_core::denseness;
use qtime_core::zeroset::{self, LogMean};
use qtime_core::{
    CanonicalDensity, ClaimsSettings, EnergySpectrum, OperatorMatrix, QtError, QuantumState,
    StateSampler, TrigSignal,
};

fn to_py(e: QtError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &OperatorMatrix) -> Vec<Vec<Complex64>> {
    let n = m.basis_size();
    (0..n)
        .map(|j| (0..n).map(|k| m.get(j, k)).collect())
        .collect()
}

#[pyclass(name = "Spectrum", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpectrum(EnergySpectrum);

#[pymethods]
impl PySpectrum {
    #[staticmethod]
    #[pyo3(signature = (n, omega = 1.0, hbar = 1.0))]
    fn harmonic(n: usize, omega: f64, hbar: f64) -> PyResult<Self> {
        EnergySpectrum::harmonic(n, omega, hbar)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (n, scale = 1.0, hbar = 1.0))]
    fn box_well(n: usize, scale: f64, hbar: f64) -> PyResult<Self> {
        EnergySpectrum::box_well(n, scale, hbar)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (levels, hbar = 1.0))]
    fn custom(levels: Vec<f64>, hbar: f64) -> PyResult<Self> {
        EnergySpectrum::custom(levels, hbar)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn levels(&self) -> Vec<f64> {
        self.0.levels().to_vec()
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.0.hbar()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Spectrum({}, n={}, hbar={})",
            self.0.label(),
            self.0.len(),
            self.0.hbar()
        )
    }
}

#[pyclass(name = "State", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyState(QuantumState);

#[pymethods]
impl PyState {
    /// Unit-norm state from complex coefficients (rejects non-normalized input).
    #[new]
    fn new(coeffs: Vec<Complex64>) -> PyResult<Self> {
        QuantumState::new(coeffs).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn normalized(coeffs: Vec<Complex64>) -> PyResult<Self> {
        QuantumState::normalized(coeffs).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn eigenstate(n: usize, index: usize) -> PyResult<Self> {
        QuantumState::eigenstate(n, index).map(Self).map_err(to_py)
    }

    /// Seeded random state; `in_s` projects it onto the zero-sum subspace.
    #[staticmethod]
    #[pyo3(signature = (n, seed, in_s = false))]
    fn random(n: usize, seed: u64, in_s: bool) -> PyResult<Self> {
        let mut rng = StateSampler::new(seed);
        let psi = if in_s { rng.s_state(n) } else { rng.state(n) };
        psi.map(Self).map_err(to_py)
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.0.coeffs().to_vec()
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyclass(name = "Signal", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySignal(TrigSignal);

#[pymethods]
impl PySignal {
    /// `f(t) = sum_j amps[j] * exp(-i freqs[j] t)`.
    #[new]
    fn new(freqs: Vec<f64>, amps: Vec<Complex64>) -> PyResult<Self> {
        TrigSignal::new(freqs, amps).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_state(spectrum: &PySpectrum, state: &PyState) -> PyResult<Self> {
        TrigSignal::from_state(&spectrum.0, &state.0)
            .map(Self)
            .map_err(to_py)
    }

    fn __call__(&self, t: f64) -> Complex64 {
        self.0.eval(t)
    }

    #[getter]
    fn freqs(&self) -> Vec<f64> {
        self.0.freqs().to_vec()
    }

    #[getter]
    fn amps(&self) -> Vec<Complex64> {
        self.0.amps().to_vec()
    }

    fn modulus_bound(&self) -> f64 {
        self.0.modulus_bound()
    }
}

#[pyclass(name = "Approximant", frozen, get_all)]
struct PyApproximant {
    signal: PySignal,
    base_period: f64,
    harmonics: Vec<i64>,
    ratios: Vec<(i64, u64)>,
    drift_bound: f64,
}

#[pyfunction]
fn t_g(spectrum: &PySpectrum) -> Vec<Vec<Complex64>> {
    rows(&qtime_core::build_t_g(&spectrum.0))
}

#[pyfunction]
fn t_g_spectral_norm(spectrum: &PySpectrum) -> f64 {
    qtime_core::build_t_g(&spectrum.0).spectral_norm()
}

/// `[T_G, H]` as a dense matrix.
#[pyfunction]
fn commutator(spectrum: &PySpectrum) -> PyResult<Vec<Vec<Complex64>>> {
    let s = &spectrum.0;
    qtime_core::commutator(&qtime_core::build_t_g(s), &qtime_core::build_hamiltonian(s))
        .map(|m| rows(&m))
        .map_err(to_py)
}

#[pyfunction]
fn weak_commutator(spectrum: &PySpectrum) -> Vec<Vec<Complex64>> {
    rows(&qtime_core::weak_commutator(&spectrum.0))
}

/// `<psi|T_G|psi>`.
#[pyfunction]
fn t_g_expectation(spectrum: &PySpectrum, state: &PyState) -> PyResult<Complex64> {
    qtime_core::expectation(&qtime_core::build_t_g(&spectrum.0), &state.0).map_err(to_py)
}

#[pyfunction]
fn evolve(state: &PyState, spectrum: &PySpectrum, tau: f64) -> PyResult<PyState> {
    qtime_core::evolve(&state.0, &spectrum.0, tau)
        .map(PyState)
        .map_err(to_py)
}

#[pyfunction]
fn coefficient_sum(state: &PyState) -> Complex64 {
    qtime_core::coefficient_sum(&state.0)
}

#[pyfunction]
fn project_onto_s(state: &PyState) -> PyResult<PyState> {
    qtime_core::project_onto_s(&state.0)
        .map(PyState)
        .map_err(to_py)
}

#[pyfunction]
fn covariance_deviation(
    spectrum: &PySpectrum,
    state: &PyState,
    taus: Vec<f64>,
) -> PyResult<Vec<f64>> {
    qtime_core::covariance_deviation(&spectrum.0, &state.0, &taus)
        .map(|s| s.values().to_vec())
        .map_err(to_py)
}

#[pyfunction]
fn s_membership_decay(
    spectrum: &PySpectrum,
    state: &PyState,
    taus: Vec<f64>,
) -> PyResult<Vec<f64>> {
    qtime_core::s_membership_decay(&spectrum.0, &state.0, &taus)
        .map(|s| s.values().to_vec())
        .map_err(to_py)
}

/// Canonical time density `p(t|psi)` at each time.
#[pyfunction]
fn density(spectrum: &PySpectrum, state: &PyState, times: Vec<f64>) -> PyResult<Vec<f64>> {
    let d = CanonicalDensity::new(&spectrum.0, &state.0).map_err(to_py)?;
    Ok(times.iter().map(|&t| d.density_at(t)).collect())
}

#[pyfunction]
fn verify_covariance(
    spectrum: &PySpectrum,
    state: &PyState,
    tau: f64,
    times: Vec<f64>,
) -> PyResult<f64> {
    qtime_core::verify_covariance(&spectrum.0, &state.0, tau, &times).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, target = 0))]
fn cauchy_state(n: usize, target: usize) -> PyResult<PyState> {
    denseness::cauchy_state(n, target)
        .map(|s| PyState(s.state))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, target = 0))]
fn cauchy_distance(n: usize, target: usize) -> PyResult<f64> {
    let step = denseness::cauchy_state(n, target).map_err(to_py)?;
    denseness::distance_to_eigenstate(&step, target).map_err(to_py)
}

/// Measure of `{t in [0, window] : |f(t)| < epsilon}`.
#[pyfunction]
#[pyo3(signature = (signal, epsilon, window, base_grid = 2000))]
fn sublevel_measure(
    signal: &PySignal,
    epsilon: f64,
    window: f64,
    base_grid: usize,
) -> PyResult<f64> {
    zeroset::sublevel_measure(&signal.0, epsilon, window, base_grid)
        .map(|r| r.measure)
        .map_err(to_py)
}

/// `window^-1 * integral |log|f||` over `[0, window]`; `signed` drops the
/// absolute value.
#[pyfunction]
#[pyo3(signature = (signal, window, panels = 400, signed = false))]
fn log_modulus_mean(signal: &PySignal, window: f64, panels: usize, signed: bool) -> PyResult<f64> {
    let variant = if signed {
        LogMean::Signed
    } else {
        LogMean::Absolute
    };
    zeroset::log_modulus_mean(&signal.0, window, panels, variant).map_err(to_py)
}

#[pyfunction]
fn periodic_approximation(signal: &PySignal, tol: f64, horizon: f64) -> PyResult<PyApproximant> {
    let ap = zeroset::periodic_approximation(&signal.0, tol, horizon).map_err(to_py)?;
    let narrow =
        |v: i128| i64::try_from(v).map_err(|_| PyValueError::new_err("harmonic exceeds i64"));
    Ok(PyApproximant {
        signal: PySignal(ap.signal),
        base_period: ap.base_period,
        harmonics: ap
            .harmonics
            .into_iter()
            .map(narrow)
            .collect::<PyResult<_>>()?,
        ratios: ap
            .ratios
            .into_iter()
            .map(|(p, q)| Ok((narrow(p)?, q)))
            .collect::<PyResult<_>>()?,
        drift_bound: ap.drift_bound,
    })
}

#[pyfunction]
#[pyo3(signature = (f, g, horizon, points = 100_000))]
fn sup_distance(f: &PySignal, g: &PySignal, horizon: f64, points: usize) -> f64 {
    zeroset::sup_distance(&f.0, &g.0, horizon, points)
}

/// Runs the three-claim suite and returns the summary as a JSON string.
#[pyfunction]
#[pyo3(signature = (spectrum, state, grid = 1000, tau_max = 20.0))]
fn verify_claims(
    spectrum: &PySpectrum,
    state: &PyState,
    grid: usize,
    tau_max: f64,
) -> PyResult<String> {
    let settings = ClaimsSettings {
        grid,
        tau_max,
        ..ClaimsSettings::default()
    };
    let run = qtime_core::verify_claims(&spectrum.0, &state.0, &settings).map_err(to_py)?;
    serde_json::to_string(&run.summary).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn qtime(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PySignal>()?;
    m.add_class::<PyApproximant>()?;
    m.add_function(wrap_pyfunction!(t_g, m)?)?;
    m.add_function(wrap_pyfunction!(t_g_spectral_norm, m)?)?;
    m.add_function(wrap_pyfunction!(commutator, m)?)?;
    m.add_function(wrap_pyfunction!(weak_commutator, m)?)?;
    m.add_function(wrap_pyfunction!(t_g_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_sum, m)?)?;
    m.add_function(wrap_pyfunction!(project_onto_s, m)?)?;
    m.add_function(wrap_pyfunction!(covariance_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(s_membership_decay, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(verify_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_state, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_distance, m)?)?;
    m.add_function(wrap_pyfunction!(sublevel_measure, m)?)?;
    m.add_function(wrap_pyfunction!(log_modulus_mean, m)?)?;
    m.add_function(wrap_pyfunction!(periodic_approximation, m)?)?;
    m.add_function(wrap_pyfunction!(sup_distance, m)?)?;
    m.add_function(wrap_pyfunction!(verify_claims, m)?)?;
    Ok(())
}
