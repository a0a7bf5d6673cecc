//! Time observables for bound quantum systems with a discrete, nondegenerate
//! energy spectrum.
//!
//! The crate builds, in a finite truncation of the energy eigenbasis:
//!
//! - the Hermitian operator `T_G = i hbar sum_{j != k} (E_j - E_k)^{-1} |E_j><E_k|`
//!   and its commutator with `H` ([`galapon`]);
//! - the covariant canonical time density `p(t|psi) = |<t|psi>|^2`
//!   ([`canonical`]);
//! - explicit sequences in `S = {psi : sum_j <E_j|psi> = 0}` converging to
//!   energy eigenstates ([`denseness`]);
//! - measure and log-integral diagnostics for the times at which an evolving
//!   state lies in S ([`zeroset`]).
//!
//! [`claims`] strings these together into pass/fail demonstrations.

pub mod canonical;
pub mod claims;
pub mod denseness;
pub mod error;
pub mod galapon;
pub mod io;
pub mod numeric;
pub mod rng;
pub mod spectral;
pub mod zeroset;

pub use canonical::{bohr_mean_density, verify_covariance, CanonicalDensity, CovarianceRecord};
pub use claims::{verify_claims, ClaimsRun, ClaimsSettings, ClaimsSummary};
pub use denseness::{
    cauchy_state, distance_to_eigenstate, uniform_vector_orthogonality, CauchyStep,
};
pub use error::{QtError, Result};
pub use galapon::{
    build_hamiltonian, build_t_g, commutator, covariance_deviation, expectation, project_onto_s,
    s_membership_decay, weak_commutator, DeviationSeries, MatrixRecord, OperatorMatrix,
};
pub use num_complex::Complex64;
pub use rng::StateSampler;
pub use spectral::{
    build_spectrum, coefficient_sum, evolve, EnergySpectrum, PhysicsConfig, QuantumState,
    SpectrumKind,
};
pub use zeroset::{
    bohr_mean, eval_f, paley_wiener_integral, periodic_approximation, sublevel_measure,
    MeasureReport, PaleyWienerRecord, PeriodicApproximant, TrigSignal,
};
