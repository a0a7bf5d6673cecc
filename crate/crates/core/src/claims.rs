//! End-to-end demonstrations that `T_G` fails as a time observable:
//!
//! - (i) `<T_G>_tau` does not track `<T_G>_0 + tau`;
//! - (ii) S is not invariant under evolution;
//! - (iii) an evolving state lies in S only on a set of times of measure zero.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::galapon::{build_t_g, covariance_deviation, s_membership_decay, DeviationSeries};
use crate::spectral::{coefficient_sum, EnergySpectrum, QuantumState, MEMBERSHIP_TOLERANCE};
use crate::zeroset::{
    paley_wiener_record, sublevel_measure, MeasureReport, PaleyWienerRecord, TrigSignal,
};

/// Parameters for [`verify_claims`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimsSettings {
    /// Number of points in each time grid.
    pub grid: usize,
    /// Time horizon; also the window for the zero-set analysis.
    pub tau_max: f64,
    /// Sublevel thresholds, scanned in decreasing order.
    pub epsilons: Vec<f64>,
}

impl Default for ClaimsSettings {
    fn default() -> Self {
        Self {
            grid: 2000,
            tau_max: 100.0,
            epsilons: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceClaim {
    pub spectral_norm: f64,
    /// Largest tau scanned; at least four spectral norms.
    pub tau_reach: f64,
    pub max_abs_deviation: f64,
    /// Twice the spectral norm.
    pub threshold: f64,
    pub demonstrated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceClaim {
    pub initial_coefficient_sum: f64,
    pub max_coefficient_sum: f64,
    /// Ten times the membership tolerance.
    pub threshold: f64,
    pub demonstrated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureZeroClaim {
    pub window: f64,
    pub scan: Vec<MeasureReport>,
    pub monotone: bool,
    /// Sublevel fraction at `1e-6 * sum |c_j|`.
    pub smallest_fraction: f64,
    pub paley_wiener: PaleyWienerRecord,
    pub demonstrated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimsSummary {
    pub spectrum: String,
    pub n: usize,
    pub claim_i: CovarianceClaim,
    pub claim_ii: InvarianceClaim,
    pub claim_iii: MeasureZeroClaim,
    pub all_demonstrated: bool,
}

/// Summary plus the raw deviation and S-membership scans.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimsRun {
    pub summary: ClaimsSummary,
    pub deviation: DeviationSeries,
    pub membership: DeviationSeries,
}

fn linspace(end: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|i| end * i as f64 / last).collect()
}

/// Runs all three demonstrations for a state in S.
pub fn verify_claims(
    spectrum: &EnergySpectrum,
    state: &QuantumState,
    settings: &ClaimsSettings,
) -> Result<ClaimsRun> {
    if settings.grid < 2 {
        return Err(invalid("grid", "need at least 2 points"));
    }
    if !(settings.tau_max > 0.0 && settings.tau_max.is_finite()) {
        return Err(invalid("tau_max", "must be positive"));
    }
    if settings.epsilons.iter().any(|e| e.is_nan() || *e <= 0.0) {
        return Err(invalid("epsilons", "must be strictly positive"));
    }

    let norm = build_t_g(spectrum).spectral_norm();
    let tau_reach = settings.tau_max.max(4.0 * norm);
    let deviation = covariance_deviation(spectrum, state, &linspace(tau_reach, settings.grid))?;
    let claim_i = CovarianceClaim {
        spectral_norm: norm,
        tau_reach,
        max_abs_deviation: deviation.max_abs(),
        threshold: 2.0 * norm,
        demonstrated: deviation.max_abs() > 2.0 * norm,
    };

    let membership =
        s_membership_decay(spectrum, state, &linspace(settings.tau_max, settings.grid))?;
    let threshold = 10.0 * MEMBERSHIP_TOLERANCE;
    let claim_ii = InvarianceClaim {
        initial_coefficient_sum: coefficient_sum(state).norm(),
        max_coefficient_sum: membership.max_abs(),
        threshold,
        demonstrated: membership.max_abs() > threshold,
    };

    let signal = TrigSignal::from_state(spectrum, state)?;
    let window = settings.tau_max;
    let base_grid = settings.grid.max(1000);
    let mut eps = settings.epsilons.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let scan = eps
        .iter()
        .map(|&e| sublevel_measure(&signal, e, window, base_grid))
        .collect::<Result<Vec<_>>>()?;
    let monotone = scan.windows(2).all(|w| w[1].measure <= w[0].measure);
    let smallest = sublevel_measure(&signal, 1e-6 * signal.modulus_bound(), window, base_grid)?;
    let smallest_fraction = smallest.measure / window;
    let paley_wiener = paley_wiener_record(&signal, window, base_grid)?;
    let claim_iii = MeasureZeroClaim {
        window,
        scan,
        monotone,
        smallest_fraction,
        paley_wiener,
        demonstrated: monotone
            && smallest_fraction <= 1e-4
            && paley_wiener.converged
            && paley_wiener.value.is_finite(),
    };

    let all_demonstrated = claim_i.demonstrated && claim_ii.demonstrated && claim_iii.demonstrated;
    Ok(ClaimsRun {
        summary: ClaimsSummary {
            spectrum: spectrum.label().to_string(),
            n: spectrum.len(),
            claim_i,
            claim_ii,
            claim_iii,
            all_demonstrated,
        },
        deviation,
        membership,
    })
}
