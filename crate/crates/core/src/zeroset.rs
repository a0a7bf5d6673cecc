//! Zero sets of the overlap signal `f(t) = sum_j c_j exp(-i E_j t / hbar)`.
//!
//! `f(t)` is the coefficient sum of the evolved state, so the state lies in S
//! at time `t` exactly when `f(t) = 0`. This module estimates the Lebesgue
//! measure of sublevel sets `{t : |f(t)| < eps}`, integrates `|log|f||`
//! across the zeros, and replaces incommensurate frequencies by a common
//! rational grid to obtain a periodic approximant with a guaranteed sup-norm
//! error.
//!
//! Local structure is resolved through `phi(t) = |f(t)|^2`, whose derivative
//! `phi' = 2 Re(conj(f) f')` is available in closed form. Between consecutive
//! sign changes of `phi'` the modulus is monotone, so level crossings and
//! minima are bracketed on a uniform grid and refined by bisection.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{invalid, QtError, Result};
use crate::numeric::{bisect, NeumaierSum};
use crate::spectral::{check_dim, EnergySpectrum, QuantumState};

/// Bisection tolerance in `t` for crossings and minima.
pub const REFINE_TOL: f64 = 1e-12;

/// Grid points per shortest period.
const POINTS_PER_PERIOD: f64 = 20.0;

const GL_DEGREE: usize = 12;
const GRADED_STOP: f64 = 1e-9;
const GRADED_MIN_LEVELS: usize = 4;
const GRADED_MAX_LEVELS: usize = 64;

/// Largest joint denominator accepted by [`periodic_approximation`].
pub const DENOMINATOR_CAP: u64 = 1_000_000_000;

/// A finite trigonometric sum `sum_j a_j exp(-i w_j t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSignal {
    freqs: Vec<f64>,
    amps: Vec<Complex64>,
}

impl TrigSignal {
    pub fn new(freqs: Vec<f64>, amps: Vec<Complex64>) -> Result<Self> {
        check_dim(freqs.len(), amps.len())?;
        if freqs.is_empty() {
            return Err(invalid("freqs", "signal has no terms"));
        }
        if freqs.iter().any(|w| !w.is_finite()) {
            return Err(invalid("freqs", "frequencies must be finite"));
        }
        if freqs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("freqs", "frequencies must be strictly increasing"));
        }
        Ok(Self { freqs, amps })
    }

    /// `f(t)` for a state: frequencies `E_j / hbar`, amplitudes `c_j`.
    pub fn from_state(spectrum: &EnergySpectrum, state: &QuantumState) -> Result<Self> {
        check_dim(spectrum.len(), state.len())?;
        Self::new(spectrum.frequencies(), state.coeffs().to_vec())
    }

    /// The same frequencies with conjugated amplitudes. Its modulus matches
    /// the canonical time amplitude `|sum_j c_j exp(+i E_j t / hbar)|`.
    pub fn conjugate_amplitudes(&self) -> Self {
        Self {
            freqs: self.freqs.clone(),
            amps: self.amps.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn count(&self) -> usize {
        self.freqs.len()
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.freqs
            .iter()
            .zip(&self.amps)
            .map(|(w, a)| a * Complex64::from_polar(1.0, -w * t))
            .sum()
    }

    /// `(f(t), f'(t))`.
    pub fn eval_with_derivative(&self, t: f64) -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for (w, a) in self.freqs.iter().zip(&self.amps) {
            let term = a * Complex64::from_polar(1.0, -w * t);
            f += term;
            df += Complex64::new(0.0, -w) * term;
        }
        (f, df)
    }

    /// `d|f|^2/dt`.
    pub fn modulus_sq_slope(&self, t: f64) -> f64 {
        let (f, df) = self.eval_with_derivative(t);
        2.0 * (f.conj() * df).re
    }

    /// `sum_j |a_j|`, an upper bound for `|f|`.
    pub fn modulus_bound(&self) -> f64 {
        self.amps.iter().map(|a| a.norm()).sum()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.amps.iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    /// Fastest rate present in `f` or in `|f|^2`.
    fn max_rate(&self) -> f64 {
        let w_abs = self.freqs.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        let span = self.freqs[self.freqs.len() - 1] - self.freqs[0];
        w_abs.max(span)
    }

    /// Grid cells on `[0, window]`: at least `base`, and at least
    /// [`POINTS_PER_PERIOD`] per shortest period.
    fn cells_for(&self, window: f64, base: usize) -> usize {
        let nyquist = (POINTS_PER_PERIOD * window * self.max_rate() / TAU).ceil() as usize;
        base.max(nyquist).max(1)
    }
}

pub fn eval_f(sig: &TrigSignal, t: f64) -> Complex64 {
    sig.eval(t)
}

/// Uniform grid with local extrema of `|f|` inserted, in increasing order.
/// `|f|` is monotone between consecutive points.
struct MonotoneMesh {
    points: Vec<f64>,
    minima: Vec<f64>,
    depth: u32,
}

impl MonotoneMesh {
    fn build(sig: &TrigSignal, window: f64, cells: usize) -> Self {
        let step = window / cells as f64;
        let grid: Vec<f64> = (0..=cells)
            .map(|i| if i == cells { window } else { i as f64 * step })
            .collect();
        let slopes: Vec<f64> = grid.par_iter().map(|&t| sig.modulus_sq_slope(t)).collect();
        let slope = |t: f64| sig.modulus_sq_slope(t);

        let mut minima = Vec::new();
        let mut extrema = Vec::new();
        let mut depth = 0;
        for i in 0..cells {
            let (a, b) = (grid[i], grid[i + 1]);
            let (da, db) = (slopes[i], slopes[i + 1]);
            let is_min = da < 0.0 && db >= 0.0;
            let is_max = da > 0.0 && db <= 0.0;
            if !(is_min || is_max) {
                continue;
            }
            let t = if db == 0.0 {
                b
            } else {
                let (t, d) = bisect(slope, a, b, REFINE_TOL);
                depth = depth.max(d);
                t
            };
            if is_min {
                minima.push(t);
            }
            extrema.push(t);
        }
        let mut points = grid;
        points.extend(extrema);
        points.sort_by(f64::total_cmp);
        points.dedup();
        Self {
            points,
            minima,
            depth,
        }
    }
}

/// Estimate of `lambda{t in [0, window] : |f(t)| < epsilon}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub epsilon: f64,
    pub window: f64,
    pub measure: f64,
    /// Deepest bisection used to refine a crossing or extremum.
    pub refinement_depth: u32,
    /// Refinement tolerance times the number of refined crossings.
    pub error_bound: f64,
    /// `epsilon >= sum |a_j|`: the whole window lies in the sublevel set.
    pub saturated: bool,
}

pub fn sublevel_measure(
    sig: &TrigSignal,
    epsilon: f64,
    window: f64,
    base_grid: usize,
) -> Result<MeasureReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid(
            "epsilon",
            format!("must be positive, got {epsilon}"),
        ));
    }
    check_window(window)?;
    if base_grid < 1000 {
        return Err(invalid(
            "base_grid",
            format!("need at least 1000, got {base_grid}"),
        ));
    }
    if epsilon >= sig.modulus_bound() {
        return Ok(MeasureReport {
            epsilon,
            window,
            measure: window,
            refinement_depth: 0,
            error_bound: 0.0,
            saturated: true,
        });
    }

    let mesh = MonotoneMesh::build(sig, window, sig.cells_for(window, base_grid));
    let excess: Vec<f64> = mesh
        .points
        .par_iter()
        .map(|&t| sig.eval(t).norm() - epsilon)
        .collect();
    let below = |t: f64| sig.eval(t).norm() - epsilon;

    let mut measure = NeumaierSum::new();
    let mut crossings = 0usize;
    let mut depth = mesh.depth;
    for (pts, g) in mesh.points.windows(2).zip(excess.windows(2)) {
        let (a, b) = (pts[0], pts[1]);
        match (g[0] < 0.0, g[1] < 0.0) {
            (true, true) => measure.add(b - a),
            (false, false) => {}
            (a_below, _) => {
                let (root, d) = bisect(below, a, b, REFINE_TOL);
                depth = depth.max(d);
                crossings += 1;
                measure.add(if a_below { root - a } else { b - root });
            }
        }
    }
    Ok(MeasureReport {
        epsilon,
        window,
        measure: measure.value().clamp(0.0, window),
        refinement_depth: depth,
        error_bound: REFINE_TOL * crossings as f64,
        saturated: false,
    })
}

/// Refined local minima of `|f|` on `[0, window]` whose modulus is at most
/// `threshold`, in increasing order.
pub fn find_zeros(
    sig: &TrigSignal,
    window: f64,
    threshold: f64,
    base_grid: usize,
) -> Result<Vec<f64>> {
    check_window(window)?;
    let mesh = MonotoneMesh::build(sig, window, sig.cells_for(window, base_grid));
    Ok(mesh
        .minima
        .into_iter()
        .filter(|&t| sig.eval(t).norm() <= threshold)
        .collect())
}

fn check_window(window: f64) -> Result<()> {
    if window > 0.0 && window.is_finite() {
        Ok(())
    } else {
        Err(invalid("window", format!("must be positive, got {window}")))
    }
}

/// Which log-modulus mean to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogMean {
    /// `window^{-1} int |log|f||`
    Absolute,
    /// `window^{-1} int log|f|`
    Signed,
}

/// `window^{-1} int_0^window |log|f(t)|| dt`.
pub fn paley_wiener_integral(sig: &TrigSignal, window: f64, panels: usize) -> Result<f64> {
    log_modulus_mean(sig, window, panels, LogMean::Absolute)
}

/// Window average of `log|f|` or `|log|f||`.
///
/// The window is cut into `panels` equal panels, further split at every
/// local minimum of `|f|` and at every crossing of `|f| = 1` (where
/// `|log|f||` has a kink). Pieces adjacent to a minimum or a window end are
/// integrated on dyadically shrinking subintervals until a piece contributes
/// less than 1e-9; the innermost remainder is then integrated directly.
/// Gauss-Legendre is used on every piece.
pub fn log_modulus_mean(
    sig: &TrigSignal,
    window: f64,
    panels: usize,
    variant: LogMean,
) -> Result<f64> {
    check_window(window)?;
    if panels < 100 {
        return Err(invalid(
            "panels",
            format!("need at least 100, got {panels}"),
        ));
    }
    if sig.is_identically_zero() {
        return Err(QtError::Divergence);
    }
    let gl = GaussLegendre::new(GL_DEGREE).expect("degree >= 2");
    let integrand = |t: f64| {
        let l = sig.eval(t).norm().ln();
        match variant {
            LogMean::Absolute => l.abs(),
            LogMean::Signed => l,
        }
    };

    let mesh = MonotoneMesh::build(sig, window, sig.cells_for(window, panels));
    let unit_excess: Vec<f64> = mesh
        .points
        .par_iter()
        .map(|&t| sig.eval(t).norm() - 1.0)
        .collect();
    let mut breaks: Vec<(f64, bool)> = Vec::new();
    for (pts, g) in mesh.points.windows(2).zip(unit_excess.windows(2)) {
        if (g[0] < 0.0) != (g[1] < 0.0) {
            let (t, _) = bisect(|t| sig.eval(t).norm() - 1.0, pts[0], pts[1], REFINE_TOL);
            breaks.push((t, false));
        }
    }
    breaks.extend((0..=panels).map(|i| (window * i as f64 / panels as f64, false)));
    breaks.extend(mesh.minima.iter().map(|&t| (t, true)));
    breaks.push((0.0, true));
    breaks.push((window, true));
    breaks.sort_by(|a, b| a.0.total_cmp(&b.0));
    // A plain breakpoint hugging a singular one would leave an ungraded
    // interval ending next to the singularity.
    let singular_pts: Vec<f64> = breaks.iter().filter(|b| b.1).map(|b| b.0).collect();
    let crowd = 1e-3 * window / panels as f64;
    let near_singular = |t: f64| {
        let i = singular_pts.partition_point(|&s| s < t);
        let left = i.checked_sub(1).map(|k| t - singular_pts[k]);
        let right = singular_pts.get(i).map(|s| s - t);
        left.into_iter().chain(right).any(|d| d < crowd)
    };
    breaks.retain(|&(t, singular)| singular || !near_singular(t));
    let mut merged: Vec<(f64, bool)> = Vec::with_capacity(breaks.len());
    for (t, singular) in breaks {
        match merged.last_mut() {
            Some(last) if last.0 == t => last.1 |= singular,
            _ => merged.push((t, singular)),
        }
    }

    let mut total = NeumaierSum::new();
    for pair in merged.windows(2) {
        let ((a, sa), (b, sb)) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let value = match (sa, sb) {
            (false, false) => gl.integrate(a, b, integrand),
            (true, false) => graded(&gl, &integrand, a, b),
            (false, true) => graded(&gl, &integrand, b, a),
            (true, true) => {
                let mid = 0.5 * (a + b);
                graded(&gl, &integrand, a, mid) + graded(&gl, &integrand, b, mid)
            }
        };
        total.add(value);
    }
    let mean = total.value() / window;
    if mean.is_finite() {
        Ok(mean)
    } else {
        Err(QtError::Divergence)
    }
}

/// Integral over the interval between `singular` and `other`, refined
/// dyadically toward `singular`.
fn graded<F: Fn(f64) -> f64>(gl: &GaussLegendre, g: &F, singular: f64, other: f64) -> f64 {
    let between = |x: f64, y: f64| gl.integrate(x.min(y), x.max(y), g);
    let mut acc = NeumaierSum::new();
    let mut width = other - singular;
    for level in 0..GRADED_MAX_LEVELS {
        let half = 0.5 * width;
        let piece = between(singular + half, singular + width);
        acc.add(piece);
        width = half;
        if level + 1 >= GRADED_MIN_LEVELS && piece.abs() < GRADED_STOP {
            break;
        }
    }
    acc.add(between(singular, singular + width));
    acc.value()
}

/// JSON record for the log-modulus integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaleyWienerRecord {
    pub window: f64,
    pub panels: usize,
    pub value: f64,
    /// Relative change to the `2 * panels` evaluation is at most 1e-5.
    pub converged: bool,
}

pub fn paley_wiener_record(
    sig: &TrigSignal,
    window: f64,
    panels: usize,
) -> Result<PaleyWienerRecord> {
    let value = paley_wiener_integral(sig, window, panels)?;
    let refined = paley_wiener_integral(sig, window, 2 * panels)?;
    let scale = value.abs().max(refined.abs());
    let converged = (refined - value).abs() <= 1e-5 * scale;
    Ok(PaleyWienerRecord {
        window,
        panels,
        value,
        converged,
    })
}

/// Window average of `g` over `[0, window]` by composite Gauss-Legendre with
/// `panels` equal panels.
pub fn bohr_mean_with_panels<G: Fn(f64) -> f64>(g: G, window: f64, panels: usize) -> Result<f64> {
    check_window(window)?;
    if panels == 0 {
        return Err(invalid("panels", "need at least one panel"));
    }
    let gl = GaussLegendre::new(GL_DEGREE).expect("degree >= 2");
    let width = window / panels as f64;
    let total: NeumaierSum = (0..panels)
        .map(|i| {
            let a = i as f64 * width;
            let b = if i + 1 == panels { window } else { a + width };
            gl.integrate(a, b, &g)
        })
        .collect();
    Ok(total.value() / window)
}

/// Window average of `g`, with 8 panels per unit time (at least 64).
/// Adequate for integrands with angular frequencies up to about 40.
pub fn bohr_mean<G: Fn(f64) -> f64>(g: G, window: f64) -> Result<f64> {
    check_window(window)?;
    let panels = ((8.0 * window).ceil() as usize).max(64);
    bohr_mean_with_panels(g, window, panels)
}

/// Continued-fraction convergents `(p, q)` of `x`, up to denominator `cap`.
/// Terminates early when `x` is reproduced exactly.
pub fn convergents(x: f64, cap: u64) -> Vec<(i128, u64)> {
    let mut out = Vec::new();
    let (mut p_prev, mut p) = (0i128, 1i128);
    let (mut q_prev, mut q) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e18 {
            break;
        }
        let ai = a as i128;
        let p_next = ai * p + p_prev;
        let q_next = ai * q + q_prev;
        if q_next > cap as i128 {
            break;
        }
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
        out.push((p, q as u64));
        let frac = rest - a;
        if frac == 0.0 || (p as f64 / q as f64) == x {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple of the denominators, if it stays within the cap.
fn joint_denominator(ratios: &[(i128, u64)]) -> Option<u64> {
    ratios.iter().try_fold(1u64, |acc, &(_, q)| {
        let l = (acc / gcd(acc, q)).checked_mul(q)?;
        (l <= DENOMINATOR_CAP).then_some(l)
    })
}

/// A periodic signal `sum_j a_j exp(-i k_j (2 pi / base_period) t)`
/// approximating an almost-periodic one.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicApproximant {
    pub signal: TrigSignal,
    pub base_period: f64,
    /// Integer harmonic numbers `k_j`.
    pub harmonics: Vec<i128>,
    /// Convergent `(p_j, q_j)` chosen for each ratio `w_j / w_anchor`.
    pub ratios: Vec<(i128, u64)>,
    /// `sum_j |a_j| |w_j - w~_j| * horizon`, an upper bound for the sup-norm
    /// error on `[0, horizon]`.
    pub drift_bound: f64,
}

/// Replaces each frequency by a rational multiple of an anchor frequency so
/// that all share a common period, keeping the amplitudes (and hence the
/// one-sided frequency support).
///
/// Ratios `w_j / w_anchor` are approximated by continued-fraction
/// convergents. Each non-anchor term with nonzero amplitude receives an equal
/// share of a drift budget of `tol / 10`; because
/// `|exp(-i w t) - exp(-i w~ t)| <= |w - w~| t`, the result satisfies
/// `sup_{[0, horizon]} |f - f~| <= drift_bound <= tol`.
pub fn periodic_approximation(
    sig: &TrigSignal,
    tol: f64,
    horizon: f64,
) -> Result<PeriodicApproximant> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid("tol", format!("must be positive, got {tol}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid(
            "horizon",
            format!("must be positive, got {horizon}"),
        ));
    }
    let freqs = sig.freqs();
    let amps = sig.amps();
    let Some(anchor) = freqs.iter().position(|w| *w != 0.0) else {
        // A lone zero frequency: constant signal, any period works.
        return Ok(PeriodicApproximant {
            signal: sig.clone(),
            base_period: TAU,
            harmonics: vec![0],
            ratios: vec![(0, 1)],
            drift_bound: 0.0,
        });
    };
    let w_anchor = freqs[anchor];
    let budget = 0.1 * tol;
    let active = (0..freqs.len())
        .filter(|&j| j != anchor && amps[j].norm() > 0.0)
        .count()
        .max(1);

    let expansions: Vec<Vec<(i128, u64)>> = freqs
        .iter()
        .map(|w| convergents(w / w_anchor, DENOMINATOR_CAP))
        .collect();
    // Index of the convergent currently used for each term.
    let mut chosen: Vec<usize> = Vec::with_capacity(freqs.len());
    for (j, exp) in expansions.iter().enumerate() {
        if exp.is_empty() {
            return Err(invalid(
                "freqs",
                format!("ratio for term {j} is not representable"),
            ));
        }
        let weight = amps[j].norm() * horizon;
        let share = budget / active as f64;
        let idx = exp
            .iter()
            .position(|&(p, q)| {
                let err = (freqs[j] - w_anchor * p as f64 / q as f64).abs();
                weight * err <= share
            })
            .unwrap_or(exp.len() - 1);
        chosen.push(idx);
    }

    loop {
        let ratios: Vec<(i128, u64)> = chosen.iter().zip(&expansions).map(|(&i, e)| e[i]).collect();
        let drift_of = |approx: &[f64]| -> f64 {
            freqs
                .iter()
                .zip(approx)
                .zip(amps)
                .map(|((w, wt), a)| a.norm() * (w - wt).abs() * horizon)
                .sum()
        };
        let Some(denominator) = joint_denominator(&ratios) else {
            // Back off the largest denominators until the joint one fits, and
            // report the drift that is actually attainable.
            let mut fallback = chosen.clone();
            let attainable = loop {
                let r: Vec<(i128, u64)> = fallback
                    .iter()
                    .zip(&expansions)
                    .map(|(&i, e)| e[i])
                    .collect();
                if joint_denominator(&r).is_some() {
                    let approx: Vec<f64> = r
                        .iter()
                        .map(|&(p, q)| w_anchor * p as f64 / q as f64)
                        .collect();
                    break drift_of(&approx);
                }
                let worst = (0..r.len()).max_by_key(|&j| r[j].1).expect("nonempty");
                fallback[worst] -= 1;
            };
            return Err(QtError::ApproximationFailure {
                cap: DENOMINATOR_CAP,
                achieved: attainable,
                requested: tol,
            });
        };
        let base_rate = w_anchor.abs() / denominator as f64;
        let sign = w_anchor.signum() as i128;
        let harmonics: Vec<i128> = ratios
            .iter()
            .map(|&(p, q)| sign * p * (denominator / q) as i128)
            .collect();
        let approx: Vec<f64> = harmonics.iter().map(|&k| k as f64 * base_rate).collect();
        let drift_bound = drift_of(&approx);
        let distinct = approx.windows(2).all(|w| w[0] < w[1]);
        if distinct && drift_bound <= tol {
            return Ok(PeriodicApproximant {
                signal: TrigSignal::new(approx, amps.to_vec())?,
                base_period: TAU / base_rate,
                harmonics,
                ratios,
                drift_bound,
            });
        }
        // Tighten every term that still has a finer convergent available.
        let mut advanced = false;
        for (i, e) in chosen.iter_mut().zip(&expansions) {
            if *i + 1 < e.len() {
                *i += 1;
                advanced = true;
            }
        }
        if !advanced {
            return Err(QtError::ApproximationFailure {
                cap: DENOMINATOR_CAP,
                achieved: drift_bound,
                requested: tol,
            });
        }
    }
}

/// `max |f(t) - g(t)|` over `points` evenly spaced samples of `[0, horizon]`.
pub fn sup_distance(f: &TrigSignal, g: &TrigSignal, horizon: f64, points: usize) -> f64 {
    let last = points.max(2) - 1;
    (0..=last)
        .into_par_iter()
        .map(|i| {
            let t = horizon * i as f64 / last as f64;
            (f.eval(t) - g.eval(t)).norm()
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn two_level() -> TrigSignal {
        TrigSignal::new(vec![0.5, 1.5], vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap()
    }

    #[test]
    fn signal_validation() {
        assert!(TrigSignal::new(vec![1.0, 1.0], vec![c(1.0), c(0.0)]).is_err());
        assert!(TrigSignal::new(vec![1.0], vec![c(1.0), c(0.0)]).is_err());
        assert!(TrigSignal::new(vec![], vec![]).is_err());
    }

    #[test]
    fn eval_examples() {
        let s = two_level();
        assert!((s.eval(0.0) - c(SQRT_2)).norm() < 1e-15);
        assert!(s.eval(PI).norm() < 1e-15);
        for k in 0..100 {
            let t = 0.13 * k as f64;
            assert!((s.eval(t).norm_sqr() - (1.0 + t.cos())).abs() < 1e-14);
            assert!(s.eval(t).norm() <= s.modulus_bound() + 1e-15);
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        let s = TrigSignal::new(
            vec![0.3, 1.1, 2.9],
            vec![Complex64::new(0.5, 0.1), Complex64::new(-0.2, 0.7), c(0.4)],
        )
        .unwrap();
        let h = 1e-6;
        for k in 0..20 {
            let t = 0.41 * k as f64;
            let fd = (s.eval(t + h).norm_sqr() - s.eval(t - h).norm_sqr()) / (2.0 * h);
            assert!((fd - s.modulus_sq_slope(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn saturated_measure() {
        let r = sublevel_measure(&two_level(), 1.5, TAU, 1000).unwrap();
        assert!(r.saturated);
        assert_eq!(r.measure, TAU);
        assert!(sublevel_measure(&two_level(), 0.0, TAU, 1000).is_err());
        assert!(sublevel_measure(&two_level(), 0.1, TAU, 999).is_err());
    }

    #[test]
    fn two_level_measure_closed_form() {
        for eps in [0.5, 0.1, 1e-3] {
            let r = sublevel_measure(&two_level(), eps, TAU, 1000).unwrap();
            let exact = 4.0 * (eps / SQRT_2).asin();
            assert!(
                (r.measure - exact).abs() < 1e-10,
                "eps={eps}: {}",
                r.measure
            );
            assert!(r.measure <= r.window);
        }
    }

    #[test]
    fn zero_free_signal_has_empty_sublevel() {
        let s = TrigSignal::new(vec![1.0, 2.0], vec![c(0.8), c(0.6)]).unwrap();
        let r = sublevel_measure(&s, 0.1, 50.0, 1000).unwrap();
        assert_eq!(r.measure, 0.0);
    }

    #[test]
    fn zeros_of_two_level() {
        let z = find_zeros(&two_level(), TAU, 1e-9, 1000).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0] - PI).abs() < 1e-11);
    }

    #[test]
    fn log_mean_of_unimodular_signal_is_zero() {
        let s = TrigSignal::new(vec![2.0], vec![Complex64::from_polar(1.0, 0.3)]).unwrap();
        assert!(paley_wiener_integral(&s, 10.0, 100).unwrap().abs() < 1e-15);
    }

    #[test]
    fn log_mean_of_zero_signal_diverges() {
        let s = TrigSignal::new(vec![1.0, 2.0], vec![c(0.0), c(0.0)]).unwrap();
        assert_eq!(
            paley_wiener_integral(&s, 1.0, 100),
            Err(QtError::Divergence)
        );
        assert!(paley_wiener_integral(&two_level(), 1.0, 99).is_err());
    }

    #[test]
    fn signed_log_mean_two_level() {
        let v = log_modulus_mean(&two_level(), TAU, 100, LogMean::Signed).unwrap();
        assert!((v + 0.5 * 2f64.ln()).abs() < 1e-8, "{v}");
    }

    #[test]
    fn bohr_mean_examples() {
        assert!((bohr_mean(|_| 1.0, 3.7).unwrap() - 1.0).abs() < 1e-14);
        assert!(bohr_mean(f64::cos, 4.0 * TAU).unwrap().abs() < 1e-14);
        let s = two_level();
        assert!((bohr_mean(|t| s.eval(t).norm_sqr(), TAU).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt2_convergents() {
        let cv = convergents(SQRT_2, DENOMINATOR_CAP);
        let expect = [
            (1, 1),
            (3, 2),
            (7, 5),
            (17, 12),
            (41, 29),
            (99, 70),
            (239, 169),
            (577, 408),
            (1393, 985),
        ];
        for (got, want) in cv.iter().zip(expect) {
            assert_eq!(*got, want);
        }
        assert_eq!(convergents(3.0, DENOMINATOR_CAP), vec![(3, 1)]);
        assert_eq!(
            convergents(0.75, DENOMINATOR_CAP),
            vec![(0, 1), (1, 1), (3, 4)]
        );
    }

    #[test]
    fn commensurate_signal_is_unchanged() {
        let s = two_level();
        let ap = periodic_approximation(&s, 1e-6, 100.0).unwrap();
        assert_eq!(ap.signal, s);
        assert_eq!(ap.drift_bound, 0.0);
        assert!((ap.base_period - 4.0 * PI).abs() < 1e-14);
        assert_eq!(ap.harmonics, vec![1, 3]);
    }

    #[test]
    fn approximation_errors() {
        assert!(periodic_approximation(&two_level(), 0.0, 1.0).is_err());
        assert!(periodic_approximation(&two_level(), 1e-3, -1.0).is_err());
        let third = 1.0 / 3f64.sqrt();
        let s = TrigSignal::new(vec![1.0, SQRT_2, PI], vec![c(third); 3]).unwrap();
        match periodic_approximation(&s, 1e-12, 1e6) {
            Err(QtError::ApproximationFailure { achieved, .. }) => assert!(achieved > 1e-12),
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
