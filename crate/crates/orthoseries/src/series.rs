//! Poincaré series over length spectra: partial sums, critical-exponent
//! estimation, regularized continuation to `s = 0`, and the classical
//! orthospectrum identities.
//!
//! The continuation subtracts a fitted exponential tail from the counting
//! function: with `N(ℓ) ≈ Σ c_k e^{δ_k ℓ} + c₀` beyond the cutoff `L`,
//!
//! `η(s) ≈ Σ_{ℓ_i ≤ L} e^{-s ℓ_i} + Σ_k c_k δ_k e^{(δ_k - s)L}/(s - δ_k)`,
//!
//! each term analytic at `s = 0`, where the whole expression collapses to
//! `N(L) - Σ_k c_k e^{δ_k L}`: the constant term of the counting function.
//! The estimate is the median of that quantity over a grid of cutoffs,
//! window widths, and term counts; the interquartile spread is reported as
//! its uncertainty, and a cutoff-stability gate flags inconclusive runs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{enumerate_arcs, ArcSpectrum, EnumBudget, EnumError, Orthospectrum};
use crate::hyp2::HPoint;
use crate::special::{rogers_dilog, SpecialError};
use crate::surfaces::SurfaceModel;
use crate::tailfit::{counting_at, fit_integrated_family, FitError, TailModel};

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("need at least {needed} lengths, got {got}")]
    TooFewLengths { needed: usize, got: usize },
    #[error("lengths must be sorted ascending")]
    NotSorted,
    #[error("no tail fit succeeded on the sweep grid")]
    NoFit,
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// Truncated Dirichlet-type sum `Σ e^{-s ℓᵢ}` in ascending-length order
/// with Neumaier-compensated accumulation.
pub fn partial_sum(sorted_lengths: &[f64], s: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &l in sorted_lengths {
        let term = (-s * l).exp();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Leading exponential growth rate of the counting function: the slope of
/// a linear regression of `log N(ℓ)` against `ℓ` over the upper half of
/// the data window. Returns `(delta, standard error)`.
pub fn estimate_delta(sorted_lengths: &[f64]) -> Result<(f64, f64), SeriesError> {
    let n = sorted_lengths.len();
    if n < 200 {
        return Err(SeriesError::TooFewLengths { needed: 200, got: n });
    }
    if sorted_lengths.windows(2).any(|w| w[0] > w[1]) {
        return Err(SeriesError::NotSorted);
    }
    let start = n / 2;
    let pts: Vec<(f64, f64)> = (start..n)
        .map(|i| (sorted_lengths[i], ((i + 1) as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rss: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let stderr = (rss / (m - 2.0) / sxx).sqrt();
    Ok((slope, stderr))
}

/// Sweep configuration for the regularized continuation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationConfig {
    /// Term counts to sweep (conjugate pairs count once).
    pub term_counts: Vec<usize>,
    /// Window fractions: each window is `(L(1-f), L)`.
    pub window_fractions: Vec<f64>,
    /// Number of cutoffs swept over the top `cutoff_span` of the range.
    pub cutoff_count: usize,
    /// Fraction of the cutoff range swept, measured down from the top.
    pub cutoff_span: f64,
    /// Seed for the fit multi-start jitter.
    pub seed: u64,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig {
            term_counts: vec![2, 3],
            window_fractions: vec![0.5, 0.6, 0.7],
            cutoff_count: 12,
            cutoff_span: 0.3,
            seed: 0,
        }
    }
}

/// One sample of the continuation sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub cutoff: f64,
    pub window_fraction: f64,
    pub term_count: usize,
    pub value: f64,
    pub fit_rms: f64,
    pub constant_stderr: f64,
}

/// A regularized series value with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEstimate {
    /// Evaluation point of the series (zero for the headline estimates).
    pub s: f64,
    /// Median of the sweep samples.
    pub value: f64,
    /// Interquartile spread of the sweep samples, floored by the median
    /// fit residual.
    pub uncertainty: f64,
    /// Enumeration cutoff the sweep was anchored to.
    pub cutoff: f64,
    /// Fitted growth rate and its regression standard error.
    pub delta: f64,
    pub delta_stderr: f64,
    /// Whether the cutoff-stability gate passed: per-cutoff medians stay
    /// within the reported uncertainty of the overall median.
    pub conclusive: bool,
    /// Largest deviation of a per-cutoff median from the overall median.
    pub cutoff_drift: f64,
    /// Representative tail model (largest cutoff, widest window, most
    /// terms among successful fits).
    pub tail: TailModel,
    pub samples: Vec<SweepSample>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

/// Value of the continued series at `s = 0` for a single fitted tail:
/// `N(L) - Σ_k c_k e^{δ_k L}` (conjugate pairs combined).
pub fn continue_at_zero_with_tail(sorted_lengths: &[f64], cutoff: f64, tail: &TailModel) -> f64 {
    counting_at(sorted_lengths, cutoff) - tail.exponential_part(cutoff)
}



/// Continuation of the series to an arbitrary real `s` away from the
/// fitted exponents: truncated sum plus the closed-form tail integrals
/// `c_k δ_k e^{(δ_k - s)L} / (s - δ_k)`.
pub fn continue_at(sorted_lengths: &[f64], cutoff: f64, tail: &TailModel, s: f64) -> f64 {
    let idx = sorted_lengths.partition_point(|&l| l <= cutoff);
    let head = partial_sum(&sorted_lengths[..idx], s);
    let mut tail_sum = 0.0;
    for t in &tail.terms {
        let d = t.exponent;
        let v = t.coefficient * d * ((d - s) * cutoff).exp() / (s - d);
        tail_sum += if d.im.abs() > 0.0 { 2.0 * v.re } else { v.re };
    }
    head + tail_sum
}

/// Regularized value of the series at `s = 0` with uncertainty from a
/// sweep over cutoffs, window fractions, and term counts.
pub fn continue_at_zero(
    sorted_lengths: &[f64],
    cutoff: f64,
    config: &ContinuationConfig,
) -> Result<SeriesEstimate, SeriesError> {
    if sorted_lengths.windows(2).any(|w| w[0] > w[1]) {
        return Err(SeriesError::NotSorted);
    }
    let (delta, delta_stderr) = estimate_delta(sorted_lengths)?;
    let mut samples: Vec<SweepSample> = Vec::new();
    let mut representative: Option<TailModel> = None;
    let lo = cutoff * (1.0 - config.cutoff_span);
    for i in 0..config.cutoff_count {
        let l = if config.cutoff_count == 1 {
            cutoff
        } else {
            lo + (cutoff - lo) * i as f64 / (config.cutoff_count - 1) as f64
        };
        for &wf in &config.window_fractions {
            let window = (l * (1.0 - wf), l);
            let max_k = config.term_counts.iter().copied().max().unwrap_or(2);
            let Ok(family) = fit_integrated_family(sorted_lengths, max_k, window, delta, config.seed)
            else {
                continue;
            };
            for &k in &config.term_counts {
                let Some(tail) = family.get(k - 1) else { continue };
                // The constant of the counting function, read off the
                // linear column of the integrated fit.
                let value = tail.constant;
                if !value.is_finite() {
                    continue;
                }
                samples.push(SweepSample {
                    cutoff: l,
                    window_fraction: wf,
                    term_count: k,
                    value,
                    fit_rms: tail.residual_rms,
                    constant_stderr: tail.constant_stderr,
                });
                representative = Some(tail.clone());
            }
        }
    }
    if samples.is_empty() {
        return Err(SeriesError::NoFit);
    }
    // An ill-determined constant advertises itself through its own
    // least-squares standard error (degenerate exponent combinations blow
    // it up by orders of magnitude); such samples carry no information
    // about the limit and are excluded from the aggregation.
    let mut ses: Vec<f64> = samples.iter().map(|s| s.constant_stderr).collect();
    ses.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let se_median = quantile(&ses, 0.5);
    let se_cut = 2.0 * se_median;
    let kept: Vec<&SweepSample> = samples
        .iter()
        .filter(|s| s.constant_stderr <= se_cut)
        .collect();
    let kept = if kept.len() >= 4 {
        kept
    } else {
        samples.iter().collect()
    };
    let mut values: Vec<f64> = kept.iter().map(|s| s.value).collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let median = quantile(&values, 0.5);
    let iqr = quantile(&values, 0.75) - quantile(&values, 0.25);
    let uncertainty = iqr.max(se_median);

    // Stability gate: split the swept cutoffs into three tiers (low, mid,
    // high); the per-tier medians must stay within the reported
    // uncertainty of the overall median, otherwise the run is flagged
    // inconclusive.
    let mut cutoff_drift = 0.0f64;
    let tier_edges = [
        lo - 1e-9,
        lo + (cutoff - lo) / 3.0,
        lo + 2.0 * (cutoff - lo) / 3.0,
        cutoff + 1e-9,
    ];
    for t in 0..3 {
        let mut per: Vec<f64> = kept
            .iter()
            .filter(|s| s.cutoff > tier_edges[t] && s.cutoff <= tier_edges[t + 1])
            .map(|s| s.value)
            .collect();
        if per.is_empty() {
            continue;
        }
        per.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        cutoff_drift = cutoff_drift.max((quantile(&per, 0.5) - median).abs());
    }
    let conclusive = cutoff_drift <= uncertainty;

    Ok(SeriesEstimate {
        s: 0.0,
        value: median,
        uncertainty,
        cutoff,
        delta,
        delta_stderr,
        conclusive,
        cutoff_drift,
        tail: representative.expect("samples nonempty implies a fit"),
        samples,
    })
}

/// Regularized value at `s = 0` of the orthogeodesic series.
pub fn eta_at_zero(
    spectrum: &Orthospectrum,
    config: &ContinuationConfig,
) -> Result<SeriesEstimate, SeriesError> {
    continue_at_zero(&spectrum.lengths(), spectrum.cutoff, config)
}

/// Regularized value at `s = 0` of the point-pair series, with the arc
/// spectrum enumerated here. The basepoints are ordered canonically first,
/// so swapping them reproduces the identical estimate.
pub fn eta_xy_at_zero(
    model: &SurfaceModel,
    x: &HPoint,
    y: &HPoint,
    cutoff: f64,
    budget: EnumBudget,
    config: &ContinuationConfig,
) -> Result<(SeriesEstimate, ArcSpectrum), SeriesError> {
    let swap = (y.x(), y.y()) < (x.x(), x.y());
    let (a, b) = if swap { (y, x) } else { (x, y) };
    let arcs = enumerate_arcs(model, a, b, cutoff, budget)?;
    let estimate = continue_at_zero(&arcs.lengths(), cutoff, config)?;
    Ok((estimate, arcs))
}

/// Basmajian-identity defect of a truncated orthospectrum:
/// `|ℓ(∂Σ) - Σ 2 log coth(ℓ/2)|` over the records up to the cutoff.
pub fn basmajian_residual(spectrum: &Orthospectrum, model: &SurfaceModel) -> f64 {
    basmajian_residual_at(spectrum, model, spectrum.cutoff)
}

/// Basmajian defect using only records of length at most `ell`.
pub fn basmajian_residual_at(spectrum: &Orthospectrum, model: &SurfaceModel, ell: f64) -> f64 {
    let total: f64 = spectrum
        .records
        .iter()
        .filter(|r| r.length <= ell)
        .map(|r| 2.0 * (1.0 / (0.5 * r.length).tanh()).ln())
        .sum();
    (model.boundary_total_length() - total).abs()
}

/// Bridgeman-identity defect of a truncated orthospectrum:
/// `|vol(Σ) - (2/π) Σ R(sech²(ℓ/2))|` with `R` the Rogers dilogarithm.
pub fn bridgeman_residual(
    spectrum: &Orthospectrum,
    model: &SurfaceModel,
) -> Result<f64, SeriesError> {
    bridgeman_residual_at(spectrum, model, spectrum.cutoff)
}

/// Bridgeman defect using only records of length at most `ell`.
pub fn bridgeman_residual_at(
    spectrum: &Orthospectrum,
    model: &SurfaceModel,
    ell: f64,
) -> Result<f64, SeriesError> {
    bridgeman_residual_with_factor(spectrum, model, ell, 1.0)
}

/// Bridgeman defect with an explicit normalization multiplier on the
/// dilogarithm summands; the frozen calibration on the symmetric pants
/// fixed the factor at one.
pub fn bridgeman_residual_with_factor(
    spectrum: &Orthospectrum,
    model: &SurfaceModel,
    ell: f64,
    factor: f64,
) -> Result<f64, SeriesError> {
    let mut total = 0.0;
    for r in spectrum.records.iter().filter(|r| r.length <= ell) {
        let sech = 1.0 / (0.5 * r.length).cosh();
        total += rogers_dilog(sech * sech)?;
    }
    Ok((model.area() - factor * 2.0 / std::f64::consts::PI * total).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_sum_basics() {
        assert_eq!(partial_sum(&[], 1.0), 0.0);
        let single = [1.0];
        assert!((partial_sum(&single, 1.0) - (-1.0f64).exp()).abs() < 1e-16);
        let many = [0.5, 1.0, 2.0, 7.0];
        assert_eq!(partial_sum(&many, 0.0), 4.0);
    }

    #[test]
    fn partial_sum_monotone_in_s() {
        let lengths: Vec<f64> = (1..500).map(|i| (i as f64).ln() + 0.1).collect();
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let s = 1.2 + 0.1 * i as f64;
            let v = partial_sum(&lengths, s);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn delta_of_log_spectrum_is_one() {
        let lengths: Vec<f64> = (1..=100_000u64).map(|i| (i as f64).ln()).collect();
        let (d, err) = estimate_delta(&lengths).unwrap();
        assert!((d - 1.0).abs() < 0.02, "delta {d}");
        assert!(err < 0.02);
    }

    #[test]
    fn delta_of_double_log_spectrum_is_half() {
        let lengths: Vec<f64> = (1..=100_000u64).map(|i| 2.0 * (i as f64).ln()).collect();
        let (d, err) = estimate_delta(&lengths).unwrap();
        assert!((d - 0.5).abs() < 0.01, "delta {d}");
        assert!(err < 0.01);
    }

    #[test]
    fn delta_needs_enough_data() {
        let lengths: Vec<f64> = (1..100u64).map(|i| (i as f64).ln()).collect();
        assert!(matches!(
            estimate_delta(&lengths),
            Err(SeriesError::TooFewLengths { .. })
        ));
    }

    #[test]
    fn zeta_pipeline_recovers_minus_half() {
        let lengths: Vec<f64> = (1..=1_000_000u64).map(|i| (i as f64).ln()).collect();
        let cutoff = *lengths.last().unwrap();
        let est = continue_at_zero(&lengths, cutoff, &ContinuationConfig::default()).unwrap();
        assert!(
            (est.value + 0.5).abs() < 0.05,
            "estimate {} (uncertainty {})",
            est.value,
            est.uncertainty
        );
        assert!((est.delta - 1.0).abs() < 0.02);
    }

    #[test]
    fn zeta_pipeline_scale_invariance() {
        // Stretching lengths by 2 halves delta but fixes the same value at
        // s = 0.
        let lengths: Vec<f64> = (1..=1_000_000u64).map(|i| 2.0 * (i as f64).ln()).collect();
        let cutoff = *lengths.last().unwrap();
        let est = continue_at_zero(&lengths, cutoff, &ContinuationConfig::default()).unwrap();
        assert!(
            (est.value + 0.5).abs() < 0.05,
            "estimate {} (uncertainty {})",
            est.value,
            est.uncertainty
        );
        assert!((est.delta - 0.5).abs() < 0.01);
    }

    #[test]
    fn planted_constant_recovered() {
        // N(ℓ) = e^{0.6ℓ} + 2: arrivals at e^{0.6ℓ} = k - 1/2 plus two
        // zero-length entries planting the constant; the k = 1 arrival
        // falls below zero and is clamped to the origin.
        let mut lengths = vec![0.0, 0.0];
        lengths.extend((1..=400_000u64).map(|k| ((k as f64 - 0.5).ln() / 0.6).max(0.0)));
        let cutoff = *lengths.last().unwrap();
        let est = continue_at_zero(&lengths, cutoff, &ContinuationConfig::default()).unwrap();
        assert!(
            (est.value - 2.0).abs() < 0.1,
            "estimate {} (uncertainty {})",
            est.value,
            est.uncertainty
        );
    }

    #[test]
    fn eta_xy_is_symmetric_in_basepoints() {
        use crate::enumerate::EnumBudget;
        use crate::surfaces::build_pants;
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let pts = m.sample_core_points(2, 9);
        let light = ContinuationConfig {
            term_counts: vec![2],
            window_fractions: vec![0.5],
            cutoff_count: 3,
            cutoff_span: 0.2,
            seed: 0,
        };
        let (fwd, _) =
            eta_xy_at_zero(&m, &pts[0], &pts[1], 10.0, EnumBudget::default(), &light).unwrap();
        let (bwd, _) =
            eta_xy_at_zero(&m, &pts[1], &pts[0], 10.0, EnumBudget::default(), &light).unwrap();
        // The basepoint pair is ordered canonically inside the pipeline,
        // so the two estimates are identical, not merely close.
        assert!((fwd.value - bwd.value).abs() <= 1e-12);
        assert_eq!(fwd.value, bwd.value);
        assert_eq!(fwd.uncertainty, bwd.uncertainty);
    }

    #[test]
    fn continuation_matches_partial_sum_in_convergence_region() {
        let lengths: Vec<f64> = (1..=200_000u64).map(|i| (i as f64).ln()).collect();
        let cutoff = *lengths.last().unwrap();
        let (delta, _) = estimate_delta(&lengths).unwrap();
        let tail =
            crate::tailfit::fit_tail(&lengths, 2, (0.6 * cutoff, cutoff), delta, 0).unwrap();
        for s in [delta + 0.5, delta + 1.0, delta + 2.0] {
            let direct = partial_sum(&lengths, s);
            let continued = continue_at(&lengths, cutoff, &tail, s);
            // The truncated tail the continuation adds back is the part the
            // raw sum is missing; they agree where both converge.
            let full_zeta = crate::oracle::zeta_euler_maclaurin(s);
            assert!(
                (continued - full_zeta).abs() < 0.01 * full_zeta.abs() + 0.01,
                "s = {s}: continued {continued} vs zeta {full_zeta}"
            );
            assert!(continued >= direct - 1e-9);
        }
    }
}
