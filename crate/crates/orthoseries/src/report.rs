//! Machine-readable artifacts: spectrum CSV and JSON files, series and
//! identity reports, and plot data.
//!
//! Every artifact embeds the config hash and tool version, contains no
//! timestamps, and serializes deterministically, so a rerun with the same
//! configuration is byte-identical.

use serde::{Deserialize, Serialize};

use crate::config::{DilogNormalization, OrientationConvention, RunConfig};
use crate::enumerate::{ArcRecord, ArcSpectrum, OrthoRecord, Orthospectrum};
use crate::series::{SeriesEstimate, SweepSample};
use crate::surfaces::SurfaceSpec;
use crate::tailfit::TailModel;

pub const SPECTRUM_SCHEMA: &str = "orthoseries/spectrum/v1";
pub const ETA_SCHEMA: &str = "orthoseries/eta-report/v1";
pub const IDENTITY_SCHEMA: &str = "orthoseries/identity-report/v1";
pub const ERROR_SCHEMA: &str = "orthoseries/error/v1";
pub const ACCEPT_SCHEMA: &str = "orthoseries/accept-report/v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub schema: String,
    pub version: String,
    pub config_hash: String,
    pub orientation: OrientationConvention,
    pub dilog_normalization: DilogNormalization,
}

impl Provenance {
    pub fn new(schema: &str, config: &RunConfig) -> Provenance {
        Provenance {
            schema: schema.to_string(),
            version: crate::config::tool_version().to_string(),
            config_hash: config.hash(),
            orientation: config.orientation,
            dilog_normalization: config.dilog_normalization,
        }
    }
}

/// Metadata + records of an orthospectrum run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub surface: SurfaceSpec,
    pub cutoff: f64,
    pub record_count: usize,
    /// Counts per ordered boundary pair, keyed "i->j".
    pub pair_counts: std::collections::BTreeMap<String, usize>,
    pub min_length: Option<f64>,
    pub max_length: Option<f64>,
    pub records: Vec<OrthoRecord>,
}

impl SpectrumReport {
    pub fn new(config: &RunConfig, spectrum: &Orthospectrum) -> SpectrumReport {
        let mut pair_counts = std::collections::BTreeMap::new();
        for r in &spectrum.records {
            *pair_counts
                .entry(format!("{}->{}", r.from_boundary, r.to_boundary))
                .or_insert(0usize) += 1;
        }
        SpectrumReport {
            provenance: Provenance::new(SPECTRUM_SCHEMA, config),
            surface: spectrum.surface.clone(),
            cutoff: spectrum.cutoff,
            record_count: spectrum.records.len(),
            pair_counts,
            min_length: spectrum.records.first().map(|r| r.length),
            max_length: spectrum.records.last().map(|r| r.length),
            records: spectrum.records.clone(),
        }
    }
}

/// Metadata + records of an arc-spectrum run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcsReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub surface: SurfaceSpec,
    pub cutoff: f64,
    pub basepoints: Vec<[f64; 2]>,
    pub record_count: usize,
    pub min_length: Option<f64>,
    pub max_length: Option<f64>,
    pub records: Vec<ArcRecord>,
}

impl ArcsReport {
    pub fn new(config: &RunConfig, spectrum: &ArcSpectrum) -> ArcsReport {
        ArcsReport {
            provenance: Provenance::new(SPECTRUM_SCHEMA, config),
            surface: config.surface.clone(),
            cutoff: spectrum.cutoff,
            basepoints: vec![
                [spectrum.x.x(), spectrum.x.y()],
                [spectrum.y.x(), spectrum.y.y()],
            ],
            record_count: spectrum.records.len(),
            min_length: spectrum.records.first().map(|r| r.length),
            max_length: spectrum.records.last().map(|r| r.length),
            records: spectrum.records.clone(),
        }
    }
}

/// Report of a regularized series evaluation at `s = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EtaReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    /// "eta" for the orthogeodesic series, "eta-xy" for the point-pair
    /// series.
    pub kind: String,
    pub surface: SurfaceSpec,
    pub cutoff: f64,
    pub spectrum_size: usize,
    /// Expected value where one is known: 0 for the orthogeodesic series,
    /// `1/χ` for the point-pair series.
    pub expected: Option<f64>,
    pub estimate: f64,
    pub uncertainty: f64,
    pub delta: f64,
    pub delta_stderr: f64,
    pub conclusive: bool,
    pub cutoff_drift: f64,
    pub basepoints: Option<Vec<[f64; 2]>>,
    pub tail: TailModel,
    pub samples: Vec<SweepSample>,
}

impl EtaReport {
    pub fn new(
        config: &RunConfig,
        kind: &str,
        spectrum_size: usize,
        expected: Option<f64>,
        basepoints: Option<Vec<[f64; 2]>>,
        estimate: &SeriesEstimate,
    ) -> EtaReport {
        EtaReport {
            provenance: Provenance::new(ETA_SCHEMA, config),
            kind: kind.to_string(),
            surface: config.surface.clone(),
            cutoff: estimate.cutoff,
            spectrum_size,
            expected,
            estimate: estimate.value,
            uncertainty: estimate.uncertainty,
            delta: estimate.delta,
            delta_stderr: estimate.delta_stderr,
            conclusive: estimate.conclusive,
            cutoff_drift: estimate.cutoff_drift,
            basepoints,
            tail: estimate.tail.clone(),
            samples: estimate.samples.clone(),
        }
    }
}

/// Residuals of the boundary-length and area identities at a ladder of
/// cutoffs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    #[serde(flatten)]
    pub provenance: Provenance,
    pub surface: SurfaceSpec,
    pub boundary_length: f64,
    pub area: f64,
    pub cutoffs: Vec<f64>,
    pub basmajian_residuals: Vec<f64>,
    pub bridgeman_residuals: Vec<f64>,
    pub basmajian_relative: Vec<f64>,
    pub bridgeman_relative: Vec<f64>,
}

/// Structured error emitted by the command line on invalid input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorReport {
    pub schema: String,
    pub version: String,
    pub code: i32,
    pub error: String,
}

impl ErrorReport {
    pub fn new(code: i32, error: String) -> ErrorReport {
        ErrorReport {
            schema: ERROR_SCHEMA.to_string(),
            version: crate::config::tool_version().to_string(),
            code,
            error,
        }
    }
}

/// One acceptance criterion outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcceptReport {
    pub schema: String,
    pub version: String,
    pub criteria: Vec<CriterionResult>,
    pub all_passed: bool,
}

/// Spectrum CSV: one row per record, columns `length,from,to,word`.
pub fn orthospectrum_csv(spectrum: &Orthospectrum) -> String {
    let mut out = String::from("length,from,to,word\n");
    for r in &spectrum.records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.length, r.from_boundary, r.to_boundary, r.coset_rep
        ));
    }
    out
}

/// Arc CSV in the shared spectrum layout; the boundary columns are empty.
pub fn arcs_csv(spectrum: &ArcSpectrum) -> String {
    let mut out = String::from("length,from,to,word\n");
    for r in &spectrum.records {
        out.push_str(&format!("{},,,{}\n", r.length, r.word));
    }
    out
}

/// Plot CSV of one tail fit: `ell,N,N_fit,residual` on a uniform grid over
/// the fit window.
pub fn plot_csv(sorted_lengths: &[f64], tail: &TailModel, points: usize) -> String {
    let (w0, w1) = tail.window;
    let mut out = String::from("ell,N,N_fit,residual\n");
    for i in 0..points {
        let ell = w0 + (w1 - w0) * i as f64 / (points - 1) as f64;
        let n = crate::tailfit::counting_at(sorted_lengths, ell);
        let fit = tail.eval(ell);
        out.push_str(&format!("{},{},{},{}\n", ell, n, fit, n - fit));
    }
    out
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_orthogeodesics, EnumBudget};
    use crate::surfaces::build_pants;

    #[test]
    fn spectrum_report_roundtrips() {
        let cfg = RunConfig::pants(2.0, 2.0, 2.0);
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let spec = enumerate_orthogeodesics(&m, 4.0, EnumBudget::default()).unwrap();
        let report = SpectrumReport::new(&cfg, &spec);
        let text = to_json_pretty(&report);
        let back: SpectrumReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.record_count, spec.records.len());
        assert_eq!(back.provenance.schema, SPECTRUM_SCHEMA);
        assert_eq!(back.provenance.config_hash, cfg.hash());
    }

    #[test]
    fn csv_headers_are_stable() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let spec = enumerate_orthogeodesics(&m, 2.0, EnumBudget::default()).unwrap();
        let csv = orthospectrum_csv(&spec);
        assert!(csv.starts_with("length,from,to,word\n"));
        for line in csv.lines().skip(1) {
            assert_eq!(line.split(',').count(), 4);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = RunConfig::pants(1.0, 2.0, 3.0);
        let m = build_pants(1.0, 2.0, 3.0).unwrap();
        let s1 = enumerate_orthogeodesics(&m, 5.0, EnumBudget::default()).unwrap();
        let s2 = enumerate_orthogeodesics(&m, 5.0, EnumBudget::default()).unwrap();
        let r1 = to_json_pretty(&SpectrumReport::new(&cfg, &s1));
        let r2 = to_json_pretty(&SpectrumReport::new(&cfg, &s2));
        assert_eq!(r1, r2);
        assert_eq!(orthospectrum_csv(&s1), orthospectrum_csv(&s2));
    }
}
