//! Command-line front end: configuration in, deterministic artifacts out.
//!
//! Exit codes: 0 success, 2 configuration or domain error, 3 inconclusive
//! numeric gate, 4 enumeration budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use orthoseries::config::RunConfig;
use orthoseries::enumerate::{enumerate_arcs, enumerate_orthogeodesics, EnumError, PartialSpectrum};
use orthoseries::hyp2::HPoint;
use orthoseries::report::{
    arcs_csv, orthospectrum_csv, plot_csv, to_json_pretty, ArcsReport, ErrorReport, EtaReport,
    IdentityReport, Provenance, SpectrumReport, IDENTITY_SCHEMA,
};
use orthoseries::series::{
    basmajian_residual_at, bridgeman_residual_with_factor, continue_at_zero, eta_xy_at_zero,
};
use orthoseries::surfaces::SurfaceModel;

#[derive(Parser)]
#[command(
    name = "orthoseries",
    about = "Orthospectra and regularized Poincaré series of hyperbolic surfaces \
             with geodesic boundary",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Pants boundary lengths, e.g. "2.0,2.0,2.0".
    #[arg(long)]
    pants: Option<String>,
    /// Length cutoff for enumerations.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Node-expansion budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Basepoints "x1,y1;x2,y2" for arc commands.
    #[arg(long)]
    basepoints: Option<String>,
    /// Seed for deterministic sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the orthospectrum and write CSV + JSON metadata.
    Spectrum(CommonArgs),
    /// Enumerate the geodesic-arc spectrum between two basepoints.
    Arcs(CommonArgs),
    /// Regularized value of the orthogeodesic series at s = 0.
    Eta(CommonArgs),
    /// Regularized value of the point-pair series at s = 0.
    EtaXy(CommonArgs),
    /// Basmajian and Bridgeman identity residuals across cutoffs.
    Identities(CommonArgs),
    /// Run the acceptance suite.
    Accept {
        /// Output directory for the acceptance report.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn fail(code: i32, message: String) -> ExitCode {
    let report = ErrorReport::new(code, message.clone());
    println!("{}", to_json_pretty(&report).trim_end());
    eprintln!("error: {message}");
    ExitCode::from(code as u8)
}

fn load_config(args: &CommonArgs) -> Result<RunConfig, String> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            RunConfig::from_json(&text).map_err(|e| e.to_string())?
        }
        None => RunConfig::pants(2.0, 2.0, 2.0),
    };
    if let Some(p) = &args.pants {
        let parts: Vec<f64> = p
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("cannot parse --pants: {e}"))?;
        if parts.len() != 3 {
            return Err("--pants needs three comma-separated lengths".into());
        }
        config.surface = orthoseries::SurfaceSpec::pants(parts[0], parts[1], parts[2]);
    }
    if let Some(c) = args.cutoff {
        config.cutoff = c;
    }
    if let Some(b) = args.budget {
        config.budget = b;
    }
    if let Some(s) = args.seed {
        config.seed = s;
        config.continuation.seed = s;
    }
    if let Some(bp) = &args.basepoints {
        let mut pts = Vec::new();
        for chunk in bp.split(';') {
            let xy: Vec<f64> = chunk
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| format!("cannot parse --basepoints: {e}"))?;
            if xy.len() != 2 {
                return Err("--basepoints needs pairs like x,y;x,y".into());
            }
            pts.push([xy[0], xy[1]]);
        }
        config.basepoints = Some(pts);
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Resolve the basepoint pair: from the config when given, otherwise
/// sampled deterministically from the seed.
fn basepoints(config: &RunConfig, model: &SurfaceModel) -> Result<(HPoint, HPoint), String> {
    match &config.basepoints {
        Some(list) if list.len() >= 2 => {
            let mk = |xy: [f64; 2]| {
                HPoint::new(xy[0], xy[1]).map_err(|e| format!("invalid basepoint: {e}"))
            };
            let x = mk(list[0])?;
            let y = mk(list[1])?;
            for (label, p) in [("first", &x), ("second", &y)] {
                if !model.contains_in_core(p).inside {
                    return Err(format!("{label} basepoint lies outside the core region"));
                }
            }
            Ok((x, y))
        }
        Some(_) => Err("need two basepoints".into()),
        None => {
            let pts = model.sample_core_points(2, config.seed.wrapping_add(42));
            Ok((pts[0], pts[1]))
        }
    }
}

fn budget_exit(dir: &Path, err: &EnumError) -> Option<ExitCode> {
    if let EnumError::BudgetExhausted { lower_bound, partial } = err {
        let (name, contents) = match partial.as_ref() {
            PartialSpectrum::Ortho(spec) => ("spectrum.csv.partial", orthospectrum_csv(spec)),
            PartialSpectrum::Arcs(spec) => ("arcs.csv.partial", arcs_csv(spec)),
        };
        let _ = write_artifact(dir, name, &contents);
        return Some(fail(
            4,
            format!(
                "enumeration budget exhausted; smallest unexplored lower bound {lower_bound}; \
                 partial spectrum written with suffix .partial"
            ),
        ));
    }
    None
}

fn cmd_spectrum(args: &CommonArgs) -> ExitCode {
    let config = match load_config(args) {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let model = match config.surface.build() {
        Ok(m) => m,
        Err(e) => return fail(2, e.to_string()),
    };
    let spectrum = match enumerate_orthogeodesics(&model, config.cutoff, config.enum_budget()) {
        Ok(s) => s,
        Err(e) => {
            if let Some(code) = budget_exit(&args.out, &e) {
                return code;
            }
            return fail(2, e.to_string());
        }
    };
    let report = SpectrumReport::new(&config, &spectrum);
    if write_artifact(&args.out, "spectrum.csv", &orthospectrum_csv(&spectrum)).is_err() {
        return fail(2, "cannot write artifacts".into());
    }
    if write_artifact(&args.out, "spectrum.json", &to_json_pretty(&report)).is_err() {
        return fail(2, "cannot write artifacts".into());
    }
    println!(
        "{} oriented orthogeodesics up to length {}",
        spectrum.records.len(),
        config.cutoff
    );
    ExitCode::SUCCESS
}

fn cmd_arcs(args: &CommonArgs) -> ExitCode {
    let config = match load_config(args) {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let model = match config.surface.build() {
        Ok(m) => m,
        Err(e) => return fail(2, e.to_string()),
    };
    let (x, y) = match basepoints(&config, &model) {
        Ok(v) => v,
        Err(e) => return fail(2, e),
    };
    let arcs = match enumerate_arcs(&model, &x, &y, config.cutoff, config.enum_budget()) {
        Ok(s) => s,
        Err(e) => {
            if let Some(code) = budget_exit(&args.out, &e) {
                return code;
            }
            return fail(2, e.to_string());
        }
    };
    if write_artifact(&args.out, "arcs.csv", &arcs_csv(&arcs)).is_err() {
        return fail(2, "cannot write artifacts".into());
    }
    let report = ArcsReport::new(&config, &arcs);
    if write_artifact(&args.out, "arcs.json", &to_json_pretty(&report)).is_err() {
        return fail(2, "cannot write artifacts".into());
    }
    println!(
        "{} geodesic arcs between ({}, {}) and ({}, {}) up to length {}",
        arcs.records.len(),
        x.x(),
        x.y(),
        y.x(),
        y.y(),
        config.cutoff
    );
    ExitCode::SUCCESS
}

fn cmd_eta(args: &CommonArgs) -> ExitCode {
    let config = match load_config(args) {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let model = match config.surface.build() {
        Ok(m) => m,
        Err(e) => return fail(2, e.to_string()),
    };
    let spectrum = match enumerate_orthogeodesics(&model, config.cutoff, config.enum_budget()) {
        Ok(s) => s,
        Err(e) => {
            if let Some(code) = budget_exit(&args.out, &e) {
                return code;
            }
            return fail(2, e.to_string());
        }
    };
    let lengths = spectrum.lengths();
    let estimate = match continue_at_zero(&lengths, config.cutoff, &config.continuation) {
        Ok(e) => e,
        Err(e) => return fail(2, e.to_string()),
    };
    let report = EtaReport::new(
        &config,
        "eta",
        spectrum.records.len(),
        Some(0.0),
        None,
        &estimate,
    );
    if write_artifact(&args.out, "eta.json", &to_json_pretty(&report)).is_err() {
        return fail(2, "cannot write artifacts".into());
    }
    let _ = write_artifact(
        &args.out,
        "eta_fit.csv",
        &plot_csv(&lengths, &estimate.tail, 200),
    );
    println!(
        "eta(0) estimate {:.6} +- {:.6} over {} records (growth rate {:.4}); gate: {}",
        estimate.value,
        estimate.uncertainty,
        spectrum.records.len(),
        estimate.delta,
        if estimate.conclusive {
            "conclusive"
        } else {
            "inconclusive"
        }
    );
    if !estimate.conclusive {
        return fail(
            3,
            format!(
                "cutoff sweep drift {:.4} exceeds uncertainty {:.4}",
                estimate.cutoff_drift, estimate.uncertainty
            ),
        );
    }
    ExitCode::SUCCESS
}

fn cmd_eta_xy(args: &CommonArgs) -> ExitCode {
    let config = match load_config(args) {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let model = match config.surface.build() {
        Ok(m) => m,
        Err(e) => return fail(2, e.to_string()),
    };
    let (x, y) = match basepoints(&config, &model) {
        Ok(v) => v,
        Err(e) => return fail(2, e),
    };
    let expected = 1.0 / model.euler_characteristic() as f64;
    let (estimate, arcs) = match eta_xy_at_zero(
        &model,
        &x,
        &y,
        config.cutoff,
        config.enum_budget(),
        &config.continuation,
    ) {
        Ok(v) => v,
        Err(e) => return fail(2, e.to_string()),
    };
    let report = EtaReport::new(
        &config,
        "eta-xy",
        arcs.records.len(),
        Some(expected),
        Some(vec![[x.x(), x.y()], [y.x(), y.y()]]),
        &estimate,
    );
    if write_artifact(&args.out, "eta_xy.json", &to_json_pretty(&report)).is_err() {
        return fail(2, "cannot write artifacts".into());
    }
    let _ = write_artifact(
        &args.out,
        "eta_xy_fit.csv",
        &plot_csv(&arcs.lengths(), &estimate.tail, 200),
    );
    println!(
        "eta_xy(0) estimate {:.6} +- {:.6} (expected 1/chi = {}); gate: {}",
        estimate.value,
        estimate.uncertainty,
        expected,
        if estimate.conclusive {
            "conclusive"
        } else {
            "inconclusive"
        }
    );
    if !estimate.conclusive {
        return fail(
            3,
            format!(
                "cutoff sweep drift {:.4} exceeds uncertainty {:.4}",
                estimate.cutoff_drift, estimate.uncertainty
            ),
        );
    }
    ExitCode::SUCCESS
}

fn cmd_identities(args: &CommonArgs) -> ExitCode {
    let config = match load_config(args) {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let model = match config.surface.build() {
        Ok(m) => m,
        Err(e) => return fail(2, e.to_string()),
    };
    let spectrum = match enumerate_orthogeodesics(&model, config.cutoff, config.enum_budget()) {
        Ok(s) => s,
        Err(e) => {
            if let Some(code) = budget_exit(&args.out, &e) {
                return code;
            }
            return fail(2, e.to_string());
        }
    };
    let boundary = model.boundary_total_length();
    let area = model.area();
    let steps = 5usize;
    let mut cutoffs = Vec::new();
    let mut bas = Vec::new();
    let mut bri = Vec::new();
    for i in 1..=steps {
        let l = config.cutoff * i as f64 / steps as f64;
        cutoffs.push(l);
        bas.push(basmajian_residual_at(&spectrum, &model, l));
        let factor = config.dilog_normalization.factor();
        match bridgeman_residual_with_factor(&spectrum, &model, l, factor) {
            Ok(r) => bri.push(r),
            Err(e) => return fail(2, e.to_string()),
        }
    }
    let report = IdentityReport {
        provenance: Provenance::new(IDENTITY_SCHEMA, &config),
        surface: config.surface.clone(),
        boundary_length: boundary,
        area,
        cutoffs: cutoffs.clone(),
        basmajian_relative: bas.iter().map(|r| r / boundary).collect(),
        bridgeman_relative: bri.iter().map(|r| r / area).collect(),
        basmajian_residuals: bas.clone(),
        bridgeman_residuals: bri.clone(),
    };
    if write_artifact(&args.out, "identities.json", &to_json_pretty(&report)).is_err() {
        return fail(2, "cannot write artifacts".into());
    }
    println!("cutoff  basmajian_residual  bridgeman_residual");
    for i in 0..cutoffs.len() {
        println!("{:6.2}  {:18.8}  {:18.8}", cutoffs[i], bas[i], bri[i]);
    }
    let decreasing =
        bas.windows(2).all(|w| w[1] <= w[0]) && bri.windows(2).all(|w| w[1] <= w[0]);
    if !decreasing {
        return fail(3, "identity residuals are not decreasing in the cutoff".into());
    }
    ExitCode::SUCCESS
}

fn cmd_accept(out: &Path) -> ExitCode {
    let report = orthoseries::accept::run_all(true);
    if write_artifact(out, "accept.json", &to_json_pretty(&report)).is_err() {
        return fail(2, "cannot write artifacts".into());
    }
    if report.all_passed {
        println!("all {} criteria passed", report.criteria.len());
        ExitCode::SUCCESS
    } else {
        let failed: Vec<String> = report
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.id, c.name))
            .collect();
        fail(3, format!("criteria failed: {}", failed.join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Arcs(args) => cmd_arcs(args),
        Command::Eta(args) => cmd_eta(args),
        Command::EtaXy(args) => cmd_eta_xy(args),
        Command::Identities(args) => cmd_identities(args),
        Command::Accept { out } => cmd_accept(out),
    }
}
