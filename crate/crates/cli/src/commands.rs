//! Subcommand bodies. Each computes every output in memory and returns it;
//! nothing touches the filesystem until all of them have succeeded.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use oam_core::decompose::{charge_mode, full_decomposition, Truncation};
use oam_core::hologram::{apply_hologram, Profile};
use oam_core::io::{
    decomposition_csv, intensity_pgm, pgm, phase_pgm, read_fgrid, scan_csv, singularity_csv, write_fgrid,
    SingularityRow,
};
use oam_core::lg_field::{sample_mode, FieldGrid, LgMode};
use oam_core::scan::{principal_pair, run_scan, summarize, ScanSummary};
use oam_core::superpose::{find_singularities, make_superposition, mach_zehnder, singularity_prediction, Superposition};

use crate::config::RunConfig;
use crate::CliError;

/// Largest tolerated deviation of a sampled mode's power from 1.
pub const POWER_TOLERANCE: f64 = 1e-4;
/// Largest tolerated change of `Σ|a|²` when the truncation is doubled.
pub const TRUNCATION_TOLERANCE: f64 = 1e-3;

pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn text(name: impl Into<String>, text: String) -> Self {
        Self {
            name: name.into(),
            bytes: text.into_bytes(),
        }
    }

    fn binary(name: impl Into<String>, bytes: Vec<u8>) -> Self {
        Self {
            name: name.into(),
            bytes,
        }
    }
}

/// Files to write plus a human-readable report for stdout.
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub report: String,
}

fn sampled_checked(mode: &LgMode<f64>, cfg: &RunConfig, z: f64) -> Result<FieldGrid<f64>, CliError> {
    let f = sample_mode(mode, &cfg.grid_spec(z)?)?;
    let p = f.power();
    if (p - 1.0).abs() > POWER_TOLERANCE {
        return Err(CliError::Guard(format!(
            "grid too coarse or too small: sampled power of LG(p={}, l={}) is {p:.6}, expected 1 ± {POWER_TOLERANCE:e}",
            mode.p, mode.l
        )));
    }
    Ok(f)
}

fn input_beam(cfg: &RunConfig) -> Result<FieldGrid<f64>, CliError> {
    sampled_checked(&cfg.gaussian()?, cfg, 0.0)
}

fn field_images(prefix: &str, f: &FieldGrid<f64>) -> Result<Vec<Artifact>, CliError> {
    Ok(vec![
        Artifact::text(format!("{prefix}.fgrid"), write_fgrid(f)),
        Artifact::binary(format!("{prefix}_intensity.pgm"), intensity_pgm(f)?),
        Artifact::binary(format!("{prefix}_phase.pgm"), phase_pgm(f)?),
    ])
}

pub fn render_mode(cfg: &RunConfig, p: u32, l: i32, z: f64) -> Result<Outcome, CliError> {
    let mode = LgMode::new(p, l, cfg.beam.w0, cfg.beam.wavelength).map_err(|e| CliError::Config(e.to_string()))?;
    let f = sampled_checked(&mode, cfg, z)?;
    let prefix = format!("mode_p{p}_l{l}");
    Ok(Outcome {
        artifacts: field_images(&prefix, &f)?,
        report: format!("LG(p={p}, l={l}) at z={z}: power {:.12}\n", f.power()),
    })
}

pub fn hologram(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = cfg.grid_spec(0.0)?;
    let mut artifacts = Vec::new();
    for (name, profile) in [("binary", Profile::Binary), ("blazed", Profile::Blazed)] {
        let h = oam_core::hologram::HologramSpec { profile, ..cfg.hologram };
        artifacts.push(Artifact::binary(format!("hologram_{name}.pgm"), pgm(spec.n, &h.template(&spec))?));
    }
    Ok(Outcome {
        artifacts,
        report: format!(
            "templates for dm={} period={} depth={} on {}x{}\n",
            cfg.hologram.dm, cfg.hologram.period, cfg.hologram.depth, spec.n, spec.n
        ),
    })
}

fn json_number(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), |v| format!("{v:.16e}"))
}

fn summary_json(s: &ScanSummary<f64>) -> String {
    format!(
        "{{\n  \"extinction_gauss\": {},\n  \"extinction_lg\": {},\n  \"crossover_over_w0\": {},\n  \"unitarity_min\": {}\n}}\n",
        json_number(s.extinction_gauss),
        json_number(s.extinction_lg),
        json_number(s.crossover_over_w0),
        json_number(s.unitarity_min)
    )
}

pub fn scan(cfg: &RunConfig) -> Result<Outcome, CliError> {
    input_beam(cfg)?;
    let spec = cfg.scan_spec()?;
    let records = run_scan(&spec)?;
    if spec.truncation_guard {
        if let Some(r) = records
            .iter()
            .find(|r| r.truncation_change().is_some_and(|c| c >= TRUNCATION_TOLERANCE))
        {
            return Err(CliError::Guard(format!(
                "truncation not converged at d = {}: doubling changes Σ|a|² by {:.3e} (limit {TRUNCATION_TOLERANCE:e})",
                r.displacement,
                r.truncation_change().unwrap_or(f64::NAN)
            )));
        }
    }
    let w0 = cfg.beam.w0;
    let summary = summarize(&records, w0)?;
    let mut artifacts = vec![
        Artifact::text("scan.csv", scan_csv(&records, w0)),
        Artifact::text("scan_summary.json", summary_json(&summary)),
    ];
    for (k, r) in records.iter().enumerate() {
        if let Some(d) = &r.decomposition {
            artifacts.push(Artifact::text(format!("scan_decomposition_{k:03}.csv"), decomposition_csv(d)));
        }
    }
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6e}"));
    let report = format!(
        "{} displacements; extinction gauss {}, lg {}; crossover {} w0; unitarity min {}\n",
        records.len(),
        fmt(summary.extinction_gauss),
        fmt(summary.extinction_lg),
        fmt(summary.crossover_over_w0),
        fmt(summary.unitarity_min)
    );
    Ok(Outcome { artifacts, report })
}

/// `(γ, φ)` pairs of the built-in singularity table.
pub const DEFAULT_SINGULARITY_POINTS: [(f64, f64); 3] = [(1.0, 0.0), (2.0, PI), (100.0, 0.0)];

pub fn singularity(cfg: &RunConfig, points: &[(f64, f64)]) -> Result<Outcome, CliError> {
    input_beam(cfg)?;
    let spec = cfg.grid_spec(0.0)?;
    let u00 = cfg.gaussian()?;
    let u01 = LgMode::new(0, 1, cfg.beam.w0, cfg.beam.wavelength)?;
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut rows = Vec::with_capacity(sorted.len());
    for &(gamma, phase) in &sorted {
        let pred = singularity_prediction(gamma, phase, cfg.beam.w0).map_err(|e| CliError::Config(e.to_string()))?;
        let s = Superposition::from_gamma_phase(gamma, phase).map_err(|e| CliError::Config(e.to_string()))?;
        let f = make_superposition(&s, &u00, &u01, &spec)?;
        let rep = find_singularities(&f);
        let best = rep
            .found
            .iter()
            .min_by(|a, b| (a.r() - pred.r).abs().total_cmp(&(b.r() - pred.r).abs()));
        rows.push(SingularityRow {
            gamma,
            phase,
            r_pred: pred.r,
            theta_pred: pred.theta,
            r_found: best.map(|z| z.r()),
            theta_found: best.map(|z| z.theta()),
            winding: best.map_or(0, |z| z.winding),
        });
    }
    let mut report = String::new();
    for r in &rows {
        let _ = writeln!(
            report,
            "γ={} φ={:.6}: predicted r={:.6} θ={:.6}, found r={} θ={}",
            r.gamma,
            r.phase,
            r.r_pred,
            r.theta_pred,
            r.r_found.map_or("-".into(), |v| format!("{v:.6}")),
            r.theta_found.map_or("-".into(), |v| format!("{v:.6}"))
        );
    }
    Ok(Outcome {
        artifacts: vec![Artifact::text("singularity.csv", singularity_csv(&rows))],
        report,
    })
}

pub fn interfere(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = input_beam(cfg)?;
    let ic = &cfg.interferometer;
    let out = mach_zehnder(&input, &cfg.arm(&ic.arm_a), &cfg.arm(&ic.arm_b))?;
    let rec = full_decomposition(&out, cfg.beam.w0, &cfg.decompose.truncation())?;
    let (a0, a1) = principal_pair(&out, cfg.beam.w0)?;
    let mut artifacts = field_images("interfere", &out)?;
    artifacts.push(Artifact::text("interfere_decomposition.csv", decomposition_csv(&rec)));
    let report = format!(
        "output power {:.9}; a(0,0) = {:.9}{:+.9}i, a(0,1) = {:.9}{:+.9}i\n",
        out.power(),
        a0.re,
        a0.im,
        a1.re,
        a1.im
    );
    Ok(Outcome { artifacts, report })
}

pub fn decompose(cfg: &RunConfig, field: Option<&Path>) -> Result<Outcome, CliError> {
    let truncation: Truncation = cfg.decompose.truncation();
    let (f, displacement) = match field {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let f = read_fgrid::<f64>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            (f, (0.0, 0.0))
        }
        None => {
            let input = input_beam(cfg)?;
            (apply_hologram(&input, &cfg.hologram, 1)?, (cfg.hologram.x0, cfg.hologram.y0))
        }
    };
    let mut rec = full_decomposition(&f, cfg.beam.w0, &truncation)?;
    rec.displacement = displacement;
    let lg1 = charge_mode(0, 1, cfg.beam.w0, cfg.beam.wavelength)?;
    let report = format!(
        "{} coefficients; Σ|a|² = {:.9} of power {:.9}; |a(0,0)|² = {:.9}, |a(0,1)|² = {:.9} (target LG p={} l={})\n",
        rec.coefficients.len(),
        rec.total_weight(),
        f.power(),
        rec.weight(0, 0),
        rec.weight(0, 1),
        lg1.p,
        lg1.l
    );
    Ok(Outcome {
        artifacts: vec![Artifact::text("decomposition.csv", decomposition_csv(&rec))],
        report,
    })
}
