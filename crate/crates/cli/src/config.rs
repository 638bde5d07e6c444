//! Run configuration: one JSON document, unknown keys rejected, validated before any work.

use std::path::{Path, PathBuf};

use oam_core::decompose::Truncation;
use oam_core::hologram::{HologramSpec, Profile};
use oam_core::lg_field::{GridSpec, LgMode};
use oam_core::scan::{DetectorSet, ScanSpec};
use oam_core::superpose::Arm;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    pub extent_over_w0: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 1024,
            extent_over_w0: 8.0,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct BeamConfig {
    pub w0: f64,
    pub wavelength: f64,
}

impl Default for BeamConfig {
    fn default() -> Self {
        Self {
            w0: 1.0,
            wavelength: 1e-3,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorConfig {
    pub gauss: bool,
    pub lg: bool,
    pub higher: bool,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            gauss: true,
            lg: true,
            higher: true,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub axis: [f64; 2],
    pub start_over_w0: f64,
    pub stop_over_w0: f64,
    pub steps: usize,
    pub detectors: DetectorConfig,
    /// Full decomposition per displacement, written as one CSV each.
    pub unitarity: bool,
    /// Exit 3 if doubling the truncation moves Σ|a|² by 1e-3 or more.
    pub truncation_guard: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            axis: [1.0, 0.0],
            start_over_w0: -2.0,
            stop_over_w0: 2.0,
            steps: 81,
            detectors: DetectorConfig::default(),
            unitarity: false,
            truncation_guard: false,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ArmConfig {
    pub attenuation: f64,
    #[serde(default)]
    pub phase: f64,
    /// Diffraction order of the run's hologram placed in this arm.
    #[serde(default)]
    pub hologram_order: Option<i32>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InterferometerConfig {
    pub arm_a: ArmConfig,
    pub arm_b: ArmConfig,
}

impl Default for InterferometerConfig {
    fn default() -> Self {
        Self {
            arm_a: ArmConfig {
                attenuation: 1.0,
                phase: 0.0,
                hologram_order: None,
            },
            arm_b: ArmConfig {
                attenuation: 1.0,
                phase: 0.0,
                hologram_order: Some(1),
            },
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DecomposeConfig {
    pub charges: [i32; 2],
    pub radial: [u32; 2],
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        Self {
            charges: [-3, 3],
            radial: [0, 6],
        }
    }
}

impl DecomposeConfig {
    pub fn truncation(&self) -> Truncation {
        Truncation {
            charges: self.charges[0]..=self.charges[1],
            radial: self.radial[0]..=self.radial[1],
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub beam: BeamConfig,
    pub hologram: HologramSpec<f64>,
    pub scan: ScanConfig,
    pub interferometer: InterferometerConfig,
    pub decompose: DecomposeConfig,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig::default(),
            beam: BeamConfig::default(),
            hologram: HologramSpec {
                dm: 1,
                period: 0.1,
                depth: std::f64::consts::TAU,
                profile: Profile::Blazed,
                x0: 0.0,
                y0: 0.0,
            },
            scan: ScanConfig::default(),
            interferometer: InterferometerConfig::default(),
            decompose: DecomposeConfig::default(),
            output_dir: PathBuf::from("out"),
        }
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => bad(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let b = &self.beam;
        LgMode::gaussian(b.w0, b.wavelength).map_err(|e| bad(format!("beam: {e}")))?;
        self.grid_spec(0.0).map_err(|e| bad(format!("grid: {e}")))?;
        self.hologram.validate().map_err(|e| bad(format!("hologram: {e}")))?;
        self.scan_spec()?.validate().map_err(|e| bad(format!("scan: {e}")))?;
        for (name, arm) in [("arm_a", &self.interferometer.arm_a), ("arm_b", &self.interferometer.arm_b)] {
            if !(0.0..=1.0).contains(&arm.attenuation) {
                return Err(bad(format!("interferometer.{name}.attenuation {} outside [0, 1]", arm.attenuation)));
            }
            if !arm.phase.is_finite() {
                return Err(bad(format!("interferometer.{name}.phase must be finite")));
            }
        }
        let d = &self.decompose;
        if d.charges[0] > d.charges[1] || d.radial[0] > d.radial[1] {
            return Err(bad("decompose: ranges must be [low, high] with low <= high"));
        }
        Ok(())
    }

    pub fn grid_spec(&self, z: f64) -> oam_core::Result<GridSpec<f64>> {
        GridSpec::new(self.grid.n, self.grid.extent_over_w0 * self.beam.w0, z)
    }

    pub fn gaussian(&self) -> oam_core::Result<LgMode<f64>> {
        LgMode::gaussian(self.beam.w0, self.beam.wavelength)
    }

    pub fn scan_spec(&self) -> Result<ScanSpec<f64>, CliError> {
        let s = &self.scan;
        let w0 = self.beam.w0;
        let input = self.gaussian().map_err(|e| bad(format!("beam: {e}")))?;
        let grid = self.grid_spec(0.0).map_err(|e| bad(format!("grid: {e}")))?;
        Ok(ScanSpec {
            axis: (s.axis[0], s.axis[1]),
            start: s.start_over_w0 * w0,
            stop: s.stop_over_w0 * w0,
            steps: s.steps,
            hologram: self.hologram,
            input,
            grid,
            detectors: DetectorSet {
                gauss: s.detectors.gauss,
                lg: s.detectors.lg,
                higher: s.detectors.higher,
            },
            unitarity: s.unitarity,
            truncation_guard: s.truncation_guard,
        })
    }

    pub fn arm(&self, a: &ArmConfig) -> Arm<f64> {
        let arm = Arm::open(a.attenuation, a.phase);
        match a.hologram_order {
            Some(order) => arm.with_hologram(self.hologram, order),
            None => arm,
        }
    }
}
