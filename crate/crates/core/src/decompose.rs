//! Projection of diffracted fields onto the LG basis and the two detector models.
//!
//! Coefficients are keyed by `(p, L)` where `L` is the charge of the spatial
//! phase factor: a component `∝ e^{+iLθ}` is reported as `L`, so the vortex a
//! `+1` hologram order writes onto a Gaussian appears as `L = 1`. In the
//! `e^{-ilθ}` mode convention that target is `u_{p,-L}`.
//!
//! The Gaussian detector is a mono-mode fiber, i.e. `|⟨u00, u⟩|²`. The LG
//! detector puts a second, mirrored fork hologram in front of the same fiber;
//! it lowers the charge by one and couples a matched-waist `L = 1` mode with
//! efficiency [`ANALYZER_EFFICIENCY`].

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::hologram::{apply_hologram, HologramSpec};
use crate::lg_field::{inner_product, sample_mode, FieldGrid, LgMode, ModeSet};
use crate::scalar::Real;

/// Fiber coupling of a matched `LG` charge-one mode through the analyzer: `π/4`.
pub const ANALYZER_EFFICIENCY: f64 = std::f64::consts::FRAC_PI_4;

/// Basis mode of charge `charge` (spatial factor `e^{+i·charge·θ}`).
pub fn charge_mode<T: Real>(p: u32, charge: i32, w0: T, wavelength: T) -> Result<LgMode<T>> {
    LgMode::new(p, -charge, w0, wavelength)
}

/// Basis truncation for a full decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub charges: RangeInclusive<i32>,
    pub radial: RangeInclusive<u32>,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            charges: -3..=3,
            radial: 0..=6,
        }
    }
}

impl Truncation {
    /// Twice the charge range and twice the number of radial terms.
    pub fn doubled(&self) -> Self {
        let lo = *self.charges.start() * 2;
        let hi = *self.charges.end() * 2;
        let p_hi = (*self.radial.end() + 1) * 2 - 1;
        Self {
            charges: lo..=hi,
            radial: *self.radial.start()..=p_hi,
        }
    }

    fn pairs(&self) -> Vec<(u32, i32)> {
        self.radial
            .clone()
            .flat_map(|p| self.charges.clone().map(move |l| (p, l)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionRecord<T> {
    /// `(p, L) -> a`, sorted by `(p, L)`.
    pub coefficients: BTreeMap<(u32, i32), Complex<T>>,
    /// Displacement of the hologram that produced the field.
    pub displacement: (T, T),
}

impl<T: Real> DecompositionRecord<T> {
    pub fn get(&self, p: u32, charge: i32) -> Option<Complex<T>> {
        self.coefficients.get(&(p, charge)).copied()
    }

    pub fn weight(&self, p: u32, charge: i32) -> T {
        self.get(p, charge).map_or(T::zero(), |a| a.norm_sqr())
    }

    /// `Σ_p |a(p, L)|²`.
    pub fn charge_weight(&self, charge: i32) -> T {
        self.coefficients
            .iter()
            .filter(|((_, l), _)| *l == charge)
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr())
    }

    /// `Σ|a|²` over the whole truncation.
    pub fn total_weight(&self) -> T {
        self.coefficients.values().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }
}

fn require_waist<T: Real>(field: &FieldGrid<T>) -> Result<()> {
    if field.z() != T::zero() {
        return Err(Error::NotAtWaist(field.z().as_f64()));
    }
    Ok(())
}

/// `⟨target, field⟩` on the field's grid.
///
/// Only demodulated fields (as produced by [`apply_hologram`]) are supported,
/// so the reference is the plain target mode.
pub fn overlap_coefficient<T: Real>(
    field: &FieldGrid<T>,
    target: &LgMode<T>,
    carrier_removed: bool,
) -> Result<Complex<T>> {
    if !carrier_removed {
        return Err(Error::Unsupported(
            "projection onto carrier-modulated fields; demodulate with apply_hologram".into(),
        ));
    }
    require_waist(field)?;
    let reference = sample_mode(target, field.spec())?;
    inner_product(&reference, field)
}

/// Mono-mode fiber: `|⟨u00, field⟩|²` for a Gaussian of waist `w0`.
pub fn detector_gauss<T: Real>(field: &FieldGrid<T>, w0: T) -> Result<T> {
    let g = LgMode::gaussian(w0, field.wavelength())?;
    Ok(overlap_coefficient(field, &g, true)?.norm_sqr())
}

fn check_analyzer<T: Real>(analyzer: &HologramSpec<T>) -> Result<()> {
    analyzer.validate()?;
    if !analyzer.is_centered() {
        return Err(invalid("analyzer", "must be centered on the beam"));
    }
    if analyzer.dm.abs() != 1 {
        return Err(invalid("analyzer", format!("needs a single dislocation, got dm = {}", analyzer.dm)));
    }
    if (analyzer.depth - T::TAU()).abs() > T::lit(1e-9) * T::TAU() {
        return Err(invalid("analyzer", format!("depth must be 2π, got {}", analyzer.depth)));
    }
    Ok(())
}

/// Second hologram, mounted mirrored, in front of a mono-mode fiber.
///
/// Lowers the charge of the incoming light by `analyzer.dm` before the
/// Gaussian projection.
pub fn detector_lg<T: Real>(field: &FieldGrid<T>, w0: T, analyzer: &HologramSpec<T>) -> Result<T> {
    check_analyzer(analyzer)?;
    let converted = apply_hologram(field, &analyzer.flipped(), 1)?;
    detector_gauss(&converted, w0)
}

/// Both detectors with the reference Gaussian sampled once; for repeated use on one grid.
#[derive(Clone, Debug)]
pub struct ModeDetectors<T> {
    gaussian: FieldGrid<T>,
    analyzer: HologramSpec<T>,
}

impl<T: Real> ModeDetectors<T> {
    pub fn new(
        w0: T,
        wavelength: T,
        spec: &crate::lg_field::GridSpec<T>,
        analyzer: HologramSpec<T>,
    ) -> Result<Self> {
        check_analyzer(&analyzer)?;
        if spec.z != T::zero() {
            return Err(Error::NotAtWaist(spec.z.as_f64()));
        }
        let gaussian = sample_mode(&LgMode::gaussian(w0, wavelength)?, spec)?;
        Ok(Self { gaussian, analyzer })
    }

    pub fn gauss(&self, field: &FieldGrid<T>) -> Result<T> {
        require_waist(field)?;
        Ok(inner_product(&self.gaussian, field)?.norm_sqr())
    }

    pub fn lg(&self, field: &FieldGrid<T>) -> Result<T> {
        let converted = apply_hologram(field, &self.analyzer.flipped(), 1)?;
        self.gauss(&converted)
    }
}

/// All coefficients `a(p, L)` within `truncation`.
pub fn full_decomposition<T: Real>(
    field: &FieldGrid<T>,
    w0: T,
    truncation: &Truncation,
) -> Result<DecompositionRecord<T>> {
    require_waist(field)?;
    let pairs = truncation.pairs();
    let set = ModeSet::new(w0, field.wavelength(), pairs.iter().map(|&(p, l)| (p, -l)).collect())?;
    let coeffs = set.project(field)?;
    Ok(DecompositionRecord {
        coefficients: pairs.into_iter().zip(coeffs).collect(),
        displacement: (T::zero(), T::zero()),
    })
}
