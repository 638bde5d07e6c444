//! Hologram displacement scans: both detector traces, the higher-order
//! coefficients and the extinction / crossover metrics derived from them.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::{full_decomposition, DecompositionRecord, ModeDetectors, Truncation};
use crate::error::{invalid, Error, Result};
use crate::hologram::{apply_hologram, HologramSpec};
use crate::lg_field::{sample_mode, FieldGrid, GridSpec, LgMode, ModeSet};
use crate::scalar::Real;

/// `(p, L)` of the higher-order modes tracked along a scan.
pub const HIGHER_ORDERS: [(u32, i32); 3] = [(0, -1), (0, 2), (0, -2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectorSet {
    pub gauss: bool,
    pub lg: bool,
    pub higher: bool,
}

impl Default for DetectorSet {
    fn default() -> Self {
        Self {
            gauss: true,
            lg: true,
            higher: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec<T> {
    /// Direction of the displacement in the hologram plane; normalized on validation.
    pub axis: (T, T),
    pub start: T,
    pub stop: T,
    pub steps: usize,
    /// Displaced by `d·axis` from its own `(x0, y0)` at each step.
    pub hologram: HologramSpec<T>,
    pub input: LgMode<T>,
    pub grid: GridSpec<T>,
    pub detectors: DetectorSet,
    /// Keep the full decomposition over the default truncation per step.
    pub unitarity: bool,
    /// Also project onto the doubled truncation (four times the cost).
    pub truncation_guard: bool,
}

impl<T: Real> ScanSpec<T> {
    /// `d ∈ [−2w0, 2w0]` along `+x` in 81 steps, all detectors on.
    pub fn standard(input: LgMode<T>, hologram: HologramSpec<T>, grid: GridSpec<T>) -> Self {
        let two_w0 = T::lit(2.0) * input.w0;
        Self {
            axis: (T::one(), T::zero()),
            start: -two_w0,
            stop: two_w0,
            steps: 81,
            hologram,
            input,
            grid,
            detectors: DetectorSet::default(),
            unitarity: false,
            truncation_guard: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(invalid("steps", format!("need at least 2, got {}", self.steps)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start == self.stop {
            return Err(invalid("start/stop", "range must be finite and non-empty"));
        }
        let norm = self.axis.0.hypot(self.axis.1);
        if !(norm.is_finite() && norm > T::zero()) {
            return Err(invalid("axis", "must be a nonzero direction"));
        }
        self.hologram.validate()?;
        self.grid.validate()?;
        if self.grid.z != T::zero() {
            return Err(Error::NotAtWaist(self.grid.z.as_f64()));
        }
        LgMode::new(self.input.p, self.input.l, self.input.w0, self.input.wavelength)?;
        Ok(())
    }

    /// Displacements in increasing order.
    pub fn displacements(&self) -> Vec<T> {
        let (lo, hi) = if self.start <= self.stop {
            (self.start, self.stop)
        } else {
            (self.stop, self.start)
        };
        let last = T::from_usize_lossy(self.steps - 1);
        (0..self.steps)
            .map(|k| lo + (hi - lo) * T::from_usize_lossy(k) / last)
            .collect()
    }

    fn unit_axis(&self) -> (T, T) {
        let norm = self.axis.0.hypot(self.axis.1);
        (self.axis.0 / norm, self.axis.1 / norm)
    }

    /// Hologram moved by `d` along the axis.
    pub fn hologram_at(&self, d: T) -> HologramSpec<T> {
        let (ux, uy) = self.unit_axis();
        self.hologram.displaced(self.hologram.x0 + d * ux, self.hologram.y0 + d * uy)
    }

    /// Analyzer in front of the LG detector: an ideal centered single fork of the same period.
    pub fn analyzer(&self) -> Result<HologramSpec<T>> {
        HologramSpec::ideal_fork(self.hologram.period)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRecord<T> {
    pub displacement: T,
    pub i_gauss: Option<T>,
    pub i_lg: Option<T>,
    /// `|a|²` in the order of [`HIGHER_ORDERS`].
    pub higher: Option<[T; 3]>,
    pub decomposition: Option<DecompositionRecord<T>>,
    /// `Σ|a|²` over the doubled truncation.
    pub doubled_weight: Option<T>,
}

impl<T: Real> ScanRecord<T> {
    /// `Σ|a|²` over the default truncation.
    pub fn unitarity(&self) -> Option<T> {
        self.decomposition.as_ref().map(|d| d.total_weight())
    }

    pub fn truncation_change(&self) -> Option<T> {
        Some((self.doubled_weight? - self.unitarity()?).abs())
    }
}

struct Workspace<T> {
    input: FieldGrid<T>,
    detectors: Option<ModeDetectors<T>>,
    higher: Option<ModeSet<T>>,
}

fn workspace<T: Real>(spec: &ScanSpec<T>) -> Result<Workspace<T>> {
    let w0 = spec.input.w0;
    let wl = spec.input.wavelength;
    let input = sample_mode(&spec.input, &spec.grid)?;
    let detectors = if spec.detectors.gauss || spec.detectors.lg {
        Some(ModeDetectors::new(w0, wl, &spec.grid, spec.analyzer()?)?)
    } else {
        None
    };
    let higher = if spec.detectors.higher {
        Some(ModeSet::new(w0, wl, HIGHER_ORDERS.iter().map(|&(p, l)| (p, -l)).collect())?)
    } else {
        None
    };
    Ok(Workspace {
        input,
        detectors,
        higher,
    })
}

fn measure<T: Real>(spec: &ScanSpec<T>, ws: &Workspace<T>, d: T) -> Result<ScanRecord<T>> {
    let out = apply_hologram(&ws.input, &spec.hologram_at(d), 1)?;
    let i_gauss = match (&ws.detectors, spec.detectors.gauss) {
        (Some(det), true) => Some(det.gauss(&out)?),
        _ => None,
    };
    let i_lg = match (&ws.detectors, spec.detectors.lg) {
        (Some(det), true) => Some(det.lg(&out)?),
        _ => None,
    };
    let higher = match &ws.higher {
        Some(set) => {
            let a = set.project(&out)?;
            Some([a[0].norm_sqr(), a[1].norm_sqr(), a[2].norm_sqr()])
        }
        None => None,
    };
    let w0 = spec.input.w0;
    let base = Truncation::default();
    let (decomposition, doubled_weight) = match (spec.unitarity, spec.truncation_guard) {
        (_, true) => {
            let wide = full_decomposition(&out, w0, &base.doubled())?;
            let coefficients = wide
                .coefficients
                .iter()
                .filter(|((p, l), _)| base.radial.contains(p) && base.charges.contains(l))
                .map(|(&k, &a)| (k, a))
                .collect();
            let narrow = DecompositionRecord {
                coefficients,
                displacement: (T::zero(), T::zero()),
            };
            (Some(narrow), Some(wide.total_weight()))
        }
        (true, false) => (Some(full_decomposition(&out, w0, &base)?), None),
        (false, false) => (None, None),
    };
    let (ux, uy) = spec.unit_axis();
    let decomposition = decomposition.map(|mut r| {
        r.displacement = (d * ux, d * uy);
        r
    });
    Ok(ScanRecord {
        displacement: d,
        i_gauss,
        i_lg,
        higher,
        decomposition,
        doubled_weight,
    })
}

/// Diffracts the input through the hologram at each displacement (order 1,
/// demodulated) and evaluates the enabled detectors. Records are sorted by `d`.
pub fn run_scan<T: Real>(spec: &ScanSpec<T>) -> Result<Vec<ScanRecord<T>>> {
    spec.validate()?;
    let ws = workspace(spec)?;
    spec.displacements()
        .into_par_iter()
        .map(|d| measure(spec, &ws, d))
        .collect()
}

/// `min / max` of a trace.
pub fn extinction_ratio<T: Real>(trace: &[(T, T)]) -> Result<T> {
    if trace.is_empty() {
        return Err(invalid("trace", "empty"));
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for &(_, v) in trace {
        if !v.is_finite() || v < T::zero() {
            return Err(invalid("trace", format!("intensity {v} is not a finite non-negative value")));
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi <= T::zero() {
        return Err(invalid("trace", "all intensities are zero"));
    }
    Ok(lo / hi)
}

/// Trace divided by its own maximum.
pub fn normalized<T: Real>(trace: &[(T, T)]) -> Result<Vec<(T, T)>> {
    let hi = trace.iter().fold(T::zero(), |m, &(_, v)| m.max(v));
    if !(hi > T::zero()) {
        return Err(invalid("trace", "no positive intensity to normalize by"));
    }
    Ok(trace.iter().map(|&(d, v)| (d, v / hi)).collect())
}

/// Smallest positive displacement where the max-normalized traces intersect,
/// linearly interpolated between samples.
pub fn crossover<T: Real>(a: &[(T, T)], b: &[(T, T)]) -> Result<T> {
    if a.len() != b.len() || a.iter().zip(b).any(|(p, q)| p.0 != q.0) {
        return Err(invalid("traces", "must share the displacement axis"));
    }
    let a = normalized(a)?;
    let b = normalized(b)?;
    let diff: Vec<(T, T)> = a
        .iter()
        .zip(&b)
        .filter(|(p, _)| p.0 > T::zero())
        .map(|(p, q)| (p.0, p.1 - q.1))
        .collect();
    if let Some(&(d, _)) = diff.iter().find(|&&(_, v)| v == T::zero()) {
        return Ok(d);
    }
    for w in diff.windows(2) {
        let ((d0, v0), (d1, v1)) = (w[0], w[1]);
        if (v0 < T::zero()) != (v1 < T::zero()) {
            return Ok(d0 + (d1 - d0) * v0 / (v0 - v1));
        }
    }
    Err(invalid("traces", "do not intersect at positive displacement"))
}

fn trace<T: Real>(records: &[ScanRecord<T>], pick: impl Fn(&ScanRecord<T>) -> Option<T>) -> Option<Vec<(T, T)>> {
    records.iter().map(|r| pick(r).map(|v| (r.displacement, v))).collect()
}

pub fn gauss_trace<T: Real>(records: &[ScanRecord<T>]) -> Option<Vec<(T, T)>> {
    trace(records, |r| r.i_gauss)
}

pub fn lg_trace<T: Real>(records: &[ScanRecord<T>]) -> Option<Vec<(T, T)>> {
    trace(records, |r| r.i_lg)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary<T> {
    pub extinction_gauss: Option<T>,
    pub extinction_lg: Option<T>,
    /// `None` when the traces do not cross at positive displacement.
    pub crossover_over_w0: Option<T>,
    pub unitarity_min: Option<T>,
}

pub fn summarize<T: Real>(records: &[ScanRecord<T>], w0: T) -> Result<ScanSummary<T>> {
    let g = gauss_trace(records);
    let l = lg_trace(records);
    let extinction_gauss = g.as_deref().map(extinction_ratio).transpose()?;
    let extinction_lg = l.as_deref().map(extinction_ratio).transpose()?;
    let crossover_over_w0 = match (&g, &l) {
        (Some(g), Some(l)) => crossover(g, l).ok().map(|d| d / w0),
        _ => None,
    };
    let unitarity_min = records
        .iter()
        .map(|r| r.unitarity())
        .collect::<Option<Vec<T>>>()
        .and_then(|u| u.into_iter().reduce(T::min));
    Ok(ScanSummary {
        extinction_gauss,
        extinction_lg,
        crossover_over_w0,
        unitarity_min,
    })
}

/// `a(0, 0)` and `a(0, 1)` of a field: the Gaussian and charge-one weights.
pub fn principal_pair<T: Real>(field: &FieldGrid<T>, w0: T) -> Result<(Complex<T>, Complex<T>)> {
    let set = ModeSet::new(w0, field.wavelength(), vec![(0, 0), (0, -1)])?;
    let a = set.project(field)?;
    Ok((a[0], a[1]))
}
