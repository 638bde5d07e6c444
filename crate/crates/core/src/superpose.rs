//! Two-mode superpositions of `u00` with `u0,±1`, the interferometric way of
//! preparing them, and location of their phase singularities.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hologram::{apply_hologram, HologramSpec};
use crate::lg_field::{FieldGrid, GridSpec, LgMode};
use crate::scalar::{wrap_angle, Real};

/// Normalized amplitude pair: `alpha·u00 + beta·u01`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Superposition<T> {
    alpha: Complex<T>,
    beta: Complex<T>,
}

impl<T: Real> Superposition<T> {
    /// Normalizes `(alpha, beta)` to unit total weight.
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(invalid("alpha/beta", "amplitudes must be finite and not both zero"));
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    /// `(u00 + γ e^{iφ} u01) / sqrt(1 + γ²)`.
    pub fn from_gamma_phase(gamma: T, phase: T) -> Result<Self> {
        if !(gamma >= T::zero()) || !gamma.is_finite() {
            return Err(invalid("gamma", format!("must be finite and >= 0, got {gamma}")));
        }
        Self::new(Complex::new(T::one(), T::zero()), Complex::from_polar(gamma, phase))
    }

    pub fn pure_gaussian() -> Self {
        Self {
            alpha: Complex::new(T::one(), T::zero()),
            beta: Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn pure_vortex() -> Self {
        Self {
            alpha: Complex::new(T::zero(), T::zero()),
            beta: Complex::new(T::one(), T::zero()),
        }
    }

    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn beta(&self) -> Complex<T> {
        self.beta
    }

    /// `|beta| / |alpha|`; infinite for a pure vortex.
    pub fn gamma(&self) -> T {
        if self.alpha.norm() == T::zero() {
            T::infinity()
        } else {
            self.beta.norm() / self.alpha.norm()
        }
    }

    /// `arg(beta) - arg(alpha)` wrapped to `[-π, π)`.
    pub fn phase(&self) -> T {
        wrap_angle(self.beta.arg() - self.alpha.arg())
    }
}

/// Samples `alpha·mode0 + beta·mode1` on `grid`.
///
/// `mode0` must have `l = 0` and `mode1` `|l| = 1`, both with the same beam.
pub fn make_superposition<T: Real>(
    spec: &Superposition<T>,
    mode0: &LgMode<T>,
    mode1: &LgMode<T>,
    grid: &GridSpec<T>,
) -> Result<FieldGrid<T>> {
    if mode0.l != 0 {
        return Err(invalid("mode0", format!("expected l = 0, got l = {}", mode0.l)));
    }
    if mode1.l.abs() != 1 {
        return Err(invalid("mode1", format!("expected |l| = 1, got l = {}", mode1.l)));
    }
    if !mode0.same_beam(mode1) {
        return Err(Error::BeamMismatch(format!(
            "w0 {} / {}, wavelength {} / {}",
            mode0.w0, mode1.w0, mode0.wavelength, mode1.wavelength
        )));
    }
    LgMode::new(mode0.p, mode0.l, mode0.w0, mode0.wavelength)?;
    let (a, b, z) = (spec.alpha, spec.beta, grid.z);
    FieldGrid::from_fn(*grid, mode0.wavelength, |x, y| {
        let r = x.hypot(y);
        let th = y.atan2(x);
        mode0.amplitude(r, th, z) * a + mode1.amplitude(r, th, z) * b
    })
}

/// Polar position in the transverse plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polar<T> {
    pub r: T,
    pub theta: T,
}

/// Singularity position law for `u00 + γe^{iφ}u01`: `r = w0/(γ√2)`, `θ = φ`.
pub fn singularity_prediction<T: Real>(gamma: T, phase: T, w0: T) -> Result<Polar<T>> {
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(invalid("gamma", format!("must be positive and finite, got {gamma}")));
    }
    Ok(Polar {
        r: w0 / (gamma * T::lit(2.0).sqrt()),
        theta: phase,
    })
}

/// One located phase singularity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Singularity<T> {
    pub x: T,
    pub y: T,
    /// Counterclockwise phase circulation in units of 2π.
    pub winding: i32,
}

impl<T: Real> Singularity<T> {
    pub fn r(&self) -> T {
        self.x.hypot(self.y)
    }

    pub fn theta(&self) -> T {
        self.y.atan2(self.x)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingularityReport<T> {
    pub found: Vec<Singularity<T>>,
}

impl<T: Real> SingularityReport<T> {
    pub fn total_winding(&self) -> i32 {
        self.found.iter().map(|s| s.winding).sum()
    }

    pub fn nearest(&self, x: T, y: T) -> Option<&Singularity<T>> {
        self.found.iter().min_by(|a, b| {
            let da = (a.x - x).hypot(a.y - y);
            let db = (b.x - x).hypot(b.y - y);
            da.partial_cmp(&db).unwrap()
        })
    }
}

/// Locates every grid cell whose four-corner phase circulation is nonzero.
///
/// Positions are refined inside the cell to the common zero of the bilinear
/// interpolants of `Re u` and `Im u`. Output is in row-major cell order.
pub fn find_singularities<T: Real>(field: &FieldGrid<T>) -> SingularityReport<T> {
    let n = field.n();
    let spec = *field.spec();
    let h = spec.spacing();
    let tau = T::TAU();
    let rows: Vec<Vec<Singularity<T>>> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in 0..n - 1 {
                // counterclockwise with x along j and y along i
                let corners = [
                    field.get(i, j),
                    field.get(i, j + 1),
                    field.get(i + 1, j + 1),
                    field.get(i + 1, j),
                ];
                let mut circ = T::zero();
                for k in 0..4 {
                    let d = corners[(k + 1) % 4].arg() - corners[k].arg();
                    circ = circ + wrap_angle(d);
                }
                let winding = (circ / tau).round().to_i32().unwrap_or(0);
                if winding == 0 {
                    continue;
                }
                let (s, t) = bilinear_zero(corners[0], corners[1], corners[3], corners[2]);
                out.push(Singularity {
                    x: spec.coord(j) + s * h,
                    y: spec.coord(i) + t * h,
                    winding,
                });
            }
            out
        })
        .collect();
    SingularityReport {
        found: rows.into_iter().flatten().collect(),
    }
}

/// Zero of `f(s,t) = c00(1-s)(1-t) + c10·s(1-t) + c01(1-s)t + c11·st` in the unit cell.
///
/// `c10` is the corner one step along `s`, `c01` one step along `t`. Falls back
/// to the cell centre when Newton's iteration leaves the cell.
fn bilinear_zero<T: Real>(c00: Complex<T>, c10: Complex<T>, c01: Complex<T>, c11: Complex<T>) -> (T, T) {
    let a = c00;
    let b = c10 - c00;
    let c = c01 - c00;
    let d = c11 - c10 - c01 + c00;
    let half = T::lit(0.5);
    let (mut s, mut t) = (half, half);
    for _ in 0..50 {
        let f = a + b * s + c * t + d * (s * t);
        let fs = b + d * t;
        let ft = c + d * s;
        // real 2×2 Jacobian [[Re fs, Re ft], [Im fs, Im ft]]
        let det = fs.re * ft.im - ft.re * fs.im;
        if det == T::zero() || !det.is_finite() {
            break;
        }
        let ds = (f.re * ft.im - ft.re * f.im) / det;
        let dt = (fs.re * f.im - f.re * fs.im) / det;
        s = s - ds;
        t = t - dt;
        if ds.abs() + dt.abs() < T::epsilon() * T::lit(4.0) {
            break;
        }
    }
    let lo = T::lit(-0.25);
    let hi = T::lit(1.25);
    if !(s >= lo && s <= hi && t >= lo && t <= hi) {
        return (half, half);
    }
    (s.max(T::zero()).min(T::one()), t.max(T::zero()).min(T::one()))
}

/// One arm of the interferometer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arm<T> {
    /// Amplitude transmission in `[0, 1]`.
    pub attenuation: T,
    /// Phase-plate setting in radians.
    #[serde(default)]
    pub phase: T,
    /// Optional hologram and the diffraction order kept.
    #[serde(default)]
    pub hologram: Option<(HologramSpec<T>, i32)>,
}

impl<T: Real> Arm<T> {
    pub fn open(attenuation: T, phase: T) -> Self {
        Self {
            attenuation,
            phase,
            hologram: None,
        }
    }

    pub fn with_hologram(self, h: HologramSpec<T>, order: i32) -> Self {
        Self {
            hologram: Some((h, order)),
            ..self
        }
    }

    fn validate(&self, name: &'static str) -> Result<()> {
        if !(self.attenuation >= T::zero() && self.attenuation <= T::one()) {
            return Err(invalid(name, format!("attenuation {} outside [0, 1]", self.attenuation)));
        }
        if !self.phase.is_finite() {
            return Err(invalid(name, "phase must be finite"));
        }
        Ok(())
    }

    fn propagate(&self, input: &FieldGrid<T>) -> Result<FieldGrid<T>> {
        let g = Complex::from_polar(self.attenuation, self.phase);
        match &self.hologram {
            Some((h, order)) => Ok(apply_hologram(input, h, *order)?.scaled(g)),
            None => Ok(input.scaled(g)),
        }
    }
}

/// Field at one output port of a Mach-Zehnder with ideal 50:50 splitters:
/// `(t_A e^{iφ_A} X_A(in) + t_B e^{iφ_B} X_B(in)) / 2`.
pub fn mach_zehnder<T: Real>(input: &FieldGrid<T>, arm_a: &Arm<T>, arm_b: &Arm<T>) -> Result<FieldGrid<T>> {
    arm_a.validate("arm_a")?;
    arm_b.validate("arm_b")?;
    let a = arm_a.propagate(input)?;
    let b = arm_b.propagate(input)?;
    let half = Complex::new(T::lit(0.5), T::zero());
    FieldGrid::linear_combination(&[(half, &a), (half, &b)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hologram::Profile;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};

    fn modes() -> (LgMode<f64>, LgMode<f64>) {
        let g = LgMode::gaussian(1.0, 1e-3).unwrap();
        (g, g.with_indices(0, 1))
    }

    fn grid() -> GridSpec<f64> {
        GridSpec::at_waist(256, 4.0).unwrap()
    }

    #[test]
    fn amplitude_pair_is_normalized() {
        let s = Superposition::from_gamma_phase(2.0f64, 1.0).unwrap();
        assert!((s.alpha().norm_sqr() + s.beta().norm_sqr() - 1.0).abs() < 1e-12);
        assert!((s.gamma() - 2.0).abs() < 1e-12);
        assert!((s.phase() - 1.0).abs() < 1e-12);
        assert!(Superposition::<f64>::pure_vortex().gamma().is_infinite());
        assert!(Superposition::from_gamma_phase(-1.0, 0.0).is_err());
        assert!(Superposition::new(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn pure_members_reproduce_modes() {
        let (u0, u1) = modes();
        let g = grid();
        let a = make_superposition(&Superposition::pure_gaussian(), &u0, &u1, &g).unwrap();
        let b = make_superposition(&Superposition::pure_vortex(), &u0, &u1, &g).unwrap();
        assert_eq!(a, crate::lg_field::sample_mode(&u0, &g).unwrap());
        assert_eq!(b, crate::lg_field::sample_mode(&u1, &g).unwrap());
    }

    #[test]
    fn rejects_mismatched_modes() {
        let (u0, u1) = modes();
        let g = grid();
        let s = Superposition::from_gamma_phase(1.0, 0.0).unwrap();
        assert!(make_superposition(&s, &u1, &u1, &g).is_err());
        assert!(make_superposition(&s, &u0, &u0.with_indices(0, 2), &g).is_err());
        let wide = LgMode::new(0, 1, 1.5, 1e-3).unwrap();
        assert!(matches!(make_superposition(&s, &u0, &wide, &g), Err(Error::BeamMismatch(_))));
    }

    #[test]
    fn prediction_examples() {
        let p = singularity_prediction(1.0, 0.0, 1.0).unwrap();
        assert!((p.r - FRAC_1_SQRT_2).abs() < 1e-15 && p.theta == 0.0);
        let p = singularity_prediction(2.0, PI, 1.0).unwrap();
        assert!((p.r - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15 && p.theta == PI);
        let p = singularity_prediction(100.0, 0.3, 1.0).unwrap();
        assert!(p.r < 0.01);
        assert!(singularity_prediction(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn pure_vortex_has_central_singularity() {
        let (u0, u1) = modes();
        let g = grid();
        let f = make_superposition(&Superposition::pure_vortex(), &u0, &u1, &g).unwrap();
        let rep = find_singularities(&f);
        assert_eq!(rep.found.len(), 1);
        let s = rep.found[0];
        assert!(s.r() < g.spacing());
        // e^{-iθ}: phase decreases counterclockwise
        assert_eq!(s.winding, -1);
        let flipped = make_superposition(&Superposition::pure_vortex(), &u0, &u0.with_indices(0, -1), &g).unwrap();
        assert_eq!(find_singularities(&flipped).total_winding(), 1);
    }

    #[test]
    fn gaussian_has_no_singularity() {
        let (u0, u1) = modes();
        let f = make_superposition(&Superposition::pure_gaussian(), &u0, &u1, &grid()).unwrap();
        assert!(find_singularities(&f).found.is_empty());
    }

    #[test]
    fn superposition_zero_sits_opposite_the_phase() {
        // 1 + γe^{iφ}(r√2/w0)e^{-iθ} = 0  =>  r = w0/(γ√2), θ = φ + π
        let (u0, u1) = modes();
        let g = GridSpec::at_waist(512, 4.0).unwrap();
        for &(gamma, phase) in &[(1.0, 0.0), (1.0, FRAC_PI_2), (2.0, 1.0), (0.5, -2.0)] {
            let s = Superposition::from_gamma_phase(gamma, phase).unwrap();
            let f = make_superposition(&s, &u0, &u1, &g).unwrap();
            let rep = find_singularities(&f);
            assert_eq!(rep.found.len(), 1, "γ={gamma} φ={phase}");
            let found = rep.found[0];
            let r = 1.0 / (gamma * 2f64.sqrt());
            let th = phase + PI;
            assert!((found.x - r * th.cos()).abs() < 1.0 / 200.0);
            assert!((found.y - r * th.sin()).abs() < 1.0 / 200.0);
            assert_eq!(found.winding, -1);
        }
    }

    #[test]
    fn subpixel_refinement_beats_grid_spacing() {
        let (u0, u1) = modes();
        let g = GridSpec::at_waist(128, 4.0).unwrap();
        let s = Superposition::from_gamma_phase(1.3, 0.4).unwrap();
        let f = make_superposition(&s, &u0, &u1, &g).unwrap();
        let found = find_singularities(&f).found[0];
        let r = 1.0 / (1.3 * 2f64.sqrt());
        let th = 0.4 + PI;
        let err = (found.x - r * th.cos()).hypot(found.y - r * th.sin());
        assert!(err < 0.1 * g.spacing(), "err {err} vs h {}", g.spacing());
    }

    #[test]
    fn bilinear_zero_of_linear_field() {
        // f = (s - 0.3) + i (t - 0.8)
        let f = |s: f64, t: f64| Complex::new(s - 0.3, t - 0.8);
        let (s, t) = bilinear_zero(f(0.0, 0.0), f(1.0, 0.0), f(0.0, 1.0), f(1.0, 1.0));
        assert!((s - 0.3).abs() < 1e-12 && (t - 0.8).abs() < 1e-12);
    }

    #[test]
    fn balanced_interferometer() {
        let (u0, _) = modes();
        let input = crate::lg_field::sample_mode(&u0, &grid()).unwrap();
        let out = mach_zehnder(&input, &Arm::open(1.0, 0.0), &Arm::open(1.0, 0.0)).unwrap();
        for (a, b) in out.values().iter().zip(input.values()) {
            assert!((a - b).norm() < 1e-15);
        }
        let dark = mach_zehnder(&input, &Arm::open(1.0, 0.2), &Arm::open(1.0, 0.2 + PI)).unwrap();
        assert!(dark.power() < 1e-28);
    }

    #[test]
    fn interferometer_rejects_bad_attenuation() {
        let (u0, _) = modes();
        let input = crate::lg_field::sample_mode(&u0, &GridSpec::at_waist(16, 4.0).unwrap()).unwrap();
        assert!(mach_zehnder(&input, &Arm::open(1.2, 0.0), &Arm::open(1.0, 0.0)).is_err());
        assert!(mach_zehnder(&input, &Arm::open(1.0, 0.0), &Arm::open(-0.1, 0.0)).is_err());
    }

    #[test]
    fn hologram_arm_adds_vortex_component() {
        let (u0, _) = modes();
        let input = crate::lg_field::sample_mode(&u0, &grid()).unwrap();
        let h = HologramSpec::new(1, 0.2, TAU, Profile::Blazed).unwrap();
        let out = mach_zehnder(&input, &Arm::open(0.5, 0.0), &Arm::open(1.0, 0.0).with_hologram(h, 1)).unwrap();
        // u00·(0.5 + e^{iθ}): the stronger vortex arm keeps its charge at the centre
        let rep = find_singularities(&out);
        assert_eq!(rep.total_winding(), 1);
    }
}
