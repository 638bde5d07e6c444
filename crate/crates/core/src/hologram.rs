//! Binary and blazed fork holograms.
//!
//! A fork hologram with `dm` dislocations, period `Λ` and modulation depth
//! `δ` imprints the phase `δ·s/(2π)` where
//! `s = mod(dm·φ − (2π/Λ)·r·cos φ, 2π)` is the sawtooth pattern measured
//! about the (possibly displaced) dislocation. Expanding `e^{iδ s/(2π)}` in
//! Fourier orders `c_n e^{i n s}` splits the transmitted light into
//! diffraction orders; order `n` carries `n·dm` extra units of azimuthal
//! phase riding on a linear carrier `e^{-i n (2π/Λ) x}`.
//!
//! [`apply_hologram`] keeps a single order and removes its carrier, which is
//! the frame projections are taken in.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lg_field::{FieldGrid, GridSpec};
use crate::scalar::Real;

/// Quadrature nodes for the order expansion.
pub const ORDER_QUADRATURE_NODES: usize = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Two phase levels `{0, δ/2}`, thresholded at sawtooth value π.
    Binary,
    /// Continuous sawtooth phase `δ·s/(2π)`.
    Blazed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HologramSpec<T> {
    /// Number of dislocations `Δm`.
    pub dm: i32,
    /// Grating period `Λ`.
    pub period: T,
    /// Phase-modulation depth `δ` in radians.
    pub depth: T,
    pub profile: Profile,
    /// Displacement of the dislocation from the beam axis.
    #[serde(default)]
    pub x0: T,
    #[serde(default)]
    pub y0: T,
}

impl<T: Real> HologramSpec<T> {
    pub fn new(dm: i32, period: T, depth: T, profile: Profile) -> Result<Self> {
        let h = Self {
            dm,
            period,
            depth,
            profile,
            x0: T::zero(),
            y0: T::zero(),
        };
        h.validate()?;
        Ok(h)
    }

    /// Ideal single-dislocation blazed hologram (`δ = 2π`).
    pub fn ideal_fork(period: T) -> Result<Self> {
        Self::new(1, period, T::TAU(), Profile::Blazed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period > T::zero()) || !self.period.is_finite() {
            return Err(invalid("period", format!("must be positive, got {}", self.period)));
        }
        if !(self.depth >= T::zero()) || !self.depth.is_finite() {
            return Err(invalid("depth", format!("must be finite and >= 0, got {}", self.depth)));
        }
        if !self.x0.is_finite() || !self.y0.is_finite() {
            return Err(invalid("x0/y0", "displacement must be finite"));
        }
        Ok(())
    }

    /// Depth beyond a full wave; accepted but unusual.
    pub fn depth_flagged(&self) -> bool {
        self.depth > T::TAU()
    }

    pub fn displaced(self, x0: T, y0: T) -> Self {
        Self { x0, y0, ..self }
    }

    pub fn is_centered(&self) -> bool {
        self.x0 == T::zero() && self.y0 == T::zero()
    }

    /// Same element mounted mirrored: the dislocation charge flips.
    pub fn flipped(self) -> Self {
        Self { dm: -self.dm, ..self }
    }

    /// Carrier spatial frequency `k_x = 2π/Λ`.
    pub fn carrier_wavenumber(&self) -> T {
        T::TAU() / self.period
    }

    /// Tilt `ξ = arctan(k_x/k_z)` of the plane reference wave that records this grating.
    pub fn reference_tilt(&self, wavelength: T) -> Result<T> {
        let k = T::TAU() / wavelength;
        let kx = self.carrier_wavenumber();
        if !(wavelength > T::zero()) || kx >= k {
            return Err(invalid(
                "period",
                "grating period shorter than the wavelength gives an evanescent reference",
            ));
        }
        let kz = (k * k - kx * kx).sqrt();
        Ok((kx / kz).atan())
    }

    /// Sawtooth pattern value in `[0, 2π)` at `(x, y)`.
    pub fn pattern(&self, x: T, y: T) -> T {
        let dx = x - self.x0;
        let dy = y - self.y0;
        let phi = dy.atan2(dx);
        let arg = T::from_i32(self.dm).unwrap() * phi - self.carrier_wavenumber() * dx;
        let s = arg - T::TAU() * (arg / T::TAU()).floor();
        // floored modulo can round up to exactly 2π
        if s >= T::TAU() {
            T::zero()
        } else {
            s
        }
    }

    /// Phase imprinted for sawtooth value `s`.
    pub fn phase_for(&self, s: T) -> T {
        match self.profile {
            Profile::Blazed => self.depth * s / T::TAU(),
            Profile::Binary => {
                if s >= T::PI() {
                    self.depth / T::lit(2.0)
                } else {
                    T::zero()
                }
            }
        }
    }

    /// Complex transmission `T(x, y)`; unit modulus everywhere.
    pub fn transmission(&self, x: T, y: T) -> Complex<T> {
        Complex::from_polar(T::one(), self.phase_for(self.pattern(x, y)))
    }

    /// Fourier coefficient of diffraction order `n` for this profile and depth.
    pub fn order_coefficient(&self, n: i32) -> Complex<T> {
        order_coefficient(self.profile, self.depth, n)
    }

    /// Template image: blazed maps `s ∈ [0, 2π)` onto 256 levels, binary onto `{0, 255}`.
    pub fn template(&self, spec: &GridSpec<T>) -> Vec<u8> {
        let xs = spec.coords();
        let mut out = Vec::with_capacity(spec.n * spec.n);
        for &y in &xs {
            for &x in &xs {
                let s = self.pattern(x, y);
                let level = match self.profile {
                    Profile::Blazed => (s / T::TAU() * T::lit(256.0)).floor().as_f64().min(255.0) as u8,
                    Profile::Binary => {
                        if s >= T::PI() {
                            255
                        } else {
                            0
                        }
                    }
                };
                out.push(level);
            }
        }
        out
    }
}

/// Grating-order amplitudes `c_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderCoefficients<T> {
    pub orders: BTreeMap<i32, Complex<T>>,
}

impl<T: Real> OrderCoefficients<T> {
    pub fn get(&self, n: i32) -> Option<Complex<T>> {
        self.orders.get(&n).copied()
    }

    /// `Σ|c_n|²` over the stored range.
    pub fn total_efficiency(&self) -> T {
        self.orders.values().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b)
    }
}

/// `c_n = (1/2π)∫₀^{2π} e^{iφ(t)} e^{-int} dt` by the midpoint rule, `φ` the profile's phase.
pub fn order_coefficient<T: Real>(profile: Profile, depth: T, n: i32) -> Complex<T> {
    let nodes = ORDER_QUADRATURE_NODES;
    let h = T::TAU() / T::from_usize_lossy(nodes);
    let nf = T::from_i32(n).unwrap();
    let half = depth / T::lit(2.0);
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..nodes {
        let t = h * (T::from_usize_lossy(k) + T::lit(0.5));
        let phase = match profile {
            Profile::Blazed => depth * t / T::TAU(),
            Profile::Binary => {
                if t >= T::PI() {
                    half
                } else {
                    T::zero()
                }
            }
        };
        acc = acc + Complex::from_polar(T::one(), phase - nf * t);
    }
    acc / T::from_usize_lossy(nodes)
}

/// Blazed-profile order coefficients for every `n` in `range`.
pub fn grating_orders<T: Real>(depth: T, range: RangeInclusive<i32>) -> OrderCoefficients<T> {
    profile_orders(Profile::Blazed, depth, range)
}

pub fn profile_orders<T: Real>(
    profile: Profile,
    depth: T,
    range: RangeInclusive<i32>,
) -> OrderCoefficients<T> {
    OrderCoefficients {
        orders: range.map(|n| (n, order_coefficient(profile, depth, n))).collect(),
    }
}

/// Keeps diffraction order `order` of `h` acting on `input`, carrier removed.
///
/// `out = c_order · e^{i·order·dm·φ'} · in`, with `φ'` the azimuth about the
/// displaced dislocation. The field must sit at the waist plane.
pub fn apply_hologram<T: Real>(
    input: &FieldGrid<T>,
    h: &HologramSpec<T>,
    order: i32,
) -> Result<FieldGrid<T>> {
    h.validate()?;
    if input.z() != T::zero() {
        return Err(Error::NotAtWaist(input.z().as_f64()));
    }
    let c = h.order_coefficient(order);
    let charge = T::from_i32(order * h.dm).unwrap();
    let (x0, y0) = (h.x0, h.y0);
    Ok(input.map_with_coords(|x, y, v| {
        let phi = (y - y0).atan2(x - x0);
        v * c * Complex::from_polar(T::one(), charge * phi)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lg_field::{inner_product, sample_mode, LgMode};
    use std::f64::consts::{FRAC_2_PI, PI, TAU};

    fn fork(depth: f64, profile: Profile) -> HologramSpec<f64> {
        HologramSpec::new(1, 0.25, depth, profile).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(HologramSpec::new(1, 0.0, TAU, Profile::Blazed).is_err());
        assert!(HologramSpec::new(1, 1.0, -0.1, Profile::Blazed).is_err());
        let deep = HologramSpec::new(1, 1.0, 3.0 * PI, Profile::Blazed).unwrap();
        assert!(deep.depth_flagged());
        assert!(!fork(TAU, Profile::Blazed).depth_flagged());
    }

    #[test]
    fn zero_pattern_point_transmits_one() {
        // On the +x axis through a centered dislocation s = mod(-2πx/Λ, 2π) = 0 at x = Λ.
        let h = fork(TAU, Profile::Blazed);
        let t = h.transmission(0.25, 0.0);
        assert!((t - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn transmission_is_phase_only() {
        for profile in [Profile::Binary, Profile::Blazed] {
            let h = HologramSpec::new(2, 0.3, 1.7, profile).unwrap().displaced(0.2, -0.4);
            for i in 0..40 {
                let x = -2.0 + 0.1 * i as f64;
                let y = 1.3 - 0.07 * i as f64;
                assert!((h.transmission(x, y).norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn displacement_is_a_shift() {
        let c = fork(TAU, Profile::Blazed);
        let d = c.displaced(0.7, -0.3);
        assert_eq!(d.transmission(0.7, -0.3), c.transmission(0.0, 0.0));
        assert_eq!(d.transmission(1.2, 0.4), c.transmission(1.2 - 0.7, 0.4 + 0.3));
    }

    #[test]
    fn binary_profile_has_two_levels() {
        let h = fork(TAU, Profile::Binary);
        for i in 0..100 {
            let t = h.transmission(-1.0 + 0.0213 * i as f64, 0.37);
            let one = (t - Complex::new(1.0, 0.0)).norm() < 1e-12;
            let minus = (t + Complex::new(1.0, 0.0)).norm() < 1e-12;
            assert!(one || minus);
        }
    }

    #[test]
    fn full_wave_blaze_is_single_order() {
        let c = grating_orders(TAU, -8..=8);
        for (&n, v) in &c.orders {
            let expect = if n == 1 { 1.0 } else { 0.0 };
            assert!((v - Complex::new(expect, 0.0)).norm() < 1e-9, "n={n}: {v}");
        }
    }

    #[test]
    fn zero_depth_is_identity() {
        let c = grating_orders(0.0, -5..=5);
        for (&n, v) in &c.orders {
            let expect = if n == 0 { 1.0 } else { 0.0 };
            assert!((v - Complex::new(expect, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn half_wave_blaze_matches_closed_form() {
        // c_n = i / (π (1/2 - n))
        let c = grating_orders(PI, -6..=6);
        for (&n, v) in &c.orders {
            let exact = Complex::new(0.0, 1.0 / (PI * (0.5 - n as f64)));
            assert!((v - exact).norm() < 1e-6, "n={n}");
        }
        assert!((c.get(0).unwrap().norm() - FRAC_2_PI).abs() < 1e-6);
        assert!((c.get(1).unwrap().norm() - FRAC_2_PI).abs() < 1e-6);
    }

    #[test]
    fn binary_full_wave_orders() {
        // levels {0, π}: c_0 = 0, |c_±1| = 2/π, even orders vanish
        let c = profile_orders(Profile::Binary, TAU, -4..=4);
        assert!(c.get(0).unwrap().norm() < 1e-9);
        assert!((c.get(1).unwrap().norm() - FRAC_2_PI).abs() < 1e-6);
        assert!((c.get(-1).unwrap().norm() - FRAC_2_PI).abs() < 1e-6);
        assert!(c.get(2).unwrap().norm() < 1e-6);
    }

    #[test]
    fn reference_tilt() {
        let h = HologramSpec::new(1, 0.1, TAU, Profile::Blazed).unwrap();
        let xi = h.reference_tilt(1e-3).unwrap();
        let expect = (0.01_f64).asin();
        assert!((xi - expect).abs() < 1e-12);
        assert!(h.reference_tilt(0.2).is_err());
    }

    fn gaussian_grid(n: usize, extent: f64) -> (LgMode<f64>, GridSpec<f64>) {
        (LgMode::gaussian(1.0, 1e-3).unwrap(), GridSpec::at_waist(n, extent).unwrap())
    }

    #[test]
    fn centered_fork_converts_to_vortex() {
        // Radial-moment oracle: ⟨u_{0,-1}, u00 e^{iθ}⟩ = √π/2.
        let (g, spec) = gaussian_grid(1024, 8.0);
        let u00 = sample_mode(&g, &spec).unwrap();
        let out = apply_hologram(&u00, &fork(TAU, Profile::Blazed), 1).unwrap();
        let target = sample_mode(&g.with_indices(0, -1), &spec).unwrap();
        let a = inner_product(&target, &out).unwrap();
        assert!((a.norm_sqr() - PI / 4.0).abs() < 1e-3);
        assert!((a.norm() - PI.sqrt() / 2.0).abs() < 1e-5);
    }

    #[test]
    fn zeroth_order_of_full_blaze_is_dark() {
        let (g, spec) = gaussian_grid(128, 6.0);
        let u00 = sample_mode(&g, &spec).unwrap();
        let out = apply_hologram(&u00, &fork(TAU, Profile::Blazed), 0).unwrap();
        assert!(out.power() < 1e-18);
    }

    #[test]
    fn far_dislocation_acts_as_plain_grating() {
        // The residual phase tilt ≈ y/d leaves 1 - <y²>/d² = 1 - 1/(4d²) in the Gaussian.
        let (g, spec) = gaussian_grid(512, 6.0);
        let u00 = sample_mode(&g, &spec).unwrap();
        let ratio = |d: f64| {
            let out = apply_hologram(&u00, &fork(TAU, Profile::Blazed).displaced(d, 0.0), 1).unwrap();
            inner_product(&u00, &out).unwrap().norm_sqr() / out.power()
        };
        let at10 = ratio(10.0);
        assert!(at10 > 0.997, "{at10}");
        assert!((at10 - (1.0 - 0.25 / 100.0)).abs() < 2e-4, "{at10}");
        assert!(ratio(20.0) > 0.999);
    }

    #[test]
    fn rejects_off_waist_fields() {
        let g = LgMode::gaussian(1.0, 1e-3).unwrap();
        let spec = GridSpec::new(32, 4.0, 10.0).unwrap();
        let f = sample_mode(&g, &spec).unwrap();
        assert!(matches!(
            apply_hologram(&f, &fork(TAU, Profile::Blazed), 1),
            Err(Error::NotAtWaist(_))
        ));
    }

    #[test]
    fn template_levels() {
        let spec = GridSpec::at_waist(64, 1.0).unwrap();
        let b = fork(TAU, Profile::Binary).template(&spec);
        assert!(b.iter().all(|&v| v == 0 || v == 255));
        let z = fork(TAU, Profile::Blazed).template(&spec);
        assert!(z.iter().any(|&v| v > 200) && z.iter().any(|&v| v < 50));
    }
}
