use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::laguerre::laguerre;
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// One Laguerre-Gaussian basis mode.
///
/// `l` follows the `e^{-ilθ}` azimuthal convention, so a mode with `l = 1`
/// has the spatial phase factor `e^{-iθ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LgMode<T> {
    /// Radial index.
    pub p: u32,
    /// Azimuthal index; the sign carries handedness.
    pub l: i32,
    /// Waist radius.
    pub w0: T,
    /// Vacuum wavelength, same length unit as `w0`.
    pub wavelength: T,
}

impl<T: Real> LgMode<T> {
    pub fn new(p: u32, l: i32, w0: T, wavelength: T) -> Result<Self> {
        check_beam(w0, wavelength)?;
        Ok(Self { p, l, w0, wavelength })
    }

    /// The fundamental Gaussian `u00`.
    pub fn gaussian(w0: T, wavelength: T) -> Result<Self> {
        Self::new(0, 0, w0, wavelength)
    }

    /// Same beam parameters, different indices.
    pub fn with_indices(&self, p: u32, l: i32) -> Self {
        Self { p, l, ..*self }
    }

    /// Orbital angular momentum per photon in units of ħ.
    pub fn oam_per_photon(&self) -> i32 {
        self.l
    }

    pub fn geometry(&self, z: T) -> BeamGeometry<T> {
        BeamGeometry::unchecked(self.w0, self.wavelength, z)
    }

    /// Normalization constant `sqrt(2 p! / (π (p+|l|)!))`.
    pub fn normalization(&self) -> T {
        mode_normalization(self.p, self.l.unsigned_abs())
    }

    /// Complex amplitude at polar position `(r, theta)` in the plane `z`.
    pub fn amplitude(&self, r: T, theta: T, z: T) -> Complex<T> {
        lg_amplitude(self, r, theta, z)
    }

    pub fn same_beam(&self, other: &Self) -> bool {
        self.w0 == other.w0 && self.wavelength == other.wavelength
    }
}

pub(crate) fn check_beam<T: Real>(w0: T, wavelength: T) -> Result<()> {
    if !(w0 > T::zero()) || !w0.is_finite() {
        return Err(invalid("w0", format!("must be positive and finite, got {w0}")));
    }
    if !(wavelength > T::zero()) || !wavelength.is_finite() {
        return Err(invalid(
            "wavelength",
            format!("must be positive and finite, got {wavelength}"),
        ));
    }
    Ok(())
}

pub(crate) fn mode_normalization<T: Real>(p: u32, abs_l: u32) -> T {
    // p!/(p+|l|)! = 1 / ((p+1)(p+2)...(p+|l|))
    let mut ratio = T::one();
    for k in (p + 1)..=(p + abs_l) {
        ratio = ratio / T::from_u32(k).unwrap();
    }
    (T::lit(2.0) * ratio / T::PI()).sqrt()
}

/// Gaussian beam parameters at one axial plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamGeometry<T> {
    pub w0: T,
    pub wavelength: T,
    pub z: T,
    /// Rayleigh length `π w0² / λ`.
    pub rayleigh: T,
    /// Spot size `w(z)`.
    pub spot: T,
    /// Wavefront curvature `1/R(z) = z / (z² + zR²)`, finite at the waist.
    pub curvature: T,
    /// Gouy angle `arctan(z / zR)`.
    pub gouy: T,
    /// Wavenumber `2π / λ`.
    pub k: T,
}

impl<T: Real> BeamGeometry<T> {
    pub fn new(w0: T, wavelength: T, z: T) -> Result<Self> {
        check_beam(w0, wavelength)?;
        Ok(Self::unchecked(w0, wavelength, z))
    }

    pub(crate) fn unchecked(w0: T, wavelength: T, z: T) -> Self {
        let rayleigh = T::PI() * w0 * w0 / wavelength;
        let zr = z / rayleigh;
        Self {
            w0,
            wavelength,
            z,
            rayleigh,
            spot: w0 * (T::one() + zr * zr).sqrt(),
            curvature: z / (z * z + rayleigh * rayleigh),
            gouy: zr.atan(),
            k: T::TAU() / wavelength,
        }
    }

    /// Radius of wavefront curvature; infinite at the waist.
    pub fn radius_of_curvature(&self) -> T {
        if self.curvature == T::zero() {
            T::infinity()
        } else {
            T::one() / self.curvature
        }
    }
}

/// Gaussian beam parameters for waist `w0` and wavelength at plane `z`.
pub fn beam_geometry<T: Real>(w0: T, wavelength: T, z: T) -> Result<BeamGeometry<T>> {
    BeamGeometry::new(w0, wavelength, z)
}

/// Closed-form LG amplitude `u_{p,l}(r, θ, z)`.
///
/// Includes the normalization, the `(r√2/w)^{|l|}` vortex factor, the
/// Laguerre term, the Gaussian envelope, the curvature phase, the Gouy phase
/// `(2p+|l|+1)·arctan(z/zR)` and the azimuthal phase `e^{-ilθ}`.
pub fn lg_amplitude<T: Real>(mode: &LgMode<T>, r: T, theta: T, z: T) -> Complex<T> {
    let g = mode.geometry(z);
    let abs_l = mode.l.unsigned_abs();
    let two = T::lit(2.0);
    let w = g.spot;
    let rho2 = r * r / (w * w);
    let vortex = (r * two.sqrt() / w).powi(abs_l as i32);
    let radial = mode.normalization() / w
        * vortex
        * laguerre(mode.p, abs_l, two * rho2)
        * (-rho2).exp();
    let order = T::from_u32(2 * mode.p + abs_l + 1).unwrap();
    let phase = -(g.k * r * r * g.curvature / two)
        - order * g.gouy
        - T::from_i32(mode.l).unwrap() * theta;
    Complex::from_polar(radial, phase)
}
