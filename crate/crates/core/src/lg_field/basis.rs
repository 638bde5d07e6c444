//! Batched evaluation of many LG modes sharing one beam.
//!
//! Projections onto dozens of modes would otherwise need one sampled grid per
//! mode. A [`ModeSet`] evaluates every member at each sample on the fly,
//! sharing the Laguerre recurrence and azimuthal powers between modes.

use num_complex::Complex;
use rayon::prelude::*;

use super::beam::{check_beam, mode_normalization, BeamGeometry};
use super::grid::{FieldGrid, GridSpec};
use super::laguerre::laguerre_sequence;
use crate::error::Result;
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct ModeSet<T> {
    w0: T,
    wavelength: T,
    modes: Vec<(u32, i32)>,
    norms: Vec<T>,
    /// Highest `p` requested for each `|l|`, indexed by `|l|`.
    max_p: Vec<Option<u32>>,
}

struct Scratch<T> {
    laguerre: Vec<Vec<T>>,
    azimuth: Vec<Complex<T>>,
    radial_power: Vec<T>,
}

impl<T: Real> ModeSet<T> {
    /// Modes given as `(p, l)` pairs in the `e^{-ilθ}` convention.
    pub fn new(w0: T, wavelength: T, modes: Vec<(u32, i32)>) -> Result<Self> {
        check_beam(w0, wavelength)?;
        let max_abs_l = modes.iter().map(|m| m.1.unsigned_abs()).max().unwrap_or(0);
        let mut max_p = vec![None; max_abs_l as usize + 1];
        for &(p, l) in &modes {
            let slot = &mut max_p[l.unsigned_abs() as usize];
            *slot = Some(slot.map_or(p, |q: u32| q.max(p)));
        }
        let norms = modes
            .iter()
            .map(|&(p, l)| mode_normalization(p, l.unsigned_abs()))
            .collect();
        Ok(Self {
            w0,
            wavelength,
            modes,
            norms,
            max_p,
        })
    }

    /// Every `(p, l)` with `p` in `radial` and `l` in `azimuthal`, `p` varying slowest.
    pub fn rectangular(
        w0: T,
        wavelength: T,
        radial: std::ops::RangeInclusive<u32>,
        azimuthal: std::ops::RangeInclusive<i32>,
    ) -> Result<Self> {
        let modes = radial
            .flat_map(|p| azimuthal.clone().map(move |l| (p, l)))
            .collect();
        Self::new(w0, wavelength, modes)
    }

    pub fn modes(&self) -> &[(u32, i32)] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    fn scratch(&self) -> Scratch<T> {
        Scratch {
            laguerre: self
                .max_p
                .iter()
                .map(|m| vec![T::zero(); m.map_or(0, |p| p as usize + 1)])
                .collect(),
            azimuth: vec![Complex::new(T::zero(), T::zero()); self.max_p.len()],
            radial_power: vec![T::zero(); self.max_p.len()],
        }
    }

    /// Per-mode constant phase factors (Gouy) at the plane of `geom`.
    fn gouy_factors(&self, geom: &BeamGeometry<T>) -> Vec<Complex<T>> {
        self.modes
            .iter()
            .map(|&(p, l)| {
                let order = T::from_u32(2 * p + l.unsigned_abs() + 1).unwrap();
                Complex::from_polar(T::one(), -order * geom.gouy)
            })
            .collect()
    }

    fn evaluate(
        &self,
        x: T,
        y: T,
        geom: &BeamGeometry<T>,
        gouy: &[Complex<T>],
        s: &mut Scratch<T>,
        out: &mut [Complex<T>],
    ) {
        let two = T::lit(2.0);
        let w = geom.spot;
        let r2 = x * x + y * y;
        let r = r2.sqrt();
        let rho2 = r2 / (w * w);
        let envelope = (-rho2).exp() / w;
        let rho = r * two.sqrt() / w;
        let curvature = Complex::from_polar(T::one(), -(geom.k * r2 * geom.curvature / two));

        // e^{-iθ} = (x - iy)/r
        let unit = if r > T::zero() {
            Complex::new(x / r, -y / r)
        } else {
            Complex::new(T::one(), T::zero())
        };
        s.azimuth[0] = Complex::new(T::one(), T::zero());
        s.radial_power[0] = T::one();
        for k in 1..s.azimuth.len() {
            s.azimuth[k] = s.azimuth[k - 1] * unit;
            s.radial_power[k] = s.radial_power[k - 1] * rho;
        }
        for (abs_l, buf) in s.laguerre.iter_mut().enumerate() {
            if !buf.is_empty() {
                laguerre_sequence(abs_l as u32, two * rho2, buf);
            }
        }
        let common = curvature * envelope;
        for (k, &(p, l)) in self.modes.iter().enumerate() {
            let abs_l = l.unsigned_abs() as usize;
            let radial = self.norms[k] * s.radial_power[abs_l] * s.laguerre[abs_l][p as usize];
            let az = if l >= 0 { s.azimuth[abs_l] } else { s.azimuth[abs_l].conj() };
            out[k] = common * gouy[k] * az * radial;
        }
    }

    /// Samples member `k` on `spec`.
    pub fn sample(&self, k: usize, spec: &GridSpec<T>) -> Result<FieldGrid<T>> {
        let geom = BeamGeometry::unchecked(self.w0, self.wavelength, spec.z);
        let gouy = self.gouy_factors(&geom);
        let single = Self::new(self.w0, self.wavelength, vec![self.modes[k]])?;
        let g = [gouy[k]];
        FieldGrid::from_fn(*spec, self.wavelength, |x, y| {
            let mut s = single.scratch();
            let mut out = [Complex::new(T::zero(), T::zero())];
            single.evaluate(x, y, &geom, &g, &mut s, &mut out);
            out[0]
        })
    }

    /// Projections `⟨u_k, field⟩` for every member, reduced per row then in row order.
    pub fn project(&self, field: &FieldGrid<T>) -> Result<Vec<Complex<T>>> {
        let spec = *field.spec();
        let geom = BeamGeometry::unchecked(self.w0, self.wavelength, spec.z);
        let gouy = self.gouy_factors(&geom);
        let xs = spec.coords();
        let k = self.modes.len();
        let zero = Complex::new(T::zero(), T::zero());
        let partials: Vec<Vec<Complex<T>>> = field
            .values()
            .par_chunks(spec.n)
            .enumerate()
            .map_init(
                || (self.scratch(), vec![zero; k]),
                |(s, buf), (i, row)| {
                    let y = xs[i];
                    let mut acc = vec![zero; k];
                    for (v, &x) in row.iter().zip(&xs) {
                        self.evaluate(x, y, &geom, &gouy, s, buf);
                        for (a, u) in acc.iter_mut().zip(buf.iter()) {
                            *a = *a + u.conj() * v;
                        }
                    }
                    acc
                },
            )
            .collect();
        let area = spec.cell_area();
        let mut total = vec![zero; k];
        for row in partials {
            for (t, v) in total.iter_mut().zip(row) {
                *t = *t + v;
            }
        }
        Ok(total.into_iter().map(|v| v * area).collect())
    }

    /// Discrete Gram matrix `G[a][b] = ⟨u_a, u_b⟩` on `spec`.
    pub fn gram(&self, spec: &GridSpec<T>) -> Result<Vec<Vec<Complex<T>>>> {
        spec.validate()?;
        let geom = BeamGeometry::unchecked(self.w0, self.wavelength, spec.z);
        let gouy = self.gouy_factors(&geom);
        let xs = spec.coords();
        let k = self.modes.len();
        let zero = Complex::new(T::zero(), T::zero());
        let tri = k * (k + 1) / 2;
        let partials: Vec<Vec<Complex<T>>> = xs
            .par_iter()
            .map_init(
                || (self.scratch(), vec![zero; k]),
                |(s, buf), &y| {
                    let mut acc = vec![zero; tri];
                    for &x in &xs {
                        self.evaluate(x, y, &geom, &gouy, s, buf);
                        let mut idx = 0;
                        for a in 0..k {
                            let ca = buf[a].conj();
                            for b in a..k {
                                acc[idx] = acc[idx] + ca * buf[b];
                                idx += 1;
                            }
                        }
                    }
                    acc
                },
            )
            .collect();
        let mut upper = vec![zero; tri];
        for row in partials {
            for (t, v) in upper.iter_mut().zip(row) {
                *t = *t + v;
            }
        }
        let area = spec.cell_area();
        let mut g = vec![vec![zero; k]; k];
        let mut idx = 0;
        for a in 0..k {
            for b in a..k {
                g[a][b] = upper[idx] * area;
                g[b][a] = g[a][b].conj();
                idx += 1;
            }
        }
        Ok(g)
    }
}
