use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::beam::LgMode;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Geometry of a square sampling window at a fixed axial plane.
///
/// Sample `(i, j)` sits at the cell midpoint
/// `x = -extent + 2·extent·(j + 0.5)/n`, `y` likewise with `i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    /// Samples per side.
    pub n: usize,
    /// Half-width of the window.
    pub extent: T,
    /// Axial plane.
    pub z: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(n: usize, extent: T, z: T) -> Result<Self> {
        let g = Self { n, extent, z };
        g.validate()?;
        Ok(g)
    }

    /// Window at the waist plane.
    pub fn at_waist(n: usize, extent: T) -> Result<Self> {
        Self::new(n, extent, T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::DegenerateGrid(format!("n = {} (need at least 2)", self.n)));
        }
        if !(self.extent > T::zero()) || !self.extent.is_finite() {
            return Err(Error::DegenerateGrid(format!("extent = {}", self.extent)));
        }
        if !self.z.is_finite() {
            return Err(Error::DegenerateGrid(format!("z = {}", self.z)));
        }
        Ok(())
    }

    #[inline]
    pub fn spacing(&self) -> T {
        (self.extent + self.extent) / T::from_usize_lossy(self.n)
    }

    #[inline]
    pub fn cell_area(&self) -> T {
        let h = self.spacing();
        h * h
    }

    /// Midpoint coordinate of index `k` along either axis.
    #[inline]
    pub fn coord(&self, k: usize) -> T {
        -self.extent + self.spacing() * (T::from_usize_lossy(k) + T::lit(0.5))
    }

    pub fn coords(&self) -> Vec<T> {
        (0..self.n).map(|k| self.coord(k)).collect()
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        x.abs() <= self.extent && y.abs() <= self.extent
    }

    pub fn same_geometry(&self, other: &Self) -> bool {
        self.n == other.n && self.extent == other.extent && self.z == other.z
    }
}

/// Complex scalar field sampled row-major on a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid<T> {
    spec: GridSpec<T>,
    wavelength: T,
    values: Vec<Complex<T>>,
}

impl<T: Real> FieldGrid<T> {
    /// Builds a field from raw row-major samples.
    pub fn from_values(spec: GridSpec<T>, wavelength: T, values: Vec<Complex<T>>) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.n * spec.n {
            return Err(Error::DegenerateGrid(format!(
                "expected {} samples, got {}",
                spec.n * spec.n,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::DegenerateGrid(format!("non-finite sample at index {k}")));
        }
        Ok(Self { spec, wavelength, values })
    }

    /// Samples `f(x, y)` at every midpoint, rows evaluated in parallel.
    pub fn from_fn<F>(spec: GridSpec<T>, wavelength: T, f: F) -> Result<Self>
    where
        F: Fn(T, T) -> Complex<T> + Sync,
    {
        spec.validate()?;
        let n = spec.n;
        let xs = spec.coords();
        let mut values = vec![Complex::new(T::zero(), T::zero()); n * n];
        values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let y = xs[i];
            for (v, &x) in row.iter_mut().zip(&xs) {
                *v = f(x, y);
            }
        });
        Self::from_values(spec, wavelength, values)
    }

    pub fn zeros(spec: GridSpec<T>, wavelength: T) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            spec,
            wavelength,
            values: vec![Complex::new(T::zero(), T::zero()); spec.n * spec.n],
        })
    }

    pub fn spec(&self) -> &GridSpec<T> {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn extent(&self) -> T {
        self.spec.extent
    }

    pub fn z(&self) -> T {
        self.spec.z
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.values[i * self.spec.n + j]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, Complex<T>> {
        self.values.chunks_exact(self.spec.n)
    }

    pub fn intensity(&self) -> Vec<T> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Discrete power `Σ|u|²·Δx·Δy`, reduced per row then in row order.
    pub fn power(&self) -> T {
        let partials: Vec<T> = self
            .values
            .par_chunks(self.spec.n)
            .map(|row| row.iter().fold(T::zero(), |acc, v| acc + v.norm_sqr()))
            .collect();
        partials.into_iter().fold(T::zero(), |a, b| a + b) * self.spec.cell_area()
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.spec.same_geometry(&other.spec) {
            return Err(Error::GridMismatch(format!(
                "(n={}, extent={}, z={}) vs (n={}, extent={}, z={})",
                self.spec.n,
                self.spec.extent,
                self.spec.z,
                other.spec.n,
                other.spec.extent,
                other.spec.z
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        let values = self.values.par_iter().map(|v| v * c).collect();
        self.with_values(values)
    }

    /// `Σ c_k · field_k` over fields that share one grid.
    pub fn linear_combination(terms: &[(Complex<T>, &FieldGrid<T>)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::DegenerateGrid("empty linear combination".into()))?;
        for (_, f) in &terms[1..] {
            first.check_compatible(f)?;
        }
        let mut values = vec![Complex::new(T::zero(), T::zero()); first.values.len()];
        values.par_iter_mut().enumerate().for_each(|(k, v)| {
            for (c, f) in terms {
                *v = *v + c * f.values[k];
            }
        });
        Ok(first.with_values(values))
    }

    /// Pointwise `g(x, y, u)` keeping the grid.
    pub fn map_with_coords<F>(&self, g: F) -> Self
    where
        F: Fn(T, T, Complex<T>) -> Complex<T> + Sync,
    {
        let n = self.spec.n;
        let xs = self.spec.coords();
        let mut values = self.values.clone();
        values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let y = xs[i];
            for (v, &x) in row.iter_mut().zip(&xs) {
                *v = g(x, y, *v);
            }
        });
        self.with_values(values)
    }

    /// Translates the samples by whole pixels, zero-filling what enters the window.
    pub fn translated_pixels(&self, di: isize, dj: isize) -> Self {
        let n = self.spec.n as isize;
        let zero = Complex::new(T::zero(), T::zero());
        let mut values = vec![zero; self.values.len()];
        for i in 0..n {
            let si = i - di;
            if si < 0 || si >= n {
                continue;
            }
            for j in 0..n {
                let sj = j - dj;
                if sj < 0 || sj >= n {
                    continue;
                }
                values[(i * n + j) as usize] = self.values[(si * n + sj) as usize];
            }
        }
        self.with_values(values)
    }

    /// Mirror image under `y -> -y`.
    pub fn mirrored_y(&self) -> Self {
        let n = self.spec.n;
        let mut values = Vec::with_capacity(self.values.len());
        for i in (0..n).rev() {
            values.extend_from_slice(&self.values[i * n..(i + 1) * n]);
        }
        self.with_values(values)
    }

    pub(crate) fn with_values(&self, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            spec: self.spec,
            wavelength: self.wavelength,
            values,
        }
    }
}

/// Samples a mode on `spec`; the mode's wavelength is recorded on the field.
pub fn sample_mode<T: Real>(mode: &LgMode<T>, spec: &GridSpec<T>) -> Result<FieldGrid<T>> {
    LgMode::new(mode.p, mode.l, mode.w0, mode.wavelength)?;
    let z = spec.z;
    FieldGrid::from_fn(*spec, mode.wavelength, |x, y| {
        mode.amplitude(x.hypot(y), y.atan2(x), z)
    })
}

/// `Σ conj(a)·b·Δx·Δy`, reduced per row then summed in row order.
pub fn inner_product<T: Real>(a: &FieldGrid<T>, b: &FieldGrid<T>) -> Result<Complex<T>> {
    a.check_compatible(b)?;
    let n = a.n();
    let partials: Vec<Complex<T>> = a
        .values
        .par_chunks(n)
        .zip(b.values.par_chunks(n))
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
        })
        .collect();
    let sum = partials
        .into_iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, v| acc + v);
    Ok(sum * a.spec.cell_area())
}
