//! Simulation of Gaussian / Laguerre-Gaussian mode superpositions prepared
//! with displaced fork holograms or a Mach-Zehnder interferometer, and their
//! analysis by modal projection.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the double-precision instantiation used by the CLI and tests.

pub mod decompose;
pub mod error;
pub mod hologram;
pub mod io;
pub mod lg_field;
pub mod scalar;
pub mod scan;
pub mod superpose;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;

pub type LgMode64 = lg_field::LgMode<f64>;
pub type GridSpec64 = lg_field::GridSpec<f64>;
pub type Field64 = lg_field::FieldGrid<f64>;
pub type Field32 = lg_field::FieldGrid<f32>;
pub type Hologram64 = hologram::HologramSpec<f64>;
pub type Superposition64 = superpose::Superposition<f64>;
pub type ScanSpec64 = scan::ScanSpec<f64>;
pub type ScanRecord64 = scan::ScanRecord<f64>;
