//! Laguerre-Gaussian modes on sampled Cartesian grids.
//!
//! Modes carry the azimuthal factor `e^{-ilθ}`. Every field lives on a
//! [`FieldGrid`]: a square midpoint grid at one axial plane. Integrals are
//! plain midpoint Riemann sums whose reduction runs per row and then over
//! rows in order, so results are bit-reproducible under parallel evaluation.

mod basis;
mod beam;
mod grid;
mod laguerre;

pub use basis::ModeSet;
pub use beam::{beam_geometry, lg_amplitude, BeamGeometry, LgMode};
pub use grid::{inner_product, sample_mode, FieldGrid, GridSpec};
pub use laguerre::{laguerre, laguerre_sequence};
