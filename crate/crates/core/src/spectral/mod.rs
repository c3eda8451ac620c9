//! Periodic grids, band-limited fields and the frequency-space toolkit built
//! on them.
//!
//! Fields are stored by their Fourier coefficients on the lattice
//! `ξ ∈ (2π/L)·{−n/2, …, n/2−1}^d` in FFT storage order. The normalisation is
//! the unitary one, `û(ξ) = (2π)^{-d/2} ∫ u(x) e^{−ixξ} dx`, approximated on
//! the torus so that a coefficient is a sample of the continuum transform and
//! `Σ_ξ |û(ξ)|² (2π/L)^d` is exactly the physical `L²` norm squared.

mod data;
mod dyadic;
pub(crate) mod fft;
mod field;
mod grid;
mod io;

pub use data::{critical_exponent, freq_box_data, scale_field, BoxKind};
pub use dyadic::{chi, dyadic_project, psi, DyadicBank};
pub use field::{sobolev_norm, SpectralField};
pub use grid::{make_grid, Grid};
pub use io::{read_field, write_field, FIELD_MAGIC, FIELD_VERSION, LAYOUT_FFT_ORDER};
