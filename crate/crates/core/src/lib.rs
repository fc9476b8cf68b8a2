//! Vectorial kinetic (lattice-Boltzmann) schemes for the 2D symmetrized
//! linear acoustics system, and by block duplication for 2D linear
//! elastodynamics.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: periodic cell-centred grids, D2Q5/D2Q9 speeds and the
//!   `Δ = kλ` coupling.
//! - [`maxwellian`]: construction of the linear Maxwellian matrices `Ω_ζ`,
//!   admissibility diagnostics, second-moment defect and the diffusion
//!   matrix `B`.
//! - [`kinetic`]: the relax-and-stream time stepper with entropy and
//!   blow-up monitors.
//! - [`reference`]: Yee staggered finite differences, first-order upwind
//!   finite volumes and the second-order reconstructed finite-volume scheme.
//! - [`analytic`]: Bessel `J₀`/`J₁`, their zeros and the discrete Hankel
//!   transform used to evaluate the exact radial wave solution.
//! - [`harness`]: experiment configuration, error norms, convergence ladders,
//!   stability scans and CSV/SVG reports.

pub mod analytic;
pub mod error;
pub mod harness;
pub mod kinetic;
pub mod lattice;
pub mod linalg;
pub mod maxwellian;
pub mod reference;

pub use error::{Error, Result};
