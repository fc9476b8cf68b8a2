//! Baseline discretisations of the acoustics system on the same periodic
//! grid: Yee staggered leapfrog, first-order upwind finite volumes and the
//! reconstructed second-order finite-volume scheme.

mod fv;
mod yee;

pub use fv::{fv1_step, fv2_step, fv_flux_divergence, lsq_reconstruct, FvState, Reconstruction};
pub use yee::{yee_energy, yee_init, yee_step, StaggeredState};

use crate::{Error, Result};

/// Courant number used for every reference scheme.
pub const REFERENCE_COURANT: f64 = 0.5;

fn check_courant(courant: f64, max: f64, scheme: &str) -> Result<()> {
    if !(courant > 0.0 && courant <= max) {
        return Err(Error::Config(format!(
            "{scheme} needs a Courant number in (0, {max}], got {courant}"
        )));
    }
    Ok(())
}
