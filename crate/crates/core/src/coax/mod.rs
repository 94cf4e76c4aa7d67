//! Coaxial-line modes: cutoff wavevectors and attenuation per unit length for
//! TEM, TE and TM modes.

mod attenuation;
mod cutoff;
mod geometry;

pub use attenuation::{
    attenuation_tem, attenuation_te, attenuation_tm, attenuation, surface_resistance,
    AttenuationResult, LossyMaterialLoss, ModeProfile, PowerIntegrals,
};
pub use cutoff::{find_all_cutoffs, find_cutoffs, scan_step, CUTOFF_RESIDUAL_TOL};
pub use geometry::{cutoff_frequency, CoaxGeometry, ModeDispersion, ModeFamily, ModeId};
