//! Noise-photon transport through cryogenic coaxial wiring, coaxial mode
//! attenuation, waveguide material extraction and absorptive filter design.
//!
//! All quantities are SI: metres, hertz, kelvin. Attenuations are in dB/m
//! unless a name says otherwise.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod coax;
pub mod constants;
pub mod error;
pub mod filter;
pub mod flux;
pub mod material;
pub mod nrw;
pub mod numeric;
pub mod presets;
pub mod touchstone;

pub use coax::{
    AttenuationResult, CoaxGeometry, ModeDispersion, ModeFamily, ModeId, ModeProfile,
    PowerIntegrals,
};
pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use filter::{FilterGeometry, LossBreakdown, MeasuredS21};
pub use flux::{CryostatChain, FluxSpectrum, Scenario, StageSegment};
pub use material::{MaterialKind, MaterialPoint, MaterialRow, MaterialSpectrum};
pub use nrw::{NrwSolution, SParamRecord, WaveguideSection};
pub use presets::Cable;

pub use num_complex::Complex64;
