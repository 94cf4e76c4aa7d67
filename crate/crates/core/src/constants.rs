//! Physical constants (CODATA 2018, SI).

use std::f64::consts::PI;

/// Planck constant [J s] (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant [J s].
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Boltzmann constant [J/K] (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Speed of light in vacuum [m/s] (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permeability [H/m].
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity [F/m], tied to `MU0` through `c` so the set is
/// self-consistent (8.8541878128e-12 to the printed digits).
pub const EPS0: f64 = 1.0 / (MU0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT);
/// Free-space impedance sqrt(mu0/eps0) = mu0 c [Ohm].
pub const Z_VAC: f64 = MU0 * SPEED_OF_LIGHT;

/// Np -> dB conversion factor, 20 log10(e).
pub const NP_TO_DB: f64 = 8.685_889_638_065_035;

/// Bundle of the constants above, for callers that prefer passing a value around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub h: f64,
    pub hbar: f64,
    pub k_b: f64,
    pub c: f64,
    pub eps0: f64,
    pub mu0: f64,
    pub z_vac: f64,
}

impl PhysicalConstants {
    pub const CODATA2018: PhysicalConstants = PhysicalConstants {
        h: PLANCK,
        hbar: HBAR,
        k_b: BOLTZMANN,
        c: SPEED_OF_LIGHT,
        eps0: EPS0,
        mu0: MU0,
        z_vac: Z_VAC,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA2018
    }
}

#[inline]
pub fn angular_frequency(f_hz: f64) -> f64 {
    2.0 * PI * f_hz
}

/// Free-space wavenumber omega/c [1/m].
#[inline]
pub fn free_space_wavenumber(f_hz: f64) -> f64 {
    angular_frequency(f_hz) / SPEED_OF_LIGHT
}
