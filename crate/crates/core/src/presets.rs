//! Built-in cables, materials and the default dilution-refrigerator chain.

use std::fmt;
use std::str::FromStr;

use crate::coax::CoaxGeometry;
use crate::error::{Error, Result};
use crate::material::{MaterialKind, MaterialRow, MaterialSpectrum};

pub const PTFE_EPS: f64 = 2.08;
pub const PTFE_TAN_DELTA: f64 = 4e-4;
pub const STEEL_SIGMA: f64 = 1.41e6;
pub const COPPER_SIGMA: f64 = 67e6;

/// Stage temperatures from room temperature down to the mixing chamber [K].
pub const CHAIN_TEMPS_K: [f64; 6] = [300.0, 35.0, 2.85, 0.882, 0.082, 0.006];
/// Cable length between consecutive stages [mm].
pub const CHAIN_LENGTHS_MM: [f64; 5] = [228.0, 271.0, 263.0, 231.0, 306.0];
/// Attenuator at the cold end of each segment [dB].
pub const CHAIN_ATTENUATORS_DB: [f64; 5] = [0.0, 20.0, 0.0, 20.0, 20.0];

pub const FILTER_PIN_DIAMETER: f64 = 1.27e-3;
pub const FILTER_BORE_DIAMETER: f64 = 5.1e-3;
pub const FILTER_LENGTH: f64 = 35.8e-3;

/// Semi-rigid stainless steel cables with PTFE dielectric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cable {
    Ut086,
    Ut047,
    Ut034,
}

impl Cable {
    pub const ALL: [Cable; 3] = [Cable::Ut086, Cable::Ut047, Cable::Ut034];

    /// Inner-conductor radius and outer-conductor inner radius [m].
    pub fn radii(self) -> (f64, f64) {
        match self {
            Cable::Ut086 => (0.255e-3, 0.835e-3),
            Cable::Ut047 => (0.1435e-3, 0.47e-3),
            Cable::Ut034 => (0.1015e-3, 0.33e-3),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Cable::Ut086 => "ut086",
            Cable::Ut047 => "ut047",
            Cable::Ut034 => "ut034",
        }
    }

    pub fn geometry(self) -> CoaxGeometry {
        let (a, b) = self.radii();
        CoaxGeometry::new(a, b, stainless_steel(), ptfe()).expect("preset geometry is valid")
    }
}

impl fmt::Display for Cable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Cable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ut086" | "ut086ss-ss" => Ok(Cable::Ut086),
            "ut047" | "ut047ss-ss" => Ok(Cable::Ut047),
            "ut034" | "ut034ss-ss" => Ok(Cable::Ut034),
            other => Err(Error::Input(format!("unknown cable preset '{other}'"))),
        }
    }
}

pub fn ptfe() -> MaterialSpectrum {
    MaterialSpectrum::constant("ptfe", MaterialKind::Dielectric, PTFE_EPS, PTFE_TAN_DELTA, 1.0, 0.0)
        .expect("valid")
}

pub fn stainless_steel() -> MaterialSpectrum {
    MaterialSpectrum::conductor("stainless_steel", STEEL_SIGMA).expect("valid")
}

pub fn copper() -> MaterialSpectrum {
    MaterialSpectrum::conductor("copper", COPPER_SIGMA).expect("valid")
}

/// Rows of a smooth, magnetically lossy absorber over 75-110 GHz.
///
/// Stand-in for a measured carbonyl-iron epoxy: permittivity near 11,
/// permeability near 1.3, and loss tangents of 0.05 and 0.15.
pub fn synthetic_absorber_rows() -> Vec<MaterialRow> {
    let (f0, f1) = (75e9, 110e9);
    (0..=35)
        .map(|i| {
            let t = i as f64 / 35.0;
            let eps_p = 11.2 - 0.4 * t;
            let mu_p = 1.34 - 0.04 * t;
            MaterialRow {
                f_hz: f0 + t * (f1 - f0),
                eps_p,
                eps_pp: eps_p * (0.05 - 0.004 * t),
                mu_p,
                mu_pp: mu_p * (0.15 + 0.01 * t),
            }
        })
        .collect()
}

pub fn synthetic_absorber() -> MaterialSpectrum {
    MaterialSpectrum::tabulated("synthetic_absorber", MaterialKind::Absorber, synthetic_absorber_rows())
        .expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        for c in Cable::ALL {
            assert_eq!(c.id().parse::<Cable>().unwrap(), c);
            let g = c.geometry();
            assert!(g.a < g.b);
        }
        assert!("ut999".parse::<Cable>().is_err());
    }

    #[test]
    fn chain_shape() {
        assert_eq!(CHAIN_TEMPS_K.len(), CHAIN_LENGTHS_MM.len() + 1);
        assert_eq!(CHAIN_ATTENUATORS_DB.len(), CHAIN_LENGTHS_MM.len());
    }

    #[test]
    fn absorber_is_passive_and_covers_band() {
        let m = synthetic_absorber();
        assert!(m.covers(75e9) && m.covers(110e9));
        let p = m.interpolate(100e9).unwrap();
        assert!(p.tan_delta() > 0.04 && p.tan_delta_m() > 0.14);
    }
}
