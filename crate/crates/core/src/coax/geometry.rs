use std::f64::consts::PI;
use std::fmt;

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::material::{MaterialKind, MaterialSpectrum};

/// Coaxial cross-section: inner radius `a`, outer-conductor inner radius `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoaxGeometry {
    pub a: f64,
    pub b: f64,
    pub conductor: MaterialSpectrum,
    pub dielectric: MaterialSpectrum,
}

impl CoaxGeometry {
    pub fn new(
        a: f64,
        b: f64,
        conductor: MaterialSpectrum,
        dielectric: MaterialSpectrum,
    ) -> Result<Self> {
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "require 0 < a < b, got a = {a:e} m, b = {b:e} m"
            )));
        }
        if conductor.kind != MaterialKind::Conductor {
            return Err(Error::InvalidMaterial {
                name: conductor.name.clone(),
                reason: "coax conductor must be of kind conductor".into(),
            });
        }
        conductor.sigma()?;
        Ok(Self {
            a,
            b,
            conductor,
            dielectric,
        })
    }

    /// Characteristic impedance of the TEM mode using the real parts of the fill.
    pub fn tem_impedance(&self, f_hz: f64) -> Result<f64> {
        let m = self.dielectric.interpolate(f_hz)?;
        Ok(crate::constants::Z_VAC * (m.mu_p() / m.eps_p()).sqrt() * (self.b / self.a).ln()
            / (2.0 * PI))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeFamily {
    Tem,
    Te,
    Tm,
}

impl fmt::Display for ModeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeFamily::Tem => "TEM",
            ModeFamily::Te => "TE",
            ModeFamily::Tm => "TM",
        })
    }
}

/// Mode label. `n` is the azimuthal index, `m` the radial root index (from 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeId {
    pub family: ModeFamily,
    pub n: u32,
    pub m: u32,
}

impl ModeId {
    pub const TEM: ModeId = ModeId {
        family: ModeFamily::Tem,
        n: 0,
        m: 0,
    };

    pub fn te(n: u32, m: u32) -> Self {
        Self {
            family: ModeFamily::Te,
            n,
            m,
        }
    }

    pub fn tm(n: u32, m: u32) -> Self {
        Self {
            family: ModeFamily::Tm,
            n,
            m,
        }
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            ModeFamily::Tem => f.write_str("TEM"),
            fam if self.n < 10 && self.m < 10 => write!(f, "{fam}{}{}", self.n, self.m),
            fam => write!(f, "{fam}{}_{}", self.n, self.m),
        }
    }
}

impl std::str::FromStr for ModeId {
    type Err = Error;

    /// Accepts `TEM`, `TE11`, `tm01` and the long form `TE12_1`.
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        if up == "TEM" {
            return Ok(ModeId::TEM);
        }
        let bad = || Error::Input(format!("invalid mode label '{s}'"));
        let (family, rest) = if let Some(r) = up.strip_prefix("TE") {
            (ModeFamily::Te, r)
        } else if let Some(r) = up.strip_prefix("TM") {
            (ModeFamily::Tm, r)
        } else {
            return Err(bad());
        };
        let (n, m) = match rest.split_once('_') {
            Some((n, m)) => (n.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?),
            None if rest.len() == 2 && rest.bytes().all(|b| b.is_ascii_digit()) => {
                ((rest.as_bytes()[0] - b'0') as u32, (rest.as_bytes()[1] - b'0') as u32)
            }
            None => return Err(bad()),
        };
        if m == 0 {
            return Err(bad());
        }
        Ok(ModeId { family, n, m })
    }
}

/// Cutoff data for one mode. `k_c` is geometric; `f_c` uses the real parts of
/// the fill material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeDispersion {
    pub mode: ModeId,
    pub k_c: f64,
    pub f_c: f64,
}

impl ModeDispersion {
    pub fn tem() -> Self {
        Self {
            mode: ModeId::TEM,
            k_c: 0.0,
            f_c: 0.0,
        }
    }

    /// Lossless propagation constant sqrt(k^2 - k_c^2), or `None` at/below cutoff.
    pub fn beta(&self, fill: &MaterialSpectrum, f_hz: f64) -> Result<Option<f64>> {
        let m = fill.interpolate(f_hz)?;
        let k = 2.0 * PI * f_hz * m.index_real() / SPEED_OF_LIGHT;
        let b2 = k * k - self.k_c * self.k_c;
        Ok((b2 > 0.0).then(|| b2.sqrt()))
    }

    pub fn propagates(&self, f_hz: f64) -> bool {
        self.mode.family == ModeFamily::Tem || f_hz > self.f_c
    }
}

/// f_c = k_c c / (2 pi sqrt(eps' mu')). For dispersive fills the material is
/// evaluated at f_c itself (fixed point, end rows held outside the table).
pub fn cutoff_frequency(k_c: f64, fill: &MaterialSpectrum) -> f64 {
    let eval = |f: f64| {
        let m = fill
            .interpolate_with(f, true)
            .expect("hold extrapolation never fails");
        k_c * SPEED_OF_LIGHT / (2.0 * PI * m.index_real())
    };
    let mut f = eval(fill.frequency_range().map(|r| r.0).unwrap_or(0.0));
    if fill.is_constant() {
        return f;
    }
    for _ in 0..100 {
        let next = eval(f);
        if (next - f).abs() <= 1e-13 * f {
            return next;
        }
        f = next;
    }
    f
}
