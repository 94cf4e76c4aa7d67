//! Absorber-filled coaxial low-pass filter: impedance matching, bore
//! optimisation, material attenuation and the photon flux left after the filter.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::coax::{find_cutoffs, CoaxGeometry, ModeDispersion, ModeFamily, ModeId, ModeProfile};
use crate::constants::{free_space_wavenumber, EPS0, MU0, NP_TO_DB, Z_VAC};
use crate::error::{Error, Result};
use crate::flux::{apply_attenuator, FluxSpectrum};
use crate::material::{MaterialPoint, MaterialSpectrum};
use crate::numeric::{golden_section, grid_with_step};

/// Reference impedance for matching [Ohm].
pub const Z_REF: f64 = 50.0;
/// Reflection floor used in band averages [dB].
pub const REFLECTION_FLOOR_DB: f64 = -300.0;
pub const BORE_GRID_STEP_HZ: f64 = 0.1e9;
/// Upper end of the bore search [m].
pub const BORE_SEARCH_MAX: f64 = 20e-3;
/// Measured filter data is used at and below this frequency.
pub const MEASURED_PATH_MAX_HZ: f64 = 70e9;

/// Coaxial filter: pin diameter `d_pin`, bore diameter `d_bore`, length `length`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterGeometry {
    pub d_pin: f64,
    pub d_bore: f64,
    pub length: f64,
    pub fill: MaterialSpectrum,
    pub conductor: MaterialSpectrum,
}

impl FilterGeometry {
    pub fn new(
        d_pin: f64,
        d_bore: f64,
        length: f64,
        fill: MaterialSpectrum,
        conductor: MaterialSpectrum,
    ) -> Result<Self> {
        if !(d_pin > 0.0 && d_bore > d_pin && length > 0.0 && d_bore.is_finite() && length.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "require 0 < d_pin < d_bore and length > 0, got {d_pin:e}, {d_bore:e}, {length:e} m"
            )));
        }
        // Validates the conductor.
        CoaxGeometry::new(d_pin / 2.0, d_bore / 2.0, conductor.clone(), fill.clone())?;
        Ok(Self {
            d_pin,
            d_bore,
            length,
            fill,
            conductor,
        })
    }

    /// The filter cross-section as a coaxial line filled with the absorber.
    pub fn coax(&self) -> CoaxGeometry {
        CoaxGeometry {
            a: self.d_pin / 2.0,
            b: self.d_bore / 2.0,
            conductor: self.conductor.clone(),
            dielectric: self.fill.clone(),
        }
    }
}

/// `Z_vac ln(D/d) / (2 pi) sqrt(mu_r / eps_r)`.
pub fn coax_impedance(d_pin: f64, d_bore: f64, m: &MaterialPoint) -> Complex64 {
    Z_VAC * (d_bore / d_pin).ln() / (2.0 * PI) * (m.mu_r / m.eps_r).sqrt()
}

pub fn filter_impedance(geom: &FilterGeometry, f_hz: f64) -> Result<Complex64> {
    let m = geom.fill.interpolate(f_hz)?;
    Ok(coax_impedance(geom.d_pin, geom.d_bore, &m))
}

/// `20 log10 |(Z - 50) / (Z + 50)|`, floored.
pub fn reflection_db(z: Complex64) -> f64 {
    let g = ((z - Z_REF) / (z + Z_REF)).norm();
    (20.0 * g.log10()).max(REFLECTION_FLOOR_DB)
}

/// Largest `||Z| - 50|` on a grid over the band, with its frequency.
pub fn max_impedance_deviation(geom: &FilterGeometry, band: (f64, f64), step: f64) -> Result<(f64, f64)> {
    let mut best = (0.0, band.0);
    for f in grid_with_step(band.0, band.1, step) {
        let dev = (filter_impedance(geom, f)?.norm() - Z_REF).abs();
        if dev > best.0 {
            best = (dev, f);
        }
    }
    Ok(best)
}

/// Band-averaged reflection in dB for a given bore.
pub fn average_reflection_db(
    d_pin: f64,
    d_bore: f64,
    fill: &MaterialSpectrum,
    band: (f64, f64),
    step: f64,
) -> Result<f64> {
    let points = grid_with_step(band.0, band.1, step)
        .into_iter()
        .map(|f| fill.interpolate(f))
        .collect::<Result<Vec<_>>>()?;
    Ok(average_over(&points, d_pin, d_bore))
}

fn average_over(points: &[MaterialPoint], d_pin: f64, d_bore: f64) -> f64 {
    points
        .iter()
        .map(|m| reflection_db(coax_impedance(d_pin, d_bore, m)))
        .sum::<f64>()
        / points.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoreOptimum {
    pub d_bore: f64,
    pub avg_reflection_db: f64,
}

/// Bore diameter minimising the band-averaged reflection against 50 Ohm.
pub fn optimize_bore(d_pin: f64, fill: &MaterialSpectrum, band: (f64, f64)) -> Result<BoreOptimum> {
    optimize_bore_with(d_pin, fill, band, BORE_GRID_STEP_HZ)
}

pub fn optimize_bore_with(
    d_pin: f64,
    fill: &MaterialSpectrum,
    band: (f64, f64),
    step: f64,
) -> Result<BoreOptimum> {
    if !(band.1 > band.0 && band.0 > 0.0) {
        return Err(Error::Input(format!("invalid band {:e}..{:e} Hz", band.0, band.1)));
    }
    let lo = 1.1 * d_pin;
    let hi = BORE_SEARCH_MAX;
    if !(hi > lo) {
        return Err(Error::SearchRange(format!("pin diameter {d_pin:e} m leaves no search range")));
    }
    let points = grid_with_step(band.0, band.1, step)
        .into_iter()
        .map(|f| fill.interpolate(f))
        .collect::<Result<Vec<_>>>()?;
    let (d, v) = golden_section(|d| average_over(&points, d_pin, d), lo, hi, 1e-12);
    let margin = 1e-6 * (hi - lo);
    if d - lo < margin || hi - d < margin {
        return Err(Error::SearchRange(format!(
            "minimum at the search boundary (D = {d:e} m in [{lo:e}, {hi:e}])"
        )));
    }
    Ok(BoreOptimum {
        d_bore: d,
        avg_reflection_db: v,
    })
}

/// Wave impedance of a mode in a medium: TEM `Z_vac sqrt(mu/eps)`,
/// TE `omega mu0 mu_r / beta`, TM `beta / (omega eps0 eps_r)`, with the
/// complex `beta = sqrt(k0^2 eps_r mu_r - k_c^2)`.
pub fn wave_impedance(family: ModeFamily, k_c: f64, m: &MaterialPoint, f_hz: f64) -> Complex64 {
    let omega = 2.0 * PI * f_hz;
    let k0 = free_space_wavenumber(f_hz);
    let beta = (k0 * k0 * m.eps_r * m.mu_r - k_c * k_c).sqrt();
    match family {
        ModeFamily::Tem => Z_VAC * (m.mu_r / m.eps_r).sqrt(),
        ModeFamily::Te => omega * MU0 * m.mu_r / beta,
        ModeFamily::Tm => beta / (omega * EPS0 * m.eps_r),
    }
}

/// Photons crossing an impedance step: `N1 (1 - |(Z2 - Z1)/(Z2 + Z1)|^2)`.
pub fn photon_entry(n1: f64, z1: Complex64, z2: Complex64) -> Result<f64> {
    let sum = z1 + z2;
    if sum.norm() == 0.0 {
        return Err(Error::Singularity("Z1 + Z2 = 0".into()));
    }
    let g2 = ((z2 - z1) / sum).norm_sqr();
    if g2 > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "|reflection|^2 = {g2} > 1: impedances are not passive"
        )));
    }
    Ok(n1 * (1.0 - g2).max(0.0))
}

/// Attenuation of a filter mode at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    /// Conductor attenuation [dB/m].
    pub alpha_c: f64,
    /// Dielectric plus magnetic attenuation from the complex-field integrals [dB/m].
    pub alpha_dm: f64,
    /// Small-loss approximation `k^2 (tan d + tan d_m) / (2 beta)` [dB/m].
    pub alpha_dm_small_loss: f64,
    /// Power flow and dissipation per metre for unit field amplitude.
    pub p0: f64,
    pub p_d: f64,
    pub p_m: f64,
    /// Material attenuation over the filter length [dB].
    pub a_db: f64,
}

/// Cutoff data of one mode for a cross-section; TEM needs no search.
pub fn mode_for(geom: &CoaxGeometry, id: ModeId, search_max_f: f64) -> Result<ModeDispersion> {
    if id.family == ModeFamily::Tem {
        return Ok(ModeDispersion::tem());
    }
    find_cutoffs(geom, id.family, id.n, search_max_f)?
        .into_iter()
        .find(|m| m.mode == id)
        .ok_or_else(|| {
            Error::Input(format!("{id} has no cutoff below {search_max_f:e} Hz in this geometry"))
        })
}

/// Per-mode evaluator of filter losses, reusing the radial integrals.
#[derive(Debug, Clone)]
pub struct FilterMode {
    pub profile: ModeProfile,
    pub length: f64,
}

impl FilterMode {
    pub fn new(geom: &FilterGeometry, id: ModeId, search_max_f: f64) -> Result<Self> {
        let coax = geom.coax();
        let mode = mode_for(&coax, id, search_max_f)?;
        Ok(Self {
            profile: ModeProfile::new(&coax, &mode)?,
            length: geom.length,
        })
    }

    pub fn mode(&self) -> &ModeDispersion {
        &self.profile.mode
    }

    pub fn attenuation(&self, f_hz: f64) -> Result<LossBreakdown> {
        let geom = &self.profile.geom;
        let m = geom.dielectric.interpolate(f_hz)?;
        let pw = self.profile.power_integrals(f_hz, 1.0)?;
        let lossy = self.profile.lossy_material_loss(&m, f_hz, 1.0)?;
        let small = NP_TO_DB * self.profile.small_loss_alpha_np(&m, f_hz);
        Ok(LossBreakdown {
            alpha_c: NP_TO_DB * pw.alpha_np(),
            alpha_dm: lossy.alpha_dm,
            alpha_dm_small_loss: small,
            p0: lossy.p0,
            p_d: lossy.p_d,
            p_m: lossy.p_m,
            a_db: lossy.alpha_dm * self.length,
        })
    }

    pub fn wave_impedance(&self, f_hz: f64) -> Result<Complex64> {
        let m = self.profile.geom.dielectric.interpolate(f_hz)?;
        let md = &self.profile.mode;
        Ok(match md.mode.family {
            ModeFamily::Tem => {
                let g = &self.profile.geom;
                coax_impedance(2.0 * g.a, 2.0 * g.b, &m)
            }
            fam => wave_impedance(fam, md.k_c, &m, f_hz),
        })
    }
}

pub fn filter_attenuation(geom: &FilterGeometry, mode: ModeId, f_hz: f64) -> Result<LossBreakdown> {
    FilterMode::new(geom, mode, f_hz.max(1.0))?.attenuation(f_hz)
}

/// Averaged filter transmission against a through line, tabulated in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredS21 {
    pub freqs_hz: Vec<f64>,
    /// `s21_db[k][i]`: filter `k` at `freqs_hz[i]`.
    pub s21_db: Vec<Vec<f64>>,
    pub thru_db: Vec<f64>,
}

impl MeasuredS21 {
    pub fn new(freqs_hz: Vec<f64>, s21_db: Vec<Vec<f64>>, thru_db: Vec<f64>) -> Result<Self> {
        if freqs_hz.is_empty() || s21_db.is_empty() {
            return Err(Error::Input("measured S21 table is empty".into()));
        }
        if freqs_hz.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Input("measured S21 frequencies must increase".into()));
        }
        if thru_db.len() != freqs_hz.len() || s21_db.iter().any(|c| c.len() != freqs_hz.len()) {
            return Err(Error::Input("measured S21 columns have different lengths".into()));
        }
        Ok(Self {
            freqs_hz,
            s21_db,
            thru_db,
        })
    }

    /// CSV with header `f_hz,<one column per filter>...,thru_db`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let cols: Vec<&str> = headers.iter().collect();
        if cols.len() < 3 || cols[0] != "f_hz" || cols[cols.len() - 1] != "thru_db" {
            return Err(Error::Parse {
                line: 1,
                message: "expected header f_hz,<s21 columns>,thru_db".into(),
            });
        }
        let k = cols.len() - 2;
        let (mut f, mut s, mut t) = (Vec::new(), vec![Vec::new(); k], Vec::new());
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map(|p| p.line() as usize).unwrap_or(0),
                message: e.to_string(),
            })?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            let vals = rec
                .iter()
                .map(|v| v.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line,
                    message: e.to_string(),
                })?;
            f.push(vals[0]);
            for i in 0..k {
                s[i].push(vals[1 + i]);
            }
            t.push(vals[k + 1]);
        }
        Self::new(f, s, t)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    /// Filter attenuation `-(mean S21 - thru)` in dB, linearly interpolated.
    pub fn attenuation_db(&self, f_hz: f64) -> Result<f64> {
        let (lo, hi) = (self.freqs_hz[0], *self.freqs_hz.last().unwrap());
        if f_hz < lo || f_hz > hi {
            return Err(Error::Range {
                f_hz,
                min_hz: lo,
                max_hz: hi,
            });
        }
        let k = self.s21_db.len() as f64;
        let at = |i: usize| -> f64 {
            let mean = self.s21_db.iter().map(|c| c[i]).sum::<f64>() / k;
            -(mean - self.thru_db[i])
        };
        let i = self.freqs_hz.partition_point(|&x| x <= f_hz);
        if i == 0 {
            return Ok(at(0));
        }
        if i >= self.freqs_hz.len() {
            return Ok(at(self.freqs_hz.len() - 1));
        }
        let (f0, f1) = (self.freqs_hz[i - 1], self.freqs_hz[i]);
        let t = (f_hz - f0) / (f1 - f0);
        Ok(at(i - 1) * (1.0 - t) + at(i) * t)
    }
}

/// Settings for [`residual_flux`].
#[derive(Debug, Clone, Copy)]
pub struct ResidualOptions<'a> {
    pub measured: Option<&'a MeasuredS21>,
    /// Frequencies at or below this use the measured path.
    pub measured_max_hz: f64,
    /// Stage temperature of the filter [K].
    pub t_filter_k: f64,
}

/// Occupation after the filter for every mode of `chain_output`.
///
/// Above `measured_max_hz` each cable mode enters the filter mode with the
/// same indices through the wave-impedance step, then the filter acts as
/// an attenuator of `alpha_dm * l`. At lower frequencies the measured
/// transmission replaces both factors. The exit interface is not counted,
/// so the result is an upper bound.
pub fn residual_flux(
    chain_output: &FluxSpectrum,
    cable: &CoaxGeometry,
    filter: &FilterGeometry,
    opts: ResidualOptions<'_>,
) -> Result<FluxSpectrum> {
    let f_max = *chain_output.freqs_hz.last().unwrap();
    let needs_measured = chain_output.freqs_hz[0] <= opts.measured_max_hz;
    if needs_measured && opts.measured.is_none() {
        return Err(Error::Input(format!(
            "band starts at {:e} Hz: measured S21 data required at or below {:e} Hz",
            chain_output.freqs_hz[0], opts.measured_max_hz
        )));
    }
    let mut per_mode = Vec::with_capacity(chain_output.modes.len());
    for (id, row) in chain_output.modes.iter().zip(&chain_output.per_mode) {
        let cable_mode = mode_for(cable, *id, f_max)?;
        let fm = FilterMode::new(filter, *id, f_max)?;
        let out = chain_output
            .freqs_hz
            .par_iter()
            .zip(row.par_iter())
            .map(|(&f, &n1)| {
                if n1 == 0.0 && !cable_mode.propagates(f) {
                    return Ok(0.0);
                }
                if f <= opts.measured_max_hz {
                    let a_db = opts.measured.expect("checked above").attenuation_db(f)?;
                    return Ok(apply_attenuator(n1, a_db.max(0.0), opts.t_filter_k, f));
                }
                let m = cable.dielectric.interpolate(f)?;
                let z1 = match id.family {
                    ModeFamily::Tem => coax_impedance(2.0 * cable.a, 2.0 * cable.b, &m),
                    fam => wave_impedance(fam, cable_mode.k_c, &m, f),
                };
                let z2 = fm.wave_impedance(f)?;
                let n2 = photon_entry(n1, z1, z2)?;
                let a_db = fm.attenuation(f)?.a_db;
                Ok(apply_attenuator(n2, a_db, opts.t_filter_k, f))
            })
            .collect::<Result<Vec<f64>>>()?;
        per_mode.push(out);
    }
    Ok(FluxSpectrum::from_parts(
        chain_output.freqs_hz.clone(),
        chain_output.modes.clone(),
        per_mode,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::{chain_flux, FluxOptions, Scenario, CryostatChain, transport_modes};
    use crate::material::MaterialKind;
    use crate::presets::{copper, synthetic_absorber, Cable, FILTER_LENGTH, FILTER_PIN_DIAMETER};

    fn point(eps: Complex64, mu: Complex64) -> MaterialPoint {
        MaterialPoint { eps_r: eps, mu_r: mu }
    }

    #[test]
    fn impedance_identities() {
        let one = point(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        let z = coax_impedance(1.0, std::f64::consts::E, &one);
        assert!((z.re - Z_VAC / (2.0 * PI)).abs() < 1e-12 && z.im == 0.0);
        assert!((z.re - 59.958).abs() < 1e-3);
        let m = point(Complex64::new(3.0, -0.2), Complex64::new(1.2, -0.1));
        let m4 = point(m.eps_r * 4.0, m.mu_r);
        let ratio = coax_impedance(1.0, 4.0, &m4).norm() / coax_impedance(1.0, 4.0, &m).norm();
        assert!((ratio - 0.5).abs() < 1e-14);
    }

    #[test]
    fn vacuum_bore_matches_fifty_ohm() {
        let d = FILTER_PIN_DIAMETER;
        let opt = optimize_bore(d, &MaterialSpectrum::vacuum(), (1e9, 18e9)).unwrap();
        let exact = d * (2.0 * PI * Z_REF / Z_VAC).exp();
        assert!(((opt.d_bore - exact) / exact).abs() < 1e-9);
        let m = MaterialSpectrum::vacuum().interpolate(1e9).unwrap();
        assert!((coax_impedance(d, opt.d_bore, &m).norm() - Z_REF).abs() < 1e-7);
        assert!(opt.avg_reflection_db < -150.0);
    }

    #[test]
    fn bore_at_boundary_is_error() {
        // A fill this dense would need a bore beyond the search range.
        let m = MaterialSpectrum::constant("dense", MaterialKind::Dielectric, 5000.0, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            optimize_bore(FILTER_PIN_DIAMETER, &m, (1e9, 2e9)),
            Err(Error::SearchRange(_))
        ));
    }

    #[test]
    fn wave_impedance_tem_limit() {
        let m = point(Complex64::new(10.9, -0.5), Complex64::new(1.3, -0.2));
        let z = wave_impedance(ModeFamily::Te, 1e-9, &m, 1e11);
        let tem = Z_VAC * (m.mu_r / m.eps_r).sqrt();
        assert!((z - tem).norm() / tem.norm() < 1e-12);
    }

    #[test]
    fn photon_entry_limits() {
        let z = Complex64::new(50.0, 0.0);
        assert_eq!(photon_entry(3.0, z, z).unwrap(), 3.0);
        assert_eq!(photon_entry(3.0, z, Complex64::new(0.0, 0.0)).unwrap(), 0.0);
        assert!(matches!(photon_entry(1.0, z, -z), Err(Error::Singularity(_))));
        let n = photon_entry(2.0, z, Complex64::new(20.0, -7.0)).unwrap();
        assert!(n > 0.0 && n < 2.0);
    }

    #[test]
    fn te11_cutoff_and_losses() {
        let g = FilterGeometry::new(FILTER_PIN_DIAMETER, 5.1e-3, FILTER_LENGTH, synthetic_absorber(), copper()).unwrap();
        let te = FilterMode::new(&g, ModeId::te(1, 1), 110e9).unwrap();
        assert!(te.mode().f_c > 7e9 && te.mode().f_c < 9e9);
        let l = te.attenuation(1e11).unwrap();
        assert!(l.alpha_c > 0.0 && l.alpha_dm > 0.0 && l.p_d > 0.0 && l.p_m > 0.0);
        assert!((l.alpha_dm - NP_TO_DB * (l.p_d + l.p_m) / (2.0 * l.p0)).abs() < 1e-9 * l.alpha_dm);
        assert!(((l.alpha_dm_small_loss - l.alpha_dm) / l.alpha_dm).abs() < 0.05);
        let below = FilterMode::new(&g, ModeId::te(1, 1), 110e9).unwrap().attenuation(5e9);
        assert!(matches!(below, Err(Error::BelowCutoff { .. }) | Err(Error::Range { .. })));
    }

    #[test]
    fn measured_table() {
        let csv = "f_hz,s21_db_1,s21_db_2,thru_db\n1e9,-3,-5,-1\n2e9,-13,-15,-1\n";
        let m = MeasuredS21::from_csv_reader(csv.as_bytes()).unwrap();
        assert!((m.attenuation_db(1e9).unwrap() - 3.0).abs() < 1e-12);
        assert!((m.attenuation_db(1.5e9).unwrap() - 8.0).abs() < 1e-12);
        assert!(m.attenuation_db(3e9).is_err());
        let bad = "f_hz,thru_db\n1e9,0\n";
        assert!(matches!(MeasuredS21::from_csv_reader(bad.as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn identity_filter_passes_everything() {
        let chain = CryostatChain::default_for(Cable::Ut086);
        let modes = transport_modes(&chain.cable, 90e9, false).unwrap();
        let out = chain_flux(&chain, &modes, (82e9, 90e9), Scenario::AttenuatorsActive, FluxOptions { grid_step_hz: 1e9 }).unwrap();
        // Vacuum-filled filter with the cable's TEM impedance: no loss, no mismatch.
        let mut cable = chain.cable.clone();
        cable.dielectric = MaterialSpectrum::constant("ptfe0", MaterialKind::Dielectric, 2.08, 0.0, 1.0, 0.0).unwrap();
        let cable = &cable;
        let eps = 2.08f64;
        let d = FILTER_PIN_DIAMETER;
        let bore = d * ((cable.b / cable.a).ln() / eps.sqrt()).exp();
        let g = FilterGeometry::new(d, bore, FILTER_LENGTH, MaterialSpectrum::vacuum(), copper()).unwrap();
        let tem_only = FluxSpectrum::from_parts(out.freqs_hz.clone(), vec![out.modes[0]], vec![out.per_mode[0].clone()]);
        let opts = ResidualOptions { measured: None, measured_max_hz: MEASURED_PATH_MAX_HZ, t_filter_k: 0.006 };
        let res = residual_flux(&tem_only, cable, &g, opts).unwrap();
        for (a, b) in res.total.iter().zip(&tem_only.total) {
            assert!((a - b).abs() <= 1e-14 * b);
        }
    }

    #[test]
    fn measured_path_requires_data() {
        let spec = FluxSpectrum::from_parts(vec![60e9, 61e9], vec![ModeId::TEM], vec![vec![1.0, 1.0]]);
        let g = FilterGeometry::new(FILTER_PIN_DIAMETER, 5.1e-3, FILTER_LENGTH, synthetic_absorber(), copper()).unwrap();
        let opts = ResidualOptions { measured: None, measured_max_hz: MEASURED_PATH_MAX_HZ, t_filter_k: 0.006 };
        assert!(matches!(residual_flux(&spec, &Cable::Ut086.geometry(), &g, opts), Err(Error::Input(_))));
    }
}
