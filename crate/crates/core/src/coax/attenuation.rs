//! Attenuation constants from power flow and wall/material dissipation.
//!
//! For TE/TM modes the radial dependence is the cross product
//! `R(x) = Y_n^(p)(k_c b) J_n(x) - J_n^(p)(k_c b) Y_n(x)` with `x = k_c rho`,
//! where `^(p)` is a derivative for TE. This keeps the outer wall
//! well-scaled for any order. The field amplitude cancels in every ratio.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bessel::{j, jp, y, yp};
use crate::constants::{free_space_wavenumber, EPS0, MU0, NP_TO_DB, Z_VAC};
use crate::error::{Error, Result};
use crate::material::MaterialPoint;
use crate::numeric::{integrate, Tolerance};

use super::geometry::{CoaxGeometry, ModeDispersion, ModeFamily};

/// Attenuation in dB/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttenuationResult {
    pub alpha_c: f64,
    pub alpha_d: f64,
    pub alpha_total: f64,
}

impl AttenuationResult {
    pub fn from_nepers(alpha_c_np: f64, alpha_d_np: f64) -> Self {
        let alpha_c = NP_TO_DB * alpha_c_np;
        let alpha_d = NP_TO_DB * alpha_d_np;
        Self {
            alpha_c,
            alpha_d,
            alpha_total: alpha_c + alpha_d,
        }
    }
}

/// Axial power flow `p0` [W] and conductor dissipation per metre `pl` [W/m]
/// for a given field amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIntegrals {
    pub p0: f64,
    pub pl: f64,
}

impl PowerIntegrals {
    /// Conductor attenuation `pl / (2 p0)` [Np/m].
    pub fn alpha_np(&self) -> f64 {
        self.pl / (2.0 * self.p0)
    }
}

/// Material dissipation evaluated with the complex fill constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyMaterialLoss {
    pub p0: f64,
    pub p_d: f64,
    pub p_m: f64,
    /// Complex propagation constant, `exp(-j beta z)` convention.
    pub beta: Complex64,
    /// `(p_d + p_m) / (2 p0)` in dB/m.
    pub alpha_dm: f64,
}

/// R_s = sqrt(omega mu0 mu_c / (2 sigma)) for the conductor of `geom`.
pub fn surface_resistance(geom: &CoaxGeometry, f_hz: f64) -> Result<f64> {
    let sigma = geom.conductor.sigma()?;
    if !(sigma > 0.0) {
        return Err(Error::InvalidMaterial {
            name: geom.conductor.name.clone(),
            reason: format!("conductivity must be positive, got {sigma}"),
        });
    }
    let mu_c = geom.conductor.interpolate_with(f_hz, true)?.mu_p();
    Ok((2.0 * PI * f_hz * MU0 * mu_c / (2.0 * sigma)).sqrt())
}

/// Angular integrals of cos^2(n phi) and sin^2(n phi) over a full turn.
fn angular(n: u32) -> (f64, f64) {
    if n == 0 {
        (2.0 * PI, 0.0)
    } else {
        (PI, PI)
    }
}

/// Closed-form TEM attenuation with the small-loss dielectric term.
pub fn attenuation_tem(geom: &CoaxGeometry, f_hz: f64) -> Result<AttenuationResult> {
    if !(f_hz > 0.0) {
        return Err(Error::Input(format!("frequency must be positive, got {f_hz}")));
    }
    let m = geom.dielectric.interpolate(f_hz)?;
    let omega = 2.0 * PI * f_hz;
    let rs = surface_resistance(geom, f_hz)?;
    let ln_ba = (geom.b / geom.a).ln();
    let z0 = (MU0 * m.mu_p() / (EPS0 * m.eps_p())).sqrt() * ln_ba / (2.0 * PI);
    let alpha_c = rs / (4.0 * PI * z0) * (1.0 / geom.a + 1.0 / geom.b);
    let k = free_space_wavenumber(f_hz) * m.index_real();
    let alpha_d =
        PI * omega * EPS0 * m.eps_p() * m.tan_delta() * z0 / ln_ba + 0.5 * k * m.tan_delta_m();
    Ok(AttenuationResult::from_nepers(alpha_c, alpha_d))
}

/// TE attenuation; builds the mode profile on each call. Use
/// [`ModeProfile`] directly for frequency sweeps.
pub fn attenuation_te(
    geom: &CoaxGeometry,
    mode: &ModeDispersion,
    f_hz: f64,
) -> Result<AttenuationResult> {
    if mode.mode.family != ModeFamily::Te {
        return Err(Error::Input(format!("{} is not a TE mode", mode.mode)));
    }
    ModeProfile::new(geom, mode)?.attenuation(f_hz)
}

pub fn attenuation_tm(
    geom: &CoaxGeometry,
    mode: &ModeDispersion,
    f_hz: f64,
) -> Result<AttenuationResult> {
    if mode.mode.family != ModeFamily::Tm {
        return Err(Error::Input(format!("{} is not a TM mode", mode.mode)));
    }
    ModeProfile::new(geom, mode)?.attenuation(f_hz)
}

/// Dispatches on the mode family.
pub fn attenuation(
    geom: &CoaxGeometry,
    mode: &ModeDispersion,
    f_hz: f64,
) -> Result<AttenuationResult> {
    match mode.mode.family {
        ModeFamily::Tem => attenuation_tem(geom, f_hz),
        _ => ModeProfile::new(geom, mode)?.attenuation(f_hz),
    }
}

/// Frequency-independent radial integrals of one mode on one cross-section.
#[derive(Debug, Clone)]
pub struct ModeProfile {
    pub geom: CoaxGeometry,
    pub mode: ModeDispersion,
    /// Integral of R^2 / x over [k_c a, k_c b].
    pub i_azimuthal: f64,
    /// Integral of x R'^2.
    pub i_radial: f64,
    /// Integral of x R^2.
    pub i_axial: f64,
    /// TE: R at (a, b). TM: R' at (a, b).
    pub wall: (f64, f64),
}

impl ModeProfile {
    pub fn new(geom: &CoaxGeometry, mode: &ModeDispersion) -> Result<Self> {
        let (a, b) = (geom.a, geom.b);
        if mode.mode.family == ModeFamily::Tem {
            return Ok(Self {
                geom: geom.clone(),
                mode: *mode,
                i_azimuthal: 0.0,
                i_radial: 0.0,
                i_axial: 0.0,
                wall: (0.0, 0.0),
            });
        }
        if !(mode.k_c > 0.0) {
            return Err(Error::Input(format!(
                "{} requires a positive cutoff wavevector",
                mode.mode
            )));
        }
        let n = mode.mode.n;
        let kc = mode.k_c;
        let (cy, cj) = match mode.mode.family {
            ModeFamily::Te => (yp(n, kc * b), jp(n, kc * b)),
            _ => (y(n, kc * b), j(n, kc * b)),
        };
        let r = |x: f64| cy * j(n, x) - cj * y(n, x);
        let rp = |x: f64| cy * jp(n, x) - cj * yp(n, x);
        let (xa, xb) = (kc * a, kc * b);
        let tol = Tolerance::default();
        let i_azimuthal = if n == 0 {
            0.0
        } else {
            integrate(|x| r(x).powi(2) / x, xa, xb, tol)?.value
        };
        let i_radial = integrate(|x| x * rp(x).powi(2), xa, xb, tol)?.value;
        let i_axial = integrate(|x| x * r(x).powi(2), xa, xb, tol)?.value;
        let wall = match mode.mode.family {
            ModeFamily::Te => (r(xa), r(xb)),
            _ => (rp(xa), rp(xb)),
        };
        Ok(Self {
            geom: geom.clone(),
            mode: *mode,
            i_azimuthal,
            i_radial,
            i_axial,
            wall,
        })
    }

    /// cos/sin-weighted transverse integral n^2 s_n I_az + c_n I_rad.
    fn transverse(&self) -> f64 {
        let n = self.mode.mode.n as f64;
        let (c, s) = angular(self.mode.mode.n);
        s * n * n * self.i_azimuthal + c * self.i_radial
    }

    fn check_propagating(&self, f_hz: f64) -> Result<()> {
        if self.mode.mode.family != ModeFamily::Tem && f_hz <= self.mode.f_c {
            return Err(Error::BelowCutoff {
                mode: self.mode.mode.to_string(),
                f_hz,
                f_c_hz: self.mode.f_c,
            });
        }
        Ok(())
    }

    /// Lossless-field power flow and conductor dissipation for amplitude `amp`.
    pub fn power_integrals(&self, f_hz: f64, amp: f64) -> Result<PowerIntegrals> {
        self.check_propagating(f_hz)?;
        let m = self.geom.dielectric.interpolate(f_hz)?;
        let rs = surface_resistance(&self.geom, f_hz)?;
        let omega = 2.0 * PI * f_hz;
        let k = free_space_wavenumber(f_hz) * m.index_real();
        let kc = self.mode.k_c;
        let (a, b) = (self.geom.a, self.geom.b);
        let amp2 = amp * amp;
        match self.mode.mode.family {
            ModeFamily::Tem => {
                let eta = Z_VAC * (m.mu_p() / m.eps_p()).sqrt();
                let p0 = PI * amp2 * (b / a).ln() / eta;
                let pl = rs * PI * amp2 / (eta * eta) * (1.0 / a + 1.0 / b);
                Ok(PowerIntegrals { p0, pl })
            }
            ModeFamily::Te => {
                let beta = (k * k - kc * kc).sqrt();
                let n2 = (self.mode.mode.n as f64).powi(2);
                let (c, s) = angular(self.mode.mode.n);
                let kc4 = kc.powi(4);
                let p0 = 0.5 * omega * MU0 * m.mu_p() * beta * amp2 / kc4 * self.transverse();
                let wall = |rho: f64, r: f64| rho * r * r * (c + s * beta * beta * n2 / (kc4 * rho * rho));
                let pl = 0.5 * rs * amp2 * (wall(a, self.wall.0) + wall(b, self.wall.1));
                Ok(PowerIntegrals { p0, pl })
            }
            ModeFamily::Tm => {
                let beta = (k * k - kc * kc).sqrt();
                let (c, _) = angular(self.mode.mode.n);
                let we = omega * EPS0 * m.eps_p();
                let p0 = 0.5 * we * beta * amp2 / kc.powi(4) * self.transverse();
                let pl = 0.5 * rs * amp2 * we * we / (kc * kc)
                    * c
                    * (a * self.wall.0.powi(2) + b * self.wall.1.powi(2));
                Ok(PowerIntegrals { p0, pl })
            }
        }
    }

    /// Conductor loss from the power integrals plus the small-loss material term
    /// k^2 (tan d + tan d_m) / (2 beta).
    pub fn attenuation(&self, f_hz: f64) -> Result<AttenuationResult> {
        if self.mode.mode.family == ModeFamily::Tem {
            return attenuation_tem(&self.geom, f_hz);
        }
        let pw = self.power_integrals(f_hz, 1.0)?;
        let m = self.geom.dielectric.interpolate(f_hz)?;
        let alpha_d = self.small_loss_alpha_np(&m, f_hz);
        Ok(AttenuationResult::from_nepers(pw.alpha_np(), alpha_d))
    }

    /// Small-loss material attenuation [Np/m].
    pub fn small_loss_alpha_np(&self, m: &MaterialPoint, f_hz: f64) -> f64 {
        let k = free_space_wavenumber(f_hz) * m.index_real();
        let beta = (k * k - self.mode.k_c.powi(2)).sqrt();
        k * k * (m.tan_delta() + m.tan_delta_m()) / (2.0 * beta)
    }

    /// Material dissipation using the complex constants `m` in the field
    /// amplitudes and the complex propagation constant. The radial
    /// profile itself is geometric and unchanged.
    pub fn lossy_material_loss(
        &self,
        m: &MaterialPoint,
        f_hz: f64,
        amp: f64,
    ) -> Result<LossyMaterialLoss> {
        self.check_propagating(f_hz)?;
        let omega = 2.0 * PI * f_hz;
        let k0 = free_space_wavenumber(f_hz);
        let kc = self.mode.k_c;
        let beta = (k0 * k0 * m.eps_r * m.mu_r - kc * kc).sqrt();
        let eps_pp = -m.eps_r.im;
        let mu_pp = -m.mu_r.im;
        let amp2 = amp * amp;
        let (p0, p_d, p_m) = match self.mode.mode.family {
            ModeFamily::Tem => {
                let (a, b) = (self.geom.a, self.geom.b);
                let eta = Z_VAC * (m.mu_r / m.eps_r).sqrt();
                let geo = 2.0 * PI * (b / a).ln() * amp2;
                let p0 = 0.5 * (1.0 / eta).re * geo;
                let p_d = 0.5 * omega * EPS0 * eps_pp * geo;
                let p_m = 0.5 * omega * MU0 * mu_pp * geo / eta.norm_sqr();
                (p0, p_d, p_m)
            }
            ModeFamily::Te => {
                let t = self.transverse();
                let (c, _) = angular(self.mode.mode.n);
                let kc4 = kc.powi(4);
                let wmu = omega * MU0 * m.mu_r;
                let p0 = 0.5 * (wmu * beta.conj()).re * amp2 / kc4 * t;
                let p_d = 0.5 * omega * EPS0 * eps_pp * wmu.norm_sqr() * amp2 / kc4 * t;
                let p_m = 0.5
                    * omega
                    * MU0
                    * mu_pp
                    * amp2
                    * (beta.norm_sqr() / kc4 * t + c * self.i_axial / (kc * kc));
                (p0, p_d, p_m)
            }
            ModeFamily::Tm => {
                let t = self.transverse();
                let (c, _) = angular(self.mode.mode.n);
                let kc4 = kc.powi(4);
                let weps = omega * EPS0 * m.eps_r;
                let p0 = 0.5 * (weps.conj() * beta).re * amp2 / kc4 * t;
                let p_d = 0.5
                    * omega
                    * EPS0
                    * eps_pp
                    * amp2
                    * (beta.norm_sqr() / kc4 * t + c * self.i_axial / (kc * kc));
                let p_m = 0.5 * omega * MU0 * mu_pp * weps.norm_sqr() * amp2 / kc4 * t;
                (p0, p_d, p_m)
            }
        };
        Ok(LossyMaterialLoss {
            p0,
            p_d,
            p_m,
            beta,
            alpha_dm: NP_TO_DB * (p_d + p_m) / (2.0 * p0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coax::{find_cutoffs, ModeId};
    use crate::material::{MaterialKind, MaterialSpectrum};
    use crate::presets::Cable;

    fn te11(g: &CoaxGeometry) -> ModeDispersion {
        find_cutoffs(g, ModeFamily::Te, 1, 100e9)
            .unwrap()
            .into_iter()
            .find(|m| m.mode == ModeId::te(1, 1))
            .unwrap()
    }

    #[test]
    fn tem_closed_form_one_liner() {
        // Independent scalar evaluation with the UT086 constants.
        let g = Cable::Ut086.geometry();
        let f = 10e9;
        let (a, b, sigma, er, tand): (f64, f64, f64, f64, f64) = (0.255e-3, 0.835e-3, 1.41e6, 2.08, 4e-4);
        let w = 2.0 * PI * f;
        let rs = (w * MU0 / (2.0 * sigma)).sqrt();
        let z0 = (MU0 / (EPS0 * er)).sqrt() * (b / a).ln() / (2.0 * PI);
        let ac = rs / (4.0 * PI * z0) * (1.0 / a + 1.0 / b);
        let ad = PI * w * EPS0 * er * tand * z0 / (b / a).ln();
        let expect = 20.0 * std::f64::consts::E.log10() * (ac + ad);
        let got = attenuation_tem(&g, f).unwrap();
        assert!(((got.alpha_total - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn tem_dielectric_term_equals_k_tan_over_two() {
        let g = Cable::Ut086.geometry();
        for f in [1e9, 3e10, 2e11] {
            let r = attenuation_tem(&g, f).unwrap();
            let k = free_space_wavenumber(f) * 2.08f64.sqrt();
            let expect = NP_TO_DB * k * 4e-4 / 2.0;
            assert!(((r.alpha_d - expect) / expect).abs() < 1e-12);
        }
    }

    #[test]
    fn lossless_dielectric_gives_zero_alpha_d() {
        let mut g = Cable::Ut086.geometry();
        g.dielectric =
            MaterialSpectrum::constant("ptfe0", MaterialKind::Dielectric, 2.08, 0.0, 1.0, 0.0)
                .unwrap();
        assert_eq!(attenuation_tem(&g, 5e9).unwrap().alpha_d, 0.0);
        let m = te11(&g);
        assert_eq!(attenuation_te(&g, &m, 9e10).unwrap().alpha_d, 0.0);
    }

    #[test]
    fn tem_power_integrals_match_closed_form() {
        let g = Cable::Ut047.geometry();
        let p = ModeProfile::new(&g, &ModeDispersion::tem()).unwrap();
        let pw = p.power_integrals(4e10, 3.0).unwrap();
        let closed = attenuation_tem(&g, 4e10).unwrap().alpha_c;
        assert!(((NP_TO_DB * pw.alpha_np() - closed) / closed).abs() < 1e-12);
    }

    #[test]
    fn te_diverges_at_cutoff() {
        let g = Cable::Ut086.geometry();
        let m = te11(&g);
        let mut last = 0.0;
        for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
            let a = attenuation_te(&g, &m, m.f_c * (1.0 + eps)).unwrap().alpha_c;
            assert!(a > last);
            last = a;
        }
        assert!(last > 1e3);
        assert!(matches!(
            attenuation_te(&g, &m, m.f_c),
            Err(Error::BelowCutoff { .. })
        ));
    }

    #[test]
    fn amplitude_cancels() {
        let g = Cable::Ut086.geometry();
        let modes = find_cutoffs(&g, ModeFamily::Te, 3, 300e9).unwrap();
        let tm = find_cutoffs(&g, ModeFamily::Tm, 3, 300e9).unwrap();
        for m in modes.iter().chain(&tm) {
            let p = ModeProfile::new(&g, m).unwrap();
            let f = m.f_c * 1.5;
            let a1 = p.power_integrals(f, 1.0).unwrap().alpha_np();
            let a2 = p.power_integrals(f, 2.0).unwrap().alpha_np();
            assert!(((a1 - a2) / a1).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_identity_of_profiles() {
        // For Neumann (TE) and Dirichlet (TM) eigenfunctions,
        // int (R'^2 + n^2 R^2 / x^2) x dx = int x R^2 dx.
        let g = Cable::Ut086.geometry();
        let mut modes = find_cutoffs(&g, ModeFamily::Te, 4, 400e9).unwrap();
        modes.extend(find_cutoffs(&g, ModeFamily::Tm, 4, 400e9).unwrap());
        for m in &modes {
            let p = ModeProfile::new(&g, m).unwrap();
            let n2 = (m.mode.n as f64).powi(2);
            let lhs = p.i_radial + n2 * p.i_azimuthal;
            assert!(((lhs - p.i_axial) / p.i_axial).abs() < 1e-8, "{}", m.mode);
        }
    }

    #[test]
    fn alpha_d_tends_to_tem_as_kc_shrinks() {
        let g = Cable::Ut086.geometry();
        let f = 1e11;
        let tem = attenuation_tem(&g, f).unwrap().alpha_d;
        let base = te11(&g);
        for scale in [1e-2, 1e-4, 1e-6] {
            let m = ModeDispersion {
                k_c: base.k_c * scale,
                f_c: base.f_c * scale,
                ..base
            };
            let p = ModeProfile::new(&g, &m).unwrap();
            let ad = NP_TO_DB * p.small_loss_alpha_np(&g.dielectric.interpolate(f).unwrap(), f);
            assert!(((ad - tem) / tem).abs() < 2.0 * scale * scale + 1e-14);
        }
    }

    #[test]
    fn lossy_integrals_match_complex_beta() {
        // Two routes: Poynting balance with complex fields vs -Im(beta).
        let g = Cable::Ut086.geometry();
        let m = MaterialPoint {
            eps_r: Complex64::new(10.9, -0.55),
            mu_r: Complex64::new(1.31, -0.2),
        };
        let mut modes = vec![ModeDispersion::tem(), te11(&g)];
        modes.extend(find_cutoffs(&g, ModeFamily::Tm, 2, 200e9).unwrap());
        for md in &modes {
            let p = ModeProfile::new(&g, md).unwrap();
            for f in [9e10, 1.5e11] {
                if !md.propagates(f) {
                    continue;
                }
                let r = p.lossy_material_loss(&m, f, 1.0).unwrap();
                let direct = -NP_TO_DB * r.beta.im;
                assert!(((r.alpha_dm - direct) / direct).abs() < 1e-8, "{} {}", md.mode, f);
            }
        }
    }

    #[test]
    fn real_profile_matches_small_loss() {
        // With a vanishing-loss fill the complex-field route converges to the
        // perturbative formula.
        let g = Cable::Ut086.geometry();
        let md = te11(&g);
        let p = ModeProfile::new(&g, &md).unwrap();
        let m = MaterialPoint {
            eps_r: Complex64::new(2.08, -2.08e-7),
            mu_r: Complex64::new(1.0, -3e-7),
        };
        let f = 1e11;
        let exact = p.lossy_material_loss(&m, f, 1.0).unwrap().alpha_dm;
        let approx = NP_TO_DB * p.small_loss_alpha_np(&m, f);
        assert!(((exact - approx) / approx).abs() < 1e-6);
    }
}
