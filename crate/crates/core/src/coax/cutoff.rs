use std::f64::consts::PI;

use crate::bessel::{cross_te, cross_te_scale, cross_tm, cross_tm_scale};
use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::numeric::{bisect, scan_brackets};

use super::geometry::{cutoff_frequency, CoaxGeometry, ModeDispersion, ModeFamily, ModeId};

/// Maximum |cross(k_c)| / scale(k_c) accepted at a reported root.
pub const CUTOFF_RESIDUAL_TOL: f64 = 1e-8;

const SAMPLES_PER_PERIOD: f64 = 20.0;
// Bisection runs to float resolution, well past 1e-12: close to a zero of
// one factor the cross product is steep relative to its own magnitude.
const BISECTION_REL_TOL: f64 = 4.0 * f64::EPSILON;

/// k_c scan step: the asymptotic root spacing pi/(b - a) split into 20 samples.
pub fn scan_step(geom: &CoaxGeometry) -> f64 {
    PI / (geom.b - geom.a) / SAMPLES_PER_PERIOD
}

fn residual(family: ModeFamily, n: u32, k: f64, a: f64, b: f64) -> (f64, f64) {
    match family {
        ModeFamily::Te => (cross_te(n, k * a, k * b), cross_te_scale(n, k * a, k * b)),
        ModeFamily::Tm => (cross_tm(n, k * a, k * b), cross_tm_scale(n, k * a, k * b)),
        ModeFamily::Tem => (0.0, 1.0),
    }
}

/// Largest k_c that can have f_c <= max_f for this fill.
fn k_limit(geom: &CoaxGeometry, max_f: f64) -> f64 {
    let index = geom
        .dielectric
        .rows()
        .iter()
        .map(|r| (r.eps_p * r.mu_p).sqrt())
        .fold(0.0f64, f64::max);
    2.0 * PI * max_f * index / SPEED_OF_LIGHT
}

/// Roots of the cross-product equation of one azimuthal order, ascending.
pub(crate) fn roots_for_order(
    geom: &CoaxGeometry,
    family: ModeFamily,
    n: u32,
    k_max: f64,
    step: f64,
) -> Result<Vec<f64>> {
    let (a, b) = (geom.a, geom.b);
    let f = |k: f64| {
        let v = residual(family, n, k, a, b).0;
        if v.is_finite() {
            v
        } else {
            f64::NAN
        }
    };
    let mut roots = Vec::new();
    for br in scan_brackets(f, step * 1e-2, k_max, step) {
        if !(f(br.lo).is_finite() && f(br.hi).is_finite()) {
            continue;
        }
        let k = bisect(f, br, BISECTION_REL_TOL);
        let (v, scale) = residual(family, n, k, a, b);
        let rel = v.abs() / scale;
        if !(rel < CUTOFF_RESIDUAL_TOL) {
            return Err(Error::RootBracketing {
                n,
                lo: br.lo,
                hi: br.hi,
                reason: format!("residual {rel:e} after bisection"),
            });
        }
        roots.push(k);
    }
    Ok(roots)
}

/// All roots with f_c <= `max_f` for azimuthal orders `0..=max_n`, sorted by f_c.
/// `Tem` yields the single TEM entry.
pub fn find_cutoffs(
    geom: &CoaxGeometry,
    family: ModeFamily,
    max_n: u32,
    max_f: f64,
) -> Result<Vec<ModeDispersion>> {
    if !(max_f > 0.0) {
        return Err(Error::Input(format!("max_f must be positive, got {max_f}")));
    }
    if family == ModeFamily::Tem {
        return Ok(vec![ModeDispersion::tem()]);
    }
    let step = scan_step(geom);
    let k_max = k_limit(geom, max_f);
    let mut out = Vec::new();
    for n in 0..=max_n {
        collect_order(geom, family, n, k_max, step, max_f, &mut out)?;
    }
    sort_modes(&mut out);
    Ok(out)
}

/// Like [`find_cutoffs`] but keeps increasing `n` until an order has no root
/// below `max_f` (the lowest root grows monotonically with `n`).
pub fn find_all_cutoffs(
    geom: &CoaxGeometry,
    family: ModeFamily,
    max_f: f64,
) -> Result<Vec<ModeDispersion>> {
    if family == ModeFamily::Tem {
        return find_cutoffs(geom, family, 0, max_f);
    }
    if !(max_f > 0.0) {
        return Err(Error::Input(format!("max_f must be positive, got {max_f}")));
    }
    let step = scan_step(geom);
    let k_max = k_limit(geom, max_f);
    let mut out = Vec::new();
    for n in 0u32.. {
        let before = out.len();
        collect_order(geom, family, n, k_max, step, max_f, &mut out)?;
        if n >= 1 && out.len() == before {
            break;
        }
    }
    sort_modes(&mut out);
    Ok(out)
}

fn collect_order(
    geom: &CoaxGeometry,
    family: ModeFamily,
    n: u32,
    k_max: f64,
    step: f64,
    max_f: f64,
    out: &mut Vec<ModeDispersion>,
) -> Result<()> {
    let roots = roots_for_order(geom, family, n, k_max, step)?;
    for (i, k_c) in roots.into_iter().enumerate() {
        let f_c = cutoff_frequency(k_c, &geom.dielectric);
        if f_c <= max_f {
            let mode = match family {
                ModeFamily::Te => ModeId::te(n, i as u32 + 1),
                _ => ModeId::tm(n, i as u32 + 1),
            };
            out.push(ModeDispersion { mode, k_c, f_c });
        }
    }
    Ok(())
}

fn sort_modes(v: &mut [ModeDispersion]) {
    v.sort_by(|x, y| x.f_c.total_cmp(&y.f_c).then(x.mode.cmp(&y.mode)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Cable;

    #[test]
    fn tem_single_entry() {
        let g = Cable::Ut086.geometry();
        let m = find_cutoffs(&g, ModeFamily::Tem, 5, 1e12).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].k_c, 0.0);
        assert_eq!(m[0].f_c, 0.0);
    }

    #[test]
    fn te11_sign_constant_below_first_root() {
        let g = Cable::Ut086.geometry();
        let first = find_cutoffs(&g, ModeFamily::Te, 1, 100e9).unwrap();
        let te11 = first.iter().find(|m| m.mode == ModeId::te(1, 1)).unwrap();
        let s0 = cross_te(1, 1.0 * g.a, 1.0 * g.b).signum();
        for i in 1..2000 {
            let k = te11.k_c * i as f64 / 2000.0 * 0.999;
            assert_eq!(cross_te(1, k * g.a, k * g.b).signum(), s0);
        }
    }

    #[test]
    fn invalid_max_f() {
        let g = Cable::Ut086.geometry();
        assert!(find_cutoffs(&g, ModeFamily::Te, 2, 0.0).is_err());
    }

    #[test]
    fn te0m_tm1m_degenerate() {
        // J0' = -J1, so the TE_0m and TM_1m equations coincide.
        let g = Cable::Ut086.geometry();
        let te = find_cutoffs(&g, ModeFamily::Te, 0, 400e9).unwrap();
        let tm = find_cutoffs(&g, ModeFamily::Tm, 1, 400e9).unwrap();
        let tm1: Vec<_> = tm.iter().filter(|m| m.mode.n == 1).collect();
        for (a, b) in te.iter().zip(tm1) {
            assert!(((a.k_c - b.k_c) / a.k_c).abs() < 1e-10);
        }
    }
}
