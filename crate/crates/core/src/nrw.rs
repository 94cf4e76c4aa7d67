//! Nicolson-Ross-Weir extraction of complex permittivity and permeability
//! from the S-parameters of a filled rectangular-waveguide section, and the
//! forward slab model it inverts.
//!
//! Conventions: `exp(+j omega t)` time dependence, propagation `exp(-j k_z z)`,
//! dominant TE10 mode, `eps_r = eps' - j eps''`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::free_space_wavenumber;
use crate::error::{Error, Result};
use crate::material::{MaterialKind, MaterialRow, MaterialSpectrum};

/// Below this `|S11|` the reflection quadratic is treated as degenerate.
pub const S11_FLOOR: f64 = 1e-12;
/// Default band-averaged relative discrepancy accepted by [`disambiguate_branches`].
pub const DEFAULT_AGREEMENT_THRESHOLD: f64 = 0.05;
pub const DEFAULT_MAX_BRANCH: u32 = 8;
/// `|S11 - S22| / max(|S11|, |S22|)` above which a warning is logged.
pub const ASYMMETRY_WARN: f64 = 0.05;

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Filled length `d` of a rectangular guide with walls `a_wg > b_wg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideSection {
    pub a_wg: f64,
    pub b_wg: f64,
    pub d: f64,
}

impl WaveguideSection {
    pub fn new(a_wg: f64, b_wg: f64, d: f64) -> Result<Self> {
        if !(a_wg > b_wg && b_wg > 0.0 && d > 0.0 && a_wg.is_finite() && d.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "require a > b > 0 and d > 0, got a = {a_wg:e}, b = {b_wg:e}, d = {d:e}"
            )));
        }
        Ok(Self { a_wg, b_wg, d })
    }

    /// WR10 (2.54 mm x 1.27 mm) with fill thickness `d`.
    pub fn wr10(d: f64) -> Result<Self> {
        Self::new(2.54e-3, 1.27e-3, d)
    }

    /// TE10 cutoff wavenumber pi/a.
    pub fn k_cutoff(&self) -> f64 {
        PI / self.a_wg
    }

    pub fn cutoff_hz(&self) -> f64 {
        crate::constants::SPEED_OF_LIGHT / (2.0 * self.a_wg)
    }

    /// Axial wavenumber of the empty guide; domain error at or below cutoff.
    pub fn kz_empty(&self, f_hz: f64) -> Result<f64> {
        let k0 = free_space_wavenumber(f_hz);
        let kc = self.k_cutoff();
        if !(k0 > kc) {
            return Err(Error::Domain(format!(
                "{f_hz:e} Hz is below the empty-guide cutoff {:e} Hz",
                self.cutoff_hz()
            )));
        }
        Ok((k0 * k0 - kc * kc).sqrt())
    }
}

/// Two-port S-parameters at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParamRecord {
    pub f_hz: f64,
    pub s11: Complex64,
    pub s21: Complex64,
    pub s12: Option<Complex64>,
    pub s22: Option<Complex64>,
}

impl SParamRecord {
    pub fn reciprocal(f_hz: f64, s11: Complex64, s21: Complex64) -> Self {
        Self {
            f_hz,
            s11,
            s21,
            s12: Some(s21),
            s22: Some(s11),
        }
    }

    /// Reflection used for extraction: S11, or the mean of S11 and S22 when
    /// both are present.
    fn reflection(&self) -> Complex64 {
        match self.s22 {
            Some(s22) => {
                let scale = self.s11.norm().max(s22.norm());
                if scale > 0.0 && (self.s11 - s22).norm() / scale > ASYMMETRY_WARN {
                    log::warn!(
                        "S11/S22 asymmetry {:.3} at {:e} Hz",
                        (self.s11 - s22).norm() / scale,
                        self.f_hz
                    );
                }
                0.5 * (self.s11 + s22)
            }
            None => self.s11,
        }
    }
}

/// One-frequency extraction on one phase branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NrwSolution {
    pub f_hz: f64,
    pub branch: u32,
    pub gamma: Complex64,
    pub p: Complex64,
    pub k_z: Complex64,
    pub eps_r: Complex64,
    pub mu_r: Complex64,
}

impl NrwSolution {
    pub fn tan_delta(&self) -> f64 {
        -self.eps_r.im / self.eps_r.re
    }

    pub fn tan_delta_m(&self) -> f64 {
        -self.mu_r.im / self.mu_r.re
    }
}

/// Slab of `eps_r`, `mu_r` filling the section between empty guides.
pub fn forward_slab(
    eps_r: Complex64,
    mu_r: Complex64,
    section: &WaveguideSection,
    f_hz: f64,
) -> Result<SParamRecord> {
    let kz0 = section.kz_empty(f_hz)?;
    let k0 = free_space_wavenumber(f_hz);
    let kc = section.k_cutoff();
    let kz = (k0 * k0 * eps_r * mu_r - kc * kc).sqrt();
    // Z / Z0 = mu_r kz0 / kz for TE10 wave impedances omega mu0 mu_r / kz.
    let zr = mu_r * kz0;
    let gamma = (zr - kz) / (zr + kz);
    let p = (-J * kz * section.d).exp();
    let den = 1.0 - gamma * gamma * p * p;
    let s11 = gamma * (1.0 - p * p) / den;
    let s21 = p * (1.0 - gamma * gamma) / den;
    Ok(SParamRecord::reciprocal(f_hz, s11, s21))
}

/// Interfacial reflection and propagation factor from one record.
fn gamma_and_p(rec: &SParamRecord) -> Result<(Complex64, Complex64)> {
    let s11 = rec.reflection();
    let s21 = rec.s21;
    let gamma = if s11.norm() < S11_FLOOR {
        // Either a matched fill (Gamma = 0, P = S21) or a lossless
        // half-wave slab (P^2 = 1, Gamma undetermined).
        if (s21 * s21 - 1.0).norm() < 1e-9 {
            return Err(Error::DegenerateReflection {
                f_hz: rec.f_hz,
                s11_abs: s11.norm(),
            });
        }
        Complex64::new(0.0, 0.0)
    } else {
        let x = (1.0 - s21 * s21 + s11 * s11) / (2.0 * s11);
        let root = (x * x - 1.0).sqrt();
        // The two roots multiply to one; invert the larger for accuracy.
        let (r1, r2) = (x + root, x - root);
        let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
        1.0 / big
    };
    let v1 = s11 + s21;
    let p = (v1 - gamma) / (1.0 - v1 * gamma);
    Ok((gamma, p))
}

/// Continuous phase of a sequence: principal value at the first element,
/// then the nearest 2 pi shift to the previous one.
pub fn unwrap_phase(values: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev: Option<f64> = None;
    for v in values {
        let raw = v.arg();
        let phi = match prev {
            None => raw,
            Some(p) => raw + 2.0 * PI * ((p - raw) / (2.0 * PI)).round(),
        };
        out.push(phi);
        prev = Some(phi);
    }
    out
}

/// Extracts `eps_r`, `mu_r` at every record on phase branch `branch`.
pub fn nrw_invert(
    records: &[SParamRecord],
    section: &WaveguideSection,
    branch: u32,
) -> Result<Vec<NrwSolution>> {
    if records.is_empty() {
        return Err(Error::Input("no S-parameter records".into()));
    }
    if records.windows(2).any(|w| !(w[1].f_hz > w[0].f_hz)) {
        return Err(Error::Input("records must be sorted by strictly increasing frequency".into()));
    }
    for r in records {
        if r.s11.norm() > 1.0 + 1e-3 || r.s21.norm() > 1.0 + 1e-3 {
            log::warn!("non-passive S-parameters at {:e} Hz", r.f_hz);
        }
    }
    let parts: Vec<(Complex64, Complex64, f64)> = records
        .par_iter()
        .map(|r| {
            let kz0 = section.kz_empty(r.f_hz)?;
            let (g, p) = gamma_and_p(r)?;
            Ok((g, p, kz0))
        })
        .collect::<Result<Vec<_>>>()?;
    let p_values: Vec<Complex64> = parts.iter().map(|x| x.1).collect();
    let phase = unwrap_phase(&p_values);
    let kc = section.k_cutoff();
    let d = section.d;
    Ok(records
        .par_iter()
        .zip(parts.par_iter().zip(phase.par_iter()))
        .map(|(r, (&(gamma, p, kz0), &phi))| {
            let k_z = Complex64::new((2.0 * PI * branch as f64 - phi) / d, p.norm().ln() / d);
            let f_ratio = (1.0 - gamma) / (1.0 + gamma);
            let mu_r = k_z / (kz0 * f_ratio);
            let k0 = free_space_wavenumber(r.f_hz);
            let eps_r = (k_z * k_z + kc * kc) / (k0 * k0 * mu_r);
            NrwSolution {
                f_hz: r.f_hz,
                branch,
                gamma,
                p,
                k_z,
                eps_r,
                mu_r,
            }
        })
        .collect())
}

/// Per-frequency material estimate after branch selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialEstimate {
    pub f_hz: f64,
    pub eps_r: Complex64,
    pub mu_r: Complex64,
}

impl MaterialEstimate {
    pub fn tan_delta(&self) -> f64 {
        -self.eps_r.im / self.eps_r.re
    }

    pub fn tan_delta_m(&self) -> f64 {
        -self.mu_r.im / self.mu_r.re
    }

    pub fn row(&self) -> MaterialRow {
        MaterialRow {
            f_hz: self.f_hz,
            eps_p: self.eps_r.re,
            eps_pp: -self.eps_r.im,
            mu_p: self.mu_r.re,
            mu_pp: -self.mu_r.im,
        }
    }
}

/// Branch solutions of one section thickness: `by_branch[n]` is branch `n`.
#[derive(Debug, Clone)]
pub struct ThicknessSolutions {
    pub thickness: f64,
    pub by_branch: Vec<Vec<NrwSolution>>,
}

impl ThicknessSolutions {
    /// Inverts `records` on every branch `0..=n_max`.
    pub fn compute(records: &[SParamRecord], section: &WaveguideSection, n_max: u32) -> Result<Self> {
        let by_branch = (0..=n_max)
            .map(|n| nrw_invert(records, section, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            thickness: section.d,
            by_branch,
        })
    }
}

#[derive(Debug, Clone)]
pub struct BranchSelection {
    /// `(thickness, branch)` chosen for each input thickness.
    pub branches: Vec<(f64, u32)>,
    /// Band-averaged relative discrepancy of the chosen combination.
    pub discrepancy: f64,
    pub merged: Vec<MaterialEstimate>,
}

impl BranchSelection {
    pub fn branch_label(&self) -> String {
        self.branches
            .iter()
            .map(|(_, n)| n.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn to_material(&self, name: &str) -> Result<MaterialSpectrum> {
        MaterialSpectrum::tabulated(
            name,
            MaterialKind::Absorber,
            self.merged.iter().map(MaterialEstimate::row).collect(),
        )
    }
}

/// Band-averaged `|d eps'| / eps' + |d mu'| / mu'` between two solution sets.
pub fn branch_discrepancy(a: &[NrwSolution], b: &[NrwSolution]) -> f64 {
    let n = a.len().min(b.len());
    if n == 0 {
        return f64::INFINITY;
    }
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let de = (x.eps_r.re - y.eps_r.re).abs() / (0.5 * (x.eps_r.re + y.eps_r.re)).abs();
            let dm = (x.mu_r.re - y.mu_r.re).abs() / (0.5 * (x.mu_r.re + y.mu_r.re)).abs();
            de + dm
        })
        .sum();
    let v = sum / n as f64;
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Picks the branch per thickness whose real parts agree best across
/// thicknesses, and averages the selected solutions frequency by frequency.
pub fn disambiguate_branches(sets: &[ThicknessSolutions], threshold: f64) -> Result<BranchSelection> {
    let mut thick: Vec<f64> = sets.iter().map(|s| s.thickness).collect();
    thick.sort_by(f64::total_cmp);
    thick.dedup();
    if sets.len() < 2 || thick.len() < sets.len() {
        return Err(Error::Ambiguity(format!(
            "need at least two distinct thicknesses, got {}",
            thick.len()
        )));
    }
    let freqs: Vec<f64> = sets[0].by_branch[0].iter().map(|s| s.f_hz).collect();
    for s in sets {
        if s.by_branch.is_empty() || s.by_branch.iter().any(|b| b.len() != freqs.len()) {
            return Err(Error::Input("branch solution sets have mismatched lengths".into()));
        }
        if s.by_branch[0].iter().zip(&freqs).any(|(x, f)| x.f_hz != *f) {
            return Err(Error::Input("thicknesses were measured on different frequency grids".into()));
        }
    }
    // Exhaustive search over branch combinations.
    let mut candidates: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut idx = vec![0usize; sets.len()];
    loop {
        let mut total = 0.0;
        let mut pairs = 0usize;
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                total += branch_discrepancy(&sets[i].by_branch[idx[i]], &sets[j].by_branch[idx[j]]);
                pairs += 1;
            }
        }
        candidates.push((total / pairs as f64, idx.clone()));
        let mut k = 0;
        loop {
            if k == sets.len() {
                break;
            }
            idx[k] += 1;
            if idx[k] < sets[k].by_branch.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == sets.len() {
            break;
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (best, choice) = candidates[0].clone();
    if !(best <= threshold) {
        let listing = candidates
            .iter()
            .take(3)
            .map(|(v, c)| format!("{c:?}: {v:.3e}"))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::Ambiguity(format!(
            "no branch combination agrees within {threshold}; best {listing}"
        )));
    }
    let k = sets.len() as f64;
    let merged = (0..freqs.len())
        .map(|i| {
            let (mut e, mut m) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for (s, &c) in sets.iter().zip(&choice) {
                e += s.by_branch[c][i].eps_r;
                m += s.by_branch[c][i].mu_r;
            }
            MaterialEstimate {
                f_hz: freqs[i],
                eps_r: e / k,
                mu_r: m / k,
            }
        })
        .collect();
    Ok(BranchSelection {
        branches: sets
            .iter()
            .zip(&choice)
            .map(|(s, &c)| (s.thickness, c as u32))
            .collect(),
        discrepancy: best,
        merged,
    })
}
