//! Thermal noise photons carried down a cryostat wiring chain.
//!
//! Along each cable segment the occupation relaxes toward the local
//! Bose-Einstein value, `dN/dx = kappa (n_BE(f, T(x)) - N)` with
//! `kappa = alpha[dB/m] ln(10) / 10` and `T(x)` linear between the stage
//! temperatures. Attenuators mix in their own thermal population.

use std::f64::consts::LN_10;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coax::{find_all_cutoffs, CoaxGeometry, ModeDispersion, ModeFamily, ModeId, ModeProfile};
use crate::constants::{BOLTZMANN, PLANCK};
use crate::error::{Error, Result};
use crate::numeric::{grid_with_step, trapezoid};
use crate::presets::{Cable, CHAIN_ATTENUATORS_DB, CHAIN_LENGTHS_MM, CHAIN_TEMPS_K};

/// Base RK4 resolution per segment; the convergence check runs at twice this.
pub const ODE_STEPS: usize = 1000;
/// Largest accepted `kappa h` for RK4 on the relaxation equation.
const MAX_KAPPA_STEP: f64 = 0.25;
/// Upper bound on steps for one segment before giving up.
const MAX_STEPS: usize = 4_000_000;
/// Accepted difference between the h and h/2 solutions, relative to the
/// occupation scale of the segment.
pub const ODE_CONVERGENCE_TOL: f64 = 1e-7;
/// Relative offset of the node placed just above each cutoff.
pub const CUTOFF_NODE_OFFSET: f64 = 1e-6;
pub const DEFAULT_GRID_STEP_HZ: f64 = 0.25e9;

/// Mean thermal photon number `1 / (exp(h f / k_B T) - 1)`.
pub fn bose_einstein(f_hz: f64, t_k: f64) -> f64 {
    if t_k <= 0.0 {
        return 0.0;
    }
    1.0 / (PLANCK * f_hz / (BOLTZMANN * t_k)).exp_m1()
}

/// Length of cable from a hotter to a colder stage, with an optional
/// attenuator at its cold end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageSegment {
    pub t_hot_k: f64,
    pub t_cold_k: f64,
    pub length_m: f64,
    pub attenuator_db: f64,
}

impl StageSegment {
    pub fn new(t_hot_k: f64, t_cold_k: f64, length_m: f64, attenuator_db: f64) -> Result<Self> {
        if !(t_hot_k > 0.0 && t_cold_k > 0.0 && t_hot_k.is_finite() && t_cold_k.is_finite()) {
            return Err(Error::Input(format!(
                "stage temperatures must be positive, got {t_hot_k} K and {t_cold_k} K"
            )));
        }
        if !(length_m > 0.0 && length_m.is_finite()) {
            return Err(Error::Input(format!("segment length must be positive, got {length_m} m")));
        }
        if !(attenuator_db >= 0.0) {
            return Err(Error::Input(format!(
                "attenuator must be non-negative, got {attenuator_db} dB"
            )));
        }
        Ok(Self {
            t_hot_k,
            t_cold_k,
            length_m,
            attenuator_db,
        })
    }

    pub fn temperature_at(&self, x: f64) -> f64 {
        self.t_hot_k + (self.t_cold_k - self.t_hot_k) * (x / self.length_m)
    }
}

/// Ordered segments from room temperature to the coldest stage, all of one cable.
#[derive(Debug, Clone, PartialEq)]
pub struct CryostatChain {
    pub segments: Vec<StageSegment>,
    pub cable: CoaxGeometry,
}

impl CryostatChain {
    pub fn new(segments: Vec<StageSegment>, cable: CoaxGeometry) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Input("chain has no segments".into()));
        }
        for (i, w) in segments.windows(2).enumerate() {
            if w[0].t_cold_k != w[1].t_hot_k {
                return Err(Error::Input(format!(
                    "segment {} ends at {} K but segment {} starts at {} K",
                    i,
                    w[0].t_cold_k,
                    i + 1,
                    w[1].t_hot_k
                )));
            }
        }
        Ok(Self { segments, cable })
    }

    /// Builds segments from stage temperatures (one more than segments),
    /// lengths [m] and cold-end attenuators [dB].
    pub fn from_stages(
        temps_k: &[f64],
        lengths_m: &[f64],
        attenuators_db: &[f64],
        cable: CoaxGeometry,
    ) -> Result<Self> {
        if temps_k.len() != lengths_m.len() + 1 || attenuators_db.len() != lengths_m.len() {
            return Err(Error::Input(format!(
                "need n+1 temperatures and n attenuators for n lengths, got {}, {}, {}",
                temps_k.len(),
                lengths_m.len(),
                attenuators_db.len()
            )));
        }
        let segments = lengths_m
            .iter()
            .enumerate()
            .map(|(i, &l)| StageSegment::new(temps_k[i], temps_k[i + 1], l, attenuators_db[i]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(segments, cable)
    }

    /// Typical dilution-refrigerator wiring: 300 K, 35 K, 2.85 K, still,
    /// cold plate and mixing chamber.
    pub fn default_for(cable: Cable) -> Self {
        let lengths: Vec<f64> = CHAIN_LENGTHS_MM.iter().map(|l| l * 1e-3).collect();
        Self::from_stages(&CHAIN_TEMPS_K, &lengths, &CHAIN_ATTENUATORS_DB, cable.geometry())
            .expect("default chain is valid")
    }

    pub fn with_scaled_lengths(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.segments {
            s.length_m *= factor;
        }
        out
    }

    pub fn room_temperature(&self) -> f64 {
        self.segments[0].t_hot_k
    }
}

/// How attenuators behave in the band of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Attenuators keep their nominal value at all frequencies.
    AttenuatorsActive,
    /// Attenuators are transparent; only the cable attenuates.
    AttenuatorsBypassed,
}

/// `N_in / A + (A - 1) / A * n_BE(f, T)` with `A = 10^(a/10)`.
pub fn apply_attenuator(n_in: f64, a_db: f64, t_k: f64, f_hz: f64) -> f64 {
    if a_db == 0.0 {
        return n_in;
    }
    let inv_a = 10f64.powf(-a_db / 10.0);
    n_in * inv_a + (1.0 - inv_a) * bose_einstein(f_hz, t_k)
}

/// Occupation at the cold end of `seg` for a line attenuating `alpha_db_per_m`.
///
/// Uses RK4 at `ODE_STEPS` steps (or more when `kappa L` demands it), checked
/// against a run at half the step.
pub fn propagate_segment(n_in: f64, seg: &StageSegment, alpha_db_per_m: f64, f_hz: f64) -> Result<f64> {
    let source = |x: f64| bose_einstein(f_hz, seg.temperature_at(x));
    propagate_with(n_in, seg, alpha_db_per_m, &|j, denom| {
        source(seg.length_m * j as f64 / denom as f64)
    })
}

fn steps_for(kappa: f64, length: f64) -> Result<usize> {
    let need = (kappa * length / MAX_KAPPA_STEP).ceil();
    if !(need <= MAX_STEPS as f64) {
        return Err(Error::Integration(format!(
            "kappa L = {:e} needs more than {MAX_STEPS} RK4 steps",
            kappa * length
        )));
    }
    Ok(ODE_STEPS.max(need as usize))
}

/// `source(j, denom)` returns n_BE at `x = L j / denom`.
fn propagate_with(
    n_in: f64,
    seg: &StageSegment,
    alpha_db_per_m: f64,
    source: &(dyn Fn(usize, usize) -> f64 + Sync),
) -> Result<f64> {
    if !(alpha_db_per_m >= 0.0) {
        return Err(Error::Input(format!(
            "attenuation must be non-negative, got {alpha_db_per_m} dB/m"
        )));
    }
    if alpha_db_per_m == 0.0 {
        return Ok(n_in);
    }
    let kappa = alpha_db_per_m * LN_10 / 10.0;
    let steps = steps_for(kappa, seg.length_m)?;
    let coarse = rk4(n_in, kappa, seg.length_m, steps, source);
    let fine = rk4(n_in, kappa, seg.length_m, 2 * steps, source);
    let scale = n_in.max(source(0, 1)).max(source(1, 1)).max(f64::MIN_POSITIVE);
    let diff = (fine - coarse).abs();
    if diff > ODE_CONVERGENCE_TOL * scale {
        return Err(Error::Integration(format!(
            "RK4 not converged: {steps} vs {} steps differ by {diff:e} (scale {scale:e}, kappa L = {:e})",
            2 * steps,
            kappa * seg.length_m
        )));
    }
    Ok(fine)
}

fn rk4(
    n0: f64,
    kappa: f64,
    length: f64,
    steps: usize,
    source: &(dyn Fn(usize, usize) -> f64 + Sync),
) -> f64 {
    let h = length / steps as f64;
    let denom = 2 * steps;
    let mut n = n0;
    let mut s0 = source(0, denom);
    for i in 0..steps {
        let sm = source(2 * i + 1, denom);
        let s1 = source(2 * i + 2, denom);
        let k1 = kappa * (s0 - n);
        let k2 = kappa * (sm - (n + 0.5 * h * k1));
        let k3 = kappa * (sm - (n + 0.5 * h * k2));
        let k4 = kappa * (s1 - (n + h * k3));
        n += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s0 = s1;
    }
    n
}

/// n_BE sampled along one segment at `4 ODE_STEPS` intervals, shared by
/// every mode at one frequency.
struct SourceTable {
    seg: StageSegment,
    f_hz: f64,
    values: Vec<f64>,
}

impl SourceTable {
    fn new(seg: &StageSegment, f_hz: f64) -> Self {
        let m = 4 * ODE_STEPS;
        let values = (0..=m)
            .map(|j| bose_einstein(f_hz, seg.temperature_at(seg.length_m * j as f64 / m as f64)))
            .collect();
        Self {
            seg: *seg,
            f_hz,
            values,
        }
    }

    fn at(&self, j: usize, denom: usize) -> f64 {
        let m = self.values.len() - 1;
        if m.is_multiple_of(denom) {
            self.values[j * (m / denom)]
        } else {
            let x = self.seg.length_m * j as f64 / denom as f64;
            bose_einstein(self.f_hz, self.seg.temperature_at(x))
        }
    }
}

/// Occupation spectrum at the cold end of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSpectrum {
    pub freqs_hz: Vec<f64>,
    pub modes: Vec<ModeId>,
    /// `per_mode[i][k]` is mode `i` at `freqs_hz[k]`; zero below cutoff.
    pub per_mode: Vec<Vec<f64>>,
    pub total: Vec<f64>,
    pub band_hz: (f64, f64),
    /// Trapezoid integral of `total` over the band [photons/s].
    pub band_flux: f64,
}

impl FluxSpectrum {
    pub fn from_parts(
        freqs_hz: Vec<f64>,
        modes: Vec<ModeId>,
        per_mode: Vec<Vec<f64>>,
    ) -> Self {
        let total: Vec<f64> = (0..freqs_hz.len())
            .map(|k| per_mode.iter().map(|row| row[k]).sum())
            .collect();
        let band_hz = (freqs_hz[0], *freqs_hz.last().unwrap());
        let band_flux = trapezoid(&freqs_hz, &total);
        Self {
            freqs_hz,
            modes,
            per_mode,
            total,
            band_hz,
            band_flux,
        }
    }

    /// Band integral of the summed occupation over `[f1, f2]`, restricted to
    /// grid nodes inside the interval.
    pub fn band_flux_between(&self, f1: f64, f2: f64) -> f64 {
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .freqs_hz
            .iter()
            .zip(&self.total)
            .filter(|(f, _)| **f >= f1 && **f <= f2)
            .map(|(f, n)| (*f, *n))
            .unzip();
        trapezoid(&x, &y)
    }
}

/// Frequency grid and solver settings for [`chain_flux`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxOptions {
    pub grid_step_hz: f64,
}

impl Default for FluxOptions {
    fn default() -> Self {
        Self {
            grid_step_hz: DEFAULT_GRID_STEP_HZ,
        }
    }
}

/// Modes that can carry photons below `max_f`: TEM, every TE mode and,
/// if requested, every TM mode.
pub fn transport_modes(geom: &CoaxGeometry, max_f: f64, include_tm: bool) -> Result<Vec<ModeDispersion>> {
    let mut modes = vec![ModeDispersion::tem()];
    modes.extend(find_all_cutoffs(geom, ModeFamily::Te, max_f)?);
    if include_tm {
        modes.extend(find_all_cutoffs(geom, ModeFamily::Tm, max_f)?);
    }
    Ok(modes)
}

/// Uniform grid over the band with extra nodes at each in-band cutoff and
/// just above it, so the onset of every mode is resolved.
pub fn flux_grid(band: (f64, f64), step: f64, modes: &[ModeDispersion]) -> Vec<f64> {
    let mut grid = grid_with_step(band.0, band.1, step);
    for m in modes {
        let above = m.f_c * (1.0 + CUTOFF_NODE_OFFSET);
        if m.f_c > band.0 && above < band.1 {
            grid.push(m.f_c);
            grid.push(above);
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Cold-end occupation per mode using the attenuation of each mode's profile.
pub fn chain_flux(
    chain: &CryostatChain,
    modes: &[ModeDispersion],
    band: (f64, f64),
    scenario: Scenario,
    opts: FluxOptions,
) -> Result<FluxSpectrum> {
    let profiles = modes
        .iter()
        .map(|m| ModeProfile::new(&chain.cable, m))
        .collect::<Result<Vec<_>>>()?;
    chain_flux_with(chain, modes, band, scenario, opts, |i, f| {
        Ok(profiles[i].attenuation(f)?.alpha_total)
    })
}

/// As [`chain_flux`] but with a caller-supplied attenuation
/// `alpha(mode_index, f)` in dB/m.
pub fn chain_flux_with<A>(
    chain: &CryostatChain,
    modes: &[ModeDispersion],
    band: (f64, f64),
    scenario: Scenario,
    opts: FluxOptions,
    alpha: A,
) -> Result<FluxSpectrum>
where
    A: Fn(usize, f64) -> Result<f64> + Sync,
{
    if modes.is_empty() {
        return Err(Error::Input("no modes to propagate".into()));
    }
    if !(band.0 > 0.0 && band.1 > band.0) {
        return Err(Error::Input(format!(
            "band must satisfy 0 < f1 < f2, got {:e}..{:e} Hz",
            band.0, band.1
        )));
    }
    if !(opts.grid_step_hz > 0.0) {
        return Err(Error::Input("grid step must be positive".into()));
    }
    let grid = flux_grid(band, opts.grid_step_hz, modes);
    let t_room = chain.room_temperature();
    let columns: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&f| {
            let tables: Vec<SourceTable> =
                chain.segments.iter().map(|s| SourceTable::new(s, f)).collect();
            let n_room = bose_einstein(f, t_room);
            modes
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    if !m.propagates(f) {
                        return Ok(0.0);
                    }
                    let a = alpha(i, f)?;
                    let mut n = n_room;
                    for (seg, table) in chain.segments.iter().zip(&tables) {
                        n = propagate_with(n, seg, a, &|j, d| table.at(j, d))?;
                        if scenario == Scenario::AttenuatorsActive {
                            n = apply_attenuator(n, seg.attenuator_db, seg.t_cold_k, f);
                        }
                    }
                    Ok(n)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let per_mode = (0..modes.len())
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    Ok(FluxSpectrum::from_parts(
        grid,
        modes.iter().map(|m| m.mode).collect(),
        per_mode,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;

    fn seg(t0: f64, t1: f64, l: f64) -> StageSegment {
        StageSegment::new(t0, t1, l, 0.0).unwrap()
    }

    #[test]
    fn bose_einstein_identities() {
        let t = 1.7;
        let f = BOLTZMANN * t * 2f64.ln() / (2.0 * std::f64::consts::PI * HBAR);
        assert!((bose_einstein(f, t) - 1.0).abs() < 1e-14);
        assert_eq!(bose_einstein(1e11, 0.0), 0.0);
        assert!(bose_einstein(1e11, 1e-3) < 1e-300);
        // kT/hf - 1/2 + hf/(12 kT)
        let x = PLANCK * 1e11 / (BOLTZMANN * 300.0);
        let series = 1.0 / x - 0.5 + x / 12.0 - x.powi(3) / 720.0;
        assert!((bose_einstein(1e11, 300.0) - series).abs() < 1e-9);
        assert!((bose_einstein(1e11, 300.0) - 62.01).abs() < 0.01);
    }

    #[test]
    fn zero_alpha_is_identity() {
        let s = seg(300.0, 35.0, 0.3);
        assert_eq!(propagate_segment(4.2, &s, 0.0, 1e11).unwrap(), 4.2);
    }

    #[test]
    fn constant_temperature_relaxation() {
        let s = seg(4.0, 4.0, 0.25);
        let (f, a, n0) = (9e10, 37.0, 12.0);
        let nbe = bose_einstein(f, 4.0);
        let expect = nbe + (n0 - nbe) * (-a * LN_10 * 0.25 / 10.0).exp();
        assert!((propagate_segment(n0, &s, a, f).unwrap() - expect).abs() < 1e-10);
    }

    #[test]
    fn full_thermalisation() {
        let s = seg(0.882, 0.882, 0.2);
        let f = 1e11;
        let n = propagate_segment(60.0, &s, 5000.0, f).unwrap();
        assert!((n - bose_einstein(f, 0.882)).abs() < 1e-12);
    }

    #[test]
    fn attenuator_jumps() {
        assert_eq!(apply_attenuator(3.0, 0.0, 4.0, 1e11), 3.0);
        assert!((apply_attenuator(1.0, 20.0, 1e-6, 1e11) - 0.01).abs() < 1e-15);
        let nbe = bose_einstein(1e11, 35.0);
        assert!((apply_attenuator(1e3, 400.0, 35.0, 1e11) - nbe).abs() < 1e-12);
    }

    #[test]
    fn stiff_segment_uses_more_steps() {
        assert_eq!(steps_for(1.0, 1.0).unwrap(), ODE_STEPS);
        assert!(steps_for(1e4, 0.3).unwrap() > ODE_STEPS);
        assert!(matches!(steps_for(1e12, 1.0), Err(Error::Integration(_))));
    }

    #[test]
    fn chain_validation() {
        let g = Cable::Ut086.geometry();
        assert!(CryostatChain::from_stages(&[300.0, 4.0], &[0.1, 0.2], &[0.0], g.clone()).is_err());
        let bad = vec![seg(300.0, 40.0, 0.1), seg(35.0, 4.0, 0.1)];
        assert!(CryostatChain::new(bad, g.clone()).is_err());
        assert!(StageSegment::new(300.0, 0.0, 0.1, 0.0).is_err());
        assert!(StageSegment::new(300.0, 3.0, 0.1, -1.0).is_err());
        let c = CryostatChain::default_for(Cable::Ut086);
        assert_eq!(c.segments.len(), 5);
        assert_eq!(c.segments[1].t_cold_k, 2.85);
        assert!((c.with_scaled_lengths(1.25).segments[4].length_m - 0.3825).abs() < 1e-15);
    }

    #[test]
    fn empty_modes_rejected() {
        let c = CryostatChain::default_for(Cable::Ut086);
        let r = chain_flux(&c, &[], (82e9, 110e9), Scenario::AttenuatorsActive, FluxOptions::default());
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn grid_straddles_cutoffs() {
        let g = Cable::Ut086.geometry();
        let modes = transport_modes(&g, 130e9, false).unwrap();
        let grid = flux_grid((82e9, 130e9), 0.25e9, &modes);
        let te21 = modes.iter().find(|m| m.mode == ModeId::te(2, 1)).unwrap();
        assert!(grid.contains(&te21.f_c));
        assert!(grid.iter().any(|&f| f > te21.f_c && f < te21.f_c * 1.00001));
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }
}
