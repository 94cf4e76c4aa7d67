//! The four pipelines. Each writes its CSV tables plus `manifest.json`.

use std::path::Path;

use cryowire_core::coax::{find_all_cutoffs, ModeProfile};
use cryowire_core::filter::{
    filter_impedance, optimize_bore_with, reflection_db, residual_flux, FilterMode, ResidualOptions,
    BORE_GRID_STEP_HZ, MEASURED_PATH_MAX_HZ, Z_REF,
};
use cryowire_core::flux::{chain_flux, transport_modes, FluxOptions};
use cryowire_core::nrw::{disambiguate_branches, ThicknessSolutions};
use cryowire_core::numeric::grid_with_step;
use cryowire_core::touchstone::parse_touchstone;
use cryowire_core::{
    CryostatChain, FilterGeometry, FluxSpectrum, MaterialSpectrum, MeasuredS21, ModeDispersion,
    ModeFamily, Scenario, WaveguideSection,
};
use serde_json::json;

use crate::config::{FluxRun, Pipeline, RunConfig};
use crate::error::{CliError, Context};
use crate::manifest::{digest_file, sha256_hex, FileDigest, ResultManifest, MANIFEST_FILE};
use crate::output::{num, Outputs, Table};

/// Runs the pipeline named in `cfg.pipeline` into `cfg.out_dir`.
pub fn run_pipeline(cfg: &RunConfig) -> Result<ResultManifest, CliError> {
    let pipeline = cfg
        .pipeline
        .ok_or_else(|| CliError::Config("no pipeline selected".into()))?;
    let mut out = Outputs::new(&cfg.output_dir()?)?;
    let mut inputs = Vec::new();
    let parameters = match pipeline {
        Pipeline::Modes => modes(cfg, &mut out)?,
        Pipeline::Flux => flux(cfg, &mut out)?,
        Pipeline::Nrw => nrw(cfg, &mut out, &mut inputs)?,
        Pipeline::Filter => filter(cfg, &mut out, &mut inputs)?,
    };
    let manifest = ResultManifest {
        pipeline,
        tool: env!("CARGO_PKG_NAME").to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        inputs,
        parameters,
        outputs: out
            .files
            .iter()
            .map(|(name, bytes)| FileDigest {
                path: name.clone(),
                sha256: sha256_hex(bytes),
            })
            .collect(),
    };
    out.write(MANIFEST_FILE, manifest.to_json().as_bytes())?;
    Ok(manifest)
}

fn modes(cfg: &RunConfig, out: &mut Outputs) -> Result<serde_json::Value, CliError> {
    let run = cfg.modes_run()?;
    let mut all: Vec<ModeDispersion> = Vec::new();
    for fam in &run.families {
        all.extend(find_all_cutoffs(&run.geometry, *fam, run.max_f_hz).context(format!("{fam} cutoffs"))?);
    }

    let mut t = Table::new("cutoffs.csv", &["cable", "mode", "family", "n", "m", "k_c_per_m", "f_c_hz"])?;
    for md in &all {
        t.row([
            run.cable_label.clone(),
            md.mode.to_string(),
            md.mode.family.to_string(),
            md.mode.n.to_string(),
            md.mode.m.to_string(),
            num(md.k_c),
            num(md.f_c),
        ])?;
    }
    t.finish(out)?;

    let profiles = all
        .iter()
        .map(|m| ModeProfile::new(&run.geometry, m).context(format!("{} profile", m.mode)))
        .collect::<Result<Vec<_>, _>>()?;
    let grid = grid_with_step(run.min_f_hz, run.max_f_hz, run.grid_step_hz);
    let mut t = Table::new(
        "attenuation.csv",
        &["f_hz", "mode", "alpha_c_db_per_m", "alpha_d_db_per_m", "alpha_db_per_m"],
    )?;
    let mut tmin = Table::new("attenuation_min.csv", &["f_hz", "family", "mode", "alpha_db_per_m"])?;
    for &f in &grid {
        let mut best: Vec<(ModeFamily, String, f64)> = Vec::new();
        for p in &profiles {
            if !p.mode.propagates(f) {
                continue;
            }
            let a = p.attenuation(f).context(format!("{} attenuation", p.mode.mode))?;
            t.row([num(f), p.mode.mode.to_string(), num(a.alpha_c), num(a.alpha_d), num(a.alpha_total)])?;
            let fam = p.mode.mode.family;
            match best.iter_mut().find(|b| b.0 == fam) {
                Some(b) if a.alpha_total < b.2 => *b = (fam, p.mode.mode.to_string(), a.alpha_total),
                Some(_) => {}
                None => best.push((fam, p.mode.mode.to_string(), a.alpha_total)),
            }
        }
        best.sort_by_key(|b| b.0);
        for (fam, mode, a) in best {
            tmin.row([num(f), fam.to_string(), mode, num(a)])?;
        }
    }
    t.finish(out)?;
    tmin.finish(out)?;

    Ok(json!({
        "cable": run.cable_label,
        "inner_radius_m": run.geometry.a,
        "outer_radius_m": run.geometry.b,
        "families": run.families.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "max_f_hz": run.max_f_hz,
        "min_f_hz": run.min_f_hz,
        "grid_step_hz": run.grid_step_hz,
        "mode_count": all.len(),
    }))
}

fn scenario_name(s: Scenario) -> &'static str {
    match s {
        Scenario::AttenuatorsActive => "attenuators_active",
        Scenario::AttenuatorsBypassed => "attenuators_bypassed",
    }
}

fn chain_json(run: &FluxRun) -> serde_json::Value {
    json!({
        "cable": run.cable_label,
        "inner_radius_m": run.geometry.a,
        "outer_radius_m": run.geometry.b,
        "stage_temperatures_k": run.temps_k,
        "lengths_m": run.lengths_m,
        "attenuators_db": run.attenuators_db,
        "band_hz": [run.band_hz.0, run.band_hz.1],
        "scenarios": run.scenarios.iter().map(|s| scenario_name(*s)).collect::<Vec<_>>(),
        "include_tm": run.include_tm,
        "grid_step_hz": run.grid_step_hz,
    })
}

/// Chain output for every configured scenario.
fn chain_spectra(run: &FluxRun) -> Result<Vec<(Scenario, FluxSpectrum)>, CliError> {
    let chain = CryostatChain::from_stages(&run.temps_k, &run.lengths_m, &run.attenuators_db, run.geometry.clone())
        .context("chain")?;
    let modes = transport_modes(&run.geometry, run.band_hz.1, run.include_tm).context("transport modes")?;
    let opts = FluxOptions {
        grid_step_hz: run.grid_step_hz,
    };
    run.scenarios
        .iter()
        .map(|&s| {
            chain_flux(&chain, &modes, run.band_hz, s, opts)
                .context(format!("flux ({})", scenario_name(s)))
                .map(|spec| (s, spec))
        })
        .collect()
}

fn spectrum_rows(t: &mut Table, spec: &FluxSpectrum, prefix: &[String]) -> Result<(), CliError> {
    for (k, &f) in spec.freqs_hz.iter().enumerate() {
        for (id, row) in spec.modes.iter().zip(&spec.per_mode) {
            t.row(prefix.iter().cloned().chain([num(f), id.to_string(), num(row[k])]))?;
        }
        t.row(prefix.iter().cloned().chain([num(f), "total".to_string(), num(spec.total[k])]))?;
    }
    Ok(())
}

fn band_of_mode(spec: &FluxSpectrum, i: usize) -> f64 {
    cryowire_core::numeric::trapezoid(&spec.freqs_hz, &spec.per_mode[i])
}

fn flux(cfg: &RunConfig, out: &mut Outputs) -> Result<serde_json::Value, CliError> {
    let run = cfg.flux_run()?;
    let spectra = chain_spectra(&run)?;
    let mut summary = Table::new(
        "summary.csv",
        &["scenario", "mode", "band_lo_hz", "band_hi_hz", "band_flux_per_s"],
    )?;
    for (s, spec) in &spectra {
        let name = format!("flux_{}.csv", scenario_name(*s));
        let mut t = Table::new(&name, &["f_hz", "mode", "N_per_hz_per_s"])?;
        spectrum_rows(&mut t, spec, &[])?;
        t.finish(out)?;
        let (lo, hi) = spec.band_hz;
        for (i, id) in spec.modes.iter().enumerate() {
            summary.row([scenario_name(*s).to_string(), id.to_string(), num(lo), num(hi), num(band_of_mode(spec, i))])?;
        }
        summary.row([scenario_name(*s).to_string(), "total".into(), num(lo), num(hi), num(spec.band_flux)])?;
    }
    summary.finish(out)?;
    Ok(chain_json(&run))
}

fn nrw(cfg: &RunConfig, out: &mut Outputs, inputs: &mut Vec<FileDigest>) -> Result<serde_json::Value, CliError> {
    let run = cfg.nrw_run()?;
    let mut sets = Vec::new();
    for (path, d) in &run.sections {
        let label = cfg.input_label(path);
        inputs.push(digest_file(&label, path)?);
        let records = parse_touchstone(path).context(label.clone())?;
        let section = WaveguideSection::new(run.a_wg, run.b_wg, *d).context(label.clone())?;
        sets.push(ThicknessSolutions::compute(&records, &section, run.max_branch).context(label)?);
    }
    let sel = disambiguate_branches(&sets, run.threshold).context("branch selection")?;
    let label = sel.branch_label();

    let mut t = Table::new(
        "material.csv",
        &["f_hz", "eps_p", "eps_pp", "mu_p", "mu_pp", "tan_d", "tan_dm", "branch"],
    )?;
    for m in &sel.merged {
        let r = m.row();
        t.row([
            num(r.f_hz),
            num(r.eps_p),
            num(r.eps_pp),
            num(r.mu_p),
            num(r.mu_pp),
            num(m.tan_delta()),
            num(m.tan_delta_m()),
            label.clone(),
        ])?;
    }
    t.finish(out)?;

    let mut t = Table::new(
        "nrw_branches.csv",
        &["thickness_m", "branch", "selected", "f_hz", "eps_p", "eps_pp", "mu_p", "mu_pp"],
    )?;
    for (set, (_, chosen)) in sets.iter().zip(&sel.branches) {
        for (n, sols) in set.by_branch.iter().enumerate() {
            let selected = if n as u32 == *chosen { "1" } else { "0" };
            for s in sols {
                t.row([
                    num(set.thickness),
                    n.to_string(),
                    selected.to_string(),
                    num(s.f_hz),
                    num(s.eps_r.re),
                    num(-s.eps_r.im),
                    num(s.mu_r.re),
                    num(-s.mu_r.im),
                ])?;
            }
        }
    }
    t.finish(out)?;

    Ok(json!({
        "waveguide_a_m": run.a_wg,
        "waveguide_b_m": run.b_wg,
        "max_branch": run.max_branch,
        "threshold": run.threshold,
        "material_name": run.material_name,
        "thicknesses_m": run.sections.iter().map(|s| s.1).collect::<Vec<_>>(),
        "selected_branches": label,
        "discrepancy": sel.discrepancy,
    }))
}

fn filter(cfg: &RunConfig, out: &mut Outputs, inputs: &mut Vec<FileDigest>) -> Result<serde_json::Value, CliError> {
    let run = cfg.filter_run()?;
    if let Some(p) = &run.fill_path {
        inputs.push(digest_file(&cfg.input_label(p), p)?);
    }
    let conductor = MaterialSpectrum::conductor("conductor", run.conductor_sigma).context("filter conductor")?;

    let mut bore = run.d_bore;
    let mut bore_table = Table::new("bore.csv", &["d_bore_m", "avg_reflection_db", "optimized"])?;
    if run.optimize {
        let opt = optimize_bore_with(run.d_pin, &run.fill, run.band_hz, BORE_GRID_STEP_HZ).context("bore optimization")?;
        bore = opt.d_bore;
        bore_table.row([num(opt.d_bore), num(opt.avg_reflection_db), "1".to_string()])?;
    } else {
        let avg = cryowire_core::filter::average_reflection_db(run.d_pin, bore, &run.fill, run.band_hz, BORE_GRID_STEP_HZ)
            .context("reflection")?;
        bore_table.row([num(bore), num(avg), "0".to_string()])?;
    }
    bore_table.finish(out)?;

    let geom = FilterGeometry::new(run.d_pin, bore, run.length, run.fill.clone(), conductor).context("filter geometry")?;
    let grid = grid_with_step(run.band_hz.0, run.band_hz.1, run.grid_step_hz);

    let mut t = Table::new("impedance.csv", &["f_hz", "z_re_ohm", "z_im_ohm", "reflection_db"])?;
    for &f in &grid {
        let z = filter_impedance(&geom, f).context("impedance")?;
        t.row([num(f), num(z.re), num(z.im), num(reflection_db(z))])?;
    }
    t.finish(out)?;

    let fmodes = run
        .modes
        .iter()
        .map(|id| FilterMode::new(&geom, *id, run.band_hz.1).context(format!("filter {id}")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(
        "filter_attenuation.csv",
        &[
            "f_hz",
            "mode",
            "alpha_dm_db_per_m",
            "alpha_dm_small_loss_db_per_m",
            "alpha_c_db_per_m",
            "A_db",
        ],
    )?;
    for &f in &grid {
        for fm in &fmodes {
            if !fm.mode().propagates(f) {
                continue;
            }
            let l = fm.attenuation(f).context(format!("filter {}", fm.mode().mode))?;
            t.row([
                num(f),
                fm.mode().mode.to_string(),
                num(l.alpha_dm),
                num(l.alpha_dm_small_loss),
                num(l.alpha_c),
                num(l.a_db),
            ])?;
        }
    }
    t.finish(out)?;

    let measured = match &run.measured_s21 {
        Some(p) => {
            inputs.push(digest_file(&cfg.input_label(p), p)?);
            Some(MeasuredS21::from_csv_path(p).context(cfg.input_label(p))?)
        }
        None => None,
    };
    let mut residual_json = serde_json::Value::Null;
    if let Some((chain, t_filter)) = &run.residual {
        let spectra = chain_spectra(chain)?;
        let mut t = Table::new("residual_flux.csv", &["scenario", "f_hz", "mode", "N_per_hz_per_s"])?;
        let mut s = Table::new(
            "residual_summary.csv",
            &["scenario", "band_lo_hz", "band_hi_hz", "unfiltered_per_s", "filtered_per_s"],
        )?;
        let opts = ResidualOptions {
            measured: measured.as_ref(),
            measured_max_hz: MEASURED_PATH_MAX_HZ,
            t_filter_k: *t_filter,
        };
        for (sc, spec) in &spectra {
            let res = residual_flux(spec, &chain.geometry, &geom, opts).context("residual flux")?;
            spectrum_rows(&mut t, &res, &[scenario_name(*sc).to_string()])?;
            s.row([
                scenario_name(*sc).to_string(),
                num(spec.band_hz.0),
                num(spec.band_hz.1),
                num(spec.band_flux),
                num(res.band_flux),
            ])?;
        }
        t.finish(out)?;
        s.finish(out)?;
        let mut j = chain_json(chain);
        j["t_filter_k"] = json!(t_filter);
        residual_json = j;
    }

    Ok(json!({
        "fill": run.fill.name,
        "conductor_sigma_s_per_m": run.conductor_sigma,
        "d_pin_m": run.d_pin,
        "d_bore_m": bore,
        "optimize": run.optimize,
        "length_m": run.length,
        "band_hz": [run.band_hz.0, run.band_hz.1],
        "grid_step_hz": run.grid_step_hz,
        "reference_impedance_ohm": Z_REF,
        "modes": run.modes.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "residual": residual_json,
    }))
}

/// Convenience for callers that only have a config path.
pub fn run_config_file(path: &Path, pipeline: Pipeline, out_dir: &Path) -> Result<ResultManifest, CliError> {
    let mut cfg = RunConfig::from_path(path)?;
    cfg.pipeline = Some(pipeline);
    cfg.out_dir = Some(out_dir.to_path_buf());
    run_pipeline(&cfg)
}
