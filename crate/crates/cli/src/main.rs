use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cryowire_cli::config::{FamilySelect, SectionConfig};
use cryowire_cli::{run_pipeline, CliError, Pipeline, RunConfig};
use cryowire_core::Scenario;

#[derive(Parser, Debug)]
#[command(name = "cryowire", version, about = "Thermal photon flux, coax modes and absorptive filters for cryogenic wiring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// TOML run configuration; relative paths inside it are resolved against its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cable preset: ut086, ut047 or ut034.
    #[arg(long, global = true)]
    cable: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cutoff tables and per-mode attenuation of a cable.
    Modes {
        #[command(flatten)]
        common: Common,
        /// tem, te, tm or all.
        #[arg(long)]
        family: Option<FamilySelect>,
        #[arg(long)]
        max_f_ghz: Option<f64>,
    },
    /// Thermal photon flux at the cold end of a wiring chain.
    Flux {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 2, value_names = ["F1", "F2"])]
        band_ghz: Option<Vec<f64>>,
        /// Restrict to one scenario: attenuators_active or attenuators_bypassed.
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        length_scale: Option<f64>,
        #[arg(long)]
        include_tm: bool,
    },
    /// Permittivity and permeability from slab S-parameters of two or more thicknesses.
    Nrw {
        #[command(flatten)]
        common: Common,
        /// Touchstone file and slab thickness, as PATH=MM; repeat per thickness.
        #[arg(long = "section", value_name = "PATH=MM")]
        sections: Vec<String>,
    },
    /// Filter impedance, attenuation and the residual flux behind it.
    Filter {
        #[command(flatten)]
        common: Common,
        /// `synthetic` or a material CSV.
        #[arg(long)]
        fill: Option<String>,
        #[arg(long)]
        d_pin_mm: Option<f64>,
        #[arg(long, conflicts_with = "optimize")]
        bore_mm: Option<f64>,
        /// Choose the bore that minimises the band-averaged reflection.
        #[arg(long)]
        optimize: bool,
        #[arg(long)]
        length_mm: Option<f64>,
        #[arg(long, num_args = 2, value_names = ["F1", "F2"])]
        band_ghz: Option<Vec<f64>>,
        /// Measured transmission table for the low-frequency path.
        #[arg(long)]
        measured_s21: Option<PathBuf>,
        /// Skip the residual-flux calculation.
        #[arg(long)]
        no_residual: bool,
    },
}

fn cwd_path(p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        std::env::current_dir().map(|d| d.join(p)).unwrap_or_else(|_| p.to_path_buf())
    }
}

fn band(v: Vec<f64>) -> [f64; 2] {
    [v[0], v[1]]
}

fn load(common: &Common, pipeline: Pipeline) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::from_path(p)?,
        None => {
            RunConfig {
                base_dir: std::env::current_dir().unwrap_or_default(),
                ..Default::default()
            }
        }
    };
    if let Some(p) = cfg.pipeline {
        if p != pipeline {
            return Err(CliError::Config(format!("config is for the {p} pipeline, not {pipeline}")));
        }
    }
    cfg.pipeline = Some(pipeline);
    if let Some(out) = &common.out {
        cfg.out_dir = Some(cwd_path(out));
    }
    if let Some(c) = &common.cable {
        cfg.cable = cryowire_cli::config::CableConfig {
            preset: Some(c.clone()),
            ..Default::default()
        };
    }
    Ok(cfg)
}

fn build(cli: Cli) -> Result<RunConfig, CliError> {
    match cli.command {
        Command::Modes { common, family, max_f_ghz } => {
            let mut cfg = load(&common, Pipeline::Modes)?;
            if let Some(f) = family {
                cfg.modes.family = f;
            }
            if let Some(f) = max_f_ghz {
                cfg.modes.max_f_ghz = f;
            }
            Ok(cfg)
        }
        Command::Flux { common, band_ghz, scenario, length_scale, include_tm } => {
            let mut cfg = load(&common, Pipeline::Flux)?;
            if let Some(b) = band_ghz {
                cfg.flux.band_ghz = band(b);
            }
            if let Some(s) = scenario {
                let s: Scenario = serde_json::from_value(serde_json::Value::String(s.clone()))
                    .map_err(|_| CliError::Config(format!("unknown scenario '{s}'")))?;
                cfg.flux.scenarios = vec![s];
            }
            if let Some(l) = length_scale {
                cfg.flux.length_scale = l;
            }
            cfg.flux.include_tm |= include_tm;
            Ok(cfg)
        }
        Command::Nrw { common, sections } => {
            let mut cfg = load(&common, Pipeline::Nrw)?;
            if !sections.is_empty() {
                cfg.nrw.sections = sections
                    .iter()
                    .map(|s| {
                        let (p, d) = s
                            .rsplit_once('=')
                            .ok_or_else(|| CliError::Config(format!("--section expects PATH=MM, got '{s}'")))?;
                        let thickness_mm = d
                            .parse()
                            .map_err(|_| CliError::Config(format!("bad thickness in '{s}'")))?;
                        Ok(SectionConfig { path: cwd_path(Path::new(p)), thickness_mm })
                    })
                    .collect::<Result<_, CliError>>()?;
            }
            Ok(cfg)
        }
        Command::Filter {
            common,
            fill,
            d_pin_mm,
            bore_mm,
            optimize,
            length_mm,
            band_ghz,
            measured_s21,
            no_residual,
        } => {
            let mut cfg = load(&common, Pipeline::Filter)?;
            let f = &mut cfg.filter;
            if let Some(fill) = fill {
                f.fill = if fill.eq_ignore_ascii_case("synthetic") {
                    fill
                } else {
                    cwd_path(Path::new(&fill)).display().to_string()
                };
            }
            if let Some(v) = d_pin_mm {
                f.d_pin_mm = v;
            }
            if let Some(v) = bore_mm {
                f.bore_mm = v;
                f.optimize = false;
            }
            f.optimize |= optimize;
            if let Some(v) = length_mm {
                f.length_mm = v;
            }
            if let Some(b) = band_ghz {
                f.band_ghz = band(b);
            }
            if let Some(p) = measured_s21 {
                f.measured_s21 = Some(cwd_path(&p));
            }
            if no_residual {
                f.residual = false;
            }
            Ok(cfg)
        }
    }
}

fn fail(category: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": category, "message": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return fail("usage", e.to_string().trim(), 2),
    };
    let result = build(cli).and_then(|cfg| run_pipeline(&cfg).map(|m| (cfg, m)));
    match result {
        Ok((cfg, manifest)) => {
            let dir = cfg.output_dir().map(|d| d.display().to_string()).unwrap_or_default();
            println!("{}: {} files in {dir}", manifest.pipeline, manifest.outputs.len() + 1);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.category(), &e.to_string(), e.exit_code() as u8),
    }
}
