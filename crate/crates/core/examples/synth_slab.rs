//! Writes the synthetic absorber table and forward-modelled WR10 slab
//! S-parameters used by the sample configs.
//!
//! cargo run -p cryowire-core --example synth_slab -- data

use std::fs;
use std::path::PathBuf;

use cryowire_core::nrw::{forward_slab, WaveguideSection};
use cryowire_core::numeric::grid_with_step;
use cryowire_core::presets::synthetic_absorber;
use cryowire_core::touchstone::{write_touchstone, DataFormat, FreqUnit, TouchstoneOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    fs::create_dir_all(&dir)?;
    let absorber = synthetic_absorber();

    let mut csv = String::from("# synthetic carbonyl-iron epoxy stand-in\nf_hz,eps_p,eps_pp,mu_p,mu_pp\n");
    for r in absorber.rows() {
        csv.push_str(&format!("{:e},{:e},{:e},{:e},{:e}\n", r.f_hz, r.eps_p, r.eps_pp, r.mu_p, r.mu_pp));
    }
    fs::write(dir.join("absorber_synthetic.csv"), csv)?;

    let opts = TouchstoneOptions {
        unit: FreqUnit::GHz,
        format: DataFormat::Ri,
        z0: 50.0,
    };
    for d_mm in [2.0, 2.7] {
        let section = WaveguideSection::wr10(d_mm * 1e-3)?;
        let records = grid_with_step(75e9, 110e9, 0.5e9)
            .into_iter()
            .map(|f| {
                let m = absorber.interpolate(f)?;
                forward_slab(m.eps_r, m.mu_r, &section, f)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut text = format!("! WR10 slab, d = {d_mm} mm, synthetic absorber\n");
        text.push_str(&write_touchstone(&records, opts));
        fs::write(dir.join(format!("slab_{d_mm:.1}mm.s2p")), text)?;
    }
    println!("wrote {}", dir.display());
    Ok(())
}
