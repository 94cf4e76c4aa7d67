//! Fixtures shared by the benchmarks.

use cryowire_core::nrw::forward_slab;
use cryowire_core::presets::synthetic_absorber;
use cryowire_core::{SParamRecord, WaveguideSection};

/// Noise-free WR10 slab records of the synthetic absorber, 75–110 GHz.
pub fn synthetic_records(d: f64) -> (WaveguideSection, Vec<SParamRecord>) {
    let section = WaveguideSection::wr10(d).expect("valid section");
    let mat = synthetic_absorber();
    let records = (0..71)
        .map(|i| {
            let f = 75e9 + 0.5e9 * i as f64;
            let m = mat.interpolate(f).expect("inside table");
            forward_slab(m.eps_r, m.mu_r, &section, f).expect("above cutoff")
        })
        .collect();
    (section, records)
}
