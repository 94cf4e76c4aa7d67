use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use cryowire_bench::synthetic_records;
use cryowire_core::coax::{find_all_cutoffs, ModeProfile};
use cryowire_core::flux::{chain_flux, transport_modes, FluxOptions};
use cryowire_core::nrw::{disambiguate_branches, ThicknessSolutions, DEFAULT_AGREEMENT_THRESHOLD};
use cryowire_core::{Cable, CryostatChain, ModeFamily, Scenario};

fn cutoffs(c: &mut Criterion) {
    let geom = Cable::Ut086.geometry();
    c.bench_function("cutoffs_ut086_te_tm_600ghz", |b| {
        b.iter(|| {
            let te = find_all_cutoffs(&geom, ModeFamily::Te, 600e9).unwrap();
            let tm = find_all_cutoffs(&geom, ModeFamily::Tm, 600e9).unwrap();
            black_box((te.len(), tm.len()))
        })
    });
}

fn attenuation_sweep(c: &mut Criterion) {
    let geom = Cable::Ut086.geometry();
    let modes = transport_modes(&geom, 600e9, true).unwrap();
    c.bench_function("mode_profiles_ut086_600ghz", |b| {
        b.iter(|| {
            modes
                .iter()
                .map(|m| ModeProfile::new(&geom, m).unwrap())
                .collect::<Vec<_>>()
        })
    });
    let profiles: Vec<_> = modes.iter().map(|m| ModeProfile::new(&geom, m).unwrap()).collect();
    c.bench_function("attenuation_sweep_0p5ghz", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for k in 0..1037 {
                let f = 82e9 + 0.5e9 * k as f64;
                for p in profiles.iter().filter(|p| p.mode.propagates(f)) {
                    acc += p.attenuation(f).unwrap().alpha_total;
                }
            }
            black_box(acc)
        })
    });
}

fn flux(c: &mut Criterion) {
    let chain = CryostatChain::default_for(Cable::Ut086);
    let modes = transport_modes(&chain.cable, 110e9, false).unwrap();
    let mut g = c.benchmark_group("flux");
    g.sample_size(10);
    g.bench_function("default_chain_82_110ghz", |b| {
        b.iter(|| {
            chain_flux(&chain, &modes, (82e9, 110e9), Scenario::AttenuatorsActive, FluxOptions::default())
                .unwrap()
                .band_flux
        })
    });
    g.finish();
}

fn nrw(c: &mut Criterion) {
    let (s1, r1) = synthetic_records(2.0e-3);
    let (s2, r2) = synthetic_records(2.7e-3);
    c.bench_function("nrw_two_thickness_branch_search", |b| {
        b.iter(|| {
            let sets = [
                ThicknessSolutions::compute(&r1, &s1, 8).unwrap(),
                ThicknessSolutions::compute(&r2, &s2, 8).unwrap(),
            ];
            disambiguate_branches(&sets, DEFAULT_AGREEMENT_THRESHOLD).unwrap().discrepancy
        })
    });
}

criterion_group!(benches, cutoffs, attenuation_sweep, flux, nrw);
criterion_main!(benches);
