//! Recomputes every frozen constant in src/calibration.rs and prints the
//! source text to paste there. Also prints sanity values for the experiment
//! presets so threshold drift is visible in one place. Run in release mode;
//! the last section walks a length-32768 grid.

use rustfft::num_complex::Complex64;

use modspace::engine::mz_extend;
use modspace::experiments::{band_limited_noise, noise_signal};
use modspace::gabor::{default_lattice, GaborSystem};
use modspace::modnorm::{mod_norm_blocks, mod_norm_gabor, mod_norm_stft, mod_norm_vector_blocks};
use modspace::partition::{partition_bumps, PartitionKind};
use modspace::probe::{
    growth_experiment, opnorm_probe, GrowthFamily, NormSpec, ProbeBudget, ProbeOp, SpecRecipe,
};
use modspace::rng::CounterRng;
use modspace::stft::Window;
use modspace::symbols::{sym_chirp, sym_indicator, sym_sgn, Interval, Symbol};
use modspace::{Exponent, Grid, MixedNormParams, NormMode, Signal};

const MARGIN: f64 = 1.3;

fn exp_src(x: f64) -> String {
    if x.is_infinite() {
        "f64::INFINITY".into()
    } else {
        format!("{x:.1}")
    }
}

fn main() -> Result<(), modspace::Error> {
    // ----- pairwise ratio brackets on the reference configuration
    let grid = Grid::new(128, 0.125)?;
    let window = Window::gaussian(grid);
    let part = partition_bumps(&grid, PartitionKind::Smooth)?;
    let (a, b) = default_lattice(grid.n());
    let sys = GaborSystem::new(window.clone(), a, b)?;
    let signals: Vec<Signal> = (0..20u64)
        .map(|i| band_limited_noise(grid, 1 ^ (i << 8)))
        .collect();

    println!("// ----- paste into src/calibration.rs -----");
    println!("pub static DEFINITION_RATIO_BRACKETS: &[RatioBracket] = &[");
    for p in [1.0, 2.0, 4.0] {
        for q in [1.0, 2.0, f64::INFINITY] {
            let params = MixedNormParams::new(
                Exponent::Finite(p),
                if q.is_infinite() {
                    Exponent::Inf
                } else {
                    Exponent::Finite(q)
                },
                NormMode::Continuum,
            );
            let mut r = [(f64::INFINITY, 0.0f64); 3];
            for f in &signals {
                let vs = mod_norm_stft(f, &window, params)?;
                let vb = mod_norm_blocks(f, &part, params)?;
                let vg = mod_norm_gabor(f, &sys, params)?;
                for (slot, val) in [(0, vs / vb), (1, vs / vg), (2, vb / vg)] {
                    r[slot].0 = r[slot].0.min(val);
                    r[slot].1 = r[slot].1.max(val);
                }
            }
            let w = |s: (f64, f64)| (s.0 / MARGIN, s.1 * MARGIN);
            let (sb, sg, bg) = (w(r[0]), w(r[1]), w(r[2]));
            for (name, br) in [("s/b", sb), ("s/g", sg), ("b/g", bg)] {
                if br.1 / br.0 > 10.0 {
                    eprintln!("warning: ({p},{q}) {name} bracket wider than 10x");
                }
            }
            println!(
                "    RatioBracket {{ p: {}, q: {}, stft_over_blocks: ({:.6}, {:.6}), stft_over_gabor: ({:.6}, {:.6}), blocks_over_gabor: ({:.6}, {:.6}) }},",
                exp_src(p), exp_src(q), sb.0, sb.1, sg.0, sg.1, bg.0, bg.1
            );
        }
    }
    println!("];");

    // ----- global vector-extension constant
    let vg = Grid::new(64, 0.125)?;
    let vpart = partition_bumps(&vg, PartitionKind::Smooth)?;
    let rng = CounterRng::new(1, 0x0a1b);
    let unimodular = Symbol::new(
        vg,
        (0..vg.n() as u64)
            .map(|i| {
                let t = rng.f64_at(i) * std::f64::consts::TAU;
                Complex64::new(t.cos(), t.sin())
            })
            .collect(),
        "unimodular",
    )?;
    let symbols = [
        unimodular,
        sym_sgn(&vg),
        sym_chirp(2.0, &vg)?,
        sym_indicator(Interval::new(0.0, 2.0)?, &vg),
    ];
    let mut worst = 0.0f64;
    for params in [
        MixedNormParams::new(Exponent::Finite(2.0), Exponent::Finite(2.0), NormMode::Discrete),
        MixedNormParams::new(Exponent::Finite(2.0), Exponent::Finite(1.0), NormMode::Discrete),
    ] {
        for m in &symbols {
            for seed in [1u64, 2] {
                for len in [1usize, 4, 16] {
                    let fs: Vec<Signal> = (0..len as u64)
                        .map(|i| noise_signal(vg, seed ^ (i << 10)))
                        .collect();
                    let out = mz_extend(m, &fs)?;
                    let before = mod_norm_vector_blocks(&fs, &vpart, params)?;
                    let after = mod_norm_vector_blocks(&out, &vpart, params)?;
                    worst = worst.max(after / (m.sup_norm() * before));
                }
            }
        }
    }
    println!("pub static VECTOR_EXTENSION_GLOBAL_C: f64 = {:.6};", worst * 1.10);
    println!("// ----- end paste -----");
    println!();
    println!("observed worst vector ratio: {worst:.6} (frozen with a 1.10 margin)");
    println!();

    // ----- preset sanity values
    let b512 = Grid::new(512, 1.0 / 64.0)?;
    let budget = ProbeBudget::default();

    for (n, dx) in [(32usize, 0.25), (256, 0.125)] {
        let g = Grid::new(n, dx)?;
        let est = opnorm_probe(
            &ProbeOp::multiplier(&sym_sgn(&g)),
            &NormSpec::lp(Exponent::Finite(4.0), NormMode::Discrete),
            &NormSpec::lp(Exponent::Finite(4.0), NormMode::Discrete),
            &budget,
            1,
        )?;
        println!("sgn on l4, n = {n}: {:.6} ({})", est.value, est.witness);
    }

    let m41 = SpecRecipe::MpqBlocks {
        kind: PartitionKind::Smooth,
        params: MixedNormParams::new(
            Exponent::Finite(4.0),
            Exponent::Finite(1.0),
            NormMode::Discrete,
        ),
    };
    let l4 = SpecRecipe::Lp {
        p: Exponent::Finite(4.0),
        mode: NormMode::Discrete,
    };
    let fam = GrowthFamily::UnitBlocksWorstSign { grid: b512 };
    let sizes = [4usize, 8, 16, 32];
    let cm = growth_experiment(&fam, &sizes, &m41, &m41, &budget, 1)?;
    let cl = growth_experiment(&fam, &sizes, &l4, &l4, &budget, 1)?;
    println!("unit blocks m41 spread: {:.4}", cm.spread());
    println!("unit blocks l4 growth:  {:.4}", cl.growth_ratio());

    let chirp = GrowthFamily::ChirpBandwidth { alpha: 2.0, extent: 8.0 };
    let cc = growth_experiment(&chirp, &[128, 256, 512], &m41, &m41, &budget, 1)?;
    println!("chirp m41 spread:       {:.4}", cc.spread());

    let dy = GrowthFamily::DyadicEquivalence { grid: b512 };
    let lp4 = SpecRecipe::Lp { p: Exponent::Finite(4.0), mode: NormMode::Discrete };
    let lp4v = SpecRecipe::LpVectorL2 { p: Exponent::Finite(4.0), mode: NormMode::Discrete };
    let cd = growth_experiment(&dy, &[2, 3, 4, 5], &lp4, &lp4v, &budget, 1)?;
    println!("dyadic p4 spread:       {:.4}", cd.spread());

    let ru = GrowthFamily::RubioRandom { grid: b512 };
    let m33 = SpecRecipe::MpqBlocks {
        kind: PartitionKind::Smooth,
        params: MixedNormParams::new(
            Exponent::Finite(3.0),
            Exponent::Finite(3.0),
            NormMode::Discrete,
        ),
    };
    let m33v = SpecRecipe::MpqVectorL2 {
        kind: PartitionKind::Smooth,
        params: MixedNormParams::new(
            Exponent::Finite(3.0),
            Exponent::Finite(3.0),
            NormMode::Discrete,
        ),
    };
    let cr = growth_experiment(&ru, &[4, 8, 16], &m33, &m33v, &budget, 1)?;
    println!("rubio m33 spread:       {:.4}", cr.spread());

    let g1024 = Grid::new(1024, 0.25)?;
    let ex = GrowthFamily::Ex1Depth { grid: g1024 };
    let ce = growth_experiment(&ex, &[1, 2, 3], &m41, &m41, &budget, 1)?;
    println!("ex1 depth m41 growth:   {:.4}", ce.growth_ratio());

    // the big one: square function growth below p = 2 on a fine grid
    let g32768 = Grid::new(32768, 0.25)?;
    let sq = GrowthFamily::SquareFunctionEx1 { grid: g32768 };
    let m15 = SpecRecipe::MpqBlocks {
        kind: PartitionKind::Smooth,
        params: MixedNormParams::new(
            Exponent::Finite(1.5),
            Exponent::Finite(1.5),
            NormMode::Discrete,
        ),
    };
    let m15v = SpecRecipe::MpqVectorL2 {
        kind: PartitionKind::Smooth,
        params: MixedNormParams::new(
            Exponent::Finite(1.5),
            Exponent::Finite(1.5),
            NormMode::Discrete,
        ),
    };
    let small = ProbeBudget { probes: 8, ascent_steps: 0, sign_draws: 0 };
    let cs = growth_experiment(&sq, &[2, 5], &m15, &m15v, &small, 1)?;
    println!(
        "square fn p=1.5 growth: {:.4} ({:.4} -> {:.4})",
        cs.growth_ratio(),
        cs.estimates[0].value,
        cs.estimates[1].value
    );

    // byte determinism spot check on one curve
    let cl2 = growth_experiment(&fam, &sizes, &l4, &l4, &budget, 1)?;
    println!("rerun identical: {}", cl.to_csv() == cl2.to_csv());
    Ok(())
}
