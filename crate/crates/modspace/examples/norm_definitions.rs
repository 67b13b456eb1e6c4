//! Evaluates the same time-frequency norm three ways: dense transform
//! coefficients, frequency-block pieces, and Gabor lattice samples. The three
//! never agree exactly, but their ratios stay inside a narrow band that does
//! not depend on the signal. The table below prints that band for a spread of
//! exponent pairs.

use modspace::experiments::band_limited_noise;
use modspace::gabor::{default_lattice, GaborSystem};
use modspace::modnorm::{mod_norm_blocks, mod_norm_gabor, mod_norm_stft};
use modspace::partition::{partition_bumps, PartitionKind};
use modspace::stft::Window;
use modspace::{Exponent, Grid, MixedNormParams, NormMode};

fn main() -> Result<(), modspace::Error> {
    let grid = Grid::new(128, 0.125)?;
    let window = Window::gaussian(grid);
    let part = partition_bumps(&grid, PartitionKind::Smooth)?;
    let (a, b) = default_lattice(grid.n());
    let sys = GaborSystem::new(window.clone(), a, b)?;
    println!(
        "n = {}, dx = {}, lattice a = {a}, b = {b}, redundancy = {}",
        grid.n(),
        grid.dx(),
        sys.redundancy()
    );
    println!("{:>8} {:>18} {:>18}", "p,q", "stft/blocks", "stft/gabor");

    let exps = [
        Exponent::Finite(1.0),
        Exponent::Finite(2.0),
        Exponent::Finite(4.0),
        Exponent::Inf,
    ];
    for p in exps {
        for q in exps {
            let params = MixedNormParams::new(p, q, NormMode::Continuum);
            let mut sb = (f64::INFINITY, 0.0f64);
            let mut sg = (f64::INFINITY, 0.0f64);
            for i in 0..12u64 {
                let f = band_limited_noise(grid, 1 ^ (i << 8));
                let vs = mod_norm_stft(&f, &window, params)?;
                let vb = mod_norm_blocks(&f, &part, params)?;
                let vg = mod_norm_gabor(&f, &sys, params)?;
                sb = (sb.0.min(vs / vb), sb.1.max(vs / vb));
                sg = (sg.0.min(vs / vg), sg.1.max(vs / vg));
            }
            println!(
                "{:>8} [{:8.4}, {:8.4}] [{:8.4}, {:8.4}]",
                format!("{p},{q}"),
                sb.0,
                sb.1,
                sg.0,
                sg.1
            );
        }
    }
    Ok(())
}
