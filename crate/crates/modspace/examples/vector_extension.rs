//! A bounded multiplier applied to a list of signals is again bounded on the
//! square-aggregated block norm, with a constant that does not depend on the
//! list length. This is the vector-valued counterpart of scalar boundedness
//! and the mechanism behind averaged square-function estimates.

use rustfft::num_complex::Complex64;

use modspace::engine::{apply_multiplier, mz_extend};
use modspace::experiments::noise_signal;
use modspace::modnorm::mod_norm_vector_blocks;
use modspace::partition::{partition_bumps, PartitionKind};
use modspace::rng::CounterRng;
use modspace::symbols::{sym_sgn, Symbol};
use modspace::{Exponent, Grid, MixedNormParams, NormMode, Signal};

fn main() -> Result<(), modspace::Error> {
    let grid = Grid::new(64, 0.125)?;
    let part = partition_bumps(&grid, PartitionKind::Smooth)?;
    let params = MixedNormParams::new(
        Exponent::Finite(2.0),
        Exponent::Finite(1.0),
        NormMode::Discrete,
    );

    let rng = CounterRng::new(5, 0x0a1b);
    let unimodular = Symbol::new(
        grid,
        (0..grid.n() as u64)
            .map(|i| {
                let t = rng.f64_at(i) * std::f64::consts::TAU;
                Complex64::new(t.cos(), t.sin())
            })
            .collect(),
        "unimodular",
    )?;

    for (sym, name) in [(&sym_sgn(&grid), "sgn"), (&unimodular, "unimodular")] {
        println!("{name}: ratio (after / sup * before) by list length");
        for len in [1usize, 2, 4, 8, 16] {
            let fs: Vec<Signal> = (0..len as u64)
                .map(|i| noise_signal(grid, 100 + i))
                .collect();
            let out = mz_extend(sym, &fs)?;
            // the extension is nothing but the multiplier applied slot by slot
            for (o, f) in out.iter().zip(&fs) {
                assert!(o.max_abs_diff(&apply_multiplier(sym, f)?)? < 1e-14);
            }
            let before = mod_norm_vector_blocks(&fs, &part, params)?;
            let after = mod_norm_vector_blocks(&out, &part, params)?;
            println!("  len {len:>2}: {:.6}", after / (sym.sup_norm() * before));
        }
    }
    Ok(())
}
