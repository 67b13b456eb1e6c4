//! Operator-norm lower bounds along one-parameter operator families. Flat
//! curves indicate a bounded operator family, growing curves certify
//! unboundedness (every point is a concrete witness signal). Writes each
//! curve as CSV next to printing it.

use modspace::norms::{Exponent, MixedNormParams, NormMode};
use modspace::partition::PartitionKind;
use modspace::probe::{growth_experiment, GrowthFamily, ProbeBudget, SpecRecipe};
use modspace::Grid;

fn main() -> Result<(), modspace::Error> {
    let budget = ProbeBudget::quick();
    let grid = Grid::new(256, 1.0 / 32.0)?;

    // unit blocks with worst signs: flat on the block norm, grows on l4
    let fam = GrowthFamily::UnitBlocksWorstSign { grid };
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
    let sizes = [4usize, 8, 16];
    let curve_flat = growth_experiment(&fam, &sizes, &m41, &m41, &budget, 1)?;
    let curve_grow = growth_experiment(&fam, &sizes, &l4, &l4, &budget, 1)?;
    println!("worst signs on the block norm: spread = {:.4}", curve_flat.spread());
    print!("{}", curve_flat.to_csv());
    println!();
    println!("worst signs on l4: growth = {:.4}", curve_grow.growth_ratio());
    print!("{}", curve_grow.to_csv());
    println!();

    // chirp multiplier across bandwidths: bounded uniformly in the grid
    let chirp = GrowthFamily::ChirpBandwidth {
        alpha: 2.0,
        extent: 8.0,
    };
    let curve_chirp = growth_experiment(&chirp, &[128, 256, 512], &m41, &m41, &budget, 1)?;
    println!("chirp across grid lengths: spread = {:.4}", curve_chirp.spread());
    print!("{}", curve_chirp.to_csv());

    let dir = std::env::temp_dir();
    std::fs::write(dir.join("growth_unit_blocks_l4.csv"), curve_grow.to_csv())?;
    std::fs::write(dir.join("growth_chirp.csv"), curve_chirp.to_csv())?;
    println!();
    println!(
        "wrote growth_unit_blocks_l4.csv and growth_chirp.csv under {}",
        dir.display()
    );
    Ok(())
}
