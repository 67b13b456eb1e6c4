//! Square functions built from frequency decompositions. At p = 2 the
//! decomposition is an exact isometry (disjoint pieces tile the spectrum), so
//! the vector-valued norm ratio is identically one. Away from p = 2 the ratio
//! moves but stays in a band that does not depend on how many dyadic shells
//! participate.

use modspace::engine::square_function;
use modspace::experiments::band_limited_noise;
use modspace::norms::signal_lp;
use modspace::probe::{opnorm_probe, NormSpec, ProbeBudget, ProbeOp};
use modspace::symbols::{collection_dyadic, collection_ex1};
use modspace::{Exponent, Grid, NormMode};

fn main() -> Result<(), modspace::Error> {
    let grid = Grid::new(512, 1.0 / 64.0)?;

    // pointwise: sum of squared piece magnitudes equals squared magnitude
    let c = collection_dyadic(4, &grid)?;
    let f = band_limited_noise(grid, 3);
    let pieces = square_function(&c, &f)?;
    let energy: f64 = pieces.iter().map(|p| p.l2().powi(2)).sum();
    println!("dyadic shells = {}", c.len());
    println!(
        "piece energy / band energy = {:.12}",
        energy / f.l2().powi(2)
    );
    println!("note: shells cover only part of the band, so the ratio is below one");
    println!();

    // probed equivalence constants for the shell count J = 2..5
    let budget = ProbeBudget::quick();
    for p in [2.0, 4.0] {
        print!("p = {p}: ");
        for levels in [2usize, 3, 4, 5] {
            let cj = collection_dyadic(levels, &grid)?;
            let op = ProbeOp::square_fn(&cj, grid);
            let est = opnorm_probe(
                &op,
                &NormSpec::lp(Exponent::Finite(p), NormMode::Discrete),
                &NormSpec::LpVectorL2 {
                    p: Exponent::Finite(p),
                    mode: NormMode::Discrete,
                },
                &budget,
                17,
            )?;
            print!("J={levels} -> {:.4}  ", est.value);
        }
        println!();
    }
    println!();

    // the nested refinement family: finer levels push the constant up
    for depth in [1u32, 2, 3] {
        let c = collection_ex1(depth, &Grid::new(1024, 0.25)?)?;
        let f = band_limited_noise(Grid::new(1024, 0.25)?, 5);
        let pieces = square_function(&c, &f)?;
        let agg: f64 = pieces.iter().map(|p| p.l2().powi(2)).sum::<f64>().sqrt();
        println!(
            "refinement depth {depth}: {} pieces, aggregate/l2 = {:.6}, l4 of input = {:.6}",
            c.len(),
            agg / f.l2(),
            signal_lp(&f, Exponent::Finite(4.0), NormMode::Discrete)
        );
    }
    Ok(())
}
