//! Random sign patterns over frequency blocks. Averages over signs are
//! controlled by moment comparison (sampled vs exactly enumerated), while the
//! worst sign pattern is what drives unbounded growth in the blocks
//! experiment.

use rustfft::num_complex::Complex64;

use modspace::engine::{khintchine_estimate, randomized_block_multiplier, RademacherDraw};
use modspace::probe::{worst_sign_block_estimate, NormSpec, ProbeBudget};
use modspace::rng::CounterRng;
use modspace::symbols::collection_unit;
use modspace::{Exponent, Grid, NormMode};

fn main() -> Result<(), modspace::Error> {
    // moments of random sign sums: sampled vs enumerated
    let rng = CounterRng::new(42, 0xfeed);
    let b: Vec<Complex64> = (0..12u64)
        .map(|i| Complex64::new(rng.normal_at(2 * i), rng.normal_at(2 * i + 1)))
        .collect();
    println!("{:>4} {:>14} {:>14} {:>10}", "p", "enumerated", "sampled", "rel err");
    for p in [1.0, 2.0, 3.0, 4.0] {
        let exact = khintchine_estimate(&b, p, 0, 1)?;
        let mc = khintchine_estimate(&b, p, 1 << 14, 99)?;
        println!(
            "{p:>4} {exact:>14.8} {mc:>14.8} {:>10.2e}",
            (mc - exact).abs() / exact
        );
    }
    println!();

    // one random sign multiplier and the worst one over all patterns
    let grid = Grid::new(256, 1.0 / 32.0)?;
    let c = collection_unit(6, &grid)?;
    let draw = RademacherDraw::new(7, 0, c.len());
    let sym = randomized_block_multiplier(&c, &draw, &grid)?;
    println!("one draw of signs: {:?}", draw.signs());
    println!("symbol label: {}", sym.label());

    let spec = NormSpec::lp(Exponent::Finite(4.0), NormMode::Discrete);
    let est = worst_sign_block_estimate(&c, &grid, &spec, &spec, &ProbeBudget::quick(), 7)?;
    println!(
        "worst pattern over {} blocks: l4 lower bound = {:.6} via {} ({})",
        c.len(),
        est.value,
        est.method,
        est.witness
    );
    Ok(())
}
