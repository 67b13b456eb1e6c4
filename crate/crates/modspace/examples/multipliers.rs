//! Fourier multipliers as spectral masks: the half-band sign symbol turns a
//! cosine into a sine, symbols compose by pointwise product, and on plain l2
//! the exact operator norm equals the largest symbol value.

use rustfft::num_complex::Complex64;

use modspace::engine::apply_multiplier;
use modspace::probe::{opnorm_exact_l2, ProbeOp};
use modspace::symbols::{sym_chirp, sym_indicator, sym_sgn, Interval};
use modspace::{Grid, Signal};

fn main() -> Result<(), modspace::Error> {
    let grid = Grid::new(64, 0.125)?;
    let k = 3.0; // cycles over the period
    let period = grid.n() as f64 * grid.dx();
    let cosine = Signal::from_coord_fn(grid, |x| {
        Complex64::new((std::f64::consts::TAU * k * x / period).cos(), 0.0)
    });
    let sine = Signal::from_coord_fn(grid, |x| {
        Complex64::new((std::f64::consts::TAU * k * x / period).sin(), 0.0)
    });

    // sgn maps cos -> i sin on this grid convention
    let sgn = sym_sgn(&grid);
    let flipped = apply_multiplier(&sgn, &cosine)?;
    let target = sine.scale(Complex64::new(0.0, 1.0));
    println!(
        "sgn(cos) vs i sin deviation = {:.3e}",
        flipped.max_abs_diff(&target)? / sine.l2()
    );

    // composing the two half-band cutoffs recovers a band indicator
    let upper = sym_indicator(Interval::new(0.0, 4.0)?, &grid);
    let chirp = sym_chirp(1.5, &grid)?;
    let ab = apply_multiplier(&upper, &apply_multiplier(&chirp, &cosine)?)?;
    let ba = apply_multiplier(&chirp, &apply_multiplier(&upper, &cosine)?)?;
    println!(
        "multipliers commute: deviation = {:.3e}",
        ab.max_abs_diff(&ba)? / cosine.l2()
    );

    // exact l2 operator norm equals the symbol's sup
    for (sym, name) in [(&sgn, "sgn"), (&upper, "band cutoff"), (&chirp, "chirp")] {
        let est = opnorm_exact_l2(&ProbeOp::multiplier(sym))?;
        println!(
            "{name:<12} exact l2 norm = {:.12} (symbol sup = {:.12})",
            est.value,
            sym.sup_norm()
        );
    }
    Ok(())
}
