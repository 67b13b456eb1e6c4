//! Runs the short-time transform along all six computation routes and checks
//! that they agree to roundoff, then exercises the inner-product identity and
//! inversion. Disagreement between any two routes would expose a broken grid
//! convention, so this is the first example to run after touching core code.

use modspace::experiments::noise_signal;
use modspace::stft::{
    check_orthogonality, orthogonality_scale, stft, stft_alternate, stft_invert, StftForm, Window,
};
use modspace::Grid;

fn main() -> Result<(), modspace::Error> {
    let grid = Grid::new(128, 0.125)?;
    let f = noise_signal(grid, 7);
    let g = Window::gaussian(grid);

    let reference = stft(&f, &g)?;
    let scale = reference.energy().sqrt();
    println!("grid n = {}, dx = {}", grid.n(), grid.dx());
    println!("coefficient energy = {:.6e}", reference.energy());
    println!();

    let forms = [
        (StftForm::SpectralInner, "spectral inner product"),
        (StftForm::WindowedDirect, "direct summation"),
        (StftForm::TransformPair, "transform of the spectra"),
        (StftForm::TimeConvolution, "time-side convolution"),
        (StftForm::SpectralConvolution, "frequency-side convolution"),
        (StftForm::HalfShift, "centered half-shift form"),
    ];
    for (form, what) in forms {
        let alt = stft_alternate(&f, &g, form)?;
        println!(
            "{what:<28} relative deviation = {:.3e}",
            alt.max_abs_diff(&reference) / scale
        );
    }

    // <V f1 g1, V f2 g2> = n <f1, f2> conj(<g1, g2>)
    let f2 = noise_signal(grid, 8);
    let g2 = Window::new(noise_signal(grid, 9))?;
    let dev = check_orthogonality(&f, &f2, &g, &g2)?;
    println!();
    println!(
        "inner-product identity deviation = {:.3e}",
        dev / orthogonality_scale(&f, &f2, &g, &g2)
    );

    let back = stft_invert(&reference, &g, &g2)?;
    println!(
        "inversion residual (mismatched synthesis window) = {:.3e}",
        back.max_abs_diff(&f)? / f.l2()
    );
    Ok(())
}
