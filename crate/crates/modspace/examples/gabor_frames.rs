//! Frame bounds, dual windows, and perfect reconstruction for Gaussian Gabor
//! systems. Shows how the bounds tighten as the lattice gets denser and that
//! analysis with the canonical dual window inverts synthesis with the
//! original (and the other way round).

use modspace::gabor::{
    dual_window, frame_bounds, frame_bounds_with, gabor_reconstruct, gabor_reconstruct_swapped,
    BoundsMethod, GaborSystem,
};
use modspace::experiments::noise_signal;
use modspace::stft::Window;
use modspace::Grid;

fn main() -> Result<(), modspace::Error> {
    let grid = Grid::new(128, 0.125)?;
    let window = Window::gaussian(grid);
    let f = noise_signal(grid, 11);

    println!(
        "{:>10} {:>12} {:>12} {:>10} {:>12}",
        "lattice", "lower", "upper", "ratio", "residual"
    );
    for (a, b) in [(16, 16), (8, 16), (8, 8), (4, 8), (4, 4)] {
        let sys = GaborSystem::new(window.clone(), a, b)?;
        let bounds = frame_bounds(&sys)?;
        if !bounds.is_frame() {
            println!("{:>10} not a frame", format!("{a}x{b}"));
            continue;
        }
        let back = gabor_reconstruct(&f, &sys)?;
        println!(
            "{:>10} {:>12.6} {:>12.6} {:>10.4} {:>12.3e}",
            format!("{a}x{b}"),
            bounds.lower,
            bounds.upper,
            bounds.upper / bounds.lower,
            back.max_abs_diff(&f)? / f.l2()
        );
    }

    // the dense and iterative bound computations must agree
    let sys = GaborSystem::new(window.clone(), 8, 8)?;
    let dense = frame_bounds_with(&sys, BoundsMethod::ExactSpectrum)?;
    let power = frame_bounds_with(&sys, BoundsMethod::PowerIteration)?;
    println!();
    println!(
        "dense vs iterative bounds: lower diff = {:.3e}, upper diff = {:.3e}",
        (dense.lower - power.lower).abs(),
        (dense.upper - power.upper).abs()
    );

    let dual = dual_window(&sys)?;
    println!(
        "canonical dual window l2 = {:.6} (original {:.6})",
        dual.l2(),
        window.l2()
    );
    let swapped = gabor_reconstruct_swapped(&f, &sys)?;
    println!(
        "swapped-window reconstruction residual = {:.3e}",
        swapped.max_abs_diff(&f)? / f.l2()
    );
    Ok(())
}
