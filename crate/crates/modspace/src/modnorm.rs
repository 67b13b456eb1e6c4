//! Time-frequency (modulation) norms computed three equivalent ways: from
//! the full transform matrix, from frequency-block cutoffs, and from Gabor
//! lattice coefficients; plus the l2-vector-valued extensions.
//!
//! The three routes measure the same size up to window/partition/lattice
//! dependent constants. Cross-route ratios are therefore compared against
//! measured brackets, never against a theoretical constant.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gabor::{frame_bounds, gabor_coeffs, GaborSystem};
use crate::grid::{check_same_grid, dft, idft, Signal};
use crate::norms::{signal_lp, weighted_lp, MixedNormParams, NormMode};
use crate::partition::BlockPartition;
use crate::stft::{stft, Window};

/// Mixed norm of the transform matrix: inner exponent over the time shift,
/// outer over frequency. Discrete 2,2 equals `sqrt(n) ||f|| ||g||` exactly.
pub fn mod_norm_stft(f: &Signal, g: &Window, params: MixedNormParams) -> Result<f64> {
    let v = stft(f, g)?;
    Ok(v.mixed_norm(params))
}

/// Apply the k-th partition bump as a Fourier multiplier.
fn block_piece(spectrum: &Signal, mask: &[f64]) -> Signal {
    let data: Vec<Complex64> = spectrum
        .data()
        .iter()
        .zip(mask)
        .map(|(z, &m)| z * m)
        .collect();
    idft(&Signal::new(*spectrum.grid(), data).unwrap())
}

/// Block form: `( sum_k ||T_{phi_k} f||_p^q )^{1/q}` over the partition
/// bumps, with the inner norm in the selected mode and unit outer weight
/// (the bump centers step by one frequency unit).
pub fn mod_norm_blocks(f: &Signal, part: &BlockPartition, params: MixedNormParams) -> Result<f64> {
    if !f.grid().same_as(part.grid()) {
        return Err(Error::GridMismatch(
            "signal and partition live on different grids".into(),
        ));
    }
    part.check_partition()?;
    let spectrum = dft(f);
    let pieces: Vec<f64> = (0..part.len())
        .map(|k| signal_lp(&block_piece(&spectrum, part.block(k)), params.p, params.mode))
        .collect();
    Ok(weighted_lp(pieces.into_iter(), params.q, 1.0))
}

/// Gabor form: mixed norm of the lattice coefficients, inner exponent over
/// the time index `k`, outer over the frequency index `l`. Continuum mode
/// weights the time sum by `a dx` and the frequency sum by `b/(n dx)`, the
/// physical lattice spacings.
pub fn mod_norm_gabor(f: &Signal, sys: &GaborSystem, params: MixedNormParams) -> Result<f64> {
    let bounds = frame_bounds(sys)?;
    if !bounds.is_frame() {
        return Err(Error::NotAFrame {
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    let c = gabor_coeffs(f, sys)?;
    let (inner_w, outer_w) = match params.mode {
        NormMode::Discrete => (1.0, 1.0),
        NormMode::Continuum => (
            sys.time_step() as f64 * f.grid().dx(),
            sys.freq_step() as f64 * f.grid().bin_spacing(),
        ),
    };
    // inner axis is the time index k = row index; aggregate per column l
    let cols: Vec<Vec<Complex64>> = (0..sys.freq_count())
        .map(|l| (0..sys.time_count()).map(|k| c[k][l]).collect())
        .collect();
    Ok(crate::norms::mixed_norm_rows(
        &cols, params.p, params.q, inner_w, outer_w,
    ))
}

/// Pointwise l2 aggregate `(sum_n |f_n(t)|^2)^{1/2}` of a signal list.
pub fn l2_aggregate(fs: &[Signal]) -> Result<Signal> {
    let first = fs.first().ok_or(Error::EmptyList)?;
    for f in &fs[1..] {
        check_same_grid(first, f)?;
    }
    let n = first.grid().n();
    let data = (0..n)
        .map(|t| {
            let s: f64 = fs.iter().map(|f| f.data()[t].norm_sqr()).sum();
            Complex64::new(s.sqrt(), 0.0)
        })
        .collect();
    Signal::new(*first.grid(), data)
}

/// `|| (sum_n |f_n|^2)^{1/2} ||_p` in the selected mode.
pub fn lp_of_l2_aggregate(fs: &[Signal], p: crate::norms::Exponent, mode: NormMode) -> Result<f64> {
    Ok(signal_lp(&l2_aggregate(fs)?, p, mode))
}

/// Vector-valued transform norm: mixed norm of the pointwise l2 aggregate of
/// the members' transform matrices.
pub fn mod_norm_vector(fs: &[Signal], g: &Window, params: MixedNormParams) -> Result<f64> {
    let first = fs.first().ok_or(Error::EmptyList)?;
    let n = first.grid().n();
    let mut agg = vec![vec![0.0f64; n]; n];
    for f in fs {
        check_same_grid(first, f)?;
        let v = stft(f, g)?;
        for x in 0..n {
            for xi in 0..n {
                agg[x][xi] += v.entry(x, xi).norm_sqr();
            }
        }
    }
    let (inner_w, outer_w) = match params.mode {
        NormMode::Discrete => (1.0, 1.0),
        NormMode::Continuum => (first.grid().dx(), first.grid().bin_spacing()),
    };
    // inner axis is x; regroup per frequency bin
    let cols: Vec<Vec<Complex64>> = (0..n)
        .map(|xi| {
            (0..n)
                .map(|x| Complex64::new(agg[x][xi].sqrt(), 0.0))
                .collect()
        })
        .collect();
    Ok(crate::norms::mixed_norm_rows(
        &cols, params.p, params.q, inner_w, outer_w,
    ))
}

/// Vector-valued block form: `( sum_k || (sum_n |T_{phi_k} f_n|^2)^{1/2} ||_p^q )^{1/q}`.
pub fn mod_norm_vector_blocks(
    fs: &[Signal],
    part: &BlockPartition,
    params: MixedNormParams,
) -> Result<f64> {
    let first = fs.first().ok_or(Error::EmptyList)?;
    for f in fs {
        check_same_grid(first, f)?;
    }
    if !first.grid().same_as(part.grid()) {
        return Err(Error::GridMismatch(
            "signals and partition live on different grids".into(),
        ));
    }
    part.check_partition()?;
    let spectra: Vec<Signal> = fs.iter().map(dft).collect();
    let pieces: Vec<f64> = (0..part.len())
        .map(|k| {
            let cut: Vec<Signal> = spectra
                .iter()
                .map(|s| block_piece(s, part.block(k)))
                .collect();
            Ok(signal_lp(&l2_aggregate(&cut)?, params.p, params.mode))
        })
        .collect::<Result<_>>()?;
    Ok(weighted_lp(pieces.into_iter(), params.q, 1.0))
}
