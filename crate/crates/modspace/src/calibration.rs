//! Reference values frozen from a calibration run of this crate
//! (`cargo run --release --example calibrate`). The acceptance tests assert
//! against these numbers; when defaults that feed them change, rerun the
//! example and paste the table it prints.

/// Frozen bracket for the pairwise ratios of the three norm definitions on
/// the reference configuration: length 128, spacing 1/8, Gaussian window,
/// redundancy-2 lattice, continuum weights, band-limited unit-energy
/// signals. `inf` marks the sup exponent.
#[derive(Clone, Copy, Debug)]
pub struct RatioBracket {
    pub p: f64,
    pub q: f64,
    pub stft_over_blocks: (f64, f64),
    pub stft_over_gabor: (f64, f64),
    pub blocks_over_gabor: (f64, f64),
}

pub static DEFINITION_RATIO_BRACKETS: &[RatioBracket] = &[
    RatioBracket { p: 1.0, q: 1.0, stft_over_blocks: (2.383447, 4.342574), stft_over_gabor: (0.737163, 1.386742), blocks_over_gabor: (0.232282, 0.431744) },
    RatioBracket { p: 1.0, q: 2.0, stft_over_blocks: (2.518992, 4.622094), stft_over_gabor: (0.736314, 1.393583), blocks_over_gabor: (0.218551, 0.413019) },
    RatioBracket { p: 1.0, q: f64::INFINITY, stft_over_blocks: (2.805666, 6.112442), stft_over_gabor: (0.764623, 1.739151), blocks_over_gabor: (0.166439, 0.392072) },
    RatioBracket { p: 2.0, q: 1.0, stft_over_blocks: (2.370939, 4.241744), stft_over_gabor: (0.735734, 1.380684), blocks_over_gabor: (0.232281, 0.429558) },
    RatioBracket { p: 2.0, q: 2.0, stft_over_blocks: (2.496363, 4.502202), stft_over_gabor: (0.734385, 1.390161), blocks_over_gabor: (0.219921, 0.410408) },
    RatioBracket { p: 2.0, q: f64::INFINITY, stft_over_blocks: (2.811376, 5.867575), stft_over_gabor: (0.769148, 1.690905), blocks_over_gabor: (0.170411, 0.389340) },
    RatioBracket { p: 4.0, q: 1.0, stft_over_blocks: (2.347000, 4.179470), stft_over_gabor: (0.732360, 1.378160), blocks_over_gabor: (0.232805, 0.429089) },
    RatioBracket { p: 4.0, q: 2.0, stft_over_blocks: (2.468984, 4.431382), stft_over_gabor: (0.731305, 1.390423), blocks_over_gabor: (0.220109, 0.407898) },
    RatioBracket { p: 4.0, q: f64::INFINITY, stft_over_blocks: (2.743489, 5.797469), stft_over_gabor: (0.767050, 1.588901), blocks_over_gabor: (0.172031, 0.392972) },
];

pub fn bracket_for(p: f64, q: f64) -> Option<&'static RatioBracket> {
    DEFINITION_RATIO_BRACKETS
        .iter()
        .find(|b| b.p == p && b.q == q)
}

/// Global bound on the vector-extension ratio
/// `||{T_m f_n}|| / (sup|m| ||{f_n}||)` over the calibrated symbol and
/// signal families in the l2-vector block norm.
pub static VECTOR_EXTENSION_GLOBAL_C: f64 = 1.100000;
