//! Discrete time-frequency analysis on cyclic grids: windowed transforms,
//! modulation-space norms under three interchangeable definitions, Gabor
//! frames, Fourier multipliers, square functions, and probe-based operator
//! norm estimation with reproducible growth experiments.
//!
//! The `examples/` directory is the front door; each example is a runnable
//! tour of one capability:
//!
//! - `stft_identities`: the windowed transform, its six equivalent
//!   computation routes, orthogonality and inversion.
//! - `norm_definitions`: the three norm definitions and how their values
//!   relate on concrete signals.
//! - `gabor_frames`: lattices, frame bounds, dual windows, reconstruction.
//! - `multipliers`: symbols, multiplier operators, exact l2 operator norms.
//! - `square_functions`: band decompositions and their Lp behavior.
//! - `random_multipliers`: sign randomization and moment estimates.
//! - `growth_curves`: operator families whose probed norms stay flat or
//!   climb as the family scales.
//! - `vector_extension`: multipliers acting on signal lists.
//! - `calibrate`: recomputes the frozen reference values used by the
//!   acceptance tests.
//!
//! A thin `modspace` binary exposes norms, experiment presets and signal
//! generation for scripting; see the crate README.

pub mod calibration;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod gabor;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod modnorm;
pub mod norms;
pub mod partition;
pub mod probe;
pub mod rng;
pub mod stft;
pub mod symbols;

pub use error::{Error, Result};
pub use grid::{dft, dilate, idft, inner, modulate, translate, Grid, Signal};
pub use norms::{Exponent, MixedNormParams, NormMode};
