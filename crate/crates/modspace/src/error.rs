use thiserror::Error;

/// Errors for the whole toolkit. Variants are contracts: callers match on them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("dilation by {num}/{den} needs both factors to divide n = {n}")]
    IncompatibleDilation { num: u64, den: u64, n: usize },

    #[error("window must have nonzero l2 norm")]
    ZeroWindow,

    #[error("cross-ambiguity form is defined for even length only, got n = {0}")]
    OddLengthAmbiguity(usize),

    #[error("lattice steps must divide n: a = {a}, b = {b}, n = {n}")]
    InvalidLattice { a: usize, b: usize, n: usize },

    #[error("system is not a frame (lower bound {lower:.3e} vs upper {upper:.3e})")]
    NotAFrame { lower: f64, upper: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("block partition does not sum to one (max deviation {max_dev:.3e})")]
    PartitionGap { max_dev: f64 },

    #[error("empty input where at least one element is required")]
    EmptyList,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("frequency range [{lo}, {hi}) does not fit inside the grid band [{band_lo}, {band_hi})")]
    BandOverflow {
        lo: f64,
        hi: f64,
        band_lo: f64,
        band_hi: f64,
    },

    #[error("depth {depth} gives finest width {finest:.3e} under two bin widths ({bin:.3e})")]
    DepthOverflow { depth: usize, finest: f64, bin: f64 },

    #[error("frequency band of width {width} is too narrow for the partition (needs >= {needed})")]
    BandTooNarrow { width: f64, needed: f64 },

    #[error("collection has an interval of width {width:.3e}, under two bin widths ({bin:.3e})")]
    AliasedCollection { width: f64, bin: f64 },

    #[error("exact enumeration over 2^{0} sign patterns is too large (cap 2^20)")]
    EnumerationTooLarge(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
