//! Multiplier symbols and frequency-interval families.
//!
//! All intervals are half-open `[l, r)` in physical frequency, and a bin
//! belongs to an interval exactly when its center frequency does. This keeps
//! partitions bin-exact: no bin is counted twice and none is dropped.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// A bounded function of frequency, tabulated per bin.
#[derive(Clone, Debug)]
pub struct Symbol {
    grid: Grid,
    values: Vec<Complex64>,
    label: String,
}

impl Symbol {
    pub fn new(grid: Grid, values: Vec<Complex64>, label: impl Into<String>) -> Result<Symbol> {
        if values.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        Ok(Symbol {
            grid,
            values,
            label: label.into(),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Half-open frequency interval `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interval needs finite lo < hi, got [{lo}, {hi})"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Indices of the bins whose center frequency falls in the interval.
    pub fn bins(&self, grid: &Grid) -> Vec<usize> {
        (0..grid.n()).filter(|&j| self.contains(grid.freq(j))).collect()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

/// Disjoint half-open intervals, sorted by left endpoint.
#[derive(Clone, Debug)]
pub struct IntervalCollection {
    intervals: Vec<Interval>,
}

impl IntervalCollection {
    pub fn new(mut intervals: Vec<Interval>) -> Result<IntervalCollection> {
        if intervals.is_empty() {
            return Err(Error::EmptyList);
        }
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        for w in intervals.windows(2) {
            if w[0].hi > w[1].lo {
                return Err(Error::InvalidParameter(format!(
                    "intervals overlap: [{}, {}) and [{}, {})",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        Ok(IntervalCollection { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Narrowest member width.
    pub fn min_width(&self) -> f64 {
        self.intervals.iter().map(Interval::width).fold(f64::INFINITY, f64::min)
    }

    /// Errors unless every member spans at least two bins on `grid`.
    pub fn check_resolved(&self, grid: &Grid) -> Result<()> {
        let bin = grid.bin_spacing();
        let need = 2.0 * bin * (1.0 - 1e-9);
        let width = self.min_width();
        if width < need {
            return Err(Error::AliasedCollection { width, bin });
        }
        Ok(())
    }
}

fn check_in_band(intervals: &[Interval], grid: &Grid) -> Result<()> {
    let (band_lo, band_hi) = grid.band();
    for iv in intervals {
        if iv.lo < band_lo || iv.hi > band_hi {
            return Err(Error::BandOverflow {
                lo: iv.lo,
                hi: iv.hi,
                band_lo,
                band_hi,
            });
        }
    }
    Ok(())
}

/// Unit cells `[n, n+1)` for `n = 0..m`.
pub fn collection_unit(m: usize, grid: &Grid) -> Result<IntervalCollection> {
    if m == 0 {
        return Err(Error::EmptyList);
    }
    let intervals: Vec<Interval> = (0..m)
        .map(|n| Interval::new(n as f64, n as f64 + 1.0))
        .collect::<Result<_>>()?;
    check_in_band(&intervals, grid)?;
    IntervalCollection::new(intervals)
}

/// Mirrored dyadic shells `[2^j, 2^{j+1})` and `[-2^{j+1}, -2^j)` for `j = 0..levels`.
pub fn collection_dyadic(levels: usize, grid: &Grid) -> Result<IntervalCollection> {
    if levels == 0 {
        return Err(Error::EmptyList);
    }
    let mut intervals = Vec::with_capacity(2 * levels);
    for j in 0..levels {
        let lo = (1u64 << j) as f64;
        let hi = (1u64 << (j + 1)) as f64;
        intervals.push(Interval::new(lo, hi)?);
        intervals.push(Interval::new(-hi, -lo)?);
    }
    check_in_band(&intervals, grid)?;
    IntervalCollection::new(intervals)
}

/// One subinterval `[n + frac_lo, n + frac_hi)` inside each unit cell
/// `[n, n+1)` for `n = 0..m`.
pub fn collection_within_cells(
    m: usize,
    frac_lo: f64,
    frac_hi: f64,
    grid: &Grid,
) -> Result<IntervalCollection> {
    if m == 0 {
        return Err(Error::EmptyList);
    }
    if !(0.0 <= frac_lo && frac_lo < frac_hi && frac_hi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cell subinterval needs 0 <= lo < hi <= 1, got [{frac_lo}, {frac_hi})"
        )));
    }
    let intervals: Vec<Interval> = (0..m)
        .map(|n| Interval::new(n as f64 + frac_lo, n as f64 + frac_hi))
        .collect::<Result<_>>()?;
    check_in_band(&intervals, grid)?;
    IntervalCollection::new(intervals)
}

/// Nested refinement family in `(0, 1)`: for each level `n = 1..=depth`, the
/// shell `[2^{-n}, 2^{-n+1})` is split into `2^n` equal pieces of width
/// `2^{-2n}`, giving `2^{depth+1} - 2` intervals whose width shrinks much
/// faster than their count grows.
pub fn collection_ex1(depth: u32, grid: &Grid) -> Result<IntervalCollection> {
    if depth == 0 {
        return Err(Error::InvalidParameter("refinement depth must be >= 1".into()));
    }
    let finest = 2f64.powi(-(2 * depth as i32));
    let bin = grid.bin_spacing();
    if finest < 2.0 * bin * (1.0 - 1e-9) {
        return Err(Error::DepthOverflow {
            depth: depth as usize,
            finest,
            bin,
        });
    }
    let mut intervals = Vec::new();
    for n in 1..=depth {
        let base = 2f64.powi(-(n as i32));
        let w = 2f64.powi(-(2 * n as i32));
        for m in 1..=(1u64 << n) {
            intervals.push(Interval::new(
                base + (m - 1) as f64 * w,
                base + m as f64 * w,
            )?);
        }
    }
    check_in_band(&intervals, grid)?;
    IntervalCollection::new(intervals)
}

/// Indicator of `[lo, hi)` on bin centers.
pub fn sym_indicator(interval: Interval, grid: &Grid) -> Symbol {
    let values = (0..grid.n())
        .map(|j| {
            if interval.contains(grid.freq(j)) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Symbol {
        grid: *grid,
        values,
        label: format!("indicator[{}, {})", interval.lo, interval.hi),
    }
}

/// Sign of the frequency: `+1` above zero, `-1` below, `0` at bin zero and at
/// the unpaired Nyquist bin of an even-length grid.
pub fn sym_sgn(grid: &Grid) -> Symbol {
    let half = (grid.n() / 2) as i64;
    let values = (0..grid.n())
        .map(|j| {
            let c = grid.centered_bin(j);
            let s = if grid.n() % 2 == 0 && c == -half {
                0.0
            } else if c > 0 {
                1.0
            } else if c < 0 {
                -1.0
            } else {
                0.0
            };
            Complex64::new(s, 0.0)
        })
        .collect();
    Symbol {
        grid: *grid,
        values,
        label: "sgn".into(),
    }
}

/// True when `alpha` lies in the range where the unimodular phase
/// `e^{i |xi|^alpha}` is certified to act boundedly on the block norms.
pub fn chirp_in_certified_range(alpha: f64) -> bool {
    (0.0..=2.0).contains(&alpha)
}

/// Unimodular chirp `e^{i |xi|^alpha}` at each bin frequency. Values of
/// `alpha` outside `[0, 2]` are accepted; the label notes that the certified
/// range was left.
pub fn sym_chirp(alpha: f64, grid: &Grid) -> Result<Symbol> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("chirp order must be finite, got {alpha}")));
    }
    let values = (0..grid.n())
        .map(|j| {
            let w = grid.freq(j).abs().powf(alpha);
            Complex64::new(w.cos(), w.sin())
        })
        .collect();
    let label = if chirp_in_certified_range(alpha) {
        format!("chirp(alpha={alpha})")
    } else {
        format!("chirp(alpha={alpha}, outside certified range [0, 2])")
    };
    Ok(Symbol {
        grid: *grid,
        values,
        label,
    })
}

/// `sum_n a_n` times the indicator of the n-th interval.
pub fn sym_block_sum(
    collection: &IntervalCollection,
    coeffs: &[Complex64],
    grid: &Grid,
) -> Result<Symbol> {
    if coeffs.len() != collection.len() {
        return Err(Error::LengthMismatch {
            expected: collection.len(),
            got: coeffs.len(),
        });
    }
    let mut values = vec![Complex64::new(0.0, 0.0); grid.n()];
    for (iv, &a) in collection.intervals().iter().zip(coeffs) {
        for j in iv.bins(grid) {
            values[j] += a;
        }
    }
    Ok(Symbol {
        grid: *grid,
        values,
        label: format!("block-sum over {} intervals", collection.len()),
    })
}
