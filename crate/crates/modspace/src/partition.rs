//! Smooth partitions of unity on the frequency band, one bump per integer
//! frequency cell. These are the frequency cutoffs behind the block form of
//! the time-frequency norms and the amalgam-space probes.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Bump profile used for the partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionKind {
    /// `b(x) = exp(-1/(1-x^2))` on `(-1, 1)`, normalized by its own periodic
    /// sum so the shifts add to 1 identically. Support `[-1, 1]`.
    Smooth,
    /// Identically 1 on `[-1/4, 1/4]` with a complementary taper; support
    /// `[-3/4, 3/4]`. The shifts add to 1 by the taper's reflection identity.
    FlatCenter,
}

/// A family of nonnegative bumps `phi_k(xi) = phi(xi - k)` tabulated on the
/// grid's bins, with `sum_k phi_k = 1` on the whole band.
#[derive(Clone, Debug)]
pub struct BlockPartition {
    grid: Grid,
    kind: PartitionKind,
    centers: Vec<i64>,
    values: Vec<Vec<f64>>,
}

fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

/// Smooth profile with unit periodic sum: only the two integer shifts
/// straddling `x` are nonzero, so dividing by their sum makes the shifted
/// family add to 1.
pub fn smooth_profile(x: f64) -> f64 {
    let frac = x - x.floor();
    let denom = bump(frac) + bump(frac - 1.0);
    if denom == 0.0 {
        0.0
    } else {
        bump(x) / denom
    }
}

fn taper_h(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Monotone taper with `taper(u) + taper(1 - u) = 1`.
fn taper(u: f64) -> f64 {
    let a = taper_h(u);
    let b = taper_h(1.0 - u);
    if a + b == 0.0 {
        if u >= 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        a / (a + b)
    }
}

/// Flat-center profile: 1 on `[-1/4, 1/4]`, tapering to 0 at `|x| = 3/4`.
pub fn flat_profile(x: f64) -> f64 {
    let a = x.abs();
    if a <= 0.25 {
        1.0
    } else if a >= 0.75 {
        0.0
    } else {
        taper((0.75 - a) * 2.0)
    }
}

impl BlockPartition {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn center(&self, i: usize) -> i64 {
        self.centers[i]
    }

    /// Per-bin values of the i-th bump.
    pub fn block(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// Largest deviation of `sum_k phi_k` from 1 over all bins.
    pub fn max_partition_deviation(&self) -> f64 {
        let n = self.grid.n();
        (0..n)
            .map(|j| {
                let s: f64 = self.values.iter().map(|v| v[j]).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn check_partition(&self) -> Result<()> {
        let dev = self.max_partition_deviation();
        if dev > 1e-9 {
            return Err(Error::PartitionGap { max_dev: dev });
        }
        Ok(())
    }
}

/// Build the bump family covering the grid's band.
///
/// Centers run over every integer whose bump can meet a bin frequency. The
/// band must span at least 4 frequency units so that interior bumps exist at
/// all.
pub fn partition_bumps(grid: &Grid, kind: PartitionKind) -> Result<BlockPartition> {
    let (band_lo, band_hi) = grid.band();
    let width = band_hi - band_lo;
    if width < 4.0 {
        return Err(Error::BandTooNarrow { width, needed: 4.0 });
    }
    let profile = match kind {
        PartitionKind::Smooth => smooth_profile as fn(f64) -> f64,
        PartitionKind::FlatCenter => flat_profile as fn(f64) -> f64,
    };
    let reach = match kind {
        PartitionKind::Smooth => 1.0,
        PartitionKind::FlatCenter => 0.75,
    };
    let freqs: Vec<f64> = (0..grid.n()).map(|j| grid.freq(j)).collect();
    let f_min = freqs.iter().cloned().fold(f64::INFINITY, f64::min);
    let f_max = freqs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let k_lo = (f_min - reach).ceil() as i64;
    let k_hi = (f_max + reach).floor() as i64;
    let mut centers = Vec::new();
    let mut values = Vec::new();
    for k in k_lo..=k_hi {
        let v: Vec<f64> = freqs.iter().map(|&xi| profile(xi - k as f64)).collect();
        if v.iter().any(|&x| x != 0.0) {
            centers.push(k);
            values.push(v);
        }
    }
    let part = BlockPartition {
        grid: *grid,
        kind,
        centers,
        values,
    };
    part.check_partition()?;
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_profile_shape() {
        assert!((smooth_profile(0.0) - 1.0).abs() < 1e-15);
        assert_eq!(smooth_profile(1.0), 0.0);
        assert_eq!(smooth_profile(-1.2), 0.0);
        // shifts sum to one at arbitrary points
        for &x in &[0.3, 0.5, 0.77, -0.12, 2.341] {
            let s: f64 = (-3..=3).map(|k| smooth_profile(x - k as f64)).sum();
            assert!((s - 1.0).abs() < 1e-14, "sum at {x} was {s}");
        }
    }

    #[test]
    fn flat_profile_shape() {
        assert_eq!(flat_profile(0.0), 1.0);
        assert_eq!(flat_profile(0.25), 1.0);
        assert_eq!(flat_profile(-0.2), 1.0);
        assert_eq!(flat_profile(0.75), 0.0);
        assert_eq!(flat_profile(0.9), 0.0);
        for &x in &[0.3, 0.5, 0.6, -0.45, 1.38] {
            let s: f64 = (-3..=3).map(|k| flat_profile(x - k as f64)).sum();
            assert!((s - 1.0).abs() < 1e-14, "sum at {x} was {s}");
        }
    }

    #[test]
    fn partitions_sum_to_one_on_the_band() {
        for kind in [PartitionKind::Smooth, PartitionKind::FlatCenter] {
            let g = Grid::new(64, 0.125).unwrap();
            let p = partition_bumps(&g, kind).unwrap();
            assert!(p.max_partition_deviation() < 1e-12);
            p.check_partition().unwrap();
        }
    }

    #[test]
    fn smooth_bump_vanishes_outside_its_cell_pair() {
        let g = Grid::new(64, 0.125).unwrap();
        let p = partition_bumps(&g, PartitionKind::Smooth).unwrap();
        let i = p.centers.iter().position(|&k| k == 0).unwrap();
        for (j, &v) in p.block(i).iter().enumerate() {
            if g.freq(j).abs() >= 1.0 {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn flat_variant_is_one_on_cell_core() {
        let g = Grid::new(64, 0.125).unwrap();
        let p = partition_bumps(&g, PartitionKind::FlatCenter).unwrap();
        let i = p.centers.iter().position(|&k| k == 0).unwrap();
        for (j, &v) in p.block(i).iter().enumerate() {
            if g.freq(j).abs() <= 0.25 {
                assert_eq!(v, 1.0);
            }
            if g.freq(j).abs() >= 0.75 {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn narrow_band_is_rejected() {
        let g = Grid::new(8, 0.5).unwrap(); // band width 2
        assert!(matches!(
            partition_bumps(&g, PartitionKind::Smooth),
            Err(Error::BandTooNarrow { .. })
        ));
    }
}
