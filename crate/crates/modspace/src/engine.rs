//! Application of symbols: Fourier multipliers, square functions, randomized
//! block multipliers, Rademacher moment estimators and the l2-vector
//! extension of a multiplier.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{dft, idft, Grid, Signal};
use crate::norms::Exponent;
use crate::partition::BlockPartition;
use crate::probe::{opnorm_probe, NormSpec, ProbeBudget, ProbeOp};
use crate::rng::CounterRng;
use crate::symbols::{sym_block_sum, IntervalCollection, Symbol};

/// `T_m f = idft(m . dft f)`.
pub fn apply_multiplier(m: &Symbol, f: &Signal) -> Result<Signal> {
    if !m.grid().same_as(f.grid()) {
        return Err(Error::GridMismatch(
            "symbol and signal live on different grids".into(),
        ));
    }
    let spec = dft(f);
    let data: Vec<Complex64> = spec
        .data()
        .iter()
        .zip(m.values())
        .map(|(z, v)| z * v)
        .collect();
    Ok(idft(&Signal::new(*f.grid(), data)?))
}

/// Band restrictions `{S_{omega} f}` over the members of a collection. Every
/// member must span at least two bins so the discrete indicator faithfully
/// represents the interval.
pub fn square_function(collection: &IntervalCollection, f: &Signal) -> Result<Vec<Signal>> {
    collection.check_resolved(f.grid())?;
    let spec = dft(f);
    Ok(collection
        .intervals()
        .iter()
        .map(|iv| {
            let data: Vec<Complex64> = (0..f.grid().n())
                .map(|j| {
                    if iv.contains(f.grid().freq(j)) {
                        spec.data()[j]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            idft(&Signal::new(*f.grid(), data).unwrap())
        })
        .collect())
}

/// A reproducible vector of independent signs, keyed by `(seed, index)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RademacherDraw {
    signs: Vec<f64>,
    seed: u64,
    index: u64,
}

impl RademacherDraw {
    pub fn new(seed: u64, index: u64, len: usize) -> RademacherDraw {
        let r = CounterRng::new(seed, index ^ 0x52ad);
        RademacherDraw {
            signs: (0..len as u64).map(|n| r.sign_at(n)).collect(),
            seed,
            index,
        }
    }

    /// Explicit signs, for exhaustive enumeration of patterns.
    pub fn from_signs(signs: Vec<f64>, seed: u64, index: u64) -> RademacherDraw {
        debug_assert!(signs.iter().all(|s| *s == 1.0 || *s == -1.0));
        RademacherDraw { signs, seed, index }
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn coeffs(&self) -> Vec<Complex64> {
        self.signs.iter().map(|&s| Complex64::new(s, 0.0)).collect()
    }
}

/// Block multiplier with the draw's signs as coefficients.
pub fn randomized_block_multiplier(
    collection: &IntervalCollection,
    draw: &RademacherDraw,
    grid: &Grid,
) -> Result<Symbol> {
    if draw.len() < collection.len() {
        return Err(Error::LengthMismatch {
            expected: collection.len(),
            got: draw.len(),
        });
    }
    sym_block_sum(collection, &draw.coeffs()[..collection.len()], grid)
}

/// Maximum count for exact enumeration of sign patterns.
const EXACT_ENUM_LIMIT: usize = 20;

/// `( E |sum_n eps_n b_n|^p )^{1/p}` over independent signs: exact
/// enumeration of all `2^len` patterns when `draws == 0`, Monte Carlo with
/// `draws` samples otherwise.
pub fn khintchine_estimate(b: &[Complex64], p: f64, draws: usize, seed: u64) -> Result<f64> {
    if b.is_empty() {
        return Err(Error::EmptyList);
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "moment order must satisfy p >= 1, got {p}"
        )));
    }
    if draws == 0 {
        if b.len() > EXACT_ENUM_LIMIT {
            return Err(Error::EnumerationTooLarge(b.len()));
        }
        let n = b.len();
        let total = 1usize << n;
        let mean = crate::grid::compensated_sum((0..total).map(|mask| {
            let mut s = Complex64::new(0.0, 0.0);
            for (i, z) in b.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s += z;
                } else {
                    s -= z;
                }
            }
            s.norm().powf(p)
        })) / total as f64;
        Ok(mean.powf(1.0 / p))
    } else {
        let mean = crate::grid::compensated_sum((0..draws).map(|r| {
            let rng = CounterRng::new(seed, r as u64);
            let mut s = Complex64::new(0.0, 0.0);
            for (i, z) in b.iter().enumerate() {
                s += z * rng.sign_at(i as u64);
            }
            s.norm().powf(p)
        })) / draws as f64;
        Ok(mean.powf(1.0 / p))
    }
}

/// Elementwise multiplier application to a signal list.
pub fn mz_extend(m: &Symbol, fs: &[Signal]) -> Result<Vec<Signal>> {
    fs.iter().map(|f| apply_multiplier(m, f)).collect()
}

/// Amalgam-style multiplier size: the maximum over the partition's bumps of
/// the probed `L^p -> L^p` operator norm of the localized multiplier
/// `phi_k . sigma`. Independent of any outer exponent by construction. A
/// lower bound, like every probe value.
pub fn amalgam_multiplier_probe(
    sigma: &Symbol,
    p: Exponent,
    part: &BlockPartition,
    hint: Option<&IntervalCollection>,
    budget: &ProbeBudget,
    seed: u64,
) -> Result<f64> {
    if !sigma.grid().same_as(part.grid()) {
        return Err(Error::GridMismatch(
            "symbol and partition live on different grids".into(),
        ));
    }
    let sup = sigma.sup_norm();
    if sup == 0.0 {
        return Ok(0.0);
    }
    let spec = NormSpec::lp(p, crate::norms::NormMode::Discrete);
    let mut best = 0.0f64;
    for k in 0..part.len() {
        let values: Vec<Complex64> = sigma
            .values()
            .iter()
            .zip(part.block(k))
            .map(|(z, &m)| z * m)
            .collect();
        if values.iter().all(|z| z.norm() <= 1e-13 * sup) {
            continue;
        }
        let masked = Symbol::new(
            *sigma.grid(),
            values,
            format!("{} . bump[{}]", sigma.label(), part.center(k)),
        )?;
        let mut op = ProbeOp::multiplier(&masked);
        if let Some(h) = hint {
            op = op.with_intervals(h.clone());
        }
        let est = opnorm_probe(&op, &spec, &spec, budget, seed ^ (k as u64) << 8)?;
        if est.value > best {
            best = est.value;
        }
    }
    Ok(best)
}
