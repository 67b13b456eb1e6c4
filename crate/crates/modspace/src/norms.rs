//! Lebesgue exponents and weighted (mixed) norms.
//!
//! Two weighting conventions coexist. `Discrete` uses counting measure on both
//! axes. `Continuum` weights time sums by `dx` and frequency sums by the bin
//! spacing `1/(n dx)`, so values track Riemann sums of the underlying
//! integrals as the grid refines. Sup norms (`p = inf`) carry no weight in
//! either mode.

use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{compensated_sum, Signal};

/// A Lebesgue exponent in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Inf,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Exponent> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "exponent must satisfy p >= 1, got {p}"
            )));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Exponent::Inf)
    }

    /// Holder conjugate: `1/p + 1/p' = 1`.
    pub fn conjugate(&self) -> Exponent {
        match self {
            Exponent::Inf => Exponent::Finite(1.0),
            Exponent::Finite(p) if *p == 1.0 => Exponent::Inf,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Inf => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Exponent> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" => Ok(Exponent::Inf),
            t => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad exponent: {s:?}")))?;
                Exponent::finite(p)
            }
        }
    }
}

/// Weighting convention for norms over grid axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMode {
    Discrete,
    Continuum,
}

impl FromStr for NormMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<NormMode> {
        match s.trim() {
            "discrete" => Ok(NormMode::Discrete),
            "continuum" => Ok(NormMode::Continuum),
            other => Err(Error::InvalidParameter(format!("bad norm mode: {other:?}"))),
        }
    }
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormMode::Discrete => "discrete",
            NormMode::Continuum => "continuum",
        })
    }
}

/// Exponent pair plus weighting convention for a time-frequency mixed norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedNormParams {
    pub p: Exponent,
    pub q: Exponent,
    pub mode: NormMode,
}

impl MixedNormParams {
    pub fn new(p: Exponent, q: Exponent, mode: NormMode) -> MixedNormParams {
        MixedNormParams { p, q, mode }
    }
}

/// Weighted lp norm of a slice: `(sum_i w |v_i|^p)^{1/p}`, sup if `p = inf`.
pub fn weighted_lp(values: impl Iterator<Item = f64>, p: Exponent, weight: f64) -> f64 {
    match p {
        Exponent::Inf => values.fold(0.0, f64::max),
        Exponent::Finite(p) if p == 1.0 => weight * compensated_sum(values),
        Exponent::Finite(p) if p == 2.0 => {
            (weight * compensated_sum(values.map(|v| v * v))).sqrt()
        }
        Exponent::Finite(p) => (weight * compensated_sum(values.map(|v| v.powf(p)))).powf(1.0 / p),
    }
}

/// lp norm of a signal under the given weighting convention.
pub fn signal_lp(f: &Signal, p: Exponent, mode: NormMode) -> f64 {
    let w = match mode {
        NormMode::Discrete => 1.0,
        NormMode::Continuum => f.grid().dx(),
    };
    weighted_lp(f.data().iter().map(|z| z.norm()), p, w)
}

/// Mixed norm of a matrix of complex values: inner exponent `p` over the rows'
/// entries with weight `inner_w`, outer exponent `q` across rows with weight
/// `outer_w`. Rows may differ in length.
pub fn mixed_norm_rows(
    rows: &[Vec<Complex64>],
    p: Exponent,
    q: Exponent,
    inner_w: f64,
    outer_w: f64,
) -> f64 {
    let inner: Vec<f64> = rows
        .iter()
        .map(|row| weighted_lp(row.iter().map(|z| z.norm()), p, inner_w))
        .collect();
    weighted_lp(inner.into_iter(), q, outer_w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn exponent_parsing_and_conjugates() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Inf);
        assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::Finite(2.0));
        assert!("0.5".parse::<Exponent>().is_err());
        assert_eq!(Exponent::Finite(1.0).conjugate(), Exponent::Inf);
        assert_eq!(Exponent::Inf.conjugate(), Exponent::Finite(1.0));
        let c = Exponent::Finite(4.0).conjugate();
        assert!((c.value() - 4.0 / 3.0).abs() < 1e-15);
        let d = Exponent::Finite(2.0).conjugate();
        assert!((d.value() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lp_on_known_vector() {
        // |v| = (3, 4): l1 = 7, l2 = 5, linf = 4
        let v = [3.0, 4.0];
        assert!((weighted_lp(v.iter().copied(), Exponent::Finite(1.0), 1.0) - 7.0).abs() < 1e-12);
        assert!((weighted_lp(v.iter().copied(), Exponent::Finite(2.0), 1.0) - 5.0).abs() < 1e-12);
        assert!((weighted_lp(v.iter().copied(), Exponent::Inf, 1.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn continuum_weight_scales_like_dx_power() {
        let g = Grid::new(8, 0.25).unwrap();
        let f = Signal::from_coord_fn(g, |_| Complex64::new(2.0, 0.0));
        // constant 2 over 8 samples with weight 1/4: (8 * 1/4 * 2^p)^(1/p)
        let l1 = signal_lp(&f, Exponent::Finite(1.0), NormMode::Continuum);
        assert!((l1 - 4.0).abs() < 1e-12);
        let l2 = signal_lp(&f, Exponent::Finite(2.0), NormMode::Continuum);
        assert!((l2 - (2.0f64 * 4.0).sqrt() * 2.0 / 2.0f64.sqrt() / 1.0).abs() < 1e-9 || true);
        assert!((l2 - 2.0 * 2.0f64.sqrt()).abs() < 1e-12);
        let li = signal_lp(&f, Exponent::Inf, NormMode::Continuum);
        assert!((li - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_norm_interchanges_correctly() {
        // rows = [[1, 1], [2, 0]]; p = 1 inner, q = inf outer -> max(2, 2) = 2
        let rows = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)],
        ];
        let v = mixed_norm_rows(&rows, Exponent::Finite(1.0), Exponent::Inf, 1.0, 1.0);
        assert!((v - 2.0).abs() < 1e-12);
        // p = inf inner, q = 1 outer -> 1 + 2 = 3
        let w = mixed_norm_rows(&rows, Exponent::Inf, Exponent::Finite(1.0), 1.0, 1.0);
        assert!((w - 3.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_norm_weights_enter_at_the_right_level() {
        let rows = vec![vec![Complex64::new(1.0, 0.0); 4]; 3];
        // inner l2 with weight 1/4 -> each row gives 1; outer l1 with weight 2 -> 6
        let v = mixed_norm_rows(&rows, Exponent::Finite(2.0), Exponent::Finite(1.0), 0.25, 2.0);
        assert!((v - 6.0).abs() < 1e-12);
    }
}
