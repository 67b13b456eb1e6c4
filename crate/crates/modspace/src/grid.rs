//! Sampling grids and signals on the cyclic group of order `n`.
//!
//! A [`Grid`] fixes the number of samples `n`, the sample spacing `dx` and the
//! index of the physical origin. Index `i` sits at coordinate
//! `(i - origin) * dx`; frequency bin `j` carries the physical frequency
//! `c(j) / (n * dx)` where `c(j)` is the centered alias of `j` in
//! `[-n/2, n/2)`. The frequency band is therefore `[-1/(2 dx), 1/(2 dx))`.
//!
//! The forward transform is unnormalized,
//! `F f(j) = sum_t f(t) e^{-2 pi i j t / n}`, and [`idft`] divides by `n`, so
//! `idft(dft(f)) = f` exactly up to roundoff.

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform cyclic sampling grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    dx: f64,
    origin: usize,
}

impl Grid {
    /// Grid with the default origin `n/2` (coordinates straddle zero).
    pub fn new(n: usize, dx: f64) -> Result<Grid> {
        Grid::with_origin(n, dx, n / 2)
    }

    pub fn with_origin(n: usize, dx: f64, origin: usize) -> Result<Grid> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("grid needs n >= 2, got {n}")));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::InvalidParameter(format!("grid needs dx > 0, got {dx}")));
        }
        if origin >= n {
            return Err(Error::InvalidParameter(format!(
                "origin index {origin} out of range for n = {n}"
            )));
        }
        Ok(Grid { n, dx, origin })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    /// Physical coordinate of sample index `i`.
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - self.origin as f64) * self.dx
    }

    /// Centered alias of bin `j`, in `[-n/2, n/2)`.
    pub fn centered_bin(&self, j: usize) -> i64 {
        let half = (self.n / 2) as i64;
        ((j as i64 + half).rem_euclid(self.n as i64)) - half
    }

    /// Physical frequency of bin `j`.
    pub fn freq(&self, j: usize) -> f64 {
        self.centered_bin(j) as f64 / (self.n as f64 * self.dx)
    }

    /// Frequency-bin spacing `1/(n dx)`.
    pub fn bin_spacing(&self) -> f64 {
        1.0 / (self.n as f64 * self.dx)
    }

    /// Half-open frequency band `[-1/(2 dx), 1/(2 dx))`.
    pub fn band(&self) -> (f64, f64) {
        let half = 0.5 / self.dx;
        (-half, half)
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self == other
    }
}

/// A complex signal sampled on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    grid: Grid,
    data: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: Grid, data: Vec<Complex64>) -> Result<Signal> {
        if data.len() != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: data.len(),
            });
        }
        Ok(Signal { grid, data })
    }

    pub fn zero(grid: Grid) -> Signal {
        Signal {
            grid,
            data: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    /// Kronecker delta at index `at`.
    pub fn delta(grid: Grid, at: usize) -> Signal {
        let mut s = Signal::zero(grid);
        s.data[at % grid.n()] = Complex64::new(1.0, 0.0);
        s
    }

    /// Sample a function of the physical coordinate.
    pub fn from_coord_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Signal {
        let data = (0..grid.n()).map(|i| f(grid.coord(i))).collect();
        Signal { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// Counting-measure l2 norm.
    pub fn l2(&self) -> f64 {
        compensated_sum(self.data.iter().map(|z| z.norm_sqr())).sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        Signal {
            grid: self.grid,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// Maximum pointwise modulus of the difference; the grids must agree.
    pub fn max_abs_diff(&self, other: &Signal) -> Result<f64> {
        check_same_grid(self, other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

pub(crate) fn check_same_grid(a: &Signal, b: &Signal) -> Result<()> {
    if !a.grid().same_as(b.grid()) {
        return Err(Error::GridMismatch(format!(
            "n = {} dx = {} vs n = {} dx = {}",
            a.grid().n(),
            a.grid().dx(),
            b.grid().n(),
            b.grid().dx()
        )));
    }
    Ok(())
}

/// Neumaier-compensated sum; summation order is fixed by the iterator, and the
/// compensation keeps results stable under refactoring of call sites.
pub fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn compensated_csum(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut re_sum = 0.0f64;
    let mut re_comp = 0.0f64;
    let mut im_sum = 0.0f64;
    let mut im_comp = 0.0f64;
    for v in values {
        let t = re_sum + v.re;
        if re_sum.abs() >= v.re.abs() {
            re_comp += (re_sum - t) + v.re;
        } else {
            re_comp += (v.re - t) + re_sum;
        }
        re_sum = t;
        let t = im_sum + v.im;
        if im_sum.abs() >= v.im.abs() {
            im_comp += (im_sum - t) + v.im;
        } else {
            im_comp += (v.im - t) + im_sum;
        }
        im_sum = t;
    }
    Complex64::new(re_sum + re_comp, im_sum + im_comp)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan_forward(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn plan_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Unnormalized forward transform `F f(j) = sum_t f(t) e^{-2 pi i j t / n}`.
pub fn dft(f: &Signal) -> Signal {
    let mut data = f.data.clone();
    plan_forward(data.len()).process(&mut data);
    Signal {
        grid: f.grid,
        data,
    }
}

/// Inverse of [`dft`]: `idft(F)(t) = (1/n) sum_j F(j) e^{2 pi i j t / n}`.
pub fn idft(f: &Signal) -> Signal {
    let mut data = f.data.clone();
    plan_inverse(data.len()).process(&mut data);
    let scale = 1.0 / data.len() as f64;
    for z in &mut data {
        *z *= scale;
    }
    Signal {
        grid: f.grid,
        data,
    }
}

pub(crate) fn dft_vec(data: &mut Vec<Complex64>) {
    plan_forward(data.len()).process(data);
}

pub(crate) fn idft_vec(data: &mut Vec<Complex64>) {
    plan_inverse(data.len()).process(data);
    let scale = 1.0 / data.len() as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
}

/// Cyclic translation: `(translate(f, y))(t) = f(t - y)`.
pub fn translate(f: &Signal, y: i64) -> Signal {
    let n = f.grid.n() as i64;
    let data = (0..n)
        .map(|t| f.data[(t - y).rem_euclid(n) as usize])
        .collect();
    Signal {
        grid: f.grid,
        data,
    }
}

/// Modulation by bin `k`: `(modulate(f, k))(t) = e^{2 pi i k t / n} f(t)`.
pub fn modulate(f: &Signal, k: i64) -> Signal {
    let n = f.grid.n() as f64;
    let data = f
        .data
        .iter()
        .enumerate()
        .map(|(t, z)| z * phase(k as f64 * t as f64 / n))
        .collect();
    Signal {
        grid: f.grid,
        data,
    }
}

/// `e^{2 pi i w}`.
pub(crate) fn phase(w: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * w).sin_cos();
    Complex64::new(c, s)
}

/// Dilation `f(lambda x)` for rational `lambda = num/den > 0`.
///
/// Band-limited interpolation: the centered spectrum is zero-padded by `den`
/// (refining the grid), and the refined samples are read back at stride `num`
/// so the output at index `i` is the interpolant evaluated at
/// `lambda * coord(i)`. The reduction of `num/den` must have both factors
/// dividing `n`; this keeps every read an exact refined-sample index.
/// Exact for inputs whose spectrum stays inside the band under the map
/// `c -> lambda c`; otherwise the out-of-band images alias.
pub fn dilate(f: &Signal, num: u64, den: u64) -> Result<Signal> {
    if num == 0 || den == 0 {
        return Err(Error::InvalidParameter(
            "dilation factor must be a positive rational".into(),
        ));
    }
    let g = gcd(num, den);
    let (u, v) = (num / g, den / g);
    let n = f.grid.n();
    if n as u64 % u != 0 || n as u64 % v != 0 {
        return Err(Error::IncompatibleDilation { num: u, den: v, n });
    }
    if u == 1 && v == 1 {
        return Ok(f.clone());
    }
    let spec = dft(f);
    let nv = n * v as usize;
    let mut refined = vec![Complex64::new(0.0, 0.0); nv];
    for j in 0..n {
        let c = f.grid.centered_bin(j);
        let idx = c.rem_euclid(nv as i64) as usize;
        refined[idx] = spec.data[j] * v as f64;
    }
    idft_vec(&mut refined);
    let o = f.grid.origin() as i64;
    let data = (0..n as i64)
        .map(|i| {
            let m = (u as i64 * (i - o) + v as i64 * o).rem_euclid(nv as i64) as usize;
            refined[m]
        })
        .collect();
    Ok(Signal {
        grid: f.grid,
        data,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Counting-measure inner product `sum_t f(t) conj(h(t))`.
/// Multiply by `dx` for the continuum-weighted variant.
pub fn inner(f: &Signal, h: &Signal) -> Result<Complex64> {
    check_same_grid(f, h)?;
    Ok(compensated_csum(
        f.data.iter().zip(&h.data).map(|(a, b)| a * b.conj()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(f: &Signal) -> Vec<Complex64> {
        let n = f.grid().n();
        (0..n)
            .map(|j| {
                compensated_csum((0..n).map(|t| {
                    f.data()[t] * phase(-(j as f64) * t as f64 / n as f64)
                }))
            })
            .collect()
    }

    fn noise(grid: Grid, seed: u64) -> Signal {
        let r = crate::rng::CounterRng::new(seed, 0);
        Signal::new(
            grid,
            (0..grid.n() as u64)
                .map(|i| Complex64::new(r.normal_at(2 * i), r.normal_at(2 * i + 1)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn freq_layout_n8() {
        let g = Grid::new(8, 0.5).unwrap();
        let bins: Vec<i64> = (0..8).map(|j| g.centered_bin(j)).collect();
        assert_eq!(bins, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert!((g.freq(1) - 0.25).abs() < 1e-15);
        assert_eq!(g.band(), (-1.0, 1.0));
        assert!((g.coord(4) - 0.0).abs() < 1e-15);
        assert!((g.coord(0) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn dft_matches_naive_sum() {
        for n in [8usize, 12, 37] {
            let g = Grid::new(n, 0.25).unwrap();
            let f = noise(g, n as u64);
            let fast = dft(&f);
            let slow = naive_dft(&f);
            for (a, b) in fast.data().iter().zip(&slow) {
                assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn idft_inverts_dft() {
        let g = Grid::new(64, 0.1).unwrap();
        let f = noise(g, 5);
        let back = idft(&dft(&f));
        assert!(f.max_abs_diff(&back).unwrap() < 1e-12);
    }

    #[test]
    fn delta_transforms_flat() {
        let g = Grid::new(16, 1.0).unwrap();
        let spec = dft(&Signal::delta(g, 0));
        for z in spec.data() {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn translation_becomes_modulation_under_dft() {
        let g = Grid::new(32, 0.5).unwrap();
        let f = noise(g, 11);
        let y = 5i64;
        let lhs = dft(&translate(&f, y));
        let rhs = modulate(&dft(&f), -y);
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
    }

    #[test]
    fn modulation_translates_spectrum() {
        let g = Grid::new(32, 0.5).unwrap();
        let f = noise(g, 12);
        let k = 7i64;
        let lhs = dft(&modulate(&f, k));
        let rhs = translate(&dft(&f), k);
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
    }

    #[test]
    fn parseval_holds() {
        let g = Grid::new(48, 0.2).unwrap();
        let f = noise(g, 21);
        let h = noise(g, 22);
        let time = inner(&f, &h).unwrap();
        let freq = inner(&dft(&f), &dft(&h)).unwrap() / g.n() as f64;
        assert!((time - freq).norm() < 1e-10 * (1.0 + time.norm()));
    }

    #[test]
    fn dilation_identity_and_character_doubling() {
        let g = Grid::new(16, 1.0).unwrap();
        let f = noise(g, 3);
        assert!(f.max_abs_diff(&dilate(&f, 3, 3).unwrap()).unwrap() < 1e-15);

        // physical character at frequency nu -> character at 2 nu
        let nu = g.freq(3);
        let ch = Signal::from_coord_fn(g, |x| phase(nu * x));
        let doubled = dilate(&ch, 2, 1).unwrap();
        let expect = Signal::from_coord_fn(g, |x| phase(2.0 * nu * x));
        assert!(doubled.max_abs_diff(&expect).unwrap() < 1e-10);
    }

    #[test]
    fn dilation_halves_gaussian_width() {
        let g = Grid::new(256, 0.05).unwrap();
        let s = 0.7f64;
        let gauss =
            Signal::from_coord_fn(g, |x| Complex64::new((-std::f64::consts::PI * (x / s).powi(2)).exp(), 0.0));
        let wide = dilate(&gauss, 1, 2).unwrap();
        let direct = Signal::from_coord_fn(g, |x| {
            Complex64::new((-std::f64::consts::PI * (0.5 * x / s).powi(2)).exp(), 0.0)
        });
        assert!(wide.max_abs_diff(&direct).unwrap() < 1e-6);
    }

    #[test]
    fn dilation_round_trips_on_band_limited_input() {
        let g = Grid::new(64, 0.25).unwrap();
        // spectrum confined to |c| < n/4 so doubling stays in band
        let mut spec = Signal::zero(g);
        let r = crate::rng::CounterRng::new(77, 1);
        for j in 0..g.n() {
            if g.centered_bin(j).abs() < (g.n() / 4) as i64 {
                spec.data_mut()[j] = Complex64::new(r.normal_at(j as u64), r.normal_at(100 + j as u64));
            }
        }
        let f = idft(&spec);
        let there = dilate(&f, 2, 1).unwrap();
        let back = dilate(&there, 1, 2).unwrap();
        assert!(f.max_abs_diff(&back).unwrap() < 1e-10);
    }

    #[test]
    fn incompatible_dilation_is_rejected() {
        let g = Grid::new(16, 1.0).unwrap();
        let f = noise(g, 1);
        match dilate(&f, 3, 2) {
            Err(Error::IncompatibleDilation { num: 3, den: 2, n: 16 }) => {}
            other => panic!("expected IncompatibleDilation, got {other:?}"),
        }
    }

    #[test]
    fn inner_requires_matching_grids() {
        let a = Signal::zero(Grid::new(8, 1.0).unwrap());
        let b = Signal::zero(Grid::new(8, 0.5).unwrap());
        assert!(matches!(inner(&a, &b), Err(Error::GridMismatch(_))));
    }
}
