//! Short-time Fourier transform on the cyclic group, with its equivalent
//! computational forms, the orthogonality relation and synthesis/inversion.
//!
//! With the unnormalized transform, the cyclic versions of the continuum
//! identities pick up explicit factors of `n`; every operation here states its
//! factor in the doc comment and the tests pin them down.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{
    check_same_grid, compensated_csum, dft, phase, Grid, Signal,
};
use crate::norms::{mixed_norm_rows, MixedNormParams, NormMode};

/// A nonzero analysis/synthesis window with its cached l2 norm.
#[derive(Clone, Debug)]
pub struct Window {
    signal: Signal,
    l2: f64,
}

impl Window {
    pub fn new(signal: Signal) -> Result<Window> {
        let l2 = signal.l2();
        if l2 == 0.0 {
            return Err(Error::ZeroWindow);
        }
        Ok(Window { signal, l2 })
    }

    /// Periodized unit-l2 Gaussian `exp(-pi (x/s)^2)` with `s = n dx / 8`.
    /// The width tracks the grid extent, so the window stays equally
    /// concentrated (16 sigma across the period) at every resolution.
    pub fn gaussian(grid: Grid) -> Window {
        let period = grid.n() as f64 * grid.dx();
        let s = period / 8.0;
        let f = Signal::from_coord_fn(grid, |x| {
            let v: f64 = (-1..=1)
                .map(|r| {
                    let y = (x + r as f64 * period) / s;
                    (-std::f64::consts::PI * y * y).exp()
                })
                .sum();
            Complex64::new(v, 0.0)
        });
        let l2 = f.l2();
        Window {
            signal: f.scale(Complex64::new(1.0 / l2, 0.0)),
            l2: 1.0,
        }
    }

    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn grid(&self) -> &Grid {
        self.signal.grid()
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }
}

/// Time-frequency coefficient matrix: `rows[x][xi]` is the coefficient at
/// time shift `x` and frequency bin `xi`.
#[derive(Clone, Debug)]
pub struct TFMatrix {
    grid: Grid,
    rows: Vec<Vec<Complex64>>,
}

impl TFMatrix {
    pub fn new(grid: Grid, rows: Vec<Vec<Complex64>>) -> Result<TFMatrix> {
        if rows.len() != grid.n() || rows.iter().any(|r| r.len() != grid.n()) {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                got: rows.len(),
            });
        }
        Ok(TFMatrix { grid, rows })
    }

    pub fn zero(grid: Grid) -> TFMatrix {
        TFMatrix {
            grid,
            rows: vec![vec![Complex64::new(0.0, 0.0); grid.n()]; grid.n()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn entry(&self, x: usize, xi: usize) -> Complex64 {
        self.rows[x][xi]
    }

    pub fn row(&self, x: usize) -> &[Complex64] {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    /// `sum_{x, xi} |V(x, xi)|^2`.
    pub fn energy(&self) -> f64 {
        crate::grid::compensated_sum(
            self.rows.iter().flat_map(|r| r.iter().map(|z| z.norm_sqr())),
        )
    }

    /// Frobenius-style maximum entrywise deviation.
    pub fn max_abs_diff(&self, other: &TFMatrix) -> f64 {
        self.rows
            .iter()
            .zip(&other.rows)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    /// Mixed norm with the inner exponent over the time shift `x` and the
    /// outer exponent over the frequency bin `xi`. Continuum mode weights the
    /// time sum by `dx` and the frequency sum by the bin spacing.
    pub fn mixed_norm(&self, params: MixedNormParams) -> f64 {
        let n = self.grid.n();
        let (inner_w, outer_w) = match params.mode {
            NormMode::Discrete => (1.0, 1.0),
            NormMode::Continuum => (self.grid.dx(), self.grid.bin_spacing()),
        };
        // columns of `rows` are the inner axis: regroup per frequency bin
        let cols: Vec<Vec<Complex64>> = (0..n)
            .map(|xi| (0..n).map(|x| self.rows[x][xi]).collect())
            .collect();
        mixed_norm_rows(&cols, params.p, params.q, inner_w, outer_w)
    }
}

/// `V(x, xi) = sum_t f(t) conj(g(t - x)) e^{-2 pi i xi t / n}`, one length-n
/// transform per time shift.
pub fn stft(f: &Signal, g: &Window) -> Result<TFMatrix> {
    check_same_grid(f, g.signal())?;
    let n = f.grid().n();
    let gd = g.signal().data();
    let rows = (0..n)
        .map(|x| {
            let mut w: Vec<Complex64> = (0..n)
                .map(|t| f.data()[t] * gd[(t + n - x) % n].conj())
                .collect();
            crate::grid::dft_vec(&mut w);
            w
        })
        .collect();
    Ok(TFMatrix {
        grid: *f.grid(),
        rows,
    })
}

/// The equivalent ways of computing the same coefficient matrix.
///
/// Each variant takes a genuinely different numerical route, so agreement
/// between any two is a strong correctness check on all the grid conventions
/// involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StftForm {
    /// Inner product against shifted/modulated spectra: for each bin `xi`,
    /// `V(x, xi) = e^{-2 pi i x xi / n} idft(F conj(G(. - xi)))(x)` where
    /// `F, G` are the spectra of `f, g`. Carries the factor `1/n` relative to
    /// the spectral inner product.
    SpectralInner,
    /// Direct summation of the defining windowed transform, no FFT involved.
    WindowedDirect,
    /// Transform-domain recursion: run the transform on the spectra and read
    /// it back with swapped, negated arguments and a phase,
    /// `V(x, xi) = (1/n) e^{-2 pi i x xi / n} W(xi, -x)` for `W` the
    /// coefficient matrix of the spectra.
    TransformPair,
    /// Literal time-domain convolution against the modulated involution
    /// `g#(y) = conj(g(-y))`:
    /// `V(x, xi) = e^{-2 pi i x xi / n} (f conv M_xi g#)(x)`.
    TimeConvolution,
    /// Literal frequency-domain convolution against the involution of the
    /// window spectrum: `V(x, xi) = (1/n) (F conv M_{-x} G#)(xi)` with
    /// `G#(j) = conj(G(-j))`.
    SpectralConvolution,
    /// Centered (ambiguity-style) parameterization via half shifts
    /// `t -> t + x/2`, available on even-length grids. Half shifts are grid
    /// points only for even `x`; odd rows fall back to the windowed route.
    HalfShift,
}

/// Compute the coefficient matrix along the route selected by `form`. All
/// forms agree with [`stft`] to roundoff.
pub fn stft_alternate(f: &Signal, g: &Window, form: StftForm) -> Result<TFMatrix> {
    check_same_grid(f, g.signal())?;
    let grid = *f.grid();
    let n = grid.n();
    let nf = n as f64;
    match form {
        StftForm::SpectralInner => {
            let ff = dft(f);
            let gg = dft(g.signal());
            let rows_by_xi: Vec<Vec<Complex64>> = (0..n)
                .map(|xi| {
                    let mut h: Vec<Complex64> = (0..n)
                        .map(|j| ff.data()[j] * gg.data()[(j + n - xi) % n].conj())
                        .collect();
                    crate::grid::idft_vec(&mut h);
                    (0..n)
                        .map(|x| h[x] * phase(-(x as f64) * xi as f64 / nf))
                        .collect()
                })
                .collect();
            let rows = (0..n)
                .map(|x| (0..n).map(|xi| rows_by_xi[xi][x]).collect())
                .collect();
            Ok(TFMatrix { grid, rows })
        }
        StftForm::WindowedDirect => {
            let gd = g.signal().data();
            let rows = (0..n)
                .map(|x| {
                    (0..n)
                        .map(|xi| {
                            compensated_csum((0..n).map(|t| {
                                f.data()[t]
                                    * gd[(t + n - x) % n].conj()
                                    * phase(-(xi as f64) * t as f64 / nf)
                            }))
                        })
                        .collect()
                })
                .collect();
            Ok(TFMatrix { grid, rows })
        }
        StftForm::TransformPair => {
            let ff = dft(f);
            let gg = Window::new(dft(g.signal()))?;
            let w = stft(&ff, &gg)?;
            let rows = (0..n)
                .map(|x| {
                    (0..n)
                        .map(|xi| {
                            w.entry(xi, (n - x) % n)
                                * phase(-(x as f64) * xi as f64 / nf)
                                / nf
                        })
                        .collect()
                })
                .collect();
            Ok(TFMatrix { grid, rows })
        }
        StftForm::TimeConvolution => {
            let gd = g.signal().data();
            let rows = (0..n)
                .map(|x| {
                    (0..n)
                        .map(|xi| {
                            // (f conv h)(x) with h(u) = e^{2 pi i xi u / n} conj(g(-u))
                            let conv = compensated_csum((0..n).map(|y| {
                                let u = (x + n - y) % n;
                                f.data()[y]
                                    * phase(xi as f64 * u as f64 / nf)
                                    * gd[(n - u) % n].conj()
                            }));
                            conv * phase(-(x as f64) * xi as f64 / nf)
                        })
                        .collect()
                })
                .collect();
            Ok(TFMatrix { grid, rows })
        }
        StftForm::SpectralConvolution => {
            let ff = dft(f);
            let gg = dft(g.signal());
            let rows = (0..n)
                .map(|x| {
                    (0..n)
                        .map(|xi| {
                            // (F conv v)(xi), v(u) = e^{-2 pi i x u / n} conj(G(-u))
                            let conv = compensated_csum((0..n).map(|j| {
                                let u = (xi + n - j) % n;
                                ff.data()[j]
                                    * phase(-(x as f64) * u as f64 / nf)
                                    * gg.data()[(n - u) % n].conj()
                            }));
                            conv / nf
                        })
                        .collect()
                })
                .collect();
            Ok(TFMatrix { grid, rows })
        }
        StftForm::HalfShift => {
            if n % 2 != 0 {
                return Err(Error::OddLengthAmbiguity(n));
            }
            let gd = g.signal().data();
            let mut rows = vec![Vec::new(); n];
            for x in 0..n {
                if x % 2 == 0 {
                    let h = x / 2;
                    let mut u: Vec<Complex64> = (0..n)
                        .map(|t| f.data()[(t + h) % n] * gd[(t + n - h) % n].conj())
                        .collect();
                    crate::grid::dft_vec(&mut u);
                    rows[x] = (0..n)
                        .map(|xi| u[xi] * phase(-(h as f64) * xi as f64 / nf))
                        .collect();
                } else {
                    // odd shifts have no grid-point half shift; use the
                    // windowed route for those rows
                    let mut w: Vec<Complex64> = (0..n)
                        .map(|t| f.data()[t] * gd[(t + n - x) % n].conj())
                        .collect();
                    crate::grid::dft_vec(&mut w);
                    rows[x] = w;
                }
            }
            Ok(TFMatrix { grid, rows })
        }
    }
}

/// Synthesis over the full lattice:
/// `out(t) = sum_{x, xi} V(x, xi) e^{2 pi i xi t / n} g(t - x)`.
pub fn stft_adjoint(v: &TFMatrix, g: &Window) -> Result<Signal> {
    if !v.grid().same_as(g.grid()) {
        return Err(Error::GridMismatch(format!(
            "coefficient matrix n = {} vs window n = {}",
            v.n(),
            g.grid().n()
        )));
    }
    let grid = *v.grid();
    let n = grid.n();
    let gd = g.signal().data();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n {
        // inner sum over xi is n times the inverse transform of the row
        let mut w = v.row(x).to_vec();
        crate::grid::idft_vec(&mut w);
        for t in 0..n {
            out[t] += w[t] * n as f64 * gd[(t + n - x) % n];
        }
    }
    Signal::new(grid, out)
}

/// Invert the analysis `v = stft(f, g1)` using a second window:
/// `f = stft_adjoint(v, g2) / (n conj(<g1, g2>))`. The windows may differ as
/// long as they are not orthogonal.
pub fn stft_invert(v: &TFMatrix, g1: &Window, g2: &Window) -> Result<Signal> {
    let ip = crate::grid::inner(g1.signal(), g2.signal())?;
    if ip.norm() == 0.0 {
        return Err(Error::InvalidParameter(
            "analysis and synthesis windows are orthogonal".into(),
        ));
    }
    let s = stft_adjoint(v, g2)?;
    Ok(s.scale(Complex64::new(1.0, 0.0) / (ip.conj() * v.n() as f64)))
}

/// Deviation in the pairing identity
/// `<V_{g1} f1, V_{g2} f2> = n <f1, f2> conj(<g1, g2>)`; the factor `n` is
/// the cyclic analogue of the continuum constant 1.
pub fn check_orthogonality(
    f1: &Signal,
    f2: &Signal,
    g1: &Window,
    g2: &Window,
) -> Result<f64> {
    let v1 = stft(f1, g1)?;
    let v2 = stft(f2, g2)?;
    let lhs = compensated_csum(
        v1.rows
            .iter()
            .zip(&v2.rows)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y.conj())),
    );
    let rhs = crate::grid::inner(f1, f2)? * crate::grid::inner(g1.signal(), g2.signal())?.conj()
        * f1.grid().n() as f64;
    Ok((lhs - rhs).norm())
}

/// Scale of the pairing identity, for relative tolerance checks.
pub fn orthogonality_scale(f1: &Signal, f2: &Signal, g1: &Window, g2: &Window) -> f64 {
    f1.grid().n() as f64 * f1.l2() * f2.l2() * g1.l2() * g2.l2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inner, modulate};
    use crate::norms::Exponent;
    use crate::rng::CounterRng;

    fn noise(grid: Grid, seed: u64) -> Signal {
        let r = CounterRng::new(seed, 0);
        Signal::new(
            grid,
            (0..grid.n() as u64)
                .map(|i| Complex64::new(r.normal_at(2 * i), r.normal_at(2 * i + 1)))
                .collect(),
        )
        .unwrap()
    }

    fn naive_stft(f: &Signal, g: &Window) -> TFMatrix {
        let n = f.grid().n();
        let rows = (0..n)
            .map(|x| {
                (0..n)
                    .map(|xi| {
                        compensated_csum((0..n).map(|t| {
                            f.data()[t]
                                * g.signal().data()[(t + n - x) % n].conj()
                                * phase(-(xi as f64) * t as f64 / n as f64)
                        }))
                    })
                    .collect()
            })
            .collect();
        TFMatrix::new(*f.grid(), rows).unwrap()
    }

    #[test]
    fn matches_naive_triple_loop() {
        let g = Grid::new(16, 0.5).unwrap();
        let f = noise(g, 1);
        let w = Window::new(noise(g, 2)).unwrap();
        let fast = stft(&f, &w).unwrap();
        let slow = naive_stft(&f, &w);
        assert!(fast.max_abs_diff(&slow) < 1e-12 * (1.0 + fast.energy().sqrt()));
    }

    #[test]
    fn delta_window_concentrates_on_zero_shift() {
        let g = Grid::new(8, 1.0).unwrap();
        let d = Signal::delta(g, 0);
        let w = Window::new(d.clone()).unwrap();
        let v = stft(&d, &w).unwrap();
        // only the x = 0 shift aligns the two deltas, and the surviving
        // sample sits at t = 0 so every frequency sees coefficient 1
        for x in 0..8 {
            for xi in 0..8 {
                let got = v.entry(x, xi);
                if x == 0 {
                    assert!((got - Complex64::new(1.0, 0.0)).norm() < 1e-12);
                } else {
                    assert!(got.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn energy_identity_with_factor_n() {
        let g = Grid::new(64, 0.125).unwrap();
        let w = Window::gaussian(g);
        let f = w.signal().clone();
        let v = stft(&f, &w).unwrap();
        let expect = 64.0 * f.l2().powi(2) * w.l2().powi(2);
        assert!((v.energy() - expect).abs() < 1e-8 * expect);

        let fr = noise(g, 9);
        let vr = stft(&fr, &w).unwrap();
        let er = 64.0 * fr.l2().powi(2);
        assert!((vr.energy() - er).abs() < 1e-8 * er);
    }

    #[test]
    fn all_forms_agree_even_length() {
        let g = Grid::new(32, 0.25).unwrap();
        let f = noise(g, 31);
        let w = Window::new(noise(g, 32)).unwrap();
        let base = stft(&f, &w).unwrap();
        let scale = 1.0 + base.energy().sqrt();
        for form in [
            StftForm::SpectralInner,
            StftForm::WindowedDirect,
            StftForm::TransformPair,
            StftForm::TimeConvolution,
            StftForm::SpectralConvolution,
            StftForm::HalfShift,
        ] {
            let alt = stft_alternate(&f, &w, form).unwrap();
            let dev = base.max_abs_diff(&alt);
            assert!(dev < 1e-10 * scale, "{form:?} deviated by {dev}");
        }
    }

    #[test]
    fn forms_agree_on_odd_length_except_half_shift() {
        let g = Grid::new(15, 0.5).unwrap();
        let f = noise(g, 41);
        let w = Window::new(noise(g, 42)).unwrap();
        let base = stft(&f, &w).unwrap();
        let scale = 1.0 + base.energy().sqrt();
        for form in [
            StftForm::SpectralInner,
            StftForm::WindowedDirect,
            StftForm::TransformPair,
            StftForm::TimeConvolution,
            StftForm::SpectralConvolution,
        ] {
            let alt = stft_alternate(&f, &w, form).unwrap();
            assert!(base.max_abs_diff(&alt) < 1e-10 * scale, "{form:?}");
        }
        assert!(matches!(
            stft_alternate(&f, &w, StftForm::HalfShift),
            Err(Error::OddLengthAmbiguity(15))
        ));
    }

    #[test]
    fn delta_window_convolution_form_is_modulated_copy() {
        let g = Grid::new(16, 1.0).unwrap();
        let f = noise(g, 51);
        let w = Window::new(Signal::delta(g, 0)).unwrap();
        let v = stft_alternate(&f, &w, StftForm::TimeConvolution).unwrap();
        for x in 0..16 {
            for xi in 0..16 {
                let expect = f.data()[x] * phase(-(xi as f64) * x as f64 / 16.0);
                assert!((v.entry(x, xi) - expect).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn orthogonality_identity() {
        let g = Grid::new(16, 0.5).unwrap();
        let f1 = noise(g, 61);
        let f2 = noise(g, 62);
        let w1 = Window::new(noise(g, 63)).unwrap();
        let w2 = Window::new(noise(g, 64)).unwrap();
        let dev = check_orthogonality(&f1, &f2, &w1, &w2).unwrap();
        assert!(dev < 1e-12 * orthogonality_scale(&f1, &f2, &w1, &w2));
    }

    #[test]
    fn orthogonal_signals_give_orthogonal_transforms() {
        let g = Grid::new(16, 0.5).unwrap();
        let f1 = noise(g, 71);
        // build f2 orthogonal to f1 by projection
        let f2r = noise(g, 72);
        let ip = inner(&f2r, &f1).unwrap();
        let n2 = f1.l2().powi(2);
        let mut d = f2r.data().to_vec();
        for (i, z) in d.iter_mut().enumerate() {
            *z -= f1.data()[i] * (ip / n2);
        }
        let f2 = Signal::new(g, d).unwrap();
        assert!(inner(&f1, &f2).unwrap().norm() < 1e-10);
        let w1 = Window::new(noise(g, 73)).unwrap();
        let w2 = Window::new(noise(g, 74)).unwrap();
        let dev = check_orthogonality(&f1, &f2, &w1, &w2).unwrap();
        assert!(dev < 1e-10 * orthogonality_scale(&f1, &f2, &w1, &w2));
    }

    #[test]
    fn inversion_with_two_windows() {
        let g = Grid::new(16, 0.5).unwrap();
        let f = noise(g, 81);
        let w1 = Window::new(noise(g, 82)).unwrap();
        let w2 = Window::new(noise(g, 83)).unwrap();
        assert!(inner(w1.signal(), w2.signal()).unwrap().norm() > 1e-6);
        let v = stft(&f, &w1).unwrap();
        let back = stft_invert(&v, &w1, &w2).unwrap();
        assert!(f.max_abs_diff(&back).unwrap() < 1e-10 * (1.0 + f.l2()));
    }

    #[test]
    fn resolution_of_identity() {
        let g = Grid::new(32, 0.25).unwrap();
        let f = noise(g, 91);
        let w = Window::gaussian(g);
        let v = stft(&f, &w).unwrap();
        let s = stft_adjoint(&v, &w).unwrap();
        let expect = f.scale(Complex64::new(32.0 * w.l2().powi(2), 0.0));
        assert!(s.max_abs_diff(&expect).unwrap() < 1e-9 * (1.0 + expect.l2()));
    }

    #[test]
    fn zero_matrix_synthesizes_zero() {
        let g = Grid::new(8, 1.0).unwrap();
        let w = Window::gaussian(g);
        let s = stft_adjoint(&TFMatrix::zero(g), &w).unwrap();
        assert!(s.l2() < 1e-15);
    }

    #[test]
    fn linear_in_signal_conjugate_linear_in_window() {
        let g = Grid::new(16, 0.5).unwrap();
        let f = noise(g, 95);
        let wsig = noise(g, 96);
        let w = Window::new(wsig.clone()).unwrap();
        let c = Complex64::new(0.7, -1.3);
        let v = stft(&f, &w).unwrap();

        let vf = stft(&f.scale(c), &w).unwrap();
        let mut dev: f64 = 0.0;
        for x in 0..16 {
            for xi in 0..16 {
                dev = dev.max((vf.entry(x, xi) - v.entry(x, xi) * c).norm());
            }
        }
        assert!(dev < 1e-12 * (1.0 + v.energy().sqrt()));

        let wg = Window::new(wsig.scale(c)).unwrap();
        let vg = stft(&f, &wg).unwrap();
        let mut dev: f64 = 0.0;
        for x in 0..16 {
            for xi in 0..16 {
                dev = dev.max((vg.entry(x, xi) - v.entry(x, xi) * c.conj()).norm());
            }
        }
        assert!(dev < 1e-12 * (1.0 + v.energy().sqrt()));
    }

    #[test]
    fn mixed_norm_discrete_two_two_is_sqrt_n_times_l2s() {
        let g = Grid::new(64, 0.125).unwrap();
        let f = noise(g, 97);
        let w = Window::new(noise(g, 98)).unwrap();
        let v = stft(&f, &w).unwrap();
        let params = MixedNormParams::new(
            Exponent::Finite(2.0),
            Exponent::Finite(2.0),
            NormMode::Discrete,
        );
        let got = v.mixed_norm(params);
        let expect = 8.0 * f.l2() * w.l2();
        assert!((got - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn modulated_window_shifts_rows_not_energy() {
        // shifting the window in frequency leaves the energy identity alone
        let g = Grid::new(32, 0.25).unwrap();
        let f = noise(g, 99);
        let w0 = noise(g, 100);
        let w = Window::new(w0.clone()).unwrap();
        let wm = Window::new(modulate(&w0, 3)).unwrap();
        let a = stft(&f, &w).unwrap();
        let b = stft(&f, &wm).unwrap();
        assert!((a.energy() - b.energy()).abs() < 1e-8 * (1.0 + a.energy()));
    }
}
