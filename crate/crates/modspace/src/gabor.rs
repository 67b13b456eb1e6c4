//! Gabor systems on the cyclic group: lattice coefficients, the frame
//! operator and its spectrum, canonical dual windows and reconstruction.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{check_same_grid, phase, Grid, Signal};
use crate::linalg;
use crate::stft::Window;

/// Time/frequency lattice `(a k, b l)` with a window attached. Both steps
/// must divide the grid length so the lattice closes up on the group.
#[derive(Clone, Debug)]
pub struct GaborSystem {
    window: Window,
    time_step: usize,
    freq_step: usize,
}

impl GaborSystem {
    pub fn new(window: Window, time_step: usize, freq_step: usize) -> Result<GaborSystem> {
        let n = window.grid().n();
        if time_step == 0 || freq_step == 0 || n % time_step != 0 || n % freq_step != 0 {
            return Err(Error::InvalidLattice {
                a: time_step,
                b: freq_step,
                n,
            });
        }
        Ok(GaborSystem {
            window,
            time_step,
            freq_step,
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn grid(&self) -> &Grid {
        self.window.grid()
    }

    pub fn time_step(&self) -> usize {
        self.time_step
    }

    pub fn freq_step(&self) -> usize {
        self.freq_step
    }

    /// Lattice points per period: `n/a` time shifts, `n/b` modulations.
    pub fn time_count(&self) -> usize {
        self.grid().n() / self.time_step
    }

    pub fn freq_count(&self) -> usize {
        self.grid().n() / self.freq_step
    }

    /// `n / (a b)`; below 1 the system cannot span and is never a frame.
    pub fn redundancy(&self) -> f64 {
        let n = self.grid().n() as f64;
        n / (self.time_step as f64 * self.freq_step as f64)
    }

    /// One lattice atom `M_{b l} tau_{a k} g`.
    pub fn atom(&self, k: usize, l: usize) -> Signal {
        let n = self.grid().n();
        let shift = (self.time_step * k) % n;
        let m = (self.freq_step * l) % n;
        let gd = self.window.signal().data();
        let data = (0..n)
            .map(|t| gd[(t + n - shift) % n] * phase(m as f64 * t as f64 / n as f64))
            .collect();
        Signal::new(*self.grid(), data).unwrap()
    }

    /// Same lattice with another window.
    pub fn with_window(&self, window: Window) -> Result<GaborSystem> {
        if !window.grid().same_as(self.grid()) {
            return Err(Error::GridMismatch(
                "replacement window lives on a different grid".into(),
            ));
        }
        GaborSystem::new(window, self.time_step, self.freq_step)
    }
}

/// Largest power-of-two lattice step `a = b = 2^k` that keeps the system
/// oversampled (`a b <= n/2`) and divides the grid length.
pub fn default_lattice(n: usize) -> (usize, usize) {
    let mut k = 0usize;
    while (1usize << (2 * (k + 1))) <= n / 2 && n % (1usize << (k + 1)) == 0 {
        k += 1;
    }
    (1 << k, 1 << k)
}

/// Analysis coefficients `c[k][l] = <f, M_{b l} tau_{a k} g>`, computed with
/// one length-n transform per time shift and a stride-`b` readout.
pub fn gabor_coeffs(f: &Signal, sys: &GaborSystem) -> Result<Vec<Vec<Complex64>>> {
    check_same_grid(f, sys.window.signal())?;
    let n = f.grid().n();
    let gd = sys.window.signal().data();
    let (a, b) = (sys.time_step, sys.freq_step);
    Ok((0..sys.time_count())
        .map(|k| {
            let shift = a * k;
            let mut w: Vec<Complex64> = (0..n)
                .map(|t| f.data()[t] * gd[(t + n - shift) % n].conj())
                .collect();
            crate::grid::dft_vec(&mut w);
            (0..sys.freq_count()).map(|l| w[b * l]).collect()
        })
        .collect())
}

/// Synthesis `sum_{k,l} c[k][l] M_{b l} tau_{a k} g`, the adjoint of
/// [`gabor_coeffs`]. The inner sum over `l` is a short inverse transform of
/// length `n/b` read periodically.
pub fn gabor_synthesize(coeffs: &[Vec<Complex64>], sys: &GaborSystem) -> Result<Signal> {
    let n = sys.grid().n();
    let (a, b) = (sys.time_step, sys.freq_step);
    let (kc, lc) = (sys.time_count(), sys.freq_count());
    if coeffs.len() != kc || coeffs.iter().any(|r| r.len() != lc) {
        return Err(Error::LengthMismatch {
            expected: kc,
            got: coeffs.len(),
        });
    }
    let gd = sys.window.signal().data();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..kc {
        // s_k(t) = sum_l c[k][l] e^{2 pi i (b l) t / n} has period n/b in t
        let mut s = coeffs[k].to_vec();
        crate::grid::idft_vec(&mut s);
        let shift = a * k;
        let period = n / b;
        for t in 0..n {
            out[t] += s[t % period] * lc as f64 * gd[(t + n - shift) % n];
        }
    }
    Signal::new(*sys.grid(), out)
}

/// Frame operator `S f = sum_{k,l} <f, g_{k,l}> g_{k,l}`; Hermitian and
/// positive semidefinite.
pub fn frame_apply(sys: &GaborSystem, f: &Signal) -> Result<Signal> {
    let c = gabor_coeffs(f, sys)?;
    gabor_synthesize(&c, sys)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundsMethod {
    ExactSpectrum,
    PowerIteration,
}

/// Extreme eigenvalues of the frame operator.
#[derive(Clone, Copy, Debug)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub method: BoundsMethod,
}

impl FrameBounds {
    pub fn is_frame(&self) -> bool {
        self.lower > 0.0
    }
}

/// Grid size up to which the frame operator is diagonalized densely; larger
/// systems fall back to power iteration on the operator.
const DENSE_SPECTRUM_LIMIT: usize = 512;

/// Frame bounds via the requested method.
pub fn frame_bounds_with(sys: &GaborSystem, method: BoundsMethod) -> Result<FrameBounds> {
    let n = sys.grid().n();
    let (mut lower, upper) = match method {
        BoundsMethod::ExactSpectrum => {
            let mut m = operator_matrix(sys)?;
            linalg::jacobi_extremes(&mut m)?
        }
        BoundsMethod::PowerIteration => {
            let apply = |v: &[Complex64]| -> Vec<Complex64> {
                let f = Signal::new(*sys.grid(), v.to_vec()).unwrap();
                frame_apply(sys, &f).unwrap().into_data()
            };
            linalg::power_extremes(&apply, n, 1e-8, 200 * n.max(100))?
        }
    };
    // eigenvalues of a PSD operator that come out at roundoff scale are a
    // rank deficiency, not a tiny frame bound
    if lower < 1e-10 * upper.max(1e-300) {
        lower = 0.0;
    }
    Ok(FrameBounds {
        lower,
        upper,
        method,
    })
}

pub fn frame_bounds(sys: &GaborSystem) -> Result<FrameBounds> {
    let method = if sys.grid().n() <= DENSE_SPECTRUM_LIMIT {
        BoundsMethod::ExactSpectrum
    } else {
        BoundsMethod::PowerIteration
    };
    frame_bounds_with(sys, method)
}

fn operator_matrix(sys: &GaborSystem) -> Result<Vec<Vec<Complex64>>> {
    let n = sys.grid().n();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e = Signal::delta(*sys.grid(), j);
        cols.push(frame_apply(sys, &e)?.into_data());
    }
    // columns to rows
    Ok((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

/// Canonical dual window `S^{-1} g` by conjugate gradients on the frame
/// operator.
pub fn dual_window(sys: &GaborSystem) -> Result<Window> {
    let bounds = frame_bounds(sys)?;
    if !bounds.is_frame() {
        return Err(Error::NotAFrame {
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    let n = sys.grid().n();
    let apply = |v: &[Complex64]| -> Vec<Complex64> {
        let f = Signal::new(*sys.grid(), v.to_vec()).unwrap();
        frame_apply(sys, &f).unwrap().into_data()
    };
    let x = linalg::cg_solve(&apply, sys.window.signal().data(), 1e-10, 10 * n)?;
    Window::new(Signal::new(*sys.grid(), x)?)
}

/// Reconstruct `f` by analysis with the canonical dual and synthesis with the
/// primal window.
pub fn gabor_reconstruct(f: &Signal, sys: &GaborSystem) -> Result<Signal> {
    let dual = dual_window(sys)?;
    let dual_sys = sys.with_window(dual)?;
    let c = gabor_coeffs(f, &dual_sys)?;
    gabor_synthesize(&c, sys)
}

/// Reconstruct `f` by analysis with the primal window and synthesis with the
/// canonical dual.
pub fn gabor_reconstruct_swapped(f: &Signal, sys: &GaborSystem) -> Result<Signal> {
    let dual = dual_window(sys)?;
    let dual_sys = sys.with_window(dual)?;
    let c = gabor_coeffs(f, sys)?;
    gabor_synthesize(&c, &dual_sys)
}
