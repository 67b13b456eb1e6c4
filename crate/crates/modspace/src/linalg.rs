//! Dense Hermitian linear algebra: two-sided Jacobi spectra, power iteration
//! and conjugate gradients on matrix-free operators. Small and self-contained
//! on purpose; the sizes in play are a few hundred rows.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::CounterRng;

/// Extreme eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
/// The matrix is consumed as scratch space.
pub fn jacobi_extremes(a: &mut Vec<Vec<Complex64>>) -> Result<(f64, f64)> {
    let evs = jacobi_eigenvalues(a)?;
    let lo = evs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = evs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Full real spectrum of a Hermitian matrix (unsorted).
pub fn jacobi_eigenvalues(a: &mut Vec<Vec<Complex64>>) -> Result<Vec<f64>> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("jacobi needs a square matrix".into()));
    }
    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter().map(|z| z.norm_sqr()))
        .sum::<f64>()
        .sqrt()
        .max(1e-300);
    let tol = 1e-14 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            return Ok((0..n).map(|i| a[i][i].re).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                // phase e^{i phi} of the coupling, then a real rotation angle
                let ph = apq / apq.norm();
                let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                let u = ph * s;
                // columns: col_p <- c col_p + conj(u) col_q; col_q <- -u col_p + c col_q
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = aip * c + aiq * u.conj();
                    a[i][q] = aiq * c - aip * u;
                }
                // rows: the conjugate-transposed update
                for j in 0..n {
                    let apj = a[p][j];
                    let aqj = a[q][j];
                    a[p][j] = apj * c + aqj * u;
                    a[q][j] = aqj * c - apj * u.conj();
                }
                // clamp the rotated pair to exact Hermitian form
                a[p][q] = Complex64::new(0.5 * (a[p][q].re + a[q][p].re), 0.5 * (a[p][q].im - a[q][p].im));
                a[q][p] = a[p][q].conj();
                a[p][p] = Complex64::new(a[p][p].re, 0.0);
                a[q][q] = Complex64::new(a[q][q].re, 0.0);
            }
        }
    }
    Err(Error::NoConvergence(
        "jacobi sweeps did not reduce the off-diagonal mass".into(),
    ))
}

pub(crate) fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    crate::grid::compensated_csum(a.iter().zip(b).map(|(x, y)| x.conj() * y))
}

pub(crate) fn vnorm(a: &[Complex64]) -> f64 {
    vdot(a, a).re.max(0.0).sqrt()
}

pub(crate) fn start_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let r = CounterRng::new(seed, 0x11ae);
    let mut v: Vec<Complex64> = (0..n as u64)
        .map(|i| Complex64::new(r.normal_at(2 * i), r.normal_at(2 * i + 1)))
        .collect();
    let nv = vnorm(&v);
    for z in &mut v {
        *z /= nv;
    }
    v
}

/// Largest eigenvalue of a Hermitian positive semidefinite operator given as
/// a closure, by power iteration with a deterministic start.
pub fn power_largest(
    apply: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut v = start_vector(n, 0x9e37);
    let mut lambda = 0.0f64;
    for _ in 0..max_iter {
        let w = apply(&v);
        let nw = vnorm(&w);
        if nw == 0.0 {
            return Ok(0.0);
        }
        lambda = vdot(&v, &w).re;
        // residual distance to the nearest eigenpair; unlike the change in
        // the Rayleigh quotient this cannot stall early on clustered spectra
        let resid = vnorm(
            &w.iter()
                .zip(&v)
                .map(|(wi, vi)| wi - vi * lambda)
                .collect::<Vec<_>>(),
        );
        v = w.into_iter().map(|z| z / nw).collect();
        if resid <= tol * lambda.abs().max(1e-300) {
            return Ok(lambda.max(0.0));
        }
    }
    // ran out of iterations on a tightly clustered spectrum; the last
    // Rayleigh quotient is still a valid lower estimate of the extreme
    Ok(lambda.max(0.0))
}

/// Extreme eigenvalues of a Hermitian PSD operator: the top by power
/// iteration, the bottom by the shifted complement `hi - S`.
pub fn power_extremes(
    apply: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, f64)> {
    let hi = power_largest(apply, n, tol, max_iter)?;
    let shifted = |v: &[Complex64]| -> Vec<Complex64> {
        let w = apply(v);
        v.iter().zip(w).map(|(x, y)| x * hi - y).collect()
    };
    let comp = power_largest(&shifted, n, tol, max_iter)?;
    Ok(((hi - comp).max(0.0), hi))
}

/// Solve `S x = b` for Hermitian positive definite `S` by conjugate
/// gradients. Stops when the relative residual drops below `tol_rel`.
pub fn cg_solve(
    apply: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    b: &[Complex64],
    tol_rel: f64,
    max_iter: usize,
) -> Result<Vec<Complex64>> {
    let nb = vnorm(b);
    if nb == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); b.len()]);
    }
    let mut x = vec![Complex64::new(0.0, 0.0); b.len()];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = vdot(&r, &r).re;
    for _ in 0..max_iter {
        if rs.sqrt() <= tol_rel * nb {
            return Ok(x);
        }
        let sp = apply(&p);
        let denom = vdot(&p, &sp).re;
        if denom <= 0.0 {
            return Err(Error::NoConvergence(
                "conjugate gradient hit a non-positive curvature direction".into(),
            ));
        }
        let alpha = rs / denom;
        for i in 0..x.len() {
            x[i] += p[i] * alpha;
            r[i] -= sp[i] * alpha;
        }
        let rs_next = vdot(&r, &r).re;
        let beta = rs_next / rs;
        for i in 0..p.len() {
            p[i] = r[i] + p[i] * beta;
        }
        rs = rs_next;
    }
    if rs.sqrt() <= tol_rel * nb {
        Ok(x)
    } else {
        Err(Error::NoConvergence(format!(
            "conjugate gradient residual {:.3e} after {max_iter} iterations",
            rs.sqrt() / nb
        )))
    }
}
