//! Floating-point eigen tools: power iteration for spectral radii and a
//! cyclic Jacobi eigensolver for symmetric matrices.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

pub const POWER_ITERATION_CAP: usize = 200_000;
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

fn mat_vec(m: &SquareMatrix<f64>, x: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = m.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Spectral radius of an entrywise nonnegative matrix.
///
/// Iterates on `M + I`, which has the same Perron vector and no other
/// eigenvalue of equal modulus. Symmetric inputs stop on the Rayleigh
/// residual; general inputs stop when the Collatz–Wielandt bounds
/// `min (Bx)_i/x_i ≤ ρ(B) ≤ max (Bx)_i/x_i` meet within `tol`.
pub fn spectral_radius_power_iteration(m: &SquareMatrix<f64>, tol: f64) -> Result<f64> {
    let n = m.n();
    if let Some(&bad) = m.as_slice().iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::Domain(format!(
            "matrix must be entrywise nonnegative, found {bad}"
        )));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let shifted = SquareMatrix::from_fn(n, |i, j| m[(i, j)] + if i == j { 1.0 } else { 0.0 });
    let symmetric = m.is_symmetric();
    let mut x = vec![1.0; n];
    normalize(&mut x);
    let mut y = vec![0.0; n];
    for _ in 0..POWER_ITERATION_CAP {
        mat_vec(&shifted, &x, &mut y);
        if symmetric {
            let theta = dot(&x, &y);
            let residual = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (b - theta * a).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= tol * theta {
                return Ok(theta - 1.0);
            }
        } else {
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for (a, b) in x.iter().zip(&y) {
                let r = b / a;
                lo = lo.min(r);
                hi = hi.max(r);
            }
            if hi - lo <= tol * hi {
                return Ok(0.5 * (lo + hi) - 1.0);
            }
        }
        std::mem::swap(&mut x, &mut y);
        normalize(&mut x);
    }
    Err(Error::Convergence {
        method: "power iteration",
        detail: format!("no convergence within {POWER_ITERATION_CAP} iterations"),
    })
}

/// Spectral radius of a symmetric matrix of either sign, via power
/// iteration on `M²` (which is positive semidefinite, so `±ρ` cannot stall it).
pub fn spectral_radius_symmetric(m: &SquareMatrix<f64>, tol: f64) -> Result<f64> {
    let n = m.n();
    if !m.is_symmetric() {
        return Err(Error::Domain("matrix must be symmetric".into()));
    }
    if n == 0 {
        return Ok(0.0);
    }
    // fixed, non-special start vector
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
        .collect();
    normalize(&mut x);
    let mut t = vec![0.0; n];
    let mut y = vec![0.0; n];
    for _ in 0..POWER_ITERATION_CAP {
        mat_vec(m, &x, &mut t);
        mat_vec(m, &t, &mut y);
        let theta = dot(&x, &y);
        if theta == 0.0 {
            return Ok(0.0);
        }
        let residual = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - theta * a).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol * theta {
            return Ok(theta.sqrt());
        }
        std::mem::swap(&mut x, &mut y);
        normalize(&mut x);
    }
    Err(Error::Convergence {
        method: "power iteration",
        detail: format!("no convergence within {POWER_ITERATION_CAP} iterations"),
    })
}

/// All eigenvalues of a symmetric matrix in ascending order, by cyclic-by-row
/// Jacobi rotations. Stops once the off-diagonal Frobenius norm is below
/// `tol` times the Frobenius norm of the input.
pub fn jacobi_eigenvalues(s: &SquareMatrix<f64>, tol: f64) -> Result<Vec<f64>> {
    let n = s.n();
    if !s.is_symmetric() {
        return Err(Error::Domain("Jacobi needs a symmetric matrix".into()));
    }
    let mut a = s.clone();
    let scale = s.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
    let off = |a: &SquareMatrix<f64>| -> f64 {
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += a[(i, j)] * a[(i, j)];
                }
            }
        }
        sum.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > tol * scale {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Convergence {
                method: "Jacobi",
                detail: format!("off-diagonal norm {:e} after {sweeps} sweeps", off(&a)),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}
