//! Newton's method for the least root of a real-rooted characteristic polynomial.
//!
//! Started at 0, below every root, the iterates increase monotonically to the
//! least root. A step `s` bounds the remaining distance by `d·s` (d = degree),
//! which gives the stopping rule. Near a repeated or tightly clustered root
//! the floating evaluation hits its rounding floor first; the polynomial is
//! then reduced to its squarefree part exactly, and as a last resort the root
//! is bracketed by exact bisection.

use super::exact::{least_root_bisection, RatPoly};
use super::CharPoly;
use crate::error::{Error, Result};
use num_traits::{Signed, ToPrimitive};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITERATIONS: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RootStatus {
    Converged,
    /// Stopped because `p(x)` fell inside its rounding error bound before the
    /// tolerance was met.
    NoiseFloor,
}

/// Horner evaluation of `p`, `p′` and a running rounding-error bound for `p`.
#[inline]
fn eval(desc: &[f64], x: f64) -> (f64, f64, f64) {
    let mut p = desc[0];
    let mut dp = 0.0;
    let mut mu = 0.5 * p.abs();
    let ax = x.abs();
    for &a in &desc[1..] {
        dp = dp * x + p;
        p = p * x + a;
        mu = mu * ax + p.abs();
    }
    // running error bound for Horner's rule, doubled for margin
    let u = f64::EPSILON / 2.0;
    (p, dp, 2.0 * u * (2.0 * mu - p.abs()).max(0.0))
}

/// Newton from zero on descending coefficients `desc` (leading coefficient first).
#[inline]
pub(crate) fn newton_from_zero(
    desc: &[f64],
    tol: f64,
    max_iterations: usize,
    mut iterates: Option<&mut Vec<f64>>,
) -> Result<(f64, RootStatus)> {
    let degree = (desc.len() - 1) as f64;
    let mut x = 0.0f64;
    for _ in 0..max_iterations {
        let (p, dp, noise) = eval(desc, x);
        if p.abs() <= noise {
            let uncertainty = noise / dp.abs();
            let status = if uncertainty <= tol * x {
                RootStatus::Converged
            } else {
                RootStatus::NoiseFloor
            };
            return Ok((x, status));
        }
        let step = -p / dp;
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::Convergence {
                method: "Newton's method",
                detail: format!("non-monotone step {step:e} at x = {x:e}; roots not all real and above the start"),
            });
        }
        x += step;
        if let Some(v) = iterates.as_deref_mut() {
            v.push(x);
        }
        if degree * step <= tol * x {
            return Ok((x, RootStatus::Converged));
        }
    }
    Err(Error::Convergence {
        method: "Newton's method",
        detail: format!("iteration cap {max_iterations} reached at x = {x:e}"),
    })
}

fn check_positive(c: &CharPoly) -> Result<()> {
    if c.degree() == 0 {
        return Err(Error::Domain("constant polynomial has no root".into()));
    }
    if let Some(k) = c.e.iter().position(|e| !e.is_positive()) {
        return Err(Error::Domain(format!(
            "e_{} = {} is not positive, so the roots are not all positive",
            k + 1,
            c.e[k]
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonRun {
    pub root: f64,
    /// Iterates of the first Newton pass on the full polynomial, starting after 0.
    pub iterates: Vec<f64>,
    /// Whether the rounding floor forced an exact refinement.
    pub refined: bool,
}

/// Least root with the iterate history, for inspection and tests.
pub fn newton_iterates(c: &CharPoly, tol: f64) -> Result<NewtonRun> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    check_positive(c)?;
    let mut iterates = Vec::new();
    let (x, status) = newton_from_zero(
        &c.descending_f64(),
        tol,
        DEFAULT_MAX_ITERATIONS,
        Some(&mut iterates),
    )?;
    let root = match status {
        RootStatus::Converged => x,
        RootStatus::NoiseFloor => refine_least_root(c, tol, x)?,
    };
    Ok(NewtonRun {
        root,
        iterates,
        refined: status == RootStatus::NoiseFloor,
    })
}

/// Least root of `c` to relative accuracy `tol`. All roots must be real and
/// positive, which holds for characteristic polynomials of Gram matrices.
pub fn smallest_root_newton(c: &CharPoly, tol: f64) -> Result<f64> {
    newton_iterates(c, tol).map(|run| run.root)
}

/// Squarefree reduction, then exact bisection if the floor persists.
pub(crate) fn refine_least_root(c: &CharPoly, tol: f64, hint: f64) -> Result<f64> {
    let sqf = RatPoly::from_charpoly(c).squarefree();
    let mut desc: Vec<f64> = sqf
        .coeffs()
        .iter()
        .rev()
        .map(|r| r.to_f64().unwrap_or(f64::NAN))
        .collect();
    if desc.len() < c.degree() + 1 && desc.iter().all(|v| v.is_finite()) {
        // Newton on the squarefree part wants alternating signs with a positive lead
        let lead = desc[0];
        desc.iter_mut().for_each(|v| *v /= lead);
        if let Ok((x, RootStatus::Converged)) =
            newton_from_zero(&desc, tol, DEFAULT_MAX_ITERATIONS, None)
        {
            return Ok(x);
        }
    }
    least_root_bisection(c, tol, Some(hint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn cp(e: &[i64]) -> CharPoly {
        CharPoly {
            e: e.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    fn binomial_row(n: usize) -> Vec<i64> {
        let mut row = vec![1i64];
        for _ in 0..n {
            let mut next = vec![1i64; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
        row[1..].to_vec()
    }

    #[test]
    fn repeated_root() {
        for n in 1..=12 {
            let c = cp(&binomial_row(n));
            let x = smallest_root_newton(&c, DEFAULT_TOL).unwrap();
            assert!((x - 1.0).abs() <= 1e-13, "n = {n}: {x}");
        }
    }

    #[test]
    fn quadratic() {
        let x = smallest_root_newton(&cp(&[3, 1]), DEFAULT_TOL).unwrap();
        let expected = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((x - expected).abs() <= 1e-13 * expected);
        assert!((x - 0.381_966_011_3).abs() < 1e-10);
    }

    #[test]
    fn iterates_increase() {
        let run = newton_iterates(&cp(&[5, 6, 1]), DEFAULT_TOL).unwrap();
        assert!(!run.refined);
        assert!(run.iterates.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(run.iterates.last().copied(), Some(run.root));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            smallest_root_newton(&cp(&[]), DEFAULT_TOL),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            smallest_root_newton(&cp(&[1, -1]), DEFAULT_TOL),
            Err(Error::Domain(_))
        ));
        assert!(smallest_root_newton(&cp(&[3, 1]), 0.0).is_err());
        // λ² − λ + 1 has complex roots; Newton from 0 overshoots and turns back.
        assert!(matches!(
            smallest_root_newton(&cp(&[1, 1]), DEFAULT_TOL),
            Err(Error::Convergence { .. })
        ));
    }
}
