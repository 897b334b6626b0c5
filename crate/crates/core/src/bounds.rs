//! Number-theoretic companions of cₙ: Mattila's lower bounds, the divisor
//! matrix bound, the Hong–Loewy bound for power GCD matrices and Smith's
//! determinant for factor-closed sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charpoly::spectral::{jacobi_eigenvalues, JACOBI_TOL};
use crate::error::{Error, Result};
use crate::matrix::{IntegerMatrix, SquareMatrix};

/// Relative slack for floating eigenvalue-versus-bound comparisons.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MattilaBounds {
    pub general: f64,
    /// The even- or odd-`n` refinement, whichever applies.
    pub parity: f64,
}

fn mattila_denominators(n: usize) -> (f64, f64) {
    let x = n as f64;
    let general = x.powi(4) + 2.0 * x.powi(3) + 2.0 * x * x + x;
    let parity = if n.is_multiple_of(2) {
        x.powi(4) + 56.0 * x * x + 48.0 * x
    } else {
        x.powi(4) + 50.0 * x * x + 48.0 * x - 51.0
    };
    (general, parity)
}

/// Natural logarithms of the two bounds; the bounds themselves underflow
/// `f64` near n = 90.
pub fn mattila_log_bounds(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "Mattila bounds need n >= 2, got {n}"
        )));
    }
    let (dg, dp) = mattila_denominators(n);
    let half = (n as f64 - 1.0) / 2.0;
    Ok((half * (6.0 / dg).ln(), half * (48.0 / dp).ln()))
}

/// `(6/(n⁴+2n³+2n²+n))^{(n−1)/2}` and, for even `n`,
/// `(48/(n⁴+56n²+48n))^{(n−1)/2}`, for odd `n`, `(48/(n⁴+50n²+48n−51))^{(n−1)/2}`.
pub fn mattila_bounds(n: usize) -> Result<MattilaBounds> {
    let (general, parity) = mattila_log_bounds(n)?;
    Ok(MattilaBounds {
        general: general.exp(),
        parity: parity.exp(),
    })
}

/// One row of the bounds table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: usize,
    pub c_n: Option<f64>,
    pub mattila_general: f64,
    pub mattila_parity: f64,
    /// `c_n` is at least both bounds; `None` without a `c_n`.
    pub holds: Option<bool>,
}

pub fn bounds_row(n: usize, c_n: Option<f64>) -> Result<BoundsRow> {
    let b = mattila_bounds(n)?;
    Ok(BoundsRow {
        n,
        c_n,
        mattila_general: b.general,
        mattila_parity: b.parity,
        holds: c_n.map(|c| c >= b.general && c >= b.parity),
    })
}

/// Möbius function on `0..=n` by a linear sieve (`mu[0]` is unused and 0).
pub fn mobius_sieve(n: usize) -> Vec<i8> {
    let mut mu = vec![0i8; n + 1];
    if n == 0 {
        return mu;
    }
    mu[1] = 1;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                mu[m] = 0;
                break;
            }
            mu[m] = -mu[i];
        }
    }
    mu
}

/// Prime factorization as `(p, exponent)` pairs, by trial division.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn euler_phi(m: u64) -> u64 {
    assert!(m >= 1, "totient is defined for m >= 1");
    factorize(m)
        .into_iter()
        .map(|(p, k)| p.pow(k - 1) * (p - 1))
        .product()
}

/// `J_ε(m) = m^ε ∏_{p|m} (1 − p^{−ε})` for real `ε > 0`.
pub fn jordan_totient(m: u64, eps: f64) -> f64 {
    assert!(m >= 1 && eps > 0.0);
    factorize(m)
        .into_iter()
        .fold((m as f64).powf(eps), |acc, (p, _)| {
            acc * (1.0 - (p as f64).powf(-eps))
        })
}

/// `J_k(m) = ∏ p^{k(a−1)} (p^k − 1)` for integer `k ≥ 1`, exactly.
pub fn jordan_totient_exact(m: u64, k: u32) -> BigInt {
    assert!(m >= 1 && k >= 1);
    factorize(m)
        .into_iter()
        .map(|(p, a)| {
            let pk = BigInt::from(p).pow(k);
            BigInt::from(p).pow(k * (a - 1)) * (pk - 1)
        })
        .product()
}

/// `E_n` with `(i, j)` entry 1 iff `j | i` (1-based).
pub fn divisor_matrix(n: usize) -> SquareMatrix<i64> {
    SquareMatrix::from_fn(n, |i, j| i64::from((i + 1) % (j + 1) == 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorBound {
    /// `λ_min(EₙᵀEₙ)`
    pub t_n: f64,
    /// `(n Σ_{k≤n} μ²(k))⁻¹`
    pub bound: f64,
    pub holds: bool,
}

pub fn divisor_matrix_bound_check(n: usize) -> Result<DivisorBound> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let e = divisor_matrix(n);
    let ete = e.transpose().matmul(&e).to_f64();
    let t_n = jacobi_eigenvalues(&ete, JACOBI_TOL)?[0];
    let squarefree = mobius_sieve(n).iter().filter(|&&m| m != 0).count();
    let bound = 1.0 / (n as f64 * squarefree as f64);
    Ok(DivisorBound {
        t_n,
        bound,
        holds: t_n >= bound * (1.0 - BOUND_SLACK),
    })
}

fn validate_set(set: &[u64]) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Validation("set must be nonempty".into()));
    }
    if let Some(&x) = set.iter().find(|&&x| x == 0) {
        return Err(Error::Validation(format!(
            "set elements must be positive, found {x}"
        )));
    }
    let mut seen = BTreeSet::new();
    if let Some(&dup) = set.iter().find(|&&x| !seen.insert(x)) {
        return Err(Error::Validation(format!("duplicate element {dup}")));
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

/// `((x_i, x_j)^ε)` over the set.
pub fn power_gcd_matrix(set: &[u64], eps: f64) -> Result<SquareMatrix<f64>> {
    validate_set(set)?;
    if !(eps > 0.0) {
        return Err(Error::Validation(format!(
            "exponent must be positive, got {eps}"
        )));
    }
    Ok(SquareMatrix::from_fn(set.len(), |i, j| {
        (gcd(set[i], set[j]) as f64).powf(eps)
    }))
}

/// The GCD matrix `((x_i, x_j))` with exact entries.
pub fn gcd_matrix(set: &[u64]) -> Result<IntegerMatrix> {
    validate_set(set)?;
    Ok(SquareMatrix::from_fn(set.len(), |i, j| {
        BigInt::from(gcd(set[i], set[j]))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HongLoewy {
    pub lambda_min: f64,
    /// `c_n · min_i J_ε(x_i)`
    pub bound: f64,
    pub holds: bool,
}

/// `λ_min((S^ε)) ≥ c_n · min_i J_ε(x_i)` with `c_n` supplied for `n = |S|`.
pub fn hong_loewy_check(set: &[u64], eps: f64, c_n: f64) -> Result<HongLoewy> {
    let m = power_gcd_matrix(set, eps)?;
    let lambda_min = jacobi_eigenvalues(&m, JACOBI_TOL)?[0];
    let min_j = set
        .iter()
        .map(|&x| jordan_totient(x, eps))
        .fold(f64::INFINITY, f64::min);
    let bound = c_n * min_j;
    Ok(HongLoewy {
        lambda_min,
        bound,
        holds: lambda_min >= bound - BOUND_SLACK * bound.abs().max(1.0),
    })
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_determinant(m: &IntegerMatrix) -> BigInt {
    let n = m.n();
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Smallest set containing every divisor of every element, ascending.
pub fn divisor_closure(elements: &[u64]) -> Vec<u64> {
    let mut out = BTreeSet::new();
    for &x in elements.iter().filter(|&&x| x > 0) {
        let mut d = 1;
        while d * d <= x {
            if x % d == 0 {
                out.insert(d);
                out.insert(x / d);
            }
            d += 1;
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmithCheck {
    pub det: BigInt,
    pub totient_product: BigInt,
    pub equal: bool,
}

/// Exact `det((x_i, x_j))` against `∏ φ(x_k)` on a factor-closed set.
pub fn smith_determinant_check(set: &[u64]) -> Result<SmithCheck> {
    validate_set(set)?;
    let members: BTreeSet<u64> = set.iter().copied().collect();
    for &x in set {
        if let Some(&d) = divisor_closure(&[x]).iter().find(|d| !members.contains(d)) {
            return Err(Error::Validation(format!(
                "set is not factor-closed: {d} divides {x} but is missing"
            )));
        }
    }
    let det = bareiss_determinant(&gcd_matrix(set)?);
    let totient_product: BigInt = set.iter().map(|&x| BigInt::from(euler_phi(x))).product();
    let equal = det == totient_product;
    Ok(SmithCheck {
        det,
        totient_product,
        equal,
    })
}
