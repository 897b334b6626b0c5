//! Closed forms attached to the extremal pattern `Y₀` and `Z₀ = Y₀Y₀ᵀ`.
//!
//! Everything here is exact: `Z₀⁻¹` has entries growing like φ^{2n}, which
//! leaves `i64` behind near n = 45, so the module works over `BigInt`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::charpoly::{newton_identities, power_sums, smallest_root_newton};
use crate::error::{Error, Result};
use crate::inverse::gram_inverse;
use crate::matrix::{IntegerMatrix, SquareMatrix};
use crate::pattern::GramMatrix;

/// Fibonacci numbers `F₁, F₂, …, F_m` with `F₁ = F₂ = 1`.
#[derive(Clone, Debug)]
pub struct FibCache {
    values: Vec<BigInt>,
}

impl FibCache {
    pub fn new(m: usize) -> Self {
        let mut values: Vec<BigInt> = Vec::with_capacity(m);
        for k in 0..m {
            let next = if k < 2 {
                BigInt::one()
            } else {
                &values[k - 1] + &values[k - 2]
            };
            values.push(next);
        }
        Self { values }
    }

    /// `F_k`, 1-based. Panics outside `1..=m`.
    pub fn get(&self, k: usize) -> &BigInt {
        assert!(k >= 1, "F_0 is not used");
        &self.values[k - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn fibonacci(k: usize) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::Domain("Fibonacci index must be at least 1".into()));
    }
    Ok(FibCache::new(k).get(k).clone())
}

/// `F_k` when it fits in a `u64` (k ≤ 93).
pub fn fibonacci_u64(k: usize) -> Option<u64> {
    if k == 0 {
        return None;
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 1..k {
        let next = a.checked_add(b)?;
        a = b;
        b = next;
    }
    Some(b)
}

#[inline]
fn alternating(i: usize, j: usize) -> bool {
    (i + j) % 2 == 1
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Dimension {
            n,
            reason: "dimension must be at least 1",
        })
    } else {
        Ok(())
    }
}

/// Dense `Y₀` for any `n` (the packed type stops at 16).
pub fn y0_dense(n: usize) -> Result<IntegerMatrix> {
    check_n(n)?;
    Ok(SquareMatrix::from_fn(n, |i, j| {
        BigInt::from(u8::from(i == j || (i > j && alternating(i, j))))
    }))
}

/// Dense `Z₀ = Y₀Y₀ᵀ` for any `n`.
pub fn z0_dense(n: usize) -> Result<IntegerMatrix> {
    let y = y0_dense(n)?;
    Ok(y.matmul(&y.transpose()))
}

/// `Y₀⁻¹`: unit diagonal, `(−1)^{i−j} F_{i−j}` below it.
pub fn y0_inverse_closed(n: usize) -> Result<IntegerMatrix> {
    check_n(n)?;
    let fib = FibCache::new(n);
    Ok(SquareMatrix::from_fn(n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => BigInt::zero(),
        std::cmp::Ordering::Equal => BigInt::one(),
        std::cmp::Ordering::Greater => {
            let f = fib.get(i - j).clone();
            if alternating(i, j) {
                -f
            } else {
                f
            }
        }
    }))
}

/// `Z₀⁻¹` from its Fibonacci-sum closed form. With 1-based indices the
/// diagonal is `1 + Σ_{k>i} F_{k−i}²` and for `j < i` the entry is
/// `(−1)^{i−j}(F_{i−j} + Σ_{t>i} F_{t−i}F_{t−j})`; the upper triangle mirrors it.
pub fn z0_inverse_closed(n: usize) -> Result<IntegerMatrix> {
    check_n(n)?;
    let fib = FibCache::new(n);
    let lower = |i: usize, j: usize| -> BigInt {
        if i == j {
            let tail: BigInt = (i + 1..n).map(|k| fib.get(k - i) * fib.get(k - i)).sum();
            return BigInt::one() + tail;
        }
        let tail: BigInt = (i + 1..n).map(|t| fib.get(t - i) * fib.get(t - j)).sum();
        let magnitude = fib.get(i - j) + tail;
        if alternating(i, j) {
            -magnitude
        } else {
            magnitude
        }
    };
    Ok(SquareMatrix::from_fn(n, |i, j| {
        if i >= j {
            lower(i, j)
        } else {
            lower(j, i)
        }
    }))
}

/// `sign(M_ij) = (−1)^{i−j}` for every entry; zeros fail.
pub fn sign_pattern_check<T: Signed>(m: &SquareMatrix<T>) -> bool {
    let n = m.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let x = &m[(i, j)];
            if alternating(i, j) {
                x.is_negative()
            } else {
                x.is_positive()
            }
        })
    })
}

/// First entry (row-major, 0-based) where `|(Z⁻¹)_ij| > |(Z₀⁻¹)_ij|`, with
/// `Z⁻¹` computed exactly from the factor of `z`.
pub fn domination_violation_with(
    z: &GramMatrix,
    z0_inverse: &IntegerMatrix,
) -> Option<(usize, usize)> {
    assert_eq!(z.n(), z0_inverse.n(), "dimension mismatch");
    let zi = gram_inverse(&z.factor());
    let n = z.n();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| BigInt::from(zi[(i, j)].unsigned_abs()) > z0_inverse[(i, j)].abs())
}

pub fn domination_violation(z: &GramMatrix) -> Option<(usize, usize)> {
    let z0_inverse = z0_inverse_closed(z.n()).expect("GramMatrix has n >= 1");
    domination_violation_with(z, &z0_inverse)
}

/// `|Z⁻¹| ≤ |Z₀⁻¹|` entrywise.
pub fn domination_check(z: &GramMatrix) -> bool {
    domination_violation(z).is_none()
}

/// `trace(|Z₀⁻¹|ᵏ) = trace((Z₀⁻¹)ᵏ)` for every `k = 1..=n`, exactly.
pub fn trace_equality_check(n: usize) -> Result<bool> {
    let signed = z0_inverse_closed(n)?;
    let absolute = signed.abs();
    let mut signed_power = signed.clone();
    let mut absolute_power = absolute.clone();
    for k in 1..=n {
        if k > 1 {
            signed_power = signed_power.matmul(&signed);
            absolute_power = absolute_power.matmul(&absolute);
        }
        if signed_power.trace() != absolute_power.trace() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|(Y₀⁻¹)_ij| = F_{i−j}` below the diagonal: the entry bound is attained.
pub fn fibonacci_attained(n: usize) -> Result<bool> {
    let c = y0_inverse_closed(n)?;
    let fib = FibCache::new(n);
    Ok((0..n).all(|i| (0..i).all(|j| &c[(i, j)].abs() == fib.get(i - j))))
}

/// `λ_min(Z₀)` for any `n ≥ 1`, from the exact characteristic polynomial.
pub fn z0_smallest_eigenvalue(n: usize, tol: f64) -> Result<f64> {
    let c = newton_identities(&power_sums(&z0_dense(n)?))?;
    smallest_root_newton(&c, tol)
}
