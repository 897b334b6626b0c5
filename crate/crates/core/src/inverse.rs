//! Exact inverses of elements of Kₙ.
//!
//! Entries of `Y⁻¹` are bounded in magnitude by `F_{i−j}`, so for packed
//! patterns (n ≤ 16, largest entry at most F₁₅ = 610) `i64` is exact with a
//! wide margin and no bignum arithmetic is needed.

use crate::error::{Error, Result};
use crate::extremal::fibonacci_u64;
use crate::matrix::SquareMatrix;
use crate::pattern::LowerUnitMatrix;

/// `Y⁻¹` by the column recurrence `a_kl = −Σ_{i=l}^{k−1} n_ki a_il` (k > l),
/// with `a_kk = 1` and zeros above the diagonal.
pub fn invert_unit_lower(y: &LowerUnitMatrix) -> SquareMatrix<i64> {
    let n = y.n();
    let mut a = SquareMatrix::<i64>::identity(n);
    for k in 1..n {
        // lower part of row k of N
        let mut row = y.row_mask(k) & !(1 << k);
        while row != 0 {
            let i = row.trailing_zeros() as usize;
            row &= row - 1;
            // n_ki = 1 contributes −a_il to every column l ≤ i
            for l in 0..=i {
                a[(k, l)] -= a[(i, l)];
            }
        }
    }
    a
}

/// `Y⁻¹ = I − N + N² − ⋯ + (−1)^{n−1} N^{n−1}`, evaluated by dense products.
pub fn invert_via_nilpotent(y: &LowerUnitMatrix) -> SquareMatrix<i64> {
    let n = y.n();
    let nil = nilpotent_dense(y);
    let mut sum = SquareMatrix::<i64>::identity(n);
    let mut power = SquareMatrix::<i64>::identity(n);
    for k in 1..n {
        power = power.matmul(&nil);
        let sign = if k % 2 == 1 { -1 } else { 1 };
        sum = &sum + &power.map(|&x| sign * x);
    }
    sum
}

fn nilpotent_dense(y: &LowerUnitMatrix) -> SquareMatrix<i64> {
    SquareMatrix::from_fn(y.n(), |i, j| i64::from(y.nilpotent(i, j)))
}

/// `(Nᵏ)_ij = 0` whenever `i − j < k`. Always true; exposed for testing.
pub fn nilpotent_band_check(y: &LowerUnitMatrix, k: usize) -> Result<bool> {
    let n = y.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("power k = {k} must lie in 1..={n}")));
    }
    let nil = nilpotent_dense(y);
    let mut power = nil.clone();
    for _ in 1..k {
        power = power.matmul(&nil);
    }
    Ok((0..n)
        .all(|i| (0..n).all(|j| (i as isize - j as isize) >= k as isize || power[(i, j)] == 0)))
}

/// First position (row-major, 0-based) where `|a_ij| > F_{i−j}` below the
/// diagonal, if any.
pub fn fibonacci_bound_violation(a: &SquareMatrix<i64>) -> Option<(usize, usize)> {
    let n = a.n();
    for i in 0..n {
        for j in 0..i {
            let bound = fibonacci_u64(i - j).unwrap_or(u64::MAX);
            if a[(i, j)].unsigned_abs() > bound {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn fibonacci_bound_holds(a: &SquareMatrix<i64>) -> bool {
    fibonacci_bound_violation(a).is_none()
}

/// `Z⁻¹ = (Y⁻¹)ᵀ Y⁻¹`, i.e. `(Z⁻¹)_ij = Σ_k a_ki a_kj`.
pub fn gram_inverse(y: &LowerUnitMatrix) -> SquareMatrix<i64> {
    let a = invert_unit_lower(y);
    let n = y.n();
    SquareMatrix::from_fn(n, |i, j| (i.max(j)..n).map(|k| a[(k, i)] * a[(k, j)]).sum())
}
