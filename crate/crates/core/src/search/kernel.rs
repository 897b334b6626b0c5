//! Per-matrix evaluation on the hot path and the per-block minimum.
//!
//! For an index the kernel forms `Z = YYᵀ` from row bitmasks, computes the
//! power sums `p_k = trace(Zᵏ) = ⟨Z^a, Z^b⟩_F` (a + b = k, Z symmetric) in
//! integer arithmetic, converts them to the characteristic polynomial with
//! Newton's identities, and finds the least root with Newton's method.

use std::cmp::Ordering;

use crate::charpoly::DEFAULT_MAX_ITERATIONS;
use crate::charpoly::{
    compare_smallest_roots, newton_from_zero, newton_identities_i128, CharPoly, RootStatus,
};
use crate::error::{Error, Result};
use crate::pattern::row_offset;

/// Largest dimension the exhaustive search accepts.
pub const SEARCH_MAX_N: usize = 9;

/// Candidates whose float estimates lie within this absolute distance of the
/// running minimum are ordered exactly.
pub const TIE_WINDOW: f64 = 1e-9;

const M: usize = SEARCH_MAX_N;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Evaluation {
    pub value: f64,
    pub status: RootStatus,
    /// `e₁..eₙ`
    pub e: [i128; M],
}

#[derive(Clone, Debug)]
pub(crate) struct Kernel {
    n: usize,
    tol: f64,
}

impl Kernel {
    pub fn new(n: usize, tol: f64) -> Self {
        assert!((1..=SEARCH_MAX_N).contains(&n));
        Self { n, tol }
    }

    #[inline]
    fn gram(&self, index: u64, z: &mut [[i64; M]; M]) {
        let n = self.n;
        let mut rows = [0u32; M];
        for (r, row) in rows.iter_mut().enumerate().take(n) {
            *row = ((index >> row_offset(r)) as u32 & ((1u32 << r) - 1)) | 1 << r;
        }
        for i in 0..n {
            for j in 0..=i {
                let v = i64::from((rows[i] & rows[j]).count_ones());
                z[i][j] = v;
                z[j][i] = v;
            }
        }
    }

    /// Gershgorin lower bound from the Gram matrix alone, for pruning.
    #[inline]
    pub fn gershgorin(&self, index: u64) -> f64 {
        let mut z = [[0i64; M]; M];
        self.gram(index, &mut z);
        gershgorin(&z, self.n)
    }

    pub fn evaluate(&self, index: u64) -> Result<Evaluation> {
        let n = self.n;
        let mut powers = [[[0i64; M]; M]; M / 2 + 1];
        self.gram(index, &mut powers[0]);

        // Z^1..Z^h; entries of Z^h stay below 81^5 for n ≤ 9
        let h = n.div_ceil(2);
        for a in 1..h {
            let (done, rest) = powers.split_at_mut(a);
            let (prev, base, next) = (&done[a - 1], &done[0], &mut rest[0]);
            for i in 0..n {
                for j in i..n {
                    let mut s = 0i64;
                    for k in 0..n {
                        s += prev[i][k] * base[k][j];
                    }
                    next[i][j] = s;
                    next[j][i] = s;
                }
            }
        }
        let mut p = [0i128; M];
        p[0] = (0..n).map(|i| i128::from(powers[0][i][i])).sum();
        for k in 2..=n {
            let a = k / 2;
            let b = k - a;
            let (x, y) = (&powers[a - 1], &powers[b - 1]);
            let mut s = 0i128;
            for i in 0..n {
                for j in 0..n {
                    s += i128::from(x[i][j]) * i128::from(y[i][j]);
                }
            }
            p[k - 1] = s;
        }

        let mut e = [0i128; M];
        newton_identities_i128(&p[..n], &mut e[..n]).ok_or_else(|| {
            Error::Consistency(format!(
                "Newton's identities failed in 128 bits at index {index}"
            ))
        })?;

        let mut desc = [0f64; M + 1];
        desc[0] = 1.0;
        for k in 0..n {
            let v = e[k] as f64;
            desc[k + 1] = if k % 2 == 0 { -v } else { v };
        }
        let (value, status) =
            newton_from_zero(&desc[..=n], self.tol, DEFAULT_MAX_ITERATIONS, None)?;
        Ok(Evaluation { value, status, e })
    }

    pub fn charpoly(&self, e: &[i128; M]) -> CharPoly {
        CharPoly::from_i128(&e[..self.n])
    }

    /// Least eigenvalue of the Gram matrix at `index`, refined exactly if the
    /// float evaluation stalls.
    pub fn value(&self, index: u64) -> Result<(f64, CharPoly)> {
        let ev = self.evaluate(index)?;
        let poly = self.charpoly(&ev.e);
        let value = match ev.status {
            RootStatus::Converged => ev.value,
            RootStatus::NoiseFloor => {
                crate::charpoly::refine_least_root(&poly, self.tol, ev.value)?
            }
        };
        Ok((value, poly))
    }
}

#[inline]
fn gershgorin(z: &[[i64; M]; M], n: usize) -> f64 {
    (0..n)
        .map(|i| 2 * z[i][i] - z[i][..n].iter().sum::<i64>())
        .min()
        .unwrap_or(0) as f64
}

/// Minimum over a set of indices together with every index attaining it
/// exactly. `indices` is ascending and `value`/`poly` belong to `indices[0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinSet {
    pub value: f64,
    pub poly: CharPoly,
    pub indices: Vec<u64>,
}

impl MinSet {
    pub fn single(index: u64, value: f64, poly: CharPoly) -> Self {
        Self {
            value,
            poly,
            indices: vec![index],
        }
    }

    /// Exact order of least eigenvalues, with the float estimates deciding
    /// outside [`TIE_WINDOW`].
    fn order(a_value: f64, a_poly: &CharPoly, b_value: f64, b_poly: &CharPoly) -> Result<Ordering> {
        if a_value < b_value - TIE_WINDOW {
            return Ok(Ordering::Less);
        }
        if a_value > b_value + TIE_WINDOW {
            return Ok(Ordering::Greater);
        }
        compare_smallest_roots(a_poly, b_poly, Some(a_value), Some(b_value))
    }

    /// Associative, commutative merge of two partial minima.
    pub fn merge(self, other: Self) -> Result<Self> {
        Ok(
            match Self::order(self.value, &self.poly, other.value, &other.poly)? {
                Ordering::Less => self,
                Ordering::Greater => other,
                Ordering::Equal => {
                    let (mut first, second) = if self.indices[0] <= other.indices[0] {
                        (self, other)
                    } else {
                        (other, self)
                    };
                    first.indices.extend(second.indices);
                    first.indices.sort_unstable();
                    first.indices.dedup();
                    first
                }
            },
        )
    }
}

pub(crate) fn merge_opt(a: Option<MinSet>, b: Option<MinSet>) -> Result<Option<MinSet>> {
    Ok(match (a, b) {
        (Some(a), Some(b)) => Some(a.merge(b)?),
        (a, None) => a,
        (None, b) => b,
    })
}

/// Scans `range` in ascending order.
pub(crate) fn scan_range(
    kernel: &Kernel,
    range: std::ops::Range<u64>,
    prune: bool,
) -> Result<Option<MinSet>> {
    let mut best: Option<MinSet> = None;
    for index in range {
        if prune {
            if let Some(b) = &best {
                if kernel.gershgorin(index) > b.value + TIE_WINDOW {
                    continue;
                }
            }
        }
        let ev = kernel.evaluate(index)?;
        let Some(b) = best.as_mut() else {
            let (value, poly) = kernel.value(index)?;
            best = Some(MinSet::single(index, value, poly));
            continue;
        };
        // Newton approaches from below, so even a stalled estimate does not
        // exceed the least root by more than rounding.
        if ev.value > b.value + TIE_WINDOW {
            continue;
        }
        let poly = kernel.charpoly(&ev.e);
        let value = match ev.status {
            RootStatus::Converged => ev.value,
            RootStatus::NoiseFloor => {
                crate::charpoly::refine_least_root(&poly, kernel.tol, ev.value)?
            }
        };
        match MinSet::order(value, &poly, b.value, &b.poly)? {
            Ordering::Less => *b = MinSet::single(index, value, poly),
            Ordering::Equal => b.indices.push(index),
            Ordering::Greater => {}
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::{gram_charpoly, smallest_eigenvalue, DEFAULT_TOL};
    use crate::pattern::{gram, pattern_count, LowerUnitMatrix};

    #[test]
    fn kernel_matches_library_pipeline() {
        for n in 1..=5 {
            let kernel = Kernel::new(n, DEFAULT_TOL);
            for index in 0..pattern_count(n) as u64 {
                let z = gram(&LowerUnitMatrix::from_index(n, u128::from(index)).unwrap());
                let (value, poly) = kernel.value(index).unwrap();
                assert_eq!(poly, gram_charpoly(&z));
                let expected = smallest_eigenvalue(&z, DEFAULT_TOL).unwrap();
                assert!(
                    (value - expected).abs() <= 1e-13 * expected,
                    "n = {n}, index {index}"
                );
            }
        }
    }

    #[test]
    fn kernel_power_sums_at_n9() {
        let kernel = Kernel::new(9, DEFAULT_TOL);
        for index in [0u64, 1, 12345, (1 << 36) - 1, 0xA5A5A5A5A] {
            let z = gram(&LowerUnitMatrix::from_index(9, u128::from(index)).unwrap());
            assert_eq!(kernel.value(index).unwrap().1, gram_charpoly(&z));
        }
    }

    #[test]
    fn merge_is_order_independent() {
        let kernel = Kernel::new(4, DEFAULT_TOL);
        let parts: Vec<MinSet> = (0..64u64)
            .map(|i| {
                let (v, p) = kernel.value(i).unwrap();
                MinSet::single(i, v, p)
            })
            .collect();
        let forward = parts
            .iter()
            .cloned()
            .try_fold(None, |acc, m| merge_opt(acc, Some(m)))
            .unwrap();
        let backward = parts
            .iter()
            .rev()
            .cloned()
            .try_fold(None, |acc, m| merge_opt(acc, Some(m)))
            .unwrap();
        assert_eq!(forward, backward);
        let scanned = scan_range(&kernel, 0..64, false).unwrap();
        assert_eq!(forward, scanned);
    }
}
