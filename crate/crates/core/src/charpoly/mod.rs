//! Characteristic polynomials of integer matrices and the eigenvalue tools
//! built on them.
//!
//! The pipeline is: exact power sums `p_k = trace(Mᵏ)`, Newton's identities
//! to the elementary symmetric coefficients `e_k`, then Newton's method from
//! zero for the least root. Faddeev–LeVerrier is an independent route to the
//! same coefficients, and the floating eigensolvers in [`spectral`] serve as
//! cross-checks.

mod exact;
mod root;
pub mod spectral;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntegerMatrix, SquareMatrix};
use crate::pattern::GramMatrix;

pub use exact::{compare_smallest_roots, count_roots_in, RatPoly};
pub(crate) use root::{newton_from_zero, refine_least_root, RootStatus};
pub use root::{
    newton_iterates, smallest_root_newton, NewtonRun, DEFAULT_MAX_ITERATIONS, DEFAULT_TOL,
};
pub use spectral::{
    jacobi_eigenvalues, spectral_radius_power_iteration, spectral_radius_symmetric,
};

/// `p_k = trace(Mᵏ)` for `k = 1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSums {
    pub p: Vec<BigInt>,
}

/// `det(λI − M) = λⁿ − e₁λⁿ⁻¹ + e₂λⁿ⁻² − ⋯ + (−1)ⁿeₙ`, stored as `e₁..eₙ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharPoly {
    pub e: Vec<BigInt>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.e.len()
    }

    pub fn trace(&self) -> BigInt {
        self.e.first().cloned().unwrap_or_else(BigInt::zero)
    }

    /// `eₙ`; the empty polynomial (n = 0) has determinant 1.
    pub fn determinant(&self) -> BigInt {
        self.e.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Coefficients from `λⁿ` down to the constant term: `1, −e₁, e₂, …`.
    pub fn descending(&self) -> Vec<BigInt> {
        std::iter::once(BigInt::one())
            .chain(
                self.e
                    .iter()
                    .enumerate()
                    .map(|(i, e)| if i % 2 == 0 { -e } else { e.clone() }),
            )
            .collect()
    }

    pub fn descending_f64(&self) -> Vec<f64> {
        self.descending()
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub(crate) fn from_i128(e: &[i128]) -> Self {
        Self {
            e: e.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }
}

fn power_sums_exact(m: &IntegerMatrix) -> PowerSums {
    let mut p = Vec::with_capacity(m.n());
    let mut power = m.clone();
    for k in 1..=m.n() {
        if k > 1 {
            power = power.matmul(m);
        }
        p.push(power.trace());
    }
    PowerSums { p }
}

fn checked_matmul(a: &[i128], b: &[i128], n: usize) -> Option<Vec<i128>> {
    let mut out = vec![0i128; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                let cell = &mut out[i * n + j];
                *cell = cell.checked_add(x.checked_mul(b[k * n + j])?)?;
            }
        }
    }
    Some(out)
}

fn power_sums_i128(m: &SquareMatrix<i64>) -> Option<Vec<i128>> {
    let n = m.n();
    let base: Vec<i128> = m.as_slice().iter().map(|&x| i128::from(x)).collect();
    let mut power = base.clone();
    let mut p = Vec::with_capacity(n);
    for k in 1..=n {
        if k > 1 {
            power = checked_matmul(&power, &base, n)?;
        }
        let mut t = 0i128;
        for i in 0..n {
            t = t.checked_add(power[i * n + i])?;
        }
        p.push(t);
    }
    Some(p)
}

/// Power sums of an exact integer matrix.
pub fn power_sums(m: &IntegerMatrix) -> PowerSums {
    power_sums_exact(m)
}

/// Power sums of a fixed-width matrix: checked 128-bit arithmetic, escalating
/// to unbounded integers on overflow.
pub fn power_sums_i64(m: &SquareMatrix<i64>) -> PowerSums {
    match power_sums_i128(m) {
        Some(p) => PowerSums {
            p: p.into_iter().map(BigInt::from).collect(),
        },
        None => power_sums_exact(&m.to_bigint()),
    }
}

pub fn gram_power_sums(z: &GramMatrix) -> PowerSums {
    power_sums_i64(z.entries())
}

/// `e_k = (1/k) Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} p_i` with `e₀ = 1`.
pub fn newton_identities(sums: &PowerSums) -> Result<CharPoly> {
    let mut e: Vec<BigInt> = Vec::with_capacity(sums.p.len() + 1);
    e.push(BigInt::one());
    for k in 1..=sums.p.len() {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &sums.p[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::Consistency(format!(
                "Newton's identities: {acc} is not divisible by {k} (power sums are not those of an integer matrix)"
            )));
        }
        e.push(q);
    }
    e.remove(0);
    Ok(CharPoly { e })
}

/// Newton's identities on 128-bit integers. `None` on overflow or inexact
/// division. Writes `e₁..eₙ` into `e[..p.len()]`.
#[inline]
pub(crate) fn newton_identities_i128(p: &[i128], e: &mut [i128]) -> Option<()> {
    let n = p.len();
    for k in 1..=n {
        let mut acc = 0i128;
        for i in 1..=k {
            let prev = if i == k { 1 } else { e[k - i - 1] };
            let term = prev.checked_mul(p[i - 1])?;
            acc = if i % 2 == 1 {
                acc.checked_add(term)?
            } else {
                acc.checked_sub(term)?
            };
        }
        let k = k as i128;
        if acc % k != 0 {
            return None;
        }
        e[(k - 1) as usize] = acc / k;
    }
    Some(())
}

/// Faddeev–LeVerrier: `M₀ = 0`, `M_k = A M_{k−1} + c_{n−k+1} I`,
/// `c_{n−k} = −trace(A M_k)/k`.
pub fn faddeev_leverrier(a: &IntegerMatrix) -> Result<CharPoly> {
    let n = a.n();
    // c[i] is the coefficient of λ^i in det(λI − A)
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = IntegerMatrix::zeros(n);
    for k in 1..=n {
        let mut next = a.matmul(&m);
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        m = next;
        let t = a.trace_of_product(&m);
        let (q, r) = t.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::Consistency(format!(
                "Faddeev–LeVerrier: trace {t} not divisible by {k}"
            )));
        }
        c[n - k] = -q;
    }
    let e = (1..=n)
        .map(|k| {
            if k % 2 == 0 {
                c[n - k].clone()
            } else {
                -&c[n - k]
            }
        })
        .collect();
    Ok(CharPoly { e })
}

/// Characteristic polynomial of a Gram matrix via power sums and Newton's identities.
pub fn gram_charpoly(z: &GramMatrix) -> CharPoly {
    newton_identities(&gram_power_sums(z)).expect("power sums of an integer matrix")
}

/// Smallest eigenvalue of `Z ∈ Lₙ`: power sums, Newton's identities, then
/// Newton's method from zero.
pub fn smallest_eigenvalue(z: &GramMatrix, tol: f64) -> Result<f64> {
    smallest_root_newton(&gram_charpoly(z), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::z0_inverse_closed;
    use crate::pattern::{gram, pattern_count, LowerUnitMatrix};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sums(v: &[i64]) -> PowerSums {
        PowerSums { p: ints(v) }
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(
            power_sums_i64(&SquareMatrix::identity(3)).p,
            ints(&[3, 3, 3])
        );
        let z0 = gram(&LowerUnitMatrix::y0(3).unwrap());
        assert_eq!(gram_power_sums(&z0).p, ints(&[5, 13, 38]));
        let m = SquareMatrix::from_rows(vec![vec![2i64, -1], vec![-1, 1]]);
        assert_eq!(power_sums_i64(&m).p, ints(&[3, 7]));
    }

    #[test]
    fn power_sums_escalate_on_overflow() {
        let big = SquareMatrix::from_fn(3, |_, _| i64::MAX / 2);
        let fast = power_sums_i64(&big);
        assert_eq!(fast, power_sums(&big.to_bigint()));
        assert!(fast.p[2] > BigInt::from(i128::MAX));
    }

    #[test]
    fn newton_identity_examples() {
        assert_eq!(
            newton_identities(&sums(&[3, 3, 3])).unwrap().e,
            ints(&[3, 3, 1])
        );
        assert_eq!(
            newton_identities(&sums(&[5, 13, 38])).unwrap().e,
            ints(&[5, 6, 1])
        );
        assert_eq!(newton_identities(&sums(&[3, 7])).unwrap().e, ints(&[3, 1]));
        assert!(matches!(
            newton_identities(&sums(&[1, 2])),
            Err(Error::Consistency(_))
        ));

        let mut e = [0i128; 3];
        newton_identities_i128(&[5, 13, 38], &mut e).unwrap();
        assert_eq!(e, [5, 6, 1]);
        assert!(newton_identities_i128(&[1, 2], &mut e).is_none());
    }

    #[test]
    fn faddeev_examples() {
        assert_eq!(
            faddeev_leverrier(&IntegerMatrix::identity(2)).unwrap().e,
            ints(&[2, 1])
        );
        let z0 = gram(&LowerUnitMatrix::y0(3).unwrap());
        assert_eq!(
            faddeev_leverrier(&z0.entries().to_bigint()).unwrap().e,
            ints(&[5, 6, 1])
        );
        let m = IntegerMatrix::from_rows(vec![ints(&[2, -1]), ints(&[-1, 1])]);
        assert_eq!(faddeev_leverrier(&m).unwrap().e, ints(&[3, 1]));
    }

    #[test]
    fn charpoly_layout() {
        let c = CharPoly {
            e: ints(&[5, 6, 1]),
        };
        assert_eq!(c.descending(), ints(&[1, -5, 6, -1]));
        assert_eq!(c.trace(), BigInt::from(5));
        assert_eq!(c.determinant(), BigInt::one());
    }

    #[test]
    fn exhaustive_oracle_agreement_and_unit_determinant() {
        for n in 1..=5 {
            for index in 0..pattern_count(n) {
                let z = gram(&LowerUnitMatrix::from_index(n, index).unwrap());
                let c = gram_charpoly(&z);
                assert_eq!(c, faddeev_leverrier(&z.entries().to_bigint()).unwrap());
                assert_eq!(c.determinant(), BigInt::one());
            }
        }
        for n in 1..=10 {
            let zi = z0_inverse_closed(n).unwrap();
            let c = newton_identities(&power_sums(&zi)).unwrap();
            assert_eq!(c, faddeev_leverrier(&zi).unwrap());
            assert_eq!(c.determinant(), BigInt::one());
        }
    }

    #[test]
    fn smallest_eigenvalue_examples() {
        let tol = DEFAULT_TOL;
        assert_eq!(
            smallest_eigenvalue(&gram(&LowerUnitMatrix::identity(4).unwrap()), tol).unwrap(),
            1.0
        );
        let z = gram(&LowerUnitMatrix::from_index(2, 1).unwrap());
        let golden = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((smallest_eigenvalue(&z, tol).unwrap() - golden).abs() < 1e-15);
    }
}
