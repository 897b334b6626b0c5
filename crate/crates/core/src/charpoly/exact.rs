//! Exact polynomial arithmetic over the rationals: Sturm sequences, root
//! counting and the exact comparison of least roots used to adjudicate ties.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::CharPoly;
use crate::error::{Error, Result};

/// Dense polynomial with rational coefficients in ascending order, trimmed
/// so the last coefficient is nonzero (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(ascending: &[BigInt]) -> Self {
        Self::new(
            ascending
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// `det(λI − M)` as a rational polynomial.
    pub fn from_charpoly(c: &CharPoly) -> Self {
        let mut desc = c.descending();
        desc.reverse();
        Self::from_integers(&desc)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn lead(&self) -> &BigRational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Division with remainder. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let lead_inv = divisor.lead().recip();
        let len = rem.len().saturating_sub(dd);
        let mut quot = vec![BigRational::zero(); len];
        for k in (0..len).rev() {
            let factor = &rem[k + dd] * &lead_inv;
            if factor.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &factor * d;
            }
            quot[k] = factor;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The product of the distinct linear factors: `p / gcd(p, p′)`.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Sturm sequence of the squarefree part.
    pub fn sturm(&self) -> SturmSequence {
        let first = self.squarefree();
        let mut seq = vec![first.clone(), normalize(first.derivative())];
        loop {
            let k = seq.len();
            if seq[k - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[k - 2].div_rem(&seq[k - 1]).1;
            seq.push(normalize(r.scale(&-BigRational::one())));
        }
        SturmSequence { seq }
    }
}

/// Positive rescaling to a unit-magnitude leading coefficient; signs are preserved.
fn normalize(p: RatPoly) -> RatPoly {
    if p.is_zero() {
        return p;
    }
    let s = p.lead().abs().recip();
    p.scale(&s)
}

#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<RatPoly>,
}

impl SturmSequence {
    pub fn sign_changes(&self, x: &BigRational) -> usize {
        let mut changes = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                continue;
            };
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    /// Distinct real roots in `(a, b]`; `a` must not be a root.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }

    pub fn is_constant(&self) -> bool {
        self.seq.first().and_then(RatPoly::degree).unwrap_or(0) == 0
    }
}

/// Distinct real roots of `p` in `(a, b]`.
pub fn count_roots_in(p: &RatPoly, a: &BigRational, b: &BigRational) -> usize {
    p.sturm().count(a, b)
}

/// Interval `(lo, hi]` that contains the least root and no root at or below `lo`.
struct LeastRootBracket {
    sturm: SturmSequence,
    lo: BigRational,
    hi: BigRational,
    v_lo: usize,
    v_hi: usize,
}

impl LeastRootBracket {
    fn new(c: &CharPoly, hint: Option<f64>) -> Result<Self> {
        let trace = c.trace();
        if c.degree() == 0 || !trace.is_positive() || !c.determinant().is_positive() {
            return Err(Error::Domain(
                "least-root comparison needs a polynomial with positive roots".into(),
            ));
        }
        let sturm = RatPoly::from_charpoly(c).sturm();
        let zero = BigRational::zero();
        let v_zero = sturm.sign_changes(&zero);
        if let Some(h) = hint.filter(|h| h.is_finite() && *h > 0.0) {
            let lo = BigRational::from_float(h * (1.0 - 1e-7)).expect("finite");
            let hi = BigRational::from_float(h * (1.0 + 1e-7)).expect("finite");
            let (v_lo, v_hi) = (sturm.sign_changes(&lo), sturm.sign_changes(&hi));
            if v_lo == v_zero && v_hi < v_lo {
                return Ok(Self {
                    sturm,
                    lo,
                    hi,
                    v_lo,
                    v_hi,
                });
            }
        }
        // positive roots sum to the trace
        let hi = BigRational::from_integer(trace);
        let v_hi = sturm.sign_changes(&hi);
        if v_hi >= v_zero {
            return Err(Error::Domain("polynomial has no positive root".into()));
        }
        Ok(Self {
            sturm,
            lo: zero,
            hi,
            v_lo: v_zero,
            v_hi,
        })
    }

    fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    fn isolated(&self) -> bool {
        self.v_lo - self.v_hi == 1
    }

    fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        let v_mid = self.sturm.sign_changes(&mid);
        if v_mid < self.v_lo {
            self.hi = mid;
            self.v_hi = v_mid;
        } else {
            self.lo = mid;
            self.v_lo = v_mid;
        }
    }
}

const MAX_BISECTIONS: usize = 4000;

/// Exact order of the least roots of two characteristic polynomials whose
/// roots are all real and positive (Gram sources). Optional float hints
/// seed the brackets; they never affect the answer.
pub fn compare_smallest_roots(
    p: &CharPoly,
    q: &CharPoly,
    hint_p: Option<f64>,
    hint_q: Option<f64>,
) -> Result<Ordering> {
    if p == q {
        return Ok(Ordering::Equal);
    }
    let mut bp = LeastRootBracket::new(p, hint_p)?;
    let mut bq = LeastRootBracket::new(q, hint_q)?;
    let common = RatPoly::from_charpoly(p).gcd(&RatPoly::from_charpoly(q));
    let common = (common.degree().unwrap_or(0) > 0).then(|| common.sturm());

    for _ in 0..MAX_BISECTIONS {
        if bp.hi <= bq.lo {
            return Ok(Ordering::Less);
        }
        if bq.hi <= bp.lo {
            return Ok(Ordering::Greater);
        }
        if let Some(g) = &common {
            if bp.isolated() && bq.isolated() {
                let lo = (&bp.lo).max(&bq.lo);
                let hi = (&bp.hi).min(&bq.hi);
                // a shared root inside both isolating brackets is both least roots
                if g.count(lo, hi) > 0 {
                    return Ok(Ordering::Equal);
                }
            }
        }
        if bp.width() >= bq.width() {
            bp.bisect();
        } else {
            bq.bisect();
        }
    }
    Err(Error::Convergence {
        method: "exact least-root comparison",
        detail: format!("brackets not separated after {MAX_BISECTIONS} bisections"),
    })
}

/// Least root of a positive-rooted polynomial by exact bisection, to relative width `tol`.
pub(crate) fn least_root_bisection(c: &CharPoly, tol: f64, hint: Option<f64>) -> Result<f64> {
    use num_traits::ToPrimitive;
    let mut b = LeastRootBracket::new(c, hint)?;
    let tol_r = BigRational::from_float(tol).expect("finite tolerance");
    for _ in 0..MAX_BISECTIONS {
        if b.lo.is_positive() && b.width() <= &tol_r * &b.lo {
            break;
        }
        b.bisect();
    }
    let mid = (&b.lo + &b.hi) / BigRational::from_integer(BigInt::from(2));
    mid.to_f64()
        .ok_or_else(|| Error::Consistency("least root not representable".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(e: &[i64]) -> CharPoly {
        CharPoly {
            e: e.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn poly_arithmetic() {
        // (λ−1)²(λ−2) = λ³ − 4λ² + 5λ − 2
        let p = RatPoly::from_charpoly(&cp(&[4, 5, 2]));
        assert_eq!(p.eval(&rat(1, 1)), rat(0, 1));
        assert_eq!(p.eval(&rat(3, 1)), rat(4, 1));
        let sq = p.squarefree();
        assert_eq!(sq.coeffs(), &[rat(2, 1), rat(-3, 1), rat(1, 1)]);
        let (q, r) = p.div_rem(&sq);
        assert!(r.is_zero());
        assert_eq!(q.coeffs(), &[rat(-1, 1), rat(1, 1)]);
    }

    #[test]
    fn sturm_counts_distinct_roots() {
        let p = RatPoly::from_charpoly(&cp(&[4, 5, 2]));
        assert_eq!(count_roots_in(&p, &rat(0, 1), &rat(10, 1)), 2);
        assert_eq!(count_roots_in(&p, &rat(0, 1), &rat(1, 1)), 1);
        assert_eq!(count_roots_in(&p, &rat(1, 1), &rat(3, 2)), 0);
        assert_eq!(count_roots_in(&p, &rat(3, 2), &rat(2, 1)), 1);
    }

    #[test]
    fn least_root_order() {
        let golden = cp(&[3, 1]); // λ² − 3λ + 1, least root ≈ 0.382
        let cubic = cp(&[5, 6, 1]); // least root ≈ 0.198
        let ones = cp(&[3, 3, 1]); // (λ−1)³
        assert_eq!(
            compare_smallest_roots(&cubic, &golden, None, None).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            compare_smallest_roots(&ones, &golden, Some(1.0), None).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            compare_smallest_roots(&golden, &golden, None, None).unwrap(),
            Ordering::Equal
        );
        // (λ² − 3λ + 1)(λ − 4) shares the least root with λ² − 3λ + 1.
        let shared = cp(&[7, 13, 4]);
        assert_eq!(
            compare_smallest_roots(&shared, &golden, None, Some(0.38)).unwrap(),
            Ordering::Equal
        );
        // (λ − 1)(λ² − 3λ + 1)
        let shared2 = cp(&[4, 4, 1]);
        assert_eq!(
            compare_smallest_roots(&golden, &shared2, None, None).unwrap(),
            Ordering::Equal
        );
        // wrong hints must not matter
        assert_eq!(
            compare_smallest_roots(&cubic, &golden, Some(5.0), Some(1e-3)).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn bisection_matches_quadratic_formula() {
        let x = least_root_bisection(&cp(&[3, 1]), 1e-14, None).unwrap();
        assert!((x - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
        let x = least_root_bisection(&cp(&[4, 6, 4, 1]), 1e-14, None).unwrap();
        assert!((x - 1.0).abs() < 1e-13);
    }
}
