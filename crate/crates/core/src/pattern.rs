//! Bit-packed elements of Kₙ (unit lower-triangular (0,1)-matrices) and
//! their Gram matrices in Lₙ.
//!
//! Strictly-lower positions are numbered row-major: (2,1), (3,1), (3,2),
//! (4,1), ... in 1-based terms. Bit `k` of the packed word is position `k`,
//! so the lower part of each row is a contiguous run of bits and the
//! integer value of the word is the element's index in Kₙ.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// Largest dimension whose strictly-lower part fits the 128-bit word.
pub const MAX_PACKED_N: usize = 16;

/// Number of strictly-lower positions of an `n × n` matrix.
pub const fn lower_bits(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Bit offset of the first strictly-lower position of 0-based row `row`.
#[inline]
pub const fn row_offset(row: usize) -> usize {
    row * row.saturating_sub(1) / 2
}

/// |Kₙ| = 2^{n(n−1)/2}. Panics above [`MAX_PACKED_N`].
pub fn pattern_count(n: usize) -> u128 {
    assert!(n <= MAX_PACKED_N, "n = {n} exceeds the packed range");
    let bits = lower_bits(n);
    if bits == 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

fn check_packed_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension {
            n,
            reason: "dimension must be at least 1",
        });
    }
    if n > MAX_PACKED_N {
        return Err(Error::Dimension {
            n,
            reason: "packed patterns hold at most 16 rows",
        });
    }
    Ok(())
}

/// An element `Y` of Kₙ. The same bits describe the nilpotent part `N = Y − I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LowerUnitMatrix {
    n: usize,
    bits: u128,
}

impl LowerUnitMatrix {
    pub fn identity(n: usize) -> Result<Self> {
        check_packed_n(n)?;
        Ok(Self { n, bits: 0 })
    }

    /// Decodes the `index`-th element of Kₙ.
    pub fn from_index(n: usize, index: u128) -> Result<Self> {
        check_packed_n(n)?;
        let bits = lower_bits(n);
        if bits < 128 && index >> bits != 0 {
            return Err(Error::IndexOutOfRange { n, index, bits });
        }
        Ok(Self { n, bits: index })
    }

    /// The extremal pattern: strictly-lower entry (i, j) is 1 iff i − j is odd.
    pub fn y0(n: usize) -> Result<Self> {
        check_packed_n(n)?;
        let mut bits = 0u128;
        for i in 1..n {
            for j in 0..i {
                if (i + j) % 2 == 1 {
                    bits |= 1 << (row_offset(i) + j);
                }
            }
        }
        Ok(Self { n, bits })
    }

    /// Validates and packs a dense unit lower-triangular (0,1) matrix.
    pub fn encode(dense: &SquareMatrix<i64>) -> Result<Self> {
        let n = dense.n();
        check_packed_n(n)?;
        let mut bits = 0u128;
        for i in 0..n {
            for j in 0..n {
                let v = dense[(i, j)];
                let ok = match i.cmp(&j) {
                    std::cmp::Ordering::Less => v == 0,
                    std::cmp::Ordering::Equal => v == 1,
                    std::cmp::Ordering::Greater => v == 0 || v == 1,
                };
                if !ok {
                    return Err(Error::InvalidPattern {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                if i > j && v == 1 {
                    bits |= 1 << (row_offset(i) + j);
                }
            }
        }
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Position of this element in the enumeration of Kₙ.
    pub fn index(&self) -> u128 {
        self.bits
    }

    /// Entry (i, j), 0-based.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => true,
            std::cmp::Ordering::Greater => self.bits >> (row_offset(i) + j) & 1 == 1,
        }
    }

    /// Entry (i, j) of the nilpotent part `N = Y − I`.
    #[inline]
    pub fn nilpotent(&self, i: usize, j: usize) -> bool {
        i > j && self.get(i, j)
    }

    /// Row `i` of `Y` as a column bitmask, diagonal included.
    #[inline]
    pub fn row_mask(&self, i: usize) -> u32 {
        let lower = (self.bits >> row_offset(i)) as u32 & ((1u32 << i) - 1);
        lower | 1 << i
    }

    /// Number of ones in the strictly-lower part of row `i`.
    pub fn row_popcount(&self, i: usize) -> u32 {
        self.row_mask(i).count_ones() - 1
    }

    pub fn to_dense(&self) -> SquareMatrix<i64> {
        SquareMatrix::from_fn(self.n, |i, j| i64::from(self.get(i, j)))
    }

    /// Block-diagonal `diag(Y, 1)` in Kₙ₊₁.
    pub fn padded(&self) -> Result<Self> {
        check_packed_n(self.n + 1)?;
        Ok(Self {
            n: self.n + 1,
            bits: self.bits,
        })
    }
}

/// `Z = YYᵀ ∈ Lₙ`, stored as a full symmetric matrix together with its factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: SquareMatrix<i64>,
    factor: LowerUnitMatrix,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.factor.n
    }

    pub fn entries(&self) -> &SquareMatrix<i64> {
        &self.entries
    }

    /// The unique `Y ∈ Kₙ` with `Z = YYᵀ` (the Cholesky factor).
    pub fn factor(&self) -> LowerUnitMatrix {
        self.factor
    }
}

/// Exact Gram product: `Z_ij = |row_i ∩ row_j|` over the rows of `Y`.
pub fn gram(y: &LowerUnitMatrix) -> GramMatrix {
    let masks: Vec<u32> = (0..y.n).map(|i| y.row_mask(i)).collect();
    let entries = SquareMatrix::from_fn(y.n, |i, j| i64::from((masks[i] & masks[j]).count_ones()));
    GramMatrix {
        entries,
        factor: *y,
    }
}
