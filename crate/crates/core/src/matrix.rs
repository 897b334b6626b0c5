//! Dense square matrices over an arbitrary element type.
//!
//! `SquareMatrix<BigInt>` is the exact unbounded-width integer matrix used by
//! the closed-form and trace computations; `SquareMatrix<i64>` is the fixed
//! width fast path for inverses of packed patterns (entries bounded by
//! Fibonacci numbers); `SquareMatrix<f64>` feeds the floating eigensolvers.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

/// Exact integer matrix of unbounded width.
pub type IntegerMatrix = SquareMatrix<BigInt>;

impl<T> SquareMatrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from row vectors. Panics if the rows are not square.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "row length must equal the number of rows");
            data.extend(row);
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool
    where
        T: PartialEq,
    {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl<T: Zero + One + Clone> SquareMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn is_identity(&self) -> bool
    where
        T: PartialEq,
    {
        let one = T::one();
        let zero = T::zero();
        (0..self.n).all(|i| {
            (0..self.n).all(|j| self[(i, j)] == if i == j { one.clone() } else { zero.clone() })
        })
    }
}

impl<T> SquareMatrix<T>
where
    T: Zero + Clone,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::from_fn(n, |_, _| T::zero());
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * &rhs[(k, j)];
                    let cell = &mut out.data[i * n + j];
                    *cell = std::mem::replace(cell, T::zero()) + prod;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// `trace(self * rhs)` without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> T {
        let n = self.n;
        let mut acc = T::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc + &self[(i, k)] * &rhs[(k, i)];
            }
        }
        acc
    }
}

impl<T: Signed + Clone> SquareMatrix<T> {
    /// Entrywise absolute value `|A|`.
    pub fn abs(&self) -> Self {
        self.map(|x| x.abs())
    }
}

impl SquareMatrix<i64> {
    pub fn to_bigint(&self) -> IntegerMatrix {
        self.map(|&x| BigInt::from(x))
    }

    pub fn to_f64(&self) -> SquareMatrix<f64> {
        self.map(|&x| x as f64)
    }
}

impl IntegerMatrix {
    pub fn to_f64(&self) -> SquareMatrix<f64> {
        use num_traits::ToPrimitive;
        self.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }

    /// Entries as decimal strings, row by row.
    pub fn to_decimal_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.n && j < self.n);
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.n && j < self.n);
        &mut self.data[i * self.n + j]
    }
}

impl<T: Clone + Add<Output = T>> Add for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;

    fn add(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        SquareMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: fmt::Display> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            write!(f, "  [")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}
