//! Exact linear algebra over the rationals, and alternating matrices of
//! polynomials with their Pfaffians.

mod altmatrix;
mod echelon;

pub use altmatrix::{minors_2x2, pfaffian, AltPolyMatrix, PfaffianCache};
pub use echelon::{echelon_with_small_pivots, normalize_vector, streaming_kernel, Echelon};

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{rat, Rational};

/// Dense rectangular matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        echelon_with_small_pivots(&self.to_rows(), self.cols).rank()
    }

    /// Canonical basis of the right null space; see [`Echelon::kernel`].
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        echelon_with_small_pivots(&self.to_rows(), self.cols).kernel()
    }

    /// Inverse by rational Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = RatMatrix::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap(c, p);
            inv.swap(c, p);
            let piv = a[c][c].clone();
            for j in 0..n {
                a[c][j] /= &piv;
                inv[c][j] /= &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[r][j] -= t;
                }
            }
        }
        RatMatrix::from_rows(inv)
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                a.swap(c, p);
                det = -det;
            }
            det *= &a[c][c];
            for r in (c + 1)..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Canonical null-space basis of `m`.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rational>> {
    m.kernel_basis()
}

pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}
