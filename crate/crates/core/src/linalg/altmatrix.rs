use std::collections::HashMap;
use std::fmt;

use num_traits::One;

use super::RatMatrix;
use crate::error::{Error, Result};
use crate::exactmath::{Polynomial, Rational};

/// Square alternating matrix with polynomial entries.
///
/// Only the strict upper triangle is stored; `get(j, i)` is computed as the
/// negation of `get(i, j)` and the diagonal is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct AltPolyMatrix {
    size: usize,
    arity: usize,
    upper: Vec<Polynomial>,
}

impl AltPolyMatrix {
    pub fn zero(size: usize, arity: usize) -> Self {
        let count = size * size.saturating_sub(1) / 2;
        AltPolyMatrix { size, arity, upper: vec![Polynomial::zero(arity); count] }
    }

    /// Builds the matrix from a function giving the entries with `i < j`.
    pub fn from_upper<F>(size: usize, arity: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Polynomial,
    {
        let mut m = AltPolyMatrix::zero(size, arity);
        for i in 0..size {
            for j in (i + 1)..size {
                let p = f(i, j);
                m.set(i, j, p);
            }
        }
        m
    }

    /// Builds from a full grid, checking that it is alternating.
    pub fn from_full(grid: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = grid.len();
        let arity = grid.first().and_then(|r| r.first()).map(Polynomial::arity).unwrap_or(0);
        for row in &grid {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        for i in 0..n {
            if !grid[i][i].is_zero() {
                return Err(Error::InvalidInput(format!("diagonal entry ({}, {}) is nonzero", i + 1, i + 1)));
            }
            for j in (i + 1)..n {
                if grid[j][i] != -&grid[i][j] {
                    return Err(Error::InvalidInput(format!(
                        "entries ({}, {}) and ({}, {}) are not opposite",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(AltPolyMatrix::from_upper(n, arity, |i, j| grid[i][j].clone()))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.size);
        i * self.size - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Entry `(i, j)`, zero-based.
    pub fn get(&self, i: usize, j: usize) -> Polynomial {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[self.slot(i, j)].clone(),
            std::cmp::Ordering::Greater => -&self.upper[self.slot(j, i)],
            std::cmp::Ordering::Equal => Polynomial::zero(self.arity),
        }
    }

    /// Borrow of an entry above the diagonal.
    pub fn upper(&self, i: usize, j: usize) -> &Polynomial {
        &self.upper[self.slot(i, j)]
    }

    /// Sets `(i, j)` and implicitly `(j, i) = -(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        assert_eq!(p.arity(), self.arity, "entry arity mismatch");
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                let s = self.slot(i, j);
                self.upper[s] = p;
            }
            std::cmp::Ordering::Greater => {
                let s = self.slot(j, i);
                self.upper[s] = -&p;
            }
            std::cmp::Ordering::Equal => assert!(p.is_zero(), "diagonal of an alternating matrix must be zero"),
        }
    }

    /// Upper-triangle entries in row-major order.
    pub fn upper_entries(&self) -> impl Iterator<Item = ((usize, usize), &Polynomial)> {
        let n = self.size;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j))).zip(self.upper.iter())
    }

    pub fn to_full(&self) -> Vec<Vec<Polynomial>> {
        (0..self.size).map(|i| (0..self.size).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Polynomial::is_zero)
    }

    /// Whether every entry is a form of degree `d`.
    pub fn entries_are_forms_of_degree(&self, d: u32) -> bool {
        self.upper.iter().all(|p| p.is_form_of_degree(d))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn map<F: FnMut(&Polynomial) -> Polynomial>(&self, f: F) -> Self {
        let upper: Vec<Polynomial> = self.upper.iter().map(f).collect();
        let arity = upper.first().map(Polynomial::arity).unwrap_or(self.arity);
        AltPolyMatrix { size: self.size, arity, upper }
    }

    pub fn try_map<F: FnMut(&Polynomial) -> Result<Polynomial>>(&self, f: F) -> Result<Self> {
        let upper: Vec<Polynomial> = self.upper.iter().map(f).collect::<Result<_>>()?;
        let arity = upper.first().map(Polynomial::arity).unwrap_or(self.arity);
        Ok(AltPolyMatrix { size: self.size, arity, upper })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        AltPolyMatrix {
            size: self.size,
            arity: self.arity,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        AltPolyMatrix {
            size: self.size,
            arity: self.arity,
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a - b).collect(),
        }
    }

    /// Evaluates every entry at `point`.
    pub fn eval(&self, point: &[Rational]) -> Result<RatMatrix> {
        let n = self.size;
        let mut m = RatMatrix::zeros(n, n);
        for ((i, j), p) in self.upper_entries() {
            let v = p.eval(point)?;
            m.set(j, i, -v.clone());
            m.set(i, j, v);
        }
        Ok(m)
    }

    /// If `self = lambda * other` for a single rational lambda, returns it.
    pub fn ratio_to(&self, other: &AltPolyMatrix) -> Option<Rational> {
        if self.size != other.size {
            return None;
        }
        let (k, lead) = other.upper.iter().enumerate().find(|(_, p)| !p.is_zero())?;
        let lambda = self.upper[k].ratio_to(lead)?;
        if self.upper.iter().zip(&other.upper).all(|(a, b)| a == &b.scale(&lambda)) {
            Some(lambda)
        } else {
            None
        }
    }
}

impl fmt::Debug for AltPolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AltPolyMatrix({}x{}) [", self.size, self.size)?;
        for ((i, j), p) in self.upper_entries() {
            writeln!(f, "  ({}, {}): {p}", i + 1, j + 1)?;
        }
        write!(f, "]")
    }
}

/// Memo table for Pfaffians of principal submatrices of one matrix.
pub struct PfaffianCache<'a> {
    m: &'a AltPolyMatrix,
    memo: HashMap<Vec<usize>, Polynomial>,
}

impl<'a> PfaffianCache<'a> {
    pub fn new(m: &'a AltPolyMatrix) -> Self {
        PfaffianCache { m, memo: HashMap::new() }
    }

    /// Pfaffian of the principal submatrix on the (sorted) index set `idx`,
    /// by expansion along its first row:
    /// `pf = sum_j (-1)^(j+1) m[i0][ij] pf(idx without i0, ij)`.
    pub fn pfaffian(&mut self, idx: &[usize]) -> Result<Polynomial> {
        if idx.len() % 2 == 1 {
            return Err(Error::OddPfaffian(idx.len()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.m.size()) {
            return Err(Error::IndexOutOfRange { index: bad, arity: self.m.size() });
        }
        Ok(self.pf_rec(idx))
    }

    fn pf_rec(&mut self, idx: &[usize]) -> Polynomial {
        let arity = self.m.arity();
        if idx.is_empty() {
            return Polynomial::constant(arity, Rational::one());
        }
        if idx.len() == 2 {
            return self.m.get(idx[0], idx[1]);
        }
        if let Some(p) = self.memo.get(idx) {
            return p.clone();
        }
        let first = idx[0];
        let mut acc = Polynomial::zero(arity);
        for pos in 1..idx.len() {
            let entry = self.m.get(first, idx[pos]);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|(k, _)| k + 1 != pos).map(|(_, &v)| v).collect();
            let sub = self.pf_rec(&rest);
            if sub.is_zero() {
                continue;
            }
            let term = &entry * &sub;
            if pos % 2 == 1 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        self.memo.insert(idx.to_vec(), acc.clone());
        acc
    }
}

/// Pfaffian of the principal submatrix of `m` on the index set `idx`.
pub fn pfaffian(m: &AltPolyMatrix, idx: &[usize]) -> Result<Polynomial> {
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    PfaffianCache::new(m).pfaffian(&sorted)
}

/// The 2x2 minors `g[0][i] g[1][j] - g[0][j] g[1][i]` for all `i < j`,
/// in row-major pair order.
pub fn minors_2x2(grad: &[Vec<Polynomial>]) -> Result<Vec<((usize, usize), Polynomial)>> {
    if grad.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: grad.len() });
    }
    let n = grad[0].len();
    if grad[1].len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: grad[1].len() });
    }
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let m = &(&grad[0][i] * &grad[1][j]) - &(&grad[0][j] * &grad[1][i]);
            out.push(((i, j), m));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, Monomial};
    use proptest::prelude::*;

    fn cofactor_det(m: &[Vec<Polynomial>], arity: usize) -> Polynomial {
        let n = m.len();
        if n == 0 {
            return Polynomial::constant(arity, rat(1));
        }
        let mut acc = Polynomial::zero(arity);
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Polynomial>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
                .collect();
            let t = &m[0][j] * &cofactor_det(&minor, arity);
            if j % 2 == 0 {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        acc
    }

    /// Generic matrix whose upper entries are independent variables.
    fn generic(n: usize) -> AltPolyMatrix {
        let arity = n * (n - 1) / 2;
        let mut k = 0;
        AltPolyMatrix::from_upper(n, arity, |_, _| {
            k += 1;
            Polynomial::var(arity, k - 1)
        })
    }

    #[test]
    fn base_case_and_four_by_four() {
        let m = generic(2);
        assert_eq!(pfaffian(&m, &[0, 1]).unwrap(), m.get(0, 1));
        let m = generic(4);
        let expect =
            &(&(&m.get(0, 1) * &m.get(2, 3)) - &(&m.get(0, 2) * &m.get(1, 3))) + &(&m.get(0, 3) * &m.get(1, 2));
        assert_eq!(pfaffian(&m, &[0, 1, 2, 3]).unwrap(), expect);
        assert_eq!(pfaffian(&m, &[0, 1, 2]), Err(Error::OddPfaffian(3)));
    }

    #[test]
    fn det_is_pf_squared_generic_six() {
        let m = generic(6);
        let pf = pfaffian(&m, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(pf.len(), 15);
        assert_eq!(cofactor_det(&m.to_full(), m.arity()), &pf * &pf);
    }

    #[test]
    fn minors_examples() {
        let x = |i| Polynomial::var(4, i);
        let m = minors_2x2(&[vec![x(0), x(1)], vec![x(2), x(3)]]).unwrap();
        assert_eq!(m[0].1, &(&x(0) * &x(3)) - &(&x(1) * &x(2)));
        let prop = minors_2x2(&[vec![x(0), x(1)], vec![x(0).scale(&rat(2)), x(1).scale(&rat(2))]]).unwrap();
        assert!(prop.iter().all(|(_, p)| p.is_zero()));
        assert!(minors_2x2(&[vec![x(0)]]).is_err());
    }

    #[test]
    fn minors_of_quadric_gradients() {
        // F1 = x1 x3 - x2^2, F2 = x2 x4 - x3^2
        let f1 = Polynomial::from_terms(4, vec![(vec![1, 0, 1, 0], rat(1)), (vec![0, 2, 0, 0], rat(-1))]).unwrap();
        let f2 = Polynomial::from_terms(4, vec![(vec![0, 1, 0, 1], rat(1)), (vec![0, 0, 2, 0], rat(-1))]).unwrap();
        let m = minors_2x2(&[f1.gradient(), f2.gradient()]).unwrap();
        // minor(1,2) = dF1/dx1 dF2/dx2 - dF1/dx2 dF2/dx1 = x3 * x4 - (-2 x2) * 0
        let expect = Polynomial::from_terms(4, vec![(vec![0, 0, 1, 1], rat(1))]).unwrap();
        assert_eq!(m[0], ((0, 1), expect));
        // minor(2,3) = (-2 x2)(-2 x3) - x1 * x4
        let m23 = m.iter().find(|(ij, _)| *ij == (1, 2)).unwrap();
        let expect = &Polynomial::monomial(4, Monomial::new(vec![0, 1, 1, 0]), rat(4))
            - &Polynomial::monomial(4, Monomial::new(vec![1, 0, 0, 1]), rat(1));
        assert_eq!(m23.1, expect);
    }

    fn constant_alt(n: usize, vals: &[i64]) -> AltPolyMatrix {
        let mut k = 0;
        AltPolyMatrix::from_upper(n, 0, |_, _| {
            k += 1;
            Polynomial::constant(0, rat(vals[k - 1]))
        })
    }

    proptest! {
        #[test]
        fn det_equals_pf_squared(vals in prop::collection::vec(-5i64..=5, 15), n in prop::sample::select(vec![2usize, 4, 6])) {
            let m = constant_alt(n, &vals);
            let idx: Vec<usize> = (0..n).collect();
            let pf = pfaffian(&m, &idx).unwrap();
            let det = cofactor_det(&m.to_full(), 0);
            prop_assert_eq!(det, &pf * &pf);
        }

        #[test]
        fn swap_negates(vals in prop::collection::vec(-5i64..=5, 15), n in prop::sample::select(vec![4usize, 6]), a in 0usize..4, b in 0usize..4) {
            prop_assume!(a != b);
            let m = constant_alt(n, &vals);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(a, b);
            let swapped = AltPolyMatrix::from_upper(n, 0, |i, j| m.get(perm[i], perm[j]));
            let idx: Vec<usize> = (0..n).collect();
            prop_assert_eq!(pfaffian(&swapped, &idx).unwrap(), -&pfaffian(&m, &idx).unwrap());
        }
    }
}
