//! Fraction-free row echelon forms over the integers.
//!
//! Rows are stored as primitive integer vectors. Eliminating a column uses
//! `row <- (p / g) * row - (a / g) * pivot_row` with `g = gcd(p, a)`, and the
//! content is divided out after every step, which keeps entries small
//! without ever leaving the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactmath::{primitive_scale, Rational};

#[derive(Clone, Debug)]
struct PivotRow {
    pivot: usize,
    entries: Vec<BigInt>,
}

/// Row echelon form of a growing set of rows with a fixed column count.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<PivotRow>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, rows: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    /// Adds a rational row. Returns whether the rank increased.
    pub fn insert(&mut self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.cols);
        self.insert_int(integer_row(row))
    }

    /// Adds a sparse rational row given as `(column, value)` pairs.
    pub fn insert_sparse(&mut self, row: &[(usize, Rational)]) -> bool {
        let s = primitive_scale(row.iter().map(|(_, v)| v));
        let mut dense = vec![BigInt::zero(); self.cols];
        for (c, v) in row {
            let w = v * &s;
            dense[*c] += w.to_integer();
        }
        self.insert_int(dense)
    }

    pub fn insert_int(&mut self, mut row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.cols);
        for pr in &self.rows {
            if row[pr.pivot].is_zero() {
                continue;
            }
            eliminate(&mut row, &pr.entries, pr.pivot);
        }
        let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        make_primitive(&mut row);
        let pos = self.rows.partition_point(|r| r.pivot < pivot);
        self.rows.insert(pos, PivotRow { pivot, entries: row });
        true
    }

    /// Reduced row echelon form over the rationals: pivot entries one, pivot
    /// columns cleared above. Rows are returned in pivot order.
    pub fn reduced_rows(&self) -> Vec<(usize, Vec<Rational>)> {
        let mut rows: Vec<(usize, Vec<Rational>)> = self
            .rows
            .iter()
            .map(|r| {
                let lead = Rational::from_integer(r.entries[r.pivot].clone());
                (r.pivot, r.entries.iter().map(|x| Rational::from_integer(x.clone()) / &lead).collect())
            })
            .collect();
        for k in (0..rows.len()).rev() {
            let (pc, pivot_row) = rows[k].clone();
            for (_, row) in rows.iter_mut().take(k) {
                if row[pc].is_zero() {
                    continue;
                }
                let f = row[pc].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(pc) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        rows
    }

    /// Canonical basis of the right null space.
    ///
    /// One vector per free column `f`: it has a one at `f` and zeros at the
    /// other free columns, which determines it uniquely from the kernel.
    /// Each vector is then scaled to a primitive integer vector with
    /// positive first nonzero entry.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.cols];
        for r in &self.rows {
            is_pivot[r.pivot] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for r in self.rows.iter().rev() {
                    let mut acc = Rational::zero();
                    for c in (r.pivot + 1)..self.cols {
                        if !r.entries[c].is_zero() && !x[c].is_zero() {
                            acc += &x[c] * Rational::from_integer(r.entries[c].clone());
                        }
                    }
                    if !acc.is_zero() {
                        x[r.pivot] = -acc / Rational::from_integer(r.entries[r.pivot].clone());
                    }
                }
                normalize_vector(x)
            })
            .collect()
    }
}

fn eliminate(row: &mut [BigInt], pivot_row: &[BigInt], col: usize) {
    let p = &pivot_row[col];
    let a = row[col].clone();
    let g = p.gcd(&a);
    let mp = p / &g;
    let ma = &a / &g;
    // pivot_row is zero before `col`, but `row` need not be
    for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
        if y.is_zero() {
            if !x.is_zero() {
                *x *= &mp;
            }
        } else {
            *x = &*x * &mp - y * &ma;
        }
    }
    make_primitive(row);
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x /= &g;
        }
    }
}

/// Clears denominators of a rational row.
pub fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let s = primitive_scale(row);
    row.iter().map(|v| (v * &s).to_integer()).collect()
}

/// Scales to a primitive integer vector whose first nonzero entry is positive.
pub fn normalize_vector(v: Vec<Rational>) -> Vec<Rational> {
    let s = primitive_scale(&v);
    v.into_iter().map(|x| x * &s).collect()
}

/// Solves for the kernel of a large, heavily over-determined system.
///
/// Rows are consumed in order. Once the rank reaches `cols - expected_dim`
/// the current kernel is computed and every later row is first checked
/// against it; only rows that some kernel vector fails are eliminated. The
/// result is the exact kernel of all rows whatever `expected_dim` is; the
/// hint only decides when checking starts.
pub fn streaming_kernel<I>(cols: usize, rows: I, expected_dim: usize) -> Vec<Vec<Rational>>
where
    I: IntoIterator<Item = Vec<(usize, Rational)>>,
{
    let mut ech = Echelon::new(cols);
    let threshold = cols.saturating_sub(expected_dim);
    let mut kernel: Option<Vec<Vec<Rational>>> = None;
    for row in rows {
        if row.is_empty() {
            continue;
        }
        if let Some(k) = &kernel {
            if k.iter().all(|v| sparse_dot(&row, v).is_zero()) {
                continue;
            }
        }
        if ech.insert_sparse(&row) && ech.rank() >= threshold {
            if ech.rank() == cols {
                return Vec::new();
            }
            kernel = Some(ech.kernel());
        }
    }
    kernel.unwrap_or_else(|| ech.kernel())
}

fn sparse_dot(row: &[(usize, Rational)], v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (c, x) in row {
        if !v[*c].is_zero() {
            acc += x * &v[*c];
        }
    }
    acc
}

/// Batch elimination choosing, in each column, the candidate pivot row with
/// the smallest bit size.
pub fn echelon_with_small_pivots(rows: &[Vec<Rational>], cols: usize) -> Echelon {
    let mut pending: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    pending.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut ech = Echelon::new(cols);
    for c in 0..cols {
        let best = pending
            .iter()
            .enumerate()
            .filter(|(_, r)| !r[c].is_zero())
            .min_by_key(|(_, r)| r.iter().map(|x| x.bits()).sum::<u64>())
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let pivot_row = pending.swap_remove(bi);
        for r in pending.iter_mut() {
            if !r[c].is_zero() {
                eliminate(r, &pivot_row, c);
            }
        }
        pending.retain(|r| r.iter().any(|x| !x.is_zero()));
        let mut entries = pivot_row;
        make_primitive(&mut entries);
        if entries[c].is_negative() {
            entries.iter_mut().for_each(|x| *x = -x.clone());
        }
        ech.rows.push(PivotRow { pivot: c, entries });
    }
    ech
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn rows(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn incremental_matches_batch() {
        let m = rows(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0], &[1, 3, 4, 4]]);
        let mut inc = Echelon::new(4);
        for r in &m {
            inc.insert(r);
        }
        let batch = echelon_with_small_pivots(&m, 4);
        assert_eq!(inc.rank(), 2);
        assert_eq!(batch.rank(), 2);
        assert_eq!(inc.kernel(), batch.kernel());
    }

    #[test]
    fn entries_left_of_pivot_are_rescaled() {
        // the second row is nonzero in column 0, which is not a pivot of the first
        let m = rows(&[&[0, 2, 1], &[1, 3, 0], &[2, 0, -3]]);
        let mut inc = Echelon::new(3);
        for r in &m {
            inc.insert(r);
        }
        assert_eq!(inc.rank(), 2);
        assert_eq!(inc.kernel(), vec![vec![rat(3), rat(-1), rat(2)]]);
    }

    #[test]
    fn streaming_agrees_with_full() {
        let m = rows(&[&[1, -1, 0, 0], &[0, 1, -1, 0], &[1, 0, -1, 0], &[0, 0, 1, -1], &[2, 0, 0, -2]]);
        let sparse: Vec<Vec<(usize, Rational)>> =
            m.iter().map(|r| r.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect()).collect();
        for hint in 0..=4 {
            let k = streaming_kernel(4, sparse.clone(), hint);
            assert_eq!(k, vec![vec![rat(1), rat(1), rat(1), rat(1)]], "hint {hint}");
        }
    }
}
