use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial in a fixed number of variables.
///
/// Ordered graded-lexicographically with `x1 > x2 > ... > xn`: higher total
/// degree is larger, ties broken by the first differing exponent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps: exps.into_boxed_slice() }
    }

    pub fn one(arity: usize) -> Self {
        Monomial::new(vec![0; arity])
    }

    /// The monomial `x_i` (zero-based `i`).
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial::new(e)
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial::new(self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = Vec::with_capacity(self.arity());
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            e.push(a.checked_sub(*b)?);
        }
        Some(Monomial::new(e))
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.exps.to_vec();
        e[i] += 1;
        Monomial::new(e)
    }

    /// `x^a / x_i`, returning the original exponent of `x_i`.
    pub fn without_var(&self, i: usize) -> Option<(u32, Monomial)> {
        let k = self.exps[i];
        if k == 0 {
            return None;
        }
        let mut e = self.exps.to_vec();
        e[i] -= 1;
        Some((k, Monomial::new(e)))
    }

    /// Multiset of variable indices, e.g. `x1^2 x3 -> [0, 0, 2]`.
    pub fn index_multiset(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for (i, &k) in self.exps.iter().enumerate() {
            out.extend(std::iter::repeat_n(i, k as usize));
        }
        out
    }

    pub fn from_indices(arity: usize, idx: &[usize]) -> Monomial {
        let mut e = vec![0; arity];
        for &i in idx {
            e[i] += 1;
        }
        Monomial::new(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &k) in self.exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of degree `degree` in `arity` variables, in descending
/// graded-lex order (`x1^d` first). There are `C(arity + degree - 1, degree)`.
pub fn monomial_basis(arity: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if arity == 0 {
        if degree == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut current = vec![0u32; arity];
    fill(&mut current, 0, degree, &mut out);
    out
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial::new(current.to_vec()));
        return;
    }
    for k in (0..=remaining).rev() {
        current[pos] = k;
        fill(current, pos + 1, remaining - k, out);
    }
    current[pos] = 0;
}
