use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::monomial::{monomial_basis, Monomial};
use super::rational::{primitive_scale, rat, Rational};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over the rationals.
///
/// Zero coefficients are never stored, and every monomial has length
/// `arity`. Variable indices in this API are zero-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Polynomial::monomial(arity, Monomial::one(arity), c)
    }

    pub fn monomial(arity: usize, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.arity(), arity, "monomial arity mismatch");
        let mut p = Polynomial::zero(arity);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The variable `x_i` (zero-based).
    pub fn var(arity: usize, i: usize) -> Self {
        Polynomial::monomial(arity, Monomial::var(arity, i), Rational::one())
    }

    /// Builds from `(exponents, coefficient)` pairs, collecting duplicates.
    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Polynomial::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::DimensionMismatch { expected: arity, found: e.len() });
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient_ref(&self, m: &Monomial) -> Option<&Rational> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.arity(), self.arity);
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Whether every monomial has degree `d` (the zero polynomial qualifies).
    pub fn is_form_of_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.is_form_of_degree(d),
        }
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.coefficient(&Monomial::one(self.arity))),
            Some(_) => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.arity);
        }
        Polynomial { arity: self.arity, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Formal partial derivative with respect to `x_i` (zero-based).
    pub fn diff(&self, i: usize) -> Result<Polynomial> {
        if i >= self.arity {
            return Err(Error::IndexOutOfRange { index: i, arity: self.arity });
        }
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            if let Some((k, rest)) = m.without_var(i) {
                out.add_term(rest, c * rat(k as i64));
            }
        }
        Ok(out)
    }

    /// All first partials.
    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.arity).map(|i| self.diff(i).expect("index in range")).collect()
    }

    /// Exact value at `point`.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: point.len() });
        }
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|v| vec![Rational::one(), v.clone()]).collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in m.exponents().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= k as usize {
                    let next = pw.last().unwrap() * &point[i];
                    pw.push(next);
                }
                t *= &pw[k as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Returns `p(y_1, ..., y_n)` with `y_j = sum_i g[i][j] x_i`.
    ///
    /// Substituting by `g` and then by `h` equals substituting by `h * g`.
    pub fn substitute_linear(&self, g: &[Vec<Rational>]) -> Result<Polynomial> {
        let n = self.arity;
        if g.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.len() });
        }
        if let Some(row) = g.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        let ys: Vec<Polynomial> = (0..n)
            .map(|j| {
                let mut y = Polynomial::zero(n);
                for (i, row) in g.iter().enumerate() {
                    y.add_term(Monomial::var(n, i), row[j].clone());
                }
                y
            })
            .collect();
        self.substitute(&ys)
    }

    /// Substitutes `x_j -> images[j]` for every variable.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: images.len() });
        }
        let target = images.first().map(|p| p.arity).unwrap_or(0);
        let mut cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (j, &k) in m.exponents().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = power_cached(&mut cache, images, j, k);
                t = &t * &pw;
            }
            out += &t;
        }
        Ok(out)
    }

    /// Substitutes fixed values for some variables, keeping the arity.
    pub fn specialize(&self, values: &[(usize, Rational)]) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            let mut coeff = c.clone();
            for (i, v) in values {
                let k = e[*i];
                if k > 0 {
                    coeff *= num_traits::pow(v.clone(), k as usize);
                    e[*i] = 0;
                }
            }
            out.add_term(Monomial::new(e), coeff);
        }
        out
    }

    /// Reinterprets the polynomial in `new_arity` variables, sending variable
    /// `i` to `map[i]`. Fails if a used variable maps to `None`.
    pub fn relabel(&self, new_arity: usize, map: &[Option<usize>]) -> Result<Polynomial> {
        let mut out = Polynomial::zero(new_arity);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_arity];
            for (i, &k) in m.exponents().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map.get(i).copied().flatten() {
                    Some(j) => e[j] += k,
                    None => return Err(Error::Internal(format!("variable x{} has no image under relabelling", i + 1))),
                }
            }
            out.add_term(Monomial::new(e), c.clone());
        }
        Ok(out)
    }

    /// Coefficient vector over `basis` (entries absent from the basis must be zero).
    pub fn to_coeff_vector(&self, index: &HashMap<Monomial, usize>, len: usize) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); len];
        for (m, c) in &self.terms {
            match index.get(m) {
                Some(&k) => v[k] = c.clone(),
                None => return Err(Error::Internal(format!("monomial {m} outside coordinate basis"))),
            }
        }
        Ok(v)
    }

    pub fn from_coeff_vector(arity: usize, basis: &[Monomial], v: &[Rational]) -> Polynomial {
        let mut p = Polynomial::zero(arity);
        for (m, c) in basis.iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    /// Positive rational multiple with primitive integer coefficients whose
    /// leading coefficient is positive.
    pub fn primitive(&self) -> Polynomial {
        let s = primitive_scale(self.terms().map(|(_, c)| c));
        self.scale(&s)
    }

    /// If `self = lambda * other` for a rational lambda, returns it.
    pub fn ratio_to(&self, other: &Polynomial) -> Option<Rational> {
        if self.is_zero() && other.is_zero() {
            return Some(Rational::one());
        }
        let (m, c) = other.terms().next()?;
        let lambda = self.coefficient(m) / c;
        if &other.scale(&lambda) == self {
            Some(lambda)
        } else {
            None
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.arity, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn power_cached(cache: &mut HashMap<(usize, u32), Polynomial>, images: &[Polynomial], j: usize, k: u32) -> Polynomial {
    if let Some(p) = cache.get(&(j, k)) {
        return p.clone();
    }
    let p = if k == 1 { images[j].clone() } else { &power_cached(cache, images, j, k - 1) * &images[j] };
    cache.insert((j, k), p.clone());
    p
}

/// Lookup table from monomial to its position in a basis.
pub fn basis_index(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// The monomial basis of degree-`d` forms together with its index.
pub fn indexed_basis(arity: usize, d: u32) -> (Vec<Monomial>, HashMap<Monomial, usize>) {
    let b = monomial_basis(arity, d);
    let idx = basis_index(&b);
    (b, idx)
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { arity: self.arity, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * rhs.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Polynomial { arity: self.arity, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let is_one = m.degree() == 0;
            if abs.is_one() && !is_one {
                write!(f, "{m}")?;
            } else if is_one {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}
