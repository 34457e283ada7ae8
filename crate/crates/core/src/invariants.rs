//! The covariants `M` and `N` of an alternating matrix of quadratic forms,
//! the invariants `c4` and `c6`, and the Jacobian.

use std::collections::HashMap;

use num_traits::Zero;

use crate::elliptic::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::exactmath::{binomial, factorial, rat, Monomial, Polynomial, Rational};
use crate::linalg::AltPolyMatrix;

/// `M_ij = sum_{r,s} d_s Omega_ir * d_r Omega_js`. Symmetric, quadratic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MMatrix {
    n: usize,
    entries: Vec<Polynomial>,
}

impl MMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }
}

/// `N_ijk = sum_r d_r M_ij * Omega_rk`. Symmetric in `i, j`, cubic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NTensor {
    n: usize,
    entries: Vec<Polynomial>,
}

impl NTensor {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Polynomial {
        &self.entries[(i * self.n + j) * self.n + k]
    }
}

pub fn matrix_m(omega: &AltPolyMatrix) -> Result<MMatrix> {
    let n = omega.size();
    if omega.arity() != n {
        return Err(Error::DimensionMismatch { expected: n, found: omega.arity() });
    }
    // d[i][r][s] = d_s Omega_ir
    let mut d = vec![vec![Vec::with_capacity(n); n]; n];
    for (i, di) in d.iter_mut().enumerate() {
        for (r, dir) in di.iter_mut().enumerate() {
            let entry = omega.get(i, r);
            for s in 0..n {
                dir.push(entry.diff(s)?);
            }
        }
    }
    let mut entries = vec![Polynomial::zero(n); n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = Polynomial::zero(n);
            for r in 0..n {
                for s in 0..n {
                    let (a, b) = (&d[i][r][s], &d[j][s][r]);
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
            }
            entries[j * n + i] = acc.clone();
            entries[i * n + j] = acc;
        }
    }
    let m = MMatrix { n, entries };
    for i in 0..n {
        for j in 0..n {
            if !m.get(i, j).is_form_of_degree(2) && !m.get(i, j).is_zero() {
                return Err(Error::Internal(format!("M_{i}{j} is not a quadratic form")));
            }
        }
    }
    Ok(m)
}

pub fn tensor_n(omega: &AltPolyMatrix, m: &MMatrix) -> Result<NTensor> {
    let n = omega.size();
    if m.size() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.size() });
    }
    let full = omega.to_full();
    let mut entries = vec![Polynomial::zero(n); n * n * n];
    for i in 0..n {
        for j in i..n {
            let grad = m.get(i, j).gradient();
            for k in 0..n {
                let mut acc = Polynomial::zero(n);
                for r in 0..n {
                    if !grad[r].is_zero() && !full[r][k].is_zero() {
                        acc += &(&grad[r] * &full[r][k]);
                    }
                }
                entries[(j * n + i) * n + k] = acc.clone();
                entries[(i * n + j) * n + k] = acc;
            }
        }
    }
    Ok(NTensor { n, entries })
}

fn multiset_factorial(m: &Monomial) -> Rational {
    Rational::from_integer(m.exponents().iter().map(|&e| factorial(e)).product())
}

/// Distinct orderings of a sorted index multiset.
fn orderings(idx: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = idx.to_vec();
    cur.sort();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(p) = (1..cur.len()).rev().find(|&p| cur[p - 1] < cur[p]) else { break };
        let q = (p..cur.len()).rev().find(|&q| cur[q] > cur[p - 1]).expect("exists");
        cur.swap(p - 1, q);
        cur[p..].reverse();
    }
    out
}

/// `sum_{I, R} d^k T_I / dx_R * d^k T_R / dx_I` over all `k`-tuples `I`, `R`,
/// for a tensor of forms of degree `k`. Derivatives are read off coefficients:
/// `d^k x^a / dx_R` is `a!` times the coefficient when `R` is an ordering of
/// `a`, and zero otherwise. `outer` lists one representative `I` per symmetry
/// class of the tensor with the size of the class.
fn pairing_sum<'a, F>(n: usize, entry: F, outer: &[(Vec<usize>, Rational)]) -> Rational
where
    F: Fn(&[usize]) -> &'a Polynomial,
{
    let mut total = Rational::zero();
    let mut memo: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    for (idx, w) in outer {
        let ti = entry(idx);
        if ti.is_zero() {
            continue;
        }
        let mono_i = Monomial::from_indices(n, idx);
        let fact_i = multiset_factorial(&mono_i);
        for (m, c) in ti.terms() {
            let key = m.index_multiset();
            let ords = memo.entry(key).or_insert_with_key(|k| orderings(k));
            let mut inner = Rational::zero();
            for r in ords.iter() {
                if let Some(c2) = entry(r).coefficient_ref(&mono_i) {
                    inner += c2;
                }
            }
            if !inner.is_zero() {
                total += inner * c * multiset_factorial(m) * &fact_i * w;
            }
        }
    }
    total
}

/// The unscaled sum `sum_{i,j,r,s} d^2 M_ij/dx_r dx_s * d^2 M_rs/dx_i dx_j`.
pub fn c4_sum(m: &MMatrix) -> Rational {
    let n = m.size();
    let mut outer = Vec::new();
    for i in 0..n {
        for j in i..n {
            outer.push((vec![i, j], if i == j { 1i64 } else { 2 }));
        }
    }
    pairing_sum(n, |t| m.get(t[0], t[1]), &outer_rat(outer))
}

/// The unscaled sum `sum d^3 N_ijk/dx_r dx_s dx_t * d^3 N_rst/dx_i dx_j dx_k`.
pub fn c6_sum(nt: &NTensor) -> Rational {
    let n = nt.size();
    let mut outer = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                outer.push((vec![i, j, k], if i == j { 1i64 } else { 2 }));
            }
        }
    }
    pairing_sum(n, |t| nt.get(t[0], t[1], t[2]), &outer_rat(outer))
}

fn outer_rat(v: Vec<(Vec<usize>, i64)>) -> Vec<(Vec<usize>, Rational)> {
    v.into_iter().map(|(i, w)| (i, rat(w))).collect()
}

fn c4_factor(n: usize) -> Result<Rational> {
    let n_ = n as i64;
    if n < 3 {
        return Err(Error::InvalidInput(format!("c4 needs n >= 3, got {n}")));
    }
    Ok(rat(3 * (n_ - 2) * (n_ - 2)) / (rat(16 * n_) * Rational::from_integer(binomial(n_ + 3, 5))))
}

fn c6_factor(n: usize) -> Result<Rational> {
    let n_ = n as i64;
    if n < 3 {
        return Err(Error::InvalidInput(format!("c6 needs n >= 3, got {n}")));
    }
    Ok(-rat((n_ - 2).pow(3)) / (rat(64 * n_) * Rational::from_integer(binomial(n_ + 5, 7))))
}

pub fn c4(omega: &AltPolyMatrix) -> Result<Rational> {
    let m = matrix_m(omega)?;
    Ok(c4_factor(omega.size())? * c4_sum(&m))
}

pub fn c6(omega: &AltPolyMatrix) -> Result<Rational> {
    let m = matrix_m(omega)?;
    let nt = tensor_n(omega, &m)?;
    Ok(c6_factor(omega.size())? * c6_sum(&nt))
}

/// Both invariants, sharing the computation of `M`.
pub fn c4_c6(omega: &AltPolyMatrix) -> Result<(Rational, Rational)> {
    let n = omega.size();
    let m = matrix_m(omega)?;
    let nt = tensor_n(omega, &m)?;
    Ok((c4_factor(n)? * c4_sum(&m), c6_factor(n)? * c6_sum(&nt)))
}

/// `y^2 = x^3 - 27 c4 x - 54 c6`.
pub fn jacobian_equation(c4: &Rational, c6: &Rational) -> Result<WeierstrassCurve> {
    WeierstrassCurve::short(rat(-27) * c4, rat(-54) * c6).map_err(|e| match e {
        Error::SingularCurve => Error::DegenerateModel(format!(
            "c4 = {c4}, c6 = {c6} give a singular curve; the input is not a smooth genus one model"
        )),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ratio;
    use crate::explicit::lambda_matrix;
    use crate::linalg::RatMatrix;
    use crate::omega::{gl_act, OmegaMatrix, Provenance};
    use proptest::prelude::*;

    #[test]
    fn orderings_of_multisets() {
        assert_eq!(orderings(&[0, 0, 1]).len(), 3);
        assert_eq!(orderings(&[2, 0, 1]).len(), 6);
        assert_eq!(orderings(&[1, 1]), vec![vec![1, 1]]);
    }

    #[test]
    fn zero_matrix() {
        let z = AltPolyMatrix::zero(4, 4);
        let m = matrix_m(&z).unwrap();
        assert!((0..4).all(|i| (0..4).all(|j| m.get(i, j).is_zero())));
        assert_eq!(c4(&z).unwrap(), rat(0));
        assert_eq!(c6(&z).unwrap(), rat(0));
    }

    #[test]
    fn lambda_closed_forms() {
        let n = 5;
        let l = lambda_matrix(n);
        let m = matrix_m(&l).unwrap();
        let x = |i| Polynomial::var(n, i);
        assert_eq!(m.get(0, 1), &(&x(0) * &x(1)).scale(&rat(-4)));
        let nt = tensor_n(&l, &m).unwrap();
        assert_eq!(nt.get(0, 1, 2), &(&(&x(0) * &x(1)) * &x(2)).scale(&rat(-16)));
        // mu_ij = 2(n-2)(|i-j|^2 - n|i-j|) + n(n-1)(n-2)/3
        for i in 0..n {
            for j in 0..n {
                let d = (i as i64 - j as i64).abs();
                let mu = 2 * 3 * (d * d - 5 * d) + 20;
                assert_eq!(m.get(i, j), &(&x(i) * &x(j)).scale(&rat(mu)));
            }
        }
    }

    #[test]
    fn lambda_invariants() {
        for n in 3..=7usize {
            let l = lambda_matrix(n);
            let (a, b) = c4_c6(&l).unwrap();
            let k = rat(n as i64 - 2);
            assert_eq!(a, num_traits::pow(k.clone(), 4), "c4 for n = {n}");
            assert_eq!(b, -num_traits::pow(k, 6), "c6 for n = {n}");
        }
    }

    #[test]
    fn jacobian_examples() {
        let e = jacobian_equation(&rat(0), &rat(-216)).unwrap();
        assert_eq!(e.coefficients(), [rat(0), rat(0), rat(0), rat(0), rat(11664)]);
        assert_eq!(e.j_invariant(), rat(0));
        let e = jacobian_equation(&rat(48), &rat(-216)).unwrap();
        assert_eq!(e.j_invariant(), ratio(110592, 37));
        assert!(matches!(jacobian_equation(&rat(36), &rat(216)), Err(Error::DegenerateModel(_))));
    }

    fn arb_invertible(n: usize) -> impl Strategy<Value = RatMatrix> {
        prop::collection::vec(-2i64..=2, n * n).prop_filter_map("singular", move |v| {
            let m = RatMatrix::from_i64(&v.chunks(n).map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap();
            (!m.determinant().unwrap().is_zero()).then_some(m)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn invariance_and_homogeneity(g in arb_invertible(4), lam in prop::sample::select(vec![-2i64, -1, 2, 3])) {
            let om = OmegaMatrix::new(lambda_matrix(4), Provenance::Explicit);
            let (a, b) = c4_c6(&om.matrix).unwrap();
            let moved = gl_act(&g, &om).unwrap();
            prop_assert_eq!(c4_c6(&moved.matrix).unwrap(), (a.clone(), b.clone()));
            let scaled = om.matrix.scale(&rat(lam));
            let (a2, b2) = c4_c6(&scaled).unwrap();
            prop_assert_eq!(a2, a * num_traits::pow(rat(lam), 4));
            prop_assert_eq!(b2, b * num_traits::pow(rat(lam), 6));
        }

        #[test]
        fn m_transports_covariantly(g in arb_invertible(3)) {
            let om = OmegaMatrix::new(lambda_matrix(3), Provenance::Explicit);
            let moved = gl_act(&g, &om).unwrap();
            let m = matrix_m(&om.matrix).unwrap();
            let m2 = matrix_m(&moved.matrix).unwrap();
            let gi = g.inverse().unwrap();
            let rows = g.to_rows();
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = Polynomial::zero(3);
                    for a in 0..3 {
                        for b in 0..3 {
                            let s = gi.get(a, i) * gi.get(b, j);
                            acc += &m.get(a, b).substitute_linear(&rows).unwrap().scale(&s);
                        }
                    }
                    prop_assert_eq!(m2.get(i, j), &acc);
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(m2.get(i, j), m2.get(j, i));
                }
            }
        }
    }
}
