//! Equations of higher secant varieties of a genus one normal curve,
//! computed from its quadrics by the derivative criteria.

mod formbasis;

pub use formbasis::FormBasis;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{binomial, indexed_basis, rat, Monomial, Polynomial, Rational};
use crate::linalg::{streaming_kernel, Echelon};

/// `beta(r, n) = C(n-r, r) + C(n-r-1, r-1)`, the number of `r`-subsets of
/// `Z/nZ` with no two adjacent elements.
pub fn beta(r: usize, n: usize) -> usize {
    let (r, n) = (r as i64, n as i64);
    let b: BigInt = binomial(n - r, r) + binomial(n - r - 1, r - 1);
    b.to_usize().expect("small binomial")
}

/// How to solve for the forms whose partials lie in a given span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Unknowns are the coefficients of `f`; each partial is tested against
    /// the left annihilator of the span.
    Cokernel,
    /// Unknowns are `n` elements of the span, constrained to be the partials
    /// of one form (`d_j g_i = d_i g_j`). `f` is recovered by Euler's identity.
    GradientClosure,
}

/// All forms of degree `span.degree() + 1` whose partial derivatives all
/// lie in `span`.
pub fn forms_with_partials_in(span: &FormBasis, route: Route) -> Result<FormBasis> {
    match route {
        Route::Cokernel => by_cokernel(span),
        Route::GradientClosure => by_gradient_closure(span),
    }
}

fn by_cokernel(span: &FormBasis) -> Result<FormBasis> {
    let n = span.arity();
    let d = span.degree();
    let (low, _) = indexed_basis(n, d);
    let (high, high_index) = indexed_basis(n, d + 1);
    let mut ech = Echelon::new(low.len());
    let (_, _, rows) = span.coefficient_rows()?;
    for r in &rows {
        ech.insert(r);
    }
    let reduced = ech.reduced_rows();
    let mut is_pivot = vec![false; low.len()];
    for (p, _) in &reduced {
        is_pivot[*p] = true;
    }
    // functional for non-pivot column c: v_c - sum_p R_p[c] v_p
    let functionals: Vec<Vec<(usize, Rational)>> = (0..low.len())
        .filter(|&c| !is_pivot[c])
        .map(|c| {
            let mut f = vec![(c, rat(1))];
            for (p, row) in &reduced {
                if !row[c].is_zero() {
                    f.push((*p, -row[c].clone()));
                }
            }
            f
        })
        .collect();
    let rows = (0..n).flat_map(|i| {
        let low = &low;
        let high_index = &high_index;
        functionals.iter().map(move |f| {
            // coefficient of m in d_i f is (e_i(m) + 1) * f[m x_i]
            let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
            for (c, w) in f {
                let m = &low[*c];
                let col = high_index[&m.times_var(i)];
                *acc.entry(col).or_insert_with(Rational::zero) += w * rat(m.exponents()[i] as i64 + 1);
            }
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect::<Vec<_>>()
        })
    });
    let kernel = streaming_kernel(high.len(), rows, 0);
    let forms: Vec<Polynomial> = kernel.iter().map(|v| Polynomial::from_coeff_vector(n, &high, v)).collect();
    FormBasis::span(n, d + 1, &forms)
}

fn by_gradient_closure(span: &FormBasis) -> Result<FormBasis> {
    let n = span.arity();
    let d = span.degree();
    let dim = span.dim();
    if d == 0 {
        return by_cokernel(span);
    }
    // partials[a][j] = d_j s_a
    let partials: Vec<Vec<Polynomial>> = span.forms().iter().map(Polynomial::gradient).collect();
    let unknown = |i: usize, a: usize| i * dim + a;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let rows = pairs.iter().flat_map(|&(i, j)| {
        // d_j g_i - d_i g_j = 0, one row per monomial
        let mut by_monomial: BTreeMap<Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
        for a in 0..dim {
            for (m, c) in partials[a][j].terms() {
                by_monomial.entry(m.clone()).or_default().push((unknown(i, a), c.clone()));
            }
            for (m, c) in partials[a][i].terms() {
                by_monomial.entry(m.clone()).or_default().push((unknown(j, a), -c.clone()));
            }
        }
        by_monomial.into_values().rev()
    });
    let kernel = streaming_kernel(n * dim, rows, 1);
    let forms = kernel
        .iter()
        .map(|v| {
            let mut f = Polynomial::zero(n);
            for i in 0..n {
                let mut g = Polynomial::zero(n);
                for a in 0..dim {
                    let c = &v[unknown(i, a)];
                    if !c.is_zero() {
                        g += &span.forms()[a].scale(c);
                    }
                }
                f += &(&Polynomial::var(n, i) * &g);
            }
            f.scale(&(rat(1) / rat(d as i64 + 1)))
        })
        .collect::<Vec<_>>();
    // the recovered forms must have the prescribed gradients
    for (f, v) in forms.iter().zip(&kernel) {
        for i in 0..n {
            let mut g = Polynomial::zero(n);
            for a in 0..dim {
                g += &span.forms()[a].scale(&v[unknown(i, a)]);
            }
            if f.diff(i)? != g {
                return Err(Error::Internal("gradient closure produced a non-gradient".into()));
            }
        }
    }
    FormBasis::span(n, d + 1, &forms)
}

/// Degree-`(k+2)` equations of `Sec^{k+1} C` from the degree-`(k+1)`
/// equations of `Sec^k C`.
pub fn lift_step(b: &FormBasis) -> Result<FormBasis> {
    let n = b.arity();
    let out = forms_with_partials_in(b, Route::Cokernel)?;
    let r = b.degree() as usize + 1;
    let expected = beta(r, n);
    if out.dim() != expected {
        return Err(Error::DegenerateModel(format!(
            "found {} forms of degree {r} on the secant variety, expected {expected}",
            out.dim()
        )));
    }
    Ok(out)
}

/// The degree-`n` hypersurface `Sec^r C` for `n = 2r + 1`, from the
/// degree-`r` equations `b` of `Sec^{r-1} C`.
pub fn hypersurface_step(b: &FormBasis) -> Result<Polynomial> {
    let n = b.arity();
    let r = b.degree() as usize;
    if r < 2 || n != 2 * r + 1 {
        return Err(Error::InvalidInput(format!(
            "hypersurface step needs forms of degree r >= 2 in 2r + 1 variables, got degree {r} in {n}"
        )));
    }
    let forms = b.forms();
    let mut products = Vec::new();
    for a in 0..forms.len() {
        for c in a..forms.len() {
            products.push(&forms[a] * &forms[c]);
        }
    }
    let square = FormBasis::span(n, 2 * r as u32, &products)?;
    let out = forms_with_partials_in(&square, Route::GradientClosure)?;
    if out.dim() != 1 {
        return Err(Error::DegenerateModel(format!(
            "found {} candidate hypersurfaces of degree {n}, expected exactly one",
            out.dim()
        )));
    }
    Ok(out.into_forms().remove(0).primitive())
}

/// Endpoint of the secant chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecantEquations {
    /// `n = 2r + 1`: `Sec^r C = {F = 0}`.
    Hypersurface(Polynomial),
    /// `n = 2r + 2`: `Sec^r C = {F1 = F2 = 0}`.
    CompleteIntersection(Polynomial, Polynomial),
}

impl SecantEquations {
    pub fn forms(&self) -> Vec<&Polynomial> {
        match self {
            SecantEquations::Hypersurface(f) => vec![f],
            SecantEquations::CompleteIntersection(f1, f2) => vec![f1, f2],
        }
    }

    /// One gradient row per form.
    pub fn gradient_rows(&self) -> Vec<Vec<Polynomial>> {
        self.forms().into_iter().map(Polynomial::gradient).collect()
    }
}

/// Dimension of one graded piece met along the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub degree: u32,
    pub dim: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecantChain {
    pub equations: SecantEquations,
    pub steps: Vec<StepRecord>,
}

/// Runs the lift steps from the quadrics of `C` up to the last secant
/// variety, and the hypersurface step when `n` is odd.
pub fn secant_chain(quadrics: &FormBasis) -> Result<SecantChain> {
    let n = quadrics.arity();
    if n < 4 {
        return Err(Error::InvalidInput(format!("secant chain needs n >= 4, got {n}")));
    }
    if quadrics.degree() != 2 {
        return Err(Error::InvalidInput("secant chain starts from quadrics".into()));
    }
    let expected = beta(2, n);
    let mut steps = vec![StepRecord { degree: 2, dim: quadrics.dim(), expected }];
    if quadrics.dim() != expected {
        return Err(Error::InvalidInput(format!("expected {expected} quadrics, got {}", quadrics.dim())));
    }
    let top = if n % 2 == 0 { n / 2 } else { (n - 1) / 2 };
    let mut current = quadrics.clone();
    while (current.degree() as usize) < top {
        current = lift_step(&current)?;
        let d = current.degree() as usize;
        steps.push(StepRecord { degree: d as u32, dim: current.dim(), expected: beta(d, n) });
    }
    let equations = if n % 2 == 0 {
        let f = current.forms();
        SecantEquations::CompleteIntersection(f[0].clone(), f[1].clone())
    } else {
        let f = hypersurface_step(&current)?;
        steps.push(StepRecord { degree: n as u32, dim: 1, expected: 1 });
        SecantEquations::Hypersurface(f)
    };
    Ok(SecantChain { equations, steps })
}

/// Rewrites generators by a mixing matrix; used to check basis independence.
pub fn remix(b: &FormBasis, mix: &[Vec<Rational>]) -> Result<Vec<Polynomial>> {
    let forms = b.forms();
    mix.iter()
        .map(|row| {
            if row.len() != forms.len() {
                return Err(Error::DimensionMismatch { expected: forms.len(), found: row.len() });
            }
            let mut acc = Polynomial::zero(b.arity());
            for (c, f) in row.iter().zip(forms) {
                acc += &f.scale(c);
            }
            Ok(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{curve_quadrics, secant_point, WeierstrassCurve};
    use crate::exactmath::ratio;

    fn curve() -> WeierstrassCurve {
        WeierstrassCurve::from_i64([0, 0, 1, -1, 0]).unwrap()
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(2, 5), 5);
        assert_eq!(beta(3, 6), 2);
        assert_eq!(beta(2, 4), 2);
        assert_eq!(beta(3, 7), 7);
        assert_eq!(beta(1, 7), 7);
        for n in 4..10 {
            assert_eq!(beta(2, n), n * (n - 3) / 2);
        }
        assert_eq!(beta(3, 8), 16);
    }

    #[test]
    fn lift_for_degree_six() {
        let e = curve();
        let q = curve_quadrics(&e, 6).unwrap();
        let cubics = lift_step(&q).unwrap();
        assert_eq!(cubics.dim(), 2);
        let pts = e.sample_points(2);
        let xi = [rat(2), ratio(-1, 3)];
        let p = secant_point(&e, &pts, &xi, 6).unwrap();
        for f in cubics.forms() {
            assert!(f.eval(&p).unwrap().is_zero());
        }
    }

    #[test]
    fn lift_rejects_non_curve_input() {
        let (basis, _) = indexed_basis(5, 2);
        let all: Vec<Polynomial> = basis.iter().map(|m| Polynomial::monomial(5, m.clone(), rat(1))).collect();
        let b = FormBasis::span(5, 2, &all).unwrap();
        assert!(matches!(lift_step(&b), Err(Error::DegenerateModel(_))));
    }

    #[test]
    fn routes_agree_on_quintic() {
        let e = curve();
        let q = curve_quadrics(&e, 5).unwrap();
        let forms = q.forms();
        let mut products = Vec::new();
        for a in 0..forms.len() {
            for c in a..forms.len() {
                products.push(&forms[a] * &forms[c]);
            }
        }
        let sq = FormBasis::span(5, 4, &products).unwrap();
        let a = forms_with_partials_in(&sq, Route::Cokernel).unwrap();
        let b = forms_with_partials_in(&sq, Route::GradientClosure).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn quintic_hypersurface() {
        let e = curve();
        let q = curve_quadrics(&e, 5).unwrap();
        let chain = secant_chain(&q).unwrap();
        let SecantEquations::Hypersurface(f) = &chain.equations else { panic!("odd n") };
        assert!(f.is_form_of_degree(5));
        assert!(chain.steps.iter().all(|s| s.dim == s.expected));
        let pts = e.sample_points(2);
        // F vanishes on Sec^2 C and its partials vanish on C
        let p = secant_point(&e, &pts, &[rat(3), rat(-2)], 5).unwrap();
        assert!(f.eval(&p).unwrap().is_zero());
        let c = secant_point(&e, &pts[..1], &[rat(1)], 5).unwrap();
        for g in f.gradient() {
            assert!(g.eval(&c).unwrap().is_zero());
        }
        // scaling the quadrics leaves F unchanged
        let scaled: Vec<Polynomial> = q.forms().iter().map(|g| g.scale(&rat(7))).collect();
        let q2 = FormBasis::span(5, 2, &scaled).unwrap();
        let f2 = hypersurface_step(&q2).unwrap();
        assert_eq!(&f2, f);
    }

    #[test]
    fn degree_four_chain_is_identity() {
        let q = curve_quadrics(&curve(), 4).unwrap();
        let chain = secant_chain(&q).unwrap();
        assert_eq!(chain.equations, SecantEquations::CompleteIntersection(q.forms()[0].clone(), q.forms()[1].clone()));
    }

    #[test]
    fn lift_independent_of_basis() {
        let q = curve_quadrics(&curve(), 6).unwrap();
        let d = q.dim();
        let mix: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        rat(if i == j {
                            2
                        } else if j > i {
                            ((i * 3 + j * 5) % 4) as i64 - 1
                        } else {
                            0
                        })
                    })
                    .collect()
            })
            .collect();
        let mixed = FormBasis::span(6, 2, &remix(&q, &mix).unwrap()).unwrap();
        assert_eq!(mixed, q);
        assert_eq!(lift_step(&mixed).unwrap(), lift_step(&q).unwrap());
    }
}
