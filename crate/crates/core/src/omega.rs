//! The alternating matrix of quadratic forms whose columns are the
//! quadratic syzygies of the gradient of the secant equations.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::elliptic::{secant_point, CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::exactmath::{indexed_basis, primitive_scale, Monomial, Polynomial, Rational};
use crate::linalg::{minors_2x2, streaming_kernel, AltPolyMatrix, PfaffianCache, RatMatrix};

/// Where an [`OmegaMatrix`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Solved,
    Explicit,
    Classical,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Solved => "solved",
            Provenance::Explicit => "explicit",
            Provenance::Classical => "classical",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaMatrix {
    pub matrix: AltPolyMatrix,
    pub provenance: Provenance,
}

impl OmegaMatrix {
    pub fn new(matrix: AltPolyMatrix, provenance: Provenance) -> Self {
        OmegaMatrix { matrix, provenance }
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    /// Rescaled to primitive integer coefficients, with the first nonzero
    /// coefficient positive. Entries are read row by row above the diagonal,
    /// monomials in descending order.
    pub fn normalized(&self) -> OmegaMatrix {
        let s = normalizing_scale(&self.matrix);
        OmegaMatrix { matrix: self.matrix.scale(&s), provenance: self.provenance }
    }

    /// Whether the two matrices agree up to a nonzero rational scalar.
    pub fn proportional_to(&self, other: &OmegaMatrix) -> Option<Rational> {
        self.matrix.ratio_to(&other.matrix).filter(|l| !l.is_zero())
    }
}

fn normalizing_scale(m: &AltPolyMatrix) -> Rational {
    let coeffs: Vec<&Rational> = m.upper_entries().flat_map(|(_, p)| p.terms().map(|(_, c)| c)).collect();
    primitive_scale(coeffs)
}

fn check_rows(grad_rows: &[Vec<Polynomial>], n: usize) -> Result<()> {
    if grad_rows.is_empty() || grad_rows.len() > 2 {
        return Err(Error::InvalidInput(format!("expected 1 or 2 gradient rows, got {}", grad_rows.len())));
    }
    for row in grad_rows {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        if let Some(p) = row.iter().find(|p| p.arity() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.arity() });
        }
    }
    Ok(())
}

/// Solves for the alternating matrix of quadratic forms `Omega` with
/// `sum_i row_i Omega_ij = 0` for every gradient row and every `j`.
///
/// First the space of quadratic syzygies common to all rows is found, then
/// the combinations of `n` of them that form an alternating matrix. The
/// second space must be one-dimensional.
pub fn solve_omega(grad_rows: &[Vec<Polynomial>], n: usize) -> Result<OmegaMatrix> {
    check_rows(grad_rows, n)?;
    if grad_rows.iter().all(|r| r.iter().all(Polynomial::is_zero)) {
        return Err(Error::InvalidInput("gradient rows are zero".into()));
    }
    let (quads, _) = indexed_basis(n, 2);
    let nq = quads.len();

    // stage 1: vectors (v_1..v_n) of quadrics with sum_i g_i v_i = 0
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    for g in grad_rows {
        let mut by_monomial: BTreeMap<Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
        for (i, gi) in g.iter().enumerate() {
            for (m, c) in gi.terms() {
                for (q, mq) in quads.iter().enumerate() {
                    by_monomial.entry(m.mul(mq)).or_default().push((i * nq + q, c.clone()));
                }
            }
        }
        rows.extend(by_monomial.into_values().rev());
    }
    let syz = streaming_kernel(n * nq, rows, n);
    if syz.is_empty() {
        return Err(Error::Inconsistent("the gradient has no quadratic syzygies".into()));
    }
    let k = syz.len();

    // stage 2: columns c_j = sum_a t_{j,a} syz_a, alternating
    let unknown = |j: usize, a: usize| j * k + a;
    let entry = |a: usize, i: usize, q: usize| &syz[a][i * nq + q];
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    for i in 0..n {
        for j in i..n {
            for q in 0..nq {
                // (c_j)_i + (c_i)_j = 0, or (c_i)_i = 0 on the diagonal
                let mut row: Vec<(usize, Rational)> = Vec::new();
                for a in 0..k {
                    let x = entry(a, i, q);
                    if !x.is_zero() {
                        row.push((unknown(j, a), x.clone()));
                    }
                    if i != j {
                        let y = entry(a, j, q);
                        if !y.is_zero() {
                            row.push((unknown(i, a), y.clone()));
                        }
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    let sol = streaming_kernel(n * k, rows, 1);
    match sol.len() {
        0 => return Err(Error::Inconsistent("no alternating matrix of quadratic syzygies".into())),
        1 => {}
        d => {
            return Err(Error::DegenerateModel(format!("the alternating syzygy matrix is not unique (dimension {d})")))
        }
    }
    let t = &sol[0];
    let column_entry = |j: usize, i: usize| {
        let mut v = vec![Rational::zero(); nq];
        for a in 0..k {
            let c = &t[unknown(j, a)];
            if c.is_zero() {
                continue;
            }
            for (q, x) in v.iter_mut().enumerate() {
                let s = entry(a, i, q);
                if !s.is_zero() {
                    *x += c * s;
                }
            }
        }
        Polynomial::from_coeff_vector(n, &quads, &v)
    };
    let m = AltPolyMatrix::from_upper(n, n, |i, j| column_entry(j, i));
    Ok(OmegaMatrix::new(m, Provenance::Solved).normalized())
}

/// `g * Omega`: `Omega'_ij(x) = sum_ab (g^-1)_ai (g^-1)_bj Omega_ab(y)` with
/// `y_j = sum_i g_ij x_i`. Satisfies `g * (h * Omega) = (g h) * Omega`.
pub fn gl_act(g: &RatMatrix, omega: &OmegaMatrix) -> Result<OmegaMatrix> {
    let n = omega.size();
    if g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.rows() });
    }
    let gi = g.inverse()?;
    let grows = g.to_rows();
    let sub = omega.matrix.try_map(|p| p.substitute_linear(&grows))?;
    let arity = omega.matrix.arity();
    let m = AltPolyMatrix::from_upper(n, arity, |i, j| {
        let mut acc = Polynomial::zero(arity);
        for a in 0..n {
            let ga = gi.get(a, i);
            if ga.is_zero() {
                continue;
            }
            for b in 0..n {
                let gb = gi.get(b, j);
                if gb.is_zero() || a == b {
                    continue;
                }
                acc += &sub.get(a, b).scale(&(ga * gb));
            }
        }
        acc
    });
    Ok(OmegaMatrix::new(m, omega.provenance))
}

/// Outcome of the annihilation checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilationReport {
    /// Every gradient row kills every column.
    pub rows_annihilate: bool,
    /// The bilinear identity `sum_ij d_iF1 Omega_ij d_jF2 = 0`, for two rows.
    pub bilinear: Option<bool>,
}

impl AnnihilationReport {
    pub fn passed(&self) -> bool {
        self.rows_annihilate && self.bilinear.unwrap_or(true)
    }
}

pub fn verify_annihilation(omega: &OmegaMatrix, grad_rows: &[Vec<Polynomial>]) -> Result<AnnihilationReport> {
    let n = omega.size();
    check_rows(grad_rows, n)?;
    let full = omega.matrix.to_full();
    let row_times = |g: &[Polynomial], j: usize| {
        let mut acc = Polynomial::zero(n);
        for i in 0..n {
            if !g[i].is_zero() && !full[i][j].is_zero() {
                acc += &(&g[i] * &full[i][j]);
            }
        }
        acc
    };
    let rows_annihilate = grad_rows.iter().all(|g| (0..n).all(|j| row_times(g, j).is_zero()));
    let bilinear = if grad_rows.len() == 2 {
        let mut acc = Polynomial::zero(n);
        for j in 0..n {
            acc += &(&row_times(&grad_rows[0], j) * &grad_rows[1][j]);
        }
        Some(acc.is_zero())
    } else {
        None
    };
    Ok(AnnihilationReport { rows_annihilate, bilinear })
}

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Checks that the submaximal Pfaffians of `Omega` are one common multiple
/// of the partials of `F` (one row), or that the `(n-2)`-Pfaffians are one
/// common multiple of the `2x2` minors of the gradient (two rows). Indices
/// are counted from one in the signs `(-1)^i` and `(-1)^(i+j)`. Returns the
/// scalar `lambda` with `signed pf = lambda * target`.
pub fn verify_pfaffians(omega: &OmegaMatrix, grad_rows: &[Vec<Polynomial>]) -> Result<Rational> {
    let n = omega.size();
    check_rows(grad_rows, n)?;
    let mut cache = PfaffianCache::new(&omega.matrix);
    let mut pairs: Vec<(Polynomial, Polynomial)> = Vec::new();
    match grad_rows.len() {
        1 => {
            if n % 2 == 0 {
                return Err(Error::InvalidInput("one gradient row needs odd n".into()));
            }
            for i in 0..n {
                let idx: Vec<usize> = (0..n).filter(|&k| k != i).collect();
                let pf = cache.pfaffian(&idx)?.scale(&sign(i + 1));
                pairs.push((pf, grad_rows[0][i].clone()));
            }
        }
        _ => {
            if n % 2 == 1 {
                return Err(Error::InvalidInput("two gradient rows need even n".into()));
            }
            for ((i, j), minor) in minors_2x2(grad_rows)? {
                let idx: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
                let pf = cache.pfaffian(&idx)?.scale(&sign(i + j + 2));
                pairs.push((pf, minor));
            }
        }
    }
    common_ratio(&pairs)
}

fn common_ratio(pairs: &[(Polynomial, Polynomial)]) -> Result<Rational> {
    let mut lambda: Option<Rational> = None;
    for (pf, target) in pairs {
        if target.is_zero() {
            if !pf.is_zero() {
                return Err(Error::Proportionality("a Pfaffian is nonzero where its target vanishes".into()));
            }
            continue;
        }
        let Some(l) = pf.ratio_to(target) else {
            return Err(Error::Proportionality(format!("Pfaffian {pf} is not a multiple of {target}")));
        };
        match &lambda {
            None => lambda = Some(l),
            Some(prev) if *prev != l => {
                return Err(Error::Proportionality(format!("scalars {prev} and {l} differ")));
            }
            _ => {}
        }
    }
    match lambda {
        Some(l) if !l.is_zero() => Ok(l),
        _ => Err(Error::Proportionality("all Pfaffians vanish".into())),
    }
}

/// Rank of `Omega` at `sum_i xi_i v_{P_i}`.
pub fn rank_at_secant_point(
    omega: &OmegaMatrix,
    e: &WeierstrassCurve,
    points: &[CurvePoint],
    xi: &[Rational],
) -> Result<usize> {
    let n = omega.size();
    let p = secant_point(e, points, xi, n)?;
    Ok(omega.matrix.eval(&p)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::curve_quadrics;
    use crate::exactmath::{rat, ratio};
    use crate::secant::secant_chain;
    use proptest::prelude::*;

    fn poly(n: usize, t: &[(&[u32], i64)]) -> Polynomial {
        Polynomial::from_terms(n, t.iter().map(|(e, c)| (e.to_vec(), rat(*c)))).unwrap()
    }

    fn fermat_cubic() -> Polynomial {
        poly(3, &[(&[3, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 3], 1)])
    }

    fn curve() -> WeierstrassCurve {
        WeierstrassCurve::from_i64([0, 0, 1, -1, 0]).unwrap()
    }

    #[test]
    fn solves_plane_cubic() {
        let f = fermat_cubic();
        let om = solve_omega(&[f.gradient()], 3).unwrap();
        // proportional to (d3F, -d2F; d1F)
        let x = |i| Polynomial::var(3, i);
        assert_eq!(om.matrix.get(0, 1), (&x(2) * &x(2)));
        assert_eq!(om.matrix.get(0, 2), -&(&x(1) * &x(1)));
        assert_eq!(om.matrix.get(1, 2), (&x(0) * &x(0)));
        assert_eq!(verify_pfaffians(&om, &[f.gradient()]).unwrap(), ratio(-1, 3));
    }

    #[test]
    fn solves_quadric_pair() {
        let q = curve_quadrics(&curve(), 4).unwrap();
        let rows: Vec<Vec<Polynomial>> = q.forms().iter().map(Polynomial::gradient).collect();
        let om = solve_omega(&rows, 4).unwrap();
        let rep = verify_annihilation(&om, &rows).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.bilinear, Some(true));
        verify_pfaffians(&om, &rows).unwrap();
    }

    #[test]
    fn solves_degree_five() {
        let e = curve();
        let chain = secant_chain(&curve_quadrics(&e, 5).unwrap()).unwrap();
        let rows = chain.equations.gradient_rows();
        let om = solve_omega(&rows, 5).unwrap();
        assert!(verify_annihilation(&om, &rows).unwrap().passed());
        verify_pfaffians(&om, &rows).unwrap();
        let pts = e.sample_points(2);
        assert_eq!(rank_at_secant_point(&om, &e, &pts[..1], &[rat(1)]).unwrap(), 2);
        assert_eq!(rank_at_secant_point(&om, &e, &pts, &[rat(1), rat(1)]).unwrap(), 4);
        assert_eq!(rank_at_secant_point(&om, &e, &pts, &[rat(1), rat(0)]).unwrap(), 2);
    }

    #[test]
    fn perturbation_breaks_annihilation() {
        let f = fermat_cubic();
        let om = solve_omega(&[f.gradient()], 3).unwrap();
        let mut m = om.matrix.clone();
        let x = Polynomial::var(3, 0);
        m.set(0, 1, &m.get(0, 1) + &(&x * &x));
        let bad = OmegaMatrix::new(m, Provenance::Solved);
        assert!(!verify_annihilation(&bad, &[f.gradient()]).unwrap().passed());
        assert!(verify_pfaffians(&bad, &[f.gradient()]).is_err());
    }

    #[test]
    fn normalization_is_canonical() {
        let f = fermat_cubic();
        let om = solve_omega(&[f.gradient()], 3).unwrap();
        let scaled = OmegaMatrix::new(om.matrix.scale(&ratio(-7, 3)), Provenance::Solved);
        assert_eq!(scaled.normalized(), om);
        assert_eq!(scaled.proportional_to(&om), Some(ratio(-7, 3)));
    }

    #[test]
    fn scalar_and_identity_act_trivially() {
        let f = fermat_cubic();
        let om = solve_omega(&[f.gradient()], 3).unwrap();
        assert_eq!(gl_act(&RatMatrix::identity(3), &om).unwrap(), om);
        assert_eq!(gl_act(&RatMatrix::scalar(3, rat(5)), &om).unwrap(), om);
        assert!(gl_act(&RatMatrix::zeros(3, 3), &om).is_err());
    }

    fn arb_invertible(n: usize) -> impl Strategy<Value = RatMatrix> {
        prop::collection::vec(-3i64..=3, n * n).prop_filter_map("singular", move |v| {
            let m = RatMatrix::from_i64(&v.chunks(n).map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap();
            (!m.determinant().unwrap().is_zero()).then_some(m)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn action_composes(g in arb_invertible(3), h in arb_invertible(3)) {
            let f = poly(3, &[(&[3, 0, 0], 1), (&[1, 2, 0], -2), (&[0, 1, 2], 3), (&[0, 0, 3], 1), (&[1, 1, 1], 1)]);
            let om = OmegaMatrix::new(solve_omega(&[f.gradient()], 3).unwrap().matrix, Provenance::Solved);
            let lhs = gl_act(&g, &gl_act(&h, &om).unwrap()).unwrap();
            let rhs = gl_act(&g.mul(&h).unwrap(), &om).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert!(lhs.matrix.entries_are_forms_of_degree(2));
        }

        #[test]
        fn transported_cubic_stays_annihilated(g in arb_invertible(3)) {
            // F'(x) = F(x g) is killed by g * Omega
            let f = poly(3, &[(&[3, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 3], 1), (&[1, 1, 1], 2)]);
            let om = solve_omega(&[f.gradient()], 3).unwrap();
            let f2 = f.substitute_linear(&g.to_rows()).unwrap();
            let om2 = gl_act(&g, &om).unwrap();
            prop_assert!(verify_annihilation(&om2, &[f2.gradient()]).unwrap().passed());
        }
    }
}
