//! Exact checks of the whole library, grouped as in the test suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elliptic::{curve_quadrics, WeierstrassCurve};
use crate::exactmath::{binomial, rat, ratio, Rational};
use crate::explicit::{
    build_a, build_b, build_omega_explicit, classical_omega_cubic, classical_omega_quadric_pair, lambda_matrix,
    omega1_closed_form, omega_symbolic,
};
use crate::invariants::{c4_c6, c4_sum, c6_sum, matrix_m, tensor_n};
use crate::linalg::RatMatrix;
use crate::omega::{gl_act, rank_at_secant_point, solve_omega, verify_annihilation, verify_pfaffians, OmegaMatrix};
use crate::secant::secant_chain;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        if self.passed {
            format!("PASS {}", self.name)
        } else {
            format!("FAIL {}: {}", self.name, self.detail)
        }
    }
}

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pow(q: Rational, k: u32) -> Rational {
    num_traits::pow(q, k as usize)
}

/// The curves used throughout: `y^2 + y = x^3`, `y^2 + y = x^3 - x`,
/// `y^2 = x^3 + 1`, `y^2 + xy + y = x^3 - x^2 - 3x + 3`.
pub fn test_curves() -> Vec<WeierstrassCurve> {
    [[0, 0, 1, 0, 0], [0, 0, 1, -1, 0], [0, 0, 0, 0, 1], [1, -1, 1, -3, 3]]
        .into_iter()
        .map(|a| WeierstrassCurve::from_i64(a).expect("nonsingular"))
        .collect()
}

pub fn fixed_curve() -> WeierstrassCurve {
    WeierstrassCurve::from_i64([0, 0, 1, -1, 0]).expect("nonsingular")
}

pub fn lambda_invariants(n_max: usize) -> Check {
    for n in 4..=n_max.min(9) {
        let (c4, c6) = c4_c6(&lambda_matrix(n)).map_err(|e| e.to_string())?;
        let k = rat(n as i64 - 2);
        ensure(c4 == pow(k.clone(), 4) && c6 == -pow(k, 6), || format!("n = {n}: c4 = {c4}, c6 = {c6}"))?;
    }
    Ok(())
}

pub fn lambda_sums(n_max: usize) -> Check {
    for n in 4..=n_max.min(9) {
        let l = lambda_matrix(n);
        let m = matrix_m(&l).map_err(|e| e.to_string())?;
        let nt = tensor_n(&l, &m).map_err(|e| e.to_string())?;
        let (nn, k) = (rat(n as i64), rat(n as i64 - 2));
        let s4 = ratio(16, 3) * &nn * pow(k.clone(), 2) * binomial(n as i64 + 3, 5);
        let s6 = rat(64) * &nn * pow(k, 3) * binomial(n as i64 + 5, 7);
        let (a, b) = (c4_sum(&m), c6_sum(&nt));
        ensure(a == s4 && b == s6, || format!("n = {n}: sums {a}, {b}, expected {s4}, {s6}"))?;
    }
    Ok(())
}

pub fn explicit_scaling(n_max: usize) -> Check {
    for e in test_curves() {
        let inv = e.invariants();
        for n in 3..=n_max.min(7) {
            let om = build_omega_explicit(&e, n).map_err(|e| e.to_string())?;
            let (c4, c6) = c4_c6(&om.matrix).map_err(|e| e.to_string())?;
            let k = rat(n as i64 - 2);
            ensure(c4 == &inv.c4 * pow(k.clone(), 4) && c6 == &inv.c6 * pow(k, 6), || {
                format!("{:?}, n = {n}: c4 = {c4}, c6 = {c6}", e.coefficients())
            })?;
        }
    }
    Ok(())
}

pub fn solver_round_trip(n_max: usize) -> Check {
    let e = fixed_curve();
    for n in 5..=n_max.min(7) {
        let q = curve_quadrics(&e, n).map_err(|e| e.to_string())?;
        let chain = secant_chain(&q).map_err(|e| e.to_string())?;
        for s in &chain.steps {
            ensure(s.dim == s.expected, || {
                format!("n = {n}: degree {} piece has dimension {}, not {}", s.degree, s.dim, s.expected)
            })?;
        }
        let solved = solve_omega(&chain.equations.gradient_rows(), n).map_err(|e| e.to_string())?;
        let explicit = build_omega_explicit(&e, n).map_err(|e| e.to_string())?;
        ensure(solved.proportional_to(&explicit).is_some(), || {
            format!("n = {n}: solved and explicit matrices differ")
        })?;
        let (c4, c6) = c4_c6(&solved.matrix).map_err(|e| e.to_string())?;
        let jac = crate::invariants::jacobian_equation(&c4, &c6).map_err(|e| e.to_string())?;
        ensure(jac.j_invariant() == e.j_invariant(), || format!("n = {n}: j = {}", jac.j_invariant()))?;
    }
    Ok(())
}

/// The matrices and gradient rows the structural checks run on.
pub fn produced_matrices(
    n_max: usize,
) -> Result<Vec<(String, OmegaMatrix, Vec<Vec<crate::exactmath::Polynomial>>)>, String> {
    let e = fixed_curve();
    let mut out = Vec::new();
    let f = e.weierstrass_cubic();
    let rows = vec![f.gradient()];
    out.push(("n = 3 classical".into(), classical_omega_cubic(&f).map_err(|e| e.to_string())?, rows.clone()));
    out.push(("n = 3 solved".into(), solve_omega(&rows, 3).map_err(|e| e.to_string())?, rows));
    for n in 4..=n_max.min(7) {
        let q = curve_quadrics(&e, n).map_err(|e| e.to_string())?;
        let chain = secant_chain(&q).map_err(|e| e.to_string())?;
        let rows = chain.equations.gradient_rows();
        if n == 4 {
            let f = chain.equations.forms();
            out.push((
                "n = 4 classical".into(),
                classical_omega_quadric_pair(f[0], f[1]).map_err(|e| e.to_string())?,
                rows.clone(),
            ));
        }
        out.push((format!("n = {n} solved"), solve_omega(&rows, n).map_err(|e| e.to_string())?, rows.clone()));
        out.push((format!("n = {n} explicit"), build_omega_explicit(&e, n).map_err(|e| e.to_string())?, rows));
    }
    Ok(out)
}

pub fn pfaffian_certificates(n_max: usize) -> Check {
    for (name, om, rows) in produced_matrices(n_max.min(5))? {
        verify_pfaffians(&om, &rows).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> RatMatrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect();
        let g = RatMatrix::from_rows(rows).expect("square");
        if g.determinant().map(|d| d != rat(0)).unwrap_or(false) {
            return g;
        }
    }
}

pub fn invariance(n_max: usize, trials: usize) -> Check {
    let e = fixed_curve();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a61_636f);
    for n in 3..=n_max.min(5) {
        let om = build_omega_explicit(&e, n).map_err(|e| e.to_string())?;
        let base = c4_c6(&om.matrix).map_err(|e| e.to_string())?;
        for _ in 0..trials {
            let g = random_invertible(&mut rng, n);
            let moved = gl_act(&g, &om).map_err(|e| e.to_string())?;
            let got = c4_c6(&moved.matrix).map_err(|e| e.to_string())?;
            ensure(got == base, || format!("n = {n}: invariants changed under {:?}", g.to_rows()))?;
        }
        let s = RatMatrix::scalar(n, ratio(-5, 3));
        ensure(gl_act(&s, &om).map_err(|e| e.to_string())? == om, || {
            format!("n = {n}: scalar matrices act nontrivially")
        })?;
        let l = ratio(-2, 3);
        let scaled = c4_c6(&om.matrix.scale(&l)).map_err(|e| e.to_string())?;
        ensure(scaled == (&base.0 * pow(l.clone(), 4), &base.1 * pow(l, 6)), || format!("n = {n}: not homogeneous"))?;
    }
    Ok(())
}

pub fn structural(n_max: usize) -> Check {
    let e = fixed_curve();
    for (name, om, rows) in produced_matrices(n_max)? {
        let rep = verify_annihilation(&om, &rows).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.rows_annihilate, || format!("{name}: gradient rows do not annihilate"))?;
        ensure(rows.len() != 2 || rep.bilinear == Some(true), || format!("{name}: bilinear identity fails"))?;
        let n = om.size();
        let pts = e.sample_points(2);
        for r in 1..=((n - 1) / 2).min(2) {
            let xi: Vec<Rational> = (1..=r as i64).map(rat).collect();
            let rank = rank_at_secant_point(&om, &e, &pts[..r], &xi).map_err(|e| format!("{name}: {e}"))?;
            ensure(rank == 2 * r, || format!("{name}: rank {rank} on a secant {}-plane", r - 1))?;
        }
    }
    Ok(())
}

pub fn cancellation(n_max: usize) -> Check {
    for n in 3..=n_max.min(9) {
        let inside =
            |used: &std::collections::BTreeSet<i64>, top: i64| used.iter().all(|&l| l == 0 || (2..=top).contains(&l));
        let a = build_a(n).map_err(|e| e.to_string())?;
        let b = build_b(n).map_err(|e| e.to_string())?;
        let om = omega_symbolic(n).map_err(|e| e.to_string())?;
        let top = n as i64;
        ensure(inside(&a.labels_used(), top + 1) && inside(&b.labels_used(), top + 1), || {
            format!("n = {n}: A or B leaves the window")
        })?;
        ensure(inside(&om.labels_used(), top), || format!("n = {n}: nB - 2A uses {:?}", om.labels_used()))?;
    }
    Ok(())
}

pub fn omega1(n_max: usize) -> Check {
    for n in 3..=n_max.min(8) {
        let sym = omega_symbolic(n)
            .and_then(|s| s.a_component(1))
            .and_then(|s| s.to_positions())
            .map_err(|e| e.to_string())?;
        ensure(sym == omega1_closed_form(n), || format!("n = {n}: coefficient of a1 differs from the closed form"))?;
    }
    Ok(())
}

pub fn run(n_max: usize) -> Vec<CheckResult> {
    let checks: [(&'static str, Box<dyn Fn() -> Check>); 9] = [
        ("lambda invariants", Box::new(move || lambda_invariants(n_max))),
        ("lambda sums", Box::new(move || lambda_sums(n_max))),
        ("explicit scaling", Box::new(move || explicit_scaling(n_max))),
        ("solver round trip", Box::new(move || solver_round_trip(n_max))),
        ("pfaffian certificates", Box::new(move || pfaffian_certificates(n_max))),
        ("invariance", Box::new(move || invariance(n_max, 20))),
        ("structural identities", Box::new(move || structural(n_max))),
        ("variable cancellation", Box::new(move || cancellation(n_max))),
        ("omega1 closed form", Box::new(move || omega1(n_max))),
    ];
    checks
        .iter()
        .map(|(name, f)| match f() {
            Ok(()) => CheckResult { name, passed: true, detail: String::new() },
            Err(detail) => CheckResult { name, passed: false, detail },
        })
        .collect()
}
