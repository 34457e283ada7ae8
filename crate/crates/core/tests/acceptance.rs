//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. All comparisons are exact.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use g1jac::elliptic::{curve_quadrics, WeierstrassCurve};
use g1jac::exactmath::{binomial, parse_rational, rat, ratio, Polynomial, Rational};
use g1jac::explicit::{
    build_a, build_b, build_omega_explicit, classical_omega_cubic, classical_omega_quadric_pair, lambda_matrix,
    omega_symbolic,
};
use g1jac::invariants::{c4_c6, c4_sum, c6_sum, jacobian_equation, matrix_m, tensor_n};
use g1jac::linalg::{AltPolyMatrix, RatMatrix};
use g1jac::omega::{gl_act, rank_at_secant_point, solve_omega, verify_annihilation, verify_pfaffians, OmegaMatrix};
use g1jac::secant::secant_chain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! check {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn pow(q: &Rational, k: usize) -> Rational {
    num_traits::pow(q.clone(), k)
}

fn curve(a: [i64; 5]) -> WeierstrassCurve {
    WeierstrassCurve::from_i64(a).unwrap()
}

/// c4 and c6 straight from the textbook b-quantities.
fn textbook_c4_c6(a: [i64; 5]) -> (Rational, Rational) {
    let [a1, a2, a3, a4, a6] = a.map(rat);
    let b2 = &a1 * &a1 + rat(4) * &a2;
    let b4 = rat(2) * &a4 + &a1 * &a3;
    let b6 = &a3 * &a3 + rat(4) * &a6;
    let c4 = &b2 * &b2 - rat(24) * &b4;
    let c6 = -(&b2 * &b2 * &b2) + rat(36) * &b2 * &b4 - rat(216) * &b6;
    (c4, c6)
}

const CURVES: [[i64; 5]; 4] = [[0, 0, 1, 0, 0], [0, 0, 1, -1, 0], [0, 0, 0, 0, 1], [1, -1, 1, -3, 3]];
const FIXED: [i64; 5] = [0, 0, 1, -1, 0];

fn lambda_invariants() -> Outcome {
    for n in 4..=9 {
        let (c4, c6) = c4_c6(&lambda_matrix(n)).map_err(|e| e.to_string())?;
        let k = rat(n as i64 - 2);
        check!(c4 == pow(&k, 4), "n = {n}: c4 = {c4}");
        check!(c6 == -pow(&k, 6), "n = {n}: c6 = {c6}");
    }
    Ok(())
}

fn sum_identities() -> Outcome {
    for n in 4..=9usize {
        let l = lambda_matrix(n);
        let m = matrix_m(&l).map_err(|e| e.to_string())?;
        let nt = tensor_n(&l, &m).map_err(|e| e.to_string())?;
        let ni = n as i64;
        let s4 = ratio(16, 3) * rat(ni) * rat((ni - 2).pow(2)) * Rational::from_integer(binomial(ni + 3, 5));
        let s6 = rat(64) * rat(ni) * rat((ni - 2).pow(3)) * Rational::from_integer(binomial(ni + 5, 7));
        check!(c4_sum(&m) == s4, "n = {n}: c4 sum {} != {s4}", c4_sum(&m));
        check!(c6_sum(&nt) == s6, "n = {n}: c6 sum {} != {s6}", c6_sum(&nt));
    }
    Ok(())
}

fn explicit_scaling() -> Outcome {
    for a in CURVES {
        let (c4e, c6e) = textbook_c4_c6(a);
        for n in 3..=7 {
            let om = build_omega_explicit(&curve(a), n).map_err(|e| e.to_string())?;
            let (c4, c6) = c4_c6(&om.matrix).map_err(|e| e.to_string())?;
            let k = rat(n as i64 - 2);
            check!(c4 == &c4e * pow(&k, 4), "{a:?}, n = {n}: c4 = {c4}");
            check!(c6 == &c6e * pow(&k, 6), "{a:?}, n = {n}: c6 = {c6}");
        }
    }
    Ok(())
}

fn solver_round_trip() -> Outcome {
    let e = curve(FIXED);
    let j_e = parse_rational("110592/37").unwrap();
    let beta = |r: usize, n: usize| -> usize {
        // r-subsets of Z/nZ without two cyclically adjacent elements
        (0u32..1 << n)
            .filter(|s| {
                s.count_ones() as usize == r && (s & s.rotate_right(1) & ((1 << n) - 1)) == 0 && {
                    let wrap = (s & 1 != 0) && (s >> (n - 1)) & 1 != 0;
                    !wrap
                }
            })
            .count()
    };
    for n in 5..=7 {
        let q = curve_quadrics(&e, n).map_err(|e| e.to_string())?;
        let chain = secant_chain(&q).map_err(|e| e.to_string())?;
        for s in &chain.steps {
            if (s.degree as usize) < n {
                check!(
                    s.dim == beta(s.degree as usize, n),
                    "n = {n}: degree {} piece has dimension {}",
                    s.degree,
                    s.dim
                );
            }
        }
        let rows = chain.equations.gradient_rows();
        let solved = solve_omega(&rows, n).map_err(|e| e.to_string())?;
        let explicit = build_omega_explicit(&e, n).map_err(|e| e.to_string())?;
        check!(
            solved.proportional_to(&explicit).is_some(),
            "n = {n}: solved and explicit matrices are not proportional"
        );
        let (c4, c6) = c4_c6(&solved.matrix).map_err(|e| e.to_string())?;
        let jac = jacobian_equation(&c4, &c6).map_err(|e| e.to_string())?;
        check!(jac.j_invariant() == j_e, "n = {n}: j = {}", jac.j_invariant());
    }
    Ok(())
}

/// Every matrix the library produces for the fixed curve, with the
/// gradient rows it should be checked against.
fn produced(n_max: usize) -> Result<Vec<(String, OmegaMatrix, Vec<Vec<Polynomial>>)>, String> {
    let e = curve(FIXED);
    let f = e.weierstrass_cubic();
    let rows = vec![f.gradient()];
    let mut out = vec![
        ("n = 3 classical".to_string(), classical_omega_cubic(&f).map_err(|e| e.to_string())?, rows.clone()),
        ("n = 3 solved".to_string(), solve_omega(&rows, 3).map_err(|e| e.to_string())?, rows.clone()),
        ("n = 3 explicit".to_string(), build_omega_explicit(&e, 3).map_err(|e| e.to_string())?, rows),
    ];
    for n in 4..=n_max {
        let chain = secant_chain(&curve_quadrics(&e, n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
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

fn pfaffian_certificates() -> Outcome {
    for (name, om, rows) in produced(5)? {
        verify_pfaffians(&om, &rows).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn invariance_suite() -> Outcome {
    let e = curve(FIXED);
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for n in 3..=5 {
        let om = build_omega_explicit(&e, n).map_err(|e| e.to_string())?;
        let base = c4_c6(&om.matrix).map_err(|e| e.to_string())?;
        let mut done = 0;
        while done < 20 {
            let rows: Vec<Vec<Rational>> =
                (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-4..=4))).collect()).collect();
            let g = RatMatrix::from_rows(rows).unwrap();
            if g.determinant().unwrap() == rat(0) {
                continue;
            }
            done += 1;
            let moved = gl_act(&g, &om).map_err(|e| e.to_string())?;
            check!(
                c4_c6(&moved.matrix).map_err(|e| e.to_string())? == base,
                "n = {n}: invariants move under {:?}",
                g.to_rows()
            );
        }
        for s in [rat(2), ratio(-3, 7)] {
            let scalar = RatMatrix::scalar(n, s.clone());
            check!(gl_act(&scalar, &om).map_err(|e| e.to_string())? == om, "n = {n}: scalar {s} acts nontrivially");
            let (c4, c6) = c4_c6(&om.matrix.scale(&s)).map_err(|e| e.to_string())?;
            check!(c4 == &base.0 * pow(&s, 4) && c6 == &base.1 * pow(&s, 6), "n = {n}: not homogeneous under {s}");
        }
    }
    Ok(())
}

fn structural_identities() -> Outcome {
    let e = curve(FIXED);
    let pts = e.sample_points(2);
    check!(pts.len() == 2, "too few sample points");
    for (name, om, rows) in produced(7)? {
        let rep = verify_annihilation(&om, &rows).map_err(|e| format!("{name}: {e}"))?;
        check!(rep.rows_annihilate, "{name}: a gradient row does not annihilate");
        if om.size() % 2 == 0 {
            check!(rep.bilinear == Some(true), "{name}: bilinear identity fails");
        }
        for r in 1..=2usize {
            if 2 * r >= om.size() {
                continue;
            }
            let xi: Vec<Rational> = (1..=r as i64).map(rat).collect();
            let rank = rank_at_secant_point(&om, &e, &pts[..r], &xi).map_err(|e| format!("{name}: {e}"))?;
            check!(rank == 2 * r, "{name}: rank {rank} at a point of Sec^{r}");
        }
    }
    Ok(())
}

fn variable_cancellation() -> Outcome {
    let ok = |used: BTreeSet<i64>, top: i64| used.iter().all(|&l| l == 0 || (2..=top).contains(&l));
    for n in 3..=9usize {
        let top = n as i64;
        let a = build_a(n).map_err(|e| e.to_string())?;
        let b = build_b(n).map_err(|e| e.to_string())?;
        let om = omega_symbolic(n).map_err(|e| e.to_string())?;
        check!(ok(a.labels_used(), top + 1), "n = {n}: A uses {:?}", a.labels_used());
        check!(ok(b.labels_used(), top + 1), "n = {n}: B uses {:?}", b.labels_used());
        check!(ok(om.labels_used(), top), "n = {n}: nB - 2A uses {:?}", om.labels_used());
    }
    Ok(())
}

fn omega1_closed_form() -> Outcome {
    let par = |k: i64| if k % 2 == 0 { 1 } else { -1 };
    for n in 3..=8usize {
        let ni = n as i64;
        let labels: Vec<i64> = std::iter::once(0).chain(2..=ni).collect();
        let x = |m: i64| Polynomial::var(n, if m == 0 { 0 } else { (m - 1) as usize });
        let expected = AltPolyMatrix::from_upper(n, n, |i, j| {
            let (r, s) = (labels[i], labels[j]);
            let gamma = par(s) * ni - 2 * (par(s) * (s / 2) - par(r) * (r / 2));
            let mut p = (&x(r) * &x(s)).scale(&rat(gamma));
            if (r + s) % 2 == 0 {
                for k in 1..(s - r) / 2 {
                    p += &(&x(r + 2 * k) * &x(s - 2 * k)).scale(&rat(par(s) * ni));
                }
            }
            p
        });
        let got = omega_symbolic(n)
            .and_then(|s| s.a_component(1))
            .and_then(|s| s.to_positions())
            .map_err(|e| e.to_string())?;
        for i in 0..n {
            for j in (i + 1)..n {
                check!(
                    got.get(i, j) == expected.get(i, j),
                    "n = {n}, entry ({}, {}): {} vs {}",
                    labels[i],
                    labels[j],
                    got.get(i, j),
                    expected.get(i, j)
                );
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 lambda invariants", lambda_invariants),
        ("2 sum identities", sum_identities),
        ("3 explicit scaling law", explicit_scaling),
        ("4 solver round trip", solver_round_trip),
        ("5 pfaffian certificates", pfaffian_certificates),
        ("6 invariance suite", invariance_suite),
        ("7 structural identities", structural_identities),
        ("8 variable cancellation", variable_cancellation),
        ("9 omega1 closed form", omega1_closed_form),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(()) => println!("PASS criterion {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
