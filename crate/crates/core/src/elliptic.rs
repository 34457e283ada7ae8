//! Weierstrass curves, the group law, and the embedding of a curve in
//! `P^{n-1}` by the functions `1, x, y, x^2, xy, x^3, ...`.
//!
//! Coordinates of the embedding carry pole-order labels `m` in
//! `0, 2, 3, ..., n` (there is no label 1). Label `m` sits at zero-based
//! position `max(m, 1) - 1`, so positions `0..n` hold labels `0, 2, ..., n`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{basis_index, indexed_basis, rat, Monomial, Polynomial, Rational};
use crate::linalg::Echelon;
use crate::secant::FormBasis;

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`, nonsingular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a1: Rational,
    a2: Rational,
    a3: Rational,
    a4: Rational,
    a6: Rational,
}

/// Standard quantities attached to a Weierstrass equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveInvariants {
    pub b2: Rational,
    pub b4: Rational,
    pub b6: Rational,
    pub b8: Rational,
    pub c4: Rational,
    pub c6: Rational,
    pub discriminant: Rational,
    pub j: Rational,
}

impl WeierstrassCurve {
    pub fn new(a1: Rational, a2: Rational, a3: Rational, a4: Rational, a6: Rational) -> Result<Self> {
        let e = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        WeierstrassCurve::new(rat(a[0]), rat(a[1]), rat(a[2]), rat(a[3]), rat(a[4]))
    }

    /// Short form `y^2 = x^3 + a4 x + a6`.
    pub fn short(a4: Rational, a6: Rational) -> Result<Self> {
        WeierstrassCurve::new(Rational::zero(), Rational::zero(), Rational::zero(), a4, a6)
    }

    pub fn a1(&self) -> &Rational {
        &self.a1
    }
    pub fn a2(&self) -> &Rational {
        &self.a2
    }
    pub fn a3(&self) -> &Rational {
        &self.a3
    }
    pub fn a4(&self) -> &Rational {
        &self.a4
    }
    pub fn a6(&self) -> &Rational {
        &self.a6
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coefficients(&self) -> [Rational; 5] {
        [self.a1.clone(), self.a2.clone(), self.a3.clone(), self.a4.clone(), self.a6.clone()]
    }

    fn b_values(&self) -> (Rational, Rational, Rational, Rational) {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1 * a1 + rat(4) * a2;
        let b4 = rat(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + rat(4) * a6;
        let b8 = a1 * a1 * a6 + rat(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    fn c_values(&self) -> (Rational, Rational) {
        let (b2, b4, b6, _) = self.b_values();
        let c4 = &b2 * &b2 - rat(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + rat(36) * &b2 * &b4 - rat(216) * &b6;
        (c4, c6)
    }

    /// `(c4^3 - c6^2) / 1728`.
    pub fn discriminant(&self) -> Rational {
        let (c4, c6) = self.c_values();
        (&c4 * &c4 * &c4 - &c6 * &c6) / rat(1728)
    }

    pub fn invariants(&self) -> CurveInvariants {
        let (b2, b4, b6, b8) = self.b_values();
        let (c4, c6) = self.c_values();
        let discriminant = self.discriminant();
        let j = &c4 * &c4 * &c4 / &discriminant;
        CurveInvariants { b2, b4, b6, b8, c4, c6, discriminant, j }
    }

    pub fn j_invariant(&self) -> Rational {
        self.invariants().j
    }

    /// Coefficients after `x = u^2 x' + r`, `y = u^3 y' + u^2 s x' + t`.
    pub fn change_coordinates(&self, u: &Rational, r: &Rational, s: &Rational, t: &Rational) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::InvalidInput("u must be nonzero".into()));
        }
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let up = |k: u32| num_traits::pow(u.clone(), k as usize);
        let n1 = a1 + rat(2) * s;
        let n2 = a2 - s * a1 + rat(3) * r - s * s;
        let n3 = a3 + r * a1 + rat(2) * t;
        let n4 = a4 - s * a3 + rat(2) * r * a2 - (t + r * s) * a1 + rat(3) * r * r - rat(2) * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        WeierstrassCurve::new(n1 / up(1), n2 / up(2), n3 / up(3), n4 / up(4), n6 / up(6))
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let lhs = y * y + &self.a1 * x * y + &self.a3 * y;
                let rhs = x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6;
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: -y - &self.a1 * x - &self.a3 },
        }
    }

    /// Group law with identity the point at infinity.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        if x1 == x2 && (y1 + y2 + a1 * x2 + a3).is_zero() {
            return CurvePoint::Infinity;
        }
        let (lambda, nu) = if x1 != x2 {
            let dx = x2 - x1;
            ((y2 - y1) / &dx, (y1 * x2 - y2 * x1) / &dx)
        } else {
            let den = rat(2) * y1 + a1 * x1 + a3;
            let lam = (rat(3) * x1 * x1 + rat(2) * a2 * x1 + a4 - a1 * y1) / &den;
            let nu = (-(x1 * x1 * x1) + a4 * x1 + rat(2) * a6 - a3 * y1) / &den;
            (lam, nu)
        };
        let x3 = &lambda * &lambda + a1 * &lambda - a2 - x1 - x2;
        let y3 = -(&lambda + a1) * &x3 - nu - a3;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    pub fn mul(&self, k: i64, p: &CurvePoint) -> CurvePoint {
        let base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut acc = CurvePoint::Infinity;
        let mut pw = base;
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pw);
            }
            pw = self.add(&pw, &pw);
            k >>= 1;
        }
        acc
    }

    /// Affine points with integer `x` in `[-bound, bound]`, in order of `x`
    /// then `y`.
    pub fn small_points(&self, bound: i64) -> Vec<CurvePoint> {
        let mut out = Vec::new();
        for xi in -bound..=bound {
            let x = rat(xi);
            // y^2 + (a1 x + a3) y - (x^3 + a2 x^2 + a4 x + a6) = 0
            let b = &self.a1 * &x + &self.a3;
            let c = -(&x * &x * &x + &self.a2 * &x * &x + &self.a4 * &x + &self.a6);
            let disc = &b * &b - rat(4) * &c;
            let Some(root) = rational_sqrt(&disc) else { continue };
            let mut ys = vec![(-&b + &root) / rat(2), (-&b - &root) / rat(2)];
            ys.sort();
            ys.dedup();
            for y in ys {
                out.push(CurvePoint::Affine { x: x.clone(), y });
            }
        }
        out
    }

    /// Up to `count` distinct affine points: small points followed by small
    /// multiples and sums of them. Deterministic.
    pub fn sample_points(&self, count: usize) -> Vec<CurvePoint> {
        let mut out: Vec<CurvePoint> = Vec::new();
        let base = self.small_points(6);
        let push = |p: CurvePoint, out: &mut Vec<CurvePoint>| {
            if p != CurvePoint::Infinity && !out.contains(&p) {
                out.push(p);
            }
        };
        for p in &base {
            push(p.clone(), &mut out);
        }
        for k in 2..=4 {
            for p in &base {
                if out.len() >= count {
                    break;
                }
                push(self.mul(k, p), &mut out);
            }
        }
        out.truncate(count);
        out
    }

    /// Homogenised cubic in the coordinates `(x_0 : x_2 : x_3) = (1 : x : y)`.
    pub fn weierstrass_cubic(&self) -> Polynomial {
        let t = |e: [u32; 3], c: Rational| (e.to_vec(), c);
        Polynomial::from_terms(
            3,
            vec![
                t([1, 0, 2], rat(1)),
                t([1, 1, 1], self.a1.clone()),
                t([2, 0, 1], self.a3.clone()),
                t([0, 3, 0], rat(-1)),
                t([1, 2, 0], -self.a2.clone()),
                t([2, 1, 0], -self.a4.clone()),
                t([3, 0, 0], -self.a6.clone()),
            ],
        )
        .expect("arity 3")
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        CurvePoint::Affine { x: rat(x), y: rat(y) }
    }
}

/// Element of the coordinate ring of the affine curve, in the normal form
/// `f(x) + g(x) y`. Stored as a polynomial in `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionFieldElement(Polynomial);

impl FunctionFieldElement {
    pub fn x() -> Self {
        FunctionFieldElement(Polynomial::var(2, 0))
    }

    pub fn y() -> Self {
        FunctionFieldElement(Polynomial::var(2, 1))
    }

    pub fn poly(&self) -> &Polynomial {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn mul(&self, other: &Self, e: &WeierstrassCurve) -> Self {
        reduce_on_curve(&(&self.0 * &other.0), e)
    }

    pub fn eval(&self, p: &CurvePoint) -> Result<Rational> {
        match p {
            CurvePoint::Infinity => Err(Error::InvalidInput("cannot evaluate at the point at infinity".into())),
            CurvePoint::Affine { x, y } => self.0.eval(&[x.clone(), y.clone()]),
        }
    }

    /// `df / omega` with `omega = dx / (2y + a1 x + a3)`, i.e.
    /// `f_x * (2y + a1 x + a3) + f_y * (3x^2 + 2 a2 x + a4 - a1 y)`.
    pub fn derivative(&self, e: &WeierstrassCurve) -> Self {
        let (xdot, ydot) = coordinate_derivatives(e);
        let fx = self.0.diff(0).expect("arity 2");
        let fy = self.0.diff(1).expect("arity 2");
        reduce_on_curve(&(&(&fx * &xdot) + &(&fy * &ydot)), e)
    }
}

fn coordinate_derivatives(e: &WeierstrassCurve) -> (Polynomial, Polynomial) {
    let t = |ex: u32, ey: u32, c: Rational| (vec![ex, ey], c);
    let xdot = Polynomial::from_terms(2, vec![t(0, 1, rat(2)), t(1, 0, e.a1.clone()), t(0, 0, e.a3.clone())])
        .expect("arity 2");
    let ydot = Polynomial::from_terms(
        2,
        vec![t(2, 0, rat(3)), t(1, 0, rat(2) * &e.a2), t(0, 0, e.a4.clone()), t(0, 1, -e.a1.clone())],
    )
    .expect("arity 2");
    (xdot, ydot)
}

/// Normal form modulo the curve: eliminates `y^2` via
/// `y^2 = x^3 + a2 x^2 + a4 x + a6 - a1 xy - a3 y` until the `y`-degree is at most one.
pub fn reduce_on_curve(p: &Polynomial, e: &WeierstrassCurve) -> FunctionFieldElement {
    assert_eq!(p.arity(), 2, "function field elements are polynomials in (x, y)");
    let t = |ex: u32, ey: u32, c: Rational| (vec![ex, ey], c);
    let y2 = Polynomial::from_terms(
        2,
        vec![
            t(3, 0, rat(1)),
            t(2, 0, e.a2.clone()),
            t(1, 0, e.a4.clone()),
            t(0, 0, e.a6.clone()),
            t(1, 1, -e.a1.clone()),
            t(0, 1, -e.a3.clone()),
        ],
    )
    .expect("arity 2");
    let mut done = Polynomial::zero(2);
    let mut todo = p.clone();
    while !todo.is_zero() {
        let mut next = Polynomial::zero(2);
        for (m, c) in todo.terms() {
            let [ex, ey] = [m.exponents()[0], m.exponents()[1]];
            if ey <= 1 {
                done.add_term(m.clone(), c.clone());
            } else {
                let rest = Polynomial::monomial(2, Monomial::new(vec![ex, ey - 2]), c.clone());
                next += &(&rest * &y2);
            }
        }
        todo = next;
    }
    FunctionFieldElement(done)
}

/// Pole-order labels `0, 2, 3, ..., n` of the embedding coordinates.
pub fn coordinate_labels(n: usize) -> Vec<usize> {
    std::iter::once(0).chain(2..=n).collect()
}

/// Zero-based coordinate position of label `m`.
pub fn label_position(m: usize) -> usize {
    m.max(1) - 1
}

/// The function `x_m`: `x^(m/2)` for even `m`, `x^((m-3)/2) y` for odd `m >= 3`.
pub fn rr_function(m: usize) -> FunctionFieldElement {
    assert!(m != 1, "there is no function with a simple pole");
    let e = if m % 2 == 0 { vec![(m / 2) as u32, 0] } else { vec![((m - 3) / 2) as u32, 1] };
    FunctionFieldElement(Polynomial::monomial(2, Monomial::new(e), Rational::one()))
}

/// Basis `1, x, y, x^2, xy, ...` of the Riemann-Roch space of `n` times the
/// point at infinity, in coordinate order.
pub fn rr_basis(n: usize) -> Result<Vec<FunctionFieldElement>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("embedding degree must be at least 3, got {n}")));
    }
    Ok(coordinate_labels(n).into_iter().map(rr_function).collect())
}

/// Basis of the quadrics vanishing on the image of `e` under the degree-`n`
/// embedding: the kernel of the map sending `x_i x_j` to the reduced product
/// of the corresponding functions. Has dimension `n(n-3)/2`.
pub fn curve_quadrics(e: &WeierstrassCurve, n: usize) -> Result<FormBasis> {
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "degree {n} curves have no quadrics; use the plane cubic model for n = 3"
        )));
    }
    let funcs = rr_basis(n)?;
    let (quad_basis, _) = indexed_basis(n, 2);
    // target basis x^a y^b, b <= 1, 2a + 3b <= 2n
    let mut target: Vec<Monomial> = Vec::new();
    for b in 0..=1u32 {
        let mut a = 0u32;
        while 2 * a + 3 * b <= 2 * n as u32 {
            target.push(Monomial::new(vec![a, b]));
            a += 1;
        }
    }
    let tindex = basis_index(&target);
    // column k = image of the k-th quadratic monomial
    let images: Vec<Vec<Rational>> = quad_basis
        .iter()
        .map(|m| {
            let idx = m.index_multiset();
            let f = funcs[idx[0]].mul(&funcs[idx[1]], e);
            f.poly().to_coeff_vector(&tindex, target.len())
        })
        .collect::<Result<_>>()?;
    let mut ech = Echelon::new(quad_basis.len());
    for r in 0..target.len() {
        let row: Vec<Rational> = images.iter().map(|col| col[r].clone()).collect();
        ech.insert(&row);
    }
    let kernel = ech.kernel();
    let expected = n * (n - 3) / 2;
    if kernel.len() != expected {
        return Err(Error::Internal(format!("found {} quadrics, expected {expected}", kernel.len())));
    }
    let forms: Vec<Polynomial> = kernel.iter().map(|v| Polynomial::from_coeff_vector(n, &quad_basis, v)).collect();
    FormBasis::span(n, 2, &forms)
}

/// Values of the coordinate functions and of their derivatives `df/omega`
/// at an affine point.
pub fn point_vector(e: &WeierstrassCurve, p: &CurvePoint, n: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if *p == CurvePoint::Infinity {
        return Err(Error::InvalidInput("point vector of the point at infinity".into()));
    }
    if !e.contains(p) {
        return Err(Error::InvalidInput("point is not on the curve".into()));
    }
    let funcs = rr_basis(n)?;
    let v = funcs.iter().map(|f| f.eval(p)).collect::<Result<Vec<_>>>()?;
    let dv = funcs.iter().map(|f| f.derivative(e).eval(p)).collect::<Result<Vec<_>>>()?;
    Ok((v, dv))
}

/// The point `sum_i xi_i v_{P_i}` of the secant variety.
pub fn secant_point(e: &WeierstrassCurve, points: &[CurvePoint], xi: &[Rational], n: usize) -> Result<Vec<Rational>> {
    if points.len() != xi.len() {
        return Err(Error::DimensionMismatch { expected: points.len(), found: xi.len() });
    }
    let mut acc = vec![Rational::zero(); n];
    for (p, c) in points.iter().zip(xi) {
        let (v, _) = point_vector(e, p, n)?;
        for (a, b) in acc.iter_mut().zip(v) {
            *a += c * b;
        }
    }
    Ok(acc)
}

/// Integer square root helper re-exported for callers that build test data.
pub fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &(&r * &r) == n
    }
}
