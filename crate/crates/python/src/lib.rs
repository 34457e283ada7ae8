//! Python module `g1jac`. Rationals cross the boundary as `fractions.Fraction`
//! on the way out and as anything whose `str()` is `"p"` or `"p/q"` on the way in.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use g1jac::cli::json::{self, ModelJson, PolyJson};
use g1jac::cli::ModelInput;
use g1jac::elliptic::{curve_quadrics, WeierstrassCurve};
use g1jac::exactmath::{format_rational, parse_rational, Polynomial, Rational};
use g1jac::explicit::{build_omega_explicit, classical_omega_cubic, classical_omega_quadric_pair, lambda_matrix};
use g1jac::invariants::{c4_c6, jacobian_equation};
use g1jac::linalg::RatMatrix;
use g1jac::omega::{gl_act, solve_omega, verify_annihilation, verify_pfaffians, OmegaMatrix, Provenance};
use g1jac::secant::{secant_chain, FormBasis};

create_exception!(g1jac, DegenerateModelError, PyException);

fn to_py(e: g1jac::Error) -> PyErr {
    match e.exit_code() {
        2 => PyValueError::new_err(e.to_string()),
        3 => DegenerateModelError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn rational_in(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&v.str()?.to_string()).map_err(to_py)
}

fn rational_out<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(q),))
}

#[pyclass(name = "Polynomial", module = "g1jac", frozen, from_py_object)]
#[derive(Clone)]
struct PyPolynomial(Polynomial);

#[pymethods]
impl PyPolynomial {
    /// Parses the JSON form `{"vars": n, "terms": [{"exps": [...], "coeff": "p/q"}]}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let p: PolyJson = json::from_json(text).map_err(to_py)?;
        Ok(PyPolynomial(p.to_poly().map_err(to_py)?))
    }

    fn to_json(&self) -> String {
        json::to_json(&PolyJson::from_poly(&self.0)).trim_end().to_string()
    }

    #[getter]
    fn vars(&self) -> usize {
        self.0.arity()
    }

    /// `(exponents, coefficient)` pairs, highest monomial first.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<u32>, Bound<'py, PyAny>)>> {
        self.0.terms().map(|(m, c)| Ok((m.exponents().to_vec(), rational_out(py, c)?))).collect()
    }

    fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({})", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "Curve", module = "g1jac", frozen, from_py_object)]
#[derive(Clone)]
struct PyCurve(WeierstrassCurve);

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (a1=None, a2=None, a3=None, a4=None, a6=None))]
    fn new(
        a1: Option<&Bound<'_, PyAny>>,
        a2: Option<&Bound<'_, PyAny>>,
        a3: Option<&Bound<'_, PyAny>>,
        a4: Option<&Bound<'_, PyAny>>,
        a6: Option<&Bound<'_, PyAny>>,
    ) -> PyResult<Self> {
        let get =
            |v: Option<&Bound<'_, PyAny>>| v.map(rational_in).unwrap_or_else(|| Ok(Rational::from_integer(0.into())));
        let e = WeierstrassCurve::new(get(a1)?, get(a2)?, get(a3)?, get(a4)?, get(a6)?).map_err(to_py)?;
        Ok(PyCurve(e))
    }

    fn coefficients<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.coefficients().iter().map(|a| rational_out(py, a)).collect()
    }

    fn c4<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        rational_out(py, &self.0.invariants().c4)
    }

    fn c6<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        rational_out(py, &self.0.invariants().c6)
    }

    fn discriminant<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        rational_out(py, &self.0.discriminant())
    }

    fn j_invariant<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        rational_out(py, &self.0.j_invariant())
    }

    /// The homogenized Weierstrass cubic.
    fn cubic(&self) -> PyPolynomial {
        PyPolynomial(self.0.weierstrass_cubic())
    }

    /// The `n(n-3)/2` quadrics of the degree `n` embedding.
    fn quadrics(&self, n: usize) -> PyResult<Vec<PyPolynomial>> {
        let q = curve_quadrics(&self.0, n).map_err(to_py)?;
        Ok(q.forms().iter().cloned().map(PyPolynomial).collect())
    }

    fn __repr__(&self) -> String {
        let [a1, a2, a3, a4, a6] = self.0.coefficients().map(|a| format_rational(&a));
        format!("Curve(a1={a1}, a2={a2}, a3={a3}, a4={a4}, a6={a6})")
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "Omega", module = "g1jac", frozen, from_py_object)]
#[derive(Clone)]
struct PyOmega(OmegaMatrix);

#[pymethods]
impl PyOmega {
    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn provenance(&self) -> &'static str {
        self.0.provenance.as_str()
    }

    fn entry(&self, i: usize, j: usize) -> PyResult<PyPolynomial> {
        let n = self.0.size();
        if i >= n || j >= n {
            return Err(PyIndexError::new_err(format!("({i}, {j}) outside a {n} x {n} matrix")));
        }
        Ok(PyPolynomial(self.0.matrix.get(i, j)))
    }

    fn normalized(&self) -> Self {
        PyOmega(self.0.normalized())
    }

    /// `(c4, c6)`.
    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let (c4, c6) = c4_c6(&self.0.matrix).map_err(to_py)?;
        Ok((rational_out(py, &c4)?, rational_out(py, &c6)?))
    }

    /// `y^2 = x^3 - 27 c4 x - 54 c6`.
    fn jacobian(&self) -> PyResult<PyCurve> {
        let (c4, c6) = c4_c6(&self.0.matrix).map_err(to_py)?;
        Ok(PyCurve(jacobian_equation(&c4, &c6).map_err(to_py)?))
    }

    /// `g * Omega` for an invertible matrix given as a list of rows.
    fn act(&self, g: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let rows =
            g.iter().map(|r| r.iter().map(rational_in).collect::<PyResult<Vec<_>>>()).collect::<PyResult<Vec<_>>>()?;
        let g = RatMatrix::from_rows(rows).map_err(to_py)?;
        Ok(PyOmega(gl_act(&g, &self.0).map_err(to_py)?))
    }

    /// The scalar `r` with `self = r * other`, or `None`.
    fn ratio_to<'py>(&self, py: Python<'py>, other: &Self) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.0.proportional_to(&other.0).map(|r| rational_out(py, &r)).transpose()
    }

    /// Gradient rows annihilate every column (and the bilinear identity
    /// holds for two equations).
    fn annihilates(&self, equations: Vec<PyPolynomial>) -> PyResult<bool> {
        let rows: Vec<_> = equations.iter().map(|f| f.0.gradient()).collect();
        Ok(verify_annihilation(&self.0, &rows).map_err(to_py)?.passed())
    }

    /// Common scalar relating the signed Pfaffians to the equations.
    fn pfaffian_scalar<'py>(&self, py: Python<'py>, equations: Vec<PyPolynomial>) -> PyResult<Bound<'py, PyAny>> {
        let rows: Vec<_> = equations.iter().map(|f| f.0.gradient()).collect();
        rational_out(py, &verify_pfaffians(&self.0, &rows).map_err(to_py)?)
    }

    fn to_json(&self) -> String {
        json::to_json(&json::matrix_to_json(&self.0.matrix)).trim_end().to_string()
    }
}

/// Solves for `Omega` from the equations of the secant variety: one form for
/// odd `n`, two for even `n`.
#[pyfunction]
fn solve(equations: Vec<PyPolynomial>) -> PyResult<PyOmega> {
    let n = equations.first().map(|f| f.0.arity()).ok_or_else(|| PyValueError::new_err("no equations"))?;
    let rows: Vec<_> = equations.iter().map(|f| f.0.gradient()).collect();
    Ok(PyOmega(solve_omega(&rows, n).map_err(to_py)?))
}

/// Equations of the last secant variety of the curve cut out by `quadrics`.
#[pyfunction]
fn secant_equations(quadrics: Vec<PyPolynomial>) -> PyResult<Vec<PyPolynomial>> {
    let n = quadrics.first().map(|f| f.0.arity()).ok_or_else(|| PyValueError::new_err("no quadrics"))?;
    let forms: Vec<Polynomial> = quadrics.into_iter().map(|f| f.0).collect();
    let basis = FormBasis::span(n, 2, &forms).map_err(to_py)?;
    let chain = secant_chain(&basis).map_err(to_py)?;
    Ok(chain.equations.forms().into_iter().cloned().map(PyPolynomial).collect())
}

#[pyfunction]
fn omega_explicit(curve: &PyCurve, n: usize) -> PyResult<PyOmega> {
    Ok(PyOmega(build_omega_explicit(&curve.0, n).map_err(to_py)?))
}

#[pyfunction]
fn omega_cubic(f: &PyPolynomial) -> PyResult<PyOmega> {
    Ok(PyOmega(classical_omega_cubic(&f.0).map_err(to_py)?))
}

#[pyfunction]
fn omega_quadric_pair(f1: &PyPolynomial, f2: &PyPolynomial) -> PyResult<PyOmega> {
    Ok(PyOmega(classical_omega_quadric_pair(&f1.0, &f2.0).map_err(to_py)?))
}

#[pyfunction]
fn omega_lambda(n: usize) -> PyOmega {
    PyOmega(OmegaMatrix::new(lambda_matrix(n), Provenance::Explicit))
}

/// Runs the whole pipeline on a model in JSON form; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (model, verify=false))]
fn jacobian_report(model: &str, verify: bool) -> PyResult<String> {
    let m: ModelJson = json::from_json(model).map_err(to_py)?;
    let input = ModelInput::from_json(&m).map_err(to_py)?;
    let report = g1jac::cli::full_jacobian(&input, verify).map_err(to_py)?;
    Ok(json::to_json(&report).trim_end().to_string())
}

#[pymodule(name = "g1jac")]
fn g1jac_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyOmega>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(secant_equations, m)?)?;
    m.add_function(wrap_pyfunction!(omega_explicit, m)?)?;
    m.add_function(wrap_pyfunction!(omega_cubic, m)?)?;
    m.add_function(wrap_pyfunction!(omega_quadric_pair, m)?)?;
    m.add_function(wrap_pyfunction!(omega_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian_report, m)?)?;
    m.add("DegenerateModelError", m.py().get_type::<DegenerateModelError>())?;
    Ok(())
}
