//! JSON forms of polynomials, curves, models and reports. Rationals are
//! always strings `"p/q"` (or `"p"`), polynomials list their terms in
//! descending graded-lex order.

use serde::{Deserialize, Serialize};

use crate::elliptic::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, Polynomial};
use crate::linalg::AltPolyMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &Polynomial) -> Self {
        let terms =
            p.terms().map(|(m, c)| TermJson { exps: m.exponents().to_vec(), coeff: format_rational(c) }).collect();
        PolyJson { vars: p.arity(), terms }
    }

    pub fn to_poly(&self) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exps.len() != self.vars {
                return Err(Error::InvalidInput(format!(
                    "term has {} exponents in a polynomial with {} variables",
                    t.exps.len(),
                    self.vars
                )));
            }
            terms.push((t.exps.clone(), parse_rational(&t.coeff)?));
        }
        Polynomial::from_terms(self.vars, terms)
    }
}

/// Row-major, full square matrix.
pub fn matrix_to_json(m: &AltPolyMatrix) -> Vec<Vec<PolyJson>> {
    m.to_full().iter().map(|row| row.iter().map(PolyJson::from_poly).collect()).collect()
}

pub fn matrix_from_json(rows: &[Vec<PolyJson>]) -> Result<AltPolyMatrix> {
    let full: Vec<Vec<Polynomial>> =
        rows.iter().map(|r| r.iter().map(PolyJson::to_poly).collect::<Result<_>>()).collect::<Result<_>>()?;
    AltPolyMatrix::from_full(full)
}

fn zero() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    #[serde(default = "zero")]
    pub a1: String,
    #[serde(default = "zero")]
    pub a2: String,
    #[serde(default = "zero")]
    pub a3: String,
    #[serde(default = "zero")]
    pub a4: String,
    #[serde(default = "zero")]
    pub a6: String,
}

impl CurveJson {
    pub fn from_curve(e: &WeierstrassCurve) -> Self {
        let [a1, a2, a3, a4, a6] = e.coefficients().map(|a| format_rational(&a));
        CurveJson { a1, a2, a3, a4, a6 }
    }

    pub fn to_curve(&self) -> Result<WeierstrassCurve> {
        let p = |s: &String| parse_rational(s);
        WeierstrassCurve::new(p(&self.a1)?, p(&self.a2)?, p(&self.a3)?, p(&self.a4)?, p(&self.a6)?)
    }
}

/// A model file: exactly one of `cubic`, `quadrics`, `weierstrass`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubic: Option<PolyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrics: Option<Vec<PolyJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weierstrass: Option<CurveJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub degree: u32,
    pub dim: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankJson {
    pub r: usize,
    pub rank: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationJson {
    /// Graded pieces met along the secant chain.
    pub dimensions: Vec<StepJson>,
    pub annihilation: Option<bool>,
    /// Only for two equations.
    pub bilinear: Option<bool>,
    pub pfaffians: Option<bool>,
    pub pfaffian_scalar: Option<String>,
    /// Only when the curve and points on it are known.
    pub secant_ranks: Option<Vec<RankJson>>,
}

impl VerificationJson {
    /// False if any check that ran failed.
    pub fn passed(&self) -> bool {
        self.dimensions.iter().all(|s| s.dim == s.expected)
            && self.annihilation != Some(false)
            && self.bilinear != Some(false)
            && self.pfaffians != Some(false)
            && self.secant_ranks.iter().flatten().all(|r| r.rank == r.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub degree: usize,
    pub provenance: String,
    pub omega: Vec<Vec<PolyJson>>,
    pub dimensions: Vec<StepJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianReport {
    pub degree: usize,
    pub provenance: String,
    pub omega: Vec<Vec<PolyJson>>,
    pub c4: String,
    pub c6: String,
    pub jacobian: CurveJson,
    pub j: String,
    pub verification: VerificationJson,
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("report types serialize");
    s.push('\n');
    s
}

pub fn from_json<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))
}
