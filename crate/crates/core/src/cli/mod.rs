//! Command line front end: model parsing, the full pipeline from a model to
//! its Jacobian, and the self-check suite.
//!
//! Exit codes: 0 success, 2 invalid input, 3 degenerate model, 4 internal
//! error or failed verification.

pub mod json;
pub mod selfcheck;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::elliptic::{curve_quadrics, CurvePoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, rat, Polynomial};
use crate::explicit::classical_omega_cubic;
use crate::invariants::{c4_c6, jacobian_equation};
use crate::omega::{rank_at_secant_point, solve_omega, verify_annihilation, verify_pfaffians, OmegaMatrix};
use crate::secant::{beta, secant_chain, FormBasis, StepRecord};

use json::{CurveJson, JacobianReport, ModelJson, OmegaReport, PolyJson, RankJson, StepJson, VerificationJson};

/// A genus one model in one of the accepted shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelInput {
    /// A plane cubic in 3 variables.
    Cubic(Polynomial),
    /// The `n(n-3)/2` quadrics defining a curve of degree `n >= 4`.
    Quadrics(FormBasis),
    /// A Weierstrass curve, embedded by `1, x, y, x^2, xy, ...` in degree `n`.
    Weierstrass { curve: WeierstrassCurve, degree: usize },
}

impl ModelInput {
    pub fn degree(&self) -> usize {
        match self {
            ModelInput::Cubic(_) => 3,
            ModelInput::Quadrics(b) => b.arity(),
            ModelInput::Weierstrass { degree, .. } => *degree,
        }
    }

    pub fn from_json(m: &ModelJson) -> Result<Self> {
        let given = m.cubic.is_some() as u8 + m.quadrics.is_some() as u8 + m.weierstrass.is_some() as u8;
        if given != 1 {
            return Err(Error::InvalidInput("give exactly one of \"cubic\", \"quadrics\", \"weierstrass\"".into()));
        }
        let n = m.degree;
        if let Some(c) = &m.cubic {
            if n != 3 {
                return Err(Error::InvalidInput(format!("a cubic model has degree 3, not {n}")));
            }
            let f = c.to_poly()?;
            if f.arity() != 3 || !f.is_form_of_degree(3) {
                return Err(Error::InvalidInput("the cubic must be a nonzero cubic form in 3 variables".into()));
            }
            return Ok(ModelInput::Cubic(f));
        }
        if let Some(qs) = &m.quadrics {
            if n < 4 {
                return Err(Error::InvalidInput(format!("quadric models need degree at least 4, got {n}")));
            }
            let forms: Vec<Polynomial> = qs.iter().map(PolyJson::to_poly).collect::<Result<_>>()?;
            if let Some(f) = forms.iter().find(|f| f.arity() != n) {
                return Err(Error::InvalidInput(format!("quadric in {} variables for degree {n}", f.arity())));
            }
            let span = FormBasis::span(n, 2, &forms)?;
            let want = beta(2, n);
            if span.dim() != want {
                return Err(Error::InvalidInput(format!(
                    "degree {n} needs {want} independent quadrics, the input spans {}",
                    span.dim()
                )));
            }
            return Ok(ModelInput::Quadrics(span));
        }
        let curve = m.weierstrass.as_ref().expect("checked above").to_curve()?;
        if n < 3 {
            return Err(Error::InvalidInput(format!("degree must be at least 3, got {n}")));
        }
        Ok(ModelInput::Weierstrass { curve, degree: n })
    }
}

/// The model after resolving Weierstrass input to equations.
struct Equations {
    n: usize,
    omega: OmegaMatrix,
    rows: Vec<Vec<Polynomial>>,
    steps: Vec<StepRecord>,
    curve: Option<WeierstrassCurve>,
}

fn compute_omega(input: &ModelInput) -> Result<Equations> {
    let (model, curve) = match input {
        ModelInput::Weierstrass { curve, degree: 3 } => {
            (ModelInput::Cubic(curve.weierstrass_cubic()), Some(curve.clone()))
        }
        ModelInput::Weierstrass { curve, degree } => {
            (ModelInput::Quadrics(curve_quadrics(curve, *degree)?), Some(curve.clone()))
        }
        other => (other.clone(), None),
    };
    match model {
        ModelInput::Cubic(f) => {
            let omega = classical_omega_cubic(&f)?.normalized();
            Ok(Equations { n: 3, omega, rows: vec![f.gradient()], steps: Vec::new(), curve })
        }
        ModelInput::Quadrics(q) => {
            let n = q.arity();
            let chain = secant_chain(&q)?;
            let rows = chain.equations.gradient_rows();
            let omega = solve_omega(&rows, n)?;
            Ok(Equations { n, omega, rows, steps: chain.steps, curve })
        }
        ModelInput::Weierstrass { .. } => unreachable!("resolved above"),
    }
}

fn steps_json(steps: &[StepRecord]) -> Vec<StepJson> {
    steps.iter().map(|s| StepJson { degree: s.degree, dim: s.dim, expected: s.expected }).collect()
}

/// `Omega` only, normalized.
pub fn omega_report(input: &ModelInput) -> Result<OmegaReport> {
    let eq = compute_omega(input)?;
    Ok(OmegaReport {
        degree: eq.n,
        provenance: eq.omega.provenance.as_str().into(),
        omega: json::matrix_to_json(&eq.omega.matrix),
        dimensions: steps_json(&eq.steps),
    })
}

/// Ranks of `Omega` at points of `Sec^r C` for `r = 1, ..., (n-1)/2`,
/// built from sample points of the curve.
pub fn secant_ranks(omega: &OmegaMatrix, e: &WeierstrassCurve) -> Result<Vec<RankJson>> {
    let n = omega.size();
    let top = (n - 1) / 2;
    let pts: Vec<CurvePoint> = e.sample_points(top);
    if pts.len() < top {
        return Err(Error::DegenerateModel(format!("found only {} sample points on the curve", pts.len())));
    }
    let mut out = Vec::new();
    for r in 1..=top {
        let xi: Vec<_> = (1..=r as i64).map(rat).collect();
        let rank = rank_at_secant_point(omega, e, &pts[..r], &xi)?;
        out.push(RankJson { r, rank, expected: 2 * r });
    }
    Ok(out)
}

/// Runs the whole pipeline; with `verify`, also the annihilation,
/// Pfaffian and rank checks.
pub fn full_jacobian(input: &ModelInput, verify: bool) -> Result<JacobianReport> {
    let eq = compute_omega(input)?;
    let (c4, c6) = c4_c6(&eq.omega.matrix)?;
    let jac = jacobian_equation(&c4, &c6)?;
    let mut verification = VerificationJson { dimensions: steps_json(&eq.steps), ..Default::default() };
    if verify {
        let ann = verify_annihilation(&eq.omega, &eq.rows)?;
        verification.annihilation = Some(ann.rows_annihilate);
        verification.bilinear = ann.bilinear;
        match verify_pfaffians(&eq.omega, &eq.rows) {
            Ok(l) => {
                verification.pfaffians = Some(true);
                verification.pfaffian_scalar = Some(format_rational(&l));
            }
            Err(Error::Proportionality(_)) => verification.pfaffians = Some(false),
            Err(e) => return Err(e),
        }
        if let Some(e) = &eq.curve {
            verification.secant_ranks = Some(secant_ranks(&eq.omega, e)?);
        }
    }
    Ok(JacobianReport {
        degree: eq.n,
        provenance: eq.omega.provenance.as_str().into(),
        omega: json::matrix_to_json(&eq.omega.matrix),
        c4: format_rational(&c4),
        c6: format_rational(&c6),
        jacobian: CurveJson::from_curve(&jac),
        j: format_rational(&jac.j_invariant()),
        verification,
    })
}

/// The quadric model of `e` embedded in degree `n >= 4`.
pub fn embed(e: &WeierstrassCurve, n: usize) -> Result<ModelJson> {
    if n == 3 {
        return Err(Error::InvalidInput(
            "degree 3 models are plane cubics, not quadrics; pass {\"degree\": 3, \"weierstrass\": ...} or a cubic to `jacobian`".into(),
        ));
    }
    if n < 3 {
        return Err(Error::InvalidInput(format!("degree must be at least 4, got {n}")));
    }
    let q = curve_quadrics(e, n)?;
    Ok(ModelJson {
        degree: n,
        cubic: None,
        quadrics: Some(q.forms().iter().map(PolyJson::from_poly).collect()),
        weierstrass: None,
    })
}

#[derive(Debug, Parser)]
#[command(name = "g1jac", version, about = "Jacobians of genus one normal curves in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute Omega, c4, c6 and the Jacobian of a model.
    Jacobian {
        #[arg(long)]
        input: PathBuf,
        /// Also run the annihilation, Pfaffian and secant rank checks.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the quadric model of a Weierstrass curve embedded in degree n.
    Embed {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a1: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a2: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a3: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a4: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a6: String,
        #[arg(long)]
        n: usize,
    },
    /// Compute Omega only.
    Omega {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the built-in checks up to degree n-max.
    Selfcheck {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
}

fn read_model(path: &PathBuf) -> Result<ModelInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    ModelInput::from_json(&json::from_json(&text)?)
}

/// What a command prints and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(cli: Cli) -> Outcome {
    match execute(cli) {
        Ok((stdout, code)) => {
            let stderr = if code == 0 { String::new() } else { "error: one or more checks failed\n".into() };
            Outcome { stdout, stderr, code }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn execute(cli: Cli) -> Result<(String, i32)> {
    match cli.command {
        Command::Jacobian { input, verify, output } => {
            let report = full_jacobian(&read_model(&input)?, verify)?;
            let text = json::to_json(&report);
            let code = if report.verification.passed() { 0 } else { 4 };
            match output {
                Some(path) => {
                    std::fs::write(&path, &text)
                        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
                    Ok((String::new(), code))
                }
                None => Ok((text, code)),
            }
        }
        Command::Embed { a1, a2, a3, a4, a6, n } => {
            let p = |s: &str| parse_rational(s);
            let e = WeierstrassCurve::new(p(&a1)?, p(&a2)?, p(&a3)?, p(&a4)?, p(&a6)?)?;
            Ok((json::to_json(&embed(&e, n)?), 0))
        }
        Command::Omega { input } => Ok((json::to_json(&omega_report(&read_model(&input)?)?), 0)),
        Command::Selfcheck { n_max } => {
            if n_max < 3 {
                return Err(Error::InvalidInput(format!("n-max must be at least 3, got {n_max}")));
            }
            let results = selfcheck::run(n_max);
            let mut text = String::new();
            for r in &results {
                text.push_str(&r.line());
                text.push('\n');
            }
            let code = if results.iter().all(|r| r.passed) { 0 } else { 4 };
            Ok((text, code))
        }
    }
}
