use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactmath::{indexed_basis, Monomial, Polynomial, Rational};
use crate::linalg::{normalize_vector, Echelon};

/// Basis of a space of forms of one common degree.
///
/// The stored basis is canonical: the reduced row echelon form of the
/// coefficient vectors (columns in descending graded-lex order), each row
/// scaled to primitive integers. Two `FormBasis` values are equal iff they
/// span the same space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormBasis {
    arity: usize,
    degree: u32,
    forms: Vec<Polynomial>,
}

impl FormBasis {
    /// Canonical basis of the span of `forms`, which must all be forms of
    /// degree `degree` in `arity` variables.
    pub fn span(arity: usize, degree: u32, forms: &[Polynomial]) -> Result<Self> {
        let (basis, index) = indexed_basis(arity, degree);
        let mut ech = Echelon::new(basis.len());
        for f in forms {
            if f.arity() != arity {
                return Err(Error::DimensionMismatch { expected: arity, found: f.arity() });
            }
            if !f.is_form_of_degree(degree) {
                return Err(Error::InvalidInput(format!("{f} is not a form of degree {degree}")));
            }
            ech.insert(&f.to_coeff_vector(&index, basis.len())?);
        }
        Ok(FormBasis::from_echelon(arity, degree, &basis, &ech))
    }

    pub(crate) fn from_echelon(arity: usize, degree: u32, basis: &[Monomial], ech: &Echelon) -> Self {
        let forms = ech
            .reduced_rows()
            .into_iter()
            .map(|(_, row)| Polynomial::from_coeff_vector(arity, basis, &normalize_vector(row)))
            .collect();
        FormBasis { arity, degree, forms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    pub fn into_forms(self) -> Vec<Polynomial> {
        self.forms
    }

    /// Whether `f` lies in the span.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        let mut all = self.forms.clone();
        all.push(f.clone());
        Ok(FormBasis::span(self.arity, self.degree, &all)?.dim() == self.dim())
    }

    /// Coefficient vectors of the basis over the monomial basis of the degree.
    pub fn coefficient_rows(&self) -> Result<(Vec<Monomial>, HashMap<Monomial, usize>, Vec<Vec<Rational>>)> {
        let (basis, index) = indexed_basis(self.arity, self.degree);
        let rows = self.forms.iter().map(|f| f.to_coeff_vector(&index, basis.len())).collect::<Result<_>>()?;
        Ok((basis, index, rows))
    }
}
