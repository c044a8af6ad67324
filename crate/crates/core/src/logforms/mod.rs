//! Logarithmic forms along `Σ = {x = 0}`.
//!
//! Top forms are stored by numerator: `ω = g · x⁻¹ dx ∧ dy1 ∧ … ∧ dyn`.

mod exterior;
mod tangent;

use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Polynomial, Truncation, Q};

pub use exterior::{HolForm, LogForm};
pub use tangent::{divide_by_df, generator_numerator, tangent_space_basis, Eta, TangentGenerator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogFormError {
    #[error("vector field is not tangent to x = 0")]
    NotTangent,
    #[error("numerator vanishes at the origin; the form has no dual Nambu tensor")]
    Degenerate,
    #[error("form is not in the image of df∧ up to the jet window")]
    NotInImage,
    #[error("degree mismatch: expected a form of degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTopForm {
    numerator: Polynomial,
}

impl LogTopForm {
    pub fn new(numerator: Polynomial) -> Self {
        LogTopForm { numerator }
    }

    /// `x⁻¹ dx ∧ dy^n`.
    pub fn standard(nvars: usize) -> Self {
        LogTopForm::new(Polynomial::one(nvars))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn n(&self) -> usize {
        self.numerator.nvars() - 1
    }

    /// `g(0) = 1`.
    pub fn is_normalized(&self) -> bool {
        self.numerator.constant_term() == Q::from_integer(1.into())
    }

    pub fn to_log_form(&self) -> LogForm {
        LogForm::from_top_numerator(&self.numerator)
    }
}

/// A top form on `Σ`, `r(y) dy1 ∧ … ∧ dyn`, with `r` free of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueForm {
    coeff: Polynomial,
}

impl ResidueForm {
    pub fn coeff(&self) -> &Polynomial {
        &self.coeff
    }
}

/// `g(0, y) dy^n`.
pub fn residue(w: &LogTopForm) -> ResidueForm {
    ResidueForm {
        coeff: w.numerator.substitute_value(0, &Q::zero()),
    }
}

/// Residue of a logarithmic form of any degree: `L|_{x=0}`.
pub fn residue_of(w: &LogForm) -> HolForm {
    w.log_part()
        .map_coeffs(|c| c.substitute_value(0, &Q::zero()))
}

/// `V = v[0] ∂_x + Σ v[i] ∂_{y_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorFieldJet {
    coeffs: Vec<Polynomial>,
}

impl VectorFieldJet {
    pub fn new(coeffs: Vec<Polynomial>) -> Self {
        VectorFieldJet { coeffs }
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn tangent_to_sigma(&self) -> bool {
        self.coeffs[0].is_divisible_by_var(0)
    }

    /// `V(h)`.
    pub fn apply(&self, h: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(h.nvars());
        for (i, v) in self.coeffs.iter().enumerate() {
            out = &out + &(v * &h.derivative(i));
        }
        out
    }
}

/// Numerator of `L_V ω`: `Σ ∂_i(g V^i) − g V^x / x`.
pub fn lie_derivative(w: &LogTopForm, v: &VectorFieldJet) -> Result<LogTopForm, LogFormError> {
    let g = &w.numerator;
    let vx_over_x = v.coeffs[0]
        .divide_by_var(0)
        .ok_or(LogFormError::NotTangent)?;
    let mut out = -&(g * &vx_over_x);
    for (i, vi) in v.coeffs.iter().enumerate() {
        out = &out + &(g * vi).derivative(i);
    }
    Ok(LogTopForm::new(out))
}

/// Coefficient `σ = x/g` of the dual tensor `Π = σ ∂_x ∧ ∂_y^n`, as a jet.
pub fn dual_nambu_tensor(w: &LogTopForm, trunc: &Truncation) -> Result<Polynomial, LogFormError> {
    if w.numerator.constant_term().is_zero() {
        return Err(LogFormError::Degenerate);
    }
    let x = Polynomial::var(w.numerator.nvars(), 0);
    Ok(trunc.truncate(&(&x * &trunc.unit_inverse(&w.numerator))))
}
