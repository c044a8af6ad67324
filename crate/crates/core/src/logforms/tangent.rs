//! The subspace `df ∧ dΩ^{n-1}(log Σ)` of top forms, and division by `df`.

use rayon::prelude::*;

use super::{HolForm, LogForm, LogFormError};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, Truncation, Q};

/// A monomial logarithmic form of degree `n − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Eta {
    /// The function `m` (only when `n = 1`).
    Function(Monomial),
    /// `m · dx/x ∧ dy_J`, `J` given as a bitmask without bit 0.
    Log(Monomial, u32),
    /// `m · dy_J`.
    Hol(Monomial, u32),
}

impl Eta {
    pub fn monomial(&self) -> &Monomial {
        match self {
            Eta::Function(m) | Eta::Log(m, _) | Eta::Hol(m, _) => m,
        }
    }

    pub fn to_log_form(&self, coeff: &Q) -> LogForm {
        let m = self.monomial();
        let p = Polynomial::term(m.clone(), coeff.clone());
        match self {
            Eta::Function(_) => LogForm::holomorphic(HolForm::function(p)),
            Eta::Log(_, mask) => LogForm::logarithmic(HolForm::basis(p, *mask)),
            Eta::Hol(_, mask) => LogForm::holomorphic(HolForm::basis(p, *mask)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TangentGenerator {
    pub eta: Eta,
    /// Numerator of `df ∧ dη`, truncated to the window.
    pub numerator: Polynomial,
}

/// Masks of `k` distinct `y` indices among `1..=n`.
fn y_masks(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| m << 1)
        .collect()
}

/// Monomial forms of degree `p` over the monomials of `window`.
fn monomial_forms(nvars: usize, p: usize, window: &[Monomial]) -> Vec<Eta> {
    let n = nvars - 1;
    let mut out = Vec::new();
    for m in window {
        if p == 0 {
            out.push(Eta::Function(m.clone()));
            continue;
        }
        if p >= 1 {
            for mask in y_masks(n, p - 1) {
                out.push(Eta::Log(m.clone(), mask));
            }
        }
        if p <= n {
            for mask in y_masks(n, p) {
                out.push(Eta::Hol(m.clone(), mask));
            }
        }
    }
    out
}

fn window_with_slack(trunc: &Truncation) -> Vec<Monomial> {
    let slack: Q = trunc.weights().iter().sum();
    trunc.padded(&slack).monomials()
}

/// Numerator of `df ∧ dη`.
pub fn generator_numerator(df: &HolForm, eta: &Eta) -> Polynomial {
    eta.to_log_form(&Q::from_integer(1.into()))
        .d()
        .wedge_left(df)
        .top_numerator()
}

/// Spanning numerators of `df ∧ dη` inside the window, one per monomial `η`
/// whose image survives truncation.
pub fn tangent_space_basis(f: &Polynomial, trunc: &Truncation) -> Vec<TangentGenerator> {
    let nv = f.nvars();
    let df = HolForm::differential_of(f);
    let etas = monomial_forms(nv, nv - 2, &window_with_slack(trunc));
    etas.into_par_iter()
        .filter_map(|eta| {
            let numerator = trunc.truncate(&generator_numerator(&df, &eta));
            (!numerator.is_zero()).then_some(TangentGenerator { eta, numerator })
        })
        .collect()
}

type FormKey = (bool, u32, Monomial);

fn form_vector(w: &LogForm, trunc: &Truncation) -> SparseVec<FormKey> {
    let mut v = SparseVec::new();
    for (is_log, part) in [(true, w.log_part()), (false, w.hol_part())] {
        for (mask, p) in part.coeffs() {
            for (m, c) in p.terms() {
                if trunc.keeps(m) {
                    v.insert((is_log, mask, m.clone()), c.clone());
                }
            }
        }
    }
    v
}

/// Finds `b` of degree `p − 1` with `a ≡ df ∧ b` in the window.
pub fn divide_by_df(
    a: &LogForm,
    f: &Polynomial,
    trunc: &Truncation,
) -> Result<LogForm, LogFormError> {
    let nv = f.nvars();
    let p = a.degree();
    if p == 0 {
        return Err(LogFormError::DegreeMismatch {
            expected: 1,
            got: 0,
        });
    }
    let df = HolForm::differential_of(f);
    if p < nv && !form_vector(&a.wedge_left(&df), trunc).is_empty() {
        return Err(LogFormError::NotInImage);
    }
    let candidates = monomial_forms(nv, p - 1, &window_with_slack(trunc));
    let images: Vec<SparseVec<FormKey>> = candidates
        .par_iter()
        .map(|eta| {
            form_vector(
                &eta.to_log_form(&Q::from_integer(1.into())).wedge_left(&df),
                trunc,
            )
        })
        .collect();
    let mut ech = Echelon::new(true);
    for (i, v) in images.into_iter().enumerate() {
        if !v.is_empty() {
            ech.insert(v, i);
        }
    }
    let red = ech.reduce(&form_vector(a, trunc));
    if !red.residual.is_empty() {
        return Err(LogFormError::NotInImage);
    }
    let mut b = LogForm::zero(nv, p - 1);
    for (i, c) in &red.combination {
        b = b.plus(&candidates[*i].to_log_form(c));
    }
    Ok(b)
}
