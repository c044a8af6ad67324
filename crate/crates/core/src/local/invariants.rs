//! Milnor and Tjurina type numbers of a function relative to `Σ = {x = 0}`.

use thiserror::Error;

use super::{quotient_dimension, standard_basis, LocalIdeal, QuotientDimension};
use crate::poly::{Polynomial, Q};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("non-isolated singularity: the quotient for {quotient} is infinite-dimensional")]
    NonIsolated { quotient: &'static str },
    #[error("f must vanish at the origin")]
    NotVanishing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    pub mu_f: usize,
    pub mu_f_restricted: usize,
    pub mu_sigma: usize,
    pub tau_f: usize,
    pub tau_f_restricted: usize,
    pub tau_sigma: usize,
    pub q_f: usize,
    pub q_f_restricted: usize,
    pub q_sigma: usize,
}

/// Partial derivatives `∂f/∂y_i`.
pub(crate) fn y_partials(f: &Polynomial) -> Vec<Polynomial> {
    (1..f.nvars()).map(|i| f.derivative(i)).collect()
}

/// `⟨x·∂_x f, ∂_{y_1} f, …, ∂_{y_n} f⟩`.
pub fn relative_jacobian_ideal(f: &Polynomial) -> LocalIdeal {
    let nv = f.nvars();
    let xfx = &Polynomial::var(nv, 0) * &f.derivative(0);
    LocalIdeal::new(nv, std::iter::once(xfx).chain(y_partials(f)))
}

pub fn jacobian_ideal(f: &Polynomial) -> LocalIdeal {
    let nv = f.nvars();
    LocalIdeal::new(nv, (0..nv).map(|i| f.derivative(i)))
}

/// `⟨x, ∂_{y_i}(f|_{x=0})⟩`, whose quotient is the Milnor algebra of `f|_Σ`.
pub fn restricted_jacobian_ideal(f: &Polynomial) -> LocalIdeal {
    let nv = f.nvars();
    let f0 = f.substitute_value(0, &Q::zero());
    LocalIdeal::new(
        nv,
        std::iter::once(Polynomial::var(nv, 0)).chain(y_partials(&f0)),
    )
}

fn finite(d: QuotientDimension, quotient: &'static str) -> Result<usize, LocalError> {
    d.dim().ok_or(LocalError::NonIsolated { quotient })
}

pub fn invariants(f: &Polynomial) -> Result<InvariantRecord, LocalError> {
    if !f.constant_term().is_zero() {
        return Err(LocalError::NotVanishing);
    }
    let f0 = f.substitute_value(0, &Q::zero());
    let rel = relative_jacobian_ideal(f);
    let jac = jacobian_ideal(f);
    let res = restricted_jacobian_ideal(f);

    let mu_sigma = finite(quotient_dimension(&rel), "mu_sigma")?;
    let mu_f = finite(quotient_dimension(&jac), "mu_f")?;
    let mu_f_restricted = finite(quotient_dimension(&res), "mu_f_restricted")?;
    let tau_sigma = finite(
        quotient_dimension(&rel.with_generator(f.clone())),
        "tau_sigma",
    )?;
    let tau_f = finite(quotient_dimension(&jac.with_generator(f.clone())), "tau_f")?;
    let tau_f_restricted = finite(
        quotient_dimension(&res.with_generator(f0)),
        "tau_f_restricted",
    )?;
    debug_assert_eq!(standard_basis(&rel).is_unit_ideal(), mu_sigma == 0);
    Ok(InvariantRecord {
        mu_f,
        mu_f_restricted,
        mu_sigma,
        tau_f,
        tau_f_restricted,
        tau_sigma,
        q_f: mu_f - tau_f,
        q_f_restricted: mu_f_restricted - tau_f_restricted,
        q_sigma: mu_sigma - tau_sigma,
    })
}

impl InvariantRecord {
    /// `μ_Σ(f) = μ(f) + μ(f|_Σ)`.
    pub fn is_additive(&self) -> bool {
        self.mu_sigma == self.mu_f + self.mu_f_restricted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn inv(s: &str, n: usize) -> InvariantRecord {
        invariants(&parse_polynomial(s, n).unwrap()).unwrap()
    }

    #[test]
    fn planar_examples() {
        let r = inv("x + y^3", 1);
        assert_eq!(
            (
                r.mu_f,
                r.mu_f_restricted,
                r.mu_sigma,
                r.tau_sigma,
                r.q_sigma
            ),
            (0, 2, 2, 2, 0)
        );
        let r = inv("x^2 + y^3", 1);
        assert_eq!(
            (r.mu_f, r.mu_f_restricted, r.mu_sigma, r.q_sigma),
            (2, 2, 4, 0)
        );
        assert!(r.is_additive());
        let r = inv("x^5 + x^2*y^2 + y^5", 1);
        assert!(r.q_sigma > 0);
        assert!(r.is_additive());
    }

    #[test]
    fn divergence_is_named() {
        let f = parse_polynomial("x^2", 1).unwrap();
        assert_eq!(
            invariants(&f),
            Err(LocalError::NonIsolated {
                quotient: "mu_sigma"
            })
        );
        let f = parse_polynomial("x + y^2 + 1", 1).unwrap();
        assert_eq!(invariants(&f), Err(LocalError::NotVanishing));
    }
}
