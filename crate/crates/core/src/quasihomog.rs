//! Weight search for quasihomogeneous boundary singularities and the
//! comparison with the vanishing of `q_Σ`.

use num_traits::{One, Zero};

use crate::linalg::solve_affine;
use crate::local::{invariants, LocalError};
use crate::poly::{qf, Monomial, Polynomial, Q};

/// Positive weights `(w_x, w_{y1}, …)`, each in `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(Vec<Q>);

impl WeightVector {
    pub fn new(weights: Vec<Q>) -> Self {
        WeightVector(weights)
    }

    pub fn weights(&self) -> &[Q] {
        &self.0
    }

    pub fn weight_of(&self, m: &Monomial) -> Q {
        m.exps()
            .iter()
            .zip(&self.0)
            .map(|(&e, w)| w * Q::from_integer(e.into()))
            .sum()
    }

    pub fn min_weight(&self) -> Q {
        self.0.iter().min().cloned().unwrap_or_else(Q::one)
    }

    /// `E_w(f) = f` term by term.
    pub fn euler_identity_holds(&self, f: &Polynomial) -> bool {
        let mut e = Polynomial::zero(f.nvars());
        for (i, w) in self.0.iter().enumerate() {
            let xi = Polynomial::var(f.nvars(), i);
            e = &e + &(&xi * &f.derivative(i)).scale(w);
        }
        &e == f
    }
}

const CANDIDATES: u32 = 12;

fn in_range(w: &Q) -> bool {
    w > &Q::zero() && w <= &Q::one()
}

/// Weights giving every monomial of `f` weight exactly 1, or `None`.
///
/// Underdetermined supports fix the free weights by a deterministic search over
/// `1, 1/2, …, 1/12`.
pub fn find_weights(f: &Polynomial) -> Option<WeightVector> {
    if f.is_zero() || !f.constant_term().is_zero() {
        return None;
    }
    let nv = f.nvars();
    let rows: Vec<Vec<Q>> = f
        .monomials()
        .map(|m| {
            m.exps()
                .iter()
                .map(|&e| Q::from_integer(e.into()))
                .collect()
        })
        .collect();
    let rhs = vec![Q::one(); rows.len()];
    let sol = solve_affine(rows, rhs, nv)?;
    let k = sol.kernel.len();
    let mut choice = vec![0u32; k];
    loop {
        let mut w = sol.particular.clone();
        for (j, v) in sol.kernel.iter().enumerate() {
            let t = qf(1, choice[j] as i64 + 1);
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi += &t * vi;
            }
        }
        if w.iter().all(in_range) {
            return Some(WeightVector(w));
        }
        let mut i = 0;
        loop {
            if i == k {
                return None;
            }
            choice[i] += 1;
            if choice[i] < CANDIDATES {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaitoVerdict {
    Quasihomogeneous,
    NotQuasihomogeneous,
    /// `q_Σ = 0` but no weights in the given coordinates.
    QuasihomogeneousAfterCoordinateChange,
    /// Weights found yet `q_Σ > 0`; never expected.
    Contradiction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaitoCheck {
    pub weights: Option<WeightVector>,
    pub q_sigma: usize,
    pub verdict: SaitoVerdict,
    pub agree: bool,
}

pub fn saito_cross_check(f: &Polynomial) -> Result<SaitoCheck, LocalError> {
    let inv = invariants(f)?;
    let weights = find_weights(f);
    let verdict = match (&weights, inv.q_sigma) {
        (Some(_), 0) => SaitoVerdict::Quasihomogeneous,
        (Some(_), _) => SaitoVerdict::Contradiction,
        (None, 0) => SaitoVerdict::QuasihomogeneousAfterCoordinateChange,
        (None, _) => SaitoVerdict::NotQuasihomogeneous,
    };
    Ok(SaitoCheck {
        agree: verdict != SaitoVerdict::Contradiction,
        weights,
        q_sigma: inv.q_sigma,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn fw(s: &str, n: usize) -> Option<Vec<Q>> {
        find_weights(&parse_polynomial(s, n).unwrap()).map(|w| w.0)
    }

    #[test]
    fn weights_examples() {
        assert_eq!(fw("x + y^2", 1), Some(vec![qf(1, 1), qf(1, 2)]));
        assert_eq!(fw("x*y + y^3", 1), Some(vec![qf(2, 3), qf(1, 3)]));
        assert_eq!(fw("x^5 + x^2*y^2 + y^5", 1), None);
        assert_eq!(
            fw("x + y1^2 + y2^2", 2),
            Some(vec![qf(1, 1), qf(1, 2), qf(1, 2)])
        );
        assert_eq!(fw("x^2 + y^3", 1), Some(vec![qf(1, 2), qf(1, 3)]));
    }

    #[test]
    fn underdetermined_support() {
        // x*y alone fixes only w_x + w_y = 1
        let w = fw("x*y", 1).unwrap();
        assert_eq!(&w[0] + &w[1], Q::one());
        assert!(w.iter().all(in_range));
    }

    #[test]
    fn saito_examples() {
        let c = saito_cross_check(&parse_polynomial("x^2 + y^3", 1).unwrap()).unwrap();
        assert_eq!(c.verdict, SaitoVerdict::Quasihomogeneous);
        let c = saito_cross_check(&parse_polynomial("x + y^4", 1).unwrap()).unwrap();
        assert_eq!(c.weights.unwrap().weights(), &[qf(1, 1), qf(1, 4)]);
        let c = saito_cross_check(&parse_polynomial("x^5 + x^2*y^2 + y^5", 1).unwrap()).unwrap();
        assert_eq!(c.verdict, SaitoVerdict::NotQuasihomogeneous);
        assert!(c.agree);
    }
}
