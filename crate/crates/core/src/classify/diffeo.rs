//! Diffeomorphism jets given by coordinate images.
//!
//! Component `i` is kept modulo weight `D + w_i`, where `D` is the bound of the
//! base window. For maps preserving the weight filtration this is exactly the
//! accuracy needed to pull back functions and top-form numerators modulo `D`,
//! and it is stable under composition and inversion.

use num_traits::{One, Zero};

use super::{CancelToken, ClassifyError};
use crate::linalg::solve_affine;
use crate::poly::{Monomial, Polynomial, Truncation, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffeoJet {
    images: Vec<Polynomial>,
    base: Truncation,
}

impl DiffeoJet {
    pub fn identity(base: &Truncation) -> Self {
        let nv = base.nvars();
        DiffeoJet::new((0..nv).map(|i| Polynomial::var(nv, i)).collect(), base)
    }

    pub fn new(images: Vec<Polynomial>, base: &Truncation) -> Self {
        assert_eq!(images.len(), base.nvars());
        let images = images
            .iter()
            .enumerate()
            .map(|(i, p)| component_trunc(base, i).truncate(p))
            .collect();
        DiffeoJet {
            images,
            base: base.clone(),
        }
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn base(&self) -> &Truncation {
        &self.base
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &DiffeoJet) -> DiffeoJet {
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(i, p)| component_trunc(&self.base, i).compose(p, &inner.images))
            .collect();
        DiffeoJet {
            images,
            base: self.base.clone(),
        }
    }

    /// `h ∘ Φ` modulo the base window.
    pub fn pullback_function(&self, h: &Polynomial) -> Polynomial {
        self.base.compose(h, &self.images)
    }

    /// Numerator of `Φ*(G/x dx∧dy^n)`, i.e. `G(Φ)·det DΦ·x/Φ_x`.
    pub fn pullback_numerator(&self, g: &Polynomial) -> Result<Polynomial, ClassifyError> {
        let u = self.images[0]
            .divide_by_var(0)
            .ok_or(ClassifyError::NotPreservingSigma)?;
        if u.constant_term().is_zero() {
            return Err(ClassifyError::NotInvertible);
        }
        let b = &self.base;
        let gphi = b.compose(g, &self.images);
        let det = self.jacobian_det();
        Ok(b.mul(&b.mul(&gphi, &det), &b.unit_inverse(&b.truncate(&u))))
    }

    pub fn jacobian_det(&self) -> Polynomial {
        let nv = self.nvars();
        let m: Vec<Vec<Polynomial>> = self
            .images
            .iter()
            .map(|p| (0..nv).map(|j| p.derivative(j)).collect())
            .collect();
        let cols: Vec<usize> = (0..nv).collect();
        laplace(&self.base, &m, 0, &cols)
    }

    /// Linear part as a matrix: `L[i][j]` is the coefficient of `x_j` in `Φ_i`.
    pub fn linear_part(&self) -> Vec<Vec<Q>> {
        let nv = self.nvars();
        self.images
            .iter()
            .map(|p| (0..nv).map(|j| p.coeff(&Monomial::var(nv, j))).collect())
            .collect()
    }

    pub fn is_tangent_to_identity(&self) -> bool {
        self.images.iter().all(|p| p.constant_term().is_zero())
            && self.linear_part().iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() })
            })
    }

    pub fn preserves_sigma(&self) -> bool {
        self.images[0].is_divisible_by_var(0)
    }

    /// Compositional inverse by the fixed point `B = L⁻¹(id − N∘B)`.
    pub fn inverse(&self, cancel: &CancelToken) -> Result<DiffeoJet, ClassifyError> {
        let nv = self.nvars();
        if self.images.iter().any(|p| !p.constant_term().is_zero()) {
            return Err(ClassifyError::NotInvertible);
        }
        let lin = self.linear_part();
        let mut linv = vec![vec![Q::zero(); nv]; nv];
        for j in 0..nv {
            let mut e = vec![Q::zero(); nv];
            e[j] = Q::one();
            let sol = solve_affine(lin.clone(), e, nv).ok_or(ClassifyError::NotInvertible)?;
            if !sol.kernel.is_empty() {
                return Err(ClassifyError::NotInvertible);
            }
            for (row, v) in linv.iter_mut().zip(&sol.particular) {
                row[j] = v.clone();
            }
        }
        let nonlinear: Vec<Polynomial> = self
            .images
            .iter()
            .map(|p| {
                Polynomial::from_terms(
                    nv,
                    p.terms()
                        .filter(|(m, _)| m.degree() >= 2)
                        .map(|(m, c)| (m.clone(), c.clone())),
                )
            })
            .collect();
        let nonlinear = DiffeoJet {
            images: nonlinear,
            base: self.base.clone(),
        };
        let apply_linv = |v: &[Polynomial]| -> Vec<Polynomial> {
            (0..nv)
                .map(|i| {
                    let mut acc = Polynomial::zero(nv);
                    for j in 0..nv {
                        if !linv[i][j].is_zero() {
                            acc = &acc + &v[j].scale(&linv[i][j]);
                        }
                    }
                    component_trunc(&self.base, i).truncate(&acc)
                })
                .collect()
        };
        let ident: Vec<Polynomial> = (0..nv).map(|i| Polynomial::var(nv, i)).collect();
        let mut b = DiffeoJet {
            images: apply_linv(&ident),
            base: self.base.clone(),
        };
        let max_iter = 4 * max_total_degree(&self.base) + 8;
        for _ in 0..max_iter {
            cancel.check()?;
            let nb = nonlinear.compose(&b);
            let rhs: Vec<Polynomial> = ident.iter().zip(&nb.images).map(|(x, n)| x - n).collect();
            let next = DiffeoJet {
                images: apply_linv(&rhs),
                base: self.base.clone(),
            };
            if next == b {
                return Ok(b);
            }
            b = next;
        }
        Err(ClassifyError::NoConvergence { what: "inverse" })
    }
}

pub(crate) fn component_trunc(base: &Truncation, i: usize) -> Truncation {
    base.padded(&base.weight_of_var(i))
}

/// Largest total degree any padded component can carry.
pub(crate) fn max_total_degree(base: &Truncation) -> usize {
    let w = base.weights();
    let wmin = w
        .iter()
        .filter(|x| !x.is_zero())
        .min()
        .cloned()
        .unwrap_or_else(Q::one);
    let wmax = w.iter().max().cloned().unwrap_or_else(Q::one);
    let d = (base.bound() + wmax) / wmin;
    d.ceil().to_integer().try_into().unwrap_or(usize::MAX / 8)
}

fn laplace(t: &Truncation, m: &[Vec<Polynomial>], row: usize, cols: &[usize]) -> Polynomial {
    let nv = m.len();
    if cols.len() == 1 {
        return t.truncate(&m[row][cols[0]]);
    }
    let mut acc = Polynomial::zero(nv);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(t, m, row + 1, &rest);
        let term = t.mul(&m[row][c], &minor);
        acc = if k % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, qf};

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 1).unwrap()
    }

    fn base() -> Truncation {
        Truncation::for_weights(&[qf(1, 1), qf(1, 2)], 8)
    }

    #[test]
    fn inverse_round_trip() {
        let b = base();
        let phi = DiffeoJet::new(vec![p("x + x*y + x^2"), p("y + x + y^2 - y^3")], &b);
        let inv = phi.inverse(&CancelToken::new()).unwrap();
        assert_eq!(phi.compose(&inv), DiffeoJet::identity(&b));
        assert_eq!(inv.compose(&phi), DiffeoJet::identity(&b));
    }

    #[test]
    fn numerator_pullback_is_functorial() {
        let b = base();
        let a = DiffeoJet::new(vec![p("x*(1 + y)"), p("y + x")], &b);
        let c = DiffeoJet::new(vec![p("x + x^2"), p("y - y^2")], &b);
        let g = p("1 + y + x*y");
        let lhs = a.compose(&c).pullback_numerator(&g).unwrap();
        let rhs = c
            .pullback_numerator(&a.pullback_numerator(&g).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        let bad = DiffeoJet::new(vec![p("x + y^2"), p("y")], &b);
        assert!(matches!(
            bad.pullback_numerator(&g),
            Err(ClassifyError::NotPreservingSigma)
        ));
    }
}
