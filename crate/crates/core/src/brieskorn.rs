//! Logarithmic Brieskorn bases and reduction of top forms to their moduli.
//!
//! All computations happen in the weighted window `w(m) < (k+1)·w_min` of a
//! quasihomogeneous `f`, where `k` is the jet order. Inside the window the
//! subspace `T = df ∧ dΩ^{n-1}(log Σ)` is spanned by homogeneous generators, so
//! every quotient splits by weight.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{Echelon, SparseVec};
use crate::local::{
    invariants, relative_jacobian_ideal, standard_basis, LocalError, LocalIdeal, QuotientDimension,
};
use crate::logforms::{tangent_space_basis, Eta, LogForm, LogTopForm, TangentGenerator};
use crate::poly::{format_q, Monomial, Polynomial, Series1, Truncation, Q};
use crate::quasihomog::{find_weights, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrieskornError {
    #[error(
        "f is not quasihomogeneous in the given coordinates; no basis construction is available"
    )]
    NotQuasihomogeneous,
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error("reduction failed at weight {weight}: basis invalid or jet order too small")]
    Inconsistent { weight: String },
    #[error("basis elements are dependent modulo the tangent space at weight {weight}")]
    DependentBasis { weight: String },
    #[error("no extra generator found below weight {bound}")]
    NoExtraElement { bound: String },
    #[error(
        "jet order {k} too small: window bound {bound} does not clear basis weight {max_weight}"
    )]
    Inconclusive {
        k: u32,
        bound: String,
        max_weight: String,
    },
}

/// The extra generator of the planar case with its membership flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtraElement {
    pub monomial: Monomial,
    pub in_relative_jacobian: bool,
    pub in_ideal_f: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrieskornBasis {
    f: Polynomial,
    weights: WeightVector,
    monomials: Vec<Monomial>,
    extra: Option<ExtraElement>,
}

impl BrieskornBasis {
    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.f.nvars() - 1
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn extra(&self) -> Option<&ExtraElement> {
        self.extra.as_ref()
    }

    /// Basis numerators followed by the extra one.
    pub fn all_numerators(&self) -> Vec<Monomial> {
        let mut v = self.monomials.clone();
        if let Some(e) = &self.extra {
            v.push(e.monomial.clone());
        }
        v
    }

    fn max_weight(&self) -> Q {
        self.all_numerators()
            .iter()
            .map(|m| self.weights.weight_of(m))
            .max()
            .unwrap_or_else(Q::zero)
    }
}

pub(crate) fn poly_vec(p: &Polynomial) -> SparseVec<Monomial> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// The tangent space inside one window, in echelon form with bookkeeping.
pub struct WindowSpace {
    trunc: Truncation,
    generators: Vec<TangentGenerator>,
    echelon: Echelon<Monomial>,
}

impl WindowSpace {
    pub fn new(f: &Polynomial, trunc: Truncation) -> Self {
        let generators = tangent_space_basis(f, &trunc);
        let mut echelon = Echelon::new(true);
        for (i, g) in generators.iter().enumerate() {
            echelon.insert(poly_vec(&g.numerator), i);
        }
        WindowSpace {
            trunc,
            generators,
            echelon,
        }
    }

    pub fn trunc(&self) -> &Truncation {
        &self.trunc
    }

    pub fn generators(&self) -> &[TangentGenerator] {
        &self.generators
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.echelon.contains(&poly_vec(&self.trunc.truncate(p)))
    }

    /// `dim(window / T)` restricted to weights below `bound`.
    fn quotient_dim_below(&self, bound: &Q) -> usize {
        let below = |m: &Monomial| &self.trunc.weight(m) < bound;
        let total = self.trunc.monomials().iter().filter(|m| below(m)).count();
        let rank = self.echelon.pivots().filter(|m| below(m)).count();
        total - rank
    }
}

/// Monomial basis of `Q_{f,Σ}` plus, for `n = 1`, the extra generator.
pub fn brieskorn_basis(f: &Polynomial) -> Result<BrieskornBasis, BrieskornError> {
    let weights = find_weights(f).ok_or(BrieskornError::NotQuasihomogeneous)?;
    let rel = relative_jacobian_ideal(f);
    let sb = standard_basis(&rel);
    let monomials = match sb.quotient_dimension() {
        QuotientDimension::Finite { basis, .. } => basis,
        QuotientDimension::Infinite => {
            return Err(LocalError::NonIsolated {
                quotient: "mu_sigma",
            }
            .into())
        }
    };
    // also certifies that f|Σ is isolated
    invariants(f)?;
    let mut basis = BrieskornBasis {
        f: f.clone(),
        weights,
        monomials,
        extra: None,
    };
    if basis.n() == 1 {
        basis.extra = Some(find_extra(&basis)?);
    }
    Ok(basis)
}

/// Smallest monomial independent of the `e_i` modulo `T + f·O`.
fn find_extra(basis: &BrieskornBasis) -> Result<ExtraElement, BrieskornError> {
    let f = &basis.f;
    let w = basis.weights.weights();
    let bound = basis.max_weight() + Q::one() + basis.weights.min_weight();
    let trunc = Truncation::weighted(w, &bound);
    let space = WindowSpace::new(f, trunc.clone());
    let mut ech = space.echelon.clone();
    let window = trunc.monomials();
    for m in &window {
        let fm = trunc.truncate(&(f * &Polynomial::term(m.clone(), Q::one())));
        if !fm.is_zero() {
            ech.insert(poly_vec(&fm), usize::MAX);
        }
    }
    for e in &basis.monomials {
        ech.insert(poly_vec(&Polynomial::term(e.clone(), Q::one())), usize::MAX);
    }
    let candidate = window
        .iter()
        .filter(|m| !basis.monomials.contains(m))
        .find(|m| !ech.contains(&poly_vec(&Polynomial::term((*m).clone(), Q::one()))))
        .cloned()
        .ok_or_else(|| BrieskornError::NoExtraElement {
            bound: format_q(&bound),
        })?;
    let e = Polynomial::term(candidate.clone(), Q::one());
    let rel = standard_basis(&relative_jacobian_ideal(f));
    let ideal_f = standard_basis(&LocalIdeal::new(f.nvars(), [f.clone()]));
    Ok(ExtraElement {
        in_relative_jacobian: rel.contains(&e),
        in_ideal_f: ideal_f.contains(&e),
        monomial: candidate,
    })
}

/// Coefficient series `c_i`, aligned with the basis; `psi` for the extra one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliVector {
    pub series: Vec<Series1>,
    pub psi: Option<Series1>,
}

impl ModuliVector {
    pub fn all_series(&self) -> Vec<&Series1> {
        self.series.iter().chain(self.psi.as_ref()).collect()
    }

    /// First coefficient where the two vectors differ: (series index, power).
    pub fn first_difference(&self, other: &ModuliVector) -> Option<(usize, usize, Q, Q)> {
        for (i, (a, b)) in self
            .all_series()
            .into_iter()
            .zip(other.all_series())
            .enumerate()
        {
            let m = a.order().max(b.order());
            for j in 0..=m {
                if a.coeff(j) != b.coeff(j) {
                    return Some((i, j, a.coeff(j), b.coeff(j)));
                }
            }
        }
        None
    }
}

/// `g − Σ c_i(f) e_i ≡ Σ a_l · numerator(η_l)` inside the window.
#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    pub trunc: Truncation,
    pub terms: Vec<(Eta, Q)>,
}

impl ReductionCertificate {
    /// `Σ a_l η_l` as a logarithmic `(n−1)`-form.
    pub fn primitive(&self, nvars: usize) -> LogForm {
        let mut out = LogForm::zero(nvars, nvars - 2);
        for (eta, c) in &self.terms {
            out = out.plus(&eta.to_log_form(c));
        }
        out
    }

    /// Recomputes `Σ a_l · numerator(η_l)` from scratch.
    pub fn replay(&self, f: &Polynomial) -> Polynomial {
        let df = crate::logforms::HolForm::differential_of(f);
        let mut out = Polynomial::zero(f.nvars());
        for (eta, c) in &self.terms {
            out = &out + &crate::logforms::generator_numerator(&df, eta).scale(c);
        }
        self.trunc.truncate(&out)
    }
}

/// Tangent space plus the `f^j e_i` columns for one window.
pub struct ReductionContext {
    basis: BrieskornBasis,
    space: WindowSpace,
    echelon: Echelon<Monomial>,
    columns: Vec<(usize, usize)>,
    orders: Vec<usize>,
}

impl ReductionContext {
    pub fn new(basis: &BrieskornBasis, trunc: Truncation) -> Result<Self, BrieskornError> {
        let f = &basis.f;
        let space = WindowSpace::new(f, trunc.clone());
        let mut echelon = space.echelon.clone();
        let ngen = space.generators.len();
        let mut columns = Vec::new();
        let mut orders = Vec::new();
        for (i, e) in basis.all_numerators().iter().enumerate() {
            let mut p = trunc.truncate(&Polynomial::term(e.clone(), Q::one()));
            let mut j: usize = 0;
            while !p.is_zero() {
                let label = ngen + columns.len();
                if !echelon.insert(poly_vec(&p), label) {
                    let wt = basis.weights.weight_of(e) + Q::from_integer(j.into());
                    return Err(BrieskornError::DependentBasis {
                        weight: format_q(&wt),
                    });
                }
                columns.push((i, j));
                j += 1;
                p = trunc.mul(&p, f);
            }
            orders.push(j.saturating_sub(1));
        }
        Ok(ReductionContext {
            basis: basis.clone(),
            space,
            echelon,
            columns,
            orders,
        })
    }

    pub fn basis(&self) -> &BrieskornBasis {
        &self.basis
    }

    pub fn space(&self) -> &WindowSpace {
        &self.space
    }

    pub fn trunc(&self) -> &Truncation {
        &self.space.trunc
    }

    pub fn reduce(
        &self,
        g: &Polynomial,
    ) -> Result<(ModuliVector, ReductionCertificate), BrieskornError> {
        let trunc = &self.space.trunc;
        let red = self.echelon.reduce(&poly_vec(&trunc.truncate(g)));
        if let Some((m, _)) = red.residual.iter().next() {
            return Err(BrieskornError::Inconsistent {
                weight: format_q(&trunc.weight(m)),
            });
        }
        let ngen = self.space.generators.len();
        let mut coeffs: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        let mut terms = Vec::new();
        for (label, c) in red.combination {
            if label < ngen {
                terms.push((self.space.generators[label].eta.clone(), c));
            } else {
                coeffs.insert(self.columns[label - ngen], c);
            }
        }
        let nb = self.basis.monomials.len();
        let mut series: Vec<Series1> = (0..self.orders.len())
            .map(|i| {
                let c = (0..=self.orders[i])
                    .map(|j| coeffs.get(&(i, j)).cloned().unwrap_or_else(Q::zero))
                    .collect();
                Series1::new(c, self.orders[i])
            })
            .collect();
        let psi = (series.len() > nb).then(|| series.pop().expect("extra series"));
        Ok((
            ModuliVector { series, psi },
            ReductionCertificate {
                trunc: trunc.clone(),
                terms,
            },
        ))
    }

    /// `Σ c_i(f) e_i` truncated to the window.
    pub fn reconstruct(&self, moduli: &ModuliVector) -> Polynomial {
        let trunc = &self.space.trunc;
        let f = &self.basis.f;
        let mut out = Polynomial::zero(f.nvars());
        for (e, c) in self.basis.all_numerators().iter().zip(moduli.all_series()) {
            let ce = trunc.substitute_series(c, f);
            out = &out + &trunc.mul(&ce, &Polynomial::term(e.clone(), Q::one()));
        }
        out
    }
}

/// The window used for jet order `k`: `w(m) < (k+1)·w_min`.
pub fn window_for(basis: &BrieskornBasis, k: u32) -> Truncation {
    Truncation::for_weights(basis.weights.weights(), k)
}

pub fn reduce(
    w: &LogTopForm,
    basis: &BrieskornBasis,
    k: u32,
) -> Result<(ModuliVector, ReductionCertificate), BrieskornError> {
    ReductionContext::new(basis, window_for(basis, k))?.reduce(w.numerator())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProbe {
    pub rank: usize,
    pub lower_bound: Q,
    pub upper_bound: Q,
}

/// Number of independent classes per unit of weight, read off between the
/// window bounds `(k+1)·w_min − 1` and `(k+1)·w_min`.
pub fn rank_probe(f: &Polynomial, k: u32) -> Result<RankProbe, BrieskornError> {
    let basis = brieskorn_basis(f)?;
    let trunc = window_for(&basis, k);
    let hi = trunc.bound();
    let lo = &hi - Q::one();
    let max_weight = basis.max_weight();
    if lo <= max_weight {
        return Err(BrieskornError::Inconclusive {
            k,
            bound: format_q(&hi),
            max_weight: format_q(&max_weight),
        });
    }
    let space = WindowSpace::new(f, trunc);
    let rank = space.quotient_dim_below(&hi) - space.quotient_dim_below(&lo);
    Ok(RankProbe {
        rank,
        lower_bound: lo,
        upper_bound: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, q};

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    fn m1(e: [u32; 2]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn planar_bases() {
        let b = brieskorn_basis(&p("x + y^2", 1)).unwrap();
        assert_eq!(b.monomials(), &[m1([0, 0])]);
        assert_eq!(b.extra().unwrap().monomial, m1([0, 1]));
        let b = brieskorn_basis(&p("x^2 + y^3", 1)).unwrap();
        assert_eq!(
            b.monomials(),
            &[m1([0, 0]), m1([1, 0]), m1([0, 1]), m1([1, 1])]
        );
        assert_eq!(b.extra().unwrap().monomial, m1([0, 2]));
        assert_eq!(
            brieskorn_basis(&p("x^5 + x^2*y^2 + y^5", 1)),
            Err(BrieskornError::NotQuasihomogeneous)
        );
    }

    #[test]
    fn reduce_examples() {
        let f = p("x + y^2", 1);
        let b = brieskorn_basis(&f).unwrap();
        let (m, cert) =
            reduce(&LogTopForm::new(p("1 + x + y^2 + y*(x + y^2)^2", 1)), &b, 8).unwrap();
        assert_eq!(m.series[0].coeffs()[..3], [q(1), q(1), q(0)]);
        assert_eq!(m.psi.as_ref().unwrap().coeffs()[..3], [q(0), q(0), q(1)]);
        assert!(cert.terms.is_empty());

        let (m, _) = reduce(&LogTopForm::new(p("1 + x", 1)), &b, 8).unwrap();
        assert!(m.series[0].coeffs()[1..].iter().all(Zero::is_zero));
        assert!(m.psi.unwrap().is_zero());

        let g = p("y^2", 1);
        let (m, cert) = reduce(&LogTopForm::new(g.clone()), &b, 8).unwrap();
        assert_eq!(m.series[0].coeff(1), q(1));
        let ctx = ReductionContext::new(&b, window_for(&b, 8)).unwrap();
        let diff = &ctx.trunc().truncate(&g) - &ctx.reconstruct(&m);
        assert_eq!(cert.replay(&f), diff);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_probe(&p("x + y^2", 1), 12).unwrap().rank, 2);
        assert_eq!(rank_probe(&p("x + y1^2 + y2^2", 2), 12).unwrap().rank, 1);
        assert_eq!(rank_probe(&p("x^2 + y^2", 1), 12).unwrap().rank, 3);
    }
}
