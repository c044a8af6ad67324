//! Singularity classes of pairs `(ω, f)`, normal forms and the derived
//! Hamiltonian and Nambu brackets.

mod diffeo;
mod moser;
mod normal_form;

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::brieskorn::BrieskornError;
use crate::linalg::{Echelon, SparseVec};
use crate::local::{jacobian_ideal, quotient_dimension, restricted_jacobian_ideal, LocalError};
use crate::logforms::{dual_nambu_tensor, LogFormError, LogTopForm, VectorFieldJet};
use crate::poly::{Monomial, Polynomial, SeriesError, Truncation, Q};

pub use diffeo::DiffeoJet;
pub use moser::{construct_equivalence, Equivalence};
pub use normal_form::{normal_form_a0, normal_form_a1, NormalFormReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("expected class {expected}, found {found}")]
    WrongClass {
        expected: &'static str,
        found: String,
    },
    #[error("form numerator must satisfy g(0) = 1")]
    NotNormalized,
    #[error("form numerator vanishes at the origin")]
    Degenerate,
    #[error("f is not in the prepared shape x + Σ y_i² modulo ⟨x⟩·m + m³")]
    UnpreparedShape,
    #[error("operation needs n = {expected}, got n = {got}")]
    Dimension { expected: usize, got: usize },
    #[error("map does not preserve x = 0")]
    NotPreservingSigma,
    #[error("map jet is not invertible")]
    NotInvertible,
    #[error("{what} iteration did not converge inside the window")]
    NoConvergence { what: &'static str },
    #[error("round-trip check failed for the {what}; increase the jet order")]
    VerificationFailed { what: &'static str },
    #[error("cancelled")]
    Cancelled,
    #[error(transparent)]
    Brieskorn(#[from] BrieskornError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl From<LogFormError> for ClassifyError {
    fn from(_: LogFormError) -> Self {
        ClassifyError::Degenerate
    }
}

/// Cooperative cancellation shared across threads.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }

    pub fn check(&self) -> Result<(), ClassifyError> {
        if self.is_cancelled() {
            Err(ClassifyError::Cancelled)
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug)]
pub struct JetConfig {
    pub jet_order: u32,
    pub cancel: CancelToken,
}

impl JetConfig {
    pub fn with_order(jet_order: u32) -> Self {
        JetConfig {
            jet_order,
            cancel: CancelToken::new(),
        }
    }
}

impl Default for JetConfig {
    fn default() -> Self {
        JetConfig::with_order(12)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimpleType {
    A,
    B,
    C,
    F,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassTag {
    A0,
    A1,
    Simple(SimpleType, u32),
    Higher,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::A0 => write!(out, "A0"),
            ClassTag::A1 => write!(out, "A1"),
            ClassTag::Simple(t, k) => write!(out, "{t:?}{k}"),
            ClassTag::Higher => write!(out, "Higher"),
        }
    }
}

/// Which conditions were evaluated and how they came out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassWitness {
    pub df_nonzero: bool,
    pub transversal: bool,
    pub morse_restriction: Option<bool>,
    pub mu_f: Option<usize>,
    pub mu_restricted: Option<usize>,
    pub corank_f: usize,
    pub corank_restricted: usize,
    /// `f` has exactly the monomial support of the table normal form.
    pub normal_form_support: bool,
    pub first_failed: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityClass {
    pub tag: ClassTag,
    pub witness: ClassWitness,
}

pub const COND_DF: &str = "df(0) != 0";
pub const COND_TRANSVERSAL: &str = "df^dx(0) != 0";
pub const COND_MORSE: &str = "Hessian of f|x=0 nondegenerate";

/// Classifies the germ of `f` at 0 relative to `Σ = {x = 0}`.
///
/// A0 and A1 follow the genericity conditions. The simple types are decided by
/// the diffeomorphism invariants `μ(f)`, `μ(f|Σ)` and the coranks, so the
/// answer does not depend on coordinates.
pub fn classify_pair(f: &Polynomial) -> SingularityClass {
    let nv = f.nvars();
    let f = f - &Polynomial::constant(nv, f.constant_term());
    let df_nonzero = (0..nv).any(|i| !f.coeff(&Monomial::var(nv, i)).is_zero());
    let transversal = (1..nv).any(|i| !f.coeff(&Monomial::var(nv, i)).is_zero());
    let corank_f = nv - hessian_rank(&f, 0);
    let corank_restricted = (nv - 1) - hessian_rank(&f.substitute_value(0, &Q::zero()), 1);
    let mut witness = ClassWitness {
        df_nonzero,
        transversal,
        morse_restriction: None,
        mu_f: None,
        mu_restricted: None,
        corank_f,
        corank_restricted,
        normal_form_support: false,
        first_failed: None,
    };
    if df_nonzero && transversal {
        return SingularityClass {
            tag: ClassTag::A0,
            witness,
        };
    }
    let mu_r = quotient_dimension(&restricted_jacobian_ideal(&f)).dim();
    witness.mu_restricted = mu_r;
    let tag = if df_nonzero {
        let morse = corank_restricted == 0;
        witness.morse_restriction = Some(morse);
        if morse {
            ClassTag::A1
        } else {
            witness.first_failed = Some(COND_MORSE);
            match mu_r {
                Some(k) if corank_restricted == 1 => ClassTag::Simple(SimpleType::A, k as u32),
                _ => ClassTag::Higher,
            }
        }
    } else {
        witness.first_failed = Some(COND_DF);
        let mu_f = quotient_dimension(&jacobian_ideal(&f)).dim();
        witness.mu_f = mu_f;
        match (mu_f, mu_r) {
            (Some(a), Some(b)) if corank_f <= 1 && corank_restricted <= 1 => match (a, b) {
                (a, 1) if a >= 1 => ClassTag::Simple(SimpleType::B, a as u32 + 1),
                (1, b) if b >= 2 => ClassTag::Simple(SimpleType::C, b as u32 + 1),
                (2, 2) => ClassTag::Simple(SimpleType::F, 4),
                _ => ClassTag::Higher,
            },
            _ => ClassTag::Higher,
        }
    };
    witness.normal_form_support = matches_table_support(&f, tag);
    SingularityClass { tag, witness }
}

/// Rank of the Hessian at 0 in the variables `from..nvars`.
fn hessian_rank(f: &Polynomial, from: usize) -> usize {
    let nv = f.nvars();
    let mut ech: Echelon<usize> = Echelon::new(false);
    for i in from..nv {
        let di = f.derivative(i);
        let row: SparseVec<usize> = (from..nv)
            .map(|j| (j, di.derivative(j).constant_term()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        ech.insert(row, 0);
    }
    ech.rank()
}

fn matches_table_support(f: &Polynomial, tag: ClassTag) -> bool {
    let nv = f.nvars();
    let mono = |ex: &[(usize, u32)]| {
        let mut e = vec![0u32; nv];
        for &(i, p) in ex {
            e[i] = p;
        }
        Monomial::new(e)
    };
    let mut support: Vec<Monomial> = match tag {
        ClassTag::A0 => vec![mono(&[(1, 1)])],
        ClassTag::A1 => vec![mono(&[(0, 1)]), mono(&[(1, 2)])],
        ClassTag::Simple(SimpleType::A, k) => vec![mono(&[(0, 1)]), mono(&[(1, k + 1)])],
        ClassTag::Simple(SimpleType::B, k) => vec![mono(&[(0, k)]), mono(&[(1, 2)])],
        ClassTag::Simple(SimpleType::C, k) => vec![mono(&[(0, 1), (1, 1)]), mono(&[(1, k)])],
        ClassTag::Simple(SimpleType::F, _) => vec![mono(&[(0, 2)]), mono(&[(1, 3)])],
        ClassTag::Higher => return false,
    };
    if tag != ClassTag::A0 {
        support.extend((2..nv).map(|i| mono(&[(i, 2)])));
    }
    support.sort();
    f.monomials().cloned().collect::<Vec<_>>() == support
}

/// `Z_f = σ(∂_y f ∂_x − ∂_x f ∂_y)` with `σ = x/g` (n = 1).
pub fn hamiltonian_field(
    f: &Polynomial,
    w: &LogTopForm,
    trunc: &Truncation,
) -> Result<VectorFieldJet, ClassifyError> {
    if f.nvars() != 2 {
        return Err(ClassifyError::Dimension {
            expected: 1,
            got: f.nvars() - 1,
        });
    }
    let sigma = dual_nambu_tensor(w, trunc)?;
    Ok(VectorFieldJet::new(vec![
        trunc.mul(&sigma, &f.derivative(1)),
        -&trunc.mul(&sigma, &f.derivative(0)),
    ]))
}

/// `{a, b}_f = σ·det ∂(f, a, b)/∂(x, y, z)` on coordinate pairs (n = 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    pub xy: Polynomial,
    pub xz: Polynomial,
    pub yz: Polynomial,
}

pub fn subordinated_bracket(
    f: &Polynomial,
    w: &LogTopForm,
    trunc: &Truncation,
) -> Result<BracketTable, ClassifyError> {
    if f.nvars() != 3 {
        return Err(ClassifyError::Dimension {
            expected: 2,
            got: f.nvars() - 1,
        });
    }
    let sigma = dual_nambu_tensor(w, trunc)?;
    let entry = |a: usize, b: usize| {
        let nv = 3;
        let rows = [
            (0..nv).map(|j| f.derivative(j)).collect::<Vec<_>>(),
            (0..nv).map(|j| unit(nv, j == a)).collect(),
            (0..nv).map(|j| unit(nv, j == b)).collect(),
        ];
        trunc.mul(&sigma, &det3(&rows))
    };
    Ok(BracketTable {
        xy: entry(0, 1),
        xz: entry(0, 2),
        yz: entry(1, 2),
    })
}

fn unit(nv: usize, on: bool) -> Polynomial {
    if on {
        Polynomial::one(nv)
    } else {
        Polynomial::zero(nv)
    }
}

fn det3(m: &[Vec<Polynomial>; 3]) -> Polynomial {
    let minor = |r: usize, c0: usize, c1: usize| {
        &(&m[r][c0] * &m[r + 1][c1]) - &(&m[r][c1] * &m[r + 1][c0])
    };
    let a = &m[0][0] * &minor(1, 1, 2);
    let b = &m[0][1] * &minor(1, 0, 2);
    let c = &m[0][2] * &minor(1, 0, 1);
    &(&a - &b) + &c
}
