//! Periods `∫_γ ω/df` over loops in the fiber of an `x`-linear planar `f`, and
//! recovery of the coefficient functions from them.

mod chart;
mod roots;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::brieskorn::BrieskornBasis;
use crate::poly::{Monomial, Polynomial, Q};

pub use chart::{fiber_chart, split_linear, FiberChart};
pub use roots::{horner, roots as polynomial_roots};

/// Successive-doubling agreement required of every quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodError {
    #[error("periods are only implemented for n = 1")]
    UnsupportedDimension,
    #[error("f is not of the form α(y)·x + β(y) with α ≠ 0")]
    NotLinearInX,
    #[error("punctures or chart holes collide near {at:?}")]
    Collision { at: (f64, f64) },
    #[error("quadrature did not converge: doubling changed the value by {change:e} (relative)")]
    NoConvergence { change: f64 },
    #[error("sample count must be an even number ≥ 8, got {0}")]
    BadSamples(usize),
    #[error("period matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("expected {expected} integrals, got {got}")]
    SizeMismatch { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleKind {
    Puncture,
    ChartHole,
}

/// Counterclockwise circle in the `y`-line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cycle {
    pub center: Complex64,
    pub radius: f64,
    pub kind: CycleKind,
}

/// One loop per puncture, then one per chart hole. Radius is a third of the
/// distance to the nearest other singular point.
pub fn cycles(chart: &FiberChart) -> Vec<Cycle> {
    let pts = chart.singular_points();
    let np = chart.punctures().len();
    pts.iter()
        .enumerate()
        .map(|(i, &c)| {
            let nearest = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &q)| (q - c).norm())
                .fold(f64::INFINITY, f64::min);
            let radius = if nearest.is_finite() {
                nearest / 3.0
            } else {
                1.0
            };
            Cycle {
                center: c,
                radius,
                kind: if i < np {
                    CycleKind::Puncture
                } else {
                    CycleKind::ChartHole
                },
            }
        })
        .collect()
}

/// Trapezoid rule on a circle; returns the value at `samples` points after
/// checking it against the value at half as many.
pub fn loop_integral(
    h: impl Fn(Complex64) -> Complex64,
    cycle: &Cycle,
    samples: usize,
) -> Result<Complex64, PeriodError> {
    if samples < 8 || !samples.is_multiple_of(2) {
        return Err(PeriodError::BadSamples(samples));
    }
    let mut full = Complex64::new(0.0, 0.0);
    let mut half = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for k in 0..samples {
        let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / samples as f64);
        let y = cycle.center + e * cycle.radius;
        let term = h(y) * e * Complex64::new(0.0, cycle.radius);
        full += term;
        scale += term.norm();
        if k % 2 == 0 {
            half += term;
        }
    }
    let step = 2.0 * PI / samples as f64;
    let full = full * step;
    let half = half * (2.0 * step);
    let scale = scale * step;
    let change = (full - half).norm() / scale.max(f64::MIN_POSITIVE);
    if change > QUADRATURE_TOL && (full - half).norm() > f64::EPSILON {
        return Err(PeriodError::NoConvergence { change });
    }
    Ok(full)
}

/// `2πi·Res`, when the pole inside the loop is simple and has a closed form.
pub fn residue_value(chart: &FiberChart, g: &Polynomial, cycle: &Cycle) -> Option<Complex64> {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    match cycle.kind {
        CycleKind::Puncture => {
            // g(X, y)/(t − β) with X(y0) = 0
            let y0 = cycle.center;
            let db = chart.beta_prime_at(y0);
            (db.norm() > 0.0)
                .then(|| two_pi_i * g.eval_complex(&[Complex64::new(0.0, 0.0), y0]) / (-db))
        }
        CycleKind::ChartHole => {
            // only x-degree ≤ 1: the pole comes from x·p(y)/(t − β) = p/α
            if g.monomials().any(|m| m.exp(0) > 1) {
                return None;
            }
            let a = cycle.center;
            let da = chart.alpha_prime_at(a);
            if da.norm() == 0.0 {
                return None;
            }
            let p = Polynomial::from_terms(
                2,
                g.terms()
                    .filter(|(m, _)| m.exp(0) == 1)
                    .map(|(m, c)| (m.with_exp(0, 0), c.clone())),
            );
            Some(two_pi_i * p.eval_complex(&[Complex64::new(0.0, 0.0), a]) / da)
        }
    }
}

#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    /// Rows: forms; columns: cycles.
    pub entries: DMatrix<Complex64>,
    pub t: Complex64,
    pub forms: Vec<Polynomial>,
    pub cycles: Vec<Cycle>,
    /// Largest `|P_ij − 2πi·Res|/max(1, |P_ij|)` over entries with a closed-form residue.
    pub residue_deviation: f64,
}

/// Periods of `numerators[i]/x dx∧dy` over the standard cycles of the chart.
pub fn periods_of(
    f: &Polynomial,
    numerators: &[Polynomial],
    t: Complex64,
    samples: usize,
) -> Result<PeriodMatrix, PeriodError> {
    let chart = fiber_chart(f, t)?;
    let cyc = cycles(&chart);
    let nrow = numerators.len();
    let ncol = cyc.len();
    let cells: Vec<(usize, usize)> = (0..nrow)
        .flat_map(|i| (0..ncol).map(move |j| (i, j)))
        .collect();
    let values: Vec<(Complex64, f64)> = cells
        .par_iter()
        .map(|&(i, j)| {
            let g = &numerators[i];
            let v = loop_integral(|y| chart.integrand(g, y), &cyc[j], samples)?;
            let dev = residue_value(&chart, g, &cyc[j])
                .map(|r| (v - r).norm() / v.norm().max(1.0))
                .unwrap_or(0.0);
            Ok((v, dev))
        })
        .collect::<Result<_, PeriodError>>()?;
    let entries = DMatrix::from_fn(nrow, ncol, |i, j| values[i * ncol + j].0);
    let residue_deviation = values.iter().map(|v| v.1).fold(0.0, f64::max);
    Ok(PeriodMatrix {
        entries,
        t,
        forms: numerators.to_vec(),
        cycles: cyc,
        residue_deviation,
    })
}

fn monomial_poly(m: &Monomial) -> Polynomial {
    Polynomial::term(m.clone(), Q::from_integer(1.into()))
}

/// `P_ij = ∫_{γ_j} ω_i/df` for the basis forms (including the extra one).
pub fn period_matrix(
    basis: &BrieskornBasis,
    t: Complex64,
    samples: usize,
) -> Result<PeriodMatrix, PeriodError> {
    let forms: Vec<Polynomial> = basis.all_numerators().iter().map(monomial_poly).collect();
    periods_of(basis.f(), &forms, t, samples)
}

/// `I_j = ∫_{γ_j} ω/df` for a single form.
pub fn integrals(
    f: &Polynomial,
    numerator: &Polynomial,
    t: Complex64,
    samples: usize,
) -> Result<Vec<Complex64>, PeriodError> {
    let p = periods_of(f, std::slice::from_ref(numerator), t, samples)?;
    Ok(p.entries.row(0).iter().copied().collect())
}

#[derive(Clone, Debug)]
pub struct Recovery {
    pub c: Vec<Complex64>,
    pub condition: f64,
    /// Largest deviation of the Cramer quotients `det P̃_i / det P` from `c`.
    pub cramer_deviation: Option<f64>,
}

/// Solves `I_j = Σ_i c_i P_ij`.
pub fn recover_moduli(integrals: &[Complex64], p: &PeriodMatrix) -> Result<Recovery, PeriodError> {
    let m = &p.entries;
    if !m.is_square() || integrals.len() != m.ncols() {
        return Err(PeriodError::SizeMismatch {
            expected: m.ncols(),
            got: integrals.len(),
        });
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if condition * RANK_TOL > 1.0 {
        return Err(PeriodError::IllConditioned { condition });
    }
    let mt = m.transpose();
    let rhs = DVector::from_column_slice(integrals);
    let c = mt
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(PeriodError::IllConditioned { condition })?;
    let cramer_deviation = (m.nrows() <= 6).then(|| {
        let det = mt.determinant();
        (0..m.nrows())
            .map(|i| {
                let mut mi = mt.clone();
                mi.set_column(i, &rhs);
                let ci = mi.determinant() / det;
                (ci - c[i]).norm() / c[i].norm().max(1.0)
            })
            .fold(0.0, f64::max)
    });
    Ok(Recovery {
        c: c.iter().copied().collect(),
        condition,
        cramer_deviation,
    })
}

#[derive(Clone, Debug)]
pub struct RankCheck {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub shape: (usize, usize),
}

pub fn numerical_rank(p: &PeriodMatrix) -> RankCheck {
    let sv = p.entries.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let rank = sv.iter().filter(|&&s| s > RANK_TOL * smax).count();
    RankCheck {
        rank,
        singular_values: sv.iter().copied().collect(),
        shape: p.entries.shape(),
    }
}

pub fn rank_check(
    basis: &BrieskornBasis,
    t: Complex64,
    samples: usize,
) -> Result<RankCheck, PeriodError> {
    Ok(numerical_rank(&period_matrix(basis, t, samples)?))
}
