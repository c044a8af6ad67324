//! The fiber `{f = t}` of an `x`-linear `f = α(y)x + β(y)` as a graph over the `y`-line.

use num_complex::Complex64;

use super::roots::{horner, roots};
use super::PeriodError;
use crate::poly::{to_f64, Polynomial, Q};

#[derive(Clone, Debug)]
pub struct FiberChart {
    /// Coefficients of `α(y)` and `β(y)` in increasing powers of `y`.
    alpha: Vec<Q>,
    beta: Vec<Q>,
    t: Complex64,
    /// Roots of `α`: the chart is undefined there.
    excluded: Vec<Complex64>,
    /// Roots of `t − β` off the excluded set, where the fiber meets `x = 0`.
    punctures: Vec<Complex64>,
}

fn to_complex(c: &[Q]) -> Vec<Complex64> {
    c.iter().map(|q| Complex64::new(to_f64(q), 0.0)).collect()
}

/// Coefficient lists of `α` and `β`, or `None` when `f` is not linear in `x`.
pub fn split_linear(f: &Polynomial) -> Option<(Vec<Q>, Vec<Q>)> {
    if f.nvars() != 2 {
        return None;
    }
    let deg_y = f.monomials().map(|m| m.exp(1)).max().unwrap_or(0) as usize;
    let mut alpha = vec![Q::from_integer(0.into()); deg_y + 1];
    let mut beta = alpha.clone();
    for (m, c) in f.terms() {
        let j = m.exp(1) as usize;
        match m.exp(0) {
            0 => beta[j] = c.clone(),
            1 => alpha[j] = c.clone(),
            _ => return None,
        }
    }
    if alpha.iter().all(|a| *a == Q::from_integer(0.into())) {
        return None;
    }
    Some((alpha, beta))
}

/// Points closer than this (relative to their size) count as colliding.
const COLLISION: f64 = 1e-7;

pub fn fiber_chart(f: &Polynomial, t: Complex64) -> Result<FiberChart, PeriodError> {
    if f.nvars() != 2 {
        return Err(PeriodError::UnsupportedDimension);
    }
    let (alpha, beta) = split_linear(f).ok_or(PeriodError::NotLinearInX)?;
    let excluded = roots(&to_complex(&alpha));
    let mut shifted = to_complex(&beta);
    shifted.iter_mut().for_each(|c| *c = -*c);
    shifted[0] += t;
    let punctures: Vec<Complex64> = roots(&shifted)
        .into_iter()
        .filter(|p| excluded.iter().all(|e| !close(*p, *e)))
        .collect();
    let chart = FiberChart {
        alpha,
        beta,
        t,
        excluded,
        punctures,
    };
    let pts = chart.singular_points();
    for i in 0..pts.len() {
        for j in 0..i {
            if close(pts[i], pts[j]) {
                return Err(PeriodError::Collision {
                    at: (pts[i].re, pts[i].im),
                });
            }
        }
    }
    Ok(chart)
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < COLLISION * (1.0 + a.norm().max(b.norm()))
}

impl FiberChart {
    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn alpha(&self) -> &[Q] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Q] {
        &self.beta
    }

    pub fn excluded(&self) -> &[Complex64] {
        &self.excluded
    }

    pub fn punctures(&self) -> &[Complex64] {
        &self.punctures
    }

    /// Punctures followed by excluded points.
    pub fn singular_points(&self) -> Vec<Complex64> {
        self.punctures
            .iter()
            .chain(&self.excluded)
            .copied()
            .collect()
    }

    pub fn alpha_at(&self, y: Complex64) -> Complex64 {
        horner(&to_complex(&self.alpha), y)
    }

    pub fn beta_at(&self, y: Complex64) -> Complex64 {
        horner(&to_complex(&self.beta), y)
    }

    pub fn beta_prime_at(&self, y: Complex64) -> Complex64 {
        let b = to_complex(&self.beta);
        let db: Vec<Complex64> = b
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * j as f64)
            .collect();
        horner(&db, y)
    }

    pub fn alpha_prime_at(&self, y: Complex64) -> Complex64 {
        let a = to_complex(&self.alpha);
        let da: Vec<Complex64> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * j as f64)
            .collect();
        horner(&da, y)
    }

    /// `X(y, t) = (t − β(y))/α(y)`.
    pub fn x_at(&self, y: Complex64) -> Complex64 {
        (self.t - self.beta_at(y)) / self.alpha_at(y)
    }

    /// Gelfand–Leray integrand `g(X, y)/(X·∂_x f) = g(X, y)/(t − β(y))`.
    pub fn integrand(&self, g: &Polynomial, y: Complex64) -> Complex64 {
        let x = self.x_at(y);
        g.eval_complex(&[x, y]) / (self.t - self.beta_at(y))
    }
}
