//! Truncated univariate power series `a_0 + a_1 t + … + a_m t^m` over ℚ.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{format_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("series must vanish at t = 0")]
    NonZeroConstantTerm,
    #[error("series must have constant term 1")]
    NotNormalized,
    #[error("series has zero linear term and cannot be inverted")]
    ZeroLinearTerm,
}

/// Coefficients of `t^0 … t^m`; the length is always `m + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series1 {
    coeffs: Vec<Q>,
}

impl Series1 {
    /// Builds a series of order `order`, padding or truncating `coeffs`.
    pub fn new(mut coeffs: Vec<Q>, order: usize) -> Self {
        coeffs.resize(order + 1, Q::zero());
        Series1 { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least one coefficient");
        Series1 { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series1::new(vec![], order)
    }

    pub fn one(order: usize) -> Self {
        Series1::constant(Q::one(), order)
    }

    pub fn constant(c: Q, order: usize) -> Self {
        Series1::new(vec![c], order)
    }

    /// The series `t`.
    pub fn identity(order: usize) -> Self {
        Series1::new(vec![Q::zero(), Q::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Q {
        self.coeffs.get(j).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncated(&self, order: usize) -> Series1 {
        Series1::new(self.coeffs.clone(), order)
    }

    fn common_order(&self, other: &Series1) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Series1) -> Series1 {
        let m = self.common_order(other);
        Series1::new((0..=m).map(|j| self.coeff(j) + other.coeff(j)).collect(), m)
    }

    pub fn sub(&self, other: &Series1) -> Series1 {
        let m = self.common_order(other);
        Series1::new((0..=m).map(|j| self.coeff(j) - other.coeff(j)).collect(), m)
    }

    pub fn scale(&self, c: &Q) -> Series1 {
        Series1 {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Series1) -> Series1 {
        let m = self.common_order(other);
        let mut out = vec![Q::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Series1 { coeffs: out }
    }

    /// `t · self`, one order longer.
    pub fn mul_t(&self) -> Series1 {
        let mut c = vec![Q::zero()];
        c.extend(self.coeffs.iter().cloned());
        Series1 { coeffs: c }
    }

    pub fn derivative(&self) -> Series1 {
        let m = self.order().saturating_sub(1);
        Series1::new(
            (1..=self.order())
                .map(|j| &self.coeffs[j] * Q::from_integer(j.into()))
                .collect(),
            m,
        )
    }

    /// Termwise antiderivative vanishing at 0, one order longer.
    pub fn antiderivative(&self) -> Series1 {
        let mut c = vec![Q::zero()];
        c.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, a)| a / Q::from_integer((j + 1).into())),
        );
        Series1 { coeffs: c }
    }

    /// `self(inner(t))` for `inner(0) = 0`, at the common order.
    pub fn compose(&self, inner: &Series1) -> Result<Series1, SeriesError> {
        if !inner.coeff(0).is_zero() {
            return Err(SeriesError::NonZeroConstantTerm);
        }
        let m = self.common_order(inner);
        let inner = inner.truncated(m);
        // Horner from the top coefficient.
        let mut acc = Series1::constant(self.coeff(m), m);
        for j in (0..m).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeff(j);
        }
        Ok(acc)
    }

    /// `self^alpha` for rational `alpha`, requiring constant term 1.
    pub fn pow_rational(&self, alpha: &Q) -> Result<Series1, SeriesError> {
        if !self.coeff(0).is_one() {
            return Err(SeriesError::NotNormalized);
        }
        let m = self.order();
        let mut r = vec![Q::zero(); m + 1];
        r[0] = Q::one();
        for k in 1..=m {
            let mut acc = Q::zero();
            for j in 1..=k {
                let w = alpha * Q::from_integer(j.into()) - Q::from_integer((k - j).into());
                acc += w * &self.coeffs[j] * &r[k - j];
            }
            r[k] = acc / Q::from_integer(k.into());
        }
        Ok(Series1 { coeffs: r })
    }

    /// Compositional inverse of a series with `s(0) = 0`, `s'(0) ≠ 0`.
    pub fn reversion(&self) -> Result<Series1, SeriesError> {
        if !self.coeff(0).is_zero() {
            return Err(SeriesError::NonZeroConstantTerm);
        }
        let lead = self.coeff(1);
        if lead.is_zero() {
            return Err(SeriesError::ZeroLinearTerm);
        }
        let m = self.order();
        let t = Series1::identity(m);
        let mut r = t.scale(&(Q::one() / &lead));
        // Each correction fixes one more coefficient.
        for _ in 0..m {
            let err = self.compose(&r)?.sub(&t);
            if err.is_zero() {
                break;
            }
            r = r.sub(&err.scale(&(Q::one() / &lead)));
        }
        Ok(r)
    }
}

impl fmt::Display for Series1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match j {
                0 => format_q(c),
                1 => format!("{}*t", format_q(c)),
                _ => format!("{}*t^{}", format_q(c), j),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(t^{})", parts.join(" + "), self.order() + 1)
    }
}

/// Inverse series: `s · r ≡ 1 mod t^{m+1}`.
pub fn series_reciprocal(s: &Series1) -> Result<Series1, SeriesError> {
    let a0 = s.coeff(0);
    if a0.is_zero() {
        return Err(SeriesError::ZeroConstantTerm);
    }
    let m = s.order();
    let inv0 = Q::one() / &a0;
    let mut r = vec![Q::zero(); m + 1];
    r[0] = inv0.clone();
    for k in 1..=m {
        let mut acc = Q::zero();
        for j in 1..=k {
            acc += &s.coeffs[j] * &r[k - j];
        }
        r[k] = -acc * &inv0;
    }
    Ok(Series1 { coeffs: r })
}

/// Solves `(2/n)·t·u'(t) + u(t) = 1/c0(t)`, `u(0) = 1`, termwise.
///
/// The coefficient recursion `(2m/n + 1)·u_m = [1/c0]_m` never divides by zero.
/// The result is `u = v^{n/2}` of the scaling `(x, y) ↦ (x·v, y·v^{1/2})`.
pub fn solve_normalization_ivp(c0: &Series1, n: usize) -> Result<Series1, SeriesError> {
    assert!(n >= 1);
    if !c0.coeff(0).is_one() {
        return Err(SeriesError::NotNormalized);
    }
    let rhs = series_reciprocal(c0)?;
    let n_q = Q::from_integer(n.into());
    let coeffs = rhs
        .coeffs
        .iter()
        .enumerate()
        .map(|(m, r)| {
            let factor = Q::from_integer((2 * m).into()) / &n_q + Q::one();
            r / factor
        })
        .collect();
    Ok(Series1 { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qf};

    fn s(v: &[(i64, i64)], m: usize) -> Series1 {
        Series1::new(v.iter().map(|&(a, b)| qf(a, b)).collect(), m)
    }

    #[test]
    fn reciprocal_examples() {
        let r = series_reciprocal(&s(&[(1, 1), (1, 1)], 4)).unwrap();
        assert_eq!(r, s(&[(1, 1), (-1, 1), (1, 1), (-1, 1), (1, 1)], 4));
        assert_eq!(
            series_reciprocal(&Series1::one(3)).unwrap(),
            Series1::one(3)
        );
        let r = series_reciprocal(&s(&[(2, 1), (-1, 1)], 3)).unwrap();
        assert_eq!(r, s(&[(1, 2), (1, 4), (1, 8), (1, 16)], 3));
        assert_eq!(
            series_reciprocal(&Series1::zero(2)),
            Err(SeriesError::ZeroConstantTerm)
        );
    }

    #[test]
    fn ivp_examples() {
        for n in 1..4 {
            assert_eq!(
                solve_normalization_ivp(&Series1::one(5), n).unwrap(),
                Series1::one(5)
            );
        }
        let c0 = s(&[(1, 1), (1, 1)], 4);
        let u = solve_normalization_ivp(&c0, 1).unwrap();
        assert_eq!(u, s(&[(1, 1), (-1, 3), (1, 5), (-1, 7), (1, 9)], 4));
        let u = solve_normalization_ivp(&c0, 2).unwrap();
        assert_eq!(u, s(&[(1, 1), (-1, 2), (1, 3), (-1, 4), (1, 5)], 4));
        assert_eq!(
            solve_normalization_ivp(&s(&[(2, 1)], 2), 1),
            Err(SeriesError::NotNormalized)
        );
    }

    #[test]
    fn pow_and_reversion() {
        // (1+t)^{1/2} squared is 1+t
        let base = s(&[(1, 1), (1, 1)], 6);
        let half = base.pow_rational(&qf(1, 2)).unwrap();
        assert_eq!(half.mul(&half), base);
        // reversion of t + t^2/2 is sqrt(1+2t) - 1
        let g = s(&[(0, 1), (1, 1), (1, 2)], 5);
        let r = g.reversion().unwrap();
        assert_eq!(g.compose(&r).unwrap(), Series1::identity(5));
        assert_eq!(r.coeff(2), qf(-1, 2));
        assert_eq!(r.coeff(3), qf(1, 2));
    }

    #[test]
    fn antiderivative_derivative() {
        let a = s(&[(1, 1), (1, 1)], 3);
        let p = a.antiderivative();
        assert_eq!(p.coeff(1), q(1));
        assert_eq!(p.coeff(2), qf(1, 2));
        assert_eq!(p.derivative(), a);
    }
}
