//! Exact sparse multivariate polynomials over ℚ and the truncated objects built
//! on them.
//!
//! Coordinates are ordered `(x, y1, …, yn)`; the hypersurface `Σ = {x = 0}` is
//! therefore always the zero set of variable 0. Internal computations may add
//! auxiliary variables after the `y`'s (for example a path parameter).

mod parse;
mod rational;
mod series;
mod truncation;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub use parse::{parse_polynomial, ParseError};
pub use rational::{format_q, lcm_of_denominators, q, q_one, q_zero, qf, to_f64, Q};
pub use series::{series_reciprocal, solve_normalization_ivp, Series1, SeriesError};
pub use truncation::Truncation;

/// Exponent vector, indexed `(x, y1, …, yn, …)`.
///
/// Ordered graded-lexicographically: lower total degree first, then within a
/// degree the monomial with the larger exponent of the earlier variable first
/// (`1 < x < y < x^2 < x*y < y^2 < …`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self | other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        v[i] = e;
        Monomial(v)
    }

    /// Pads or cuts the exponent vector to `nvars` entries.
    pub fn resized(&self, nvars: usize) -> Monomial {
        let mut v = self.0.clone();
        v.resize(nvars, 0);
        Monomial(v)
    }

    /// All monomials in `nvars` variables of total degree exactly `d`, in
    /// graded-lex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        if nvars == 0 {
            return if d == 0 {
                vec![Monomial(vec![])]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        rec(0, d, &mut vec![0; nvars], &mut out);
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable names for `nvars` coordinates: `x, y` when there is a single `y`,
/// `x, y1, …, yn` otherwise. Extra internal variables are named `s`, `s2`, ….
pub fn variable_names(n: usize, nvars: usize) -> Vec<String> {
    let mut names = vec!["x".to_string()];
    if n == 1 {
        names.push("y".to_string());
    } else {
        names.extend((1..=n).map(|i| format!("y{i}")));
    }
    for extra in 0..nvars.saturating_sub(n + 1) {
        names.push(if extra == 0 {
            "s".to_string()
        } else {
            format!("s{}", extra + 1)
        });
    }
    names.truncate(nvars);
    names
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored; iteration follows the graded-lex monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let nvars = m.nvars();
        let mut p = Self::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest total degree of a term (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Smallest total degree of a term, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                out.add_term(m.with_exp(i, e - 1), c * Q::from_integer(e.into()));
            }
        }
        out
    }

    /// Substitutes the constant `value` for variable `i`.
    pub fn substitute_value(&self, i: usize, value: &Q) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            let factor = if e == 0 {
                Q::one()
            } else if value.is_zero() {
                continue;
            } else {
                num_traits::pow(value.clone(), e as usize)
            };
            out.add_term(m.with_exp(i, 0), c * factor);
        }
        out
    }

    /// `self / var_i` when every term contains `var_i`.
    pub fn divide_by_var(&self, i: usize) -> Option<Polynomial> {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                return None;
            }
            out.add_term(m.with_exp(i, e - 1), c.clone());
        }
        Some(out)
    }

    pub fn is_divisible_by_var(&self, i: usize) -> bool {
        self.terms.keys().all(|m| m.exp(i) > 0)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    /// Re-embeds into `nvars` variables (dropped variables must not occur).
    pub fn resized(&self, nvars: usize) -> Polynomial {
        debug_assert!((nvars..self.nvars).all(|i| !self.depends_on(i)));
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.resized(nvars), c.clone()))
                .collect(),
        }
    }

    /// Evaluates numerically at a complex point.
    pub fn eval_complex(&self, point: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = num_complex::Complex64::new(to_f64(c), 0.0);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= point[i].powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Multiplies every coefficient by the lcm of the denominators and divides
    /// by the integer content, giving a primitive integer polynomial.
    pub fn primitive_part(&self) -> Polynomial {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let l = lcm_of_denominators(self.terms.values());
        let content = self
            .terms
            .values()
            .fold(num_bigint::BigInt::zero(), |g, c| {
                g.gcd(&(c * Q::from_integer(l.clone())).to_integer())
            });
        self.scale(&Q::new(l, content))
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&format_q(&abs));
            } else if abs.is_one() {
                out.push_str(&m.display_with(names));
            } else {
                out.push_str(&format!("{}*{}", format_q(&abs), m.display_with(names)));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars.saturating_sub(1).max(1);
        f.write_str(&self.to_string_with(&variable_names(n, self.nvars)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Q::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}
