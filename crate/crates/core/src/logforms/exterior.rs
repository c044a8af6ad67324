//! Polynomial differential forms in `dx, dy1, …, dyn` and their logarithmic
//! extension `dx/x ∧ L + H`.
//!
//! A basis form `dx_{i1} ∧ … ∧ dx_{ip}` with `i1 < … < ip` is keyed by the
//! bitmask of its indices; index 0 is `dx`.

use std::collections::BTreeMap;

use crate::poly::{Polynomial, Q};

fn sign_of(neg: bool) -> Q {
    if neg {
        Q::from_integer((-1).into())
    } else {
        Q::from_integer(1.into())
    }
}

/// Sign of `e_a ∧ e_b` relative to `e_{a∪b}`; `None` if they overlap.
fn wedge_sign(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(inversions % 2 == 1)
}

/// Number of indices of `mask` below `i`.
fn below(mask: u32, i: usize) -> u32 {
    (mask & ((1u32 << i) - 1)).count_ones()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolForm {
    nvars: usize,
    degree: usize,
    coeffs: BTreeMap<u32, Polynomial>,
}

impl HolForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        HolForm {
            nvars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn function(f: Polynomial) -> Self {
        let mut h = HolForm::zero(f.nvars(), 0);
        h.add(0, f);
        h
    }

    /// `p · dx_{mask}`.
    pub fn basis(p: Polynomial, mask: u32) -> Self {
        let mut h = HolForm::zero(p.nvars(), mask.count_ones() as usize);
        h.add(mask, p);
        h
    }

    /// `df = Σ ∂_i f dx_i`.
    pub fn differential_of(f: &Polynomial) -> Self {
        let mut h = HolForm::zero(f.nvars(), 1);
        for i in 0..f.nvars() {
            h.add(1 << i, f.derivative(i));
        }
        h
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, mask: u32) -> Polynomial {
        self.coeffs
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Polynomial)> {
        self.coeffs.iter().map(|(m, p)| (*m, p))
    }

    pub fn add(&mut self, mask: u32, p: Polynomial) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        if p.is_zero() {
            return;
        }
        let e = self
            .coeffs
            .entry(mask)
            .or_insert_with(|| Polynomial::zero(self.nvars));
        *e = &*e + &p;
        if e.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn plus(&self, other: &HolForm) -> HolForm {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (m, p) in &other.coeffs {
            out.add(*m, p.clone());
        }
        out
    }

    pub fn scale_poly(&self, p: &Polynomial) -> HolForm {
        let mut out = HolForm::zero(self.nvars, self.degree);
        for (m, c) in &self.coeffs {
            out.add(*m, c * p);
        }
        out
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> HolForm {
        let mut out = HolForm::zero(self.nvars, self.degree);
        for (m, c) in &self.coeffs {
            out.add(*m, f(c));
        }
        out
    }

    pub fn neg(&self) -> HolForm {
        self.map_coeffs(|c| -c)
    }

    pub fn wedge(&self, other: &HolForm) -> HolForm {
        let mut out = HolForm::zero(self.nvars, self.degree + other.degree);
        for (a, p) in &self.coeffs {
            for (b, q) in &other.coeffs {
                if let Some(neg) = wedge_sign(*a, *b) {
                    out.add(a | b, (p * q).scale(&sign_of(neg)));
                }
            }
        }
        out
    }

    pub fn d(&self) -> HolForm {
        let mut out = HolForm::zero(self.nvars, self.degree + 1);
        for (mask, p) in &self.coeffs {
            for i in 0..self.nvars {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let dp = p.derivative(i);
                if !dp.is_zero() {
                    out.add(
                        mask | (1 << i),
                        dp.scale(&sign_of(below(*mask, i) % 2 == 1)),
                    );
                }
            }
        }
        out
    }

    /// Contraction with the vector field `Σ v[i] ∂_i`.
    pub fn interior(&self, v: &[Polynomial]) -> HolForm {
        assert!(self.degree > 0);
        let mut out = HolForm::zero(self.nvars, self.degree - 1);
        for (mask, p) in &self.coeffs {
            for (i, vi) in v.iter().enumerate() {
                if mask & (1 << i) == 0 || vi.is_zero() {
                    continue;
                }
                out.add(
                    mask & !(1 << i),
                    (p * vi).scale(&sign_of(below(*mask, i) % 2 == 1)),
                );
            }
        }
        out
    }

    /// Coefficient of `dx ∧ dy1 ∧ … ∧ dyn`.
    pub fn top_coeff(&self) -> Polynomial {
        self.coeff((1u32 << self.nvars) - 1)
    }

    /// Drops every term containing `dx`.
    pub fn without_dx(&self) -> HolForm {
        let mut out = HolForm::zero(self.nvars, self.degree);
        for (m, p) in &self.coeffs {
            if m & 1 == 0 {
                out.add(*m, p.clone());
            }
        }
        out
    }

    /// Splits `self = dx ∧ A + B` with `A, B` free of `dx`.
    pub fn split_dx(&self) -> (HolForm, HolForm) {
        let mut a = HolForm::zero(self.nvars, self.degree.saturating_sub(1));
        let mut b = HolForm::zero(self.nvars, self.degree);
        for (m, p) in &self.coeffs {
            if m & 1 == 1 {
                a.add(m & !1, p.clone());
            } else {
                b.add(*m, p.clone());
            }
        }
        (a, b)
    }
}

/// `dx/x ∧ L + H` with `L` free of `dx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogForm {
    degree: usize,
    log_part: HolForm,
    hol_part: HolForm,
}

impl LogForm {
    pub fn new(log_part: HolForm, hol_part: HolForm) -> Self {
        let degree = hol_part.degree();
        assert!(degree >= 1 || log_part.is_zero());
        let log_part = if log_part.is_zero() {
            HolForm::zero(hol_part.nvars(), degree.saturating_sub(1))
        } else {
            assert_eq!(log_part.degree() + 1, degree);
            log_part
                .without_dx()
                .plus(&HolForm::zero(hol_part.nvars(), degree - 1))
        };
        LogForm {
            degree,
            log_part,
            hol_part,
        }
    }

    pub fn zero(nvars: usize, degree: usize) -> Self {
        LogForm::new(
            HolForm::zero(nvars, degree.saturating_sub(1)),
            HolForm::zero(nvars, degree),
        )
    }

    pub fn holomorphic(h: HolForm) -> Self {
        let nv = h.nvars();
        let p = h.degree();
        LogForm::new(HolForm::zero(nv, p.saturating_sub(1)), h)
    }

    /// `dx/x ∧ l`.
    pub fn logarithmic(l: HolForm) -> Self {
        let nv = l.nvars();
        let p = l.degree() + 1;
        LogForm::new(l, HolForm::zero(nv, p))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.hol_part.nvars()
    }

    pub fn log_part(&self) -> &HolForm {
        &self.log_part
    }

    pub fn hol_part(&self) -> &HolForm {
        &self.hol_part
    }

    pub fn is_zero(&self) -> bool {
        self.log_part.is_zero() && self.hol_part.is_zero()
    }

    pub fn plus(&self, other: &LogForm) -> LogForm {
        LogForm::new(
            self.log_part.plus(&other.log_part),
            self.hol_part.plus(&other.hol_part),
        )
    }

    pub fn scale(&self, c: &Q) -> LogForm {
        let k = Polynomial::constant(self.nvars(), c.clone());
        LogForm::new(self.log_part.scale_poly(&k), self.hol_part.scale_poly(&k))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Polynomial) -> Polynomial) -> LogForm {
        LogForm::new(
            self.log_part.map_coeffs(&mut f),
            self.hol_part.map_coeffs(&mut f),
        )
    }

    /// `x · self`, a holomorphic form.
    pub fn times_x(&self) -> HolForm {
        let nv = self.nvars();
        let x = Polynomial::var(nv, 0);
        let dx = HolForm::basis(Polynomial::one(nv), 1);
        dx.wedge(&self.log_part).plus(&self.hol_part.scale_poly(&x))
    }

    /// Exterior derivative: `d(dx/x ∧ L + H) = −dx/x ∧ d_y L + dH`.
    pub fn d(&self) -> LogForm {
        LogForm::new(self.log_part.d().without_dx().neg(), self.hol_part.d())
    }

    /// `ω ∧ self` for a holomorphic `ω`; only its `dy` part meets `dx/x`.
    pub fn wedge_left(&self, w: &HolForm) -> LogForm {
        let sign = if w.degree() % 2 == 1 {
            Q::from_integer((-1).into())
        } else {
            Q::from_integer(1.into())
        };
        let k = Polynomial::constant(self.nvars(), sign);
        LogForm::new(
            w.without_dx().wedge(&self.log_part).scale_poly(&k),
            w.wedge(&self.hol_part),
        )
    }

    /// Numerator `g` of a top form `(g/x) dx ∧ dy^n`.
    pub fn top_numerator(&self) -> Polynomial {
        let nv = self.nvars();
        assert_eq!(self.degree, nv);
        let c = self.log_part.coeff(((1u32 << nv) - 1) & !1);
        &c + &(&Polynomial::var(nv, 0) * &self.hol_part.top_coeff())
    }

    /// The top form with numerator `g`.
    pub fn from_top_numerator(g: &Polynomial) -> LogForm {
        let nv = g.nvars();
        LogForm::logarithmic(HolForm::basis(g.clone(), ((1u32 << nv) - 1) & !1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn d_squared_vanishes() {
        let f = p("x^2*y1 + y2^3*x + y1*y2");
        let df = HolForm::differential_of(&f);
        assert!(df.d().is_zero());
        let eta = HolForm::basis(p("x*y1^2"), 0b010).plus(&HolForm::basis(p("y2"), 0b001));
        assert!(eta.d().d().is_zero());
        let l = LogForm::new(
            HolForm::basis(p("y1*y2"), 0b100),
            HolForm::basis(p("x*y2"), 0b011),
        );
        assert!(l.d().d().is_zero());
    }

    #[test]
    fn log_rules_match_times_x() {
        // x·(df ∧ η) computed two ways
        let f = p("x + y1^2 + y2^3");
        let df = HolForm::differential_of(&f);
        let eta = LogForm::new(HolForm::basis(p("y2"), 0), HolForm::basis(p("y1"), 0b100));
        let lhs = eta.wedge_left(&df).times_x();
        let rhs = df.wedge(&eta.times_x());
        assert_eq!(lhs, rhs);
        // numerator of dx/x ∧ dy1 ∧ dy2 is 1
        let top = LogForm::from_top_numerator(&p("1"));
        assert_eq!(top.top_numerator(), p("1"));
    }

    #[test]
    fn interior_of_volume() {
        let vol = HolForm::basis(p("1"), 0b111);
        let v = vec![p("0"), p("1"), p("0")];
        // ∂_{y1} ⌟ dx∧dy1∧dy2 = −dx∧dy2
        assert_eq!(vol.interior(&v), HolForm::basis(p("-1"), 0b101));
    }
}
