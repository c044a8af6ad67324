//! Jet truncation by a (weighted) degree filtration.
//!
//! A monomial is kept when its weight is strictly below the bound. Plain jets of
//! order `k` use unit weights and bound `k + 1`. Weights are stored as integers
//! over a common denominator so the filtration test is exact and cheap.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{lcm_of_denominators, Monomial, Polynomial, Series1, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    int_weights: Vec<u64>,
    denom: u64,
    bound: u64,
}

impl Truncation {
    /// Total-degree jets of order `k` in `nvars` variables.
    pub fn total_degree(nvars: usize, k: u32) -> Self {
        Truncation {
            int_weights: vec![1; nvars],
            denom: 1,
            bound: k as u64 + 1,
        }
    }

    /// Keeps monomials of weight `< bound`. Weights must be non-negative.
    pub fn weighted(weights: &[Q], bound: &Q) -> Self {
        let l = lcm_of_denominators(weights.iter().chain(std::iter::once(bound)));
        let lq = Q::from_integer(l.clone());
        let to_int = |w: &Q| -> u64 {
            let v = (w * &lq).to_integer();
            assert!(v >= BigInt::zero(), "weights must be non-negative");
            v.to_u64().expect("weight fits in u64")
        };
        Truncation {
            int_weights: weights.iter().map(to_int).collect(),
            denom: l.to_u64().expect("denominator fits in u64"),
            bound: to_int(bound),
        }
    }

    /// Weighted jets matching total-degree order `k`: the bound `(k+1)·w_min`
    /// guarantees that every kept monomial has total degree at most `k`.
    pub fn for_weights(weights: &[Q], k: u32) -> Self {
        let wmin = weights
            .iter()
            .filter(|w| !w.is_zero())
            .min()
            .cloned()
            .unwrap_or_else(Q::one);
        Truncation::weighted(weights, &(wmin * Q::from_integer((k + 1).into())))
    }

    pub fn nvars(&self) -> usize {
        self.int_weights.len()
    }

    pub fn weights(&self) -> Vec<Q> {
        self.int_weights
            .iter()
            .map(|&w| Q::new(w.into(), self.denom.into()))
            .collect()
    }

    pub fn bound(&self) -> Q {
        Q::new(self.bound.into(), self.denom.into())
    }

    /// Same weights, bound raised by `extra`.
    pub fn padded(&self, extra: &Q) -> Truncation {
        Truncation::weighted(&self.weights(), &(self.bound() + extra))
    }

    /// Same filtration with a weight-zero variable appended.
    pub fn with_parameter(&self) -> Truncation {
        let mut t = self.clone();
        t.int_weights.push(0);
        t
    }

    /// Same filtration with the last variable removed.
    pub fn without_last(&self) -> Truncation {
        let mut t = self.clone();
        t.int_weights.pop();
        t
    }

    pub fn int_weight(&self, m: &Monomial) -> u64 {
        m.exps()
            .iter()
            .zip(&self.int_weights)
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    pub fn weight(&self, m: &Monomial) -> Q {
        Q::new(self.int_weight(m).into(), self.denom.into())
    }

    pub fn weight_of_var(&self, i: usize) -> Q {
        Q::new(self.int_weights[i].into(), self.denom.into())
    }

    pub fn keeps(&self, m: &Monomial) -> bool {
        self.int_weight(m) < self.bound
    }

    pub fn truncate(&self, p: &Polynomial) -> Polynomial {
        Polynomial::from_terms(
            p.nvars(),
            p.terms()
                .filter(|(m, _)| self.keeps(m))
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn is_zero_mod(&self, p: &Polynomial) -> bool {
        p.terms().all(|(m, _)| !self.keeps(m))
    }

    /// Lowest weight of a term, `None` for zero.
    pub fn min_weight(&self, p: &Polynomial) -> Option<Q> {
        p.monomials()
            .map(|m| self.int_weight(m))
            .min()
            .map(|w| Q::new(w.into(), self.denom.into()))
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let bw: Vec<(u64, &Monomial, &Q)> =
            b.terms().map(|(m, c)| (self.int_weight(m), m, c)).collect();
        let mut out = Polynomial::zero(a.nvars());
        for (ma, ca) in a.terms() {
            let wa = self.int_weight(ma);
            if wa >= self.bound {
                continue;
            }
            for (wb, mb, cb) in &bw {
                if wa + wb < self.bound {
                    out.add_term(ma.mul(mb), ca * *cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, p: &Polynomial, e: u32) -> Polynomial {
        let mut acc = self.truncate(&Polynomial::one(p.nvars()));
        for _ in 0..e {
            acc = self.mul(&acc, p);
        }
        acc
    }

    /// `p(images[0], …, images[k])`, truncated in the filtration of the images.
    pub fn compose(&self, p: &Polynomial, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), p.nvars());
        let nv = images
            .first()
            .map(Polynomial::nvars)
            .unwrap_or(self.nvars());
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(nv);
        for (m, c) in p.terms() {
            let mut term = Polynomial::constant(nv, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, e))
                    .or_insert_with(|| self.pow(&images[i], e));
                term = self.mul(&term, pw);
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        self.truncate(&out)
    }

    /// `s(p) = Σ s_j p^j`, truncated; `p` should lie in positive weight.
    pub fn substitute_series(&self, s: &Series1, p: &Polynomial) -> Polynomial {
        let nv = p.nvars();
        let mut acc = Polynomial::zero(nv);
        let mut pw = self.truncate(&Polynomial::one(nv));
        for (j, c) in s.coeffs().iter().enumerate() {
            if j > 0 {
                pw = self.mul(&pw, p);
            }
            if pw.is_zero() {
                break;
            }
            if !c.is_zero() {
                acc = &acc + &pw.scale(c);
            }
        }
        acc
    }

    /// Inverse of a unit `u` (non-zero constant term) in the truncated ring.
    pub fn unit_inverse(&self, u: &Polynomial) -> Polynomial {
        let u0 = u.constant_term();
        assert!(!u0.is_zero(), "not a unit");
        let inv0 = Q::one() / &u0;
        let nv = u.nvars();
        // 1/u = inv0 · Σ (-(u/u0 - 1))^j
        let r = &Polynomial::one(nv) - &u.scale(&inv0);
        let r = self.truncate(&r);
        let mut acc = self.truncate(&Polynomial::one(nv));
        let mut pw = acc.clone();
        loop {
            pw = self.mul(&pw, &r);
            if pw.is_zero() {
                break;
            }
            acc = &acc + &pw;
            if r.terms().all(|(m, _)| self.int_weight(m) == 0) && !r.is_zero() {
                panic!("unit inverse needs positive-weight tail");
            }
        }
        acc.scale(&inv0)
    }

    /// Every monomial in the window, in graded-lex order. Requires all weights
    /// positive.
    pub fn monomials(&self) -> Vec<Monomial> {
        assert!(self.int_weights.iter().all(|&w| w > 0));
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars()];
        fn rec(t: &Truncation, i: usize, used: u64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == cur.len() {
                out.push(Monomial::new(cur.clone()));
                return;
            }
            let mut e = 0;
            while used + e as u64 * t.int_weights[i] < t.bound {
                cur[i] = e;
                rec(t, i + 1, used + e as u64 * t.int_weights[i], cur, out);
                e += 1;
            }
            cur[i] = 0;
        }
        rec(self, 0, 0, &mut cur, &mut out);
        out.sort();
        out
    }
}
