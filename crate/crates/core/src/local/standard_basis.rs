//! Mora's tangent-cone algorithm for standard bases in the local ring
//! `ℚ[x, y1, …, yn]` localized at the origin.
//!
//! The local order ranks lower total degree higher and breaks ties
//! lexicographically with `x > y1 > … > yn`. With the graded-lex storage order of
//! [`Polynomial`] the leading monomial is simply the first stored term.

use std::collections::BTreeSet;

use crate::poly::{Monomial, Polynomial, Truncation, Q};

/// Degree cuts tried before falling back to the exact computation.
const CUTS: [u32; 4] = [8, 16, 32, 64];

fn lead(p: &Polynomial) -> (&Monomial, &Q) {
    p.terms().next().expect("nonzero polynomial")
}

fn ecart(p: &Polynomial) -> u32 {
    p.degree() - lead(p).0.degree()
}

/// `h − (LT(h)/LT(g))·g`, cancelling the leading term of `h`.
fn reduce_step(h: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mh, ch) = lead(h);
    let (mg, cg) = lead(g);
    let q = mg.quotient_of(mh);
    h - &g.mul_monomial(&q, &(ch / cg))
}

fn spoly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = lead(f);
    let (mg, cg) = lead(g);
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&mf.quotient_of(&l), &(Q::from_integer(1.into()) / cf));
    let b = g.mul_monomial(&mg.quotient_of(&l), &(Q::from_integer(1.into()) / cg));
    &a - &b
}

/// Mora's weak normal form: returns `h'` with `u·h = h' + Σ a_i g_i` for a unit
/// `u`, and `h' = 0` or `LM(h')` not divisible by any `LM(g_i)`.
pub(crate) fn mora_normal_form(h: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    mora_normal_form_cut(h, basis, None)
}

/// Same, computing modulo the terms dropped by `cut` when given.
fn mora_normal_form_cut(
    h: &Polynomial,
    basis: &[Polynomial],
    cut: Option<&Truncation>,
) -> Polynomial {
    let mut h = cut.map_or_else(|| h.clone(), |c| c.truncate(h));
    let mut t: Vec<Polynomial> = basis.to_vec();
    while !h.is_zero() {
        let mh = lead(&h).0.clone();
        let best = t
            .iter()
            .enumerate()
            .filter(|(_, g)| lead(g).0.divides(&mh))
            .min_by_key(|(_, g)| ecart(g))
            .map(|(i, _)| i);
        let Some(i) = best else { break };
        let g = t[i].clone();
        if ecart(&g) > ecart(&h) {
            t.push(h.clone());
        }
        h = reduce_step(&h, &g);
        if let Some(c) = cut {
            h = c.truncate(&h);
        }
        if !h.is_zero() {
            h = h.primitive_part();
        }
    }
    h
}

/// An ideal of the local ring given by polynomial generators.
#[derive(Clone, Debug)]
pub struct LocalIdeal {
    generators: Vec<Polynomial>,
    nvars: usize,
}

impl LocalIdeal {
    /// Zero generators are dropped. Units are allowed and yield the whole ring.
    pub fn new(nvars: usize, generators: impl IntoIterator<Item = Polynomial>) -> Self {
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .inspect(|g| assert_eq!(g.nvars(), nvars))
            .collect();
        LocalIdeal { generators, nvars }
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn with_generator(&self, g: Polynomial) -> LocalIdeal {
        LocalIdeal::new(self.nvars, self.generators.iter().cloned().chain([g]))
    }
}

/// Standard basis with respect to the local degree order.
#[derive(Clone, Debug)]
pub struct StandardBasis {
    elements: Vec<Polynomial>,
    nvars: usize,
}

/// Dimension of a local quotient, with its standard monomials when finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientDimension {
    Finite { dim: usize, basis: Vec<Monomial> },
    Infinite,
}

impl QuotientDimension {
    pub fn dim(&self) -> Option<usize> {
        match self {
            QuotientDimension::Finite { dim, .. } => Some(*dim),
            QuotientDimension::Infinite => None,
        }
    }
}

/// Standard basis of the ideal. Isolated cases are computed modulo `m^(D+1)`
/// for growing `D` and accepted once every monomial of degree `D` is a
/// leading monomial, since then `m^D` lies in the ideal.
pub fn standard_basis(ideal: &LocalIdeal) -> StandardBasis {
    let nvars = ideal.nvars;
    let unit = || StandardBasis {
        elements: vec![Polynomial::one(nvars)],
        nvars,
    };
    let gens: Vec<Polynomial> = ideal
        .generators
        .iter()
        .map(|g| g.primitive_part())
        .collect();
    for d in CUTS {
        let cut = Truncation::total_degree(nvars, d);
        let Some(elems) = buchberger(&gens, Some(&cut)) else {
            return unit();
        };
        let lms: Vec<&Monomial> = elems.iter().map(|g| lead(g).0).collect();
        let closed = Monomial::all_of_degree(nvars, d)
            .iter()
            .all(|m| lms.iter().any(|l| l.divides(m)));
        if closed {
            return StandardBasis {
                elements: minimal(elems),
                nvars,
            };
        }
    }
    match buchberger(&gens, None) {
        Some(elems) => StandardBasis {
            elements: minimal(elems),
            nvars,
        },
        None => unit(),
    }
}

/// Mora's algorithm on the given generators, `None` for the unit ideal.
fn buchberger(gens: &[Polynomial], cut: Option<&Truncation>) -> Option<Vec<Polynomial>> {
    let mut elems: Vec<Polynomial> = gens
        .iter()
        .map(|g| cut.map_or_else(|| g.clone(), |c| c.truncate(g)))
        .filter(|g| !g.is_zero())
        .collect();
    if elems.iter().any(|g| lead(g).0.is_one()) {
        return None;
    }
    // pairs ordered by (lcm degree, indices)
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let push_pairs = |pairs: &mut BTreeSet<(u32, usize, usize)>, elems: &[Polynomial], j: usize| {
        for i in 0..j {
            let (a, b) = (lead(&elems[i]).0, lead(&elems[j]).0);
            let l = a.lcm(b);
            if l.degree() == a.degree() + b.degree() {
                continue; // coprime leading monomials
            }
            if cut.is_some_and(|c| !c.keeps(&l)) {
                continue;
            }
            pairs.insert((l.degree(), i, j));
        }
    };
    for j in 1..elems.len() {
        push_pairs(&mut pairs, &elems, j);
    }
    while let Some(p) = pairs.pop_first() {
        let (_, i, j) = p;
        let s = spoly(&elems[i], &elems[j]);
        let h = mora_normal_form_cut(&s, &elems, cut);
        if h.is_zero() {
            continue;
        }
        if lead(&h).0.is_one() {
            return None;
        }
        elems.push(h);
        push_pairs(&mut pairs, &elems, elems.len() - 1);
    }
    Some(elems)
}

/// Keeps one element per minimal leading monomial.
fn minimal(elems: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut kept: Vec<Polynomial> = Vec::new();
    for (i, g) in elems.iter().enumerate() {
        let mg = lead(g).0;
        let redundant = elems.iter().enumerate().any(|(j, h)| {
            let mh = lead(h).0;
            j != i && mh.divides(mg) && (mh != mg || j < i)
        });
        if !redundant {
            kept.push(g.clone());
        }
    }
    kept
}

impl StandardBasis {
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|g| lead(g).0.clone()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elements.iter().any(|g| lead(g).0.is_one())
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        mora_normal_form(p, &self.elements).is_zero()
    }

    /// Weak normal form of `p`; zero exactly when `p` lies in the ideal.
    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        mora_normal_form(p, &self.elements)
    }

    pub fn quotient_dimension(&self) -> QuotientDimension {
        let lms = self.leading_monomials();
        let mut bounds = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            let pure = lms
                .iter()
                .filter(|m| (0..self.nvars).all(|u| u == v || m.exp(u) == 0))
                .map(|m| m.exp(v))
                .min();
            match pure {
                Some(e) => bounds.push(e),
                None => return QuotientDimension::Infinite,
            }
        }
        let mut basis = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        loop {
            let m = Monomial::new(cur.clone());
            if !lms.iter().any(|l| l.divides(&m)) {
                basis.push(m);
            }
            // odometer over the box
            let mut i = 0;
            loop {
                if i == self.nvars {
                    basis.sort();
                    return QuotientDimension::Finite {
                        dim: basis.len(),
                        basis,
                    };
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}

pub fn quotient_dimension(ideal: &LocalIdeal) -> QuotientDimension {
    standard_basis(ideal).quotient_dimension()
}
