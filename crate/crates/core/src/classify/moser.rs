//! Path method: from a reduction certificate to an explicit diffeomorphism jet.

use num_traits::Zero;

use super::diffeo::{component_trunc, max_total_degree, DiffeoJet};
use super::{CancelToken, ClassifyError, JetConfig};
use crate::brieskorn::{brieskorn_basis, window_for, ReductionContext};
use crate::logforms::{HolForm, LogForm, LogTopForm};
use crate::poly::{Polynomial, Truncation, Q};

/// Outcome of [`construct_equivalence`].
#[derive(Clone, Debug)]
pub enum Equivalence {
    /// `Φ*ω2 ≡ ω1` and `Φ*f ≡ f` inside the window.
    Equivalent(DiffeoJet),
    /// The moduli differ first at `series[index]`, coefficient of `t^power`.
    Inequivalent {
        series: String,
        power: usize,
        left: Q,
        right: Q,
    },
}

pub fn construct_equivalence(
    w1: &LogTopForm,
    w2: &LogTopForm,
    f: &Polynomial,
    cfg: &JetConfig,
) -> Result<Equivalence, ClassifyError> {
    let basis = brieskorn_basis(f)?;
    let ctx = ReductionContext::new(&basis, window_for(&basis, cfg.jet_order))?;
    equivalence_in(&ctx, w1.numerator(), w2.numerator(), cfg)
}

pub(crate) fn equivalence_in(
    ctx: &ReductionContext,
    g1: &Polynomial,
    g2: &Polynomial,
    cfg: &JetConfig,
) -> Result<Equivalence, ClassifyError> {
    let (m1, _) = ctx.reduce(g1)?;
    let (m2, _) = ctx.reduce(g2)?;
    if let Some((idx, power, left, right)) = m1.first_difference(&m2) {
        let series = if idx < m1.series.len() {
            format!("c{idx}")
        } else {
            "psi".to_string()
        };
        return Ok(Equivalence::Inequivalent {
            series,
            power,
            left,
            right,
        });
    }
    moser_diffeo(ctx, g1, g2, cfg).map(Equivalence::Equivalent)
}

/// Diffeomorphism with `Φ*ω2 ≡ ω1` and `Φ*f = f`, built as a product of
/// time-one maps `exp(V)`. Each `V` solves `V ⌟ ω_h = df ∧ α` for the current
/// discrepancy `ω_h − ω1 ≡ df ∧ dα`, so `V(f) = 0` and the lowest weight of the
/// discrepancy at least doubles per step.
pub(crate) fn moser_diffeo(
    ctx: &ReductionContext,
    g1: &Polynomial,
    g2: &Polynomial,
    cfg: &JetConfig,
) -> Result<DiffeoJet, ClassifyError> {
    let trunc = ctx.trunc().clone();
    let nv = trunc.nvars();
    if g1.constant_term() != g2.constant_term() || g1.constant_term().is_zero() {
        return Err(ClassifyError::NotNormalized);
    }
    let f = ctx_f(ctx);
    let df = HolForm::differential_of(f);
    let target = trunc.truncate(g1);
    let mut h = trunc.truncate(g2);
    let mut images: Vec<Polynomial> = (0..nv).map(|i| Polynomial::var(nv, i)).collect();
    let comp: Vec<Truncation> = (0..nv).map(|i| component_trunc(&trunc, i)).collect();
    let max_steps = 2 * max_total_degree(&trunc) + 4;
    let mut steps = 0;
    loop {
        cfg.cancel.check()?;
        let delta = trunc.truncate(&(&h - &target));
        if delta.is_zero() {
            break;
        }
        steps += 1;
        if steps > max_steps {
            return Err(ClassifyError::NoConvergence { what: "flow" });
        }
        let (moduli, cert) = ctx.reduce(&delta)?;
        if moduli.all_series().iter().any(|s| !s.is_zero()) {
            return Err(ClassifyError::VerificationFailed { what: "moduli" });
        }
        let field = moser_field(&cert.primitive(nv).wedge_left(&df), &h, &comp);
        let vx_over_x = trunc.truncate(&field[0].divide_by_var(0).expect("V^x is divisible by x"));
        let derive = |p: &Polynomial, t: &Truncation| {
            let mut out = Polynomial::zero(nv);
            for (j, v) in field.iter().enumerate() {
                out = &out + &t.mul(v, &p.derivative(j));
            }
            t.truncate(&out)
        };
        images = images
            .iter()
            .zip(&comp)
            .map(|(p, t)| lie_series(p, |q| derive(q, t), &cfg.cancel))
            .collect::<Result<_, _>>()?;
        let lie_numerator = |q: &Polynomial| {
            let mut out = -&trunc.mul(q, &vx_over_x);
            for (i, v) in field.iter().enumerate() {
                out = &out + &comp[i].mul(q, v).derivative(i);
            }
            trunc.truncate(&out)
        };
        h = lie_series(&h, lie_numerator, &cfg.cancel)?;
    }
    let map = DiffeoJet::new(images, &trunc);
    verify(&map, (g2, f), (g1, f))?;
    Ok(map)
}

/// `V^x = x·H_0/G`, `V^i = (−1)^i (L_i + x·H_i)/G` for `β = dx/x ∧ L + H`,
/// which is the solution of `V ⌟ (G/x dx ∧ dy^n) = β`.
fn moser_field(beta: &LogForm, g: &Polynomial, comp: &[Truncation]) -> Vec<Polynomial> {
    let nv = g.nvars();
    let top = (1u32 << nv) - 1;
    let all_y = top & !1;
    let x = Polynomial::var(nv, 0);
    (0..nv)
        .map(|i| {
            let raw = if i == 0 {
                &x * &beta.hol_part().coeff(all_y)
            } else {
                let l = beta.log_part().coeff(all_y & !(1 << i));
                let v = &l + &(&x * &beta.hol_part().coeff(top & !(1 << i)));
                if i % 2 == 1 {
                    -&v
                } else {
                    v
                }
            };
            let t = &comp[i];
            t.mul(&raw, &t.unit_inverse(&t.truncate(g)))
        })
        .collect()
}

/// `Σ D^k(p)/k!` for a weight-raising derivation `D`.
fn lie_series(
    p: &Polynomial,
    apply: impl Fn(&Polynomial) -> Polynomial,
    cancel: &CancelToken,
) -> Result<Polynomial, ClassifyError> {
    let mut acc = p.clone();
    let mut term = p.clone();
    let mut k: u32 = 1;
    loop {
        cancel.check()?;
        term = apply(&term).scale(&Q::new(1.into(), k.into()));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = &acc + &term;
        k += 1;
        if k > 10_000 {
            return Err(ClassifyError::NoConvergence { what: "Lie series" });
        }
    }
}

fn ctx_f(ctx: &ReductionContext) -> &Polynomial {
    ctx.basis().f()
}

/// `Φ*(g_src, f_src) ≡ (g_dst, f_dst)` and `Φ(Σ) ⊂ Σ` inside the base window.
pub(crate) fn verify(
    map: &DiffeoJet,
    src: (&Polynomial, &Polynomial),
    dst: (&Polynomial, &Polynomial),
) -> Result<(), ClassifyError> {
    let t = map.base();
    if !map.preserves_sigma() {
        return Err(ClassifyError::VerificationFailed { what: "sigma" });
    }
    if map.pullback_function(src.1) != t.truncate(dst.1) {
        return Err(ClassifyError::VerificationFailed { what: "function" });
    }
    if map.pullback_numerator(src.0)? != t.truncate(dst.0) {
        return Err(ClassifyError::VerificationFailed { what: "form" });
    }
    Ok(())
}
