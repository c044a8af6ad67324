//! Normal forms for the classes A0 and A1.

use num_traits::{One, Zero};

use super::diffeo::{component_trunc, DiffeoJet};
use super::moser::{moser_diffeo, verify};
use super::{classify_pair, ClassTag, ClassifyError, JetConfig, SingularityClass};
use crate::brieskorn::{brieskorn_basis, window_for, ModuliVector, ReductionContext};
use crate::logforms::LogTopForm;
use crate::poly::{solve_normalization_ivp, Monomial, Polynomial, Series1, Truncation, Q};

#[derive(Clone, Debug)]
pub struct NormalFormReport {
    pub class: SingularityClass,
    /// Moduli of the prepared pair.
    pub moduli: ModuliVector,
    /// A1: `f_N = ζ(x + Σ y_i²)` for n ≥ 2, `f_N = ζ(T)` for n = 1.
    pub zeta: Option<Series1>,
    /// A1, n = 1: `T = x + (y − ξ(T))²`.
    pub xi: Option<Series1>,
    pub a: Option<Series1>,
    /// A0, n = 1: `f_N = φ(y)`.
    pub phi: Option<Series1>,
    /// A0, n = 1: `∫ψ`, the compositional inverse of `φ`.
    pub psi_antiderivative: Option<Series1>,
    /// `Φ*(ω_N, f_N) ≡ (ω, f)` inside the window.
    pub diffeo_jet: DiffeoJet,
    pub normalized_form: LogTopForm,
    pub normalized_f: Polynomial,
}

impl NormalFormReport {
    pub fn normalized_pair(&self) -> (&LogTopForm, &Polynomial) {
        (&self.normalized_form, &self.normalized_f)
    }

    pub fn window(&self) -> &Truncation {
        self.diffeo_jet.base()
    }
}

fn require(
    class: &SingularityClass,
    tag: ClassTag,
    name: &'static str,
) -> Result<(), ClassifyError> {
    if class.tag == tag {
        Ok(())
    } else {
        Err(ClassifyError::WrongClass {
            expected: name,
            found: class.tag.to_string(),
        })
    }
}

pub fn normal_form_a1(
    w: &LogTopForm,
    f: &Polynomial,
    cfg: &JetConfig,
) -> Result<NormalFormReport, ClassifyError> {
    let class = classify_pair(f);
    require(&class, ClassTag::A1, "A1")?;
    if !w.is_normalized() {
        return Err(ClassifyError::NotNormalized);
    }
    let nv = f.nvars();
    let n = nv - 1;
    let x = Polynomial::var(nv, 0);
    let quad: Polynomial = (1..nv).fold(Polynomial::zero(nv), |acc, i| {
        &acc + &Polynomial::var(nv, i).pow(2)
    });
    let std_f = &x + &quad;
    let basis = brieskorn_basis(&std_f)?;
    let ctx = ReductionContext::new(&basis, window_for(&basis, cfg.jet_order))?;
    let win = ctx.trunc().clone();

    let prep = prepare_a1(f, &win)?;
    let g1 = prep
        .inverse(&cfg.cancel)?
        .pullback_numerator(w.numerator())?;
    let (moduli, _) = ctx.reduce(&g1)?;
    let g2 = ctx.reconstruct(&moduli);
    let theta = moser_diffeo(&ctx, &g1, &g2, cfg)?;

    let c0 = moduli.series[0].clone();
    let order = c0.order();
    let t = Series1::identity(order);
    let two_n = Q::new(2.into(), (n as i64).into());
    let one_n = Q::new(1.into(), (n as i64).into());
    // u = v^{n/2} solves (2/n)·t·u' + u = 1/c0(ζ), ζ = t·v
    let mut u = Series1::one(order);
    let mut zeta = t.clone();
    for _ in 0..=order + 1 {
        cfg.cancel.check()?;
        zeta = u.pow_rational(&two_n)?.mul_t().truncated(order);
        let next = solve_normalization_ivp(&c0.compose(&zeta)?, n)?;
        if next == u {
            break;
        }
        u = next;
    }
    let v = u.pow_rational(&two_n)?;
    let vh = u.pow_rational(&one_n)?;
    let psi_map = {
        let mut images = vec![win_sub(&win, 0, &v, &std_f, &x)];
        for i in 1..nv {
            images.push(win_sub(&win, i, &vh, &std_f, &Polynomial::var(nv, i)));
        }
        DiffeoJet::new(images, &win)
    };
    let mut map = psi_map.inverse(&cfg.cancel)?.compose(&theta).compose(&prep);

    let (xi, a, normalized_f) = if n == 1 {
        let psi = moduli.psi.clone().expect("n = 1 has an extra modulus");
        let cz = c0.compose(&zeta)?;
        let a = vh
            .mul(&psi.compose(&zeta)?)
            .mul(&crate::poly::series_reciprocal(&cz)?);
        let xi = a
            .antiderivative()
            .scale(&Q::new(1.into(), 2.into()))
            .truncated(order);
        let y = Polynomial::var(nv, 1);
        let shift_trunc = component_trunc(&win, 1);
        let shift = DiffeoJet::new(
            vec![x.clone(), &y + &shift_trunc.substitute_series(&xi, &std_f)],
            &win,
        );
        map = shift.compose(&map);
        // T = x + (y − ξ(T))²
        let mut big_t = std_f.clone();
        loop {
            cfg.cancel.check()?;
            let inner = &y - &win.substitute_series(&xi, &big_t);
            let next = win.truncate(&(&x + &win.mul(&inner, &inner)));
            if next == big_t {
                break;
            }
            big_t = next;
        }
        let fnorm = win.substitute_series(&zeta, &big_t);
        (Some(xi), Some(a), fnorm)
    } else {
        (None, None, win.substitute_series(&zeta, &std_f))
    };

    let one = Polynomial::one(nv);
    verify(&map, (&one, &normalized_f), (w.numerator(), f))?;
    Ok(NormalFormReport {
        class,
        moduli,
        zeta: Some(zeta),
        xi,
        a,
        phi: None,
        psi_antiderivative: None,
        diffeo_jet: map,
        normalized_form: LogTopForm::standard(nv),
        normalized_f,
    })
}

/// `p · s(F)` truncated for component `i`.
fn win_sub(
    win: &Truncation,
    i: usize,
    s: &Series1,
    big_f: &Polynomial,
    p: &Polynomial,
) -> Polynomial {
    let t = component_trunc(win, i);
    t.mul(p, &t.substitute_series(s, big_f))
}

/// `P` with `P*(x + Σ y_i²) = f`, tangent to the identity and preserving `x = 0`.
fn prepare_a1(f: &Polynomial, win: &Truncation) -> Result<DiffeoJet, ClassifyError> {
    let nv = f.nvars();
    let x_mono = Monomial::var(nv, 0);
    let linear_ok =
        f.coeff(&x_mono).is_one() && (1..nv).all(|i| f.coeff(&Monomial::var(nv, i)).is_zero());
    let f0 = f.substitute_value(0, &Q::zero());
    let quad_ok = (1..nv).all(|i| {
        (1..nv).all(|j| {
            let m = Monomial::var(nv, i).mul(&Monomial::var(nv, j));
            let want = if i == j { Q::one() } else { Q::zero() };
            f0.coeff(&m) == want
        })
    });
    if !linear_ok || !quad_ok || !f.constant_term().is_zero() {
        return Err(ClassifyError::UnpreparedShape);
    }
    let ty = component_trunc(win, 1);
    let tx = component_trunc(win, 0);
    let mut ys: Vec<Polynomial> = (1..nv).map(|i| Polynomial::var(nv, i)).collect();
    // Morse lemma on f|Σ, one total degree at a time
    loop {
        let sq = ys
            .iter()
            .fold(Polynomial::zero(nv), |acc, y| &acc + &tx.mul(y, y));
        let r = tx.truncate(&(&f0 - &sq));
        let Some(d) = r.order() else { break };
        let low = r.homogeneous_part(d);
        let mut q = vec![Polynomial::zero(nv); nv - 1];
        for (m, c) in low.terms() {
            let i = (1..nv)
                .find(|&i| m.exp(i) > 0)
                .expect("no constant term in f|Σ");
            let m = m.with_exp(i, m.exp(i) - 1);
            q[i - 1].add_term(m, c / Q::from_integer(2.into()));
        }
        for (y, qi) in ys.iter_mut().zip(&q) {
            *y = ty.truncate(&(&*y + qi));
        }
    }
    let sq = ys
        .iter()
        .fold(Polynomial::zero(nv), |acc, y| &acc + &tx.mul(y, y));
    let big_x = tx.truncate(&(f - &sq));
    if !big_x.is_divisible_by_var(0) {
        return Err(ClassifyError::UnpreparedShape);
    }
    let mut images = vec![big_x];
    images.extend(ys);
    Ok(DiffeoJet::new(images, win))
}

pub fn normal_form_a0(
    w: &LogTopForm,
    f: &Polynomial,
    cfg: &JetConfig,
) -> Result<NormalFormReport, ClassifyError> {
    let class = classify_pair(f);
    require(&class, ClassTag::A0, "A0")?;
    if w.numerator().constant_term().is_zero() {
        return Err(ClassifyError::Degenerate);
    }
    let nv = f.nvars();
    let n = nv - 1;
    let y1 = Polynomial::var(nv, 1);
    let basis = brieskorn_basis(&y1)?;
    let ctx = ReductionContext::new(&basis, window_for(&basis, cfg.jet_order))?;
    let win = ctx.trunc().clone();

    // P = (x, f, …) with f placed in the slot of y1
    let f = f - &Polynomial::constant(nv, f.constant_term());
    let i0 = (1..nv)
        .find(|&i| !f.coeff(&Monomial::var(nv, i)).is_zero())
        .expect("A0 is transversal");
    let mut images: Vec<Polynomial> = (0..nv).map(|i| Polynomial::var(nv, i)).collect();
    images[1] = f.clone();
    if i0 != 1 {
        images[i0] = y1.clone();
    }
    let prep = DiffeoJet::new(images, &win);
    let g1 = prep
        .inverse(&cfg.cancel)?
        .pullback_numerator(w.numerator())?;
    let (moduli, _) = ctx.reduce(&g1)?;
    let c = g1.constant_term();
    let g2 = if n == 1 {
        ctx.reconstruct(&moduli)
    } else {
        Polynomial::constant(nv, c.clone())
    };
    let theta = moser_diffeo(&ctx, &g1, &g2, cfg)?;
    let x = Polynomial::var(nv, 0);

    let (last, phi, lam, normalized_f) = if n == 1 {
        let psi = moduli.psi.clone().expect("n = 1 has an extra modulus");
        let lam = psi.antiderivative().truncated(psi.order() + 1);
        let phi = lam.reversion()?;
        let last = DiffeoJet::new(
            vec![
                x.clone(),
                component_trunc(&win, 1).substitute_series(&lam, &y1),
            ],
            &win,
        );
        let fnorm = win.substitute_series(&phi, &y1);
        (last, Some(phi), Some(lam), fnorm)
    } else {
        let mut images: Vec<Polynomial> = (0..nv).map(|i| Polynomial::var(nv, i)).collect();
        images[2] = images[2].scale(&c);
        (DiffeoJet::new(images, &win), None, None, win.truncate(&y1))
    };
    let map = last.compose(&theta).compose(&prep);
    let one = Polynomial::one(nv);
    verify(&map, (&one, &normalized_f), (w.numerator(), &f))?;
    Ok(NormalFormReport {
        class,
        moduli,
        zeta: None,
        xi: None,
        a: None,
        phi,
        psi_antiderivative: lam,
        diffeo_jet: map,
        normalized_form: LogTopForm::standard(nv),
        normalized_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, qf};

    fn p(s: &str, n: usize) -> Polynomial {
        parse_polynomial(s, n).unwrap()
    }

    fn series(v: &[(i64, i64)]) -> Series1 {
        Series1::from_coeffs(v.iter().map(|&(a, b)| qf(a, b)).collect())
    }

    fn cfg() -> JetConfig {
        JetConfig::with_order(8)
    }

    #[test]
    fn trivial_a1() {
        let r = normal_form_a1(&LogTopForm::standard(2), &p("x + y^2", 1), &cfg()).unwrap();
        let order = r.zeta.as_ref().unwrap().order();
        assert_eq!(r.zeta.unwrap(), Series1::identity(order));
        assert!(r.xi.unwrap().is_zero());
        assert_eq!(r.diffeo_jet, DiffeoJet::identity(r.diffeo_jet.base()));
    }

    #[test]
    fn a1_n2_linear_c0() {
        let w = LogTopForm::new(p("1 + x + y1^2 + y2^2", 2));
        let r = normal_form_a1(&w, &p("x + y1^2 + y2^2", 2), &cfg()).unwrap();
        // ζ = √(1 + 2t) − 1
        let zeta = r.zeta.unwrap();
        let want = series(&[(0, 1), (1, 1), (-1, 2), (1, 2), (-5, 8)]);
        assert_eq!(zeta.truncated(4), want);
    }

    #[test]
    fn a1_constant_psi() {
        let w = LogTopForm::new(p("1 + 2*y", 1));
        let r = normal_form_a1(&w, &p("x + y^2", 1), &cfg()).unwrap();
        let order = r.a.as_ref().unwrap().order();
        assert_eq!(r.a.unwrap(), Series1::constant(qf(2, 1), order));
        assert_eq!(
            r.xi.unwrap().truncated(2),
            series(&[(0, 1), (1, 1), (0, 1)])
        );
    }

    #[test]
    fn a1_unprepared_input() {
        let w = LogTopForm::new(p("1 + y - x*y + y^3", 1));
        let f = p("x + y^2 + x*y + y^3 - x^2", 1);
        normal_form_a1(&w, &f, &cfg()).unwrap();
        let f2 = p("x + y1^2 + y2^2 + y1^2*y2 + x*y2", 2);
        normal_form_a1(&LogTopForm::new(p("1 + y1 + x", 2)), &f2, &cfg()).unwrap();
        assert_eq!(
            normal_form_a1(&w, &p("x + 3*y^2", 1), &cfg()).unwrap_err(),
            ClassifyError::UnpreparedShape
        );
    }

    #[test]
    fn a0_examples() {
        let r = normal_form_a0(&LogTopForm::standard(2), &p("y", 1), &cfg()).unwrap();
        let order = r.phi.as_ref().unwrap().order();
        assert_eq!(r.phi.unwrap().truncated(order), Series1::identity(order));
        let r = normal_form_a0(&LogTopForm::new(p("1 + y", 1)), &p("y", 1), &cfg()).unwrap();
        assert_eq!(
            r.psi_antiderivative.unwrap().truncated(2),
            series(&[(0, 1), (1, 1), (1, 2)])
        );
        assert_eq!(
            r.phi.unwrap().truncated(3),
            series(&[(0, 1), (1, 1), (-1, 2), (1, 2)])
        );
        let r = normal_form_a0(
            &LogTopForm::new(p("2 + x + y1*y2", 2)),
            &p("y1 + x*y2 + y2^2", 2),
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.normalized_f, p("y1", 2));
        let r = normal_form_a0(
            &LogTopForm::new(p("1 + y", 1)),
            &p("3*y + x + y^2", 1),
            &cfg(),
        )
        .unwrap();
        assert!(!r.diffeo_jet.is_tangent_to_identity());
        assert!(matches!(
            normal_form_a0(&LogTopForm::standard(2), &p("x + y^2", 1), &cfg()),
            Err(ClassifyError::WrongClass { .. })
        ));
    }
}
