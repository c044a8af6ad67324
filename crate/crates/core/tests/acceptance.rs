//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the test log.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use nambu_core::brieskorn::{brieskorn_basis, rank_probe, reduce, window_for, ReductionContext};
use nambu_core::classify::{construct_equivalence, normal_form_a1, Equivalence, JetConfig};
use nambu_core::local::invariants;
use nambu_core::logforms::{tangent_space_basis, LogTopForm};
use nambu_core::periods::{integrals, period_matrix, rank_check, recover_moduli};
use nambu_core::poly::{parse_polynomial, q, qf, Monomial, Polynomial, Series1, Truncation, Q};
use nambu_core::quasihomog::{find_weights, saito_cross_check};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

fn p(s: &str, n: usize) -> Polynomial {
    parse_polynomial(s, n).unwrap()
}

struct Outcome {
    pass: bool,
    /// A failure of something that must hold even when the line reads FAIL.
    broken: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        broken: false,
        detail: detail.into(),
    }
}

/// `(f, μ_Σ)` for A_k (k ≤ 4), B_k, C_k (2 ≤ k ≤ 4) and F4 with `n` y-variables.
fn simple_types(n: usize) -> Vec<(String, String, usize)> {
    let tail = if n == 2 { " + y2^2" } else { "" };
    let y = if n == 2 { "y1" } else { "y" };
    let mut out = Vec::new();
    for k in 1..=4 {
        out.push((format!("A{k}"), format!("x + {y}^{}{tail}", k + 1), k));
    }
    for k in 2..=4 {
        out.push((format!("B{k}"), format!("x^{k} + {y}^2{tail}"), k));
    }
    for k in 2..=4 {
        out.push((format!("C{k}"), format!("x*{y} + {y}^{k}{tail}"), k));
    }
    out.push(("F4".into(), format!("x^2 + {y}^3{tail}"), 4));
    out
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for (name, f, mu) in simple_types(1) {
        let fp = p(&f, 1);
        let start = Instant::now();
        let rec = invariants(&fp).unwrap();
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let basis_count = brieskorn_basis(&fp).unwrap().monomials().len();
        if rec.mu_sigma != mu || basis_count != mu || elapsed >= Duration::from_secs(1) {
            bad.push(format!(
                "{name}: mu_sigma {} basis {basis_count} in {elapsed:?}",
                rec.mu_sigma
            ));
        }
    }
    outcome(
        bad.is_empty(),
        format!("11 simple types, slowest {slowest:?} {}", bad.join("; ")),
    )
}

fn monomials_of(names: &[&str], n: usize) -> Vec<Monomial> {
    names
        .iter()
        .map(|s| p(s, n).monomials().next().unwrap().clone())
        .collect()
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for n in [1usize, 2] {
        let y = if n == 2 { "y1" } else { "y" };
        for (name, f, k) in simple_types(n) {
            let powers = |v: &str| -> Vec<String> { (0..k).map(|i| format!("{v}^{i}")).collect() };
            let (basis, extra): (Vec<String>, String) = match &name[..1] {
                "A" => (powers(y), format!("{y}^{k}")),
                "B" => (powers("x"), y.to_string()),
                "C" => (powers(y), "x".into()),
                _ => (
                    vec!["1".into(), "x".into(), y.into(), format!("x*{y}")],
                    format!("{y}^2"),
                ),
            };
            let refs: Vec<&str> = basis.iter().map(String::as_str).collect();
            let want = monomials_of(&refs, n);
            let want_extra = (n == 1).then(|| monomials_of(&[extra.as_str()], n)[0].clone());
            let b = brieskorn_basis(&p(&f, n)).unwrap();
            let got_extra = b.extra().map(|e| e.monomial.clone());
            if b.monomials() != want.as_slice() || got_extra != want_extra {
                bad.push(format!("n={n} {name}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("22 tables {}", bad.join(", ")))
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in [1usize, 2] {
        for (name, f, mu) in simple_types(n) {
            let want = if n == 1 { mu + 1 } else { mu };
            let got = rank_probe(&p(&f, n), 12).map(|r| r.rank);
            checked += 1;
            if got != Ok(want) {
                bad.push(format!("n={n} {name}: {got:?} want {want}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} probes at jet 12 {}", bad.join("; ")),
    )
}

fn criterion_4() -> Outcome {
    let corpus: &[(&str, usize)] = &[
        ("x + y^2", 1),
        ("x + y^3", 1),
        ("x^2 + y^2", 1),
        ("x^3 + y^2", 1),
        ("x*y + y^3", 1),
        ("x^2 + y^3", 1),
        ("x^3 + y^4", 1),
        ("x^5 + x^2*y^2 + y^5", 1),
        ("x + y^2 + x*y", 1),
        ("x*y + y^3 + y^4", 1),
        ("x + y1^2 + y2^2", 2),
        ("x^2 + y1^3 + y2^2", 2),
        ("x^3 + y1^2 + y2^2 + x^2*y1^2", 2),
    ];
    let mut bad = Vec::new();
    let mut with_weights = 0;
    for (f, n) in corpus {
        let fp = p(f, *n);
        let check = saito_cross_check(&fp).unwrap();
        let found = find_weights(&fp).is_some();
        if found {
            with_weights += 1;
            if check.q_sigma != 0 {
                bad.push(format!("{f}: weights but q_sigma {}", check.q_sigma));
            }
        }
        if !check.agree {
            bad.push(format!("{f}: verdict {:?}", check.verdict));
        }
    }
    let known = saito_cross_check(&p("x^5 + x^2*y^2 + y^5", 1)).unwrap();
    if known.q_sigma == 0 || known.weights.is_some() {
        bad.push("x^5 + x^2*y^2 + y^5 not detected".into());
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} items, {with_weights} with weights, q_sigma(x^5+x^2y^2+y^5) = {} {}",
            corpus.len(),
            known.q_sigma,
            bad.join("; ")
        ),
    )
}

/// Products and substitutions truncated after every step, independent of the
/// library's windowed arithmetic.
struct Jet<'a>(&'a Truncation);

impl Jet<'_> {
    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(a.nvars());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let m = ma.mul(mb);
                if self.0.keeps(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    fn compose(&self, g: &Polynomial, images: &[Polynomial]) -> Polynomial {
        let nv = images[0].nvars();
        let mut powers: Vec<Vec<Polynomial>> =
            images.iter().map(|_| vec![Polynomial::one(nv)]).collect();
        let mut out = Polynomial::zero(nv);
        for (m, c) in g.terms() {
            let mut term = Polynomial::constant(nv, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = self.mul(powers[i].last().unwrap(), &images[i]);
                    powers[i].push(next);
                }
                term = self.mul(&term, &powers[i][e as usize]);
            }
            out = &out + &term;
        }
        out
    }

    fn det(&self, rows: &[Vec<Polynomial>]) -> Polynomial {
        if rows.len() == 1 {
            return rows[0][0].clone();
        }
        let nv = rows[0][0].nvars();
        let mut out = Polynomial::zero(nv);
        for j in 0..rows.len() {
            let minor: Vec<Vec<Polynomial>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = self.mul(&rows[0][j], &self.det(&minor));
            out = if j % 2 == 0 {
                &out + &term
            } else {
                &out - &term
            };
        }
        out
    }
}

/// `Φ*(G/x·vol, F) = (g/x·vol, f)` in the window, checked as
/// `G(Φ)·det DΦ·x = g·Φ_x` and `F(Φ) = f`.
fn pulls_back(
    images: &[Polynomial],
    dst: (&Polynomial, &Polynomial),
    src: (&Polynomial, &Polynomial),
    window: &Truncation,
) -> bool {
    let x_weight = window.weight_of_var(0);
    let wide = window.padded(&x_weight);
    let jw = Jet(&wide);
    let j = Jet(window);
    if !images[0].is_divisible_by_var(0) {
        return false;
    }
    let nv = images.len();
    let jac: Vec<Vec<Polynomial>> = images
        .iter()
        .map(|phi| (0..nv).map(|k| phi.derivative(k)).collect())
        .collect();
    let x = Polynomial::var(nv, 0);
    let lhs = jw.mul(&jw.mul(&jw.compose(dst.0, images), &jw.det(&jac)), &x);
    let rhs = jw.mul(src.0, &images[0]);
    let form_ok = wide.is_zero_mod(&(&lhs - &rhs));
    let f_ok = window.is_zero_mod(&(&j.compose(dst.1, images) - src.1));
    form_ok && f_ok
}

fn random_form(rng: &mut StdRng, n: usize, degree: u32) -> Polynomial {
    let nv = n + 1;
    let mut g = Polynomial::one(nv);
    for d in 1..=degree {
        for m in Monomial::all_of_degree(nv, d) {
            if rng.random_bool(0.6) {
                let c = qf(rng.random_range(-3..=3), rng.random_range(1..=3));
                g.add_term(m, c);
            }
        }
    }
    g
}

fn criterion_5() -> Outcome {
    let cases: Vec<(usize, u64)> = (0..20).map(|i| (1 + (i % 2) as usize, 1000 + i)).collect();
    let cfg = JetConfig::with_order(10);
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|&(n, seed)| {
            let f = if n == 1 {
                p("x + y^2", 1)
            } else {
                p("x + y1^2 + y2^2", 2)
            };
            let g = random_form(&mut StdRng::seed_from_u64(seed), n, 3);
            let r = match normal_form_a1(&LogTopForm::new(g.clone()), &f, &cfg) {
                Ok(r) => r,
                Err(e) => return Some(format!("seed {seed}: {e}")),
            };
            let (wn, fnorm) = r.normalized_pair();
            let ok = pulls_back(
                r.diffeo_jet.images(),
                (wn.numerator(), fnorm),
                (&g, &f),
                r.window(),
            );
            // negative control: a visibly different map must be rejected
            let mut bent = r.diffeo_jet.images().to_vec();
            bent[1] = &bent[1] + &Polynomial::var(n + 1, 1).pow(2);
            let rejected = !pulls_back(&bent, (wn.numerator(), fnorm), (&g, &f), r.window());
            match (ok, rejected) {
                (true, true) => None,
                (false, _) => Some(format!("seed {seed}: round trip")),
                (true, false) => Some(format!("seed {seed}: oracle accepted a wrong map")),
            }
        })
        .collect();

    // ζ for c0 = 1 + t, n = 2, against the invariant area oracle: the residue
    // area of {f|Σ ≤ t} is π∫c0, and for the normal form it is π·ζ⁻¹(t).
    let f2 = p("x + y1^2 + y2^2", 2);
    let r = normal_form_a1(
        &LogTopForm::new(p("1 + x + y1^2 + y2^2", 2)),
        &f2,
        &JetConfig::with_order(10),
    )
    .unwrap();
    let zeta = r.zeta.clone().unwrap();
    let area = Series1::new(vec![q(0), q(1), qf(1, 2)], zeta.order());
    let oracle_ok = zeta.compose(&area).unwrap().truncated(4) == Series1::identity(4);
    let literal = Series1::new(vec![q(0), q(1), qf(-1, 2), qf(1, 3), qf(-1, 4)], 4);
    let literal_ok = zeta.truncated(4) == literal;
    let pass = failures.is_empty() && oracle_ok && literal_ok;
    let broken = !failures.is_empty() || !oracle_ok;
    let mut o = outcome(
        pass,
        format!(
            "round trips {}/20 at jet 10; zeta(1+t, n=2) = {} (area oracle {}); expected log series {}",
            20 - failures.len(),
            zeta.truncated(4),
            if oracle_ok { "agrees" } else { "DISAGREES" },
            if literal_ok { "matches" } else { "does not match: the literal normalization ODE does not normalize the pair" },
        ) + &if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join("; ")) },
    );
    o.broken = broken;
    o
}

/// Soundness: every "equivalent" map is checked independently. Completeness:
/// every planted modulus change is reported at the planted place.
fn criterion_6() -> Outcome {
    let fs: &[(&str, usize)] = &[
        ("x + y^2", 1),
        ("x + y^3", 1),
        ("x^2 + y^3", 1),
        ("x + y1^2 + y2^2", 2),
    ];
    let k = 8;
    let cases: Vec<usize> = (0..50).collect();
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|&i| {
            let (fs_, n) = fs[i % fs.len()];
            let f = p(fs_, n);
            let basis = brieskorn_basis(&f).unwrap();
            let window = window_for(&basis, k);
            let ctx = ReductionContext::new(&basis, window.clone()).unwrap();
            let mut rng = StdRng::seed_from_u64(7000 + i as u64);
            let g1 = window.truncate(&random_form(&mut rng, n, 3));
            let cfg = JetConfig::with_order(k);
            if i % 2 == 0 {
                let (m1, _) = ctx.reduce(&g1).unwrap();
                let mut g2 = ctx.reconstruct(&m1);
                let gens: Vec<Polynomial> = tangent_space_basis(&f, &window)
                    .into_iter()
                    .map(|t| t.numerator)
                    .filter(|num| num.constant_term().is_zero() && !num.is_zero())
                    .collect();
                for _ in 0..4 {
                    let num = &gens[rng.random_range(0..gens.len())];
                    g2 = &g2 + &num.scale(&qf(rng.random_range(-2..=2), rng.random_range(1..=2)));
                }
                let g2 = window.truncate(&g2);
                match construct_equivalence(
                    &LogTopForm::new(g1.clone()),
                    &LogTopForm::new(g2.clone()),
                    &f,
                    &cfg,
                ) {
                    Ok(Equivalence::Equivalent(phi)) => {
                        (!pulls_back(phi.images(), (&g2, &f), (&g1, &f), &window))
                            .then(|| format!("pair {i}: unsound map"))
                    }
                    Ok(other) => Some(format!("pair {i}: {other:?}")),
                    Err(e) => Some(format!("pair {i}: {e}")),
                }
            } else {
                let all = basis.all_numerators();
                let idx = rng.random_range(0..all.len());
                let power = rng.random_range(0..=2usize);
                let c = qf(rng.random_range(1..=4), rng.random_range(1..=3));
                let e = Polynomial::term(all[idx].clone(), Q::one());
                let bump = window.truncate(&(&f.pow(power as u32) * &e)).scale(&c);
                let g2 = &g1 + &bump;
                let name = if idx < basis.monomials().len() {
                    format!("c{idx}")
                } else {
                    "psi".into()
                };
                match construct_equivalence(
                    &LogTopForm::new(g1.clone()),
                    &LogTopForm::new(g2),
                    &f,
                    &cfg,
                ) {
                    Ok(Equivalence::Inequivalent {
                        series,
                        power: pw,
                        left,
                        right,
                    }) if series == name && pw == power && &right - &left == c => None,
                    Ok(other) => Some(format!("pair {i}: wanted {name} t^{power}, got {other:?}")),
                    Err(e) => Some(format!("pair {i}: {e}")),
                }
            }
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "{}/50 pairs correct at jet {k} {}",
            50 - failures.len(),
            failures.join("; ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let samples = 4096;
    let one = Complex64::new(1.0, 0.0);
    let pi = std::f64::consts::PI;
    let i = Complex64::i();
    let f = p("x + y^2", 1);
    let basis = brieskorn_basis(&f).unwrap();
    let pm = period_matrix(&basis, one, samples).unwrap();
    let want = DMatrix::from_row_slice(2, 2, &[-pi * i, pi * i, -pi * i, -pi * i]);
    let rel = (&pm.entries - &want).norm() / want.norm();
    let det = pm.entries.determinant();
    let det_err = (det - Complex64::new(-2.0 * pi * pi, 0.0)).norm() / (2.0 * pi * pi);
    let rec = recover_moduli(&integrals(&f, &p("1 + y", 1), one, samples).unwrap(), &pm).unwrap();
    let rec_err = rec.c.iter().map(|c| (c - one).norm()).fold(0.0, f64::max);
    let mut ranks = Vec::new();
    for t in [one, Complex64::new(0.25, 0.0)] {
        for s in ["x + y^2", "x + y^3", "x*y + y^2"] {
            let b = brieskorn_basis(&p(s, 1)).unwrap();
            ranks.push(rank_check(&b, t, samples).unwrap().rank);
        }
    }
    let residue = pm.residue_deviation;
    let elapsed = start.elapsed();
    let pass = rel < 1e-10
        && det_err < 1e-9
        && rec_err < 1e-8
        && residue < 1e-10
        && ranks == [2, 3, 3, 2, 3, 3]
        && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "P rel err {rel:.1e}, det err {det_err:.1e}, recovery err {rec_err:.1e}, residue dev {residue:.1e}, ranks {ranks:?} at t = 1, 1/4, {elapsed:?}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let f = p("x + y^2", 1);
    let g = p("1 + x + y^2", 1);
    let basis = brieskorn_basis(&f).unwrap();
    let (exact, _) = reduce(&LogTopForm::new(g.clone()), &basis, 12).unwrap();
    let c0 = &exact.series[0];
    let ts = [0.25, 0.5, 1.0];
    let values: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let t = Complex64::new(t, 0.0);
            let pm = period_matrix(&basis, t, 4096).unwrap();
            recover_moduli(&integrals(&f, &g, t, 4096).unwrap(), &pm)
                .unwrap()
                .c[0]
                .re
        })
        .collect();
    // Quadratic through the three samples, in powers of t.
    let v = nalgebra::Matrix3::from_fn(|r, c| ts[r].powi(c as i32));
    let coeffs = v
        .lu()
        .solve(&nalgebra::Vector3::from_column_slice(&values))
        .unwrap();
    let exact_at = |t: f64| {
        c0.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| nambu_core::poly::to_f64(c) * t.powi(j as i32))
            .sum::<f64>()
    };
    let point_err = ts
        .iter()
        .zip(&values)
        .map(|(&t, v)| (v - exact_at(t)).abs())
        .fold(0.0, f64::max);
    let want = [1.0, 1.0, 0.0];
    let coeff_err = (0..3)
        .map(|j| (coeffs[j] - want[j]).abs())
        .fold(0.0, f64::max);
    let exact_is_one_plus_t = c0.coeffs().iter().enumerate().all(|(j, c)| match j {
        0 | 1 => c.is_one(),
        _ => c.is_zero(),
    });
    outcome(
        exact_is_one_plus_t && point_err < 1e-6 && coeff_err < 1e-6,
        format!("exact c0 = {c0}; interpolated coefficients err {coeff_err:.1e}, pointwise err {point_err:.1e}"),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    // Criterion 5 compares the A1 normal form's ζ with the solution of the
    // literal normalization ODE. That series does not normalize the pair (the
    // area oracle above rejects it), so the line is expected to read FAIL.
    let expected_fail = [5];
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        let start = Instant::now();
        let o = run();
        println!(
            "criterion {id}: {} ({:.2?}) {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            o.detail.trim_end()
        );
        if o.broken || o.pass == expected_fail.contains(&id) {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
