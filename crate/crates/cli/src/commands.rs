//! One function per subcommand, each producing the JSON document body.

use nambu_core::brieskorn::{brieskorn_basis, reduce, window_for};
use nambu_core::classify::{
    classify_pair, construct_equivalence, hamiltonian_field, normal_form_a0, normal_form_a1,
    subordinated_bracket, ClassTag, ClassWitness, Equivalence, JetConfig, NormalFormReport,
};
use nambu_core::local::invariants;
use nambu_core::logforms::LogTopForm;
use nambu_core::periods::{integrals, numerical_rank, period_matrix, recover_moduli, CycleKind};
use nambu_core::poly::{parse_polynomial, Polynomial, Truncation};
use nambu_core::quasihomog::{saito_cross_check, SaitoVerdict};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::encode::{complex, moduli, rational, rationals, series, Names};
use crate::error::CliError;

pub type Fields = Map<String, Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub n: usize,
    pub jet_order: u32,
    pub samples: usize,
    pub output: OutputFormat,
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(1..=9).contains(&self.n) {
            return Err(CliError::Input(format!(
                "n must be between 1 and 9, got {}",
                self.n
            )));
        }
        if self.jet_order < 4 {
            return Err(CliError::Input(format!(
                "jet order must be at least 4, got {}",
                self.jet_order
            )));
        }
        Ok(())
    }

    fn jet(&self) -> JetConfig {
        JetConfig::with_order(self.jet_order)
    }

    fn names(&self) -> Names {
        Names::new(self.n)
    }

    fn parse(&self, expr: &str) -> Result<Polynomial, CliError> {
        Ok(parse_polynomial(expr, self.n)?)
    }

    fn form(&self, expr: &str) -> Result<LogTopForm, CliError> {
        Ok(LogTopForm::new(self.parse(expr)?))
    }
}

fn fields(pairs: Vec<(&str, Value)>) -> Fields {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn invariants_cmd(cfg: &SessionConfig, f: &str) -> Result<Fields, CliError> {
    let r = invariants(&cfg.parse(f)?)?;
    Ok(fields(vec![
        ("mu", json!(r.mu_f)),
        ("mu_restricted", json!(r.mu_f_restricted)),
        ("mu_sigma", json!(r.mu_sigma)),
        ("q_sigma", json!(r.q_sigma)),
        ("tau", json!(r.tau_f)),
        ("tau_restricted", json!(r.tau_f_restricted)),
        ("tau_sigma", json!(r.tau_sigma)),
        ("q", json!(r.q_f)),
        ("q_restricted", json!(r.q_f_restricted)),
    ]))
}

pub fn weights_cmd(cfg: &SessionConfig, f: &str) -> Result<Fields, CliError> {
    let check = saito_cross_check(&cfg.parse(f)?)?;
    let verdict = match check.verdict {
        SaitoVerdict::Quasihomogeneous => "quasihomogeneous",
        SaitoVerdict::NotQuasihomogeneous => "not quasihomogeneous",
        SaitoVerdict::QuasihomogeneousAfterCoordinateChange => {
            "quasihomogeneous after coordinate change"
        }
        SaitoVerdict::Contradiction => "contradiction",
    };
    Ok(fields(vec![
        (
            "weights",
            check
                .weights
                .as_ref()
                .map_or(Value::Null, |w| rationals(w.weights())),
        ),
        ("q_sigma", json!(check.q_sigma)),
        ("verdict", json!(verdict)),
        ("agree", json!(check.agree)),
    ]))
}

fn witness(w: &ClassWitness) -> Value {
    json!({
        "df_nonzero": w.df_nonzero,
        "transversal": w.transversal,
        "morse_restriction": w.morse_restriction,
        "mu_f": w.mu_f,
        "mu_restricted": w.mu_restricted,
        "corank_f": w.corank_f,
        "corank_restricted": w.corank_restricted,
        "normal_form_support": w.normal_form_support,
        "first_failed": w.first_failed,
    })
}

pub fn classify_cmd(cfg: &SessionConfig, f: &str) -> Result<Fields, CliError> {
    let c = classify_pair(&cfg.parse(f)?);
    Ok(fields(vec![
        ("class", json!(c.tag.to_string())),
        ("witness", witness(&c.witness)),
    ]))
}

pub fn basis_cmd(cfg: &SessionConfig, f: &str) -> Result<Fields, CliError> {
    let b = brieskorn_basis(&cfg.parse(f)?)?;
    let names = cfg.names();
    let extra = b.extra().map_or(Value::Null, |e| {
        json!({
            "monomial": names.monomial(&e.monomial),
            "in_relative_jacobian": e.in_relative_jacobian,
            "in_ideal_f": e.in_ideal_f,
        })
    });
    Ok(fields(vec![
        ("weights", rationals(b.weights().weights())),
        (
            "basis",
            Value::Array(b.monomials().iter().map(|m| names.monomial(m)).collect()),
        ),
        ("extra", extra),
        ("rank", json!(b.all_numerators().len())),
    ]))
}

pub fn reduce_cmd(cfg: &SessionConfig, f: &str, w: &str) -> Result<Fields, CliError> {
    let f = cfg.parse(f)?;
    let b = brieskorn_basis(&f)?;
    let (m, cert) = reduce(&cfg.form(w)?, &b, cfg.jet_order)?;
    Ok(fields(vec![
        ("moduli", moduli(&m)),
        ("window", rational(&window_for(&b, cfg.jet_order).bound())),
        ("certificate_terms", json!(cert.terms.len())),
    ]))
}

fn report(cfg: &SessionConfig, r: &NormalFormReport) -> Fields {
    let names = cfg.names();
    let mut out = fields(vec![
        ("class", json!(r.class.tag.to_string())),
        ("moduli", moduli(&r.moduli)),
    ]);
    let optional = [
        ("zeta", &r.zeta),
        ("xi", &r.xi),
        ("a", &r.a),
        ("phi", &r.phi),
        ("psi_antiderivative", &r.psi_antiderivative),
    ];
    for (k, s) in optional {
        if let Some(s) = s {
            out.insert(k.into(), series(s));
        }
    }
    out.insert(
        "normalized_form".into(),
        names.poly(r.normalized_form.numerator()),
    );
    out.insert("normalized_f".into(), names.poly(&r.normalized_f));
    out.insert("diffeo".into(), diffeo(&names, r.diffeo_jet.images()));
    out
}

fn diffeo(names: &Names, images: &[Polynomial]) -> Value {
    let mut m = Map::new();
    for (name, p) in names.all().iter().zip(images) {
        m.insert(name.clone(), names.poly(p));
    }
    Value::Object(m)
}

pub fn normal_form_cmd(cfg: &SessionConfig, f: &str, w: &str) -> Result<Fields, CliError> {
    let fp = cfg.parse(f)?;
    let w = cfg.form(w)?;
    let r = match classify_pair(&fp).tag {
        ClassTag::A0 => normal_form_a0(&w, &fp, &cfg.jet())?,
        _ => normal_form_a1(&w, &fp, &cfg.jet())?,
    };
    Ok(report(cfg, &r))
}

pub fn hamiltonian_cmd(cfg: &SessionConfig, f: &str, w: &str) -> Result<Fields, CliError> {
    let fp = cfg.parse(f)?;
    let trunc = Truncation::total_degree(fp.nvars(), cfg.jet_order);
    let z = hamiltonian_field(&fp, &cfg.form(w)?, &trunc)?;
    let names = cfg.names();
    Ok(fields(vec![("field", diffeo(&names, z.coeffs()))]))
}

pub fn subordinated_cmd(cfg: &SessionConfig, f: &str, w: &str) -> Result<Fields, CliError> {
    let fp = cfg.parse(f)?;
    let trunc = Truncation::total_degree(fp.nvars(), cfg.jet_order);
    let b = subordinated_bracket(&fp, &cfg.form(w)?, &trunc)?;
    let names = cfg.names();
    let v = names.all();
    let mut m = Map::new();
    for (i, j, p) in [(0, 1, &b.xy), (0, 2, &b.xz), (1, 2, &b.yz)] {
        m.insert(format!("{},{}", v[i], v[j]), names.poly(p));
    }
    Ok(fields(vec![("brackets", Value::Object(m))]))
}

pub fn periods_cmd(
    cfg: &SessionConfig,
    f: &str,
    w: &str,
    t: Complex64,
) -> Result<Fields, CliError> {
    let fp = cfg.parse(f)?;
    let g = cfg.parse(w)?;
    let b = brieskorn_basis(&fp)?;
    let p = period_matrix(&b, t, cfg.samples)?;
    let rank = numerical_rank(&p);
    let i = integrals(&fp, &g, t, cfg.samples)?;
    let names = cfg.names();
    let cycles: Vec<Value> = p
        .cycles
        .iter()
        .map(|c| {
            json!({
                "center": complex(c.center),
                "radius": c.radius,
                "kind": match c.kind {
                    CycleKind::Puncture => "puncture",
                    CycleKind::ChartHole => "hole",
                },
            })
        })
        .collect();
    let rows: Vec<Value> = p
        .entries
        .row_iter()
        .map(|r| Value::Array(r.iter().map(|z| complex(*z)).collect()))
        .collect();
    let mut out = fields(vec![
        ("t", complex(t)),
        (
            "forms",
            Value::Array(
                b.all_numerators()
                    .iter()
                    .map(|m| names.monomial(m))
                    .collect(),
            ),
        ),
        ("cycles", Value::Array(cycles)),
        ("period_matrix", Value::Array(rows)),
        ("residue_deviation", json!(p.residue_deviation)),
        ("rank", json!(rank.rank)),
        ("singular_values", json!(rank.singular_values)),
        (
            "integrals",
            Value::Array(i.iter().map(|z| complex(*z)).collect()),
        ),
    ]);
    match recover_moduli(&i, &p) {
        Ok(rec) => {
            let k = b.monomials().len();
            let mut m = Map::new();
            for (idx, c) in rec.c.iter().enumerate() {
                let key = if idx < k {
                    format!("c{idx}")
                } else {
                    "psi".into()
                };
                m.insert(key, complex(*c));
            }
            out.insert("recovered".into(), Value::Object(m));
            out.insert("condition".into(), json!(rec.condition));
        }
        Err(e) => {
            out.insert("recovered".into(), Value::Null);
            out.insert("recovery_error".into(), json!(e.to_string()));
        }
    }
    Ok(out)
}

pub fn verify_cmd(cfg: &SessionConfig, f: &str, w1: &str, w2: &str) -> Result<Fields, CliError> {
    let fp = cfg.parse(f)?;
    let e = construct_equivalence(&cfg.form(w1)?, &cfg.form(w2)?, &fp, &cfg.jet())?;
    Ok(match e {
        Equivalence::Equivalent(phi) => fields(vec![
            ("verdict", json!("equivalent")),
            ("diffeo", diffeo(&cfg.names(), phi.images())),
        ]),
        Equivalence::Inequivalent {
            series,
            power,
            left,
            right,
        } => fields(vec![
            ("verdict", json!("inequivalent")),
            ("series", json!(series)),
            ("power", json!(power)),
            ("left", rational(&left)),
            ("right", rational(&right)),
        ]),
    })
}
