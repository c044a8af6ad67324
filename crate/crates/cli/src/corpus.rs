//! `corpus run`: batch golden checks, one JSON object per line.

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::commands::{
    basis_cmd, classify_cmd, invariants_cmd, reduce_cmd, weights_cmd, Fields, SessionConfig,
};
use crate::error::CliError;

#[derive(Debug, Deserialize)]
pub struct CorpusItem {
    pub name: String,
    pub n: usize,
    pub f: String,
    #[serde(default)]
    pub w: Option<String>,
    #[serde(default)]
    pub expect: Map<String, Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Source {
    Invariants,
    Weights,
    Classify,
    Basis,
    Reduce,
}

fn source_of(key: &str) -> Option<Source> {
    Some(match key {
        "mu" | "mu_restricted" | "mu_sigma" | "q_sigma" | "tau" | "tau_restricted"
        | "tau_sigma" | "q" | "q_restricted" => Source::Invariants,
        "weights" | "verdict" | "agree" => Source::Weights,
        "class" => Source::Classify,
        "basis" | "extra" | "rank" => Source::Basis,
        "moduli" => Source::Reduce,
        _ => return None,
    })
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusItem>, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| CliError::Input(format!("corpus line {}: {e}", i + 1)))
        })
        .collect()
}

fn run_source(cfg: &SessionConfig, item: &CorpusItem, s: Source) -> Result<Fields, CliError> {
    match s {
        Source::Invariants => invariants_cmd(cfg, &item.f),
        Source::Weights => weights_cmd(cfg, &item.f),
        Source::Classify => classify_cmd(cfg, &item.f),
        Source::Basis => basis_cmd(cfg, &item.f),
        Source::Reduce => {
            let w = item.w.as_deref().ok_or_else(|| {
                CliError::Input(format!("{}: \"moduli\" needs a form w", item.name))
            })?;
            reduce_cmd(cfg, &item.f, w)
        }
    }
}

/// Checks one item; an input error in the item aborts the whole run.
pub fn run_item(base: &SessionConfig, item: &CorpusItem) -> Result<Value, CliError> {
    let cfg = SessionConfig {
        n: item.n,
        ..base.clone()
    };
    cfg.validate()?;
    let mut unknown = Vec::new();
    let mut sources: Vec<Source> = Vec::new();
    for k in item.expect.keys() {
        match source_of(k) {
            Some(s) => sources.push(s),
            None => unknown.push(k.clone()),
        }
    }
    if !unknown.is_empty() {
        return Err(CliError::Input(format!(
            "{}: unknown expectation keys {unknown:?}",
            item.name
        )));
    }
    sources.sort();
    sources.dedup();
    let mut got = Map::new();
    for s in sources {
        match run_source(&cfg, item, s) {
            Ok(fields) => got.extend(fields),
            Err(CliError::Refusal(msg)) => {
                for k in item.expect.keys().filter(|k| source_of(k) == Some(s)) {
                    got.insert(k.clone(), json!({ "refusal": msg }));
                }
            }
            Err(e) => return Err(e),
        }
    }
    let mismatches: Vec<Value> = item
        .expect
        .iter()
        .filter(|(k, v)| got.get(*k) != Some(*v))
        .map(|(k, v)| json!({ "key": k, "expected": v, "got": got.get(k).cloned().unwrap_or(Value::Null) }))
        .collect();
    Ok(json!({
        "name": item.name,
        "pass": mismatches.is_empty(),
        "mismatches": mismatches,
    }))
}

/// Items run in parallel; results come back in input order.
pub fn run_corpus(cfg: &SessionConfig, items: &[CorpusItem]) -> Result<(Fields, bool), CliError> {
    let results: Vec<Value> = items
        .par_iter()
        .map(|it| run_item(cfg, it))
        .collect::<Result<_, _>>()?;
    let passed = results.iter().filter(|r| r["pass"] == json!(true)).count();
    let failed = results.len() - passed;
    let mut out = Map::new();
    out.insert("passed".into(), json!(passed));
    out.insert("failed".into(), json!(failed));
    out.insert("items".into(), Value::Array(results));
    Ok((out, failed == 0))
}
