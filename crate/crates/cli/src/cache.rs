//! On-disk cache for recursion memos and Freudenthal tables.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use typea::mult::{MemoKey, MultEngine};
use typea::rootsys::weyl_dim;
use typea::Weight;

const VERSION: u64 = 1;

type Entry = (Weight, Weight, BigUint);
type Tables = BTreeMap<Weight, BTreeMap<Weight, BigUint>>;

fn entry_json((lambda, mu, value): &Entry) -> Value {
    json!({
        "rank": lambda.coords().len(),
        "lambda": lambda.coords(),
        "mu": mu.coords(),
        "value": value.to_string(),
    })
}

fn parse_entry(v: &Value) -> Option<Entry> {
    let coords = |key: &str| -> Option<Weight> {
        let xs = v.get(key)?.as_array()?;
        Weight::new(xs.iter().map(Value::as_i64).collect::<Option<Vec<_>>>()?).ok()
    };
    let rank = usize::try_from(v.get("rank")?.as_u64()?).ok()?;
    let lambda = coords("lambda")?;
    let mu = coords("mu")?;
    if lambda.coords().len() != rank || mu.coords().len() != rank || !lambda.is_dominant() {
        return None;
    }
    let value = v.get("value")?.as_str()?.parse().ok()?;
    Some((lambda, mu, value))
}

fn checksum(payload: &Value) -> String {
    format!("{:x}", Sha256::digest(payload.to_string().as_bytes()))
}

fn parse(text: &str) -> Result<(Vec<Entry>, Tables), String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.get("version").and_then(Value::as_u64) != Some(VERSION) {
        return Err("unsupported version".into());
    }
    let root = doc.get("payload").ok_or("missing payload")?;
    if doc.get("checksum").and_then(Value::as_str) != Some(checksum(root).as_str()) {
        return Err("checksum mismatch".into());
    }
    let section = |key: &str| -> Result<Vec<Entry>, String> {
        root.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| format!("missing {key:?}"))?
            .iter()
            .map(|v| parse_entry(v).ok_or_else(|| format!("bad entry in {key:?}")))
            .collect()
    };
    let memo = section("mult")?;
    let mut tables = Tables::new();
    for (lambda, mu, m) in section("freudenthal")? {
        tables.entry(lambda).or_default().insert(mu, m);
    }
    for (lambda, table) in &tables {
        let mass: BigUint = table.values().sum();
        if weyl_dim(lambda).ok().as_ref() != Some(&mass) {
            return Err(format!("incomplete table for {lambda}"));
        }
    }
    Ok((memo, tables))
}

/// Loads `path` into `engine`. A missing file is silently skipped; an
/// unreadable or inconsistent one is ignored with a warning.
pub fn load(path: &Path, engine: &MultEngine) {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return,
        Err(e) => {
            eprintln!("warning: ignoring cache {}: {e}", path.display());
            return;
        }
    };
    match parse(&text) {
        Ok((memo, tables)) => {
            engine.seed_memo(
                memo.into_iter()
                    .map(|(lambda, mu, v)| (MemoKey { lambda, mu }, v)),
            );
            for (lambda, table) in tables {
                engine.freudenthal().insert_table(lambda, table);
            }
        }
        Err(e) => eprintln!("warning: ignoring cache {}: {e}", path.display()),
    }
}

pub fn save(path: &Path, engine: &MultEngine) -> std::io::Result<()> {
    let memo: Vec<Value> = engine
        .export_memo()
        .into_iter()
        .map(|(k, v)| entry_json(&(k.lambda, k.mu, v)))
        .collect();
    let tables: Vec<Value> = engine
        .freudenthal()
        .export()
        .iter()
        .map(entry_json)
        .collect();
    let payload = json!({ "mult": memo, "freudenthal": tables });
    let doc = json!({ "version": VERSION, "checksum": checksum(&payload), "payload": payload });
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, doc.to_string())?;
    fs::rename(&tmp, path)
}
