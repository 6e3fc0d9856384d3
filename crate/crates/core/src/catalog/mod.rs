//! Regression fixtures: pipelines with stored expectations, compared
//! byte-exact through canonical text.

use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::idempotents::IdempotentSet;
use crate::laurent::parse_poly;
use crate::pipeline::{parse_scaled_matrix, Outcome, Pipeline, Value};
use crate::scalars::Ring;

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        &[$(include_str!(concat!("../../catalog/", $name, ".json"))),*]
    };
}

const SOURCES: &[&str] = fixtures![
    "algorithm-c4-klein",
    "belevitch",
    "block-c2",
    "block-complex-q",
    "block-onb",
    "butson-c3",
    "c2-idempotents",
    "c2-paraunitary",
    "c2xc2",
    "c3-paraunitary",
    "c4-idempotents",
    "c4-realified",
    "c6-realified",
    "chain-c2",
    "chain-c4-diag-klein",
    "d8-idempotents",
    "f5-set",
    "f7-set-a",
    "f7-set-b",
    "kd-c3xc4",
    "onb-c2",
    "onb-paraunitary",
    "onb-r3",
    "onb-r3-merged",
    "pseudo",
    "qwq",
    "s3-determinant",
    "s3-idempotents",
    "s3-paraunitary",
    "spectral-rotation",
    "tangle-c6-s3",
    "tangle-ex3",
    "tangle-ex5",
    "tangle-f7",
    "tangle-onb-c3",
    "tangle-scalar",
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub title: String,
    pub pipeline: Pipeline,
    /// Binding name and its stored expectation, in file order.
    pub expected: Vec<(String, Json)>,
}

/// Result of running one entry: mismatches and failed checks, if any.
#[derive(Clone, Debug)]
pub struct EntryResult {
    pub id: String,
    pub problems: Vec<String>,
    pub outcome: Option<Outcome>,
}

impl EntryResult {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

impl CatalogEntry {
    pub fn from_json(v: &Json) -> Result<CatalogEntry> {
        let text = |k: &str| {
            v.get(k)
                .and_then(Json::as_str)
                .map(str::to_string)
                .ok_or_else(|| Error::parse(format!("catalog entry without {k}")))
        };
        let expected = match v.get("expected") {
            None => Vec::new(),
            Some(Json::Object(map)) => map.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            Some(_) => return Err(Error::parse("expected must be an object")),
        };
        Ok(CatalogEntry {
            id: text("id")?,
            title: text("title")?,
            pipeline: Pipeline::from_json(v.get("pipeline").ok_or_else(|| Error::parse("entry without pipeline"))?)?,
            expected,
        })
    }

    pub fn run(&self) -> EntryResult {
        let outcome = match self.pipeline.execute() {
            Ok(o) => o,
            Err(e) => {
                return EntryResult {
                    id: self.id.clone(),
                    problems: vec![e.to_string()],
                    outcome: None,
                }
            }
        };
        let mut problems: Vec<String> = outcome
            .reports()
            .filter(|(_, r)| !r.passed)
            .map(|(name, r)| format!("{name}: {r}"))
            .collect();
        for (name, want) in &self.expected {
            match outcome.get(name) {
                None => problems.push(format!("{name}: no such binding")),
                Some(actual) => match expected_text(actual, want) {
                    Err(e) => problems.push(format!("{name}: bad expectation: {e}")),
                    Ok(text) if text != actual.canonical() => problems.push(format!(
                        "{name}: differs\n--- expected\n{text}\n--- actual\n{}",
                        actual.canonical()
                    )),
                    Ok(_) => {}
                },
            }
        }
        EntryResult {
            id: self.id.clone(),
            problems,
            outcome: Some(outcome),
        }
    }
}

fn value_ring(v: &Value) -> Option<Ring> {
    match v {
        Value::Matrix(m) => Some(m.ring().clone()),
        Value::Set(s) => Some(s.ring().clone()),
        Value::Poly(p) => Some(p.ring().clone()),
        Value::Hadamard(h) => Some(h.hadamard.ring().clone()),
        Value::Cleared(c) => Some(c.matrix.ring().clone()),
        _ => None,
    }
}

/// Canonical text of an expectation, built in the ring of the actual value.
fn expected_text(actual: &Value, want: &Json) -> Result<String> {
    let ring = value_ring(actual).unwrap_or_else(Ring::rational);
    let field = |k: &str| want.get(k).ok_or_else(|| Error::parse(format!("expectation without {k}")));
    Ok(match actual {
        Value::Matrix(_) => Value::Matrix(parse_scaled_matrix(field("matrix")?, &ring)?).canonical(),
        Value::Set(_) => {
            let s = field("set")?;
            let members = s
                .get("members")
                .and_then(Json::as_array)
                .ok_or_else(|| Error::parse("set expectation without members"))?
                .iter()
                .map(|m| parse_scaled_matrix(m, &ring))
                .collect::<Result<Vec<_>>>()?;
            let labels = match s.get("labels") {
                Some(l) => Some(serde_json::from_value(l.clone())?),
                None => None,
            };
            Value::Set(IdempotentSet::new(members, labels)?).canonical()
        }
        Value::Poly(_) => {
            let text = field("poly")?.as_str().ok_or_else(|| Error::parse("poly must be a string"))?;
            parse_poly(text, &ring, None)?.to_string()
        }
        Value::Count(_) => field("count")?.to_string(),
        Value::Counts(_) => {
            let v: Vec<usize> = serde_json::from_value(field("counts")?.clone())?;
            format!("{v:?}")
        }
        Value::Report(r) => {
            let passed = field("passed")?.as_bool().ok_or_else(|| Error::parse("passed must be a bool"))?;
            if passed == r.passed {
                actual.canonical()
            } else {
                format!("passed: {passed}")
            }
        }
        Value::Hadamard(_) => {
            let h = parse_scaled_matrix(field("hadamard")?, &ring)?;
            let is_hadamard = want.get("is_hadamard").and_then(Json::as_bool).unwrap_or(true);
            let butson = match want.get("butson") {
                Some(Json::Number(n)) => n.to_string(),
                _ => "none".to_string(),
            };
            format!("{h}\nhadamard: {is_hadamard}\nbutson: {butson}")
        }
        Value::Cleared(_) => {
            let c = field("cleared")?;
            let text = |k: &str| -> Result<String> {
                let s = c
                    .get(k)
                    .and_then(Json::as_str)
                    .ok_or_else(|| Error::parse(format!("cleared expectation without {k}")))?;
                Ok(parse_poly(s, &ring, None)?.to_string())
            };
            let m = parse_scaled_matrix(
                c.get("matrix").ok_or_else(|| Error::parse("cleared expectation without matrix"))?,
                &ring,
            )?;
            format!("multiplier: {}\n{}\ngram: {}", text("multiplier")?, m, text("gram")?)
        }
    })
}

/// Every bundled entry, sorted by id.
pub fn entries() -> Result<Vec<CatalogEntry>> {
    let mut out = SOURCES
        .iter()
        .map(|s| CatalogEntry::from_json(&serde_json::from_str(s)?))
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

pub fn entry(id: &str) -> Result<CatalogEntry> {
    entries()?
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::parse(format!("no catalog entry {id:?}")))
}

/// Runs entries concurrently; results come back in id order.
pub fn run_all(entries: &[CatalogEntry]) -> Vec<EntryResult> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = entries.iter().map(|e| scope.spawn(move || e.run())).collect();
        handles
            .into_iter()
            .zip(entries)
            .map(|(h, e)| {
                h.join().unwrap_or_else(|_| EntryResult {
                    id: e.id.clone(),
                    problems: vec!["entry panicked".into()],
                    outcome: None,
                })
            })
            .collect()
    })
}
