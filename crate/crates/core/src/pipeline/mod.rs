//! Declarative construction pipelines: an ordered list of named steps, each
//! applying one construction or check to earlier bindings.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value as Json};

use crate::constructors::{
    belevitch_block, block_arrangement, compose_paraunitary, monomial_clear, monomial_sum, pseudo_from_rows,
    specialize_hadamard, spectral_unitary, tangle, ArrangementPlan, ClearedMatrix, ComposeMode, HadamardReport,
    MonomialAssignment, TangleVariant,
};
use crate::error::{Error, Result};
use crate::idempotents::{
    diagonal_set, factor_rank1, from_matrix_rows, from_orthogonal_basis, from_orthonormal_basis, group_set, merge,
    realify, tensor_sets, verify_set, GroupTable, IdempotentSet,
};
use crate::laurent::{parse_poly, LaurentPoly};
use crate::polymatrix::{PolyMatrix, VerificationReport};
use crate::scalars::{Ring, Scalar};

/// A bound result of a pipeline step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Matrix(PolyMatrix),
    Set(IdempotentSet),
    Poly(LaurentPoly),
    Count(usize),
    Counts(Vec<usize>),
    Report(VerificationReport),
    Hadamard(Box<HadamardReport>),
    Cleared(Box<ClearedMatrix>),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Matrix(_) => "matrix",
            Value::Set(_) => "set",
            Value::Poly(_) => "poly",
            Value::Count(_) => "count",
            Value::Counts(_) => "counts",
            Value::Report(_) => "report",
            Value::Hadamard(_) => "hadamard",
            Value::Cleared(_) => "cleared",
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Matrix(m) => json!({"kind": "matrix", "matrix": m.to_json()}),
            Value::Set(s) => json!({"kind": "set", "set": s.to_json()}),
            Value::Poly(p) => json!({"kind": "poly", "value": p.to_string()}),
            Value::Count(n) => json!({"kind": "count", "value": n}),
            Value::Counts(v) => json!({"kind": "counts", "value": v}),
            Value::Report(r) => json!({"kind": "report", "report": r.to_json()}),
            Value::Hadamard(h) => json!({"kind": "hadamard", "report": h.to_json()}),
            Value::Cleared(c) => json!({
                "kind": "cleared",
                "multiplier": c.multiplier.to_string(),
                "matrix": c.matrix.to_json(),
                "gram": c.gram.to_string(),
            }),
        }
    }

    /// Canonical text; two values of the same kind are equal exactly when
    /// their canonical texts are.
    pub fn canonical(&self) -> String {
        match self {
            Value::Matrix(m) => m.to_string(),
            Value::Set(s) => s
                .labels()
                .iter()
                .zip(s.members())
                .map(|(l, m)| format!("{l}:\n{m}"))
                .collect::<Vec<_>>()
                .join("\n"),
            Value::Poly(p) => p.to_string(),
            Value::Count(n) => n.to_string(),
            Value::Counts(v) => format!("{v:?}"),
            Value::Report(r) => r.to_string(),
            Value::Hadamard(h) => format!(
                "{}\nhadamard: {}\nbutson: {}",
                h.hadamard,
                h.is_hadamard(),
                h.butson.map_or("none".to_string(), |q| q.to_string())
            ),
            Value::Cleared(c) => format!("multiplier: {}\n{}\ngram: {}", c.multiplier, c.matrix, c.gram),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub op: String,
    pub args: Json,
    pub bind: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pipeline {
    pub ring: Ring,
    pub steps: Vec<Step>,
}

/// Bindings in step order plus every verification report produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub bindings: Vec<(String, Value)>,
}

impl Outcome {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn reports(&self) -> impl Iterator<Item = (&str, &VerificationReport)> {
        self.bindings.iter().filter_map(|(n, v)| match v {
            Value::Report(r) => Some((n.as_str(), r)),
            _ => None,
        })
    }

    /// True when every verification step passed.
    pub fn all_verified(&self) -> bool {
        self.reports().all(|(_, r)| r.passed)
    }

    pub fn to_json(&self) -> Json {
        let mut map = Map::new();
        for (name, value) in &self.bindings {
            map.insert(name.clone(), value.to_json());
        }
        json!({"bindings": map, "verified": self.all_verified()})
    }
}

impl Pipeline {
    pub fn from_json(v: &Json) -> Result<Pipeline> {
        let ring = Ring::from_json(v.get("ring").ok_or_else(|| Error::parse("pipeline without ring"))?)?;
        let steps = match v.get("steps") {
            None => Vec::new(),
            Some(s) => s
                .as_array()
                .ok_or_else(|| Error::parse("steps must be an array"))?
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let op = s
                        .get("op")
                        .and_then(Json::as_str)
                        .ok_or_else(|| Error::parse(format!("step {i} has no op")))?;
                    let bind = s
                        .get("bind")
                        .and_then(Json::as_str)
                        .ok_or_else(|| Error::parse(format!("step {i} has no bind name")))?;
                    Ok(Step {
                        op: op.to_string(),
                        args: s.get("args").cloned().unwrap_or_else(|| json!({})),
                        bind: bind.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(Pipeline { ring, steps })
    }

    pub fn parse(text: &str) -> Result<Pipeline> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Json {
        json!({
            "ring": self.ring.to_json(),
            "steps": self.steps.iter().map(|s| json!({"op": s.op, "args": s.args, "bind": s.bind})).collect::<Vec<_>>(),
        })
    }

    /// Runs every step in order. Errors carry the index of the failing step.
    pub fn execute(&self) -> Result<Outcome> {
        let mut env = Env {
            ring: &self.ring,
            bindings: Vec::new(),
        };
        for (i, step) in self.steps.iter().enumerate() {
            let value = env.run(step).map_err(|e| match e {
                Error::Pipeline { .. } => e,
                other => Error::Pipeline {
                    step: i,
                    message: format!("{} ({}): {other}", step.bind, step.op),
                },
            })?;
            env.bindings.push((step.bind.clone(), value));
        }
        Ok(Outcome { bindings: env.bindings })
    }
}

struct Env<'a> {
    ring: &'a Ring,
    bindings: Vec<(String, Value)>,
}

fn arg<'j>(args: &'j Json, key: &str) -> Result<&'j Json> {
    args.get(key).ok_or_else(|| Error::parse(format!("missing argument {key:?}")))
}

fn str_arg<'j>(args: &'j Json, key: &str) -> Result<&'j str> {
    arg(args, key)?
        .as_str()
        .ok_or_else(|| Error::parse(format!("argument {key:?} must be a string")))
}

fn usize_arg(args: &Json, key: &str) -> Result<usize> {
    arg(args, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::parse(format!("argument {key:?} must be a non-negative integer")))
}

fn strings(v: &Json, what: &str) -> Result<Vec<String>> {
    serde_json::from_value(v.clone()).map_err(|_| Error::parse(format!("{what} must be a list of strings")))
}

fn grid(v: &Json, what: &str) -> Result<Vec<Vec<String>>> {
    serde_json::from_value(v.clone()).map_err(|_| Error::parse(format!("{what} must be a list of string rows")))
}

/// Parses a constant expression such as `1/2` or `E(8) + E(8)^-1`.
pub fn parse_scalar(text: &str, ring: &Ring) -> Result<Scalar> {
    parse_poly(text, ring, None)?
        .constant_value()
        .ok_or_else(|| Error::parse(format!("{text:?} is not a constant")))
}

/// `{"rows": [[...]], "scale": "1/9"}` as the matrix `scale * rows`.
pub fn parse_scaled_matrix(v: &Json, ring: &Ring) -> Result<PolyMatrix> {
    let rows = grid(arg(v, "rows")?, "rows")?;
    let m = PolyMatrix::parse_grid(ring, None, &rows)?;
    match v.get("scale") {
        None => Ok(m),
        Some(s) => {
            let s = s.as_str().ok_or_else(|| Error::parse("scale must be a string"))?;
            m.scale_poly(&parse_poly(s, ring, None)?)
        }
    }
}

/// `{"family": "cyclic", "order": 4}` and friends.
pub fn parse_group(v: &Json) -> Result<GroupTable> {
    match str_arg(v, "family")? {
        "cyclic" => GroupTable::cyclic(usize_arg(v, "order")?),
        "elementary_abelian_2" => GroupTable::elementary_abelian_2(usize_arg(v, "rank")? as u32),
        "dihedral" => GroupTable::dihedral(usize_arg(v, "order")?),
        "s3" | "symmetric_3" => GroupTable::symmetric_3(),
        "custom" => GroupTable::from_json(v),
        other => Err(Error::parse(format!("unknown group family {other:?}"))),
    }
}

fn groups_arg(args: &Json) -> Result<Option<Vec<Vec<usize>>>> {
    match args.get("groups") {
        None => Ok(None),
        Some(g) => Ok(Some(
            serde_json::from_value(g.clone()).map_err(|_| Error::parse("groups must be lists of indices"))?,
        )),
    }
}

impl Env<'_> {
    fn lookup(&self, name: &str) -> Result<&Value> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
            .ok_or_else(|| Error::parse(format!("unknown binding {name:?}")))
    }

    fn matrix(&self, args: &Json, key: &str) -> Result<PolyMatrix> {
        let name = str_arg(args, key)?;
        match self.lookup(name)? {
            Value::Matrix(m) => Ok(m.clone()),
            Value::Cleared(c) => Ok(c.matrix.clone()),
            Value::Hadamard(h) => Ok(h.hadamard.clone()),
            other => Err(Error::parse(format!("{name:?} is a {}, expected a matrix", other.kind()))),
        }
    }

    fn set(&self, args: &Json, key: &str) -> Result<IdempotentSet> {
        let name = str_arg(args, key)?;
        match self.lookup(name)? {
            Value::Set(s) => Ok(s.clone()),
            other => Err(Error::parse(format!("{name:?} is a {}, expected a set", other.kind()))),
        }
    }

    fn ring_arg(&self, args: &Json) -> Result<Ring> {
        match args.get("ring") {
            Some(r) => Ring::from_json(r),
            None => Ok(self.ring.clone()),
        }
    }

    fn weights(&self, args: &Json, key: &str, ring: &Ring) -> Result<MonomialAssignment> {
        MonomialAssignment::parse(ring, &strings(arg(args, key)?, key)?)
    }

    fn values(&self, args: &Json, ring: &Ring, vars: &[String]) -> Result<BTreeMap<String, Scalar>> {
        let mut out = BTreeMap::new();
        if let Some(all) = args.get("all") {
            let s = all.as_str().ok_or_else(|| Error::parse("all must be a string"))?;
            let value = parse_scalar(s, ring)?;
            for v in vars {
                out.insert(v.clone(), value.clone());
            }
        }
        if let Some(map) = args.get("values") {
            let map: BTreeMap<String, String> =
                serde_json::from_value(map.clone()).map_err(|_| Error::parse("values must map names to strings"))?;
            for (k, v) in map {
                out.insert(k, parse_scalar(&v, ring)?);
            }
        }
        Ok(out)
    }

    fn run(&self, step: &Step) -> Result<Value> {
        let a = &step.args;
        Ok(match step.op.as_str() {
            "matrix" => Value::Matrix(parse_scaled_matrix(a, &self.ring_arg(a)?)?),
            "set" => {
                let r = self.ring_arg(a)?;
                let members = arg(a, "members")?
                    .as_array()
                    .ok_or_else(|| Error::parse("members must be an array"))?
                    .iter()
                    .map(|m| parse_scaled_matrix(m, &r))
                    .collect::<Result<Vec<_>>>()?;
                let labels = match a.get("labels") {
                    Some(l) => Some(strings(l, "labels")?),
                    None => None,
                };
                Value::Set(IdempotentSet::new(members, labels)?)
            }
            "diagonal_set" => Value::Set(diagonal_set(&self.ring_arg(a)?, usize_arg(a, "n")?)?),
            "orthonormal_basis" => {
                let basis = parse_scaled_matrix(a, &self.ring_arg(a)?)?;
                Value::Set(from_orthonormal_basis(&basis, groups_arg(a)?.as_deref())?)
            }
            "orthogonal_basis" => {
                let basis = parse_scaled_matrix(a, &self.ring_arg(a)?)?;
                Value::Set(from_orthogonal_basis(&basis, groups_arg(a)?.as_deref())?)
            }
            "group_idempotents" => Value::Set(group_set(&parse_group(arg(a, "group")?)?, &self.ring_arg(a)?)?),
            "realify" => Value::Set(realify(&self.set(a, "set")?)?),
            "merge" => {
                let groups = groups_arg(a)?.ok_or_else(|| Error::parse("merge needs groups"))?;
                Value::Set(merge(&self.set(a, "set")?, &groups)?)
            }
            "tensor_sets" => Value::Set(tensor_sets(&self.set(a, "left")?, &self.set(a, "right")?)?),
            "matrix_rows" => Value::Set(from_matrix_rows(&self.matrix(a, "matrix")?)?),
            "conjugate_set" => Value::Set(crate::idempotents::conjugate_set(
                &self.set(a, "set")?,
                &self.matrix(a, "by")?,
            )?),
            "member" => {
                let s = self.set(a, "set")?;
                let i = usize_arg(a, "index")?;
                if i >= s.len() {
                    return Err(Error::parse(format!("member {i} of a {}-member set", s.len())));
                }
                Value::Matrix(s.member(i).clone())
            }
            "embed" => {
                let target = Ring::from_json(arg(a, "ring")?)?;
                let name = str_arg(a, "source")?;
                match self.lookup(name)? {
                    Value::Set(s) => Value::Set(s.embed(&target)?),
                    _ => Value::Matrix(self.matrix(a, "source")?.embed(&target)?),
                }
            }
            "factor_rank1" => Value::Matrix(factor_rank1(&self.matrix(a, "matrix")?)?),
            "combine" => {
                let s = self.set(a, "set")?;
                let coeffs = strings(arg(a, "coeffs")?, "coeffs")?;
                if coeffs.len() != s.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "{} coefficients for {} members",
                        coeffs.len(),
                        s.len()
                    )));
                }
                let mut acc = PolyMatrix::zeros(s.ring(), s.member(0).vars(), s.n(), s.n());
                for (c, m) in coeffs.iter().zip(s.members()) {
                    acc = acc.try_add(&m.scale_poly(&parse_poly(c, s.ring(), None)?)?)?;
                }
                Value::Matrix(acc)
            }
            "monomial_sum" => {
                let s = self.set(a, "set")?;
                Value::Matrix(monomial_sum(&s, &self.weights(a, "weights", s.ring())?)?)
            }
            "block_arrangement" => {
                let s = self.set(a, "set")?;
                let cells = grid(arg(a, "cells")?, "cells")?
                    .iter()
                    .map(|r| r.iter().map(|t| parse_poly(t, s.ring(), None)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let layout = arg(a, "layout")?;
                let plan = if layout.as_str() == Some("circulant") {
                    ArrangementPlan::circulant(cells)?
                } else if let Some(g) = layout.get("group") {
                    ArrangementPlan::from_group(&parse_group(g)?, cells)?
                } else {
                    let g: Vec<Vec<usize>> = serde_json::from_value(layout.clone())
                        .map_err(|_| Error::parse("layout must be \"circulant\", {\"group\": ...} or an index grid"))?;
                    ArrangementPlan::new(g, cells)?
                };
                Value::Matrix(block_arrangement(&s, &plan)?)
            }
            "tangle" => {
                let variant = match a.get("variant") {
                    Some(v) => v
                        .as_str()
                        .ok_or_else(|| Error::parse("variant must be a string"))?
                        .parse::<TangleVariant>()?,
                    None => TangleVariant::BASE,
                };
                Value::Matrix(tangle(&self.matrix(a, "a")?, &self.matrix(a, "b")?, variant)?)
            }
            "pseudo_from_rows" => {
                let p = self.matrix(a, "matrix")?;
                let w = self.weights(a, "weights", p.ring())?;
                Value::Matrix(pseudo_from_rows(&p, &w)?)
            }
            "monomial_clear" => Value::Cleared(Box::new(monomial_clear(&self.matrix(a, "matrix")?)?)),
            "belevitch" => {
                let r = self.ring_arg(a)?;
                let entries = strings(arg(a, "vector")?, "vector")?;
                let rows: Vec<Vec<String>> = entries.into_iter().map(|e| vec![e]).collect();
                let mut v = PolyMatrix::parse_grid(&r, None, &rows)?;
                if let Some(s) = a.get("scale").and_then(Json::as_str) {
                    v = v.scale(&parse_scalar(s, &r)?)?;
                }
                Value::Matrix(belevitch_block(&v, str_arg(a, "var")?)?)
            }
            "spectral_unitary" => {
                let r = self.ring_arg(a)?;
                let rows = parse_scaled_matrix(a, &r)?;
                let units = strings(arg(a, "units")?, "units")?
                    .iter()
                    .map(|u| parse_scalar(u, &r))
                    .collect::<Result<Vec<_>>>()?;
                Value::Matrix(spectral_unitary(&rows, &units)?)
            }
            "compose" => {
                let names = strings(arg(a, "parts")?, "parts")?;
                let parts = names
                    .iter()
                    .map(|n| self.matrix(&json!({ "m": n }), "m"))
                    .collect::<Result<Vec<_>>>()?;
                let mode = match a.get("mode").and_then(Json::as_str).unwrap_or("product") {
                    "product" => ComposeMode::Product,
                    "tensor" => ComposeMode::Tensor,
                    other => return Err(Error::parse(format!("unknown compose mode {other:?}"))),
                };
                Value::Matrix(compose_paraunitary(&parts, mode)?)
            }
            "substitute" => {
                let m = self.matrix(a, "matrix")?;
                let map: BTreeMap<String, String> = serde_json::from_value(arg(a, "values")?.clone())
                    .map_err(|_| Error::parse("values must map names to strings"))?;
                let values = map
                    .into_iter()
                    .map(|(k, v)| Ok((k, parse_poly(&v, m.ring(), None)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Value::Matrix(m.substitute(&values)?)
            }
            "specialize" => {
                let m = self.matrix(a, "matrix")?;
                let values = self.values(a, m.ring(), m.vars().names())?;
                Value::Hadamard(Box::new(specialize_hadamard(&m, &values)?))
            }
            "det" => Value::Poly(self.matrix(a, "matrix")?.determinant()?),
            "rank" => Value::Count(self.matrix(a, "matrix")?.rank()?),
            "ranks" => Value::Counts(self.set(a, "set")?.ranks()?),
            "verify" => Value::Report(self.verify(a)?),
            other => return Err(Error::parse(format!("unknown op {other:?}"))),
        })
    }

    fn verify(&self, a: &Json) -> Result<VerificationReport> {
        let name = str_arg(a, "target")?;
        let mode = str_arg(a, "mode")?;
        match mode {
            "paraunitary" => self.matrix(a, "target")?.is_paraunitary(),
            "pseudo" => {
                let m = self.matrix(a, "target")?;
                let gram = m.is_pseudo_paraunitary()?;
                let violations = match (&gram, a.get("gram").and_then(Json::as_str)) {
                    (None, _) => vec!["W W^* is not a unit monomial times I".to_string()],
                    (Some(g), Some(want)) if g != &parse_poly(want, m.ring(), None)? => {
                        vec![format!("W W^* = ({g}) I, expected ({want}) I")]
                    }
                    _ => Vec::new(),
                };
                Ok(VerificationReport::from_violations("pseudo-paraunitary", violations))
            }
            "cleared" => match self.lookup(name)? {
                Value::Cleared(c) => {
                    let want = str_arg(a, "gram")?;
                    let expected = parse_poly(want, c.matrix.ring(), None)?;
                    let target = PolyMatrix::identity(c.matrix.ring(), c.matrix.vars(), c.matrix.rows())
                        .scale_poly(&expected)?;
                    let product = c.matrix.try_mul(&c.cleared_adjoint)?;
                    Ok(VerificationReport::from_residual("cleared gram", product.try_sub(&target)?))
                }
                other => Err(Error::parse(format!("{name:?} is a {}, expected a cleared matrix", other.kind()))),
            },
            "idemset" => verify_set(&self.set(a, "target")?),
            "hadamard" => match self.lookup(name)? {
                Value::Hadamard(h) => {
                    let mut violations = Vec::new();
                    if !h.unitary {
                        violations.push("H H^* != I".to_string());
                    }
                    if !h.unit_entries {
                        violations.push("entries of H' are not all of unit modulus".to_string());
                    }
                    if !h.gram_is_n {
                        violations.push("H' H'^* != n I".to_string());
                    }
                    Ok(VerificationReport::from_violations("hadamard", violations))
                }
                other => Err(Error::parse(format!("{name:?} is a {}, expected a hadamard report", other.kind()))),
            },
            other => Err(Error::parse(format!("unknown verify mode {other:?}"))),
        }
    }
}
