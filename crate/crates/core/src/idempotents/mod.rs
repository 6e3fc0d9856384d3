//! Complete symmetric orthogonal sets of idempotents and their constructions.

mod group;

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, VarSet};
use crate::polymatrix::{PolyMatrix, VerificationReport};
use crate::scalars::{incompatible, Ring, Scalar};

pub use group::{group_ring_idempotents, CharacterTable, GroupFamily, GroupRingElement, GroupTable};

/// An ordered list of n x n matrices meant to be a complete symmetric
/// orthogonal set of idempotents. Construction does not verify; see [`verify_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentSet {
    ring: Ring,
    n: usize,
    members: Vec<PolyMatrix>,
    labels: Vec<String>,
}

fn default_labels(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("E{i}")).collect()
}

impl IdempotentSet {
    pub fn new(members: Vec<PolyMatrix>, labels: Option<Vec<String>>) -> Result<IdempotentSet> {
        let first = members
            .first()
            .ok_or_else(|| Error::NotCompleteSet("a set needs at least one member".into()))?;
        let ring = first.ring().clone();
        let n = first.rows();
        for m in &members {
            if m.ring() != &ring {
                return Err(incompatible(m.ring(), &ring));
            }
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "member of size {}x{} in a set of {n}x{n} matrices",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let labels = labels.unwrap_or_else(|| default_labels(members.len()));
        if labels.len() != members.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} members",
                labels.len(),
                members.len()
            )));
        }
        Ok(IdempotentSet {
            ring,
            n,
            members,
            labels,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[PolyMatrix] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &PolyMatrix {
        &self.members[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Ranks of scalar members.
    pub fn ranks(&self) -> Result<Vec<usize>> {
        self.members.iter().map(PolyMatrix::rank).collect()
    }

    /// Image of every member in another ring.
    pub fn embed(&self, target: &Ring) -> Result<IdempotentSet> {
        let members = self.members.iter().map(|m| m.embed(target)).collect::<Result<Vec<_>>>()?;
        Self::new(members, Some(self.labels.clone()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.to_json(),
            "n": self.n,
            "members": self.members.iter().map(PolyMatrix::to_json).collect::<Vec<_>>(),
            "labels": self.labels,
        })
    }

    pub fn from_json(v: &Value) -> Result<IdempotentSet> {
        let members = v
            .get("members")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("set without members"))?
            .iter()
            .map(PolyMatrix::from_json)
            .collect::<Result<Vec<_>>>()?;
        let labels: Option<Vec<String>> = match v.get("labels") {
            Some(l) => Some(serde_json::from_value(l.clone())?),
            None => None,
        };
        let set = Self::new(members, labels)?;
        if let Some(ring) = v.get("ring") {
            if Ring::from_json(ring)? != set.ring {
                return Err(Error::parse("set ring does not match its members"));
            }
        }
        if let Some(n) = v.get("n").and_then(Value::as_u64) {
            if n as usize != set.n {
                return Err(Error::parse("set size does not match its members"));
            }
        }
        Ok(set)
    }
}

/// Checks idempotence, orthogonality, completeness, symmetry and that no member is zero.
pub fn verify_set(set: &IdempotentSet) -> Result<VerificationReport> {
    let mut violations = Vec::new();
    let members = &set.members;
    for (i, m) in members.iter().enumerate() {
        if m.is_zero() {
            violations.push(format!("member {i} is zero"));
        }
        if &m.try_mul(m)? != m {
            violations.push(format!("member {i} is not idempotent"));
        }
        if &m.adjoint() != m {
            violations.push(format!("member {i} is not symmetric"));
        }
    }
    for i in 0..members.len() {
        for j in 0..members.len() {
            if i != j && !members[i].try_mul(&members[j])?.is_zero() {
                violations.push(format!("members {i} and {j} are not orthogonal"));
            }
        }
    }
    let mut sum = members[0].clone();
    for m in &members[1..] {
        sum = sum.try_add(m)?;
    }
    if !sum.is_identity() {
        violations.push("members do not sum to the identity".into());
    }
    Ok(VerificationReport::from_violations("idempotent set", violations))
}

/// Runs [`verify_set`] on a constructor's own output; a failure is a bug.
fn checked(set: IdempotentSet) -> Result<IdempotentSet> {
    let report = verify_set(&set)?;
    if report.passed {
        Ok(set)
    } else {
        Err(Error::Internal(format!("constructed set failed verification: {report}")))
    }
}

/// `v^* v` for a row vector `v`: entry (a, b) is conj(v_a) * v_b.
pub fn outer(row: &PolyMatrix) -> Result<PolyMatrix> {
    row.adjoint().try_mul(row)
}

/// `v * w^*` for row vectors.
fn inner(v: &PolyMatrix, w: &PolyMatrix) -> Result<LaurentPoly> {
    Ok(v.try_mul(&w.adjoint())?.get(0, 0).clone())
}

fn singleton_groups(k: usize) -> Vec<Vec<usize>> {
    (0..k).map(|i| vec![i]).collect()
}

fn check_partition(groups: &[Vec<usize>], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    for g in groups {
        if g.is_empty() {
            return Err(Error::InvalidPartition("empty group".into()));
        }
        for &i in g {
            if i >= k {
                return Err(Error::InvalidPartition(format!("index {i} out of range for {k} members")));
            }
            if seen[i] {
                return Err(Error::InvalidPartition(format!("index {i} appears twice")));
            }
            seen[i] = true;
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("index {i} is not covered")));
    }
    Ok(())
}

fn group_sums(parts: &[PolyMatrix], groups: &[Vec<usize>]) -> Result<Vec<PolyMatrix>> {
    groups
        .iter()
        .map(|g| {
            let mut acc = parts[g[0]].clone();
            for &i in &g[1..] {
                acc = acc.try_add(&parts[i])?;
            }
            Ok(acc)
        })
        .collect()
}

/// Projections `sum_{j in group} v_j^* v_j` onto spans of orthonormal rows.
pub fn from_orthonormal_basis(basis: &PolyMatrix, groups: Option<&[Vec<usize>]>) -> Result<IdempotentSet> {
    let k = basis.rows();
    let rows: Vec<PolyMatrix> = (0..k).map(|i| basis.row_matrix(i)).collect();
    for i in 0..k {
        for j in 0..k {
            let ip = inner(&rows[i], &rows[j])?;
            let ok = if i == j { ip.is_one() } else { ip.is_zero() };
            if !ok {
                return Err(Error::NotOrthonormal { i, j });
            }
        }
    }
    let parts = rows.iter().map(outer).collect::<Result<Vec<_>>>()?;
    let groups = groups.map(<[_]>::to_vec).unwrap_or_else(|| singleton_groups(k));
    check_partition(&groups, k)?;
    checked(IdempotentSet::new(group_sums(&parts, &groups)?, None)?)
}

/// Projections `t_i^-1 v_i^* v_i` with `t_i = v_i v_i^*`; no square roots needed.
pub fn from_orthogonal_basis(basis: &PolyMatrix, groups: Option<&[Vec<usize>]>) -> Result<IdempotentSet> {
    let k = basis.rows();
    if !basis.is_scalar() {
        return Err(Error::NotScalar);
    }
    let rows: Vec<PolyMatrix> = (0..k).map(|i| basis.row_matrix(i)).collect();
    let mut norms = Vec::with_capacity(k);
    for i in 0..k {
        for j in 0..k {
            let ip = inner(&rows[i], &rows[j])?;
            if i == j {
                let t = ip.constant_value().ok_or(Error::NotScalar)?;
                if t.is_zero() {
                    return Err(Error::IsotropicVector { index: i });
                }
                norms.push(t);
            } else if !ip.is_zero() {
                return Err(Error::NotOrthogonal { i, j });
            }
        }
    }
    let parts = rows
        .iter()
        .zip(&norms)
        .map(|(r, t)| outer(r)?.scale(&t.inv()?))
        .collect::<Result<Vec<_>>>()?;
    let groups = groups.map(<[_]>::to_vec).unwrap_or_else(|| singleton_groups(k));
    check_partition(&groups, k)?;
    checked(IdempotentSet::new(group_sums(&parts, &groups)?, None)?)
}

/// Rank-one projections `v_i^* v_i` on the rows of a paraunitary matrix.
pub fn from_matrix_rows(u: &PolyMatrix) -> Result<IdempotentSet> {
    if !u.is_paraunitary()?.passed {
        return Err(Error::NotParaunitary);
    }
    let members = (0..u.rows()).map(|i| outer(&u.row_matrix(i))).collect::<Result<Vec<_>>>()?;
    checked(IdempotentSet::new(members, None)?)
}

/// The diagonal units E_11, ..., E_nn.
pub fn diagonal_set(ring: &Ring, n: usize) -> Result<IdempotentSet> {
    if n == 0 {
        return Err(Error::DimensionMismatch("diagonal set of size 0".into()));
    }
    let empty = VarSet::empty();
    let members = (0..n)
        .map(|i| {
            let diag: Vec<LaurentPoly> = (0..n)
                .map(|j| if i == j { LaurentPoly::one(ring, &empty) } else { LaurentPoly::zero(ring, &empty) })
                .collect();
            PolyMatrix::diagonal(ring, &diag)
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = (1..=n).map(|i| format!("E{i}{i}")).collect();
    checked(IdempotentSet::new(members, Some(labels))?)
}

/// The embedded primitive central idempotents of a built-in group.
pub fn group_set(table: &GroupTable, ring: &Ring) -> Result<IdempotentSet> {
    let table = Arc::new(table.clone());
    let chars = CharacterTable::for_group(&table)?;
    let elements = group_ring_idempotents(&table, &chars, ring)?;
    let members = elements.iter().map(GroupRingElement::embed).collect();
    checked(IdempotentSet::new(members, Some(chars.labels().to_vec()))?)
}

/// Pairs each element with its coefficientwise conjugate and sums the pairs.
/// Returns the index groups, in order of first appearance.
fn conjugate_pairs<T: PartialEq>(items: &[T], conj: impl Fn(&T) -> T) -> Result<Vec<Vec<usize>>> {
    let k = items.len();
    let mut used = vec![false; k];
    let mut groups = Vec::new();
    for i in 0..k {
        if used[i] {
            continue;
        }
        let c = conj(&items[i]);
        if c == items[i] {
            used[i] = true;
            groups.push(vec![i]);
            continue;
        }
        let j = (i + 1..k)
            .find(|&j| !used[j] && items[j] == c)
            .ok_or_else(|| Error::NotCompleteSet(format!("member {i} has no conjugate partner")))?;
        used[i] = true;
        used[j] = true;
        groups.push(vec![i, j]);
    }
    Ok(groups)
}

fn entrywise_conj(m: &PolyMatrix) -> PolyMatrix {
    let entries = m
        .entries()
        .iter()
        .map(|e| e.map_coeffs(m.ring(), |c| Ok(c.conj())).expect("conjugation cannot fail"))
        .collect();
    PolyMatrix::new(m.ring(), m.rows(), m.cols(), entries).expect("same shape")
}

/// Merges conjugate pairs of members so all coefficients are fixed by conj.
pub fn realify(set: &IdempotentSet) -> Result<IdempotentSet> {
    let groups = conjugate_pairs(&set.members, entrywise_conj)?;
    let members = group_sums(&set.members, &groups)?;
    let labels = groups
        .iter()
        .map(|g| g.iter().map(|&i| set.labels[i].as_str()).collect::<Vec<_>>().join("+"))
        .collect();
    checked(IdempotentSet::new(members, Some(labels))?)
}

/// Group-ring form of [`realify`].
pub fn realify_elements(elements: &[GroupRingElement]) -> Result<Vec<GroupRingElement>> {
    let groups = conjugate_pairs(elements, GroupRingElement::conj_coeffs)?;
    groups
        .iter()
        .map(|g| {
            let mut acc = elements[g[0]].clone();
            for &i in &g[1..] {
                acc = acc.try_add(&elements[i])?;
            }
            Ok(acc)
        })
        .collect()
}

/// Sums members within each group of a partition of the member indices.
pub fn merge(set: &IdempotentSet, groups: &[Vec<usize>]) -> Result<IdempotentSet> {
    check_partition(groups, set.len())?;
    let members = group_sums(&set.members, groups)?;
    let labels = groups
        .iter()
        .map(|g| g.iter().map(|&i| set.labels[i].as_str()).collect::<Vec<_>>().join("+"))
        .collect();
    checked(IdempotentSet::new(members, Some(labels))?)
}

/// All products `S_i (x) T_j` in lexicographic order of (i, j).
pub fn tensor_sets(s: &IdempotentSet, t: &IdempotentSet) -> Result<IdempotentSet> {
    if s.ring != t.ring {
        return Err(incompatible(&s.ring, &t.ring));
    }
    let mut members = Vec::with_capacity(s.len() * t.len());
    let mut labels = Vec::with_capacity(s.len() * t.len());
    for (a, la) in s.members.iter().zip(&s.labels) {
        for (b, lb) in t.members.iter().zip(&t.labels) {
            members.push(a.tensor(b)?);
            labels.push(format!("{la}x{lb}"));
        }
    }
    checked(IdempotentSet::new(members, Some(labels))?)
}

/// Members `P^* E_i P` for a paraunitary `P`.
pub fn conjugate_set(set: &IdempotentSet, p: &PolyMatrix) -> Result<IdempotentSet> {
    if p.rows() != set.n || !p.is_paraunitary()?.passed {
        return Err(Error::NotParaunitary);
    }
    let pa = p.adjoint();
    let members = set
        .members
        .iter()
        .map(|e| pa.try_mul(e)?.try_mul(p))
        .collect::<Result<Vec<_>>>()?;
    checked(IdempotentSet::new(members, Some(set.labels.clone()))?)
}

/// Column vector `v` with `v^* v = 1` and `v v^* = p`, for a symmetric rank-one
/// idempotent `p`. The anchor is the first row with a nonzero diagonal entry.
pub fn factor_rank1(p: &PolyMatrix) -> Result<PolyMatrix> {
    let n = p.rows();
    if !p.is_square() {
        return Err(Error::NotSquare { rows: n, cols: p.cols() });
    }
    let values = p.scalar_entries()?;
    if &p.try_mul(p)? != p || &p.adjoint() != p || p.rank()? != 1 {
        return Err(Error::NotRankOneIdempotent);
    }
    let ring = p.ring();
    let k = (0..n).find(|&k| !values[k * n + k].is_zero()).ok_or(Error::NotRankOneIdempotent)?;
    let anchor = &values[k * n + k];
    let root = anchor.sqrt()?;
    let root_inv = root.inv()?;
    let mut v: Vec<Scalar> = (0..n).map(|j| &values[k * n + j].conj() * &root_inv).collect();
    let lead = v.iter().find(|c| !c.is_zero()).expect("rank one").clone();
    if prefer_negated(&lead) {
        v = v.iter().map(|c| -c).collect();
    }
    let col = PolyMatrix::from_scalars(ring, n, 1, v)?;
    if &col.try_mul(&col.adjoint())? != p || !col.adjoint().try_mul(&col)?.is_identity() {
        return Err(Error::NoSquareRoot {
            value: anchor.to_string(),
            ring: ring.to_string(),
        });
    }
    Ok(col)
}

/// Sign rule: rational leading coordinates positive, prime-field ones the smaller
/// residue, otherwise the lexicographically smaller canonical text.
fn prefer_negated(lead: &Scalar) -> bool {
    if let Some(q) = lead.as_rational() {
        return q.is_negative();
    }
    if let Some(r) = lead.residue() {
        let p = lead.ring().characteristic();
        return p - r < r;
    }
    (-lead).to_string() < lead.to_string()
}
