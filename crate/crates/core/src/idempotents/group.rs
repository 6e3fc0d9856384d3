//! Small finite groups, their hardcoded character tables, and group-ring elements.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, VarSet};
use crate::polymatrix::PolyMatrix;
use crate::scalars::{format_terms, incompatible, Ring, Scalar, TermText};

/// Groups with a built-in character table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupFamily {
    Cyclic(usize),
    /// C_2^k.
    ElementaryAbelian2(u32),
    /// Dihedral group of order 2n, stored by n.
    Dihedral(usize),
    Symmetric3,
    Custom,
}

/// Multiplication table over a fixed listing; index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    family: GroupFamily,
    elements: Vec<String>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

const ASSOCIATIVITY_LIMIT: usize = 64;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGroup(msg.into())
}

impl GroupTable {
    /// Validates a multiplication table whose element 0 is the identity.
    pub fn from_table(elements: Vec<String>, mul: Vec<Vec<usize>>) -> Result<GroupTable> {
        Self::build(GroupFamily::Custom, elements, mul)
    }

    fn build(family: GroupFamily, elements: Vec<String>, mul: Vec<Vec<usize>>) -> Result<GroupTable> {
        let n = elements.len();
        if n == 0 {
            return Err(invalid("empty group"));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(invalid("multiplication table has the wrong shape"));
        }
        for i in 0..n {
            if mul[0][i] != i || mul[i][0] != i {
                return Err(invalid("element 0 is not the identity"));
            }
        }
        let mut inv = Vec::with_capacity(n);
        for i in 0..n {
            let j = (0..n)
                .find(|&j| mul[i][j] == 0)
                .ok_or_else(|| invalid(format!("{} has no inverse", elements[i])))?;
            if mul[j][i] != 0 {
                return Err(invalid(format!("{} has no two-sided inverse", elements[i])));
            }
            inv.push(j);
        }
        if n <= ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                            return Err(invalid("multiplication is not associative"));
                        }
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|h| mul[mul[inv[h]][g]][h]).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }
        Ok(GroupTable {
            family,
            elements,
            mul,
            inv,
            classes,
        })
    }

    /// Listing 1, a, a^2, ..., a^(n-1).
    pub fn cyclic(n: usize) -> Result<GroupTable> {
        if n == 0 {
            return Err(invalid("cyclic group of order 0"));
        }
        let elements = (0..n)
            .map(|m| match m {
                0 => "1".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{m}"),
            })
            .collect();
        let mul = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::build(GroupFamily::Cyclic(n), elements, mul)
    }

    /// C_2^k with element index read as a bit mask over generators a, b, c, ...
    pub fn elementary_abelian_2(k: u32) -> Result<GroupTable> {
        if !(1..=6).contains(&k) {
            return Err(invalid("C_2^k needs 1 <= k <= 6"));
        }
        let n = 1usize << k;
        let elements = (0..n)
            .map(|i| {
                if i == 0 {
                    "1".to_string()
                } else {
                    (0..k).filter(|b| i >> b & 1 == 1).map(|b| (b'a' + b as u8) as char).collect()
                }
            })
            .collect();
        let mul = (0..n).map(|i| (0..n).map(|j| i ^ j).collect()).collect();
        Self::build(GroupFamily::ElementaryAbelian2(k), elements, mul)
    }

    /// Dihedral group of the given order 2n: listing r^0..r^(n-1), s, s r, ..., s r^(n-1).
    pub fn dihedral(order: usize) -> Result<GroupTable> {
        if order < 4 || order % 2 == 1 {
            return Err(invalid(format!("dihedral order must be even and at least 4, got {order}")));
        }
        let n = order / 2;
        let name = |k: usize, reflect: bool| {
            let rot = match k {
                0 => String::new(),
                1 => "r".to_string(),
                _ => format!("r^{k}"),
            };
            match (reflect, rot.is_empty()) {
                (false, true) => "1".to_string(),
                (false, false) => rot,
                (true, _) => format!("s{rot}"),
            }
        };
        let elements = (0..order).map(|i| name(i % n, i >= n)).collect();
        // r s = s r^-1
        let mul = (0..order)
            .map(|i| {
                (0..order)
                    .map(|j| {
                        let (a, sa) = (i % n, i >= n);
                        let (b, sb) = (j % n, j >= n);
                        match (sa, sb) {
                            (false, false) => (a + b) % n,
                            (false, true) => n + (b + n - a) % n,
                            (true, false) => n + (a + b) % n,
                            (true, true) => (b + n - a) % n,
                        }
                    })
                    .collect()
            })
            .collect();
        Self::build(GroupFamily::Dihedral(n), elements, mul)
    }

    /// S_3 listed as 1, (12), (13), (23), (123), (132); products compose right to left.
    pub fn symmetric_3() -> Result<GroupTable> {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let names = ["1", "(12)", "(13)", "(23)", "(123)", "(132)"];
        let index: HashMap<[usize; 3], usize> = perms.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mul = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index[&[s[t[0]], s[t[1]], s[t[2]]]])
                    .collect()
            })
            .collect();
        Self::build(GroupFamily::Symmetric3, names.iter().map(|s| s.to_string()).collect(), mul)
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i][j]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    /// Index of g_i^-1 g_j, the element at position (i, j) of the G-matrix.
    pub fn g_matrix_index(&self, i: usize, j: usize) -> usize {
        self.mul[self.inv[i]][j]
    }

    pub fn to_json(&self) -> Value {
        json!({"elements": self.elements, "mul": self.mul})
    }

    pub fn from_json(v: &Value) -> Result<GroupTable> {
        let elements: Vec<String> =
            serde_json::from_value(v.get("elements").cloned().ok_or_else(|| Error::parse("group without elements"))?)?;
        let mul: Vec<Vec<usize>> =
            serde_json::from_value(v.get("mul").cloned().ok_or_else(|| Error::parse("group without mul"))?)?;
        Self::from_table(elements, mul)
    }
}

/// Irreducible characters with values in Q(zeta_m), indexed by element.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    field: Ring,
    labels: Vec<String>,
    values: Vec<Vec<Scalar>>,
}

impl CharacterTable {
    /// The hardcoded table for a built-in family.
    pub fn for_group(table: &GroupTable) -> Result<CharacterTable> {
        match *table.family() {
            GroupFamily::Cyclic(n) => Self::cyclic(n),
            GroupFamily::ElementaryAbelian2(k) => Self::elementary_abelian_2(k),
            GroupFamily::Dihedral(n) => Self::dihedral(n),
            GroupFamily::Symmetric3 => Self::symmetric_3(),
            GroupFamily::Custom => Err(invalid("no built-in character table for a custom group")),
        }
    }

    /// chi_k(a^m) = omega^(-km), so the k-th idempotent has coefficients omega^(km) / n.
    fn cyclic(n: usize) -> Result<CharacterTable> {
        let field = Ring::cyclotomic(n as u32)?;
        let values = (0..n)
            .map(|k| (0..n).map(|m| field.zeta_pow(-((k * m) as i64))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(CharacterTable {
            field,
            labels: (0..n).map(|k| format!("e{k}")).collect(),
            values,
        })
    }

    /// Sign characters in Gray-code order of their masks.
    fn elementary_abelian_2(k: u32) -> Result<CharacterTable> {
        let field = Ring::rational();
        let n = 1usize << k;
        let values = (0..n)
            .map(|j| {
                let mask = j ^ (j >> 1);
                (0..n)
                    .map(|g| field.from_int(if (mask & g).count_ones() % 2 == 0 { 1 } else { -1 }))
                    .collect()
            })
            .collect();
        Ok(CharacterTable {
            field,
            labels: (1..=n).map(|j| format!("f{j}")).collect(),
            values,
        })
    }

    /// Linear characters first, then the 2-dimensional ones.
    fn dihedral(n: usize) -> Result<CharacterTable> {
        let field = Ring::cyclotomic(n as u32)?;
        let order = 2 * n;
        let mut values = Vec::new();
        let signs: &[(i64, i64)] = if n.is_multiple_of(2) {
            &[(1, 1), (1, -1), (-1, 1), (-1, -1)]
        } else {
            &[(1, 1), (1, -1)]
        };
        for &(rot, refl) in signs {
            values.push(
                (0..order)
                    .map(|i| {
                        let r = if rot == -1 && (i % n) % 2 == 1 { -1 } else { 1 };
                        let s = if i >= n { refl } else { 1 };
                        field.from_int(r * s)
                    })
                    .collect(),
            );
        }
        for j in 1..=(n - 1) / 2 {
            let mut row = Vec::with_capacity(order);
            for i in 0..order {
                row.push(if i >= n {
                    field.zero()
                } else {
                    let e = (j * i) as i64;
                    field.zeta_pow(e)?.try_add(&field.zeta_pow(-e)?)?
                });
            }
            values.push(row);
        }
        Ok(CharacterTable {
            field,
            labels: (1..=values.len()).map(|j| format!("e{j}")).collect(),
            values,
        })
    }

    fn symmetric_3() -> Result<CharacterTable> {
        let q = Ring::rational();
        let row = |v: [i64; 6]| v.iter().map(|&x| q.from_int(x)).collect::<Vec<_>>();
        Ok(CharacterTable {
            field: q.clone(),
            labels: vec!["e1".into(), "e2".into(), "e3".into()],
            values: vec![
                row([1, 1, 1, 1, 1, 1]),
                row([1, -1, -1, -1, 1, 1]),
                row([2, 0, 0, 0, -1, -1]),
            ],
        })
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, chi: usize, g: usize) -> &Scalar {
        &self.values[chi][g]
    }
}

/// Image of a character value in the working ring.
pub(crate) fn into_ring(value: &Scalar, ring: &Ring) -> Result<Scalar> {
    match ring {
        Ring::PrimeField(p) => value.reduce_mod_prime(*p),
        _ => value.embed(ring),
    }
}

/// `sum_g coeffs[g] * g` in the group ring over `ring`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    table: Arc<GroupTable>,
    ring: Ring,
    coeffs: Vec<Scalar>,
}

impl GroupRingElement {
    pub fn new(table: Arc<GroupTable>, ring: &Ring, coeffs: Vec<Scalar>) -> Result<GroupRingElement> {
        if coeffs.len() != table.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                table.order()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.in_ring(ring)) {
            return Err(incompatible(&c.ring(), ring));
        }
        Ok(GroupRingElement {
            table,
            ring: ring.clone(),
            coeffs,
        })
    }

    pub fn zero(table: Arc<GroupTable>, ring: &Ring) -> GroupRingElement {
        let coeffs = vec![ring.zero(); table.order()];
        GroupRingElement {
            table,
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn one(table: Arc<GroupTable>, ring: &Ring) -> GroupRingElement {
        let mut e = Self::zero(table, ring);
        e.coeffs[0] = ring.one();
        e
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    fn check(&self, other: &GroupRingElement) -> Result<()> {
        if self.table != other.table {
            return Err(invalid("elements of different group rings"));
        }
        if self.ring != other.ring {
            return Err(incompatible(&self.ring, &other.ring));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GroupRingElement) -> Result<GroupRingElement> {
        self.check(other)?;
        Ok(GroupRingElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    pub fn try_mul(&self, other: &GroupRingElement) -> Result<GroupRingElement> {
        self.check(other)?;
        let n = self.table.order();
        let mut coeffs = vec![self.ring.zero(); n];
        for (g, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (h, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let k = self.table.mul(g, h);
                    coeffs[k] = &coeffs[k] + &(a * b);
                }
            }
        }
        Ok(GroupRingElement { coeffs, ..self.clone() })
    }

    pub fn scale(&self, k: &Scalar) -> Result<GroupRingElement> {
        Ok(GroupRingElement {
            coeffs: self.coeffs.iter().map(|c| c.try_mul(k)).collect::<Result<_>>()?,
            ..self.clone()
        })
    }

    /// `sum_g coeffs[g] * g^-1`.
    pub fn transpose(&self) -> GroupRingElement {
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len()];
        for (g, c) in self.coeffs.iter().enumerate() {
            coeffs[self.table.inv(g)] = c.clone();
        }
        GroupRingElement { coeffs, ..self.clone() }
    }

    /// `sum_g conj(coeffs[g]) * g^-1`.
    pub fn star(&self) -> GroupRingElement {
        let t = self.transpose();
        GroupRingElement {
            coeffs: t.coeffs.iter().map(Scalar::conj).collect(),
            ..t
        }
    }

    /// Coefficientwise conjugation without inverting group elements.
    pub fn conj_coeffs(&self) -> GroupRingElement {
        GroupRingElement {
            coeffs: self.coeffs.iter().map(Scalar::conj).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// The G-matrix: entry (i, j) is the coefficient of g_i^-1 g_j.
    pub fn embed(&self) -> PolyMatrix {
        let n = self.table.order();
        let empty = VarSet::empty();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(LaurentPoly::constant(self.coeffs[self.table.g_matrix_index(i, j)].clone(), &empty));
            }
        }
        PolyMatrix::new(&self.ring, n, n, entries).expect("entries share one ring")
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| {
                let (negative, magnitude) = c.term_text();
                TermText {
                    negative,
                    magnitude,
                    monomial: if g == 0 { String::new() } else { self.table.elements()[g].clone() },
                }
            })
            .collect();
        f.write_str(&format_terms(terms))
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ring)
    }
}

/// Primitive central idempotents `e(chi) = chi(1)/|G| * sum_g chi(g^-1) g`.
pub fn group_ring_idempotents(
    table: &Arc<GroupTable>,
    characters: &CharacterTable,
    ring: &Ring,
) -> Result<Vec<GroupRingElement>> {
    let order = table.order() as u64;
    let p = ring.characteristic();
    if p != 0 && order.is_multiple_of(p) {
        return Err(Error::BadCharacteristic {
            characteristic: p,
            order: table.order(),
        });
    }
    let inv_order = ring.from_int(order as i64).inv()?;
    let mut out = Vec::with_capacity(characters.len());
    for chi in 0..characters.len() {
        let degree = into_ring(characters.value(chi, 0), ring)?;
        let factor = &degree * &inv_order;
        let coeffs = (0..table.order())
            .map(|g| Ok(&factor * &into_ring(characters.value(chi, table.inv(g)), ring)?))
            .collect::<Result<Vec<_>>>()?;
        let e = GroupRingElement::new(table.clone(), ring, coeffs)?;
        if e.star() != e {
            return Err(Error::AsymmetricIdempotent { index: chi });
        }
        out.push(e);
    }
    Ok(out)
}
