//! Sparse multivariate Laurent polynomials over the exact scalar rings.

mod parse;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{format_terms, incompatible, Ring, Scalar, TermText};

pub use parse::parse_poly;

/// Ordered set of variable names. Names are kept sorted so that exponent
/// positions, unions and printed text do not depend on construction order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<[String]>);

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "E"
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<VarSet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = BTreeSet::new();
        for n in names {
            let n = n.into();
            if !valid_name(&n) {
                return Err(Error::parse(format!("invalid variable name '{n}'")));
            }
            if !set.insert(n.clone()) {
                return Err(Error::parse(format!("duplicate variable '{n}'")));
            }
        }
        Ok(VarSet(set.into_iter().collect::<Vec<_>>().into()))
    }

    pub fn empty() -> VarSet {
        VarSet(Arc::from(Vec::<String>::new()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        if self == other || other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let set: BTreeSet<&String> = self.0.iter().chain(other.0.iter()).collect();
        VarSet(set.into_iter().cloned().collect::<Vec<_>>().into())
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.iter().all(|n| other.contains(n))
    }

    pub fn without(&self, names: &BTreeSet<String>) -> VarSet {
        VarSet(self.0.iter().filter(|n| !names.contains(*n)).cloned().collect::<Vec<_>>().into())
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector aligned with a [`VarSet`].
pub type Exponents = Vec<i32>;

/// A Laurent polynomial: nonzero coefficients keyed by exponent vectors.
#[derive(Clone)]
pub struct LaurentPoly {
    ring: Ring,
    vars: VarSet,
    terms: BTreeMap<Exponents, Scalar>,
}

pub(crate) fn add_term(terms: &mut BTreeMap<Exponents, Scalar>, exps: Exponents, coeff: Scalar) {
    if coeff.is_zero() {
        return;
    }
    match terms.entry(exps) {
        Entry::Vacant(v) => {
            v.insert(coeff);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &coeff;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn add_exps(a: &[i32], b: &[i32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl LaurentPoly {
    pub fn zero(ring: &Ring, vars: &VarSet) -> LaurentPoly {
        LaurentPoly {
            ring: ring.clone(),
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring, vars: &VarSet) -> LaurentPoly {
        Self::constant(ring.one(), vars)
    }

    pub fn constant(c: Scalar, vars: &VarSet) -> LaurentPoly {
        let ring = c.ring();
        let mut terms = BTreeMap::new();
        add_term(&mut terms, vec![0; vars.len()], c);
        LaurentPoly {
            ring,
            vars: vars.clone(),
            terms,
        }
    }

    /// A single variable over its own one-element variable set.
    pub fn var(ring: &Ring, name: &str) -> Result<LaurentPoly> {
        let vars = VarSet::new([name])?;
        Self::monomial(ring.one(), vec![1], &vars)
    }

    pub fn monomial(coeff: Scalar, exps: Exponents, vars: &VarSet) -> Result<LaurentPoly> {
        if exps.len() != vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents for {} variables",
                exps.len(),
                vars.len()
            )));
        }
        let ring = coeff.ring();
        let mut terms = BTreeMap::new();
        add_term(&mut terms, exps, coeff);
        Ok(LaurentPoly {
            ring,
            vars: vars.clone(),
            terms,
        })
    }

    /// `coeff * prod name^exp` over the named variables.
    pub fn monomial_named(coeff: Scalar, powers: &[(&str, i32)]) -> Result<LaurentPoly> {
        let vars = VarSet::new(powers.iter().filter(|(_, e)| *e != 0).map(|(n, _)| *n))?;
        let mut exps = vec![0; vars.len()];
        for (n, e) in powers {
            if *e != 0 {
                exps[vars.index_of(n).expect("just inserted")] += e;
            }
        }
        Self::monomial(coeff, exps, &vars)
    }

    pub fn from_terms(ring: &Ring, vars: &VarSet, terms: impl IntoIterator<Item = (Exponents, Scalar)>) -> Result<LaurentPoly> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::DimensionMismatch("exponent length".into()));
            }
            if !c.in_ring(ring) {
                return Err(incompatible(&c.ring(), ring));
            }
            add_term(&mut map, e, c);
        }
        Ok(LaurentPoly {
            ring: ring.clone(),
            vars: vars.clone(),
            terms: map,
        })
    }

    pub(crate) fn from_parts(ring: &Ring, vars: &VarSet, terms: BTreeMap<Exponents, Scalar>) -> LaurentPoly {
        LaurentPoly {
            ring: ring.clone(),
            vars: vars.clone(),
            terms,
        }
    }

    /// Adds `a * b` into `acc`; both factors must share `acc`'s variable set.
    pub(crate) fn mul_add_into(acc: &mut BTreeMap<Exponents, Scalar>, a: &LaurentPoly, b: &LaurentPoly) {
        debug_assert!(a.vars == b.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                add_term(acc, add_exps(ea, eb), ca * cb);
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(|| self.ring.zero()))
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Variables that actually occur with a nonzero exponent.
    pub fn used_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                if x != 0 {
                    out.insert(self.vars.names()[i].clone());
                }
            }
        }
        out
    }

    /// Re-expresses the polynomial over a variable set containing its own.
    pub fn with_vars(&self, vars: &VarSet) -> Result<LaurentPoly> {
        if &self.vars == vars {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match vars.index_of(name) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] != 0) {
                        return Err(Error::DimensionMismatch(format!("variable {name} is not in the target set")));
                    }
                    map.push(None);
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0; vars.len()];
                for (i, j) in map.iter().enumerate() {
                    if let Some(j) = j {
                        ne[*j] = e[i];
                    }
                }
                (ne, c.clone())
            })
            .collect();
        Ok(LaurentPoly {
            ring: self.ring.clone(),
            vars: vars.clone(),
            terms,
        })
    }

    fn aligned(&self, other: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
        if self.ring != other.ring {
            return Err(incompatible(&self.ring, &other.ring));
        }
        if self.vars == other.vars {
            return Ok((self.clone(), other.clone()));
        }
        let u = self.vars.union(&other.vars);
        Ok((self.with_vars(&u)?, other.with_vars(&u)?))
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        if self.ring == other.ring && self.vars == other.vars {
            let mut out = self.clone();
            for (e, c) in &other.terms {
                add_term(&mut out.terms, e.clone(), c.clone());
            }
            return Ok(out);
        }
        let (a, b) = self.aligned(other)?;
        a.try_add(&b)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        if self.ring == other.ring && self.vars == other.vars {
            let mut terms = BTreeMap::new();
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    add_term(&mut terms, add_exps(ea, eb), ca * cb);
                }
            }
            return Ok(LaurentPoly {
                ring: self.ring.clone(),
                vars: self.vars.clone(),
                terms,
            });
        }
        let (a, b) = self.aligned(other)?;
        a.try_mul(&b)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Result<LaurentPoly> {
        if !k.in_ring(&self.ring) {
            return Err(incompatible(&k.ring(), &self.ring));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            add_term(&mut terms, e.clone(), c * k);
        }
        Ok(LaurentPoly {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn pow(&self, n: u32) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::one(&self.ring, &self.vars);
        for _ in 0..n {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Conjugates every coefficient and negates every exponent.
    pub fn star(&self) -> LaurentPoly {
        LaurentPoly {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.conj()))
                .collect(),
        }
    }

    /// Multiplies by the monomial with exponents `shift`.
    pub fn shift(&self, shift: &[i32]) -> LaurentPoly {
        LaurentPoly {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (add_exps(e, shift), c.clone())).collect(),
        }
    }

    /// Componentwise minimum exponent over all terms (zeros when empty).
    pub fn min_exponents(&self) -> Exponents {
        let mut out: Option<Exponents> = None;
        for e in self.terms.keys() {
            out = Some(match out {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        out.unwrap_or_else(|| vec![0; self.vars.len()])
    }

    /// Single term with a unit-modulus coefficient.
    pub fn is_unit_monomial(&self) -> Option<(Scalar, Exponents)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        c.is_unit_modulus().then(|| (c.clone(), e.clone()))
    }

    /// Single term with any nonzero coefficient.
    pub fn as_monomial(&self) -> Option<(Scalar, Exponents)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(e, c)| (c.clone(), e.clone()))
    }

    /// Inverse of a monomial.
    pub fn monomial_inverse(&self) -> Result<LaurentPoly> {
        let (c, e) = self.as_monomial().ok_or(Error::InexactDivision)?;
        Self::monomial(c.inv()?, e.iter().map(|x| -x).collect(), &self.vars)
    }

    /// Replaces variables by polynomials (constants or monomials in practice).
    pub fn substitute(&self, assignment: &BTreeMap<String, LaurentPoly>) -> Result<LaurentPoly> {
        for (name, value) in assignment {
            if let Some(v) = value.constant_value() {
                if v.is_zero() {
                    if let Some(i) = self.vars.index_of(name) {
                        if self.terms.keys().any(|e| e[i] < 0) {
                            return Err(Error::NonInvertibleValue { var: name.clone() });
                        }
                    }
                    return Err(Error::ZeroAssigned { var: name.clone() });
                }
            }
            if !value.ring.eq(&self.ring) {
                return Err(incompatible(&value.ring, &self.ring));
            }
        }
        let assigned: BTreeSet<String> = assignment.keys().cloned().collect();
        let mut out_vars = self.vars.without(&assigned);
        for v in assignment.values() {
            out_vars = out_vars.union(&v.vars);
        }
        let slots: Vec<Option<&LaurentPoly>> = self.vars.names().iter().map(|n| assignment.get(n)).collect();
        let mut inverses: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
        let mut acc = LaurentPoly::zero(&self.ring, &out_vars);
        for (e, c) in &self.terms {
            let mut kept = vec![0; out_vars.len()];
            let mut factor = LaurentPoly::constant(c.clone(), &out_vars);
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match slots[i] {
                    None => {
                        let j = out_vars.index_of(&self.vars.names()[i]).expect("kept variable");
                        kept[j] += x;
                    }
                    Some(value) => {
                        let base = if x < 0 {
                            if let std::collections::btree_map::Entry::Vacant(e) = inverses.entry(i) {
                                let inv = value.monomial_inverse().map_err(|_| Error::NonInvertibleValue {
                                    var: self.vars.names()[i].clone(),
                                })?;
                                e.insert(inv);
                            }
                            inverses[&i].clone()
                        } else {
                            value.clone()
                        };
                        factor = factor.try_mul(&base.pow(x.unsigned_abs())?)?;
                    }
                }
            }
            acc = acc.try_add(&factor.shift(&kept).with_vars(&out_vars)?)?;
        }
        acc.with_vars(&out_vars)
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, ring: &Ring, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<LaurentPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            add_term(&mut terms, e.clone(), f(c)?);
        }
        Ok(LaurentPoly {
            ring: ring.clone(),
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Image of every coefficient in another ring.
    pub fn embed(&self, target: &Ring) -> Result<LaurentPoly> {
        self.map_coeffs(target, |c| c.embed(target))
    }

    fn leading(&self) -> Option<(&Exponents, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor` in the polynomial ring; fails when the
    /// division leaves a remainder or needs negative exponents.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        let (mut rem, d) = self.aligned(divisor)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = d.constant_value() {
            return rem.scale(&c.inv()?);
        }
        let (de, dc) = d.leading().map(|(e, c)| (e.clone(), c.clone())).expect("nonzero");
        let dc_inv = dc.inv()?;
        let mut quot = BTreeMap::new();
        while let Some((re, rc)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Exponents = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return Err(Error::InexactDivision);
            }
            let qc = &rc * &dc_inv;
            let t = LaurentPoly::monomial(qc.clone(), qe.clone(), &rem.vars)?;
            rem = rem.try_sub(&t.try_mul(&d)?)?;
            add_term(&mut quot, qe, qc);
        }
        Ok(LaurentPoly {
            ring: rem.ring.clone(),
            vars: rem.vars.clone(),
            terms: quot,
        })
    }

    fn monomial_text(&self, e: &[i32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| {
                let name = &self.vars.names()[i];
                if x == 1 {
                    name.clone()
                } else {
                    format!("{name}^{x}")
                }
            })
            .collect();
        parts.join("*")
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring {
            return false;
        }
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        match self.aligned(other) {
            Ok((a, b)) => a.terms == b.terms,
            Err(_) => false,
        }
    }
}

impl Eq for LaurentPoly {}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let (negative, magnitude) = c.term_text();
                TermText {
                    negative,
                    magnitude,
                    monomial: self.monomial_text(e),
                }
            })
            .collect();
        f.write_str(&format_terms(terms))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {} in {:?}", self, self.ring, self.vars)
    }
}
