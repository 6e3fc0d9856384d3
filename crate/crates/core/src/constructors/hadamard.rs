use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::polymatrix::PolyMatrix;
use crate::scalars::{Rational, Scalar};

/// Largest root-of-unity order searched for when detecting Butson type.
pub const BUTSON_CAP: u64 = 240;

/// Result of specializing every variable of a paraunitary matrix to a unit-modulus value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardReport {
    /// The specialized scalar matrix `H`.
    pub specialized: PolyMatrix,
    /// Whether `H H^* = I`.
    pub unitary: bool,
    /// Smallest positive rational making every entry of `H` an algebraic integer.
    pub clearing_factor: Rational,
    /// The factor `s` with `H' = s H`.
    pub scale: Scalar,
    /// `H'`, the form with the fraction omitted.
    pub hadamard: PolyMatrix,
    /// Whether every entry of `H'` has unit modulus.
    pub unit_entries: bool,
    /// Whether `H' H'^* = n I`.
    pub gram_is_n: bool,
    /// Least `q` such that every entry of `H'` is a q-th root of unity, when `q <= BUTSON_CAP`.
    pub butson: Option<u64>,
}

impl HadamardReport {
    pub fn is_hadamard(&self) -> bool {
        self.unit_entries && self.gram_is_n
    }

    pub fn to_json(&self) -> Value {
        json!({
            "unitary": self.unitary,
            "clearing_factor": self.clearing_factor.to_string(),
            "scale": self.scale.to_string(),
            "hadamard": self.hadamard.to_json(),
            "unit_entries": self.unit_entries,
            "gram_is_n": self.gram_is_n,
            "is_hadamard": self.is_hadamard(),
            "butson": self.butson,
        })
    }
}

fn rational_coefficients(s: &Scalar) -> Vec<Rational> {
    if let Some(q) = s.as_rational() {
        return vec![q];
    }
    match s.cyclotomic_coeffs() {
        Some((_, cs)) => cs.to_vec(),
        None => Vec::new(),
    }
}

fn clearing_factor(values: &[Scalar]) -> Rational {
    let coeffs: Vec<Rational> = values
        .iter()
        .flat_map(rational_coefficients)
        .filter(|c| !c.is_zero())
        .collect();
    if coeffs.is_empty() {
        return Rational::one();
    }
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    let gcd = coeffs
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&lcm / c.denom()))));
    Rational::from_big(num_rational::BigRational::new(lcm, gcd))
}

fn root_order(s: &Scalar, cap: u64) -> Option<u64> {
    let mut power = s.clone();
    for k in 1..=cap {
        if power.is_one() {
            return Some(k);
        }
        power = &power * s;
    }
    None
}

fn scaled(h: &PolyMatrix, s: &Scalar) -> Result<(PolyMatrix, bool)> {
    let hs = h.scale(s)?;
    let unit = hs.scalar_entries()?.iter().all(Scalar::is_unit_modulus);
    Ok((hs, unit))
}

/// Substitutes unit-modulus values for all variables and checks the Hadamard conditions.
pub fn specialize_hadamard(w: &PolyMatrix, assignment: &BTreeMap<String, Scalar>) -> Result<HadamardReport> {
    if !w.is_square() {
        return Err(Error::NotSquare {
            rows: w.rows(),
            cols: w.cols(),
        });
    }
    let mut values = BTreeMap::new();
    for (index, var) in w.vars().names().iter().enumerate() {
        let value = assignment
            .get(var)
            .ok_or_else(|| Error::NotFullyAssigned { var: var.clone() })?;
        if !value.in_ring(w.ring()) {
            return Err(crate::scalars::incompatible(&value.ring(), w.ring()));
        }
        if !value.is_unit_modulus() {
            return Err(Error::NotUnitModulus { index });
        }
        values.insert(var.clone(), LaurentPoly::constant(value.clone(), &crate::VarSet::empty()));
    }
    let h = w.substitute(&values)?;
    let entries = h.scalar_entries()?;
    let n = h.rows();
    let unitary = h.is_paraunitary()?.passed;
    let factor = clearing_factor(&entries);
    let ring = h.ring().clone();
    let mut scale = ring.from_rational(&factor)?;
    let (mut hadamard, mut unit_entries) = scaled(&h, &scale)?;
    if !unit_entries {
        if let Ok(root) = ring.from_int(n as i64).sqrt() {
            let (alt, unit) = scaled(&h, &root)?;
            if unit {
                scale = root;
                hadamard = alt;
                unit_entries = true;
            }
        }
    }
    let target = PolyMatrix::identity(&ring, hadamard.vars(), n).scale(&ring.from_int(n as i64))?;
    let gram_is_n = hadamard.gram()? == target;
    let butson = if unit_entries {
        let mut distinct: Vec<Scalar> = Vec::new();
        for e in hadamard.scalar_entries()? {
            if !distinct.contains(&e) {
                distinct.push(e);
            }
        }
        distinct
            .iter()
            .map(|e| root_order(e, BUTSON_CAP))
            .try_fold(1u64, |acc, o| o.map(|o| acc.lcm(&o)))
            .filter(|&q| q <= BUTSON_CAP)
    } else {
        None
    };
    Ok(HadamardReport {
        specialized: h,
        unitary,
        clearing_factor: factor,
        scale,
        hadamard,
        unit_entries,
        gram_is_n,
        butson,
    })
}
