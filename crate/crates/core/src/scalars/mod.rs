//! Exact coefficient rings: Q, Q(zeta_N) and F_p, each with its involution.

mod cyclotomic;
mod modular;
mod rational;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

pub use cyclotomic::{totient, CyclotomicField, MAX_CONDUCTOR};
pub use modular::{is_prime, MAX_PRIME};
pub use rational::{rational_sqrt, Rational};
pub(crate) use text::{format_terms, TermText};

use crate::error::{Error, Result};

/// Descriptor of the coefficient field.
#[derive(Clone)]
pub enum Ring {
    Rational,
    Cyclotomic(Arc<CyclotomicField>),
    PrimeField(u64),
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Ring::Rational, Ring::Rational) => true,
            (Ring::Cyclotomic(a), Ring::Cyclotomic(b)) => a.conductor() == b.conductor(),
            (Ring::PrimeField(p), Ring::PrimeField(q)) => p == q,
            _ => false,
        }
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rational => write!(f, "QQ"),
            Ring::Cyclotomic(c) => write!(f, "QQ(E({}))", c.conductor()),
            Ring::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

pub(crate) fn incompatible(a: &Ring, b: &Ring) -> Error {
    Error::IncompatibleRings {
        left: a.to_string(),
        right: b.to_string(),
    }
}

impl Ring {
    pub fn rational() -> Ring {
        Ring::Rational
    }

    pub fn cyclotomic(conductor: u32) -> Result<Ring> {
        Ok(Ring::Cyclotomic(Arc::new(CyclotomicField::new(conductor)?)))
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        if p > MAX_PRIME {
            return Err(Error::InvalidRing(format!("prime {p} exceeds {MAX_PRIME}")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn conductor(&self) -> Option<u32> {
        match self {
            Ring::Cyclotomic(c) => Some(c.conductor()),
            _ => None,
        }
    }

    /// Zero for characteristic zero.
    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::PrimeField(p) => *p,
            _ => 0,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Ring::Rational => "rational",
            Ring::Cyclotomic(_) => "cyclotomic",
            Ring::PrimeField(_) => "prime_field",
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            Ring::Rational => Scalar(Repr::Q(Rational::from_int(n))),
            Ring::Cyclotomic(f) => {
                let mut v = f.zero();
                v[0] = Rational::from_int(n);
                Scalar(Repr::Cyc(f.clone(), v))
            }
            Ring::PrimeField(p) => Scalar(Repr::Fp(*p, modular::reduce_i128(n as i128, *p))),
        }
    }

    /// Image of a rational; fails in F_p when p divides the denominator.
    pub fn from_rational(&self, q: &Rational) -> Result<Scalar> {
        match self {
            Ring::Rational => Ok(Scalar(Repr::Q(q.clone()))),
            Ring::Cyclotomic(f) => {
                let mut v = f.zero();
                v[0] = q.clone();
                Ok(Scalar(Repr::Cyc(f.clone(), v)))
            }
            Ring::PrimeField(p) => {
                let pb = BigInt::from(*p);
                let num = q.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::IncompatibleRings {
                        left: format!("{q}"),
                        right: self.to_string(),
                    });
                }
                Ok(Scalar(Repr::Fp(*p, modular::mul_mod(num, modular::inv_mod(den, *p), *p))))
            }
        }
    }

    /// zeta_N^k in a cyclotomic ring.
    pub fn zeta_pow(&self, k: i64) -> Result<Scalar> {
        match self {
            Ring::Cyclotomic(f) => Ok(Scalar(Repr::Cyc(f.clone(), f.zeta_pow(k)))),
            _ => Err(Error::NoSuchRoot {
                order: 0,
                ring: self.to_string(),
            }),
        }
    }

    /// A square root of 2: zeta_8 + zeta_8^-1 in cyclotomic rings, the
    /// smaller residue in prime fields.
    pub fn sqrt2(&self) -> Result<Scalar> {
        if let Ring::PrimeField(2) = self {
            return Err(Error::NoSquareRoot {
                value: "2".into(),
                ring: self.to_string(),
            });
        }
        self.from_int(2).sqrt()
    }

    /// A primitive n-th root of unity.
    pub fn root_of_unity(&self, n: u64) -> Result<Scalar> {
        let missing = || Error::NoSuchRoot {
            order: n,
            ring: self.to_string(),
        };
        if n == 0 {
            return Err(missing());
        }
        match self {
            Ring::Rational => match n {
                1 => Ok(self.one()),
                2 => Ok(self.from_int(-1)),
                _ => Err(missing()),
            },
            Ring::Cyclotomic(f) => {
                let big_n = f.conductor() as u64;
                if big_n.is_multiple_of(n) {
                    self.zeta_pow((big_n / n) as i64)
                } else if big_n % 2 == 1 && (2 * big_n).is_multiple_of(n) {
                    // n = 2m with m odd: zeta_2m = -zeta_m^((m+1)/2)
                    let m = n / 2;
                    Ok(-self.zeta_pow((big_n / m * (m + 1) / 2) as i64)?)
                } else {
                    Err(missing())
                }
            }
            Ring::PrimeField(p) => modular::least_root_of_unity(n, *p)
                .map(|r| Scalar(Repr::Fp(*p, r)))
                .ok_or_else(missing),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Ring::Rational => json!({"kind": "rational"}),
            Ring::Cyclotomic(f) => json!({"kind": "cyclotomic", "conductor": f.conductor()}),
            Ring::PrimeField(p) => json!({"kind": "prime_field", "p": p}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Ring> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("ring descriptor needs a 'kind'"))?;
        match kind {
            "rational" => Ok(Ring::Rational),
            "cyclotomic" => {
                let n = v
                    .get("conductor")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::parse("cyclotomic ring needs 'conductor'"))?;
                Ring::cyclotomic(u32::try_from(n).map_err(|_| Error::InvalidRing(format!("conductor {n}")))?)
            }
            "prime_field" => {
                let p = v
                    .get("p")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::parse("prime field needs 'p'"))?;
                Ring::prime_field(p)
            }
            other => Err(Error::parse(format!("unknown ring kind '{other}'"))),
        }
    }
}

/// An element of one of the coefficient rings.
#[derive(Clone)]
pub struct Scalar(Repr);

#[derive(Clone)]
enum Repr {
    Q(Rational),
    Cyc(Arc<CyclotomicField>, Vec<Rational>),
    Fp(u64, u64),
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => a == b,
            (Repr::Cyc(f, a), Repr::Cyc(g, b)) => f.conductor() == g.conductor() && a == b,
            (Repr::Fp(p, a), Repr::Fp(q, b)) => p == q && a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match &self.0 {
            Repr::Q(_) => Ring::Rational,
            Repr::Cyc(f, _) => Ring::Cyclotomic(f.clone()),
            Repr::Fp(p, _) => Ring::PrimeField(*p),
        }
    }

    pub fn same_ring(&self, other: &Scalar) -> bool {
        match (&self.0, &other.0) {
            (Repr::Q(_), Repr::Q(_)) => true,
            (Repr::Cyc(f, _), Repr::Cyc(g, _)) => f.conductor() == g.conductor(),
            (Repr::Fp(p, _), Repr::Fp(q, _)) => p == q,
            _ => false,
        }
    }

    pub fn in_ring(&self, ring: &Ring) -> bool {
        match (&self.0, ring) {
            (Repr::Q(_), Ring::Rational) => true,
            (Repr::Cyc(f, _), Ring::Cyclotomic(g)) => f.conductor() == g.conductor(),
            (Repr::Fp(p, _), Ring::PrimeField(q)) => p == q,
            _ => false,
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(incompatible(&self.ring(), &other.ring()))
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_zero(),
            Repr::Cyc(_, v) => v.iter().all(Rational::is_zero),
            Repr::Fp(_, r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(q) => q.is_one(),
            Repr::Cyc(_, v) => v[0].is_one() && v[1..].iter().all(Rational::is_zero),
            Repr::Fp(_, r) => *r == 1,
        }
    }

    /// The rational value, if this element is rational (never for F_p).
    pub fn as_rational(&self) -> Option<Rational> {
        match &self.0 {
            Repr::Q(q) => Some(q.clone()),
            Repr::Cyc(f, v) => f.as_rational(v),
            Repr::Fp(..) => None,
        }
    }

    /// Residue in [0, p) for prime-field elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Fp(_, r) => Some(*r),
            _ => None,
        }
    }

    /// Power-basis coefficients for cyclotomic elements.
    pub fn cyclotomic_coeffs(&self) -> Option<(u32, &[Rational])> {
        match &self.0 {
            Repr::Cyc(f, v) => Some((f.conductor(), v)),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        Scalar(match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a + b),
            (Repr::Cyc(f, a), Repr::Cyc(_, b)) => {
                Repr::Cyc(f.clone(), a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Repr::Fp(p, a), Repr::Fp(_, b)) => Repr::Fp(*p, (a + b) % p),
            _ => panic!("{}", incompatible(&self.ring(), &other.ring())),
        })
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        Scalar(match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a * b),
            (Repr::Cyc(f, a), Repr::Cyc(_, b)) => Repr::Cyc(f.clone(), f.mul(a, b)),
            (Repr::Fp(p, a), Repr::Fp(_, b)) => Repr::Fp(*p, modular::mul_mod(*a, *b, *p)),
            _ => panic!("{}", incompatible(&self.ring(), &other.ring())),
        })
    }

    fn neg_ref(&self) -> Scalar {
        Scalar(match &self.0 {
            Repr::Q(a) => Repr::Q(-a),
            Repr::Cyc(f, a) => Repr::Cyc(f.clone(), a.iter().map(|x| -x).collect()),
            Repr::Fp(p, a) => Repr::Fp(*p, (p - a) % p),
        })
    }

    /// Multiplication by a rational constant.
    pub fn scale(&self, q: &Rational) -> Result<Scalar> {
        Ok(self.mul_unchecked(&self.ring().from_rational(q)?))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(match &self.0 {
            Repr::Q(a) => Repr::Q(a.inv()?),
            Repr::Cyc(f, a) => Repr::Cyc(f.clone(), f.inv(a)?),
            Repr::Fp(p, a) => Repr::Fp(*p, modular::inv_mod(*a, *p)),
        }))
    }

    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.ring().one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&b);
            }
            b = b.mul_unchecked(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// The involution: complex conjugation on cyclotomics, identity otherwise.
    pub fn conj(&self) -> Scalar {
        match &self.0 {
            Repr::Cyc(f, a) => Scalar(Repr::Cyc(f.clone(), f.conj(a))),
            _ => self.clone(),
        }
    }

    /// a * conj(a).
    pub fn norm_sq(&self) -> Scalar {
        self.mul_unchecked(&self.conj())
    }

    pub fn is_unit_modulus(&self) -> bool {
        self.norm_sq().is_one()
    }

    /// Image under the canonical inclusion into `target`.
    pub fn embed(&self, target: &Ring) -> Result<Scalar> {
        if self.in_ring(target) {
            return Ok(self.clone());
        }
        let fail = || incompatible(&self.ring(), target);
        match (&self.0, target) {
            (Repr::Cyc(f, a), Ring::Cyclotomic(g)) if g.conductor() % f.conductor() == 0 => {
                Ok(Scalar(Repr::Cyc(g.clone(), f.lift_into(a, g))))
            }
            (Repr::Fp(..), _) => Err(fail()),
            _ => match self.as_rational() {
                Some(q) => target.from_rational(&q).map_err(|_| fail()),
                None => Err(fail()),
            },
        }
    }

    /// Image of a cyclotomic element in F_p under zeta_N -> the least primitive
    /// N-th root of unity mod p. Rationals map as usual.
    pub fn reduce_mod_prime(&self, p: u64) -> Result<Scalar> {
        let target = Ring::prime_field(p)?;
        match &self.0 {
            Repr::Cyc(f, a) if f.as_rational(a).is_none() => {
                let n = f.conductor() as u64;
                let omega = target.root_of_unity(n)?;
                let mut acc = target.zero();
                let mut power = target.one();
                for c in a {
                    if !c.is_zero() {
                        acc = acc.add_unchecked(&power.mul_unchecked(&target.from_rational(c)?));
                    }
                    power = power.mul_unchecked(&omega);
                }
                Ok(acc)
            }
            _ => self.embed(&target),
        }
    }

    /// A square root, when one exists in the ring.
    ///
    /// Cyclotomic square roots are only found for rational radicands, built
    /// from Gauss sums, sqrt(2) = zeta_8 + zeta_8^-1 and i.
    pub fn sqrt(&self) -> Result<Scalar> {
        let ring = self.ring();
        let none = || Error::NoSquareRoot {
            value: self.to_string(),
            ring: ring.to_string(),
        };
        match &self.0 {
            Repr::Q(q) => rational_sqrt(q).map(|r| Scalar(Repr::Q(r))).ok_or_else(none),
            Repr::Fp(p, a) => modular::sqrt_mod(*a, *p)
                .map(|r| Scalar(Repr::Fp(*p, r)))
                .ok_or_else(none),
            Repr::Cyc(f, a) => {
                let q = f.as_rational(a).ok_or_else(none)?;
                if q.is_zero() {
                    return Ok(self.clone());
                }
                let root = cyclotomic_sqrt_of_rational(&ring, f.conductor(), &q).ok_or_else(none)?;
                if root.mul_unchecked(&root) != *self {
                    return Err(Error::Internal(format!("square root check failed for {self}")));
                }
                Ok(root)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.0 {
            Repr::Q(q) => Value::String(q.to_string()),
            Repr::Cyc(f, a) => json!({
                "conductor": f.conductor(),
                "coeffs": a.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }),
            Repr::Fp(p, r) => json!({"p": p, "v": r}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Scalar> {
        match v {
            Value::String(s) => Ok(Scalar(Repr::Q(s.parse()?))),
            Value::Number(n) => {
                let k = n.as_i64().ok_or_else(|| Error::parse(format!("invalid scalar {n}")))?;
                Ok(Scalar(Repr::Q(Rational::from_int(k))))
            }
            Value::Object(o) if o.contains_key("conductor") => {
                let ring = Ring::from_json(&json!({"kind": "cyclotomic", "conductor": o["conductor"]}))?;
                let Ring::Cyclotomic(f) = ring else { unreachable!() };
                let coeffs = o
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::parse("cyclotomic scalar needs 'coeffs'"))?;
                if coeffs.len() != f.degree() {
                    return Err(Error::parse(format!(
                        "expected {} coefficients, got {}",
                        f.degree(),
                        coeffs.len()
                    )));
                }
                let vals = coeffs
                    .iter()
                    .map(|c| match c {
                        Value::String(s) => s.parse(),
                        Value::Number(n) => n
                            .as_i64()
                            .map(Rational::from_int)
                            .ok_or_else(|| Error::parse(format!("invalid coefficient {n}"))),
                        _ => Err(Error::parse("invalid coefficient")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Scalar(Repr::Cyc(f, vals)))
            }
            Value::Object(o) if o.contains_key("p") => {
                let p = o["p"].as_u64().ok_or_else(|| Error::parse("invalid 'p'"))?;
                let r = o
                    .get("v")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::parse("prime-field scalar needs 'v'"))?;
                Ring::prime_field(p)?;
                if r >= p {
                    return Err(Error::parse(format!("residue {r} not reduced mod {p}")));
                }
                Ok(Scalar(Repr::Fp(p, r)))
            }
            _ => Err(Error::parse(format!("invalid scalar {v}"))),
        }
    }

    /// Sign and magnitude text used by the polynomial printer.
    pub(crate) fn term_text(&self) -> (bool, String) {
        match &self.0 {
            Repr::Q(q) => text::rational_term(q),
            Repr::Fp(_, r) => (false, r.to_string()),
            Repr::Cyc(f, a) => match f.as_rational(a) {
                Some(q) => text::rational_term(&q),
                None => (false, format!("({})", text::cyclotomic_inner(f.conductor(), a))),
            },
        }
    }
}

/// sqrt(q) in Q(zeta_N) for rational q, if it exists.
fn cyclotomic_sqrt_of_rational(ring: &Ring, conductor: u32, q: &Rational) -> Option<Scalar> {
    let n = conductor as u64;
    let num = q.numer();
    let den = q.denom();
    let mut m = (&num * &den).abs();
    let mut square_part = BigInt::from(1);
    let mut odd_power_primes: Vec<u64> = Vec::new();
    let mut p = 2u64;
    while p <= n.max(2) {
        if is_prime(p) {
            let bp = BigInt::from(p);
            let mut e = 0;
            while (&m % &bp).is_zero() {
                m /= &bp;
                e += 1;
            }
            if e % 2 == 1 {
                odd_power_primes.push(p);
            }
            for _ in 0..e / 2 {
                square_part *= &bp;
            }
        }
        p += 1;
    }
    let rest = m.sqrt();
    if &rest * &rest != m {
        return None;
    }
    square_part *= rest;
    // sqrt(|n d|) / d, assembled from prime square roots
    let mut root = ring.one();
    let mut sign_of_square = 1i32;
    for &p in &odd_power_primes {
        if p == 2 {
            if !n.is_multiple_of(8) {
                return None;
            }
            root = root.mul_unchecked(&ring.zeta_pow(n as i64 / 8).ok()?.add_unchecked(&ring.zeta_pow(-(n as i64) / 8).ok()?));
        } else {
            if !n.is_multiple_of(p) {
                return None;
            }
            let step = (n / p) as i64;
            let mut gauss = ring.zero();
            for a in 1..p {
                let term = ring.zeta_pow(step * a as i64).ok()?;
                if modular::pow_mod(a, (p - 1) / 2, p) == 1 {
                    gauss = gauss.add_unchecked(&term);
                } else {
                    gauss = gauss.add_unchecked(&term.neg_ref());
                }
            }
            root = root.mul_unchecked(&gauss);
            if p % 4 == 3 {
                sign_of_square = -sign_of_square;
            }
        }
    }
    let wanted_sign = if q.is_negative() { -1 } else { 1 };
    if sign_of_square != wanted_sign {
        if !n.is_multiple_of(4) {
            return None;
        }
        root = root.mul_unchecked(&ring.zeta_pow(n as i64 / 4).ok()?);
    }
    let factor = Rational::from_big(num_rational::BigRational::new(square_part, den));
    Some(root.mul_unchecked(&ring.from_rational(&factor).ok()?))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, mag) = self.term_text();
        let text = format_terms(vec![TermText {
            negative: neg,
            magnitude: mag,
            monomial: String::new(),
        }]);
        f.write_str(&text)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on mismatched rings; use `try_add` to handle that case.
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_unchecked(rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.add_unchecked(&rhs.neg_ref())
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
