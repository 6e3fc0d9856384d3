//! Arithmetic in Q(zeta_N) on the power basis 1, x, ..., x^(phi(N)-1) modulo Phi_N.

use std::collections::HashMap;
use std::fmt;

use super::rational::Rational;
use crate::error::{Error, Result};

pub const MAX_CONDUCTOR: u32 = 1024;

/// Precomputed data for one conductor.
pub struct CyclotomicField {
    conductor: u32,
    degree: usize,
    /// Monic Phi_N, lowest degree first.
    modulus: Vec<i64>,
    /// `powers[k]` is x^k mod Phi_N for 0 <= k < N.
    powers: Vec<Vec<i64>>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicField({})", self.conductor)
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Exact division of integer polynomials by a monic divisor.
fn div_monic(num: &[i64], den: &[i64]) -> Result<Vec<i64>> {
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return Err(Error::Internal("cyclotomic quotient degree".into()));
    }
    let mut quot = vec![0i128; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d as i128;
            }
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::Internal("cyclotomic division left a remainder".into()));
    }
    quot.into_iter()
        .map(|c| i64::try_from(c).map_err(|_| Error::Internal("cyclotomic coefficient overflow".into())))
        .collect()
}

fn cyclotomic_poly(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Result<Vec<i64>> {
    if let Some(p) = memo.get(&n) {
        return Ok(p.clone());
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d < n {
            let phi_d = cyclotomic_poly(d, memo)?;
            num = div_monic(&num, &phi_d)?;
        }
    }
    memo.insert(n, num.clone());
    Ok(num)
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

impl CyclotomicField {
    pub fn new(conductor: u32) -> Result<Self> {
        if conductor == 0 || conductor > MAX_CONDUCTOR {
            return Err(Error::InvalidRing(format!(
                "conductor must lie in 1..={MAX_CONDUCTOR}, got {conductor}"
            )));
        }
        let modulus = cyclotomic_poly(conductor, &mut HashMap::new())?;
        let degree = modulus.len() - 1;
        let n = conductor as usize;
        let mut powers = Vec::with_capacity(n);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x, then fold the overflow coefficient through Phi_N
            let top = cur[degree - 1];
            let mut next = vec![0i64; degree];
            next[1..degree].copy_from_slice(&cur[..degree - 1]);
            if top != 0 {
                for j in 0..degree {
                    next[j] = modulus[j]
                        .checked_mul(top)
                        .and_then(|v| next[j].checked_sub(v))
                        .ok_or_else(|| Error::Internal("cyclotomic power overflow".into()))?;
                }
            }
            cur = next;
        }
        Ok(CyclotomicField {
            conductor,
            degree,
            modulus,
            powers,
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    pub fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.degree]
    }

    /// Coefficient vector of zeta^k.
    pub fn zeta_pow(&self, k: i64) -> Vec<Rational> {
        let n = self.conductor as i64;
        let idx = k.rem_euclid(n) as usize;
        self.powers[idx].iter().map(|&c| Rational::from_int(c)).collect()
    }

    /// Reduces a vector indexed by exponent (any length) into canonical form.
    fn reduce(&self, acc: Vec<Rational>) -> Vec<Rational> {
        let n = self.conductor as usize;
        let mut out: Vec<Rational> = Vec::with_capacity(self.degree);
        let mut iter = acc.into_iter();
        for _ in 0..self.degree {
            out.push(iter.next().unwrap_or_default());
        }
        for (off, c) in iter.enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &self.powers[(self.degree + off) % n];
            for (j, &p) in row.iter().enumerate() {
                if p != 0 {
                    out[j] = &out[j] + &c.mul_int(p);
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); 2 * self.degree - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    acc[i + j] = &acc[i + j] + &(x * y);
                }
            }
        }
        self.reduce(acc)
    }

    /// Image under zeta -> zeta^k.
    pub fn galois(&self, a: &[Rational], k: u64) -> Vec<Rational> {
        let n = self.conductor as u64;
        let mut acc = vec![Rational::zero(); n as usize];
        for (i, c) in a.iter().enumerate() {
            if !c.is_zero() {
                let e = ((i as u64) * k % n) as usize;
                acc[e] = &acc[e] + c;
            }
        }
        let mut out = self.zero();
        for (e, c) in acc.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &p) in self.powers[e].iter().enumerate() {
                if p != 0 {
                    out[j] = &out[j] + &c.mul_int(p);
                }
            }
        }
        out
    }

    pub fn conj(&self, a: &[Rational]) -> Vec<Rational> {
        let n = self.conductor as u64;
        self.galois(a, n - 1)
    }

    /// Inverse via the product of the non-trivial Galois conjugates.
    pub fn inv(&self, a: &[Rational]) -> Result<Vec<Rational>> {
        if a.iter().all(Rational::is_zero) {
            return Err(Error::DivisionByZero);
        }
        let n = self.conductor as u64;
        let mut cofactor = self.zero();
        cofactor[0] = Rational::one();
        for k in 2..n.max(2) {
            if gcd_u64(k, n) == 1 {
                cofactor = self.mul(&cofactor, &self.galois(a, k));
            }
        }
        let norm_vec = self.mul(a, &cofactor);
        if norm_vec[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal("norm is not rational".into()));
        }
        let inv_norm = norm_vec[0].inv()?;
        Ok(cofactor.iter().map(|c| c * &inv_norm).collect())
    }

    /// Some(q) when the element is the rational q.
    pub fn as_rational(&self, a: &[Rational]) -> Option<Rational> {
        if a[1..].iter().all(Rational::is_zero) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    /// Image of an element of Q(zeta_N) in Q(zeta_M), M a multiple of N.
    pub fn lift_into(&self, a: &[Rational], target: &CyclotomicField) -> Vec<Rational> {
        let step = (target.conductor / self.conductor) as i64;
        let mut out = target.zero();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = target.zeta_pow(i as i64 * step);
            for (j, p) in z.iter().enumerate() {
                if !p.is_zero() {
                    out[j] = &out[j] + &(c * p);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        let f = |n| CyclotomicField::new(n).unwrap().modulus().to_vec();
        assert_eq!(f(1), vec![-1, 1]);
        assert_eq!(f(2), vec![1, 1]);
        assert_eq!(f(3), vec![1, 1, 1]);
        assert_eq!(f(4), vec![1, 0, 1]);
        assert_eq!(f(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(f(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn phi_105_has_a_minus_two() {
        let field = CyclotomicField::new(105).unwrap();
        assert_eq!(field.degree(), 48);
        assert!(field.modulus().contains(&-2));
    }

    #[test]
    fn degree_is_totient() {
        for n in 1..=120u32 {
            let field = CyclotomicField::new(n).unwrap();
            assert_eq!(field.degree() as u64, totient(n as u64), "n = {n}");
        }
    }

    #[test]
    fn rejects_out_of_range_conductor() {
        assert!(CyclotomicField::new(0).is_err());
        assert!(CyclotomicField::new(MAX_CONDUCTOR + 1).is_err());
    }
}
