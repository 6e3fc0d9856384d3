//! Residue arithmetic for prime fields.

/// Largest accepted field characteristic; keeps trial division and products cheap.
pub const MAX_PRIME: u64 = u32::MAX as u64;

const SEARCH_LIMIT: u64 = 1_000_000;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut out = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            out = mul_mod(out, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    out
}

/// Inverse by Fermat; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduces an arbitrary signed integer into [0, p).
pub fn reduce_i128(a: i128, p: u64) -> u64 {
    a.rem_euclid(p as i128) as u64
}

/// A square root of `a` in [0, p/2], if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    let root = if p < SEARCH_LIMIT {
        (1..=p / 2).find(|&r| mul_mod(r, r, p) == a)?
    } else {
        tonelli_shanks(a, p)?
    };
    Some(root.min(p - root))
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order test: `x` has order exactly `n`.
pub fn has_order(x: u64, n: u64, p: u64) -> bool {
    if x.is_multiple_of(p) || pow_mod(x, n, p) != 1 {
        return false;
    }
    prime_factors(n).iter().all(|&q| pow_mod(x, n / q, p) != 1)
}

/// The least residue of exact multiplicative order `n`, when `n | p - 1`.
pub fn least_root_of_unity(n: u64, p: u64) -> Option<u64> {
    if n == 0 || !(p - 1).is_multiple_of(n) {
        return None;
    }
    (1..p).find(|&x| has_order(x, n, p))
}
