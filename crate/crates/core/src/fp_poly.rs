//! Dense polynomials over a prime field F_p, used to pick and test field moduli.
//!
//! Coefficients are stored low-to-high and are always reduced into `[0, p)`.
//! Trailing zeros are trimmed so that the zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) fn mul_mod_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod_p(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_p(acc, base, p);
        }
        base = mul_mod_p(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod_p(a, p - 2, p)
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod_p(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = mul_mod_p(*r.last().unwrap(), lead_inv, p);
        for (j, &mj) in m.iter().enumerate() {
            let t = mul_mod_p(c, mj, p);
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_rem(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, m, p);
        }
        b = mul_rem(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rabin's test: monic `f` of degree r is irreducible iff
/// x^(p^r) = x mod f and gcd(x^(p^(r/l)) - x, f) = 1 for every prime l | r.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    if r == 0 {
        return false;
    }
    if r == 1 {
        return true;
    }
    let x = [0u64, 1];
    // frob[k] = x^(p^k) mod f
    let mut frob = Vec::with_capacity(r + 1);
    frob.push(rem(&x, f, p));
    for k in 1..=r {
        let prev: &Vec<u64> = &frob[k - 1];
        frob.push(pow_rem(prev, p, f, p));
    }
    if frob[r] != rem(&x, f, p) {
        return false;
    }
    for l in prime_factors(r as u64) {
        let k = r / l as usize;
        let h = sub(&frob[k], &x, p);
        let g = gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibles() {
        // x^2 + 1 over F_3 is irreducible, over F_5 it is not (2^2 = -1).
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x^3 - x - 1 over F_3 (Artin-Schreier) is irreducible.
        assert!(is_irreducible(&[2, 2, 0, 1], 3));
        // x^4 + 1 = (x^2+x+2)(x^2+2x+2) over F_3.
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 3));
    }

    #[test]
    fn primes() {
        assert_eq!(prime_factors(16806), vec![2, 3, 2801]);
        assert!(is_prime(2801));
        assert!(!is_prime(1));
        assert!(!is_prime(9));
    }
}
