//! Finite fields F_{p^r} of odd characteristic.
//!
//! Elements are stored as a single integer code `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`
//! where `c_0 + c_1 x + ... + c_{r-1} x^{r-1}` is the canonical residue modulo the
//! field modulus. Small fields (order at most [`TABLE_THRESHOLD`]) carry exp/log/Zech
//! tables; the point counter works directly on discrete logarithms through
//! [`LogTables`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::FieldError;
use crate::fp_poly;

/// Fields of at most this many elements get exp/log/Zech tables.
pub const TABLE_THRESHOLD: u64 = 1 << 22;

/// Default upper bound on the field order accepted by [`FieldDesc::new`].
pub const DEFAULT_MAX_ORDER: u64 = 1 << 62;

const MAX_DEGREE: usize = 64;

/// An element of some [`FieldDesc`], as its integer code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub u64);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Result of a squareness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Squareness {
    Zero,
    Square,
    NonSquare,
}

/// Discrete-log representation: `g^k` is stored as `k`, zero as [`LogTables::ZERO`].
#[derive(Clone, Debug)]
pub struct LogTables {
    /// Multiplicative group order Q - 1.
    pub group_order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

impl LogTables {
    pub const ZERO: u32 = u32::MAX;

    #[inline]
    pub fn log(&self, x: FqElem) -> u32 {
        self.log[x.0 as usize]
    }

    #[inline]
    pub fn exp(&self, k: u32) -> FqElem {
        if k == Self::ZERO {
            FqElem::ZERO
        } else {
            FqElem(self.exp[k as usize] as u64)
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == Self::ZERO || b == Self::ZERO {
            return Self::ZERO;
        }
        let s = a + b;
        if s >= self.group_order {
            s - self.group_order
        } else {
            s
        }
    }

    /// g^a + g^b = g^a (1 + g^(b-a)).
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == Self::ZERO {
            return b;
        }
        if b == Self::ZERO {
            return a;
        }
        let n = self.group_order;
        let d = if b >= a { b - a } else { b + n - a };
        let z = self.zech[d as usize];
        if z == Self::ZERO {
            return Self::ZERO;
        }
        let s = a + z;
        if s >= n {
            s - n
        } else {
            s
        }
    }

    /// Multiplication by -1, which is g^((Q-1)/2).
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == Self::ZERO {
            return a;
        }
        let s = a + self.group_order / 2;
        if s >= self.group_order {
            s - self.group_order
        } else {
            s
        }
    }

    #[inline]
    pub fn squareness(&self, a: u32) -> Squareness {
        if a == Self::ZERO {
            Squareness::Zero
        } else if a & 1 == 0 {
            Squareness::Square
        } else {
            Squareness::NonSquare
        }
    }
}

/// The field F_{p^r}, with a deterministic modulus.
#[derive(Clone, Debug)]
pub struct FieldDesc {
    p: u64,
    degree: u32,
    order: u64,
    modulus: Vec<u64>,
    tables: Option<LogTables>,
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for FieldDesc {}

impl FieldDesc {
    /// Builds F_{p^r} with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u64, r: u32) -> Result<Self, FieldError> {
        Self::with_max_order(p, r, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(p: u64, r: u32, max_order: u64) -> Result<Self, FieldError> {
        if p == 2 || !fp_poly::is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        if p >= 1 << 31 {
            return Err(FieldError::TooLarge { p, r });
        }
        if r == 0 || r as usize > MAX_DEGREE {
            return Err(FieldError::BadDegree(r));
        }
        let order = checked_pow(p, r).filter(|&q| q <= max_order).ok_or(FieldError::TooLarge { p, r })?;
        let modulus = smallest_irreducible(p, r as usize);
        let mut field = FieldDesc { p, degree: r, order, modulus, tables: None };
        if order <= TABLE_THRESHOLD {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of elements Q = p^r.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic modulus, coefficients low-to-high (length r + 1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn tables(&self) -> Option<&LogTables> {
        self.tables.as_ref()
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.order).map(FqElem)
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, c: i64) -> FqElem {
        FqElem(c.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        let mut code = 0u64;
        for &c in coeffs[..coeffs.len().min(self.degree as usize)].iter().rev() {
            code = code * self.p + c % self.p;
        }
        FqElem(code)
    }

    pub fn coeffs(&self, x: FqElem) -> Vec<u64> {
        let mut d = [0u64; MAX_DEGREE];
        self.digits(x, &mut d);
        d[..self.degree as usize].to_vec()
    }

    #[inline]
    fn digits(&self, x: FqElem, out: &mut [u64; MAX_DEGREE]) {
        let mut c = x.0;
        for o in out.iter_mut().take(self.degree as usize) {
            *o = c % self.p;
            c /= self.p;
        }
    }

    #[inline]
    fn undigits(&self, d: &[u64]) -> FqElem {
        let mut code = 0u64;
        for &c in d[..self.degree as usize].iter().rev() {
            code = code * self.p + c;
        }
        FqElem(code)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.degree == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut code, mut mult) = (a.0, 0u64, 1u64);
        let mut y = b.0;
        for _ in 0..self.degree {
            let s = (x % self.p + y % self.p) % self.p;
            code += s * mult;
            mult = mult.wrapping_mul(self.p);
            x /= self.p;
            y /= self.p;
        }
        FqElem(code)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let mut d = [0u64; MAX_DEGREE];
        self.digits(a, &mut d);
        for c in d.iter_mut().take(self.degree as usize) {
            *c = (self.p - *c) % self.p;
        }
        self.undigits(&d)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        if let Some(t) = &self.tables {
            return t.exp(t.mul(t.log(a), t.log(b)));
        }
        self.mul_schoolbook(a, b)
    }

    /// Polynomial multiplication followed by reduction modulo the field modulus.
    pub fn mul_schoolbook(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p;
        let r = self.degree as usize;
        if r == 1 {
            return FqElem(fp_poly::mul_mod_p(a.0, b.0, p));
        }
        let mut da = [0u64; MAX_DEGREE];
        let mut db = [0u64; MAX_DEGREE];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0u128; 2 * MAX_DEGREE];
        for i in 0..r {
            if da[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] += da[i] as u128 * db[j] as u128;
            }
        }
        let mut red = [0u64; 2 * MAX_DEGREE];
        for k in 0..2 * r - 1 {
            red[k] = (prod[k] % p as u128) as u64;
        }
        for k in (r..2 * r - 1).rev() {
            let c = red[k];
            if c == 0 {
                continue;
            }
            red[k] = 0;
            // x^r = -(m_0 + ... + m_{r-1} x^{r-1})
            for j in 0..r {
                let t = fp_poly::mul_mod_p(c, self.modulus[j], p);
                let idx = k - r + j;
                red[idx] = (red[idx] + p - t) % p;
            }
        }
        self.undigits(&red[..r])
    }

    pub fn square(&self, a: FqElem) -> FqElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        if let Some(t) = &self.tables {
            if a.is_zero() {
                return if e == 0 { FqElem::ONE } else { FqElem::ZERO };
            }
            let n = t.group_order as u64;
            let k = ((t.log(a) as u64 * (e % n)) % n) as u32;
            return t.exp(k);
        }
        let mut acc = FqElem::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        if let Some(t) = &self.tables {
            let k = t.log(a);
            return Some(t.exp(if k == 0 { 0 } else { t.group_order - k }));
        }
        Some(self.pow(a, self.order - 2))
    }

    pub fn is_square(&self, a: FqElem) -> Squareness {
        if let Some(t) = &self.tables {
            return t.squareness(t.log(a));
        }
        self.is_square_euler(a)
    }

    /// Euler's criterion a^((Q-1)/2), independent of the tables.
    pub fn is_square_euler(&self, a: FqElem) -> Squareness {
        if a.is_zero() {
            return Squareness::Zero;
        }
        let mut acc = FqElem::ONE;
        let mut b = a;
        let mut e = (self.order - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_schoolbook(acc, b);
            }
            b = self.mul_schoolbook(b, b);
            e >>= 1;
        }
        if acc == FqElem::ONE {
            Squareness::Square
        } else {
            Squareness::NonSquare
        }
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p)
    }

    fn is_primitive(&self, g: FqElem, factors: &[u64]) -> bool {
        let n = self.order - 1;
        factors.iter().all(|&l| {
            let mut acc = FqElem::ONE;
            let mut b = g;
            let mut e = n / l;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_schoolbook(acc, b);
                }
                b = self.mul_schoolbook(b, b);
                e >>= 1;
            }
            acc != FqElem::ONE
        })
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order;
        let n = (q - 1) as u32;
        let factors = fp_poly::prime_factors(q - 1);
        let g = (1..q)
            .map(FqElem)
            .find(|&g| self.is_primitive(g, &factors))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![LogTables::ZERO; q as usize];
        let mut x = FqElem::ONE;
        for (k, e) in exp.iter_mut().enumerate() {
            *e = x.0 as u32;
            log[x.0 as usize] = k as u32;
            x = self.mul_schoolbook(x, g);
        }
        let mut zech = vec![LogTables::ZERO; n as usize];
        for (k, z) in zech.iter_mut().enumerate() {
            let s = self.add(FqElem::ONE, FqElem(exp[k] as u64));
            *z = log[s.0 as usize];
        }
        LogTables { group_order: n, exp, log, zech }
    }

    /// Canonical embedding of `self` into `target`.
    pub fn embedding_into(&self, target: &FieldDesc) -> Result<Embedding, FieldError> {
        Embedding::new(self, target)
    }

    /// Image of `x` under the canonical embedding into `target`.
    pub fn embed(&self, x: FqElem, target: &FieldDesc) -> Result<FqElem, FieldError> {
        Ok(self.embedding_into(target)?.apply(target, x))
    }
}

fn checked_pow(p: u64, r: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..r {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// Lexicographically smallest monic irreducible of degree r, comparing c_0 first.
fn smallest_irreducible(p: u64, r: usize) -> Vec<u64> {
    let mut cand = vec![0u64; r + 1];
    cand[r] = 1;
    if r > 1 {
        // everything with c_0 = 0 is divisible by x
        cand[0] = 1;
    }
    loop {
        if fp_poly::is_irreducible(&cand, p) {
            return cand;
        }
        // increment (c_0, ..., c_{r-1}) as a base-p number with c_{r-1} least significant
        let mut i = r - 1;
        loop {
            cand[i] += 1;
            if cand[i] < p {
                break;
            }
            cand[i] = 0;
            assert!(i > 0, "an irreducible of every degree exists");
            i -= 1;
        }
    }
}

/// Ring embedding F_{p^a} -> F_{p^{ab}} sending x to the smallest root of the
/// source modulus in the target.
#[derive(Clone, Debug)]
pub struct Embedding {
    powers: Vec<FqElem>,
    p: u64,
}

impl Embedding {
    pub fn new(source: &FieldDesc, target: &FieldDesc) -> Result<Self, FieldError> {
        if source.p != target.p || !target.degree.is_multiple_of(source.degree) {
            return Err(FieldError::NotSubfield { source_degree: source.degree, target_degree: target.degree });
        }
        let a = source.degree as usize;
        let root = if a == 1 {
            FqElem::ZERO
        } else {
            let m: Vec<FqElem> = source.modulus.iter().map(|&c| FqElem(c)).collect();
            roots_in(target, &m).into_iter().min().ok_or(FieldError::NoRoot)?
        };
        let mut powers = Vec::with_capacity(a);
        let mut x = FqElem::ONE;
        for _ in 0..a {
            powers.push(x);
            x = target.mul(x, root);
        }
        Ok(Embedding { powers, p: source.p })
    }

    /// Image of the source generator x.
    pub fn generator_image(&self) -> FqElem {
        self.powers.get(1).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn apply(&self, target: &FieldDesc, x: FqElem) -> FqElem {
        let mut c = x.0;
        let mut acc = FqElem::ZERO;
        for &pw in &self.powers {
            let d = c % self.p;
            c /= self.p;
            if d != 0 {
                acc = target.add(acc, target.mul(FqElem(d), pw));
            }
        }
        acc
    }
}

type Poly = Vec<FqElem>;

fn ptrim(v: &mut Poly) {
    while v.last() == Some(&FqElem::ZERO) {
        v.pop();
    }
}

fn prem(f: &FieldDesc, a: &[FqElem], m: &[FqElem]) -> Poly {
    let mut r: Poly = a.to_vec();
    ptrim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("nonzero leading coefficient");
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = f.mul(*r.last().unwrap(), lead_inv);
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = f.sub(r[shift + j], f.mul(c, mj));
        }
        ptrim(&mut r);
    }
    r
}

fn pmul_rem(f: &FieldDesc, a: &[FqElem], b: &[FqElem], m: &[FqElem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FqElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    prem(f, &out, m)
}

fn pgcd(f: &FieldDesc, a: &[FqElem], b: &[FqElem]) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    ptrim(&mut x);
    ptrim(&mut y);
    while !y.is_empty() {
        let r = prem(f, &x, &y);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = f.inv(lead).unwrap();
        for c in x.iter_mut() {
            *c = f.mul(*c, li);
        }
    }
    x
}

fn pdiv_exact(f: &FieldDesc, a: &[FqElem], b: &[FqElem]) -> Poly {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]).unwrap();
    let mut q = vec![FqElem::ZERO; r.len().saturating_sub(db)];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = f.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = f.sub(r[shift + j], f.mul(c, bj));
        }
        ptrim(&mut r);
    }
    q
}

/// All roots in `f` of a polynomial that splits into distinct linear factors over `f`.
fn roots_in(f: &FieldDesc, m: &[FqElem]) -> Vec<FqElem> {
    let mut pending = vec![m.to_vec()];
    let mut roots = Vec::new();
    let half = (f.order - 1) / 2;
    while let Some(g) = pending.pop() {
        let deg = g.len() - 1;
        if deg == 0 {
            continue;
        }
        if deg == 1 {
            let li = f.inv(g[1]).unwrap();
            roots.push(f.neg(f.mul(g[0], li)));
            continue;
        }
        // Cantor-Zassenhaus with deterministic shifts delta = 0, 1, 2, ...
        let mut split = false;
        for delta in 0..f.order {
            let base = vec![FqElem(delta), FqElem::ONE];
            let mut acc = vec![FqElem::ONE];
            let mut b = prem(f, &base, &g);
            let mut e = half;
            while e > 0 {
                if e & 1 == 1 {
                    acc = pmul_rem(f, &acc, &b, &g);
                }
                b = pmul_rem(f, &b, &b, &g);
                e >>= 1;
            }
            if acc.is_empty() {
                acc.push(FqElem::ZERO);
            }
            acc[0] = f.sub(acc[0], FqElem::ONE);
            let h = pgcd(f, &g, &acc);
            let dh = h.len().saturating_sub(1);
            if dh > 0 && dh < deg {
                let other = pdiv_exact(f, &g, &h);
                pending.push(h);
                pending.push(other);
                split = true;
                break;
            }
        }
        if !split {
            // no split: g has no roots or is not squarefree in f
            return Vec::new();
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_convention() {
        let f = FieldDesc::new(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn rejects_even_and_composite() {
        assert_eq!(FieldDesc::new(2, 1), Err(FieldError::NotOddPrime(2)));
        assert_eq!(FieldDesc::new(9, 1), Err(FieldError::NotOddPrime(9)));
        assert!(matches!(FieldDesc::with_max_order(7, 5, 1000), Err(FieldError::TooLarge { .. })));
    }

    #[test]
    fn degree_five_over_f7() {
        let f = FieldDesc::new(7, 5).unwrap();
        assert_eq!(f.order(), 16807);
        assert!(fp_poly::is_irreducible(f.modulus(), 7));
        assert_eq!(FieldDesc::new(7, 5).unwrap().modulus(), f.modulus());
        assert!(f.tables().is_some());
    }

    #[test]
    fn f9_frobenius_is_identity_after_two_steps() {
        let f = FieldDesc::new(3, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.pow(x, 9), x);
            assert_eq!(f.mul_schoolbook(f.mul_schoolbook(x, x), x), f.pow(x, 3));
        }
    }

    #[test]
    fn squares_mod_7() {
        let f = FieldDesc::new(7, 1).unwrap();
        assert_eq!(f.is_square(FqElem(0)), Squareness::Zero);
        assert_eq!(f.is_square(FqElem(2)), Squareness::Square);
        assert_eq!(f.is_square(FqElem(3)), Squareness::NonSquare);
    }

    #[test]
    fn inverse_and_negation() {
        let f = FieldDesc::new(5, 3).unwrap();
        for x in f.elements().skip(1) {
            let y = f.inv(x).unwrap();
            assert_eq!(f.mul(x, y), FqElem::ONE);
            assert_eq!(f.add(x, f.neg(x)), FqElem::ZERO);
        }
        assert_eq!(f.inv(FqElem::ZERO), None);
    }

    #[test]
    fn untabled_field_arithmetic() {
        // 3^15 > 2^22 so no tables
        let f = FieldDesc::new(3, 15).unwrap();
        assert!(f.tables().is_none());
        let x = FqElem(123_456);
        let y = f.inv(x).unwrap();
        assert_eq!(f.mul(x, y), FqElem::ONE);
        assert_eq!(f.pow(x, f.order()), x);
    }

    #[test]
    fn embedding_f9_into_f81() {
        let src = FieldDesc::new(3, 2).unwrap();
        let dst = FieldDesc::new(3, 4).unwrap();
        let e = src.embedding_into(&dst).unwrap();
        assert_eq!(e.apply(&dst, FqElem::ZERO), FqElem::ZERO);
        assert_eq!(e.apply(&dst, FqElem::ONE), FqElem::ONE);
        assert_eq!(e.apply(&dst, FqElem(2)), FqElem(2));
        for x in src.elements() {
            for y in src.elements() {
                let s = e.apply(&dst, src.add(x, y));
                assert_eq!(s, dst.add(e.apply(&dst, x), e.apply(&dst, y)));
                let m = e.apply(&dst, src.mul(x, y));
                assert_eq!(m, dst.mul(e.apply(&dst, x), e.apply(&dst, y)));
            }
            assert_eq!(dst.pow(e.apply(&dst, x), 8), e.apply(&dst, src.pow(x, 8)));
        }
        // the chosen root is the smallest root of the modulus in F_81
        let g = e.generator_image();
        let m = src.modulus();
        let eval = |t: FqElem| m.iter().rev().fold(FqElem::ZERO, |acc, &c| dst.add(dst.mul(acc, t), FqElem(c)));
        assert_eq!(eval(g), FqElem::ZERO);
        assert!(dst.elements().take_while(|&t| t < g).all(|t| eval(t) != FqElem::ZERO));
    }

    #[test]
    fn embedding_rejects_non_subfield() {
        let src = FieldDesc::new(3, 2).unwrap();
        let dst = FieldDesc::new(3, 3).unwrap();
        assert!(src.embedding_into(&dst).is_err());
    }
}
