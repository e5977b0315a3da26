//! Exact algebra on Weil polynomials.
//!
//! Polynomials are `Vec<BigInt>` listed low degree first and normalised to constant
//! term 1, so `P(T) = prod (1 - w_i T)` and the `w_i` are the reciprocal roots.
//! Power sums `s_n = sum w_i^n` and coefficients are linked by
//! `s_n = -n a_n - sum_{i<n} a_i s_{n-i}`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::counting::CountReport;
use crate::error::WeilError;

/// Dimension of the abelian variety; P1 has degree 2G.
pub const GENUS: usize = 5;
pub const B1: usize = 2 * GENUS;
pub const B2: usize = B1 * (B1 - 1) / 2;

pub type Poly = Vec<BigInt>;

fn big(q: u64) -> BigInt {
    BigInt::from(q)
}

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Exact quotient `a / d` computed from the low end; `d[0]` must divide every
/// intermediate value. Returns `None` when the division leaves a remainder.
pub fn poly_div_exact(a: &[BigInt], d: &[BigInt]) -> Option<Poly> {
    let mut d = d.to_vec();
    trim(&mut d);
    let mut a = a.to_vec();
    trim(&mut a);
    if d[0].is_zero() || d.len() > a.len() {
        return if a.iter().all(Zero::is_zero) { Some(vec![BigInt::zero()]) } else { None };
    }
    let n = a.len() - d.len() + 1;
    let mut quo = vec![BigInt::zero(); n];
    for k in 0..n {
        let (c, rem) = a[k].div_rem(&d[0]);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, dj) in d.iter().enumerate() {
                a[k + j] -= &c * dj;
            }
        }
        quo[k] = c;
    }
    if a.iter().all(Zero::is_zero) {
        trim(&mut quo);
        Some(quo)
    } else {
        None
    }
}

/// `p(x)` for rational `x = num/den`, returned as an unreduced fraction.
fn eval_fraction(p: &[BigInt], num: &BigInt, den: &BigInt) -> (BigInt, BigInt) {
    let deg = p.len() - 1;
    let mut acc = BigInt::zero();
    let mut npow = BigInt::one();
    let mut dpows = vec![BigInt::one(); deg + 1];
    for k in 1..=deg {
        dpows[k] = &dpows[k - 1] * den;
    }
    for (k, c) in p.iter().enumerate() {
        acc += c * &npow * &dpows[deg - k];
        npow *= num;
    }
    (acc, dpows[deg].clone())
}

/// Power sums `s_1..s_n` of the reciprocal roots of a polynomial with constant term 1.
pub fn power_sums_of(coeffs: &[BigInt], n: usize) -> Vec<BigInt> {
    debug_assert!(coeffs[0].is_one());
    let a = |i: usize| coeffs.get(i).cloned().unwrap_or_default();
    let mut s: Vec<BigInt> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut v = -(a(m) * BigInt::from(m));
        for i in 1..m {
            if let Some(c) = coeffs.get(i) {
                v -= c * &s[m - i - 1];
            }
        }
        s.push(v);
    }
    s
}

/// Inverse of [`power_sums_of`]: coefficients `a_0..a_n` from `s_1..s_n`.
pub fn coeffs_from_power_sums(s: &[BigInt]) -> Result<Poly, WeilError> {
    let mut a = vec![BigInt::one()];
    for m in 1..=s.len() {
        let mut v = s[m - 1].clone();
        for i in 1..m {
            v += &a[i] * &s[m - i - 1];
        }
        let (c, rem) = v.div_rem(&BigInt::from(m));
        if !rem.is_zero() {
            return Err(WeilError::NonIntegralNewton { step: m });
        }
        a.push(-c);
    }
    Ok(a)
}

/// Reduced fraction with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalValue {
    num: BigInt,
    den: BigInt,
}

impl RationalValue {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() { (num, den) } else { (num / &g, den / &g) };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            den = BigInt::one();
        }
        RationalValue { num, den }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        RationalValue { num: n.into(), den: BigInt::one() }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn div(&self, other: &RationalValue) -> RationalValue {
        RationalValue::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn mul(&self, other: &RationalValue) -> RationalValue {
        RationalValue::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::NAN);
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        n / d
    }

    /// Human readable prime factorisation, e.g. `2^18*3^5*157/5^10` or `3/(5*7)`.
    pub fn factored(&self) -> String {
        let part = |n: &BigInt| -> String {
            let (fs, rest) = trial_factor(n.magnitude(), TRIAL_BOUND);
            let mut terms: Vec<String> =
                fs.iter().map(|(p, e)| if *e == 1 { p.to_string() } else { alloc::format!("{p}^{e}") }).collect();
            if !rest.is_one() {
                terms.push(rest.to_string());
            }
            if terms.is_empty() {
                terms.push("1".into());
            }
            terms.join("*")
        };
        let sign = if self.num.is_negative() { "-" } else { "" };
        if self.den.is_one() {
            alloc::format!("{sign}{}", part(&self.num))
        } else {
            let den = part(&self.den);
            if den.contains('*') {
                alloc::format!("{sign}{}/({den})", part(&self.num))
            } else {
                alloc::format!("{sign}{}/{den}", part(&self.num))
            }
        }
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

pub const TRIAL_BOUND: u64 = 10_000_000;

/// Trial division by primes up to `bound`; returns the factors found and the
/// unfactored cofactor (1 when the factorisation is complete).
pub fn trial_factor(n: &BigUint, bound: u64) -> (Vec<(u64, u32)>, BigUint) {
    let mut n = n.clone();
    let mut out = Vec::new();
    if n.is_zero() {
        return (out, n);
    }
    let mut d = 2u64;
    while d <= bound {
        let bd = BigUint::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        loop {
            let (qt, r) = n.div_rem(&bd);
            if !r.is_zero() {
                break;
            }
            n = qt;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() && n <= BigUint::from(bound) * BigUint::from(bound) {
        out.push((n.to_u64().expect("cofactor below bound^2 fits"), 1));
        n = BigUint::one();
    }
    (out, n)
}

/// Whether `x` is the square of a rational number. Numerator and denominator are
/// reduced, so this holds iff both are perfect squares and `x >= 0`.
pub fn is_rational_square(x: &RationalValue) -> bool {
    if x.num.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(&x.num) && sq(&x.den)
}

/// Integer polynomial with constant term 1 whose reciprocal roots should have
/// absolute value `q^(weight/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilPolynomial {
    coeffs: Poly,
    weight: u32,
    q: u64,
}

impl WeilPolynomial {
    pub fn new(coeffs: Poly, weight: u32, q: u64) -> Self {
        assert!(coeffs.first().is_some_and(One::is_one), "constant coefficient must be 1");
        WeilPolynomial { coeffs, weight, q }
    }

    pub fn from_i64(coeffs: &[i64], weight: u32, q: u64) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), weight, q)
    }

    /// `1 + q^5 T^10`: the trivial trace vector.
    pub fn trivial(q: u64) -> Self {
        let mut c = vec![BigInt::zero(); B1 + 1];
        c[0] = BigInt::one();
        c[B1] = big(q).pow(GENUS as u32);
        Self::new(c, 1, q)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn power_sums(&self, n: usize) -> Vec<BigInt> {
        power_sums_of(&self.coeffs, n)
    }

    /// Sign c with `q^{wd/2} T^d P(1/(q^w T)) = c P(T)`; `None` if no such sign exists.
    pub fn functional_equation_sign(&self) -> Option<i8> {
        let d = self.degree() as i64;
        let w = self.weight as i64;
        if (w * d) % 2 != 0 {
            return None;
        }
        let mut sign: Option<i8> = None;
        for k in 0..=d {
            // [T^k] of the left side is a_{d-k} q^{wd/2 - w(d-k)}
            let e = w * d / 2 - w * (d - k);
            let a = &self.coeffs[(d - k) as usize];
            let b = &self.coeffs[k as usize];
            let (l, r) = if e >= 0 {
                (a * big(self.q).pow(e as u32), b.clone())
            } else {
                (a.clone(), b * big(self.q).pow((-e) as u32))
            };
            if l.is_zero() && r.is_zero() {
                continue;
            }
            let s = if l == r {
                1
            } else if l == -&r {
                -1
            } else {
                return None;
            };
            if sign.is_some_and(|t| t != s) {
                return None;
            }
            sign = Some(s);
        }
        sign.or(Some(1))
    }

    /// Multiplicity of the reciprocal root `q^m`.
    pub fn root_multiplicity(&self, root: &BigInt) -> u32 {
        let lin = vec![BigInt::one(), -root.clone()];
        let mut p = self.coeffs.clone();
        let mut m = 0;
        while let Some(qt) = poly_div_exact(&p, &lin) {
            if p.len() <= 1 {
                break;
            }
            p = qt;
            m += 1;
        }
        m
    }

    /// `P(qT)` for a Weil polynomial of weight w: weight w + 2.
    pub fn twist(&self) -> WeilPolynomial {
        let mut qk = BigInt::one();
        let c = self
            .coeffs
            .iter()
            .map(|a| {
                let v = a * &qk;
                qk *= self.q;
                v
            })
            .collect();
        WeilPolynomial::new(c, self.weight + 2, self.q)
    }
}

/// Coefficients `a_1..a_5` of P1 from the traces, completed by the functional
/// equation `a_{10-k} = q^{5-k} a_k`.
pub fn p1_from_traces(q: u64, s: &[i64]) -> Result<WeilPolynomial, WeilError> {
    if s.len() < GENUS {
        return Err(WeilError::MissingTraces { needed: GENUS, got: s.len() });
    }
    let sb: Vec<BigInt> = s[..GENUS].iter().map(|&v| BigInt::from(v)).collect();
    let head = coeffs_from_power_sums(&sb)?;
    Ok(complete_p1(q, &head))
}

/// `a_0..a_5` to the full degree 10 polynomial.
pub fn complete_p1(q: u64, head: &[BigInt]) -> WeilPolynomial {
    let mut c = vec![BigInt::zero(); B1 + 1];
    c[..=GENUS].clone_from_slice(&head[..=GENUS]);
    for k in 0..GENUS {
        c[B1 - k] = &head[k] * big(q).pow((GENUS - k) as u32);
    }
    WeilPolynomial::new(c, 1, q)
}

/// `s_r = -D_r` for the rows r = 1.. present in the report.
pub fn traces_from_counts(report: &CountReport) -> Result<Vec<i64>, WeilError> {
    let mut out = Vec::new();
    for r in 1..=GENUS as u32 {
        match report.row(r) {
            Some(row) => out.push(-row.d),
            None => return Err(WeilError::MissingTraces { needed: GENUS, got: out.len() }),
        }
    }
    Ok(out)
}

/// Polynomial whose reciprocal roots are the products `w_i w_j`, i < j.
pub fn wedge_square(p: &WeilPolynomial) -> Result<WeilPolynomial, WeilError> {
    let n = p.degree();
    assert!(n >= 2);
    let m = n * (n - 1) / 2;
    let s = p.power_sums(2 * m);
    let two = BigInt::from(2);
    let mut pair = Vec::with_capacity(m);
    for r in 1..=m {
        let v = &s[r - 1] * &s[r - 1] - &s[2 * r - 1];
        let (h, rem) = v.div_rem(&two);
        if !rem.is_zero() {
            return Err(WeilError::InexactDivision("pair power sums"));
        }
        pair.push(h);
    }
    let c = coeffs_from_power_sums(&pair).map_err(|_| WeilError::InexactDivision("wedge Newton step"))?;
    Ok(WeilPolynomial::new(c, 2 * p.weight, p.q))
}

/// Largest m with `(1 - qT)^m | P2`.
pub fn picard_number(p2: &WeilPolynomial) -> u32 {
    p2.root_multiplicity(&big(p2.q))
}

/// Cyclotomic polynomial `Phi_n`, low degree first.
pub fn cyclotomic_poly(n: u32) -> Poly {
    assert!(n >= 1);
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_poly(d)).expect("Phi_d divides T^n - 1");
        }
    }
    num
}

fn euler_phi(mut n: u32) -> u32 {
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

/// Number of reciprocal roots `g` of P2 for which `g / q` is a root of unity.
pub fn geometric_picard(p2: &WeilPolynomial) -> u32 {
    let d = p2.degree();
    // G(T) = T^d P2(q/T) / ... : coefficient of T^j is a_{d-j} q^j; roots are g/q
    let mut qj = BigInt::one();
    let mut g: Poly = Vec::with_capacity(d + 1);
    for j in 0..=d {
        g.push(&p2.coeffs[d - j] * &qj);
        qj *= p2.q;
    }
    let mut total = 0;
    for n in 1..=200u32 {
        let phi = euler_phi(n);
        if phi as usize > d {
            continue;
        }
        let c = cyclotomic_poly(n);
        while g.len() > c.len() - 1 {
            match poly_div_exact(&g, &c) {
                Some(qt) => {
                    g = qt;
                    total += phi;
                }
                None => break,
            }
        }
    }
    total
}

/// `R(1/q)` where `P2 = (1 - qT)^rho R`.
pub fn artin_tate(p2: &WeilPolynomial, rho: u32) -> Result<RationalValue, WeilError> {
    let lin = vec![BigInt::one(), -big(p2.q)];
    let mut r = p2.coeffs.clone();
    for _ in 0..rho {
        r = poly_div_exact(&r, &lin).ok_or(WeilError::InexactDivision("Artin-Tate quotient"))?;
    }
    let (n, d) = eval_fraction(&r, &BigInt::one(), &big(p2.q));
    Ok(RationalValue::new(n, d))
}

/// `N_r(F) = 1 + q^r + q^{2r} + q^{3r} - q^r s_r`.
pub fn nr_cubic(q: u64, r: u32, s_r: &BigInt) -> BigInt {
    let qr = big(q).pow(r);
    BigInt::one() + &qr + qr.pow(2) + qr.pow(3) - &qr * s_r
}

/// `N_r(S) = 1 - (1 + q^r) s_r + (s_r^2 - s_{2r})/2 + q^{2r}`.
pub fn nr_fano(p1: &WeilPolynomial, r: u32) -> Result<BigInt, WeilError> {
    let s = p1.power_sums(2 * r as usize);
    let sr = &s[r as usize - 1];
    let s2r = &s[2 * r as usize - 1];
    let qr = big(p1.q).pow(r);
    let (pair, rem) = (sr * sr - s2r).div_rem(&BigInt::from(2));
    if !rem.is_zero() {
        return Err(WeilError::InexactDivision("pair power sums"));
    }
    let n = BigInt::one() - (BigInt::one() + &qr) * sr + pair + qr.pow(2);
    if n.is_negative() {
        return Err(WeilError::NegativeCount { r, count: n.to_string() });
    }
    Ok(n)
}

/// `prod numerator / prod denominator`, every factor with constant term 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredZeta {
    pub numerator: Vec<Poly>,
    pub denominator: Vec<Poly>,
}

impl FactoredZeta {
    /// Power series coefficients `z_0..z_n`.
    pub fn series(&self, n: usize) -> Vec<BigInt> {
        let mut z = vec![BigInt::zero(); n + 1];
        z[0] = BigInt::one();
        for f in &self.numerator {
            let mut prod = poly_mul(&z, f);
            prod.resize(n + 1, BigInt::zero());
            z = prod;
        }
        for f in &self.denominator {
            // z / f as a power series; f[0] = 1
            let mut out = vec![BigInt::zero(); n + 1];
            for k in 0..=n {
                let mut v = z[k].clone();
                for j in 1..f.len().min(k + 1) {
                    v -= &f[j] * &out[k - j];
                }
                out[k] = v;
            }
            z = out;
        }
        z
    }

    /// `N_1..N_n` from `T Z'/Z = sum N_r T^r`.
    pub fn point_counts(&self, n: usize) -> Vec<BigInt> {
        let z = self.series(n);
        let mut counts: Vec<BigInt> = Vec::with_capacity(n);
        for m in 1..=n {
            let mut v = &z[m] * BigInt::from(m);
            for r in 1..m {
                v -= &counts[r - 1] * &z[m - r];
            }
            counts.push(v);
        }
        counts
    }
}

fn linear(root: BigInt) -> Poly {
    vec![BigInt::one(), -root]
}

/// `Z(F,T) = P1(qT) / ((1-T)(1-qT)(1-q^2 T)(1-q^3 T))`.
pub fn zeta_cubic(p1: &WeilPolynomial) -> FactoredZeta {
    let q = big(p1.q);
    FactoredZeta { numerator: vec![p1.twist().coeffs], denominator: (0..4).map(|k| linear(q.pow(k))).collect() }
}

/// `P3(S,T) = q^15 T^10 P1(1/(q^2 T))`.
pub fn p3_fano(p1: &WeilPolynomial) -> Result<WeilPolynomial, WeilError> {
    let d = p1.degree();
    let q = big(p1.q);
    let mut c = Vec::with_capacity(d + 1);
    // [T^j] = a_{d-j} q^{15 - 2(d-j)}
    for j in 0..=d {
        let e = 3 * GENUS as i64 - 2 * (d - j) as i64;
        let a = &p1.coeffs[d - j];
        if e >= 0 {
            c.push(a * q.pow(e as u32));
        } else {
            let (v, rem) = a.div_rem(&q.pow((-e) as u32));
            if !rem.is_zero() {
                return Err(WeilError::InexactDivision("P3 of the Fano surface"));
            }
            c.push(v);
        }
    }
    Ok(WeilPolynomial::new(c, 3, p1.q))
}

/// `Z(S,T) = P1 P3 / ((1-T) P2 (1-q^2 T))`.
pub fn zeta_fano(p1: &WeilPolynomial, p2: &WeilPolynomial) -> Result<FactoredZeta, WeilError> {
    let q = big(p1.q);
    Ok(FactoredZeta {
        numerator: vec![p1.coeffs.clone(), p3_fano(p1)?.coeffs],
        denominator: vec![linear(BigInt::one()), p2.coeffs.clone(), linear(q.pow(2))],
    })
}

/// Outcome of a numerical root-modulus check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCheck {
    pub on_circle: bool,
    /// max over roots of `| |z| - m |`
    pub max_deviation: f64,
    /// max inclusion radius `n |P(z)| / |lc prod (z - z_j)|`
    pub error_bound: f64,
}

fn horner_c(p: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// All complex roots by Aberth iteration.
pub fn aberth_roots(p: &[f64]) -> Result<Vec<Complex64>, WeilError> {
    let n = p.len() - 1;
    assert!(n >= 1 && p[n] != 0.0);
    // initial points on a circle of the Cauchy-ish radius
    let radius = {
        let mut r: f64 = 0.0;
        for k in 0..n {
            let v = (p[k] / p[n]).abs().powf(1.0 / (n - k) as f64);
            r = r.max(v);
        }
        r.max(1e-3)
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    let mut last_step = f64::INFINITY;
    for _ in 0..500 {
        let mut step: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = horner_c(p, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            z[i] -= w;
            step = step.max(w.norm() / z[i].norm().max(1e-300));
        }
        last_step = step;
        if step < 1e-15 {
            break;
        }
    }
    if !last_step.is_finite() || last_step > 1e-9 {
        return Err(WeilError::NoConvergence { residual: last_step });
    }
    Ok(z)
}

/// Squarefree part of an integer polynomial (content ignored): `p / gcd(p, p')`.
fn squarefree_part(p: &[BigInt]) -> Poly {
    let dp: Poly = p.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect();
    if dp.iter().all(Zero::is_zero) {
        return p.to_vec();
    }
    let g = poly_gcd(p, &dp);
    if g.len() <= 1 {
        return p.to_vec();
    }
    poly_div_rational(p, &g)
}

fn primitive(p: &mut Poly) {
    let mut c = BigInt::zero();
    for x in p.iter() {
        c = c.gcd(x);
    }
    if !c.is_zero() && !c.is_one() {
        for x in p.iter_mut() {
            *x /= &c;
        }
    }
    if p.last().is_some_and(Signed::is_negative) {
        for x in p.iter_mut() {
            *x = -x.clone();
        }
    }
}

/// Pseudo-remainder of `a` by `b` (high-degree end).
fn prem(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut r = a.to_vec();
    trim(&mut r);
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        r.pop();
        trim(&mut r);
        primitive(&mut r);
    }
    if r.is_empty() {
        r.push(BigInt::zero());
    }
    r
}

fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Poly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    primitive(&mut a);
    primitive(&mut b);
    while !(b.len() == 1 && b[0].is_zero()) {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = prem(&a, &b);
        a = b;
        b = r;
    }
    primitive(&mut a);
    a
}

/// `a / b` over Q scaled back to a primitive integer polynomial (high-end division).
fn poly_div_rational(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let n = r.len() - db;
    // scale r so the quotient is integral
    let scale = lb.pow(n as u32);
    for x in r.iter_mut() {
        *x *= &scale;
    }
    let mut quo = vec![BigInt::zero(); n];
    for k in (0..n).rev() {
        let c = &r[k + db] / &lb;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        quo[k] = c;
    }
    primitive(&mut quo);
    quo
}

/// Whether every root of `p` (as a polynomial in T) has modulus `m` within `tol`.
/// Repeated factors are removed exactly before root finding.
pub fn roots_on_circle(p: &WeilPolynomial, m: f64, tol: f64) -> Result<RootCheck, WeilError> {
    roots_on_circle_coeffs(&p.coeffs, m, tol)
}

pub fn roots_on_circle_coeffs(coeffs: &[BigInt], m: f64, tol: f64) -> Result<RootCheck, WeilError> {
    let sf = squarefree_part(coeffs);
    let lc = sf.last().unwrap().to_f64().unwrap_or(f64::NAN);
    let f: Vec<f64> = sf.iter().map(|c| c.to_f64().unwrap_or(f64::NAN) / lc).collect();
    assert!(f.len() >= 2, "constant polynomial");
    let z = aberth_roots(&f)?;
    let mut dev: f64 = 0.0;
    let mut bound: f64 = 0.0;
    for (i, zi) in z.iter().enumerate() {
        dev = dev.max((zi.norm() - m).abs());
        let (v, _) = horner_c(&f, *zi);
        let mut prod = Complex64::new(1.0, 0.0);
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                prod *= zi - zj;
            }
        }
        bound = bound.max(z.len() as f64 * v.norm() / prod.norm());
    }
    Ok(RootCheck { on_circle: dev <= tol, max_deviation: dev, error_bound: bound })
}

/// Radius `(d/j) q^{j/2}` with d = 10, j = 5.
pub fn last_trace_radius(q: u64) -> f64 {
    (B1 as f64 / GENUS as f64) * (q as f64).powf(GENUS as f64 / 2.0)
}

pub const LAST_TRACE_MARGIN: i64 = 16;

/// Centre of the disk containing `a_5`: by Newton, `5 a_5 = -s_5 - sum a_i s_{5-i}`
/// and `|s_5| <= 10 q^{5/2}`, so the centre is `-(sum_{i<5} a_i s_{5-i}) / 5`.
pub fn last_trace_centre(prefix: &[i64; 4]) -> RationalValue {
    let head: Vec<BigInt> = core::iter::once(1).chain(prefix.iter().copied()).map(BigInt::from).collect();
    let s = power_sums_of(&head, 4);
    let acc: BigInt = (1..=4).map(|i| &head[i] * &s[4 - i]).sum();
    RationalValue::new(-acc, BigInt::from(GENUS))
}

/// Integer window scanned for `a_5`: the disk plus a safety margin.
pub fn last_trace_window(q: u64, prefix: &[i64; 4]) -> (i64, i64) {
    let c = last_trace_centre(prefix).to_f64();
    let r = last_trace_radius(q);
    ((c - r).floor() as i64 - LAST_TRACE_MARGIN, (c + r).ceil() as i64 + LAST_TRACE_MARGIN)
}

/// Values of `a_5` for which the prefix `1, a_1..a_4, a_5` completes to a
/// polynomial with every root of modulus `q^{-1/2}` (within `tol`).
pub fn feasible_last_trace(q: u64, prefix: &[i64; 4], tol: f64) -> Vec<i64> {
    let (lo, hi) = last_trace_window(q, prefix);
    let m = (q as f64).powf(-0.5);
    (lo..=hi)
        .filter(|&a5| {
            let p = p1_from_prefix(q, prefix, a5);
            roots_on_circle(&p, m, tol).is_ok_and(|c| c.on_circle)
        })
        .collect()
}

pub fn p1_from_prefix(q: u64, prefix: &[i64; 4], a5: i64) -> WeilPolynomial {
    let head: Vec<BigInt> =
        core::iter::once(1).chain(prefix.iter().copied()).chain(core::iter::once(a5)).map(BigInt::from).collect();
    complete_p1(q, &head)
}

/// Everything derived from the traces.
#[derive(Debug, Clone, PartialEq)]
pub struct WeilData {
    pub q: u64,
    pub traces: Vec<i64>,
    pub p1: WeilPolynomial,
    pub p2: WeilPolynomial,
    pub rho: u32,
    pub rho_geom: Option<u32>,
    pub artin_tate: RationalValue,
    /// `q^10 A_q` is an integer
    pub artin_tate_integral: bool,
    pub p1_functional_equation: bool,
    pub p2_sign: Option<i8>,
    pub roots: Option<RootCheck>,
}

impl WeilData {
    pub fn from_traces(q: u64, traces: &[i64], geometric: bool, tol: Option<f64>) -> Result<Self, WeilError> {
        let p1 = p1_from_traces(q, traces)?;
        let p2 = wedge_square(&p1)?;
        let rho = picard_number(&p2);
        let artin_tate = artin_tate(&p2, rho)?;
        let scaled = artin_tate.mul(&RationalValue::from_int(big(q).pow(10)));
        let roots = match tol {
            Some(t) => Some(roots_on_circle(&p1, (q as f64).powf(-0.5), t)?),
            None => None,
        };
        Ok(WeilData {
            q,
            traces: traces[..GENUS].to_vec(),
            p1_functional_equation: p1.functional_equation_sign() == Some(1),
            p2_sign: p2.functional_equation_sign(),
            rho_geom: geometric.then(|| geometric_picard(&p2)),
            artin_tate_integral: scaled.denom().is_one(),
            p1,
            p2,
            rho,
            artin_tate,
            roots,
        })
    }

    pub fn nr_cubic(&self, r: u32) -> BigInt {
        let s = self.p1.power_sums(r as usize);
        nr_cubic(self.q, r, &s[r as usize - 1])
    }

    pub fn nr_fano(&self, r: u32) -> Result<BigInt, WeilError> {
        nr_fano(&self.p1, r)
    }
}

/// Sign helper for display of big integers in tests and reports.
pub fn sign_of(x: &BigInt) -> Sign {
    x.sign()
}
