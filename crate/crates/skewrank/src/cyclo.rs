//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! An element is a sparse rational combination of 1, zeta, ..., zeta^(phi(m)-1),
//! reduced modulo the m-th cyclotomic polynomial Phi_m. This basis is canonical:
//! two elements of the same order are equal iff their coefficient maps are
//! identical. Mixed-order operands are promoted to the lcm order first; there is
//! no automatic descent to subfields (except the free case of a value whose
//! canonical form is a plain rational, which is stored at order 1).

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

fn divisors(m: u32) -> Vec<u32> {
    let mut ds = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            ds.push(d);
            if d != m / d {
                ds.push(m / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    ds
}

struct CycloPoly {
    /// Coefficients of Phi_m, ascending degree, monic, integer.
    ints: Vec<BigInt>,
    /// Same coefficients as rationals, to avoid conversion in hot loops.
    rats: Vec<Rational>,
}

static PHI_CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloPoly>>>> = OnceLock::new();

/// Coefficients of the m-th cyclotomic polynomial, computed by dividing
/// x^m - 1 by Phi_d for every proper divisor d of m. Results are cached.
fn cyclotomic_poly(m: u32) -> Arc<CycloPoly> {
    let cache = PHI_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    for d in divisors(m) {
        if cache.lock().unwrap().contains_key(&d) {
            continue;
        }
        let ints = if d == 1 {
            vec![BigInt::from(-1), BigInt::one()]
        } else {
            // x^d - 1
            let mut num = vec![BigInt::zero(); d as usize + 1];
            num[0] = BigInt::from(-1);
            num[d as usize] = BigInt::one();
            for e in divisors(d) {
                if e == d {
                    continue;
                }
                let phi_e = cache.lock().unwrap().get(&e).unwrap().clone();
                num = int_poly_exact_div(&num, &phi_e.ints);
            }
            num
        };
        let rats = ints.iter().map(|c| Rational::from_integer(c.clone())).collect();
        cache
            .lock()
            .unwrap()
            .insert(d, Arc::new(CycloPoly { ints, rats }));
    }
    cache.lock().unwrap().get(&m).unwrap().clone()
}

/// Exact division of integer polynomials with monic divisor.
fn int_poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for i in 0..=dd {
            let t = &den[i] * &c;
            rem[k + i] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: BTreeMap<u32, Rational>,
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        CyclotomicNumber { order: 1, coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, r);
        }
        CyclotomicNumber { order: 1, coeffs }
    }

    /// zeta_m^k. The pair (m, k) is reduced by gcd, so pure roots are stored at
    /// their intrinsic order: rootOfUnity(6, 2) has order 3, rootOfUnity(4, 2) = -1.
    pub fn root_of_unity(m: u32, k: i64) -> Self {
        assert!(m >= 1, "order must be positive");
        let k = k.rem_euclid(m as i64) as u32;
        if k == 0 {
            return Self::one();
        }
        let g = k.gcd(&m);
        let (m, k) = (m / g, k / g);
        Self::from_terms(m, vec![(k, Rational::one())])
    }

    /// Builds a canonical element of Q(zeta_m) from arbitrary (exponent, coeff)
    /// pairs; exponents are folded mod m and reduced mod Phi_m.
    pub fn from_terms(order: u32, terms: Vec<(u32, Rational)>) -> Self {
        assert!(order >= 1);
        let phi = euler_phi(order);
        let mut needs_reduction = false;
        let mut map: BTreeMap<u32, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let e = e % order;
            if e >= phi {
                needs_reduction = true;
            }
            let entry = map.entry(e).or_insert_with(Rational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        let coeffs = if needs_reduction {
            let mut dense = vec![Rational::zero(); order as usize];
            for (e, c) in map {
                dense[e as usize] = c;
            }
            reduce_dense(order, dense)
        } else {
            map
        };
        Self::normalized(order, coeffs)
    }

    fn normalized(order: u32, coeffs: BTreeMap<u32, Rational>) -> Self {
        // Free descent: canonical form with only the zeta^0 term is a rational.
        if order != 1 && coeffs.keys().all(|&k| k == 0) {
            return CyclotomicNumber { order: 1, coeffs };
        }
        CyclotomicNumber { order, coeffs }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|r| r.is_one()).unwrap_or(false)
    }

    /// Some(r) iff the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.is_empty() {
            return Some(Rational::zero());
        }
        if self.coeffs.len() == 1 {
            if let Some(c) = self.coeffs.get(&0) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Canonical (exponent, coefficient) pairs, ascending exponent.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    /// Reinterprets the element in Q(zeta_m) for m a multiple of the current order.
    pub fn promote(&self, m: u32) -> Result<Self> {
        if m % self.order != 0 {
            return Err(Error::OrderMismatch { from: self.order, to: m });
        }
        Ok(self.promote_unchecked(m))
    }

    fn promote_unchecked(&self, m: u32) -> Self {
        if m == self.order {
            return self.clone();
        }
        let f = m / self.order;
        let terms: Vec<(u32, Rational)> =
            self.coeffs.iter().map(|(&k, c)| (k * f, c.clone())).collect();
        let mut x = Self::from_terms(m, terms);
        // Pin the requested order even when the value is rational, so that both
        // operands of a mixed-order operation really end up at the same order.
        x.order = m;
        x
    }

    fn common_order(&self, other: &Self) -> u32 {
        lcm_u32(self.order, other.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.order == other.order {
            let mut coeffs = self.coeffs.clone();
            for (&k, c) in &other.coeffs {
                let entry = coeffs.entry(k).or_insert_with(Rational::zero);
                *entry += c;
            }
            coeffs.retain(|_, c| !c.is_zero());
            return Self::normalized(self.order, coeffs);
        }
        let m = self.common_order(other);
        self.promote_unchecked(m).add(&other.promote_unchecked(m))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect();
        CyclotomicNumber { order: self.order, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k, c * r)).collect();
        CyclotomicNumber { order: self.order, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        let m = self.common_order(other);
        let a = self.promote_unchecked(m);
        let b = other.promote_unchecked(m);
        let phi = euler_phi(m) as usize;
        let mut dense = vec![Rational::zero(); 2 * phi - 1];
        for (&ka, ca) in &a.coeffs {
            for (&kb, cb) in &b.coeffs {
                dense[(ka + kb) as usize] += ca * cb;
            }
        }
        Self::normalized(m, reduce_dense(m, dense))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Phi_m.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        let m = self.order;
        let phi = euler_phi(m) as usize;
        let mut a = vec![Rational::zero(); phi];
        for (&k, c) in &self.coeffs {
            a[k as usize] = c.clone();
        }
        trim(&mut a);
        // Invariant: s1 * a == r1 (mod Phi_m).
        let mut r0: Vec<Rational> = cyclotomic_poly(m).rats.clone();
        let mut s0 = vec![];
        let mut r1 = a;
        let mut s1 = vec![Rational::one()];
        while poly_deg(&r1) > 0 {
            let (q, rem) = poly_divmod(&r0, &r1);
            let s_new = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s_new);
        }
        assert!(!r1.is_empty(), "Phi_m divides a nonzero element of smaller degree");
        let c = r1[0].clone();
        let inv_terms = s1
            .into_iter()
            .enumerate()
            .map(|(k, v)| (k as u32, v / &c))
            .collect();
        Ok(Self::from_terms(m, inv_terms))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.invert()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.invert()?.pow(-e);
        }
        let mut base = self.clone();
        let mut e = e as u64;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Complex conjugation, the Galois map zeta_m -> zeta_m^(m-1).
    pub fn conjugate(&self) -> Self {
        let m = self.order;
        let terms = self
            .coeffs
            .iter()
            .map(|(&k, c)| ((m - k) % m, c.clone()))
            .collect();
        Self::from_terms(m, terms)
    }

    /// Floating approximation (re, im). Diagnostic output only; never used in
    /// any exact decision.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&k, c) in &self.coeffs {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
            let cf = c.to_f64().expect("rational out of f64 range");
            re += cf * angle.cos();
            im += cf * angle.sin();
        }
        (re, im)
    }

    /// Total order on canonical forms, used for deterministic serialization.
    /// Compares at the common order: exponent-wise, then by coefficient.
    pub fn cmp_canonical(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if self.order == other.order {
            let mut ia = self.coeffs.iter();
            let mut ib = other.coeffs.iter();
            loop {
                match (ia.next(), ib.next()) {
                    (None, None) => return Ordering::Equal,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(_), None) => return Ordering::Greater,
                    (Some((ka, ca)), Some((kb, cb))) => {
                        match ka.cmp(kb).then_with(|| ca.cmp(cb)) {
                            Ordering::Equal => continue,
                            o => return o,
                        }
                    }
                }
            }
        } else {
            let m = self.common_order(other);
            self.promote_unchecked(m).cmp_canonical(&other.promote_unchecked(m))
        }
    }

    /// Stable textual key for the canonical form at the element's own order.
    /// Only comparable between elements known to share an order.
    pub fn canonical_key(&self, out: &mut String) {
        use fmt::Write;
        for (&k, c) in &self.coeffs {
            write!(out, "{}:{}/{};", k, c.numer(), c.denom()).unwrap();
        }
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = self.common_order(other);
        self.promote_unchecked(m).coeffs == other.promote_unchecked(m).coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.coeffs {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{}", abs)?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", abs)?;
                }
                write!(f, "z{}", self.order)?;
                if k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

/// Reduces a dense coefficient vector (indexed by zeta-exponent) modulo Phi_m.
fn reduce_dense(order: u32, mut v: Vec<Rational>) -> BTreeMap<u32, Rational> {
    let phi = euler_phi(order) as usize;
    if v.len() > order as usize {
        // Fold exponents >= m by zeta^m = 1 first.
        for e in (order as usize..v.len()).rev() {
            if !v[e].is_zero() {
                let c = std::mem::replace(&mut v[e], Rational::zero());
                v[e - order as usize] += c;
            }
        }
        v.truncate(order as usize);
    }
    let poly = cyclotomic_poly(order);
    for e in (phi..v.len()).rev() {
        if v[e].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut v[e], Rational::zero());
        for i in 0..phi {
            if !poly.rats[i].is_zero() {
                let t = &poly.rats[i] * &c;
                v[e - phi + i] -= t;
            }
        }
    }
    v.into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as u32, c))
        .collect()
}

// --- univariate helpers over Q, used by the inverse ---

fn trim(v: &mut Vec<Rational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn poly_deg(v: &[Rational]) -> isize {
    v.len() as isize - 1
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = poly_deg(den);
    assert!(dd >= 0, "division by zero polynomial");
    let mut rem = num.to_vec();
    trim(&mut rem);
    if poly_deg(&rem) < dd {
        return (vec![], rem);
    }
    let lead = den.last().unwrap();
    let mut quot = vec![Rational::zero(); (poly_deg(&rem) - dd + 1) as usize];
    while poly_deg(&rem) >= dd {
        let k = (poly_deg(&rem) - dd) as usize;
        let c = rem.last().unwrap() / lead;
        quot[k] = c.clone();
        for i in 0..den.len() {
            let t = &den[i] * &c;
            rem[k + i] -= t;
        }
        trim(&mut rem);
    }
    (quot, rem)
}
