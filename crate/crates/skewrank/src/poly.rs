//! Sparse multivariate polynomials with cyclotomic coefficients.
//!
//! Terms live in a hash map keyed by exponent vectors; serialization and
//! leading-term queries go through the graded reverse lexicographic order, so
//! every externally visible listing is deterministic. The same type doubles as
//! the ring of differential operators acting through `diff_apply`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

use crate::cyclo::{lcm_u32, CyclotomicNumber, Rational};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, MonomialForm};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zero(nvars: usize) -> Self {
        ExponentVector(vec![0; nvars])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Graded reverse lexicographic comparison; `Greater` means "later variables
/// appear less", the usual grevlex leading-term convention.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: HashMap<ExponentVector, CyclotomicNumber>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: HashMap::new() }
    }

    pub fn constant(nvars: usize, c: CyclotomicNumber) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExponentVector::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, CyclotomicNumber::one())
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = ExponentVector::zero(nvars);
        e.0[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, CyclotomicNumber::one());
        p
    }

    pub fn monomial(exp: ExponentVector, c: CyclotomicNumber) -> Self {
        let nvars = exp.0.len();
        let mut p = Self::zero(nvars);
        p.add_term(exp, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &ExponentVector) -> CyclotomicNumber {
        self.terms.get(exp).cloned().unwrap_or_else(CyclotomicNumber::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &CyclotomicNumber)> {
        self.terms.iter()
    }

    /// Terms sorted grevlex-descending (leading term first).
    pub fn sorted_terms(&self) -> Vec<(&ExponentVector, &CyclotomicNumber)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grevlex_cmp(&b.0 .0, &a.0 .0));
        v
    }

    pub fn add_term(&mut self, exp: ExponentVector, c: CyclotomicNumber) {
        debug_assert_eq!(exp.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let (big, small) = if self.nterms() >= other.nterms() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.mul(c))).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Polynomial {
        self.scale(&CyclotomicNumber::from_rational(r.clone()))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp = ExponentVector(
                    ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect(),
                );
                out.add_term(exp, ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.total_degree()).max()
    }

    /// Some(d) iff nonzero and every term has total degree d.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.total_degree();
        if it.all(|e| e.total_degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&ExponentVector, &CyclotomicNumber)> {
        self.terms
            .iter()
            .max_by(|a, b| grevlex_cmp(&a.0 .0, &b.0 .0))
    }

    /// Divides by the grevlex-leading coefficient; returns the removed scalar.
    pub fn normalize_leading(&self) -> Result<(Polynomial, CyclotomicNumber)> {
        let Some((_, lc)) = self.leading_term() else {
            return Err(Error::ZeroComparand);
        };
        let lc = lc.clone();
        Ok((self.scale(&lc.invert()?), lc))
    }

    /// Some(c) with self = c * g, if such a scalar exists. Errors when g = 0.
    pub fn scalar_multiple_of(&self, g: &Polynomial) -> Result<Option<CyclotomicNumber>> {
        assert_eq!(self.nvars, g.nvars, "variable count mismatch");
        if g.is_zero() {
            return Err(Error::ZeroComparand);
        }
        if self.is_zero() {
            return Ok(Some(CyclotomicNumber::zero()));
        }
        if self.nterms() != g.nterms() {
            return Ok(None);
        }
        let (lead, lc) = g.leading_term().expect("g is nonzero");
        let flc = self.coeff(lead);
        if flc.is_zero() {
            return Ok(None);
        }
        let c = flc.div(lc)?;
        for (e, gv) in &g.terms {
            if self.coeff(e) != c.mul(gv) {
                return Ok(None);
            }
        }
        Ok(Some(c))
    }

    /// Substitution x_j -> sum_i M[i][j] x_i, extended as a ring homomorphism.
    pub fn apply_matrix(&self, m: &Matrix) -> Polynomial {
        assert_eq!(m.nrows(), self.nvars, "matrix size must match variable count");
        assert_eq!(m.ncols(), self.nvars, "matrix size must match variable count");
        if let Some(mf) = m.monomial_form() {
            return self.apply_monomial(&mf);
        }
        let columns: Vec<LinearForm> = (0..self.nvars)
            .map(|j| {
                LinearForm::new((0..self.nvars).map(|i| m.get(i, j).clone()).collect())
            })
            .collect();
        // cache powers of each column form as needed
        let mut powers: Vec<Vec<Polynomial>> = columns
            .iter()
            .map(|c| vec![Polynomial::one(self.nvars), c.to_polynomial()])
            .collect();
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(self.nvars, c.clone());
            for (j, &ej) in e.0.iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                while powers[j].len() <= ej as usize {
                    let next = powers[j].last().unwrap().mul(&powers[j][1]);
                    powers[j].push(next);
                }
                term = term.mul(&powers[j][ej as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Monomial-matrix fast path: each variable maps to a scalar multiple of a
    /// single variable, so monomials map to monomials.
    pub fn apply_monomial(&self, mf: &MonomialForm) -> Polynomial {
        assert_eq!(mf.n(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exp = vec![0u32; self.nvars];
            let mut coeff = c.clone();
            for (j, &ej) in e.0.iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                exp[mf.dest[j]] += ej;
                coeff = coeff.mul(&mf.coeff[j].pow(ej as i64).expect("nonneg power"));
            }
            out.add_term(ExponentVector(exp), coeff);
        }
        out
    }

    /// Applies `self` as a constant-coefficient differential operator to f:
    /// the monomial d^alpha sends x^beta to prod_i alpha_i! C(beta_i, alpha_i)
    /// x^(beta - alpha).
    pub fn diff_apply(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, f.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(f.nvars);
        for (alpha, ca) in &self.terms {
            'target: for (beta, cb) in &f.terms {
                let mut factor = BigInt::one();
                let mut exp = Vec::with_capacity(f.nvars);
                for (&a, &b) in alpha.0.iter().zip(&beta.0) {
                    if a > b {
                        continue 'target;
                    }
                    // falling factorial b (b-1) ... (b-a+1)
                    for t in 0..a {
                        factor *= b - t;
                    }
                    exp.push(b - a);
                }
                let scalar = CyclotomicNumber::from_rational(BigRational::from_integer(factor));
                out.add_term(ExponentVector(exp), ca.mul(cb).mul(&scalar));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[CyclotomicNumber]) -> CyclotomicNumber {
        assert_eq!(point.len(), self.nvars);
        let mut acc = CyclotomicNumber::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &ei) in e.0.iter().enumerate() {
                if ei > 0 {
                    term = term.mul(&point[i].pow(ei as i64).expect("nonneg power"));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// lcm of the coefficient orders; 1 for rational (or zero) polynomials.
    pub fn coefficient_order(&self) -> u32 {
        self.terms
            .values()
            .fold(1, |acc, c| lcm_u32(acc, c.order()))
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms.iter().all(|(e, c)| {
            other.terms.get(e).map(|d| c == d).unwrap_or(false)
        })
    }
}

impl Eq for Polynomial {}

/// A linear form sum c_i x_i, also used as a vector in V via its coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<CyclotomicNumber>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<CyclotomicNumber>) -> Self {
        LinearForm { coeffs }
    }

    pub fn from_integers(v: &[i64]) -> Self {
        LinearForm {
            coeffs: v.iter().map(|&x| CyclotomicNumber::from_integer(x)).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let n = self.coeffs.len();
        let mut p = Polynomial::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut e = ExponentVector::zero(n);
            e.0[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn from_polynomial(p: &Polynomial) -> Result<Self> {
        let mut coeffs = vec![CyclotomicNumber::zero(); p.nvars()];
        for (e, c) in p.terms() {
            if e.total_degree() != 1 {
                return Err(Error::BadForm("not a linear form".into()));
            }
            let i = e.0.iter().position(|&x| x == 1).unwrap();
            coeffs[i] = c.clone();
        }
        Ok(LinearForm { coeffs })
    }

    /// Vector transformation under the same convention as `apply_matrix`:
    /// the coefficient vector maps to M * c.
    pub fn apply_matrix(&self, m: &Matrix) -> LinearForm {
        LinearForm { coeffs: m.mul_vec(&self.coeffs) }
    }

    pub fn apply_monomial(&self, mf: &MonomialForm) -> LinearForm {
        let n = self.coeffs.len();
        let mut out = vec![CyclotomicNumber::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[mf.dest[j]] = mf.coeff[j].mul(c);
            }
        }
        LinearForm { coeffs: out }
    }

    /// Coordinate pairing sum_i c_i v_i.
    pub fn dot(&self, v: &[CyclotomicNumber]) -> CyclotomicNumber {
        assert_eq!(self.coeffs.len(), v.len());
        let mut acc = CyclotomicNumber::zero();
        for (c, x) in self.coeffs.iter().zip(v) {
            if !c.is_zero() && !x.is_zero() {
                acc = acc.add(&c.mul(x));
            }
        }
        acc
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().map(|v| v.mul(c)).collect() }
    }

    /// Scales so the first nonzero coordinate is 1; returns the removed scalar.
    pub fn normalize_first(&self) -> Result<(LinearForm, CyclotomicNumber)> {
        let Some(c) = self.coeffs.iter().find(|c| !c.is_zero()) else {
            return Err(Error::ZeroComparand);
        };
        let c = c.clone();
        Ok((self.scale(&c.invert()?), c))
    }

    /// Some(lambda) with self = lambda * other; errors when other = 0.
    pub fn scalar_multiple_of(&self, other: &LinearForm) -> Result<Option<CyclotomicNumber>> {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        if other.is_zero() {
            return Err(Error::ZeroComparand);
        }
        let k = other.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if self.coeffs[k].is_zero() && !self.is_zero() {
            return Ok(None);
        }
        let lambda = self.coeffs[k].div(&other.coeffs[k])?;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if *a != lambda.mul(b) {
                return Ok(None);
            }
        }
        Ok(Some(lambda))
    }

    /// Expands (sum c_i x_i)^D by iterating over compositions of D supported on
    /// the nonzero coefficients. The result has binom(D + k - 1, k - 1) terms
    /// for k nonzero coefficients.
    pub fn power(&self, d: u32) -> Polynomial {
        let n = self.coeffs.len();
        if d == 0 {
            return Polynomial::one(n);
        }
        let support: Vec<usize> = (0..n).filter(|&i| !self.coeffs[i].is_zero()).collect();
        if support.is_empty() {
            return Polynomial::zero(n);
        }
        // powers of each supported coefficient up to d
        let pow_table: Vec<Vec<CyclotomicNumber>> = support
            .iter()
            .map(|&i| {
                let mut v = Vec::with_capacity(d as usize + 1);
                v.push(CyclotomicNumber::one());
                for _ in 0..d {
                    v.push(v.last().unwrap().mul(&self.coeffs[i]));
                }
                v
            })
            .collect();
        let mut out = Polynomial::zero(n);
        let mut exps = vec![0u32; support.len()];
        compose(
            &mut out,
            n,
            &support,
            &pow_table,
            &mut exps,
            0,
            d,
            BigInt::one(),
        );
        out
    }
}

/// Recursive walk over compositions of `remaining` into the tail of `support`,
/// carrying the partial multinomial coefficient.
#[allow(clippy::too_many_arguments)]
fn compose(
    out: &mut Polynomial,
    nvars: usize,
    support: &[usize],
    pow_table: &[Vec<CyclotomicNumber>],
    exps: &mut Vec<u32>,
    level: usize,
    remaining: u32,
    multinomial: BigInt,
) {
    if level == support.len() - 1 {
        exps[level] = remaining;
        let mut coeff = CyclotomicNumber::from_rational(BigRational::from_integer(multinomial));
        let mut exp = vec![0u32; nvars];
        for (l, &i) in support.iter().enumerate() {
            exp[i] = exps[l];
            coeff = coeff.mul(&pow_table[l][exps[l] as usize]);
        }
        out.add_term(ExponentVector(exp), coeff);
        return;
    }
    let mut choose = BigInt::one();
    for a in 0..=remaining {
        // choose = C(remaining, a), updated incrementally
        if a > 0 {
            choose = choose * (remaining - a + 1) / a;
        }
        exps[level] = a;
        compose(
            out,
            nvars,
            support,
            pow_table,
            exps,
            level + 1,
            remaining - a,
            &multinomial * &choose,
        );
    }
}
