//! Waring decompositions of skew invariants by coset-reduced
//! skew-symmetrization.
//!
//! For a regular element w with regular eigenvector L of eigenvalue zeta_d,
//! the alternating average of L^D collapses to a sum over the left cosets of
//! the cyclic group generated by w, giving f_W as a combination of |W|/d
//! powers of linear forms. Everything here is exact; `verify` re-expands the
//! claimed decomposition and reports the proportionality scalar.

use num::rational::BigRational;
use num::{BigInt, One};
use rayon::prelude::*;

use crate::comb::{binomial, multinomial};
use crate::cyclo::{lcm_u32, CyclotomicNumber, Rational};
use crate::error::{Error, Result};
use crate::groups::ReflectionGroup;
use crate::linalg::Matrix;
use crate::poly::{LinearForm, Polynomial};

#[derive(Clone, Debug)]
pub struct Provenance {
    pub group_name: String,
    pub regular_number: u32,
    pub regular_element: Matrix,
    pub eigenform: LinearForm,
    pub subgroup_order: u32,
    pub coset_count: usize,
}

#[derive(Clone, Debug)]
pub struct WaringDecomposition {
    pub nvars: usize,
    /// Common exponent D of the powers of linear forms.
    pub exponent: u32,
    /// (c_i, l_i) pairs representing sum c_i * l_i^D, with nonzero c_i and
    /// pairwise non-proportional l_i, each l_i scaled so its first nonzero
    /// coordinate is 1.
    pub terms: Vec<(CyclotomicNumber, LinearForm)>,
    pub provenance: Option<Provenance>,
}

#[derive(Clone, Debug)]
pub struct VerificationResult {
    /// The c with sum = c * f, when the expansion is proportional to f.
    pub scalar: Option<CyclotomicNumber>,
    pub exact: bool,
    pub term_count: usize,
}

/// alt(p): the average of (det w) w(p) over the group.
pub fn skew_symmetrize(g: &ReflectionGroup, p: &Polynomial) -> Polynomial {
    let mut acc = Polynomial::zero(p.nvars());
    for i in 0..g.order() {
        acc = acc.add(&g.act(i, p).scale(&g.element(i).det));
    }
    let inv = CyclotomicNumber::from_rational(Rational::new(
        BigInt::one(),
        BigInt::from(g.order()),
    ));
    acc.scale(&inv)
}

/// det(w) * zeta_d^D, the factor by which the cyclic subgroup's terms differ;
/// it is 1 exactly when the regrouped sum does not cancel.
pub fn geometric_factor(g: &ReflectionGroup, w: usize, d: u32, degree: u32) -> CyclotomicNumber {
    let zeta_pow = CyclotomicNumber::root_of_unity(d, degree as i64);
    g.element(w).det.mul(&zeta_pow)
}

/// Collapses proportional forms: each form is scaled to first-nonzero-1 with
/// the scalar's D-th power folded into the coefficient, then equal forms are
/// merged and zero coefficients dropped. Output is sorted canonically.
fn merge_terms(
    raw: Vec<(CyclotomicNumber, LinearForm)>,
    exponent: u32,
) -> Result<Vec<(CyclotomicNumber, LinearForm)>> {
    let mut normalized: Vec<(CyclotomicNumber, LinearForm)> = Vec::with_capacity(raw.len());
    let mut common = 1u32;
    for (c, form) in raw {
        let (norm, scale) = form.normalize_first()?;
        let coeff = c.mul(&scale.pow(exponent as i64)?);
        for e in norm.coeffs() {
            common = lcm_u32(common, e.order());
        }
        normalized.push((coeff, norm));
    }
    // promote every form entry to the common order so equal field elements
    // serialize identically
    let mut merged: Vec<(String, CyclotomicNumber, LinearForm)> = Vec::new();
    for (coeff, form) in normalized {
        let promoted = LinearForm::new(
            form.coeffs()
                .iter()
                .map(|e| e.promote(common))
                .collect::<Result<_>>()?,
        );
        let mut key = String::new();
        for e in promoted.coeffs() {
            e.canonical_key(&mut key);
            key.push('|');
        }
        match merged.iter_mut().find(|(k, _, _)| *k == key) {
            Some((_, acc, _)) => *acc = acc.add(&coeff),
            None => merged.push((key, coeff, promoted)),
        }
    }
    merged.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(merged
        .into_iter()
        .filter(|(_, c, _)| !c.is_zero())
        .map(|(_, c, l)| (c, l))
        .collect())
}

/// The coset-reduced decomposition for the canonical regular pair of
/// eigenvalue order d: f_W is proportional to
/// sum over coset representatives of (det sigma) (sigma L)^D.
pub fn decompose(g: &ReflectionGroup, d: u32) -> Result<WaringDecomposition> {
    let pairs = g.regular_elements(d)?;
    let Some((w, eigenform)) = pairs.into_iter().next() else {
        return Err(Error::NotRegular { d });
    };
    let degree = g.reflections().len() as u32;
    let cosets = g.cosets(w);
    let raw: Vec<(CyclotomicNumber, LinearForm)> = cosets
        .representatives
        .iter()
        .map(|&s| (g.element(s).det.clone(), g.act_vector(s, &eigenform)))
        .collect();
    let terms = merge_terms(raw, degree)?;
    Ok(WaringDecomposition {
        nvars: g.nvars(),
        exponent: degree,
        terms,
        provenance: Some(Provenance {
            group_name: g.name().to_string(),
            regular_number: d,
            regular_element: g.element(w).matrix.clone(),
            eigenform,
            subgroup_order: cosets.subgroup_order,
            coset_count: cosets.representatives.len(),
        }),
    })
}

/// The unreduced |W|-term skew-symmetrization of L^D for a regular L. Terms
/// are kept verbatim as (det w, w L), one per group element, as the baseline
/// the coset reduction is measured against; forms may repeat up to scale here.
pub fn naive_decompose(g: &ReflectionGroup, l: &LinearForm) -> Result<WaringDecomposition> {
    if !g.is_regular_vector(l) {
        return Err(Error::BadForm(
            "vector lies on a reflecting hyperplane, so the alternating sum vanishes".into(),
        ));
    }
    let degree = g.reflections().len() as u32;
    let terms: Vec<(CyclotomicNumber, LinearForm)> = (0..g.order())
        .map(|s| (g.element(s).det.clone(), g.act_vector(s, l)))
        .collect();
    Ok(WaringDecomposition {
        nvars: g.nvars(),
        exponent: degree,
        terms,
        provenance: None,
    })
}

/// Expands sum c_i l_i^D exactly and compares against f.
pub fn verify(dec: &WaringDecomposition, f: &Polynomial) -> Result<VerificationResult> {
    if f.is_zero() {
        return Err(Error::ZeroComparand);
    }
    let n = dec.nvars;
    let sum = dec
        .terms
        .par_iter()
        .map(|(c, l)| l.power(dec.exponent).scale(c))
        .reduce(|| Polynomial::zero(n), |a, b| a.add(&b));
    let scalar = sum.scalar_multiple_of(f)?;
    let exact = scalar.as_ref().map(|c| !c.is_zero()).unwrap_or(false);
    Ok(VerificationResult {
        scalar,
        exact,
        term_count: dec.terms.len(),
    })
}

/// The C with f = C * (decomposition sum); fails unless verify is exact.
pub fn solve_constant(dec: &WaringDecomposition, f: &Polynomial) -> Result<CyclotomicNumber> {
    let v = verify(dec, f)?;
    match v.scalar {
        Some(c) if v.exact => c.invert(),
        _ => Err(Error::VerificationFailed(
            "expansion is not a nonzero multiple of the target".into(),
        )),
    }
}

#[derive(Clone, Debug)]
pub struct VandermondeConstant {
    pub n: u32,
    /// prod over 1 <= j < k <= n-1 of (alpha^k - alpha^j), alpha = zeta_n.
    pub p: CyclotomicNumber,
    /// multinomial(binom(n,2); 1, 2, ..., n-1).
    pub mn: Rational,
    /// P^2 = (-1)^binom(n-1,2) n^(n-2) and P conj(P) = n^(n-2), both exact.
    pub check_passed: bool,
    /// Float comparison of P against (-i)^binom(n-1,2) sqrt(n^(n-2)) at 1e-9;
    /// diagnostic only.
    pub float_agrees: bool,
}

pub fn vandermonde_constant(n: u32) -> VandermondeConstant {
    assert!(n >= 2);
    let alpha = CyclotomicNumber::root_of_unity(n, 1);
    let mut p = CyclotomicNumber::one();
    for j in 1..n {
        for k in j + 1..n {
            let term = alpha
                .pow(k as i64)
                .unwrap()
                .sub(&alpha.pow(j as i64).unwrap());
            p = p.mul(&term);
        }
    }
    let parts: Vec<u32> = (1..n).collect();
    let mn = BigRational::from_integer(multinomial(&parts));

    let pairs = binomial(n as u64 - 1, 2);
    let sign_neg = (&pairs % 2u32) == BigInt::one();
    let npow = BigInt::from(n).pow(n - 2);
    let mut rhs = CyclotomicNumber::from_rational(BigRational::from_integer(npow.clone()));
    if sign_neg {
        rhs = rhs.neg();
    }
    let square_ok = p.mul(&p) == rhs;
    let modulus_ok = p.mul(&p.conjugate())
        == CyclotomicNumber::from_rational(BigRational::from_integer(npow.clone()));

    // (-i)^binom(n-1,2) sqrt(n^(n-2)) as floats
    let quarter = num::ToPrimitive::to_u32(&(&pairs % 4u32)).unwrap();
    let root = f64::sqrt(f64::from(n).powi(n as i32 - 2));
    let (ex, ey) = match quarter {
        0 => (root, 0.0),
        1 => (0.0, -root),
        2 => (-root, 0.0),
        _ => (0.0, root),
    };
    let (px, py) = p.to_complex_f64();
    let float_agrees = (px - ex).abs() < 1e-9 && (py - ey).abs() < 1e-9;

    VandermondeConstant {
        n,
        p,
        mn,
        check_passed: square_ok && modulus_ok,
        float_agrees,
    }
}

#[derive(Clone, Debug)]
pub struct VandermondeCheck {
    pub n: u32,
    /// 1/C matched from the expansion with sigma(1) = 1 representatives.
    pub solved_c_inverse: CyclotomicNumber,
    /// (-1)^(binom(n,2)+n+1) M_n P.
    pub closed_form_c_inverse: CyclotomicNumber,
    pub agrees: bool,
    pub constant: VandermondeConstant,
}

/// Reproduces the closed-form constant of the Vandermonde decomposition: with
/// w the coordinate rotation e_j -> e_(j-1) and L = (1, alpha, ..., alpha^(n-1)),
/// the representatives fixing the first coordinate give
/// V_n = C sum (det sigma)(sigma L)^D, and 1/C has a product formula.
pub fn vandermonde_closed_form_check(n: u32, cap: usize) -> Result<VandermondeCheck> {
    assert!(n >= 2);
    let nn = n as usize;
    let spec = crate::groups::FamilySpec::Symmetric { n };
    let g = ReflectionGroup::build_family(&spec, cap)?;
    let f = crate::skew::build_skew_invariant(&g)?.polynomial;

    let mut rot = Matrix::zero(nn, nn);
    for j in 0..nn {
        rot.set((j + nn - 1) % nn, j, CyclotomicNumber::one());
    }
    let w = g.index_of(&rot).ok_or(Error::NotInGroup)?;
    let alpha = CyclotomicNumber::root_of_unity(n, 1);
    let l = LinearForm::new(
        (0..nn)
            .map(|j| alpha.pow(j as i64).unwrap())
            .collect(),
    );
    // sanity: w L = alpha L, and L is regular
    let image = g.act_vector(w, &l);
    if image.scalar_multiple_of(&l)? != Some(alpha.clone()) {
        return Err(Error::VerificationFailed(
            "rotation does not scale the geometric eigenform".into(),
        ));
    }
    if !g.is_regular_vector(&l) {
        return Err(Error::VerificationFailed("eigenform is not regular".into()));
    }

    let degree = g.reflections().len() as u32;
    let mut sum = Polynomial::zero(nn);
    let mut reps = 0usize;
    for i in 0..g.order() {
        if !g.element(i).matrix.get(0, 0).is_one() {
            continue;
        }
        reps += 1;
        let form = g.act_vector(i, &l);
        sum = sum.add(&form.power(degree).scale(&g.element(i).det));
    }
    if reps as u64 * n as u64 != g.order() as u64 {
        return Err(Error::VerificationFailed(
            "coordinate stabilizer does not have one element per coset".into(),
        ));
    }
    let solved_c_inverse = sum
        .scalar_multiple_of(&f)?
        .ok_or_else(|| {
            Error::VerificationFailed("expansion is not proportional to the invariant".into())
        })?;

    let constant = vandermonde_constant(n);
    let exponent = binomial(n as u64, 2) + BigInt::from(n) + BigInt::one();
    let sign_neg = (&exponent % 2u32) == BigInt::one();
    let mut closed = constant.p.scale(&constant.mn);
    if sign_neg {
        closed = closed.neg();
    }
    let agrees = solved_c_inverse == closed;
    Ok(VandermondeCheck {
        n,
        solved_c_inverse,
        closed_form_c_inverse: closed,
        agrees,
        constant,
    })
}
