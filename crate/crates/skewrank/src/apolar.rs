//! Apolarity: catalecticant kernels, Hilbert functions of the apolar algebra,
//! minimal generator degrees of the annihilator ideal, and the resulting rank
//! bounds.
//!
//! The Hilbert function is computed from the spans of iterated partial
//! derivatives of f, which stay small even when the ambient monomial spaces do
//! not. Generator degrees come from the graded Koszul homology of those spans;
//! the literal span-of-products formulation is retained in the tests as an
//! independent oracle.

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use crate::comb::binomial;
use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::groups::ReflectionGroup;
use crate::linalg::Matrix;
use crate::poly::{grevlex_cmp, ExponentVector, Polynomial};
use crate::skew::SkewInvariant;
use crate::waring::{verify, WaringDecomposition};

/// All exponent vectors of total degree d in grevlex-descending order.
pub fn monomials(nvars: usize, d: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, d);
    out.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
    out
}

fn fill(out: &mut Vec<ExponentVector>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(ExponentVector(cur.clone()));
        return;
    }
    for a in (0..=left).rev() {
        cur[pos] = a;
        fill(out, cur, pos + 1, left - a);
    }
    cur[pos] = 0;
}

/// Exact basis of the degree-k part of the annihilator of f: the kernel of
/// T_k -> S_(deg f - k), D -> D(f), presented as polynomials in the partials.
pub fn catalecticant_kernel(f: &Polynomial, k: u32) -> Vec<Polynomial> {
    let n = f.nvars();
    let deg = f.degree().unwrap_or(0);
    let ops = monomials(n, k);
    if f.is_zero() || k > deg {
        return ops
            .into_iter()
            .map(|e| Polynomial::monomial(e, CyclotomicNumber::one()))
            .collect();
    }
    let targets = monomials(n, deg - k);
    let tindex: std::collections::HashMap<&ExponentVector, usize> =
        targets.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut mat = Matrix::zero(targets.len(), ops.len());
    for (j, op) in ops.iter().enumerate() {
        let image = Polynomial::monomial(op.clone(), CyclotomicNumber::one()).diff_apply(f);
        for (e, c) in image.terms() {
            mat.set(tindex[e], j, c.clone());
        }
    }
    mat.kernel_basis()
        .into_iter()
        .map(|coeffs| {
            let mut p = Polynomial::zero(n);
            for (j, c) in coeffs.into_iter().enumerate() {
                p.add_term(ops[j].clone(), c);
            }
            p
        })
        .collect()
}

/// Spans of the iterated partials of f, one reduced basis per order, together
/// with the multiplication maps between consecutive levels.
struct DerivativeTower {
    hilbert: Vec<usize>,
    /// mult[k][i]: matrix of multiplication by the i-th variable from level
    /// k-1 to level k of the apolar algebra, for k = 1..=D+1 (the last level
    /// is zero and its matrices are empty).
    mult: Vec<Vec<Matrix>>,
}

struct Level {
    monomials: Vec<ExponentVector>,
    rows: Vec<Vec<CyclotomicNumber>>,
    pivots: Vec<usize>,
}

fn reduce_level(monoms: Vec<ExponentVector>, vectors: Vec<Vec<CyclotomicNumber>>) -> Level {
    let ncols = monoms.len();
    let mut mat = Matrix::zero(vectors.len(), ncols);
    for (i, v) in vectors.iter().enumerate() {
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                mat.set(i, j, c.clone());
            }
        }
    }
    let pivots = mat.rref();
    let rows = (0..pivots.len())
        .map(|i| (0..ncols).map(|j| mat.get(i, j).clone()).collect())
        .collect();
    Level { monomials: monoms, rows, pivots }
}

/// Differentiates a coefficient vector over `from` monomials by variable i,
/// expressed over `to_index`.
fn diff_vector(
    from: &[ExponentVector],
    vec: &[CyclotomicNumber],
    i: usize,
    to_index: &std::collections::HashMap<&ExponentVector, usize>,
    out_len: usize,
) -> Vec<CyclotomicNumber> {
    let mut out = vec![CyclotomicNumber::zero(); out_len];
    for (j, c) in vec.iter().enumerate() {
        if c.is_zero() || from[j].0[i] == 0 {
            continue;
        }
        let mut e = from[j].clone();
        let mult = e.0[i];
        e.0[i] -= 1;
        let target = to_index[&e];
        let scaled = c.mul(&CyclotomicNumber::from_integer(mult as i64));
        out[target] = out[target].add(&scaled);
    }
    out
}

fn build_tower(f: &Polynomial) -> DerivativeTower {
    let n = f.nvars();
    let deg = f.homogeneous_degree().expect("nonzero homogeneous form required");
    let top_monoms = monomials(n, deg);
    let mut fvec = vec![CyclotomicNumber::zero(); top_monoms.len()];
    {
        let index: std::collections::HashMap<&ExponentVector, usize> =
            top_monoms.iter().enumerate().map(|(i, e)| (e, i)).collect();
        for (e, c) in f.terms() {
            fvec[index[e]] = c.clone();
        }
    }
    let mut levels = vec![reduce_level(top_monoms, vec![fvec])];
    let mut hilbert = vec![1usize];
    let mut mult: Vec<Vec<Matrix>> = vec![Vec::new()]; // index 0 unused
    for k in 1..=deg {
        let monoms = monomials(n, deg - k);
        let index: std::collections::HashMap<&ExponentVector, usize> =
            monoms.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let prev = levels.last().unwrap();
        let mut vectors = Vec::with_capacity(n * prev.rows.len());
        for row in &prev.rows {
            for i in 0..n {
                vectors.push(diff_vector(
                    &prev.monomials,
                    row,
                    i,
                    &index,
                    monoms.len(),
                ));
            }
        }
        let level = reduce_level(monoms.clone(), vectors);
        // multiplication maps, with coordinates read off the pivot columns
        let mut mats: Vec<Matrix> = (0..n)
            .map(|_| Matrix::zero(level.rows.len(), prev.rows.len()))
            .collect();
        for (c, row) in prev.rows.iter().enumerate() {
            for (i, mat) in mats.iter_mut().enumerate() {
                let image = diff_vector(&prev.monomials, row, i, &index, monoms.len());
                for (r, &p) in level.pivots.iter().enumerate() {
                    mat.set(r, c, image[p].clone());
                }
            }
        }
        hilbert.push(level.rows.len());
        mult.push(mats);
        levels.push(level);
    }
    // the level above the socle is zero
    mult.push((0..n).map(|_| Matrix::zero(0, 1)).collect());
    DerivativeTower { hilbert, mult }
}

/// hilbert[k] = dim (T / f^perp)_k for k = 0..deg f; equivalently the rank of
/// the k-th catalecticant.
pub fn hilbert_function(f: &Polynomial) -> Vec<usize> {
    build_tower(f).hilbert
}

/// Degrees of a minimal generating set of f^perp, as a sorted multiset. The
/// count in degree k is the dimension of the degree-k Koszul homology
/// ker(V (x) A_(k-1) -> A_k) / im(L^2 V (x) A_(k-2) -> V (x) A_(k-1)).
pub fn apolar_generator_degrees(f: &Polynomial) -> Vec<u32> {
    let n = f.nvars();
    let tower = build_tower(f);
    let deg = tower.hilbert.len() - 1;
    let hf = |k: i64| -> usize {
        if k < 0 || k as usize > deg {
            0
        } else {
            tower.hilbert[k as usize]
        }
    };
    let mut out = Vec::new();
    for k in 1..=(deg as u32 + 1) {
        let ki = k as i64;
        let dom1 = n * hf(ki - 1);
        let rank1 = if hf(ki) == 0 || dom1 == 0 {
            0
        } else {
            koszul_d1(&tower.mult[k as usize], hf(ki), hf(ki - 1)).rank()
        };
        let ker1 = dom1 - rank1;
        let rank2 = if hf(ki - 2) == 0 || hf(ki - 1) == 0 || n < 2 {
            0
        } else {
            koszul_d2(&tower.mult[k as usize - 1], n, hf(ki - 1), hf(ki - 2)).rank()
        };
        for _ in 0..ker1.saturating_sub(rank2) {
            out.push(k);
        }
    }
    out
}

/// Blocks [M_1 | M_2 | ... | M_n] of multiplication by each variable.
fn koszul_d1(mult: &[Matrix], rows: usize, prev: usize) -> Matrix {
    let n = mult.len();
    let mut m = Matrix::zero(rows, n * prev);
    for (i, block) in mult.iter().enumerate() {
        for r in 0..rows {
            for c in 0..prev {
                let v = block.get(r, c);
                if !v.is_zero() {
                    m.set(r, i * prev + c, v.clone());
                }
            }
        }
    }
    m
}

/// e_i ^ e_j (x) a -> e_i (x) x_j a - e_j (x) x_i a, with rows indexed by
/// (variable, basis of A_(k-1)) and columns by (pair, basis of A_(k-2)).
fn koszul_d2(mult_prev: &[Matrix], n: usize, mid: usize, prev: usize) -> Matrix {
    let npairs = n * (n - 1) / 2;
    let mut m = Matrix::zero(n * mid, npairs * prev);
    let mut t = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            for c in 0..prev {
                for r in 0..mid {
                    let vj = mult_prev[j].get(r, c);
                    if !vj.is_zero() {
                        m.set(i * mid + r, t * prev + c, vj.clone());
                    }
                    let vi = mult_prev[i].get(r, c);
                    if !vi.is_zero() {
                        m.set(j * mid + r, t * prev + c, vi.neg());
                    }
                }
            }
            t += 1;
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApolarReport {
    pub hilbert: Vec<usize>,
    pub dim_af: usize,
    pub generator_degrees: Vec<u32>,
    pub delta: u32,
    pub rs_lower_bound: usize,
    pub upper_bound: Option<usize>,
    pub certified: bool,
    /// For monomial forms, the known closed-form rank, as context for cases
    /// where the lower bound is not tight.
    pub ccg_reference: Option<u64>,
}

/// Assembles the rank bounds: lower = ceil(dim A^f / delta), upper = length of
/// a decomposition that must verify against f if supplied.
pub fn rs_bound_report(
    f: &Polynomial,
    dec: Option<&WaringDecomposition>,
) -> Result<ApolarReport> {
    if f.is_zero() {
        return Err(Error::ZeroComparand);
    }
    if f.homogeneous_degree().is_none() {
        return Err(Error::BadForm("rank bounds need a homogeneous form".into()));
    }
    let hilbert = hilbert_function(f);
    let dim_af: usize = hilbert.iter().sum();
    let generator_degrees = apolar_generator_degrees(f);
    let delta = *generator_degrees.iter().max().expect("ideal has generators");
    let rs_lower_bound = dim_af.div_ceil(delta as usize);
    let upper_bound = match dec {
        Some(d) => {
            let v = verify(d, f)?;
            if !v.exact {
                return Err(Error::VerificationFailed(
                    "supplied decomposition does not expand to a multiple of f".into(),
                ));
            }
            Some(v.term_count)
        }
        None => None,
    };
    let certified = upper_bound == Some(rs_lower_bound);
    Ok(ApolarReport {
        hilbert,
        dim_af,
        generator_degrees,
        delta,
        rs_lower_bound,
        upper_bound,
        certified,
        ccg_reference: ccg_monomial_rank(f),
    })
}

/// Closed-form rank of a monomial x^a: the product of (a_i + 1) over all
/// nonzero exponents except the smallest.
fn ccg_monomial_rank(f: &Polynomial) -> Option<u64> {
    if f.nterms() != 1 {
        return None;
    }
    let (exp, _) = f.terms().next().unwrap();
    let mut nz: Vec<u32> = exp.0.iter().copied().filter(|&a| a > 0).collect();
    if nz.is_empty() {
        return None;
    }
    nz.sort_unstable();
    Some(nz[1..].iter().map(|&a| a as u64 + 1).product())
}

pub const STEINBERG_MAX_ORDER: usize = 400;
pub const STEINBERG_MAX_DEGREE: u32 = 16;

pub fn steinberg_check(g: &ReflectionGroup, f: &SkewInvariant) -> Result<bool> {
    steinberg_check_with(g, f, STEINBERG_MAX_ORDER, STEINBERG_MAX_DEGREE)
}

/// Checks that the coinvariant ideal annihilates f and that dim A^f = |W|.
/// Averaged monomial operators span the invariant operators degree by degree,
/// and operators transform by the inverse transpose so that the pairing with
/// polynomials is preserved.
pub fn steinberg_check_with(
    g: &ReflectionGroup,
    f: &SkewInvariant,
    max_order: usize,
    max_degree: u32,
) -> Result<bool> {
    if g.order() > max_order || f.degree > max_degree {
        return Err(Error::BudgetExceeded(format!(
            "group order {} / invariant degree {} exceeds the check budget {}/{}",
            g.order(),
            f.degree,
            max_order,
            max_degree
        )));
    }
    let n = g.nvars();
    let dn = *g.degrees()?.last().expect("group acts on at least one variable");
    let dual: Vec<Matrix> = (0..g.order())
        .map(|i| g.element(g.inverse_of(i)).matrix.transpose())
        .collect();
    let scale = CyclotomicNumber::from_rational(num::BigRational::new(
        BigInt::one(),
        BigInt::from(g.order()),
    ));
    for k in 1..=dn.min(f.degree) {
        for m in monomials(n, k) {
            let mono = Polynomial::monomial(m, CyclotomicNumber::one());
            let mut avg = Polynomial::zero(n);
            for d in &dual {
                avg = avg.add(&mono.apply_matrix(d));
            }
            let avg = avg.scale(&scale);
            if avg.is_zero() {
                continue;
            }
            if !avg.diff_apply(&f.polynomial).is_zero() {
                return Ok(false);
            }
        }
    }
    let dim: usize = hilbert_function(&f.polynomial).iter().sum();
    Ok(dim == g.order())
}

/// Waring rank of a nonzero binary form by the classical two-generator
/// argument: the annihilator is a complete intersection (g_a, g_b) with
/// a + b = deg f + 2, and the rank is a if g_a is squarefree, else b.
pub fn sylvester_binary_rank(f: &Polynomial) -> Result<usize> {
    if f.nvars() != 2 {
        return Err(Error::BadForm("binary rank needs exactly two variables".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroComparand);
    }
    let Some(deg) = f.homogeneous_degree() else {
        return Err(Error::BadForm("binary rank needs a homogeneous form".into()));
    };
    if deg == 0 {
        return Err(Error::BadForm("constants have no Waring rank".into()));
    }
    for a in 1..=deg + 1 {
        let kernel = catalecticant_kernel(f, a);
        if kernel.is_empty() {
            continue;
        }
        if kernel.len() >= 2 {
            // both generators in the same degree: a generic pencil member is
            // squarefree, so the rank is a
            return Ok(a as usize);
        }
        let b = (deg + 2 - a) as usize;
        return Ok(if binary_squarefree(&kernel[0]) {
            a as usize
        } else {
            b
        });
    }
    unreachable!("a nonzero kernel exists by degree deg f + 1")
}

/// Squarefreeness of a binary form: at most a simple root at infinity, and
/// the dehomogenization is coprime to its derivative.
fn binary_squarefree(g: &Polynomial) -> bool {
    let a = g.homogeneous_degree().expect("kernel elements are homogeneous");
    // coefficients of u^i where g(u, 1), i = 0..=a
    let mut coeffs = vec![CyclotomicNumber::zero(); a as usize + 1];
    for (e, c) in g.terms() {
        coeffs[e.0[0] as usize] = c.clone();
    }
    let p = trim(coeffs);
    let pdeg = p.len() as u32 - 1;
    if a - pdeg > 1 {
        return false;
    }
    let dp: Vec<CyclotomicNumber> = (1..p.len())
        .map(|i| p[i].mul(&CyclotomicNumber::from_integer(i as i64)))
        .collect();
    let dp = trim(dp);
    univariate_gcd(p, dp).len() <= 1
}

fn trim(mut v: Vec<CyclotomicNumber>) -> Vec<CyclotomicNumber> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

/// Monic gcd by Euclid's algorithm over the cyclotomic field.
fn univariate_gcd(
    mut a: Vec<CyclotomicNumber>,
    mut b: Vec<CyclotomicNumber>,
) -> Vec<CyclotomicNumber> {
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        let inv = lead.invert().expect("leading coefficient is nonzero");
        for c in a.iter_mut() {
            *c = c.mul(&inv);
        }
    }
    a
}

fn poly_rem(a: &[CyclotomicNumber], b: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
    let mut r: Vec<CyclotomicNumber> = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = b[db].invert().expect("divisor has nonzero leading coefficient");
    while r.len() > db {
        let k = r.len() - 1;
        let q = r[k].mul(&lead_inv);
        if !q.is_zero() {
            for i in 0..db {
                let s = q.mul(&b[i]);
                r[k - db + i] = r[k - db + i].sub(&s);
            }
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    trim(r)
}

/// The exceptional pairs of the Alexander-Hirschowitz theorem, where the
/// generic-rank formula below is off by one.
fn ah_exceptional(nvars: u64, degree: u64) -> bool {
    (degree == 2 && nvars >= 2)
        || matches!((nvars, degree), (3, 4) | (4, 4) | (5, 4) | (5, 3))
}

/// Rank of a generic form of the given degree: ceil(binom(D+n-1, n-1)/n),
/// with a caveat flag on the classical exceptional pairs.
pub fn general_rank(nvars: u64, degree: u64) -> (BigInt, bool) {
    let dim = binomial(degree + nvars - 1, nvars - 1);
    let n = BigInt::from(nvars);
    let (q, r) = dim.div_rem(&n);
    let rank = if r.is_zero() { q } else { q + 1u32 };
    (rank, ah_exceptional(nvars, degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::monomial_count;
    use crate::cyclo::CyclotomicNumber as C;
    use crate::groups::{FamilySpec, ReflectionGroup, DEFAULT_CAP};
    use crate::skew::build_skew_invariant;
    use crate::waring::decompose;

    fn build(spec: FamilySpec) -> ReflectionGroup {
        ReflectionGroup::build_family(&spec, DEFAULT_CAP).unwrap()
    }

    fn x(i: usize, n: usize) -> Polynomial {
        Polynomial::variable(n, i)
    }

    /// Literal formulation: new generators in degree k are the kernel modulo
    /// the span of variable times lower kernel elements.
    fn generator_degrees_by_span(f: &Polynomial) -> Vec<u32> {
        let n = f.nvars();
        let deg = f.homogeneous_degree().unwrap();
        let mut out = Vec::new();
        let mut prev: Vec<Polynomial> = Vec::new();
        for k in 1..=deg + 1 {
            let kernel = catalecticant_kernel(f, k);
            let monoms = monomials(n, k);
            let index: std::collections::HashMap<&ExponentVector, usize> =
                monoms.iter().enumerate().map(|(i, e)| (e, i)).collect();
            let mut products = Vec::new();
            for b in &prev {
                for i in 0..n {
                    products.push(b.mul(&x(i, n)));
                }
            }
            let mut mat = Matrix::zero(products.len(), monoms.len());
            for (r, p) in products.iter().enumerate() {
                for (e, c) in p.terms() {
                    mat.set(r, index[e], c.clone());
                }
            }
            let span = mat.rank();
            for _ in 0..kernel.len() - span {
                out.push(k);
            }
            prev = kernel;
        }
        out
    }

    #[test]
    fn kernel_examples() {
        let f = x(0, 2).mul(&x(1, 2));
        let k2 = catalecticant_kernel(&f, 2);
        assert_eq!(k2.len(), 2);
        for b in &k2 {
            assert!(b.diff_apply(&f).is_zero());
        }
        // d1 d2 does not annihilate
        let mixed = x(0, 2).mul(&x(1, 2));
        assert!(!mixed.diff_apply(&f).is_zero());

        let cube = x(0, 2).pow(3);
        let k1 = catalecticant_kernel(&cube, 1);
        assert_eq!(k1.len(), 1);
        assert_eq!(k1[0], x(1, 2));

        let g = build(FamilySpec::Symmetric { n: 3 });
        let fs3 = build_skew_invariant(&g).unwrap().polynomial;
        let k1 = catalecticant_kernel(&fs3, 1);
        assert_eq!(k1.len(), 1);
        let trace = x(0, 3).add(&x(1, 3)).add(&x(2, 3));
        assert!(k1[0].scalar_multiple_of(&trace).unwrap().is_some());
    }

    #[test]
    fn kernel_dimensions_complement_the_hilbert_function() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        let f = build_skew_invariant(&g).unwrap().polynomial;
        let hf = hilbert_function(&f);
        for k in 0..=3u32 {
            let kernel = catalecticant_kernel(&f, k).len();
            let ambient = monomial_count(3, k);
            assert_eq!(
                BigInt::from(kernel + hf[k as usize]),
                ambient,
                "complement failed at degree {k}"
            );
        }
    }

    #[test]
    fn hilbert_functions_of_small_forms() {
        let f = x(0, 2).mul(&x(1, 2));
        assert_eq!(hilbert_function(&f), vec![1, 2, 1]);

        let cube = x(0, 1).pow(3);
        assert_eq!(hilbert_function(&cube), vec![1, 1, 1, 1]);

        let g = build(FamilySpec::Symmetric { n: 3 });
        let fs3 = build_skew_invariant(&g).unwrap().polynomial;
        assert_eq!(hilbert_function(&fs3), vec![1, 2, 2, 1]);
    }

    #[test]
    fn hilbert_functions_are_palindromic() {
        let cases = vec![
            x(0, 2).mul(&x(1, 2).pow(2)),
            x(0, 3).mul(&x(1, 3)).mul(&x(2, 3)),
            build_skew_invariant(&build(FamilySpec::Hyperoctahedral { n: 2 }))
                .unwrap()
                .polynomial,
            build_skew_invariant(&build(FamilySpec::Dihedral { m: 6 }))
                .unwrap()
                .polynomial,
        ];
        for f in cases {
            let hf = hilbert_function(&f);
            let mut rev = hf.clone();
            rev.reverse();
            assert_eq!(hf, rev);
            assert_eq!(hf[0], 1);
            assert_eq!(*hf.last().unwrap(), 1);
        }
    }

    #[test]
    fn generator_degrees_of_small_forms() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        let fs3 = build_skew_invariant(&g).unwrap().polynomial;
        assert_eq!(apolar_generator_degrees(&fs3), vec![1, 2, 3]);

        let m = x(0, 2).mul(&x(1, 2).pow(2));
        assert_eq!(apolar_generator_degrees(&m), vec![2, 3]);

        for mm in 3..=5u32 {
            let f = x(0, 2).pow(mm).sub(&x(1, 2).pow(mm));
            assert_eq!(apolar_generator_degrees(&f), vec![2, mm]);
        }
    }

    #[test]
    fn koszul_and_span_methods_agree() {
        let cases = vec![
            x(0, 2).mul(&x(1, 2)),
            x(0, 2).mul(&x(1, 2).pow(2)),
            x(0, 2).pow(4).sub(&x(1, 2).pow(4)),
            build_skew_invariant(&build(FamilySpec::Symmetric { n: 3 }))
                .unwrap()
                .polynomial,
            build_skew_invariant(&build(FamilySpec::Hyperoctahedral { n: 2 }))
                .unwrap()
                .polynomial,
            x(0, 3).mul(&x(1, 3)).mul(&x(2, 3).pow(2)),
        ];
        for f in cases {
            assert_eq!(
                apolar_generator_degrees(&f),
                generator_degrees_by_span(&f),
                "methods disagree on {f:?}"
            );
        }
    }

    #[test]
    fn skew_invariants_recover_the_group_degrees() {
        for spec in [
            FamilySpec::Symmetric { n: 3 },
            FamilySpec::Symmetric { n: 4 },
            FamilySpec::Hyperoctahedral { n: 2 },
            FamilySpec::Hyperoctahedral { n: 3 },
            FamilySpec::Demihyperoctahedral { n: 3 },
            FamilySpec::Dihedral { m: 5 },
            FamilySpec::Imprimitive { d: 1, e: 3, n: 3 },
        ] {
            let g = build(spec.clone());
            assert!(g.order() <= 200);
            let f = build_skew_invariant(&g).unwrap();
            let hf = hilbert_function(&f.polynomial);
            assert_eq!(
                hf.iter().sum::<usize>(),
                g.order(),
                "apolar algebra dimension mismatch for {}",
                spec.name()
            );
            assert_eq!(
                apolar_generator_degrees(&f.polynomial),
                g.degrees().unwrap(),
                "generator degrees mismatch for {}",
                spec.name()
            );
        }
    }

    #[test]
    fn rank_certificates_for_symmetric_four_and_b3() {
        let g = build(FamilySpec::Symmetric { n: 4 });
        let f = build_skew_invariant(&g).unwrap().polynomial;
        let dec = decompose(&g, 4).unwrap();
        let report = rs_bound_report(&f, Some(&dec)).unwrap();
        assert_eq!(report.dim_af, 24);
        assert_eq!(report.delta, 4);
        assert_eq!(report.rs_lower_bound, 6);
        assert_eq!(report.upper_bound, Some(6));
        assert!(report.certified);

        let b3 = build(FamilySpec::Hyperoctahedral { n: 3 });
        let fb3 = build_skew_invariant(&b3).unwrap().polynomial;
        let dec = decompose(&b3, 6).unwrap();
        let report = rs_bound_report(&fb3, Some(&dec)).unwrap();
        assert_eq!(report.dim_af, 48);
        assert_eq!(report.delta, 6);
        assert_eq!(report.rs_lower_bound, 8);
        assert_eq!(report.upper_bound, Some(8));
        assert!(report.certified);
    }

    #[test]
    fn monomial_report_shows_the_gap() {
        let f = x(0, 2).mul(&x(1, 2).pow(2));
        let report = rs_bound_report(&f, None).unwrap();
        assert_eq!(report.dim_af, 6);
        assert_eq!(report.delta, 3);
        assert_eq!(report.rs_lower_bound, 2);
        assert_eq!(report.upper_bound, None);
        assert!(!report.certified);
        assert_eq!(report.ccg_reference, Some(3));
    }

    #[test]
    fn report_rejects_bad_decompositions() {
        let f = x(0, 2).mul(&x(1, 2));
        let dec = WaringDecomposition {
            nvars: 2,
            exponent: 2,
            terms: vec![(C::one(), crate::poly::LinearForm::from_integers(&[1, 1]))],
            provenance: None,
        };
        assert!(rs_bound_report(&f, Some(&dec)).is_err());
    }

    #[test]
    fn steinberg_consistency() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        let f = build_skew_invariant(&g).unwrap();
        assert!(steinberg_check(&g, &f).unwrap());
        // the non-invariant first partial does not annihilate
        assert!(!x(0, 3).diff_apply(&f.polynomial).is_zero());

        let z2z2 = build(FamilySpec::CyclicProduct { exponents: vec![1, 1] });
        let fz = build_skew_invariant(&z2z2).unwrap();
        assert!(steinberg_check(&z2z2, &fz).unwrap());
        assert_eq!(hilbert_function(&fz.polynomial).iter().sum::<usize>(), 4);

        let b2 = build(FamilySpec::Hyperoctahedral { n: 2 });
        let fb = build_skew_invariant(&b2).unwrap();
        assert!(steinberg_check(&b2, &fb).unwrap());

        assert!(matches!(
            steinberg_check_with(&g, &f, 4, 16),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn sylvester_examples() {
        for m in 3..=6u32 {
            let f = x(0, 2).pow(m).sub(&x(1, 2).pow(m));
            assert_eq!(sylvester_binary_rank(&f).unwrap(), 2);
        }
        let f = x(0, 2).mul(&x(1, 2).pow(2));
        assert_eq!(sylvester_binary_rank(&f).unwrap(), 3);
        let sq = x(0, 2).pow(2);
        assert_eq!(sylvester_binary_rank(&sq).unwrap(), 1);
        // generic binary cubic has rank 2
        let gen = x(0, 2).pow(3).add(&x(1, 2).pow(3));
        assert_eq!(sylvester_binary_rank(&gen).unwrap(), 2);
        assert!(sylvester_binary_rank(&Polynomial::zero(2)).is_err());
        assert!(sylvester_binary_rank(&x(0, 3)).is_err());
    }

    #[test]
    fn sylvester_agrees_with_dihedral_decompositions() {
        for m in [4u32, 5, 6] {
            let g = build(FamilySpec::Dihedral { m });
            let f = build_skew_invariant(&g).unwrap().polynomial;
            let dec = decompose(&g, m).unwrap();
            assert_eq!(dec.terms.len(), 2);
            assert_eq!(sylvester_binary_rank(&f).unwrap(), 2);
        }
    }

    #[test]
    fn general_rank_table_values() {
        assert_eq!(general_rank(3, 15).0, BigInt::from(46));
        assert_eq!(general_rank(4, 24).0, BigInt::from(732));
        assert_eq!(general_rank(8, 120).0, BigInt::from(11169551972u64));
        assert!(!general_rank(3, 15).1);
        assert!(general_rank(3, 4).1);
        assert!(general_rank(7, 2).1);
    }
}
