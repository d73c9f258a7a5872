//! The fundamental skew invariant f_W of a reflection group.
//!
//! f_W is the product of the hyperplane forms L_H raised to k_H - 1, a
//! polynomial of degree equal to the number of reflections, on which every
//! group element w acts by det(w)^-1. It is only defined up to a scalar; the
//! constructor pins the grevlex-leading coefficient to 1. The classical
//! families also have displayed product formulas, kept here unnormalized for
//! cross-checking.

use crate::error::Result;
use crate::groups::{FamilySpec, ReflectionGroup};
use crate::poly::{ExponentVector, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    HyperplaneProduct,
    FamilyClosedForm,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::HyperplaneProduct => "hyperplane-product",
            Normalization::FamilyClosedForm => "family-closed-form",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SkewInvariant {
    pub polynomial: Polynomial,
    pub degree: u32,
    pub normalization: Normalization,
    pub group_name: String,
}

/// Product of hyperplane forms with exponents k_H - 1, normalized to leading
/// coefficient 1.
pub fn build_skew_invariant(g: &ReflectionGroup) -> Result<SkewInvariant> {
    let mut f = Polynomial::one(g.nvars());
    for h in g.hyperplanes() {
        f = f.mul(&h.form.to_polynomial().pow(h.multiplicity - 1));
    }
    let (f, _) = f.normalize_leading()?;
    let degree = f.homogeneous_degree().expect("product of forms is homogeneous");
    debug_assert_eq!(degree as usize, g.reflections().len());
    Ok(SkewInvariant {
        polynomial: f,
        degree,
        normalization: Normalization::HyperplaneProduct,
        group_name: g.name().to_string(),
    })
}

/// The displayed product formula of a classical family, expanded exactly and
/// left unnormalized.
pub fn family_formula(spec: &FamilySpec) -> Polynomial {
    let n = spec.nvars();
    let x = |i: usize| Polynomial::variable(n, i);
    let pair_product = |power: u32| {
        let mut f = Polynomial::one(n);
        for i in 0..n {
            for j in i + 1..n {
                f = f.mul(&x(i).pow(power).sub(&x(j).pow(power)));
            }
        }
        f
    };
    match spec {
        FamilySpec::Symmetric { .. } => pair_product(1),
        FamilySpec::Hyperoctahedral { .. } => {
            let mut f = pair_product(2);
            for i in 0..n {
                f = f.mul(&x(i));
            }
            f
        }
        FamilySpec::Demihyperoctahedral { .. } => pair_product(2),
        FamilySpec::Imprimitive { d, e, .. } => {
            let mut f = pair_product(d * e);
            for i in 0..n {
                f = f.mul(&x(i).pow(d - 1));
            }
            f
        }
        FamilySpec::Dihedral { m } => x(0).pow(*m).sub(&x(1).pow(*m)),
        FamilySpec::CyclicProduct { exponents } => {
            let exp: Vec<u32> = exponents.clone();
            Polynomial::monomial(
                ExponentVector(exp),
                crate::cyclo::CyclotomicNumber::one(),
            )
        }
    }
}

/// Checks w(f) = det(w)^-1 f. Generators suffice because both sides transform
/// multiplicatively; `exhaustive` runs every element instead.
pub fn is_skew_invariant(g: &ReflectionGroup, f: &Polynomial, exhaustive: bool) -> bool {
    let check = |i: usize| {
        let image = g.act(i, f);
        let scaled = f.scale(
            &g.element(g.inverse_of(i)).det,
        );
        image == scaled
    };
    if exhaustive {
        (0..g.order()).all(check)
    } else {
        g.generator_indices().iter().all(|&i| check(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CyclotomicNumber as C;
    use crate::groups::DEFAULT_CAP;
    use crate::poly::LinearForm;

    fn build(spec: FamilySpec) -> ReflectionGroup {
        ReflectionGroup::build_family(&spec, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn vandermonde_for_symmetric_three() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        let f = build_skew_invariant(&g).unwrap();
        assert_eq!(f.degree, 3);
        assert_eq!(f.normalization, Normalization::HyperplaneProduct);
        let v = family_formula(&FamilySpec::Symmetric { n: 3 });
        assert_eq!(f.polynomial, v, "Vandermonde already has leading coefficient 1");
        assert_eq!(f.polynomial.nterms(), 6);
        assert_eq!(
            f.polynomial.coeff(&ExponentVector(vec![2, 1, 0])),
            C::one()
        );
    }

    #[test]
    fn family_formulas_match_hyperplane_products() {
        for spec in [
            FamilySpec::Symmetric { n: 4 },
            FamilySpec::Hyperoctahedral { n: 2 },
            FamilySpec::Hyperoctahedral { n: 3 },
            FamilySpec::Demihyperoctahedral { n: 3 },
            FamilySpec::Imprimitive { d: 1, e: 3, n: 3 },
            FamilySpec::Imprimitive { d: 2, e: 2, n: 3 },
            FamilySpec::Dihedral { m: 5 },
            FamilySpec::CyclicProduct { exponents: vec![1, 2] },
        ] {
            let g = build(spec.clone());
            let built = build_skew_invariant(&g).unwrap();
            let formula = family_formula(&spec);
            let c = built
                .polynomial
                .scalar_multiple_of(&formula)
                .unwrap()
                .unwrap_or_else(|| panic!("formula mismatch for {}", spec.name()));
            assert!(!c.is_zero());
            assert_eq!(built.degree as usize, g.reflections().len());
        }
    }

    #[test]
    fn monomial_invariant_of_cyclic_product() {
        let g = build(FamilySpec::CyclicProduct { exponents: vec![1, 2] });
        let f = build_skew_invariant(&g).unwrap();
        let expect = Polynomial::monomial(ExponentVector(vec![1, 2]), C::one());
        assert_eq!(f.polynomial, expect);
    }

    #[test]
    fn imprimitive_formula_degree() {
        let f = family_formula(&FamilySpec::Imprimitive { d: 2, e: 2, n: 3 });
        assert_eq!(f.homogeneous_degree(), Some(15));
        assert_eq!(f.nterms(), 6);
    }

    #[test]
    fn dihedral_formula() {
        let f = family_formula(&FamilySpec::Dihedral { m: 5 });
        let x = Polynomial::variable(2, 0);
        let y = Polynomial::variable(2, 1);
        assert_eq!(f, x.pow(5).sub(&y.pow(5)));
        let g = build(FamilySpec::Dihedral { m: 5 });
        let built = build_skew_invariant(&g).unwrap();
        assert_eq!(built.polynomial, f);
    }

    #[test]
    fn skew_invariance_holds_and_fails_correctly() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        let f = build_skew_invariant(&g).unwrap();
        assert!(is_skew_invariant(&g, &f.polynomial, false));
        assert!(is_skew_invariant(&g, &f.polynomial, true));
        let x1 = Polynomial::variable(3, 0);
        assert!(!is_skew_invariant(&g, &x1, false));
    }

    #[test]
    fn generator_check_agrees_with_exhaustive_on_small_groups() {
        for spec in [
            FamilySpec::Hyperoctahedral { n: 2 },
            FamilySpec::Imprimitive { d: 1, e: 3, n: 3 },
            FamilySpec::Dihedral { m: 7 },
            FamilySpec::Imprimitive { d: 2, e: 2, n: 3 },
        ] {
            let g = build(spec);
            let f = build_skew_invariant(&g).unwrap();
            assert!(is_skew_invariant(&g, &f.polynomial, false));
            assert!(is_skew_invariant(&g, &f.polynomial, true));
            let probe = Polynomial::variable(g.nvars(), 0).pow(f.degree);
            assert_eq!(
                is_skew_invariant(&g, &probe, false),
                is_skew_invariant(&g, &probe, true)
            );
        }
    }

    #[test]
    fn vanishing_locus_is_the_arrangement() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        let f = build_skew_invariant(&g).unwrap();
        let regular = [C::from_integer(1), C::from_integer(2), C::from_integer(4)];
        assert!(!f.polynomial.evaluate(&regular).is_zero());
        assert!(g.is_regular_vector(&LinearForm::new(regular.to_vec())));
        let on_wall = [C::from_integer(1), C::from_integer(1), C::zero()];
        assert!(f.polynomial.evaluate(&on_wall).is_zero());
        let b2 = build(FamilySpec::Hyperoctahedral { n: 2 });
        let fb = build_skew_invariant(&b2).unwrap();
        let axis = [C::zero(), C::from_integer(3)];
        assert!(fb.polynomial.evaluate(&axis).is_zero());
    }
}
