//! Finite complex reflection groups as fully enumerated matrix groups.
//!
//! Groups are built either from a named family or from explicit generator
//! matrices, by breadth-first closure with canonical-form hashing. Elements are
//! stored sorted by their canonical serialization, which makes every listing,
//! coset representative, and search result reproducible across runs.
//!
//! The shipped families are all monomial (permutation pattern times a diagonal
//! of roots of unity), and products and inverses use that structure; dense
//! matrices appear only for user-supplied generators.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::cyclo::{lcm_u32, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, MonomialForm};
use crate::poly::{LinearForm, Polynomial};

pub const DEFAULT_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// Symmetric group permuting the coordinates of C^n.
    Symmetric { n: u32 },
    /// Signed permutations of C^n.
    Hyperoctahedral { n: u32 },
    /// Signed permutations with an even number of sign changes.
    Demihyperoctahedral { n: u32 },
    /// G(de, e, n): monomial matrices with de-th root entries whose product is
    /// a d-th root of unity.
    Imprimitive { d: u32, e: u32, n: u32 },
    /// G(m, m, 2) acting on C^2 in the coordinates where x^m - y^m is the
    /// skew invariant.
    Dihedral { m: u32 },
    /// Product of cyclic groups acting diagonally; the j-th coordinate is
    /// scaled by roots of unity of order exponents[j] + 1.
    CyclicProduct { exponents: Vec<u32> },
}

impl FamilySpec {
    pub fn name(&self) -> String {
        match self {
            FamilySpec::Symmetric { n } => format!("symmetric({n})"),
            FamilySpec::Hyperoctahedral { n } => format!("hyperoctahedral({n})"),
            FamilySpec::Demihyperoctahedral { n } => format!("demihyperoctahedral({n})"),
            FamilySpec::Imprimitive { d, e, n } => format!("G({},{},{})", d * e, e, n),
            FamilySpec::Dihedral { m } => format!("dihedral({m})"),
            FamilySpec::CyclicProduct { exponents } => {
                let parts: Vec<String> = exponents.iter().map(|a| a.to_string()).collect();
                format!("cyclicProduct({})", parts.join(","))
            }
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            FamilySpec::Symmetric { n }
            | FamilySpec::Hyperoctahedral { n }
            | FamilySpec::Demihyperoctahedral { n } => *n as usize,
            FamilySpec::Imprimitive { n, .. } => *n as usize,
            FamilySpec::Dihedral { .. } => 2,
            FamilySpec::CyclicProduct { exponents } => exponents.len(),
        }
    }

    pub fn field_order(&self) -> u32 {
        match self {
            FamilySpec::Symmetric { .. } => 1,
            FamilySpec::Hyperoctahedral { .. } | FamilySpec::Demihyperoctahedral { .. } => 2,
            FamilySpec::Imprimitive { d, e, .. } => d * e,
            FamilySpec::Dihedral { m } => *m,
            FamilySpec::CyclicProduct { exponents } => {
                exponents.iter().fold(1, |acc, &a| lcm_u32(acc, a + 1))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFamily(msg));
        match self {
            FamilySpec::Symmetric { n }
            | FamilySpec::Hyperoctahedral { n }
            | FamilySpec::Demihyperoctahedral { n } => {
                if *n == 0 {
                    return bad(format!("{}: n must be positive", self.name()));
                }
            }
            FamilySpec::Imprimitive { d, e, n } => {
                if *d == 0 || *e == 0 || *n == 0 {
                    return bad(format!("{}: all parameters must be positive", self.name()));
                }
            }
            FamilySpec::Dihedral { m } => {
                if *m == 0 {
                    return bad("dihedral(0): m must be positive".into());
                }
            }
            FamilySpec::CyclicProduct { exponents } => {
                if exponents.is_empty() {
                    return bad("cyclicProduct: at least one exponent required".into());
                }
            }
        }
        Ok(())
    }

    /// The classical degree lists of the families, in sorted order.
    pub fn closed_form_degrees(&self) -> Vec<u32> {
        let mut degs = match self {
            FamilySpec::Symmetric { n } => (1..=*n).collect::<Vec<u32>>(),
            FamilySpec::Hyperoctahedral { n } => (1..=*n).map(|i| 2 * i).collect(),
            FamilySpec::Demihyperoctahedral { n } => {
                let mut v: Vec<u32> = (1..*n).map(|i| 2 * i).collect();
                v.push(*n);
                v
            }
            FamilySpec::Imprimitive { d, e, n } => {
                let mut v: Vec<u32> = (1..*n).map(|i| i * d * e).collect();
                v.push(n * d);
                v
            }
            FamilySpec::Dihedral { m } => vec![2, *m],
            FamilySpec::CyclicProduct { exponents } => {
                exponents.iter().map(|&a| a + 1).collect()
            }
        };
        degs.sort_unstable();
        degs
    }

    fn generators(&self) -> Vec<Matrix> {
        let n = self.nvars();
        let m = self.field_order();
        let mut gens = Vec::new();
        let transpositions = |gens: &mut Vec<Matrix>| {
            for i in 0..n.saturating_sub(1) {
                gens.push(adjacent_swap(n, i));
            }
        };
        match self {
            FamilySpec::Symmetric { .. } => transpositions(&mut gens),
            FamilySpec::Hyperoctahedral { .. } => {
                gens.push(leading_diag(n, CyclotomicNumber::from_integer(-1)));
                transpositions(&mut gens);
            }
            FamilySpec::Demihyperoctahedral { .. } => {
                if n >= 2 {
                    gens.push(twisted_swap(n, 2));
                }
                transpositions(&mut gens);
            }
            FamilySpec::Imprimitive { d, e, n: _ } => {
                if *d > 1 {
                    gens.push(leading_diag(n, CyclotomicNumber::root_of_unity(d * e, *e as i64)));
                }
                if *e > 1 && n >= 2 {
                    gens.push(twisted_swap(n, m));
                }
                transpositions(&mut gens);
            }
            FamilySpec::Dihedral { m } => {
                if *m > 1 {
                    gens.push(twisted_swap(2, *m));
                }
                transpositions(&mut gens);
            }
            FamilySpec::CyclicProduct { exponents } => {
                for (j, &a) in exponents.iter().enumerate() {
                    if a > 0 {
                        let mut diag = vec![CyclotomicNumber::one(); n];
                        diag[j] = CyclotomicNumber::root_of_unity(a + 1, 1);
                        gens.push(Matrix::diagonal(&diag));
                    }
                }
            }
        }
        gens
    }
}

/// Swaps coordinates i and i+1.
fn adjacent_swap(n: usize, i: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    m.set(i, i, CyclotomicNumber::zero());
    m.set(i + 1, i + 1, CyclotomicNumber::zero());
    m.set(i, i + 1, CyclotomicNumber::one());
    m.set(i + 1, i, CyclotomicNumber::one());
    m
}

/// diag(c, 1, ..., 1).
fn leading_diag(n: usize, c: CyclotomicNumber) -> Matrix {
    let mut m = Matrix::identity(n);
    m.set(0, 0, c);
    m
}

/// The reflection e_1 -> z e_2, e_2 -> z^-1 e_1 with z of order `order`,
/// fixing the hyperplane through (1, z, 0, ..., 0).
fn twisted_swap(n: usize, order: u32) -> Matrix {
    let z = CyclotomicNumber::root_of_unity(order, 1);
    let mut m = Matrix::identity(n);
    m.set(0, 0, CyclotomicNumber::zero());
    m.set(1, 1, CyclotomicNumber::zero());
    m.set(1, 0, z.clone());
    m.set(0, 1, z.pow(-1).expect("root of unity is invertible"));
    m
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: Matrix,
    pub det: CyclotomicNumber,
    pub order: u32,
    pub key: String,
    pub monomial: Option<MonomialForm>,
}

#[derive(Clone, Debug)]
pub struct Reflection {
    /// Index into the group's element list.
    pub element: usize,
    /// Index into the group's hyperplane list.
    pub hyperplane: usize,
    /// Multiplicative order of the reflection.
    pub order: u32,
    /// The sole eigenvalue different from 1, equal to the determinant.
    pub exceptional_eigenvalue: CyclotomicNumber,
    /// Spans the eigenspace of the exceptional eigenvalue; first nonzero
    /// coordinate normalized to 1.
    pub eigenvector: LinearForm,
    /// Defining functional of the fixed hyperplane; first nonzero coordinate
    /// normalized to 1.
    pub functional: LinearForm,
}

#[derive(Clone, Debug)]
pub struct Hyperplane {
    /// Vanishes exactly on the hyperplane.
    pub functional: LinearForm,
    /// Exceptional eigenvector shared by the reflections fixing this
    /// hyperplane, as a linear form.
    pub form: LinearForm,
    /// Order of the pointwise stabilizer: 1 + number of reflections fixing
    /// this hyperplane.
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    pub subgroup_order: u32,
    /// Element indices, one per left coset of the cyclic subgroup, each the
    /// canonically smallest member of its coset, in increasing order.
    pub representatives: Vec<usize>,
}

#[derive(Debug)]
pub struct ReflectionGroup {
    name: String,
    family: Option<FamilySpec>,
    nvars: usize,
    field_order: u32,
    elements: Vec<GroupElement>,
    index: HashMap<String, usize>,
    generators: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    reflections: Vec<Reflection>,
    hyperplanes: Vec<Hyperplane>,
    degrees: OnceLock<std::result::Result<Vec<u32>, String>>,
}

fn matrix_key(m: &Matrix) -> String {
    let mut s = String::with_capacity(m.nrows() * m.ncols() * 6);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            m.get(i, j).canonical_key(&mut s);
            s.push('|');
        }
    }
    s
}

/// Promotes every irrational entry to the group's field order so that equal
/// elements always serialize identically.
fn normalize_entries(m: &Matrix, field_order: u32) -> Result<Matrix> {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let e = m.get(i, j);
            if e.order() > 1 && e.order() != field_order {
                out.set(i, j, e.promote(field_order)?);
            }
        }
    }
    Ok(out)
}

impl ReflectionGroup {
    pub fn build_family(spec: &FamilySpec, cap: usize) -> Result<Self> {
        spec.validate()?;
        let gens = spec.generators();
        Self::enumerate(
            spec.name(),
            Some(spec.clone()),
            spec.nvars(),
            spec.field_order(),
            gens,
            cap,
        )
    }

    /// Builds the closure of arbitrary invertible matrices. The field order is
    /// grown to cover every generator entry.
    pub fn from_generators(
        name: &str,
        nvars: usize,
        field_order: u32,
        generators: Vec<Matrix>,
        cap: usize,
    ) -> Result<Self> {
        let mut m = field_order.max(1);
        for g in &generators {
            if g.nrows() != nvars || g.ncols() != nvars {
                return Err(Error::Dimension(format!(
                    "generator is {}x{}, expected {}x{}",
                    g.nrows(),
                    g.ncols(),
                    nvars,
                    nvars
                )));
            }
            for i in 0..nvars {
                for j in 0..nvars {
                    m = lcm_u32(m, g.get(i, j).order());
                }
            }
        }
        Self::enumerate(name.to_string(), None, nvars, m, generators, cap)
    }

    fn enumerate(
        name: String,
        family: Option<FamilySpec>,
        nvars: usize,
        field_order: u32,
        generators: Vec<Matrix>,
        cap: usize,
    ) -> Result<Self> {
        for g in &generators {
            if g.det().is_zero() {
                return Err(Error::SingularGenerator);
            }
        }
        let gens: Vec<Matrix> = generators
            .iter()
            .map(|g| normalize_entries(g, field_order))
            .collect::<Result<_>>()?;

        let mut mats: Vec<Matrix> = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        let identity = Matrix::identity(nvars);
        seen.insert(matrix_key(&identity), 0);
        mats.push(identity);
        let mut frontier: Vec<usize> = vec![0];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &i in &frontier {
                for g in &gens {
                    let prod = mul_fast(&mats[i], g);
                    let key = matrix_key(&prod);
                    if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(key) {
                        if mats.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        slot.insert(mats.len());
                        next.push(mats.len());
                        mats.push(prod);
                    }
                }
            }
            frontier = next;
        }

        // canonical storage order
        let mut order_keys: Vec<(String, usize)> =
            seen.iter().map(|(k, &i)| (k.clone(), i)).collect();
        order_keys.sort();
        let mut elements = Vec::with_capacity(mats.len());
        let mut index = HashMap::with_capacity(mats.len());
        for (rank, (key, old)) in order_keys.iter().enumerate() {
            let matrix = mats[*old].clone();
            let det = matrix.det();
            let monomial = matrix.monomial_form();
            index.insert(key.clone(), rank);
            elements.push(GroupElement {
                matrix,
                det,
                order: 0,
                key: key.clone(),
                monomial,
            });
        }

        let identity = *index
            .get(&matrix_key(&Matrix::identity(nvars)))
            .expect("identity is always enumerated");

        let mut group = ReflectionGroup {
            name,
            family,
            nvars,
            field_order,
            elements,
            index,
            generators: Vec::new(),
            identity,
            inverse: Vec::new(),
            reflections: Vec::new(),
            hyperplanes: Vec::new(),
            degrees: OnceLock::new(),
        };
        group.generators = gens
            .iter()
            .map(|g| group.index[&matrix_key(g)])
            .collect();
        group.fill_orders();
        group.fill_inverses();
        group.find_reflections()?;
        Ok(group)
    }

    fn fill_orders(&mut self) {
        for i in 0..self.elements.len() {
            let mut k = 1u32;
            let mut cur = i;
            while cur != self.identity {
                cur = self.multiply(cur, i);
                k += 1;
            }
            self.elements[i].order = k;
        }
    }

    fn fill_inverses(&mut self) {
        self.inverse = (0..self.elements.len())
            .map(|i| {
                let inv = self.elements[i]
                    .matrix
                    .inverse()
                    .expect("group elements are invertible");
                self.index[&matrix_key(&inv)]
            })
            .collect();
    }

    fn find_reflections(&mut self) -> Result<()> {
        for i in 0..self.elements.len() {
            let el = &self.elements[i];
            let shifted = el.matrix.sub_scalar_diag(&CyclotomicNumber::one());
            if shifted.rank() != 1 {
                continue;
            }
            // rank(w - 1) = 1: eigenvalues are 1 (n-1 times) and det(w)
            let lambda = el.det.clone();
            let eig = el.matrix.sub_scalar_diag(&lambda).kernel_basis();
            if eig.len() != 1 {
                return Err(Error::Dimension(format!(
                    "reflection at index {i} has a {}-dimensional exceptional eigenspace",
                    eig.len()
                )));
            }
            let (eigenvector, _) = LinearForm::new(eig.into_iter().next().unwrap())
                .normalize_first()?;
            let functional = first_nonzero_row(&shifted)
                .expect("rank-one matrix has a nonzero row");
            let (functional, _) = functional.normalize_first()?;
            let hyperplane = match self
                .hyperplanes
                .iter()
                .position(|h| {
                    functional
                        .scalar_multiple_of(&h.functional)
                        .map(|o| o.is_some())
                        .unwrap_or(false)
                }) {
                Some(h) => {
                    self.hyperplanes[h].multiplicity += 1;
                    h
                }
                None => {
                    self.hyperplanes.push(Hyperplane {
                        functional: functional.clone(),
                        form: eigenvector.clone(),
                        multiplicity: 2,
                    });
                    self.hyperplanes.len() - 1
                }
            };
            self.reflections.push(Reflection {
                element: i,
                hyperplane,
                order: self.elements[i].order,
                exceptional_eigenvalue: lambda,
                eigenvector,
                functional,
            });
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        self.family.as_ref()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field_order(&self) -> u32 {
        self.field_order
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn reflections(&self) -> &[Reflection] {
        &self.reflections
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        let normalized = normalize_entries(m, self.field_order).ok()?;
        self.index.get(&matrix_key(&normalized)).copied()
    }

    /// Index of the product element_i * element_j.
    pub fn multiply(&self, i: usize, j: usize) -> usize {
        let prod = self.compose_matrices(i, j);
        self.index[&matrix_key(&prod)]
    }

    fn compose_matrices(&self, i: usize, j: usize) -> Matrix {
        match (&self.elements[i].monomial, &self.elements[j].monomial) {
            (Some(a), Some(b)) => a.mul(b).to_matrix(),
            _ => self.elements[i].matrix.mul(&self.elements[j].matrix),
        }
    }

    /// Applies element i to a polynomial through the substitution action.
    pub fn act(&self, i: usize, f: &Polynomial) -> Polynomial {
        match &self.elements[i].monomial {
            Some(mf) => f.apply_monomial(mf),
            None => f.apply_matrix(&self.elements[i].matrix),
        }
    }

    /// Applies element i to a vector (the coefficient column of a form).
    pub fn act_vector(&self, i: usize, v: &LinearForm) -> LinearForm {
        match &self.elements[i].monomial {
            Some(mf) => v.apply_monomial(mf),
            None => v.apply_matrix(&self.elements[i].matrix),
        }
    }

    /// Exact basis of ker(w - lambda I).
    pub fn eigenvectors(&self, w: usize, lambda: &CyclotomicNumber) -> Vec<LinearForm> {
        self.elements[w]
            .matrix
            .sub_scalar_diag(lambda)
            .kernel_basis()
            .into_iter()
            .map(LinearForm::new)
            .collect()
    }

    /// True iff v lies on no reflection hyperplane.
    pub fn is_regular_vector(&self, v: &LinearForm) -> bool {
        if v.is_zero() {
            return false;
        }
        self.hyperplanes
            .iter()
            .all(|h| !h.functional.dot(v.coeffs()).is_zero())
    }

    /// All elements with a regular eigenvector of eigenvalue zeta_d, paired
    /// with one such eigenvector (first nonzero coordinate normalized to 1).
    pub fn regular_elements(&self, d: u32) -> Result<Vec<(usize, LinearForm)>> {
        if d == 0 {
            return Err(Error::InvalidFamily("eigenvalue order must be positive".into()));
        }
        let zeta = CyclotomicNumber::root_of_unity(d, 1);
        let mut out = Vec::new();
        for i in 0..self.elements.len() {
            if d > 1 && self.elements[i].order % d != 0 {
                continue;
            }
            let basis = self.eigenvectors(i, &zeta);
            if basis.is_empty() {
                continue;
            }
            if let Some(v) = self.regular_vector_in_span(&basis) {
                out.push((i, v.normalize_first()?.0));
            }
        }
        Ok(out)
    }

    /// Searches the span of an eigenspace basis for a vector avoiding every
    /// hyperplane. Returns None exactly when no such vector exists, which
    /// happens iff some single hyperplane contains the whole span.
    fn regular_vector_in_span(&self, basis: &[LinearForm]) -> Option<LinearForm> {
        for h in &self.hyperplanes {
            if basis.iter().all(|b| h.functional.dot(b.coeffs()).is_zero()) {
                return None;
            }
        }
        for b in basis {
            if self.is_regular_vector(b) {
                return Some(b.clone());
            }
        }
        // For each hyperplane, t -> sum_i t^i phi(b_i) is a nonzero polynomial
        // of degree < r, so r * #hyperplanes + 1 integer values of t cannot all
        // be roots of one of them.
        let r = basis.len();
        let bound = (self.hyperplanes.len() * r + 1) as i64;
        for t in 1..=bound {
            let tc = CyclotomicNumber::from_integer(t);
            let mut v = basis[0].clone();
            let mut scale = CyclotomicNumber::one();
            for b in &basis[1..] {
                scale = scale.mul(&tc);
                v = LinearForm::new(
                    v.coeffs()
                        .iter()
                        .zip(b.coeffs())
                        .map(|(a, c)| a.add(&scale.mul(c)))
                        .collect(),
                );
            }
            if self.is_regular_vector(&v) {
                return Some(v);
            }
        }
        unreachable!("a regular combination exists within the scanned range")
    }

    /// All d between 1 and the largest degree for which a regular eigenvector
    /// of eigenvalue zeta_d exists.
    pub fn regular_numbers(&self) -> Result<Vec<u32>> {
        let dmax = *self.degrees()?.last().unwrap_or(&1);
        let mut out = Vec::new();
        for d in 1..=dmax {
            if !self.regular_elements(d)?.is_empty() {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// Left cosets of the cyclic subgroup generated by element w, as orbits of
    /// right multiplication by w on the element list.
    pub fn cosets(&self, w: usize) -> CosetDecomposition {
        let n = self.elements.len();
        let pi: Vec<usize> = (0..n).map(|i| self.multiply(i, w)).collect();
        let mut seen = vec![false; n];
        let mut representatives = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            // start is the smallest unvisited index, hence minimal in its orbit
            representatives.push(start);
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = pi[cur];
            }
        }
        CosetDecomposition {
            subgroup_order: self.elements[w].order,
            representatives,
        }
    }

    pub fn cosets_of_matrix(&self, m: &Matrix) -> Result<CosetDecomposition> {
        let w = self.index_of(m).ok_or(Error::NotInGroup)?;
        Ok(self.cosets(w))
    }

    /// The degrees d_1 <= ... <= d_n. Named families use the classical closed
    /// form, cross-checked against the Molien series; generator-built groups
    /// use the Molien computation alone.
    pub fn degrees(&self) -> Result<&[u32]> {
        let cached = self.degrees.get_or_init(|| {
            let molien = match self.molien_degrees() {
                Ok(d) => d,
                Err(e) => return Err(e.to_string()),
            };
            if let Some(fam) = &self.family {
                let closed = fam.closed_form_degrees();
                if closed != molien {
                    return Err(format!(
                        "closed-form degrees {closed:?} disagree with Molien degrees {molien:?}"
                    ));
                }
            }
            Ok(molien)
        });
        match cached {
            Ok(d) => Ok(d),
            Err(e) => Err(Error::MolienFailure(e.clone())),
        }
    }

    /// Degrees extracted from the exact Molien series
    /// (1/|W|) sum_w 1/det(I - t w) = prod_i 1/(1 - t^(d_i)).
    pub fn molien_degrees(&self) -> Result<Vec<u32>> {
        let nterms = self.reflections.len() + self.nvars + 2;
        let mut series = vec![CyclotomicNumber::zero(); nterms + 1];
        for el in &self.elements {
            let det_poly = char_factor(el);
            let inv = invert_series(&det_poly, nterms);
            for (k, c) in inv.iter().enumerate() {
                series[k] = series[k].add(c);
            }
        }
        let scale = CyclotomicNumber::from_integer(self.elements.len() as i64).invert()?;
        for c in series.iter_mut() {
            *c = c.mul(&scale);
        }
        let mut degs = Vec::with_capacity(self.nvars);
        for _ in 0..self.nvars {
            let d = (1..=nterms)
                .find(|&k| !series[k].is_zero())
                .ok_or_else(|| {
                    Error::MolienFailure("series exhausted before all degrees were found".into())
                })?;
            // multiply by (1 - t^d)
            for k in (d..=nterms).rev() {
                let lower = series[k - d].clone();
                series[k] = series[k].sub(&lower);
            }
            degs.push(d as u32);
        }
        if !series[0].is_one() || series[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::MolienFailure(
                "series is not a product of n geometric factors".into(),
            ));
        }
        degs.sort_unstable();
        Ok(degs)
    }
}

fn first_nonzero_row(m: &Matrix) -> Option<LinearForm> {
    for i in 0..m.nrows() {
        let row: Vec<CyclotomicNumber> = (0..m.ncols()).map(|j| m.get(i, j).clone()).collect();
        if row.iter().any(|c| !c.is_zero()) {
            return Some(LinearForm::new(row));
        }
    }
    None
}

fn mul_fast(a: &Matrix, b: &Matrix) -> Matrix {
    match (a.monomial_form(), b.monomial_form()) {
        (Some(ma), Some(mb)) => ma.mul(&mb).to_matrix(),
        _ => a.mul(b),
    }
}

/// det(I - t w) as a coefficient vector in t, computed from the exact
/// eigenvalue multiplicities of the finite-order matrix w.
fn char_factor(el: &GroupElement) -> Vec<CyclotomicNumber> {
    let n = el.matrix.nrows();
    let mut poly = vec![CyclotomicNumber::one()];
    let mut total = 0usize;
    for k in 0..el.order {
        let lambda = CyclotomicNumber::root_of_unity(el.order, k as i64);
        let mult = n - el.matrix.sub_scalar_diag(&lambda).rank();
        for _ in 0..mult {
            // multiply by (1 - lambda t)
            let mut next = vec![CyclotomicNumber::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] = next[i].add(c);
                let shifted = lambda.mul(c);
                next[i + 1] = next[i + 1].sub(&shifted);
            }
            poly = next;
        }
        total += mult;
        if total == n {
            break;
        }
    }
    assert_eq!(total, n, "finite-order matrix must be diagonalizable");
    poly
}

/// Power series inverse of p (with p[0] = 1) through degree nterms.
fn invert_series(p: &[CyclotomicNumber], nterms: usize) -> Vec<CyclotomicNumber> {
    let mut q = vec![CyclotomicNumber::zero(); nterms + 1];
    q[0] = CyclotomicNumber::one();
    for k in 1..=nterms {
        let mut acc = CyclotomicNumber::zero();
        for j in 1..=k.min(p.len() - 1) {
            acc = acc.add(&p[j].mul(&q[k - j]));
        }
        q[k] = acc.neg();
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CyclotomicNumber as C;

    fn build(spec: FamilySpec) -> ReflectionGroup {
        ReflectionGroup::build_family(&spec, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn symmetric_three() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        assert_eq!(g.order(), 6);
        assert_eq!(g.reflections().len(), 3);
        assert_eq!(g.hyperplanes().len(), 3);
        let expected = [
            LinearForm::from_integers(&[1, -1, 0]),
            LinearForm::from_integers(&[1, 0, -1]),
            LinearForm::from_integers(&[0, 1, -1]),
        ];
        for want in &expected {
            assert!(
                g.hyperplanes()
                    .iter()
                    .any(|h| h.functional.scalar_multiple_of(want).unwrap().is_some()),
                "missing hyperplane {want:?}"
            );
        }
        assert_eq!(g.degrees().unwrap(), &[1, 2, 3]);
    }

    #[test]
    fn orders_match_family_formulas() {
        assert_eq!(build(FamilySpec::Symmetric { n: 4 }).order(), 24);
        assert_eq!(build(FamilySpec::Hyperoctahedral { n: 2 }).order(), 8);
        assert_eq!(build(FamilySpec::Hyperoctahedral { n: 3 }).order(), 48);
        assert_eq!(build(FamilySpec::Demihyperoctahedral { n: 3 }).order(), 24);
        assert_eq!(build(FamilySpec::Dihedral { m: 5 }).order(), 10);
        assert_eq!(build(FamilySpec::Dihedral { m: 2 }).order(), 4);
        assert_eq!(
            build(FamilySpec::CyclicProduct { exponents: vec![1, 2] }).order(),
            6
        );
        // G(de,e,n) has (de)^n n!/e elements
        assert_eq!(
            build(FamilySpec::Imprimitive { d: 1, e: 3, n: 3 }).order(),
            54
        );
        assert_eq!(
            build(FamilySpec::Imprimitive { d: 2, e: 2, n: 3 }).order(),
            192
        );
        assert_eq!(
            build(FamilySpec::Imprimitive { d: 3, e: 1, n: 2 }).order(),
            18
        );
    }

    #[test]
    fn hyperoctahedral_two_data() {
        let g = build(FamilySpec::Hyperoctahedral { n: 2 });
        assert_eq!(g.reflections().len(), 4);
        assert_eq!(g.degrees().unwrap(), &[2, 4]);
        let regs = g.regular_numbers().unwrap();
        assert!(regs.contains(&4));
    }

    #[test]
    fn imprimitive_degrees_and_counts() {
        let g = build(FamilySpec::Imprimitive { d: 1, e: 3, n: 3 });
        assert_eq!(g.degrees().unwrap(), &[3, 3, 6]);
        let prod: usize = g.degrees().unwrap().iter().map(|&d| d as usize).product();
        assert_eq!(prod, g.order());
        let sum: u32 = g.degrees().unwrap().iter().map(|d| d - 1).sum();
        assert_eq!(sum as usize, g.reflections().len());
        let mult_sum: u32 = g.hyperplanes().iter().map(|h| h.multiplicity - 1).sum();
        assert_eq!(mult_sum, sum);
    }

    #[test]
    fn degree_products_count_elements() {
        for spec in [
            FamilySpec::Symmetric { n: 4 },
            FamilySpec::Hyperoctahedral { n: 3 },
            FamilySpec::Demihyperoctahedral { n: 3 },
            FamilySpec::Dihedral { m: 7 },
            FamilySpec::Imprimitive { d: 2, e: 2, n: 3 },
            FamilySpec::CyclicProduct { exponents: vec![1, 2, 3] },
        ] {
            let g = build(spec.clone());
            let prod: usize = g.degrees().unwrap().iter().map(|&d| d as usize).product();
            assert_eq!(prod, g.order(), "degree product mismatch for {}", spec.name());
            let sum: u32 = g.degrees().unwrap().iter().map(|d| d - 1).sum();
            assert_eq!(
                sum as usize,
                g.reflections().len(),
                "reflection count mismatch for {}",
                spec.name()
            );
        }
    }

    #[test]
    fn cyclic_product_degrees() {
        let g = build(FamilySpec::CyclicProduct { exponents: vec![1, 2, 3] });
        assert_eq!(g.degrees().unwrap(), &[2, 3, 4]);
    }

    #[test]
    fn reflection_data_is_consistent() {
        for spec in [
            FamilySpec::Symmetric { n: 3 },
            FamilySpec::Imprimitive { d: 1, e: 3, n: 3 },
            FamilySpec::Hyperoctahedral { n: 2 },
        ] {
            let g = build(spec);
            for r in g.reflections() {
                let el = g.element(r.element);
                // the eigenvector really is scaled by the exceptional eigenvalue
                let image = g.act_vector(r.element, &r.eigenvector);
                let lambda = image.scalar_multiple_of(&r.eigenvector).unwrap().unwrap();
                assert_eq!(lambda, r.exceptional_eigenvalue);
                assert!(!lambda.is_one());
                assert_eq!(lambda, el.det);
                // the functional's kernel is fixed pointwise: check on a basis
                let fixed = el.matrix.sub_scalar_diag(&C::one()).kernel_basis();
                assert_eq!(fixed.len(), g.nvars() - 1);
                for v in fixed {
                    assert!(r.functional.dot(&v).is_zero());
                }
            }
        }
    }

    #[test]
    fn from_generators_builds_small_groups() {
        let s3 = ReflectionGroup::from_generators(
            "custom",
            3,
            1,
            vec![adjacent_swap(3, 0), adjacent_swap(3, 1)],
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        let i5 = ReflectionGroup::from_generators(
            "custom",
            2,
            5,
            vec![adjacent_swap(2, 0), twisted_swap(2, 5)],
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(i5.order(), 10);
    }

    #[test]
    fn cap_is_enforced() {
        let gens: Vec<Matrix> = (0..4).map(|i| adjacent_swap(5, i)).collect();
        let err = ReflectionGroup::from_generators("custom", 5, 1, gens, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 100 }));
    }

    #[test]
    fn singular_generator_is_rejected() {
        let err = ReflectionGroup::from_generators(
            "custom",
            2,
            1,
            vec![Matrix::zero(2, 2)],
            DEFAULT_CAP,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SingularGenerator));
    }

    #[test]
    fn eigenvector_examples() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        let id = g.identity_index();
        assert_eq!(g.eigenvectors(id, &C::one()).len(), 3);
        // a transposition: reflection with eigenvector x_i - x_j
        let r = &g.reflections()[0];
        let eig = g.eigenvectors(r.element, &C::from_integer(-1));
        assert_eq!(eig.len(), 1);
        // a 3-cycle has a one-dimensional zeta_3 eigenspace
        let w = (0..g.order()).find(|&i| g.element(i).order == 3).unwrap();
        let z3 = C::root_of_unity(3, 1);
        let eig = g.eigenvectors(w, &z3);
        assert_eq!(eig.len(), 1);
        let v = &eig[0];
        let image = g.act_vector(w, v);
        assert_eq!(image.scalar_multiple_of(v).unwrap().unwrap(), z3);
    }

    #[test]
    fn regular_vectors() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        assert!(g.is_regular_vector(&LinearForm::from_integers(&[1, 2, 4])));
        assert!(!g.is_regular_vector(&LinearForm::from_integers(&[1, 1, 0])));
        let s4 = build(FamilySpec::Symmetric { n: 4 });
        let i = C::root_of_unity(4, 1);
        let v = LinearForm::new(vec![
            C::one(),
            i.clone(),
            i.pow(2).unwrap(),
            i.pow(3).unwrap(),
        ]);
        assert!(s4.is_regular_vector(&v));
    }

    #[test]
    fn regular_numbers_of_small_groups() {
        let s3 = build(FamilySpec::Symmetric { n: 3 });
        assert_eq!(s3.regular_numbers().unwrap(), vec![1, 2, 3]);
        let z33 = build(FamilySpec::CyclicProduct { exponents: vec![2, 2] });
        assert_eq!(z33.regular_numbers().unwrap(), vec![1, 3]);
        let z23 = build(FamilySpec::CyclicProduct { exponents: vec![1, 2] });
        assert_eq!(z23.regular_numbers().unwrap(), vec![1]);
        assert!(z23.regular_elements(6).unwrap().is_empty());
    }

    #[test]
    fn largest_degree_of_g423_is_not_regular() {
        let g = build(FamilySpec::Imprimitive { d: 2, e: 2, n: 3 });
        assert_eq!(g.degrees().unwrap(), &[4, 6, 8]);
        assert!(g.regular_elements(8).unwrap().is_empty());
        assert!(!g.regular_elements(6).unwrap().is_empty());
    }

    #[test]
    fn regular_witnesses_check_out() {
        let g = build(FamilySpec::Hyperoctahedral { n: 2 });
        for d in [1u32, 2, 4] {
            let pairs = g.regular_elements(d).unwrap();
            assert!(!pairs.is_empty(), "d = {d} should be regular");
            let zeta = C::root_of_unity(d, 1);
            for (w, v) in pairs {
                assert!(g.is_regular_vector(&v));
                let image = g.act_vector(w, &v);
                assert_eq!(image.scalar_multiple_of(&v).unwrap().unwrap(), zeta);
            }
        }
    }

    #[test]
    fn coset_counts() {
        let s3 = build(FamilySpec::Symmetric { n: 3 });
        let w3 = (0..s3.order()).find(|&i| s3.element(i).order == 3).unwrap();
        assert_eq!(s3.cosets(w3).representatives.len(), 2);

        let s4 = build(FamilySpec::Symmetric { n: 4 });
        let w4 = (0..s4.order()).find(|&i| s4.element(i).order == 4).unwrap();
        let dec = s4.cosets(w4);
        assert_eq!(dec.representatives.len(), 6);
        assert_eq!(dec.subgroup_order, 4);
        // representative x subgroup element covers the group exactly once
        let mut hit = vec![false; s4.order()];
        let mut pow = s4.identity_index();
        for _ in 0..dec.subgroup_order {
            for &rep in &dec.representatives {
                let e = s4.multiply(rep, pow);
                assert!(!hit[e]);
                hit[e] = true;
            }
            pow = s4.multiply(pow, w4);
        }
        assert!(hit.iter().all(|&b| b));

        let b3 = build(FamilySpec::Hyperoctahedral { n: 3 });
        let (w6, _) = b3.regular_elements(6).unwrap()[0].clone();
        assert_eq!(b3.element(w6).order, 6);
        assert_eq!(b3.cosets(w6).representatives.len(), 8);
    }

    #[test]
    fn cosets_reject_foreign_matrices() {
        let g = build(FamilySpec::Symmetric { n: 3 });
        let foreign = leading_diag(3, C::from_integer(-1));
        assert!(matches!(
            g.cosets_of_matrix(&foreign),
            Err(Error::NotInGroup)
        ));
    }

    #[test]
    fn determinant_is_multiplicative() {
        let g = build(FamilySpec::Dihedral { m: 4 });
        for i in 0..g.order() {
            for j in 0..g.order() {
                let k = g.multiply(i, j);
                assert_eq!(
                    g.element(k).det,
                    g.element(i).det.mul(&g.element(j).det)
                );
            }
        }
    }

    #[test]
    fn inverses_and_identity() {
        let g = build(FamilySpec::Imprimitive { d: 1, e: 3, n: 3 });
        for i in 0..g.order() {
            assert_eq!(g.multiply(i, g.inverse_of(i)), g.identity_index());
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(ReflectionGroup::build_family(&FamilySpec::Symmetric { n: 0 }, DEFAULT_CAP)
            .is_err());
        assert!(ReflectionGroup::build_family(
            &FamilySpec::Imprimitive { d: 0, e: 1, n: 2 },
            DEFAULT_CAP
        )
        .is_err());
        assert!(ReflectionGroup::build_family(
            &FamilySpec::CyclicProduct { exponents: vec![] },
            DEFAULT_CAP
        )
        .is_err());
    }
}
