//! Dense exact linear algebra over cyclotomic fields: products, determinants,
//! reduced row echelon form, kernels and inverses. Everything is Gaussian
//! elimination with exact field division; pivoting is first-nonzero so results
//! are deterministic.

use crate::cyclo::CyclotomicNumber;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    data: Vec<CyclotomicNumber>,
}

/// Monomial shape of a matrix: column j carries a single nonzero entry
/// coeff[j] in row dest[j]. Permutation and diagonal matrices are special cases.
#[derive(Clone, Debug)]
pub struct MonomialForm {
    pub dest: Vec<usize>,
    pub coeff: Vec<CyclotomicNumber>,
}

impl Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Matrix {
            nrows,
            ncols,
            data: vec![CyclotomicNumber::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, CyclotomicNumber::one());
        }
        m
    }

    pub fn diagonal(entries: &[CyclotomicNumber]) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n, n);
        for (i, c) in entries.iter().enumerate() {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CyclotomicNumber>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds from a flat row-major entry list of length nrows*ncols.
    pub fn from_flat(nrows: usize, ncols: usize, data: Vec<CyclotomicNumber>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::Dimension(format!(
                "expected {} entries, got {}",
                nrows * ncols,
                data.len()
            )));
        }
        Ok(Matrix { nrows, ncols, data })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CyclotomicNumber) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &CyclotomicNumber> {
        self.data.iter()
    }

    pub fn map_entries(&self, f: impl Fn(&CyclotomicNumber) -> CyclotomicNumber) -> Self {
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = Self::zero(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CyclotomicNumber]) -> Vec<CyclotomicNumber> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| {
                let mut acc = CyclotomicNumber::zero();
                for (j, vj) in v.iter().enumerate() {
                    if !vj.is_zero() {
                        acc = acc.add(&self.get(i, j).mul(vj));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// self - lambda * I
    pub fn sub_scalar_diag(&self, lambda: &CyclotomicNumber) -> Matrix {
        assert_eq!(self.nrows, self.ncols);
        let mut out = self.clone();
        for i in 0..self.nrows {
            out.set(i, i, out.get(i, i).sub(lambda));
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                let e = self.get(i, j);
                if i == j {
                    if !e.is_one() {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Some(form) iff every column has exactly one nonzero entry.
    pub fn monomial_form(&self) -> Option<MonomialForm> {
        let mut dest = Vec::with_capacity(self.ncols);
        let mut coeff = Vec::with_capacity(self.ncols);
        for j in 0..self.ncols {
            let mut found: Option<usize> = None;
            for i in 0..self.nrows {
                if !self.get(i, j).is_zero() {
                    if found.is_some() {
                        return None;
                    }
                    found = Some(i);
                }
            }
            let i = found?;
            dest.push(i);
            coeff.push(self.get(i, j).clone());
        }
        Some(MonomialForm { dest, coeff })
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            if row == self.nrows {
                break;
            }
            let Some(p) = (row..self.nrows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.ncols {
                    self.data.swap(row * self.ncols + j, p * self.ncols + j);
                }
            }
            let inv = self.get(row, col).invert().expect("pivot is nonzero");
            for j in col..self.ncols {
                let v = self.get(row, j).mul(&inv);
                self.set(row, j, v);
            }
            for r in 0..self.nrows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for j in col..self.ncols {
                    let v = self.get(r, j).sub(&factor.mul(self.get(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Vec<Vec<CyclotomicNumber>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![CyclotomicNumber::zero(); self.ncols];
            v[free] = CyclotomicNumber::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> CyclotomicNumber {
        assert_eq!(self.nrows, self.ncols, "determinant of non-square matrix");
        if let Some(mf) = self.monomial_form() {
            return mf.det();
        }
        let mut m = self.clone();
        let n = m.nrows;
        let mut det = CyclotomicNumber::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return CyclotomicNumber::zero();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(col * n + j, p * n + j);
                }
                det = det.neg();
            }
            let pivot = m.get(col, col).clone();
            det = det.mul(&pivot);
            let inv = pivot.invert().expect("pivot is nonzero");
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).mul(&inv);
                for j in col..n {
                    let v = m.get(r, j).sub(&factor.mul(m.get(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        assert_eq!(self.nrows, self.ncols);
        if let Some(mf) = self.monomial_form() {
            return mf.inverse().map(|f| f.to_matrix());
        }
        let n = self.nrows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CyclotomicNumber::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularGenerator);
        }
        let mut out = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

impl MonomialForm {
    pub fn n(&self) -> usize {
        self.dest.len()
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.n();
        let mut m = Matrix::zero(n, n);
        for j in 0..n {
            m.set(self.dest[j], j, self.coeff[j].clone());
        }
        m
    }

    /// Sign of the underlying permutation times the product of entries.
    pub fn det(&self) -> CyclotomicNumber {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut sign_neg = false;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.dest[j];
                len += 1;
            }
            if len % 2 == 0 {
                sign_neg = !sign_neg;
            }
        }
        let mut det = CyclotomicNumber::one();
        for c in &self.coeff {
            det = det.mul(c);
        }
        if sign_neg {
            det.neg()
        } else {
            det
        }
    }

    pub fn inverse(&self) -> Result<MonomialForm> {
        let n = self.n();
        let mut dest = vec![0usize; n];
        let mut coeff = vec![CyclotomicNumber::zero(); n];
        for j in 0..n {
            if self.coeff[j].is_zero() {
                return Err(Error::SingularGenerator);
            }
            dest[self.dest[j]] = j;
            coeff[self.dest[j]] = self.coeff[j].invert()?;
        }
        Ok(MonomialForm { dest, coeff })
    }

    /// Composition matching matrix multiplication: self.mul(b).to_matrix()
    /// equals self.to_matrix() * b.to_matrix().
    pub fn mul(&self, b: &MonomialForm) -> MonomialForm {
        let n = self.n();
        debug_assert_eq!(n, b.n());
        let mut dest = vec![0usize; n];
        let mut coeff = vec![CyclotomicNumber::zero(); n];
        for j in 0..n {
            dest[j] = self.dest[b.dest[j]];
            coeff[j] = self.coeff[b.dest[j]].mul(&b.coeff[j]);
        }
        MonomialForm { dest, coeff }
    }
}
