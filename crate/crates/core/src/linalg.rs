//! Dense Gaussian elimination and subspaces over any [`Field`].
//!
//! Matrices are row lists. Elimination picks the first nonzero entry in
//! column order as pivot and skips zero entries when updating rows, which
//! matters for the mostly-sparse condition matrices built elsewhere.

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("row of length {got} in a matrix with {expected} columns")]
    RaggedRow { expected: usize, got: usize },
}

/// Reduce `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut Vec<Vec<F::Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(&rows[r][c]).expect("pivot is nonzero");
        let support: Vec<usize> = (c..ncols).filter(|&j| !field.is_zero(&rows[r][j])).collect();
        for &j in &support {
            rows[r][j] = field.mul(&rows[r][j], &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for &j in &support {
                let t = field.mul(&factor, &pivot_row[j]);
                row[j] = field.sub(&row[j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m, ncols).len()
}

/// Basis of the right kernel {v : M v = 0}, one vector per free column,
/// normalised to 1 in that column.
pub fn kernel<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (row, &pc) in m.iter().zip(&pivots) {
            if !field.is_zero(&row[free]) {
                v[pc] = field.neg(&row[free]);
            }
        }
        basis.push(v);
    }
    basis
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !field.is_zero(x) && !field.is_zero(y) {
            acc = field.add(&acc, &field.mul(x, y));
        }
    }
    acc
}

/// A linear subspace of F^n, stored as an RREF basis.
#[derive(Debug, Clone)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    basis: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient: usize) -> Self {
        Self { field: field.clone(), ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Self::span(field, ambient, rows).expect("rows have ambient length")
    }

    pub fn span(field: &F, ambient: usize, mut rows: Vec<Vec<F::Elem>>) -> Result<Self, LinalgError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ambient) {
            return Err(LinalgError::RaggedRow { expected: ambient, got: bad.len() });
        }
        let pivots = rref(field, &mut rows, ambient);
        Ok(Self { field: field.clone(), ambient, basis: rows, pivots })
    }

    /// The common zero set of the given linear functionals.
    pub fn annihilated_by(field: &F, ambient: usize, functionals: &[Vec<F::Elem>]) -> Result<Self, LinalgError> {
        if let Some(bad) = functionals.iter().find(|r| r.len() != ambient) {
            return Err(LinalgError::RaggedRow { expected: ambient, got: bad.len() });
        }
        Self::span(field, ambient, kernel(field, functionals, ambient))
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Functionals cutting out this subspace (a basis of its annihilator).
    pub fn annihilator(&self) -> Vec<Vec<F::Elem>> {
        kernel(&self.field, &self.basis, self.ambient)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        // Reduce against the RREF basis.
        let mut w = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if self.field.is_zero(&w[pc]) {
                continue;
            }
            let c = w[pc].clone();
            for j in pc..self.ambient {
                if !self.field.is_zero(&row[j]) {
                    w[j] = self.field.sub(&w[j], &self.field.mul(&c, &row[j]));
                }
            }
        }
        w.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    fn check(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            Err(LinalgError::DimensionMismatch(self.ambient, other.ambient))
        } else {
            Ok(())
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check(other)?;
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::span(&self.field, self.ambient, rows)
    }

    /// A ∩ B as the kernel of the stacked annihilators.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check(other)?;
        let mut duals = self.annihilator();
        duals.extend(other.annihilator());
        Self::annihilated_by(&self.field, self.ambient, &duals)
    }

    /// Intersection of many subspaces in one elimination.
    pub fn intersect_all<'a, I>(field: &F, ambient: usize, spaces: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = &'a Self>,
        F: 'a,
    {
        let mut duals = Vec::new();
        for s in spaces {
            if s.ambient != ambient {
                return Err(LinalgError::DimensionMismatch(ambient, s.ambient));
            }
            duals.extend(s.annihilator());
        }
        Self::annihilated_by(field, ambient, &duals)
    }
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        // RREF is canonical.
        self.ambient == other.ambient && self.basis == other.basis
    }
}

/// Apply a coefficient map entrywise, e.g. reduction of a rational matrix
/// modulo p.
pub fn map_matrix<A, B, E>(rows: &[Vec<A>], mut f: impl FnMut(&A) -> Result<B, E>) -> Result<Vec<Vec<B>>, E> {
    rows.iter().map(|r| r.iter().map(&mut f).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn identity_and_zero_ranks() {
        let f = PrimeField::new(5).unwrap();
        let id: Vec<Vec<u32>> = (0..3).map(|i| (0..3).map(|j| (i == j) as u32).collect()).collect();
        assert_eq!(rank(&f, &id, 3), 3);
        assert_eq!(rank(&f, &vec![vec![0u32; 4]; 4], 4), 0);
        assert_eq!(rank(&f, &[], 7), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = RationalField;
        let m = vec![vec![q(1), q(2), q(3), q(4)], vec![q(2), q(4), q(7), q(1)]];
        let k = kernel(&f, &m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                assert_eq!(dot(&f, row, v), q(0));
            }
        }
    }

    #[test]
    fn complementary_coordinate_planes_meet_trivially() {
        let f = PrimeField::new(5).unwrap();
        let a = Subspace::span(&f, 4, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = Subspace::span(&f, 4, vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn mismatched_ambients_are_rejected() {
        let f = PrimeField::new(5).unwrap();
        let a = Subspace::full(&f, 3);
        let b = Subspace::full(&f, 4);
        assert_eq!(a.intersect(&b).unwrap_err(), LinalgError::DimensionMismatch(3, 4));
    }
}
