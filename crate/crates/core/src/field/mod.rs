//! Exact coefficient fields.
//!
//! Every field is a small context value (`PrimeField`, `ExtensionField`,
//! `RationalField`) that owns whatever tables it needs; elements are plain
//! values interpreted relative to that context. Linear algebra and point
//! enumeration are written once against [`Field`] / [`FiniteField`].

mod ext;
mod prime;
mod rational;

use std::fmt;
use std::hash::Hash;

use num_rational::BigRational;
use thiserror::Error;

pub use ext::{ExtensionField, Fq};
pub use prime::{is_prime, PrimeField, MAX_PRIME};
pub use rational::RationalField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic 2 is excluded")]
    EvenCharacteristic,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound {MAX_PRIME}")]
    ModulusTooLarge(u64),
    #[error("extension degree {0} is outside 1..=4")]
    UnsupportedDegree(u32),
    #[error("polynomial is reducible over F_{0}")]
    Reducible(u32),
    #[error("denominator {0} is not invertible in characteristic {1}")]
    NonInvertibleDenominator(String, u32),
}

/// A commutative field with exact arithmetic.
pub trait Field: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// A finite field whose elements can be enumerated by index.
pub trait FiniteField: Field {
    fn characteristic(&self) -> u32;
    fn degree(&self) -> u32;

    fn order(&self) -> u64 {
        (self.characteristic() as u64).pow(self.degree())
    }

    /// Bijection `F -> 0..order`.
    fn index_of(&self, a: &Self::Elem) -> usize;
    fn element(&self, idx: usize) -> Self::Elem;

    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order() as usize).map(|i| self.element(i)).collect()
    }

    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic() as u64)
    }
}

/// Square roots and quadratic characters for a finite field, built once by
/// squaring every element.
#[derive(Debug, Clone)]
pub struct SquareTable<F: FiniteField> {
    chi: Vec<i8>,
    root: Vec<Option<F::Elem>>,
}

impl<F: FiniteField> SquareTable<F> {
    pub fn new(field: &F) -> Self {
        let q = field.order() as usize;
        let mut chi = vec![-1i8; q];
        let mut root = vec![None; q];
        for i in 0..q {
            let a = field.element(i);
            let s = field.mul(&a, &a);
            let j = field.index_of(&s);
            if root[j].is_none() {
                root[j] = Some(a);
            }
            chi[j] = if field.is_zero(&s) { 0 } else { 1 };
        }
        Self { chi, root }
    }

    pub fn chi(&self, field: &F, a: &F::Elem) -> i8 {
        self.chi[field.index_of(a)]
    }

    /// All square roots of `a` (0, 1 or 2 of them).
    pub fn roots(&self, field: &F, a: &F::Elem) -> Vec<F::Elem> {
        match &self.root[field.index_of(a)] {
            None => Vec::new(),
            Some(r) if field.is_zero(r) => vec![r.clone()],
            Some(r) => vec![r.clone(), field.neg(r)],
        }
    }
}
