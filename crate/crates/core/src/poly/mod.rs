//! Sparse multivariate polynomials with rational coefficients over a
//! weighted variable set.

mod basis;
mod modp;
mod parse;
mod relations;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{Field, FieldError};

pub use basis::{graded_piece, graded_piece_over, MonomialBasis};
pub use modp::{horner, ModPoly};
pub use parse::parse;
pub use relations::SquareRelations;
pub use univariate::{binary_rational_roots, classify_binary_form, restrict_to_curve, BinaryRestriction, UniPoly};

/// Exponent tuples never exceed this total degree in this project.
pub const MAX_DEGREE: u32 = 64;

pub type Mono = Vec<u16>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("substitution matrix mixes variables of weight {0} and {1}")]
    WeightMixing(u32, u32),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("relation for `{0}` mentions a relation variable on its right-hand side")]
    RecursiveRelation(String),
    #[error("monomial of degree {got} outside a basis of degree {expected}")]
    OutsideBasis { expected: u32, got: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Ordered variable names with positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S], weights: &[u32]) -> Arc<Self> {
        assert_eq!(names.len(), weights.len());
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        Arc::new(Self { names: names.iter().map(|s| s.as_ref().to_string()).collect(), weights: weights.to_vec() })
    }

    pub fn unweighted<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        Self::new(names, &vec![1; names.len()])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
    pub fn weighted_degree(&self, m: &[u16]) -> u32 {
        m.iter().zip(&self.weights).map(|(&e, &w)| e as u32 * w).sum()
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Mono, BigRational>,
}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Self { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VarSet>, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn var(vars: &Arc<VarSet>, i: usize) -> Self {
        let mut m = vec![0; vars.len()];
        m[i] = 1;
        Self::monomial(vars, m, BigRational::one())
    }

    /// Variable by name; panics on an unknown name.
    pub fn named(vars: &Arc<VarSet>, name: &str) -> Self {
        let i = vars.index(name).unwrap_or_else(|| panic!("no variable {name}"));
        Self::var(vars, i)
    }

    pub fn monomial(vars: &Arc<VarSet>, m: Mono, c: BigRational) -> Self {
        assert_eq!(m.len(), vars.len());
        let mut p = Self::zero(vars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(vars: &Arc<VarSet>, terms: impl IntoIterator<Item = (Mono, BigRational)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len());
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.iter().map(|&e| e as u32).sum::<u32>() <= MAX_DEGREE);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u16]) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|&e| e as u32).sum()).max().unwrap_or(0)
    }

    /// Weighted degree if every term has the same one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| self.vars.weighted_degree(m));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m[i]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            out.add_term(m2, c * rat(m[i] as i64));
        }
        out
    }

    /// Evaluate with coefficients mapped into `field`.
    pub fn eval<F: Field>(&self, field: &F, point: &[F::Elem]) -> Result<F::Elem, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: point.len() });
        }
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_rational(c)?;
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = field.mul(&t, &field.pow(x, e as u64));
                }
            }
            acc = field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Replace each variable by a polynomial in `target` variables.
    pub fn substitute(&self, target: &Arc<VarSet>, images: &[MultiPoly]) -> Result<Self, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: images.len() });
        }
        // Cache powers per variable.
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|g| vec![MultiPoly::one(target), g.clone()]).collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// x_i -> sum_j M[i][j] x_j. Rows of M may only mix variables of equal
    /// weight.
    pub fn substitute_linear(&self, m: &[Vec<BigRational>]) -> Result<Self, PolyError> {
        let n = self.nvars();
        if m.len() != n {
            return Err(PolyError::DimensionMismatch { expected: n, got: m.len() });
        }
        let w = self.vars.weights();
        let mut images = Vec::with_capacity(n);
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(PolyError::DimensionMismatch { expected: n, got: row.len() });
            }
            let mut g = MultiPoly::zero(&self.vars);
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if w[i] != w[j] {
                    return Err(PolyError::WeightMixing(w[i], w[j]));
                }
                g = &g + &MultiPoly::var(&self.vars, j).scale(c);
            }
            images.push(g);
        }
        self.substitute(&self.vars, &images)
    }

    /// Multiply through by the lcm of denominators and divide by the gcd of
    /// numerators, making the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        if g.is_zero() {
            return self.clone();
        }
        let mut s = BigRational::new(l, g);
        if let Some((_, c)) = self.terms.iter().next_back() {
            if c < &BigRational::zero() {
                s = -s;
            }
        }
        self.scale(&s)
    }

    /// Same polynomial viewed in a larger variable set; `map[i]` is the index
    /// of our variable i there.
    pub fn embed(&self, target: &Arc<VarSet>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars());
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = vec![0u16; target.len()];
            for (i, &e) in m.iter().enumerate() {
                m2[map[i]] += e;
            }
            out.add_term(m2, c.clone());
        }
        out
    }

    fn check_compat(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable sets"
        );
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_compat(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_compat(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_compat(rhs);
        let mut out = MultiPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&rat(-1))
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}
impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}
impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}
impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::format_poly(self))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn xy() -> Arc<VarSet> {
        VarSet::unweighted(&["x0", "x1"])
    }

    #[test]
    fn identity_substitution_is_trivial() {
        let v = xy();
        let p = parse(&v, "3*x0^2*x1 - x1^3 + 1/2*x0").unwrap();
        let id = vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]];
        assert_eq!(p.substitute_linear(&id).unwrap(), p);
    }

    #[test]
    fn swap_fixes_symmetric_monomial() {
        let v = xy();
        let p = parse(&v, "x0*x1").unwrap();
        let swap = vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]];
        assert_eq!(p.substitute_linear(&swap).unwrap(), p);
    }

    #[test]
    fn difference_of_squares_under_sum_difference_map() {
        let v = xy();
        let p = parse(&v, "x0^2 - x1^2").unwrap();
        let m = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let q = p.substitute_linear(&m).unwrap();
        assert_eq!(q, parse(&v, "4*x0*x1").unwrap());
        // evaluation oracle on F_101
        let f = PrimeField::new(101).unwrap();
        let mut seed = 7u32;
        for _ in 0..50 {
            seed = seed.wrapping_mul(1103515245).wrapping_add(12345);
            let a = seed % 101;
            seed = seed.wrapping_mul(1103515245).wrapping_add(12345);
            let b = seed % 101;
            let composed = p.eval(&f, &[f.add(&a, &b), f.sub(&a, &b)]).unwrap();
            assert_eq!(q.eval(&f, &[a, b]).unwrap(), composed);
        }
    }

    #[test]
    fn weight_mixing_is_rejected() {
        let v = VarSet::new(&["x", "y"], &[1, 2]);
        let p = MultiPoly::var(&v, 0);
        let m = vec![vec![rat(1), rat(1)], vec![rat(0), rat(1)]];
        assert_eq!(p.substitute_linear(&m).unwrap_err(), PolyError::WeightMixing(1, 2));
    }

    #[test]
    fn weighted_homogeneity() {
        let v = VarSet::new(&["x0", "x1", "y"], &[1, 1, 2]);
        assert_eq!(parse(&v, "y^2 - x0^3*x1").unwrap().homogeneous_degree(), Some(4));
        assert_eq!(parse(&v, "y^2 - x0^3").unwrap().homogeneous_degree(), None);
    }

    #[test]
    fn derivative_of_power() {
        let v = xy();
        let p = parse(&v, "x0^3*x1 + x1").unwrap();
        assert_eq!(p.derivative(0), parse(&v, "3*x0^2*x1").unwrap());
        assert_eq!(p.derivative(1), parse(&v, "x0^3 + 1").unwrap());
    }
}
