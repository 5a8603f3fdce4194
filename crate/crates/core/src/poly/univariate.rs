//! Univariate rational polynomials and binary forms: square-free
//! decomposition, rational roots, and restriction of forms to parameterized
//! curves.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat, MultiPoly, PolyError, VarSet};

/// Dense polynomial in one variable, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<BigRational>);

impl UniPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    /// Degree, with the zero polynomial at -1.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }
    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Self::new(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let b = o.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    a - b
                })
                .collect(),
        )
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() <= dd {
            return (Self(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        let l = d.lead();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &l;
            if !c.is_zero() {
                for (i, di) in d.0.iter().enumerate() {
                    r[k + i] -= &c * di;
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Yun's square-free decomposition: monic factors `(a_i, i)` with
    /// `self = lead * prod a_i^i`, constant factors omitted.
    pub fn square_free_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() <= 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            let b_next = b.divrem(&a).0;
            let c_next = d.divrem(&a).0;
            d = c_next.sub(&b_next.derivative());
            if a.degree() > 0 {
                out.push((a, i));
            }
            b = b_next;
            i += 1;
        }
        out
    }

    /// Distinct rational roots with multiplicity.
    pub fn rational_roots(&self) -> Vec<(BigRational, u32)> {
        let mut out = Vec::new();
        for (a, mult) in self.square_free_decomposition() {
            for r in squarefree_rational_roots(&a) {
                out.push((r, mult));
            }
        }
        out.sort();
        out
    }
}

/// Integer polynomial proportional to `p`, constant term first.
fn integral(p: &UniPoly) -> Vec<BigInt> {
    let l = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.0.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs().to_u64().expect("coefficient small enough for rational root search");
    let mut ds = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            ds.push(BigInt::from(d));
            if d * d != n {
                ds.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    ds
}

fn squarefree_rational_roots(p: &UniPoly) -> Vec<BigRational> {
    let mut roots = Vec::new();
    let mut c = integral(p);
    if c.is_empty() {
        return roots;
    }
    if c[0].is_zero() {
        roots.push(BigRational::zero());
        c.remove(0);
    }
    if c.len() <= 1 {
        return roots;
    }
    let q = UniPoly::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect());
    for num in divisors(&c[0]) {
        for den in divisors(c.last().expect("nonempty")) {
            for sign in [1, -1] {
                let r = BigRational::new(&num * sign, den.clone());
                if q.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

fn is_rational_square(q: &BigRational) -> bool {
    let sq = |n: &BigInt| !n.is_negative() && n.sqrt().pow(2) == *n;
    sq(q.numer()) && sq(q.denom())
}

/// Dehomogenize a binary form f(s, t) at t = 1. Returns the univariate part
/// and the multiplicity of the root at t = 0.
fn dehomogenize(f: &MultiPoly) -> (UniPoly, u32) {
    let d = f.total_degree();
    let mut c = vec![BigRational::zero(); d as usize + 1];
    for (m, a) in f.terms() {
        c[m[0] as usize] += a;
    }
    let g = UniPoly::new(c);
    let at_inf = (d as isize - g.degree()) as u32;
    (g, at_inf)
}

/// Roots of a nonzero binary form in P^1(Q) as `(s, t)` pairs (normalised to
/// t = 1, or (1, 0)), with multiplicity.
pub fn binary_rational_roots(f: &MultiPoly) -> Vec<((BigRational, BigRational), u32)> {
    assert_eq!(f.nvars(), 2, "binary form expected");
    let (g, inf) = dehomogenize(f);
    let mut out: Vec<_> = g.rational_roots().into_iter().map(|(r, m)| ((r, BigRational::one()), m)).collect();
    if inf > 0 {
        out.push(((BigRational::one(), BigRational::zero()), inf));
    }
    out
}

/// Outcome of restricting a form to a rational curve.
#[derive(Debug, Clone, PartialEq)]
pub enum BinaryRestriction {
    /// The curve lies inside the hypersurface.
    Vanishes,
    Form {
        form: MultiPoly,
        /// Every root over the algebraic closure has even multiplicity.
        even_multiplicities: bool,
        /// The form is the square of a form with rational coefficients.
        square_over_q: bool,
    },
}

impl BinaryRestriction {
    pub fn is_square(&self) -> bool {
        matches!(self, Self::Form { even_multiplicities: true, .. })
    }
}

pub fn classify_binary_form(form: MultiPoly) -> BinaryRestriction {
    if form.is_zero() {
        return BinaryRestriction::Vanishes;
    }
    let (g, inf) = dehomogenize(&form);
    let even = inf % 2 == 0 && g.square_free_decomposition().iter().all(|(_, m)| m % 2 == 0);
    let square_over_q = even && is_rational_square(&g.lead());
    BinaryRestriction::Form { form, even_multiplicities: even, square_over_q }
}

/// Substitute a parameterization by binary forms of equal degree and
/// classify the result.
pub fn restrict_to_curve(q: &MultiPoly, param: &[MultiPoly]) -> Result<BinaryRestriction, PolyError> {
    let Some(first) = param.first() else {
        return Err(PolyError::DimensionMismatch { expected: q.nvars(), got: 0 });
    };
    let ring: Arc<VarSet> = first.vars().clone();
    if ring.len() != 2 {
        return Err(PolyError::DimensionMismatch { expected: 2, got: ring.len() });
    }
    let d = first.homogeneous_degree();
    if param.iter().any(|g| !g.is_zero() && g.homogeneous_degree() != d) {
        return Err(PolyError::Parse { pos: 0, msg: "parameterization components differ in degree".into() });
    }
    Ok(classify_binary_form(q.substitute(&ring, param)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    #[test]
    fn yun_on_known_product() {
        // (x-1)^2 (x+2)^3 x
        let a = UniPoly::from_ints(&[-1, 1]);
        let b = UniPoly::from_ints(&[2, 1]);
        let mut p = UniPoly::from_ints(&[0, 1]);
        for (g, n) in [(&a, 2), (&b, 3)] {
            for _ in 0..n {
                p = mul(&p, g);
            }
        }
        let dec = p.square_free_decomposition();
        assert_eq!(dec, vec![(UniPoly::from_ints(&[0, 1]), 1), (a, 2), (b, 3)]);
        assert_eq!(
            p.rational_roots(),
            vec![(rat(-2), 3), (rat(0), 1), (rat(1), 2)]
        );
    }

    fn mul(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut c = vec![BigRational::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        UniPoly::new(c)
    }

    #[test]
    fn restriction_of_coordinate_to_line() {
        let st = VarSet::unweighted(&["s", "t"]);
        let x = VarSet::unweighted(&["x0", "x1", "x2", "x3"]);
        let line = [parse(&st, "s").unwrap(), parse(&st, "t").unwrap(), MultiPoly::zero(&st), MultiPoly::zero(&st)];
        let r = restrict_to_curve(&parse(&x, "x0").unwrap(), &line).unwrap();
        assert!(!r.is_square());
        let r = restrict_to_curve(&parse(&x, "x0^2*x1^2").unwrap(), &line).unwrap();
        assert!(matches!(r, BinaryRestriction::Form { even_multiplicities: true, square_over_q: true, .. }));
        let r = restrict_to_curve(&parse(&x, "x2").unwrap(), &line).unwrap();
        assert_eq!(r, BinaryRestriction::Vanishes);
    }

    #[test]
    fn nonsquare_constant_is_distinguished() {
        let st = VarSet::unweighted(&["s", "t"]);
        match classify_binary_form(parse(&st, "2*s^2*t^2").unwrap()) {
            BinaryRestriction::Form { even_multiplicities, square_over_q, .. } => {
                assert!(even_multiplicities);
                assert!(!square_over_q);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn binary_roots_include_infinity() {
        let st = VarSet::unweighted(&["s", "t"]);
        let f = parse(&st, "s^3*t - s*t^3").unwrap();
        let roots = binary_rational_roots(&f);
        assert_eq!(roots.len(), 4);
        assert!(roots.iter().all(|(_, m)| *m == 1));
        assert!(roots.contains(&((rat(1), rat(0)), 1)));
    }
}
