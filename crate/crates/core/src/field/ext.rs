use num_rational::BigRational;

use super::{Field, FieldError, FiniteField, PrimeField};

/// An element of F_{p^k}: coefficients of 1, x, x^2, x^3 modulo the stored
/// irreducible polynomial. Slots at or above the degree are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub [u32; 4]);

/// F_{p^k} for k <= 4, presented as F_p[x]/(f) with f the lexicographically
/// first monic irreducible of degree k (ordering the non-leading
/// coefficients from x^{k-1} down to the constant term).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionField {
    base: PrimeField,
    k: u32,
    /// Non-leading coefficients of the modulus, constant term first.
    modulus: [u32; 4],
}

impl ExtensionField {
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        let base = PrimeField::new(p)?;
        if !(1..=4).contains(&k) {
            return Err(FieldError::UnsupportedDegree(k));
        }
        let p = base.modulus() as u64;
        for n in 0..p.pow(k) {
            // Most significant digit is the x^{k-1} coefficient.
            let mut m = [0u32; 4];
            let mut rest = n;
            for i in 0..k as usize {
                m[i] = (rest % p) as u32;
                rest /= p;
            }
            if is_irreducible(&base, k, &m) {
                return Ok(Self { base, k, modulus: m });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// Build with an explicit modulus, checking irreducibility.
    pub fn with_modulus(p: u64, lower: &[u32]) -> Result<Self, FieldError> {
        let base = PrimeField::new(p)?;
        let k = lower.len() as u32;
        if !(1..=4).contains(&k) {
            return Err(FieldError::UnsupportedDegree(k));
        }
        let mut m = [0u32; 4];
        for (slot, c) in m.iter_mut().zip(lower) {
            *slot = c % base.modulus();
        }
        if !is_irreducible(&base, k, &m) {
            return Err(FieldError::Reducible(base.modulus()));
        }
        Ok(Self { base, k, modulus: m })
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    /// Full modulus polynomial, constant term first, leading 1 included.
    pub fn modulus_poly(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.modulus[..self.k as usize].to_vec();
        v.push(1);
        v
    }

    pub fn embed(&self, a: u32) -> Fq {
        Fq([a % self.base.modulus(), 0, 0, 0])
    }

    /// `Some(a)` when the element lies in the prime field.
    pub fn to_base(&self, a: &Fq) -> Option<u32> {
        if a.0[1..].iter().all(|&c| c == 0) {
            Some(a.0[0])
        } else {
            None
        }
    }

    /// The class of x.
    pub fn generator(&self) -> Fq {
        if self.k == 1 {
            Fq([self.base.neg(&self.modulus[0]), 0, 0, 0])
        } else {
            Fq([0, 1, 0, 0])
        }
    }
}

impl Field for ExtensionField {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        Fq([0; 4])
    }
    fn one(&self) -> Fq {
        Fq([1, 0, 0, 0])
    }
    fn is_zero(&self, a: &Fq) -> bool {
        a.0 == [0; 4]
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        let mut r = [0u32; 4];
        for i in 0..4 {
            r[i] = self.base.add(&a.0[i], &b.0[i]);
        }
        Fq(r)
    }
    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        let mut r = [0u32; 4];
        for i in 0..4 {
            r[i] = self.base.sub(&a.0[i], &b.0[i]);
        }
        Fq(r)
    }
    fn neg(&self, a: &Fq) -> Fq {
        let mut r = [0u32; 4];
        for i in 0..4 {
            r[i] = self.base.neg(&a.0[i]);
        }
        Fq(r)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let p = self.base.modulus() as u64;
        let k = self.k as usize;
        let mut prod = [0u64; 7];
        for i in 0..k {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + a.0[i] as u64 * b.0[j] as u64) % p;
            }
        }
        // x^k = -sum m_i x^i
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                let t = c * self.modulus[i] as u64 % p;
                prod[d - k + i] = (prod[d - k + i] + p - t) % p;
            }
        }
        let mut r = [0u32; 4];
        for i in 0..k {
            r[i] = prod[i] as u32;
        }
        Fq(r)
    }
    fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }
    fn from_int(&self, n: i64) -> Fq {
        self.embed(self.base.from_int(n))
    }
    fn from_rational(&self, q: &BigRational) -> Result<Fq, FieldError> {
        self.base.from_rational(q).map(|a| self.embed(a))
    }
}

impl FiniteField for ExtensionField {
    fn characteristic(&self) -> u32 {
        self.base.modulus()
    }
    fn degree(&self) -> u32 {
        self.k
    }
    fn index_of(&self, a: &Fq) -> usize {
        let p = self.base.modulus() as usize;
        let mut idx = 0usize;
        for i in (0..self.k as usize).rev() {
            idx = idx * p + a.0[i] as usize;
        }
        idx
    }
    fn element(&self, mut idx: usize) -> Fq {
        let p = self.base.modulus() as usize;
        let mut r = [0u32; 4];
        for slot in r.iter_mut().take(self.k as usize) {
            *slot = (idx % p) as u32;
            idx /= p;
        }
        Fq(r)
    }
}

// Dense univariate helpers over F_p; vectors hold constant term first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(f: &PrimeField, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(&m[dm]).expect("nonzero leading coefficient");
    while r.len() > dm {
        let d = r.len() - 1;
        let c = f.mul(&r[d], &lead_inv);
        for i in 0..=dm {
            let t = f.mul(&c, &m[i]);
            r[d - dm + i] = f.sub(&r[d - dm + i], &t);
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(f: &PrimeField, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = f.mul(x, y);
            prod[i + j] = f.add(&prod[i + j], &t);
        }
    }
    poly_rem(f, &prod, m)
}

fn poly_gcd(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn has_root(f: &PrimeField, poly: &[u32]) -> bool {
    (0..f.modulus()).any(|x| {
        let mut acc = 0u32;
        for c in poly.iter().rev() {
            acc = f.add(&f.mul(&acc, &x), c);
        }
        acc == 0
    })
}

/// Root test for k <= 3; for k = 4 also rules out quadratic factors via
/// gcd(f, x^{p^2} - x).
fn is_irreducible(f: &PrimeField, k: u32, lower: &[u32; 4]) -> bool {
    let mut poly: Vec<u32> = lower[..k as usize].to_vec();
    poly.push(1);
    if k == 1 {
        return true;
    }
    if has_root(f, &poly) {
        return false;
    }
    if k <= 3 {
        return true;
    }
    let p = f.modulus() as u64;
    let mut e = p * p;
    let mut base = vec![0, 1];
    let mut acc = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(f, &acc, &base, &poly);
        }
        base = poly_mulmod(f, &base, &base, &poly);
        e >>= 1;
    }
    // acc - x
    acc.resize(acc.len().max(2), 0);
    acc[1] = f.sub(&acc[1], &1);
    let g = poly_gcd(f, &poly, &acc);
    g.len() <= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_uses_x2_plus_1() {
        let f = ExtensionField::new(3, 2).unwrap();
        assert_eq!(f.modulus_poly(), vec![1, 0, 1]);
        let i = f.generator();
        assert_eq!(f.mul(&i, &i), f.from_int(-1));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^4 + 4 = (x^2+2x+2)(x^2-2x+2) over Q, so over every F_p
        assert!(ExtensionField::with_modulus(7, &[4, 0, 0, 0]).is_err());
        // x^2 + 1 over F_5 has root 2
        assert!(ExtensionField::with_modulus(5, &[1, 0]).is_err());
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_right_order() {
        for (p, k) in [(3u64, 4u32), (5, 3), (7, 2), (17, 2)] {
            let f = ExtensionField::new(p, k).unwrap();
            let q = f.order();
            for idx in 1..q as usize {
                let a = f.element(idx);
                assert_eq!(f.pow(&a, q - 1), f.one());
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one());
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_base_field() {
        for (p, k) in [(3u64, 2u32), (3, 3), (3, 4), (5, 2), (5, 3), (5, 4), (7, 2), (7, 3), (11, 4), (17, 2), (17, 4), (47, 2), (47, 3)] {
            let f = ExtensionField::new(p, k).unwrap();
            if f.order() > 100_000 {
                continue;
            }
            let fixed = (0..f.order() as usize)
                .filter(|&i| {
                    let a = f.element(i);
                    f.frobenius(&a) == a
                })
                .count();
            assert_eq!(fixed as u64, p, "p = {p}, k = {k}");
        }
    }

    #[test]
    fn index_round_trip() {
        let f = ExtensionField::new(5, 3).unwrap();
        for i in 0..f.order() as usize {
            assert_eq!(f.index_of(&f.element(i)), i);
        }
    }
}
