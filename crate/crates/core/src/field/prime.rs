use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::{Field, FieldError, FiniteField};

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_PRIME: u64 = 10_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_p for an odd prime p, with its quadratic-character and
/// square-root tables.
#[derive(Clone)]
pub struct PrimeField {
    p: u32,
    chi: Arc<Vec<i8>>,
    sqrt: Arc<Vec<u32>>,
}

const NO_ROOT: u32 = u32::MAX;

impl std::fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}
impl Eq for PrimeField {}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::ModulusTooLarge(p));
        }
        let p32 = p as u32;
        let mut chi = vec![-1i8; p as usize];
        let mut sqrt = vec![NO_ROOT; p as usize];
        chi[0] = 0;
        sqrt[0] = 0;
        for y in 1..=(p32 / 2) {
            let s = ((y as u64 * y as u64) % p) as usize;
            chi[s] = 1;
            sqrt[s] = y;
        }
        Ok(Self { p: p32, chi: Arc::new(chi), sqrt: Arc::new(sqrt) })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Legendre symbol of `a`, by table lookup.
    #[inline]
    pub fn chi(&self, a: u32) -> i8 {
        self.chi[a as usize]
    }

    /// The character table indexed by residue.
    pub fn chi_table(&self) -> &[i8] {
        &self.chi
    }

    /// The smaller square root of `a`, if any.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        match self.sqrt[a as usize] {
            NO_ROOT => None,
            r => Some(r),
        }
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u32 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u32().expect("residue fits in u32")
    }

    /// Signed representative in (-p/2, p/2].
    pub fn centered(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on i64.
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce_i64(t0))
    }
    fn from_int(&self, n: i64) -> u32 {
        self.reduce_i64(n)
    }
    fn from_rational(&self, q: &BigRational) -> Result<u32, FieldError> {
        let den = self.reduce_bigint(q.denom());
        let Some(di) = self.inv(&den) else {
            return Err(FieldError::NonInvertibleDenominator(q.denom().abs().to_string(), self.p));
        };
        Ok(self.mul(&self.reduce_bigint(q.numer()), &di))
    }
}

impl FiniteField for PrimeField {
    fn characteristic(&self) -> u32 {
        self.p
    }
    fn degree(&self) -> u32 {
        1
    }
    fn index_of(&self, a: &u32) -> usize {
        *a as usize
    }
    fn element(&self, idx: usize) -> u32 {
        idx as u32
    }
    fn frobenius(&self, a: &u32) -> u32 {
        *a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_mod_7() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.chi(0), 0);
        assert_eq!(f.chi(1), 1);
        assert_eq!(f.chi(2), 1);
        assert_eq!(f.chi(3), -1);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(PrimeField::new(2).unwrap_err(), FieldError::EvenCharacteristic);
        assert_eq!(PrimeField::new(9).unwrap_err(), FieldError::NotPrime(9));
        assert!(matches!(PrimeField::new(10007), Err(FieldError::ModulusTooLarge(_))));
    }

    #[test]
    fn character_sums_vanish() {
        for p in (3..200u64).filter(|&p| is_prime(p)) {
            let f = PrimeField::new(p).unwrap();
            let s: i64 = f.chi_table().iter().map(|&c| c as i64).sum();
            assert_eq!(s, 0, "p = {p}");
        }
    }

    #[test]
    fn root_count_matches_character() {
        for p in (3..=97u64).filter(|&p| is_prime(p)) {
            let f = PrimeField::new(p).unwrap();
            let mut count = vec![0i64; p as usize];
            for y in 0..p as u32 {
                count[f.mul(&y, &y) as usize] += 1;
            }
            for a in 0..p as u32 {
                assert_eq!(count[a as usize], 1 + f.chi(a) as i64, "p = {p}, a = {a}");
            }
        }
    }

    #[test]
    fn sqrt_table_is_consistent() {
        let f = PrimeField::new(101).unwrap();
        for a in 0..101u32 {
            match f.sqrt(a) {
                Some(r) => assert_eq!(f.mul(&r, &r), a),
                None => assert_eq!(f.chi(a), -1),
            }
        }
    }

    #[test]
    fn rational_reduction() {
        let f = PrimeField::new(7).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap(), 4);
        let bad = BigRational::new(1.into(), 14.into());
        assert!(f.from_rational(&bad).is_err());
    }
}
