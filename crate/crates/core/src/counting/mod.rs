//! Point counts over finite fields, singular loci and the modularity
//! comparison.

mod cache;
mod fibration;
mod naive;
mod nodes;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::field::{FieldError, PrimeField};
use crate::poly::PolyError;
use crate::report::{CheckReport, Provenance, Status};
use crate::thetamod::{ap_table, eta_product};
use crate::varieties::{self, WeightedVariety, QUADRIC_SIGNS};

pub use cache::{CountCache, CACHE_ENV, CODE_VERSION};
pub use fibration::{weighted_action_is_free, FiberEquation, FibrationModel};
pub use nodes::{beauville_singularities, normalize, singular_points, x_singular_points, NodeInventory};

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("no fibration model found for {0}")]
    NotFibred(String),
    #[error("counter {method} does not handle {variety}")]
    Unsupported { method: String, variety: String },
    #[error("unknown counting method {0}")]
    UnknownMethod(String),
    #[error("scaling action on the punctured cone of {variety} is not free over F_{p}")]
    NonFreeAction { variety: String, p: u32 },
    #[error("cone count {affine} of {variety} over F_{p}: A - 1 not divisible by p - 1")]
    Indivisible { variety: String, p: u32, affine: u64 },
    #[error("cache: {0}")]
    Cache(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub variety: String,
    pub method: String,
    pub p: u32,
    pub k: u32,
    pub affine: u64,
    pub projective: u64,
    pub ms: u64,
}

impl CountResult {
    fn from_cone(variety: &str, method: &str, p: u32, affine: u64, ms: u64) -> Result<Self, CountError> {
        let unit = p as u64 - 1;
        if (affine - 1) % unit != 0 {
            return Err(CountError::Indivisible { variety: variety.into(), p, affine });
        }
        Ok(Self { variety: variety.into(), method: method.into(), p, k: 1, affine, projective: (affine - 1) / unit, ms })
    }
}

/// One way of counting F_p-points of a catalog variety.
pub trait PointCounter: Send + Sync {
    fn name(&self) -> &'static str;
    fn count(&self, v: &WeightedVariety, field: &PrimeField) -> Result<CountResult, CountError>;
}

/// Σ over X in F_p^4 of Π (1 + χ(Q_i(X))); only handles the octic model.
pub struct SignFibration;
/// Generic fibration by quadratic fiber equations.
pub struct CharacterSum;
/// Exhaustive enumeration.
pub struct Naive;

impl PointCounter for SignFibration {
    fn name(&self) -> &'static str {
        "sign-fibration"
    }

    fn count(&self, v: &WeightedVariety, field: &PrimeField) -> Result<CountResult, CountError> {
        if *v != varieties::x_vgn() {
            return Err(CountError::Unsupported { method: self.name().into(), variety: v.name.clone() });
        }
        let t = Instant::now();
        let a = x_cone_count(field);
        CountResult::from_cone(&v.name, self.name(), field.modulus(), a, t.elapsed().as_millis() as u64)
    }
}

impl PointCounter for CharacterSum {
    fn name(&self) -> &'static str {
        "charsum"
    }

    fn count(&self, v: &WeightedVariety, field: &PrimeField) -> Result<CountResult, CountError> {
        let t = Instant::now();
        if v.is_weighted() && !weighted_action_is_free(v, field)? {
            return Err(CountError::NonFreeAction { variety: v.name.clone(), p: field.modulus() });
        }
        let model = FibrationModel::build(v)?;
        let a = fibration::cone_count(&model, field)?;
        CountResult::from_cone(&v.name, self.name(), field.modulus(), a, t.elapsed().as_millis() as u64)
    }
}

impl PointCounter for Naive {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn count(&self, v: &WeightedVariety, field: &PrimeField) -> Result<CountResult, CountError> {
        let t = Instant::now();
        let proj = naive::projective_count(v, field)?;
        let p = field.modulus();
        Ok(CountResult {
            variety: v.name.clone(),
            method: self.name().into(),
            p,
            k: 1,
            affine: proj * (p as u64 - 1) + 1,
            projective: proj,
            ms: t.elapsed().as_millis() as u64,
        })
    }
}

pub struct CounterRegistry {
    counters: Vec<Box<dyn PointCounter>>,
}

impl Default for CounterRegistry {
    fn default() -> Self {
        Self { counters: vec![Box::new(SignFibration), Box::new(CharacterSum), Box::new(Naive)] }
    }
}

impl CounterRegistry {
    pub fn get(&self, name: &str) -> Result<&dyn PointCounter, CountError> {
        self.counters.iter().find(|c| c.name() == name).map(|c| c.as_ref()).ok_or_else(|| CountError::UnknownMethod(name.into()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.counters.iter().map(|c| c.name()).collect()
    }

    /// Fastest applicable counter: the octic specialisation, else the
    /// generic character sum.
    pub fn count(&self, v: &WeightedVariety, field: &PrimeField) -> Result<CountResult, CountError> {
        match self.get("sign-fibration")?.count(v, field) {
            Err(CountError::Unsupported { .. }) => self.get("charsum")?.count(v, field),
            r => r,
        }
    }
}

/// Affine cone count of the octic model: Σ_X Π_i (1 + χ(Q_i(X))).
pub fn x_cone_count(field: &PrimeField) -> u64 {
    let p = field.modulus() as usize;
    let sq: Vec<u32> = (0..p as u64).map(|x| (x * x % p as u64) as u32).collect();
    let chi1: Vec<u64> = (0..p as u32).map(|a| (1 + field.chi(a) as i64) as u64).collect();
    let pm = p as u32;
    let signed = |acc: u32, s: u32, sign: i64| if sign > 0 { (acc + s) % pm } else { (acc + pm - s) % pm };
    (0..p * p)
        .into_par_iter()
        .map(|h| {
            let (s0, s1) = (sq[h / p], sq[h % p]);
            let head: [u32; 4] = std::array::from_fn(|i| signed(signed(0, s0, QUADRIC_SIGNS[i][0]), s1, QUADRIC_SIGNS[i][1]));
            let mut sum = 0u64;
            for &s2 in &sq {
                let mid: [u32; 4] = std::array::from_fn(|i| signed(head[i], s2, QUADRIC_SIGNS[i][2]));
                for &s3 in &sq {
                    let mut prod = 1u64;
                    for i in 0..4 {
                        prod *= chi1[signed(mid[i], s3, QUADRIC_SIGNS[i][3]) as usize];
                    }
                    sum += prod;
                }
            }
            sum
        })
        .sum()
}

/// Run `f` on a pool with `jobs` workers (0 = rayon default).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

pub fn odd_primes_up_to(pmax: u32) -> Vec<u32> {
    (3..=pmax).filter(|&p| crate::field::is_prime(p as u64)).collect()
}

/// 1 + p^3 - a_p + 16(p + p^2) - 12(2p + p^2).
pub fn modularity_formula(p: u32, ap: i64) -> i64 {
    let p = p as i64;
    1 + p.pow(3) - ap + 16 * (p + p * p) - 12 * (2 * p + p * p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularityRow {
    pub p: u32,
    pub count: u64,
    pub formula_value: i64,
    pub a_p: i64,
    pub status: Status,
}

/// Compare projective counts of `variety` with the formula for every odd
/// prime up to `pmax`.
pub fn verify_modularity(
    v: &WeightedVariety,
    pmax: u32,
    registry: &CounterRegistry,
    cache: Option<&CountCache>,
) -> Result<Vec<ModularityRow>, CountError> {
    let aps = ap_table(&eta_product(pmax as usize + 1), pmax as usize);
    odd_primes_up_to(pmax)
        .into_iter()
        .map(|p| {
            let r = cached_count(v, p, registry, cache)?;
            let ap = aps[&(p as u64)];
            let f = modularity_formula(p, ap);
            let status = if r.projective as i64 == f { Status::Pass } else { Status::Fail };
            Ok(ModularityRow { p, count: r.projective, formula_value: f, a_p: ap, status })
        })
        .collect()
}

pub fn cached_count(
    v: &WeightedVariety,
    p: u32,
    registry: &CounterRegistry,
    cache: Option<&CountCache>,
) -> Result<CountResult, CountError> {
    if let Some(c) = cache {
        if let Some(hit) = c.get(&v.name, p, 1) {
            return Ok(hit);
        }
    }
    let r = registry.count(v, &PrimeField::new(p as u64)?)?;
    if let Some(c) = cache {
        c.put(&r)?;
    }
    Ok(r)
}

pub fn modularity_report(name: &str, rows: &[ModularityRow], ms: u64, provenance: Provenance) -> CheckReport {
    let ok = rows.iter().all(|r| r.status == Status::Pass);
    let bad: Vec<u32> = rows.iter().filter(|r| r.status != Status::Pass).map(|r| r.p).collect();
    CheckReport::boolean(
        name,
        "point count of the octic model against 1 + p^3 - a_p + 16(p+p^2) - 12(2p+p^2)",
        provenance,
        ok,
        json!({ "primes": rows.len(), "mismatched_primes": bad, "rows": rows }),
    )
    .with_ms(ms)
}

#[cfg(test)]
mod tests;
