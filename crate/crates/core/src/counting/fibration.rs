//! Character-sum counting for varieties fibred by one-variable equations of
//! degree at most 2 over a base affine space.

use std::sync::Arc;

use rayon::prelude::*;

use super::CountError;
use crate::field::{Field, PrimeField};
use crate::poly::{horner, ModPoly, MultiPoly, VarSet};
use crate::varieties::WeightedVariety;

/// `a*y^2 + b*y + c = 0` with a, b, c polynomials on the base.
#[derive(Debug, Clone)]
pub struct FiberEquation {
    pub var: usize,
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub c: MultiPoly,
}

/// A presentation of the affine cone as: base variables, one quadratic
/// fiber equation per fiber variable, and base-only constraints.
#[derive(Debug, Clone)]
pub struct FibrationModel {
    pub base: Vec<usize>,
    pub base_vars: Arc<VarSet>,
    pub fibers: Vec<FiberEquation>,
    pub constraints: Vec<MultiPoly>,
}

/// `Some(c)` when `y` occurs in `p` only through the monomial `c*y^2`.
fn pure_square_coeff(p: &MultiPoly, y: usize) -> Option<num_rational::BigRational> {
    let mut coeff = None;
    for (m, c) in p.terms() {
        if m[y] == 0 {
            continue;
        }
        if m[y] == 2 && m.iter().enumerate().all(|(i, &e)| i == y || e == 0) {
            coeff = Some(c.clone());
        } else {
            return None;
        }
    }
    coeff
}

impl FibrationModel {
    /// Build a model by (1) eliminating pure squares shared between
    /// equations and (2) greedily picking fiber variables from the last
    /// variable backwards.
    pub fn build(v: &WeightedVariety) -> Result<Self, CountError> {
        let n = v.nvars();
        let mut eqs = v.equations.clone();
        for y in (0..n).rev() {
            let idx: Vec<usize> = (0..eqs.len()).filter(|&i| eqs[i].degree_in(y) > 0).collect();
            if idx.len() < 2 {
                continue;
            }
            let coeffs: Option<Vec<_>> = idx.iter().map(|&i| pure_square_coeff(&eqs[i], y)).collect();
            let Some(coeffs) = coeffs else { continue };
            let pivot = eqs[idx[0]].clone();
            for (k, &i) in idx.iter().enumerate().skip(1) {
                let f = &coeffs[k] / &coeffs[0];
                eqs[i] = &eqs[i] - &pivot.scale(&f);
            }
        }
        let mut fiber_of_eq: Vec<Option<usize>> = vec![None; eqs.len()];
        let mut is_fiber = vec![false; n];
        for y in (0..n).rev() {
            let idx: Vec<usize> = (0..eqs.len()).filter(|&i| eqs[i].degree_in(y) > 0).collect();
            if idx.len() != 1 || fiber_of_eq[idx[0]].is_some() || eqs[idx[0]].degree_in(y) > 2 {
                continue;
            }
            // Every other variable of the equation must stay in the base.
            let clash = (0..n).any(|z| z != y && is_fiber[z] && eqs[idx[0]].degree_in(z) > 0);
            if clash {
                continue;
            }
            fiber_of_eq[idx[0]] = Some(y);
            is_fiber[y] = true;
        }
        let base: Vec<usize> = (0..n).filter(|&i| !is_fiber[i]).collect();
        if base.is_empty() {
            return Err(CountError::NotFibred(v.name.clone()));
        }
        let names: Vec<&str> = base.iter().map(|&i| v.vars.names()[i].as_str()).collect();
        let weights: Vec<u32> = base.iter().map(|&i| v.vars.weights()[i]).collect();
        let base_vars = VarSet::new(&names, &weights);
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| match base.iter().position(|&b| b == i) {
                Some(k) => MultiPoly::var(&base_vars, k),
                None => MultiPoly::zero(&base_vars),
            })
            .collect();
        let to_base = |p: &MultiPoly| p.substitute(&base_vars, &images).expect("arity matches");

        let mut fibers = Vec::new();
        let mut constraints = Vec::new();
        for (eq, fib) in eqs.iter().zip(&fiber_of_eq) {
            match fib {
                None => constraints.push(to_base(eq)),
                Some(y) => {
                    let mut parts = [MultiPoly::zero(&v.vars), MultiPoly::zero(&v.vars), MultiPoly::zero(&v.vars)];
                    for (m, c) in eq.terms() {
                        let mut m2 = m.clone();
                        let e = m2[*y] as usize;
                        m2[*y] = 0;
                        parts[2 - e].add_term(m2, c.clone());
                    }
                    let [a, b, c] = parts;
                    fibers.push(FiberEquation { var: *y, a: to_base(&a), b: to_base(&b), c: to_base(&c) });
                }
            }
        }
        Ok(Self { base, base_vars, fibers, constraints })
    }

    pub fn base_dim(&self) -> usize {
        self.base.len()
    }
}

struct Compiled {
    fibers: Vec<[ModPoly; 3]>,
    constraints: Vec<ModPoly>,
}

/// Number of solutions of `a*y^2 + b*y + c = 0` in F_p.
#[inline]
fn quadratic_solutions(f: &PrimeField, a: u32, b: u32, c: u32) -> u64 {
    let p = f.modulus() as u64;
    if a != 0 {
        let disc = f.sub(&f.mul(&b, &b), &f.mul(&f.from_int(4), &f.mul(&a, &c)));
        (1 + f.chi(disc) as i64) as u64
    } else if b != 0 {
        1
    } else if c == 0 {
        p
    } else {
        0
    }
}

/// Affine cone count by summing fiber solution counts over the base.
pub fn cone_count(model: &FibrationModel, field: &PrimeField) -> Result<u64, CountError> {
    let comp = Compiled {
        fibers: model
            .fibers
            .iter()
            .map(|fe| Ok([ModPoly::compile(&fe.a, field)?, ModPoly::compile(&fe.b, field)?, ModPoly::compile(&fe.c, field)?]))
            .collect::<Result<_, CountError>>()?,
        constraints: model.constraints.iter().map(|c| ModPoly::compile(c, field)).collect::<Result<_, _>>()?,
    };
    let p = field.modulus() as u64;
    let d = model.base_dim();
    let heads = p.pow(d as u32 - 1);
    let total: u64 = (0..heads)
        .into_par_iter()
        .map(|h| {
            let mut head = vec![0u32; d - 1];
            let mut r = h;
            for slot in head.iter_mut().rev() {
                *slot = (r % p) as u32;
                r /= p;
            }
            let fib: Vec<[Vec<u32>; 3]> = comp
                .fibers
                .iter()
                .map(|[a, b, c]| [a.partial_last(&head), b.partial_last(&head), c.partial_last(&head)])
                .collect();
            let cons: Vec<Vec<u32>> = comp.constraints.iter().map(|c| c.partial_last(&head)).collect();
            let mut sum = 0u64;
            for x in 0..p as u32 {
                if cons.iter().any(|c| horner(field, c, x) != 0) {
                    continue;
                }
                let mut prod = 1u64;
                for [a, b, c] in &fib {
                    prod *= quadratic_solutions(field, horner(field, a, x), horner(field, b, x), horner(field, c, x));
                    if prod == 0 {
                        break;
                    }
                }
                sum += prod;
            }
            sum
        })
        .sum();
    Ok(total)
}

/// True when every equation vanishes only at the origin once all weight-1
/// variables are set to zero; then F_p^* acts freely on the punctured cone.
pub fn weighted_action_is_free(v: &WeightedVariety, field: &PrimeField) -> Result<bool, CountError> {
    let heavy: Vec<usize> = (0..v.nvars()).filter(|&i| v.vars.weights()[i] > 1).collect();
    if heavy.is_empty() {
        return Ok(true);
    }
    let compiled: Vec<ModPoly> = v.equations.iter().map(|e| ModPoly::compile(e, field)).collect::<Result<_, _>>()?;
    let p = field.modulus() as u64;
    let mut pt = vec![0u32; v.nvars()];
    for idx in 1..p.pow(heavy.len() as u32) {
        let mut r = idx;
        for &h in &heavy {
            pt[h] = (r % p) as u32;
            r /= p;
        }
        if compiled.iter().all(|e| e.eval(&pt) == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

