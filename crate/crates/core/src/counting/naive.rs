//! Exhaustive oracle: enumerate the projective points directly.

use std::collections::HashSet;

use super::CountError;
use crate::field::{Field, PrimeField};
use crate::poly::ModPoly;
use crate::varieties::WeightedVariety;

fn compile(v: &WeightedVariety, field: &PrimeField) -> Result<Vec<ModPoly>, CountError> {
    Ok(v.equations.iter().map(|e| ModPoly::compile(e, field)).collect::<Result<_, _>>()?)
}

fn unpack(mut idx: u64, p: u64, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % p) as u32;
        idx /= p;
    }
}

/// Projective points, no division anywhere. Unweighted ambients use the
/// normalisation "first nonzero coordinate = 1"; weighted ones identify
/// explicit scaling orbits.
pub fn projective_count(v: &WeightedVariety, field: &PrimeField) -> Result<u64, CountError> {
    let eqs = compile(v, field)?;
    let n = v.nvars();
    let p = field.modulus() as u64;
    let mut pt = vec![0u32; n];
    if !v.is_weighted() {
        let mut total = 0u64;
        for lead in 0..n {
            let tail = n - lead - 1;
            for idx in 0..p.pow(tail as u32) {
                pt[..lead].iter_mut().for_each(|c| *c = 0);
                pt[lead] = 1;
                unpack(idx, p, &mut pt[lead + 1..]);
                if eqs.iter().all(|e| e.eval(&pt) == 0) {
                    total += 1;
                }
            }
        }
        return Ok(total);
    }
    let w = v.vars.weights().to_vec();
    let scalars: Vec<u32> = (1..p as u32).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for idx in 1..p.pow(n as u32) {
        unpack(idx, p, &mut pt);
        if !eqs.iter().all(|e| e.eval(&pt) == 0) {
            continue;
        }
        let rep = scalars
            .iter()
            .map(|&l| pt.iter().zip(&w).map(|(&x, &wi)| field.mul(&x, &field.pow(&l, wi as u64))).collect::<Vec<u32>>())
            .min()
            .expect("p > 2");
        seen.insert(rep);
    }
    Ok(seen.len() as u64)
}
