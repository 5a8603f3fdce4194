use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::{Mono, MultiPoly, PolyError, VarSet};
use crate::field::{Field, RationalField};
use crate::linalg::{LinalgError, Subspace};

/// All monomials of one weighted degree, in decreasing lexicographic order
/// of exponent tuples (so `x0^d` comes first).
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    vars: Arc<VarSet>,
    degree: u32,
    monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl MonomialBasis {
    pub fn new(vars: &Arc<VarSet>, degree: u32) -> Self {
        let mut monos = Vec::new();
        let mut cur = vec![0u16; vars.len()];
        gen(vars.weights(), 0, degree, &mut cur, &mut monos);
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self { vars: vars.clone(), degree, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn monomials(&self) -> &[Mono] {
        &self.monos
    }
    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }
    pub fn position(&self, m: &[u16]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn coordinates(&self, p: &MultiPoly) -> Result<Vec<BigRational>, PolyError> {
        let mut v = vec![BigRational::zero(); self.len()];
        for (m, c) in p.terms() {
            let i = self.position(m).ok_or(PolyError::OutsideBasis {
                expected: self.degree,
                got: self.vars.weighted_degree(m),
            })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn polynomial(&self, coords: &[BigRational]) -> MultiPoly {
        MultiPoly::from_terms(&self.vars, self.monos.iter().cloned().zip(coords.iter().cloned()))
    }
}

fn gen(w: &[u32], i: usize, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
    if i == w.len() {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for e in (0..=left / w[i]).rev() {
        cur[i] = e as u16;
        gen(w, i + 1, left - e * w[i], cur, out);
    }
    cur[i] = 0;
}

/// Rows `m * g` for every generator `g` and monomial multiplier `m` landing
/// in `basis`, as coordinate vectors.
fn product_rows(gens: &[MultiPoly], basis: &MonomialBasis) -> Result<Vec<Vec<BigRational>>, PolyError> {
    let mut rows = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let dg = g.homogeneous_degree().ok_or(PolyError::OutsideBasis { expected: basis.degree, got: g.total_degree() })?;
        if dg > basis.degree {
            continue;
        }
        for m in MonomialBasis::new(basis.vars(), basis.degree - dg).monomials() {
            let mut row = vec![BigRational::zero(); basis.len()];
            for (gm, c) in g.terms() {
                let prod: Mono = gm.iter().zip(m).map(|(a, b)| a + b).collect();
                row[basis.position(&prod).expect("degree matches")] = c.clone();
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Degree-d piece of the ideal generated by `gens`, over the rationals.
pub fn graded_piece(gens: &[MultiPoly], basis: &MonomialBasis) -> Result<Subspace<RationalField>, PolyError> {
    let rows = product_rows(gens, basis)?;
    Ok(Subspace::span(&RationalField, basis.len(), rows).map_err(linalg_bug)?)
}

/// Same as [`graded_piece`] with coefficients reduced into `field`.
pub fn graded_piece_over<F: Field>(field: &F, gens: &[MultiPoly], basis: &MonomialBasis) -> Result<Subspace<F>, PolyError> {
    let rows = product_rows(gens, basis)?;
    let rows = crate::linalg::map_matrix(&rows, |c| field.from_rational(c))?;
    Ok(Subspace::span(field, basis.len(), rows).map_err(linalg_bug)?)
}

fn linalg_bug(e: LinalgError) -> PolyError {
    unreachable!("rows are built with basis length: {e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    #[test]
    fn octic_basis_in_four_variables() {
        let v = VarSet::unweighted(&["x0", "x1", "x2", "x3"]);
        let b = MonomialBasis::new(&v, 8);
        assert_eq!(b.len(), 165);
        assert_eq!(b.monomials()[0], vec![8, 0, 0, 0]);
        assert_eq!(b.monomials()[164], vec![0, 0, 0, 8]);
    }

    #[test]
    fn weighted_basis_counts() {
        let v = VarSet::new(&["x0", "x1", "y"], &[1, 1, 2]);
        // degree 4: x-part of degree 4, 2, 0 -> 5 + 3 + 1
        assert_eq!(MonomialBasis::new(&v, 4).len(), 9);
    }

    #[test]
    fn linear_generator_in_degree_one() {
        let v = VarSet::unweighted(&["x0", "x1", "x2", "x3"]);
        let g = parse(&v, "x0").unwrap();
        assert_eq!(graded_piece(&[g.clone()], &MonomialBasis::new(&v, 1)).unwrap().dim(), 1);
        assert_eq!(graded_piece(&[g], &MonomialBasis::new(&v, 2)).unwrap().dim(), 4);
        let q = parse(&v, "x0^3").unwrap();
        assert_eq!(graded_piece(&[q], &MonomialBasis::new(&v, 2)).unwrap().dim(), 0);
    }
}
