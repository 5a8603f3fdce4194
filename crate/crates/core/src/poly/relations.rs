use std::sync::Arc;

use super::{MultiPoly, PolyError, VarSet};

/// Rewriting rules `v^2 -> q` where no `q` mentions a rewritten variable.
#[derive(Debug, Clone)]
pub struct SquareRelations {
    vars: Arc<VarSet>,
    rules: Vec<(usize, MultiPoly)>,
}

impl SquareRelations {
    pub fn new(vars: &Arc<VarSet>, rules: Vec<(usize, MultiPoly)>) -> Result<Self, PolyError> {
        for (_, q) in &rules {
            for &(j, _) in &rules {
                if q.degree_in(j) > 0 {
                    return Err(PolyError::RecursiveRelation(vars.names()[j].clone()));
                }
            }
        }
        Ok(Self { vars: vars.clone(), rules })
    }

    pub fn rules(&self) -> &[(usize, MultiPoly)] {
        &self.rules
    }

    /// Normal form: every rewritten variable appears to power at most 1.
    pub fn reduce(&self, p: &MultiPoly) -> MultiPoly {
        let order: Vec<usize> = (0..self.rules.len()).collect();
        self.reduce_in_order(p, &order)
    }

    /// Apply the rules one variable at a time in the given order. Since no
    /// right-hand side mentions a rewritten variable, any order gives the
    /// same result.
    pub fn reduce_in_order(&self, p: &MultiPoly, order: &[usize]) -> MultiPoly {
        assert_eq!(p.vars().as_ref(), self.vars.as_ref());
        let mut cur = p.clone();
        for &r in order {
            let (v, q) = &self.rules[r];
            let mut q_pows = vec![MultiPoly::one(&self.vars)];
            let mut next = MultiPoly::zero(&self.vars);
            for (m, c) in cur.terms() {
                let e = m[*v];
                if e < 2 {
                    next.add_term(m.clone(), c.clone());
                    continue;
                }
                let k = (e / 2) as usize;
                while q_pows.len() <= k {
                    let t = &q_pows[q_pows.len() - 1] * q;
                    q_pows.push(t);
                }
                let mut m2 = m.clone();
                m2[*v] = e % 2;
                let t = &MultiPoly::monomial(&self.vars, m2, c.clone()) * &q_pows[k];
                next = &next + &t;
            }
            cur = next;
        }
        cur
    }
}
