use super::{MultiPoly, PolyError};
use crate::field::{Field, PrimeField};

/// A polynomial compiled for repeated evaluation over one prime field.
#[derive(Debug, Clone)]
pub struct ModPoly {
    field: PrimeField,
    nvars: usize,
    max_exp: Vec<usize>,
    terms: Vec<(u32, Vec<u16>)>,
}

impl ModPoly {
    pub fn compile(p: &MultiPoly, field: &PrimeField) -> Result<Self, PolyError> {
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let c = field.from_rational(c)?;
            if c != 0 {
                terms.push((c, m.clone()));
            }
        }
        let nvars = p.nvars();
        let max_exp = (0..nvars).map(|i| p.degree_in(i) as usize).collect();
        Ok(Self { field: field.clone(), nvars, max_exp, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[u32]) -> u32 {
        debug_assert_eq!(x.len(), self.nvars);
        let f = &self.field;
        // Power tables per variable.
        let pows: Vec<Vec<u32>> = x
            .iter()
            .zip(&self.max_exp)
            .map(|(&xi, &e)| {
                let mut v = Vec::with_capacity(e + 1);
                v.push(1);
                for k in 0..e {
                    v.push(f.mul(&v[k], &xi));
                }
                v
            })
            .collect();
        let mut acc = 0u32;
        for (c, m) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &pows[i][e as usize]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Fix every variable except the last, leaving coefficients of a
    /// univariate polynomial (constant term first) in that variable.
    pub fn partial_last(&self, head: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let last = self.nvars - 1;
        let mut out = vec![0u32; self.max_exp[last] + 1];
        for (c, m) in &self.terms {
            let mut t = *c;
            for (i, &e) in m[..last].iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &f.pow(&head[i], e as u64));
                }
            }
            let k = m[last] as usize;
            out[k] = f.add(&out[k], &t);
        }
        out
    }
}

/// Horner evaluation of coefficients (constant term first).
pub fn horner(field: &PrimeField, coeffs: &[u32], x: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, c| field.add(&field.mul(&acc, &x), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, VarSet};

    #[test]
    fn compiled_matches_generic_eval() {
        let v = VarSet::unweighted(&["a", "b", "c"]);
        let p = parse(&v, "3*a^2*b - 1/2*c^3 + a*b*c + 5").unwrap();
        let f = PrimeField::new(31).unwrap();
        let mp = ModPoly::compile(&p, &f).unwrap();
        for a in 0..31 {
            for b in [0, 1, 7, 30] {
                for c in [0, 2, 19] {
                    let pt = [a, b, c];
                    assert_eq!(mp.eval(&pt), p.eval(&f, &pt).unwrap());
                    assert_eq!(horner(&f, &mp.partial_last(&pt[..2]), c), mp.eval(&pt));
                }
            }
        }
    }
}
