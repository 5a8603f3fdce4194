//! Degree-8 pieces of the Jacobian and equisingular ideals of the octic
//! D = D1 + D2.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::arrangement::build_incidence;
use crate::field::{Field, FieldError, PrimeField, RationalField};
use crate::linalg::{map_matrix, rank, Subspace};
use crate::poly::{graded_piece, rat, MonomialBasis, MultiPoly, PolyError, VarSet};
use crate::report::{CheckReport, Provenance};
use crate::varieties::d2_product;

#[derive(Debug, Error)]
pub enum DeformError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("centre data {0:?} are not independent points")]
    Degenerate(Vec<Vec<BigRational>>),
    #[error("(J_F)_8 is not contained in (I_eq)_8 over {0}")]
    Inclusion(String),
}

/// A blow-up centre with the vanishing order imposed along it.
#[derive(Debug, Clone, PartialEq)]
pub enum Center {
    Point(Vec<BigRational>),
    Line([Vec<BigRational>; 2]),
}

impl Center {
    fn spanning(&self) -> Vec<Vec<BigRational>> {
        match self {
            Center::Point(p) => vec![p.clone()],
            Center::Line([a, b]) => vec![a.clone(), b.clone()],
        }
    }

    pub fn order(&self) -> u32 {
        match self {
            Center::Point(_) => 4,
            Center::Line(_) => 2,
        }
    }

    /// Apply x -> M x to the spanning vectors.
    pub fn transform(&self, m: &[Vec<BigRational>]) -> Self {
        let ap = |v: &Vec<BigRational>| -> Vec<BigRational> {
            m.iter().map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)).collect()
        };
        match self {
            Center::Point(p) => Center::Point(ap(p)),
            Center::Line([a, b]) => Center::Line([ap(a), ap(b)]),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OcticData {
    pub vars: Arc<VarSet>,
    pub f: MultiPoly,
    pub partials: Vec<MultiPoly>,
    pub centers: Vec<Center>,
    pub basis: MonomialBasis,
}

pub fn octic_form(vars: &Arc<VarSet>) -> MultiPoly {
    let d1 = (0..4).fold(MultiPoly::one(vars), |acc, i| &acc * &MultiPoly::var(vars, i));
    &d1 * &d2_product(vars)
}

impl OcticData {
    pub fn new() -> Self {
        let vars = VarSet::unweighted(&["x0", "x1", "x2", "x3"]);
        let f = octic_form(&vars);
        let partials = (0..4).map(|j| f.derivative(j)).collect();
        let m = build_incidence();
        let mut centers: Vec<Center> = m.fourfold.iter().map(|p| Center::Point(p.point.0.clone())).collect();
        for l in m.double_lines.iter().flatten() {
            let b = l.span.basis();
            centers.push(Center::Line([b[0].clone(), b[1].clone()]));
        }
        let basis = MonomialBasis::new(&vars, 8);
        Self { vars, f, partials, centers, basis }
    }

    /// x_i * dF/dx_j for all i, j.
    pub fn jacobian_generators(&self) -> Vec<MultiPoly> {
        let mut out = Vec::new();
        for i in 0..4 {
            for d in &self.partials {
                out.push(&MultiPoly::var(&self.vars, i) * d);
            }
        }
        out
    }

    pub fn jacobian_rows(&self) -> Result<Vec<Vec<BigRational>>, DeformError> {
        Ok(self.jacobian_generators().iter().map(|g| self.basis.coordinates(g)).collect::<Result<_, _>>()?)
    }

    /// Linear functionals on degree-8 forms whose common kernel is the set
    /// of forms vanishing to the centre's order: complete the spanning
    /// vectors to a basis u, write f(x) = f(M u), and demand that every
    /// coefficient of degree < order in the complementary u-variables
    /// vanishes.
    pub fn condition_functionals(&self, c: &Center) -> Result<Vec<Vec<BigRational>>, DeformError> {
        let span = c.spanning();
        let k = span.len();
        let mut cols = span.clone();
        for e in 0..4 {
            let mut v = vec![rat(0); 4];
            v[e] = rat(1);
            let mut trial = cols.clone();
            trial.push(v.clone());
            if rank(&RationalField, &trial, 4) == trial.len() {
                cols = trial;
            }
            if cols.len() == 4 {
                break;
            }
        }
        if cols.len() != 4 || rank(&RationalField, &span, 4) != k {
            return Err(DeformError::Degenerate(span));
        }
        // x_i = sum_j cols[j][i] u_j
        let m: Vec<Vec<BigRational>> = (0..4).map(|i| (0..4).map(|j| cols[j][i].clone()).collect()).collect();
        let pulled = pullback_rows(&self.basis, &m)?;
        let order = c.order() as u16;
        let cond: Vec<usize> = self
            .basis
            .monomials()
            .iter()
            .enumerate()
            .filter(|(_, mono)| mono[k..].iter().sum::<u16>() < order)
            .map(|(i, _)| i)
            .collect();
        Ok(cond.iter().map(|&mu| pulled.iter().map(|row| row[mu].clone()).collect()).collect())
    }
}

impl Default for OcticData {
    fn default() -> Self {
        Self::new()
    }
}

/// Row i: coordinates of basis monomial i composed with x -> M u.
fn pullback_rows(basis: &MonomialBasis, m: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>, DeformError> {
    let vars = basis.vars();
    let d = basis.degree() as usize;
    let linear: Vec<MultiPoly> = m
        .iter()
        .map(|row| row.iter().enumerate().fold(MultiPoly::zero(vars), |acc, (j, c)| &acc + &MultiPoly::var(vars, j).scale(c)))
        .collect();
    let powers: Vec<Vec<MultiPoly>> = linear
        .iter()
        .map(|l| {
            let mut v = vec![MultiPoly::one(vars)];
            for k in 0..d {
                let next = &v[k] * l;
                v.push(next);
            }
            v
        })
        .collect();
    basis
        .monomials()
        .iter()
        .map(|mono| {
            let p = mono.iter().enumerate().fold(MultiPoly::one(vars), |acc, (i, &e)| &acc * &powers[i][e as usize]);
            Ok(basis.coordinates(&p)?)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquisingularDims {
    pub field: String,
    pub dim_jf8: usize,
    pub dim_ieq8: usize,
    pub h1_equisingular: usize,
    /// Codimension of each centre's condition space, in centre order.
    pub condition_codims: Vec<usize>,
}

/// Everything needed to redo the computation over another field.
#[derive(Debug, Clone)]
pub struct EquisingularSystem {
    pub ambient: usize,
    pub jacobian: Vec<Vec<BigRational>>,
    pub conditions: Vec<Vec<Vec<BigRational>>>,
}

impl EquisingularSystem {
    pub fn build(data: &OcticData, centers: &[Center]) -> Result<Self, DeformError> {
        Ok(Self {
            ambient: data.basis.len(),
            jacobian: data.jacobian_rows()?,
            conditions: centers.iter().map(|c| data.condition_functionals(c)).collect::<Result<_, _>>()?,
        })
    }

    pub fn solve<F: Field>(&self, field: &F, label: &str) -> Result<EquisingularDims, DeformError> {
        let conv = |rows: &[Vec<BigRational>]| map_matrix(rows, |c| field.from_rational(c));
        let n = self.ambient;
        let jf = Subspace::span(field, n, conv(&self.jacobian)?).expect("ambient rows");
        let mut codims = Vec::new();
        let mut summands = Vec::new();
        for fun in &self.conditions {
            let cond = Subspace::annihilated_by(field, n, &conv(fun)?).expect("ambient rows");
            codims.push(n - cond.dim());
            summands.push(cond.sum(&jf).expect("same ambient"));
        }
        let ieq = Subspace::intersect_all(field, n, summands.iter()).expect("same ambient");
        if !jf.is_subspace_of(&ieq) {
            return Err(DeformError::Inclusion(label.into()));
        }
        Ok(EquisingularDims {
            field: label.into(),
            dim_jf8: jf.dim(),
            dim_ieq8: ieq.dim(),
            h1_equisingular: ieq.dim() - jf.dim(),
            condition_codims: codims,
        })
    }

    pub fn without_lines(&self, npoints: usize) -> Self {
        Self { ambient: self.ambient, jacobian: self.jacobian.clone(), conditions: self.conditions[..npoints].to_vec() }
    }
}

/// Signed permutation matrices M with F(Mx) proportional to F.
pub fn symmetries(data: &OcticData) -> Vec<Vec<Vec<BigRational>>> {
    use itertools::Itertools;
    let mut out = Vec::new();
    for perm in (0..4).permutations(4) {
        for signs in 0..16u32 {
            let m: Vec<Vec<BigRational>> = (0..4)
                .map(|i| {
                    (0..4).map(|j| if perm[i] == j { rat(if signs >> i & 1 == 1 { -1 } else { 1 }) } else { rat(0) }).collect()
                })
                .collect();
            let g = data.f.substitute_linear(&m).expect("4x4");
            let c = g.coeff(&[2, 2, 2, 2]);
            let base = data.f.coeff(&[2, 2, 2, 2]);
            if !base.is_zero() && g == data.f.scale(&(&c / &base)) {
                out.push(m);
            }
        }
    }
    out
}

pub const CERT_PRIMES: [u32; 2] = [9967, 9973];
const CITE_H1: &str = "equisingular deformations (I_eq/J_F)_8 vanish, so H^1(Theta(log D*)) = 0";

pub fn run_checks(seed: u64) -> Result<Vec<CheckReport>, DeformError> {
    let data = OcticData::new();
    let mut rows = Vec::new();
    rows.push(CheckReport::exact("deform.ambient_dim", "degree-8 forms in four variables", Provenance::Trivial, 165, data.basis.len()));
    let euler = (0..4).fold(MultiPoly::zero(&data.vars), |acc, j| &acc + &(&MultiPoly::var(&data.vars, j) * &data.partials[j]));
    let jf_q = graded_piece(&data.partials, &data.basis)?;
    let f_coords = data.basis.coordinates(&data.f)?;
    rows.push(CheckReport::boolean(
        "deform.euler_relation",
        "sum x_j dF/dx_j = 8F, so F lies in (J_F)_8",
        Provenance::Trivial,
        euler == data.f.scale(&rat(8)) && jf_q.contains(&f_coords),
        json!(null),
    ));

    let sys = EquisingularSystem::build(&data, &data.centers)?;
    let q = sys.solve(&RationalField, "Q")?;
    let jrank_q = rank(&RationalField, &sys.jacobian, 165);
    let mut cert = Vec::new();
    for p in CERT_PRIMES {
        let f = PrimeField::new(p as u64)?;
        let jr = rank(&f, &map_matrix(&sys.jacobian, |c| f.from_rational(c))?, 165);
        cert.push((sys.solve(&f, &format!("F_{p}"))?, jr));
    }
    rows.push(CheckReport::boolean(
        "deform.jacobian_rank_certified",
        "dim (J_F)_8 = rank of the 16 x 165 matrix",
        Provenance::Derived,
        jrank_q == q.dim_jf8 && cert.iter().all(|(d, r)| *r == jrank_q && d.dim_jf8 == q.dim_jf8),
        json!({"rank_q": jrank_q, "rank_mod_p": cert.iter().map(|(_, r)| r).collect::<Vec<_>>()}),
    ));

    let npoints = 12;
    let point_codims_ok = q.condition_codims[..npoints].iter().all(|&c| c == 20);
    let generic = data.condition_functionals(&Center::Point(vec![rat(1), rat(2), rat(3), rat(5)]))?;
    rows.push(CheckReport::boolean(
        "deform.point_condition_codim",
        "order-4 vanishing at a point is 20 linear conditions",
        Provenance::Derived,
        point_codims_ok && rank(&RationalField, &generic, 165) == 20,
        json!({"codims": q.condition_codims}),
    ));

    let f_ok = sys.conditions.iter().all(|fun| fun.iter().all(|row| row.iter().zip(&f_coords).fold(BigRational::zero(), |a, (x, y)| a + x * y).is_zero()));
    rows.push(CheckReport::boolean("deform.f_satisfies_conditions", "F is singular along every centre", Provenance::Trivial, f_ok, json!(null)));

    let l = MultiPoly::from_terms(&data.vars, (0..4).map(|i| {
        let mut m = vec![0u16; 4];
        m[i] = 1;
        (m, rat([1, 2, 3, 7][i]))
    }));
    let witness = data.basis.coordinates(&l.pow(8))?;
    let fails_all = sys.conditions.iter().all(|fun| fun.iter().any(|row| !row.iter().zip(&witness).fold(BigRational::zero(), |a, (x, y)| a + x * y).is_zero()));
    rows.push(CheckReport::boolean(
        "deform.witness_fails_conditions",
        "(x0 + 2x1 + 3x2 + 7x3)^8 avoids every centre and fails each condition set",
        Provenance::Derived,
        fails_all,
        json!(null),
    ));

    rows.push(CheckReport::exact(
        "deform.h1_equisingular",
        CITE_H1,
        Provenance::Published,
        0,
        q.h1_equisingular,
    ));
    rows.push(CheckReport::exact(
        "deform.h1_multi_prime",
        CITE_H1,
        Provenance::Derived,
        json!([&q.dim_jf8, &q.dim_ieq8, &q.dim_jf8, &q.dim_ieq8]),
        json!(cert.iter().flat_map(|(d, _)| [d.dim_jf8, d.dim_ieq8]).collect::<Vec<_>>()),
    ));
    let relaxed = sys.without_lines(npoints).solve(&RationalField, "Q")?;
    rows.push(CheckReport::boolean(
        "deform.monotone_without_lines",
        "dropping the line conditions cannot shrink the quotient",
        Provenance::Trivial,
        relaxed.h1_equisingular >= q.h1_equisingular,
        json!({"points_only": relaxed.h1_equisingular, "full": q.h1_equisingular}),
    ));

    let syms = symmetries(&data);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<_> = syms.choose_multiple(&mut rng, 5).cloned().collect();
    let f = PrimeField::new(CERT_PRIMES[0] as u64)?;
    let base = sys.solve(&f, "base")?;
    let mut invariant = true;
    for m in &chosen {
        let moved: Vec<Center> = data.centers.iter().map(|c| c.transform(m)).collect();
        let msys = EquisingularSystem::build(&data, &moved)?;
        let d = msys.solve(&f, "moved")?;
        invariant &= d.dim_jf8 == base.dim_jf8 && d.dim_ieq8 == base.dim_ieq8;
    }
    rows.push(CheckReport::boolean(
        "deform.symmetry_invariance",
        "coordinate symmetries of D preserve every dimension",
        Provenance::Derived,
        invariant && chosen.len() == 5,
        json!({"symmetry_group_order": syms.len(), "sampled": chosen.len()}),
    ));
    Ok(rows)
}

pub fn equisingular_summary() -> Result<EquisingularDims, DeformError> {
    let data = OcticData::new();
    EquisingularSystem::build(&data, &data.centers)?.solve(&RationalField, "Q")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_condition_count() {
        let data = OcticData::new();
        let line = data.centers.iter().find(|c| matches!(c, Center::Line(_))).unwrap();
        // (u-degree <= 1) monomials of degree 8 in 4 variables: 9 + 2*8
        assert_eq!(data.condition_functionals(line).unwrap().len(), 25);
    }

    #[test]
    fn degenerate_center_rejected() {
        let data = OcticData::new();
        let p = vec![rat(1), rat(0), rat(0), rat(0)];
        assert!(matches!(data.condition_functionals(&Center::Line([p.clone(), p])), Err(DeformError::Degenerate(_))));
    }

    #[test]
    fn symmetry_group_nontrivial() {
        let data = OcticData::new();
        assert!(symmetries(&data).len() > 1);
    }

    #[test]
    fn suite_passes() {
        for r in run_checks(7).unwrap() {
            assert!(r.is_pass(), "{r:?}");
        }
    }
}
