//! Singular loci by exhaustive enumeration with Jacobian ranks.

use serde_json::json;

use crate::field::{Field, FiniteField, PrimeField, SquareTable};
use crate::linalg::rank;
use crate::poly::MultiPoly;
use crate::report::{CheckReport, Provenance};
use crate::varieties::{self, WeightedVariety, QUADRIC_SIGNS};

use super::CountError;

/// Singular points with their Jacobian ranks, normalised so the first
/// nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeInventory<E> {
    pub points: Vec<Vec<E>>,
    pub ranks: Vec<usize>,
}

impl<E: Clone + PartialEq> NodeInventory<E> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, pt: &[E]) -> bool {
        self.points.iter().any(|q| q == pt)
    }

    pub fn rank_of(&self, pt: &[E]) -> Option<usize> {
        self.points.iter().position(|q| q == pt).map(|i| self.ranks[i])
    }
}

/// Scale so the first nonzero coordinate is 1; `None` for the zero vector.
pub fn normalize<F: Field>(field: &F, pt: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let lead = pt.iter().find(|c| !field.is_zero(c))?;
    let inv = field.inv(lead)?;
    Some(pt.iter().map(|c| field.mul(c, &inv)).collect())
}

/// Every normalised point of P^{n-1}(F_q).
fn projective_points<F: FiniteField>(field: &F, n: usize) -> impl Iterator<Item = Vec<F::Elem>> + '_ {
    let q = field.order();
    (0..n).flat_map(move |lead| {
        let tail = (n - lead - 1) as u32;
        (0..q.pow(tail)).map(move |mut idx| {
            let mut pt = vec![field.zero(); n];
            pt[lead] = field.one();
            for slot in pt[lead + 1..].iter_mut().rev() {
                *slot = field.element((idx % q) as usize);
                idx /= q;
            }
            pt
        })
    })
}

fn x_jacobian<F: Field>(field: &F, pt: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let two = field.from_int(2);
    (0..4)
        .map(|i| {
            let mut row = vec![field.zero(); 8];
            for j in 0..4 {
                let c = field.from_int(-2 * QUADRIC_SIGNS[i][j]);
                row[j] = field.mul(&c, &pt[j]);
            }
            row[4 + i] = field.mul(&two, &pt[4 + i]);
            row
        })
        .collect()
}

/// Singular points of the octic model over F_q via the (X, sign pattern)
/// fibration. A point with every Y_i nonzero has an invertible Y-block, so
/// only X with some Q_i(X) = 0 are expanded. Panics if a point of rank
/// at most 2 turns up, since the locus is expected to consist of nodes.
pub fn x_singular_points<F: FiniteField>(field: &F) -> NodeInventory<F::Elem> {
    let sq = SquareTable::new(field);
    let mut inv = NodeInventory { points: Vec::new(), ranks: Vec::new() };
    for x in projective_points(field, 4) {
        let q: Vec<F::Elem> = (0..4)
            .map(|i| {
                (0..4).fold(field.zero(), |acc, j| {
                    let s = field.mul(&x[j], &x[j]);
                    if QUADRIC_SIGNS[i][j] > 0 {
                        field.add(&acc, &s)
                    } else {
                        field.sub(&acc, &s)
                    }
                })
            })
            .collect();
        if q.iter().all(|v| !field.is_zero(v)) {
            continue;
        }
        let roots: Vec<Vec<F::Elem>> = q.iter().map(|v| sq.roots(field, v)).collect();
        if roots.iter().any(Vec::is_empty) {
            continue;
        }
        let mut choice = [0usize; 4];
        loop {
            let mut pt = x.clone();
            pt.extend((0..4).map(|i| roots[i][choice[i]].clone()));
            let r = rank(field, &x_jacobian(field, &pt), 8);
            if r < 4 {
                assert!(r == 3, "rank {r} point {pt:?}");
                inv.points.push(pt);
                inv.ranks.push(r);
            }
            let mut i = 0;
            while i < 4 {
                choice[i] += 1;
                if choice[i] < roots[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == 4 {
                break;
            }
        }
    }
    inv
}

fn jacobian_generic<F: Field>(field: &F, grads: &[Vec<MultiPoly>], pt: &[F::Elem]) -> Result<Vec<Vec<F::Elem>>, CountError> {
    grads.iter().map(|row| row.iter().map(|d| d.eval(field, pt).map_err(CountError::from)).collect()).collect()
}

/// Singular points of an unweighted complete intersection over F_q: points
/// where the Jacobian rank drops below the number of equations. The octic
/// model is routed through the fibration.
pub fn singular_points<F: FiniteField>(v: &WeightedVariety, field: &F) -> Result<NodeInventory<F::Elem>, CountError> {
    if *v == varieties::x_vgn() {
        return Ok(x_singular_points(field));
    }
    if v.is_weighted() {
        return Err(CountError::Unsupported { method: "singular_points".into(), variety: v.name.clone() });
    }
    let n = v.nvars();
    let grads: Vec<Vec<MultiPoly>> = v.equations.iter().map(|e| (0..n).map(|j| e.derivative(j)).collect()).collect();
    let mut inv = NodeInventory { points: Vec::new(), ranks: Vec::new() };
    for pt in projective_points(field, n) {
        let mut on = true;
        for e in &v.equations {
            if !field.is_zero(&e.eval(field, &pt)?) {
                on = false;
                break;
            }
        }
        if !on {
            continue;
        }
        let r = rank(field, &jacobian_generic(field, &grads, &pt)?, n);
        if r < v.equations.len() {
            inv.points.push(pt);
            inv.ranks.push(r);
        }
    }
    Ok(inv)
}

const CITE_BEAUVILLE: &str = "singular points (0:0:1:0:±i), (1:0:0:±1:0) and indeterminacy points of the Beauville surface map";

/// Checks over F_13, where i = 5.
pub fn beauville_singularities() -> Vec<CheckReport> {
    let f = PrimeField::new(13).expect("13 is prime");
    let s = varieties::beauville_s();
    let i = 5u32;
    let mi = f.neg(&i);
    let on = |pt: &[u32]| s.equations.iter().all(|e| e.eval(&f, pt).map(|v| v == 0).unwrap_or(false));
    let grads: Vec<Vec<MultiPoly>> = s.equations.iter().map(|e| (0..5).map(|j| e.derivative(j)).collect()).collect();
    let rank_at = |pt: &[u32]| rank(&f, &jacobian_generic(&f, &grads, pt).expect("prime field"), 5);

    let listed: Vec<Vec<u32>> = vec![vec![0, 0, 1, 0, i], vec![0, 0, 1, 0, mi], vec![1, 0, 0, 1, 0], vec![1, 0, 0, f.neg(&1), 0]];
    let mut rows = Vec::new();
    let listed_ok: Vec<(String, bool, usize)> = listed.iter().map(|p| (format!("{p:?}"), on(p), rank_at(p))).collect();
    rows.push(CheckReport::boolean(
        "counting.beauville_listed_singular",
        CITE_BEAUVILLE,
        Provenance::Published,
        listed_ok.iter().all(|(_, o, r)| *o && *r < 2),
        json!(listed_ok.iter().map(|(p, o, r)| json!({"point_f13": p, "on_surface": o, "rank": r})).collect::<Vec<_>>()),
    ));

    let sing = singular_points(&s, &f).expect("unweighted");
    let normalized: Vec<Vec<u32>> = listed.iter().map(|p| normalize(&f, p).expect("nonzero")).collect();
    let exact = sing.len() == 4 && normalized.iter().all(|p| sing.contains(p));
    rows.push(CheckReport::boolean(
        "counting.beauville_singular_locus_exact",
        CITE_BEAUVILLE,
        Provenance::Derived,
        exact,
        json!({"singular_points_f13": sing.points}),
    ));

    let indeterminacy: Vec<Vec<u32>> = [(i, 1), (i, 12), (mi, 1), (mi, 12)].iter().map(|&(a, b)| vec![0, 1, 0, a, b]).collect();
    let on_all = indeterminacy.iter().all(|p| on(p));
    let slice: Vec<Vec<u32>> = projective_points(&f, 5).filter(|p| p[0] == 0 && p[2] == 0 && on(p)).collect();
    rows.push(CheckReport::boolean(
        "counting.beauville_indeterminacy",
        CITE_BEAUVILLE,
        Provenance::Published,
        on_all && slice.len() == 4,
        json!({"listed_on_surface": on_all, "points_with_x0_x2_zero": slice.len()}),
    ));

    let smooth = projective_points(&f, 5).find(|p| on(p) && !sing.contains(p)).expect("surface has points");
    rows.push(CheckReport::exact(
        "counting.beauville_smooth_point_rank",
        CITE_BEAUVILLE,
        Provenance::Derived,
        2,
        rank_at(&smooth),
    ));
    rows
}
