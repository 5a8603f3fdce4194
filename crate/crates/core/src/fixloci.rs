//! Fixed loci of the elements of K on the octic model, node orbits and the
//! pairwise joint fixed loci.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::counting::{normalize, x_singular_points, NodeInventory};
use crate::field::{ExtensionField, Field, FieldError, FiniteField, PrimeField, RationalField, SquareTable};
use crate::linalg::{kernel, Subspace};
use crate::poly::{rat, MultiPoly};
use crate::report::{CheckReport, Provenance, Status};
use crate::varieties::{group_k, x_vgn, SignVector, QUADRIC_SIGNS};

#[derive(Debug, Error)]
pub enum FixError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0} is not 1 mod 8")]
    NotOneModEight(u32),
    #[error("the identity has no fixed-locus classification")]
    Identity,
    #[error("inconclusive growth for {g}: {n1} points over F_p, {n2} over F_p^2")]
    Inconclusive { g: SignVector, n1: u64, n2: u64 },
    #[error("joint fixed locus of {g} and {h} has {count} points")]
    BadPairCount { g: SignVector, h: SignVector, count: u64 },
    #[error("no binomial decomposition found for {0}")]
    NoDecomposition(SignVector),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedKind {
    Free,
    Nodes(u64),
    Curves(usize),
}

/// `a^2 = ratio * b^2` with ratio = ±1 on the curve-type eigenspace; a
/// component picks a = sign * sqrt(ratio) * b.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binomial {
    pub a: usize,
    pub b: usize,
    pub ratio: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveComponent {
    pub signs: [i8; 2],
    /// Two independent quadrics cutting the component in the P^3 of the
    /// remaining coordinates.
    pub quadrics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveDecomposition {
    pub support: Vec<usize>,
    pub binomials: [Binomial; 2],
    pub components: Vec<CurveComponent>,
}

impl CurveDecomposition {
    /// Membership over F_p; needs sqrt(-1) in F_p when a ratio is -1. The
    /// root is the one stored in the square-root table, so component labels
    /// are consistent within one prime.
    pub fn component_contains(&self, field: &PrimeField, i: usize, pt: &[u32]) -> bool {
        let c = &self.components[i];
        self.binomials.iter().zip(c.signs).all(|(bn, s)| {
            let r = if bn.ratio > 0 { 1 } else { field.sqrt(field.neg(&1)).expect("p = 1 mod 4") };
            let r = if s > 0 { r } else { field.neg(&r) };
            pt[bn.a] == field.mul(&r, &pt[bn.b])
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedLocusReport {
    pub g: SignVector,
    pub kind: FixedKind,
    pub count_p: u64,
    pub count_p2: u64,
    /// Node witnesses over F_p for `Nodes`.
    pub nodes: Vec<Vec<u32>>,
    pub curves: Option<CurveDecomposition>,
}

/// Coordinate supports of the two eigenspaces as bit masks.
pub fn eigen_masks(g: &SignVector) -> [u8; 2] {
    let plus = (0..8).filter(|&i| g.0[i] > 0).fold(0u8, |m, i| m | 1 << i);
    [plus, !plus]
}

fn square_sum_rows<F: Field>(field: &F, mask: u8) -> Vec<Vec<F::Elem>> {
    let mut rows = Vec::new();
    for i in 0..4 {
        if mask >> (4 + i) & 1 == 0 {
            rows.push(QUADRIC_SIGNS[i].iter().map(|&c| field.from_int(c)).collect());
        }
    }
    for j in 0..4 {
        if mask >> j & 1 == 0 {
            let mut r = vec![field.zero(); 4];
            r[j] = field.one();
            rows.push(r);
        }
    }
    rows
}

fn q_values<F: Field>(field: &F, s: &[F::Elem]) -> [F::Elem; 4] {
    std::array::from_fn(|i| {
        (0..4).fold(field.zero(), |acc, j| if QUADRIC_SIGNS[i][j] > 0 { field.add(&acc, &s[j]) } else { field.sub(&acc, &s[j]) })
    })
}

/// All s = (X_j^2) compatible with the vanishing pattern: the span of the
/// kernel of the linear constraints, enumerated in full.
fn square_vectors<F: FiniteField>(field: &F, mask: u8) -> Vec<Vec<F::Elem>> {
    let basis = kernel(field, &square_sum_rows(field, mask), 4);
    let q = field.order();
    let d = basis.len() as u32;
    (0..q.pow(d))
        .map(|mut idx| {
            let mut s = vec![field.zero(); 4];
            for v in &basis {
                let c = field.element((idx % q) as usize);
                idx /= q;
                for j in 0..4 {
                    s[j] = field.add(&s[j], &field.mul(&c, &v[j]));
                }
            }
            s
        })
        .collect()
}

/// Affine cone count of the octic model inside the coordinate subspace
/// `mask` (bit i set: coordinate i may be nonzero).
pub fn restricted_cone_count<F: FiniteField>(field: &F, sq: &SquareTable<F>, mask: u8) -> u64 {
    square_vectors(field, mask)
        .par_iter()
        .map(|s| {
            let mut w = 1u64;
            for j in 0..4 {
                if mask >> j & 1 == 1 {
                    w *= (1 + sq.chi(field, &s[j]) as i64) as u64;
                }
            }
            if w == 0 {
                return 0;
            }
            let q = q_values(field, s);
            for i in 0..4 {
                if mask >> (4 + i) & 1 == 1 {
                    w *= (1 + sq.chi(field, &q[i]) as i64) as u64;
                }
            }
            w
        })
        .sum()
}

pub fn restricted_projective_count<F: FiniteField>(field: &F, sq: &SquareTable<F>, mask: u8) -> u64 {
    (restricted_cone_count(field, sq, mask) - 1) / (field.order() - 1)
}

/// Normalised projective points of the octic model inside `mask`.
pub fn restricted_points<F: FiniteField>(field: &F, sq: &SquareTable<F>, mask: u8) -> Vec<Vec<F::Elem>> {
    let mut out = BTreeSet::new();
    let mut ordered = Vec::new();
    for s in square_vectors(field, mask) {
        let q = q_values(field, &s);
        let mut choices: Vec<Vec<F::Elem>> = Vec::with_capacity(8);
        for j in 0..4 {
            choices.push(if mask >> j & 1 == 1 { sq.roots(field, &s[j]) } else { vec![field.zero()] });
        }
        for i in 0..4 {
            choices.push(if mask >> (4 + i) & 1 == 1 { sq.roots(field, &q[i]) } else { vec![field.zero()] });
        }
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        let mut idx = [0usize; 8];
        loop {
            let pt: Vec<F::Elem> = (0..8).map(|k| choices[k][idx[k]].clone()).collect();
            if let Some(n) = normalize(field, &pt) {
                if n == pt {
                    let key: Vec<usize> = n.iter().map(|e| field.index_of(e)).collect();
                    if out.insert(key) {
                        ordered.push(n);
                    }
                }
            }
            let mut k = 0;
            while k < 8 {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == 8 {
                break;
            }
        }
    }
    ordered
}

pub fn act<F: Field>(field: &F, g: &SignVector, pt: &[F::Elem]) -> Vec<F::Elem> {
    pt.iter().zip(g.0).map(|(c, e)| if e > 0 { c.clone() } else { field.neg(c) }).collect()
}

/// Projectively fixed: g.x = ±x.
pub fn is_fixed<F: Field>(field: &F, g: &SignVector, pt: &[F::Elem]) -> bool {
    let gx = act(field, g, pt);
    gx == pt || gx.iter().zip(pt).all(|(a, b)| *a == field.neg(b))
}

/// Split the eigenspace with six free coordinates into components by
/// locating the two relations a^2 = b^2 in the span of the restricted
/// quadrics.
pub fn curve_components(g: &SignVector) -> Result<CurveDecomposition, FixError> {
    let masks = eigen_masks(g);
    let Some(&mask) = masks.iter().find(|m| m.count_ones() == 6) else {
        return Err(FixError::NoDecomposition(*g));
    };
    let support: Vec<usize> = (0..8).filter(|&i| mask >> i & 1 == 1).collect();
    let x = x_vgn();
    let qf = RationalField;
    // Each equation is diagonal in squares; record coefficient vectors on
    // the squares of the supported coordinates.
    let vectors: Vec<Vec<num_rational::BigRational>> = x
        .equations
        .iter()
        .map(|e| {
            support
                .iter()
                .map(|&c| {
                    let mut m = vec![0u16; 8];
                    m[c] = 2;
                    e.coeff(&m)
                })
                .collect()
        })
        .collect();
    let span = Subspace::span(&qf, support.len(), vectors).expect("rectangular");
    let mut binomials = Vec::new();
    for i in 0..support.len() {
        for j in i + 1..support.len() {
            for ratio in [1, -1] {
                let mut v = vec![rat(0); support.len()];
                v[i] = rat(-ratio);
                v[j] = rat(1);
                if span.contains(&v) {
                    binomials.push(Binomial { a: support[j], b: support[i], ratio });
                }
            }
        }
    }
    let used: BTreeSet<usize> = binomials.iter().flat_map(|b| [b.a, b.b]).collect();
    if binomials.len() != 2 || used.len() != 4 || span.dim() != 4 {
        return Err(FixError::NoDecomposition(*g));
    }
    let binomials: [Binomial; 2] = [binomials[0].clone(), binomials[1].clone()];
    // On a component a^2 = ratio * b^2, so every component is cut by the
    // same quadrics in the remaining four coordinates; two are independent.
    let rest: Vec<usize> = support.iter().copied().filter(|c| binomials.iter().all(|b| b.a != *c)).collect();
    let rows: Vec<Vec<num_rational::BigRational>> = x
        .equations
        .iter()
        .map(|e| {
            rest.iter()
                .map(|&c| {
                    let sq = |k: usize| {
                        let mut m = vec![0u16; 8];
                        m[k] = 2;
                        e.coeff(&m)
                    };
                    binomials.iter().filter(|b| b.b == c).fold(sq(c), |acc, b| acc + sq(b.a) * rat(b.ratio))
                })
                .collect()
        })
        .collect();
    let sub = Subspace::span(&qf, rest.len(), rows).expect("rectangular");
    if sub.dim() != 2 {
        return Err(FixError::NoDecomposition(*g));
    }
    let quadrics: Vec<String> = sub
        .basis()
        .iter()
        .map(|row| rest.iter().zip(row).fold(MultiPoly::zero(&x.vars), |acc, (&c, k)| &acc + &MultiPoly::var(&x.vars, c).pow(2).scale(k)).to_string())
        .collect();
    let components = [[1i8, 1], [1, -1], [-1, 1], [-1, -1]].into_iter().map(|signs| CurveComponent { signs, quadrics: quadrics.clone() }).collect();
    Ok(CurveDecomposition { support, binomials, components })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairEntry {
    pub g: SignVector,
    pub h: SignVector,
    pub count_p: u64,
    pub count_p2: u64,
    /// Joint points over F_p that are nodes.
    pub nodes: u64,
    pub all_nodes: bool,
}

/// Everything computed for one prime p = 1 mod 8.
pub struct FixContext {
    pub p: u32,
    fp: PrimeField,
    fq: ExtensionField,
    sq_p: SquareTable<PrimeField>,
    sq_q: SquareTable<ExtensionField>,
    pub nodes: NodeInventory<u32>,
}

impl FixContext {
    pub fn new(p: u32) -> Result<Self, FixError> {
        if p % 8 != 1 {
            return Err(FixError::NotOneModEight(p));
        }
        let fp = PrimeField::new(p as u64)?;
        let fq = ExtensionField::new(p as u64, 2)?;
        let nodes = x_singular_points(&fp);
        Ok(Self { p, sq_p: SquareTable::new(&fp), sq_q: SquareTable::new(&fq), fp, fq, nodes })
    }

    pub fn field(&self) -> &PrimeField {
        &self.fp
    }

    fn counts(&self, masks: &[u8]) -> (u64, u64) {
        let n1 = masks.iter().map(|&m| restricted_projective_count(&self.fp, &self.sq_p, m)).sum();
        let n2 = masks.iter().map(|&m| restricted_projective_count(&self.fq, &self.sq_q, m)).sum();
        (n1, n2)
    }

    pub fn fixed_points(&self, g: &SignVector) -> Vec<Vec<u32>> {
        eigen_masks(g).iter().flat_map(|&m| restricted_points(&self.fp, &self.sq_p, m)).collect()
    }

    pub fn classify(&self, g: &SignVector) -> Result<FixedLocusReport, FixError> {
        if g.is_identity() {
            return Err(FixError::Identity);
        }
        let (n1, n2) = self.counts(&eigen_masks(g));
        let p = self.p as u64;
        let mut report = FixedLocusReport { g: *g, kind: FixedKind::Free, count_p: n1, count_p2: n2, nodes: Vec::new(), curves: None };
        if n1 == n2 && n1 <= 64 {
            if n1 > 0 {
                report.kind = FixedKind::Nodes(n1);
                report.nodes = self.fixed_points(g);
            }
        } else if n2 * 4 > p * n1 {
            let dec = curve_components(g)?;
            report.kind = FixedKind::Curves(dec.components.len());
            report.curves = Some(dec);
        } else {
            return Err(FixError::Inconclusive { g: *g, n1, n2 });
        }
        Ok(report)
    }

    pub fn classify_all(&self) -> Result<Vec<FixedLocusReport>, FixError> {
        group_k().iter().filter(|g| !g.is_identity()).map(|g| self.classify(g)).collect()
    }

    /// Orbits of the node set under K, as sorted index lists.
    pub fn node_orbits(&self) -> Vec<Vec<usize>> {
        let f = &self.fp;
        let mut seen = vec![false; self.nodes.len()];
        let mut orbits = Vec::new();
        for start in 0..self.nodes.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for k in group_k() {
                let image = normalize(f, &act(f, &k, &self.nodes.points[start])).expect("nonzero");
                let idx = self.nodes.points.iter().position(|q| *q == image).expect("K preserves the node set");
                orbit.insert(idx);
            }
            for &i in &orbit {
                seen[i] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    /// Ordered pairs of distinct non-identity elements with nonempty fixed
    /// loci. Points over F_p come from filtering Fix(g); the F_p^2 count
    /// intersects coordinate subspaces.
    pub fn pair_table(&self, reports: &[FixedLocusReport]) -> Result<Vec<PairEntry>, FixError> {
        let pts: BTreeMap<SignVector, Vec<Vec<u32>>> =
            reports.iter().filter(|r| r.kind != FixedKind::Free).map(|r| (r.g, self.fixed_points(&r.g))).collect();
        let pairs: Vec<(SignVector, SignVector)> =
            reports.iter().flat_map(|a| reports.iter().filter(move |b| b.g != a.g).map(move |b| (a.g, b.g))).collect();
        pairs
            .par_iter()
            .map(|&(g, h)| {
                let joint: Vec<&Vec<u32>> = pts.get(&g).map(|v| v.iter().filter(|x| is_fixed(&self.fp, &h, x)).collect()).unwrap_or_default();
                let count_p = joint.len() as u64;
                let masks: Vec<u8> = eigen_masks(&g).iter().flat_map(|a| eigen_masks(&h).map(|b| a & b)).collect();
                let count_p2 = masks.iter().map(|&m| restricted_projective_count(&self.fq, &self.sq_q, m)).sum();
                if count_p != count_p2 || ![0, 8, 16].contains(&count_p) {
                    return Err(FixError::BadPairCount { g, h, count: count_p.max(count_p2) });
                }
                let nodes = joint.iter().filter(|x| self.nodes.contains(x)).count() as u64;
                Ok(PairEntry { g, h, count_p, count_p2, nodes, all_nodes: nodes == count_p })
            })
            .collect()
    }

    /// Orbits of the 48 curve components under K, each component identified
    /// with its F_p point set.
    pub fn curve_orbits(&self, reports: &[FixedLocusReport]) -> Vec<usize> {
        let f = &self.fp;
        let mut comps: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        for r in reports {
            let Some(dec) = &r.curves else { continue };
            let pts = self.fixed_points(&r.g);
            for i in 0..dec.components.len() {
                comps.push(pts.iter().filter(|x| dec.component_contains(f, i, x)).cloned().collect());
            }
        }
        let mut seen = vec![false; comps.len()];
        let mut sizes = Vec::new();
        for i in 0..comps.len() {
            if seen[i] {
                continue;
            }
            let mut size = 0;
            for k in group_k() {
                let image: BTreeSet<Vec<u32>> = comps[i].iter().map(|x| normalize(f, &act(f, &k, x)).expect("nonzero")).collect();
                if let Some(j) = comps.iter().position(|c| *c == image) {
                    if !seen[j] {
                        seen[j] = true;
                        size += 1;
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }
}

fn kind_name(k: &FixedKind) -> &'static str {
    match k {
        FixedKind::Free => "free",
        FixedKind::Nodes(_) => "nodes",
        FixedKind::Curves(_) => "curves",
    }
}

const CITE_CLASSIFY: &str = "6 elements fix 16 nodes each; 12 elements fix 4 elliptic curves each";
const CITE_PAIRS: &str = "joint fixed loci: 24 curve-node pairs with 8 nodes; curve-curve pairs 24 with 8 nodes, 48 with 16 non-nodes";

/// Computed data plus report rows, consumed by the Euler ledgers.
#[derive(Debug, Clone)]
pub struct FixSummary {
    pub rows: Vec<CheckReport>,
    pub reports: Vec<FixedLocusReport>,
    pub pairs: Vec<PairEntry>,
    pub node_orbits: usize,
    pub curve_orbits: usize,
}

pub fn run_checks(primes: &[u32]) -> Result<Vec<CheckReport>, FixError> {
    analyze(primes).map(|s| s.rows)
}

/// The full fixed-locus suite at the primes `primes` (first one is primary).
pub fn analyze(primes: &[u32]) -> Result<FixSummary, FixError> {
    let mut rows = Vec::new();
    let mut signatures = Vec::new();
    let mut primary = None;
    for &p in primes {
        let ctx = FixContext::new(p)?;
        let reports = ctx.classify_all()?;
        let sig: Vec<(SignVector, FixedKind)> = reports.iter().map(|r| (r.g, r.kind)).collect();
        signatures.push(sig);
        if primary.is_none() {
            primary = Some((ctx, reports));
        }
    }
    let (ctx, reports) = primary.expect("at least one prime");
    let tally = |pred: &dyn Fn(&FixedKind) -> bool| reports.iter().filter(|r| pred(&r.kind)).count();
    let nodes16 = tally(&|k| *k == FixedKind::Nodes(16));
    let curves4 = tally(&|k| *k == FixedKind::Curves(4));
    let free = tally(&|k| *k == FixedKind::Free);
    rows.push(CheckReport::exact(
        "fixloci.classification",
        CITE_CLASSIFY,
        Provenance::Published,
        json!({"nodes16": 6, "curves4": 12, "free": 13}),
        json!({"nodes16": nodes16, "curves4": curves4, "free": free}),
    ));
    rows.push(CheckReport::boolean(
        "fixloci.classification_stable",
        "classification agrees across primes 1 mod 8",
        Provenance::Derived,
        signatures.windows(2).all(|w| w[0] == w[1]),
        json!({"primes": primes}),
    ));

    let node_sets: Vec<&Vec<Vec<u32>>> = reports.iter().filter(|r| matches!(r.kind, FixedKind::Nodes(_))).map(|r| &r.nodes).collect();
    let witnesses_ok = node_sets.iter().all(|s| s.iter().all(|x| ctx.nodes.rank_of(x) == Some(3)));
    rows.push(CheckReport::boolean(
        "fixloci.node_witnesses_in_inventory",
        "isolated fixed points are nodes",
        Provenance::Derived,
        witnesses_ok,
        json!({"inventory": ctx.nodes.len()}),
    ));
    let union: BTreeSet<&Vec<u32>> = node_sets.iter().flat_map(|s| s.iter()).collect();
    let total: usize = node_sets.iter().map(|s| s.len()).sum();
    rows.push(CheckReport::boolean(
        "fixloci.node_sets_partition",
        "each node occurs as fixed point of K",
        Provenance::Derived,
        total == 96 && union.len() == 96 && ctx.nodes.len() == 96,
        json!({"sum_of_sizes": total, "union": union.len()}),
    ));

    let orbits = ctx.node_orbits();
    let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    rows.push(CheckReport::exact("fixloci.node_orbits", "exactly 12 orbits under K", Provenance::Published, 12, orbits.len()));
    rows.push(CheckReport::boolean(
        "fixloci.node_orbit_sizes",
        "exactly 12 orbits under K",
        Provenance::Derived,
        sizes.iter().all(|&s| s == 8) && sizes.iter().sum::<usize>() == 96,
        &sizes,
    ));

    let table = ctx.pair_table(&reports)?;
    let kind_of: BTreeMap<SignVector, &FixedLocusReport> = reports.iter().map(|r| (r.g, r)).collect();
    let class = |e: &PairEntry| (kind_name(&kind_of[&e.g].kind), kind_name(&kind_of[&e.h].kind));
    let select = |a: &str, b: &str| table.iter().filter(move |e| class(e) == (a, b)).collect::<Vec<_>>();
    let cn = select("curves", "nodes");
    let cn_nonempty: Vec<&PairEntry> = cn.iter().copied().filter(|e| e.count_p > 0).collect();
    let both: Vec<&PairEntry> = cn.iter().copied().chain(select("nodes", "curves")).collect();
    rows.push(CheckReport::exact(
        "fixloci.pairs_curve_node",
        CITE_PAIRS,
        Provenance::Published,
        json!({"nonempty": 48, "eight_all_nodes": 48}),
        json!({
            "nonempty": both.iter().filter(|e| e.count_p > 0).count(),
            "eight_all_nodes": both.iter().filter(|e| e.count_p == 8 && e.all_nodes).count(),
        }),
    ));
    let cc = select("curves", "curves");
    rows.push(CheckReport::exact(
        "fixloci.pairs_curve_curve",
        CITE_PAIRS,
        Provenance::Published,
        json!({"sixteen_no_nodes": 48, "eight_all_nodes": 24}),
        json!({
            "sixteen_no_nodes": cc.iter().filter(|e| e.count_p == 16 && e.nodes == 0).count(),
            "eight_all_nodes": cc.iter().filter(|e| e.count_p == 8 && e.all_nodes).count(),
        }),
    ));
    let nn = select("nodes", "nodes");
    rows.push(CheckReport::boolean(
        "fixloci.pairs_node_node_empty",
        "fixed node sets partition the nodes",
        Provenance::Derived,
        nn.iter().all(|e| e.count_p == 0),
        nn.len(),
    ));
    let lookup: BTreeMap<(SignVector, SignVector), &PairEntry> = table.iter().map(|e| ((e.g, e.h), e)).collect();
    rows.push(CheckReport::boolean(
        "fixloci.pair_symmetry",
        CITE_PAIRS,
        Provenance::Trivial,
        table.iter().all(|e| lookup[&(e.h, e.g)].count_p == e.count_p && lookup[&(e.h, e.g)].count_p2 == e.count_p2),
        table.len(),
    ));

    // Incidence: each component holds 4 of the 8 shared nodes, and two
    // components pass through each of them.
    let f = ctx.field();
    let mut incidence_ok = true;
    for e in cn_nonempty.iter().chain(cc.iter().filter(|e| e.count_p == 8)).copied() {
        let dec = kind_of[&e.g].curves.as_ref().expect("curve type");
        let shared: Vec<Vec<u32>> = ctx.fixed_points(&e.g).into_iter().filter(|x| is_fixed(f, &e.h, x)).collect();
        let per_comp: Vec<usize> = (0..4).map(|i| shared.iter().filter(|x| dec.component_contains(f, i, x)).count()).collect();
        let per_node: Vec<usize> = shared.iter().map(|x| (0..4).filter(|&i| dec.component_contains(f, i, x)).count()).collect();
        incidence_ok &= per_comp.iter().all(|&c| c == 4) && per_node.iter().all(|&c| c == 2);
    }
    rows.push(CheckReport::boolean(
        "fixloci.component_node_incidence",
        "each elliptic component contains 4 of the 8 shared nodes",
        Provenance::Published,
        incidence_ok,
        json!({"pairs_checked": cn_nonempty.len() + cc.iter().filter(|e| e.count_p == 8).count()}),
    ));

    // gh for the 8-node curve-curve pairs is a node-fixer fixing the nodes.
    let mut gh_ok = true;
    for e in cc.iter().filter(|e| e.count_p == 8) {
        let gh = e.g.compose(&e.h).projectivized();
        let r = kind_of.get(&gh).copied();
        let shared: Vec<Vec<u32>> = ctx.fixed_points(&e.g).into_iter().filter(|x| is_fixed(f, &e.h, x)).collect();
        gh_ok &= matches!(r.map(|r| r.kind), Some(FixedKind::Nodes(_))) && shared.iter().all(|x| r.expect("present").nodes.contains(x));
    }
    rows.push(CheckReport::boolean(
        "fixloci.gh_node_fixer",
        "gh has each shared node as isolated fixed point",
        Provenance::Published,
        gh_ok,
        cc.iter().filter(|e| e.count_p == 8).count(),
    ));

    let curve_orbits = ctx.curve_orbits(&reports);
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for s in &curve_orbits {
        *hist.entry(*s).or_default() += 1;
    }
    let mut row = CheckReport::boolean(
        "fixloci.curve_component_orbits",
        "orbit decomposition of the 48 fixed curves under K (reported)",
        Provenance::Derived,
        curve_orbits.iter().sum::<usize>() == 48,
        json!({"orbits": curve_orbits.len(), "size_histogram": hist}),
    );
    row.expected = json!({"components": 48});
    rows.push(row);

    rows.push(CheckReport::exact(
        "fixloci.downstairs_components",
        "number of components of the fixed locus downstairs is 36",
        Provenance::Published,
        36,
        orbits.len() + curve_orbits.len(),
    ));
    debug_assert!(rows.iter().all(|r| r.status != Status::Skipped));
    Ok(FixSummary { node_orbits: orbits.len(), curve_orbits: curve_orbits.len(), rows, reports, pairs: table })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_are_complementary() {
        let g = SignVector([1, 1, -1, -1, 1, 1, 1, 1]);
        let [a, b] = eigen_masks(&g);
        assert_eq!(a & b, 0);
        assert_eq!(a | b, 0xff);
    }

    #[test]
    fn decomposition_for_x2_x3_plane() {
        let g = SignVector([1, 1, -1, -1, 1, 1, 1, 1]);
        let dec = curve_components(&g).unwrap();
        assert_eq!(dec.support, vec![0, 1, 4, 5, 6, 7]);
        assert_eq!(dec.binomials, [Binomial { a: 6, b: 4, ratio: 1 }, Binomial { a: 7, b: 5, ratio: 1 }]);
        assert_eq!(dec.components.len(), 4);
        assert!(dec.components.iter().all(|c| c.quadrics.len() == 2));
    }

    #[test]
    fn restricted_counts_agree_with_listing() {
        let f = PrimeField::new(17).unwrap();
        let sq = SquareTable::new(&f);
        for mask in [0xffu8, 0b1111_0011, 0b0011_1111, 0b1100_1111] {
            assert_eq!(restricted_projective_count(&f, &sq, mask), restricted_points(&f, &sq, mask).len() as u64, "{mask:b}");
        }
    }

    #[test]
    fn rejects_bad_prime_and_identity() {
        assert!(matches!(FixContext::new(13), Err(FixError::NotOneModEight(13))));
        let ctx = FixContext::new(17).unwrap();
        assert!(matches!(ctx.classify(&SignVector::identity()), Err(FixError::Identity)));
    }

    #[test]
    fn suite_passes_at_17() {
        let rows = run_checks(&[17]).unwrap();
        for r in &rows {
            assert!(r.is_pass(), "{r:?}");
        }
    }
}

#[cfg(test)]
mod two_prime {
    #[test]
    fn stable_across_17_and_41() {
        let rows = super::run_checks(&[17, 41]).unwrap();
        let stable = rows.iter().find(|r| r.check == "fixloci.classification_stable").unwrap();
        assert!(stable.is_pass());
        let orbits = rows.iter().find(|r| r.check == "fixloci.curve_component_orbits").unwrap();
        assert_eq!(orbits.computed["orbits"], 24);
    }
}
