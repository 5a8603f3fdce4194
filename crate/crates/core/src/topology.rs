//! Euler characteristic ledgers and the Hodge/Picard assembly.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::arrangement::{build_incidence, plane_blowup_counts, verify_disjoint_sixteen};
use crate::fixloci::{FixSummary, FixedKind, PairEntry};
use crate::report::{CheckReport, Provenance};

/// e of the crepant resolution of the octic model; rests on external
/// results and enters as a published constant.
pub const E_X_TILDE: i64 = 64;
/// Picard rank of the regular locus, likewise an external input.
pub const PICARD_REGULAR: i64 = 4;
pub const K_ORDER: i64 = 32;

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("stringy sum {0} is not divisible by 32")]
    NonIntegral(i64),
    #[error("no lifting rule for pair type {0}")]
    UnknownPairType(String),
    #[error("unknown Euler route {0}")]
    UnknownRoute(String),
    #[error("arrangement input unavailable: {0}")]
    Arrangement(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerRow {
    pub source: String,
    pub citation: String,
    pub multiplicity: i64,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerLedger {
    pub route: String,
    pub rows: Vec<LedgerRow>,
    /// For the stringy route, Σ over K×K before dividing by |K|.
    pub pre_division: Option<i64>,
    /// Named running totals.
    pub intermediates: BTreeMap<String, i64>,
    pub total: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Center {
    Point,
    /// A smooth curve with the given Euler number.
    Curve(i64),
}

/// e after blowing up points (+2 each: P^2 replaces a point) and curves
/// (+e(C): a P^1-bundle replaces C).
pub fn blowup_euler(base: i64, centers: &[Center]) -> i64 {
    centers.iter().fold(base, |e, c| match c {
        Center::Point => e + 2,
        Center::Curve(ec) => e + ec,
    })
}

/// e of a bi-double cover of P branched over D1 + D2.
pub fn bidouble_euler(e_p: i64, e_d1: i64, e_d2: i64, e_d12: i64) -> i64 {
    4 * e_p - 2 * e_d1 - 2 * e_d2 + e_d12
}

/// The same value split over the strata with 4, 2, 2 and 1 preimages.
pub fn bidouble_stratified(e_p: i64, e_d1: i64, e_d2: i64, e_d12: i64) -> i64 {
    4 * (e_p - e_d1 - e_d2 + e_d12) + 2 * (e_d1 - e_d12) + 2 * (e_d2 - e_d12) + e_d12
}

/// How downstairs fixed-locus data lift to the resolution.
#[derive(Debug, Clone, Serialize)]
pub struct LiftingRule {
    pub pair_type: &'static str,
    pub euler: i64,
    pub citation: &'static str,
}

pub fn lifting_rules() -> Vec<LiftingRule> {
    vec![
        LiftingRule {
            pair_type: "single:nodes",
            euler: 32,
            citation: "fixed set of an involution is an exceptional line over each of its 16 nodes",
        },
        LiftingRule { pair_type: "single:curves", euler: 0, citation: "fixed set of an involution is a union of elliptic curves" },
        LiftingRule { pair_type: "single:free", euler: 0, citation: "no fixed points" },
        LiftingRule {
            pair_type: "pair:curves-nodes:8-nodes",
            euler: 16,
            citation: "joint fixed locus on the resolution consists of 16 points",
        },
        LiftingRule {
            pair_type: "pair:curves-curves:16-non-nodes",
            euler: 16,
            citation: "16 intersection points, none a node",
        },
        LiftingRule {
            pair_type: "pair:curves-curves:8-nodes",
            euler: 16,
            citation: "g has two fixed points on the exceptional line over each of the 8 nodes, h the same ones",
        },
        LiftingRule { pair_type: "pair:empty", euler: 0, citation: "disjoint fixed loci" },
    ]
}

fn kind_label(k: &FixedKind) -> &'static str {
    match k {
        FixedKind::Free => "free",
        FixedKind::Nodes(_) => "nodes",
        FixedKind::Curves(_) => "curves",
    }
}

/// Classify a pair for the lifting rules; symmetric in (g, h).
pub fn pair_type(gk: &FixedKind, hk: &FixedKind, e: &PairEntry) -> String {
    if e.count_p == 0 {
        return "pair:empty".into();
    }
    let mut kinds = [kind_label(gk), kind_label(hk)];
    kinds.sort();
    let pts = if e.all_nodes {
        format!("{}-nodes", e.count_p)
    } else if e.nodes == 0 {
        format!("{}-non-nodes", e.count_p)
    } else {
        format!("{}-mixed", e.count_p)
    };
    format!("pair:{}-{}:{}", kinds[0], kinds[1], pts)
}

/// Downstairs data the routes need.
#[derive(Debug, Clone)]
pub struct TopologyInputs {
    pub kinds: BTreeMap<crate::varieties::SignVector, FixedKind>,
    pub pairs: Vec<PairEntry>,
    pub fixed_components: usize,
    pub cover: CoverInputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverInputs {
    pub points: usize,
    pub lines: usize,
    pub e_d1: i64,
    pub e_d2: i64,
    pub e_d12: i64,
}

impl CoverInputs {
    pub fn from_arrangement() -> Result<Self, TopologyError> {
        let m = build_incidence();
        let canonical: Vec<usize> = (0..6).collect();
        let tally = |k| -> Result<i64, TopologyError> {
            let (t, _) = plane_blowup_counts(&m, k, &canonical).map_err(|e| TopologyError::Arrangement(e.to_string()))?;
            Ok(4 * 3 + t.values().sum::<usize>() as i64)
        };
        verify_disjoint_sixteen(&m).map_err(|e| TopologyError::Arrangement(e.to_string()))?;
        Ok(Self {
            points: m.fourfold.len(),
            lines: m.double_lines.iter().map(Vec::len).sum(),
            e_d1: tally(0)?,
            e_d2: tally(1)?,
            e_d12: 2 * m.c_lines.len() as i64,
        })
    }
}

impl TopologyInputs {
    pub fn new(fix: &FixSummary) -> Result<Self, TopologyError> {
        Ok(Self {
            kinds: fix.reports.iter().map(|r| (r.g, r.kind)).collect(),
            pairs: fix.pairs.clone(),
            fixed_components: fix.node_orbits + fix.curve_orbits,
            cover: CoverInputs::from_arrangement()?,
        })
    }
}

pub trait EulerRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn ledger(&self, inputs: &TopologyInputs) -> Result<EulerLedger, TopologyError>;
}

/// e = (1/|K|) Σ_{(g,h)} e(X~^<g,h>).
pub struct Stringy;
/// e of the bi-double cover of the blown-up P^3.
pub struct Cover;

impl EulerRoute for Stringy {
    fn name(&self) -> &'static str {
        "stringy"
    }

    fn ledger(&self, inp: &TopologyInputs) -> Result<EulerLedger, TopologyError> {
        let rules: BTreeMap<&str, LiftingRule> = lifting_rules().into_iter().map(|r| (r.pair_type, r)).collect();
        let mut rows = vec![LedgerRow {
            source: "(id, id): e of the resolution".into(),
            citation: "Euler number of the resolution is 64".into(),
            multiplicity: 1,
            value: E_X_TILDE,
        }];
        let mut singles: BTreeMap<String, i64> = BTreeMap::new();
        for k in inp.kinds.values() {
            *singles.entry(format!("single:{}", kind_label(k))).or_default() += 1;
        }
        for (t, n) in &singles {
            let r = rules.get(t.as_str()).ok_or_else(|| TopologyError::UnknownPairType(t.clone()))?;
            rows.push(LedgerRow {
                source: format!("(g, id), (id, g), (g, g) with {t}"),
                citation: r.citation.into(),
                multiplicity: 3 * n,
                value: r.euler,
            });
        }
        let after_singles: i64 = rows.iter().map(|r| r.multiplicity * r.value).sum();
        let mut pair_counts: BTreeMap<String, i64> = BTreeMap::new();
        for e in &inp.pairs {
            let t = pair_type(&inp.kinds[&e.g], &inp.kinds[&e.h], e);
            *pair_counts.entry(t).or_default() += 1;
        }
        let mut contributions: BTreeMap<String, i64> = BTreeMap::new();
        for (t, n) in &pair_counts {
            let r = rules.get(t.as_str()).ok_or_else(|| TopologyError::UnknownPairType(t.clone()))?;
            rows.push(LedgerRow { source: format!("ordered (g, h), g != h, {t}"), citation: r.citation.into(), multiplicity: *n, value: r.euler });
            contributions.insert(t.clone(), n * r.euler);
        }
        let pre: i64 = rows.iter().map(|r| r.multiplicity * r.value).sum();
        if pre % K_ORDER != 0 || after_singles % K_ORDER != 0 {
            return Err(TopologyError::NonIntegral(pre));
        }
        let c = |t: &str| contributions.get(t).copied().unwrap_or(0);
        let cn = c("pair:curves-nodes:8-nodes");
        let cc = c("pair:curves-curves:16-non-nodes") + c("pair:curves-curves:8-nodes");
        let mut intermediates = BTreeMap::new();
        intermediates.insert("after_single_terms".into(), after_singles / K_ORDER);
        intermediates.insert("curve_node_contribution".into(), cn / K_ORDER);
        intermediates.insert("after_curve_node".into(), (after_singles + cn) / K_ORDER);
        intermediates.insert("curve_curve_16".into(), c("pair:curves-curves:16-non-nodes") / K_ORDER);
        intermediates.insert("curve_curve_8".into(), c("pair:curves-curves:8-nodes") / K_ORDER);
        intermediates.insert("curve_curve_contribution".into(), cc / K_ORDER);
        Ok(EulerLedger { route: self.name().into(), rows, pre_division: Some(pre), intermediates, total: pre / K_ORDER })
    }
}

impl EulerRoute for Cover {
    fn name(&self) -> &'static str {
        "cover"
    }

    fn ledger(&self, inp: &TopologyInputs) -> Result<EulerLedger, TopologyError> {
        let c = inp.cover;
        let mut centers = vec![Center::Point; c.points];
        centers.extend(std::iter::repeat(Center::Curve(2)).take(c.lines));
        let e_p = blowup_euler(4, &centers);
        let total = bidouble_euler(e_p, c.e_d1, c.e_d2, c.e_d12);
        let rows = vec![
            LedgerRow { source: "e(P*)".into(), citation: "P^3 blown up at 12 points and 12 lines".into(), multiplicity: 4, value: e_p },
            LedgerRow { source: "e(D1*)".into(), citation: "four planes blown up 28 times".into(), multiplicity: -2, value: c.e_d1 },
            LedgerRow { source: "e(D2*)".into(), citation: "four planes blown up 28 times".into(), multiplicity: -2, value: c.e_d2 },
            LedgerRow { source: "e(D1* ∩ D2*)".into(), citation: "disjoint union of 16 lines".into(), multiplicity: 1, value: c.e_d12 },
        ];
        let mut intermediates = BTreeMap::new();
        intermediates.insert("e_p_star".into(), e_p);
        intermediates.insert("stratified".into(), bidouble_stratified(e_p, c.e_d1, c.e_d2, c.e_d12));
        Ok(EulerLedger { route: self.name().into(), rows, pre_division: None, intermediates, total })
    }
}

pub struct RouteRegistry {
    routes: Vec<Box<dyn EulerRoute>>,
}

impl Default for RouteRegistry {
    fn default() -> Self {
        Self { routes: vec![Box::new(Stringy), Box::new(Cover)] }
    }
}

impl RouteRegistry {
    pub fn get(&self, name: &str) -> Result<&dyn EulerRoute, TopologyError> {
        self.routes.iter().find(|r| r.name() == name).map(|r| r.as_ref()).ok_or_else(|| TopologyError::UnknownRoute(name.into()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.routes.iter().map(|r| r.name()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HodgeAssembly {
    pub euler: i64,
    pub h11: i64,
    pub h12: i64,
    /// h12 = equisingular term + three terms taken as zero.
    pub h12_terms: [i64; 4],
    pub picard_a: Vec<(String, i64)>,
    pub picard_b: Vec<(String, i64)>,
}

/// Needs both Euler totals, the computed equisingular h1, the number of
/// fixed-locus components downstairs and the fourfold-point and line counts.
pub fn hodge_picard_assembly(e_stringy: i64, e_cover: i64, h1_equisingular: i64, fixed_components: i64, cover: &CoverInputs) -> (HodgeAssembly, bool) {
    let h12_terms = [h1_equisingular, 0, 0, 0];
    let h12: i64 = h12_terms.iter().sum();
    let h11 = e_stringy / 2 + h12;
    let picard_a = vec![("fixed-locus components".to_string(), fixed_components), ("regular locus".to_string(), PICARD_REGULAR)];
    let picard_b = vec![
        ("hyperplane".to_string(), 1),
        ("fourfold-point covers".to_string(), cover.points as i64),
        ("split double-line covers".to_string(), 2 * cover.lines as i64),
        ("quadric components".to_string(), 3),
    ];
    let a: i64 = picard_a.iter().map(|r| r.1).sum();
    let b: i64 = picard_b.iter().map(|r| r.1).sum();
    let consistent = e_stringy == e_cover && e_stringy % 2 == 0 && a == h11 && b == h11 && e_stringy == 2 * (h11 - h12);
    (HodgeAssembly { euler: e_stringy, h11, h12, h12_terms, picard_a, picard_b }, consistent)
}

pub fn run_checks(inp: &TopologyInputs, h1_equisingular: i64) -> Result<(Vec<CheckReport>, EulerLedger, EulerLedger, HodgeAssembly), TopologyError> {
    let mut rows = Vec::new();
    rows.push(CheckReport::exact("topology.blowup_euler_empty", "no centres", Provenance::Trivial, 4, blowup_euler(4, &[])));
    rows.push(CheckReport::exact("topology.blowup_euler_elliptic", "an elliptic centre adds e(C) = 0", Provenance::Derived, 4, blowup_euler(4, &[Center::Curve(0)])));
    rows.push(CheckReport::exact("topology.bidouble_unbranched", "unramified degree 4", Provenance::Trivial, 4 * 52, bidouble_euler(52, 0, 0, 0)));

    let reg = RouteRegistry::default();
    let s = reg.get("stringy")?.ledger(inp)?;
    let c = reg.get("cover")?.ledger(inp)?;
    let e_p = c.intermediates["e_p_star"];
    rows.push(CheckReport::exact("topology.e_p_star", "e(P*) = 4 + 12*2 + 12*2 = 52", Provenance::Published, 52, e_p));
    rows.push(CheckReport::exact("topology.cover_euler", "4*52 - 2*80 + 32 = 80", Provenance::Published, 80, c.total));
    rows.push(CheckReport::exact("topology.cover_stratified", "strata with 4, 2, 2, 1 preimages", Provenance::Trivial, c.total, c.intermediates["stratified"]));
    let im = |k: &str| s.intermediates[k];
    rows.push(CheckReport::exact("topology.stringy_after_singles", "the single-element terms give 20", Provenance::Published, 20, im("after_single_terms")));
    rows.push(CheckReport::exact("topology.stringy_curve_node", "curve-node pairs contribute 24", Provenance::Published, 24, im("curve_node_contribution")));
    rows.push(CheckReport::exact("topology.stringy_running_44", "running total 44 after curve-node pairs", Provenance::Published, 44, im("after_curve_node")));
    rows.push(CheckReport::exact(
        "topology.stringy_curve_curve",
        "curve-curve pairs contribute 36 = 24 + 12",
        Provenance::Published,
        json!([36, 24, 12]),
        json!([im("curve_curve_contribution"), im("curve_curve_16"), im("curve_curve_8")]),
    ));
    rows.push(CheckReport::exact("topology.stringy_pre_division", "sum over K x K before dividing by 32", Provenance::Derived, 2560, s.pre_division.unwrap_or(0)));
    rows.push(CheckReport::exact("topology.stringy_euler", "Euler number 80", Provenance::Published, 80, s.total));
    rows.push(CheckReport::exact("topology.routes_agree", "stringy and cover routes", Provenance::Derived, s.total, c.total));
    rows.push(CheckReport::skipped(
        "topology.input_constants",
        "e of the resolution is 64; Picard rank of the regular locus is 4",
        Provenance::Published,
        json!({"e_x_tilde": E_X_TILDE, "picard_regular": PICARD_REGULAR}),
        "external inputs, used as given",
    ));

    let (h, consistent) = hodge_picard_assembly(s.total, c.total, h1_equisingular, inp.fixed_components as i64, &inp.cover);
    rows.push(CheckReport::exact("topology.hodge_numbers", "Hodge numbers h11 = 40, h12 = 0", Provenance::Published, json!({"h11": 40, "h12": 0}), json!({"h11": h.h11, "h12": h.h12})));
    rows.push(CheckReport::exact(
        "topology.picard_ledgers",
        "Picard number 40 = 36 + 4 = 1 + 12 + 24 + 3",
        Provenance::Published,
        json!([40, 40]),
        json!([h.picard_a.iter().map(|r| r.1).sum::<i64>(), h.picard_b.iter().map(|r| r.1).sum::<i64>()]),
    ));
    rows.push(CheckReport::boolean("topology.hodge_consistency", "e = 2(h11 - h12) and all totals agree", Provenance::Published, consistent, &h));
    Ok((rows, s, c, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blowup_examples() {
        let mut c = vec![Center::Point; 12];
        c.extend(vec![Center::Curve(2); 12]);
        assert_eq!(blowup_euler(4, &c), 52);
    }

    #[test]
    fn bidouble_examples() {
        assert_eq!(bidouble_euler(52, 40, 40, 32), 80);
        for (a, b, c, d) in [(52, 40, 40, 32), (7, 3, 1, 0), (-2, 5, 9, 4)] {
            assert_eq!(bidouble_euler(a, b, c, d), bidouble_stratified(a, b, c, d));
        }
    }

    #[test]
    fn unknown_route() {
        assert!(matches!(RouteRegistry::default().get("motivic"), Err(TopologyError::UnknownRoute(_))));
    }

    #[test]
    fn cover_inputs_from_arrangement() {
        let c = CoverInputs::from_arrangement().unwrap();
        assert_eq!(c, CoverInputs { points: 12, lines: 12, e_d1: 40, e_d2: 40, e_d12: 32 });
    }

    #[test]
    fn full_ledgers_at_17() {
        let fix = crate::fixloci::analyze(&[17]).unwrap();
        let inp = TopologyInputs::new(&fix).unwrap();
        let (rows, s, _, _) = run_checks(&inp, 0).unwrap();
        for r in &rows {
            assert!(r.is_pass() || r.check == "topology.input_constants", "{r:?}");
        }
        assert_eq!(s.total, 80);
    }
}
