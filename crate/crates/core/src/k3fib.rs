//! The pencil of planes `s*x2 + t*x3 = 0` through the double line
//! `x2 = x3 = 0` of D1, and the K3 fibers it cuts out.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::poly::{binary_rational_roots, rat, restrict_to_curve, MultiPoly, PolyError, VarSet};
use crate::report::{CheckReport, Provenance};
use crate::varieties::{d2_product, k3_fiber, proportionality, y_bidouble, VarietyError, WeightedVariety, D2_FORMS};

#[derive(Debug, Error)]
pub enum K3Error {
    #[error("parameter (0:0)")]
    ZeroParameter,
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("a degeneracy condition vanishes identically")]
    AlwaysDegenerate,
    #[error("restriction of {divisor} to the {curve} is not a square at ({s}:{t})")]
    NonSquare { divisor: &'static str, curve: &'static str, s: String, t: String },
}

/// A point of P^1(Q) with coprime integer coordinates, sign fixed by the
/// first nonzero entry.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Param {
    pub s: i64,
    pub t: i64,
}

impl Param {
    pub fn new(s: i64, t: i64) -> Result<Self, K3Error> {
        if s == 0 && t == 0 {
            return Err(K3Error::ZeroParameter);
        }
        let g = s.gcd(&t);
        let (mut s, mut t) = (s / g, t / g);
        if s < 0 || (s == 0 && t < 0) {
            s = -s;
            t = -t;
        }
        Ok(Self { s, t })
    }

    fn from_rational(s: &BigRational, t: &BigRational) -> Option<Self> {
        let l = s.denom().lcm(t.denom());
        let si = (s * BigRational::from_integer(l.clone())).to_integer();
        let ti = (t * BigRational::from_integer(l)).to_integer();
        Self::new(i64::try_from(si).ok()?, i64::try_from(ti).ok()?).ok()
    }

    pub fn rationals(&self) -> (BigRational, BigRational) {
        (rat(self.s), rat(self.t))
    }
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}:{})", self.s, self.t)
    }
}

impl std::str::FromStr for Param {
    type Err = String;
    fn from_str(x: &str) -> Result<Self, String> {
        let (a, b) = x.trim_matches(|c| c == '(' || c == ')').split_once(':').ok_or("expected s:t")?;
        let a = a.trim().parse().map_err(|e| format!("{e}"))?;
        let b = b.trim().parse().map_err(|e| format!("{e}"))?;
        Param::new(a, b).map_err(|e| e.to_string())
    }
}

/// A line `a*x0 + b*x1 + c*w = 0` in the plane, with coordinates
/// (x0 : x1 : w) where `(x2, x3) = (t*w, -s*w)`.
pub type PlaneLine = [BigRational; 3];

#[derive(Debug, Clone)]
pub struct FiberSlice {
    pub param: Param,
    /// The displayed model in P(1,1,1,2,1); `None` for t = 0, where the
    /// chart `x3 = -(s/t) x2` is unavailable.
    pub model: Option<WeightedVariety>,
    /// Restriction of D1 is `d1_coeff * x0 * x1 * w^2`.
    pub d1_coeff: BigRational,
    pub pair: [PlaneLine; 2],
    pub quadruple: [PlaneLine; 4],
}

fn cross(a: &PlaneLine, b: &PlaneLine) -> PlaneLine {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

fn dot(a: &PlaneLine, b: &PlaneLine) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &PlaneLine) -> Option<PlaneLine> {
    let lead = v.iter().find(|x| !x.is_zero())?.clone();
    Some([&v[0] / &lead, &v[1] / &lead, &v[2] / &lead])
}

/// The plane's image of the D2 form `c`.
fn quadruple_line(c: &[i64; 4], s: &BigRational, t: &BigRational) -> PlaneLine {
    [rat(c[0]), rat(c[1]), t * rat(c[2]) - s * rat(c[3])]
}

pub fn fiber(param: &Param) -> Result<FiberSlice, K3Error> {
    let (s, t) = param.rationals();
    let model = if t.is_zero() { None } else { Some(k3_fiber(&s, &t)?) };
    let quadruple = D2_FORMS.map(|c| quadruple_line(&c, &s, &t));
    let (o, z) = (BigRational::one(), BigRational::zero());
    Ok(FiberSlice {
        param: param.clone(),
        model,
        d1_coeff: -(&s * &t),
        pair: [[o.clone(), z.clone(), z.clone()], [z.clone(), o, z]],
        quadruple,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configuration {
    pub plane_in_branch_locus: bool,
    pub distinct_lines: usize,
    /// Double points of each branch curve separately.
    pub own_nodes: usize,
    /// Points where the pair meets the quadruple.
    pub mutual_points: usize,
    pub triple_points: usize,
}

impl Configuration {
    pub fn is_generic(&self) -> bool {
        !self.plane_in_branch_locus && self.distinct_lines == 6 && self.own_nodes == 7 && self.mutual_points == 8 && self.triple_points == 0
    }
}

fn meet_points(a: &[PlaneLine], b: &[PlaneLine], same: bool) -> BTreeSet<PlaneLine> {
    let mut out = BTreeSet::new();
    for (i, l) in a.iter().enumerate() {
        for (j, m) in b.iter().enumerate() {
            if same && j <= i {
                continue;
            }
            if let Some(p) = normalize(&cross(l, m)) {
                out.insert(p);
            }
        }
    }
    out
}

impl FiberSlice {
    pub fn configuration(&self) -> Configuration {
        let all: Vec<PlaneLine> = self.pair.iter().chain(&self.quadruple).cloned().collect();
        let distinct: BTreeSet<PlaneLine> = all.iter().filter_map(normalize).collect();
        let own_pair = meet_points(&self.pair, &self.pair, true);
        let own_quad = meet_points(&self.quadruple, &self.quadruple, true);
        let mutual = meet_points(&self.pair, &self.quadruple, false);
        let every = meet_points(&all, &all, true);
        let triple_points = every.iter().filter(|p| all.iter().filter(|l| dot(l, p).is_zero()).count() >= 3).count();
        Configuration {
            plane_in_branch_locus: self.d1_coeff.is_zero(),
            distinct_lines: distinct.len(),
            own_nodes: own_pair.len() + own_quad.len(),
            mutual_points: mutual.len(),
            triple_points,
        }
    }
}

fn det3(m: &[&[MultiPoly; 3]; 3]) -> MultiPoly {
    let t = |a: usize, b: usize, c: usize| &(&m[0][a] * &m[1][b]) * &m[2][c];
    let pos = &(&t(0, 1, 2) + &t(1, 2, 0)) + &t(2, 0, 1);
    let neg = &(&t(2, 1, 0) + &t(0, 2, 1)) + &t(1, 0, 2);
    &pos - &neg
}

/// Parameters where the six branch lines fail to be in general position
/// or the plane lies in the branch locus, from the exact roots of the
/// degeneracy forms in (s, t).
pub fn special_fibers() -> Result<Vec<Param>, K3Error> {
    let st = VarSet::unweighted(&["s", "t"]);
    let (s, t) = (MultiPoly::var(&st, 0), MultiPoly::var(&st, 1));
    let c = |n: i64| MultiPoly::constant(&st, rat(n));
    let mut lines: Vec<[MultiPoly; 3]> = vec![[c(1), c(0), c(0)], [c(0), c(1), c(0)]];
    for f in D2_FORMS {
        lines.push([c(f[0]), c(f[1]), &t.scale(&rat(f[2])) - &s.scale(&rat(f[3]))]);
    }
    let mut forms = vec![&s * &t];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            for k in j + 1..lines.len() {
                forms.push(det3(&[&lines[i], &lines[j], &lines[k]]));
            }
        }
    }
    let mut out = BTreeSet::new();
    for f in forms {
        if f.is_zero() {
            return Err(K3Error::AlwaysDegenerate);
        }
        if f.homogeneous_degree() == Some(0) {
            continue;
        }
        for ((a, b), _) in binary_rational_roots(&f) {
            out.insert(Param::from_rational(&a, &b).expect("small roots"));
        }
    }
    Ok(out.into_iter().collect())
}

/// The lines `t x0 + s x1 = 0`, `s x0 + t x1 = 0` and the conic
/// `t x0 x1 + s x2^2 = 0` in the plane, parameterized into P^3.
pub fn splitting_curves(p: &Param) -> Vec<(&'static str, Vec<MultiPoly>)> {
    let ab = VarSet::unweighted(&["a", "b"]);
    let (a, b) = (MultiPoly::var(&ab, 0), MultiPoly::var(&ab, 1));
    let (s, t) = p.rationals();
    let k = |x: &MultiPoly, c: &BigRational| x.scale(c);
    let (ms, mt) = (-s.clone(), -t.clone());
    let aa = &a * &a;
    let bb = &b * &b;
    let abm = &a * &b;
    vec![
        ("line t*x0 + s*x1", vec![k(&a, &s), k(&a, &mt), k(&b, &t), k(&b, &ms)]),
        ("line s*x0 + t*x1", vec![k(&a, &t), k(&a, &ms), k(&b, &t), k(&b, &ms)]),
        ("conic t*x0*x1 + s*x2^2", vec![k(&aa, &s), k(&bb, &mt), k(&abm, &t), k(&abm, &ms)]),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplittingResult {
    pub curve: String,
    pub divisor: String,
    pub square: bool,
    pub restriction: String,
}

pub fn splitting_checks(p: &Param) -> Result<Vec<SplittingResult>, K3Error> {
    let v = VarSet::unweighted(&["x0", "x1", "x2", "x3"]);
    let d1 = (0..4).fold(MultiPoly::one(&v), |acc, i| &acc * &MultiPoly::var(&v, i));
    let d2 = d2_product(&v);
    let divisors = [("D1", d1), ("D2", d2)];
    let mut out = Vec::new();
    for (curve, param) in splitting_curves(p) {
        for (name, f) in &divisors {
            let r = restrict_to_curve(f, &param)?;
            out.push(SplittingResult {
                curve: curve.into(),
                divisor: (*name).into(),
                square: r.is_square(),
                restriction: format!("{r:?}"),
            });
        }
    }
    Ok(out)
}

/// Picard divisors from the fiber: two per own node plus the hyperplane.
pub fn divisor_tally(c: &Configuration) -> usize {
    2 * c.own_nodes + 1
}

fn random_params(rng: &mut ChaCha8Rng, n: usize, special: &[Param]) -> Vec<Param> {
    let mut out = Vec::new();
    while out.len() < n {
        let s = rng.gen_range(-50i64..=50);
        let t = rng.gen_range(-50i64..=50);
        if let Ok(p) = Param::new(s, t) {
            if !special.contains(&p) && !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub param: Param,
    pub configuration: Configuration,
}

pub fn sweep(n: usize, seed: u64) -> Result<Vec<SweepEntry>, K3Error> {
    let special = special_fibers()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_params(&mut rng, n, &special)
        .into_iter()
        .map(|p| Ok(SweepEntry { configuration: fiber(&p)?.configuration(), param: p }))
        .collect()
}

/// Substituting the plane into Y_BIDOUBLE reproduces the displayed fiber:
/// D2 becomes the displayed quartic over t^4 and D1 becomes -(s/t) x0 x1 x2^2.
pub fn substitution_matches_display(p: &Param) -> Result<bool, K3Error> {
    let (s, t) = p.rationals();
    if t.is_zero() {
        return Ok(true);
    }
    let fib = k3_fiber(&s, &t)?;
    let fv: &Arc<VarSet> = &fib.vars;
    let y = y_bidouble();
    let x = |i| MultiPoly::var(fv, i);
    let images = vec![x(0), x(1), x(2), x(2).scale(&(-&s / &t)), MultiPoly::var(fv, 3), MultiPoly::var(fv, 4)];
    let d2 = d2_product(&y.vars).substitute(fv, &images)?;
    let quartic = &MultiPoly::var(fv, 3).pow(2) - &fib.equations[1];
    let t4 = t.pow(4);
    let d2_ok = d2.scale(&t4) == quartic;
    let d1 = (0..4).fold(MultiPoly::one(&y.vars), |acc, i| &acc * &MultiPoly::var(&y.vars, i));
    let x01w2 = &(&x(0) * &x(1)) * &(&x(2) * &x(2));
    let d1_ok = proportionality(&d1.substitute(fv, &images)?, &x01w2) == Some(-&s / &t);
    Ok(d2_ok && d1_ok)
}

/// Generators of the symmetries of the pencil induced by the arrangement:
/// `x2 <-> x3` and `x3 -> -x3`.
fn pencil_images(p: &Param) -> [Param; 2] {
    [Param::new(p.t, p.s).expect("nonzero"), Param::new(p.s, -p.t).expect("nonzero")]
}

pub fn run_checks(seed: u64) -> Result<Vec<CheckReport>, K3Error> {
    let mut rows = Vec::new();
    let generic = Param::new(2, 1)?;
    let g = fiber(&generic)?.configuration();
    rows.push(CheckReport::exact(
        "k3fib.generic_configuration",
        "generic fiber: pair and quadruple of lines, seven own nodes",
        Provenance::Published,
        json!({"distinct_lines": 6, "own_nodes": 7, "generic": true}),
        json!({"distinct_lines": g.distinct_lines, "own_nodes": g.own_nodes, "generic": g.is_generic()}),
    ));
    for (s, t) in [(1, 1), (1, 0)] {
        let p = Param::new(s, t)?;
        rows.push(CheckReport::exact(
            &format!("k3fib.degenerate_{s}_{t}"),
            &format!("the fiber over {p} is singular"),
            Provenance::Published,
            false,
            fiber(&p)?.configuration().is_generic(),
        ));
    }
    let special = special_fibers()?;
    let expected: Vec<Param> = [(0, 1), (1, -1), (1, 0), (1, 1)].iter().map(|&(s, t)| Param::new(s, t).expect("nonzero")).collect();
    rows.push(CheckReport::exact("k3fib.special_fibers", "the four singular fibers", Provenance::Published, &expected, &special));
    let stable = special.iter().all(|p| pencil_images(p).iter().all(|q| special.contains(q)));
    rows.push(CheckReport::boolean("k3fib.special_symmetric", "special set stable under x2 <-> x3 and x3 -> -x3", Provenance::Trivial, stable, &special));
    for p in &special {
        if fiber(p)?.configuration().is_generic() {
            rows.push(CheckReport::boolean("k3fib.special_detected", "special parameter is degenerate", Provenance::Derived, false, p.to_string()));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = random_params(&mut rng, 20, &special);
    let mut bad = Vec::new();
    let mut subst_bad = Vec::new();
    let mut homog_bad = Vec::new();
    for p in &samples {
        for r in splitting_checks(p)? {
            if !r.square {
                bad.push(format!("{p} {} {}", r.curve, r.divisor));
            }
        }
        if !substitution_matches_display(p)? {
            subst_bad.push(p.to_string());
        }
        if let Some(m) = fiber(p)?.model {
            if m.degrees() != vec![Some(2), Some(4)] {
                homog_bad.push(p.to_string());
            }
        }
    }
    let at_two = splitting_checks(&generic)?;
    rows.push(CheckReport::exact(
        "k3fib.splitting_at_2_1",
        "lines and conic meet the branch divisors with multiplicity two",
        Provenance::Derived,
        vec![true; 6],
        at_two.iter().map(|r| r.square).collect::<Vec<_>>(),
    ));
    rows.push(CheckReport::exact("k3fib.splitting_random", "splitting at 20 random generic parameters", Provenance::Derived, Vec::<String>::new(), &bad));
    rows.push(CheckReport::exact("k3fib.display_substitution", "plane substituted into Y_BIDOUBLE gives the displayed fiber", Provenance::Published, Vec::<String>::new(), &subst_bad));
    rows.push(CheckReport::exact("k3fib.weighted_homogeneous", "fiber equations have weighted degrees 2 and 4", Provenance::Trivial, Vec::<String>::new(), &homog_bad));
    let p11 = Param::new(1, 1)?;
    rows.push(CheckReport::skipped("k3fib.splitting_special", &format!("splitting at {p11}"), Provenance::Trivial, true, "special parameter"));

    let sw = sweep(100, seed)?;
    let nongeneric: Vec<String> = sw.iter().filter(|e| !e.configuration.is_generic()).map(|e| e.param.to_string()).collect();
    rows.push(CheckReport::exact("k3fib.sweep_generic", "100 non-special rational parameters are generic", Provenance::Derived, Vec::<String>::new(), &nongeneric));
    rows.push(CheckReport::flagged(
        "k3fib.divisor_tally",
        "16 independent divisors from the nodes and a hyperplane section; 7*2 + 1 = 15",
        16,
        divisor_tally(&g),
    ));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_normalization_and_parse() {
        assert_eq!(Param::new(-4, 2).unwrap(), Param { s: 2, t: -1 });
        assert_eq!(Param::new(0, -3).unwrap(), Param { s: 0, t: 1 });
        assert_eq!("2:1".parse::<Param>().unwrap(), Param { s: 2, t: 1 });
        assert!("0:0".parse::<Param>().is_err());
    }

    #[test]
    fn special_set() {
        let sp = special_fibers().unwrap();
        assert_eq!(sp.len(), 4);
        for p in &sp {
            assert!(!fiber(p).unwrap().configuration().is_generic());
        }
    }

    #[test]
    fn checks_pass() {
        for r in run_checks(7).unwrap() {
            assert!(!r.is_fail(), "{r:?}");
        }
    }

    #[test]
    fn display_matches_at_2_1() {
        assert!(substitution_matches_display(&Param::new(2, 1).unwrap()).unwrap());
    }

    #[test]
    fn one_zero_plane_lies_in_d1() {
        let c = fiber(&Param::new(1, 0).unwrap()).unwrap().configuration();
        assert!(c.plane_in_branch_locus);
    }
}
