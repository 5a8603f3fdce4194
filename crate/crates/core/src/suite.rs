//! The consolidated run: every module's checks behind one registry, in
//! dependency order.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::config::Config;
use crate::counting::{self, beauville_singularities, verify_modularity, x_singular_points, CountCache, CounterRegistry};
use crate::field::PrimeField;
use crate::fixloci::{self, FixSummary};
use crate::report::{timed, CheckReport, Provenance, Report};
use crate::topology::{self, TopologyInputs};
use crate::varieties::{self, Catalog};
use crate::{arrangement, deform, k3fib, thetamod};

#[derive(Debug, Error, PartialEq)]
pub enum SuiteError {
    #[error("unknown check group {0}; known: {1}")]
    UnknownGroup(String, String),
}

/// Results shared between groups, computed on first use.
pub struct SuiteContext {
    pub config: Config,
    pub cache: Option<CountCache>,
    pub registry: CounterRegistry,
    fix: Option<Result<FixSummary, String>>,
    h1: Option<Result<i64, String>>,
}

impl SuiteContext {
    pub fn new(config: Config) -> Self {
        // The environment variable wins over the config file.
        let cache = CountCache::from_env_or(config.cache_dir.as_deref());
        Self { config, cache, registry: CounterRegistry::default(), fix: None, h1: None }
    }

    pub fn fix_summary(&mut self) -> Result<&FixSummary, String> {
        if self.fix.is_none() {
            self.fix = Some(fixloci::analyze(&self.config.node_primes).map_err(|e| e.to_string()));
        }
        self.fix.as_ref().expect("set above").as_ref().map_err(Clone::clone)
    }

    pub fn h1_equisingular(&mut self) -> Result<i64, String> {
        if self.h1.is_none() {
            self.h1 = Some(deform::equisingular_summary().map(|d| d.h1_equisingular as i64).map_err(|e| e.to_string()));
        }
        self.h1.clone().expect("set above")
    }
}

pub trait Check: Send + Sync {
    fn id(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn run(&self, ctx: &mut SuiteContext) -> Result<Vec<CheckReport>, String>;
}

fn error_row(id: &str, msg: String) -> CheckReport {
    CheckReport::boolean(&format!("{id}.error"), "check group aborted", Provenance::Trivial, false, msg)
}

struct Symbolic;
struct Counting;
struct Nodes;
struct Theta;
struct FixLoci;
struct Arrangement;
struct Deform;
struct Topology;
struct K3;

impl Check for Symbolic {
    fn id(&self) -> &'static str {
        "symbolic"
    }
    fn describe(&self) -> &'static str {
        "catalog degrees, quotient map, coordinate changes, quadric identity"
    }
    fn run(&self, _: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        let mut rows = vec![varieties::verify_catalog_degrees()];
        rows.extend(varieties::verify_quotient_map());
        rows.extend(varieties::verify_coordinate_changes());
        rows.extend(varieties::verify_remark_identity());
        Ok(rows)
    }
}

impl Check for Counting {
    fn id(&self) -> &'static str {
        "counting"
    }
    fn describe(&self) -> &'static str {
        "point counts against the modularity formula and the naive oracle"
    }
    fn run(&self, ctx: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        let c = &ctx.config;
        let mut rows = Vec::new();
        let (x_rows, ms) = timed(|| counting::with_jobs(c.jobs, || verify_modularity(&varieties::x_vgn(), c.pmax, &ctx.registry, ctx.cache.as_ref())));
        let x_rows = x_rows.map_err(|e| e.to_string())?;
        rows.push(counting::modularity_report("counting.modularity_x_vgn", &x_rows, ms, Provenance::Published));
        rows.push(CheckReport::below(
            "counting.sweep_seconds",
            "full modularity sweep within the time budget",
            Provenance::Published,
            c.sweep_budget_s,
            ms as f64 / 1000.0,
        ));
        let (y_rows, ms) = timed(|| counting::with_jobs(c.jobs, || verify_modularity(&varieties::y_cy(), c.pmax, &ctx.registry, ctx.cache.as_ref())));
        let y_rows = y_rows.map_err(|e| e.to_string())?;
        rows.push(counting::modularity_report("counting.modularity_y_cy", &y_rows, ms, Provenance::Derived));

        let cat = Catalog::standard();
        let charsum = ctx.registry.get("charsum").map_err(|e| e.to_string())?;
        let naive = ctx.registry.get("naive").map_err(|e| e.to_string())?;
        let mut fast = BTreeMap::new();
        let mut slow = BTreeMap::new();
        for &p in &c.oracle_primes {
            let f = PrimeField::new(p as u64).map_err(|e| e.to_string())?;
            for v in cat.iter() {
                let key = format!("{}@{p}", v.name);
                fast.insert(key.clone(), charsum.count(v, &f).map(|r| r.projective).map_err(|e| e.to_string()));
                slow.insert(key, naive.count(v, &f).map(|r| r.projective).map_err(|e| e.to_string()));
            }
        }
        rows.push(CheckReport::exact("counting.oracle_equivalence", "character sums against exhaustive enumeration", Provenance::Derived, slow, fast));

        let sf = ctx.registry.get("sign-fibration").map_err(|e| e.to_string())?;
        let x = varieties::x_vgn();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for p in [11u64, 13] {
            let f = PrimeField::new(p).map_err(|e| e.to_string())?;
            a.push(charsum.count(&x, &f).map(|r| r.affine).map_err(|e| e.to_string()));
            b.push(sf.count(&x, &f).map(|r| r.affine).map_err(|e| e.to_string()));
        }
        rows.push(CheckReport::exact("counting.sign_fibration_vs_charsum", "octic specialisation against the generic character sum", Provenance::Derived, a, b));
        Ok(rows)
    }
}

impl Check for Nodes {
    fn id(&self) -> &'static str {
        "nodes"
    }
    fn describe(&self) -> &'static str {
        "the 96 nodes of the octic model and the Beauville surface singularities"
    }
    fn run(&self, ctx: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        let mut rows = Vec::new();
        for &p in &ctx.config.node_primes {
            let f = PrimeField::new(p as u64).map_err(|e| e.to_string())?;
            let inv = x_singular_points(&f);
            let mut ranks: Vec<usize> = inv.ranks.clone();
            ranks.dedup();
            rows.push(CheckReport::exact(
                &format!("nodes.count_f{p}"),
                "96 nodes, all ordinary",
                Provenance::Published,
                json!({"nodes": 96, "jacobian_ranks": [3]}),
                json!({"nodes": inv.len(), "jacobian_ranks": ranks}),
            ));
        }
        rows.extend(beauville_singularities());
        Ok(rows)
    }
}

impl Check for Theta {
    fn id(&self) -> &'static str {
        "theta"
    }
    fn describe(&self) -> &'static str {
        "theta-constant relations, sign actions and the cusp form"
    }
    fn run(&self, ctx: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        Ok(thetamod::run_checks(&ctx.config.theta()))
    }
}

impl Check for FixLoci {
    fn id(&self) -> &'static str {
        "fixloci"
    }
    fn describe(&self) -> &'static str {
        "fixed loci of K and the pair table"
    }
    fn run(&self, ctx: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        ctx.fix_summary().map(|s| s.rows.clone())
    }
}

impl Check for Arrangement {
    fn id(&self) -> &'static str {
        "arrangement"
    }
    fn describe(&self) -> &'static str {
        "incidences of the octic arrangement and blow-up tallies"
    }
    fn run(&self, _: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        Ok(arrangement::run_checks())
    }
}

impl Check for Deform {
    fn id(&self) -> &'static str {
        "deform"
    }
    fn describe(&self) -> &'static str {
        "equisingular deformations of the octic"
    }
    fn run(&self, ctx: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        deform::run_checks(ctx.config.seed).map_err(|e| e.to_string())
    }
}

impl Check for Topology {
    fn id(&self) -> &'static str {
        "topology"
    }
    fn describe(&self) -> &'static str {
        "Euler number by two routes, Hodge numbers and Picard ledgers"
    }
    fn run(&self, ctx: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        let h1 = ctx.h1_equisingular()?;
        let inp = TopologyInputs::new(ctx.fix_summary()?).map_err(|e| e.to_string())?;
        topology::run_checks(&inp, h1).map(|r| r.0).map_err(|e| e.to_string())
    }
}

impl Check for K3 {
    fn id(&self) -> &'static str {
        "k3"
    }
    fn describe(&self) -> &'static str {
        "the K3 pencil: special fibers, branch nodes and splitting curves"
    }
    fn run(&self, ctx: &mut SuiteContext) -> Result<Vec<CheckReport>, String> {
        k3fib::run_checks(ctx.config.seed).map_err(|e| e.to_string())
    }
}

/// Check groups in dependency order.
pub struct Suite {
    checks: Vec<Box<dyn Check>>,
}

impl Default for Suite {
    fn default() -> Self {
        Self {
            checks: vec![
                Box::new(Symbolic),
                Box::new(Counting),
                Box::new(Nodes),
                Box::new(Theta),
                Box::new(FixLoci),
                Box::new(Arrangement),
                Box::new(Deform),
                Box::new(Topology),
                Box::new(K3),
            ],
        }
    }
}

impl Suite {
    pub fn ids(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.id()).collect()
    }

    pub fn describe(&self) -> Vec<(&'static str, &'static str)> {
        self.checks.iter().map(|c| (c.id(), c.describe())).collect()
    }

    /// Run the selected groups (all if `only` is empty). A failing group
    /// contributes an error row and the run continues.
    pub fn run(&self, ctx: &mut SuiteContext, only: &[String]) -> Result<Report, SuiteError> {
        for o in only {
            if !self.ids().contains(&o.as_str()) {
                return Err(SuiteError::UnknownGroup(o.clone(), self.ids().join(", ")));
            }
        }
        let mut report = Report::default();
        for c in &self.checks {
            if !only.is_empty() && !only.iter().any(|o| o == c.id()) {
                continue;
            }
            match c.run(ctx) {
                Ok(rows) => report.extend(rows),
                Err(e) => report.push(error_row(c.id(), e)),
            }
        }
        Ok(report)
    }
}

pub fn run_all(config: Config, only: &[String]) -> Result<Report, SuiteError> {
    let mut ctx = SuiteContext::new(config);
    Suite::default().run(&mut ctx, only)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_group_is_rejected() {
        assert!(matches!(run_all(Config::default(), &["everything".into()]), Err(SuiteError::UnknownGroup(..))));
    }

    #[test]
    fn only_filters_groups() {
        let rep = run_all(Config::default(), &["arrangement".into()]).unwrap();
        assert!(!rep.rows.is_empty());
        assert!(rep.rows.iter().all(|r| r.check.starts_with("arrangement.")));
    }

    #[test]
    fn k3_group_is_deterministic() {
        let a = run_all(Config::default(), &["k3".into()]).unwrap();
        let b = run_all(Config::default(), &["k3".into()]).unwrap();
        assert_eq!(a.rows.iter().map(|r| &r.computed).collect::<Vec<_>>(), b.rows.iter().map(|r| &r.computed).collect::<Vec<_>>());
    }
}
