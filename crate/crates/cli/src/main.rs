use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use siegel_cy::config::Config;
use siegel_cy::counting::{self, cached_count, singular_points, verify_modularity, CountCache, CounterRegistry};
use siegel_cy::field::PrimeField;
use siegel_cy::k3fib::{self, Param};
use siegel_cy::report::{timed, CheckReport, Report, Status};
use siegel_cy::suite::{Suite, SuiteContext};
use siegel_cy::topology::{self, RouteRegistry, TopologyInputs};
use siegel_cy::varieties::{Catalog, X_VGN};
use siegel_cy::{arrangement, deform, fixloci, thetamod};

#[derive(Parser)]
#[command(name = "siegel-cy", version, about = "Verification toolkit for a Calabi-Yau Siegel modular threefold")]
struct Cli {
    /// Key-value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for counting sweeps (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Point-count cache directory; SIEGEL_CY_CACHE takes precedence.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Also write the result as JSON to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Every check group in dependency order.
    RunAll {
        /// Restrict to these groups (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// List the groups and exit.
        #[arg(long)]
        list: bool,
    },
    /// Count projective points over F_p.
    Count {
        #[arg(long, default_value = X_VGN)]
        variety: String,
        #[arg(long)]
        p: u32,
        /// sign-fibration, charsum or naive; default picks the fastest.
        #[arg(long)]
        method: Option<String>,
    },
    /// Compare counts with the modularity formula for odd p up to pmax.
    VerifyModularity {
        #[arg(long, default_value = X_VGN)]
        variety: String,
        #[arg(long)]
        pmax: Option<u32>,
    },
    /// Singular points over F_p.
    Nodes {
        #[arg(long, default_value = X_VGN)]
        variety: String,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Fixed loci of K and the pair table.
    Fixloci {
        #[arg(long, value_delimiter = ',')]
        p: Vec<u32>,
    },
    /// Incidences of the octic arrangement.
    Arrangement {
        /// Print the incidence model and blow-up plan as JSON.
        #[arg(long)]
        dump: bool,
    },
    /// Equisingular deformation dimensions.
    Equisingular,
    /// Euler number ledgers.
    Euler {
        /// stringy or cover; both if omitted.
        #[arg(long)]
        route: Option<String>,
    },
    /// Hodge numbers and Picard ledgers.
    Hodge,
    /// Theta-constant relations and sign actions.
    ThetaCheck,
    /// Coefficients of the weight-4 level-8 eta product.
    CuspForm {
        #[arg(long, default_value_t = 30)]
        terms: usize,
    },
    /// The K3 pencil.
    K3 {
        #[arg(long, conflicts_with = "sweep")]
        param: Option<Param>,
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// The variety catalog in text form.
    Catalog,
}

fn status_tag(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::FlaggedDiscrepancy => "flagged",
        Status::Skipped => "skipped",
    }
}

fn print_rows(rows: &[CheckReport]) {
    for r in rows {
        println!("[{:>7}] {:<46} {}", status_tag(r.status), r.check, compact(&r.computed));
    }
}

fn compact(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 120 {
        format!("{}...", &s[..117])
    } else {
        s
    }
}

fn write_json(path: &Option<PathBuf>, v: &Value) -> Result<(), String> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())?;
        std::fs::write(p, text).map_err(|e| format!("writing {}: {e}", p.display()))?;
    }
    Ok(())
}

/// Print a report, write it if asked, and exit 1 on any failed row.
fn finish(rows: Vec<CheckReport>, json: &Option<PathBuf>) -> Result<ExitCode, String> {
    print_rows(&rows);
    let rep = Report { rows };
    write_json(json, &serde_json::to_value(&rep.rows).map_err(|e| e.to_string())?)?;
    println!(
        "{} pass, {} fail, {} flagged, {} skipped",
        rep.count(Status::Pass),
        rep.count(Status::Fail),
        rep.count(Status::FlaggedDiscrepancy),
        rep.count(Status::Skipped)
    );
    Ok(if rep.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let mut c = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    if let Some(j) = cli.jobs {
        c.jobs = j;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if cli.cache.is_some() {
        c.cache_dir = cli.cache.clone();
    }
    c.validate().map_err(|e| e.to_string())?;
    Ok(c)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let cfg = load_config(&cli)?;
    let json = &cli.json;
    let catalog = Catalog::standard();
    let variety = |name: &str| catalog.get(name).cloned().map_err(|e| e.to_string());
    let cache = CountCache::from_env_or(cfg.cache_dir.as_deref());
    let registry = CounterRegistry::default();
    let e = |x: &dyn std::fmt::Display| x.to_string();
    match &cli.cmd {
        Cmd::RunAll { only, list } => {
            let suite = Suite::default();
            if *list {
                for (id, d) in suite.describe() {
                    println!("{id:<12} {d}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let mut ctx = SuiteContext::new(cfg);
            let rep = suite.run(&mut ctx, only).map_err(|x| e(&x))?;
            finish(rep.rows, json)
        }
        Cmd::Count { variety: name, p, method } => {
            let v = variety(name)?;
            let (r, ms) = timed(|| {
                counting::with_jobs(cfg.jobs, || match method {
                    Some(m) => {
                        let f = PrimeField::new(*p as u64).map_err(|x| e(&x))?;
                        registry.get(m).and_then(|c| c.count(&v, &f)).map_err(|x| e(&x))
                    }
                    None => cached_count(&v, *p, &registry, cache.as_ref()).map_err(|x| e(&x)),
                })
            });
            let mut r = r?;
            r.ms = ms;
            println!("{} over F_{}: {} projective points ({} affine, {}, {} ms)", r.variety, r.p, r.projective, r.affine, r.method, r.ms);
            write_json(json, &json!(r))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyModularity { variety: name, pmax } => {
            let v = variety(name)?;
            let pmax = pmax.unwrap_or(cfg.pmax);
            let (rows, ms) = timed(|| counting::with_jobs(cfg.jobs, || verify_modularity(&v, pmax, &registry, cache.as_ref())));
            let rows = rows.map_err(|x| e(&x))?;
            println!("{:>4} {:>10} {:>10} {:>6}", "p", "count", "formula", "a_p");
            for r in &rows {
                println!("{:>4} {:>10} {:>10} {:>6} {}", r.p, r.count, r.formula_value, r.a_p, status_tag(r.status));
            }
            let row = counting::modularity_report(&format!("counting.modularity_{}", name.to_lowercase()), &rows, ms, siegel_cy::report::Provenance::Published);
            finish(vec![row], json)
        }
        Cmd::Nodes { variety: name, p } => {
            let v = variety(name)?;
            let mut rows = Vec::new();
            let primes = p.map(|x| vec![x]).unwrap_or(cfg.node_primes.clone());
            for p in primes {
                let f = PrimeField::new(p as u64).map_err(|x| e(&x))?;
                let inv = singular_points(&v, &f).map_err(|x| e(&x))?;
                let mut ranks = inv.ranks.clone();
                ranks.sort();
                ranks.dedup();
                println!("{} over F_{p}: {} singular points, Jacobian ranks {:?}", v.name, inv.len(), ranks);
                rows.push(json!({"p": p, "count": inv.len(), "ranks": ranks, "points": inv.points}));
            }
            write_json(json, &Value::Array(rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fixloci { p } => {
            let primes = if p.is_empty() { cfg.node_primes.clone() } else { p.clone() };
            let s = fixloci::analyze(&primes).map_err(|x| e(&x))?;
            for r in &s.reports {
                println!("{}  {:?}  ({} points over F_p)", r.g, r.kind, r.count_p);
            }
            finish(s.rows, json)
        }
        Cmd::Arrangement { dump } => {
            if *dump {
                let m = arrangement::build_incidence();
                let mut v = m.to_json();
                v["blowup_plan"] = json!(m.blowup_plan());
                println!("{}", serde_json::to_string_pretty(&v).map_err(|x| e(&x))?);
                write_json(json, &v)?;
                return Ok(ExitCode::SUCCESS);
            }
            finish(arrangement::run_checks(), json)
        }
        Cmd::Equisingular => {
            let d = deform::equisingular_summary().map_err(|x| e(&x))?;
            println!("over {}: dim (J_F)_8 = {}, dim (I_eq)_8 = {}, h1 = {}", d.field, d.dim_jf8, d.dim_ieq8, d.h1_equisingular);
            finish(deform::run_checks(cfg.seed).map_err(|x| e(&x))?, json)
        }
        Cmd::Euler { route } => {
            let fix = fixloci::analyze(&cfg.node_primes).map_err(|x| e(&x))?;
            let inp = TopologyInputs::new(&fix).map_err(|x| e(&x))?;
            let reg = RouteRegistry::default();
            let names = match route {
                Some(r) => vec![reg.get(r).map_err(|x| e(&x))?.name()],
                None => reg.names(),
            };
            let mut out = Vec::new();
            for n in names {
                let l = reg.get(n).and_then(|r| r.ledger(&inp)).map_err(|x| e(&x))?;
                println!("route {}:", l.route);
                for r in &l.rows {
                    println!("  {:>4} x {:>4}  {}  [{}]", r.multiplicity, r.value, r.source, r.citation);
                }
                for (k, v) in &l.intermediates {
                    println!("  {k} = {v}");
                }
                if let Some(p) = l.pre_division {
                    println!("  before division by 32: {p}");
                }
                println!("  e = {}", l.total);
                out.push(json!(l));
            }
            write_json(json, &Value::Array(out))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Hodge => {
            let fix = fixloci::analyze(&cfg.node_primes).map_err(|x| e(&x))?;
            let inp = TopologyInputs::new(&fix).map_err(|x| e(&x))?;
            let h1 = deform::equisingular_summary().map_err(|x| e(&x))?.h1_equisingular as i64;
            let (rows, _, _, h) = topology::run_checks(&inp, h1).map_err(|x| e(&x))?;
            println!("e = {}, h11 = {}, h12 = {}", h.euler, h.h11, h.h12);
            for (name, ledger) in [("A", &h.picard_a), ("B", &h.picard_b)] {
                let parts: Vec<String> = ledger.iter().map(|(s, n)| format!("{n} ({s})")).collect();
                println!("Picard ledger {name}: {}", parts.join(" + "));
            }
            let keep: Vec<CheckReport> = rows.into_iter().filter(|r| r.check.contains("hodge") || r.check.contains("picard")).collect();
            finish(keep, json)
        }
        Cmd::ThetaCheck => finish(thetamod::run_checks(&cfg.theta()), json),
        Cmd::CuspForm { terms } => {
            let f = thetamod::eta_product(*terms);
            let coeffs: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
            for (n, c) in coeffs.iter().enumerate().skip(1) {
                println!("a_{n} = {c}");
            }
            write_json(json, &json!(coeffs))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::K3 { param, sweep } => {
            if let Some(p) = param {
                let fib = k3fib::fiber(p).map_err(|x| e(&x))?;
                let conf = fib.configuration();
                println!("fiber {p}: generic = {}, {conf:?}", conf.is_generic());
                if let Some(m) = &fib.model {
                    for eq in &m.equations {
                        println!("  {eq}");
                    }
                }
                let split = if conf.is_generic() { k3fib::splitting_checks(p).map_err(|x| e(&x))? } else { Vec::new() };
                for s in &split {
                    println!("  {} on {}: square = {}", s.divisor, s.curve, s.square);
                }
                write_json(json, &json!({"param": p, "configuration": conf, "splitting": split}))?;
                let ok = split.iter().all(|s| s.square);
                return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            if let Some(n) = sweep {
                let sw = k3fib::sweep(*n, cfg.seed).map_err(|x| e(&x))?;
                let bad: Vec<&k3fib::SweepEntry> = sw.iter().filter(|x| !x.configuration.is_generic()).collect();
                println!("{} parameters, {} non-generic", sw.len(), bad.len());
                for b in &bad {
                    println!("  {} {:?}", b.param, b.configuration);
                }
                write_json(json, &json!(sw))?;
                return Ok(if bad.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            finish(k3fib::run_checks(cfg.seed).map_err(|x| e(&x))?, json)
        }
        Cmd::Catalog => {
            print!("{}", catalog.to_text());
            write_json(json, &json!(catalog.to_text()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
