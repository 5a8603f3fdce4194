use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_siegel-cy"));
    c.env_remove("SIEGEL_CY_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn catalog_lists_every_variety() {
    let o = run(&["catalog"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for name in ["X_VGN", "Y_CY", "Y_BIDOUBLE", "Y_SYM", "VERR", "BEAUVILLE_S", "D1", "D2"] {
        assert!(s.contains(name), "{name} missing");
    }
}

#[test]
fn count_weighted_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("count.json");
    let o = run(&["count", "--variety", "Y_CY", "--p", "3", "--json", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    // 1 + 27 + 4 + 16*12 - 12*15 for a_3 = -4.
    assert_eq!(v["projective"], 44);
}

#[test]
fn count_method_selection() {
    let a = run(&["count", "--variety", "X_VGN", "--p", "5", "--method", "naive"]);
    let b = run(&["count", "--variety", "X_VGN", "--p", "5", "--method", "sign-fibration"]);
    assert!(a.status.success() && b.status.success());
    let pts = |o: &Output| stdout(o).split(':').nth(1).unwrap().split_whitespace().next().unwrap().to_string();
    assert_eq!(pts(&a), pts(&b));
    assert_eq!(run(&["count", "--p", "5", "--method", "zeta"]).status.code(), Some(2));
}

#[test]
fn only_filter_and_json_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["run-all", "--only", "arrangement", "--json", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert!(!rows.is_empty());
    for r in rows {
        let mut keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        keys.sort();
        assert_eq!(keys, ["check", "citation", "computed", "expected", "ms", "provenance", "status"]);
        assert!(r["check"].as_str().unwrap().starts_with("arrangement."));
    }
}

#[test]
fn unknown_group_is_an_error() {
    assert_eq!(run(&["run-all", "--only", "everything"]).status.code(), Some(2));
}

#[test]
fn bad_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "colour = 3\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "catalog"]).status.code(), Some(2));
    std::fs::write(&cfg, "seed = 5\npmax = 13\n").unwrap();
    assert!(run(&["--config", cfg.to_str().unwrap(), "catalog"]).status.success());
}

#[test]
fn euler_cover_route() {
    let o = run(&["euler", "--route", "cover"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("e = 80"));
}

#[test]
fn k3_generic_and_special() {
    let g = run(&["k3", "--param", "2:1"]);
    assert!(g.status.success());
    assert!(stdout(&g).contains("generic = true"));
    assert!(stdout(&g).contains("own_nodes: 7"));
    for special in ["1:-1", "1:1", "1:0", "0:1"] {
        assert!(stdout(&run(&["k3", "--param", special])).contains("generic = false"), "{special}");
    }
}

#[test]
fn cache_dir_and_env_override() {
    let flag = tempfile::tempdir().unwrap();
    let env = tempfile::tempdir().unwrap();
    let o = bin().args(["--cache", flag.path().to_str().unwrap(), "count", "--variety", "Y_CY", "--p", "7"]).output().unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read_dir(flag.path()).unwrap().count(), 1);
    let again = bin().args(["--cache", flag.path().to_str().unwrap(), "count", "--variety", "Y_CY", "--p", "7"]).output().unwrap();
    assert_eq!(stdout(&o).split('(').next(), stdout(&again).split('(').next());

    let o = bin()
        .env("SIEGEL_CY_CACHE", env.path())
        .args(["--cache", flag.path().to_str().unwrap(), "count", "--variety", "Y_CY", "--p", "11"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read_dir(env.path()).unwrap().count(), 1);
    assert_eq!(std::fs::read_dir(flag.path()).unwrap().count(), 1);
}
