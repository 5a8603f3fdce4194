use super::*;
use crate::field::ExtensionField;
use crate::poly::VarSet;
use crate::varieties::Catalog;

#[test]
fn octic_count_matches_exhaustive_oracle_at_three() {
    let f = PrimeField::new(3).unwrap();
    let x = varieties::x_vgn();
    let fast = SignFibration.count(&x, &f).unwrap();
    let oracle = Naive.count(&x, &f).unwrap();
    assert_eq!(fast.projective, oracle.projective);
    assert_eq!(fast.affine, oracle.affine);
}

#[test]
fn charsum_equals_naive_on_catalog() {
    let cat = Catalog::standard();
    for p in [3, 5, 7] {
        let f = PrimeField::new(p).unwrap();
        for v in cat.iter() {
            let a = CharacterSum.count(v, &f).unwrap();
            let b = Naive.count(v, &f).unwrap();
            assert_eq!(a.projective, b.projective, "{} p={p}", v.name);
        }
    }
}

#[test]
fn sign_fibration_agrees_with_generic_charsum() {
    let x = varieties::x_vgn();
    for p in [11, 13, 17, 19] {
        let f = PrimeField::new(p).unwrap();
        assert_eq!(SignFibration.count(&x, &f).unwrap().affine, CharacterSum.count(&x, &f).unwrap().affine);
    }
}

#[test]
fn sign_fibration_rejects_other_varieties() {
    let f = PrimeField::new(5).unwrap();
    assert!(matches!(SignFibration.count(&varieties::y_cy(), &f), Err(CountError::Unsupported { .. })));
}

#[test]
fn registry_lookup() {
    let r = CounterRegistry::default();
    assert_eq!(r.names(), vec!["sign-fibration", "charsum", "naive"]);
    assert!(matches!(r.get("zeta"), Err(CountError::UnknownMethod(_))));
}

#[test]
fn weighted_model_matches_formula_for_small_primes() {
    let rows = verify_modularity(&varieties::y_cy(), 23, &CounterRegistry::default(), None).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.status == Status::Pass), "{rows:?}");
}

#[test]
fn weighted_precondition_detects_non_free_action() {
    let vars = VarSet::new(&["x0", "y4"], &[1, 2]);
    let v = WeightedVariety::from_text("bad", vars, &["x0^2*y4"]).unwrap();
    let f = PrimeField::new(5).unwrap();
    assert!(!weighted_action_is_free(&v, &f).unwrap());
    assert!(matches!(CharacterSum.count(&v, &f), Err(CountError::NonFreeAction { .. })));
    assert!(weighted_action_is_free(&varieties::y_cy(), &f).unwrap());
}

#[test]
fn fibration_model_shapes() {
    let m = FibrationModel::build(&varieties::y_cy()).unwrap();
    assert_eq!(m.base, vec![0, 1, 2, 3]);
    assert_eq!(m.fibers.len(), 2);
    let d2 = FibrationModel::build(&varieties::d2()).unwrap();
    assert_eq!(d2.constraints.len(), 1);
}

#[test]
fn count_is_independent_of_worker_count() {
    let f = PrimeField::new(29).unwrap();
    let a = with_jobs(1, || x_cone_count(&f));
    let b = with_jobs(4, || x_cone_count(&f));
    assert_eq!(a, b);
}

#[test]
fn node_inventory_over_f17() {
    let f = PrimeField::new(17).unwrap();
    let inv = x_singular_points(&f);
    assert_eq!(inv.len(), 96);
    assert!(inv.ranks.iter().all(|&r| r == 3));
    // 6^2 = 2 mod 17
    assert_eq!(inv.rank_of(&[1, 1, 0, 0, 6, 0, 6, 0]), Some(3));
    let x = varieties::x_vgn();
    for pt in &inv.points {
        for e in &x.equations {
            assert_eq!(e.eval(&f, pt).unwrap(), 0);
        }
    }
    let mut dedup = inv.points.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(dedup.len(), 96);
}

#[test]
fn node_inventory_stable_at_41() {
    let f = PrimeField::new(41).unwrap();
    assert_eq!(x_singular_points(&f).len(), 96);
}

#[test]
fn node_inventory_over_extension_field() {
    // Over F_9 = F_3(i) the coordinates sqrt(2) = sqrt(-1) exist.
    let f = ExtensionField::new(3, 2).unwrap();
    let inv = x_singular_points(&f);
    assert!(inv.ranks.iter().all(|&r| r == 3));
    assert_eq!(inv.len(), 96);
}

#[test]
fn beauville_rows_pass() {
    for row in beauville_singularities() {
        assert!(row.is_pass(), "{row:?}");
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = CountCache::new(dir.path());
    let reg = CounterRegistry::default();
    let x = varieties::x_vgn();
    let first = cached_count(&x, 7, &reg, Some(&cache)).unwrap();
    let hit = cache.get(&x.name, 7, 1).unwrap();
    assert_eq!(first, hit);
    assert_eq!(cached_count(&x, 7, &reg, Some(&cache)).unwrap(), first);
    assert!(cache.get(&x.name, 11, 1).is_none());
}

#[test]
fn formula_value_at_three() {
    // 1 + 27 + 4*9 - 24 = 40
    assert_eq!(modularity_formula(3, 0), 40);
    assert_eq!(modularity_formula(5, 0), 1 + 125 + 100 - 40);
}
