//! Registry-level behaviors: negative controls, skip semantics, report
//! schema details, and configuration plumbing.

use bgg_poisson::rat::q;
use bgg_poisson::verify::{self, RunConfig, Status};

#[test]
fn negative_control_corrupted_killing_form() {
    // Scaling the Killing form corrupts every normalization computed from it
    // (codifferential constant, dual pairs) while literal dictionary
    // constants stay put, so the two-route boundary comparison must break.
    let (status, witness) = verify::run_two_route_with_scaled_killing(2, q(2), 1);
    assert_eq!(status, Status::Fail);
    let w = witness.expect("failure carries a witness");
    assert!(w.monomial.is_some());
    assert_ne!(w.lhs, w.rhs);

    // sanity: scale 1 is the true form and passes
    let (status, witness) = verify::run_two_route_with_scaled_killing(2, q(1), 1);
    assert_eq!(status, Status::Pass);
    assert!(witness.is_none());
}

#[test]
fn skip_semantics_at_degenerate_dimension() {
    let cfg = RunConfig {
        check_filter: Some(vec!["V15_uniqueness_dimension".into()]),
        ..RunConfig::default()
    };
    let rep = verify::run_all(2, &cfg);
    assert_eq!(rep.summary.fail, 0);
    assert!(rep.summary.skipped >= 1);
    for c in &rep.checks {
        assert_eq!(c.status, Status::Skipped);
        let w = c.witness.as_ref().expect("skip carries a reason");
        assert!(w.note.contains("n >= 3"));
    }
}

#[test]
fn report_schema_omits_absent_params() {
    let cfg = RunConfig {
        check_filter: Some(vec!["V00_structure".into(), "V10_weighted_eigenvalue".into()]),
        ..RunConfig::default()
    };
    let rep = verify::run_all(2, &cfg);
    let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
    for c in v["checks"].as_array().unwrap() {
        let params = c["params"].as_object().unwrap();
        assert!(params.contains_key("n"));
        if c["id"] == "V00_structure" {
            assert!(!params.contains_key("k"));
            assert!(!params.contains_key("lambda"));
            assert!(!params.contains_key("p"));
            // passing checks carry no witness field
            assert!(c.get("witness").is_none());
        }
        if c["id"] == "V10_weighted_eigenvalue" {
            assert!(params.contains_key("k"));
            assert!(params.contains_key("lambda"));
        }
        // ms is zero without the timing flag
        assert_eq!(c["ms"], 0);
    }
}

#[test]
fn lambda_samples_flow_into_instances() {
    let cfg = RunConfig {
        check_filter: Some(vec!["V10_weighted_eigenvalue".into()]),
        lambda_samples: vec![q(5), bgg_poisson::rat::qr(1, 2)],
        ..RunConfig::default()
    };
    let rep = verify::run_all(2, &cfg);
    let lambdas: Vec<&str> = rep
        .checks
        .iter()
        .map(|c| c.params.lambda.as_deref().unwrap())
        .collect();
    assert_eq!(lambdas, ["1/2", "5"]); // sorted deterministically
    assert_eq!(rep.summary.fail, 0);
}

#[test]
fn instances_are_sorted_and_complete() {
    let rep = verify::run_all(2, &RunConfig::default());
    // every registered check contributes at least one instance at n=2
    for def in verify::registry() {
        assert!(
            rep.checks.iter().any(|c| c.id == def.id),
            "no instance for {}",
            def.id
        );
    }
    // deterministic ordering: ids ascending, then parameter key
    let mut prev: Option<(&str, (i64, String, u32, u32))> = None;
    for c in &rep.checks {
        let key = (
            c.params.k.unwrap_or(i64::MIN),
            c.params.lambda.clone().unwrap_or_default(),
            c.params.p.unwrap_or(0),
            c.params.q.unwrap_or(0),
        );
        if let Some((pid, pkey)) = &prev {
            assert!((*pid, pkey.clone()) <= (c.id.as_str(), key.clone()));
        }
        prev = Some((c.id.as_str(), key));
    }
}
