use super::*;

fn quick() -> VerifyOptions {
    VerifyOptions {
        samples: 20_000,
        ..VerifyOptions::default()
    }
}

#[test]
fn claim_ids_are_unique_and_registered() {
    let ids = claim_ids();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), ids.len());
    assert_eq!(ids.iter().filter(|i| i.starts_with("distinct-")).count(), 7);
    assert_eq!(ids.iter().filter(|i| i.starts_with("partition-")).count(), 8);
    for id in ["t5-elimination", "t7-elimination", "t8-elimination", "t9-elimination", "tally", "constants"] {
        assert!(ids.contains(&id), "{id}");
    }
    assert!(matches!(verify_claim("no-such-claim", &quick()), Err(VerifyError::UnknownClaim(_))));
}

#[test]
fn verdict_order_and_exit_codes() {
    use Verdict::*;
    assert_eq!(Verdict::worst([Pass, Inconclusive, Pass]), Inconclusive);
    assert_eq!(Verdict::worst([Inconclusive, Fail]), Fail);
    assert_eq!(Verdict::worst([]), Pass);
    assert_eq!([Pass, Fail, Inconclusive].map(Verdict::exit_code), [0, 1, 2]);
}

#[test]
fn twelve_significant_digits() {
    assert_eq!(sig12(20.0 / 3.0), 6.66666666667);
    assert_eq!(sig12(-1.0 / 3.0), -0.333333333333);
    assert_eq!(sig12(1.234e-20), 1.234e-20);
    assert_eq!(sig12(0.0), 0.0);
    assert!(sig12(f64::NAN).is_nan());
}

#[test]
fn row_relations() {
    let p = Provenance::Derived;
    assert!(Row::new("a", 1.0, Relation::Approx, Some(1.05), Some(0.1), p).pass);
    assert!(!Row::new("a", 1.0, Relation::Approx, Some(1.2), Some(0.1), p).pass);
    assert!(Row::new("r", 2.0, Relation::RelApprox, Some(2.03), Some(0.02), p).pass);
    assert!(!Row::new("r", 2.0, Relation::RelApprox, Some(2.1), Some(0.02), p).pass);
    assert!(!Row::new("g", 1.0, Relation::Greater, Some(1.0), None, p).pass);
    assert!(Row::new("l", f64::NAN, Relation::Record, None, None, p).pass);
    assert!(!Row::new("l", f64::NAN, Relation::Less, Some(1.0), None, p).pass);
}

#[test]
fn profiles_parse() {
    assert_eq!("strict".parse::<Profile>().unwrap(), Profile::Strict);
    assert_eq!("published".parse::<Profile>().unwrap(), Profile::Published);
    assert!("loose".parse::<Profile>().is_err());
}

#[test]
fn constants_pass_under_published_tolerances() {
    let r = constants_report(&quick());
    let failing: Vec<&str> = r.rows.iter().filter(|x| !x.pass).map(|x| x.name.as_str()).collect();
    assert_eq!(r.verdict, Verdict::Pass, "{failing:?}");
    assert!((r.row("a5").unwrap().value - 0.27092).abs() < 1e-4);
    assert_eq!(r.row("a4").unwrap().value, sig12(std::f64::consts::PI / 3.0));
}

#[test]
fn strict_profile_flags_the_last_digit_discrepancies() {
    // π − b is 0.776279 and the ball bound 0.244936, each off by more than
    // half a unit in the last quoted place
    let r = constants_report(&VerifyOptions { profile: Profile::Strict, ..quick() });
    let failing: Vec<&str> = r.rows.iter().filter(|x| !x.pass).map(|x| x.name.as_str()).collect();
    assert_eq!(failing, ["pi - b", "ball bound"]);
    assert_eq!(r.verdict, Verdict::Fail);
    assert!((r.row("pi - b").unwrap().value - 0.776279030740).abs() < 1e-12);
}

#[test]
fn strict_profile_tightens_decimals() {
    let a = constants_report(&quick());
    let b = constants_report(&VerifyOptions { profile: Profile::Strict, ..quick() });
    let ta = a.row("a5").unwrap().tolerance.unwrap();
    let tb = b.row("a5").unwrap().tolerance.unwrap();
    assert!(tb < ta);
}

#[test]
fn reports_are_deterministic_and_untimed_by_default() {
    let o = quick();
    let a = verify_claim("partition-vi", &o).unwrap().to_json();
    let b = verify_claim("partition-vi", &o).unwrap().to_json();
    assert_eq!(a, b);
    assert!(!a.contains("runtime_seconds"));
    let t = verify_claim("constants", &VerifyOptions { timings: true, ..o }).unwrap();
    assert!(t.runtime_seconds.is_some());
}

#[test]
fn closed_form_and_combinatorial_claims_pass() {
    let v = Verifier::new(quick());
    for id in claim_ids() {
        if registry().iter().any(|c| c.id == id && c.heavy) {
            continue;
        }
        let r = v.run(id).unwrap();
        let failing: Vec<&str> = r.rows.iter().filter(|x| !x.pass).map(|x| x.name.as_str()).collect();
        assert_eq!(r.verdict, Verdict::Pass, "{id}: {failing:?} {:?}", r.notes);
        assert!(!r.rows.is_empty());
    }
}

#[test]
fn distinctness_witness_for_rectangles() {
    let r = verify_claim("distinct-ii", &quick()).unwrap();
    let w = r.row("rectangle relation violation").unwrap();
    assert!(w.value > 0.15 && w.pass);
}
