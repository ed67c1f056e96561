use rank1lab::multipliers::{
    build_avoiding_family, build_avoiding_iei, build_avoiding_rigid, build_avoiding_skyscraper, build_ergodic_heights,
    build_thm41, verify_certificate, FactBody, GapOracle, MultiplierCertificate, Target,
};
use rank1lab::rational::ratio;
use rank1lab::tower::{max_return, preset};
use rank1lab::{LevelId, SortedIntSet};

fn target(name: &str) -> (Target, GapOracle) {
    let spec = preset(name).unwrap();
    let window = 10 * max_return(&spec, 5).unwrap();
    let t = Target::spec(name, spec, LevelId::base_of_c1());
    let o = GapOracle::new(t.clone(), window).unwrap();
    assert!(o.window() >= window);
    (t, o)
}

fn assert_mutations_detected(cert: &MultiplierCertificate, targets: &[Target]) {
    for i in 0..cert.heights.len() {
        let mut bad = cert.clone();
        bad.heights[i] += 1;
        assert!(!verify_certificate(&bad, targets).all_passed(), "height {i} corruption went unnoticed");
    }
    for (n, blocks) in cert.blocks.iter().enumerate() {
        for k in 0..blocks.len() {
            let mut bad = cert.clone();
            bad.blocks[n][k] += 1;
            assert!(!verify_certificate(&bad, targets).all_passed(), "block ({n},{k}) corruption went unnoticed");
        }
    }
}

fn check(cert: &MultiplierCertificate, t: &Target) {
    let report = verify_certificate(cert, std::slice::from_ref(t));
    assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
    assert!(cert.facts.iter().all(|f| f.verified));
    assert_mutations_detected(cert, std::slice::from_ref(t));
}

#[test]
fn plain_rigid_and_iei_on_both_presets() {
    for name in ["hajian_kakutani", "infinite_chacon"] {
        let (t, mut o) = target(name);
        let plain = build_avoiding_skyscraper(&mut o, 4).unwrap();
        check(&plain, &t);
        for w in plain.heights.windows(2) {
            assert!(w[1] >= 2 * w[0]);
        }
        let rigid = build_avoiding_rigid(&mut o, 4).unwrap();
        check(&rigid, &t);
        let iei = build_avoiding_iei(&mut o, 4).unwrap();
        check(&iei, &t);
    }
}

#[test]
fn family_on_both_presets() {
    let (th, oh) = target("hajian_kakutani");
    let (tc, oc) = target("infinite_chacon");
    let mut oracles = vec![oh, oc];
    let cert = build_avoiding_family(&mut oracles, 3).unwrap();
    let targets = [th, tc];
    assert!(verify_certificate(&cert, &targets).all_passed());
    for id in ["hajian_kakutani", "infinite_chacon"] {
        assert!(cert
            .facts
            .iter()
            .any(|f| matches!(&f.body, FactBody::AvoidsOffOrigin { target, stage: 3, .. } if target == id)));
    }
}

#[test]
fn certificates_round_trip_through_json() {
    let (t, mut o) = target("hajian_kakutani");
    let cert = build_avoiding_rigid(&mut o, 3).unwrap();
    let back = MultiplierCertificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&back, &[t]).all_passed());
}

#[test]
fn shifted_multiplier_mutation_breaks_the_disjointness_fact() {
    let hk = preset("hajian_kakutani").unwrap();
    let cert = build_thm41(&hk, 4).unwrap();
    let t = Target::spec("hajian_kakutani", hk, LevelId::base_of_c1());
    assert!(verify_certificate(&cert, std::slice::from_ref(&t)).all_passed());
    let mut bad = cert.clone();
    bad.heights[1] += 1;
    let report = verify_certificate(&bad, &[t]);
    assert!(report.failures().any(|f| f.kind == "shifted_disjoint"));
}

#[test]
fn ergodic_facts_are_exact() {
    let hk = preset("hajian_kakutani").unwrap();
    let cert = build_ergodic_heights(&hk, 6, 3).unwrap();
    for f in &cert.facts {
        if let FactBody::ReturnMeasure { measure, reference, lower_bound_depth, .. } = &f.body {
            assert!(lower_bound_depth.is_none());
            assert!(measure >= &(ratio(1, 2) * reference));
        }
    }
}

#[test]
fn empty_certificate_passes_with_warning() {
    let mut cert = build_avoiding_skyscraper(
        &mut GapOracle::new(Target::set("zero", SortedIntSet::singleton(0)), 0).unwrap(),
        2,
    )
    .unwrap();
    cert.facts.clear();
    let report = verify_certificate(&cert, &[]);
    assert!(report.all_passed());
    assert_eq!(report.warnings.len(), 1);
}
