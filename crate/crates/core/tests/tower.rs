use proptest::prelude::*;
use rank1lab::tower::{
    conservative_set_by_steps, conservative_set_trunc, descendant_set, heights, max_return, preset, truncation_stage,
};
use rank1lab::{CutSpacerSpec, Error, LevelId, Stage};

#[test]
fn spec_files_round_trip() {
    for name in ["hajian_kakutani", "infinite_chacon"] {
        let spec = preset(name).unwrap();
        let back = CutSpacerSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(heights(&back, 8).unwrap(), heights(&spec, 8).unwrap());
    }
    let text = r#"{"name": "mixed", "rule": "skyscraper", "rule_params": {"factor": 1, "offset": 3},
                   "stages": [{"r": 2, "spacers": [0, 1]}]}"#;
    let spec = CutSpacerSpec::from_json(text).unwrap();
    // h_1 = 2 + 1, then h_{n+1} = 2h_n + (h_n + 3)
    assert_eq!(heights(&spec, 3).unwrap(), vec![1, 3, 12, 39]);
    assert_eq!(CutSpacerSpec::from_json(&spec.to_json()).unwrap(), spec);
}

#[test]
fn malformed_specs_are_rejected() {
    let one_cut = r#"{"name": "x", "rule": null, "stages": [{"r": 1, "spacers": [0]}]}"#;
    assert!(matches!(CutSpacerSpec::from_json(one_cut), Err(Error::InvariantViolation(_))));
    assert!(matches!(CutSpacerSpec::from_json("{\"name\": 3"), Err(Error::Parse(_))));
    let stray = r#"{"name": "x", "stages": [], "colour": "red"}"#;
    assert!(matches!(CutSpacerSpec::from_json(stray), Err(Error::Parse(_))));
    assert!(matches!(preset("nosuch"), Err(Error::UnknownPreset(_))));
}

#[test]
fn finite_specs_run_out_of_stages() {
    let spec = CutSpacerSpec::new("short", vec![Stage::new(2, vec![0, 1]).unwrap()], None).unwrap();
    assert!(matches!(heights(&spec, 3), Err(Error::MissingStage(_))));
    assert!(truncation_stage(&spec, LevelId::base_of_c1(), 1000).is_err());
}

#[test]
fn chacon_small_sets() {
    let c = preset("infinite_chacon").unwrap();
    let level = LevelId::base_of_c1();
    // blocks of stage 1 are 8, 9, 33, so D(I, 2) = {0, 8, 17}
    assert_eq!(descendant_set(&c, level, 2).unwrap().elements(), &[0, 8, 17]);
    assert_eq!(conservative_set_trunc(&c, level, 2).unwrap().elements(), &[-17, -9, -8, 0, 8, 9, 17]);
    assert_eq!(max_return(&c, 2).unwrap(), 17);
}

fn arb_spec() -> impl Strategy<Value = CutSpacerSpec> {
    prop::collection::vec((2usize..=3).prop_flat_map(|r| prop::collection::vec(0i64..5, r)), 2..=4).prop_map(
        |stages| {
            let st = stages.into_iter().map(|sp| Stage::new(sp.len(), sp).unwrap()).collect();
            CutSpacerSpec::new("random", st, None).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn every_level_has_the_same_set(spec in arb_spec()) {
        let m = spec.defined_stages().unwrap();
        let reference = conservative_set_trunc(&spec, LevelId::base_of_c1(), m).unwrap();
        for k in 0..spec.height(1).unwrap() {
            let other = conservative_set_trunc(&spec, LevelId::new(1, k), m).unwrap();
            prop_assert_eq!(other.elements(), reference.elements());
        }
        let steps = conservative_set_by_steps(&spec, 1, m).unwrap();
        prop_assert_eq!(steps.elements(), reference.elements());
        prop_assert!(reference.is_symmetric());
    }
}
