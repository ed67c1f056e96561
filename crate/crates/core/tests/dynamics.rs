use num_traits::Zero;
use rank1lab::dynamics::{
    apply_power, dynamical_conservative_seq, exact_return_measure, level_set, measure_intersection, realize_column,
    return_times, IntervalSet,
};
use rank1lab::multipliers::spec_window;
use rank1lab::rational::{int, ratio};
use rank1lab::tower::preset;
use rank1lab::LevelId;

#[test]
fn chacon_oracle_matches_combinatorics() {
    let c = preset("infinite_chacon").unwrap();
    let level = LevelId::base_of_c1();
    let dynamic = dynamical_conservative_seq(&c, level, 120).unwrap();
    assert_eq!(dynamic.elements(), spec_window(&c, level, 120).unwrap().elements());
}

#[test]
fn columns_tile_their_width() {
    let hk = preset("hajian_kakutani").unwrap();
    let col = realize_column(&hk, 2).unwrap();
    assert_eq!(col.levels.len(), 16);
    assert_eq!(col.width, ratio(1, 4));
    let union = col.levels.iter().fold(IntervalSet::empty(), |acc, l| acc.union(l));
    assert_eq!(union.measure(), int(4));
    assert!(col.to_csv().starts_with("level_index,left,right\n0,0,1/4\n"));
}

#[test]
fn one_step_moves_each_level_up() {
    let hk = preset("hajian_kakutani").unwrap();
    let col = realize_column(&hk, 3).unwrap();
    for w in col.levels.windows(2) {
        let img = apply_power(&hk, &w[0], 1, 3).unwrap();
        assert!(img.lost_mass.is_zero());
        assert_eq!(img.image, w[1]);
    }
}

#[test]
fn return_times_of_a_level_agree_with_the_oracle() {
    let c = preset("infinite_chacon").unwrap();
    let level = LevelId::new(2, 5);
    let a = level_set(&c, level).unwrap();
    let t = return_times(&c, &a, 60).unwrap();
    assert_eq!(t.elements(), dynamical_conservative_seq(&c, level, 60).unwrap().elements());
}

#[test]
fn measures_are_exact() {
    let c = preset("infinite_chacon").unwrap();
    let a = IntervalSet::interval(int(0), ratio(1, 3));
    // the first third climbs 8 levels into the second subcolumn's base
    assert_eq!(exact_return_measure(&c, &a, &a, 8).unwrap(), ratio(1, 9));
    let b = IntervalSet::interval(ratio(1, 6), ratio(1, 2));
    assert_eq!(measure_intersection(&a, &b), ratio(1, 6));
}
