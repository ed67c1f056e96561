//! Return-time computations straight from the realized dynamics.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::column::Geometry;
use crate::dynamics::interval::IntervalSet;
use crate::dynamics::power::{apply_power_with, depth_cap, PowerImage, PowerOptions};
use crate::error::{Error, Result};
use crate::intcomb::SortedIntSet;
use crate::rational::{self, Rational};
use crate::tower::{truncation_stage, CutSpacerSpec, LevelId};
use crate::Int;

/// The level as an interval set.
pub fn level_set(spec: &CutSpacerSpec, level: LevelId) -> Result<IntervalSet> {
    level.validate(spec)?;
    let g = Geometry::new(spec, level.stage)?;
    let a = g.level_left(level.stage, level.height_index);
    let b = &a + g.width(level.stage);
    Ok(IntervalSet::interval(a, b))
}

/// `{n : |n| <= window, μ(T^n A ∩ A) > 0}` for a level `A`, every power
/// computed by the engine at a column deep enough that the known part of
/// each image decides the intersection.
pub fn dynamical_conservative_seq(spec: &CutSpacerSpec, level: LevelId, window: Int) -> Result<SortedIntSet> {
    let a = level_set(spec, level)?;
    let depth = truncation_stage(spec, level, window)?;
    let cap = depth_cap();
    if depth > cap {
        return Err(Error::DepthCapExceeded { required: depth, cap });
    }
    let opts = PowerOptions { stage_hint: level.stage, min_depth: depth, cap };
    let hits: Vec<Option<Int>> = (-window..=window)
        .into_par_iter()
        .map(|n| {
            let img = apply_power_with(spec, &a, n, &opts)?;
            Ok((!img.image.intersection(&a).measure().is_zero()).then_some(n))
        })
        .collect::<Result<_>>()?;
    SortedIntSet::certified(hits.into_iter().flatten(), window)
}

/// `T^n` of `set` refined until nothing is lost, or `DepthCapExceeded`.
pub fn apply_power_exact(spec: &CutSpacerSpec, set: &IntervalSet, n: Int, cap: usize) -> Result<PowerImage> {
    let mut opts = PowerOptions { stage_hint: 0, min_depth: 0, cap };
    loop {
        let img = apply_power_with(spec, set, n, &opts)?;
        if img.lost_mass.is_zero() {
            return Ok(img);
        }
        if img.depth >= cap || !spec.is_defined(img.depth) {
            return Err(Error::DepthCapExceeded { required: img.depth + 1, cap });
        }
        opts.min_depth = img.depth + 1;
    }
}

/// Exact `μ(T^n a ∩ b)`. Evaluated through the forward power `|n|`, where
/// large top spacers let the lost mass vanish at a finite column.
pub fn exact_return_measure(spec: &CutSpacerSpec, a: &IntervalSet, b: &IntervalSet, n: Int) -> Result<Rational> {
    let (src, dst, k) = if n >= 0 { (a, b, n) } else { (b, a, -n) };
    let img = apply_power_exact(spec, src, k, depth_cap())?;
    Ok(img.image.intersection(dst).measure())
}

/// `μ(T^n set ∩ set) / μ(set)`, exactly.
pub fn partial_rigidity_ratio(spec: &CutSpacerSpec, set: &IntervalSet, n: Int) -> Result<Rational> {
    let mu = set.measure();
    if mu.is_zero() {
        return Err(Error::InvalidArgument("set has measure zero".into()));
    }
    Ok(exact_return_measure(spec, set, set, n)? / mu)
}

/// `{n : |n| <= window, μ(T^n S ∩ S) > 0}` for an arbitrary set, with
/// exact measures (negative times by symmetry).
pub fn return_times(spec: &CutSpacerSpec, set: &IntervalSet, window: Int) -> Result<SortedIntSet> {
    let pos: Vec<Option<Int>> = (1..=window)
        .into_par_iter()
        .map(|n| Ok((!exact_return_measure(spec, set, set, n)?.is_zero()).then_some(n)))
        .collect::<Result<_>>()?;
    let mut out = vec![0];
    for n in pos.into_iter().flatten() {
        out.push(n);
        out.push(-n);
    }
    SortedIntSet::certified(out, window)
}

/// Result of the gap refinement loop.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRefinement {
    pub refined: IntervalSet,
    /// `ℓ_1, …, ℓ_R`; round `i` certifies `[ℓ_i − i, ℓ_i + i]`.
    pub gaps: Vec<Int>,
    #[serde(with = "removed_text")]
    pub removed: Vec<Rational>,
}

mod removed_text {
    use super::*;
    pub fn serialize<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rational::to_text))
    }
}

impl GapRefinement {
    /// Windows `(ℓ_i − i, ℓ_i + i)`.
    pub fn windows(&self) -> Vec<(Int, Int)> {
        self.gaps.iter().enumerate().map(|(i, &l)| (l - (i as Int + 1), l + i as Int + 1)).collect()
    }
}

/// Removes from `initial` the small overlaps `T^ℓ(B_i) ∩ A_i`, with
/// `B_i = ∪_{|j| <= i+1} T^j A_i`, so that the final set has no return
/// times in `[ℓ_{i+1} − (i+1), ℓ_{i+1} + i + 1]` for every round `i`.
pub fn refine_for_gaps(
    spec: &CutSpacerSpec,
    initial: &IntervalSet,
    epsilon: &Rational,
    rounds: usize,
    search_bound: Int,
) -> Result<GapRefinement> {
    if !rational::is_positive(epsilon) || *epsilon >= initial.measure() {
        return Err(Error::InvalidArgument("need 0 < epsilon < measure(initial)".into()));
    }
    let cap = depth_cap();
    let mut current = initial.clone();
    let mut gaps = Vec::with_capacity(rounds);
    let mut removed = Vec::with_capacity(rounds);
    let mut last: Int = 0;
    for round in 0..rounds {
        let half = round as Int + 1;
        let budget = epsilon / Rational::from_integer(num_bigint::BigInt::from(1u64) << (round + 1));
        let mut found = None;
        let mut ell = (last + 1).max(half + 1);
        while ell <= search_bound {
            let mut overlap = IntervalSet::empty();
            for j in -half..=half {
                let img = apply_power_exact(spec, &current, ell + j, cap)?;
                overlap = overlap.union(&img.image.intersection(&current));
            }
            if overlap.measure() < budget {
                found = Some((ell, overlap));
                break;
            }
            ell += 1;
        }
        let (ell, overlap) = found.ok_or(Error::SearchExhausted { bound: search_bound })?;
        removed.push(overlap.measure());
        current = current.difference(&overlap);
        gaps.push(ell);
        last = ell;
    }
    Ok(GapRefinement { refined: current, gaps, removed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::tower::{conservative_set_trunc, preset};

    #[test]
    fn hk_oracle_small_window() {
        let hk = preset("hajian_kakutani").unwrap();
        let c = dynamical_conservative_seq(&hk, LevelId::base_of_c1(), 5).unwrap();
        assert_eq!(c.elements(), &[-4, 0, 4]);
        assert_eq!(c.certified_bound(), Some(5));
        let z = dynamical_conservative_seq(&hk, LevelId::base_of_c1(), 0).unwrap();
        assert_eq!(z.elements(), &[0]);
    }

    #[test]
    fn hk_oracle_matches_combinatorics() {
        let hk = preset("hajian_kakutani").unwrap();
        let level = LevelId::base_of_c1();
        let dynamic = dynamical_conservative_seq(&hk, level, 20).unwrap();
        let m = truncation_stage(&hk, level, 20).unwrap();
        let comb = conservative_set_trunc(&hk, level, m).unwrap().restrict(20);
        assert_eq!(dynamic.elements(), comb.elements());
    }

    #[test]
    fn rigidity_examples() {
        let hk = preset("hajian_kakutani").unwrap();
        let a = level_set(&hk, LevelId::base_of_c1()).unwrap();
        assert_eq!(partial_rigidity_ratio(&hk, &a, 4).unwrap(), ratio(1, 2));
        assert_eq!(partial_rigidity_ratio(&hk, &a, 0).unwrap(), int(1));
        let c = preset("infinite_chacon").unwrap();
        let b = level_set(&c, LevelId::base_of_c1()).unwrap();
        assert!(partial_rigidity_ratio(&c, &b, 8).unwrap() >= ratio(1, 3));
    }

    #[test]
    fn refinement_on_hk() {
        let hk = preset("hajian_kakutani").unwrap();
        let a = level_set(&hk, LevelId::base_of_c1()).unwrap();
        let out = refine_for_gaps(&hk, &a, &ratio(1, 8), 2, 200).unwrap();
        assert!(out.refined.measure() > ratio(3, 8));
        assert_eq!(out.gaps.len(), 2);
        let times = return_times(&hk, &out.refined, out.gaps[1] + 2).unwrap();
        for (lo, hi) in out.windows() {
            assert!(times.elements().iter().all(|&t| t < lo || t > hi));
        }
        assert!(matches!(
            refine_for_gaps(&hk, &a, &ratio(1, 2), 1, 100),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn gap_already_present_removes_nothing() {
        let hk = preset("hajian_kakutani").unwrap();
        let a = level_set(&hk, LevelId::base_of_c1()).unwrap();
        let out = refine_for_gaps(&hk, &a, &ratio(1, 8), 1, 50).unwrap();
        assert_eq!(out.gaps, vec![2]);
        assert_eq!(out.refined, a);
    }
}
