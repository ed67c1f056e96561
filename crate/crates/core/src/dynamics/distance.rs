//! Truncated weak-topology distance between two rank-one maps.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::dynamics::interval::IntervalSet;
use crate::dynamics::power::{apply_power_with, depth_cap, PowerOptions};
use crate::error::Result;
use crate::rational::{self, Rational};
use crate::tower::CutSpacerSpec;

pub const ENUMERATION: &str =
    "single dyadic intervals [k/2^j, (k+1)/2^j), j = 0, 1, ..., 0 <= k < 4^j, lexicographic in (j, k); term i weighted by 1/(2^i mu(D_i))";

/// Rigorous enclosure of the truncated distance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakDistance {
    #[serde(with = "rational::text")]
    pub lower: Rational,
    #[serde(with = "rational::text")]
    pub upper: Rational,
    pub terms: usize,
    pub enumeration: &'static str,
}

/// `(j, k)` for the first `terms` dyadic intervals with `j <= depth`.
pub fn dyadic_enumeration(depth: u32, terms: usize) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(terms);
    for j in 0..=depth {
        for k in 0..(1u64 << (2 * j)) {
            if out.len() == terms {
                return out;
            }
            out.push((j, k));
        }
    }
    out
}

fn pow2(e: usize) -> Rational {
    Rational::from_integer(BigInt::from(1u8) << e)
}

/// Partial sum of `Σ_i μ(T^{−1}D_i Δ S^{−1}D_i) / (2^i μ(D_i))`. Mass
/// whose preimage is undetermined at `orbit_depth` widens the enclosure,
/// and the omitted terms add `2^{1−K}` to the upper end.
pub fn weak_distance(
    t: &CutSpacerSpec,
    s: &CutSpacerSpec,
    depth: u32,
    terms: usize,
    orbit_depth: usize,
) -> Result<WeakDistance> {
    let opts = PowerOptions { stage_hint: 0, min_depth: orbit_depth, cap: depth_cap().max(orbit_depth) };
    let mut lower = rational::zero();
    let mut upper = rational::zero();
    let items = dyadic_enumeration(depth, terms);
    for (i, &(j, k)) in items.iter().enumerate() {
        let scale = pow2(j as usize);
        let d = IntervalSet::interval(
            Rational::from_integer(BigInt::from(k)) / &scale,
            Rational::from_integer(BigInt::from(k + 1)) / &scale,
        );
        let pt = apply_power_with(t, &d, -1, &opts)?;
        let ps = apply_power_with(s, &d, -1, &opts)?;
        let diff = pt.image.symmetric_difference(&ps.image).measure();
        let slack = &pt.lost_mass + &ps.lost_mass;
        let mu = d.measure();
        let weight = pow2(i + 1) * &mu;
        let lo = if diff > slack { &diff - &slack } else { Rational::zero() };
        let cap = &mu * rational::int(2);
        let hi = (&diff + &slack).min(cap);
        lower += lo / &weight;
        upper += hi / &weight;
    }
    upper += rational::int(2) / pow2(items.len());
    Ok(WeakDistance { lower, upper, terms: items.len(), enumeration: ENUMERATION })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::preset;

    #[test]
    fn enumeration_order() {
        assert_eq!(dyadic_enumeration(3, 6), vec![(0, 0), (1, 0), (1, 1), (1, 2), (1, 3), (2, 0)]);
        assert_eq!(dyadic_enumeration(1, 100).len(), 5);
    }

    #[test]
    fn self_distance_and_separation() {
        let hk = preset("hajian_kakutani").unwrap();
        let c = preset("infinite_chacon").unwrap();
        let same = weak_distance(&hk, &hk, 3, 8, 8).unwrap();
        assert!(same.lower.is_zero());
        let d = weak_distance(&hk, &c, 3, 8, 8).unwrap();
        assert!(d.lower > rational::zero());
        assert!(d.lower <= d.upper);
        assert_eq!(weak_distance(&c, &hk, 3, 8, 8).unwrap(), d);
    }
}
