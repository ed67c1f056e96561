//! Finite unions of half-open intervals with exact rational endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Sorted, pairwise disjoint, non-abutting half-open intervals `[a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct IntervalSet {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    /// `[a, b)`, empty when `a >= b`.
    pub fn interval(a: Rational, b: Rational) -> Self {
        if a < b {
            IntervalSet { intervals: vec![(a, b)] }
        } else {
            Self::empty()
        }
    }

    /// Normalises arbitrary intervals: drops empty ones, sorts, merges
    /// overlapping and abutting ones.
    pub fn from_intervals<I: IntoIterator<Item = (Rational, Rational)>>(items: I) -> Self {
        let mut v: Vec<(Rational, Rational)> = items.into_iter().filter(|(a, b)| a < b).collect();
        v.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        IntervalSet { intervals: out }
    }

    /// Checked constructor: every interval must be nonempty.
    pub fn new(items: Vec<(Rational, Rational)>) -> Result<Self> {
        if let Some((a, b)) = items.iter().find(|(a, b)| a >= b) {
            return Err(Error::InvariantViolation(format!(
                "interval [{}, {}) is empty",
                rational::to_text(a),
                rational::to_text(b)
            )));
        }
        Ok(Self::from_intervals(items))
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().fold(Rational::zero(), |acc, (a, b)| acc + (b - a))
    }

    pub fn inf(&self) -> Option<&Rational> {
        self.intervals.first().map(|(a, _)| a)
    }

    pub fn sup(&self) -> Option<&Rational> {
        self.intervals.last().map(|(_, b)| b)
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        let i = self.intervals.partition_point(|(a, _)| a <= x);
        i > 0 && *x < self.intervals[i - 1].1
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::from_intervals(self.intervals.iter().chain(other.intervals.iter()).cloned())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = (&a[i].0).max(&b[j].0);
            let hi = (&a[i].1).min(&b[j].1);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let b = &other.intervals;
        let mut j = 0;
        for (lo, hi) in &self.intervals {
            while j < b.len() && b[j].1 <= *lo {
                j += 1;
            }
            let mut cur = lo.clone();
            let mut k = j;
            while k < b.len() && b[k].0 < *hi {
                if b[k].0 > cur {
                    out.push((cur.clone(), b[k].0.clone()));
                }
                if b[k].1 > cur {
                    cur = b[k].1.clone();
                }
                k += 1;
            }
            if cur < *hi {
                out.push((cur, hi.clone()));
            }
        }
        Self::from_intervals(out)
    }

    pub fn symmetric_difference(&self, other: &IntervalSet) -> IntervalSet {
        self.difference(other).union(&other.difference(self))
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn translate(&self, by: &Rational) -> IntervalSet {
        IntervalSet { intervals: self.intervals.iter().map(|(a, b)| (a + by, b + by)).collect() }
    }

    /// `[numerator_a, denominator_a, numerator_b, denominator_b]` rows.
    pub fn to_rows(&self) -> Vec<[BigInt; 4]> {
        self.intervals
            .iter()
            .map(|(a, b)| [a.numer().clone(), a.denom().clone(), b.numer().clone(), b.denom().clone()])
            .collect()
    }

    pub fn from_rows(rows: &[[BigInt; 4]]) -> Result<Self> {
        let mut items = Vec::with_capacity(rows.len());
        for [na, da, nb, db] in rows {
            if da.is_zero() || db.is_zero() {
                return Err(Error::Parse("zero denominator in interval".into()));
            }
            items.push((Rational::new(na.clone(), da.clone()), Rational::new(nb.clone(), db.clone())));
        }
        Self::new(items)
    }
}

/// Exact `μ(a ∩ b)`.
pub fn measure_intersection(a: &IntervalSet, b: &IntervalSet) -> Rational {
    a.intersection(b).measure()
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "[{}, {})", rational::to_text(a), rational::to_text(b))?;
        }
        Ok(())
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = self
            .to_rows()
            .iter()
            .map(|row| row.iter().map(rational::bigint_json).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        let mut rows = Vec::with_capacity(raw.len());
        for row in raw {
            if row.len() != 4 {
                return Err(D::Error::custom("interval rows have four entries"));
            }
            let mut vals = row.iter().map(rational::bigint_from_json);
            let mut next = || vals.next().unwrap().map_err(D::Error::custom);
            rows.push([next()?, next()?, next()?, next()?]);
        }
        IntervalSet::from_rows(&rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn iv(a: (i64, i64), b: (i64, i64)) -> IntervalSet {
        IntervalSet::interval(ratio(a.0, a.1), ratio(b.0, b.1))
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measure_intersection(&iv((0, 1), (1, 1)), &iv((1, 2), (2, 1))), ratio(1, 2));
        assert_eq!(measure_intersection(&iv((0, 1), (1, 1)), &iv((2, 1), (3, 1))), int(0));
        let two = iv((0, 1), (1, 4)).union(&iv((1, 2), (3, 4)));
        assert_eq!(measure_intersection(&two, &iv((0, 1), (1, 1))), ratio(1, 2));
    }

    #[test]
    fn merging() {
        let s = IntervalSet::from_intervals(vec![(int(1), int(2)), (int(0), int(1)), (int(3), int(4))]);
        assert_eq!(s.intervals(), &[(int(0), int(2)), (int(3), int(4))]);
        assert!(IntervalSet::new(vec![(int(1), int(1))]).is_err());
        assert!(s.contains_point(&ratio(3, 2)));
        assert!(!s.contains_point(&int(2)));
    }

    #[test]
    fn json_rows() {
        let s = iv((0, 1), (1, 2)).union(&iv((3, 4), (1, 1)));
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, "[[0,1,1,2],[3,4,1,1]]");
        let back: IntervalSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<IntervalSet>("[[1,0,1,1]]").is_err());
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec((0i64..40, 1i64..8), 0..6).prop_map(|v| {
            IntervalSet::from_intervals(v.into_iter().map(|(a, len)| (ratio(a, 4), ratio(a + len, 4))))
        })
    }

    proptest! {
        #[test]
        fn inclusion_exclusion(a in arb_set(), b in arb_set()) {
            let lhs = a.union(&b).measure() + a.intersection(&b).measure();
            prop_assert_eq!(lhs, a.measure() + b.measure());
            prop_assert_eq!(a.difference(&b).measure(), a.measure() - a.intersection(&b).measure());
            prop_assert_eq!(a.symmetric_difference(&b), b.symmetric_difference(&a));
            prop_assert!(a.intersection(&b).is_subset(&a));
        }
    }
}
