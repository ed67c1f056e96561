//! Exact integer-set algebra.
//!
//! Conservative sequences are infinite sets of integers. A [`SortedIntSet`]
//! stores a finite sorted prefix together with the radius on which it is
//! known to agree with the infinite set it stands for; queries that reach past
//! that radius fail with [`Error::InsufficientTruncation`] instead of
//! answering from incomplete data.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Int;

/// Finite, strictly increasing set of integers with an optional certified
/// radius. `certified_bound == None` means the set is exactly finite.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct SortedIntSet {
    elements: Vec<Int>,
    certified_bound: Option<Int>,
}

impl SortedIntSet {
    /// Exactly finite set from arbitrary (unsorted, repeated) input.
    pub fn exact<I: IntoIterator<Item = Int>>(items: I) -> Self {
        let mut elements: Vec<Int> = items.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        SortedIntSet { elements, certified_bound: None }
    }

    /// Set certified on `[-bound, bound]`.
    pub fn certified<I: IntoIterator<Item = Int>>(items: I, bound: Int) -> Result<Self> {
        if bound < 0 {
            return Err(Error::InvalidArgument(format!("certified bound {bound} is negative")));
        }
        let mut set = Self::exact(items);
        set.certified_bound = Some(bound);
        Ok(set)
    }

    /// Wraps an already strictly increasing vector, checking the invariant.
    pub fn from_sorted(elements: Vec<Int>, certified_bound: Option<Int>) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvariantViolation(format!(
                "elements not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        if matches!(certified_bound, Some(b) if b < 0) {
            return Err(Error::InvalidArgument("certified bound is negative".into()));
        }
        Ok(SortedIntSet { elements, certified_bound })
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<Int>, certified_bound: Option<Int>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        SortedIntSet { elements, certified_bound }
    }

    pub fn singleton(x: Int) -> Self {
        SortedIntSet { elements: vec![x], certified_bound: None }
    }

    pub fn elements(&self) -> &[Int] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Int> {
        self.elements
    }

    pub fn certified_bound(&self) -> Option<Int> {
        self.certified_bound
    }

    pub fn with_certified_bound(mut self, bound: Option<Int>) -> Self {
        self.certified_bound = bound;
        self
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<Int> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<Int> {
        self.elements.last().copied()
    }

    /// Largest absolute value of an element, 0 for the empty set.
    pub fn max_abs(&self) -> Int {
        match (self.elements.first(), self.elements.last()) {
            (Some(a), Some(b)) => a.abs().max(b.abs()),
            _ => 0,
        }
    }

    /// Membership that refuses to answer outside the certified radius.
    pub fn contains(&self, x: Int) -> Result<bool> {
        if let Some(b) = self.certified_bound {
            if x.abs() > b {
                return Err(Error::InsufficientTruncation { needed: x.abs(), certified: b });
            }
        }
        Ok(self.contains_stored(x))
    }

    /// Membership in the stored elements, ignoring certification.
    pub fn contains_stored(&self, x: Int) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// First stored element `>= x`.
    pub fn first_at_or_above(&self, x: Int) -> Option<Int> {
        let i = self.elements.partition_point(|&e| e < x);
        self.elements.get(i).copied()
    }

    /// Greatest stored element `<= x`.
    pub fn last_at_or_below(&self, x: Int) -> Option<Int> {
        let i = self.elements.partition_point(|&e| e <= x);
        i.checked_sub(1).map(|i| self.elements[i])
    }

    /// Whether any stored element lies in `[lo, hi]`.
    pub fn any_in(&self, lo: Int, hi: Int) -> bool {
        matches!(self.first_at_or_above(lo), Some(e) if e <= hi)
    }

    /// Stored elements in `[lo, hi]`.
    pub fn range(&self, lo: Int, hi: Int) -> &[Int] {
        let i = self.elements.partition_point(|&e| e < lo);
        let j = self.elements.partition_point(|&e| e <= hi);
        &self.elements[i..j.max(i)]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.elements.len();
        (0..n).all(|i| self.elements[i] == -self.elements[n - 1 - i])
    }

    /// Elements with `|x| <= radius`; the result is certified on the
    /// smaller of `radius` and the current bound.
    pub fn restrict(&self, radius: Int) -> SortedIntSet {
        let radius = radius.max(0);
        let elements = self.range(-radius, radius).to_vec();
        let bound = Some(self.certified_bound.map_or(radius, |b| b.min(radius)));
        SortedIntSet { elements, certified_bound: bound }
    }

    pub fn shift(&self, k: Int) -> Result<SortedIntSet> {
        let elements = self
            .elements
            .iter()
            .map(|&x| x.checked_add(k).ok_or(Error::Overflow("shift")))
            .collect::<Result<Vec<_>>>()?;
        Ok(SortedIntSet { elements, certified_bound: None })
    }

    pub fn negate(&self) -> SortedIntSet {
        let elements = self.elements.iter().rev().map(|&x| -x).collect();
        SortedIntSet { elements, certified_bound: self.certified_bound }
    }

    /// Intersection of stored elements; certified on the smaller radius.
    pub fn intersection(&self, other: &SortedIntSet) -> SortedIntSet {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elements, &other.elements);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        SortedIntSet { elements: out, certified_bound: min_bound(self.certified_bound, other.certified_bound) }
    }

    /// Union of stored elements; certified on the smaller radius.
    pub fn union(&self, other: &SortedIntSet) -> SortedIntSet {
        let elements = merge_dedup(&self.elements, &other.elements);
        SortedIntSet { elements, certified_bound: min_bound(self.certified_bound, other.certified_bound) }
    }

    pub fn is_subset(&self, other: &SortedIntSet) -> bool {
        self.elements.iter().all(|&x| other.contains_stored(x))
    }

    /// One integer per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.elements.len() * 4);
        for x in &self.elements {
            s.push_str(&x.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for SortedIntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Int> for SortedIntSet {
    fn from_iter<I: IntoIterator<Item = Int>>(iter: I) -> Self {
        SortedIntSet::exact(iter)
    }
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    elements: Vec<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certified_bound: Option<Int>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SetInput {
    Bare(Vec<Int>),
    Full(SetRepr),
}

impl Serialize for SortedIntSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetRepr { elements: self.elements.clone(), certified_bound: self.certified_bound }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SortedIntSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (elements, bound) = match SetInput::deserialize(d)? {
            SetInput::Bare(e) => (e, None),
            SetInput::Full(r) => (r.elements, r.certified_bound),
        };
        SortedIntSet::from_sorted(elements, bound).map_err(serde::de::Error::custom)
    }
}

fn min_bound(a: Option<Int>, b: Option<Int>) -> Option<Int> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn merge_dedup(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x <= y => {
                i += 1;
                if x == y {
                    j += 1;
                }
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// Sorted, deduplicated `{x + y}` of two sorted slices.
fn sum_sorted(a: &[Int], b: &[Int]) -> Result<Vec<Int>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let reach = |s: &[Int]| s[0].unsigned_abs().max(s[s.len() - 1].unsigned_abs());
    if reach(a).checked_add(reach(b)).is_none_or(|r| r > Int::MAX as u64) {
        return Err(Error::Overflow("sumset"));
    }
    let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if small.len() <= 64 {
        // k-way merge of the shifted copies big + small[j]
        let mut heap: BinaryHeap<Reverse<(Int, usize, usize)>> =
            small.iter().enumerate().map(|(j, &s)| Reverse((big[0] + s, j, 0))).collect();
        let mut out: Vec<Int> = Vec::with_capacity(big.len() * small.len().min(4));
        while let Some(Reverse((v, j, i))) = heap.pop() {
            if out.last() != Some(&v) {
                out.push(v);
            }
            if i + 1 < big.len() {
                heap.push(Reverse((big[i + 1] + small[j], j, i + 1)));
            }
        }
        Ok(out)
    } else {
        let mut out: Vec<Int> = Vec::with_capacity(big.len() * small.len());
        for &x in small {
            out.extend(big.iter().map(|&y| x + y));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

fn sumset_bound(a: &SortedIntSet, b: &SortedIntSet) -> Option<Int> {
    let from_a = a.certified_bound.map(|ba| (ba - b.max_abs()).max(0));
    let from_b = b.certified_bound.map(|bb| (bb - a.max_abs()).max(0));
    min_bound(from_a, from_b)
}

/// `{x + y : x ∈ a, y ∈ b}`. The certified radius of the result is the
/// minimum over inputs of (its radius − the other's largest |element|).
pub fn sumset(a: &SortedIntSet, b: &SortedIntSet) -> Result<SortedIntSet> {
    let elements = sum_sorted(&a.elements, &b.elements)?;
    Ok(SortedIntSet { elements, certified_bound: sumset_bound(a, b) })
}

/// `{x − y : x ∈ a, y ∈ b}` with the same certification rule as [`sumset`].
pub fn difference_set(a: &SortedIntSet, b: &SortedIntSet) -> Result<SortedIntSet> {
    sumset(a, &b.negate())
}

/// `{x − y : x ∈ a, y ∈ b, |x − y| <= radius}` without materialising the
/// full difference set.
pub fn difference_set_within(a: &SortedIntSet, b: &SortedIntSet, radius: Int) -> SortedIntSet {
    let mut out = Vec::new();
    let bs = &b.elements;
    for &x in &a.elements {
        let lo = bs.partition_point(|&y| y < x.saturating_sub(radius));
        for &y in &bs[lo..] {
            if y > x.saturating_add(radius) {
                break;
            }
            out.push(x - y);
        }
    }
    out.sort_unstable();
    out.dedup();
    SortedIntSet { elements: out, certified_bound: None }
}

/// `{Σ c_i g_i : |c_i| <= bounds_i}`.
pub fn signed_sums(generators: &[Int], coefficient_bounds: &[Int]) -> Result<SortedIntSet> {
    if generators.len() != coefficient_bounds.len() {
        return Err(Error::InvalidArgument(format!(
            "{} generators but {} coefficient bounds",
            generators.len(),
            coefficient_bounds.len()
        )));
    }
    let mut acc = SortedIntSet::singleton(0);
    for (&g, &b) in generators.iter().zip(coefficient_bounds) {
        if g <= 0 {
            return Err(Error::InvalidArgument(format!("generator {g} is not positive")));
        }
        if b <= 0 {
            return Err(Error::InvalidArgument(format!("coefficient bound {b} is not positive")));
        }
        let layer = (-b..=b)
            .map(|c| c.checked_mul(g).ok_or(Error::Overflow("signed_sums")))
            .collect::<Result<Vec<_>>>()?;
        acc = sumset(&acc, &SortedIntSet::from_sorted_unchecked(layer, None))?;
    }
    Ok(acc)
}

/// A set that can answer successor queries, possibly without storing its
/// elements.
pub trait GapSource {
    /// Least element `>= x`.
    fn first_at_or_above(&self, x: Int) -> Option<Int>;
    /// Greatest element `<= x`.
    fn last_at_or_below(&self, x: Int) -> Option<Int>;
    /// Radius on which the answers are authoritative; `None` for exact sets.
    fn certified_bound(&self) -> Option<Int>;
}

impl GapSource for SortedIntSet {
    fn first_at_or_above(&self, x: Int) -> Option<Int> {
        SortedIntSet::first_at_or_above(self, x)
    }

    fn last_at_or_below(&self, x: Int) -> Option<Int> {
        SortedIntSet::last_at_or_below(self, x)
    }

    fn certified_bound(&self) -> Option<Int> {
        self.certified_bound
    }
}

/// Smallest `ℓ >= min_l` such that every window `[kℓ − w, kℓ + w]`,
/// `k ∈ multipliers`, misses `s`, with all windows inside the certified
/// radius of `s`.
pub fn find_gap_window<S: GapSource + ?Sized>(s: &S, half_width: Int, multipliers: &[Int], min_l: Int) -> Result<Int> {
    if half_width < 0 {
        return Err(Error::InvalidArgument("half_width must be nonnegative".into()));
    }
    if min_l < 1 {
        return Err(Error::InvalidArgument("min_l must be at least 1".into()));
    }
    let kmax = match multipliers.iter().max() {
        Some(&k) if multipliers.iter().all(|&k| k > 0) => k,
        Some(_) => return Err(Error::InvalidArgument("multipliers must be positive".into())),
        None => return Err(Error::InvalidArgument("multipliers must be nonempty".into())),
    };
    let mut l = min_l;
    loop {
        let reach = kmax
            .checked_mul(l)
            .and_then(|x| x.checked_add(half_width))
            .ok_or(Error::Overflow("find_gap_window"))?;
        if let Some(b) = s.certified_bound() {
            if reach > b {
                return Err(Error::InsufficientTruncation { needed: reach, certified: b });
            }
        }
        let mut next = l;
        for &k in multipliers {
            let centre = k * l;
            if let Some(x) = s.last_at_or_below(centre + half_width) {
                if x >= centre - half_width {
                    // every ℓ' with kℓ' − w <= x still has x in its window
                    next = next.max((x + half_width).div_euclid(k) + 1);
                }
            }
        }
        if next == l {
            return Ok(l);
        }
        l = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[Int]) -> SortedIntSet {
        SortedIntSet::exact(v.iter().copied())
    }

    fn brute_sum(a: &[Int], b: &[Int]) -> SortedIntSet {
        SortedIntSet::exact(a.iter().flat_map(|x| b.iter().map(move |y| x + y)))
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(&[0, 1]), &set(&[0, 2])).unwrap(), set(&[0, 1, 2, 3]));
        assert_eq!(sumset(&set(&[0, 4]), &set(&[0, 16])).unwrap(), set(&[0, 4, 16, 20]));
        let s = set(&[-7, 3, 9]);
        assert_eq!(sumset(&set(&[0]), &s).unwrap(), s);
        assert!(sumset(&set(&[]), &s).unwrap().is_empty());
    }

    #[test]
    fn sumset_certification_rule() {
        let a = SortedIntSet::certified([0, 4], 30).unwrap();
        let b = set(&[-5, 2]);
        assert_eq!(sumset(&a, &b).unwrap().certified_bound(), Some(25));
        let c = SortedIntSet::certified([0, 40], 10).unwrap();
        // 30 - 40 clamps to 0, 10 - 4 = 6
        assert_eq!(sumset(&a, &c).unwrap().certified_bound(), Some(0));
        let d = SortedIntSet::certified([1], 10).unwrap();
        assert_eq!(sumset(&a, &d).unwrap().certified_bound(), Some(6));
    }

    #[test]
    fn difference_set_examples() {
        let a = set(&[0, 1, 3]);
        assert_eq!(difference_set(&a, &a).unwrap(), set(&[-3, -2, -1, 0, 1, 2, 3]));
        assert_eq!(difference_set(&set(&[5]), &set(&[5])).unwrap(), set(&[0]));
        let b = set(&[0, 4, 20]);
        let oracle = SortedIntSet::exact(
            b.elements().iter().flat_map(|x| b.elements().iter().map(move |y| x - y)),
        );
        assert_eq!(oracle, set(&[-20, -16, -4, 0, 4, 16, 20]));
        assert_eq!(difference_set(&b, &b).unwrap(), oracle);
    }

    #[test]
    fn signed_sums_examples() {
        assert_eq!(
            signed_sums(&[4, 16], &[1, 1]).unwrap(),
            set(&[-20, -16, -12, -4, 0, 4, 12, 16, 20])
        );
        assert_eq!(signed_sums(&[2], &[1]).unwrap(), set(&[-2, 0, 2]));
        // 15 coefficient tuples c1 ∈ [-2,2], c2 ∈ [-1,1]
        let oracle: SortedIntSet = (-2..=2).flat_map(|c1| (-1..=1).map(move |c2| c1 + 10 * c2)).collect();
        assert_eq!(oracle, set(&[-12, -11, -10, -9, -8, -2, -1, 0, 1, 2, 8, 9, 10, 11, 12]));
        assert_eq!(signed_sums(&[1, 10], &[2, 1]).unwrap(), oracle);
        assert!(matches!(signed_sums(&[1, 2], &[1]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn gap_window_examples() {
        let s = SortedIntSet::certified([-20, -16, -12, -4, 0, 4, 12, 16, 20], 30).unwrap();
        assert_eq!(find_gap_window(&s, 2, &[1], 1).unwrap(), 7);
        let z = SortedIntSet::certified([0], 10).unwrap();
        assert_eq!(find_gap_window(&z, 1, &[1], 1).unwrap(), 2);
        assert!(matches!(
            find_gap_window(&s, 2, &[1, 2], 1),
            Err(Error::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn gap_window_insufficient_matches_exhaustive_scan() {
        let s = SortedIntSet::certified([-20, -16, -12, -4, 0, 4, 12, 16, 20], 30).unwrap();
        // every ℓ in 1..=14 fails one of the two windows
        for l in 1..=14 {
            let hit = [1, 2].iter().any(|&k| s.any_in(k * l - 2, k * l + 2));
            assert!(hit, "ℓ = {l} should fail");
        }
        // ℓ = 15 needs 2·15 + 2 > 30
        assert!(matches!(find_gap_window(&s, 2, &[1, 2], 1), Err(Error::InsufficientTruncation { .. })));
    }

    #[test]
    fn gap_window_rejects_bad_arguments() {
        let s = set(&[0]);
        assert!(find_gap_window(&s, -1, &[1], 1).is_err());
        assert!(find_gap_window(&s, 1, &[], 1).is_err());
        assert!(find_gap_window(&s, 1, &[0], 1).is_err());
        assert!(find_gap_window(&s, 1, &[1], 0).is_err());
        // exactly finite sets are authoritative everywhere
        assert_eq!(find_gap_window(&s, 3, &[2], 1).unwrap(), 2);
    }

    #[test]
    fn contains_refuses_beyond_bound() {
        let s = SortedIntSet::certified([0, 4], 5).unwrap();
        assert!(s.contains(4).unwrap());
        assert!(!s.contains(-5).unwrap());
        assert!(s.contains(6).is_err());
    }

    #[test]
    fn windowed_difference_set() {
        let a = set(&[0, 3, 10, 11, 40]);
        let full = difference_set(&a, &a).unwrap();
        assert_eq!(difference_set_within(&a, &a, 10).elements(), full.restrict(10).elements());
    }

    #[test]
    fn json_forms() {
        let s = SortedIntSet::certified([-1, 0, 1], 3).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"elements":[-1,0,1],"certified_bound":3}"#);
        assert_eq!(serde_json::from_str::<SortedIntSet>(&j).unwrap(), s);
        assert_eq!(serde_json::from_str::<SortedIntSet>("[1,2]").unwrap(), set(&[1, 2]));
        assert!(serde_json::from_str::<SortedIntSet>("[2,1]").is_err());
        assert_eq!(set(&[3, -1]).to_csv(), "-1\n3\n");
    }

    fn small_set() -> impl Strategy<Value = Vec<Int>> {
        prop::collection::vec(-40i64..40, 0..8)
    }

    proptest! {
        #[test]
        fn sumset_matches_brute_force_and_commutes(a in small_set(), b in small_set()) {
            let (sa, sb) = (set(&a), set(&b));
            let ab = sumset(&sa, &sb).unwrap();
            prop_assert_eq!(&ab, &brute_sum(&a, &b));
            prop_assert_eq!(ab, sumset(&sb, &sa).unwrap());
        }

        #[test]
        fn self_difference_is_symmetric(a in prop::collection::vec(-40i64..40, 1..8)) {
            let sa = set(&a);
            let d = difference_set(&sa, &sa).unwrap();
            prop_assert!(d.is_symmetric());
            prop_assert!(d.contains_stored(0));
        }

        #[test]
        fn decomposition_identity(a in small_set(), b in small_set()) {
            let (sa, sb) = (set(&a), set(&b));
            let s = sumset(&sa, &sb).unwrap();
            let lhs = difference_set(&s, &s).unwrap();
            let rhs = sumset(&difference_set(&sa, &sa).unwrap(), &difference_set(&sb, &sb).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn signed_sums_equal_difference_of_subset_sums(g in prop::collection::vec(1i64..30, 0..=5)) {
            let mut d = set(&[0]);
            for &x in &g {
                d = sumset(&d, &set(&[0, x])).unwrap();
            }
            let ones = vec![1; g.len()];
            prop_assert_eq!(signed_sums(&g, &ones).unwrap(), difference_set(&d, &d).unwrap());
        }

        #[test]
        fn gap_window_is_minimal_and_sound(
            mut a in prop::collection::vec(-60i64..60, 0..12),
            w in 0i64..4,
            ks in prop::collection::vec(1i64..4, 1..3),
            min_l in 1i64..6,
        ) {
            a.push(0);
            let s = SortedIntSet::certified(a.iter().flat_map(|&x| [x, -x]), 200).unwrap();
            match find_gap_window(&s, w, &ks, min_l) {
                Ok(l) => {
                    prop_assert!(l >= min_l);
                    for &k in &ks {
                        prop_assert!(!s.any_in(k * l - w, k * l + w));
                        prop_assert!(k * l + w <= 200);
                    }
                    for cand in min_l..l {
                        prop_assert!(ks.iter().any(|&k| s.any_in(k * cand - w, k * cand + w)));
                    }
                }
                Err(Error::InsufficientTruncation { .. }) => {
                    let kmax = *ks.iter().max().unwrap();
                    let mut cand = min_l;
                    while kmax * cand + w <= 200 {
                        prop_assert!(ks.iter().any(|&k| s.any_in(k * cand - w, k * cand + w)));
                        cand += 1;
                    }
                }
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
