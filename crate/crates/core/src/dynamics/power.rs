//! `T^n` on interval sets.
//!
//! A set is cut into pieces, each a subinterval of one level of some column.
//! A piece whose orbit segment stays inside its column is translated level by
//! level; a piece that would leave through the top or bottom is split into
//! its copies in the next column and retried there. Whatever still leaves the
//! deepest column allowed is reported as lost mass.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::dynamics::column::Geometry;
use crate::dynamics::interval::IntervalSet;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::tower::CutSpacerSpec;
use crate::Int;

pub const DEFAULT_DEPTH_CAP: usize = 24;

/// Depth cap from `RANK1LAB_DEPTH_CAP`, or [`DEFAULT_DEPTH_CAP`].
pub fn depth_cap() -> usize {
    std::env::var("RANK1LAB_DEPTH_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DEPTH_CAP)
}

#[derive(Clone, Debug)]
pub struct PowerOptions {
    /// Column the set is assumed to live in; a lower bound on the depth.
    pub stage_hint: usize,
    /// Pieces leaving a column shallower than this are always refined.
    pub min_depth: usize,
    pub cap: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions { stage_hint: 0, min_depth: 0, cap: depth_cap() }
    }
}

/// Known part of `T^n(set)` and the measure of the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerImage {
    pub image: IntervalSet,
    pub lost_mass: Rational,
    /// Deepest column used.
    pub depth: usize,
}

#[derive(Clone, Debug)]
enum Span {
    Full,
    Part(Rational, Rational),
}

#[derive(Clone, Debug)]
struct Piece {
    stage: usize,
    idx: Int,
    span: Span,
}

fn big(x: Int) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Least column containing `[0, x)`, searched up to `limit`.
fn covering_stage(spec: &CutSpacerSpec, x: &Rational, limit: usize) -> Result<usize> {
    let mut w = rational::one();
    for m in 0..=limit {
        if m > 0 {
            w /= big(spec.stage(m - 1)?.r as Int);
        }
        if *x <= &w * big(spec.height(m)?) {
            return Ok(m);
        }
        if !spec.is_defined(m) {
            break;
        }
    }
    Err(Error::InvalidArgument(format!(
        "set reaches {} which lies outside every available column",
        rational::to_text(x)
    )))
}

fn decompose(g: &Geometry, set: &IntervalSet, m: usize) -> Vec<Piece> {
    let w = g.width(m);
    let mut out = Vec::new();
    for (a, b) in set.intervals() {
        let q0 = rational::floor_int(&(a / w)).expect("cell index fits");
        let q1 = rational::ceil_int(&(b / w)).expect("cell index fits");
        for q in q0..q1 {
            let left = w * big(q);
            let right = &left + w;
            let lo = if *a > left { a - &left } else { Rational::zero() };
            let hi = if *b < right { b - &left } else { w.clone() };
            let span = if lo.is_zero() && hi == *w { Span::Full } else { Span::Part(lo, hi) };
            out.push(Piece { stage: m, idx: g.level_of(m, q), span });
        }
    }
    out
}

fn span_measure(g: &Geometry, p: &Piece) -> Rational {
    match &p.span {
        Span::Full => g.width(p.stage).clone(),
        Span::Part(lo, hi) => hi - lo,
    }
}

fn split(g: &Geometry, p: &Piece, out: &mut Vec<Piece>) {
    let n = p.stage;
    let r = g.stage(n).r;
    let w = g.width(n + 1);
    for k in 0..r {
        let idx = g.offset(n, k) + p.idx;
        let span = match &p.span {
            Span::Full => Span::Full,
            Span::Part(lo, hi) => {
                let a = w * big(k as Int);
                let b = &a + w;
                let lo2 = if *lo > a { lo.clone() } else { a.clone() };
                let hi2 = if *hi < b { hi.clone() } else { b };
                if lo2 >= hi2 {
                    continue;
                }
                let (lo2, hi2) = (lo2 - &a, hi2 - &a);
                if lo2.is_zero() && hi2 == *w {
                    Span::Full
                } else {
                    Span::Part(lo2, hi2)
                }
            }
        };
        out.push(Piece { stage: n + 1, idx, span });
    }
}

fn to_interval(g: &Geometry, p: &Piece) -> (Rational, Rational) {
    let left = g.level_left(p.stage, p.idx);
    match &p.span {
        Span::Full => {
            let right = &left + g.width(p.stage);
            (left, right)
        }
        Span::Part(lo, hi) => (&left + lo, &left + hi),
    }
}

/// Column depth needed so that orbit segments of length `|n|` from `C_m`
/// fit: the least `M >= m` with `h_M > h_m + |n|`.
pub fn required_depth(spec: &CutSpacerSpec, m: usize, n: Int, cap: usize) -> Result<usize> {
    let target = spec.height(m)?.checked_add(n.abs()).ok_or(Error::Overflow("orbit span"))?;
    let mut k = m;
    loop {
        match spec.height(k) {
            Ok(h) if h > target => return Ok(k),
            Ok(_) => {}
            Err(Error::MissingStage(_)) => return Ok(k - 1),
            Err(Error::Overflow(_)) => return Err(Error::DepthCapExceeded { required: k, cap }),
            Err(e) => return Err(e),
        }
        if k >= cap {
            return Err(Error::DepthCapExceeded { required: k + 1, cap });
        }
        k += 1;
    }
}

pub fn apply_power(spec: &CutSpacerSpec, set: &IntervalSet, n: Int, stage_hint: usize) -> Result<PowerImage> {
    apply_power_with(spec, set, n, &PowerOptions { stage_hint, ..PowerOptions::default() })
}

pub fn apply_power_with(spec: &CutSpacerSpec, set: &IntervalSet, n: Int, opts: &PowerOptions) -> Result<PowerImage> {
    if let Some(a) = set.inf() {
        if *a < rational::zero() {
            return Err(Error::InvalidArgument("sets live in [0, ∞)".into()));
        }
    }
    if n == 0 || set.is_empty() {
        return Ok(PowerImage { image: set.clone(), lost_mass: rational::zero(), depth: opts.stage_hint });
    }
    let sup = set.sup().expect("nonempty");
    let m = covering_stage(spec, sup, opts.cap)?.max(opts.stage_hint);
    let mut depth = required_depth(spec, m, n, opts.cap)?.max(opts.min_depth);
    if depth > opts.cap {
        return Err(Error::DepthCapExceeded { required: depth, cap: opts.cap });
    }
    if let Some(d) = spec.defined_stages() {
        depth = depth.min(d);
    }
    let m = m.min(depth);
    let g = Geometry::new(spec, depth)?;
    let mut stack = decompose(&g, set, m);
    let mut done = Vec::new();
    let mut lost = rational::zero();
    while let Some(p) = stack.pop() {
        let t = p.idx + n;
        if t >= 0 && t < g.height(p.stage) {
            done.push(Piece { idx: t, ..p });
        } else if p.stage < depth {
            split(&g, &p, &mut stack);
        } else {
            lost += span_measure(&g, &p);
        }
    }
    let image = IntervalSet::from_intervals(done.iter().map(|p| to_interval(&g, p)));
    Ok(PowerImage { image, lost_mass: lost, depth })
}

/// Exact enclosure of `μ(T^n a ∩ b)`: `lower` from the known image, `upper`
/// adding the lost mass.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureBounds {
    pub lower: Rational,
    pub upper: Rational,
}

impl MeasureBounds {
    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// `μ(T^n a ∩ b)`, evaluated through the forward power `|n|` (using
/// `μ(T^n a ∩ b) = μ(a ∩ T^{−n} b)`); the top of a column resolves into
/// spacers, the bottom never does.
pub fn return_measure(
    spec: &CutSpacerSpec,
    a: &IntervalSet,
    b: &IntervalSet,
    n: Int,
    opts: &PowerOptions,
) -> Result<MeasureBounds> {
    let (src, dst, k) = if n >= 0 { (a, b, n) } else { (b, a, -n) };
    let img = apply_power_with(spec, src, k, opts)?;
    let lower = img.image.intersection(dst).measure();
    let upper = &lower + &img.lost_mass;
    Ok(MeasureBounds { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::tower::preset;

    fn half() -> IntervalSet {
        IntervalSet::interval(int(0), ratio(1, 2))
    }

    #[test]
    fn one_step_up() {
        let hk = preset("hajian_kakutani").unwrap();
        let img = apply_power(&hk, &half(), 1, 1).unwrap();
        assert_eq!(img.image, IntervalSet::interval(ratio(1, 2), int(1)));
        assert_eq!(img.lost_mass, int(0));
    }

    #[test]
    fn climbing_a_full_column() {
        let hk = preset("hajian_kakutani").unwrap();
        let img = apply_power(&hk, &half(), 4, 1).unwrap();
        assert_eq!(img.lost_mass, int(0));
        assert_eq!(img.image.measure(), ratio(1, 2));
        assert!(IntervalSet::interval(ratio(1, 4), ratio(1, 2)).is_subset(&img.image));
        assert_eq!(img.image.intersection(&half()).measure(), ratio(1, 4));
    }

    #[test]
    fn zero_power_is_identity() {
        let c = preset("infinite_chacon").unwrap();
        let s = IntervalSet::interval(ratio(1, 7), ratio(5, 3));
        let img = apply_power(&c, &s, 0, 0).unwrap();
        assert_eq!(img.image, s);
        assert_eq!(img.lost_mass, int(0));
    }

    #[test]
    fn negative_powers_lose_the_bottom() {
        let hk = preset("hajian_kakutani").unwrap();
        let opts = PowerOptions { stage_hint: 1, min_depth: 6, cap: 24 };
        let img = apply_power_with(&hk, &half(), -1, &opts).unwrap();
        assert_eq!(img.lost_mass, ratio(1, 64));
        assert_eq!(img.image.measure(), ratio(1, 2) - ratio(1, 64));
    }

    #[test]
    fn depth_cap_is_enforced() {
        let hk = preset("hajian_kakutani").unwrap();
        let opts = PowerOptions { stage_hint: 1, min_depth: 0, cap: 3 };
        assert!(matches!(
            apply_power_with(&hk, &half(), 1000, &opts),
            Err(Error::DepthCapExceeded { cap: 3, .. })
        ));
    }

    #[test]
    fn return_measure_symmetry() {
        let c = preset("infinite_chacon").unwrap();
        let a = IntervalSet::interval(int(0), ratio(1, 3));
        let opts = PowerOptions::default();
        let fwd = return_measure(&c, &a, &a, 8, &opts).unwrap();
        let back = return_measure(&c, &a, &a, -8, &opts).unwrap();
        assert_eq!(fwd, back);
        assert!(fwd.is_exact());
        assert_eq!(fwd.lower, ratio(1, 9));
    }
}
