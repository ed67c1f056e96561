//! Skyscraper `Z^d` actions: product-form conservative sets and gap search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intcomb::{self, SortedIntSet};
use crate::multipliers::{FactCheck, VerificationReport};
use crate::Int;

/// Product sets above this many points keep their factor form.
pub const MATERIALIZE_CAP: u128 = 1_000_000;

/// Parameters `a_1, …, a_d` and heights `h_1 < h_2 < …`; the grid `G_n`
/// has side lengths `a_i h_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    pub a: Vec<Int>,
    pub heights: Vec<Int>,
}

impl GridSpec {
    pub fn new(a: Vec<Int>, heights: Vec<Int>) -> Result<Self> {
        let g = GridSpec { d: a.len(), a, heights };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.a.len() != self.d {
            return Err(Error::InvalidArgument(format!("need {} positive parameters", self.d.max(1))));
        }
        if self.a.iter().any(|&x| x <= 0) {
            return Err(Error::InvalidArgument("parameters a_i must be positive".into()));
        }
        let mut prev = 1;
        for &h in &self.heights {
            if h < 2 * prev {
                return Err(Error::InvariantViolation(format!("height {h} is below twice {prev}")));
            }
            prev = h;
        }
        Ok(())
    }

    pub fn dims(&self, n: usize) -> Result<Vec<Int>> {
        let h = *self.heights.get(n.wrapping_sub(1)).ok_or(Error::MissingStage(n))?;
        self.a.iter().map(|&a| a.checked_mul(h).ok_or(Error::Overflow("grid dimensions"))).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: GridSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// Sorted lexicographically, deduplicated.
    Listed(Vec<Vec<Int>>),
    Product(Vec<SortedIntSet>),
}

/// Finite set of points of `Z^d`, authoritative on the box
/// `[−certified_box, certified_box]^d` (everywhere when `None`).
#[derive(Clone, Debug)]
pub struct LatticeSet {
    d: usize,
    repr: Repr,
    certified_box: Option<Int>,
}

impl LatticeSet {
    pub fn from_points(d: usize, points: impl IntoIterator<Item = Vec<Int>>, certified_box: Option<Int>) -> Result<Self> {
        let mut pts: Vec<Vec<Int>> = points.into_iter().collect();
        if d == 0 || pts.iter().any(|p| p.len() != d) {
            return Err(Error::InvalidArgument(format!("points must have {d} > 0 coordinates")));
        }
        pts.sort();
        pts.dedup();
        Ok(LatticeSet { d, repr: Repr::Listed(pts), certified_box })
    }

    /// `f_1 × … × f_d`, listed when small enough.
    pub fn product(factors: Vec<SortedIntSet>, certified_box: Option<Int>) -> Result<Self> {
        let d = factors.len();
        if d == 0 {
            return Err(Error::InvalidArgument("a product needs at least one factor".into()));
        }
        let s = LatticeSet { d, repr: Repr::Product(factors), certified_box };
        if s.len() <= MATERIALIZE_CAP {
            let pts = s.points()?;
            return Ok(LatticeSet { d, repr: Repr::Listed(pts), certified_box });
        }
        Ok(s)
    }

    pub fn origin(d: usize) -> Self {
        LatticeSet { d, repr: Repr::Listed(vec![vec![0; d]]), certified_box: None }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn certified_box(&self) -> Option<Int> {
        self.certified_box
    }

    pub fn with_certified_box(mut self, b: Option<Int>) -> Self {
        self.certified_box = b;
        self
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.repr, Repr::Listed(_))
    }

    pub fn len(&self) -> u128 {
        match &self.repr {
            Repr::Listed(p) => p.len() as u128,
            Repr::Product(f) => f.iter().map(|s| s.len() as u128).product(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in lexicographic order; refused above [`MATERIALIZE_CAP`].
    pub fn points(&self) -> Result<Vec<Vec<Int>>> {
        match &self.repr {
            Repr::Listed(p) => Ok(p.clone()),
            Repr::Product(f) => {
                if self.len() > MATERIALIZE_CAP {
                    return Err(Error::InvalidArgument(format!("{} points exceed the listing cap", self.len())));
                }
                let mut out: Vec<Vec<Int>> = vec![vec![]];
                for s in f {
                    out = out
                        .into_iter()
                        .flat_map(|p| {
                            s.elements().iter().map(move |&x| {
                                let mut q = p.clone();
                                q.push(x);
                                q
                            })
                        })
                        .collect();
                }
                Ok(out)
            }
        }
    }

    pub fn contains(&self, p: &[Int]) -> bool {
        match &self.repr {
            Repr::Listed(pts) => pts.binary_search_by(|q| q.as_slice().cmp(p)).is_ok(),
            Repr::Product(f) => f.iter().zip(p).all(|(s, &x)| s.contains_stored(x)),
        }
    }

    /// Coordinate `i` of every point.
    pub fn projection(&self, i: usize) -> SortedIntSet {
        match &self.repr {
            Repr::Listed(pts) => SortedIntSet::exact(pts.iter().map(|p| p[i])),
            Repr::Product(f) => f[i].clone().with_certified_bound(None),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.repr {
            Repr::Listed(pts) => pts.iter().all(|p| self.contains(&p.iter().map(|x| -x).collect::<Vec<_>>())),
            Repr::Product(f) => f.iter().all(|s| s.is_symmetric()),
        }
    }

    /// Largest coordinate in absolute value.
    pub fn max_abs(&self) -> Int {
        match &self.repr {
            Repr::Listed(pts) => pts.iter().flat_map(|p| p.iter().map(|x| x.abs())).max().unwrap_or(0),
            Repr::Product(f) => f.iter().map(|s| s.max_abs()).max().unwrap_or(0),
        }
    }

    /// A point in the box `Π [lo_i, hi_i]`, preferring for each coordinate
    /// the largest value when `prefer_high[i]`, else the smallest.
    fn point_in_box(&self, lo: &[Int], hi: &[Int], prefer_high: &[bool]) -> Option<Vec<Int>> {
        match &self.repr {
            Repr::Product(f) => f
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let r = s.range(lo[i], hi[i]);
                    if prefer_high[i] { r.last() } else { r.first() }.copied()
                })
                .collect(),
            Repr::Listed(pts) => {
                let start = pts.partition_point(|p| p[0] < lo[0]);
                pts[start..]
                    .iter()
                    .take_while(|p| p[0] <= hi[0])
                    .find(|p| p.iter().zip(lo.iter().zip(hi)).all(|(x, (a, b))| a <= x && x <= b))
                    .cloned()
            }
        }
    }

    /// Points other than the origin shared with `other`, up to `limit`.
    pub fn common_off_origin(&self, other: &LatticeSet, limit: usize) -> Result<Vec<Vec<Int>>> {
        if self.d != other.d {
            return Err(Error::InvalidArgument("dimensions differ".into()));
        }
        if let (Repr::Product(a), Repr::Product(b)) = (&self.repr, &other.repr) {
            let meet: Vec<SortedIntSet> = a.iter().zip(b).map(|(x, y)| x.intersection(y)).collect();
            return LatticeSet { d: self.d, repr: Repr::Product(meet), certified_box: None }
                .off_origin_points(limit);
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out = Vec::new();
        for p in small.points()? {
            if p.iter().any(|&x| x != 0) && big.contains(&p) {
                out.push(p);
                if out.len() == limit {
                    break;
                }
            }
        }
        Ok(out)
    }

    fn off_origin_points(&self, limit: usize) -> Result<Vec<Vec<Int>>> {
        let Repr::Product(f) = &self.repr else {
            return Ok(self.points()?.into_iter().filter(|p| p.iter().any(|&x| x != 0)).take(limit).collect());
        };
        // a product has a point off the origin iff some factor does
        let mut out = Vec::new();
        for (i, s) in f.iter().enumerate() {
            if f.iter().any(|t| t.is_empty()) {
                break;
            }
            for &x in s.elements().iter().filter(|&&x| x != 0) {
                let p: Vec<Int> =
                    f.iter().enumerate().map(|(j, t)| if j == i { x } else { t.elements()[0] }).collect();
                out.push(p);
                if out.len() == limit {
                    return Ok(out);
                }
            }
        }
        Ok(out)
    }

    /// `{p + q}` of two listed sets.
    pub fn sumset(&self, other: &LatticeSet) -> Result<LatticeSet> {
        let (a, b) = (self.points()?, other.points()?);
        let mut out = Vec::with_capacity(a.len() * b.len());
        for p in &a {
            for q in &b {
                out.push(
                    p.iter()
                        .zip(q)
                        .map(|(x, y)| x.checked_add(*y).ok_or(Error::Overflow("lattice sumset")))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
        }
        LatticeSet::from_points(self.d, out, None)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.points()?).expect("points serialise"))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let pts: Vec<Vec<Int>> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let d = pts.first().map(|p| p.len()).ok_or_else(|| Error::Parse("empty point list".into()))?;
        LatticeSet::from_points(d, pts, None)
    }
}

impl PartialEq for LatticeSet {
    fn eq(&self, other: &Self) -> bool {
        if self.d != other.d || self.len() != other.len() {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Listed(a), Repr::Listed(b)) => a == b,
            (Repr::Product(a), Repr::Product(b)) => a.iter().zip(b).all(|(x, y)| x.elements() == y.elements()),
            (Repr::Listed(a), _) => a.iter().all(|p| other.contains(p)),
            (_, Repr::Listed(b)) => b.iter().all(|p| self.contains(p)),
        }
    }
}

/// Factor `i` of `C^m`: `signed_sums(a_i h_1, …, a_i h_{m−1})`.
pub fn zd_factor(grid: &GridSpec, i: usize, m: usize) -> Result<SortedIntSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("stages start at 1".into()));
    }
    if grid.heights.len() < m - 1 {
        return Err(Error::MissingStage(m - 1));
    }
    let gens = grid.heights[..m - 1]
        .iter()
        .map(|&h| h.checked_mul(grid.a[i]).ok_or(Error::Overflow("zd generators")))
        .collect::<Result<Vec<_>>>()?;
    intcomb::signed_sums(&gens, &vec![1; gens.len()])
}

/// `C^m` of the base cell as the product of its coordinate factors.
pub fn zd_conservative_set(grid: &GridSpec, m: usize) -> Result<LatticeSet> {
    let factors = (0..grid.d).map(|i| zd_factor(grid, i, m)).collect::<Result<Vec<_>>>()?;
    LatticeSet::product(factors, None)
}

/// `C^{m+1} = C^m ⊕ {(c_1 a_1 h_m, …, c_d a_d h_m) : c_i ∈ {−1, 0, 1}}`.
pub fn zd_step(grid: &GridSpec, prev: &LatticeSet, m: usize) -> Result<LatticeSet> {
    let h = *grid.heights.get(m.wrapping_sub(1)).ok_or(Error::MissingStage(m))?;
    let gens: Vec<SortedIntSet> = grid.a.iter().map(|&a| SortedIntSet::exact([-a * h, 0, a * h])).collect();
    prev.sumset(&LatticeSet::product(gens, None)?)
}

/// `C^m` by iterating [`zd_step`] from the origin.
pub fn zd_conservative_by_steps(grid: &GridSpec, m: usize) -> Result<LatticeSet> {
    let mut acc = LatticeSet::origin(grid.d);
    for k in 1..m {
        acc = zd_step(grid, &acc, k)?;
    }
    Ok(acc)
}

/// Least `ℓ >= min_l` such that every window
/// `(c_1 a_1 ℓ, …, c_d a_d ℓ) ⊕ [−n, n]^d`, `c ∈ {−1, 0, 1}^d`, misses `c`.
/// With `origin_exempt` the window at `c = 0` is skipped: the caller
/// tolerates the origin and has already cleared that window.
pub fn find_adequate_gap(set: &LatticeSet, a: &[Int], half_width: Int, min_l: Int, origin_exempt: bool) -> Result<Int> {
    let d = set.dim();
    if a.len() != d || a.iter().any(|&x| x <= 0) {
        return Err(Error::InvalidArgument(format!("need {d} positive parameters")));
    }
    if half_width < 0 || min_l < 1 {
        return Err(Error::InvalidArgument("need half_width >= 0 and min_l >= 1".into()));
    }
    let amax = *a.iter().max().unwrap();
    let signs: Vec<Vec<Int>> = (0..3usize.pow(d as u32))
        .map(|mut t| {
            (0..d)
                .map(|_| {
                    let c = (t % 3) as Int - 1;
                    t /= 3;
                    c
                })
                .collect()
        })
        .filter(|c: &Vec<Int>| !(origin_exempt && c.iter().all(|&x| x == 0)))
        .collect();
    let mut l = min_l;
    loop {
        let reach = amax.checked_mul(l).and_then(|x| x.checked_add(half_width)).ok_or(Error::Overflow("adequate gap"))?;
        if let Some(b) = set.certified_box() {
            if reach > b {
                return Err(Error::InsufficientTruncation { needed: reach, certified: b });
            }
        }
        let mut next = l;
        for c in &signs {
            let centre: Vec<Int> = c.iter().zip(a).map(|(ci, ai)| ci * ai * l).collect();
            let lo: Vec<Int> = centre.iter().map(|x| x - half_width).collect();
            let hi: Vec<Int> = centre.iter().map(|x| x + half_width).collect();
            let high: Vec<bool> = c.iter().map(|&ci| ci > 0).collect();
            if let Some(p) = set.point_in_box(&lo, &hi, &high) {
                // p stays in this window for every ℓ' up to the bound below
                let stay = (0..d)
                    .filter(|&i| c[i] != 0)
                    .map(|i| (c[i] * p[i] + half_width).div_euclid(a[i]))
                    .min();
                match stay {
                    Some(s) => next = next.max(s + 1),
                    None => {
                        return Err(Error::SearchExhausted { bound: l });
                    }
                }
            }
        }
        if next == l {
            return Ok(l);
        }
        l = next;
    }
}

/// One finite statement of a `Z^d` certificate:
/// `C^{stage+1} ∩ target = {0}` on `[−radius, radius]^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZdFact {
    pub stage: usize,
    pub factors: Vec<SortedIntSet>,
    pub radius: Int,
    pub claim: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZdCertificate {
    pub grid: GridSpec,
    pub target_id: String,
    pub depth: usize,
    pub margin: String,
    pub facts: Vec<ZdFact>,
}

impl ZdCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn check_zd_fact(grid: &GridSpec, fact: &ZdFact, target: &LatticeSet) -> std::result::Result<(), String> {
    let e = |err: Error| err.to_string();
    grid.validate().map_err(e)?;
    let fresh = (0..grid.d).map(|i| zd_factor(grid, i, fact.stage + 1)).collect::<Result<Vec<_>>>().map_err(e)?;
    if fresh.iter().map(|s| s.elements()).ne(fact.factors.iter().map(|s| s.elements())) {
        return Err("stored factors differ from recomputation".into());
    }
    let radius = fresh.iter().map(|s| s.max_abs()).max().unwrap_or(0);
    if radius > fact.radius {
        return Err("radius does not cover the set".into());
    }
    if let Some(b) = target.certified_box() {
        if b < fact.radius {
            return Err(format!("target certified only on radius {b}"));
        }
    }
    if !target.contains(&vec![0; grid.d]) {
        return Err("target misses the origin".into());
    }
    let c = LatticeSet { d: grid.d, repr: Repr::Product(fresh), certified_box: None };
    let common = c.common_off_origin(target, 1).map_err(e)?;
    match common.first() {
        None => Ok(()),
        Some(p) => Err(format!("sets also meet at {p:?}")),
    }
}

pub fn verify_zd_certificate(cert: &ZdCertificate, target: &LatticeSet) -> VerificationReport {
    let mut warnings = Vec::new();
    if cert.facts.is_empty() {
        warnings.push("certificate has no facts; passing vacuously".to_string());
    }
    let checks = cert
        .facts
        .iter()
        .enumerate()
        .map(|(index, f)| {
            let r = check_zd_fact(&cert.grid, f, target);
            FactCheck {
                index,
                kind: "zd_avoids_off_origin",
                claim: f.claim.clone(),
                passed: r.is_ok(),
                detail: r.err().unwrap_or_default(),
            }
        })
        .collect();
    VerificationReport { checks, warnings }
}

/// Heights `h_1, …, h_M` with `h_n >= 2h_{n−1}`, each the least answer to
/// [`find_adequate_gap`] (origin exempt) at half-width
/// `max_i a_i · max C_1^n + n`.
pub fn build_zd_skyscraper(
    target: &LatticeSet,
    target_id: &str,
    a: &[Int],
    depth: usize,
) -> Result<(GridSpec, ZdCertificate)> {
    let mut grid = GridSpec::new(a.to_vec(), Vec::new())?;
    if target.dim() != grid.d {
        return Err(Error::InvalidArgument("target dimension differs from the parameters".into()));
    }
    let amax = *a.iter().max().unwrap();
    let mut cert = ZdCertificate {
        grid: grid.clone(),
        target_id: target_id.to_string(),
        depth,
        margin: "half_width = max_i a_i · max C_1^n + n".to_string(),
        facts: Vec::new(),
    };
    let stall = |stage: usize, err: Error, cert: &ZdCertificate| Error::ConstructionStalled {
        stage,
        reason: format!("{err} (partial heights {:?})", cert.grid.heights),
        partial: None,
    };
    for n in 1..=depth {
        let mu = match n {
            1 => 0,
            _ => zd_factor(&grid, 0, n)?.max_abs() / grid.a[0],
        };
        let prev = if n == 1 { 1 } else { grid.heights[n - 2] };
        let hw = amax.checked_mul(mu).and_then(|x| x.checked_add(n as Int)).ok_or(Error::Overflow("zd"))?;
        let l = find_adequate_gap(target, a, hw, 2 * prev, true).map_err(|e| stall(n, e, &cert))?;
        grid.heights.push(l);
        cert.grid = grid.clone();
    }
    for n in 1..=depth {
        let factors = (0..grid.d).map(|i| zd_factor(&grid, i, n + 1)).collect::<Result<Vec<_>>>()?;
        let radius = factors.iter().map(|s| s.max_abs()).max().unwrap_or(0);
        let mut fact = ZdFact {
            stage: n,
            factors,
            radius,
            claim: format!("C^{}(I) ∩ C_{target_id} = {{0}} on [-{radius}, {radius}]^{}", n + 1, grid.d),
            verified: false,
        };
        let outcome = check_zd_fact(&grid, &fact, target);
        fact.verified = outcome.is_ok();
        cert.facts.push(fact);
        if let Err(msg) = outcome {
            return Err(Error::ConstructionStalled { stage: n, reason: msg, partial: None });
        }
    }
    Ok((grid, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::{build_avoiding_skyscraper, GapOracle, Target};
    use crate::tower::{conservative_set_trunc, preset, truncation_stage};
    use crate::LevelId;
    use proptest::prelude::*;

    fn pts(v: &[&[Int]]) -> Vec<Vec<Int>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn closed_form_examples() {
        let g = GridSpec::new(vec![1, 2], vec![3]).unwrap();
        let c = zd_conservative_set(&g, 2).unwrap();
        assert_eq!(c.len(), 9);
        assert_eq!(c.projection(0).elements(), &[-3, 0, 3]);
        assert_eq!(c.projection(1).elements(), &[-6, 0, 6]);
        assert_eq!(zd_conservative_set(&g, 1).unwrap().points().unwrap(), pts(&[&[0, 0]]));
        let g = GridSpec::new(vec![1, 1], vec![2, 5]).unwrap();
        let c = zd_conservative_set(&g, 3).unwrap();
        assert_eq!(c.len(), 81);
        assert_eq!(c.projection(0).elements(), &[-7, -5, -3, -2, 0, 2, 3, 5, 7]);
        assert!(matches!(zd_conservative_set(&g, 4), Err(Error::MissingStage(3))));
    }

    #[test]
    fn gap_examples() {
        let o = LatticeSet::origin(2).with_certified_box(Some(10));
        assert_eq!(find_adequate_gap(&o, &[1, 1], 1, 1, true).unwrap(), 2);
        assert_eq!(find_adequate_gap(&o, &[1, 1], 0, 1, true).unwrap(), 1);
        assert!(matches!(
            find_adequate_gap(&o, &[1, 1], 5, 8, true),
            Err(Error::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn gap_minimality_by_brute_force() {
        let s = LatticeSet::from_points(2, pts(&[&[0, 0], &[3, 1], &[-3, -1], &[5, -5], &[-5, 5]]), Some(60)).unwrap();
        let l = find_adequate_gap(&s, &[1, 2], 1, 1, true).unwrap();
        let blocked = |l: Int| {
            s.points().unwrap().iter().any(|p| {
                (-1..=1).any(|c1: Int| {
                    (-1..=1).any(|c2: Int| {
                        (c1, c2) != (0, 0) && (p[0] - c1 * l).abs() <= 1 && (p[1] - 2 * c2 * l).abs() <= 1
                    })
                })
            })
        };
        assert!(!blocked(l));
        assert!((1..l).all(blocked));
    }

    #[test]
    fn builder_on_origin_target() {
        let o = LatticeSet::origin(2);
        let (g, cert) = build_zd_skyscraper(&o, "origin", &[1, 1], 3).unwrap();
        assert_eq!(g.heights.len(), 3);
        assert!(verify_zd_certificate(&cert, &o).all_passed());
        let back = ZdCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn one_dimension_matches_scalar_builder() {
        let hk = preset("hajian_kakutani").unwrap();
        let level = LevelId::base_of_c1();
        let m = truncation_stage(&hk, level, 5000).unwrap();
        let set = conservative_set_trunc(&hk, level, m).unwrap().restrict(5000);
        let lattice = LatticeSet::from_points(1, set.elements().iter().map(|&x| vec![x]), Some(5000)).unwrap();
        let (g, cert) = build_zd_skyscraper(&lattice, "hk", &[1], 3).unwrap();
        let mut oracle = GapOracle::new(Target::set("hk", set), 0).unwrap();
        let scalar = build_avoiding_skyscraper(&mut oracle, 3).unwrap();
        assert_eq!(g.heights, scalar.heights);
        assert!(verify_zd_certificate(&cert, &lattice).all_passed());
    }

    #[test]
    fn diagonal_target_stalls() {
        let line = LatticeSet::from_points(2, (-50..=50).map(|t| vec![t, 2 * t]), Some(50)).unwrap();
        assert!(matches!(
            build_zd_skyscraper(&line, "line", &[1, 2], 2),
            Err(Error::ConstructionStalled { stage: 1, .. })
        ));
    }

    #[test]
    fn lattice_json_round_trip() {
        let s = LatticeSet::from_points(2, pts(&[&[1, 2], &[0, 0]]), None).unwrap();
        assert_eq!(s.to_json().unwrap(), "[[0,0],[1,2]]");
        assert_eq!(LatticeSet::from_json("[[1,2],[0,0]]").unwrap(), s);
        let g = GridSpec::new(vec![1, 2], vec![3, 7]).unwrap();
        assert_eq!(GridSpec::from_json(&g.to_json()).unwrap(), g);
        assert!(GridSpec::from_json(r#"{"d":1,"a":[1],"heights":[3,5]}"#).is_err());
    }

    #[test]
    fn large_products_stay_factored() {
        let f = SortedIntSet::exact(-600..=600);
        let s = LatticeSet::product(vec![f.clone(), f], None).unwrap();
        assert!(!s.is_materialized());
        assert!(s.contains(&[600, -600]));
        assert!(s.is_symmetric());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn product_matches_recursion(
            a in prop::collection::vec(1i64..4, 1..=3),
            gaps in prop::collection::vec(0i64..4, 4),
        ) {
            let mut hs = Vec::new();
            let mut prev = 1;
            for g in gaps {
                prev = 2 * prev + g;
                hs.push(prev);
            }
            let grid = GridSpec::new(a, hs).unwrap();
            for m in 1..=5 {
                let c = zd_conservative_set(&grid, m).unwrap();
                prop_assert_eq!(&c, &zd_conservative_by_steps(&grid, m).unwrap());
                prop_assert!(c.is_symmetric());
                for i in 0..grid.d {
                    let gens: Vec<Int> = grid.heights[..m - 1].iter().map(|h| h * grid.a[i]).collect();
                    let ss = intcomb::signed_sums(&gens, &vec![1; gens.len()]).unwrap();
                    prop_assert_eq!(c.projection(i).into_elements(), ss.into_elements());
                }
            }
        }
    }
}
