//! Cut/spacer parameterisations of rank-one transformations and their
//! combinatorial skeleton: heights, descendant sets and truncated
//! conservative sequences.

use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intcomb::{self, SortedIntSet};
use crate::Int;

/// Stages past which truncation searches give up.
pub const STAGE_CAP: usize = 48;

/// One cutting step: cut into `r` subcolumns, put `spacers[k]` spacers on
/// top of subcolumn `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub r: usize,
    pub spacers: Vec<Int>,
}

impl Stage {
    pub fn new(r: usize, spacers: Vec<Int>) -> Result<Self> {
        let stage = Stage { r, spacers };
        stage.validate()?;
        Ok(stage)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvariantViolation(format!("cut count r = {} is below 2", self.r)));
        }
        if self.spacers.len() != self.r {
            return Err(Error::InvariantViolation(format!(
                "r = {} but {} spacer entries",
                self.r,
                self.spacers.len()
            )));
        }
        if let Some(s) = self.spacers.iter().find(|&&s| s < 0) {
            return Err(Error::InvariantViolation(format!("negative spacer count {s}")));
        }
        Ok(())
    }

    pub fn last_spacer(&self) -> Int {
        self.spacers[self.r - 1]
    }

    /// `min_{0 <= j <= r-2} s_j`.
    pub fn min_inner_spacer(&self) -> Int {
        self.spacers[..self.r - 1].iter().copied().min().unwrap_or(0)
    }

    pub fn min_spacer(&self) -> Int {
        self.spacers.iter().copied().min().unwrap_or(0)
    }

    pub fn spacer_total(&self) -> Int {
        self.spacers.iter().sum()
    }
}

/// Generator extending a spec past its explicit stages. Every rule sets
/// `s_{n,k} = factor_k · h_n + offset_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `r = 2`, spacers `(0, 2h_n)`.
    HajianKakutani,
    /// `r = 3`, spacers `(0, 1, 3h_n + 1)`.
    InfiniteChacon,
    /// `r = 2`, spacers `(0, factor·h_n + offset)`.
    Skyscraper { factor: Int, offset: Int },
    /// `r` cuts with affine spacers `(factor_k, offset_k)`.
    Custom { r: usize, spacers: Vec<(Int, Int)> },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::HajianKakutani => "hajian_kakutani",
            Rule::InfiniteChacon => "infinite_chacon",
            Rule::Skyscraper { .. } => "skyscraper",
            Rule::Custom { .. } => "custom",
        }
    }

    fn affine(&self) -> (usize, Vec<(Int, Int)>) {
        match self {
            Rule::HajianKakutani => (2, vec![(0, 0), (2, 0)]),
            Rule::InfiniteChacon => (3, vec![(0, 0), (0, 1), (3, 1)]),
            Rule::Skyscraper { factor, offset } => (2, vec![(0, 0), (*factor, *offset)]),
            Rule::Custom { r, spacers } => (*r, spacers.clone()),
        }
    }

    fn validate(&self) -> Result<()> {
        let (r, sp) = self.affine();
        if r < 2 || sp.len() != r {
            return Err(Error::InvariantViolation(format!("rule `{}` has malformed cut data", self.name())));
        }
        if sp.iter().any(|&(a, b)| a < 0 || b < 0) {
            return Err(Error::InvariantViolation(format!("rule `{}` has negative coefficients", self.name())));
        }
        Ok(())
    }

    /// The stage this rule produces on a column of height `h`.
    pub fn stage_at(&self, h: Int) -> Result<Stage> {
        let (r, sp) = self.affine();
        let spacers = sp
            .iter()
            .map(|&(a, b)| a.checked_mul(h).and_then(|x| x.checked_add(b)).ok_or(Error::Overflow("rule spacers")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Stage { r, spacers })
    }
}

#[derive(Clone, Debug, Default)]
struct Cache {
    stages: Vec<Stage>,
    heights: Vec<Int>,
}

/// Full parameterisation of a rank-one transformation: explicit stages
/// followed by an optional rule. `h_0 = 1`.
pub struct CutSpacerSpec {
    name: String,
    explicit: Vec<Stage>,
    rule: Option<Rule>,
    cache: RwLock<Cache>,
}

impl Clone for CutSpacerSpec {
    fn clone(&self) -> Self {
        CutSpacerSpec {
            name: self.name.clone(),
            explicit: self.explicit.clone(),
            rule: self.rule.clone(),
            cache: RwLock::new(self.cache.read().expect("cache poisoned").clone()),
        }
    }
}

impl fmt::Debug for CutSpacerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CutSpacerSpec")
            .field("name", &self.name)
            .field("explicit", &self.explicit)
            .field("rule", &self.rule)
            .finish()
    }
}

impl PartialEq for CutSpacerSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.explicit == other.explicit && self.rule == other.rule
    }
}

impl CutSpacerSpec {
    pub fn new(name: impl Into<String>, explicit: Vec<Stage>, rule: Option<Rule>) -> Result<Self> {
        for st in &explicit {
            st.validate()?;
        }
        if let Some(rule) = &rule {
            rule.validate()?;
            if matches!(rule, Rule::Skyscraper { .. }) {
                if let Some(st) = explicit.iter().find(|st| st.r != 2 || st.spacers[0] != 0) {
                    return Err(Error::InvariantViolation(format!(
                        "skyscraper stage {st:?} must have r = 2 and no left spacers"
                    )));
                }
            }
        }
        let spec = CutSpacerSpec {
            name: name.into(),
            explicit,
            rule,
            cache: RwLock::new(Cache { stages: Vec::new(), heights: vec![1] }),
        };
        // heights of the explicit prefix must not overflow
        spec.ensure(spec.explicit.len())?;
        Ok(spec)
    }

    /// Skyscraper with column heights `h_1, …, h_M` (and `h_0 = 1`).
    pub fn skyscraper_from_heights(name: impl Into<String>, heights: &[Int], rule: Option<Rule>) -> Result<Self> {
        let mut prev = 1;
        let mut stages = Vec::with_capacity(heights.len());
        for &h in heights {
            let extra = h - 2 * prev;
            if extra < 0 {
                return Err(Error::InvariantViolation(format!("height {h} is below twice {prev}")));
            }
            stages.push(Stage { r: 2, spacers: vec![0, extra] });
            prev = h;
        }
        Self::new(name, stages, rule)
    }

    /// Spec whose stage `n` has the given block sums `h_{n,k}`.
    pub fn from_block_sums(name: impl Into<String>, blocks: &[Vec<Int>], rule: Option<Rule>) -> Result<Self> {
        let mut h = 1;
        let mut stages = Vec::with_capacity(blocks.len());
        for b in blocks {
            let spacers: Vec<Int> = b.iter().map(|&x| x - h).collect();
            let st = Stage::new(b.len(), spacers)?;
            h = b.iter().try_fold(0 as Int, |acc, &x| acc.checked_add(x)).ok_or(Error::Overflow("block sums"))?;
            stages.push(st);
        }
        Self::new(name, stages, rule)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn explicit_stages(&self) -> &[Stage] {
        &self.explicit
    }

    pub fn rule(&self) -> Option<&Rule> {
        self.rule.as_ref()
    }

    /// Number of defined stages, `None` when a rule extends them forever.
    pub fn defined_stages(&self) -> Option<usize> {
        if self.rule.is_some() {
            None
        } else {
            Some(self.explicit.len())
        }
    }

    pub fn is_defined(&self, n: usize) -> bool {
        self.defined_stages().is_none_or(|d| n < d)
    }

    fn ensure(&self, upto: usize) -> Result<()> {
        if self.cache.read().expect("cache poisoned").stages.len() >= upto {
            return Ok(());
        }
        let mut cache = self.cache.write().expect("cache poisoned");
        while cache.stages.len() < upto {
            let n = cache.stages.len();
            let h = cache.heights[n];
            let st = if n < self.explicit.len() {
                self.explicit[n].clone()
            } else if let Some(rule) = &self.rule {
                rule.stage_at(h)?
            } else {
                return Err(Error::MissingStage(n));
            };
            let next = (st.r as Int)
                .checked_mul(h)
                .and_then(|x| x.checked_add(st.spacer_total()))
                .ok_or(Error::Overflow("heights"))?;
            cache.stages.push(st);
            cache.heights.push(next);
        }
        Ok(())
    }

    pub fn stage(&self, n: usize) -> Result<Stage> {
        self.ensure(n + 1)?;
        Ok(self.cache.read().expect("cache poisoned").stages[n].clone())
    }

    /// `h_n`; needs stages `0..n`.
    pub fn height(&self, n: usize) -> Result<Int> {
        self.ensure(n)?;
        Ok(self.cache.read().expect("cache poisoned").heights[n])
    }

    /// Block sums `h_{n,k} = h_n + s_{n,k}`.
    pub fn block_sums(&self, n: usize) -> Result<Vec<Int>> {
        let st = self.stage(n)?;
        let h = self.height(n)?;
        Ok(st.spacers.iter().map(|&s| h + s).collect())
    }

    /// `max r_n` over stages `0..upto`.
    pub fn max_cuts(&self, upto: usize) -> Result<usize> {
        (0..upto).map(|n| self.stage(n).map(|s| s.r)).try_fold(0, |m, r| r.map(|r| m.max(r)))
    }

    fn to_file(&self) -> SpecFile {
        let (rule, rule_params) = match &self.rule {
            None => (None, None),
            Some(Rule::Skyscraper { factor, offset }) => (
                Some("skyscraper".to_string()),
                Some(RuleParams { factor: Some(*factor), offset: Some(*offset), r: None, spacers: None }),
            ),
            Some(Rule::Custom { r, spacers }) => (
                Some("custom".to_string()),
                Some(RuleParams {
                    factor: None,
                    offset: None,
                    r: Some(*r),
                    spacers: Some(spacers.iter().map(|&(a, b)| [a, b]).collect()),
                }),
            ),
            Some(other) => (Some(other.name().to_string()), None),
        };
        SpecFile { name: self.name.clone(), rule, rule_params, stages: self.explicit.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("spec serialises")
    }

    /// Parses the JSON spec format
    /// `{"name", "rule": string|null, "rule_params"?, "stages": [{"r", "spacers"}]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let rule = match file.rule.as_deref() {
            None => None,
            Some("hajian_kakutani") => Some(Rule::HajianKakutani),
            Some("infinite_chacon") => Some(Rule::InfiniteChacon),
            Some("skyscraper") => {
                let p = file.rule_params.as_ref();
                Some(Rule::Skyscraper {
                    factor: p.and_then(|p| p.factor).unwrap_or(2),
                    offset: p.and_then(|p| p.offset).unwrap_or(0),
                })
            }
            Some("custom") => {
                let p = file
                    .rule_params
                    .as_ref()
                    .ok_or_else(|| Error::Parse("field `rule_params`: required for rule `custom`".into()))?;
                let spacers: Vec<(Int, Int)> = p
                    .spacers
                    .as_ref()
                    .ok_or_else(|| Error::Parse("field `rule_params.spacers`: missing".into()))?
                    .iter()
                    .map(|[a, b]| (*a, *b))
                    .collect();
                Some(Rule::Custom { r: p.r.unwrap_or(spacers.len()), spacers })
            }
            Some(other) => return Err(Error::UnknownPreset(other.to_string())),
        };
        Self::new(file.name, file.stages, rule)
    }
}

impl Serialize for CutSpacerSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    name: String,
    #[serde(default)]
    rule: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rule_params: Option<RuleParams>,
    #[serde(default)]
    stages: Vec<Stage>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factor: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spacers: Option<Vec<[Int; 2]>>,
}

/// A level of column `C_stage` at height `height_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelId {
    pub stage: usize,
    pub height_index: Int,
}

impl LevelId {
    pub fn new(stage: usize, height_index: Int) -> Self {
        LevelId { stage, height_index }
    }

    /// The base level of `C_1`, the default reference level.
    pub fn base_of_c1() -> Self {
        LevelId { stage: 1, height_index: 0 }
    }

    pub fn validate(&self, spec: &CutSpacerSpec) -> Result<()> {
        let h = spec.height(self.stage)?;
        if self.height_index < 0 || self.height_index >= h {
            return Err(Error::InvalidArgument(format!(
                "height index {} outside column {} of height {h}",
                self.height_index, self.stage
            )));
        }
        Ok(())
    }
}

/// Named standard transformations.
pub fn preset(name: &str) -> Result<CutSpacerSpec> {
    match name {
        "hajian_kakutani" => CutSpacerSpec::new(name, Vec::new(), Some(Rule::HajianKakutani)),
        "infinite_chacon" => CutSpacerSpec::new(name, Vec::new(), Some(Rule::InfiniteChacon)),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// `h_0, …, h_upto`.
pub fn heights(spec: &CutSpacerSpec, upto: usize) -> Result<Vec<Int>> {
    (0..=upto).map(|n| spec.height(n)).collect()
}

/// `H_n = {0} ∪ {Σ_{k<=i} h_{n,k} : i = 0..r_n−2}`.
pub fn h_set(spec: &CutSpacerSpec, n: usize) -> Result<SortedIntSet> {
    let blocks = spec.block_sums(n)?;
    let mut acc = 0;
    let mut out = vec![0];
    for b in &blocks[..blocks.len() - 1] {
        acc += b;
        out.push(acc);
    }
    SortedIntSet::from_sorted(out, None)
}

/// `D(A, m) = h(A) + H_n ⊕ … ⊕ H_{m−1}`.
pub fn descendant_set(spec: &CutSpacerSpec, level: LevelId, m: usize) -> Result<SortedIntSet> {
    check_levels(spec, level, m)?;
    let mut acc = SortedIntSet::singleton(level.height_index);
    for n in level.stage..m {
        acc = intcomb::sumset(&acc, &h_set(spec, n)?)?;
    }
    Ok(acc)
}

fn check_levels(spec: &CutSpacerSpec, level: LevelId, m: usize) -> Result<()> {
    if m < level.stage {
        return Err(Error::InvalidArgument(format!(
            "stage {m} precedes the level's column {}",
            level.stage
        )));
    }
    level.validate(spec)
}

/// `C_T^m(A) = D(A,m) − D(A,m)`, certified on the radius where it agrees
/// with the full conservative sequence.
pub fn conservative_set_trunc(spec: &CutSpacerSpec, level: LevelId, m: usize) -> Result<SortedIntSet> {
    let d = descendant_set(spec, level, m)?;
    let c = intcomb::difference_set(&d, &d)?;
    let bound = certified_radius(spec, level.stage, m)?;
    Ok(c.with_certified_bound(Some(bound)))
}

/// `C_T^m(A) ∩ [−window, window]` through the definition, without
/// materialising the whole difference set.
pub fn conservative_set_window(spec: &CutSpacerSpec, level: LevelId, m: usize, window: Int) -> Result<SortedIntSet> {
    let d = descendant_set(spec, level, m)?;
    let c = intcomb::difference_set_within(&d, &d, window);
    let bound = certified_radius(spec, level.stage, m)?.min(window);
    Ok(c.with_certified_bound(Some(bound)))
}

/// `H_n − H_n = {c Σ_{k=i}^{j} h_{n,k} : c ∈ {−1,0,1}, 0 <= i <= j <= r_n−2}`.
pub fn step_generators(spec: &CutSpacerSpec, n: usize) -> Result<SortedIntSet> {
    let blocks = spec.block_sums(n)?;
    let inner = &blocks[..blocks.len() - 1];
    let mut out = vec![0];
    for i in 0..inner.len() {
        let mut acc: Int = 0;
        for b in &inner[i..] {
            acc += b;
            out.push(acc);
            out.push(-acc);
        }
    }
    Ok(SortedIntSet::exact(out))
}

/// One recursion step `C^m = C^{m−1} ⊕ (H_{m−1} − H_{m−1})` for the base
/// level of `C_1`.
pub fn conservative_step(spec: &CutSpacerSpec, prev: &SortedIntSet, m: usize) -> Result<SortedIntSet> {
    step_for_level(spec, 1, prev, m)
}

/// The recursion step for a level of column `level_stage`.
pub fn step_for_level(spec: &CutSpacerSpec, level_stage: usize, prev: &SortedIntSet, m: usize) -> Result<SortedIntSet> {
    if m <= level_stage {
        return Err(Error::InvalidArgument(format!("cannot step to stage {m} from a level of column {level_stage}")));
    }
    let next = intcomb::sumset(&prev.clone().with_certified_bound(None), &step_generators(spec, m - 1)?)?;
    let bound = certified_radius(spec, level_stage, m)?;
    Ok(next.with_certified_bound(Some(bound)))
}

/// `C^m` of a level in column `level_stage`, built by the recursion.
pub fn conservative_set_by_steps(spec: &CutSpacerSpec, level_stage: usize, m: usize) -> Result<SortedIntSet> {
    let mut acc = SortedIntSet::singleton(0);
    for k in level_stage + 1..=m {
        acc = step_for_level(spec, level_stage, &acc, k)?;
    }
    let bound = certified_radius(spec, level_stage, m)?;
    Ok(acc.with_certified_bound(Some(bound)))
}

/// `max C_T^m(I)` for `I` the base of `C_1`:
/// `h_m − h_1 − Σ_{k=1}^{m−1} s_{k, r_k−1}`.
pub fn max_return(spec: &CutSpacerSpec, m: usize) -> Result<Int> {
    if m < 1 {
        return Err(Error::InvalidArgument("max_return needs m >= 1".into()));
    }
    max_return_from(spec, 1, m)
}

/// `max C^m(A)` for a level `A` of column `n`.
pub fn max_return_from(spec: &CutSpacerSpec, n: usize, m: usize) -> Result<Int> {
    let mut total = spec.height(m)? - spec.height(n)?;
    for k in n..m {
        total -= spec.stage(k)?.last_spacer();
    }
    Ok(total)
}

/// `h_n + Σ_{j=n}^{m−1} s_{j, r_j−1}`: a lower bound on every new element
/// created at any step `>= m` for a level of column `n`.
fn tail_floor(spec: &CutSpacerSpec, n: usize, m: usize) -> Result<Int> {
    let mut acc = spec.height(n)?;
    for j in n..m {
        acc = acc.checked_add(spec.stage(j)?.last_spacer()).ok_or(Error::Overflow("tail bound"))?;
    }
    Ok(acc)
}

/// Lower bound on `|x|` for `x ∈ C^{m+1} ∖ C^m`:
/// `min_k h_{m,k} − max C^m`.
pub fn new_element_bound(spec: &CutSpacerSpec, n: usize, m: usize) -> Result<Int> {
    let st = spec.stage(m)?;
    Ok(spec.height(m)? + st.min_spacer() - max_return_from(spec, n, m)?)
}

/// Largest `N` such that `C^m(A)` agrees with `C_T(A)` on `[−N, N]`, for a
/// level `A` of column `n`. Steps not covered by explicit data (or past the
/// stage cap) are bounded by [`tail_floor`], which never decreases.
pub fn certified_radius(spec: &CutSpacerSpec, n: usize, m: usize) -> Result<Int> {
    let mut running = Int::MAX;
    let mut k = m;
    loop {
        let floor = match tail_floor(spec, n, k) {
            Ok(f) => f,
            Err(Error::Overflow(_)) => break,
            Err(e) => return Err(e),
        };
        if floor >= running || !spec.is_defined(k) || k >= m + STAGE_CAP {
            running = running.min(floor);
            break;
        }
        match new_element_bound(spec, n, k) {
            Ok(b) => running = running.min(b),
            Err(Error::Overflow(_)) => {
                running = running.min(floor);
                break;
            }
            Err(e) => return Err(e),
        }
        k += 1;
    }
    Ok(running - 1)
}

/// Least `m` such that `C^m(A)` already contains every element of `C_T(A)`
/// in `[−window, window]`.
pub fn truncation_stage(spec: &CutSpacerSpec, level: LevelId, window: Int) -> Result<usize> {
    if window < 0 {
        return Err(Error::InvalidArgument("window must be nonnegative".into()));
    }
    level.validate(spec)?;
    for m in level.stage..level.stage + STAGE_CAP {
        match certified_radius(spec, level.stage, m) {
            Ok(r) if r >= window => return Ok(m),
            Ok(_) => {}
            Err(Error::Overflow(_)) => break,
            Err(e) => return Err(e),
        }
        if !spec.is_defined(m) {
            break;
        }
    }
    Err(Error::NonTerminating { window, cap: STAGE_CAP })
}

/// `C^m(A)` held implicitly through the recursion
/// `C^k = C^{k−1} ⊕ (H_{k−1} − H_{k−1})`, for windows too wide to list.
#[derive(Clone, Debug)]
pub struct ConservativeView {
    m: usize,
    /// `gens[k]` holds `H_{stage+k} − H_{stage+k}`.
    gens: Vec<Vec<Int>>,
    /// `radii[k] = max C^{stage+k}(A)`.
    radii: Vec<Int>,
    bound: Int,
}

impl ConservativeView {
    pub fn new(spec: &CutSpacerSpec, level: LevelId, m: usize) -> Result<Self> {
        check_levels(spec, level, m)?;
        let mut gens = Vec::with_capacity(m - level.stage);
        let mut radii: Vec<Int> = vec![0];
        for k in level.stage..m {
            let g = step_generators(spec, k)?.into_elements();
            let top = *g.last().expect("0 is a generator");
            radii.push(radii.last().unwrap().checked_add(top).ok_or(Error::Overflow("conservative view"))?);
            gens.push(g);
        }
        let bound = certified_radius(spec, level.stage, m)?;
        Ok(ConservativeView { m, gens, radii, bound })
    }

    /// View at the least stage certifying `[−window, window]`.
    pub fn for_window(spec: &CutSpacerSpec, level: LevelId, window: Int) -> Result<Self> {
        Self::new(spec, level, truncation_stage(spec, level, window)?)
    }

    pub fn stage(&self) -> usize {
        self.m
    }

    pub fn certified_bound(&self) -> Int {
        self.bound
    }

    pub fn max(&self) -> Int {
        *self.radii.last().unwrap()
    }

    pub fn contains(&self, x: Int) -> bool {
        self.contains_at(x, self.gens.len())
    }

    fn contains_at(&self, x: Int, k: usize) -> bool {
        if k == 0 {
            return x == 0;
        }
        if x.abs() > self.radii[k] {
            return false;
        }
        let r = self.radii[k - 1];
        let g = &self.gens[k - 1];
        let lo = g.partition_point(|&y| y < x - r);
        g[lo..].iter().take_while(|&&y| y <= x + r).any(|&y| self.contains_at(x - y, k - 1))
    }

    /// Least element of `C^m(A)` that is `>= x`.
    pub fn first_at_or_above(&self, x: Int) -> Option<Int> {
        self.first_at(x, self.gens.len())
    }

    /// Greatest element of `C^m(A)` that is `<= x`; the set is symmetric.
    pub fn last_at_or_below(&self, x: Int) -> Option<Int> {
        self.first_at(-x, self.gens.len()).map(|e| -e)
    }

    fn first_at(&self, x: Int, k: usize) -> Option<Int> {
        if k == 0 {
            return (x <= 0).then_some(0);
        }
        if x > self.radii[k] {
            return None;
        }
        if x <= -self.radii[k] {
            return Some(-self.radii[k]);
        }
        let r = self.radii[k - 1];
        let g = &self.gens[k - 1];
        let mut best: Option<Int> = None;
        for &y in &g[g.partition_point(|&y| y < x - r)..] {
            if best.is_some_and(|b| y - r >= b) {
                break;
            }
            if y - r >= x {
                // every element of y + C^{k−1} qualifies; the least is y − r
                best = Some(best.map_or(y - r, |b| b.min(y - r)));
                break;
            }
            if let Some(e) = self.first_at(x - y, k - 1) {
                best = Some(best.map_or(y + e, |b| b.min(y + e)));
            }
        }
        best
    }

    /// Elements in `[lo, hi]`, or `None` if there are more than `limit`.
    pub fn elements_in(&self, lo: Int, hi: Int, limit: usize) -> Option<Vec<Int>> {
        let mut out = Vec::new();
        let mut x = lo;
        while let Some(e) = self.first_at_or_above(x) {
            if e > hi {
                break;
            }
            if out.len() == limit {
                return None;
            }
            out.push(e);
            x = e + 1;
        }
        Some(out)
    }
}

impl intcomb::GapSource for ConservativeView {
    fn first_at_or_above(&self, x: Int) -> Option<Int> {
        ConservativeView::first_at_or_above(self, x)
    }

    fn last_at_or_below(&self, x: Int) -> Option<Int> {
        ConservativeView::last_at_or_below(self, x)
    }

    fn certified_bound(&self) -> Option<Int> {
        Some(self.bound)
    }
}

/// Which inequality [`check_condition`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    /// `h_n < 2(h_1 + Σ_{k=1}^{n−1} s_{k,r_k−1}) + min_{j<=r_n−2} s_{n,j} − 1`, `n >= 2`.
    Thm41,
    /// `s_{n−1, r_{n−1}−1} >= h_n / 2`, `n >= 1`.
    CorHalf,
    /// `h_{n+1} − h_n < 2 s_{n,r_n−1} + min_j s_{n+1,j} − min_j s_{n,j}`, `n >= 1`.
    CorTelescoped,
}

impl std::str::FromStr for ConditionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm41" => Ok(ConditionKind::Thm41),
            "cor_half" => Ok(ConditionKind::CorHalf),
            "cor_telescoped" => Ok(ConditionKind::CorTelescoped),
            other => Err(Error::InvalidArgument(format!("unknown condition `{other}`"))),
        }
    }
}

/// One stage of a condition report: `lhs < rhs` (or `lhs >= rhs` for
/// `cor_half`, stored as `2 s >= h`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRow {
    pub stage: usize,
    pub lhs: Int,
    pub rhs: Int,
    pub holds: bool,
}

pub fn check_condition(spec: &CutSpacerSpec, kind: ConditionKind, upto: usize) -> Result<Vec<ConditionRow>> {
    let first = match kind {
        ConditionKind::Thm41 => 2,
        _ => 1,
    };
    (first..=upto).map(|n| condition_row(spec, kind, n)).collect()
}

pub fn condition_row(spec: &CutSpacerSpec, kind: ConditionKind, n: usize) -> Result<ConditionRow> {
    let ov = || Error::Overflow("condition");
    let (lhs, rhs, holds) = match kind {
        ConditionKind::Thm41 => {
            let mut acc = spec.height(1)?;
            for k in 1..n {
                acc = acc.checked_add(spec.stage(k)?.last_spacer()).ok_or_else(ov)?;
            }
            let slack = spec.stage(n)?.min_inner_spacer() - 1;
            let rhs = acc.checked_mul(2).and_then(|x| x.checked_add(slack)).ok_or_else(ov)?;
            let lhs = spec.height(n)?;
            (lhs, rhs, lhs < rhs)
        }
        ConditionKind::CorHalf => {
            let lhs = spec.stage(n - 1)?.last_spacer().checked_mul(2).ok_or_else(ov)?;
            let rhs = spec.height(n)?;
            (lhs, rhs, lhs >= rhs)
        }
        ConditionKind::CorTelescoped => {
            let (cur, next) = (spec.stage(n)?, spec.stage(n + 1)?);
            let lhs = spec.height(n + 1)? - spec.height(n)?;
            let rhs = 2 * cur.last_spacer() + next.min_inner_spacer() - cur.min_inner_spacer();
            (lhs, rhs, lhs < rhs)
        }
    };
    Ok(ConditionRow { stage: n, lhs, rhs, holds })
}
