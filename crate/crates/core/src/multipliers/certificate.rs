//! Certificates and their independent re-verification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{exact_return_measure, level_set, return_measure, PowerOptions};
use crate::error::{Error, Result};
use crate::intcomb::{self, SortedIntSet};
use crate::rational::{self, Rational};
use crate::tower::{self, ConditionKind, ConservativeView, CutSpacerSpec, LevelId, Stage};
use crate::Int;

/// Target operands above this size are not embedded in facts.
pub const EMBED_LIMIT: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    Plain,
    Rigid,
    Iei,
    Family,
    Thm41,
    Ergodic,
}

impl std::str::FromStr for Style {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "plain" => Style::Plain,
            "rigid" => Style::Rigid,
            "iei" => Style::Iei,
            "family" => Style::Family,
            "thm41" => Style::Thm41,
            "ergodic" => Style::Ergodic,
            other => return Err(Error::InvalidArgument(format!("unknown style `{other}`"))),
        })
    }
}

/// Which transformation a measure fact is about.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemRef {
    Target(String),
    Multiplier,
}

/// One finite statement with exact operands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactBody {
    /// `C_S^{stage+1}(J_from) ∩ C_T(A) = {0}`, checked on `[−radius, radius]`.
    AvoidsOffOrigin {
        stage: usize,
        from_stage: usize,
        target: String,
        radius: Int,
        set: SortedIntSet,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target_window: Option<SortedIntSet>,
    },
    /// `[C_S^stage(J) + 1] ∩ C_T^stage(I) = ∅`.
    ShiftedDisjoint { stage: usize, target: String, shifted: SortedIntSet, target_set: SortedIntSet },
    /// One stage of the height condition on the target.
    ConditionThm41 { stage: usize, target: String, lhs: Int, rhs: Int },
    /// `H_index = Σ_{k <= r−2} h_{stage,k}` of the target, and it lies in
    /// `C_T^{stage+1}(I)`.
    BlockSumReturn { index: usize, stage: usize, value: Int, target: String },
    /// `μ(T^time from ∩ to) >= alpha · μ(from)`.
    ReturnMeasure {
        system: SystemRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index: Option<usize>,
        from: LevelId,
        to: LevelId,
        time: Int,
        #[serde(with = "rational::text")]
        measure: Rational,
        #[serde(with = "rational::text")]
        reference: Rational,
        #[serde(with = "rational::text")]
        alpha: Rational,
        /// `None` when `measure` is exact; otherwise the column depth at
        /// which it is the known-part lower bound.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lower_bound_depth: Option<usize>,
    },
    /// `h_{index+1} >= factor · h_index` for the multiplier heights.
    Growth { index: usize, prev: Int, next: Int, factor: Int },
    /// Block sums of a four-cut stage and their structural constraints.
    Structure4Cut { stage: usize, height: Int, blocks: Vec<Int> },
}

impl FactBody {
    pub fn kind(&self) -> &'static str {
        match self {
            FactBody::AvoidsOffOrigin { .. } => "avoids_off_origin",
            FactBody::ShiftedDisjoint { .. } => "shifted_disjoint",
            FactBody::ConditionThm41 { .. } => "condition_thm41",
            FactBody::BlockSumReturn { .. } => "block_sum_return",
            FactBody::ReturnMeasure { .. } => "return_measure",
            FactBody::Growth { .. } => "growth",
            FactBody::Structure4Cut { .. } => "structure4_cut",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fact {
    #[serde(flatten)]
    pub body: FactBody,
    pub claim: String,
    pub verified: bool,
}

/// A constructed multiplier with the finite facts witnessing its property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierCertificate {
    pub style: Style,
    /// `h_1, h_2, …` of the multiplier.
    pub heights: Vec<Int>,
    /// Cut counts `r_0, r_1, …` when they are not all 2.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cuts: Vec<usize>,
    /// Block sums `h_{n,k}` for stages `1..=depth` (four-cut style).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<Vec<Int>>,
    /// Target stages `n_i` the heights were read from.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target_stages: Vec<usize>,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    pub target_ids: Vec<String>,
    pub facts: Vec<Fact>,
}

impl MultiplierCertificate {
    pub fn new(style: Style, target_ids: Vec<String>) -> Self {
        MultiplierCertificate {
            style,
            heights: Vec::new(),
            cuts: Vec::new(),
            blocks: Vec::new(),
            target_stages: Vec::new(),
            depth: 0,
            margin: None,
            target_ids,
            facts: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// `h_n` of the multiplier, `h_0 = 1`.
    pub fn height(&self, n: usize) -> Option<Int> {
        if n == 0 {
            Some(1)
        } else {
            self.heights.get(n - 1).copied()
        }
    }

    /// `h_{n,0}, …, h_{n,r_n−2}` of the multiplier for `n >= 1`; these
    /// determine `H_n`.
    pub fn inner_blocks(&self, n: usize) -> Result<Vec<Int>> {
        let missing = || Error::InvalidArgument(format!("certificate does not define stage {n}"));
        match self.style {
            Style::Iei => {
                let b = self.blocks.get(n.wrapping_sub(1)).ok_or_else(missing)?;
                if b.len() < 2 {
                    return Err(missing());
                }
                Ok(b[..b.len() - 1].to_vec())
            }
            Style::Rigid => {
                let h = self.height(n).ok_or_else(missing)?;
                Ok(vec![h; n])
            }
            _ => Ok(vec![self.height(n).ok_or_else(missing)?]),
        }
    }

    /// `C_S^{n+1}(J_from)` for `J_from` the base of column `from`, computed
    /// as `D − D` from the stored parameters.
    pub fn conservative_set(&self, from: usize, n: usize) -> Result<SortedIntSet> {
        let mut d = SortedIntSet::singleton(0);
        for k in from..=n {
            let mut acc = 0;
            let mut h = vec![0];
            for b in self.inner_blocks(k)? {
                acc += b;
                h.push(acc);
            }
            d = intcomb::sumset(&d, &SortedIntSet::exact(h))?;
        }
        intcomb::difference_set(&d, &d)
    }

    /// The multiplier as a cut/spacer spec, as far as its parameters go.
    pub fn multiplier_spec(&self) -> Result<CutSpacerSpec> {
        let name = format!("{}_multiplier", serde_json::to_value(self.style).unwrap().as_str().unwrap());
        match self.style {
            Style::Iei => {
                let mut stages = vec![Stage::new(4, vec![0; 4])?];
                let mut h = 4;
                for b in &self.blocks {
                    stages.push(Stage::new(b.len(), b.iter().map(|x| x - h).collect())?);
                    h = b.iter().sum();
                }
                CutSpacerSpec::new(name, stages, None)
            }
            Style::Rigid => {
                let mut stages = Vec::new();
                let mut prev = 1;
                for (i, &h) in self.heights.iter().enumerate() {
                    let r = self.cuts.get(i).copied().unwrap_or(2);
                    let mut sp = vec![0; r];
                    sp[r - 1] = h - r as Int * prev;
                    stages.push(Stage::new(r, sp)?);
                    prev = h;
                }
                CutSpacerSpec::new(name, stages, None)
            }
            _ => CutSpacerSpec::skyscraper_from_heights(name, &self.heights, None),
        }
    }
}

/// Where a target's conservative data comes from.
#[derive(Clone, Debug)]
pub enum TargetSource {
    Spec { spec: CutSpacerSpec, level: LevelId },
    Set(SortedIntSet),
}

/// A named conservative sequence to avoid or to match.
#[derive(Clone, Debug)]
pub struct Target {
    pub id: String,
    pub source: TargetSource,
}

impl Target {
    pub fn spec(id: impl Into<String>, spec: CutSpacerSpec, level: LevelId) -> Self {
        Target { id: id.into(), source: TargetSource::Spec { spec, level } }
    }

    pub fn set(id: impl Into<String>, set: SortedIntSet) -> Self {
        Target { id: id.into(), source: TargetSource::Set(set) }
    }

    pub fn as_spec(&self) -> Option<(&CutSpacerSpec, LevelId)> {
        match &self.source {
            TargetSource::Spec { spec, level } => Some((spec, *level)),
            TargetSource::Set(_) => None,
        }
    }

    /// The target's conservative data, certified on at least `radius`.
    pub fn data(&self, radius: Int) -> Result<TargetData> {
        match &self.source {
            TargetSource::Spec { spec, level } => Ok(TargetData::Implicit(ConservativeView::for_window(spec, *level, radius)?)),
            TargetSource::Set(s) => {
                if let Some(b) = s.certified_bound() {
                    if b < radius {
                        return Err(Error::InsufficientTruncation { needed: radius, certified: b });
                    }
                }
                Ok(TargetData::Listed(s.clone()))
            }
        }
    }
}

/// Conservative data of a target: a listed set, or the recursion for a spec.
#[derive(Clone, Debug)]
pub enum TargetData {
    Listed(SortedIntSet),
    Implicit(ConservativeView),
}

impl TargetData {
    pub fn contains(&self, x: Int) -> bool {
        match self {
            TargetData::Listed(s) => s.contains_stored(x),
            TargetData::Implicit(v) => v.contains(x),
        }
    }

    pub fn certified_bound(&self) -> Option<Int> {
        match self {
            TargetData::Listed(s) => s.certified_bound(),
            TargetData::Implicit(v) => Some(v.certified_bound()),
        }
    }

    /// Elements in `[lo, hi]`, or `None` when there are more than `limit`.
    pub fn elements_in(&self, lo: Int, hi: Int, limit: usize) -> Option<Vec<Int>> {
        match self {
            TargetData::Listed(s) => {
                let r = s.range(lo, hi);
                (r.len() <= limit).then(|| r.to_vec())
            }
            TargetData::Implicit(v) => v.elements_in(lo, hi, limit),
        }
    }

    /// Nonzero elements of `set` that lie here too.
    pub fn common_off_origin(&self, set: &SortedIntSet) -> Vec<Int> {
        set.elements().par_iter().copied().filter(|&x| x != 0 && self.contains(x)).collect()
    }

    /// Whether `set` meets this set somewhere other than 0.
    pub fn meets_off_origin(&self, set: &SortedIntSet) -> bool {
        set.elements().par_iter().any(|&x| x != 0 && self.contains(x))
    }
}

impl intcomb::GapSource for TargetData {
    fn first_at_or_above(&self, x: Int) -> Option<Int> {
        match self {
            TargetData::Listed(s) => s.first_at_or_above(x),
            TargetData::Implicit(v) => v.first_at_or_above(x),
        }
    }

    fn last_at_or_below(&self, x: Int) -> Option<Int> {
        match self {
            TargetData::Listed(s) => s.last_at_or_below(x),
            TargetData::Implicit(v) => v.last_at_or_below(x),
        }
    }

    fn certified_bound(&self) -> Option<Int> {
        TargetData::certified_bound(self)
    }
}

/// `C_T(A) ∩ [−radius, radius]` from the definition, at the least stage
/// that certifies the radius.
pub fn spec_window(spec: &CutSpacerSpec, level: LevelId, radius: Int) -> Result<SortedIntSet> {
    let m = tower::truncation_stage(spec, level, radius)?;
    Ok(tower::conservative_set_window(spec, level, m, radius)?.restrict(radius))
}

/// Outcome of re-checking one fact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactCheck {
    pub index: usize,
    pub kind: &'static str,
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<FactCheck>,
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FactCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Recomputes every fact from the certificate parameters and the targets.
pub fn verify_certificate(cert: &MultiplierCertificate, targets: &[Target]) -> VerificationReport {
    let mut warnings = Vec::new();
    if cert.facts.is_empty() {
        warnings.push("certificate has no facts; passing vacuously".to_string());
    }
    let checks = cert
        .facts
        .par_iter()
        .enumerate()
        .map(|(index, fact)| {
            let (passed, detail) = match check_fact(cert, &fact.body, targets) {
                Ok(()) => (true, String::new()),
                Err(e) => (false, e),
            };
            FactCheck { index, kind: fact.body.kind(), claim: fact.claim.clone(), passed, detail }
        })
        .collect();
    VerificationReport { checks, warnings }
}

fn find<'a>(targets: &'a [Target], id: &str) -> std::result::Result<&'a Target, String> {
    targets.iter().find(|t| t.id == id).ok_or_else(|| format!("target `{id}` not supplied"))
}

fn find_spec<'a>(targets: &'a [Target], id: &str) -> std::result::Result<(&'a CutSpacerSpec, LevelId), String> {
    find(targets, id)?.as_spec().ok_or_else(|| format!("target `{id}` is not a spec"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Checks a single fact; `Err` carries the reason it fails.
pub fn check_fact(cert: &MultiplierCertificate, body: &FactBody, targets: &[Target]) -> std::result::Result<(), String> {
    let e = |err: Error| err.to_string();
    match body {
        FactBody::AvoidsOffOrigin { stage, from_stage, target, radius, set, target_window } => {
            let fresh = cert.conservative_set(*from_stage, *stage).map_err(e)?;
            ensure(fresh.elements() == set.elements(), || "stored set differs from recomputation".into())?;
            ensure(*radius >= fresh.max_abs(), || "radius does not cover the set".into())?;
            let t = find(targets, target)?.data(*radius).map_err(e)?;
            if let Some(w) = target_window {
                let listed = t.elements_in(-radius, *radius, w.len());
                ensure(listed.as_deref() == Some(w.elements()), || "stored target window differs".into())?;
            }
            ensure(t.contains(0), || "target set misses 0".into())?;
            let common = t.common_off_origin(&fresh);
            ensure(common.is_empty(), || format!("sets also meet in {common:?}"))
        }
        FactBody::ShiftedDisjoint { stage, target, shifted, target_set } => {
            let s = if *stage == 0 {
                return Err("stage must be at least 1".into());
            } else if *stage == 1 {
                SortedIntSet::singleton(0)
            } else {
                cert.conservative_set(1, stage - 1).map_err(e)?
            };
            let s1 = s.shift(1).map_err(e)?;
            ensure(s1.elements() == shifted.elements(), || "stored shifted set differs from recomputation".into())?;
            let (spec, level) = find_spec(targets, target)?;
            let t = tower::conservative_set_trunc(spec, level, *stage).map_err(e)?;
            ensure(t.elements() == target_set.elements(), || "stored target set differs from recomputation".into())?;
            let meet = s1.intersection(&t);
            ensure(meet.is_empty(), || format!("sets meet in {meet}"))
        }
        FactBody::ConditionThm41 { stage, target, lhs, rhs } => {
            let (spec, _) = find_spec(targets, target)?;
            let row = tower::condition_row(spec, ConditionKind::Thm41, *stage).map_err(e)?;
            ensure(row.lhs == *lhs && row.rhs == *rhs, || "stored operands differ from recomputation".into())?;
            ensure(row.holds, || format!("{lhs} < {rhs} fails"))
        }
        FactBody::BlockSumReturn { index, stage, value, target } => {
            ensure(cert.height(*index) == Some(*value), || format!("H_{index} is not {value}"))?;
            let (spec, level) = find_spec(targets, target)?;
            let blocks = spec.block_sums(*stage).map_err(e)?;
            let sum: Int = blocks[..blocks.len() - 1].iter().sum();
            ensure(sum == *value, || format!("inner block sum at stage {stage} is {sum}"))?;
            let c = tower::conservative_set_window(spec, level, stage + 1, *value).map_err(e)?;
            ensure(c.contains_stored(*value), || format!("{value} is not a return time at stage {}", stage + 1))
        }
        FactBody::ReturnMeasure { system, index, from, to, time, measure, reference, alpha, lower_bound_depth } => {
            if let Some(i) = index {
                ensure(cert.height(*i) == Some(*time), || format!("time {time} is not height {i}"))?;
            }
            let owned;
            let spec = match system {
                SystemRef::Target(id) => find_spec(targets, id)?.0,
                SystemRef::Multiplier => {
                    owned = cert.multiplier_spec().map_err(e)?;
                    &owned
                }
            };
            let a = level_set(spec, *from).map_err(e)?;
            let b = level_set(spec, *to).map_err(e)?;
            ensure(a.measure() == *reference, || "reference measure differs".into())?;
            let fresh = match lower_bound_depth {
                None => exact_return_measure(spec, &a, &b, *time).map_err(e)?,
                Some(d) => {
                    let opts = PowerOptions { stage_hint: from.stage, min_depth: *d, ..PowerOptions::default() };
                    return_measure(spec, &a, &b, *time, &opts).map_err(e)?.lower
                }
            };
            ensure(fresh == *measure, || format!("measure recomputes to {}", rational::to_text(&fresh)))?;
            ensure(*measure >= alpha * reference, || "measure is below alpha times the reference".into())
        }
        FactBody::Growth { index, prev, next, factor } => {
            ensure(cert.height(*index) == Some(*prev) && cert.height(index + 1) == Some(*next), || {
                "stored heights differ from the certificate".into()
            })?;
            ensure(*next >= factor * prev, || format!("{next} < {factor}·{prev}"))
        }
        FactBody::Structure4Cut { stage, height, blocks } => {
            ensure(cert.blocks.get(stage.wrapping_sub(1)) == Some(blocks), || "stored blocks differ".into())?;
            ensure(cert.height(*stage) == Some(*height), || "stored height differs".into())?;
            ensure(blocks.len() == 4, || "four blocks expected".into())?;
            let n = *stage as Int;
            let (b0, b1, b2, b3) = (blocks[0], blocks[1], blocks[2], blocks[3]);
            ensure(blocks.iter().all(|&b| b >= *height), || "a block is shorter than the column".into())?;
            ensure(b0 == b2 + 1, || "h_{n,0} = h_{n,2} + 1 fails".into())?;
            ensure(b1 == 5 * n * b0, || "h_{n,1} = 5n·h_{n,0} fails".into())?;
            ensure(b3 > n * (b0 + b1 + b2 + height), || "h_{n,3} is not large enough".into())?;
            ensure(cert.height(stage + 1) == Some(b0 + b1 + b2 + b3), || "next height is not the block total".into())
        }
    }
}

/// Re-runs the checks while building and records the outcome in the fact.
pub(crate) fn push_fact(
    cert: &mut MultiplierCertificate,
    body: FactBody,
    claim: String,
    targets: &[Target],
) -> std::result::Result<(), String> {
    let outcome = check_fact(cert, &body, targets);
    cert.facts.push(Fact { body, claim, verified: outcome.is_ok() });
    outcome
}

/// Target window to embed in a fact, when small enough.
pub(crate) fn embed(data: &TargetData, radius: Int) -> Option<SortedIntSet> {
    data.elements_in(-radius, radius, EMBED_LIMIT).map(SortedIntSet::exact)
}
