//! Skyscraper multipliers read off a target's block sums, for which the
//! product with the target stays conservative.

use crate::dynamics::{depth_cap, exact_return_measure, level_set, return_measure, PowerOptions};
use crate::error::{Error, Result};
use crate::multipliers::avoid::stalled;
use crate::multipliers::certificate::{push_fact, FactBody, MultiplierCertificate, Style, SystemRef, Target};
use crate::rational::{self, Rational};
use crate::tower::{self, ConditionKind, CutSpacerSpec, LevelId, STAGE_CAP};
use crate::Int;

fn brief(s: &crate::SortedIntSet) -> String {
    if s.len() <= 32 {
        s.to_string()
    } else {
        format!("<{} elements>", s.len())
    }
}

/// `max r_n` over the stages the parameters pin down: the explicit prefix and,
/// for a rule, one rule stage (every rule stage has the same cut count).
pub fn cut_bound(spec: &CutSpacerSpec) -> Result<usize> {
    let upto = match spec.defined_stages() {
        Some(d) => d,
        None => spec.explicit_stages().len() + 1,
    };
    let r = spec.max_cuts(upto)?;
    if r < 2 {
        return Err(Error::InvalidArgument("spec declares no stages".into()));
    }
    Ok(r)
}

/// `H(n) = h_{n+1} − h_{n,r_n−1}`, the sum of the inner blocks of stage `n`.
pub fn inner_block_sum(spec: &CutSpacerSpec, n: usize) -> Result<Int> {
    let b = spec.block_sums(n)?;
    b[..b.len() - 1].iter().try_fold(0 as Int, |s, &x| s.checked_add(x)).ok_or(Error::Overflow("block sums"))
}

/// `μ(T^time from ∩ to)`, exact when the engine resolves it within the depth
/// cap and otherwise the known-part lower bound at the deepest usable column.
pub(crate) fn measure_fact(
    system: SystemRef,
    spec: &CutSpacerSpec,
    index: Option<usize>,
    from: LevelId,
    to: LevelId,
    time: Int,
    alpha: Rational,
) -> Result<FactBody> {
    let a = level_set(spec, from)?;
    let b = level_set(spec, to)?;
    let (measure, lower_bound_depth) = match exact_return_measure(spec, &a, &b, time) {
        Ok(m) => (m, None),
        Err(_) => {
            let cap = depth_cap();
            let d = spec.defined_stages().unwrap_or(cap).min(cap);
            let opts = PowerOptions { stage_hint: from.stage, min_depth: d, cap };
            (return_measure(spec, &a, &b, time, &opts)?.lower, Some(d))
        }
    };
    Ok(FactBody::ReturnMeasure { system, index, from, to, time, measure, reference: a.measure(), alpha, lower_bound_depth })
}

/// Least increasing `n_1 < n_2 < …` with `H_i = H(n_i) >= 2H_{i−1}`.
pub fn select_stages(spec: &CutSpacerSpec, count: usize) -> Result<Vec<(usize, Int)>> {
    let mut out: Vec<(usize, Int)> = Vec::with_capacity(count);
    let mut n = 1;
    let mut prev: Int = 1;
    while out.len() < count {
        if !spec.is_defined(n) || n > STAGE_CAP * 4 {
            return Err(Error::SearchExhausted { bound: n as Int });
        }
        let h = inner_block_sum(spec, n)?;
        if h >= prev.checked_mul(2).ok_or(Error::Overflow("H_i"))? {
            out.push((n, h));
            prev = h;
        }
        n += 1;
    }
    Ok(out)
}

pub fn build_thm41(spec: &CutSpacerSpec, depth: usize) -> Result<MultiplierCertificate> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let id = spec.name().to_string();
    let targets = [Target::spec(id.clone(), spec.clone(), LevelId::base_of_c1())];
    let mut cert = MultiplierCertificate::new(Style::Thm41, vec![id.clone()]);
    cert.depth = depth;
    let alpha = rational::ratio(1, cut_bound(spec)? as Int);

    let mut checked = 1;
    let mut gate = |cert: &mut MultiplierCertificate, upto: usize| -> Result<()> {
        for n in checked + 1..=upto {
            let row = tower::condition_row(spec, ConditionKind::Thm41, n).map_err(|e| stalled(n, e, cert))?;
            let body = FactBody::ConditionThm41 { stage: n, target: id.clone(), lhs: row.lhs, rhs: row.rhs };
            let claim = format!("h_{n} = {} < {}", row.lhs, row.rhs);
            if push_fact(cert, body, claim, &targets).is_err() {
                return Err(Error::ConditionViolated { stage: n, partial: Some(Box::new(cert.clone())) });
            }
            checked = n;
        }
        Ok(())
    };
    gate(&mut cert, depth)?;
    let picked = select_stages(spec, depth).map_err(|e| stalled(cert.heights.len() + 1, e, &cert))?;
    cert.target_stages = picked.iter().map(|p| p.0).collect();
    cert.heights = picked.iter().map(|p| p.1).collect();
    let last = cert.target_stages[depth - 1];
    gate(&mut cert, depth.max(last))?;

    for n in 1..=depth {
        let s = if n == 1 { crate::SortedIntSet::singleton(0) } else { cert.conservative_set(1, n - 1)? };
        let shifted = s.shift(1)?;
        let target_set = tower::conservative_set_trunc(spec, LevelId::base_of_c1(), n)?.with_certified_bound(None);
        let claim = format!("[C_S^{n}(J) + 1] ∩ C_T^{n}(I) = ∅: {} ∩ {}", brief(&shifted), brief(&target_set));
        let body = FactBody::ShiftedDisjoint { stage: n, target: id.clone(), shifted, target_set };
        push_fact(&mut cert, body, claim, &targets).map_err(|e| stalled(n, e, &cert))?;
    }
    for i in 0..depth {
        let (prev, next) = (cert.height(i).unwrap(), cert.height(i + 1).unwrap());
        let body = FactBody::Growth { index: i, prev, next, factor: 2 };
        push_fact(&mut cert, body, format!("H_{} >= 2·H_{i}", i + 1), &[]).map_err(|e| stalled(i + 1, e, &cert))?;
    }
    let base = LevelId::base_of_c1();
    for i in 1..=depth {
        let (stage, value) = (cert.target_stages[i - 1], cert.heights[i - 1]);
        let body = FactBody::BlockSumReturn { index: i, stage, value, target: id.clone() };
        let claim = format!("H_{i} = {value} is the inner block sum of stage {stage} and returns in C_T^{}(I)", stage + 1);
        push_fact(&mut cert, body, claim, &targets).map_err(|e| stalled(i, e, &cert))?;
    }
    let s_spec = cert.multiplier_spec()?;
    for i in 1..=depth {
        let h = cert.heights[i - 1];
        let body = measure_fact(SystemRef::Target(id.clone()), spec, Some(i), base, base, h, alpha.clone())?;
        let claim = format!("μ(T^{h} I ∩ I) >= {}·μ(I)", rational::to_text(&alpha));
        push_fact(&mut cert, body, claim, &targets).map_err(|e| stalled(i, e, &cert))?;
        if i < depth {
            let half = rational::ratio(1, 2);
            let body = measure_fact(SystemRef::Multiplier, &s_spec, Some(i), base, base, h, half.clone())?;
            let claim = format!("μ(S^{h} J ∩ J) >= 1/2·μ(J)");
            push_fact(&mut cert, body, claim, &targets).map_err(|e| stalled(i, e, &cert))?;
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::certificate::verify_certificate;
    use crate::tower::{preset, Stage};

    #[test]
    fn hk_heights_and_stage_two_fact() {
        let hk = preset("hajian_kakutani").unwrap();
        let c = build_thm41(&hk, 4).unwrap();
        assert_eq!(c.target_stages, vec![1, 2, 3, 4]);
        assert_eq!(c.heights, vec![4, 16, 64, 256]);
        let fact = c
            .facts
            .iter()
            .find_map(|f| match &f.body {
                FactBody::ShiftedDisjoint { stage: 2, shifted, target_set, .. } => Some((shifted, target_set)),
                _ => None,
            })
            .unwrap();
        assert_eq!(fact.0.elements(), &[-3, 1, 5]);
        assert_eq!(fact.1.elements(), &[-4, 0, 4]);
    }

    #[test]
    fn chacon_heights() {
        let c = preset("infinite_chacon").unwrap();
        let picked = select_stages(&c, 4).unwrap();
        assert_eq!(picked.iter().map(|p| p.1).collect::<Vec<_>>(), vec![17, 101, 605, 3629]);
        let cert = build_thm41(&c, 3).unwrap();
        let t = Target::spec("infinite_chacon", c, LevelId::base_of_c1());
        assert!(verify_certificate(&cert, &[t]).all_passed());
    }

    #[test]
    fn condition_failure_is_reported() {
        // stage 2 has a tall column but tiny top spacers
        let stages = vec![
            Stage::new(2, vec![0, 0]).unwrap(),
            Stage::new(2, vec![0, 0]).unwrap(),
            Stage::new(2, vec![0, 0]).unwrap(),
            Stage::new(2, vec![0, 0]).unwrap(),
        ];
        let s = CutSpacerSpec::new("flat", stages, None).unwrap();
        match build_thm41(&s, 3) {
            Err(Error::ConditionViolated { stage, partial }) => {
                assert_eq!(stage, 2);
                assert!(partial.is_some());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
