//! Skyscraper heights along which a target returns between scheduled level
//! pairs with a fixed proportion of mass.
//!
//! Only the finite measure inequalities are certified; nothing is claimed
//! about ergodicity of the product.

use crate::dynamics::{exact_return_measure, level_set};
use crate::error::{Error, Result};
use crate::multipliers::certificate::{push_fact, FactBody, MultiplierCertificate, Style, SystemRef, Target};
use crate::multipliers::thm41::cut_bound;
use crate::rational::{self, Rational};
use crate::tower::{CutSpacerSpec, LevelId, STAGE_CAP};
use crate::Int;

/// Returns above this are not searched.
pub const SEARCH_BOUND: Int = 1 << 40;

/// Ordered pairs of levels of the same column, columns `1..=depth`, in
/// lexicographic order; the first `budget` of them.
pub fn level_pairs(spec: &CutSpacerSpec, depth: usize, budget: usize) -> Result<Vec<(LevelId, LevelId)>> {
    let mut out = Vec::with_capacity(budget);
    for c in 1..=depth {
        let h = spec.height(c)?;
        for i in 0..h {
            for j in 0..h {
                if out.len() == budget {
                    return Ok(out);
                }
                out.push((LevelId::new(c, i), LevelId::new(c, j)));
            }
        }
    }
    Ok(out)
}

/// Candidates `Σ_{k=i}^{j} h_{m,k} + h(J) − h(I)` above `floor`, in
/// increasing order, stage by stage.
fn candidates(spec: &CutSpacerSpec, from: LevelId, to: LevelId, m: usize, floor: Int) -> Result<Vec<Int>> {
    let b = spec.block_sums(m)?;
    let delta = to.height_index - from.height_index;
    let mut out = Vec::new();
    for i in 0..b.len() - 1 {
        let mut acc: Int = 0;
        for x in &b[i..b.len() - 1] {
            acc = acc.checked_add(*x).ok_or(Error::Overflow("block sums"))?;
            let n = acc + delta;
            if n > floor {
                out.push(n);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn search(spec: &CutSpacerSpec, from: LevelId, to: LevelId, floor: Int, alpha: &Rational) -> Result<(Int, Rational)> {
    let a = level_set(spec, from)?;
    let b = level_set(spec, to)?;
    let need = alpha * a.measure();
    for m in from.stage..from.stage + STAGE_CAP {
        if !spec.is_defined(m) {
            break;
        }
        for n in candidates(spec, from, to, m, floor)? {
            if n > SEARCH_BOUND {
                return Err(Error::SearchExhausted { bound: SEARCH_BOUND });
            }
            let mu = exact_return_measure(spec, &a, &b, n).map_err(|_| Error::SearchExhausted { bound: n })?;
            if mu >= need {
                return Ok((n, mu));
            }
        }
    }
    Err(Error::SearchExhausted { bound: SEARCH_BOUND })
}

/// `max(pair_budget, depth)` heights `n_1 < n_2 < …` with `n_i > 2n_{i−1}`
/// (`n_0 = 1`), pair `i mod P` of [`level_pairs`] scheduled at step `i`.
pub fn build_ergodic_heights(spec: &CutSpacerSpec, pair_budget: usize, depth: usize) -> Result<MultiplierCertificate> {
    if pair_budget == 0 || depth == 0 {
        return Err(Error::InvalidArgument("pair budget and depth must be positive".into()));
    }
    let alpha = rational::ratio(1, cut_bound(spec)? as Int);
    let pairs = level_pairs(spec, depth, pair_budget)?;
    let id = spec.name().to_string();
    let targets = [Target::spec(id.clone(), spec.clone(), LevelId::base_of_c1())];
    let mut cert = MultiplierCertificate::new(Style::Ergodic, vec![id.clone()]);
    cert.depth = depth;
    let count = pair_budget.max(depth);
    let mut prev: Int = 1;
    for t in 0..count {
        let (from, to) = pairs[t % pairs.len()];
        let floor = prev.checked_mul(2).ok_or(Error::Overflow("ergodic heights"))?;
        let (n, mu) = search(spec, from, to, floor, &alpha)?;
        cert.heights.push(n);
        let body = FactBody::ReturnMeasure {
            system: SystemRef::Target(id.clone()),
            index: Some(t + 1),
            from,
            to,
            time: n,
            measure: mu,
            reference: level_set(spec, from)?.measure(),
            alpha: alpha.clone(),
            lower_bound_depth: None,
        };
        let claim = format!(
            "μ(T^{n} I ∩ J) >= {}·μ(I) for I = C_{}[{}], J = C_{}[{}]",
            rational::to_text(&alpha),
            from.stage,
            from.height_index,
            to.stage,
            to.height_index
        );
        push_fact(&mut cert, body, claim, &targets).map_err(Error::InvariantViolation)?;
        prev = n;
    }
    for i in 0..count {
        let (p, q) = (cert.height(i).unwrap(), cert.height(i + 1).unwrap());
        let body = FactBody::Growth { index: i, prev: p, next: q, factor: 2 };
        push_fact(&mut cert, body, format!("n_{} >= 2·n_{i}", i + 1), &[]).map_err(Error::InvariantViolation)?;
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::certificate::verify_certificate;
    use crate::tower::preset;

    #[test]
    fn hk_first_height_is_four() {
        let hk = preset("hajian_kakutani").unwrap();
        let c = build_ergodic_heights(&hk, 6, 2).unwrap();
        assert_eq!(c.heights[0], 4);
        assert_eq!(c.heights.len(), 6);
        match &c.facts[0].body {
            FactBody::ReturnMeasure { from, to, measure, reference, .. } => {
                assert_eq!((*from, *to), (LevelId::base_of_c1(), LevelId::base_of_c1()));
                assert_eq!(measure / reference, rational::ratio(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        for w in c.heights.windows(2) {
            assert!(w[1] > 2 * w[0]);
        }
        let t = Target::spec("hajian_kakutani", hk, LevelId::base_of_c1());
        assert!(verify_certificate(&c, &[t]).all_passed());
    }

    #[test]
    fn schedule_is_round_robin() {
        let hk = preset("hajian_kakutani").unwrap();
        let pairs = level_pairs(&hk, 3, 6).unwrap();
        assert_eq!(pairs.len(), 6);
        assert_eq!(pairs[1], (LevelId::new(1, 0), LevelId::new(1, 1)));
        assert!(matches!(build_ergodic_heights(&hk, 0, 3), Err(Error::InvalidArgument(_))));
    }
}
