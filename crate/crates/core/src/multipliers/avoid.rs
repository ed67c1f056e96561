//! Multipliers whose conservative sets avoid a target's off the origin.

use crate::error::{Error, Result};
use crate::intcomb::{self, SortedIntSet};
use crate::multipliers::certificate::{embed, push_fact, FactBody, MultiplierCertificate, Style};
use crate::multipliers::gap_oracle::{joint_query, GapOracle};
use crate::Int;

/// Candidates tried per four-cut stage before giving up.
pub const IEI_ATTEMPTS: usize = 100_000;

const MARGIN: &str = "half_width = max C_S^n + n";

pub(crate) fn stalled(stage: usize, err: impl ToString, cert: &MultiplierCertificate) -> Error {
    Error::ConstructionStalled { stage, reason: err.to_string(), partial: Some(Box::new(cert.clone())) }
}

fn overflow(stage: usize, cert: &MultiplierCertificate) -> Error {
    stalled(stage, Error::Overflow("multiplier heights"), cert)
}

/// Records the avoidance facts for stage `n` against each oracle.
fn avoidance_facts(
    cert: &mut MultiplierCertificate,
    n: usize,
    from: usize,
    oracles: &[&GapOracle],
) -> Result<()> {
    let set = cert.conservative_set(from, n).map_err(|e| stalled(n, e, cert))?;
    let radius = set.max_abs();
    for o in oracles {
        let body = FactBody::AvoidsOffOrigin {
            stage: n,
            from_stage: from,
            target: o.id().to_string(),
            radius,
            set: set.clone(),
            target_window: embed(o.data(), radius),
        };
        let claim = format!("C_S^{}(J_{from}) ∩ C_{}(A) = {{0}} on [-{radius}, {radius}]", n + 1, o.id());
        let targets = [o.target().clone()];
        push_fact(cert, body, claim, &targets).map_err(|e| stalled(n, e, cert))?;
    }
    Ok(())
}

fn growth_facts(cert: &mut MultiplierCertificate, factor: impl Fn(usize) -> Int) -> Result<()> {
    for i in 0..cert.heights.len() {
        let (prev, next) = (cert.height(i).unwrap(), cert.height(i + 1).unwrap());
        let f = factor(i);
        let body = FactBody::Growth { index: i, prev, next, factor: f };
        let claim = format!("h_{} >= {f}·h_{i}", i + 1);
        push_fact(cert, body, claim, &[]).map_err(|e| stalled(i + 1, e, cert))?;
    }
    Ok(())
}

/// Skyscraper whose conservative set meets the target's only at 0.
pub fn build_avoiding_skyscraper(target: &mut GapOracle, depth: usize) -> Result<MultiplierCertificate> {
    build_skyscraper(&mut [target], depth, Style::Plain)
}

/// One skyscraper avoiding every target; target `i` (from 1) joins the
/// shared gap search at stage `i`.
pub fn build_avoiding_family(targets: &mut [GapOracle], depth: usize) -> Result<MultiplierCertificate> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("no targets".into()));
    }
    let mut refs: Vec<&mut GapOracle> = targets.iter_mut().collect();
    build_skyscraper(&mut refs, depth, Style::Family)
}

fn build_skyscraper(oracles: &mut [&mut GapOracle], depth: usize, style: Style) -> Result<MultiplierCertificate> {
    let ids = oracles.iter().map(|o| o.id().to_string()).collect();
    let mut cert = MultiplierCertificate::new(style, ids);
    cert.depth = depth;
    cert.margin = Some(MARGIN.to_string());
    for n in 1..=depth {
        let mu = match n {
            1 => 0,
            _ => cert.conservative_set(1, n - 1)?.max_abs(),
        };
        let active = if style == Style::Family { n.min(oracles.len()) } else { oracles.len() };
        let min_l = cert.height(n - 1).unwrap().checked_mul(2).ok_or_else(|| overflow(n, &cert))?;
        let l = joint_query(&mut oracles[..active], mu + n as Int, &[1], min_l).map_err(|e| stalled(n, e, &cert))?;
        cert.heights.push(l);
    }
    for n in 1..=depth {
        if style == Style::Family {
            for i in 1..=n.min(oracles.len()) {
                avoidance_facts(&mut cert, n, i, &[&*oracles[i - 1]])?;
            }
        } else {
            let refs: Vec<&GapOracle> = oracles.iter().map(|o| &**o).collect();
            avoidance_facts(&mut cert, n, 1, &refs)?;
        }
    }
    growth_facts(&mut cert, |_| 2)?;
    Ok(cert)
}

/// Rank-one multiplier with `r_0 = 2` and `r_n = n + 1` cuts at stage
/// `n >= 1`, all inner spacers zero, so that `C_S^{n+1} = C_S^n ⊕ {c h_n :
/// |c| <= n}`.
pub fn build_avoiding_rigid(target: &mut GapOracle, depth: usize) -> Result<MultiplierCertificate> {
    let mut cert = MultiplierCertificate::new(Style::Rigid, vec![target.id().to_string()]);
    cert.depth = depth;
    cert.margin = Some(MARGIN.to_string());
    let cuts = |n: usize| if n == 0 { 2 } else { n + 1 };
    for n in 1..=depth {
        cert.cuts.push(cuts(n - 1));
        let mu = match n {
            1 => 0,
            _ => cert.conservative_set(1, n - 1)?.max_abs(),
        };
        let mults: Vec<Int> = (1..=n as Int).collect();
        let min_l =
            cert.height(n - 1).unwrap().checked_mul(cuts(n - 1) as Int).ok_or_else(|| overflow(n, &cert))?;
        let l = target.query(mu + n as Int, &mults, min_l).map_err(|e| stalled(n, e, &cert))?;
        cert.heights.push(l);
    }
    for n in 1..=depth {
        avoidance_facts(&mut cert, n, 1, &[&*target])?;
    }
    let factors = cert.cuts.clone();
    growth_facts(&mut cert, |i| factors[i] as Int)?;
    Ok(cert)
}

/// Four-cut multiplier: stage 0 stacks four copies without spacers, stage
/// `n >= 1` has block sums `(a, 5na, a − 1, d)` with
/// `d = n(a + 5na + a − 1 + h_n) + 1`.
///
/// `a` is proposed by a gap query on the multipliers `(1, 5n, 6n, 6n + 1)`
/// and accepted only if `C_S^{n+1}(I) ∩ C_T(A) = {0}` holds directly.
pub fn build_avoiding_iei(target: &mut GapOracle, depth: usize) -> Result<MultiplierCertificate> {
    let mut cert = MultiplierCertificate::new(Style::Iei, vec![target.id().to_string()]);
    cert.depth = depth;
    cert.margin = Some(MARGIN.to_string());
    cert.heights.push(4);
    let mut prev = SortedIntSet::singleton(0);
    for n in 1..=depth {
        let h = cert.height(n).unwrap();
        let k = n as Int;
        let mu = prev.max_abs();
        let mults = [1, 5 * k, 6 * k, 6 * k + 1];
        let mut min_l = h + 1;
        let mut accepted = None;
        for _ in 0..IEI_ATTEMPTS {
            let a = target.query(mu + k, &mults, min_l).map_err(|e| stalled(n, e, &cert))?;
            let b = 5 * k * a;
            let gens: Vec<Int> = [a, b, a - 1, a + b, b + a - 1, 2 * a + b - 1]
                .into_iter()
                .flat_map(|g| [g, -g])
                .chain([0])
                .collect();
            let next = intcomb::sumset(&prev, &SortedIntSet::exact(gens)).map_err(|e| stalled(n, e, &cert))?;
            if next.max_abs() > target.window() {
                target.deepen(next.max_abs()).map_err(|e| stalled(n, e, &cert))?;
            }
            if !target.data().meets_off_origin(&next) {
                accepted = Some((a, next));
                break;
            }
            min_l = a + 1;
        }
        let Some((a, next)) = accepted else {
            return Err(stalled(n, Error::SearchExhausted { bound: min_l }, &cert));
        };
        let total = a
            .checked_mul(5 * k + 2)
            .and_then(|x| x.checked_add(h - 1))
            .and_then(|x| x.checked_mul(k))
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| overflow(n, &cert))?;
        let blocks = vec![a, 5 * k * a, a - 1, total];
        let next_h = blocks.iter().try_fold(0 as Int, |s, &x| s.checked_add(x)).ok_or_else(|| overflow(n, &cert))?;
        cert.blocks.push(blocks);
        cert.heights.push(next_h);
        prev = next;
    }
    for n in 1..=depth {
        let body = FactBody::Structure4Cut { stage: n, height: cert.height(n).unwrap(), blocks: cert.blocks[n - 1].clone() };
        let claim = format!("stage {n} block sums satisfy the four-cut constraints");
        push_fact(&mut cert, body, claim, &[]).map_err(|e| stalled(n, e, &cert))?;
    }
    for n in 1..=depth {
        avoidance_facts(&mut cert, n, 1, &[&*target])?;
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipliers::certificate::{verify_certificate, Target};
    use crate::tower::{preset, LevelId};

    fn zero_target() -> GapOracle {
        GapOracle::new(Target::set("zero", SortedIntSet::singleton(0)), 0).unwrap()
    }

    fn syndetic() -> GapOracle {
        GapOracle::new(Target::set("all", SortedIntSet::certified(-100..=100, 100).unwrap()), 0).unwrap()
    }

    #[test]
    fn plain_on_trivial_target_doubles() {
        let c = build_avoiding_skyscraper(&mut zero_target(), 4).unwrap();
        // the margin n pushes each window one step past doubling
        assert_eq!(c.heights, vec![2, 5, 11, 23]);
        assert!(c.facts.iter().all(|f| f.verified));
    }

    #[test]
    fn syndetic_targets_stall_at_stage_one() {
        for r in [
            build_avoiding_skyscraper(&mut syndetic(), 3),
            build_avoiding_rigid(&mut syndetic(), 3),
            build_avoiding_iei(&mut syndetic(), 2),
        ] {
            assert!(matches!(r, Err(Error::ConstructionStalled { stage: 1, .. })));
        }
    }

    #[test]
    fn rigid_recursion_uses_growing_coefficients() {
        let c = build_avoiding_rigid(&mut zero_target(), 3).unwrap();
        assert_eq!(c.cuts, vec![2, 2, 3]);
        let h = &c.heights;
        assert_eq!(c.conservative_set(1, 1).unwrap().elements(), &[-h[0], 0, h[0]]);
        let direct = intcomb::signed_sums(h, &[1, 2, 3]).unwrap();
        assert_eq!(c.conservative_set(1, 3).unwrap(), direct);
        assert!(c.multiplier_spec().is_ok());
    }

    #[test]
    fn iei_structure_on_trivial_target() {
        let c = build_avoiding_iei(&mut zero_target(), 2).unwrap();
        for (n, b) in c.blocks.iter().enumerate() {
            assert_eq!(b[0], b[2] + 1);
            assert_eq!(b[1], 5 * (n as Int + 1) * b[0]);
        }
        let spec = c.multiplier_spec().unwrap();
        assert_eq!(spec.height(3).unwrap(), *c.heights.last().unwrap());
        let zero = Target::set("zero", SortedIntSet::singleton(0));
        assert!(verify_certificate(&c, &[zero]).all_passed());
    }

    #[test]
    fn plain_on_hk_window() {
        let hk = preset("hajian_kakutani").unwrap();
        let t = Target::spec("hk", hk, LevelId::base_of_c1());
        let mut o = GapOracle::new(t.clone(), 2000).unwrap();
        let c = build_avoiding_skyscraper(&mut o, 3).unwrap();
        let report = verify_certificate(&c, &[t]);
        assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn family_of_copies_matches_plain() {
        let hk = preset("hajian_kakutani").unwrap();
        let t = Target::spec("hk", hk, LevelId::base_of_c1());
        let plain = build_avoiding_skyscraper(&mut GapOracle::new(t.clone(), 500).unwrap(), 3).unwrap();
        let mut two = vec![GapOracle::new(t.clone(), 500).unwrap(), GapOracle::new(t, 500).unwrap()];
        let fam = build_avoiding_family(&mut two, 3).unwrap();
        assert_eq!(plain.heights, fam.heights);
        assert!(matches!(build_avoiding_family(&mut [], 3), Err(Error::InvalidArgument(_))));
    }
}
