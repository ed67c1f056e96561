//! Geometry of the realized columns.
//!
//! Column `C_m` covers `[0, F_m)` with `F_m = h_m · w_m`, so at depth `m`
//! every level is one cell `[q·w_m, (q+1)·w_m)` and the map from level index
//! to cell index `q` is a permutation of `0..h_m`. Passing from `C_n` to
//! `C_{n+1}` sends cell `q` of a copied level to `q·r_n + k` (subcolumn `k`)
//! and puts the `p`-th spacer of stage `n` in cell `h_n·r_n + p`.

use num_bigint::BigInt;

use crate::dynamics::interval::IntervalSet;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tower::{CutSpacerSpec, Stage};
use crate::Int;

/// Snapshot of a `CutSpacerSpec` through column `depth`.
#[derive(Clone, Debug)]
pub struct Geometry {
    heights: Vec<Int>,
    stages: Vec<Stage>,
    /// `offsets[n][k] = k·h_n + Σ_{j<k} s_{n,j}`, with `offsets[n][r_n] = h_{n+1}`.
    offsets: Vec<Vec<Int>>,
    /// `Σ_{j<k} s_{n,j}` for `k = 0..=r_n`.
    spacer_prefix: Vec<Vec<Int>>,
    widths: Vec<Rational>,
}

impl Geometry {
    /// Geometry through column `depth`, or through the last defined column
    /// of an explicit-only spec, whichever is smaller.
    pub fn new(spec: &CutSpacerSpec, depth: usize) -> Result<Self> {
        let depth = spec.defined_stages().map_or(depth, |d| d.min(depth));
        let mut g = Geometry {
            heights: vec![1],
            stages: Vec::new(),
            offsets: Vec::new(),
            spacer_prefix: Vec::new(),
            widths: vec![Rational::from_integer(BigInt::from(1))],
        };
        for n in 0..depth {
            g.push(spec.stage(n)?, spec.height(n + 1)?);
        }
        Ok(g)
    }

    fn push(&mut self, st: Stage, next_height: Int) {
        let n = self.stages.len();
        let h = self.heights[n];
        let mut offs = Vec::with_capacity(st.r + 1);
        let mut pre = Vec::with_capacity(st.r + 1);
        let mut acc = 0;
        for k in 0..=st.r {
            offs.push(k as Int * h + acc);
            pre.push(acc);
            if k < st.r {
                acc += st.spacers[k];
            }
        }
        let w = &self.widths[n] / Rational::from_integer(BigInt::from(st.r));
        self.offsets.push(offs);
        self.spacer_prefix.push(pre);
        self.widths.push(w);
        self.heights.push(next_height);
        self.stages.push(st);
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn height(&self, n: usize) -> Int {
        self.heights[n]
    }

    pub fn width(&self, n: usize) -> &Rational {
        &self.widths[n]
    }

    pub fn stage(&self, n: usize) -> &Stage {
        &self.stages[n]
    }

    pub fn offset(&self, n: usize, k: usize) -> Int {
        self.offsets[n][k]
    }

    /// `F_n`, the right edge of `C_n`.
    pub fn frontier(&self, n: usize) -> Rational {
        &self.widths[n] * Rational::from_integer(BigInt::from(self.heights[n]))
    }

    /// Cell index of level `idx` of `C_m`.
    pub fn cell_of(&self, m: usize, idx: Int) -> Int {
        let mut digits: Vec<(Int, Int)> = Vec::new();
        let mut idx = idx;
        let mut base = 0;
        let mut s = m;
        while s > 0 {
            let n = s - 1;
            let offs = &self.offsets[n];
            let k = offs.partition_point(|&o| o <= idx) - 1;
            let within = idx - offs[k];
            let h = self.heights[n];
            let r = self.stages[n].r as Int;
            if within < h {
                digits.push((k as Int, r));
                idx = within;
                s = n;
            } else {
                let p = self.spacer_prefix[n][k] + within - h;
                base = h * r + p;
                break;
            }
        }
        digits.iter().rev().fold(base, |q, &(k, r)| q * r + k)
    }

    /// Level index of cell `q` of `C_m`.
    pub fn level_of(&self, m: usize, q: Int) -> Int {
        let mut subs: Vec<usize> = Vec::new();
        let mut q = q;
        let mut s = m;
        let mut idx = 0;
        while s > 0 {
            let n = s - 1;
            let h = self.heights[n];
            let r = self.stages[n].r as Int;
            if q < h * r {
                subs.push((q % r) as usize);
                q /= r;
                s = n;
            } else {
                let p = q - h * r;
                let pre = &self.spacer_prefix[n];
                let k = pre.partition_point(|&x| x <= p) - 1;
                idx = (k as Int + 1) * h + p;
                break;
            }
        }
        // subs[i] belongs to stage m-1-i
        for (stage, &k) in (m - subs.len()..).zip(subs.iter().rev()) {
            idx += self.offsets[stage][k];
        }
        idx
    }

    /// Left endpoint of level `idx` of `C_m`.
    pub fn level_left(&self, m: usize, idx: Int) -> Rational {
        &self.widths[m] * Rational::from_integer(BigInt::from(self.cell_of(m, idx)))
    }
}

/// Exact realization of column `C_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnRealization {
    pub stage: usize,
    pub width: Rational,
    pub levels: Vec<IntervalSet>,
    pub spacer_frontier: Rational,
}

impl ColumnRealization {
    /// `level_index,left,right` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level_index,left,right\n");
        for (i, l) in self.levels.iter().enumerate() {
            let (a, b) = &l.intervals()[0];
            out.push_str(&format!(
                "{i},{},{}\n",
                crate::rational::to_text(a),
                crate::rational::to_text(b)
            ));
        }
        out
    }
}

/// Levels of `C_m` with exact endpoints.
pub fn realize_column(spec: &CutSpacerSpec, m: usize) -> Result<ColumnRealization> {
    if !spec.is_defined(m.saturating_sub(1)) && m > 0 {
        return Err(Error::MissingStage(m - 1));
    }
    let g = Geometry::new(spec, m)?;
    let w = g.width(m).clone();
    let levels = (0..g.height(m))
        .map(|idx| {
            let a = g.level_left(m, idx);
            let b = &a + &w;
            IntervalSet::interval(a, b)
        })
        .collect();
    Ok(ColumnRealization { stage: m, width: w.clone(), levels, spacer_frontier: g.frontier(m) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::tower::preset;

    #[test]
    fn hk_first_columns() {
        let hk = preset("hajian_kakutani").unwrap();
        let c0 = realize_column(&hk, 0).unwrap();
        assert_eq!(c0.levels, vec![IntervalSet::interval(int(0), int(1))]);
        let c1 = realize_column(&hk, 1).unwrap();
        let lefts: Vec<Rational> = c1.levels.iter().map(|l| l.intervals()[0].0.clone()).collect();
        assert_eq!(lefts, vec![int(0), ratio(1, 2), int(1), ratio(3, 2)]);
        assert_eq!(c1.width, ratio(1, 2));
        let c2 = realize_column(&hk, 2).unwrap();
        assert_eq!(c2.levels.len(), 16);
        assert_eq!(c2.levels[0], IntervalSet::interval(int(0), ratio(1, 4)));
        let total = c2.levels.iter().fold(IntervalSet::empty(), |acc, l| acc.union(l));
        assert_eq!(total.measure(), int(4));
        assert_eq!(c2.spacer_frontier, int(4));
    }

    #[test]
    fn cells_are_a_permutation() {
        for name in ["hajian_kakutani", "infinite_chacon"] {
            let spec = preset(name).unwrap();
            let g = Geometry::new(&spec, 4).unwrap();
            for m in 0..=4 {
                let h = g.height(m);
                let mut cells: Vec<Int> = (0..h).map(|i| g.cell_of(m, i)).collect();
                for (i, &q) in cells.iter().enumerate() {
                    assert_eq!(g.level_of(m, q), i as Int);
                }
                cells.sort_unstable();
                assert_eq!(cells, (0..h).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn levels_stack_inside_parents() {
        // copy k of level i of C_n sits in the k-th r-th of that level
        let spec = preset("infinite_chacon").unwrap();
        let g = Geometry::new(&spec, 3).unwrap();
        for n in 0..3 {
            for i in 0..g.height(n) {
                for k in 0..g.stage(n).r {
                    let child = g.offset(n, k) + i;
                    let expect = g.level_left(n, i) + g.width(n + 1) * int(k as i64);
                    assert_eq!(g.level_left(n + 1, child), expect);
                }
            }
        }
    }
}
