//! Gap queries against a target that deepens its truncation on demand.

use crate::error::{Error, Result};
use crate::intcomb;
use crate::multipliers::certificate::{Target, TargetData, TargetSource};
use crate::Int;

/// Largest window the oracle will grow to.
pub const MAX_WINDOW: Int = 1 << 40;

#[derive(Clone, Debug)]
pub struct GapOracle {
    target: Target,
    window: Int,
    data: TargetData,
}

impl GapOracle {
    /// A spec target starts certified on `[−window, window]`; a fixed set is
    /// used as given.
    pub fn new(target: Target, window: Int) -> Result<Self> {
        let data = match &target.source {
            TargetSource::Spec { .. } => target.data(window)?,
            TargetSource::Set(_) => target.data(0)?,
        };
        let window = data.certified_bound().unwrap_or(Int::MAX);
        Ok(GapOracle { target, window, data })
    }

    pub fn id(&self) -> &str {
        &self.target.id
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn data(&self) -> &TargetData {
        &self.data
    }

    pub fn window(&self) -> Int {
        self.window
    }

    /// Grows the window to at least `needed`; fixed sets cannot grow.
    pub fn deepen(&mut self, needed: Int) -> Result<()> {
        if matches!(self.target.source, TargetSource::Set(_)) {
            return Err(Error::InsufficientTruncation { needed, certified: self.window });
        }
        let w = needed.max(self.window.saturating_mul(2));
        if w > MAX_WINDOW {
            return Err(Error::InsufficientTruncation { needed, certified: self.window });
        }
        self.data = self.target.data(w)?;
        self.window = self.data.certified_bound().unwrap_or(Int::MAX);
        Ok(())
    }

    /// [`intcomb::find_gap_window`], deepening until the answer is certified.
    pub fn query(&mut self, half_width: Int, multipliers: &[Int], min_l: Int) -> Result<Int> {
        loop {
            match intcomb::find_gap_window(&self.data, half_width, multipliers, min_l) {
                Err(Error::InsufficientTruncation { needed, .. }) => self.deepen(needed)?,
                other => return other,
            }
        }
    }
}

/// Least `ℓ >= min_l` answering the query for every oracle at once.
pub fn joint_query(oracles: &mut [&mut GapOracle], half_width: Int, multipliers: &[Int], min_l: Int) -> Result<Int> {
    let mut l = min_l;
    loop {
        let mut moved = false;
        for o in oracles.iter_mut() {
            let next = o.query(half_width, multipliers, l)?;
            if next != l {
                l = next;
                moved = true;
            }
        }
        if !moved {
            return Ok(l);
        }
    }
}
