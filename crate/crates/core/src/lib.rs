//! Exact combinatorics and dynamics of rank-one cutting-and-stacking
//! transformations.
//!
//! The crate is organised bottom-up:
//!
//! * [`intcomb`]: sorted integer sets with a certified truncation horizon,
//!   sumsets, difference sets and gap search.
//! * [`tower`]: cut/spacer parameterisations, heights, descendant sets and
//!   truncated conservative sequences.
//! * [`dynamics`]: the transformation realised as a piecewise translation on
//!   exact rational intervals; the brute-force oracle for everything above.
//! * [`multipliers`]: skyscraper multiplier constructions that emit
//!   re-checkable certificates.
//! * [`zd`]: the product-form analogue for skyscraper `Z^d` actions.

pub mod dynamics;
pub mod error;
pub mod intcomb;
pub mod multipliers;
pub mod rational;
pub mod tower;
pub mod zd;

pub use error::{Error, Result};
pub use intcomb::SortedIntSet;
pub use tower::{CutSpacerSpec, LevelId, Rule, Stage};

/// Integer type used for heights, spacer counts and return times.
pub type Int = i64;
