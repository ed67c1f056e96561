//! Skyscraper and rank-one multipliers built against a target's conservative
//! data, each shipped with facts that can be re-checked from scratch.

pub mod avoid;
pub mod certificate;
pub mod ergodic;
pub mod gap_oracle;
pub mod thm41;

pub use avoid::{build_avoiding_family, build_avoiding_iei, build_avoiding_rigid, build_avoiding_skyscraper};
pub use certificate::{
    check_fact, spec_window, verify_certificate, Fact, FactBody, FactCheck, MultiplierCertificate, Style, SystemRef,
    Target, TargetSource, VerificationReport,
};
pub use ergodic::{build_ergodic_heights, level_pairs};
pub use gap_oracle::{joint_query, GapOracle};
pub use thm41::{build_thm41, cut_bound, inner_block_sum, select_stages};
