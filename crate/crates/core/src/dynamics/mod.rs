//! Exact realization of rank-one maps as piecewise translations of rational
//! intervals, used as the brute-force oracle for every combinatorial claim.

pub mod column;
pub mod distance;
pub mod interval;
pub mod oracle;
pub mod power;

pub use column::{realize_column, ColumnRealization, Geometry};
pub use distance::{dyadic_enumeration, weak_distance, WeakDistance};
pub use interval::{measure_intersection, IntervalSet};
pub use oracle::{
    apply_power_exact, dynamical_conservative_seq, exact_return_measure, level_set, partial_rigidity_ratio,
    refine_for_gaps, return_times, GapRefinement,
};
pub use power::{apply_power, apply_power_with, depth_cap, return_measure, MeasureBounds, PowerImage, PowerOptions};
