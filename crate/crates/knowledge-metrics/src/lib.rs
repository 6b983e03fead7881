//! Comparison metrics between the interactions of two (or three)
//! models on the same samples:
//!
//! - preserve / discard / new decomposition of per-subset strength,
//!   with per-order aggregates;
//! - the learnability ratio of preserved knowledge for a model trained
//!   from scratch;
//! - Jaccard similarity over non-negative 2d expansions, and epoch
//!   trajectories of that similarity against the final model.
//!
//! All operations are pure; batch aggregation uses fixed reduction
//! order so repeated runs produce identical floating-point output.

pub mod decompose;
pub mod error;
pub mod jaccard;
pub mod ratio;
pub mod report;
pub mod trajectory;

pub use decompose::{decompose, order_decomposition, KnowledgeDecomposition, OrderDecomposition};
pub use error::{MetricError, Result};
pub use jaccard::{jaccard, split_nonneg, NonNegVector};
pub use ratio::{learnability_ratio, pooled_ratio, PooledRatio, RatioReport};
pub use report::{
    write_order_decomposition, write_ratio_report, write_subset_dump, write_trajectory_report,
    ReportFormat,
};
pub use trajectory::{
    trajectory, trajectory_with_options, TrajectoryOptions, TrajectoryRecord, Variant,
};
