//! Accuracy metrics and the seeded benchmark harness.

mod benchmark;
mod delta;
mod metrics;

pub use benchmark::{
    aggregate, place_sources, run_benchmark, run_trial, save_aggregate, save_trial_table, write_trial_table,
    AccuracyPoint, AggregateReport, Algorithm, BenchmarkOutput, BenchmarkSpec, DeltaStat, GroupAggregate,
    SourceSpacing, Stat, TrialRecord, PLACEMENT_ATTEMPTS, SCHEMA_VERSION,
};
pub use delta::{
    delta_from_table, delta_metric, distance_table, min_matching, DeltaConfig, EtaMode, EXHAUSTIVE_MAX_PAIRS,
    EXHAUSTIVE_MAX_SIDE,
};
pub use metrics::{error_distance, feasible_rank, parameter_mse, rank_accuracy, within_top};
