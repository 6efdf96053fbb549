//! Two-sample rank effects with exact tie handling.
//!
//! This crate computes the relative effect `theta = P(X > Y) + P(X = Y)/2`,
//! the success odds `lambda_so = theta / (1 - theta)` and the win ratio
//! `lambda_wr = P(X > Y) / P(X < Y)` for comparisons of two treatments, from
//! raw samples, exact discrete distributions or binary success rates.
//! Outcomes are stored as exact fixed-point decimals or ordinal categories,
//! so ties are decided exactly rather than by floating-point luck.
//!
//! On top of the effect measures it provides Brunner-Munzel inference for
//! `H0: theta = 1/2` with range-preserving logit confidence intervals, a
//! seeded bootstrap interval for the win ratio, coarsening and
//! category-merging transforms, and multi-group tooling: pairwise effect
//! matrices, dominance-cycle detection, mixture-reference comparisons and
//! stratified summaries.
//!
//! The `releff` binary exposes all of this on the command line; see the
//! repository README.

pub mod builtin;
pub mod coarsen;
pub mod effects;
pub mod error;
pub mod inference;
pub mod io;
pub mod multigroup;
pub mod rational;
pub mod report;
pub mod sample;
pub mod tdist;
pub mod value;

pub use coarsen::{coarsen, merge_categories, CoarseningRule};
pub use effects::{
    binary_effects, binary_effects_f64, count_pairs, count_pairs_fast, effects_from_counts,
    effects_from_distributions, effects_from_samples, EffectEstimates, Extended, PairCounts,
};
pub use error::{Error, Result};
pub use inference::{
    brunner_munzel, ci_lambda_so, ci_lambda_wr_bootstrap, ci_theta_logit, estimate_theta_ranks,
    Alternative, CiMethod, CiScale, ConfidenceInterval, TestResult,
};
pub use io::{parse_csv, parse_distribution_spec, write_csv, CsvConfig, Dataset, Record};
pub use multigroup::{
    detect_cycles, effects_between, mixture_reference_effects, pairwise_effects, stratified_summary,
    EdgeRule, EffectInput, MeanWeighting, PairwiseMatrix, Stratum, StratifiedSummary, TournamentReport,
};
pub use sample::{DiscreteDistribution, Sample};
pub use value::{OrderedValue, Scale};
