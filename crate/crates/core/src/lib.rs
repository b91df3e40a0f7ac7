//! Entropies and relative entropies (KL, Rényi, Tsallis) for probability
//! measures on the line or on finite sets, with certified partition lower
//! bounds and a greedy refinement engine.

// NaN must fail these checks, so `!(x > 0.0)` is deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod divergence;
pub mod engine;
pub mod error;
pub mod extended;
pub mod fixtures;
pub mod io;
pub mod measure;
pub mod partition;
pub mod poly;
pub mod quadrature;
pub mod radon_nikodym;
pub mod simple;
pub mod sum;
pub mod suites;

pub use divergence::{
    divergence, entropy, entropy_divergence_identity_check, entropy_relative_to, kl_divergence,
    kl_divergence_over_reference, q_log, renyi_divergence, renyi_entropy, renyi_to_tsallis, shannon_entropy,
    tsallis_divergence, tsallis_entropy, tsallis_to_renyi, Family, OrderParam,
};
pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use measure::{cell_mass, Cell, Interval, ProbabilityMeasure, ReferenceMeasure};
pub use partition::{
    common_refinement, holder_cell_check, is_refinement, partition_kl, partition_renyi, partition_stats,
    partition_tsallis, split_cell, Partition, PartitionStats, SplitAt,
};
pub use quadrature::{QuadratureConfig, QuadratureMethod};
pub use radon_nikodym::{check_absolute_continuity, rn_derivative, AbsoluteContinuity, DensityEvaluator, MeasurePair};
pub use simple::{
    induced_measure, quantize_rn_derivative, simple_divergence, simple_divergence_mass_form, InducedMeasure,
    SimpleFunction,
};
pub use engine::{
    propose_splits, run_alpha_sweep, run_order_sweep, supremum_estimate, Candidate, CertifiedEstimate,
    RefinementConfig, RefinementTrace, SplitStrategy, StopReason, TraceStep,
};
