//! Percolation analysis of colourings: cluster labels, crossing, annulus
//! and staircase events, and the Monte Carlo harness.

mod clusters;
mod events;
mod mc;

pub use clusters::{label_clusters, ClusterLabels, NO_LABEL};
pub use events::{
    annulus_consequences, annulus_event, crossing, spanning_stats, staircase, staircase_event,
    AnnulusConsequences, AnnulusResult, CrossingKind, CrossingResult, Rect, SpanningSummary, Staircase,
};
pub use mc::{
    crossing_bias_bound, crossing_trial, default_p_cut, estimate_annulus, estimate_crossing, estimate_event,
    estimate_staircase, trial_config, wilson, AnnulusStudy, McStats, StaircaseStudy, CROSSING_TAG, MC_CSV_HEADER,
    Z95,
};
