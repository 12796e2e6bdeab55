//! Bayesian parametric inference and decision analysis.
//!
//! The crate provides, as composable pieces:
//!
//! - [`dist`]: parametric distributions (density, CDF, quantile, moments,
//!   seeded sampling) with the conventions used everywhere else: Gamma in
//!   shape/rate form, Normal in mean/precision form.
//! - [`conjugate`]: closed-form posterior and predictive updates for the
//!   classical conjugate pairs, finite-grid priors, and the two-event
//!   Bayes rule.
//! - [`elicit`]: fitting prior hyperparameters to expert statements
//!   (mean, mode, quantiles, interval mass) by root finding.
//! - [`jeffreys`]: Fisher information and the square-root-of-information
//!   non-informative prior, with the posteriors it induces.
//! - [`decision`]: finite decision problems under maximum expected
//!   utility, admissibility, decision trees by backward induction, and
//!   the value of information (perfect and experimental).
//! - [`scoring`]: proper scoring rules, logarithmic discrepancy in
//!   discrete and continuous form, and information measures.
//! - [`inference`]: point estimation under a utility, hypothesis
//!   contrast, and highest-density regions.
//!
//! Everything is pure and deterministic: samplers take an explicit seed,
//! and no global state exists, so all types are safe to share across
//! threads.

pub mod conjugate;
pub mod decision;
pub mod dist;
pub mod elicit;
pub mod error;
pub mod inference;
pub mod jeffreys;
pub mod prob;
pub mod quad;
pub mod scoring;
pub mod special;

pub use conjugate::{
    event_posterior, grid_posterior, grid_predictive, ConjugateModel, GridPrior, Likelihood,
    Predictive, SampleSummary,
};
pub use decision::{
    chance_update, optimal_portfolio_weight, solve_tree, value_of_data, value_of_experiment,
    DecisionProblem, Experiment, PolicyValue, PortfolioOptimum, StateProbs, TreeNode,
};
pub use dist::{Distribution, Moments};
pub use elicit::{elicit, Constraint, ElicitFamily, ElicitResult};
pub use error::{Error, Result};
pub use inference::{
    contrast, hpd_region, hypothesis_probabilities, point_estimate, ContrastReport,
    EstimationUtility, HypothesisPartition, Region,
};
pub use jeffreys::{fisher_information, jeffreys_posterior, jeffreys_prior, ImproperDensity};
pub use prob::ProbVector;
pub use scoring::{
    best_normal_approx, binomial_poisson_discrepancy, exam_rule, expected_info_of_experiment,
    expected_score, info_of_data, log_discrepancy, log_discrepancy_density, score,
    OutcomePosterior, RuleKind, ScoreRule,
};
