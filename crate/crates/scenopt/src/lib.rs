//! Margin-based scenario optimization.
//!
//! Robust constraints of the form `f(x, theta) <= 0` for all `theta` are
//! replaced by `N` sampled scenario constraints enforced with a margin
//! `gamma`: `f(x, theta_i) <= -gamma`. The margin buys distribution-free
//! certificates on the probability of violation
//! `V(x) = P{ f(x, theta) > 0 }` whose strength depends on norm-based
//! capacity constants of the constraint family rather than on the number
//! of decision variables.
//!
//! The crate is organized around:
//!
//! - [`chain`] — the recursive constraint-function model (pseudo-linear
//!   components combined by max/min/plus/minus stages under Lipschitz
//!   wrappers) and its certified capacity constants,
//! - [`risk`] — margin losses and empirical risks,
//! - [`scenario`] — seeded scenario sampling and Monte-Carlo validation,
//! - [`certificates`] — violation bounds, sample complexities and the
//!   margin complexity,
//! - [`solvers`] — projected-subgradient heuristics for the hard-,
//!   soft- and max-margin programs and their regularized variants,
//! - [`oracles`] — independent estimators (Monte-Carlo Rademacher
//!   complexity, greedy covers, closed-form circle violation) used to
//!   cross-check the bounds,
//! - [`harness`] — batch pipelines behind the `scenopt` binary.
//!
//! Every capability has a runnable example under `examples/`; start with
//! `cargo run -p scenopt --example hard_margin`.

pub mod certificates;
pub mod chain;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod oracles;
pub mod risk;
pub mod rng;
pub mod scenario;
pub mod solvers;
pub(crate) mod util;

pub use certificates::{
    convex_baseline_certificate, convex_sample_complexity, convex_scenario_delta,
    default_gamma_grid, dimension_crossover, empirical_rademacher_bound, fast_rate_violation_bound,
    margin_complexity, margin_grid_violation_bound, margin_sample_complexity,
    margin_violation_bound, posterior_violation_bound, rademacher_bound, vc_bound, BoundKind,
    BoundTerms, Certificate, ComplexityEstimate, ComplexityKind, RadMode,
};
pub use chain::{
    build_chain, compute_constants, lambda_bar, CertLevel, ChainComponent, ChainConstants,
    ChainSpec, ComponentConstants, ConstantsOptions, ConstraintChain, Domain, FeatureMap,
    Monomial, ScalarWrapper, StageOp, ThetaSupport,
};
pub use error::{Error, Result};
pub use oracles::{
    estimate_empirical_rademacher, exact_violation_circle, greedy_cover, CoverReport,
    RademacherEstimate,
};
pub use risk::{empirical_risks, margin_loss, LossKind, MarginSpec, RiskReport};
pub use scenario::{
    monte_carlo_violation, sample_scenarios, DistributionSpec, ScenarioSet, SeedPolicy,
    ViolationEstimate,
};
pub use solvers::{
    fixed_budget_procedure, solve_hard_margin, solve_max_margin, solve_regularized,
    solve_soft_margin, solve_with_objective, FeasibilityStatus, ObjectiveSpec, SolveResult,
    SolverConfig, SolverTrace,
};
