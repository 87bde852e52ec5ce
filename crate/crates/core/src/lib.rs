//! Multi-objective optimization by minimizing the *domination measure*.
//!
//! The domination measure `D(x)` of a solution is the fraction of the
//! solution space whose members Pareto-dominate it. Every Pareto-optimal
//! solution has `D(x) = 0`, so a vector-valued problem becomes a scalar one
//! with a known optimal value. This crate estimates `D` by (importance)
//! sampling and minimizes it with an adaptive Gaussian-mixture search that
//! keeps one component per cluster of elite solutions, so the final
//! component means spread out over the Pareto set.
//!
//! ```
//! use domsearch::sasmo::{run, final_front, RunConfig};
//!
//! let config = RunConfig { n0: 200, t_max: 3, ..RunConfig::for_problem("identity2d") };
//! let history = run(&config).unwrap();
//! for (x, f) in final_front(&history, false) {
//!     assert_eq!(x.as_slice(), f.as_slice());
//! }
//! ```
//!
//! Modules, bottom-up:
//!
//! * [`space`] and [`dominance`]: points, boxes and the dominance relation.
//! * [`problems`]: the benchmark registry and reference fronts.
//! * [`estimator`]: exact, uniform Monte Carlo and importance-sampling
//!   estimators of `D`.
//! * [`model`]: Gaussian components and the uniform-mixed sampling density.
//! * [`cluster`]: threshold clustering of elite sets.
//! * [`sasmo`]: the search loop and its run history.
//! * [`metrics`]: convergence and diversity indicators.

pub mod cluster;
pub mod dominance;
pub mod error;
pub mod estimator;
pub mod metrics;
pub mod model;
pub mod problems;
pub mod sasmo;
pub mod space;

pub use dominance::{dominates, non_dominated, non_dominated_indices};
pub use error::{Error, Result};
pub use space::{box_volume, in_box, DecisionPoint, ObjectiveVector, SearchBox};

// The guide under book/ is compiled as doc-tests so its snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/domination-measure.md")]
    mod domination_measure {}
    #[doc = include_str!("../../../book/src/estimators.md")]
    mod estimators {}
    #[doc = include_str!("../../../book/src/sampling-model.md")]
    mod sampling_model {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/search-loop.md")]
    mod search_loop {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
