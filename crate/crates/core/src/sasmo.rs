//! The adaptive search loop.
//!
//! Each iteration draws from the current mixture, estimates the domination
//! measure of every draw by importance sampling, keeps the draws at or below
//! the sample `rho`-quantile, clusters them, and fits one Gaussian per
//! cluster. The loop stops once the clustering threshold falls below
//! `threshold_bound` or after `t_max` iterations, and returns the component
//! means as the approximate Pareto set.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{cluster, ThresholdRule, THRESHOLD_FLOOR};
use crate::dominance::dominates_slice;
use crate::error::{invalid, Error, Result};
use crate::estimator::{is_estimate, weighted_dominator_sums};
use crate::model::{fit_component, variance_floor, ComponentSnapshot, GaussianComponent, MixtureModel};
use crate::problems::{lookup, ProblemDefinition};
use crate::space::{DecisionPoint, ObjectiveVector};

/// Version of the serialized [`RunHistory`] layout.
pub const HISTORY_SCHEMA_VERSION: u32 = 1;

/// Mean of the first sampling component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InitialMean {
    /// The origin, whether or not it is inside the box.
    #[default]
    Zero,
    BoxCenter,
    Point(Vec<f64>),
}

/// All hyperparameters of a run. [`Default`] gives the standard settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    /// Sample size of iterations 0 and 1.
    pub n0: usize,
    /// `N_k = ceil(k^growth_exponent * n0)` for `k >= 1`.
    pub growth_exponent: f64,
    /// Elite quantile level.
    pub rho: f64,
    /// Weight of the uniform component in the sampling mixture.
    pub alpha: f64,
    /// Stop once the next threshold distance falls below this.
    pub threshold_bound: f64,
    /// Threshold distance of iteration 0; `None` means a tenth of the box
    /// diagonal.
    pub initial_threshold: Option<f64>,
    /// Threshold shrink factor `C > 1`.
    pub shrink_factor: f64,
    pub threshold_rule: ThresholdRule,
    pub t_max: usize,
    pub mu0: InitialMean,
    /// Initial covariance is `sigma0_scale * I`.
    pub sigma0_scale: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: "zdt2".into(),
            n0: 1000,
            growth_exponent: 1.01,
            rho: 0.10,
            alpha: 0.1,
            threshold_bound: 0.001,
            initial_threshold: None,
            shrink_factor: 1.1,
            threshold_rule: ThresholdRule::Trace,
            t_max: 100,
            mu0: InitialMean::Zero,
            sigma0_scale: 1000.0,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn for_problem(problem: impl Into<String>) -> Self {
        Self {
            problem: problem.into(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: String| if ok { Ok(()) } else { Err(invalid(msg)) };
        check(self.n0 >= 1, format!("n0 must be positive, got {}", self.n0))?;
        check(
            self.growth_exponent.is_finite() && self.growth_exponent >= 0.0,
            format!("growth exponent {} must be >= 0", self.growth_exponent),
        )?;
        check(
            self.rho > 0.0 && self.rho < 1.0,
            format!("rho {} outside (0, 1)", self.rho),
        )?;
        check(
            self.alpha > 0.0 && self.alpha < 1.0,
            format!("alpha {} outside (0, 1)", self.alpha),
        )?;
        check(
            self.threshold_bound > THRESHOLD_FLOOR && self.threshold_bound.is_finite(),
            format!("threshold bound {} must exceed {THRESHOLD_FLOOR}", self.threshold_bound),
        )?;
        if let Some(d) = self.initial_threshold {
            check(
                d.is_finite() && d > 0.0,
                format!("initial threshold {d} must be positive"),
            )?;
        }
        check(
            self.shrink_factor > 1.0,
            format!("shrink factor {} must exceed 1", self.shrink_factor),
        )?;
        check(self.t_max >= 1, "t_max must be at least 1".into())?;
        check(
            self.sigma0_scale.is_finite() && self.sigma0_scale > 0.0,
            format!("sigma0 scale {} must be positive", self.sigma0_scale),
        )
    }

    /// Sample size of iteration `k`.
    pub fn sample_size(&self, k: usize) -> usize {
        if k == 0 {
            self.n0
        } else {
            ((k as f64).powf(self.growth_exponent) * self.n0 as f64).ceil() as usize
        }
    }

    /// Threshold distance of iteration 0 for a problem.
    pub fn resolved_initial_threshold(&self, problem: &ProblemDefinition) -> f64 {
        self.initial_threshold
            .unwrap_or_else(|| 0.1 * problem.bounds().diagonal())
    }

    fn initial_mean(&self, problem: &ProblemDefinition) -> Result<Vec<f64>> {
        match &self.mu0 {
            InitialMean::Zero => Ok(vec![0.0; problem.dim()]),
            InitialMean::BoxCenter => Ok(problem.bounds().center().into_inner()),
            InitialMean::Point(p) if p.len() == problem.dim() => Ok(p.clone()),
            InitialMean::Point(p) => Err(invalid(format!(
                "initial mean has {} coordinates but {} has {}",
                p.len(),
                problem.name(),
                problem.dim()
            ))),
        }
    }
}

/// One iteration of the loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub sample_size: usize,
    /// Elite reference value (the sample quantile of the estimates).
    pub gamma: f64,
    pub elite_count: usize,
    /// Number of clusters, equal to the number of refitted components.
    pub components: usize,
    /// Threshold distance used for this iteration's clustering.
    pub threshold: f64,
    pub next_threshold: f64,
    pub means: Vec<Vec<f64>>,
    pub traces: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Threshold,
    MaxIterations,
}

/// A returned component mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalPoint {
    pub point: DecisionPoint,
    pub objectives: ObjectiveVector,
    /// Domination measure estimated against the last iteration's draws.
    pub dmeasure: f64,
    /// The fitted mean lay outside the box and was projected onto it.
    pub clipped: bool,
}

/// Full record of a run, serializable to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHistory {
    pub schema_version: u32,
    pub config: RunConfig,
    pub initial_threshold: f64,
    pub iterations: Vec<IterationRecord>,
    pub stop_reason: StopReason,
    pub terminal: Vec<FinalPoint>,
    pub components: Vec<ComponentSnapshot>,
}

impl RunHistory {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidState(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| invalid(e.to_string()))
    }
}

/// Runs the search on a registered problem.
pub fn run(config: &RunConfig) -> Result<RunHistory> {
    let problem = lookup(&config.problem)?;
    run_problem(&problem, config)
}

fn evaluate_all(problem: &ProblemDefinition, xs: &[DecisionPoint]) -> Result<Vec<ObjectiveVector>> {
    xs.par_iter()
        .map(|x| {
            let f = problem.evaluate_unchecked(x.as_slice());
            if f.iter().all(|v| v.is_finite()) {
                Ok(ObjectiveVector(f))
            } else {
                Err(Error::NonFiniteObjective {
                    point: x.0.clone(),
                    objectives: f,
                })
            }
        })
        .collect()
}

/// Runs the search on any problem definition; `config.problem` is only
/// recorded.
pub fn run_problem(problem: &ProblemDefinition, config: &RunConfig) -> Result<RunHistory> {
    config.validate()?;
    let bounds = problem.bounds().clone();
    let volume = bounds.volume();
    let floor = variance_floor(&bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let initial_threshold = config.resolved_initial_threshold(problem);
    let mut delta = initial_threshold;
    let mut components = vec![GaussianComponent::isotropic(
        config.initial_mean(problem)?,
        config.sigma0_scale,
    )?];
    let mut iterations = Vec::new();
    let mut k = 0;

    let (stop_reason, last_objectives, last_densities) = loop {
        let n = config.sample_size(k);
        let mixture = MixtureModel::new(components, config.alpha, bounds.clone())?;
        let draws = mixture.sample(&mut rng, n)?;
        let objectives = evaluate_all(problem, &draws)?;
        let densities: Vec<f64> = draws
            .par_iter()
            .map(|x| mixture.density_unchecked(x.as_slice()))
            .collect();
        let estimates = is_estimate(&objectives, &densities, volume)?;

        let mut sorted = estimates.clone();
        sorted.sort_by(f64::total_cmp);
        let rank = ((config.rho * n as f64).ceil() as usize).clamp(1, n);
        let gamma = sorted[rank - 1];
        let elite_idx: Vec<usize> = (0..n).filter(|&i| estimates[i] <= gamma).collect();
        let elites: Vec<DecisionPoint> = elite_idx.iter().map(|&i| draws[i].clone()).collect();

        let mut clusters = cluster(&elites, delta, &mut rng)?;
        let next = clusters.update_threshold_with(config.threshold_rule, config.shrink_factor)?;

        components = clusters
            .clusters
            .iter()
            .map(|c| {
                let pts: Vec<DecisionPoint> = c.points(&elites).cloned().collect();
                let g: Vec<f64> = c.members.iter().map(|&m| densities[elite_idx[m]]).collect();
                fit_component(&pts, &g, floor)
            })
            .collect::<Result<_>>()?;

        iterations.push(IterationRecord {
            k,
            sample_size: n,
            gamma,
            elite_count: elites.len(),
            components: components.len(),
            threshold: delta,
            next_threshold: next,
            means: components.iter().map(|c| c.mean().to_vec()).collect(),
            traces: components.iter().map(GaussianComponent::trace).collect(),
        });

        if next < config.threshold_bound {
            break (StopReason::Threshold, objectives, densities);
        }
        if k + 1 >= config.t_max {
            break (StopReason::MaxIterations, objectives, densities);
        }
        delta = next;
        k += 1;
    };

    let terminal = terminal_points(problem, &components, &last_objectives, &last_densities, volume)?;
    Ok(RunHistory {
        schema_version: HISTORY_SCHEMA_VERSION,
        config: config.clone(),
        initial_threshold,
        iterations,
        stop_reason,
        terminal,
        components: components.iter().map(GaussianComponent::snapshot).collect(),
    })
}

/// Clips the component means into the box, evaluates them, and estimates
/// their domination measure against the last batch of draws (the means
/// themselves carry zero weight).
fn terminal_points(
    problem: &ProblemDefinition,
    components: &[GaussianComponent],
    draws: &[ObjectiveVector],
    densities: &[f64],
    volume: f64,
) -> Result<Vec<FinalPoint>> {
    let bounds = problem.bounds();
    let points: Vec<(DecisionPoint, bool)> = components
        .iter()
        .map(|c| {
            let clipped = !bounds.contains(c.mean());
            (DecisionPoint(bounds.clip(c.mean())), clipped)
        })
        .collect();
    let objectives = evaluate_all(problem, &points.iter().map(|p| p.0.clone()).collect::<Vec<_>>())?;

    let uniform = 1.0 / volume;
    let mut all = draws.to_vec();
    all.extend(objectives.iter().cloned());
    let mut weights: Vec<f64> = densities.iter().map(|g| uniform / g).collect();
    weights.resize(all.len(), 0.0);
    let sums = weighted_dominator_sums(&all, &weights)?;
    let n = draws.len() as f64;

    Ok(points
        .into_iter()
        .zip(objectives)
        .zip(&sums[draws.len()..])
        .map(|(((point, clipped), objectives), s)| FinalPoint {
            point,
            objectives,
            dmeasure: s / n,
            clipped,
        })
        .collect())
}

/// The returned points of a run. With `post_filter`, means whose image is
/// dominated by another mean's are dropped.
pub fn final_points(history: &RunHistory, post_filter: bool) -> Vec<FinalPoint> {
    let pts = &history.terminal;
    pts.iter()
        .filter(|p| {
            !post_filter
                || !pts
                    .iter()
                    .any(|q| dominates_slice(q.objectives.as_slice(), p.objectives.as_slice()))
        })
        .cloned()
        .collect()
}

/// The returned component means with their objectives, see [`final_points`].
pub fn final_front(history: &RunHistory, post_filter: bool) -> Vec<(DecisionPoint, ObjectiveVector)> {
    final_points(history, post_filter)
        .into_iter()
        .map(|p| (p.point, p.objectives))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_standard_settings() {
        let c = RunConfig::default();
        assert_eq!(c.n0, 1000);
        assert_eq!(c.growth_exponent, 1.01);
        assert_eq!((c.rho, c.alpha), (0.10, 0.1));
        assert_eq!((c.threshold_bound, c.shrink_factor), (0.001, 1.1));
        assert_eq!((c.t_max, c.sigma0_scale), (100, 1000.0));
        assert_eq!(c.mu0, InitialMean::Zero);
        c.validate().unwrap();
    }

    #[test]
    fn sample_size_schedule() {
        let c = RunConfig::default();
        assert_eq!(c.sample_size(0), 1000);
        assert_eq!(c.sample_size(1), 1000);
        for k in 1..60 {
            let expected = ((k as f64).powf(1.01) * 1000.0).ceil() as usize;
            assert_eq!(c.sample_size(k), expected);
        }
        assert_eq!(c.sample_size(2), 2014);
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            RunConfig {
                n0: 0,
                ..RunConfig::default()
            },
            RunConfig {
                rho: 1.0,
                ..RunConfig::default()
            },
            RunConfig {
                alpha: 0.0,
                ..RunConfig::default()
            },
            RunConfig {
                shrink_factor: 1.0,
                ..RunConfig::default()
            },
            RunConfig {
                t_max: 0,
                ..RunConfig::default()
            },
            RunConfig {
                threshold_bound: 0.0,
                ..RunConfig::default()
            },
            RunConfig {
                initial_threshold: Some(-1.0),
                ..RunConfig::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
        assert!(matches!(run(&RunConfig::for_problem("nope")), Err(Error::NotFound(_))));
    }

    #[test]
    fn single_iteration_run() {
        let c = RunConfig {
            n0: 200,
            t_max: 1,
            ..RunConfig::for_problem("identity2d")
        };
        let h = run(&c).unwrap();
        assert_eq!(h.iterations.len(), 1);
        assert_eq!(h.stop_reason, StopReason::MaxIterations);
        let it = &h.iterations[0];
        assert!(it.elite_count >= 20 && it.elite_count <= 200);
        assert_eq!(it.components, h.terminal.len());
    }

    #[test]
    fn thresholds_strictly_decrease() {
        for rule in [ThresholdRule::Trace, ThresholdRule::Geometric] {
            let c = RunConfig {
                n0: 100,
                t_max: 6,
                threshold_rule: rule,
                ..RunConfig::for_problem("mop6")
            };
            let h = run(&c).unwrap();
            for w in h.iterations.windows(2) {
                assert!(w[1].threshold < w[0].threshold);
                assert_eq!(w[1].threshold, w[0].next_threshold);
            }
            for it in &h.iterations {
                assert!(it.next_threshold <= it.threshold / c.shrink_factor);
                assert!(it.elite_count >= (c.rho * it.sample_size as f64).ceil() as usize);
            }
        }
    }

    #[test]
    fn serialized_history_round_trips() {
        let c = RunConfig {
            n0: 100,
            t_max: 2,
            seed: 5,
            ..RunConfig::for_problem("zdt3")
        };
        let a = run(&c).unwrap();
        let json = a.to_json().unwrap();
        assert_eq!(RunHistory::from_json(&json).unwrap(), a);
        assert_eq!(run(&c).unwrap().to_json().unwrap(), json);
    }

    #[test]
    fn non_finite_objectives_abort() {
        use crate::problems::{ObjectiveFn, Sense};
        use crate::space::SearchBox;
        use std::sync::Arc;
        let f: ObjectiveFn = Arc::new(|x: &[f64]| vec![x[0], if x[0] > 0.5 { f64::NAN } else { 1.0 }]);
        let p = ProblemDefinition::custom("nan", SearchBox::cube(1, 0.0, 1.0).unwrap(), 2, Sense::Min, f);
        let err = run_problem(
            &p,
            &RunConfig {
                n0: 50,
                ..RunConfig::for_problem("nan")
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteObjective { .. }), "{err}");
    }

    fn fp(x: f64, f: &[f64]) -> FinalPoint {
        FinalPoint {
            point: DecisionPoint(vec![x]),
            objectives: ObjectiveVector(f.to_vec()),
            dmeasure: 0.0,
            clipped: false,
        }
    }

    #[test]
    fn post_filter() {
        let mut h = run(&RunConfig {
            n0: 50,
            t_max: 1,
            ..RunConfig::for_problem("identity2d")
        })
        .unwrap();
        h.terminal = vec![fp(0.0, &[0.0, 0.0]), fp(1.0, &[1.0, 1.0])];
        assert_eq!(final_front(&h, false).len(), 2);
        let kept = final_front(&h, true);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].0, DecisionPoint(vec![0.0]));
        h.terminal = vec![fp(0.0, &[0.0, 1.0]), fp(1.0, &[1.0, 0.0])];
        assert_eq!(final_front(&h, true), final_front(&h, false));
        h.terminal = vec![fp(0.5, &[0.5, 0.5])];
        assert_eq!(final_front(&h, false).len(), 1);
    }
}
