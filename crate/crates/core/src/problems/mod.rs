//! Benchmark problem registry.
//!
//! Every problem is exposed in minimization form: maximization problems
//! (MOP3) have their objectives negated by [`ProblemDefinition::evaluate`],
//! so everything downstream of the registry only ever minimizes.

pub mod benchmarks;
mod front;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::dominance::dominates_slice;
use crate::error::{Error, Result};
use crate::space::{DecisionPoint, ObjectiveVector, SearchBox};

pub use front::{front_segments, thin_max_min, ParetoSample, BRUTE_FORCE_EVALUATIONS, DENSE_CURVE_SAMPLES};

/// Names accepted by [`lookup`], in listing order.
pub const PROBLEM_NAMES: [&str; 11] = [
    "zdt2",
    "zdt3",
    "zdt4",
    "mop3",
    "mop4",
    "mop5",
    "mop6",
    "dtlz1",
    "dtlz2",
    "discrete_example",
    "identity2d",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Min => "min",
            Sense::Max => "max",
        })
    }
}

/// Objective map in the problem's native sense.
pub type ObjectiveFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// How the true Pareto front of a problem is obtained.
#[derive(Clone)]
pub(crate) enum FrontSpec {
    /// Pareto set parameterized by `t = f1 in [0, 1]`; reference points are
    /// evenly spaced in `t`.
    EvenInFirst(fn(f64) -> Vec<f64>),
    /// Pareto-set candidates parameterized by `t in [0, 1]`, filtered for
    /// non-dominance on a dense grid of `t`.
    DenseCurve(fn(f64) -> Vec<f64>),
    /// Linear front `sum f_i = 0.5` (DTLZ1).
    Simplex,
    /// Spherical front `sum f_i^2 = 1` (DTLZ2).
    Sphere,
    /// Brute-force grid over the box followed by a non-dominated filter.
    Grid,
    /// Exhaustive search over `finite_space`.
    Finite,
    /// Front is a single point.
    Point(Vec<f64>),
    /// Unknown.
    None,
}

/// A benchmark (or user-supplied) multi-objective problem.
#[derive(Clone)]
pub struct ProblemDefinition {
    name: String,
    bounds: SearchBox,
    n_objectives: usize,
    sense: Sense,
    objective: ObjectiveFn,
    front: FrontSpec,
    true_set_bounds: Option<(DecisionPoint, DecisionPoint)>,
    finite_space: Option<Vec<DecisionPoint>>,
    oracle: Arc<OnceLock<ParetoSample>>,
}

impl fmt::Debug for ProblemDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDefinition")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("n_objectives", &self.n_objectives)
            .field("sense", &self.sense)
            .finish_non_exhaustive()
    }
}

/// Machine-readable summary of a registered problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub name: String,
    pub dim: usize,
    pub n_objectives: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub sense: Sense,
    pub finite: bool,
}

impl ProblemDefinition {
    /// Builds a custom continuous problem with an unknown front.
    pub fn custom(
        name: impl Into<String>,
        bounds: SearchBox,
        n_objectives: usize,
        sense: Sense,
        objective: ObjectiveFn,
    ) -> Self {
        Self {
            name: name.into(),
            bounds,
            n_objectives,
            sense,
            objective,
            front: FrontSpec::None,
            true_set_bounds: None,
            finite_space: None,
            oracle: Arc::new(OnceLock::new()),
        }
    }

    /// Builds a problem over an explicit finite set of decision points. The
    /// box must contain every point.
    pub fn finite(
        name: impl Into<String>,
        bounds: SearchBox,
        n_objectives: usize,
        objective: ObjectiveFn,
        space: Vec<DecisionPoint>,
    ) -> Result<Self> {
        if space.is_empty() {
            return Err(Error::InvalidArgument("finite space is empty".into()));
        }
        if let Some(p) = space.iter().find(|p| !bounds.contains(p.as_slice())) {
            return Err(Error::Domain(format!("finite point {:?} outside the box", p.0)));
        }
        let mut p = Self::custom(name, bounds, n_objectives, Sense::Min, objective);
        p.front = FrontSpec::Finite;
        p.finite_space = Some(space);
        Ok(p)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn n_objectives(&self) -> usize {
        self.n_objectives
    }

    pub fn bounds(&self) -> &SearchBox {
        &self.bounds
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn finite_space(&self) -> Option<&[DecisionPoint]> {
        self.finite_space.as_deref()
    }

    pub fn summary(&self) -> ProblemSummary {
        ProblemSummary {
            name: self.name.clone(),
            dim: self.dim(),
            n_objectives: self.n_objectives,
            lower: self.bounds.lower().to_vec(),
            upper: self.bounds.upper().to_vec(),
            sense: self.sense,
            finite: self.finite_space.is_some(),
        }
    }

    /// Objectives in the problem's native sense (no negation).
    pub fn evaluate_native(&self, x: &DecisionPoint) -> Result<ObjectiveVector> {
        self.check_domain(x)?;
        Ok(ObjectiveVector((self.objective)(x.as_slice())))
    }

    /// Objectives in minimization form; maximization problems are negated.
    pub fn evaluate(&self, x: &DecisionPoint) -> Result<ObjectiveVector> {
        self.check_domain(x)?;
        Ok(ObjectiveVector(self.evaluate_unchecked(x.as_slice())))
    }

    /// Minimization-form objectives without the box check.
    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut f = (self.objective)(x);
        if self.sense == Sense::Max {
            for v in &mut f {
                *v = -*v;
            }
        }
        f
    }

    fn check_domain(&self, x: &DecisionPoint) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Domain(format!(
                "{} expects {} variables, got {}",
                self.name,
                self.dim(),
                x.len()
            )));
        }
        if !self.bounds.contains(x.as_slice()) {
            return Err(Error::Domain(format!(
                "point {:?} lies outside the box of {}",
                x.0, self.name
            )));
        }
        Ok(())
    }

    /// The Pareto-optimal members of the finite space, found by exhaustive
    /// pairwise dominance.
    pub fn true_pareto_set(&self) -> Result<Vec<DecisionPoint>> {
        let space = self
            .finite_space
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} has no finite solution space", self.name)))?;
        let f: Vec<Vec<f64>> = space.iter().map(|p| self.evaluate_unchecked(&p.0)).collect();
        Ok(space
            .iter()
            .enumerate()
            .filter(|(i, _)| !f.iter().any(|q| dominates_slice(q, &f[*i])))
            .map(|(_, p)| p.clone())
            .collect())
    }

    /// Leftmost and rightmost true Pareto-optimal solutions by first
    /// coordinate, when known.
    pub fn true_set_bounds(&self) -> Result<Option<(DecisionPoint, DecisionPoint)>> {
        if let Some(b) = &self.true_set_bounds {
            return Ok(Some(b.clone()));
        }
        match self.front {
            FrontSpec::DenseCurve(_) | FrontSpec::Grid | FrontSpec::Finite => {
                Ok(Some(self.pareto_sample()?.extremes_by_first_coordinate()))
            }
            _ => Ok(None),
        }
    }

    /// `count` uniformly spread points of the true Pareto front, in
    /// minimization form.
    pub fn sample_reference_front(&self, count: usize) -> Result<Vec<ObjectiveVector>> {
        if count < 2 {
            return Err(Error::InvalidArgument(format!(
                "reference front needs at least 2 points, got {count}"
            )));
        }
        front::reference_front(self, count)
    }

    /// Dense non-dominated sample of the true Pareto set for problems whose
    /// front is found numerically. Computed once and cached.
    pub fn pareto_sample(&self) -> Result<&ParetoSample> {
        if let Some(s) = self.oracle.get() {
            return Ok(s);
        }
        let s = front::pareto_sample(self)?;
        Ok(self.oracle.get_or_init(|| s))
    }
}

fn tail_zero(dim: usize) -> impl Fn(f64) -> Vec<f64> {
    move |t| {
        let mut x = vec![0.0; dim];
        x[0] = t;
        x
    }
}

fn zdt_set(t: f64) -> Vec<f64> {
    tail_zero(30)(t)
}

fn zdt4_set(t: f64) -> Vec<f64> {
    tail_zero(10)(t)
}

fn builtin(
    name: &str,
    bounds: SearchBox,
    n_objectives: usize,
    sense: Sense,
    objective: fn(&[f64]) -> Vec<f64>,
    front: FrontSpec,
    true_set_bounds: Option<(Vec<f64>, Vec<f64>)>,
) -> ProblemDefinition {
    let mut p = ProblemDefinition::custom(name, bounds, n_objectives, sense, Arc::new(objective));
    p.front = front;
    p.true_set_bounds = true_set_bounds.map(|(l, r)| (DecisionPoint(l), DecisionPoint(r)));
    p
}

fn cube(dim: usize, lo: f64, hi: f64) -> SearchBox {
    SearchBox::cube(dim, lo, hi).expect("static box is valid")
}

/// Resolves a registered problem by name.
///
/// ```
/// let p = domsearch::problems::lookup("mop5").unwrap();
/// assert_eq!((p.dim(), p.n_objectives()), (2, 3));
/// assert!(domsearch::problems::lookup("nope").is_err());
/// ```
pub fn lookup(name: &str) -> Result<ProblemDefinition> {
    use benchmarks as b;
    use std::f64::consts::PI;
    let p = match name {
        "zdt2" => builtin(
            name,
            cube(30, 0.0, 1.0),
            2,
            Sense::Min,
            b::zdt2,
            FrontSpec::EvenInFirst(zdt_set),
            Some((zdt_set(0.0), zdt_set(1.0))),
        ),
        "zdt3" => builtin(
            name,
            cube(30, 0.0, 1.0),
            2,
            Sense::Min,
            b::zdt3,
            FrontSpec::DenseCurve(zdt_set),
            None,
        ),
        "zdt4" => {
            let mut lower = vec![-5.0; 10];
            let mut upper = vec![5.0; 10];
            lower[0] = 0.0;
            upper[0] = 1.0;
            builtin(
                name,
                SearchBox::new(lower, upper).expect("static box is valid"),
                2,
                Sense::Min,
                b::zdt4,
                FrontSpec::EvenInFirst(zdt4_set),
                Some((zdt4_set(0.0), zdt4_set(1.0))),
            )
        }
        "mop3" => builtin(name, cube(2, -PI, PI), 2, Sense::Max, b::mop3, FrontSpec::Grid, None),
        "mop4" => builtin(name, cube(3, -5.0, 5.0), 2, Sense::Min, b::mop4, FrontSpec::Grid, None),
        "mop5" => builtin(
            name,
            cube(2, -30.0, 30.0),
            3,
            Sense::Min,
            b::mop5,
            FrontSpec::Grid,
            None,
        ),
        "mop6" => builtin(name, cube(2, 0.0, 1.0), 2, Sense::Min, b::mop6, FrontSpec::Grid, None),
        "dtlz1" => {
            let mut l = vec![0.5; 7];
            let mut r = vec![0.5; 7];
            (l[0], l[1], r[0], r[1]) = (0.0, 0.0, 1.0, 1.0);
            builtin(
                name,
                cube(7, 0.0, 1.0),
                3,
                Sense::Min,
                b::dtlz1,
                FrontSpec::Simplex,
                Some((l, r)),
            )
        }
        "dtlz2" => {
            let mut l = vec![0.5; 12];
            let mut r = vec![0.5; 12];
            (l[0], l[1], r[0], r[1]) = (0.0, 0.0, 1.0, 1.0);
            builtin(
                name,
                cube(12, 0.0, 1.0),
                3,
                Sense::Min,
                b::dtlz2,
                FrontSpec::Sphere,
                Some((l, r)),
            )
        }
        "discrete_example" => {
            let space = (0..=100).map(|i| DecisionPoint(vec![f64::from(i)])).collect();
            let mut p = ProblemDefinition::finite(name, cube(1, 0.0, 100.0), 2, Arc::new(b::discrete_example), space)?;
            p.name = name.to_string();
            p
        }
        "identity2d" => builtin(
            name,
            cube(2, 0.0, 1.0),
            2,
            Sense::Min,
            b::identity2d,
            FrontSpec::Point(vec![0.0, 0.0]),
            Some((vec![0.0, 0.0], vec![0.0, 0.0])),
        ),
        other => return Err(Error::NotFound(other.to_string())),
    };
    Ok(p)
}

/// Summaries of every registered problem.
pub fn list() -> Vec<ProblemSummary> {
    PROBLEM_NAMES
        .iter()
        .map(|n| lookup(n).expect("registered name resolves").summary())
        .collect()
}
