//! Threshold-based online clustering of elite solutions.
//!
//! Elites are visited in a random order. Each one joins the first existing
//! cluster (scanned in a fresh random order) whose centroid lies strictly
//! closer than the threshold distance, or opens a new cluster. Members are
//! never reassigned after a centroid moves.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::space::{euclidean, DecisionPoint};

/// Lower bound applied to every threshold returned by [`next_threshold`].
pub const THRESHOLD_FLOOR: f64 = 1e-12;

/// How the threshold distance shrinks between iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdRule {
    /// `min(mean trace / C, delta / C)`, see [`next_threshold`].
    #[default]
    Trace,
    /// `delta / C` regardless of the clusters.
    Geometric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Mean of the member points.
    pub centroid: Vec<f64>,
    /// Indices into the clustered elite list, in join order.
    pub members: Vec<usize>,
    /// Distance from each member to the centroid at the moment it joined;
    /// the founding member's entry is 0.
    pub assignment_distances: Vec<f64>,
    /// Trace of the population covariance of the members.
    pub trace: f64,
    #[serde(skip)]
    sum: Vec<f64>,
}

impl Cluster {
    fn found(index: usize, x: &[f64]) -> Self {
        Self {
            centroid: x.to_vec(),
            members: vec![index],
            assignment_distances: vec![0.0],
            trace: 0.0,
            sum: x.to_vec(),
        }
    }

    fn join(&mut self, index: usize, x: &[f64], distance: f64) {
        self.members.push(index);
        self.assignment_distances.push(distance);
        let m = self.members.len() as f64;
        for ((s, c), v) in self.sum.iter_mut().zip(&mut self.centroid).zip(x) {
            *s += v;
            *c = *s / m;
        }
    }

    fn finish(&mut self, elites: &[DecisionPoint]) {
        let m = self.members.len() as f64;
        self.trace = self
            .members
            .iter()
            .map(|&i| {
                elites[i]
                    .as_slice()
                    .iter()
                    .zip(&self.centroid)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
            })
            .sum::<f64>()
            / m;
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The member points themselves.
    pub fn points<'a>(&'a self, elites: &'a [DecisionPoint]) -> impl Iterator<Item = &'a DecisionPoint> + 'a {
        self.members.iter().map(move |&i| &elites[i])
    }
}

/// Partition of an elite set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
    pub threshold_used: f64,
    pub next_threshold: Option<f64>,
}

/// Clusters `elites` with threshold distance `delta`.
pub fn cluster<R: Rng + ?Sized>(elites: &[DecisionPoint], delta: f64, rng: &mut R) -> Result<ClusterSet> {
    if elites.is_empty() {
        return Err(invalid("cannot cluster an empty elite set"));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(invalid(format!("threshold distance {delta} must be positive")));
    }
    let mut visit: Vec<usize> = (0..elites.len()).collect();
    visit.shuffle(rng);

    let mut clusters: Vec<Cluster> = Vec::new();
    let mut scan: Vec<usize> = Vec::new();
    for &i in &visit {
        let x = elites[i].as_slice();
        scan.clear();
        scan.extend(0..clusters.len());
        scan.shuffle(rng);
        let hit = scan.iter().find_map(|&c| {
            let dist = euclidean(x, &clusters[c].centroid);
            (dist < delta).then_some((c, dist))
        });
        match hit {
            Some((c, dist)) => clusters[c].join(i, x, dist),
            None => clusters.push(Cluster::found(i, x)),
        }
    }
    for c in &mut clusters {
        c.finish(elites);
    }
    Ok(ClusterSet {
        clusters,
        threshold_used: delta,
        next_threshold: None,
    })
}

/// `max(min(sum(traces) / (C * I), delta / C), THRESHOLD_FLOOR)` where `I` is
/// the number of traces.
pub fn next_threshold_from_traces(traces: &[f64], delta: f64, shrink: f64) -> Result<f64> {
    if traces.is_empty() {
        return Err(invalid("no clusters"));
    }
    if shrink.is_nan() || shrink <= 1.0 {
        return Err(invalid(format!("shrink factor {shrink} must exceed 1")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(invalid(format!("threshold distance {delta} must be positive")));
    }
    let spread = traces.iter().sum::<f64>() / (shrink * traces.len() as f64);
    Ok(spread.min(delta / shrink).max(THRESHOLD_FLOOR))
}

/// Threshold distance for the next iteration from the clusters' covariance
/// traces (singletons contribute zero).
pub fn next_threshold(clusters: &[Cluster], delta: f64, shrink: f64) -> Result<f64> {
    let traces: Vec<f64> = clusters.iter().map(|c| c.trace).collect();
    next_threshold_from_traces(&traces, delta, shrink)
}

impl ClusterSet {
    /// Fills in `next_threshold` by the trace rule and returns it.
    pub fn update_threshold(&mut self, shrink: f64) -> Result<f64> {
        self.update_threshold_with(ThresholdRule::Trace, shrink)
    }

    pub fn update_threshold_with(&mut self, rule: ThresholdRule, shrink: f64) -> Result<f64> {
        let t = match rule {
            ThresholdRule::Trace => next_threshold(&self.clusters, self.threshold_used, shrink)?,
            ThresholdRule::Geometric => {
                let unbounded = vec![f64::INFINITY; self.clusters.len()];
                next_threshold_from_traces(&unbounded, self.threshold_used, shrink)?
            }
        };
        self.next_threshold = Some(t);
        Ok(t)
    }
}
