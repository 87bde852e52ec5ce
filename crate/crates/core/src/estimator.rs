//! Domination-measure estimators.
//!
//! The domination measure of `x` is the fraction of the solution space whose
//! members dominate `x`. Three estimators share one pairwise counting kernel:
//!
//! * [`exact_finite`] counts dominators over an explicit finite space,
//! * [`mc_uniform`] averages dominance indicators over uniform draws,
//! * [`is_estimate`] reweights draws from a mixture sampling density.

use std::ops::AddAssign;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dominance::{common_len, dominates_slice};
use crate::error::{invalid, Error, Result};
use crate::problems::ProblemDefinition;
use crate::space::{DecisionPoint, ObjectiveVector};

/// A sampled point with its objectives, estimated domination measure and
/// the sampling density it was drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSample {
    pub point: DecisionPoint,
    pub objectives: ObjectiveVector,
    pub dmeasure: f64,
    pub density: f64,
}

/// Flattened objective matrix with rows ordered by first objective, so the
/// scan for dominators of row `i` can stop at the first larger `f1`.
struct SortedObjectives {
    n: usize,
    flat: Vec<f64>,
    order: Vec<usize>,
}

impl SortedObjectives {
    fn new(objectives: &[ObjectiveVector]) -> Result<Self> {
        let n = common_len(objectives)?;
        let mut order: Vec<usize> = (0..objectives.len()).collect();
        if n > 0 {
            order.sort_by(|&a, &b| objectives[a][0].total_cmp(&objectives[b][0]).then(a.cmp(&b)));
        }
        let mut flat = Vec::with_capacity(n * objectives.len());
        for &i in &order {
            flat.extend_from_slice(objectives[i].as_slice());
        }
        Ok(Self { n, flat, order })
    }

    fn row(&self, pos: usize) -> &[f64] {
        &self.flat[pos * self.n..(pos + 1) * self.n]
    }
}

/// Two-objective sweep in `O(m log m)`. A dominator of `i` either has a
/// strictly smaller `f1` and `f2 <= f2_i`, found with a Fenwick tree over
/// `f2` ranks, or an equal `f1` and a strictly smaller `f2`, found within
/// the `f1` group. The two sets are disjoint, so nothing is subtracted and a
/// point without dominators gets exactly `T::default()`.
fn sweep_2d<T, W>(objectives: &[ObjectiveVector], weight: &W) -> Vec<T>
where
    T: Copy + Default + AddAssign,
    W: Fn(usize) -> T,
{
    let m = objectives.len();
    let f = |i: usize, k: usize| objectives[i].0[k];
    let mut levels: Vec<f64> = (0..m).map(|i| f(i, 1)).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    levels.dedup();
    let rank = |v: f64| levels.partition_point(|&l| l < v) + 1;

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        f(a, 0)
            .partial_cmp(&f(b, 0))
            .expect("finite")
            .then(f(a, 1).partial_cmp(&f(b, 1)).expect("finite"))
            .then(a.cmp(&b))
    });

    let mut tree = vec![T::default(); levels.len() + 1];
    let mut out = vec![T::default(); m];
    let mut start = 0;
    while start < m {
        let mut end = start;
        while end < m && f(order[end], 0) == f(order[start], 0) {
            end += 1;
        }
        let group = &order[start..end];

        let mut below = T::default();
        let mut k = 0;
        while k < group.len() {
            let mut e = k;
            while e < group.len() && f(group[e], 1) == f(group[k], 1) {
                e += 1;
            }
            for &i in &group[k..e] {
                let mut acc = below;
                let mut r = rank(f(i, 1));
                while r > 0 {
                    acc += tree[r];
                    r &= r - 1;
                }
                out[i] = acc;
            }
            for &i in &group[k..e] {
                below += weight(i);
            }
            k = e;
        }

        for &i in group {
            let w = weight(i);
            let mut r = rank(f(i, 1));
            while r < tree.len() {
                tree[r] += w;
                r += r & r.wrapping_neg();
            }
        }
        start = end;
    }
    out
}

/// For every `i`, sums `weight(j)` over all `j` whose objectives dominate
/// `i`'s. Two finite objectives go through [`sweep_2d`]; otherwise a scan
/// visits the `j = i` term, which contributes nothing since dominance is
/// irreflexive.
fn dominator_kernel<T, W>(objectives: &[ObjectiveVector], weight: W) -> Result<Vec<T>>
where
    T: Copy + Default + AddAssign + Send,
    W: Fn(usize) -> T + Sync,
{
    let s = SortedObjectives::new(objectives)?;
    if s.n == 2 && s.flat.iter().all(|v| v.is_finite()) {
        return Ok(sweep_2d(objectives, &weight));
    }
    let m = objectives.len();
    let by_pos: Vec<T> = (0..m)
        .into_par_iter()
        .map(|p| {
            let target = s.row(p);
            let mut acc = T::default();
            for q in 0..m {
                let cand = s.row(q);
                if s.n > 0 && cand[0] > target[0] {
                    break;
                }
                if dominates_slice(cand, target) {
                    acc += weight(s.order[q]);
                }
            }
            acc
        })
        .collect();
    let mut out = vec![T::default(); m];
    for (p, v) in by_pos.into_iter().enumerate() {
        out[s.order[p]] = v;
    }
    Ok(out)
}

/// Number of vectors in the list that dominate each vector.
pub fn dominator_counts(objectives: &[ObjectiveVector]) -> Result<Vec<usize>> {
    if objectives.is_empty() {
        return Err(invalid("empty objective list"));
    }
    dominator_kernel(objectives, |_| 1usize)
}

/// Sum of `weights[j]` over the dominators `j` of each vector.
pub fn weighted_dominator_sums(objectives: &[ObjectiveVector], weights: &[f64]) -> Result<Vec<f64>> {
    if objectives.is_empty() {
        return Err(invalid("empty objective list"));
    }
    if weights.len() != objectives.len() {
        return Err(invalid(format!(
            "{} weights for {} objective vectors",
            weights.len(),
            objectives.len()
        )));
    }
    dominator_kernel(objectives, |j| weights[j])
}

/// Exact domination measure `|{y : f(y) dominates f(x)}| / |S|` of every
/// member of a finite space, in the order of the space.
pub fn exact_finite(problem: &ProblemDefinition) -> Result<Vec<(DecisionPoint, f64)>> {
    let space = problem
        .finite_space()
        .ok_or_else(|| Error::Unsupported(format!("{} has no finite solution space", problem.name())))?;
    if space.is_empty() {
        return Err(invalid("finite space is empty"));
    }
    let objectives: Vec<ObjectiveVector> = space.iter().map(|x| problem.evaluate(x)).collect::<Result<_>>()?;
    let total = space.len() as f64;
    let counts = dominator_counts(&objectives)?;
    Ok(space
        .iter()
        .cloned()
        .zip(counts.into_iter().map(|c| c as f64 / total))
        .collect())
}

/// Uniform Monte Carlo estimate `(1/N) sum_j 1{x_j dominates x_i}` for a set
/// of i.i.d. uniform draws, `N` being the number of draws.
///
/// ```
/// use domsearch::{estimator::mc_uniform, ObjectiveVector};
///
/// let f = |a: f64, b: f64| ObjectiveVector::new(vec![a, b]);
/// let d = mc_uniform(&[f(0.5, 0.5), f(0.1, 0.2), f(0.9, 0.0), f(0.6, 0.9)]).unwrap();
/// assert_eq!(d, vec![0.25, 0.0, 0.0, 0.5]);
/// ```
pub fn mc_uniform(objectives: &[ObjectiveVector]) -> Result<Vec<f64>> {
    if objectives.is_empty() {
        return Err(invalid("N = 0: no samples to estimate from"));
    }
    let unit = vec![1.0; objectives.len()];
    let n = objectives.len() as f64;
    Ok(weighted_dominator_sums(objectives, &unit)?
        .into_iter()
        .map(|s| s / n)
        .collect())
}

/// Importance-sampling estimate
/// `(1 / (N vol)) sum_j 1{x_j dominates x_i} / g(x_j)` for draws from a
/// sampling density `g` over a box of volume `vol`.
///
/// The weight of draw `j` is computed as `(1/vol) / g(x_j)`, so a purely
/// uniform density `g = 1/vol` yields weights of exactly one and the result
/// matches [`mc_uniform`] bit for bit.
pub fn is_estimate(objectives: &[ObjectiveVector], densities: &[f64], volume: f64) -> Result<Vec<f64>> {
    if !(volume.is_finite() && volume > 0.0) {
        return Err(invalid(format!("volume {volume} must be finite and positive")));
    }
    if let Some((j, g)) = densities
        .iter()
        .enumerate()
        .find(|(_, g)| !(g.is_finite() && **g > 0.0))
    {
        return Err(Error::InvalidState(format!("sampling density {g} at draw {j}")));
    }
    let uniform = 1.0 / volume;
    let weights: Vec<f64> = densities.iter().map(|g| uniform / g).collect();
    let n = objectives.len() as f64;
    Ok(weighted_dominator_sums(objectives, &weights)?
        .into_iter()
        .map(|s| s / n)
        .collect())
}

/// Fills `dmeasure` of uniformly drawn samples with [`mc_uniform`].
pub fn score_uniform(samples: &mut [ScoredSample]) -> Result<()> {
    let objectives: Vec<ObjectiveVector> = samples.iter().map(|s| s.objectives.clone()).collect();
    for (s, d) in samples.iter_mut().zip(mc_uniform(&objectives)?) {
        s.dmeasure = d;
    }
    Ok(())
}

/// Fills `dmeasure` with [`is_estimate`] using each sample's `density`.
pub fn score_importance(samples: &mut [ScoredSample], volume: f64) -> Result<()> {
    let objectives: Vec<ObjectiveVector> = samples.iter().map(|s| s.objectives.clone()).collect();
    let densities: Vec<f64> = samples.iter().map(|s| s.density).collect();
    for (s, d) in samples.iter_mut().zip(is_estimate(&objectives, &densities, volume)?) {
        s.dmeasure = d;
    }
    Ok(())
}
