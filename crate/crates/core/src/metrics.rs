//! Quality indicators for an approximate Pareto front.
//!
//! * Convergence `Lambda`: mean distance from each reference point on the
//!   true front to its nearest approximate-front image (objective space).
//! * Diversity `Upsilon`: spread of consecutive gaps between approximate
//!   solutions ordered by first coordinate, plus the gaps to the true set's
//!   extreme points. Measured in decision space by default.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::problems::ProblemDefinition;
use crate::space::{euclidean, DecisionPoint, ObjectiveVector};

/// Both indicators for one front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub lambda: f64,
    /// `None` when the front has fewer than two points.
    pub upsilon: Option<f64>,
    pub reference_size: usize,
    pub front_size: usize,
}

/// Space in which the diversity indicator measures gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiversitySpace {
    #[default]
    Decision,
    Objective,
}

/// Convergence metric of `front` against `reference`.
///
/// ```
/// use domsearch::{metrics::convergence_metric, ObjectiveVector};
///
/// let r = [ObjectiveVector::new(vec![0.0, 0.0]), ObjectiveVector::new(vec![1.0, 0.0])];
/// let z = [ObjectiveVector::new(vec![0.0, 0.0])];
/// assert_eq!(convergence_metric(&r, &z).unwrap(), 0.5);
/// ```
pub fn convergence_metric(reference: &[ObjectiveVector], front: &[ObjectiveVector]) -> Result<f64> {
    if reference.is_empty() || front.is_empty() {
        return Err(invalid("convergence metric needs non-empty reference and front"));
    }
    let n = reference[0].len();
    if reference.iter().chain(front).any(|v| v.len() != n) {
        return Err(invalid("objective dimension mismatch"));
    }
    let total: f64 = reference
        .iter()
        .map(|r| {
            front
                .iter()
                .map(|z| euclidean(r.as_slice(), z.as_slice()))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.len() as f64)
}

/// Diversity of points given as raw coordinate slices, with `left` and
/// `right` the extreme true solutions.
pub fn diversity_of(points: &[&[f64]], left: &[f64], right: &[f64]) -> Result<f64> {
    if points.len() < 2 {
        return Err(invalid(format!(
            "diversity metric needs at least 2 points, got {}",
            points.len()
        )));
    }
    let d = left.len();
    if right.len() != d || points.iter().any(|p| p.len() != d) {
        return Err(invalid("dimension mismatch in diversity metric"));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| lex_cmp(a, b));
    let gaps: Vec<f64> = sorted.windows(2).map(|w| euclidean(w[0], w[1])).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let d_l = euclidean(left, sorted[0]);
    let d_r = euclidean(right, sorted[sorted.len() - 1]);
    let num = d_l + d_r + gaps.iter().map(|g| (g - mean).abs()).sum::<f64>();
    let den = d_l + d_r + gaps.len() as f64 * mean;
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

/// Diversity metric in decision space.
///
/// ```
/// use domsearch::{metrics::diversity_metric, DecisionPoint};
///
/// let z: Vec<_> = [0.0, 0.2, 1.0].iter().map(|&v| DecisionPoint::new(vec![v])).collect();
/// let (l, r) = (DecisionPoint::new(vec![0.0]), DecisionPoint::new(vec![1.0]));
/// assert!((diversity_metric(&z, (&l, &r)).unwrap() - 0.6).abs() < 1e-12);
/// ```
pub fn diversity_metric(front: &[DecisionPoint], bounds: (&DecisionPoint, &DecisionPoint)) -> Result<f64> {
    let pts: Vec<&[f64]> = front.iter().map(DecisionPoint::as_slice).collect();
    diversity_of(&pts, bounds.0.as_slice(), bounds.1.as_slice())
}

/// Diversity metric on objective vectors, ordered by first objective.
pub fn diversity_metric_objective(
    front: &[ObjectiveVector],
    bounds: (&ObjectiveVector, &ObjectiveVector),
) -> Result<f64> {
    let pts: Vec<&[f64]> = front.iter().map(ObjectiveVector::as_slice).collect();
    diversity_of(&pts, bounds.0.as_slice(), bounds.1.as_slice())
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Scores an approximate front of `problem`: `Lambda` against `reference`
/// and `Upsilon` against the true set's extremes (decision space) or the
/// reference front's extremes (objective space).
pub fn report(
    problem: &ProblemDefinition,
    front: &[(DecisionPoint, ObjectiveVector)],
    reference: &[ObjectiveVector],
    space: DiversitySpace,
) -> Result<MetricReport> {
    let images: Vec<ObjectiveVector> = front.iter().map(|(_, f)| f.clone()).collect();
    let lambda = convergence_metric(reference, &images)?;
    let upsilon = if front.len() < 2 {
        None
    } else {
        Some(match space {
            DiversitySpace::Decision => {
                let (l, r) = problem.true_set_bounds()?.ok_or_else(|| {
                    Error::Unsupported(format!("{} has no known Pareto-set extremes", problem.name()))
                })?;
                let pts: Vec<DecisionPoint> = front.iter().map(|(x, _)| x.clone()).collect();
                diversity_metric(&pts, (&l, &r))?
            }
            DiversitySpace::Objective => {
                let l = reference
                    .iter()
                    .min_by(|a, b| lex_cmp(&a.0, &b.0))
                    .expect("non-empty reference");
                let r = reference
                    .iter()
                    .max_by(|a, b| lex_cmp(&a.0, &b.0))
                    .expect("non-empty reference");
                diversity_metric_objective(&images, (l, r))?
            }
        })
    };
    Ok(MetricReport {
        lambda,
        upsilon,
        reference_size: reference.len(),
        front_size: front.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(v.to_vec())
    }

    fn dp(v: &[f64]) -> DecisionPoint {
        DecisionPoint::new(v.to_vec())
    }

    #[test]
    fn convergence_examples() {
        let r = [ov(&[0.0, 1.0]), ov(&[0.5, 0.75]), ov(&[1.0, 0.0])];
        assert_eq!(convergence_metric(&r, &r).unwrap(), 0.0);
        assert_eq!(convergence_metric(&[ov(&[0.0, 0.0])], &[ov(&[3.0, 4.0])]).unwrap(), 5.0);
        assert!(convergence_metric(&[ov(&[0.0])], &[ov(&[0.0, 1.0])]).is_err());
        assert!(convergence_metric(&[], &[ov(&[0.0])]).is_err());
    }

    #[test]
    fn diversity_examples() {
        let l = dp(&[0.0]);
        let r = dp(&[1.0]);
        assert_eq!(diversity_metric(&[dp(&[0.0]), dp(&[1.0])], (&l, &r)).unwrap(), 0.0);
        let chain: Vec<_> = (0..=8).map(|i| dp(&[i as f64 / 8.0])).collect();
        assert_eq!(diversity_metric(&chain, (&l, &r)).unwrap(), 0.0);
        let v = diversity_metric(&[dp(&[1.0]), dp(&[0.0]), dp(&[0.2])], (&l, &r)).unwrap();
        assert!((v - 0.6).abs() < 1e-12);
        assert!(diversity_metric(&[dp(&[0.5])], (&l, &r)).is_err());
    }

    #[test]
    fn diversity_collapsed_front_is_zero() {
        let p = dp(&[0.3, 0.3]);
        assert_eq!(diversity_metric(&[p.clone(), p.clone()], (&p, &p)).unwrap(), 0.0);
    }

    #[test]
    fn boundary_gaps_raise_diversity() {
        let l = dp(&[0.0]);
        let r = dp(&[1.0]);
        let inner = [dp(&[0.25]), dp(&[0.5]), dp(&[0.75])];
        // d_l = d_r = 0.25, gaps 0.25 each: 0.5 / (0.5 + 0.5)
        assert!((diversity_metric(&inner, (&l, &r)).unwrap() - 0.5).abs() < 1e-15);
    }

    fn front2() -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 2..20)
    }

    #[test]
    fn report_on_identity_front() {
        let p = crate::problems::lookup("identity2d").unwrap();
        let r = p.sample_reference_front(2).unwrap();
        let pair = |a: f64, b: f64| (dp(&[a, b]), ov(&[a, b]));
        let one = report(&p, &[pair(0.0, 0.0)], &r, DiversitySpace::Decision).unwrap();
        assert_eq!((one.lambda, one.upsilon, one.front_size), (0.0, None, 1));
        let two = report(&p, &[pair(0.0, 0.0), pair(0.3, 0.4)], &r, DiversitySpace::Decision).unwrap();
        // d_l = 0, d_r = 0.5, one gap of 0.5
        assert!((two.upsilon.unwrap() - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn lambda_permutation_and_union(r in front2(), z1 in front2(), z2 in front2()) {
            let r: Vec<_> = r.into_iter().map(ObjectiveVector).collect();
            let z1: Vec<_> = z1.into_iter().map(ObjectiveVector).collect();
            let z2: Vec<_> = z2.into_iter().map(ObjectiveVector).collect();
            let base = convergence_metric(&r, &z1).unwrap();
            let mut rr = r.clone();
            rr.reverse();
            let mut zz = z1.clone();
            zz.rotate_left(1);
            prop_assert!((convergence_metric(&rr, &zz).unwrap() - base).abs() < 1e-12);
            let both: Vec<_> = z1.iter().chain(&z2).cloned().collect();
            let u = convergence_metric(&r, &both).unwrap();
            prop_assert!(u <= base.min(convergence_metric(&r, &z2).unwrap()) + 1e-12);
            prop_assert!(base >= 0.0);
        }

        #[test]
        fn upsilon_order_and_translation(z in front2(), shift in prop::collection::vec(-3.0f64..3.0, 2)) {
            let pts: Vec<_> = z.iter().cloned().map(DecisionPoint).collect();
            let l = dp(&[-5.0, 0.0]);
            let r = dp(&[5.0, 0.0]);
            let base = diversity_metric(&pts, (&l, &r)).unwrap();
            prop_assert!(base >= 0.0);
            let mut rev = pts.clone();
            rev.reverse();
            prop_assert_eq!(diversity_metric(&rev, (&l, &r)).unwrap(), base);
            let mv = |p: &DecisionPoint| dp(&[p[0] + shift[0], p[1] + shift[1]]);
            let moved: Vec<_> = pts.iter().map(mv).collect();
            let t = diversity_metric(&moved, (&mv(&l), &mv(&r))).unwrap();
            prop_assert!((t - base).abs() < 1e-9);
        }

        #[test]
        fn lambda_translation(r in front2(), z in front2(), shift in prop::collection::vec(-3.0f64..3.0, 2)) {
            let mv = |v: &Vec<f64>| ObjectiveVector(vec![v[0] + shift[0], v[1] + shift[1]]);
            let a = convergence_metric(
                &r.iter().cloned().map(ObjectiveVector).collect::<Vec<_>>(),
                &z.iter().cloned().map(ObjectiveVector).collect::<Vec<_>>(),
            ).unwrap();
            let b = convergence_metric(
                &r.iter().map(mv).collect::<Vec<_>>(),
                &z.iter().map(mv).collect::<Vec<_>>(),
            ).unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
