use crate::dominance::non_dominated_indices;
use crate::error::{Error, Result};
use crate::space::{euclidean, DecisionPoint, ObjectiveVector};

use super::{FrontSpec, ProblemDefinition};

/// Grid size of the first-coordinate sweep used for numerically filtered
/// curves (ZDT3).
pub const DENSE_CURVE_SAMPLES: usize = 100_001;

/// Minimum number of box evaluations of the brute-force front oracle.
pub const BRUTE_FORCE_EVALUATIONS: usize = 1_000_000;

/// Non-dominated decision points and their (minimization-form) images.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoSample {
    pub points: Vec<DecisionPoint>,
    pub objectives: Vec<ObjectiveVector>,
}

impl ParetoSample {
    /// Points with the smallest and largest first coordinate; ties resolve
    /// to the lexicographically smallest and largest point respectively.
    pub fn extremes_by_first_coordinate(&self) -> (DecisionPoint, DecisionPoint) {
        let cmp = |a: &&DecisionPoint, b: &&DecisionPoint| {
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        };
        let left = self.points.iter().min_by(cmp).expect("non-empty sample");
        let right = self.points.iter().max_by(cmp).expect("non-empty sample");
        (left.clone(), right.clone())
    }
}

/// Splits a front into connected pieces. Vectors are ordered
/// lexicographically and a new piece starts wherever two neighbours are
/// more than `max_gap` apart.
pub fn front_segments(objectives: &[ObjectiveVector], max_gap: f64) -> Vec<Vec<ObjectiveVector>> {
    let mut sorted = objectives.to_vec();
    sorted.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out: Vec<Vec<ObjectiveVector>> = Vec::new();
    for v in sorted {
        match out.last_mut() {
            Some(seg) if euclidean(seg[seg.len() - 1].as_slice(), v.as_slice()) <= max_gap => seg.push(v),
            _ => out.push(vec![v]),
        }
    }
    out
}

/// Per-axis resolution `r` of a full grid with `r^dim >= BRUTE_FORCE_EVALUATIONS`.
pub(crate) fn grid_resolution(dim: usize) -> usize {
    let mut r = (BRUTE_FORCE_EVALUATIONS as f64).powf(1.0 / dim as f64).floor() as usize;
    while r.checked_pow(dim as u32).is_none_or(|n| n < BRUTE_FORCE_EVALUATIONS) {
        r += 1;
    }
    r.max(2)
}

fn grid_point(p: &ProblemDefinition, r: usize, mut index: usize) -> Vec<f64> {
    let b = p.bounds();
    (0..p.dim())
        .map(|i| {
            let k = index % r;
            index /= r;
            if k == r - 1 {
                b.upper()[i]
            } else {
                b.lower()[i] + b.edge(i) * k as f64 / (r - 1) as f64
            }
        })
        .collect()
}

fn filtered(p: &ProblemDefinition, points: Vec<Vec<f64>>) -> Result<ParetoSample> {
    let objectives: Vec<ObjectiveVector> = points
        .iter()
        .map(|x| ObjectiveVector(p.evaluate_unchecked(x)))
        .collect();
    let keep = non_dominated_indices(&objectives)?;
    Ok(ParetoSample {
        points: keep.iter().map(|&i| DecisionPoint(points[i].clone())).collect(),
        objectives: keep.iter().map(|&i| objectives[i].clone()).collect(),
    })
}

pub(crate) fn pareto_sample(p: &ProblemDefinition) -> Result<ParetoSample> {
    match &p.front {
        FrontSpec::DenseCurve(set) => {
            let m = DENSE_CURVE_SAMPLES;
            let points = (0..m).map(|i| set(i as f64 / (m - 1) as f64)).collect();
            filtered(p, points)
        }
        FrontSpec::Grid => {
            let r = grid_resolution(p.dim());
            let total = r.pow(p.dim() as u32);
            let objectives: Vec<ObjectiveVector> = (0..total)
                .map(|i| ObjectiveVector(p.evaluate_unchecked(&grid_point(p, r, i))))
                .collect();
            let keep = non_dominated_indices(&objectives)?;
            Ok(ParetoSample {
                points: keep.iter().map(|&i| DecisionPoint(grid_point(p, r, i))).collect(),
                objectives: keep.iter().map(|&i| objectives[i].clone()).collect(),
            })
        }
        FrontSpec::Finite => {
            let space = p.finite_space().expect("finite front has a space");
            filtered(p, space.iter().map(|x| x.0.clone()).collect())
        }
        _ => Err(Error::Unsupported(format!(
            "{} has no numerically sampled Pareto set",
            p.name()
        ))),
    }
}

/// Greedy farthest-point selection of `count` indices, starting from the
/// lexicographically smallest vector. Returned indices are ascending. Fewer
/// than `count` are returned when the input has fewer distinct vectors.
pub fn thin_max_min(objectives: &[ObjectiveVector], count: usize) -> Vec<usize> {
    if objectives.is_empty() || count == 0 {
        return Vec::new();
    }
    let start = (0..objectives.len())
        .min_by(|&a, &b| {
            objectives[a]
                .0
                .iter()
                .zip(&objectives[b].0)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("non-empty");
    let mut chosen = vec![start];
    let mut gap: Vec<f64> = objectives
        .iter()
        .map(|v| euclidean(v.as_slice(), objectives[start].as_slice()))
        .collect();
    while chosen.len() < count {
        let (next, &d) = gap.iter().enumerate().fold(
            (0, &f64::NEG_INFINITY),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
        if d <= 0.0 {
            break;
        }
        chosen.push(next);
        for (g, v) in gap.iter_mut().zip(objectives) {
            *g = g.min(euclidean(v.as_slice(), objectives[next].as_slice()));
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Barycentric lattice on the 2-simplex with `h` divisions.
fn simplex_lattice(h: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity((h + 1) * (h + 2) / 2);
    for i in 0..=h {
        for j in 0..=h - i {
            let k = h - i - j;
            out.push([i as f64 / h as f64, j as f64 / h as f64, k as f64 / h as f64]);
        }
    }
    out
}

fn lattice_divisions(count: usize) -> usize {
    let mut h = 1;
    while (h + 1) * (h + 2) / 2 < 10 * count {
        h += 1;
    }
    h
}

fn thinned(pool: Vec<ObjectiveVector>, count: usize) -> Vec<ObjectiveVector> {
    thin_max_min(&pool, count)
        .into_iter()
        .map(|i| pool[i].clone())
        .collect()
}

pub(crate) fn reference_front(p: &ProblemDefinition, count: usize) -> Result<Vec<ObjectiveVector>> {
    Ok(match &p.front {
        FrontSpec::EvenInFirst(set) => (0..count)
            .map(|i| ObjectiveVector(p.evaluate_unchecked(&set(i as f64 / (count - 1) as f64))))
            .collect(),
        FrontSpec::Simplex => {
            let pool = simplex_lattice(lattice_divisions(count))
                .into_iter()
                .map(|w| ObjectiveVector(w.iter().map(|v| 0.5 * v).collect()))
                .collect();
            thinned(pool, count)
        }
        FrontSpec::Sphere => {
            let pool = simplex_lattice(lattice_divisions(count))
                .into_iter()
                .map(|w| {
                    let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    ObjectiveVector(w.iter().map(|v| v / n).collect())
                })
                .collect();
            thinned(pool, count)
        }
        FrontSpec::Point(x) => vec![ObjectiveVector(p.evaluate_unchecked(x))],
        FrontSpec::DenseCurve(_) | FrontSpec::Grid | FrontSpec::Finite => {
            thinned(p.pareto_sample()?.objectives.clone(), count)
        }
        FrontSpec::None => return Err(Error::Unsupported(format!("{} has no known Pareto front", p.name()))),
    })
}
