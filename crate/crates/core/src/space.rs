//! Points in decision space, their objective images, and the box that bounds
//! the search.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A candidate solution `x` in the decision space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecisionPoint(pub Vec<f64>);

/// The image `f(x) = (f_1(x), ..., f_n(x))` of a decision point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectiveVector(pub Vec<f64>);

macro_rules! vector_newtype {
    ($name:ident) => {
        impl $name {
            pub fn new(values: Vec<f64>) -> Self {
                Self(values)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|v| v.is_finite())
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(values: Vec<f64>) -> Self {
                Self(values)
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = f64;

            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }
    };
}

vector_newtype!(DecisionPoint);
vector_newtype!(ObjectiveVector);

/// Euclidean distance between two equal-length slices.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// An axis-aligned, non-degenerate box `[lower, upper]` in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(invalid(format!(
                "box bounds have lengths {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(invalid("box must have at least one dimension"));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(invalid(format!("degenerate box edge {i}: [{lo}, {hi}]")));
            }
        }
        let b = Self { lower, upper };
        let v = b.volume();
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(format!("box volume {v} is not finite and positive")));
        }
        Ok(b)
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn edge(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    /// Lebesgue measure of the box, the product of its edge lengths.
    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.edge(i)).product()
    }

    pub fn center(&self) -> DecisionPoint {
        DecisionPoint(
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(lo, hi)| 0.5 * (lo + hi))
                .collect(),
        )
    }

    pub fn diagonal(&self) -> f64 {
        euclidean(&self.lower, &self.upper)
    }

    /// Mean of the squared edge lengths.
    pub fn mean_squared_edge(&self) -> f64 {
        (0..self.dim()).map(|i| self.edge(i).powi(2)).sum::<f64>() / self.dim() as f64
    }

    /// Inclusive membership test on a raw coordinate slice.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// One uniform draw from the box.
    pub fn draw_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (lo + (hi - lo) * rng.random::<f64>()).min(*hi))
            .collect()
    }

    /// `count` i.i.d. uniform draws from the box.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<DecisionPoint> {
        (0..count).map(|_| DecisionPoint(self.draw_uniform(rng))).collect()
    }

    /// Componentwise projection onto the box.
    pub fn clip(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
            .collect()
    }
}

/// Product of the box's edge lengths.
pub fn box_volume(b: &SearchBox) -> f64 {
    b.volume()
}

/// `true` iff `lower <= p <= upper` componentwise.
pub fn in_box(p: &DecisionPoint, b: &SearchBox) -> Result<bool> {
    if p.len() != b.dim() {
        return Err(Error::InvalidArgument(format!(
            "point has dimension {} but box has dimension {}",
            p.len(),
            b.dim()
        )));
    }
    Ok(b.contains(p.as_slice()))
}
