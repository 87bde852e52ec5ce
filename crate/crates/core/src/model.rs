//! Gaussian sampling components and the uniform-mixed sampling distribution
//!
//! ```text
//! g(x) = (1 - alpha) * (1/I) * sum_i N(x; mu_i, Sigma_i) + alpha / vol(box)
//! ```
//!
//! Sampling truncates each Gaussian to the box by rejection, while
//! [`MixtureModel::density`] evaluates the untruncated normal density, so the
//! density is slightly underestimated for components close to the boundary.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::space::{DecisionPoint, SearchBox};

/// Rejection attempts per Gaussian draw before falling back to a uniform
/// draw from the box.
pub const MAX_REJECTIONS: usize = 100;

/// Relative size of the diagonal regularization added to fitted
/// covariances, in units of the box's mean squared edge length.
pub const VARIANCE_FLOOR_SCALE: f64 = 1e-8;

/// Diagonal regularization used when fitting components inside `bounds`.
pub fn variance_floor(bounds: &SearchBox) -> f64 {
    VARIANCE_FLOOR_SCALE * bounds.mean_squared_edge()
}

/// A multivariate normal `N(mean, covariance)` with a cached Cholesky factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianComponent {
    mean: Vec<f64>,
    covariance: DMatrix<f64>,
    /// Lower Cholesky factor, row-major.
    chol: Vec<f64>,
    /// `-(d/2) ln(2 pi) - sum ln L_ii`
    log_norm: f64,
}

/// Serializable form of a component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSnapshot {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

impl GaussianComponent {
    /// Fails if the covariance is not square, not symmetric (relative
    /// tolerance 1e-12) or not positive definite.
    pub fn new(mean: Vec<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if d == 0 {
            return Err(invalid("component mean is empty"));
        }
        if covariance.shape() != (d, d) {
            return Err(invalid(format!(
                "covariance shape {:?} does not match dimension {d}",
                covariance.shape()
            )));
        }
        if mean.iter().chain(covariance.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("component parameters must be finite"));
        }
        let scale = covariance.amax().max(f64::MIN_POSITIVE);
        for i in 0..d {
            for j in 0..i {
                if (covariance[(i, j)] - covariance[(j, i)]).abs() > 1e-12 * scale {
                    return Err(invalid(format!("covariance is not symmetric at ({i}, {j})")));
                }
            }
        }
        let l = nalgebra::linalg::Cholesky::new(covariance.clone())
            .ok_or_else(|| invalid("covariance is not positive definite"))?
            .unpack();
        let mut chol = vec![0.0; d * d];
        let mut log_det_half = 0.0;
        for i in 0..d {
            for j in 0..=i {
                chol[i * d + j] = l[(i, j)];
            }
            log_det_half += l[(i, i)].ln();
        }
        Ok(Self {
            mean,
            covariance,
            chol,
            log_norm: -0.5 * d as f64 * (2.0 * PI).ln() - log_det_half,
        })
    }

    /// `N(mean, variance * I)`.
    pub fn isotropic(mean: Vec<f64>, variance: f64) -> Result<Self> {
        let d = mean.len();
        Self::new(mean, DMatrix::from_diagonal_element(d, d, variance))
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn trace(&self) -> f64 {
        self.covariance.trace()
    }

    pub fn snapshot(&self) -> ComponentSnapshot {
        ComponentSnapshot {
            mean: self.mean.clone(),
            covariance: self
                .covariance
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
        }
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        let d = self.dim();
        // forward substitution L z = x - mean
        let mut z = [0.0f64; 64];
        let mut heap;
        let z: &mut [f64] = if d <= 64 {
            &mut z[..d]
        } else {
            heap = vec![0.0; d];
            &mut heap
        };
        let mut q = 0.0;
        for i in 0..d {
            let row = &self.chol[i * d..i * d + i];
            let s: f64 = row.iter().zip(z.iter()).map(|(a, b)| a * b).sum();
            let zi = (x[i] - self.mean[i] - s) / self.chol[i * d + i];
            z[i] = zi;
            q += zi * zi;
        }
        self.log_norm - 0.5 * q
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        self.log_density(x).exp()
    }

    /// One unconstrained draw `mean + L z`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let d = self.dim();
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        (0..d)
            .map(|i| {
                self.mean[i]
                    + self.chol[i * d..=i * d + i]
                        .iter()
                        .zip(&z)
                        .map(|(a, b)| a * b)
                        .sum::<f64>()
            })
            .collect()
    }
}

/// Equal-weight Gaussian mixture blended with the uniform distribution on a
/// box at coefficient `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureModel {
    components: Vec<GaussianComponent>,
    alpha: f64,
    bounds: SearchBox,
    uniform: f64,
}

impl MixtureModel {
    /// `alpha` may be any value in `[0, 1]`; the search itself uses
    /// `0 < alpha < 1` so that the density is bounded below on the box.
    pub fn new(components: Vec<GaussianComponent>, alpha: f64, bounds: SearchBox) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("mixture needs at least one component"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(invalid(format!("mixing coefficient {alpha} outside [0, 1]")));
        }
        if let Some(c) = components.iter().find(|c| c.dim() != bounds.dim()) {
            return Err(invalid(format!(
                "component of dimension {} in a box of dimension {}",
                c.dim(),
                bounds.dim()
            )));
        }
        let uniform = 1.0 / bounds.volume();
        Ok(Self {
            components,
            alpha,
            bounds,
            uniform,
        })
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn bounds(&self) -> &SearchBox {
        &self.bounds
    }

    /// Draws `count` points, all inside the box.
    ///
    /// Each draw takes the uniform branch with probability `alpha`, otherwise
    /// a component chosen uniformly at random; Gaussian draws outside the box
    /// are redrawn up to [`MAX_REJECTIONS`] times before falling back to a
    /// uniform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Result<Vec<DecisionPoint>> {
        if count == 0 {
            return Err(invalid("sample count must be positive"));
        }
        Ok((0..count).map(|_| DecisionPoint(self.sample_one(rng))).collect())
    }

    fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        if rng.random::<f64>() < self.alpha {
            return self.bounds.draw_uniform(rng);
        }
        let c = &self.components[rng.random_range(0..self.components.len())];
        for _ in 0..MAX_REJECTIONS {
            let x = c.draw(rng);
            if self.bounds.contains(&x) {
                return x;
            }
        }
        self.bounds.draw_uniform(rng)
    }

    /// Mixture density at an in-box point.
    pub fn density(&self, x: &DecisionPoint) -> Result<f64> {
        if !self.bounds.contains(x.as_slice()) {
            return Err(Error::Domain(format!("density requested outside the box at {:?}", x.0)));
        }
        Ok(self.density_unchecked(x.as_slice()))
    }

    pub(crate) fn density_unchecked(&self, x: &[f64]) -> f64 {
        if self.alpha == 1.0 {
            return self.uniform;
        }
        let gauss = self.components.iter().map(|c| c.density(x)).sum::<f64>() / self.components.len() as f64;
        (1.0 - self.alpha) * gauss + self.alpha * self.uniform
    }
}

/// Normalized importance weights `(1/g_j) / sum_l (1/g_l)`.
pub fn importance_weights(densities: &[f64]) -> Result<Vec<f64>> {
    if densities.is_empty() {
        return Err(invalid("no densities"));
    }
    if let Some(g) = densities.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(invalid(format!("density {g} is not strictly positive")));
    }
    let inv: Vec<f64> = densities.iter().map(|g| 1.0 / g).collect();
    let total: f64 = inv.iter().sum();
    Ok(inv.into_iter().map(|w| w / total).collect())
}

/// Importance-weighted Gaussian fit to a set of elite points drawn from a
/// density `g`: weighted mean and weighted (population) covariance with
/// weights proportional to `1/g`, plus `floor` on the diagonal. If the
/// regularized covariance still fails to factor, the off-diagonal entries
/// are dropped.
pub fn fit_component(elites: &[DecisionPoint], densities: &[f64], floor: f64) -> Result<GaussianComponent> {
    if elites.is_empty() {
        return Err(invalid("cannot fit a component to an empty elite set"));
    }
    if elites.len() != densities.len() {
        return Err(invalid(format!(
            "{} elites but {} densities",
            elites.len(),
            densities.len()
        )));
    }
    let d = elites[0].len();
    if elites.iter().any(|e| e.len() != d) {
        return Err(invalid("elites have mixed dimensions"));
    }
    let w = importance_weights(densities)?;
    let mut mean = vec![0.0; d];
    for (x, wj) in elites.iter().zip(&w) {
        for (m, v) in mean.iter_mut().zip(x.as_slice()) {
            *m += wj * v;
        }
    }
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for (x, wj) in elites.iter().zip(&w) {
        let dev = DVector::from_iterator(d, x.as_slice().iter().zip(&mean).map(|(a, b)| a - b));
        cov.ger(*wj, &dev, &dev, 1.0);
    }
    for i in 0..d {
        cov[(i, i)] += floor;
    }
    match GaussianComponent::new(mean.clone(), cov.clone()) {
        Ok(c) => Ok(c),
        Err(_) => GaussianComponent::new(mean, DMatrix::from_diagonal(&cov.diagonal())),
    }
}
