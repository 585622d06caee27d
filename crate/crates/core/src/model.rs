//! Parameter containers, priors, and the cover-type probability map.
//!
//! Categories are indexed `0..K` internally with the last category as the
//! identifiability baseline: column `K-1` of the covariate and spatial
//! coefficient matrices is pinned to zero and never updated. User-facing
//! labels are 1-based, so internal `k` corresponds to cover type `k + 1`.

use ndarray::{Array2, ArrayView1};
use rand::Rng;
use rand_distr::{Distribution, Gamma as GammaDist, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::{Error, Result};

/// Model dimensions: K cover types, L reflectance basis functions, M spatial
/// basis functions, P landscape covariates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Dims {
    pub cover_types: usize,
    pub refl_basis: usize,
    pub spatial_basis: usize,
    pub covariates: usize,
}

impl Dims {
    pub fn validate(&self) -> Result<()> {
        if self.cover_types < 2 {
            return Err(Error::Config(format!(
                "need at least 2 cover types, got {}",
                self.cover_types
            )));
        }
        if self.refl_basis == 0 || self.spatial_basis == 0 || self.covariates == 0 {
            return Err(Error::Config(
                "basis and covariate dimensions must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Scalars actually sampled: all of Gamma, the K-1 free columns of B and
    /// Phi, and sigma^2.
    pub fn free_parameter_count(&self) -> usize {
        self.refl_basis * self.cover_types
            + (self.covariates + self.spatial_basis) * (self.cover_types - 1)
            + 1
    }
}

/// Full parameter state theta.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ParameterState {
    /// L x K reflectance-basis coefficients; column k is gamma_k.
    pub gamma: Array2<f64>,
    /// P x K covariate effects; baseline column pinned to zero.
    pub beta: Array2<f64>,
    /// M x K spatial-basis coefficients; baseline column pinned to zero.
    pub phi: Array2<f64>,
    /// Noise variance of logit reflectance.
    pub sigma2: f64,
}

impl ParameterState {
    pub fn zeros(dims: Dims) -> Self {
        Self {
            gamma: Array2::zeros((dims.refl_basis, dims.cover_types)),
            beta: Array2::zeros((dims.covariates, dims.cover_types)),
            phi: Array2::zeros((dims.spatial_basis, dims.cover_types)),
            sigma2: 1.0,
        }
    }

    pub fn dims(&self) -> Dims {
        Dims {
            cover_types: self.gamma.ncols(),
            refl_basis: self.gamma.nrows(),
            spatial_basis: self.phi.nrows(),
            covariates: self.beta.nrows(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.gamma.ncols();
        if self.beta.ncols() != k || self.phi.ncols() != k {
            return Err(Error::DimensionMismatch {
                name: "coefficient columns",
                expected: k.to_string(),
                got: format!("beta {}, phi {}", self.beta.ncols(), self.phi.ncols()),
            });
        }
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(Error::NonFinite {
                what: "sigma2".into(),
                value: self.sigma2,
            });
        }
        for (name, m) in [("gamma", &self.gamma), ("beta", &self.beta), ("phi", &self.phi)] {
            if m.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    what: format!("entry of {name}"),
                    value: f64::NAN,
                });
            }
        }
        let base = k - 1;
        if self.beta.column(base).iter().any(|&v| v != 0.0)
            || self.phi.column(base).iter().any(|&v| v != 0.0)
        {
            return Err(Error::Config(
                "baseline columns of beta and phi must be exactly zero".into(),
            ));
        }
        Ok(())
    }
}

/// Hyperparameters of the parameter priors. `gamma_scale`, `beta_scale` and
/// `phi_scale` are variances; sigma^2 has a shape-rate gamma prior (mean
/// shape/rate = 0.4 at the defaults).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct PriorSpec {
    pub rho: f64,
    pub gamma_scale: f64,
    pub phi_scale: f64,
    pub beta_scale: f64,
    pub sigma2_shape: f64,
    pub sigma2_rate: f64,
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self {
            rho: 0.9,
            gamma_scale: 0.05,
            phi_scale: 0.1,
            beta_scale: 1.0,
            sigma2_shape: 12.0,
            sigma2_rate: 30.0,
        }
    }
}

impl PriorSpec {
    /// Validity depends on K through the equicorrelation constraint
    /// rho in (-1/(K-1), 1).
    pub fn validate_for(&self, cover_types: usize) -> Result<()> {
        let k = cover_types as f64;
        if !(self.rho < 1.0 && self.rho > -1.0 / (k - 1.0)) {
            return Err(Error::Config(format!(
                "rho = {} outside (-1/(K-1), 1) = ({}, 1) for K = {cover_types}",
                self.rho,
                -1.0 / (k - 1.0)
            )));
        }
        for (name, v) in [
            ("gamma_scale", self.gamma_scale),
            ("phi_scale", self.phi_scale),
            ("beta_scale", self.beta_scale),
            ("sigma2_shape", self.sigma2_shape),
            ("sigma2_rate", self.sigma2_rate),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be strictly positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Per-site cover-type probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSimplex {
    probabilities: Vec<f64>,
}

impl CoverSimplex {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::Data(format!(
                "invalid probability vector {probabilities:?}"
            )));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Data(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

/// Linear predictors for the K-1 free categories followed by the pinned
/// baseline zero. Written into `out` (length K).
pub fn linear_predictors_into(
    x: ArrayView1<f64>,
    h: ArrayView1<f64>,
    beta: &Array2<f64>,
    phi: &Array2<f64>,
    out: &mut [f64],
) {
    let k_total = beta.ncols();
    debug_assert_eq!(out.len(), k_total);
    for k in 0..k_total - 1 {
        out[k] = x.dot(&beta.column(k)) + h.dot(&phi.column(k));
    }
    out[k_total - 1] = 0.0;
}

/// Softmax over linear predictors with the baseline fixed at zero, computed
/// with a stabilizing max shift. `lin` holds K entries (last one zero).
pub fn probabilities_from_linear(lin: &[f64]) -> Result<Vec<f64>> {
    for (k, &v) in lin.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                what: format!("linear predictor for cover type {}", k + 1),
                value: v,
            });
        }
    }
    let max = lin.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = lin.iter().map(|&v| (v - max).exp()).collect();
    let sum: f64 = p.iter().sum();
    for v in &mut p {
        *v /= sum;
    }
    Ok(p)
}

/// Cover-type probabilities p_j for one site (multinomial logit with pinned
/// baseline).
pub fn cover_probabilities(
    x: ArrayView1<f64>,
    h: ArrayView1<f64>,
    beta: &Array2<f64>,
    phi: &Array2<f64>,
) -> Result<CoverSimplex> {
    let mut lin = vec![0.0; beta.ncols()];
    linear_predictors_into(x, h, beta, phi, &mut lin);
    CoverSimplex::new(probabilities_from_linear(&lin)?)
}

/// Cholesky and precision of one row's Gamma prior covariance
/// `gamma_scale * (rho J + (1 - rho) I)`, shared across all L rows.
#[derive(Debug, Clone)]
pub struct GammaRowPrior {
    chol_lower: Array2<f64>,
    precision: Array2<f64>,
    log_norm_const: f64,
    k: usize,
}

impl GammaRowPrior {
    pub fn new(prior: &PriorSpec, cover_types: usize) -> Result<Self> {
        prior.validate_for(cover_types)?;
        let k = cover_types;
        let mut cov = nalgebra::DMatrix::<f64>::from_element(k, k, prior.rho * prior.gamma_scale);
        for i in 0..k {
            cov[(i, i)] = prior.gamma_scale;
        }
        let chol = nalgebra::Cholesky::new(cov.clone()).ok_or_else(|| {
            Error::Config(format!(
                "row prior covariance is not positive definite (rho = {})",
                prior.rho
            ))
        })?;
        let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let inv = chol.inverse();
        let mut chol_lower = Array2::zeros((k, k));
        let mut precision = Array2::zeros((k, k));
        for i in 0..k {
            for j in 0..k {
                chol_lower[[i, j]] = chol.l()[(i, j)];
                precision[[i, j]] = inv[(i, j)];
            }
        }
        let log_norm_const = -0.5 * (k as f64) * (2.0 * std::f64::consts::PI).ln() - 0.5 * log_det;
        Ok(Self {
            chol_lower,
            precision,
            log_norm_const,
            k,
        })
    }

    pub fn precision(&self) -> &Array2<f64> {
        &self.precision
    }

    pub fn log_density(&self, row: ArrayView1<f64>) -> f64 {
        let mut quad = 0.0;
        for i in 0..self.k {
            for j in 0..self.k {
                quad += row[i] * self.precision[[i, j]] * row[j];
            }
        }
        self.log_norm_const - 0.5 * quad
    }

    pub fn sample_into<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.k);
        let z: Vec<f64> = (0..self.k).map(|_| StandardNormal.sample(rng)).collect();
        for i in 0..self.k {
            let mut s = 0.0;
            for j in 0..=i {
                s += self.chol_lower[[i, j]] * z[j];
            }
            out[i] = s;
        }
    }
}

fn normal_logpdf_var(x: f64, variance: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * variance).ln() - x * x / (2.0 * variance)
}

/// Shape-rate gamma log-density; `-inf` outside the support.
pub fn gamma_logpdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

/// The additive pieces of the log prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorParts {
    pub gamma: f64,
    pub beta: f64,
    pub phi: f64,
    pub sigma2: f64,
}

impl PriorParts {
    pub fn total(&self) -> f64 {
        self.gamma + self.beta + self.phi + self.sigma2
    }
}

pub fn log_prior_parts(theta: &ParameterState, prior: &PriorSpec) -> Result<PriorParts> {
    let dims = theta.dims();
    let row_prior = GammaRowPrior::new(prior, dims.cover_types)?;
    let gamma: f64 = (0..dims.refl_basis)
        .map(|l| row_prior.log_density(theta.gamma.row(l)))
        .sum();
    let free = dims.cover_types - 1;
    let beta: f64 = theta
        .beta
        .slice(ndarray::s![.., ..free])
        .iter()
        .map(|&v| normal_logpdf_var(v, prior.beta_scale))
        .sum();
    let phi: f64 = theta
        .phi
        .slice(ndarray::s![.., ..free])
        .iter()
        .map(|&v| normal_logpdf_var(v, prior.phi_scale))
        .sum();
    let sigma2 = gamma_logpdf(theta.sigma2, prior.sigma2_shape, prior.sigma2_rate);
    Ok(PriorParts {
        gamma,
        beta,
        phi,
        sigma2,
    })
}

/// Joint log prior density of theta; `-inf` when sigma2 is out of support.
pub fn log_prior(theta: &ParameterState, prior: &PriorSpec) -> Result<f64> {
    Ok(log_prior_parts(theta, prior)?.total())
}

/// Draw a parameter state from the prior, respecting the pinned baseline
/// columns.
pub fn sample_prior<R: Rng>(prior: &PriorSpec, dims: Dims, rng: &mut R) -> Result<ParameterState> {
    dims.validate()?;
    let row_prior = GammaRowPrior::new(prior, dims.cover_types)?;
    let mut theta = ParameterState::zeros(dims);
    let mut row = vec![0.0; dims.cover_types];
    for l in 0..dims.refl_basis {
        row_prior.sample_into(rng, &mut row);
        for k in 0..dims.cover_types {
            theta.gamma[[l, k]] = row[k];
        }
    }
    let beta_sd = prior.beta_scale.sqrt();
    let phi_sd = prior.phi_scale.sqrt();
    for k in 0..dims.cover_types - 1 {
        for p in 0..dims.covariates {
            let z: f64 = StandardNormal.sample(rng);
            theta.beta[[p, k]] = beta_sd * z;
        }
        for m in 0..dims.spatial_basis {
            let z: f64 = StandardNormal.sample(rng);
            theta.phi[[m, k]] = phi_sd * z;
        }
    }
    let gamma_dist = GammaDist::new(prior.sigma2_shape, 1.0 / prior.sigma2_rate)
        .map_err(|e| Error::Config(format!("invalid sigma2 prior: {e}")))?;
    theta.sigma2 = gamma_dist.sample(rng);
    Ok(theta)
}
