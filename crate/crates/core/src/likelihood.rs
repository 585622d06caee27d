//! The partitioned log-likelihood: exact Gaussian terms at labeled sites and
//! per-record K-component Gaussian mixtures at unlabeled sites, combined over
//! all sites entering the fit.

use ndarray::{Array1, Array2};
use rayon::prelude::*;

use crate::math::logsumexp2;
use crate::model::{cover_probabilities, CoverSimplex, Dims, ParameterState};
use crate::{Error, Result};

/// Clamp applied to raw reflectance before the logit; raw rasters contain
/// exact 0s and 1s.
pub const REFLECTANCE_CLAMP: f64 = 1e-6;

/// Logit of a raw reflectance in `[0, 1]`, after clamping away from the
/// boundary. `id` names the record in the rejection error.
pub fn logit_transform(raw: f64, id: &str) -> Result<f64> {
    if !raw.is_finite() || !(0.0..=1.0).contains(&raw) {
        return Err(Error::ReflectanceOutOfRange {
            id: id.to_string(),
            value: raw,
        });
    }
    let z = raw.clamp(REFLECTANCE_CLAMP, 1.0 - REFLECTANCE_CLAMP);
    Ok((z / (1.0 - z)).ln())
}

/// Inverse of the logit map, used when materializing synthetic reflectance
/// tables on the raw scale.
pub fn inverse_logit(r: f64) -> f64 {
    1.0 / (1.0 + (-r).exp())
}

/// One site's reflectance data: basis rows G_j (N_j x L) and logit
/// reflectances r_j.
#[derive(Debug, Clone)]
pub struct SiteBlock {
    pub g: Array2<f64>,
    pub r: Vec<f64>,
}

impl SiteBlock {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct LabeledSite {
    pub block: SiteBlock,
    /// 0-based cover type.
    pub label: usize,
}

#[derive(Debug, Clone)]
pub struct UnlabeledSite {
    pub block: SiteBlock,
    pub x: Array1<f64>,
    pub h: Array1<f64>,
}

/// Everything the sampler needs, with basis matrices already evaluated.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub labeled: Vec<LabeledSite>,
    pub unlabeled: Vec<UnlabeledSite>,
    pub dims: Dims,
}

impl PreparedData {
    pub fn empty(dims: Dims) -> Self {
        Self {
            labeled: Vec::new(),
            unlabeled: Vec::new(),
            dims,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.dims.validate()?;
        for (j, site) in self.labeled.iter().enumerate() {
            check_block(&site.block, self.dims, &format!("labeled site {j}"))?;
            if site.label >= self.dims.cover_types {
                return Err(Error::Data(format!(
                    "labeled site {j} has cover type {} outside 1..={}",
                    site.label + 1,
                    self.dims.cover_types
                )));
            }
        }
        for (j, site) in self.unlabeled.iter().enumerate() {
            check_block(&site.block, self.dims, &format!("unlabeled site {j}"))?;
            if site.x.len() != self.dims.covariates {
                return Err(Error::DimensionMismatch {
                    name: "site covariates",
                    expected: self.dims.covariates.to_string(),
                    got: site.x.len().to_string(),
                });
            }
            if site.h.len() != self.dims.spatial_basis {
                return Err(Error::DimensionMismatch {
                    name: "site spatial basis",
                    expected: self.dims.spatial_basis.to_string(),
                    got: site.h.len().to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn record_count(&self) -> usize {
        self.labeled.iter().map(|s| s.block.len()).sum::<usize>()
            + self.unlabeled.iter().map(|s| s.block.len()).sum::<usize>()
    }
}

fn check_block(block: &SiteBlock, dims: Dims, what: &str) -> Result<()> {
    if block.g.nrows() != block.r.len() {
        return Err(Error::Data(format!(
            "{what}: basis rows {} != reflectance count {}",
            block.g.nrows(),
            block.r.len()
        )));
    }
    if block.g.ncols() != dims.refl_basis {
        return Err(Error::DimensionMismatch {
            name: "reflectance basis columns",
            expected: dims.refl_basis.to_string(),
            got: block.g.ncols().to_string(),
        });
    }
    if block.r.iter().any(|v| !v.is_finite()) || block.g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data(format!("{what}: non-finite values")));
    }
    Ok(())
}

#[inline]
fn normal_logpdf(residual: f64, sigma2: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * sigma2).ln() - residual * residual / (2.0 * sigma2)
}

/// Exact Gaussian log-likelihood of a labeled site under its known cover
/// type; no constants dropped.
pub fn loglik_labeled_site(block: &SiteBlock, label: usize, gamma: &Array2<f64>, sigma2: f64) -> f64 {
    debug_assert!(sigma2 > 0.0);
    let mean = block.g.dot(&gamma.column(label));
    let n = block.len();
    let mut rss = 0.0;
    for i in 0..n {
        let e = block.r[i] - mean[i];
        rss += e * e;
    }
    -0.5 * n as f64 * (2.0 * std::f64::consts::PI * sigma2).ln() - rss / (2.0 * sigma2)
}

/// Mixture log-likelihood of an unlabeled site: every record contributes a
/// log-sum-exp over cover types with weights `p_j`. Components with zero
/// weight are skipped.
pub fn loglik_unlabeled_site(
    block: &SiteBlock,
    p: &CoverSimplex,
    gamma: &Array2<f64>,
    sigma2: f64,
) -> Result<f64> {
    debug_assert!(sigma2 > 0.0);
    let probs = p.probabilities();
    if probs.iter().all(|&w| w == 0.0) {
        return Err(Error::AllZeroWeights { id: "site".into() });
    }
    let active: Vec<(usize, f64)> = probs
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(k, &w)| (k, w.ln()))
        .collect();
    let means = block.g.dot(gamma); // N_j x K
    let mut total = 0.0;
    for i in 0..block.len() {
        let mut acc = f64::NEG_INFINITY;
        for &(k, log_w) in &active {
            let term = log_w + normal_logpdf(block.r[i] - means[[i, k]], sigma2);
            acc = logsumexp2(acc, term);
        }
        total += acc;
    }
    Ok(total)
}

/// Per-site log-likelihood contributions, for incremental reuse.
#[derive(Debug, Clone)]
pub struct SiteContributions {
    pub labeled: Vec<f64>,
    pub unlabeled: Vec<f64>,
}

impl SiteContributions {
    pub fn total(&self) -> f64 {
        self.labeled.iter().sum::<f64>() + self.unlabeled.iter().sum::<f64>()
    }
}

/// Partitioned log-likelihood of the full prepared data set, with per-site
/// terms. Per-site evaluation parallelizes over sites; the combine order is
/// fixed, so results do not depend on the thread count.
pub fn total_loglik_by_site(
    theta: &ParameterState,
    data: &PreparedData,
) -> Result<SiteContributions> {
    if theta.dims() != data.dims {
        return Err(Error::DimensionMismatch {
            name: "parameter state",
            expected: format!("{:?}", data.dims),
            got: format!("{:?}", theta.dims()),
        });
    }
    let labeled: Vec<f64> = data
        .labeled
        .par_iter()
        .map(|s| loglik_labeled_site(&s.block, s.label, &theta.gamma, theta.sigma2))
        .collect();
    let unlabeled: Vec<f64> = data
        .unlabeled
        .par_iter()
        .map(|s| {
            let p = cover_probabilities(s.x.view(), s.h.view(), &theta.beta, &theta.phi)?;
            loglik_unlabeled_site(&s.block, &p, &theta.gamma, theta.sigma2)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SiteContributions { labeled, unlabeled })
}

/// Total partitioned log-likelihood (labeled Gaussian terms plus unlabeled
/// mixture terms).
pub fn total_loglik(theta: &ParameterState, data: &PreparedData) -> Result<f64> {
    Ok(total_loglik_by_site(theta, data)?.total())
}
