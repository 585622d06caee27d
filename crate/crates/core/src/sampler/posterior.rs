//! Cached evaluation of the log posterior for scalar slice updates.
//!
//! A naive implementation would re-evaluate every Gaussian density in the
//! mixture for every candidate point of every scalar update. Instead the
//! evaluator keeps three caches aligned with the current state:
//!
//! * `mean`: per-record surface values `g_i' gamma_k` (all records x K),
//! * `lin`: per-unlabeled-site linear predictors (baseline column zero),
//! * `log_p`: per-unlabeled-site log cover probabilities.
//!
//! Before a scalar update, the terms that do not involve the scalar are
//! folded into per-record scratch values, so each candidate evaluation costs
//! one or two exponentials per unlabeled record (plus O(1) work for the
//! labeled part, which collapses into a quadratic). Caches are refreshed
//! incrementally on acceptance and rebuilt from the state once per sweep,
//! which keeps floating-point drift from accumulating.

use ndarray::Array2;
use rayon::prelude::*;

use crate::likelihood::PreparedData;
use crate::math::{indexed_sum, logsumexp2, REDUCTION_CHUNK};
use crate::model::{gamma_logpdf, Dims, GammaRowPrior, ParameterState, PriorSpec};
use crate::{Error, Result};

const LN_2PI: f64 = 1.8378770664093456;
const RIDGE: f64 = 1e-6;
const MIN_INIT_SIGMA2: f64 = 1e-4;

/// One sampled scalar in the parameter state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ParamId {
    Gamma { l: usize, k: usize },
    Beta { p: usize, k: usize },
    Phi { m: usize, k: usize },
    LogSigma2,
}

/// Record-major view of the prepared data. Labeled records come first,
/// grouped by cover type; unlabeled records follow, grouped by site.
struct FlatData {
    g: Array2<f64>,
    r: Vec<f64>,
    n_labeled: usize,
    /// Absolute record range per cover type within the labeled part.
    label_ranges: Vec<std::ops::Range<usize>>,
    n_unlabeled: usize,
    /// Unlabeled-site index per unlabeled record.
    site_of_record: Vec<u32>,
    site_record_counts: Vec<f64>,
    x: Array2<f64>,
    h: Array2<f64>,
}

impl FlatData {
    fn build(data: &PreparedData) -> Self {
        let dims = data.dims;
        let n_labeled: usize = data.labeled.iter().map(|s| s.block.len()).sum();
        let n_unlabeled: usize = data.unlabeled.iter().map(|s| s.block.len()).sum();
        let n_total = n_labeled + n_unlabeled;
        let mut g = Array2::zeros((n_total, dims.refl_basis));
        let mut r = Vec::with_capacity(n_total);
        let mut label_ranges = Vec::with_capacity(dims.cover_types);
        let mut row = 0usize;
        for k in 0..dims.cover_types {
            let start = row;
            for site in data.labeled.iter().filter(|s| s.label == k) {
                for i in 0..site.block.len() {
                    g.row_mut(row).assign(&site.block.g.row(i));
                    r.push(site.block.r[i]);
                    row += 1;
                }
            }
            label_ranges.push(start..row);
        }
        let n_sites = data.unlabeled.len();
        let mut site_of_record = Vec::with_capacity(n_unlabeled);
        let mut site_record_counts = Vec::with_capacity(n_sites);
        let mut x = Array2::zeros((n_sites, dims.covariates));
        let mut h = Array2::zeros((n_sites, dims.spatial_basis));
        for (s, site) in data.unlabeled.iter().enumerate() {
            for i in 0..site.block.len() {
                g.row_mut(row).assign(&site.block.g.row(i));
                r.push(site.block.r[i]);
                site_of_record.push(s as u32);
                row += 1;
            }
            site_record_counts.push(site.block.len() as f64);
            x.row_mut(s).assign(&site.x);
            h.row_mut(s).assign(&site.h);
        }
        debug_assert_eq!(row, n_total);
        Self {
            g,
            r,
            n_labeled,
            label_ranges,
            n_unlabeled,
            site_of_record,
            site_record_counts,
            x,
            h,
        }
    }

    fn n_sites(&self) -> usize {
        self.site_record_counts.len()
    }
}

#[derive(Clone, Copy, Default)]
struct GammaRec {
    /// Residual with this coefficient's contribution removed.
    resid0: f64,
    /// Basis value multiplying the coefficient.
    gcol: f64,
    /// Log mixture weight of the updated component at this record's site.
    lpk: f64,
    /// Log-sum-exp of the other components' weighted densities.
    rest: f64,
}

#[derive(Clone, Copy, Default)]
struct MixRec {
    /// Log-sum-exp of the other components' weighted numerator terms.
    numrest: f64,
    /// Gaussian log density (up to the record constant) of the updated
    /// component.
    llk: f64,
}

#[derive(Default)]
struct Scratch {
    gamma: Vec<GammaRec>,
    mix: Vec<MixRec>,
    sig_lp: Vec<f64>,
    sig_q: Vec<f64>,
    site_denrest: Vec<f64>,
    site_lin0: Vec<f64>,
    site_w: Vec<f64>,
}

/// Context captured by `prepare` and consumed by `partial` / `apply`.
pub(crate) struct UpdateCtx {
    x0: f64,
    b0: f64,
    b1: f64,
    b2: f64,
    prior_quad: f64,
    prior_lin: f64,
    inv2s: f64,
    lnc: f64,
    ssr_labeled: f64,
}

pub(crate) struct PosteriorEval {
    data: FlatData,
    dims: Dims,
    prior: PriorSpec,
    row_prior: GammaRowPrior,
    pub theta: ParameterState,
    mean: Array2<f64>,
    lin: Array2<f64>,
    log_p: Array2<f64>,
    scratch: Scratch,
    parallel: bool,
    deterministic: bool,
}

impl PosteriorEval {
    pub fn new(
        data: &PreparedData,
        prior: &PriorSpec,
        parallel: bool,
        deterministic: bool,
    ) -> Result<Self> {
        data.validate()?;
        prior.validate_for(data.dims.cover_types)?;
        let dims = data.dims;
        let flat = FlatData::build(data);
        let row_prior = GammaRowPrior::new(prior, dims.cover_types)?;
        let theta = initial_state(&flat, dims, prior)?;
        let n_total = flat.r.len();
        let n_unl = flat.n_unlabeled;
        let n_sites = flat.n_sites();
        let scratch = Scratch {
            gamma: vec![GammaRec::default(); n_unl],
            mix: vec![MixRec::default(); n_unl],
            sig_lp: vec![0.0; n_unl * dims.cover_types],
            sig_q: vec![0.0; n_unl * dims.cover_types],
            site_denrest: vec![0.0; n_sites],
            site_lin0: vec![0.0; n_sites],
            site_w: vec![0.0; n_sites],
        };
        let mut eval = Self {
            data: flat,
            dims,
            prior: *prior,
            row_prior,
            theta,
            mean: Array2::zeros((n_total, dims.cover_types)),
            lin: Array2::zeros((n_sites, dims.cover_types)),
            log_p: Array2::zeros((n_sites, dims.cover_types)),
            scratch,
            parallel,
            deterministic,
        };
        eval.resync();
        let lp0 = eval.log_posterior();
        if !lp0.is_finite() {
            return Err(Error::BadInitialState { value: lp0 });
        }
        Ok(eval)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Rebuild all caches directly from the current state.
    pub fn resync(&mut self) {
        self.mean = self.data.g.dot(&self.theta.gamma);
        self.lin = self.data.x.dot(&self.theta.beta) + self.data.h.dot(&self.theta.phi);
        for s in 0..self.data.n_sites() {
            self.refresh_log_p_row(s);
        }
    }

    fn refresh_log_p_row(&mut self, s: usize) {
        let k_total = self.dims.cover_types;
        let mut den = f64::NEG_INFINITY;
        for k in 0..k_total {
            den = logsumexp2(den, self.lin[[s, k]]);
        }
        for k in 0..k_total {
            self.log_p[[s, k]] = self.lin[[s, k]] - den;
        }
    }

    fn reduce<F>(&self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync,
    {
        if self.deterministic {
            indexed_sum(n, self.parallel, f)
        } else if self.parallel {
            (0..n).into_par_iter().map(f).sum()
        } else {
            (0..n).map(f).sum()
        }
    }

    /// Full log posterior from the caches.
    pub fn log_posterior(&self) -> f64 {
        self.log_likelihood() + self.log_prior()
    }

    pub fn log_likelihood(&self) -> f64 {
        let sigma2 = self.theta.sigma2;
        let inv2s = 0.5 / sigma2;
        let lnc = -0.5 * (LN_2PI + sigma2.ln());
        let mean = &self.mean;
        let r = &self.data.r;
        let mut total = 0.0;
        for (k, range) in self.data.label_ranges.iter().enumerate() {
            let start = range.start;
            let len = range.end - range.start;
            total += self.reduce(len, |o| {
                let i = start + o;
                let e = r[i] - mean[[i, k]];
                lnc - e * e * inv2s
            });
        }
        let base = self.data.n_labeled;
        let k_total = self.dims.cover_types;
        let site_of_record = &self.data.site_of_record;
        let log_p = &self.log_p;
        total += self.reduce(self.data.n_unlabeled, |t| {
            let i = base + t;
            let s = site_of_record[t] as usize;
            let mut acc = f64::NEG_INFINITY;
            for k in 0..k_total {
                let e = r[i] - mean[[i, k]];
                acc = logsumexp2(acc, log_p[[s, k]] + lnc - e * e * inv2s);
            }
            acc
        });
        total
    }

    pub fn log_prior(&self) -> f64 {
        let mut total = 0.0;
        for l in 0..self.dims.refl_basis {
            total += self.row_prior.log_density(self.theta.gamma.row(l));
        }
        let free = self.dims.cover_types - 1;
        let beta_var = self.prior.beta_scale;
        let phi_var = self.prior.phi_scale;
        for k in 0..free {
            for p in 0..self.dims.covariates {
                let v = self.theta.beta[[p, k]];
                total += -0.5 * (LN_2PI + beta_var.ln()) - v * v / (2.0 * beta_var);
            }
            for m in 0..self.dims.spatial_basis {
                let v = self.theta.phi[[m, k]];
                total += -0.5 * (LN_2PI + phi_var.ln()) - v * v / (2.0 * phi_var);
            }
        }
        total + gamma_logpdf(self.theta.sigma2, self.prior.sigma2_shape, self.prior.sigma2_rate)
    }

    pub fn current_value(&self, pid: ParamId) -> f64 {
        match pid {
            ParamId::Gamma { l, k } => self.theta.gamma[[l, k]],
            ParamId::Beta { p, k } => self.theta.beta[[p, k]],
            ParamId::Phi { m, k } => self.theta.phi[[m, k]],
            ParamId::LogSigma2 => self.theta.sigma2.ln(),
        }
    }

    pub fn prepare(&mut self, pid: ParamId) -> UpdateCtx {
        match pid {
            ParamId::Gamma { l, k } => self.prepare_gamma(l, k),
            ParamId::Beta { p, k } => self.prepare_mix(p, k, false),
            ParamId::Phi { m, k } => self.prepare_mix(m, k, true),
            ParamId::LogSigma2 => self.prepare_log_sigma2(),
        }
    }

    fn prepare_gamma(&mut self, l: usize, k: usize) -> UpdateCtx {
        let x0 = self.theta.gamma[[l, k]];
        let sigma2 = self.theta.sigma2;
        let inv2s = 0.5 / sigma2;
        let lnc = -0.5 * (LN_2PI + sigma2.ln());
        let range = self.data.label_ranges[k].clone();
        let (mut b0, mut b1, mut b2) = (0.0, 0.0, 0.0);
        for i in range {
            let gcol = self.data.g[[i, l]];
            let resid0 = self.data.r[i] - self.mean[[i, k]] + gcol * x0;
            b0 += resid0 * resid0;
            b1 += resid0 * gcol;
            b2 += gcol * gcol;
        }
        let base = self.data.n_labeled;
        let k_total = self.dims.cover_types;
        {
            let g = &self.data.g;
            let r = &self.data.r;
            let mean = &self.mean;
            let log_p = &self.log_p;
            let site_of_record = &self.data.site_of_record;
            let fill = |chunk_index: usize, chunk: &mut [GammaRec]| {
                let start = chunk_index * REDUCTION_CHUNK;
                for (o, rec) in chunk.iter_mut().enumerate() {
                    let t = start + o;
                    let i = base + t;
                    let s = site_of_record[t] as usize;
                    let gcol = g[[i, l]];
                    rec.gcol = gcol;
                    rec.resid0 = r[i] - mean[[i, k]] + gcol * x0;
                    rec.lpk = log_p[[s, k]];
                    let mut rest = f64::NEG_INFINITY;
                    for kk in 0..k_total {
                        if kk == k {
                            continue;
                        }
                        let e = r[i] - mean[[i, kk]];
                        rest = logsumexp2(rest, log_p[[s, kk]] + lnc - e * e * inv2s);
                    }
                    rec.rest = rest;
                }
            };
            if self.parallel {
                self.scratch
                    .gamma
                    .par_chunks_mut(REDUCTION_CHUNK)
                    .enumerate()
                    .for_each(|(ci, chunk)| fill(ci, chunk));
            } else {
                for (ci, chunk) in self.scratch.gamma.chunks_mut(REDUCTION_CHUNK).enumerate() {
                    fill(ci, chunk);
                }
            }
        }
        let q = self.row_prior.precision();
        let mut prior_lin = 0.0;
        for kk in 0..k_total {
            if kk != k {
                prior_lin += q[[k, kk]] * self.theta.gamma[[l, kk]];
            }
        }
        UpdateCtx {
            x0,
            b0,
            b1,
            b2,
            prior_quad: q[[k, k]],
            prior_lin,
            inv2s,
            lnc,
            ssr_labeled: 0.0,
        }
    }

    fn prepare_mix(&mut self, index: usize, k: usize, spatial: bool) -> UpdateCtx {
        debug_assert!(k < self.dims.cover_types - 1);
        let x0 = if spatial {
            self.theta.phi[[index, k]]
        } else {
            self.theta.beta[[index, k]]
        };
        let sigma2 = self.theta.sigma2;
        let inv2s = 0.5 / sigma2;
        let lnc = -0.5 * (LN_2PI + sigma2.ln());
        let k_total = self.dims.cover_types;
        for s in 0..self.data.n_sites() {
            let w = if spatial {
                self.data.h[[s, index]]
            } else {
                self.data.x[[s, index]]
            };
            self.scratch.site_w[s] = w;
            self.scratch.site_lin0[s] = self.lin[[s, k]] - w * x0;
            let mut denrest = f64::NEG_INFINITY;
            for kk in 0..k_total {
                if kk != k {
                    denrest = logsumexp2(denrest, self.lin[[s, kk]]);
                }
            }
            self.scratch.site_denrest[s] = denrest;
        }
        let base = self.data.n_labeled;
        {
            let g_unused = ();
            let _ = g_unused;
            let r = &self.data.r;
            let mean = &self.mean;
            let lin = &self.lin;
            let site_of_record = &self.data.site_of_record;
            let fill = |chunk_index: usize, chunk: &mut [MixRec]| {
                let start = chunk_index * REDUCTION_CHUNK;
                for (o, rec) in chunk.iter_mut().enumerate() {
                    let t = start + o;
                    let i = base + t;
                    let s = site_of_record[t] as usize;
                    let ek = r[i] - mean[[i, k]];
                    rec.llk = lnc - ek * ek * inv2s;
                    let mut numrest = f64::NEG_INFINITY;
                    for kk in 0..k_total {
                        if kk == k {
                            continue;
                        }
                        let e = r[i] - mean[[i, kk]];
                        numrest = logsumexp2(numrest, lin[[s, kk]] + lnc - e * e * inv2s);
                    }
                    rec.numrest = numrest;
                }
            };
            if self.parallel {
                self.scratch
                    .mix
                    .par_chunks_mut(REDUCTION_CHUNK)
                    .enumerate()
                    .for_each(|(ci, chunk)| fill(ci, chunk));
            } else {
                for (ci, chunk) in self.scratch.mix.chunks_mut(REDUCTION_CHUNK).enumerate() {
                    fill(ci, chunk);
                }
            }
        }
        let scale = if spatial {
            self.prior.phi_scale
        } else {
            self.prior.beta_scale
        };
        UpdateCtx {
            x0,
            b0: 0.0,
            b1: 0.0,
            b2: 0.0,
            prior_quad: 1.0 / scale,
            prior_lin: 0.0,
            inv2s,
            lnc,
            ssr_labeled: 0.0,
        }
    }

    fn prepare_log_sigma2(&mut self) -> UpdateCtx {
        let mut ssr = 0.0;
        for (k, range) in self.data.label_ranges.iter().enumerate() {
            let start = range.start;
            let len = range.end - range.start;
            let r = &self.data.r;
            let mean = &self.mean;
            ssr += indexed_sum(len, self.parallel, |o| {
                let i = start + o;
                let e = r[i] - mean[[i, k]];
                e * e
            });
        }
        let k_total = self.dims.cover_types;
        let base = self.data.n_labeled;
        {
            let r = &self.data.r;
            let mean = &self.mean;
            let log_p = &self.log_p;
            let site_of_record = &self.data.site_of_record;
            let sig_q = &mut self.scratch.sig_q;
            let sig_lp = &mut self.scratch.sig_lp;
            let fill_len = REDUCTION_CHUNK * k_total;
            let fill = |chunk_index: usize, q_chunk: &mut [f64], lp_chunk: &mut [f64]| {
                let start_t = chunk_index * REDUCTION_CHUNK;
                for o in 0..q_chunk.len() / k_total {
                    let t = start_t + o;
                    let i = base + t;
                    let s = site_of_record[t] as usize;
                    for k in 0..k_total {
                        let e = r[i] - mean[[i, k]];
                        q_chunk[o * k_total + k] = e * e;
                        lp_chunk[o * k_total + k] = log_p[[s, k]];
                    }
                }
            };
            if self.parallel {
                sig_q
                    .par_chunks_mut(fill_len)
                    .zip(sig_lp.par_chunks_mut(fill_len))
                    .enumerate()
                    .for_each(|(ci, (qc, lc))| fill(ci, qc, lc));
            } else {
                for (ci, (qc, lc)) in sig_q
                    .chunks_mut(fill_len)
                    .zip(sig_lp.chunks_mut(fill_len))
                    .enumerate()
                {
                    fill(ci, qc, lc);
                }
            }
        }
        UpdateCtx {
            x0: self.theta.sigma2.ln(),
            b0: 0.0,
            b1: 0.0,
            b2: 0.0,
            prior_quad: 0.0,
            prior_lin: 0.0,
            inv2s: 0.0,
            lnc: 0.0,
            ssr_labeled: ssr,
        }
    }

    /// Log posterior as a function of the updated scalar only, up to terms
    /// that do not involve it.
    pub fn partial(&self, pid: ParamId, ctx: &UpdateCtx, x: f64) -> f64 {
        match pid {
            ParamId::Gamma { .. } => self.partial_gamma(ctx, x),
            ParamId::Beta { .. } | ParamId::Phi { .. } => self.partial_mix(ctx, x),
            ParamId::LogSigma2 => self.partial_log_sigma2(ctx, x),
        }
    }

    fn partial_gamma(&self, ctx: &UpdateCtx, x: f64) -> f64 {
        let labeled = -(ctx.b0 - 2.0 * x * ctx.b1 + x * x * ctx.b2) * ctx.inv2s;
        let recs = &self.scratch.gamma;
        let inv2s = ctx.inv2s;
        let lnc = ctx.lnc;
        let unlabeled = self.reduce(self.data.n_unlabeled, |t| {
            let rec = &recs[t];
            let e = rec.resid0 - rec.gcol * x;
            logsumexp2(rec.rest, rec.lpk + lnc - e * e * inv2s)
        });
        let prior = -0.5 * ctx.prior_quad * x * x - ctx.prior_lin * x;
        labeled + unlabeled + prior
    }

    fn partial_mix(&self, ctx: &UpdateCtx, x: f64) -> f64 {
        let recs = &self.scratch.mix;
        let site_lin0 = &self.scratch.site_lin0;
        let site_w = &self.scratch.site_w;
        let site_of_record = &self.data.site_of_record;
        let numerator = self.reduce(self.data.n_unlabeled, |t| {
            let rec = &recs[t];
            let s = site_of_record[t] as usize;
            logsumexp2(rec.numrest, site_lin0[s] + site_w[s] * x + rec.llk)
        });
        let mut denominator = 0.0;
        for s in 0..self.data.n_sites() {
            let den = logsumexp2(self.scratch.site_denrest[s], site_lin0[s] + site_w[s] * x);
            denominator += self.data.site_record_counts[s] * den;
        }
        let prior = -0.5 * ctx.prior_quad * x * x;
        numerator - denominator + prior
    }

    fn partial_log_sigma2(&self, ctx: &UpdateCtx, t: f64) -> f64 {
        let e_neg = (-t).exp();
        let half_e_neg = 0.5 * e_neg;
        let n_lab = self.data.n_labeled as f64;
        let n_unl = self.data.n_unlabeled as f64;
        let labeled = -0.5 * n_lab * t - ctx.ssr_labeled * half_e_neg;
        let k_total = self.dims.cover_types;
        let sig_q = &self.scratch.sig_q;
        let sig_lp = &self.scratch.sig_lp;
        let unlabeled = self.reduce(self.data.n_unlabeled, |rec| {
            let off = rec * k_total;
            let mut acc = f64::NEG_INFINITY;
            for k in 0..k_total {
                acc = logsumexp2(acc, sig_lp[off + k] - sig_q[off + k] * half_e_neg);
            }
            acc
        }) - 0.5 * n_unl * t;
        // shape * t absorbs the log-scale Jacobian
        let prior = self.prior.sigma2_shape * t - self.prior.sigma2_rate * t.exp();
        labeled + unlabeled + prior
    }

    /// Accept a new value for the scalar and refresh the affected caches.
    pub fn apply(&mut self, pid: ParamId, ctx: &UpdateCtx, x_new: f64) {
        match pid {
            ParamId::Gamma { l, k } => {
                let delta = x_new - ctx.x0;
                self.theta.gamma[[l, k]] = x_new;
                if delta != 0.0 {
                    let n = self.data.r.len();
                    for i in 0..n {
                        self.mean[[i, k]] += self.data.g[[i, l]] * delta;
                    }
                }
            }
            ParamId::Beta { p, k } => {
                let delta = x_new - ctx.x0;
                self.theta.beta[[p, k]] = x_new;
                if delta != 0.0 {
                    for s in 0..self.data.n_sites() {
                        self.lin[[s, k]] += self.data.x[[s, p]] * delta;
                        self.refresh_log_p_row(s);
                    }
                }
            }
            ParamId::Phi { m, k } => {
                let delta = x_new - ctx.x0;
                self.theta.phi[[m, k]] = x_new;
                if delta != 0.0 {
                    for s in 0..self.data.n_sites() {
                        self.lin[[s, k]] += self.data.h[[s, m]] * delta;
                        self.refresh_log_p_row(s);
                    }
                }
            }
            ParamId::LogSigma2 => {
                self.theta.sigma2 = x_new.exp();
            }
        }
    }
}

/// Starting state: covariate and spatial effects at zero, the reflectance
/// coefficients at a shared ridge projection of all logit reflectances onto
/// the basis, and sigma^2 at the projection's residual variance.
fn initial_state(flat: &FlatData, dims: Dims, prior: &PriorSpec) -> Result<ParameterState> {
    let mut theta = ParameterState::zeros(dims);
    let n = flat.r.len();
    if n == 0 {
        theta.sigma2 = prior.sigma2_shape / prior.sigma2_rate;
        return Ok(theta);
    }
    let l_dim = dims.refl_basis;
    let gtg = flat.g.t().dot(&flat.g);
    let mut a = nalgebra::DMatrix::<f64>::zeros(l_dim, l_dim);
    for i in 0..l_dim {
        for j in 0..l_dim {
            a[(i, j)] = gtg[[i, j]];
        }
        a[(i, i)] += RIDGE;
    }
    let mut gtr = nalgebra::DVector::<f64>::zeros(l_dim);
    for i in 0..n {
        for l in 0..l_dim {
            gtr[l] += flat.g[[i, l]] * flat.r[i];
        }
    }
    let chol = nalgebra::Cholesky::new(a).ok_or(Error::CovarianceFactorization)?;
    let coef = chol.solve(&gtr);
    for l in 0..l_dim {
        for k in 0..dims.cover_types {
            theta.gamma[[l, k]] = coef[l];
        }
    }
    let mut rss = 0.0;
    for i in 0..n {
        let mut fit = 0.0;
        for l in 0..l_dim {
            fit += flat.g[[i, l]] * coef[l];
        }
        let e = flat.r[i] - fit;
        rss += e * e;
    }
    theta.sigma2 = (rss / n as f64).max(MIN_INIT_SIGMA2);
    Ok(theta)
}
