//! Effective sample size via the initial-positive-sequence estimator.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssEstimate {
    pub ess: f64,
    /// Set when the trace carries no information (constant series).
    pub degenerate: bool,
}

/// Estimate the effective sample size of a scalar MCMC trace.
///
/// Sums sample autocorrelations in consecutive pairs and truncates at the
/// first non-positive pair (Geyer's initial positive sequence); the result is
/// clamped to `(0, n]`. A constant trace returns 0 with the degenerate flag.
pub fn effective_sample_size(trace: &[f64]) -> Result<EssEstimate> {
    let n = trace.len();
    if n < 10 {
        return Err(Error::TraceTooShort(n));
    }
    let mean = crate::math::mean(trace);
    let c0: f64 = trace.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    if !(c0 > 0.0) || !c0.is_finite() {
        return Ok(EssEstimate {
            ess: 0.0,
            degenerate: true,
        });
    }
    let rho = |t: usize| -> f64 {
        let mut s = 0.0;
        for i in 0..n - t {
            s += (trace[i] - mean) * (trace[i + t] - mean);
        }
        s / (n as f64 * c0)
    };
    // tau = -1 + 2 * sum of positive initial pairs (rho_0 + rho_1), (rho_2 + rho_3), ...
    let mut tau = -1.0;
    let mut t = 0usize;
    while t + 1 < n {
        let pair = rho(t) + rho(t + 1);
        if pair <= 0.0 {
            break;
        }
        tau += 2.0 * pair;
        t += 2;
    }
    let ess = if tau <= 0.0 {
        n as f64
    } else {
        (n as f64 / tau).min(n as f64)
    };
    Ok(EssEstimate {
        ess,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn iid_normal_trace_has_near_full_ess() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let n = 10_000;
        let trace: Vec<f64> = (0..n)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let est = effective_sample_size(&trace).unwrap();
        assert!(!est.degenerate);
        assert!(
            est.ess >= 8_500.0 && est.ess <= 11_500.0,
            "iid ESS {}",
            est.ess
        );
    }

    #[test]
    fn constant_trace_is_degenerate() {
        let trace = vec![1.234; 100];
        let est = effective_sample_size(&trace).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.ess, 0.0);
    }

    #[test]
    fn ar1_trace_matches_analytic_ess() {
        // ESS for AR(1) with coefficient a is n (1 - a) / (1 + a)
        let a = 0.9;
        let n = 50_000;
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        let mut trace = Vec::with_capacity(n);
        let mut x = 0.0;
        let innovation_sd = (1.0 - a * a as f64).sqrt();
        for _ in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            x = a * x + innovation_sd * z;
            trace.push(x);
        }
        let est = effective_sample_size(&trace).unwrap();
        let analytic = n as f64 * (1.0 - a) / (1.0 + a);
        assert!(
            (est.ess - analytic).abs() < 0.25 * analytic,
            "AR(1) ESS {} vs analytic {analytic}",
            est.ess
        );
    }

    #[test]
    fn short_trace_is_rejected() {
        let trace = vec![0.0; 9];
        assert!(matches!(
            effective_sample_size(&trace),
            Err(Error::TraceTooShort(9))
        ));
    }

    #[test]
    fn result_never_exceeds_n() {
        // strongly antithetic trace would have tau < 1; ESS must clamp at n
        let n = 1_000;
        let trace: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let est = effective_sample_size(&trace).unwrap();
        assert!(est.ess > 0.0 && est.ess <= n as f64);
    }
}
