//! Small numerical helpers shared across the crate.

use rayon::prelude::*;

/// Chunk length for deterministic parallel reductions. Partial sums are
/// computed per chunk in parallel and then combined in index order, so the
/// result is independent of the number of worker threads.
pub const REDUCTION_CHUNK: usize = 4096;

/// `log(sum(exp(v)))` with the usual max shift. Empty input gives `-inf`.
pub fn logsumexp(v: &[f64]) -> f64 {
    let mut max = f64::NEG_INFINITY;
    for &x in v {
        if x > max {
            max = x;
        }
    }
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut sum = 0.0;
    for &x in v {
        sum += (x - max).exp();
    }
    max + sum.ln()
}

/// Two-term log-sum-exp; tolerates `-inf` in either argument.
#[inline]
pub fn logsumexp2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 + e^x)` without overflow for large `x`.
#[inline]
pub fn log1pexp(x: f64) -> f64 {
    if x > 33.0 {
        // e^-x below f64 epsilon relative to x
        x + (-x).exp()
    } else if x > -37.0 {
        x.exp().ln_1p()
    } else {
        x.exp()
    }
}

/// Sum `f(i)` for `i in 0..n` with a thread-count-invariant reduction.
///
/// When `parallel` is false the loop runs serially in index order; either way
/// the chunk partials are combined in ascending order, so both paths produce
/// identical bits for the same inputs.
pub fn indexed_sum<F>(n: usize, parallel: bool, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    if n == 0 {
        return 0.0;
    }
    let n_chunks = n.div_ceil(REDUCTION_CHUNK);
    let chunk_sum = |c: usize| {
        let lo = c * REDUCTION_CHUNK;
        let hi = (lo + REDUCTION_CHUNK).min(n);
        let mut s = 0.0;
        for i in lo..hi {
            s += f(i);
        }
        s
    };
    if parallel && n_chunks > 1 {
        let partials: Vec<f64> = (0..n_chunks).into_par_iter().map(chunk_sum).collect();
        partials.iter().sum()
    } else {
        (0..n_chunks).map(chunk_sum).sum()
    }
}

/// Linear-interpolation quantile (the default in most statistical software)
/// on an already sorted slice. `q` must lie in `[0, 1]`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty slice");
    assert!((0.0..=1.0).contains(&q), "quantile level {q} outside [0, 1]");
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = q * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = lo.min(n - 2) + 1;
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Quantile of an unsorted slice; sorts a copy.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("NaN in quantile input"));
    quantile_sorted(&v, q)
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population (divide-by-n) variance.
pub fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}

/// Population standard deviation.
pub fn std_dev(values: &[f64]) -> f64 {
    variance(values).sqrt()
}
