//! Univariate slice sampling with stepping-out and shrinkage (Neal 2003).

use rand::Rng;

use crate::{Error, Result};

/// Outcome of one scalar slice transition.
#[derive(Debug, Clone, Copy)]
pub struct SliceStep {
    pub value: f64,
    /// The vertical level drawn for this transition; `log_target(value)` is
    /// guaranteed to be at or above it.
    pub level: f64,
    pub n_evals: u32,
}

const MAX_SHRINK: u32 = 10_000;

/// One slice-sampling transition for a scalar parameter.
///
/// Draws the level `log_target(current) - Exp(1)`, steps out an interval of
/// initial size `width` with a randomized budget of at most `max_stepout`
/// extensions, then shrinks until a point on the slice is found. The
/// transition leaves the distribution with log density `log_target`
/// invariant.
pub fn slice_update_scalar<F, R>(
    log_target: F,
    current: f64,
    width: f64,
    max_stepout: u32,
    rng: &mut R,
) -> Result<SliceStep>
where
    F: Fn(f64) -> f64,
    R: Rng + ?Sized,
{
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::Config(format!("slice width must be positive, got {width}")));
    }
    let f0 = log_target(current);
    if !f0.is_finite() {
        return Err(Error::NonFinite {
            what: "slice log target at the current point".into(),
            value: f0,
        });
    }
    // u in (0, 1]: keeps the exponential draw finite
    let u: f64 = 1.0 - rng.random::<f64>();
    let level = f0 + u.ln();

    let mut n_evals = 1u32;
    let mut left = current - width * rng.random::<f64>();
    let mut right = left + width;
    let mut budget_left = (max_stepout as f64 * rng.random::<f64>()) as u32;
    let mut budget_right = max_stepout.saturating_sub(1).saturating_sub(budget_left);
    while budget_left > 0 {
        n_evals += 1;
        if log_target(left) <= level {
            break;
        }
        left -= width;
        budget_left -= 1;
    }
    while budget_right > 0 {
        n_evals += 1;
        if log_target(right) <= level {
            break;
        }
        right += width;
        budget_right -= 1;
    }

    for _ in 0..MAX_SHRINK {
        let x = left + rng.random::<f64>() * (right - left);
        n_evals += 1;
        let fx = log_target(x);
        if fx >= level {
            assert!(
                fx >= level,
                "slice invariant violated: f({x}) = {fx} < level {level}"
            );
            return Ok(SliceStep {
                value: x,
                level,
                n_evals,
            });
        }
        if x < current {
            left = x;
        } else {
            right = x;
        }
    }
    Err(Error::SliceShrinkageExhausted { steps: MAX_SHRINK })
}
