use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::{PrimalDualPoint, SaddlePoint};
use crate::scalar::Scalar;

use super::lyapunov_value;

/// Seeded sampler for points of `K` inside a Lyapunov sublevel set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    pub count: usize,
    pub seed: u64,
    /// Points satisfy `V(p) <= v_max` with respect to the reference saddle.
    pub v_max: f64,
    /// Probability that each multiplier is set exactly to zero.
    pub boundary_prob: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            count: 10_000,
            seed: 0,
            v_max: 100.0,
            boundary_prob: 0.4,
        }
    }
}

/// Draws `cfg.count` points of `K` with `V(p) <= cfg.v_max`.
///
/// Coordinates are uniform in a box around the saddle (multipliers cut at
/// zero) and each multiplier is independently pinned to `0` with
/// probability `boundary_prob`; draws outside the sublevel set are rejected.
pub fn sample_domain_points<T: Scalar>(
    saddle: &SaddlePoint<T>,
    cfg: &SamplingConfig,
) -> Result<Vec<PrimalDualPoint<T>>> {
    if !(cfg.v_max > 0.0) || !(0.0..=1.0).contains(&cfg.boundary_prob) {
        return Err(Error::Config(format!("invalid sampling config {cfg:?}")));
    }
    let dim = saddle.x_star.len() + saddle.lambda_star.len();
    let half_width = (2.0 * cfg.v_max).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    let max_attempts = cfg.count.saturating_mul(1000).max(1000) * dim.max(1);
    let mut attempts = 0;
    while out.len() < cfg.count {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Config(
                "sublevel set too thin to sample; raise v_max".into(),
            ));
        }
        let x = saddle
            .x_star
            .iter()
            .map(|&c| T::of(c.to_f64_lossy() + rng.gen_range(-half_width..half_width)))
            .collect();
        let lambda = saddle
            .lambda_star
            .iter()
            .map(|&c| {
                if rng.gen_bool(cfg.boundary_prob) {
                    T::zero()
                } else {
                    let c = c.to_f64_lossy();
                    T::of(rng.gen_range((c - half_width).max(0.0)..c + half_width))
                }
            })
            .collect();
        let p = PrimalDualPoint::raw(x, lambda);
        if lyapunov_value(saddle, &p)?.to_f64_lossy() <= cfg.v_max {
            out.push(p);
        }
    }
    Ok(out)
}
