//! Random-access discovery baseline and timing comparisons.
//!
//! In the contention baseline, each neighbor independently transmits its
//! address with probability θ in each of k periods; a given neighbor is
//! discovered only in a period where it transmits alone. The closed-form
//! miss probability is
//!
//! ```text
//! Σ_{z=1}^{N} C(N,z) ρ^z (1-ρ)^{N-z} [1 - θ(1-θ)^{z-1}]^k,  ρ = c/N
//! ```
//!
//! evaluated with log-domain binomial terms and tail truncation.

use crate::error::{Error, Result};
use crate::numeric::ln_gamma;

#[derive(Debug, Clone, Copy)]
pub struct RandomAccessParams {
    pub population: u64,
    /// Per-node neighbor probability ρ = c / N.
    pub neighbor_probability: f64,
    pub transmit_probability: f64,
    pub contention_periods: u64,
    pub bits_per_frame: u64,
}

/// Miss probability of one given neighbor after `k` contention periods.
pub fn random_access_miss(population: u64, rho: f64, theta: f64, k: u64) -> f64 {
    assert!((0.0..=1.0).contains(&rho));
    assert!((0.0..=1.0).contains(&theta));
    let n = population as f64;
    let ln_rho = rho.ln();
    let ln_1m_rho = (-rho).ln_1p();
    let mut sum = 0.0f64;
    let mode = (n * rho).max(1.0);
    for z in 1..=population {
        let zf = z as f64;
        let ln_binom = ln_gamma(n + 1.0) - ln_gamma(zf + 1.0) - ln_gamma(n - zf + 1.0);
        let ln_pmf = ln_binom + zf * ln_rho + (n - zf) * ln_1m_rho;
        let success = theta * (1.0 - theta).powf(zf - 1.0);
        let term = ln_pmf.exp() * (1.0 - success).powf(k as f64);
        sum += term;
        // pmf is unimodal; once past the mode, vanishing terms end the sum
        if zf > mode && ln_pmf.exp() < 1e-18 {
            break;
        }
    }
    sum.min(1.0)
}

/// Golden-section minimization of the miss probability over θ in (0, 1).
fn optimal_theta(population: u64, rho: f64, k: u64) -> f64 {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = random_access_miss(population, rho, x1, k);
    let mut f2 = random_access_miss(population, rho, x2, k);
    while hi - lo > 1e-4 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = random_access_miss(population, rho, x1, k);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = random_access_miss(population, rho, x2, k);
        }
    }
    0.5 * (lo + hi)
}

/// Frame/symbol budget of random-access discovery hitting a target error.
#[derive(Debug, Clone, Copy)]
pub struct RandomAccessBudget {
    pub frames: u64,
    pub theta: f64,
    pub miss: f64,
    /// QPSK symbols: frames × ceil(bits/2).
    pub symbols: u64,
}

/// Smallest number of contention periods reaching `target_error`, with θ
/// optimized per period count; symbols assume QPSK (2 bits per symbol).
pub fn min_frames_random_access(
    population: u64,
    mean_neighbors: f64,
    target_error: f64,
    bits_per_frame: u64,
) -> Result<RandomAccessBudget> {
    if !(0.0 < target_error && target_error < 1.0) {
        return Err(Error::config("target error must lie in (0, 1)"));
    }
    let rho = mean_neighbors / population as f64;
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::config("mean neighbors must be below the population"));
    }
    let symbols_per_frame = bits_per_frame.div_ceil(2);
    let reaches = |k: u64| {
        let theta = optimal_theta(population, rho, k);
        random_access_miss(population, rho, theta, k) <= target_error
    };
    // the θ-optimized miss probability is nonincreasing in k: bracket
    // exponentially, then bisect for the smallest sufficient k
    let mut hi = 1u64;
    while !reaches(hi) {
        hi *= 2;
        if hi > 1_000_000 {
            return Err(Error::config("target error unreachable within 10^6 frames"));
        }
    }
    let mut lo = hi / 2; // miss(lo) > target (or lo = 0)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = optimal_theta(population, rho, hi);
    Ok(RandomAccessBudget {
        frames: hi,
        theta,
        miss: random_access_miss(population, rho, theta, hi),
        symbols: hi * symbols_per_frame,
    })
}

/// Side-by-side duration summary of the two discovery styles.
#[derive(Debug, Clone, Copy)]
pub struct TimingReport {
    pub compressed_seconds: f64,
    pub random_access_seconds: f64,
}

pub fn discovery_time_report(
    symbols: u64,
    symbol_interval_s: f64,
    frames: u64,
    frame_duration_s: f64,
) -> Result<TimingReport> {
    if symbol_interval_s <= 0.0 || frame_duration_s <= 0.0 {
        return Err(Error::config("durations must be positive"));
    }
    Ok(TimingReport {
        compressed_seconds: symbols as f64 * symbol_interval_s,
        random_access_seconds: frames as f64 * frame_duration_s,
    })
}
