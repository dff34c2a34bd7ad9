//! Discrete power-law fit `P(k) = k^(−α) / ζ(α)` for `k ≥ 1`.

use crate::error::{Error, Result};
use crate::optim::brent_minimize;

/// B_{2j} / (2j)! for j = 1..=7.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
];

/// Riemann zeta for real `s > 1` (Euler–Maclaurin, cut at N = 16).
pub fn riemann_zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta needs s > 1, got {s}");
    const N: f64 = 16.0;
    let head: f64 = (1..16).map(|k| (k as f64).powf(-s)).sum();
    let mut tail = N.powf(1.0 - s) / (s - 1.0) + 0.5 * N.powf(-s);
    // rising factorial s(s+1)...(s+2j-2) times N^(-s-2j+1)
    let mut rising = s;
    let mut power = N.powf(-s - 1.0);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        tail += c * rising * power;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power /= N * N;
    }
    head + tail
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub log_likelihood: f64,
    pub n: usize,
}

const ALPHA_LO: f64 = 1.0 + 1e-9;
const ALPHA_HI: f64 = 50.0;
const MIN_DISTINCT: usize = 10;

/// Maximum-likelihood exponent with `k_min = 1`. Zero degrees are ignored.
pub fn powerlaw_fit(degrees: &[u64]) -> Result<PowerLawFit> {
    let positive: Vec<u64> = degrees.iter().copied().filter(|&k| k > 0).collect();
    let mut distinct = positive.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::NoPowerLawSupport(
            "all positive degrees are equal".into(),
        ));
    }
    if distinct.len() < MIN_DISTINCT {
        return Err(Error::NoPowerLawSupport(format!(
            "{} distinct positive degrees; need at least {MIN_DISTINCT}",
            distinct.len()
        )));
    }
    let n = positive.len() as f64;
    let sum_log: f64 = positive.iter().map(|&k| (k as f64).ln()).sum();
    let mean_log = sum_log / n;
    let neg_ll_per_obs = |a: f64| riemann_zeta(a).ln() + a * mean_log;
    let (alpha, f) = brent_minimize(neg_ll_per_obs, ALPHA_LO, ALPHA_HI, 1e-12, 1e-12, 500);
    Ok(PowerLawFit {
        alpha,
        log_likelihood: -f * n,
        n: positive.len(),
    })
}
