//! Empirical Rademacher complexity of the class of `[-1, 1]`-valued
//! functions that are constant on each class of a [`SamplePartition`].
//!
//! For a fixed sign vector the supremum over that class is attained by
//! choosing `sign(Z_j)` on class `j`, where `Z_j` is the sum of the signs in
//! the class. The complexity is therefore
//!
//! ```text
//! R_S = (1/m) * sum_j E|Z_j|,    Z_j ~ sum of mu_j independent signs
//! ```
//!
//! which [`exact_rademacher`] evaluates in closed form,
//! [`brute_force_rademacher`] by enumerating every sign vector, and
//! [`mc_rademacher`] by sampling.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::{Error, Result, SamplePartition};

/// Above this `n`, `E|S_n|` switches from exact integer arithmetic to
/// log-gamma evaluation.
pub const EXACT_BINOMIAL_LIMIT: usize = 1000;

/// Largest sample size [`brute_force_rademacher`] enumerates (2^20 sign
/// vectors).
pub const ENUMERATION_LIMIT: usize = 20;

/// Monte Carlo trials are drawn in fixed blocks, each from its own ChaCha
/// stream, so results do not depend on the number of worker threads.
const MC_BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    Exact,
    BruteForce,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RademacherEstimate {
    pub method: EstimateMethod,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
}

impl RademacherEstimate {
    fn point(method: EstimateMethod, value: f64) -> Self {
        Self {
            method,
            value,
            trials: None,
            delta: None,
            half_width: None,
        }
    }

    /// Whether `x` lies in `value ± half_width`. Always false without an
    /// interval.
    pub fn interval_contains(&self, x: f64) -> bool {
        self.half_width
            .is_some_and(|hw| (x - self.value).abs() <= hw)
    }
}

/// `E|S_n|` for `S_n` a sum of `n` independent signs:
/// `n * C(n-1, floor((n-1)/2)) / 2^(n-1)`, and 0 for `n = 0`.
pub fn expected_abs_rademacher_sum(n: usize) -> f64 {
    if n <= EXACT_BINOMIAL_LIMIT {
        expected_abs_sum_exact(n)
    } else {
        expected_abs_sum_lgamma(n)
    }
}

/// Exact big-integer evaluation, rounded to `f64` once at the end.
pub fn expected_abs_sum_exact(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let top = n - 1;
    let k = top / 2;
    let mut binom = BigUint::one();
    for i in 0..k {
        binom *= top - i;
        binom /= i + 1;
    }
    let numerator = binom * n;
    // Division by a power of two is exact in floating point as long as the
    // result stays normal, which holds for the whole exact range.
    let scaled = numerator.to_f64().expect("finite for n <= 1000");
    scaled * 2f64.powi(-(top as i32))
}

/// Log-gamma evaluation of the same expression, for large `n`.
pub fn expected_abs_sum_lgamma(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let top = (n - 1) as f64;
    let k = ((n - 1) / 2) as f64;
    let log_binom = ln_gamma(top + 1.0) - ln_gamma(k + 1.0) - ln_gamma(top - k + 1.0);
    (log_binom - top * std::f64::consts::LN_2 + (n as f64).ln()).exp()
}

/// Closed form `(1/m) * sum_j E|S_{mu_j}|`.
pub fn exact_rademacher(partition: &SamplePartition) -> RademacherEstimate {
    let mut cache: HashMap<usize, f64> = HashMap::new();
    let sum: f64 = partition
        .classes()
        .iter()
        .map(|c| *cache
            .entry(c.multiplicity)
            .or_insert_with(|| expected_abs_rademacher_sum(c.multiplicity)))
        .sum();
    RademacherEstimate::point(EstimateMethod::Exact, sum / partition.m() as f64)
}

/// Averages `(1/m) * sum_j |Z_j|` over all `2^m` sign vectors, visited in
/// Gray-code order so each step flips one sign.
pub fn brute_force_rademacher(partition: &SamplePartition) -> Result<RademacherEstimate> {
    let m = partition.m();
    if m > ENUMERATION_LIMIT {
        return Err(Error::EnumerationInfeasible {
            m,
            limit: ENUMERATION_LIMIT,
        });
    }
    let owner = partition.class_index();
    // start from all signs = -1
    let mut signs = vec![-1i64; m];
    let mut z: Vec<i64> = partition
        .classes()
        .iter()
        .map(|c| -(c.multiplicity as i64))
        .collect();
    let mut abs_sum: i64 = z.iter().map(|v| v.abs()).sum();
    let mut total: u64 = abs_sum as u64;
    for step in 1u64..(1u64 << m) {
        let i = step.trailing_zeros() as usize;
        let j = owner[i];
        abs_sum -= z[j].abs();
        z[j] -= 2 * signs[i];
        signs[i] = -signs[i];
        abs_sum += z[j].abs();
        total += abs_sum as u64;
    }
    let value = total as f64 / ((1u64 << m) as f64 * m as f64);
    Ok(RademacherEstimate::point(EstimateMethod::BruteForce, value))
}

/// Monte Carlo estimate over `trials` independent sign vectors with a
/// two-sided Hoeffding interval of half-width `sqrt(ln(2/delta) / (2 trials))`
/// (each trial's value lies in `[0, 1]`). Deterministic in `seed`.
pub fn mc_rademacher(
    partition: &SamplePartition,
    trials: u64,
    seed: u64,
    delta: f64,
) -> Result<RademacherEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside (0, 1)")));
    }
    let multiplicities = partition.multiplicities();
    let blocks = trials.div_ceil(MC_BLOCK);
    // Per-trial values are integers over m, so the sum is exact and
    // independent of how blocks are combined.
    let total: u64 = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let len = MC_BLOCK.min(trials - block * MC_BLOCK);
            (0..len)
                .map(|_| {
                    multiplicities
                        .iter()
                        .map(|&mu| abs_random_sign_sum(mu, &mut rng))
                        .sum::<u64>()
                })
                .sum::<u64>()
        })
        .sum();
    let value = total as f64 / (trials as f64 * partition.m() as f64);
    Ok(RademacherEstimate {
        method: EstimateMethod::MonteCarlo,
        value,
        trials: Some(trials),
        delta: Some(delta),
        half_width: Some(hoeffding_half_width(trials, delta)),
    })
}

pub fn hoeffding_half_width(trials: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * trials as f64)).sqrt()
}

/// `|sigma_1 + ... + sigma_n|` for fresh uniform signs: with `k` of the `n`
/// random bits set, the sum is `2k - n`.
fn abs_random_sign_sum(n: usize, rng: &mut impl RngCore) -> u64 {
    let mut ones = 0u64;
    let mut left = n;
    while left >= 64 {
        ones += u64::from(rng.next_u64().count_ones());
        left -= 64;
    }
    if left > 0 {
        let mask = (1u64 << left) - 1;
        ones += u64::from((rng.next_u64() & mask).count_ones());
    }
    (2 * ones).abs_diff(n as u64)
}
