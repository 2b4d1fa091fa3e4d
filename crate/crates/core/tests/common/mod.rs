//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use constellation_spares::leadtime::LeadTimeDistribution;
use constellation_spares::{Scenario, SpareStrategy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

pub fn reference_strategy() -> SpareStrategy {
    SpareStrategy {
        n_parking: 3,
        h_parking_km: 792.3,
        q_plane: 4,
        s_plane: 3,
        k_q_parking: 8,
        k_s_parking: 8,
    }
}

pub fn case_study() -> Scenario {
    Scenario::case_study()
}

/// `Σ_{k>s} (k - s) P(D = k)` for `D ~ Poisson(m)` by forward recursion on
/// the pmf, stopped once a term drops below 1e-15 of the running total past
/// the mode, and never beyond `s + 40√m + 40`.
pub fn tail_sum(s: u32, m: f64) -> f64 {
    let cap = (s as f64 + 40.0 * m.sqrt() + 40.0).ceil() as u64;
    let mut pmf = (-m).exp();
    let mut total = 0.0;
    for k in 1..=cap {
        pmf *= m / k as f64;
        if k > s as u64 {
            let term = (k - s as u64) as f64 * pmf;
            total += term;
            if total > 0.0 && term < 1e-15 * total && (k as f64) > m {
                break;
            }
        }
    }
    total
}

/// Probability that orbit `i` (0-based, ranked by closeness) is the first
/// available one, summed over all `2^n` availability patterns.
pub fn enumerate_supply(p_av: f64, n: u32) -> Vec<f64> {
    let mut out = vec![0.0; n as usize];
    for mask in 0u32..(1 << n) {
        let prob: f64 = (0..n)
            .map(|j| if mask & (1 << j) != 0 { p_av } else { 1.0 - p_av })
            .product();
        if mask != 0 {
            out[mask.trailing_zeros() as usize] += prob;
        }
    }
    out
}

/// Monte Carlo `E[(D - s)+]` with `D ~ Poisson(rate·T)` and `T` drawn from `lt`.
pub fn mc_expected_shortage(lt: &LeadTimeDistribution, s: u32, rate: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..samples {
        let tau = lt.sample(&mut rng);
        let d = Poisson::new(rate * tau).expect("positive mean").sample(&mut rng);
        total += (d - s as f64).max(0.0);
    }
    total / samples as f64
}

/// Two-impulse coplanar transfer by the vis-viva equation, km/s.
pub fn vis_viva_delta_v(r1: f64, r2: f64, mu: f64) -> f64 {
    let a = 0.5 * (r1 + r2);
    let v1 = (mu / r1).sqrt();
    let v2 = (mu / r2).sqrt();
    let vp = (mu * (2.0 / r1 - 1.0 / a)).sqrt();
    let va = (mu * (2.0 / r2 - 1.0 / a)).sqrt();
    (vp - v1) + (v2 - va)
}

/// Kolmogorov-Smirnov distance of a sample from `U[lo, hi]`.
pub fn ks_uniform(samples: &[f64], lo: f64, hi: f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at level 0.01.
pub fn ks_critical_001(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}
