//! Resupply lead-time laws and expectations over them.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{GaussLaguerre, GaussLegendre};

pub const LEGENDRE_NODES: usize = 32;
pub const LAGUERRE_NODES: usize = 64;

/// Probability law of a resupply duration, in days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LeadTimeDistribution {
    /// Weighted mixture of uniform laws on ordered, abutting segments.
    MixtureOfUniforms {
        weights: Vec<f64>,
        segments: Vec<(f64, f64)>,
    },
    /// `shift + Exp(mean)`.
    ShiftedExponential { shift_days: f64, mean_days: f64 },
}

impl LeadTimeDistribution {
    pub fn mixture(weights: Vec<f64>, segments: Vec<(f64, f64)>) -> Result<Self> {
        if weights.is_empty() || weights.len() != segments.len() {
            return Err(invalid(
                "weights",
                format!("{} weights for {} segments", weights.len(), segments.len()),
            ));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(invalid("weights", "must be non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid("weights", format!("must sum to 1, got {total}")));
        }
        for (i, &(lo, hi)) in segments.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo) {
                return Err(invalid("segments", format!("segment {i} = [{lo}, {hi}] is not a valid interval")));
            }
            if i > 0 && lo < segments[i - 1].1 - 1e-9 * hi.abs().max(1.0) {
                return Err(invalid("segments", format!("segment {i} overlaps its predecessor")));
            }
        }
        Ok(Self::MixtureOfUniforms { weights, segments })
    }

    pub fn shifted_exponential(shift_days: f64, mean_days: f64) -> Result<Self> {
        if !(shift_days.is_finite() && shift_days >= 0.0) {
            return Err(invalid("shift_days", format!("must be >= 0, got {shift_days}")));
        }
        if !(mean_days.is_finite() && mean_days > 0.0) {
            return Err(invalid("mean_days", format!("must be > 0, got {mean_days}")));
        }
        Ok(Self::ShiftedExponential {
            shift_days,
            mean_days,
        })
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::MixtureOfUniforms { weights, segments } => weights
                .iter()
                .zip(segments)
                .map(|(w, (lo, hi))| w * 0.5 * (lo + hi))
                .sum(),
            Self::ShiftedExponential {
                shift_days,
                mean_days,
            } => shift_days + mean_days,
        }
    }

    pub fn pdf(&self, t: f64) -> f64 {
        match self {
            Self::MixtureOfUniforms { weights, segments } => weights
                .iter()
                .zip(segments)
                .filter(|(_, (lo, hi))| t >= *lo && t <= *hi)
                .map(|(w, (lo, hi))| w / (hi - lo))
                .sum(),
            Self::ShiftedExponential {
                shift_days,
                mean_days,
            } => {
                if t < *shift_days {
                    0.0
                } else {
                    (-(t - shift_days) / mean_days).exp() / mean_days
                }
            }
        }
    }

    /// `E[g(T)]` by fixed-order Gauss quadrature: Gauss-Legendre on each
    /// uniform segment, Gauss-Laguerre past the exponential shift.
    pub fn expect<F: FnMut(f64) -> f64>(&self, mut g: F) -> Result<f64> {
        let value = match self {
            Self::MixtureOfUniforms { weights, segments } => {
                let gl = GaussLegendre::new(LEGENDRE_NODES)?;
                let mut acc = 0.0;
                for (w, &(lo, hi)) in weights.iter().zip(segments) {
                    if *w == 0.0 {
                        continue;
                    }
                    acc += w * gl.integrate(lo, hi, &mut g) / (hi - lo);
                }
                acc
            }
            Self::ShiftedExponential {
                shift_days,
                mean_days,
            } => {
                let lag = GaussLaguerre::new(LAGUERRE_NODES)?;
                lag.integrate(|x| g(shift_days + mean_days * x))
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Quadrature(format!("expectation evaluated to {value}")))
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::MixtureOfUniforms { weights, segments } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut idx = segments.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        idx = i;
                        break;
                    }
                }
                let (lo, hi) = segments[idx];
                rng.random_range(lo..hi)
            }
            Self::ShiftedExponential {
                shift_days,
                mean_days,
            } => {
                let exp = Exp::new(1.0 / mean_days).expect("validated positive mean");
                shift_days + exp.sample(rng)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shifted_exponential_mean_and_support() {
        let d = LeadTimeDistribution::shifted_exponential(90.0, 66.7).unwrap();
        assert_relative_eq!(d.mean(), 156.7);
        assert_eq!(d.pdf(89.9), 0.0);
        assert!(d.pdf(90.0) > 0.0);
        assert_relative_eq!(d.expect(|t| t).unwrap(), 156.7, max_relative = 1e-12);
        let d0 = LeadTimeDistribution::shifted_exponential(0.0, 66.7).unwrap();
        assert_relative_eq!(d0.mean(), 66.7);
    }

    #[test]
    fn mixture_expectation_matches_midpoints() {
        let d = LeadTimeDistribution::mixture(vec![0.7, 0.2, 0.1], vec![(1.0, 3.0), (3.0, 5.0), (5.0, 7.0)]).unwrap();
        assert_relative_eq!(d.mean(), 0.7 * 2.0 + 0.2 * 4.0 + 0.1 * 6.0, max_relative = 1e-14);
        assert_relative_eq!(d.expect(|t| t).unwrap(), d.mean(), max_relative = 1e-13);
        assert_relative_eq!(d.expect(|_| 1.0).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn mixture_validation() {
        assert!(LeadTimeDistribution::mixture(vec![0.5, 0.4], vec![(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(LeadTimeDistribution::mixture(vec![0.5, 0.5], vec![(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(LeadTimeDistribution::mixture(vec![1.0], vec![(2.0, 1.0)]).is_err());
        assert!(LeadTimeDistribution::shifted_exponential(1.0, 0.0).is_err());
    }

    #[test]
    fn sampling_reproduces_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = LeadTimeDistribution::mixture(vec![0.9, 0.09, 0.01], vec![(0.0, 10.0), (10.0, 20.0), (20.0, 30.0)]).unwrap();
        let n = 200_000;
        let m: f64 = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((m - d.mean()).abs() < 0.05);
        let e = LeadTimeDistribution::shifted_exponential(90.0, 66.7).unwrap();
        let m: f64 = (0..n).map(|_| e.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((m - 156.7).abs() < 0.6);
    }
}
