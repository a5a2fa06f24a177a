//! Classical joint distributions over `{F,M} × {T,U} × {A,D}`.
//!
//! Rates here are computed straight from the joint table by conditional
//! probability, independently of the quantum engine, so this module doubles
//! as the oracle the engine is checked against on commuting scenarios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::engine::{
    ratio, ConvexityResiduals, MeasurementScenario, RateTable, TwoOutcomeMeasurement,
};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, Projector, StateVector};

/// Probabilities indexed by `4·g + 2·e + r` with F, T, A = 0 and M, U, D = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalDistribution {
    probs: [f64; 8],
}

pub fn cell(g: usize, e: usize, r: usize) -> usize {
    4 * g + 2 * e + r
}

impl ClassicalDistribution {
    /// Normalizes nonnegative weights; all-zero or negative input is rejected.
    pub fn from_weights(weights: [f64; 8]) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::NonFinite(i));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            probs: weights.map(|w| w / total),
        })
    }

    pub fn uniform() -> Self {
        Self { probs: [0.125; 8] }
    }

    pub fn point_mass(g: usize, e: usize, r: usize) -> Self {
        let mut probs = [0.0; 8];
        probs[cell(g, e, r)] = 1.0;
        Self { probs }
    }

    /// Joint distribution with prescribed gender mix per arm, arm sizes and
    /// subgroup survival rates. `rates[g][e]` is `Pr(A|g,e)`.
    pub fn from_subgroups(
        frac_female: [f64; 2],
        arm: [f64; 2],
        rates: [[f64; 2]; 2],
    ) -> Result<Self> {
        let mut w = [0.0; 8];
        for g in 0..2 {
            for e in 0..2 {
                let share = if g == 0 {
                    frac_female[e]
                } else {
                    1.0 - frac_female[e]
                };
                let mass = arm[e] * share;
                w[cell(g, e, 0)] = mass * rates[g][e];
                w[cell(g, e, 1)] = mass * (1.0 - rates[g][e]);
            }
        }
        Self::from_weights(w)
    }

    pub fn probs(&self) -> &[f64; 8] {
        &self.probs
    }

    pub fn get(&self, g: usize, e: usize, r: usize) -> f64 {
        self.probs[cell(g, e, r)]
    }
}

/// Eight independent unit exponentials, normalized.
pub fn random_distribution(seed: u64) -> ClassicalDistribution {
    sample_distribution(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_distribution(rng: &mut impl Rng) -> ClassicalDistribution {
    let w: [f64; 8] = std::array::from_fn(|_| Exp1.sample(rng));
    ClassicalDistribution::from_weights(w).expect("exponential draws are positive")
}

/// Endless sequence of distributions drawn from one generator seeded with `seed`.
pub fn distribution_stream(seed: u64) -> impl Iterator<Item = ClassicalDistribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::repeat_with(move || sample_distribution(&mut rng))
}

pub fn classical_rates(dist: &ClassicalDistribution) -> RateTable {
    let p = |g, e, r| dist.get(g, e, r);
    let subgroup = |g, e| p(g, e, 0) + p(g, e, 1);
    let arm = |e| subgroup(0, e) + subgroup(1, e);
    let alive_in_arm = |e| p(0, e, 0) + p(1, e, 0);
    RateTable {
        r_t: ratio(alive_in_arm(0), arm(0)),
        r_c: ratio(alive_in_arm(1), arm(1)),
        rf_t: ratio(p(0, 0, 0), subgroup(0, 0)),
        rm_t: ratio(p(1, 0, 0), subgroup(1, 0)),
        rf_c: ratio(p(0, 1, 0), subgroup(0, 1)),
        rm_c: ratio(p(1, 1, 0), subgroup(1, 1)),
        frac_f_given_t: ratio(subgroup(0, 0), arm(0)),
        frac_m_given_t: ratio(subgroup(1, 0), arm(0)),
        frac_f_given_u: ratio(subgroup(0, 1), arm(1)),
        frac_m_given_u: ratio(subgroup(1, 1), arm(1)),
    }
}

pub fn classical_s(dist: &ClassicalDistribution) -> Result<f64> {
    let r = classical_rates(dist).defined()?;
    Ok((r.rf_t + r.rm_t - r.r_t) - (r.rf_c + r.rm_c - r.r_c))
}

/// Commuting dim-8 scenario: amplitudes `√Pr` on the standard basis and
/// diagonal projectors selecting each label.
pub fn embed_commuting(dist: &ClassicalDistribution) -> MeasurementScenario {
    let state = StateVector::new(
        dist.probs
            .iter()
            .map(|p| Complex64::new(p.sqrt(), 0.0))
            .collect(),
    )
    .expect("probabilities are finite");
    let gender =
        TwoOutcomeMeasurement::from_first(["F", "M"], Projector::diagonal(8, |i| i / 4 == 0));
    let treatment =
        TwoOutcomeMeasurement::from_first(["T", "U"], Projector::diagonal(8, |i| (i / 2) % 2 == 0));
    let result =
        TwoOutcomeMeasurement::from_first(["A", "D"], Projector::diagonal(8, |i| i % 2 == 0));
    MeasurementScenario::new(state, gender, treatment, result).expect("distribution sums to one")
}

pub fn verify_convexity(dist: &ClassicalDistribution) -> Result<ConvexityResiduals> {
    classical_rates(dist).convexity_residuals()
}

/// Exhaustive search over all distributions whose entries are multiples of
/// `1/denominator`. Returns the largest `|S|` among those with every rate
/// defined, and the first maximizer in enumeration order.
pub fn extremal_grid_search(denominator: u32) -> Option<(f64, ClassicalDistribution)> {
    fn rec(
        slot: usize,
        remaining: u32,
        counts: &mut [u32; 8],
        denominator: u32,
        best: &mut Option<(f64, ClassicalDistribution)>,
    ) {
        if slot == 7 {
            counts[7] = remaining;
            let d = ClassicalDistribution {
                probs: counts.map(|c| c as f64 / denominator as f64),
            };
            if let Ok(s) = classical_s(&d) {
                if best.as_ref().is_none_or(|(b, _)| s.abs() > *b) {
                    *best = Some((s.abs(), d));
                }
            }
            return;
        }
        for c in 0..=remaining {
            counts[slot] = c;
            rec(slot + 1, remaining - c, counts, denominator, best);
        }
    }
    let mut best = None;
    rec(0, denominator, &mut [0; 8], denominator, &mut best);
    best
}
