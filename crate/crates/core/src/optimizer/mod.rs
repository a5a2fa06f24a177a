//! Searches for large `|S|`: over the explicit `(p, q)` family, and over
//! general scenarios in dimension `n` via direct search on the rotation
//! parameterization.
//!
//! Every scenario evaluated is also checked against `|S| < 2` and `S' < 5`;
//! counterexamples are counted in the report rather than silently dropped.

pub mod nelder_mead;
pub mod param;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bound::{ell_table_from_norms, ratios_and_s_prime};
use crate::construction::{build_paper_scenario, family_s, FamilyParams};
use crate::engine::{
    conditional_rates, projected_norms, simpson_statistics, JointProbabilities, RateTable,
};
use crate::error::{Error, Result};
use crate::linalg::VALIDATION_TOL;

pub use nelder_mead::{NelderMeadConfig, NelderMeadResult};
pub use param::ScenarioParameterization;

/// Scenarios whose conditioning events fall below this score `−∞`.
pub const FEASIBILITY_THRESHOLD: f64 = 1e-9;
/// Agreement required between the engine and the closed-form family value.
pub const ORACLE_TOL: f64 = 1e-10;
/// Release builds re-validate one decoded scenario in this many.
const VALIDATION_STRIDE: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    /// `p = 1, q = ε`.
    Q1,
    /// `p = ε, q = ε²`.
    Q2,
}

impl Curve {
    pub fn params(self, eps: f64) -> Result<FamilyParams> {
        match self {
            Curve::Q1 => FamilyParams::q1(eps),
            Curve::Q2 => FamilyParams::q2(eps),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub s: f64,
    /// `2 − 2ε`.
    pub reference: f64,
    /// `2 − |S|`.
    pub margin: f64,
}

/// Engine value of `S` on the family, cross-checked against the closed form.
pub fn family_point(params: FamilyParams) -> Result<f64> {
    let scenario = build_paper_scenario(params)?;
    let s = simpson_statistics(&conditional_rates(&scenario))?.s;
    let oracle = family_s(params)?;
    if (s - oracle).abs() > ORACLE_TOL {
        return Err(Error::OracleMismatch {
            what: format!("S at p = {}, q = {}", params.p(), params.q()),
            engine: s,
            oracle,
        });
    }
    Ok(s)
}

pub fn sweep_family(eps_values: &[f64], curve: Curve) -> Result<Vec<SweepRow>> {
    eps_values
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(Error::InvalidEpsilon(eps));
            }
            let s = family_point(curve.params(eps)?)?;
            Ok(SweepRow {
                epsilon: eps,
                s,
                reference: 2.0 - 2.0 * eps,
                margin: 2.0 - s.abs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySearch {
    /// `q = p²` with `points` log-spaced values of `p` in `[floor, 1]`.
    Curve { points: usize },
    /// `points × points` uniform grid over `[floor, 1]²`.
    Grid { points: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyConfig {
    pub floor: f64,
    pub search: FamilySearch,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BestParams {
    Family(FamilyParams),
    General(ScenarioParameterization),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport {
    pub best_s: f64,
    pub best_params: BestParams,
    pub evaluations: usize,
    pub seed: u64,
    /// `(iteration, best so far)`; for general runs one entry per restart.
    pub trace: Vec<(usize, f64)>,
    /// Evaluated scenarios that broke `|S| < 2`, `S' < 5`, `S' = S + 3` or
    /// projector validity.
    pub violations: usize,
}

pub fn optimize_family(cfg: &FamilyConfig) -> Result<OptimizationReport> {
    if !(cfg.floor > 0.0 && cfg.floor <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "floor {} outside (0, 1]",
            cfg.floor
        )));
    }
    let points: Vec<(f64, f64)> = match cfg.search {
        FamilySearch::Curve { points } => {
            let n = points.max(2);
            let (lo, hi) = (cfg.floor.ln(), 0.0);
            (0..n)
                .map(|i| {
                    let p = if i == 0 {
                        cfg.floor
                    } else {
                        (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp().min(1.0)
                    };
                    (p, p * p)
                })
                .collect()
        }
        FamilySearch::Grid { points } => {
            let n = points.max(2);
            let axis: Vec<f64> = (0..n)
                .map(|i| cfg.floor + (1.0 - cfg.floor) * i as f64 / (n - 1) as f64)
                .collect();
            axis.iter()
                .flat_map(|&p| axis.iter().map(move |&q| (p, q)))
                .collect()
        }
    };

    let mut best: Option<(f64, FamilyParams)> = None;
    let mut trace = Vec::new();
    let mut violations = 0;
    for (i, &(p, q)) in points.iter().enumerate() {
        let params = FamilyParams::new(p, q)?;
        let s = family_point(params)?;
        if s.abs() >= 2.0 {
            violations += 1;
        }
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, params));
            trace.push((i, s));
        }
    }
    let (best_s, params) = best.expect("at least two points searched");
    Ok(OptimizationReport {
        best_s,
        best_params: BestParams::Family(params),
        evaluations: points.len(),
        seed: 0,
        trace,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralConfig {
    pub dim: usize,
    pub ranks: [usize; 3],
    pub seed: u64,
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub iters: usize,
}

/// Outcome of scoring one parameter vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    /// `|S|`, or `−∞` when a conditioning event is below the feasibility threshold.
    pub score: f64,
    pub s: Option<f64>,
    pub s_prime: Option<f64>,
    pub violation: bool,
}

/// Decodes and scores one point. `validate` re-checks the decoded projectors.
pub fn evaluate(dim: usize, ranks: [usize; 3], params: &[f64], validate: bool) -> Evaluation {
    let scenario = param::decode(dim, ranks, params);
    let mut violation = false;
    if validate {
        for m in [&scenario.gender, &scenario.treatment, &scenario.result] {
            let (h, i) = m.first().residuals();
            let c = m
                .first()
                .complementarity_residual(m.second())
                .unwrap_or(f64::INFINITY);
            violation |= h > VALIDATION_TOL || i > VALIDATION_TOL || c > VALIDATION_TOL;
        }
    }
    let norms = projected_norms(&scenario);
    let joint = JointProbabilities::from_norms(&norms);
    let t = &joint.triple;
    let p = &joint.pair;
    let conditioning = [
        p[0][0] + p[0][1],
        p[1][0] + p[1][1],
        t[0][0][0] + t[0][0][1],
        t[1][0][0] + t[1][0][1],
        t[0][1][0] + t[0][1][1],
        t[1][1][0] + t[1][1][1],
    ];
    if conditioning.iter().any(|&c| c < FEASIBILITY_THRESHOLD) {
        return Evaluation {
            score: f64::NEG_INFINITY,
            s: None,
            s_prime: None,
            violation,
        };
    }
    let s = simpson_statistics(&RateTable::from_joint(&joint))
        .expect("conditioning events checked")
        .s;
    let (_, s_prime) = ratios_and_s_prime(&ell_table_from_norms(&norms));
    violation |= s.abs() >= 2.0 || s_prime >= 5.0 || (s_prime - (s + 3.0)).abs() > ORACLE_TOL;
    Evaluation {
        score: s.abs(),
        s: Some(s),
        s_prime: Some(s_prime),
        violation,
    }
}

/// Uniform angles in `[0, 2π)` for every parameter.
pub fn random_params(dim: usize, ranks: [usize; 3], rng: &mut impl Rng) -> Vec<f64> {
    (0..param::param_count(dim, ranks))
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect()
}

/// RNG for restart `index` of a run seeded with `seed`.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

struct RestartOutcome {
    best: f64,
    params: Vec<f64>,
    evals: usize,
    violations: usize,
}

fn run_restart(cfg: &GeneralConfig, index: usize) -> RestartOutcome {
    let mut rng = restart_rng(cfg.seed, index);
    let x0 = random_params(cfg.dim, cfg.ranks, &mut rng);
    let mut violations = 0;
    let mut count = 0usize;
    let objective = |x: &[f64]| {
        count += 1;
        let validate = cfg!(debug_assertions) || count.is_multiple_of(VALIDATION_STRIDE);
        let e = evaluate(cfg.dim, cfg.ranks, x, validate);
        if e.violation {
            violations += 1;
        }
        -e.score
    };
    let nm = NelderMeadConfig {
        max_evals: cfg.iters.max(1),
        ..NelderMeadConfig::default()
    };
    let r = nelder_mead::minimize(objective, &x0, &nm);
    RestartOutcome {
        best: -r.f,
        params: r.x,
        evals: r.evals,
        violations,
    }
}

pub fn optimize_general(cfg: &GeneralConfig) -> Result<OptimizationReport> {
    param::validate_shape(cfg.dim, cfg.ranks)?;
    if cfg.restarts == 0 {
        return Err(Error::InvalidConfig("at least one restart required".into()));
    }
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(cfg, i))
        .collect();

    // Best by value; ties go to the lowest restart index.
    let mut best_idx = 0;
    let mut trace = Vec::with_capacity(outcomes.len());
    for (i, o) in outcomes.iter().enumerate() {
        if o.best > outcomes[best_idx].best {
            best_idx = i;
        }
        trace.push((i, outcomes[best_idx].best));
    }
    let best = &outcomes[best_idx];
    Ok(OptimizationReport {
        best_s: best.best,
        best_params: BestParams::General(ScenarioParameterization::new(
            cfg.dim,
            cfg.ranks,
            best.params.clone(),
        )?),
        evaluations: outcomes.iter().map(|o| o.evals).sum(),
        seed: cfg.seed,
        trace,
        violations: outcomes.iter().map(|o| o.violations).sum(),
    })
}
