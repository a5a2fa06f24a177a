//! One function per subcommand, each producing an [`Outcome`].

use qsimpson::bound::{ell_table, identities_from, ratios_and_s_prime, CaseSplit};
use qsimpson::classical::{
    classical_rates, classical_s, distribution_stream, embed_commuting, verify_convexity,
    ClassicalDistribution,
};
use qsimpson::construction::{build_paper_scenario, family_s, FamilyParams};
use qsimpson::engine::{
    classicality_check, conditional_rates, rate_intervals_disjoint, simpson_statistics,
};
use qsimpson::optimizer::{
    optimize_family, optimize_general, sweep_family, BestParams, Curve, FamilyConfig, FamilySearch,
    GeneralConfig, OptimizationReport, ORACLE_TOL,
};
use qsimpson::{MeasurementScenario, RateTable};

use crate::report::{Cell, Report};
use crate::scenario_file::{parse_with_residuals, serialize_scenario};
use crate::{CliError, ExportFamily, Family, Mode, OptimizeArgs, Outcome, Search};

/// Commutator norms below this count as commuting.
const COMMUTE_TOL: f64 = 1e-10;
/// Slack allowed on `|S| ≤ 1` and the convexity identity for classical scenarios.
const CLASSICAL_TOL: f64 = 1e-12;
/// Convexity residuals from the engine on commuting scenarios carry rounding
/// from the projections, so they get a looser check than the direct oracle.
const ENGINE_CONVEXITY_TOL: f64 = 1e-10;

impl Family {
    fn curve(self) -> Curve {
        match self {
            Family::Q1 => Curve::Q1,
            Family::Q2 => Curve::Q2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::Q1 => "q1",
            Family::Q2 => "q2",
        }
    }
}

fn family_params(family: Family, epsilon: f64) -> Result<FamilyParams, CliError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(qsimpson::Error::InvalidEpsilon(epsilon).into());
    }
    Ok(family.curve().params(epsilon)?)
}

const RATE_COLUMNS: [&str; 10] = [
    "r_t",
    "r_c",
    "rf_t",
    "rm_t",
    "rf_c",
    "rm_c",
    "frac_f_given_t",
    "frac_m_given_t",
    "frac_f_given_u",
    "frac_m_given_u",
];

fn rate_cells(r: &RateTable) -> [Option<f64>; 10] {
    [
        r.r_t,
        r.r_c,
        r.rf_t,
        r.rm_t,
        r.rf_c,
        r.rm_c,
        r.frac_f_given_t,
        r.frac_m_given_t,
        r.frac_f_given_u,
        r.frac_m_given_u,
    ]
}

/// Columns shared by `eval` and `paper`, and the invariant failures found.
fn evaluation_columns(scenario: &MeasurementScenario) -> (Vec<(String, Cell)>, Vec<String>) {
    let rates = conditional_rates(scenario);
    let stats = simpson_statistics(&rates).ok();
    let convexity = rates.convexity_residuals().ok();
    let disjoint = rate_intervals_disjoint(&rates).ok();
    let comm = classicality_check(scenario, COMMUTE_TOL);

    let mut cols: Vec<(String, Cell)> = RATE_COLUMNS
        .iter()
        .zip(rate_cells(&rates))
        .map(|(k, v)| (k.to_string(), Cell::opt(v)))
        .collect();
    cols.extend([
        ("d_t".into(), Cell::opt(stats.map(|s| s.d_t))),
        ("d_c".into(), Cell::opt(stats.map(|s| s.d_c))),
        ("s".into(), Cell::opt(stats.map(|s| s.s))),
        (
            "convexity_treated".into(),
            Cell::opt(convexity.map(|c| c.treated)),
        ),
        (
            "convexity_untreated".into(),
            Cell::opt(convexity.map(|c| c.untreated)),
        ),
        (
            "intervals_disjoint".into(),
            disjoint.map_or(Cell::Missing, Cell::Bool),
        ),
        (
            "commutator_gender_treatment".into(),
            comm.gender_treatment.into(),
        ),
        ("commutator_gender_result".into(), comm.gender_result.into()),
        (
            "commutator_treatment_result".into(),
            comm.treatment_result.into(),
        ),
        ("classical".into(), comm.classical.into()),
    ]);

    let mut failures = Vec::new();
    if let Some(st) = stats {
        if st.s.abs() >= 2.0 {
            failures.push(format!("|S| = {} is not below 2", st.s.abs()));
        }
        if comm.classical && st.s.abs() > 1.0 + CLASSICAL_TOL {
            failures.push(format!("commuting scenario has |S| = {} > 1", st.s.abs()));
        }
    }
    if let (true, Some(c)) = (comm.classical, convexity) {
        let worst = c.treated.abs().max(c.untreated.abs());
        if worst > ENGINE_CONVEXITY_TOL {
            failures.push(format!(
                "commuting scenario has convexity residual {worst:e}"
            ));
        }
    }
    (cols, failures)
}

pub fn eval(text: &str) -> Result<Outcome, CliError> {
    let (scenario, residuals) = parse_with_residuals(text)?;
    let (cols, failures) = evaluation_columns(&scenario);
    let mut verbose = vec![format!("state norm {}", residuals.state_norm)];
    for (name, h, i, c) in residuals.projectors {
        let mut line = format!("{name}: hermiticity residual {h:e}, idempotence residual {i:e}");
        if let Some(c) = c {
            line.push_str(&format!(", complement residual {c:e}"));
        }
        verbose.push(line);
    }
    Ok(Outcome {
        report: Report::single(cols),
        verbose,
        failures,
        ..Outcome::default()
    })
}

pub fn paper(family: Family, epsilon: f64) -> Result<Outcome, CliError> {
    let params = family_params(family, epsilon)?;
    let scenario = build_paper_scenario(params)?;
    let (cols, mut failures) = evaluation_columns(&scenario);
    let oracle = family_s(params)?;
    let engine_s = simpson_statistics(&conditional_rates(&scenario))
        .ok()
        .map(|s| s.s);
    if let Some(s) = engine_s {
        if (s - oracle).abs() > ORACLE_TOL {
            failures.push(format!(
                "engine S = {s} disagrees with closed form {oracle}"
            ));
        }
    }
    let mut all: Vec<(String, Cell)> = vec![
        ("family".into(), family.name().into()),
        ("epsilon".into(), epsilon.into()),
        ("p".into(), params.p().into()),
        ("q".into(), params.q().into()),
    ];
    all.extend(cols);
    all.push(("s_closed_form".into(), oracle.into()));
    Ok(Outcome {
        report: Report::single(all),
        failures,
        ..Outcome::default()
    })
}

/// `steps` values from `start` to `end`, equally spaced in `log ε`.
pub fn geometric_grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let ratio = end / start;
            (0..n)
                .map(|i| match i {
                    0 => start,
                    i if i == n - 1 => end,
                    i => start * ratio.powf(i as f64 / (n - 1) as f64),
                })
                .collect()
        }
    }
}

pub fn sweep(family: Family, start: f64, end: f64, steps: usize) -> Result<Outcome, CliError> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let rows = sweep_family(&geometric_grid(start, end, steps), family.curve())?;
    let mut report = Report::new(["epsilon", "s", "two_minus_two_eps", "margin"]);
    let mut failures = Vec::new();
    for r in rows {
        if r.margin <= 0.0 {
            failures.push(format!(
                "|S| = {} is not below 2 at epsilon = {}",
                r.s.abs(),
                r.epsilon
            ));
        }
        report.push(vec![
            r.epsilon.into(),
            r.s.into(),
            r.reference.into(),
            r.margin.into(),
        ]);
    }
    Ok(Outcome {
        report,
        failures,
        ..Outcome::default()
    })
}

pub fn optimize(args: &OptimizeArgs) -> Result<Outcome, CliError> {
    let result = match args.mode {
        Mode::Family => {
            let search = match args.search {
                Search::Curve => FamilySearch::Curve {
                    points: args.points,
                },
                Search::Grid => FamilySearch::Grid {
                    points: args.points,
                },
            };
            optimize_family(&FamilyConfig {
                floor: args.floor,
                search,
            })?
        }
        Mode::General => optimize_general(&GeneralConfig {
            dim: args.dim,
            ranks: args.ranks,
            seed: args.seed,
            restarts: args.restarts,
            iters: args.iters,
        })?,
    };
    Ok(optimization_outcome(&result))
}

fn optimization_outcome(r: &OptimizationReport) -> Outcome {
    let mut report = Report::new(["iteration", "best_s"]);
    for &(i, s) in &r.trace {
        report.push(vec![i.into(), s.into()]);
    }
    let mut notes = vec![
        format!("best_s {}", r.best_s),
        format!("margin {}", 2.0 - r.best_s.abs()),
        format!("evaluations {}", r.evaluations),
        format!("seed {}", r.seed),
        format!("violations {}", r.violations),
    ];
    match &r.best_params {
        BestParams::Family(p) => notes.push(format!("best p {} q {}", p.p(), p.q())),
        BestParams::General(g) => {
            let [a, b, c] = g.ranks();
            notes.push(format!("dim {} ranks {a},{b},{c}", g.dim()));
            let params: Vec<String> = g.params().iter().map(|x| format!("{x:?}")).collect();
            notes.push(format!("best params [{}]", params.join(", ")));
        }
    }
    let mut failures = Vec::new();
    if r.violations > 0 {
        failures.push(format!(
            "{} evaluated scenarios broke the quantum bound checks",
            r.violations
        ));
    }
    if r.best_s.abs() >= 2.0 {
        failures.push(format!("best |S| = {} is not below 2", r.best_s.abs()));
    }
    Outcome {
        report,
        notes,
        failures,
        ..Outcome::default()
    }
}

fn rate_deviation(a: &RateTable, b: &RateTable) -> f64 {
    rate_cells(a)
        .iter()
        .zip(rate_cells(b))
        .map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) => (x - y).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

pub fn classical(samples: usize, seed: u64) -> Result<Outcome, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut max_s = 0.0f64;
    let mut max_treated = 0.0f64;
    let mut max_untreated = 0.0f64;
    let mut max_dev = 0.0f64;
    let mut undefined = 0usize;
    for dist in distribution_stream(seed).take(samples) {
        match (classical_s(&dist), verify_convexity(&dist)) {
            (Ok(s), Ok(c)) => {
                max_s = max_s.max(s.abs());
                max_treated = max_treated.max(c.treated.abs());
                max_untreated = max_untreated.max(c.untreated.abs());
            }
            _ => undefined += 1,
        }
        let engine = conditional_rates(&embed_commuting(&dist));
        max_dev = max_dev.max(rate_deviation(&engine, &classical_rates(&dist)));
    }

    let mut failures = Vec::new();
    if max_s > 1.0 + CLASSICAL_TOL {
        failures.push(format!("max |S| = {max_s} exceeds 1"));
    }
    let worst = max_treated.max(max_untreated);
    if worst > CLASSICAL_TOL {
        failures.push(format!(
            "convexity residual {worst:e} exceeds {CLASSICAL_TOL:e}"
        ));
    }
    if max_dev > CLASSICAL_TOL {
        failures.push(format!("engine and classical oracle differ by {max_dev:e}"));
    }
    Ok(Outcome {
        report: Report::single([
            ("samples", Cell::from(samples)),
            ("seed", Cell::from(seed)),
            ("max_abs_s", max_s.into()),
            ("max_convexity_treated", max_treated.into()),
            ("max_convexity_untreated", max_untreated.into()),
            ("max_engine_deviation", max_dev.into()),
            ("undefined", undefined.into()),
        ]),
        failures,
        ..Outcome::default()
    })
}

fn bound_outcome(scenario: &MeasurementScenario) -> Outcome {
    let l = ell_table(scenario);
    let (ratios, s_prime) = ratios_and_s_prime(&l);
    let ids = identities_from(&l);
    let s = simpson_statistics(&conditional_rates(scenario))
        .ok()
        .map(|st| st.s);
    let holds = s.is_none_or(|s| s.abs() < 2.0) && s_prime < 5.0;
    let case = match ids.case {
        CaseSplit::Boundary => "boundary",
        CaseSplit::TreatedHolds => "treated",
        CaseSplit::UntreatedHolds => "untreated",
        CaseSplit::Neither => "neither",
    };

    let mut cols: Vec<(&str, Cell)> = vec![
        ("l_atf", l.atf.into()),
        ("l_dtf", l.dtf.into()),
        ("l_atm", l.atm.into()),
        ("l_dtm", l.dtm.into()),
        ("l_auf", l.auf.into()),
        ("l_duf", l.duf.into()),
        ("l_aum", l.aum.into()),
        ("l_dum", l.dum.into()),
        ("l_at", l.at.into()),
        ("l_dt", l.dt.into()),
        ("l_au", l.au.into()),
        ("l_du", l.du.into()),
    ];
    let names = ["alpha", "alpha_f", "alpha_m", "beta", "beta_f", "beta_m"];
    cols.extend(
        names
            .iter()
            .zip(ratios.as_array())
            .map(|(k, v)| (*k, Cell::Num(v))),
    );
    cols.extend([
        ("s_prime", s_prime.into()),
        ("s", Cell::opt(s)),
        ("triangle_treated", ids.triangle_treated.into()),
        ("triangle_untreated", ids.triangle_untreated.into()),
        ("master_residual", ids.master_residual.into()),
        ("case", case.into()),
        ("treated_margin", Cell::opt(ids.treated_margin)),
        ("untreated_margin", Cell::opt(ids.untreated_margin)),
        ("margin", Cell::opt(s.map(|s| 2.0 - s.abs()))),
        ("holds", holds.into()),
    ]);

    let mut failures = Vec::new();
    if !ids.passes() {
        failures.push(format!(
            "identity check failed: triangle slacks {:e}, {:e}; master residual {:e}; case {case}",
            ids.triangle_treated, ids.triangle_untreated, ids.master_residual
        ));
    }
    if !holds {
        failures.push(format!("bound does not hold: S' = {s_prime}"));
    }
    if let Some(s) = s {
        if (s_prime - (s + 3.0)).abs() > ORACLE_TOL {
            failures.push(format!("S' = {s_prime} differs from S + 3 = {}", s + 3.0));
        }
    }
    Outcome {
        report: Report::single(cols),
        failures,
        ..Outcome::default()
    }
}

pub fn bound_file(text: &str) -> Result<Outcome, CliError> {
    let (scenario, _) = parse_with_residuals(text)?;
    Ok(bound_outcome(&scenario))
}

pub fn bound_family(family: Family, epsilon: f64) -> Result<Outcome, CliError> {
    let scenario = build_paper_scenario(family_params(family, epsilon)?)?;
    Ok(bound_outcome(&scenario))
}

pub fn export(family: ExportFamily, epsilon: Option<f64>) -> Result<Outcome, CliError> {
    let scenario = match (family, epsilon) {
        (ExportFamily::Uniform, None) => embed_commuting(&ClassicalDistribution::uniform()),
        (ExportFamily::Uniform, Some(_)) => {
            return Err(CliError::Usage(
                "--epsilon does not apply to the uniform scenario".into(),
            ))
        }
        (_, None) => {
            return Err(CliError::Usage(
                "--epsilon is required for q1 and q2".into(),
            ))
        }
        (ExportFamily::Q1, Some(eps)) => build_paper_scenario(family_params(Family::Q1, eps)?)?,
        (ExportFamily::Q2, Some(eps)) => build_paper_scenario(family_params(Family::Q2, eps)?)?,
    };
    Ok(Outcome {
        raw: Some(serialize_scenario(&scenario)),
        ..Outcome::default()
    })
}
