//! Sequential measurement engine.
//!
//! A scenario is a (possibly unnormalized) pure state together with three
//! two-outcome projective measurements: Gender (F/M), Treatment (T/U) and
//! Result (A/D). Two experiments are run on it:
//!
//! * Gender, then Treatment, then Result;
//! * Treatment, then Result (Gender is not measured).
//!
//! Conditional rates such as `R_t = Pr(A|T)` come from the second experiment,
//! subgroup rates such as `R^f_t = Pr(A|F,T)` from the first.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{commutator_norm, Complex64, Projector, StateVector, VALIDATION_TOL};

/// Conditioning events with probability below this leave the rate undefined.
pub const CONDITIONING_THRESHOLD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gender {
    Female,
    Male,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Treatment {
    Treated,
    Untreated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Survival {
    Alive,
    Dead,
}

impl Gender {
    pub const ALL: [Gender; 2] = [Gender::Female, Gender::Male];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Gender::Female => 'F',
            Gender::Male => 'M',
        }
    }
}

impl Treatment {
    pub const ALL: [Treatment; 2] = [Treatment::Treated, Treatment::Untreated];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Treatment::Treated => 'T',
            Treatment::Untreated => 'U',
        }
    }
}

impl Survival {
    pub const ALL: [Survival; 2] = [Survival::Alive, Survival::Dead];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Survival::Alive => 'A',
            Survival::Dead => 'D',
        }
    }
}

/// Two complementary orthogonal projectors with outcome labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoOutcomeMeasurement {
    labels: [String; 2],
    first: Projector,
    second: Projector,
}

impl TwoOutcomeMeasurement {
    /// The second projector is derived as `I − first`.
    pub fn from_first(labels: [&str; 2], first: Projector) -> Self {
        let second = first.complement();
        Self {
            labels: labels.map(str::to_owned),
            first,
            second,
        }
    }

    /// Checks `first + second = I` within `VALIDATION_TOL`.
    pub fn from_pair(labels: [&str; 2], first: Projector, second: Projector) -> Result<Self> {
        let residual = first.complementarity_residual(&second)?;
        if residual > VALIDATION_TOL {
            return Err(Error::NotComplementary {
                measurement: format!("{}/{}", labels[0], labels[1]),
                residual,
            });
        }
        Ok(Self {
            labels: labels.map(str::to_owned),
            first,
            second,
        })
    }

    pub fn labels(&self) -> &[String; 2] {
        &self.labels
    }

    pub fn first(&self) -> &Projector {
        &self.first
    }

    pub fn second(&self) -> &Projector {
        &self.second
    }

    pub fn projector(&self, outcome: usize) -> &Projector {
        match outcome {
            0 => &self.first,
            _ => &self.second,
        }
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }
}

/// `(|φ⟩, G, E, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementScenario {
    state: StateVector,
    pub gender: TwoOutcomeMeasurement,
    pub treatment: TwoOutcomeMeasurement,
    pub result: TwoOutcomeMeasurement,
}

impl MeasurementScenario {
    pub fn new(
        state: StateVector,
        gender: TwoOutcomeMeasurement,
        treatment: TwoOutcomeMeasurement,
        result: TwoOutcomeMeasurement,
    ) -> Result<Self> {
        let dim = state.dim();
        for m in [&gender, &treatment, &result] {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
        }
        if state.norm_sq() <= 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            state,
            gender,
            treatment,
            result,
        })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    /// Same measurements, state multiplied by `c` (which must be nonzero).
    pub fn with_scaled_state(&self, c: Complex64) -> Result<Self> {
        Self::new(
            self.state.scaled(c),
            self.gender.clone(),
            self.treatment.clone(),
            self.result.clone(),
        )
    }
}

/// Unnormalized squared lengths of every projected state: vertices
/// `‖R^r E^e G^g φ‖²` indexed `[g][e][r]`, edges `‖R^r E^e φ‖²` indexed `[e][r]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedNorms {
    pub vertex: [[[f64; 2]; 2]; 2],
    pub edge: [[f64; 2]; 2],
    pub total: f64,
}

pub fn projected_norms(scenario: &MeasurementScenario) -> ProjectedNorms {
    let n = scenario.dim();
    let phi = scenario.state().amps();
    let mut after_g = vec![Complex64::default(); n];
    let mut after_e = vec![Complex64::default(); n];
    let mut after_r = vec![Complex64::default(); n];
    let sq = |v: &[Complex64]| v.iter().map(|a| a.norm_sqr()).sum::<f64>();

    let mut vertex = [[[0.0; 2]; 2]; 2];
    for (g, by_e) in vertex.iter_mut().enumerate() {
        scenario.gender.projector(g).apply_raw(phi, &mut after_g);
        for (e, by_r) in by_e.iter_mut().enumerate() {
            scenario
                .treatment
                .projector(e)
                .apply_raw(&after_g, &mut after_e);
            for (r, v) in by_r.iter_mut().enumerate() {
                scenario
                    .result
                    .projector(r)
                    .apply_raw(&after_e, &mut after_r);
                *v = sq(&after_r);
            }
        }
    }
    let mut edge = [[0.0; 2]; 2];
    for (e, by_r) in edge.iter_mut().enumerate() {
        scenario.treatment.projector(e).apply_raw(phi, &mut after_e);
        for (r, v) in by_r.iter_mut().enumerate() {
            scenario
                .result
                .projector(r)
                .apply_raw(&after_e, &mut after_r);
            *v = sq(&after_r);
        }
    }
    ProjectedNorms {
        vertex,
        edge,
        total: sq(phi),
    }
}

/// Outcome probabilities of both experiments, normalized by `‖φ‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProbabilities {
    /// `Pr(g, e, r)` from the three-measurement experiment, indexed `[g][e][r]`.
    pub triple: [[[f64; 2]; 2]; 2],
    /// `Pr(e, r)` from the experiment without Gender, indexed `[e][r]`.
    pub pair: [[f64; 2]; 2],
}

impl JointProbabilities {
    pub fn of(scenario: &MeasurementScenario) -> Self {
        Self::from_norms(&projected_norms(scenario))
    }

    pub fn from_norms(norms: &ProjectedNorms) -> Self {
        let z = norms.total;
        Self {
            triple: norms.vertex.map(|a| a.map(|b| b.map(|x| x / z))),
            pair: norms.edge.map(|a| a.map(|x| x / z)),
        }
    }

    pub fn get(&self, sel: OutcomeSelection) -> f64 {
        match sel {
            OutcomeSelection::Full(g, e, r) => self.triple[g.index()][e.index()][r.index()],
            OutcomeSelection::WithoutGender(e, r) => self.pair[e.index()][r.index()],
        }
    }
}

/// An outcome tuple of one of the two experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeSelection {
    Full(Gender, Treatment, Survival),
    WithoutGender(Treatment, Survival),
}

impl FromStr for OutcomeSelection {
    type Err = Error;

    /// Parses `"FTA"`-style triples or `"TA"`-style pairs.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidOutcomeLabel(s.to_owned());
        let g = |c: char| match c {
            'F' => Ok(Gender::Female),
            'M' => Ok(Gender::Male),
            _ => Err(bad()),
        };
        let e = |c: char| match c {
            'T' => Ok(Treatment::Treated),
            'U' => Ok(Treatment::Untreated),
            _ => Err(bad()),
        };
        let r = |c: char| match c {
            'A' => Ok(Survival::Alive),
            'D' => Ok(Survival::Dead),
            _ => Err(bad()),
        };
        let chars: Vec<char> = s.chars().collect();
        match chars.as_slice() {
            [a, b, c] => Ok(Self::Full(g(*a)?, e(*b)?, r(*c)?)),
            [b, c] => Ok(Self::WithoutGender(e(*b)?, r(*c)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for OutcomeSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Full(g, e, r) => write!(f, "{}{}{}", g.letter(), e.letter(), r.letter()),
            Self::WithoutGender(e, r) => write!(f, "{}{}", e.letter(), r.letter()),
        }
    }
}

/// `‖R^r E^e G^g φ‖² / ‖φ‖²` or `‖R^r E^e φ‖² / ‖φ‖²`.
pub fn joint_probability(scenario: &MeasurementScenario, sel: OutcomeSelection) -> f64 {
    let n = scenario.dim();
    let mut v = scenario.state().amps().to_vec();
    let mut tmp = vec![Complex64::default(); n];
    let mut step = |p: &Projector, v: &mut Vec<Complex64>| {
        p.apply_raw(v, &mut tmp);
        std::mem::swap(v, &mut tmp);
    };
    let (e, r) = match sel {
        OutcomeSelection::Full(g, e, r) => {
            step(scenario.gender.projector(g.index()), &mut v);
            (e, r)
        }
        OutcomeSelection::WithoutGender(e, r) => (e, r),
    };
    step(scenario.treatment.projector(e.index()), &mut v);
    step(scenario.result.projector(r.index()), &mut v);
    let num: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    num / scenario.state().norm_sq()
}

/// The six conditional survival rates and the gender fractions within each
/// arm. `None` marks a rate whose conditioning event has (numerically)
/// zero probability.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateTable {
    pub r_t: Option<f64>,
    pub r_c: Option<f64>,
    pub rf_t: Option<f64>,
    pub rm_t: Option<f64>,
    pub rf_c: Option<f64>,
    pub rm_c: Option<f64>,
    pub frac_f_given_t: Option<f64>,
    pub frac_m_given_t: Option<f64>,
    pub frac_f_given_u: Option<f64>,
    pub frac_m_given_u: Option<f64>,
}

/// Fully defined rate table, as needed by the reversal statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefinedRates {
    pub r_t: f64,
    pub r_c: f64,
    pub rf_t: f64,
    pub rm_t: f64,
    pub rf_c: f64,
    pub rm_c: f64,
}

pub(crate) fn ratio(num: f64, den: f64) -> Option<f64> {
    (den >= CONDITIONING_THRESHOLD).then(|| num / den)
}

impl RateTable {
    pub fn from_joint(joint: &JointProbabilities) -> Self {
        let t = &joint.triple;
        let p = &joint.pair;
        let arm = |g: usize, e: usize| t[g][e][0] + t[g][e][1];
        let (ft, mt, fu, mu) = (arm(0, 0), arm(1, 0), arm(0, 1), arm(1, 1));
        Self {
            r_t: ratio(p[0][0], p[0][0] + p[0][1]),
            r_c: ratio(p[1][0], p[1][0] + p[1][1]),
            rf_t: ratio(t[0][0][0], ft),
            rm_t: ratio(t[1][0][0], mt),
            rf_c: ratio(t[0][1][0], fu),
            rm_c: ratio(t[1][1][0], mu),
            frac_f_given_t: ratio(ft, ft + mt),
            frac_m_given_t: ratio(mt, ft + mt),
            frac_f_given_u: ratio(fu, fu + mu),
            frac_m_given_u: ratio(mu, fu + mu),
        }
    }

    /// All six rates, or the names of the undefined ones.
    pub fn defined(&self) -> Result<DefinedRates> {
        let fields = [
            ("R_t", self.r_t),
            ("R_c", self.r_c),
            ("R^f_t", self.rf_t),
            ("R^m_t", self.rm_t),
            ("R^f_c", self.rf_c),
            ("R^m_c", self.rm_c),
        ];
        let missing: Vec<&'static str> = fields
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(n, _)| *n)
            .collect();
        if !missing.is_empty() {
            return Err(Error::UndefinedRate(missing));
        }
        let [r_t, r_c, rf_t, rm_t, rf_c, rm_c] = fields.map(|(_, v)| v.unwrap_or_default());
        Ok(DefinedRates {
            r_t,
            r_c,
            rf_t,
            rm_t,
            rf_c,
            rm_c,
        })
    }

    pub fn convexity_residuals(&self) -> Result<ConvexityResiduals> {
        let branch = |r: Option<f64>,
                      rf: Option<f64>,
                      rm: Option<f64>,
                      af: Option<f64>,
                      am: Option<f64>,
                      names: [&'static str; 5]| {
            match (r, rf, rm, af, am) {
                (Some(r), Some(rf), Some(rm), Some(af), Some(am)) => Ok(r - (af * rf + am * rm)),
                _ => Err(Error::UndefinedRate(
                    [r, rf, rm, af, am]
                        .iter()
                        .zip(names)
                        .filter(|(v, _)| v.is_none())
                        .map(|(_, n)| n)
                        .collect(),
                )),
            }
        };
        Ok(ConvexityResiduals {
            treated: branch(
                self.r_t,
                self.rf_t,
                self.rm_t,
                self.frac_f_given_t,
                self.frac_m_given_t,
                ["R_t", "R^f_t", "R^m_t", "Pr(F|T)", "Pr(M|T)"],
            )?,
            untreated: branch(
                self.r_c,
                self.rf_c,
                self.rm_c,
                self.frac_f_given_u,
                self.frac_m_given_u,
                ["R_c", "R^f_c", "R^m_c", "Pr(F|U)", "Pr(M|U)"],
            )?,
        })
    }
}

pub fn conditional_rates(scenario: &MeasurementScenario) -> RateTable {
    RateTable::from_joint(&JointProbabilities::of(scenario))
}

/// `d_t = R^f_t + R^m_t − R_t`, `d_c = R^f_c + R^m_c − R_c`, `S = d_t − d_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpsonStats {
    pub d_t: f64,
    pub d_c: f64,
    pub s: f64,
}

pub fn simpson_statistics(rates: &RateTable) -> Result<SimpsonStats> {
    let r = rates.defined()?;
    let d_t = r.rf_t + r.rm_t - r.r_t;
    let d_c = r.rf_c + r.rm_c - r.r_c;
    Ok(SimpsonStats {
        d_t,
        d_c,
        s: d_t - d_c,
    })
}

/// Departure from `R = Pr(F|arm)·R^f + Pr(M|arm)·R^m` in each arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityResiduals {
    pub treated: f64,
    pub untreated: f64,
}

pub fn convexity_residual(scenario: &MeasurementScenario) -> Result<ConvexityResiduals> {
    conditional_rates(scenario).convexity_residuals()
}

/// Pairwise commutator norms of the three measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalityReport {
    pub gender_treatment: f64,
    pub gender_result: f64,
    pub treatment_result: f64,
    pub classical: bool,
}

pub fn classicality_check(scenario: &MeasurementScenario, tol: f64) -> ClassicalityReport {
    // Dims agree by construction of the scenario.
    let k = |a: &TwoOutcomeMeasurement, b: &TwoOutcomeMeasurement| {
        commutator_norm(a.first(), b.first()).expect("scenario dims agree")
    };
    let gender_treatment = k(&scenario.gender, &scenario.treatment);
    let gender_result = k(&scenario.gender, &scenario.result);
    let treatment_result = k(&scenario.treatment, &scenario.result);
    ClassicalityReport {
        gender_treatment,
        gender_result,
        treatment_result,
        classical: gender_treatment <= tol && gender_result <= tol && treatment_result <= tol,
    }
}

/// True when both treatment subgroup rates lie strictly above both control
/// subgroup rates, or strictly below.
pub fn rate_intervals_disjoint(rates: &RateTable) -> Result<bool> {
    let r = rates.defined()?;
    let (t_lo, t_hi) = (r.rf_t.min(r.rm_t), r.rf_t.max(r.rm_t));
    let (c_lo, c_hi) = (r.rf_c.min(r.rm_c), r.rf_c.max(r.rm_c));
    Ok(t_lo > c_hi || c_lo > t_hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_paper_scenario, FamilyParams};
    use crate::linalg::StateVector;

    fn diagonal_scenario() -> MeasurementScenario {
        let state = StateVector::from_real(&[0.3, 0.5, 0.1, 0.7, 0.2, 0.4, 0.6, 0.25]).unwrap();
        let g = TwoOutcomeMeasurement::from_first(["F", "M"], Projector::diagonal(8, |i| i < 4));
        let e =
            TwoOutcomeMeasurement::from_first(["T", "U"], Projector::diagonal(8, |i| i % 4 < 2));
        let r =
            TwoOutcomeMeasurement::from_first(["A", "D"], Projector::diagonal(8, |i| i % 2 == 0));
        MeasurementScenario::new(state, g, e, r).unwrap()
    }

    #[test]
    fn trivial_split_gives_certainty() {
        let id = || TwoOutcomeMeasurement::from_first(["x", "y"], Projector::identity(3));
        let s = MeasurementScenario::new(StateVector::basis(3, 2), id(), id(), id()).unwrap();
        let fta = OutcomeSelection::Full(Gender::Female, Treatment::Treated, Survival::Alive);
        assert_eq!(joint_probability(&s, fta), 1.0);
        let ta = OutcomeSelection::WithoutGender(Treatment::Treated, Survival::Alive);
        assert_eq!(joint_probability(&s, ta), 1.0);
    }

    #[test]
    fn q1_joint_probabilities() {
        let eps = 1.0 / 99.0;
        let s = build_paper_scenario(FamilyParams::q1(eps).unwrap()).unwrap();
        let fta: OutcomeSelection = "FTA".parse().unwrap();
        assert!((joint_probability(&s, fta) - 0.25 / (2.0 + eps)).abs() < 1e-15);
        assert_eq!(joint_probability(&s, "TA".parse().unwrap()), 0.0);
    }

    #[test]
    fn outcome_labels_parse() {
        assert_eq!(
            "MUD".parse::<OutcomeSelection>().unwrap(),
            OutcomeSelection::Full(Gender::Male, Treatment::Untreated, Survival::Dead)
        );
        for bad in ["", "X", "FTX", "FTAD", "AT", "ta"] {
            assert_eq!(
                bad.parse::<OutcomeSelection>(),
                Err(Error::InvalidOutcomeLabel(bad.to_owned()))
            );
        }
        assert_eq!(
            OutcomeSelection::WithoutGender(Treatment::Untreated, Survival::Alive).to_string(),
            "UA"
        );
    }

    #[test]
    fn family_rates_match_closed_form_values() {
        for (p, q) in [(0.4, 0.3), (1.0, 0.05), (0.02, 0.9)] {
            let s = build_paper_scenario(FamilyParams::new(p, q).unwrap()).unwrap();
            let r = conditional_rates(&s);
            assert_eq!(r.r_t, Some(0.0));
            assert!((r.rf_t.unwrap() - p / (p + q)).abs() < 1e-12);
        }
        let s = build_paper_scenario(FamilyParams::new(1.0, 0.0).unwrap()).unwrap();
        let r = conditional_rates(&s);
        assert!((r.r_c.unwrap() - 0.5).abs() < 1e-12);
        // q = 0 empties the treated arm unless Gender is measured first.
        assert_eq!(r.r_t, None);
        assert!((r.rf_t.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn statistics_examples() {
        let zeros = RateTable {
            r_t: Some(0.0),
            r_c: Some(0.0),
            rf_t: Some(0.0),
            rm_t: Some(0.0),
            rf_c: Some(0.0),
            rm_c: Some(0.0),
            ..Default::default()
        };
        assert_eq!(
            simpson_statistics(&zeros).unwrap(),
            SimpsonStats {
                d_t: 0.0,
                d_c: 0.0,
                s: 0.0
            }
        );

        let eps = 0.01;
        let s = build_paper_scenario(FamilyParams::q2(eps).unwrap()).unwrap();
        let stats = simpson_statistics(&conditional_rates(&s)).unwrap();
        assert!((stats.s - 1.98).abs() <= 5e-4, "{}", stats.s);

        let s = build_paper_scenario(FamilyParams::q1(1.0 / 99.0).unwrap()).unwrap();
        let stats = simpson_statistics(&conditional_rates(&s)).unwrap();
        assert!((stats.s - 1.8156).abs() < 1e-4, "{}", stats.s);

        let missing = RateTable {
            r_t: Some(0.1),
            ..zeros
        };
        let missing = RateTable {
            rf_c: None,
            r_c: None,
            ..missing
        };
        assert_eq!(
            simpson_statistics(&missing),
            Err(Error::UndefinedRate(vec!["R_c", "R^f_c"]))
        );
    }

    #[test]
    fn convexity_examples() {
        let c = convexity_residual(&diagonal_scenario()).unwrap();
        assert!(c.treated.abs() <= 1e-10 && c.untreated.abs() <= 1e-10);

        let s = build_paper_scenario(FamilyParams::q1(1e-6).unwrap()).unwrap();
        let c = convexity_residual(&s).unwrap();
        assert!((c.treated + 1.0).abs() < 1e-5, "{}", c.treated);
    }

    #[test]
    fn classicality_examples() {
        let rep = classicality_check(&diagonal_scenario(), 1e-12);
        assert!(rep.classical);
        assert_eq!(rep.gender_treatment, 0.0);

        let s = build_paper_scenario(FamilyParams::new(0.5, 0.5).unwrap()).unwrap();
        let rep = classicality_check(&s, 1e-12);
        assert!(rep.gender_treatment > 0.1);
        assert!(rep.gender_result <= 1e-15 && rep.treatment_result <= 1e-15);
        assert!(!rep.classical);

        // G = E: classical iff both commute with R.
        let base = build_paper_scenario(FamilyParams::new(0.5, 0.5).unwrap()).unwrap();
        let s = MeasurementScenario::new(
            base.state().clone(),
            base.gender.clone(),
            base.gender.clone(),
            base.result.clone(),
        )
        .unwrap();
        assert!(classicality_check(&s, 1e-12).classical);
        let s = MeasurementScenario::new(
            base.state().clone(),
            base.gender.clone(),
            base.gender.clone(),
            base.treatment.clone(),
        )
        .unwrap();
        assert!(!classicality_check(&s, 1e-12).classical);
    }

    #[test]
    fn interval_examples() {
        let table = |t: (f64, f64), c: (f64, f64)| RateTable {
            r_t: Some(0.5),
            r_c: Some(0.5),
            rf_t: Some(t.0),
            rm_t: Some(t.1),
            rf_c: Some(c.0),
            rm_c: Some(c.1),
            ..Default::default()
        };
        assert!(rate_intervals_disjoint(&table((0.99, 0.99), (0.33, 0.33))).unwrap());
        assert!(rate_intervals_disjoint(&table((0.1, 0.2), (0.3, 0.9))).unwrap());
        assert!(!rate_intervals_disjoint(&table((0.4, 0.6), (0.4, 0.6))).unwrap());
        assert!(!rate_intervals_disjoint(&table((0.5, 0.9), (0.6, 0.7))).unwrap());
        assert!(rate_intervals_disjoint(&RateTable::default()).is_err());
    }

    #[test]
    fn mismatched_dims_rejected() {
        let g = TwoOutcomeMeasurement::from_first(["F", "M"], Projector::identity(2));
        let r = MeasurementScenario::new(StateVector::basis(3, 0), g.clone(), g.clone(), g);
        assert_eq!(
            r,
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
        let g = TwoOutcomeMeasurement::from_first(["F", "M"], Projector::identity(2));
        let r = MeasurementScenario::new(StateVector::zeros(2), g.clone(), g.clone(), g);
        assert_eq!(r, Err(Error::ZeroState));
    }

    #[test]
    fn non_complementary_pair_rejected() {
        let r = TwoOutcomeMeasurement::from_pair(
            ["A", "D"],
            Projector::diagonal(2, |i| i == 0),
            Projector::diagonal(2, |i| i == 0),
        );
        assert!(matches!(r, Err(Error::NotComplementary { .. })));
    }
}
