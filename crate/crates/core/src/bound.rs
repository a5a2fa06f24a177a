//! Working quantities of the `|S| < 2` argument, evaluated numerically.
//!
//! With `ℓ_{DT} = ‖R^D E^T φ‖`, `ℓ_{ATF} = ‖R^A E^T G^F φ‖` and so on (unit
//! `φ`), the ratios
//!
//! ```text
//! α  = ℓ_AT/ℓ_DT    α_F = ℓ_DTF/ℓ_ATF    α_M = ℓ_DTM/ℓ_ATM
//! β  = ℓ_DU/ℓ_AU    β_F = ℓ_AUF/ℓ_DUF    β_M = ℓ_AUM/ℓ_DUM
//! ```
//!
//! turn `S + 3` into `Σ (1 + x²)⁻¹` over the six ratios. A ratio with a
//! vanishing denominator is infinite and contributes 0.

use crate::engine::{
    conditional_rates, projected_norms, simpson_statistics, MeasurementScenario, ProjectedNorms,
};
use crate::error::Result;

/// Allowed negative slack in the triangle inequalities.
pub const TRIANGLE_TOL: f64 = 1e-12;
/// Allowed residual in the two-way decomposition of `‖φ‖² = 1`.
pub const MASTER_TOL: f64 = 1e-10;
/// `ℓ²_DT · (lhs − rhs)` above `−CASE_TOL` counts as the first case holding.
pub const CASE_TOL: f64 = 1e-12;

/// Lengths of the projected unit state. Letters read right to left as the
/// order the projectors act: `dtf` is `‖R^D E^T G^F φ‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllTable {
    pub atf: f64,
    pub dtf: f64,
    pub atm: f64,
    pub dtm: f64,
    pub auf: f64,
    pub duf: f64,
    pub aum: f64,
    pub dum: f64,
    pub at: f64,
    pub dt: f64,
    pub au: f64,
    pub du: f64,
}

impl EllTable {
    pub fn vertex_sq_sum(&self) -> f64 {
        [
            self.atf, self.dtf, self.atm, self.dtm, self.auf, self.duf, self.aum, self.dum,
        ]
        .iter()
        .map(|x| x * x)
        .sum()
    }

    pub fn edge_sq_sum(&self) -> f64 {
        [self.at, self.dt, self.au, self.du]
            .iter()
            .map(|x| x * x)
            .sum()
    }
}

pub fn ell_table(scenario: &MeasurementScenario) -> EllTable {
    ell_table_from_norms(&projected_norms(scenario))
}

pub fn ell_table_from_norms(n: &ProjectedNorms) -> EllTable {
    let l = |x: f64| (x / n.total).sqrt();
    let v = |g: usize, e: usize, r: usize| l(n.vertex[g][e][r]);
    EllTable {
        atf: v(0, 0, 0),
        dtf: v(0, 0, 1),
        atm: v(1, 0, 0),
        dtm: v(1, 0, 1),
        auf: v(0, 1, 0),
        duf: v(0, 1, 1),
        aum: v(1, 1, 0),
        dum: v(1, 1, 1),
        at: l(n.edge[0][0]),
        dt: l(n.edge[0][1]),
        au: l(n.edge[1][0]),
        du: l(n.edge[1][1]),
    }
}

/// The six ratios; `f64::INFINITY` where the denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSet {
    pub alpha: f64,
    pub alpha_f: f64,
    pub alpha_m: f64,
    pub beta: f64,
    pub beta_f: f64,
    pub beta_m: f64,
}

impl RatioSet {
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.alpha,
            self.alpha_f,
            self.alpha_m,
            self.beta,
            self.beta_f,
            self.beta_m,
        ]
    }

    pub fn all_defined(&self) -> bool {
        self.as_array().iter().all(|x| x.is_finite())
    }
}

fn ext_ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

/// `(1 + x²)⁻¹`, zero at infinity.
fn damp(x: f64) -> f64 {
    if x.is_finite() {
        1.0 / (1.0 + x * x)
    } else {
        0.0
    }
}

/// `(1 + x²)·den²` for `x = num/den`, falling back to `num² + den²` when the
/// ratio is infinite.
fn lifted(x: f64, num: f64, den: f64) -> f64 {
    if x.is_finite() {
        (1.0 + x * x) * den * den
    } else {
        num * num + den * den
    }
}

pub fn ratios(ells: &EllTable) -> RatioSet {
    RatioSet {
        alpha: ext_ratio(ells.at, ells.dt),
        alpha_f: ext_ratio(ells.dtf, ells.atf),
        alpha_m: ext_ratio(ells.dtm, ells.atm),
        beta: ext_ratio(ells.du, ells.au),
        beta_f: ext_ratio(ells.auf, ells.duf),
        beta_m: ext_ratio(ells.aum, ells.dum),
    }
}

/// Ratios and `S' = Σ (1 + x²)⁻¹`, which equals `S + 3` whenever every rate
/// is defined.
pub fn ratios_and_s_prime(ells: &EllTable) -> (RatioSet, f64) {
    let r = ratios(ells);
    let s_prime = r.as_array().iter().map(|&x| damp(x)).sum();
    (r, s_prime)
}

/// Which branch of the case analysis a scenario falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseSplit {
    /// `ℓ_DT = 0` or `ℓ_AU = 0`.
    Boundary,
    /// `1 + α² ≥ (1+α_F²)ℓ²_ATF/ℓ²_DT + (1+α_M²)ℓ²_ATM/ℓ²_DT`.
    TreatedHolds,
    /// The treated inequality fails and
    /// `1 + β² > (1+β_F²)ℓ²_DUF/ℓ²_AU + (1+β_M²)ℓ²_DUM/ℓ²_AU` holds.
    UntreatedHolds,
    /// Neither; impossible for an exact decomposition.
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// `ℓ_DTF + ℓ_DTM − ℓ_DT`.
    pub triangle_treated: f64,
    /// `ℓ_AUF + ℓ_AUM − ℓ_AU`.
    pub triangle_untreated: f64,
    /// `(1+α²)ℓ²_DT + (1+β²)ℓ²_AU` minus the four-term Gender decomposition.
    pub master_residual: f64,
    pub case: CaseSplit,
    /// Left minus right side of the treated inequality, when `ℓ_DT > 0`.
    pub treated_margin: Option<f64>,
    /// Left minus right side of the untreated inequality, when `ℓ_AU > 0`.
    pub untreated_margin: Option<f64>,
}

impl IdentityReport {
    pub fn passes(&self) -> bool {
        self.triangle_treated >= -TRIANGLE_TOL
            && self.triangle_untreated >= -TRIANGLE_TOL
            && self.master_residual.abs() <= MASTER_TOL
            && self.case != CaseSplit::Neither
    }
}

pub fn verify_identities(scenario: &MeasurementScenario) -> IdentityReport {
    identities_from(&ell_table(scenario))
}

pub fn identities_from(l: &EllTable) -> IdentityReport {
    let r = ratios(l);
    let treated_total = lifted(r.alpha, l.at, l.dt);
    let untreated_total = lifted(r.beta, l.du, l.au);
    let tf = lifted(r.alpha_f, l.dtf, l.atf);
    let tm = lifted(r.alpha_m, l.dtm, l.atm);
    let uf = lifted(r.beta_f, l.auf, l.duf);
    let um = lifted(r.beta_m, l.aum, l.dum);
    let master_residual = (treated_total + untreated_total) - (tf + tm + uf + um);

    let dt2 = l.dt * l.dt;
    let au2 = l.au * l.au;
    let treated_margin = (dt2 > 0.0).then(|| (1.0 + r.alpha * r.alpha) - (tf + tm) / dt2);
    let untreated_margin = (au2 > 0.0).then(|| (1.0 + r.beta * r.beta) - (uf + um) / au2);
    let case = match (treated_margin, untreated_margin) {
        (Some(a), Some(u)) => {
            if dt2 * a >= -CASE_TOL {
                CaseSplit::TreatedHolds
            } else if u > 0.0 {
                CaseSplit::UntreatedHolds
            } else {
                CaseSplit::Neither
            }
        }
        _ => CaseSplit::Boundary,
    };

    IdentityReport {
        triangle_treated: l.dtf + l.dtm - l.dt,
        triangle_untreated: l.auf + l.aum - l.au,
        master_residual,
        case,
        treated_margin,
        untreated_margin,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundVerdict {
    pub s: f64,
    pub s_prime: f64,
    /// `2 − |S|`.
    pub margin: f64,
    /// `|S| < 2` and `S' < 5`.
    pub holds: bool,
}

pub fn check_bound(scenario: &MeasurementScenario) -> Result<BoundVerdict> {
    let stats = simpson_statistics(&conditional_rates(scenario))?;
    let (_, s_prime) = ratios_and_s_prime(&ell_table(scenario));
    Ok(BoundVerdict {
        s: stats.s,
        s_prime,
        margin: 2.0 - stats.s.abs(),
        holds: stats.s.abs() < 2.0 && s_prime < 5.0,
    })
}
