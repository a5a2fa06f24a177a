//! The explicit two-parameter scenario family on `H = V ⊗ W`.
//!
//! `V` has orthonormal basis `(t, u0, u1, u2)` and `W` has `(a, d)`; the
//! product basis is ordered with `W` varying fastest, so index `2·v + w`.
//! Result acts on `W`, Gender and Treatment act on `V`:
//!
//! * `R^A = span{·⊗a}`, `E^T = span{t⊗·}`;
//! * `G^F = span{f0, f1} ⊗ W` with `f0 = |(u0+u1)+t⟩`, `f1 = |u2⟩`;
//! * `|φ⟩ = |φ_a⟩⊗|a⟩ + |φ_d⟩⊗|d⟩`, `|φ_a⟩ = √p|u0+u1⟩`,
//!   `|φ_d⟩ = |(u0−u1)+u2⟩ + √q|t⟩`,
//!
//! where `|(α±β)⟩ = (|α⟩ ± |β⟩)/√2`, nested.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::engine::{projected_norms, MeasurementScenario, RateTable, TwoOutcomeMeasurement};
use crate::error::{Error, Result};
use crate::linalg::{Projector, StateVector};

pub const DIM_V: usize = 4;
pub const DIM_W: usize = 2;
pub const DIM: usize = DIM_V * DIM_W;

/// Indices into `V`.
pub const T: usize = 0;
pub const U0: usize = 1;
pub const U1: usize = 2;
pub const U2: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    p: f64,
    q: f64,
}

impl FamilyParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && p >= 0.0 && q >= 0.0) {
            return Err(Error::InvalidParams { p, q });
        }
        Ok(Self { p, q })
    }

    /// `p = 1, q = ε`.
    pub fn q1(eps: f64) -> Result<Self> {
        Self::new(1.0, eps)
    }

    /// `p = ε, q = ε²`.
    pub fn q2(eps: f64) -> Result<Self> {
        Self::new(eps, eps * eps)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_degenerate(&self) -> bool {
        self.p == 0.0 && self.q == 0.0
    }
}

fn ket_v(t: f64, u0: f64, u1: f64, u2: f64) -> StateVector {
    let mut amps = [0.0; DIM_V];
    amps[T] = t;
    amps[U0] = u0;
    amps[U1] = u1;
    amps[U2] = u2;
    StateVector::from_real(&amps).expect("finite literals")
}

fn alive() -> StateVector {
    StateVector::basis(DIM_W, 0)
}

fn dead() -> StateVector {
    StateVector::basis(DIM_W, 1)
}

/// `f0 = |(u0+u1)+t⟩`, `f1 = |u2⟩`, `m0 = |(u0+u1)−t⟩`, `m1 = |u0−u1⟩`.
pub fn gender_kets() -> [StateVector; 4] {
    let h = FRAC_1_SQRT_2;
    [
        ket_v(h, 0.5, 0.5, 0.0),
        ket_v(0.0, 0.0, 0.0, 1.0),
        ket_v(-h, 0.5, 0.5, 0.0),
        ket_v(0.0, h, -h, 0.0),
    ]
}

pub fn build_paper_scenario(params: FamilyParams) -> Result<MeasurementScenario> {
    let h = FRAC_1_SQRT_2;
    let (p, q) = (params.p(), params.q());

    let result = TwoOutcomeMeasurement::from_first(
        ["A", "D"],
        Projector::from_span(
            &(0..DIM_V)
                .map(|v| StateVector::basis(DIM_V, v).tensor(&alive()))
                .collect::<Vec<_>>(),
        )?,
    );
    let t = StateVector::basis(DIM_V, T);
    let treatment = TwoOutcomeMeasurement::from_first(
        ["T", "U"],
        Projector::from_span(&[t.tensor(&alive()), t.tensor(&dead())])?,
    );
    let [f0, f1, _, _] = gender_kets();
    let gender = TwoOutcomeMeasurement::from_first(
        ["F", "M"],
        Projector::from_span(&[
            f0.tensor(&alive()),
            f0.tensor(&dead()),
            f1.tensor(&alive()),
            f1.tensor(&dead()),
        ])?,
    );

    let phi_a = ket_v(0.0, p.sqrt() * h, p.sqrt() * h, 0.0);
    // |(u0−u1)+u2⟩ = ((u0−u1)/√2 + u2)/√2
    let phi_d = ket_v(q.sqrt(), 0.5, -0.5, h);
    let state = phi_a.tensor(&alive()).add(&phi_d.tensor(&dead()))?;

    MeasurementScenario::new(state, gender, treatment, result)
}

/// Rates of the family by direct computation:
/// `P(D|T) = 1`, `P(A|U) = p/(1+p)`, `P(A|TF) = P(A|TM) = p/(p+q)`,
/// `P(D|UF) = P(D|UM) = (2+q)/(2+p+q)`. Both arms split evenly by gender.
pub fn closed_form_rates(params: FamilyParams) -> Result<RateTable> {
    if params.is_degenerate() {
        return Err(Error::DegenerateParams);
    }
    let (p, q) = (params.p(), params.q());
    let alive_given_tf = p / (p + q);
    let alive_given_uf = 1.0 - (2.0 + q) / (2.0 + p + q);
    // Pr(T) = q/(1+p+q) vanishes at q = 0.
    let dead_given_t = 1.0;
    let rf_t = Some(alive_given_tf);
    Ok(RateTable {
        r_t: (q > 0.0).then_some(1.0 - dead_given_t),
        r_c: Some(p / (1.0 + p)),
        rf_t,
        rm_t: rf_t,
        rf_c: Some(alive_given_uf),
        rm_c: Some(alive_given_uf),
        frac_f_given_t: Some(0.5),
        frac_m_given_t: Some(0.5),
        frac_f_given_u: Some(0.5),
        frac_m_given_u: Some(0.5),
    })
}

/// `S(p,q) = 2p/(p+q) − 2p/(2+p+q) + p/(1+p)`.
pub fn family_s(params: FamilyParams) -> Result<f64> {
    if params.is_degenerate() {
        return Err(Error::DegenerateParams);
    }
    let (p, q) = (params.p(), params.q());
    Ok(2.0 * p / (p + q) - 2.0 * p / (2.0 + p + q) + p / (1.0 + p))
}

/// Squared lengths of every partially measured state, unnormalized:
/// vertices `‖R^r E^e G^g φ‖²` indexed `[g][e][r]`, edges `‖R^r E^e φ‖²`
/// indexed `[e][r]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeLengths {
    pub vertex: [[[f64; 2]; 2]; 2],
    pub edge: [[f64; 2]; 2],
    pub total_norm_sq: f64,
}

impl CubeLengths {
    pub fn vertex_sum(&self) -> f64 {
        self.vertex.iter().flatten().flatten().sum()
    }

    pub fn edge_sum(&self) -> f64 {
        self.edge.iter().flatten().sum()
    }
}

pub fn cube_annotations(scenario: &MeasurementScenario) -> CubeLengths {
    let n = projected_norms(scenario);
    CubeLengths {
        vertex: n.vertex,
        edge: n.edge,
        total_norm_sq: n.total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::conditional_rates;
    use crate::linalg::commutator_norm;

    const F: usize = 0;
    const M: usize = 1;
    const TR: usize = 0;
    const UN: usize = 1;
    const A: usize = 0;
    const D: usize = 1;

    #[test]
    fn rejects_negative_params() {
        assert!(matches!(
            FamilyParams::new(-0.1, 0.2),
            Err(Error::InvalidParams { .. })
        ));
        assert!(matches!(
            FamilyParams::new(0.1, f64::NAN),
            Err(Error::InvalidParams { .. })
        ));
        assert!(FamilyParams::new(0.0, 0.0).unwrap().is_degenerate());
    }

    #[test]
    fn q1_scenario_rates() {
        let s = build_paper_scenario(FamilyParams::q1(1.0 / 99.0).unwrap()).unwrap();
        let r = conditional_rates(&s);
        assert_eq!(r.r_t, Some(0.0));
        assert!((r.r_c.unwrap() - 0.5).abs() < 1e-12);
        assert!((r.rf_t.unwrap() - 0.99).abs() < 1e-12);
        assert!((r.rm_t.unwrap() - 0.99).abs() < 1e-12);
    }

    #[test]
    fn dead_only_state() {
        let s = build_paper_scenario(FamilyParams::new(0.0, 1.0).unwrap()).unwrap();
        let r = conditional_rates(&s);
        assert_eq!(r.rf_t, Some(0.0));
        assert_eq!(r.rm_t, Some(0.0));
        let cube = cube_annotations(&s);
        assert_eq!(cube.edge[TR][A] + cube.edge[UN][A], 0.0);
    }

    #[test]
    fn closed_form_examples() {
        let r = closed_form_rates(FamilyParams::new(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(r.rf_t, Some(0.5));
        assert_eq!(1.0 - r.rf_c.unwrap(), 0.75);
        let r = closed_form_rates(FamilyParams::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(r.r_c, Some(0.5));
        let r = closed_form_rates(FamilyParams::new(0.0, 1.0).unwrap()).unwrap();
        assert_eq!(r.rf_t, Some(0.0));
        assert_eq!(1.0 - r.rf_c.unwrap(), 1.0);
        assert_eq!(
            closed_form_rates(FamilyParams::new(0.0, 0.0).unwrap()),
            Err(Error::DegenerateParams)
        );
    }

    #[test]
    fn family_s_examples() {
        assert!((family_s(FamilyParams::new(1.0, 1.0).unwrap()).unwrap() - 1.0).abs() < 1e-15);
        let eps = 0.01;
        let s = family_s(FamilyParams::q2(eps).unwrap()).unwrap();
        assert!((s - 1.9802).abs() <= 5e-4);
        let s = family_s(FamilyParams::q1(1e-9).unwrap()).unwrap();
        assert!((s - 11.0 / 6.0).abs() <= 1e-6, "{s}");
        assert_eq!(
            family_s(FamilyParams::new(0.0, 0.0).unwrap()),
            Err(Error::DegenerateParams)
        );
    }

    #[test]
    fn q1_cube() {
        let eps = 0.03;
        let s = build_paper_scenario(FamilyParams::q1(eps).unwrap()).unwrap();
        let c = cube_annotations(&s);
        for g in [F, M] {
            for e in [TR, UN] {
                assert!((c.vertex[g][e][A] - 0.25).abs() < 1e-12);
            }
            assert!((c.vertex[g][TR][D] - eps / 4.0).abs() < 1e-12);
            assert!((c.vertex[g][UN][D] - (eps + 2.0) / 4.0).abs() < 1e-12);
        }
        assert_eq!(c.edge[TR][A], 0.0);
        assert!((c.edge[UN][A] - 1.0).abs() < 1e-12);
        assert!((c.edge[TR][D] - eps).abs() < 1e-12);
        assert!((c.edge[UN][D] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q2_cube() {
        let eps = 0.07;
        let s = build_paper_scenario(FamilyParams::q2(eps).unwrap()).unwrap();
        let c = cube_annotations(&s);
        let e2 = eps * eps;
        for g in [F, M] {
            for e in [TR, UN] {
                assert!((c.vertex[g][e][A] - eps / 4.0).abs() < 1e-12);
            }
            assert!((c.vertex[g][TR][D] - e2 / 4.0).abs() < 1e-12);
            assert!((c.vertex[g][UN][D] - (e2 + 2.0) / 4.0).abs() < 1e-12);
        }
        assert_eq!(c.edge[TR][A], 0.0);
        assert!((c.edge[UN][A] - eps).abs() < 1e-12);
        assert!((c.edge[TR][D] - e2).abs() < 1e-12);
        assert!((c.edge[UN][D] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_gender_cube() {
        let base = build_paper_scenario(FamilyParams::new(0.3, 0.6).unwrap()).unwrap();
        let s = MeasurementScenario::new(
            base.state().clone(),
            TwoOutcomeMeasurement::from_first(["F", "M"], Projector::identity(DIM)),
            base.treatment.clone(),
            base.result.clone(),
        )
        .unwrap();
        let c = cube_annotations(&s);
        for e in [TR, UN] {
            for r in [A, D] {
                assert_eq!(c.vertex[F][e][r], c.edge[e][r]);
                assert_eq!(c.vertex[M][e][r], 0.0);
            }
        }
    }

    #[test]
    fn structural_facts_over_grid() {
        let grid: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
        for &p in &grid {
            for &q in &grid {
                let params = FamilyParams::new(p, q).unwrap();
                let s = build_paper_scenario(params).unwrap();
                let cube = cube_annotations(&s);
                assert_eq!(cube.edge[TR][A], 0.0);
                assert!((cube.vertex_sum() - (1.0 + p + q)).abs() < 1e-12);
                assert!((cube.edge_sum() - (1.0 + p + q)).abs() < 1e-12);

                let r = conditional_rates(&s);
                let cf = closed_form_rates(params).unwrap();
                for (a, b) in [
                    (r.r_t, cf.r_t),
                    (r.r_c, cf.r_c),
                    (r.rf_t, cf.rf_t),
                    (r.rm_t, cf.rm_t),
                    (r.rf_c, cf.rf_c),
                    (r.rm_c, cf.rm_c),
                    (r.frac_f_given_t, cf.frac_f_given_t),
                    (r.frac_f_given_u, cf.frac_f_given_u),
                ] {
                    assert!((a.unwrap() - b.unwrap()).abs() < 1e-10);
                }
                assert!((r.rf_t.unwrap() - r.rm_t.unwrap()).abs() < 1e-12);
                assert!((r.rf_c.unwrap() - r.rm_c.unwrap()).abs() < 1e-12);

                let gr = commutator_norm(s.gender.first(), s.result.first()).unwrap();
                let er = commutator_norm(s.treatment.first(), s.result.first()).unwrap();
                let ge = commutator_norm(s.gender.first(), s.treatment.first()).unwrap();
                assert!(gr < 1e-12 && er < 1e-12 && ge > 0.1);
            }
        }
    }

    #[test]
    fn gender_kets_orthonormal() {
        let ks = gender_kets();
        for (i, a) in ks.iter().enumerate() {
            for (j, b) in ks.iter().enumerate() {
                let g = a.inner(b).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.re - want).abs() < 1e-12 && g.im.abs() < 1e-12);
            }
        }
    }
}
