//! Encoding of arbitrary scenarios as unconstrained real vectors.
//!
//! A rank-`r` projector in dimension `n` is `V V†`, where the `n × r` frame
//! `V` is the first `r` standard basis columns pushed through `r·(n−r)`
//! complex plane rotations, one for each pair `(i < r, j ≥ r)`. Each rotation
//! carries an angle and a phase, so a measurement costs `2r(n−r)` reals,
//! which is the real dimension of the Grassmannian. The frame stays exactly
//! orthonormal, so every decoded matrix is a projector.
//!
//! The state is a unit vector in hyperspherical coordinates: `n−1` polar
//! angles for the magnitudes and `n−1` relative phases.

use std::f64::consts::TAU;

use crate::engine::{MeasurementScenario, TwoOutcomeMeasurement};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, Projector, StateVector};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 16;

const LABELS: [[&str; 2]; 3] = [["F", "M"], ["T", "U"], ["A", "D"]];

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParameterization {
    dim: usize,
    /// Rank of the first projector of Gender, Treatment, Result.
    ranks: [usize; 3],
    params: Vec<f64>,
}

/// Parameters used by one rank-`r` measurement in dimension `n`.
pub fn measurement_param_count(n: usize, r: usize) -> usize {
    2 * r * (n - r)
}

pub fn state_param_count(n: usize) -> usize {
    2 * (n - 1)
}

pub fn param_count(dim: usize, ranks: [usize; 3]) -> usize {
    ranks
        .iter()
        .map(|&r| measurement_param_count(dim, r))
        .sum::<usize>()
        + state_param_count(dim)
}

pub fn validate_shape(dim: usize, ranks: [usize; 3]) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&dim) {
        return Err(Error::InvalidConfig(format!(
            "dimension {dim} outside [{MIN_DIM}, {MAX_DIM}]"
        )));
    }
    if let Some(r) = ranks.iter().find(|&&r| r > dim) {
        return Err(Error::InvalidConfig(format!(
            "rank {r} exceeds dimension {dim}"
        )));
    }
    Ok(())
}

impl ScenarioParameterization {
    pub fn new(dim: usize, ranks: [usize; 3], params: Vec<f64>) -> Result<Self> {
        validate_shape(dim, ranks)?;
        let expected = param_count(dim, ranks);
        if params.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: params.len(),
            });
        }
        if let Some(i) = params.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { dim, ranks, params })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ranks(&self) -> [usize; 3] {
        self.ranks
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn decode(&self) -> MeasurementScenario {
        decode(self.dim, self.ranks, &self.params)
    }
}

/// Rank-`r` projector from `2r(n−r)` rotation parameters.
pub fn decode_projector(n: usize, r: usize, params: &[f64]) -> Projector {
    debug_assert_eq!(params.len(), measurement_param_count(n, r));
    let mut frame: Vec<Vec<Complex64>> = (0..r)
        .map(|k| {
            let mut col = vec![Complex64::default(); n];
            col[k] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();
    let mut it = params.chunks_exact(2);
    for i in 0..r {
        for j in r..n {
            let pair = it.next().expect("parameter count checked");
            let (s, c) = pair[0].rem_euclid(TAU).sin_cos();
            let phase = Complex64::from_polar(1.0, pair[1].rem_euclid(TAU));
            for col in frame.iter_mut() {
                let (xi, xj) = (col[i], col[j]);
                col[i] = xi * c - xj * s * phase.conj();
                col[j] = xi * s * phase + xj * c;
            }
        }
    }
    Projector::from_orthonormal(n, &frame)
}

/// Unit state from `n−1` polar angles followed by `n−1` phases.
pub fn decode_state(n: usize, params: &[f64]) -> StateVector {
    debug_assert_eq!(params.len(), state_param_count(n));
    let (angles, phases) = params.split_at(n - 1);
    let mut amps = Vec::with_capacity(n);
    let mut carry = 1.0;
    for (k, a) in angles.iter().enumerate() {
        let (s, c) = a.rem_euclid(TAU).sin_cos();
        let mag = carry * c;
        let phase = if k == 0 { 0.0 } else { phases[k - 1] };
        amps.push(Complex64::from_polar(mag, phase.rem_euclid(TAU)));
        carry *= s;
    }
    amps.push(Complex64::from_polar(carry, phases[n - 2].rem_euclid(TAU)));
    StateVector::new(amps).expect("trigonometric amplitudes are finite")
}

/// Total for any finite parameter slice of the right length.
pub fn decode(dim: usize, ranks: [usize; 3], params: &[f64]) -> MeasurementScenario {
    let mut offset = 0;
    let mut ms = Vec::with_capacity(3);
    for (k, &r) in ranks.iter().enumerate() {
        let len = measurement_param_count(dim, r);
        let p = decode_projector(dim, r, &params[offset..offset + len]);
        ms.push(TwoOutcomeMeasurement::from_first(LABELS[k], p));
        offset += len;
    }
    let state = decode_state(dim, &params[offset..]);
    let result = ms.pop().expect("three measurements");
    let treatment = ms.pop().expect("three measurements");
    let gender = ms.pop().expect("three measurements");
    MeasurementScenario::new(state, gender, treatment, result).expect("decoded state has unit norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::VALIDATION_TOL;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        assert_eq!(param_count(8, [4, 1, 4]), 32 + 14 + 32 + 14);
        assert_eq!(param_count(2, [1, 1, 1]), 2 + 2 + 2 + 2);
        assert!(validate_shape(1, [1, 1, 1]).is_err());
        assert!(validate_shape(17, [1, 1, 1]).is_err());
        assert!(validate_shape(4, [1, 5, 1]).is_err());
    }

    #[test]
    fn zero_parameters_give_standard_projectors() {
        let p = decode_projector(4, 2, &[0.0; 8]);
        assert_eq!(p, Projector::diagonal(4, |i| i < 2));
        let s = decode_state(3, &[0.0; 4]);
        assert_eq!(s, StateVector::basis(3, 0));
    }

    #[test]
    fn single_rotation() {
        // θ = π/2 swaps e0 into e1 (up to phase).
        let p = decode_projector(2, 1, &[std::f64::consts::FRAC_PI_2, 0.3]);
        assert!((p.entry(1, 1).re - 1.0).abs() < 1e-15);
        assert!(p.entry(0, 0).norm() < 1e-15);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(matches!(
            ScenarioParameterization::new(4, [1, 1, 1], vec![0.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ScenarioParameterization::new(2, [1, 1, 1], vec![f64::NAN; 8]),
            Err(Error::NonFinite(0))
        ));
    }

    fn arb_param() -> impl Strategy<Value = ScenarioParameterization> {
        (2usize..=6)
            .prop_flat_map(|n| (Just(n), [0..=n, 0..=n, 0..=n]))
            .prop_flat_map(|(n, ranks)| {
                let len = param_count(n, ranks);
                prop::collection::vec(-50.0f64..50.0, len)
                    .prop_map(move |p| ScenarioParameterization::new(n, ranks, p).unwrap())
            })
    }

    proptest! {
        #[test]
        fn decoded_scenarios_are_valid(p in arb_param()) {
            let s = p.decode();
            prop_assert!((s.state().norm_sq() - 1.0).abs() < 1e-12);
            for (m, &r) in [&s.gender, &s.treatment, &s.result].into_iter().zip(&p.ranks()) {
                let (h, i) = m.first().residuals();
                prop_assert!(h <= VALIDATION_TOL && i <= VALIDATION_TOL);
                prop_assert!(m.first().complementarity_residual(m.second()).unwrap() <= VALIDATION_TOL);
                prop_assert_eq!(m.first().rank(), r);
            }
            prop_assert_eq!(s, p.decode());
        }

        #[test]
        fn angles_are_periodic(p in arb_param()) {
            let shifted: Vec<f64> = p.params().iter().map(|x| x + TAU).collect();
            let q = ScenarioParameterization::new(p.dim(), p.ranks(), shifted).unwrap();
            let (a, b) = (p.decode(), q.decode());
            prop_assert!(a.state().max_abs_diff(b.state()).unwrap() < 1e-9);
            prop_assert!(a.gender.first().max_abs_diff(b.gender.first()).unwrap() < 1e-9);
        }
    }
}
