//! Sequential two-outcome projective measurements on finite-dimensional
//! pure states, and the reversal statistic `S = d_t − d_c` built from the
//! conditional survival rates of a Gender/Treatment/Result scenario.
//!
//! Classically `|S| ≤ 1`; for quantum scenarios `|S| < 2`, with the explicit
//! family in [`construction`] approaching 2.

pub mod bound;
pub mod classical;
pub mod construction;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod optimizer;

pub use engine::{MeasurementScenario, RateTable, SimpsonStats, TwoOutcomeMeasurement};
pub use error::{Error, Result};
pub use linalg::{Complex64, Projector, StateVector};
