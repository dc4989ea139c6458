//! Simulation and estimation for log-normal continuous random cascades.
//!
//! Two models are covered: the classical stationary cascade with a finite
//! integral scale `T`, and the aging cascade whose log-volatility is a
//! non-stationary 1/f Gaussian field with no integral scale at all.
//!
//! The Monte-Carlo drivers run replicas on rayon when the `parallel` feature is
//! enabled (the default). Every replica draws from its own ChaCha stream keyed
//! by `(master seed, replica index)` and results are reduced in index order,
//! so sequential and parallel runs are bit-identical.

pub mod cascade_measure;
pub mod cone;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod gaussian_field;
pub mod io;
pub mod linalg;
pub mod market_data;
pub mod params;
pub mod quadrature;
pub mod stats;

pub use error::{CascadeError, Result};
pub use exec::{Execution, SeedRecord};
pub use params::{CascadeParams, ModelKind, TimeGrid};
