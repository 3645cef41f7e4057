//! Exact arithmetic for extremal quasimodular forms of depth at most 4.
//!
//! Everything is computed over `Q` with truncated q-expansions; the symbolic
//! ring `Q[E2, E4, E6]` is used to build the extremal forms themselves.

pub mod decomposition;
pub mod error;
pub mod extremal;
pub mod modular;
pub mod poly;
pub mod positivity;
pub mod series;

pub use decomposition::{decompose, decompose_extremal, recompose, split_cusp, to_derivative_basis, DerivativeDecomposition};
pub use error::{Error, Result};
pub use extremal::{
    eisenstein_vector, extremal, extremal_poly, is_supported, main_term, main_term_model, normalise,
    EisensteinVector, MainTermModel,
};
pub use modular::{delta, dim_m, dim_qm, dim_s, eisenstein, ModularFormSeries, QuasimodularForm, SerreDerivative};
pub use poly::QmPoly;
pub use positivity::{bound_model, jenkins_rouse_constant, lower_bound_coefficient, threshold_n0, verify_positivity, verify_positivity_with, zeta_upper, BoundModel, PositivityReport, Status, UpperReal};
pub use series::{bernoulli, sigma, QSeries, Rational};
