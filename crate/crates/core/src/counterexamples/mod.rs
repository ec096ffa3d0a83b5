//! Explicit functions in `H_p` whose Nörlund means are unbounded in weak-`L_p`, with
//! certificates for the lower bounds.

pub mod certificate;
pub mod piecewise;
pub mod report;
pub mod sequence;
pub mod spectrum;

pub use certificate::{certify_lower_bound, Certificate, Route, Threshold};
pub use piecewise::{critical_mean_eval, dense_cross_check, CriticalEvaluation, CrossCheck};
pub use report::{divergence_report, DivergenceReport, DivergenceRow};
pub use sequence::{find_alpha_sequence, AlphaSequence, SearchParams, Variant};
pub use spectrum::{build_adversarial_spectrum, AdversarialSpectrum, RealValue};
