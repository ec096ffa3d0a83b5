//! Nörlund weight schemes, means, kernels, maximal operators and weight predicates.

pub mod convergence;
pub mod kernel;
pub mod maximal;
pub mod means;
pub mod predicates;
pub mod weights;

pub use convergence::{convergence_table, ConvergenceRow};
pub use kernel::{convolve, kernel_domination_ratio, kernel_domination_sweep, norlund_kernel, DominationRatio, KernelFunction};
pub use maximal::maximal_mean;
pub use means::{fejer_mean, norlund_mean, norlund_mean_abel, norlund_mean_spectral};
pub use predicates::{automatic_bound_holds, condition_predicates, regularity_probe, Condition, PredicateReport, RegularityReport, Verdict};
pub use weights::{cesaro_coefficient, cesaro_coefficient_exact, make_weights, Monotonicity, SchemeKind, WeightScheme};
