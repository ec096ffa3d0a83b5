//! The weak-type quantity of `t*` applied to an atom, off the atom's support.

use crate::error::Result;
use crate::hardy::atom::Atom;
use crate::hardy::weak::weak_lp_distribution;
use crate::scalar::Scalar;
use crate::summability::maximal::maximal_mean;
use crate::summability::weights::WeightScheme;
use crate::transform::forward_transform;

/// `sup_ρ ρ^p μ{x ∉ I : t*a(x) > ρ}` with `t*` the maximal mean over `n ≤ n_max`.
pub fn atom_tail_weak_type_probe<S: Scalar>(scheme: &WeightScheme, a: &Atom<S>, p: f64, n_max: u64) -> Result<f64> {
    let tstar = maximal_mean(&forward_transform(&a.values), scheme, n_max)?;
    let w = 1.0 / tstar.values.len() as f64;
    let outside = tstar
        .values
        .iter()
        .enumerate()
        .filter(|(x, _)| !a.in_support(*x))
        .map(|(_, &v)| (v, w))
        .collect();
    Ok(weak_lp_distribution(outside, p).raw)
}
