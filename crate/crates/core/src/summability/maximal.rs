//! Finite-range maximal operators `sup_{n≤n_max} |t_n f|`.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::RealGrid;
use crate::scalar::Scalar;
use crate::summability::means::norlund_mean_spectral;
use crate::summability::weights::WeightScheme;
use crate::transform::Spectrum;

/// Pointwise `max |t_n f|` over the defined range `first_index ≤ n ≤ n_max`.
pub fn maximal_mean<S: Scalar>(s: &Spectrum<S>, scheme: &WeightScheme, n_max: u64) -> Result<RealGrid> {
    if BigUint::from(n_max) > *s.group().order() {
        return Err(Error::IndexOutOfRange { index: n_max.to_string(), limit: s.group().order().to_string() });
    }
    let first = scheme.kind().first_index();
    let zero = RealGrid { group: s.group().clone(), values: vec![0.0; s.group().grid_len()?] };
    if n_max < first {
        return Ok(zero);
    }
    (first..=n_max)
        .into_par_iter()
        .map(|n| norlund_mean_spectral(s, scheme, n).map(|t| t.abs()))
        .try_reduce(|| zero.clone(), |mut a, b| {
            a.max_assign(&b);
            Ok(a)
        })
}
