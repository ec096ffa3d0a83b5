//! Convergence of means to the input function along a list of indices.

use serde::Serialize;

use crate::error::Result;
use crate::grid::GridFunction;
use crate::scalar::Scalar;
use crate::summability::means::norlund_mean_spectral;
use crate::summability::weights::WeightScheme;
use crate::transform::forward_transform;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub l1_error: f64,
    pub linf_error: f64,
}

/// `‖t_n f − f‖_1` and `‖t_n f − f‖_∞` for each `n`.
pub fn convergence_table<S: Scalar>(f: &GridFunction<S>, scheme: &WeightScheme, ns: &[u64]) -> Result<Vec<ConvergenceRow>> {
    let s = forward_transform(f);
    ns.iter()
        .map(|&n| {
            let t = norlund_mean_spectral(&s, scheme, n)?;
            let diffs: Vec<f64> =
                t.values().iter().zip(f.values()).map(|(a, b)| (a.to_complex() - b.to_complex()).norm()).collect();
            Ok(ConvergenceRow {
                n,
                l1_error: diffs.iter().sum::<f64>() / diffs.len() as f64,
                linf_error: diffs.iter().copied().fold(0.0, f64::max),
            })
        })
        .collect()
}

/// Is the sequence strictly decreasing?
pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::VilenkinGroup;
    use crate::summability::weights::{make_weights, SchemeKind};
    use num_complex::Complex64;

    #[test]
    fn fejer_error_on_a_half_is_exactly_one_over_2n() {
        let g = VilenkinGroup::walsh(6).unwrap();
        let f = GridFunction::<Complex64>::cylinder_indicator(&g, 1, &[0]).unwrap();
        let w = make_weights(SchemeKind::Fejer, 64).unwrap();
        let rows = convergence_table(&f, &w, &[4, 8, 16, 32, 64]).unwrap();
        for r in &rows {
            assert!((r.l1_error - 0.5 / r.n as f64).abs() < 1e-14);
        }
        assert!(strictly_decreasing(&rows.iter().map(|r| r.l1_error).collect::<Vec<_>>()));
        let c = GridFunction::constant(&g, Complex64::new(3.0, 0.0)).unwrap();
        assert!(convergence_table(&c, &w, &[8]).unwrap()[0].l1_error < 1e-15);
    }
}
