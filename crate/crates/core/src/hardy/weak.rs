//! Weak-`L_p` quasinorms on finite distributions.
//!
//! On a finite value set, `sup_ρ ρ^p μ(|g| > ρ)` equals `max_v v^p μ(|g| ≥ v)` over
//! the attained values `v`, approached by `ρ` just below `v`.

use serde::Serialize;

use crate::grid::RealGrid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeakLp {
    /// `sup_ρ ρ^p μ(|g| > ρ)`.
    pub raw: f64,
    /// `raw^{1/p}`.
    pub quasinorm: f64,
}

/// Weak-`L_p` of a distribution given as `(|value|, measure)` pairs.
pub fn weak_lp_distribution(mut samples: Vec<(f64, f64)>, p: f64) -> WeakLp {
    samples.retain(|s| s.0 > 0.0 && s.1 > 0.0);
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut raw: f64 = 0.0;
    let mut mass = 0.0;
    let mut i = 0;
    while i < samples.len() {
        let v = samples[i].0;
        while i < samples.len() && samples[i].0 == v {
            mass += samples[i].1;
            i += 1;
        }
        raw = raw.max(v.powf(p) * mass);
    }
    WeakLp { raw, quasinorm: raw.powf(1.0 / p) }
}

/// Weak-`L_p` of `|g|` under the normalized Haar measure.
pub fn weak_lp_quasinorm(g: &RealGrid, p: f64) -> WeakLp {
    let w = 1.0 / g.values.len() as f64;
    weak_lp_distribution(g.values.iter().map(|&v| (v.abs(), w)).collect(), p)
}

/// `(∫ |g|^p dμ)^{1/p}`.
pub fn lp_norm(g: &RealGrid, p: f64) -> f64 {
    g.lp_norm(p)
}
