//! Per-`k` summary of the certified lower bounds.

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::counterexamples::certificate::{certify_lower_bound, scheme_for, Certificate};
use crate::counterexamples::sequence::{find_alpha_sequence, AlphaSequence, SearchParams, Variant};
use crate::counterexamples::spectrum::build_adversarial_spectrum;
use crate::error::Result;
use crate::rational::format_rational;
use crate::summability::weights::SchemeKind;

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceRow {
    pub k: usize,
    pub alpha_k: u32,
    pub m: u64,
    pub threshold: f64,
    pub threshold_exact: Option<String>,
    pub weak_raw: f64,
    pub weak_quasinorm: f64,
    pub exact: bool,
    /// Same threshold formula at the critical exponent, where it no longer grows.
    pub contrast: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    pub variant: Variant,
    pub scheme: String,
    pub p: String,
    pub sequence: AlphaSequence,
    pub coefficient_sum_p: f64,
    pub rows: Vec<DivergenceRow>,
    /// The weak-`L_p` lower bounds increase strictly with `k`.
    pub strictly_increasing: bool,
    pub critical_p: Option<String>,
    pub certificates: Vec<Certificate>,
}

/// Critical exponent of the variant: `1/2`, or `1/(1+α)`.
pub fn critical_exponent(params: &SearchParams) -> Option<BigRational> {
    match params.variant {
        Variant::Thm2 | Variant::Thm3 => Some(BigRational::new(1.into(), 2.into())),
        Variant::Thm4b => params.alpha.as_ref().map(|a| (BigRational::one() + a).recip()),
        Variant::Thm4c => None,
    }
}

/// Search, build, certify every `k ≤ k_max`, and tabulate.
pub fn divergence_report(params: &SearchParams, kind: &SchemeKind) -> Result<DivergenceReport> {
    let search_scheme = match params.variant {
        Variant::Thm4c => Some(scheme_for(kind, u64::MAX)?),
        _ => None,
    };
    let seq = find_alpha_sequence(params, search_scheme.as_ref())?;
    let spec = build_adversarial_spectrum(&seq, search_scheme.as_ref())?;
    let certificates: Vec<Certificate> =
        (0..seq.len()).into_par_iter().map(|k| certify_lower_bound(&spec, kind, k)).collect::<Result<_>>()?;
    let critical = critical_exponent(params);
    let rows: Vec<DivergenceRow> = certificates
        .iter()
        .map(|c| {
            // at p = p_c the exponent of M in the threshold vanishes, leaving 1/(8α_k)
            let contrast = critical.as_ref().map(|_| 1.0 / (8.0 * c.alpha_k as f64));
            DivergenceRow {
                k: c.k,
                alpha_k: c.alpha_k,
                m: c.m,
                threshold: c.threshold.value(),
                threshold_exact: c.threshold.exact().map(|r| format_rational(&r)),
                weak_raw: c.weak_raw,
                weak_quasinorm: c.weak_quasinorm,
                exact: c.exact,
                contrast,
            }
        })
        .collect();
    let strictly_increasing = rows.windows(2).all(|w| w[1].weak_quasinorm > w[0].weak_quasinorm);
    Ok(DivergenceReport {
        variant: params.variant,
        scheme: kind.to_string(),
        p: format_rational(&seq.p),
        coefficient_sum_p: spec.coefficient_sum_p,
        sequence: seq,
        rows,
        strictly_increasing,
        critical_p: critical.map(|p| format_rational(&p)),
        certificates,
    })
}
