//! Certified lower bounds `|t_{M+1} f| ≥ T` on the whole group.
//!
//! Two routes. The bound route uses
//! `|t_n f| ≥ ρ |S_M f + c_k ψ_M| − max_{j≤M} |S_j f|` with `ρ ≤ q_0/Q_n`, and needs no weights
//! beyond `q_0` and `Q_n`. The evaluated route computes `t_n f` itself on every piece.

use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::counterexamples::piecewise::{critical_mean_eval, dense_cross_check, magnitude, CriticalEvaluation, CrossCheck, CROSS_CHECK_LIMIT};
use crate::counterexamples::sequence::{big_scale, Variant};
use crate::counterexamples::spectrum::{AdversarialSpectrum, RealValue};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::rational::{big, big_ln, cmp_with_power, format_rational, to_f64};
use crate::scalar::Scalar;
use crate::summability::weights::{make_weights, SchemeKind, WeightScheme};

/// Relative slack for comparisons made in floating point.
pub const FLOAT_SLACK: f64 = 1e-9;
/// Longest weight table built for a certificate; later weights use closed forms.
pub const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    /// `base^exponent / divisor`.
    Power { base: BigUint, exponent: BigRational, divisor: u64 },
    Float { value: f64, expression: String },
}

impl Threshold {
    pub fn value(&self) -> f64 {
        match self {
            Threshold::Power { base, exponent, divisor } => match self.exact() {
                Some(r) => to_f64(&r),
                None => (to_f64(exponent) * big_ln(base) - (*divisor as f64).ln()).exp(),
            },
            Threshold::Float { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<BigRational> {
        match self {
            Threshold::Power { base, exponent, divisor } if exponent.is_integer() => {
                Some(crate::rational::big_pow_int(base, &exponent.to_integer()) / big(*divisor))
            }
            _ => None,
        }
    }

    pub fn expression(&self) -> String {
        match self {
            Threshold::Power { base, exponent, divisor } => format!("{base}^({})/{divisor}", format_rational(exponent)),
            Threshold::Float { expression, .. } => expression.clone(),
        }
    }

    /// `x ≥ T`, exactly when both are exact.
    pub fn exceeded_by(&self, x: &RealValue) -> bool {
        match (self, &x.exact) {
            (Threshold::Power { base, exponent, divisor }, Some(v)) => {
                v.is_positive() && cmp_with_power(&(v * big(*divisor)), base, exponent) != std::cmp::Ordering::Less
            }
            _ => x.approx >= self.value() * (1.0 - FLOAT_SLACK),
        }
    }

    fn exact_comparison(&self, x: &RealValue) -> bool {
        matches!(self, Threshold::Power { .. }) && x.exact.is_some()
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Threshold", 3)?;
        st.serialize_field("expression", &self.expression())?;
        st.serialize_field("exact", &self.exact().map(|r| format_rational(&r)))?;
        st.serialize_field("value", &self.value())?;
        st.end()
    }
}

/// The threshold the `k`-th mean must exceed.
pub fn threshold(spec: &AdversarialSpectrum, scheme: &WeightScheme, k: usize) -> Result<Threshold> {
    let seq = &spec.sequence;
    let a = seq.entries[k];
    let m = big_scale(&seq.radices, a)?;
    let e = seq.p.recip();
    Ok(match seq.variant {
        Variant::Thm2 | Variant::Thm3 => Threshold::Power { base: m, exponent: e - big(2), divisor: 8 * a as u64 },
        Variant::Thm4b => Threshold::Power { base: m, exponent: e - big(1) - seq.alpha.clone().unwrap(), divisor: 8 * a as u64 },
        Variant::Thm4c => {
            let alpha = to_f64(seq.alpha.as_ref().unwrap());
            let mf = m.to_f64().unwrap_or(f64::INFINITY);
            let ln = 0.5 * (scheme.q0().ln() + alpha * big_ln(&m) - scheme.big_q((mf + 1.0) as u64).ln());
            Threshold::Float { value: ln.exp() / 8.0, expression: format!("(q_0 M^α/Q_(M+1))^(1/2)/8 with M = {m}") }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Bound,
    Evaluated,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub variant: Variant,
    pub scheme: String,
    pub p: String,
    pub k: usize,
    pub alpha_k: u32,
    pub m: u64,
    pub n: u64,
    pub threshold: Threshold,
    pub route: Route,
    /// Every comparison of the chosen route was exact.
    pub exact: bool,
    /// The factor `ρ` in front of `|S_{M+1} f|` and why it is admissible.
    pub rho: RealValue,
    pub rho_justification: String,
    pub pieces: usize,
    /// Measure of the set where the bound was certified, exact.
    pub exceedance_measure: String,
    /// Smallest bound-route lower bound over the pieces.
    pub min_lower_bound: f64,
    /// Smallest `|t_n f|` over the pieces, when evaluated.
    pub min_value: Option<f64>,
    /// `T^p μ`, a lower bound for `sup_y y^p μ(|t_n f| > y)`.
    pub weak_raw: f64,
    /// `T μ^{1/p}`, a lower bound for the weak-`L_p` quasinorm.
    pub weak_quasinorm: f64,
    pub partial_sum_ceiling: f64,
    pub partial_sum_bound: f64,
    pub ceiling_holds: bool,
    pub gap_verified: bool,
    pub cross_check: Option<CrossCheck>,
    pub elapsed_ms: u128,
}

/// Weight table for evaluating means up to index `n`.
pub fn scheme_for(kind: &SchemeKind, n: u64) -> Result<WeightScheme> {
    make_weights(kind.clone(), n.clamp(1, TABLE_LIMIT) as usize)
}

fn check_scheme(variant: Variant, scheme: &WeightScheme) -> Result<()> {
    if !scheme.is_norlund() || scheme.q0() <= 0.0 {
        return Err(Error::Precondition(format!("{} needs Nörlund weights with q_0 > 0; {} is not", variant, scheme.kind())));
    }
    let mono = scheme.monotonicity();
    let ok = match variant {
        Variant::Thm2 => mono.nondecreasing(),
        _ => mono.nonincreasing(),
    };
    if !ok {
        let want = if variant == Variant::Thm2 { "nondecreasing" } else { "nonincreasing" };
        return Err(Error::Precondition(format!("{variant} needs {want} weights; {} is {mono:?}", scheme.kind())));
    }
    Ok(())
}

/// `ρ` with `ρ ≤ q_0/Q_n`, preferring the exact `1/n` when it is admissible.
fn choose_rho(variant: Variant, n: u64, second: &RealValue) -> (RealValue, String) {
    let one_over_n = RealValue { exact: Some(BigRational::new(1.into(), n.into())), approx: 1.0 / n as f64 };
    match variant {
        Variant::Thm3 => (one_over_n, "1/n ≤ q_0/Q_n for nonincreasing weights".into()),
        Variant::Thm2 => {
            let verified = match &second.exact {
                Some(f) => *f >= one_over_n.exact.clone().unwrap(),
                None => second.approx * n as f64 >= 1.0 + FLOAT_SLACK,
            };
            if verified {
                (one_over_n, format!("n q_0 ≥ Q_n checked at n = {n}"))
            } else {
                (second.clone(), "actual q_0/Q_n".into())
            }
        }
        Variant::Thm4b | Variant::Thm4c => (second.clone(), "actual q_0/Q_n".into()),
    }
}

fn lower_bound(rho: &RealValue, next: &RealValue, ceiling: &RealValue) -> RealValue {
    let approx = rho.approx * next.approx - ceiling.approx;
    let exact = match (&rho.exact, &next.exact, &ceiling.exact) {
        (Some(r), Some(a), Some(c)) => Some(r * a - c),
        _ => None,
    };
    RealValue { exact, approx }
}

struct PieceOutcome {
    bound_ok: bool,
    bound_exact: bool,
    lower: f64,
    value: Option<(bool, bool, f64)>,
}

fn examine<S: Scalar>(eval: &CriticalEvaluation<S>, rho: &RealValue, t: &Threshold, r: usize, d: usize) -> PieceOutcome {
    let next = magnitude(&eval.next_partial_sum(r, d));
    let lb = lower_bound(rho, &next, &eval.ceiling[r]);
    let value = eval.value(r, d).map(|v| {
        let mag = magnitude(&v);
        (t.exceeded_by(&mag), t.exact_comparison(&mag), mag.approx)
    });
    PieceOutcome { bound_ok: t.exceeded_by(&lb), bound_exact: t.exact_comparison(&lb), lower: lb.approx, value }
}

/// Certify `|t_{M+1} f| ≥ T` everywhere for the `k`-th block.
pub fn certify_lower_bound(spec: &AdversarialSpectrum, kind: &SchemeKind, k: usize) -> Result<Certificate> {
    let started = Instant::now();
    let seq = &spec.sequence;
    let alpha_k = *seq.entries.get(k).ok_or_else(|| Error::IndexOutOfRange { index: k.to_string(), limit: seq.len().to_string() })?;
    let m = big_scale(&seq.radices, alpha_k)?.to_u64().filter(|&m| m < u64::MAX).ok_or(Error::ScaleOverflow { level: alpha_k as usize })?;
    let n = m + 1;
    let scheme = scheme_for(kind, n)?;
    check_scheme(seq.variant, &scheme)?;
    let t = threshold(spec, &scheme, k)?;

    if spec.all_exact() {
        let exact = critical_mean_eval::<Cyclotomic>(spec, &scheme, k)?;
        let float = if exact.first_term.is_none() { Some(critical_mean_eval::<Complex64>(spec, &scheme, k)?) } else { None };
        finish(spec, &scheme, kind, k, alpha_k, t, &exact, float.as_ref(), started)
    } else {
        let float = critical_mean_eval::<Complex64>(spec, &scheme, k)?;
        finish(spec, &scheme, kind, k, alpha_k, t, &float, None, started)
    }
}

#[allow(clippy::too_many_arguments)]
fn finish<S: Scalar>(
    spec: &AdversarialSpectrum,
    scheme: &WeightScheme,
    kind: &SchemeKind,
    k: usize,
    alpha_k: u32,
    t: Threshold,
    eval: &CriticalEvaluation<S>,
    float: Option<&CriticalEvaluation<Complex64>>,
    started: Instant,
) -> Result<Certificate> {
    let seq = &spec.sequence;
    let (rho, rho_justification) = choose_rho(seq.variant, eval.n, &eval.second_factor);
    let mut bound_all = true;
    let mut bound_exact = true;
    let mut eval_all = eval.first_term.is_some() || float.is_some();
    let mut eval_exact = eval.first_term.is_some();
    let mut min_lower = f64::INFINITY;
    let mut min_value: Option<f64> = None;
    let mut first_failure = None;
    let mut certified = 0u64;
    for r in 0..eval.prefixes() {
        for d in 0..eval.top.len() {
            let o = examine(eval, &rho, &t, r, d);
            min_lower = min_lower.min(o.lower);
            bound_all &= o.bound_ok;
            bound_exact &= o.bound_exact;
            let value = o.value.or_else(|| float.and_then(|f| examine(f, &rho, &t, r, d).value));
            if o.bound_ok || value.is_some_and(|v| v.0) {
                certified += 1;
            }
            match value {
                Some((ok, exact, v)) => {
                    eval_all &= ok;
                    eval_exact &= exact;
                    min_value = Some(min_value.map_or(v, |m: f64| m.min(v)));
                    if !ok && !o.bound_ok && first_failure.is_none() {
                        first_failure = Some((r, d, o.lower.max(v)));
                    }
                }
                None => {
                    if !o.bound_ok && first_failure.is_none() {
                        first_failure = Some((r, d, o.lower));
                    }
                }
            }
        }
    }
    let (route, exact) = if bound_all && (bound_exact || !(eval_all && eval_exact)) {
        (Route::Bound, bound_exact)
    } else if eval_all {
        (Route::Evaluated, eval_exact)
    } else {
        let (r, d, best) = first_failure.unwrap_or((0, 0, min_lower));
        let digits = if eval.prefix_level == 0 { vec![] } else { seq.radices.group(eval.prefix_level)?.digits(r as u64) };
        return Err(Error::Certification(format!(
            "k = {k}: |t_{}| lower bound {best:.6e} is below the threshold {:.6e} on the cylinder with leading digits {digits:?} and x_{} = {d}",
            eval.n,
            t.value(),
            eval.top_coordinate
        )));
    };
    let cross_check = if eval.first_term.is_some() && seq.radices.group(eval.top_coordinate + 1).is_ok_and(|g| g.order() <= &BigUint::from(CROSS_CHECK_LIMIT)) {
        Some(dense_cross_check(spec, scheme, eval)?)
    } else if let Some(f) = float.filter(|_| seq.radices.group(eval.top_coordinate + 1).is_ok_and(|g| g.order() <= &BigUint::from(CROSS_CHECK_LIMIT))) {
        Some(dense_cross_check(spec, scheme, f)?)
    } else {
        None
    };
    let pf = to_f64(&seq.p);
    let tv = t.value();
    Ok(Certificate {
        variant: seq.variant,
        scheme: kind.to_string(),
        p: format_rational(&seq.p),
        k,
        alpha_k,
        m: eval.m,
        n: eval.n,
        threshold: t,
        route,
        exact,
        rho,
        rho_justification,
        pieces: eval.pieces(),
        exceedance_measure: format_rational(&(eval.piece_measure() * big(certified))),
        min_lower_bound: min_lower,
        min_value,
        weak_raw: tv.powf(pf),
        weak_quasinorm: tv,
        partial_sum_ceiling: eval.max_ceiling(),
        partial_sum_bound: eval.ceiling_bound.approx,
        ceiling_holds: eval.ceiling_holds(),
        gap_verified: eval.gap_verified,
        cross_check,
        elapsed_ms: started.elapsed().as_millis(),
    })
}
