//! Greedy search for the increasing index sequences `α_0 < α_1 < …` that drive the
//! divergence constructions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::RadixSequence;
use crate::rational::{big, big_ln, cmp_with_power, format_rational, from_biguint, pow, to_f64};
use crate::summability::weights::WeightScheme;

pub const DEFAULT_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Nondecreasing weights with `q_0/Q_n ≥ c/n`, `p < 1/2`.
    Thm2,
    /// Any nonincreasing weights, `p < 1/2`.
    Thm3,
    /// Nonincreasing weights with `q_0/Q_n ≥ c/n^α`, `p < 1/(1+α)`.
    Thm4b,
    /// Nonincreasing weights with unbounded `q_0 n^α/Q_n`, `p = 1/(1+α)`.
    Thm4c,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm2" | "thm2b" => Ok(Variant::Thm2),
            "thm3" => Ok(Variant::Thm3),
            "thm4b" => Ok(Variant::Thm4b),
            "thm4c" => Ok(Variant::Thm4c),
            _ => Err(Error::Parse(format!("unknown variant {s:?} (thm2, thm3, thm4b, thm4c)"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Thm2 => "thm2",
            Variant::Thm3 => "thm3",
            Variant::Thm4b => "thm4b",
            Variant::Thm4c => "thm4c",
        })
    }
}

/// Parameters shared by search, spectrum and certificate.
#[derive(Clone, Debug)]
pub struct SearchParams {
    pub variant: Variant,
    /// Exponent `p`; for `thm4c` it is derived as `1/(1+α)`.
    pub p: BigRational,
    /// The weight exponent `α` (`thm4b`, `thm4c`).
    pub alpha: Option<BigRational>,
    pub radices: RadixSequence,
    pub k_max: usize,
    pub cap: u32,
}

impl SearchParams {
    pub fn new(variant: Variant, p: BigRational, alpha: Option<BigRational>, radices: RadixSequence, k_max: usize) -> Self {
        SearchParams { variant, p, alpha, radices, k_max, cap: DEFAULT_CAP }
    }

    /// `1/p`.
    pub fn inverse_p(&self) -> BigRational {
        self.p.recip()
    }

    /// Exponent of `M_{α_k}` in the second growth condition and in the threshold.
    pub fn threshold_exponent(&self) -> Option<BigRational> {
        let e = self.inverse_p();
        match self.variant {
            Variant::Thm2 | Variant::Thm3 => Some(e - big(2)),
            Variant::Thm4b => Some(e - big(1) - self.alpha.clone()?),
            Variant::Thm4c => None,
        }
    }

    fn check(&self) -> Result<()> {
        if !self.p.is_positive() {
            return Err(Error::Precondition(format!("p must be positive, got {}", format_rational(&self.p))));
        }
        match self.variant {
            Variant::Thm2 | Variant::Thm3 => {
                let u = self.threshold_exponent().unwrap();
                if !u.is_positive() {
                    return Err(Error::Precondition(format!(
                        "{} needs p < 1/2 so that 1/p − 2 > 0; got p = {} (1/p − 2 = {})",
                        self.variant,
                        format_rational(&self.p),
                        format_rational(&u)
                    )));
                }
            }
            Variant::Thm4b => {
                let a = self.alpha.as_ref().ok_or_else(|| Error::Precondition("thm4b needs --alpha".into()))?;
                check_alpha(a)?;
                let u = self.threshold_exponent().unwrap();
                if !u.is_positive() {
                    return Err(Error::Precondition(format!(
                        "thm4b needs p < 1/(1+α) so that 1/p − 1 − α > 0; got 1/p − 1 − α = {}",
                        format_rational(&u)
                    )));
                }
            }
            Variant::Thm4c => {
                let a = self.alpha.as_ref().ok_or_else(|| Error::Precondition("thm4c needs --alpha".into()))?;
                check_alpha(a)?;
            }
        }
        Ok(())
    }
}

fn check_alpha(a: &BigRational) -> Result<()> {
    if !a.is_positive() || *a > BigRational::one() {
        return Err(Error::Precondition(format!("α must lie in (0, 1], got {}", format_rational(a))));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionCheck {
    pub k: usize,
    pub condition: String,
    pub holds: bool,
    /// Decimal renderings of both sides, for reports.
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaSequence {
    pub variant: Variant,
    #[serde(serialize_with = "ser_rational")]
    pub p: BigRational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub alpha: Option<BigRational>,
    pub lambda: u32,
    pub entries: Vec<u32>,
    /// All inequalities were decided exactly.
    pub exact: bool,
    /// Partial sums of the summability series over the prefix.
    pub partial_series: Vec<f64>,
    /// `α_k ≥ 2 α_{k−1}` for every `k ≥ 1`.
    pub doubling: bool,
    pub checks: Vec<ConditionCheck>,
    #[serde(skip)]
    pub radices: RadixSequence,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub(crate) fn ser_opt_rational<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

impl AlphaSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `sup m_k` over the whole radix sequence.
pub fn sequence_lambda(radices: &RadixSequence) -> u32 {
    match radices {
        RadixSequence::Explicit(v) | RadixSequence::Cycle(v) => v.iter().copied().max().unwrap_or(2),
    }
}

/// `M_α` as a big integer.
pub fn big_scale(radices: &RadixSequence, alpha: u32) -> Result<BigUint> {
    let mut m = BigUint::one();
    for r in radices.take(alpha as usize)? {
        m *= r;
    }
    Ok(m)
}

/// A positive real quantity held exactly when possible, otherwise by its logarithm.
#[derive(Clone, Debug)]
enum Quantity {
    Exact(BigRational),
    Log(f64),
}

impl Quantity {
    fn ln(&self) -> f64 {
        match self {
            Quantity::Exact(r) => big_ln(&r.numer().to_biguint().unwrap_or_default()) - big_ln(&r.denom().to_biguint().unwrap()),
            Quantity::Log(l) => *l,
        }
    }

    fn approx(&self) -> f64 {
        self.ln().exp()
    }
}

/// `M^e/α` with `e = 1/p`.
fn scaled_power(m: &BigUint, e: &BigRational, alpha: u32) -> Quantity {
    if e.is_integer() {
        let k = e.to_integer().to_u32().expect("small exponent");
        Quantity::Exact(pow(&from_biguint(m), k) / big(alpha as u64))
    } else {
        Quantity::Log(to_f64(e) * big_ln(m) - (alpha as f64).ln())
    }
}

/// Does `lhs < M^u/α` hold? Exact when `lhs` is exact.
fn less_than_power(lhs: &Quantity, m: &BigUint, u: &BigRational, alpha: u32) -> bool {
    match lhs {
        Quantity::Exact(x) => {
            let x = x * big(alpha as u64);
            x.is_zero() || cmp_with_power(&x, m, u) == std::cmp::Ordering::Less
        }
        Quantity::Log(l) => *l < to_f64(u) * big_ln(m) - (alpha as f64).ln(),
    }
}

fn sum_quantities(items: &[Quantity]) -> Quantity {
    if items.iter().all(|q| matches!(q, Quantity::Exact(_))) {
        let mut s = BigRational::zero();
        for q in items {
            if let Quantity::Exact(r) = q {
                s += r;
            }
        }
        Quantity::Exact(s)
    } else {
        let logs: Vec<f64> = items.iter().map(Quantity::ln).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Quantity::Log(top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln())
    }
}

fn times(q: &Quantity, c: u64) -> Quantity {
    match q {
        Quantity::Exact(r) => Quantity::Exact(r * big(c)),
        Quantity::Log(l) => Quantity::Log(l + (c as f64).ln()),
    }
}

/// Greedy-minimal sequence: `α_0 = 1`, each later `α_k` the least integer satisfying the variant's
/// inequalities given the prefix. `scheme` is needed only for `thm4c`.
pub fn find_alpha_sequence(params: &SearchParams, scheme: Option<&WeightScheme>) -> Result<AlphaSequence> {
    params.check()?;
    let lambda = sequence_lambda(&params.radices);
    let e = params.inverse_p();
    let mut entries: Vec<u32> = vec![1];
    let mut checks = Vec::new();
    let mut exact = true;
    if params.variant == Variant::Thm4c {
        let scheme = scheme.ok_or_else(|| Error::Precondition("thm4c needs a weight scheme".into()))?;
        return find_thm4c(params, scheme, lambda);
    }
    let u = params.threshold_exponent().unwrap();
    let mut terms: Vec<Quantity> = vec![scaled_power(&big_scale(&params.radices, 1)?, &e, 1)];
    for k in 1..=params.k_max {
        let prev = *entries.last().unwrap();
        let sum = times(&sum_quantities(&terms), lambda as u64);
        let last = times(terms.last().unwrap(), 32 * lambda as u64);
        let mut found = None;
        for a in prev + 1..=params.cap {
            let m = big_scale(&params.radices, a)?;
            let growth_sum = less_than_power(&sum, &m, &e, a);
            let growth_last = less_than_power(&last, &m, &u, a);
            if growth_sum && growth_last {
                let rhs_sum = scaled_power(&m, &e, a);
                let rhs_last = (to_f64(&u) * big_ln(&m) - (a as f64).ln()).exp();
                let label = if params.variant == Variant::Thm4b { "growth-last-weighted" } else { "growth-last" };
                checks.push(ConditionCheck { k, condition: "growth-sum".into(), holds: true, lhs: sum.approx(), rhs: rhs_sum.approx() });
                checks.push(ConditionCheck { k, condition: label.into(), holds: true, lhs: last.approx(), rhs: rhs_last });
                exact &= matches!(sum, Quantity::Exact(_)) && matches!(last, Quantity::Exact(_));
                terms.push(rhs_sum);
                found = Some(a);
                break;
            }
        }
        match found {
            Some(a) => entries.push(a),
            None => return Err(Error::SearchExhausted { position: k, cap: params.cap }),
        }
    }
    let pf = to_f64(&params.p);
    let partial_series = partial_sums(entries.iter().map(|&a| (a as f64).powf(-pf)));
    Ok(AlphaSequence {
        variant: params.variant,
        p: params.p.clone(),
        alpha: params.alpha.clone(),
        lambda,
        doubling: entries.windows(2).all(|w| w[1] >= 2 * w[0]),
        entries,
        exact,
        partial_series,
        checks,
        radices: params.radices.clone(),
    })
}

fn partial_sums(items: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    items
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

/// `ln(Q_{M+1} M^{α/2+1} / q_0^{1/2})` and `ln((q_0 M^α / Q_{M+1})^{1/2})`, float.
pub(crate) fn thm4c_logs(scheme: &WeightScheme, m: &BigUint, alpha: f64) -> (f64, f64) {
    let lm = big_ln(m);
    let mf = m.to_f64().unwrap_or(f64::INFINITY);
    let q = scheme.big_q((mf + 1.0) as u64);
    let lq = q.ln();
    let lq0 = scheme.q0().ln();
    let growth = lq + (alpha / 2.0 + 1.0) * lm - 0.5 * lq0;
    let target = 0.5 * (lq0 + alpha * lm - lq);
    (growth, target)
}

fn find_thm4c(params: &SearchParams, scheme: &WeightScheme, lambda: u32) -> Result<AlphaSequence> {
    if !scheme.monotonicity().nonincreasing() || scheme.q0() <= 0.0 {
        return Err(Error::Precondition(format!("thm4c needs nonincreasing weights with q_0 > 0; {} is not", scheme.kind())));
    }
    let alpha = to_f64(params.alpha.as_ref().unwrap());
    let max_scale = |a: u32| -> Result<BigUint> {
        let m = big_scale(&params.radices, a)?;
        if m.to_u64().map_or(true, |v| v == u64::MAX) {
            return Err(Error::ScaleOverflow { level: a as usize });
        }
        Ok(m)
    };
    let mut entries = vec![1u32];
    let mut growth_logs = vec![thm4c_logs(scheme, &max_scale(1)?, alpha).0];
    let mut checks = Vec::new();
    let ll = (lambda as f64).ln();
    for k in 1..=params.k_max {
        let prev = *entries.last().unwrap();
        let top = growth_logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum_log = ll + top + growth_logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
        let last_log = (32.0f64).ln() + ll + growth_logs.last().unwrap();
        let mut found = None;
        for a in prev + 1..=params.cap {
            let m = match max_scale(a) {
                Ok(m) => m,
                Err(_) => break,
            };
            let (g, t) = thm4c_logs(scheme, &m, alpha);
            if sum_log <= g && last_log < t {
                checks.push(ConditionCheck { k, condition: "weighted-growth-sum".into(), holds: true, lhs: sum_log.exp(), rhs: g.exp() });
                checks.push(ConditionCheck { k, condition: "weighted-growth-last".into(), holds: true, lhs: last_log.exp(), rhs: t.exp() });
                growth_logs.push(g);
                found = Some(a);
                break;
            }
        }
        match found {
            Some(a) => entries.push(a),
            None => return Err(Error::SearchExhausted { position: k, cap: params.cap }),
        }
    }
    let r = 1.0 / (2.0 * (1.0 + alpha));
    let terms = entries.iter().map(|&a| {
        let m = big_scale(&params.radices, a).unwrap();
        let (_, t) = thm4c_logs(scheme, &m, alpha);
        // (Q_{M+1}/(q_0 M^α))^{1/(2(1+α))} = exp(−2t · r)
        (-2.0 * t * r).exp()
    });
    let partial_series = partial_sums(terms);
    Ok(AlphaSequence {
        variant: Variant::Thm4c,
        p: BigRational::one() / (BigRational::one() + params.alpha.clone().unwrap()),
        alpha: params.alpha.clone(),
        lambda,
        doubling: entries.windows(2).all(|w| w[1] >= 2 * w[0]),
        entries,
        exact: false,
        partial_series,
        checks,
        radices: params.radices.clone(),
    })
}
