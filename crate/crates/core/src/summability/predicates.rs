//! Finite-range diagnostics for the regularity criterion and the weight conditions.
//!
//! None of these can decide a limit; they evaluate the inequalities on `n ≤ n_max`
//! and summarize the trend of the tail.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{big, format_rational};
use crate::summability::weights::{SchemeKind, WeightScheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    /// Strictly decreasing on the probed range with a tail slope below the decay cutoff.
    Decaying,
    Nonincreasing,
    /// The tail does not decay (e.g. settles at a positive level).
    NotDecaying,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub scheme: String,
    /// `(n, q_{n−1}/Q_n)`.
    pub ratios: Vec<(u64, f64)>,
    /// Exact ratios when the weights are exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<String>>,
    pub trend: Trend,
    /// Log-log slope of the ratio over the second half of the range.
    pub tail_slope: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    if n < 2.0 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

const DECAY_SLOPE: f64 = -0.1;

/// `q_{n−1}/Q_n` for `n ≤ n_max` with `Q_n > 0`.
pub fn regularity_probe(scheme: &WeightScheme, n_max: u64) -> Result<RegularityReport> {
    if !scheme.is_norlund() {
        return Err(Error::Precondition(format!("{} is not a Nörlund mean", scheme.kind())));
    }
    let mut ratios = Vec::new();
    let mut exact = scheme.exact_available(n_max).then(Vec::new);
    for n in 1..=n_max {
        let q = scheme.big_q(n);
        if q <= 0.0 {
            continue;
        }
        ratios.push((n, scheme.q(n - 1) / q));
        if let Some(list) = exact.as_mut() {
            match (scheme.exact_q(n - 1), scheme.exact_big_q(n)) {
                (Some(a), Some(b)) => list.push(format_rational(&(a / b))),
                _ => exact = None,
            }
        }
    }
    let half = ratios.len() / 2;
    let tail: Vec<(f64, f64)> = ratios[half..].iter().map(|&(n, r)| (n as f64, r)).collect();
    let tail_slope = log_log_slope(&tail);
    let strictly = ratios.windows(2).all(|w| w[1].1 < w[0].1);
    let weakly = ratios.windows(2).all(|w| w[1].1 <= w[0].1);
    let trend = if tail_slope < DECAY_SLOPE && weakly {
        if strictly {
            Trend::Decaying
        } else {
            Trend::Nonincreasing
        }
    } else {
        Trend::NotDecaying
    };
    Ok(RegularityReport { scheme: scheme.kind().to_string(), ratios, exact, trend, tail_slope })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Cond1,
    Cond2,
    Cond3,
    Cond4,
}

impl FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cond1" => Ok(Condition::Cond1),
            "cond2" => Ok(Condition::Cond2),
            "cond3" => Ok(Condition::Cond3),
            "cond4" => Ok(Condition::Cond4),
            _ => Err(Error::Parse(format!("unknown condition {s:?} (cond1…cond4)"))),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Cond1 => "cond1",
            Condition::Cond2 => "cond2",
            Condition::Cond3 => "cond3",
            Condition::Cond4 => "cond4",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    /// `q_0 = 0` or not a Nörlund mean: the predicate does not apply.
    Exempt,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub n: u64,
    /// The inequality's left side, or the first proxy.
    pub lhs: f64,
    /// The right side, or the second proxy.
    pub rhs: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredicateReport {
    pub condition: Condition,
    pub scheme: String,
    pub verdict: Verdict,
    /// Whether every comparison was made in exact arithmetic.
    pub exact: bool,
    pub note: String,
    pub witnesses: Vec<Witness>,
}

/// Evaluate one condition over `1 ≤ n ≤ n_max`.
///
/// `cond1`: `q_0/Q_n ≥ c/n`. `cond4`: `q_0/Q_n ≥ c/n^α`. `cond3`: the proxies
/// `n^α q_0/Q_n` and `|q_n − q_{n+1}|/n^{α−2}` stay bounded (tail max within 25% of
/// the head max). `cond2`: `q_0 n^α/Q_n` keeps growing (positive log-log tail slope).
pub fn condition_predicates(scheme: &WeightScheme, which: Condition, alpha: f64, c: f64, n_max: u64) -> Result<PredicateReport> {
    let name = scheme.kind().to_string();
    if scheme.kind().exempt() || scheme.q0() <= 0.0 {
        return Ok(PredicateReport {
            condition: which,
            scheme: name,
            verdict: Verdict::Exempt,
            exact: true,
            note: "q_0 > 0 is not satisfied; predicate is vacuous".into(),
            witnesses: Vec::new(),
        });
    }
    if n_max == 0 || n_max as usize > scheme.n_max() {
        return Err(Error::IndexOutOfRange { index: n_max.to_string(), limit: scheme.n_max().to_string() });
    }
    let q0 = scheme.q0();
    match which {
        Condition::Cond1 | Condition::Cond4 => {
            let exponent = if which == Condition::Cond1 { 1.0 } else { alpha };
            let exact_c = crate::rational::parse_rational(&format!("{c}")).ok();
            let integral_exponent = which == Condition::Cond1 || alpha == 1.0;
            let mut all_exact = true;
            let mut witnesses = Vec::with_capacity(n_max as usize);
            for n in 1..=n_max {
                let lhs = q0 / scheme.big_q(n);
                let rhs = c / (n as f64).powf(exponent);
                let exact_cmp = match (&exact_c, integral_exponent, scheme.exact_q(0), scheme.exact_big_q(n)) {
                    (Some(c), true, Some(q0), Some(qn)) if !qn.is_zero() => Some(q0 / qn >= c / big(n)),
                    _ => None,
                };
                let ok = match exact_cmp {
                    Some(ok) => ok,
                    None => {
                        all_exact = false;
                        lhs >= rhs * (1.0 - 1e-12)
                    }
                };
                witnesses.push(Witness { n, lhs, rhs, ok });
            }
            let verdict = if witnesses.iter().all(|w| w.ok) { Verdict::Holds } else { Verdict::Fails };
            Ok(PredicateReport {
                condition: which,
                scheme: name,
                verdict,
                exact: all_exact,
                note: format!("q_0/Q_n ≥ {c}/n^{exponent} on 1 ≤ n ≤ {n_max}"),
                witnesses,
            })
        }
        Condition::Cond3 => {
            let witnesses: Vec<Witness> = (1..=n_max)
                .map(|n| {
                    let nf = n as f64;
                    let a = nf.powf(alpha) * q0 / scheme.big_q(n);
                    let b = (scheme.q(n) - scheme.q(n + 1)).abs() / nf.powf(alpha - 2.0);
                    Witness { n, lhs: a, rhs: b, ok: true }
                })
                .collect();
            let bounded = |get: &dyn Fn(&Witness) -> f64| {
                let half = witnesses.len() / 2;
                let head = witnesses[..half.max(1)].iter().map(get).fold(0.0, f64::max);
                let tail = witnesses[half..].iter().map(get).fold(0.0, f64::max);
                tail <= 1.25 * head || tail <= 1e-12
            };
            let ok = bounded(&|w| w.lhs) && bounded(&|w| w.rhs);
            Ok(PredicateReport {
                condition: which,
                scheme: name,
                verdict: if ok { Verdict::Holds } else { Verdict::Fails },
                exact: false,
                note: "lhs = n^α q_0/Q_n, rhs = |q_n − q_{n+1}|/n^{α−2}; bounded if the tail max is within 25% of the head max".into(),
                witnesses,
            })
        }
        Condition::Cond2 => {
            let witnesses: Vec<Witness> = (1..=n_max)
                .map(|n| {
                    let g = q0 * (n as f64).powf(alpha) / scheme.big_q(n);
                    Witness { n, lhs: g, rhs: 0.0, ok: true }
                })
                .collect();
            let half = witnesses.len() / 2;
            let tail: Vec<(f64, f64)> = witnesses[half..].iter().map(|w| (w.n as f64, w.lhs)).collect();
            let slope = log_log_slope(&tail);
            let witnesses = witnesses.into_iter().map(|mut w| {
                w.rhs = slope;
                w
            });
            Ok(PredicateReport {
                condition: which,
                scheme: name,
                verdict: if slope > 0.05 { Verdict::Holds } else { Verdict::Fails },
                exact: false,
                note: format!("lhs = q_0 n^α/Q_n; tail log-log slope {slope:.4} must be positive"),
                witnesses: witnesses.collect(),
            })
        }
    }
}

/// For nonincreasing weights with `q_0 > 0`: `q_0/Q_{M+1} ≥ 1/(M+1)` for all `M < n_max`.
///
/// Exact when the weights are. Errors if the scheme is not nonincreasing.
pub fn automatic_bound_holds(scheme: &WeightScheme, n_max: u64) -> Result<bool> {
    if !scheme.monotonicity().nonincreasing() || scheme.q0() <= 0.0 {
        return Err(Error::Precondition(format!("{} is not a nonincreasing scheme with q_0 > 0", scheme.kind())));
    }
    for n in 1..=n_max {
        let ok = match (scheme.exact_q(0), scheme.exact_big_q(n)) {
            (Some(q0), Some(qn)) => q0 * big(n) >= qn,
            _ => scheme.q0() * n as f64 >= scheme.big_q(n) * (1.0 - 1e-12),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Q_n = Σ_{j<n} (q_{n−j} − q_{n−j−1}) j + q_0 n`, checked exactly.
pub fn abel_weight_identity(scheme: &WeightScheme, n: u64) -> Option<bool> {
    let mut acc = scheme.exact_q(0)? * big(n);
    for j in 1..n {
        acc += (scheme.exact_q(n - j)? - scheme.exact_q(n - j - 1)?) * big(j);
    }
    Some(acc == scheme.exact_big_q(n)?)
}

pub fn scheme_is_exempt(kind: &SchemeKind) -> bool {
    kind.exempt()
}

/// Exact `q_0/Q_n` as a string, when available.
pub fn exact_ratio(scheme: &WeightScheme, n: u64) -> Option<BigRational> {
    Some(scheme.exact_q(0)? / scheme.exact_big_q(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;
    use crate::summability::weights::make_weights;

    #[test]
    fn fejer_ratio_is_one_over_n() {
        let w = make_weights(SchemeKind::Fejer, 100).unwrap();
        let r = regularity_probe(&w, 100).unwrap();
        let exact = r.exact.unwrap();
        for (i, s) in exact.iter().enumerate() {
            let n = i as u64 + 1;
            let want = if n == 1 { "1".to_string() } else { format!("1/{n}") };
            assert_eq!(*s, want);
        }
        assert_eq!(r.trend, Trend::Decaying);
    }

    #[test]
    fn geometric_weights_are_not_regular() {
        let values: Vec<_> = (0..60).map(|k| crate::rational::pow(&big(2), k)).collect();
        let w = make_weights(SchemeKind::custom(values), 60).unwrap();
        let r = regularity_probe(&w, 60).unwrap();
        assert!((r.ratios.last().unwrap().1 - 0.5).abs() < 1e-12);
        assert_eq!(r.trend, Trend::NotDecaying);
    }

    #[test]
    fn conditions() {
        let f = make_weights(SchemeKind::Fejer, 200).unwrap();
        let r = condition_predicates(&f, Condition::Cond1, 1.0, 1.0, 200).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.exact);
        assert!(r.witnesses.iter().all(|w| w.lhs == w.rhs));
        let c = make_weights(SchemeKind::cesaro("1/2").unwrap(), 10_000).unwrap();
        let r = condition_predicates(&c, Condition::Cond3, 0.5, 1.0, 10_000).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        let gamma = statrs::function::gamma::gamma(1.5);
        assert!((r.witnesses.last().unwrap().lhs - gamma).abs() < 1e-3);
        let l = make_weights(SchemeKind::NorlundLog, 10).unwrap();
        assert_eq!(condition_predicates(&l, Condition::Cond2, 0.5, 1.0, 10).unwrap().verdict, Verdict::Exempt);
        let p = make_weights(SchemeKind::Power { beta: parse_rational("0.7").unwrap() }, 4096).unwrap();
        assert_eq!(condition_predicates(&p, Condition::Cond2, 0.5, 1.0, 4096).unwrap().verdict, Verdict::Holds);
        assert_eq!(condition_predicates(&c, Condition::Cond2, 0.5, 1.0, 4096).unwrap().verdict, Verdict::Fails);
    }

    #[test]
    fn automatic_bound_and_abel_identity() {
        let c = make_weights(SchemeKind::cesaro("1/2").unwrap(), 64).unwrap();
        assert!(automatic_bound_holds(&c, 64).unwrap());
        for n in 1..=64 {
            assert_eq!(abel_weight_identity(&c, n), Some(true));
        }
        let up = make_weights(SchemeKind::custom((1..=8).map(big).collect()), 8).unwrap();
        assert!(automatic_bound_holds(&up, 8).is_err());
    }
}
