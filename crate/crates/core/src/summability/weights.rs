//! Nörlund weight schemes `{q_k}` and their partial sums `Q_n = Σ_{k<n} q_k`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rational::{big, format_rational, parse_rational, to_f64};

/// Exact tables are built lazily up to this index for kinds whose exact values grow.
pub const EXACT_TABLE_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq)]
pub enum SchemeKind {
    Fejer,
    /// `(C, α)`: `q_k = A_k^{α−1}`.
    Cesaro { alpha: BigRational },
    /// Divisor `k` on `S_k`; not a Nörlund mean.
    RieszLog,
    /// `q_0 = 0`, `q_j = 1/j`.
    NorlundLog,
    /// `q_k = (k+1)^{−β}`.
    Power { beta: BigRational },
    Custom { source: Option<PathBuf>, values: Vec<BigRational> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Constant,
    Nondecreasing,
    Nonincreasing,
    Neither,
}

impl Monotonicity {
    pub fn nondecreasing(self) -> bool {
        matches!(self, Monotonicity::Constant | Monotonicity::Nondecreasing)
    }

    pub fn nonincreasing(self) -> bool {
        matches!(self, Monotonicity::Constant | Monotonicity::Nonincreasing)
    }
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::Constant => "constant",
            Monotonicity::Nondecreasing => "nondecreasing",
            Monotonicity::Nonincreasing => "nonincreasing",
            Monotonicity::Neither => "neither",
        })
    }
}

/// Structural monotonicity of an exact sequence.
pub fn classify(values: &[BigRational]) -> Monotonicity {
    let mut up = false;
    let mut down = false;
    for w in values.windows(2) {
        match w[0].cmp(&w[1]) {
            std::cmp::Ordering::Less => up = true,
            std::cmp::Ordering::Greater => down = true,
            std::cmp::Ordering::Equal => {}
        }
    }
    match (up, down) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::Nondecreasing,
        (false, true) => Monotonicity::Nonincreasing,
        (true, true) => Monotonicity::Neither,
    }
}

impl SchemeKind {
    pub fn cesaro(alpha: &str) -> Result<Self> {
        Ok(SchemeKind::Cesaro { alpha: parse_rational(alpha)? })
    }

    pub fn custom(values: Vec<BigRational>) -> Self {
        SchemeKind::Custom { source: None, values }
    }

    /// Read one weight per line (decimal or `p/q`); blank lines and `#` comments are skipped.
    pub fn custom_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                values.push(parse_rational(line)?);
            }
        }
        Ok(SchemeKind::Custom { source: Some(path.to_path_buf()), values })
    }

    /// Riesz logarithmic means are computed by the same engine but are not Nörlund means.
    pub fn is_norlund(&self) -> bool {
        !matches!(self, SchemeKind::RieszLog)
    }

    /// Schemes with `q_0 = 0` (or no `q` at all) are exempt from the general theory.
    pub fn exempt(&self) -> bool {
        matches!(self, SchemeKind::RieszLog | SchemeKind::NorlundLog)
    }

    /// Smallest `n` for which the mean is defined.
    pub fn first_index(&self) -> u64 {
        if self.exempt() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::Fejer => f.write_str("fejer"),
            SchemeKind::Cesaro { alpha } => write!(f, "cesaro:alpha={}", decimal_or_fraction(alpha)),
            SchemeKind::RieszLog => f.write_str("riesz-log"),
            SchemeKind::NorlundLog => f.write_str("norlund-log"),
            SchemeKind::Power { beta } => write!(f, "power:beta={}", decimal_or_fraction(beta)),
            SchemeKind::Custom { source: Some(p), .. } => write!(f, "custom:file={}", p.display()),
            SchemeKind::Custom { source: None, values } => {
                let list: Vec<String> = values.iter().map(format_rational).collect();
                write!(f, "custom:values={}", list.join(","))
            }
        }
    }
}

// 1/2 prints as 0.5 when the decimal is finite
fn decimal_or_fraction(r: &BigRational) -> String {
    let mut d = r.denom().clone();
    let two = num_bigint::BigInt::from(2u8);
    let five = num_bigint::BigInt::from(5u8);
    while (&d % &two).is_zero() {
        d /= &two;
    }
    while (&d % &five).is_zero() {
        d /= &five;
    }
    if d.is_one() {
        let x = to_f64(r);
        let s = format!("{x}");
        if parse_rational(&s).map(|p| &p == r).unwrap_or(false) {
            return s;
        }
    }
    format_rational(r)
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
        let param = |key: &str| -> Result<&str> {
            params
                .split(',')
                .find_map(|kv| kv.split_once('=').filter(|(k, _)| k.trim() == key).map(|(_, v)| v.trim()))
                .ok_or_else(|| Error::Parse(format!("scheme {name:?} needs {key}=…")))
        };
        match name {
            "fejer" => Ok(SchemeKind::Fejer),
            "cesaro" => Ok(SchemeKind::Cesaro { alpha: parse_rational(param("alpha")?)? }),
            "riesz-log" => Ok(SchemeKind::RieszLog),
            "norlund-log" => Ok(SchemeKind::NorlundLog),
            "power" => Ok(SchemeKind::Power { beta: parse_rational(param("beta")?)? }),
            "custom" => {
                if let Some(rest) = params.strip_prefix("values=") {
                    let values = rest.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
                    Ok(SchemeKind::custom(values))
                } else {
                    SchemeKind::custom_file(Path::new(param("file")?))
                }
            }
            _ => Err(Error::Parse(format!("unknown scheme {spec:?}"))),
        }
    }
}

/// A weight scheme with `q_k` and `Q_n` tabulated up to `n_max`.
#[derive(Debug)]
pub struct WeightScheme {
    kind: SchemeKind,
    n_max: usize,
    q: Vec<f64>,
    /// `Q_0 = 0, Q_1, …, Q_{n_max}`.
    cumulative: Vec<f64>,
    monotonicity: Monotonicity,
    exact: OnceLock<Option<ExactTable>>,
}

#[derive(Debug)]
struct ExactTable {
    q: Vec<BigRational>,
    cumulative: Vec<BigRational>,
}

impl Clone for WeightScheme {
    fn clone(&self) -> Self {
        WeightScheme {
            kind: self.kind.clone(),
            n_max: self.n_max,
            q: self.q.clone(),
            cumulative: self.cumulative.clone(),
            monotonicity: self.monotonicity,
            exact: OnceLock::new(),
        }
    }
}

/// `A_n^α = (α+1)…(α+n)/n!`.
pub fn cesaro_coefficient(alpha: f64, n: u64) -> Result<f64> {
    if alpha < 0.0 && alpha.fract() == 0.0 {
        return Err(Error::Precondition(format!("A_n^α is undefined for negative integer α = {alpha}")));
    }
    let mut a = 1.0;
    for j in 1..=n {
        a *= (alpha + j as f64) / j as f64;
    }
    Ok(a)
}

pub fn cesaro_coefficient_exact(alpha: &BigRational, n: u64) -> Result<BigRational> {
    if alpha.is_negative() && alpha.is_integer() {
        return Err(Error::Precondition(format!(
            "A_n^α is undefined for negative integer α = {}",
            format_rational(alpha)
        )));
    }
    let mut a = BigRational::one();
    for j in 1..=n {
        a = a * (alpha + big(j)) / big(j);
    }
    Ok(a)
}

fn f64_of(r: &BigRational) -> f64 {
    to_f64(r)
}

/// Build the scheme with tables up to `n_max`.
pub fn make_weights(kind: SchemeKind, n_max: usize) -> Result<WeightScheme> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let len = n_max + 1;
    let (q, monotonicity): (Vec<f64>, Monotonicity) = match &kind {
        SchemeKind::Fejer => (vec![1.0; len], Monotonicity::Constant),
        SchemeKind::Cesaro { alpha } => {
            let a = f64_of(alpha);
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::Precondition(format!("cesaro needs 0 < α ≤ 1, got {a}")));
            }
            let mut q = Vec::with_capacity(len);
            q.push(1.0);
            for k in 1..len {
                let prev = q[k - 1];
                q.push(prev * (a - 1.0 + k as f64) / k as f64);
            }
            let mono = if alpha.is_one() { Monotonicity::Constant } else { Monotonicity::Nonincreasing };
            (q, mono)
        }
        SchemeKind::RieszLog => {
            // divisor-on-k weights, 1/k on S_k; stored with q_0 unused
            let mut q = vec![0.0; len];
            for (k, v) in q.iter_mut().enumerate().skip(1) {
                *v = 1.0 / k as f64;
            }
            (q, Monotonicity::Neither)
        }
        SchemeKind::NorlundLog => {
            let mut q = vec![0.0; len];
            for (k, v) in q.iter_mut().enumerate().skip(1) {
                *v = 1.0 / k as f64;
            }
            // 0, 1, 1/2, … is not monotone
            (q, Monotonicity::Neither)
        }
        SchemeKind::Power { beta } => {
            let b = f64_of(beta);
            if b < 0.0 {
                return Err(Error::Precondition(format!("power weights need β ≥ 0, got {b}")));
            }
            let q: Vec<f64> = (0..len).map(|k| ((k + 1) as f64).powf(-b)).collect();
            let mono = if beta.is_zero() { Monotonicity::Constant } else { Monotonicity::Nonincreasing };
            (q, mono)
        }
        SchemeKind::Custom { values, .. } => {
            if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
                return Err(Error::InvalidWeights(format!("q_{k} = {} is negative", format_rational(v))));
            }
            if values.first().map_or(true, |q0| !q0.is_positive()) {
                return Err(Error::InvalidWeights("custom weights need q_0 > 0".into()));
            }
            if values.len() < n_max {
                return Err(Error::InvalidWeights(format!(
                    "custom sequence has {} weights, need at least {n_max}",
                    values.len()
                )));
            }
            let mut q: Vec<f64> = values.iter().take(len).map(f64_of).collect();
            q.resize(len, 0.0);
            (q, classify(&values[..values.len().min(len)]))
        }
    };
    let mut cumulative = Vec::with_capacity(len + 1);
    cumulative.push(0.0);
    let mut acc = 0.0;
    for &v in q.iter().take(n_max) {
        acc += v;
        cumulative.push(acc);
    }
    if let SchemeKind::Cesaro { alpha } = &kind {
        // closed form Q_n = A_{n-1}^α avoids summation drift
        let a = f64_of(alpha);
        let mut an = 1.0;
        for n in 1..=n_max {
            if n > 1 {
                an *= (a + (n - 1) as f64) / (n - 1) as f64;
            }
            cumulative[n] = an;
        }
    }
    Ok(WeightScheme { kind, n_max, q, cumulative, monotonicity, exact: OnceLock::new() })
}

impl WeightScheme {
    pub fn kind(&self) -> &SchemeKind {
        &self.kind
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    pub fn is_norlund(&self) -> bool {
        self.kind.is_norlund()
    }

    pub fn q0(&self) -> f64 {
        self.q[0]
    }

    /// `q_k`, tabulated or evaluated in closed form beyond the table.
    pub fn q(&self, k: u64) -> f64 {
        if (k as usize) < self.q.len() {
            return self.q[k as usize];
        }
        self.q_far(k).unwrap_or(f64::NAN)
    }

    /// `Q_n = Σ_{k<n} q_k` (for Riesz-log, `l_n`).
    pub fn big_q(&self, n: u64) -> f64 {
        if (n as usize) < self.cumulative.len() {
            return self.cumulative[n as usize];
        }
        self.big_q_far(n).unwrap_or(f64::NAN)
    }

    /// `l_n = Σ_{k=1}^{n−1} 1/k`; the normalizer of both logarithmic means.
    pub fn log_normalizer(n: u64) -> f64 {
        if n < 2 {
            return 0.0;
        }
        if n <= 4096 {
            return (1..n).map(|k| 1.0 / k as f64).sum();
        }
        let m = (n - 1) as f64;
        m.ln() + 0.577_215_664_901_532_9 + 1.0 / (2.0 * m) - 1.0 / (12.0 * m * m)
    }

    fn q_far(&self, k: u64) -> Option<f64> {
        match &self.kind {
            SchemeKind::Fejer => Some(1.0),
            SchemeKind::Cesaro { alpha } => {
                let a = f64_of(alpha);
                if (a - 1.0).abs() < f64::EPSILON {
                    return Some(1.0);
                }
                let k = k as f64;
                Some((ln_gamma(k + a) - ln_gamma(k + 1.0) - ln_gamma(a)).exp())
            }
            SchemeKind::RieszLog | SchemeKind::NorlundLog => Some(if k == 0 { 0.0 } else { 1.0 / k as f64 }),
            SchemeKind::Power { beta } => Some(((k + 1) as f64).powf(-f64_of(beta))),
            SchemeKind::Custom { values, .. } => values.get(k as usize).map(f64_of),
        }
    }

    fn big_q_far(&self, n: u64) -> Option<f64> {
        match &self.kind {
            SchemeKind::Fejer => Some(n as f64),
            SchemeKind::Cesaro { alpha } => {
                let a = f64_of(alpha);
                let m = (n - 1) as f64;
                // A_m^α = Γ(m+α+1) / (Γ(m+1) Γ(α+1))
                Some((ln_gamma(m + a + 1.0) - ln_gamma(m + 1.0) - ln_gamma(a + 1.0)).exp())
            }
            SchemeKind::RieszLog | SchemeKind::NorlundLog => Some(Self::log_normalizer(n)),
            SchemeKind::Power { beta } => Some(power_sum(f64_of(beta), n)),
            SchemeKind::Custom { values, .. } => {
                (n as usize <= values.len()).then(|| values[..n as usize].iter().map(f64_of).sum())
            }
        }
    }

    fn exact_table(&self) -> Option<&ExactTable> {
        self.exact
            .get_or_init(|| {
                let len = match &self.kind {
                    SchemeKind::Custom { .. } => self.n_max + 1,
                    _ => (self.n_max + 1).min(EXACT_TABLE_LIMIT + 1),
                };
                let q: Vec<BigRational> = match &self.kind {
                    SchemeKind::Fejer => vec![BigRational::one(); len],
                    SchemeKind::Cesaro { alpha } => {
                        let mut q = Vec::with_capacity(len);
                        q.push(BigRational::one());
                        for k in 1..len {
                            let prev: &BigRational = &q[k - 1];
                            let next = prev * (alpha - BigRational::one() + big(k as u64)) / big(k as u64);
                            q.push(next);
                        }
                        q
                    }
                    SchemeKind::RieszLog | SchemeKind::NorlundLog => (0..len)
                        .map(|k| if k == 0 { BigRational::zero() } else { BigRational::new(1.into(), (k as u64).into()) })
                        .collect(),
                    SchemeKind::Power { beta } => {
                        let b = beta.to_integer().to_u32().filter(|_| beta.is_integer())?;
                        (0..len).map(|k| BigRational::new(1.into(), num_bigint::BigInt::from(k as u64 + 1).pow(b))).collect()
                    }
                    SchemeKind::Custom { values, .. } => {
                        let mut v: Vec<BigRational> = values.iter().take(len).cloned().collect();
                        v.resize(len, BigRational::zero());
                        v
                    }
                };
                let mut cumulative = Vec::with_capacity(len + 1);
                let mut acc = BigRational::zero();
                cumulative.push(acc.clone());
                for v in q.iter().take(len - 1) {
                    acc += v;
                    cumulative.push(acc.clone());
                }
                Some(ExactTable { q, cumulative })
            })
            .as_ref()
    }

    /// Exact `q_k`, when the kind and index allow it.
    pub fn exact_q(&self, k: u64) -> Option<BigRational> {
        if matches!(self.kind, SchemeKind::Fejer) {
            return Some(BigRational::one());
        }
        self.exact_table()?.q.get(k as usize).cloned()
    }

    /// Exact `Q_n`, when the kind and index allow it.
    pub fn exact_big_q(&self, n: u64) -> Option<BigRational> {
        if matches!(self.kind, SchemeKind::Fejer) {
            return Some(big(n));
        }
        self.exact_table()?.cumulative.get(n as usize).cloned()
    }

    /// Is the exact weight `q_k` available for every `k < n`?
    pub fn exact_available(&self, n: u64) -> bool {
        matches!(self.kind, SchemeKind::Fejer) || self.exact_table().is_some_and(|t| (n as usize) < t.cumulative.len())
    }

    /// Weight on `S_k` inside the `n`-th mean, before dividing by the normalizer.
    pub fn mean_weight(&self, n: u64, k: u64) -> f64 {
        match self.kind {
            SchemeKind::RieszLog => {
                if k < n {
                    1.0 / k as f64
                } else {
                    0.0
                }
            }
            _ => self.q(n - k),
        }
    }

    pub fn exact_mean_weight(&self, n: u64, k: u64) -> Option<BigRational> {
        match self.kind {
            SchemeKind::RieszLog => Some(if k < n { BigRational::new(1.into(), k.into()) } else { BigRational::zero() }),
            _ => self.exact_q(n - k),
        }
    }

    /// Normalizer of the `n`-th mean (`Q_n`, or `l_n` for Riesz-log).
    pub fn normalizer(&self, n: u64) -> f64 {
        self.big_q(n)
    }

    pub fn exact_normalizer(&self, n: u64) -> Option<BigRational> {
        match self.kind {
            SchemeKind::RieszLog => self.exact_table()?.cumulative.get(n as usize).cloned(),
            _ => self.exact_big_q(n),
        }
    }

    /// Multiplier of `ψ_v` under the `n`-th mean: `Q_{n−v}/Q_n`, or `(l_n − l_{v+1})/l_n`.
    pub fn multiplier(&self, n: u64, v: u64) -> f64 {
        if v >= n {
            return 0.0;
        }
        match self.kind {
            SchemeKind::RieszLog => {
                let l = Self::log_normalizer(n);
                (l - Self::log_normalizer(v + 1)) / l
            }
            _ => self.big_q(n - v) / self.big_q(n),
        }
    }

    pub fn exact_multiplier(&self, n: u64, v: u64) -> Option<BigRational> {
        if v >= n {
            return Some(BigRational::zero());
        }
        match self.kind {
            SchemeKind::RieszLog => {
                let t = self.exact_table()?;
                let l = t.cumulative.get(n as usize)?;
                Some((l - &t.cumulative[v as usize + 1]) / l)
            }
            _ => Some(self.exact_big_q(n - v)? / self.exact_big_q(n)?),
        }
    }

    /// Check that the `n`-th mean is defined.
    pub fn check_index(&self, n: u64) -> Result<()> {
        if n < self.kind.first_index() {
            return Err(Error::UndefinedMean(format!("{} is undefined for n = {n} (needs n ≥ 2)", self.kind)));
        }
        if n as usize > self.n_max {
            return Err(Error::IndexOutOfRange { index: n.to_string(), limit: self.n_max.to_string() });
        }
        if self.normalizer(n) <= 0.0 {
            return Err(Error::UndefinedMean(format!("normalizer vanishes at n = {n}")));
        }
        Ok(())
    }
}

/// `Σ_{k=1}^{n} k^{−β}` via direct summation and an Euler–Maclaurin tail.
fn power_sum(beta: f64, n: u64) -> f64 {
    const HEAD: u64 = 1000;
    if n <= 4 * HEAD {
        return (1..=n).map(|k| (k as f64).powf(-beta)).sum();
    }
    let head: f64 = (1..=HEAD).map(|k| (k as f64).powf(-beta)).sum();
    let f = |x: f64| x.powf(-beta);
    let df = |x: f64| -beta * x.powf(-beta - 1.0);
    let (a, b) = ((HEAD + 1) as f64, n as f64);
    let integral = if (beta - 1.0).abs() < 1e-15 {
        (b / a).ln()
    } else {
        (b.powf(1.0 - beta) - a.powf(1.0 - beta)) / (1.0 - beta)
    };
    head + integral + (f(a) + f(b)) / 2.0 + (df(b) - df(a)) / 12.0
}
