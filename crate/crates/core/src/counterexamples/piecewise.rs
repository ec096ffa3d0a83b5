//! The critical mean `t_{M+1} f`, `M = M_{α_k}`, evaluated on the cylinder pieces it is
//! constant on.
//!
//! Every partial sum `S_j f` with `j ≤ M` only sees blocks `η < k`, so it is measurable at level
//! `L = α_{k−1} + 1`. The last summand `q_0 S_{M+1} f` adds `c_k ψ_M = c_k r_{α_k}`. A piece is
//! therefore a level-`L` prefix together with the digit `x_{α_k}`, and there are
//! `M_L · m_{α_k}` of them.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use num_complex::Complex64;

use crate::character::{psi_exponents_on_grid, RootTable};
use crate::counterexamples::spectrum::{AdversarialSpectrum, RealValue};
use crate::error::{Error, Result};
use crate::group::VilenkinGroup;
use crate::rational::{big, to_f64};
use crate::grid::GridFunction;
use crate::scalar::{unit_root, Scalar};
use crate::transform::{inverse_transform, Spectrum};
use crate::summability::means::norlund_mean_spectral;
use crate::summability::weights::WeightScheme;

/// Work limit (prefix points × block indices) for one evaluation.
pub const WORK_LIMIT: u64 = 1 << 31;
/// Largest grid used for the dense cross-check.
pub const CROSS_CHECK_LIMIT: u64 = 1 << 15;

#[derive(Clone, Debug)]
pub struct CriticalEvaluation<S> {
    pub k: usize,
    /// `M = M_{α_k}`.
    pub m: u64,
    /// `n = M + 1`.
    pub n: u64,
    pub prefix_level: usize,
    pub top_coordinate: usize,
    pub top_radix: u32,
    /// `S_M f` on each prefix.
    pub head: Vec<S>,
    /// `max_{j≤M} |S_j f|` on each prefix.
    pub ceiling: Vec<RealValue>,
    /// `2λ c_{k−1} M_{α_{k−1}}`, a crude bound for every `|S_j f|`, `j ≤ M`.
    pub ceiling_bound: RealValue,
    /// `c_k ζ^d` for each value `d` of the top digit.
    pub top: Vec<S>,
    /// `(1/Q_n) Σ_{j≤M} q_{n−j} S_j f` on each prefix, when weights are available in `S`.
    pub first_term: Option<Vec<S>>,
    /// `q_0/Q_n`.
    pub second_factor: RealValue,
    /// No spectral mass in `[M_{α_{k−1}+1}, M_{α_k})`.
    pub gap_verified: bool,
}

impl<S: Scalar> CriticalEvaluation<S> {
    pub fn prefixes(&self) -> usize {
        self.head.len()
    }

    pub fn pieces(&self) -> usize {
        self.head.len() * self.top.len()
    }

    /// Measure of one piece, `1/(M_L m_{α_k})`.
    pub fn piece_measure(&self) -> BigRational {
        BigRational::new(1.into(), (self.pieces() as u64).into())
    }

    /// `S_M f + c_k ψ_M = S_{M+1} f` on piece `(r, d)`.
    pub fn next_partial_sum(&self, r: usize, d: usize) -> S {
        self.head[r].clone() + self.top[d].clone()
    }

    /// `t_n f` on piece `(r, d)`.
    pub fn value(&self, r: usize, d: usize) -> Option<S> {
        let first = self.first_term.as_ref()?;
        let second = self.second_factor.lift::<S>().ok()?;
        Some(first[r].clone() + second * self.next_partial_sum(r, d))
    }

    /// Piece of a grid point on a group of level at least `α_k + 1`.
    pub fn piece_of(&self, group: &VilenkinGroup, x: u64) -> (usize, usize) {
        let prefix = if self.prefix_level == 0 { 1 } else { group.scale(self.prefix_level) };
        let top = group.scale(self.top_coordinate);
        ((x % prefix) as usize, ((x / top) % self.top_radix as u64) as usize)
    }

    /// Largest prefix ceiling, as a float.
    pub fn max_ceiling(&self) -> f64 {
        self.ceiling.iter().map(|c| c.approx).fold(0.0, f64::max)
    }

    /// Every computed ceiling lies below the crude bound.
    pub fn ceiling_holds(&self) -> bool {
        self.ceiling.iter().all(|c| match (&c.exact, &self.ceiling_bound.exact) {
            (Some(a), Some(b)) => a <= b,
            _ => c.approx <= self.ceiling_bound.approx * (1.0 + 1e-9),
        })
    }
}

pub(crate) fn magnitude<S: Scalar>(v: &S) -> RealValue {
    match v.as_rational() {
        Some(r) => {
            let a = r.abs();
            RealValue { approx: to_f64(&a), exact: Some(a) }
        }
        None => RealValue { exact: None, approx: v.modulus() },
    }
}

fn raise(slot: &mut RealValue, v: RealValue) {
    match (&slot.exact, v.exact) {
        (Some(a), Some(b)) => {
            if b > *a {
                *slot = RealValue { approx: to_f64(&b), exact: Some(b) };
            }
        }
        (_, _) => {
            slot.exact = None;
            slot.approx = slot.approx.max(v.approx);
        }
    }
}

fn u64_scale(spec: &AdversarialSpectrum, alpha: u32) -> Result<u64> {
    crate::counterexamples::sequence::big_scale(&spec.sequence.radices, alpha)?
        .to_u64()
        .filter(|&m| m < u64::MAX)
        .ok_or(Error::ScaleOverflow { level: alpha as usize })
}

/// Weights `q_{n−j}` and run sums `Σ_{j=a}^{b} q_{n−j}` in `S`; `None` when `S` is exact and
/// the scheme has no exact value there.
struct Weights<'a> {
    scheme: &'a WeightScheme,
    n: u64,
}

impl Weights<'_> {
    fn at<S: Scalar>(&self, j: u64) -> Option<S> {
        let idx = self.n - j;
        let exact = if S::EXACT { Some(self.scheme.exact_q(idx)?) } else { None };
        S::from_real(exact.as_ref(), self.scheme.q(idx)).ok()
    }

    fn run<S: Scalar>(&self, a: u64, b: u64) -> Option<S> {
        // Σ_{j=a}^{b} q_{n−j} = Q_{n−a+1} − Q_{n−b}
        let (hi, lo) = (self.n - a + 1, self.n - b);
        if S::EXACT {
            let v = self.scheme.exact_big_q(hi)? - self.scheme.exact_big_q(lo)?;
            return Some(S::from_rational(&v));
        }
        let approx = if b - a < 1 << 16 {
            (lo..hi).map(|i| self.scheme.q(i)).sum()
        } else {
            self.scheme.big_q(hi) - self.scheme.big_q(lo)
        };
        S::from_real(None, approx).ok()
    }

    fn normalizer(&self) -> RealValue {
        RealValue { exact: self.scheme.exact_big_q(self.n), approx: self.scheme.big_q(self.n) }
    }
}

/// Evaluate the `k`-th critical mean piecewise.
pub fn critical_mean_eval<S: Scalar>(spec: &AdversarialSpectrum, scheme: &WeightScheme, k: usize) -> Result<CriticalEvaluation<S>> {
    let alphas = &spec.sequence.entries;
    if k >= alphas.len() {
        return Err(Error::IndexOutOfRange { index: k.to_string(), limit: alphas.len().to_string() });
    }
    let top_coordinate = alphas[k] as usize;
    let m = u64_scale(spec, alphas[k])?;
    let n = m + 1;
    let prefix_level = if k == 0 { 0 } else { alphas[k - 1] as usize + 1 };
    let prefix_group = if prefix_level == 0 { None } else { Some(spec.sequence.radices.group(prefix_level)?) };
    let prefixes = prefix_group.as_ref().map_or(Ok(1), |g| g.grid_len())?;
    let work: u64 = spec.blocks[..k]
        .iter()
        .map(|b| (&b.end - &b.start).to_u64().unwrap_or(u64::MAX))
        .fold(0u64, |a, b| a.saturating_add(b))
        .saturating_mul(prefixes as u64);
    if work > WORK_LIMIT {
        return Err(Error::GridTooLarge { points: work.to_string(), limit: WORK_LIMIT as usize });
    }
    let top_radix = spec.sequence.radices.radix(top_coordinate).ok_or(Error::ShortRadices {
        available: top_coordinate,
        level: top_coordinate + 1,
    })?;
    let weights = Weights { scheme, n };
    let q_n = weights.normalizer();
    let q0 = RealValue { exact: scheme.exact_q(0), approx: scheme.q0() };
    let second_factor = RealValue {
        exact: match (&q0.exact, &q_n.exact) {
            (Some(a), Some(b)) => Some(a / b),
            _ => None,
        },
        approx: q0.approx / q_n.approx,
    };

    let zero_mag = RealValue { exact: Some(BigRational::zero()), approx: 0.0 };
    let mut running: Vec<S> = vec![S::zero(); prefixes];
    let mut ceiling = vec![zero_mag.clone(); prefixes];
    let mut acc: Option<Vec<S>> = Some(vec![S::zero(); prefixes]);
    let mut next_j: u64 = 1;

    // S_j f = running for every j in [a, b]
    let flat_run = |a: u64, b: u64, running: &[S], ceiling: &mut [RealValue], acc: &mut Option<Vec<S>>| {
        if a > b {
            return;
        }
        for (c, v) in ceiling.iter_mut().zip(running) {
            raise(c, magnitude(v));
        }
        if let Some(sum) = acc.as_mut() {
            match weights.run::<S>(a, b) {
                Some(w) => {
                    for (s, v) in sum.iter_mut().zip(running) {
                        s.add_ref(&v.mul_ref(&w));
                    }
                }
                None => *acc = None,
            }
        }
    };

    if let Some(group) = &prefix_group {
        let roots = RootTable::<S>::for_group(group);
        for block in &spec.blocks[..k] {
            let (start, end) = (block.start.to_u64().unwrap(), block.end.to_u64().unwrap());
            let c: S = block.value.lift()?;
            flat_run(next_j, start, &running, &mut ceiling, &mut acc);
            if acc.is_some() {
                match block_tails::<S>(&weights, group, start, end)? {
                    Some((total, tails)) => {
                        let sum = acc.as_mut().unwrap();
                        for ((s, v), t) in sum.iter_mut().zip(&running).zip(tails.values()) {
                            s.add_ref(&(v.mul_ref(&total) + c.mul_ref(t)));
                        }
                    }
                    None => acc = None,
                }
            }
            sweep_ceiling(group, &roots, start, end, &c, &running, &mut ceiling);
            // D_end − D_start in closed form
            let (ds, de) = (start as usize, end as usize);
            for (r, v) in running.iter_mut().enumerate() {
                let closed = (if r % de == 0 { end as i64 } else { 0 }) - (if r % ds == 0 { start as i64 } else { 0 });
                let closed = S::from_rational(&BigRational::from_integer(closed.into()));
                v.add_ref(&c.mul_ref(&closed));
            }
            next_j = end;
        }
    }
    flat_run(next_j, m, &running, &mut ceiling, &mut acc);

    let inv: Option<S> = match &q_n.exact {
        Some(q) => Some(S::from_rational(&q.recip())),
        None if S::EXACT => None,
        None => Some(S::from_real(None, 1.0 / q_n.approx)?),
    };
    let first_term = match (acc, inv) {
        (Some(sum), Some(inv)) => Some(sum.into_iter().map(|v| v.mul_ref(&inv)).collect()),
        _ => None,
    };
    finish(spec, k, m, prefix_level, top_coordinate, top_radix, running, ceiling, first_term, second_factor)
}

/// `Σ_{j=a+1}^{b−1} q_{n−j} S_j f` inside a block, split as `S_a f · Σ_j q_{n−j}` plus
/// `c Σ_v W_v ψ_v` with tails `W_v = Σ_{j=v+1}^{b−1} q_{n−j}`; the second sum is one inverse
/// transform on the prefix group. Returns the total weight and that transform.
#[allow(clippy::type_complexity)]
fn block_tails<S: Scalar>(weights: &Weights<'_>, group: &VilenkinGroup, a: u64, b: u64) -> Result<Option<(S, GridFunction<S>)>> {
    let mut coeffs = vec![S::zero(); group.grid_len()?];
    let mut tail = S::zero();
    for j in (a + 1..b).rev() {
        let Some(w) = weights.at::<S>(j) else { return Ok(None) };
        tail.add_ref(&w);
        coeffs[(j - 1) as usize] = tail.clone();
    }
    let t = inverse_transform(&Spectrum::dense(group, coeffs)?)?;
    Ok(Some((tail, t)))
}

/// Raise `ceiling[r]` to `max_{a<j<b} |S_j f|` on every prefix `r`, where
/// `S_j f = S_a f + c Σ_{v=a}^{j−1} ψ_v`.
///
/// The character sum is tracked as integer counts of each root of unity with a float shadow.
/// Only counts whose float modulus is within a rounding margin of the running float maximum
/// are kept, and those are evaluated exactly at the end or when the list grows long. The margin is 10⁶ times the
/// worst-case rounding error, so no discarded index can be the true maximiser.
fn sweep_ceiling<S: Scalar>(
    group: &VilenkinGroup,
    roots: &RootTable<S>,
    a: u64,
    b: u64,
    c: &S,
    running: &[S],
    ceiling: &mut [RealValue],
) {
    let order = group.character_order() as usize;
    let primes = prime_divisors(order);
    let unit: Vec<Complex64> = (0..order as u64).map(|e| unit_root(e, order as u64)).collect();
    let cf = c.to_complex();
    let run_f: Vec<Complex64> = running.iter().map(Scalar::to_complex).collect();
    let prefixes = running.len();
    let mut counts = vec![0u32; prefixes * order];
    let mut shadow = vec![Complex64::new(0.0, 0.0); prefixes];
    let mut best = vec![f64::NEG_INFINITY; prefixes];
    let mut kept: Vec<Vec<(f64, Vec<u32>)>> = vec![Vec::new(); prefixes];
    let slack = |r: usize, terms: u64| 1e-9 * (run_f[r].norm() + cf.norm() * terms as f64);
    for j in a + 1..b {
        let exps = psi_exponents_on_grid(group, j - 1);
        for r in 0..prefixes {
            let e = exps[r] as usize;
            counts[r * order + e] += 1;
            shadow[r] += unit[e];
            let mag = (run_f[r] + cf * shadow[r]).norm();
            let margin = slack(r, j - a);
            if mag < best[r] - margin {
                continue;
            }
            let key = reduce_counts(&counts[r * order..(r + 1) * order], &primes);
            let list = &mut kept[r];
            if !list.iter().any(|(_, cnt)| *cnt == key) {
                list.push((mag, key));
            }
            if mag > best[r] {
                best[r] = mag;
            }
            if list.len() > 32 {
                list.retain(|(m, _)| *m >= best[r] - margin);
            }
            if list.len() > 64 {
                // every entry is a genuine |S_j f|, so settling them early only costs time
                for (_, cnt) in list.drain(..) {
                    raise(&mut ceiling[r], magnitude(&(running[r].clone() + c.mul_ref(&sum_roots(roots, &cnt)))));
                }
            }
        }
    }
    for (r, list) in kept.into_iter().enumerate() {
        let margin = slack(r, b - a);
        for (mag, cnt) in list {
            if mag < best[r] - margin {
                continue;
            }
            raise(&mut ceiling[r], magnitude(&(running[r].clone() + c.mul_ref(&sum_roots(roots, &cnt)))));
        }
    }
}

fn sum_roots<S: Scalar>(roots: &RootTable<S>, counts: &[u32]) -> S {
    let mut z = S::zero();
    for (e, &n) in counts.iter().enumerate() {
        if n > 0 {
            z.add_ref(&roots.get(e as u64).scale_rational(&BigRational::from_integer(n.into())));
        }
    }
    z
}

/// Strip whole cosets of each prime-order subgroup, which sum to zero, so that equal
/// character sums usually share one key.
fn reduce_counts(counts: &[u32], primes: &[usize]) -> Vec<u32> {
    let order = counts.len();
    let mut key = counts.to_vec();
    for &p in primes {
        let step = order / p;
        for e in 0..step {
            let low = (0..p).map(|i| key[e + i * step]).min().unwrap_or(0);
            for i in 0..p {
                key[e + i * step] -= low;
            }
        }
    }
    key
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn finish<S: Scalar>(
    spec: &AdversarialSpectrum,
    k: usize,
    m: u64,
    prefix_level: usize,
    top_coordinate: usize,
    top_radix: u32,
    head: Vec<S>,
    ceiling: Vec<RealValue>,
    first_term: Option<Vec<S>>,
    second_factor: RealValue,
) -> Result<CriticalEvaluation<S>> {
    let c: S = spec.blocks[k].value.lift()?;
    let top = (0..top_radix as u64).map(|d| c.mul_ref(&S::root_of_unity(d, top_radix as u64))).collect();
    let ceiling_bound = if k == 0 {
        RealValue { exact: Some(BigRational::zero()), approx: 0.0 }
    } else {
        let prev = &spec.blocks[k - 1];
        let factor = 2 * spec.sequence.lambda as u64;
        RealValue {
            exact: prev.value.exact.as_ref().map(|v| v * crate::rational::from_biguint(&prev.start) * big(factor)),
            approx: prev.value.approx * prev.start.to_f64().unwrap_or(f64::INFINITY) * factor as f64,
        }
    };
    let gap_lo = if k == 0 { BigUint::from(0u32) } else { spec.blocks[k - 1].end.clone() };
    let gap_hi = spec.blocks[k].start.clone();
    let gap_verified = spec.blocks.iter().all(|b| b.end <= gap_lo || b.start >= gap_hi);
    Ok(CriticalEvaluation {
        k,
        m,
        n: m + 1,
        prefix_level,
        top_coordinate,
        top_radix,
        head,
        ceiling,
        ceiling_bound,
        top,
        first_term,
        second_factor,
        gap_verified,
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CrossCheck {
    pub k: usize,
    pub level: usize,
    pub points: usize,
    pub max_abs_diff: f64,
    /// Exact equality on every point, when both sides are exact.
    pub exact_match: Option<bool>,
}

/// Compare the piecewise values with the dense spectral mean on the level-`α_k + 1` group.
pub fn dense_cross_check<S: Scalar>(
    spec: &AdversarialSpectrum,
    scheme: &WeightScheme,
    eval: &CriticalEvaluation<S>,
) -> Result<CrossCheck> {
    let level = eval.top_coordinate + 1;
    let group = spec.sequence.radices.group(level)?;
    let points = group.grid_len()?;
    if points as u64 > CROSS_CHECK_LIMIT {
        return Err(Error::GridTooLarge { points: points.to_string(), limit: CROSS_CHECK_LIMIT as usize });
    }
    let spectrum = spec.to_spectrum::<S>(level)?;
    let dense = norlund_mean_spectral(&spectrum, scheme, eval.n)?;
    let mut max_abs_diff: f64 = 0.0;
    let mut exact_match = Some(true);
    for (x, v) in dense.values().iter().enumerate() {
        let (r, d) = eval.piece_of(&group, x as u64);
        let Some(p) = eval.value(r, d) else {
            return Err(Error::Precondition("piecewise first term unavailable for this scheme".into()));
        };
        max_abs_diff = max_abs_diff.max((p.clone() - v.clone()).modulus());
        if S::EXACT {
            if p != *v {
                exact_match = Some(false);
            }
        } else {
            exact_match = None;
        }
    }
    Ok(CrossCheck { k: eval.k, level, points, max_abs_diff, exact_match })
}
