//! Nörlund means `t_n f = (1/Q_n) Σ_{k=1}^n q_{n−k} S_k f` and the logarithmic means.

use num_rational::BigRational;

use crate::character::RootTable;
use crate::error::Result;
use crate::grid::GridFunction;
use crate::scalar::Scalar;
use crate::summability::weights::WeightScheme;
use crate::transform::{inverse_transform, Spectrum};

fn lift<S: Scalar>(exact: Option<BigRational>, approx: f64) -> Result<S> {
    S::from_real(exact.as_ref(), approx)
}

fn mean_weight<S: Scalar>(scheme: &WeightScheme, n: u64, k: u64) -> Result<S> {
    let exact = if S::EXACT { scheme.exact_mean_weight(n, k) } else { None };
    lift(exact, scheme.mean_weight(n, k))
}

fn inverse_normalizer<S: Scalar>(scheme: &WeightScheme, n: u64) -> Result<S> {
    let exact = if S::EXACT { scheme.exact_normalizer(n).map(|q| q.recip()) } else { None };
    lift(exact, 1.0 / scheme.normalizer(n))
}

/// Running partial sums `S_1 f, S_2 f, …` on the grid.
struct PartialSums<S> {
    spectrum: Spectrum<S>,
    roots: RootTable<S>,
    next: u64,
    current: Vec<S>,
}

impl<S: Scalar> PartialSums<S> {
    fn new(s: &Spectrum<S>) -> Result<Self> {
        let len = s.group().grid_len()?;
        Ok(PartialSums { spectrum: s.clone(), roots: RootTable::for_group(s.group()), next: 0, current: vec![S::zero(); len] })
    }

    /// Advance to `S_{k+1}` and return it.
    fn advance(&mut self) -> &[S] {
        let c = self.spectrum.coefficient(self.next);
        if !c.is_zero() {
            let exps = crate::character::psi_exponents_on_grid(self.spectrum.group(), self.next);
            for (v, e) in self.current.iter_mut().zip(exps) {
                v.add_ref(&c.mul_ref(self.roots.get(e)));
            }
        }
        self.next += 1;
        &self.current
    }
}

/// Definitional form: accumulate `q_{n−k} S_k f` for `k = 1…n` (`k < n` for Riesz-log).
pub fn norlund_mean<S: Scalar>(s: &Spectrum<S>, scheme: &WeightScheme, n: u64) -> Result<GridFunction<S>> {
    check(s, scheme, n)?;
    let mut sums = PartialSums::new(s)?;
    let mut acc = vec![S::zero(); sums.current.len()];
    for k in 1..=n {
        let w: S = mean_weight(scheme, n, k)?;
        let sk = sums.advance();
        if w.is_zero() {
            continue;
        }
        for (a, v) in acc.iter_mut().zip(sk) {
            a.add_ref(&v.mul_ref(&w));
        }
    }
    let inv: S = inverse_normalizer(scheme, n)?;
    GridFunction::new(s.group(), acc.into_iter().map(|v| v.mul_ref(&inv)).collect())
}

/// Abel-transformed form with `P_j = Σ_{k≤j} S_k f = j σ_j f`:
/// `t_n f = (1/Q_n)(Σ_{j<n} (q_{n−j} − q_{n−j−1}) P_j + q_0 P_n)`.
pub fn norlund_mean_abel<S: Scalar>(s: &Spectrum<S>, scheme: &WeightScheme, n: u64) -> Result<GridFunction<S>> {
    check(s, scheme, n)?;
    let mut sums = PartialSums::new(s)?;
    let len = sums.current.len();
    let mut running = vec![S::zero(); len];
    let mut acc = vec![S::zero(); len];
    for j in 1..=n {
        let sj = sums.advance();
        for (p, v) in running.iter_mut().zip(sj) {
            p.add_ref(v);
        }
        // coefficient w_j − w_{j+1}, with w_{n+1} = 0
        let wj: S = mean_weight(scheme, n, j)?;
        let diff = if j < n { wj - mean_weight(scheme, n, j + 1)? } else { wj };
        if diff.is_zero() {
            continue;
        }
        for (a, p) in acc.iter_mut().zip(&running) {
            a.add_ref(&p.mul_ref(&diff));
        }
    }
    let inv: S = inverse_normalizer(scheme, n)?;
    GridFunction::new(s.group(), acc.into_iter().map(|v| v.mul_ref(&inv)).collect())
}

/// Spectral form: `t_n ψ_v = (Q_{n−v}/Q_n) ψ_v`, one inverse transform.
pub fn norlund_mean_spectral<S: Scalar>(s: &Spectrum<S>, scheme: &WeightScheme, n: u64) -> Result<GridFunction<S>> {
    check(s, scheme, n)?;
    let mut weights = Vec::with_capacity(n as usize);
    for v in 0..n {
        let exact = if S::EXACT { scheme.exact_multiplier(n, v) } else { None };
        weights.push(lift::<S>(exact, scheme.multiplier(n, v))?);
    }
    inverse_transform(&s.multiplier(n, |v| weights[v as usize].clone())?)
}

/// Fejér mean `σ_n f`.
pub fn fejer_mean<S: Scalar>(s: &Spectrum<S>, n: u64) -> Result<GridFunction<S>> {
    let scheme = crate::summability::weights::make_weights(crate::summability::SchemeKind::Fejer, n.max(1) as usize)?;
    norlund_mean_spectral(s, &scheme, n)
}

fn check<S: Scalar>(s: &Spectrum<S>, scheme: &WeightScheme, n: u64) -> Result<()> {
    let limit = s.group().order();
    if n == 0 || num_bigint::BigUint::from(n) > *limit {
        return Err(crate::error::Error::IndexOutOfRange { index: n.to_string(), limit: limit.to_string() });
    }
    scheme.check_index(n)
}
