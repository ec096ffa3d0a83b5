//! Vilenkin–Fourier coefficients and partial sums.
//!
//! The character matrix of the level-`N` quotient is the tensor product of the
//! `m_k × m_k` character matrices of the cyclic factors, so the transform is one
//! small dense pass per coordinate along stride `M_k`.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::group::VilenkinGroup;
use crate::rational::from_biguint;
use crate::scalar::Scalar;

/// A run `[start, end)` of indices sharing one coefficient value.
#[derive(Clone, Debug, PartialEq)]
pub struct Block<S> {
    pub start: u64,
    pub end: u64,
    pub value: S,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients<S> {
    Dense(Vec<S>),
    /// Disjoint blocks in increasing order; indices outside every block have coefficient 0.
    Sparse(Vec<Block<S>>),
}

/// Coefficients `f̂(n)`, `n < M_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<S> {
    group: VilenkinGroup,
    coefficients: Coefficients<S>,
}

impl<S: Scalar> Spectrum<S> {
    pub fn dense(group: &VilenkinGroup, values: Vec<S>) -> Result<Self> {
        let len = group.grid_len()?;
        if values.len() != len {
            return Err(Error::DigitCount { expected: len, got: values.len() });
        }
        Ok(Spectrum { group: group.clone(), coefficients: Coefficients::Dense(values) })
    }

    /// Block-constant spectrum. Works on groups too large for a dense grid.
    pub fn sparse(group: &VilenkinGroup, mut blocks: Vec<Block<S>>) -> Result<Self> {
        blocks.retain(|b| b.start < b.end);
        blocks.sort_by_key(|b| b.start);
        let limit = group.order();
        for w in blocks.windows(2) {
            if w[0].end > w[1].start {
                return Err(Error::Precondition(format!(
                    "overlapping spectral blocks [{}, {}) and [{}, {})",
                    w[0].start, w[0].end, w[1].start, w[1].end
                )));
            }
        }
        if let Some(last) = blocks.last() {
            if BigUint::from(last.end) > *limit {
                return Err(Error::IndexOutOfRange { index: last.end.to_string(), limit: limit.to_string() });
            }
        }
        Ok(Spectrum { group: group.clone(), coefficients: Coefficients::Sparse(blocks) })
    }

    /// Single coefficient 1 at index `n`.
    pub fn delta(group: &VilenkinGroup, n: u64) -> Result<Self> {
        Self::sparse(group, vec![Block { start: n, end: n + 1, value: S::one() }])
    }

    pub fn group(&self) -> &VilenkinGroup {
        &self.group
    }

    pub fn representation(&self) -> &Coefficients<S> {
        &self.coefficients
    }

    pub fn coefficient(&self, n: u64) -> S {
        match &self.coefficients {
            Coefficients::Dense(v) => v.get(n as usize).cloned().unwrap_or_else(S::zero),
            Coefficients::Sparse(blocks) => blocks
                .iter()
                .find(|b| b.start <= n && n < b.end)
                .map(|b| b.value.clone())
                .unwrap_or_else(S::zero),
        }
    }

    /// One past the largest index with a possibly nonzero coefficient.
    pub fn support_end(&self) -> u64 {
        match &self.coefficients {
            Coefficients::Dense(v) => v.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i as u64 + 1),
            Coefficients::Sparse(blocks) => blocks.last().map_or(0, |b| b.end),
        }
    }

    pub fn to_dense(&self) -> Result<Vec<S>> {
        match &self.coefficients {
            Coefficients::Dense(v) => Ok(v.clone()),
            Coefficients::Sparse(blocks) => {
                let mut out = vec![S::zero(); self.group.grid_len()?];
                for b in blocks {
                    for c in &mut out[b.start as usize..b.end as usize] {
                        *c = b.value.clone();
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn densify(&self) -> Result<Self> {
        Ok(Spectrum { group: self.group.clone(), coefficients: Coefficients::Dense(self.to_dense()?) })
    }

    /// Same coefficients viewed on a group with the same leading radices.
    pub fn restrict(&self, group: &VilenkinGroup) -> Result<Self> {
        if group.radices() != &self.group.radices()[..group.level().min(self.group.level())] {
            return Err(Error::GroupMismatch);
        }
        let end = self.support_end();
        if BigUint::from(end) > *group.order() {
            return Err(Error::IndexOutOfRange { index: end.to_string(), limit: group.order().to_string() });
        }
        match &self.coefficients {
            Coefficients::Sparse(b) => Self::sparse(group, b.clone()),
            Coefficients::Dense(v) => {
                let len = group.grid_len()?;
                let mut w: Vec<S> = v.iter().take(len).cloned().collect();
                w.resize(len, S::zero());
                Self::dense(group, w)
            }
        }
    }

    /// `Σ |f̂(n)|²` in floating point.
    pub fn energy(&self) -> f64 {
        match &self.coefficients {
            Coefficients::Dense(v) => v.iter().map(|c| c.to_complex().norm_sqr()).sum(),
            Coefficients::Sparse(b) => b.iter().map(|b| (b.end - b.start) as f64 * b.value.to_complex().norm_sqr()).sum(),
        }
    }

    /// Multiply coefficient `v` by `weight(v)` for `v < n` and drop the rest.
    pub fn multiplier(&self, n: u64, weight: impl Fn(u64) -> S) -> Result<Self> {
        let len = self.group.grid_len()?;
        let mut out = vec![S::zero(); len];
        let n = (n as usize).min(len);
        match &self.coefficients {
            Coefficients::Dense(v) => {
                for (k, c) in v.iter().enumerate().take(n) {
                    if !c.is_zero() {
                        out[k] = c.mul_ref(&weight(k as u64));
                    }
                }
            }
            Coefficients::Sparse(blocks) => {
                for b in blocks {
                    for k in b.start as usize..(b.end as usize).min(n) {
                        out[k] = b.value.mul_ref(&weight(k as u64));
                    }
                }
            }
        }
        Self::dense(&self.group, out)
    }
}

fn axis_matrix<S: Scalar>(m: u32, conjugate: bool) -> Vec<Option<S>> {
    // None marks the entry 1 so the pass can skip a multiplication
    let m = m as u64;
    let mut out = Vec::with_capacity((m * m) as usize);
    for a in 0..m {
        for b in 0..m {
            let e = a * b % m;
            let e = if conjugate { (m - e) % m } else { e };
            out.push(if e == 0 { None } else { Some(S::root_of_unity(e, m)) });
        }
    }
    out
}

/// Apply the character matrix along every coordinate, in place.
fn tensor_pass<S: Scalar>(group: &VilenkinGroup, values: &mut [S], conjugate: bool) {
    let len = values.len();
    let mut stride = 1usize;
    let mut scratch: Vec<S> = Vec::new();
    for &m in group.radices() {
        let mu = m as usize;
        let block = stride * mu;
        if m == 2 {
            for base in (0..len).step_by(block) {
                for off in 0..stride {
                    let (i, j) = (base + off, base + off + stride);
                    let a = values[i].clone();
                    let b = values[j].clone();
                    values[i] = a.clone() + b.clone();
                    values[j] = a - b;
                }
            }
        } else {
            let mat = axis_matrix::<S>(m, conjugate);
            scratch.resize(mu, S::zero());
            for base in (0..len).step_by(block) {
                for off in 0..stride {
                    for (a, out) in scratch.iter_mut().enumerate() {
                        let mut acc = S::zero();
                        for b in 0..mu {
                            let v = &values[base + off + b * stride];
                            match &mat[a * mu + b] {
                                None => acc.add_ref(v),
                                Some(w) => acc.add_ref(&v.mul_ref(w)),
                            }
                        }
                        *out = acc;
                    }
                    for (a, v) in scratch.iter().enumerate() {
                        values[base + off + a * stride] = v.clone();
                    }
                }
            }
        }
        stride = block;
    }
}

/// `f̂(n) = ∫ f ψ̄_n dμ` for every `n < M_N`.
pub fn forward_transform<S: Scalar>(f: &GridFunction<S>) -> Spectrum<S> {
    let group = f.group().clone();
    let mut values = f.values().to_vec();
    tensor_pass(&group, &mut values, true);
    let inv = BigRational::new(1.into(), from_biguint(group.order()).to_integer());
    let values = values.into_iter().map(|v| v.scale_rational(&inv)).collect();
    Spectrum { group, coefficients: Coefficients::Dense(values) }
}

/// `Σ f̂(n) ψ_n`.
pub fn inverse_transform<S: Scalar>(s: &Spectrum<S>) -> Result<GridFunction<S>> {
    let mut values = s.to_dense()?;
    tensor_pass(s.group(), &mut values, false);
    GridFunction::new(s.group(), values)
}

/// `S_n f = Σ_{k<n} f̂(k) ψ_k`, `1 ≤ n ≤ M_N`.
pub fn partial_sum<S: Scalar>(s: &Spectrum<S>, n: u64) -> Result<GridFunction<S>> {
    let limit = s.group().order();
    if n == 0 || BigUint::from(n) > *limit {
        return Err(Error::IndexOutOfRange { index: n.to_string(), limit: limit.to_string() });
    }
    inverse_transform(&s.multiplier(n, |_| S::one())?)
}

/// Float view of any spectrum.
pub fn to_complex_spectrum<S: Scalar>(s: &Spectrum<S>) -> Spectrum<Complex64> {
    let coefficients = match &s.coefficients {
        Coefficients::Dense(v) => Coefficients::Dense(v.iter().map(|c| c.to_complex()).collect()),
        Coefficients::Sparse(b) => Coefficients::Sparse(
            b.iter().map(|b| Block { start: b.start, end: b.end, value: b.value.to_complex() }).collect(),
        ),
    };
    Spectrum { group: s.group.clone(), coefficients }
}

/// Dense length of a spectrum that fits the grid, or the big order otherwise.
pub fn spectrum_len(s: &Spectrum<impl Scalar>) -> Option<usize> {
    s.group().order().to_usize()
}
