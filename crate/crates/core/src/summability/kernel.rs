//! Nörlund kernels `F_n = (1/Q_n) Σ_{k=1}^n q_{n−k} D_k` and the kernel domination proxy.

use num_bigint::BigUint;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dirichlet::DirichletSweep;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::group::{translate_index, Sign, VilenkinGroup};
use crate::scalar::Scalar;
use crate::summability::weights::{make_weights, SchemeKind, WeightScheme};
use crate::transform::{inverse_transform, Spectrum};

#[derive(Clone, Debug)]
pub struct KernelFunction<S> {
    pub n: u64,
    pub scheme: String,
    pub values: GridFunction<S>,
}

fn check_n(group: &VilenkinGroup, scheme: &WeightScheme, n: u64) -> Result<()> {
    if n == 0 || BigUint::from(n) > *group.order() {
        return Err(Error::IndexOutOfRange { index: n.to_string(), limit: group.order().to_string() });
    }
    scheme.check_index(n)
}

/// Kernel by summing Dirichlet kernels `D_1, …, D_n`.
pub fn norlund_kernel<S: Scalar>(group: &VilenkinGroup, scheme: &WeightScheme, n: u64) -> Result<KernelFunction<S>> {
    check_n(group, scheme, n)?;
    let mut sweep = DirichletSweep::<S>::new(group)?;
    let mut acc = vec![S::zero(); group.grid_len()?];
    while let Some((k, dk)) = sweep.advance() {
        let exact = if S::EXACT { scheme.exact_mean_weight(n, k) } else { None };
        let w = S::from_real(exact.as_ref(), scheme.mean_weight(n, k))?;
        if !w.is_zero() {
            for (a, d) in acc.iter_mut().zip(dk) {
                a.add_ref(&d.mul_ref(&w));
            }
        }
        if k == n {
            break;
        }
    }
    let exact = if S::EXACT { scheme.exact_normalizer(n).map(|q| q.recip()) } else { None };
    let inv = S::from_real(exact.as_ref(), 1.0 / scheme.normalizer(n))?;
    Ok(KernelFunction {
        n,
        scheme: scheme.kind().to_string(),
        values: GridFunction::new(group, acc.into_iter().map(|v| v.mul_ref(&inv)).collect())?,
    })
}

/// Same kernel from its spectrum `Σ_{v<n} (Q_{n−v}/Q_n) ψ_v`; float only.
pub fn norlund_kernel_spectral(group: &VilenkinGroup, scheme: &WeightScheme, n: u64) -> Result<GridFunction<Complex64>> {
    check_n(group, scheme, n)?;
    let len = group.grid_len()?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
    for (v, c) in coeffs.iter_mut().enumerate().take(n as usize) {
        *c = Complex64::new(scheme.multiplier(n, v as u64), 0.0);
    }
    inverse_transform(&Spectrum::dense(group, coeffs)?)
}

/// `(f ∗ F)(x) = ∫ f(t) F(x − t) dμ(t)` by direct summation.
pub fn convolve<S: Scalar>(f: &GridFunction<S>, kernel: &GridFunction<S>) -> Result<GridFunction<S>> {
    if f.group() != kernel.group() {
        return Err(Error::GroupMismatch);
    }
    let group = f.group();
    let len = f.len();
    let inv = num_rational::BigRational::new(1.into(), (len as u64).into());
    GridFunction::from_index_fn(group, |x| {
        let mut acc = S::zero();
        for t in 0..len {
            let ft = f.value(t);
            if !ft.is_zero() {
                acc.add_ref(&ft.mul_ref(kernel.value(translate_index(group, x, t, Sign::Minus))));
            }
        }
        acc.scale_rational(&inv)
    })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DominationRatio {
    pub n: u64,
    pub ratio: f64,
    /// Grid points where the comparison sum vanished.
    pub skipped: usize,
}

/// Fejér kernels `K_{M_j}` for every scale of the group, float mode.
pub struct FejerScaleKernels {
    group: VilenkinGroup,
    kernels: Vec<Vec<f64>>,
}

impl FejerScaleKernels {
    pub fn new(group: &VilenkinGroup) -> Result<Self> {
        let top = group.scale(group.level());
        let fejer = make_weights(SchemeKind::Fejer, top as usize)?;
        let kernels = (0..=group.level())
            .map(|j| norlund_kernel_spectral(group, &fejer, group.scale(j)).map(|k| k.abs().values))
            .collect::<Result<Vec<_>>>()?;
        Ok(FejerScaleKernels { group: group.clone(), kernels })
    }
}

/// `sup_x |F_n(x)| / (n^{−α} Σ_{j≤|n|} M_j^α |K_{M_j}(x)|)`, skipping points where the sum vanishes.
pub fn kernel_domination_ratio(
    group: &VilenkinGroup,
    scheme: &WeightScheme,
    alpha: f64,
    n: u64,
) -> Result<DominationRatio> {
    let cache = FejerScaleKernels::new(group)?;
    kernel_domination_with(&cache, scheme, alpha, n)
}

pub fn kernel_domination_with(
    cache: &FejerScaleKernels,
    scheme: &WeightScheme,
    alpha: f64,
    n: u64,
) -> Result<DominationRatio> {
    let group = &cache.group;
    let kernel = norlund_kernel_spectral(group, scheme, n)?;
    let top = group.top_scale(n);
    let nf = (n as f64).powf(-alpha);
    let weights: Vec<f64> = (0..=top).map(|j| (group.scale(j) as f64).powf(alpha)).collect();
    let mut ratio: f64 = 0.0;
    let mut skipped = 0;
    for (x, fx) in kernel.values().iter().enumerate() {
        let den: f64 = nf * (0..=top).map(|j| weights[j] * cache.kernels[j][x]).sum::<f64>();
        if den <= 1e-300 {
            skipped += 1;
            continue;
        }
        ratio = ratio.max(fx.norm() / den);
    }
    Ok(DominationRatio { n, ratio, skipped })
}

/// Ratios for many `n`, in parallel.
pub fn kernel_domination_sweep(
    group: &VilenkinGroup,
    scheme: &WeightScheme,
    alpha: f64,
    ns: &[u64],
) -> Result<Vec<DominationRatio>> {
    let cache = FejerScaleKernels::new(group)?;
    ns.par_iter().map(|&n| kernel_domination_with(&cache, scheme, alpha, n)).collect()
}
