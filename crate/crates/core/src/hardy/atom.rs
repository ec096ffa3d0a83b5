//! p-atoms: supported on a cylinder `I`, zero mean, `‖a‖_∞ ≤ μ(I)^{−1/p}`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{cylinder_residue, GridFunction};
use crate::group::{Point, VilenkinGroup};
use crate::rational::{cmp_with_power, to_f64};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<S> {
    /// Level `k` of the support cylinder `I_k(x₀)`.
    pub support_level: usize,
    /// The first `k` digits of `x₀`.
    pub base: Vec<u32>,
    pub values: GridFunction<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomVerdict {
    pub mean_zero: bool,
    pub sup_bounded: bool,
    pub supported: bool,
    /// All three checks were decided in exact arithmetic.
    pub exact: bool,
    pub sup: f64,
    /// `M_k^{1/p}`.
    pub bound: f64,
    pub failures: Vec<String>,
}

impl AtomVerdict {
    pub fn valid(&self) -> bool {
        self.mean_zero && self.sup_bounded && self.supported
    }
}

impl<S: Scalar> Atom<S> {
    pub fn new(support_level: usize, base: Vec<u32>, values: GridFunction<S>) -> Result<Self> {
        cylinder_residue(values.group(), support_level, &base)?;
        Ok(Atom { support_level, base, values })
    }

    pub fn group(&self) -> &VilenkinGroup {
        self.values.group()
    }

    /// Is grid position `x` inside the support cylinder?
    pub fn in_support(&self, x: usize) -> bool {
        let g = self.group();
        let r = cylinder_residue(g, self.support_level, &self.base).expect("validated base");
        x % g.scale(self.support_level) as usize == r
    }

    /// The same atom moved by `y` (support moves to `I_k(x₀ + y)`).
    pub fn translate(&self, y: &Point) -> Result<Self> {
        let g = self.group();
        let digits: Vec<u32> = (0..self.support_level).map(|k| (self.base[k] + y.digit(k)) % g.radix(k)).collect();
        Ok(Atom { support_level: self.support_level, base: digits, values: self.values.translate(y)? })
    }
}

/// Check the three atom conditions; exact for rational-modulus values in exact mode.
pub fn validate_atom<S: Scalar>(a: &Atom<S>, p: &BigRational) -> Result<AtomVerdict> {
    let pf = to_f64(p);
    if !(pf > 0.0 && pf <= 1.0) {
        return Err(Error::Precondition(format!("atoms need 0 < p ≤ 1, got {pf}")));
    }
    let g = a.group();
    let mk: BigUint = g.big_scale(a.support_level).clone();
    let bound = to_f64(&crate::rational::from_biguint(&mk)).powf(1.0 / pf);
    let mut exact = S::EXACT;
    let mut failures = Vec::new();

    let mean = a.values.integral();
    let mean_zero = if S::EXACT { mean.is_zero() } else { mean.modulus() <= 1e-12 };
    if !mean_zero {
        failures.push(format!("mean {:?} is not zero", mean.to_complex()));
    }

    let supported = (0..a.values.len()).all(|x| a.in_support(x) || a.values.value(x).is_zero());
    if !supported {
        failures.push("nonzero values outside the support cylinder".into());
    }

    // |a|² ≤ M_k^{2/p}
    let two_over_p = BigRational::from_integer(2.into()) / p;
    let mut sup: f64 = 0.0;
    let mut sup_bounded = true;
    for v in a.values.values() {
        sup = sup.max(v.modulus());
        let ok = match v.norm_sqr_rational() {
            Some(n2) if S::EXACT => {
                n2 == BigRational::from_integer(0.into()) || cmp_with_power(&n2, &mk, &two_over_p) != Ordering::Greater
            }
            _ => {
                exact = false;
                v.modulus() <= bound * (1.0 + 1e-12)
            }
        };
        sup_bounded &= ok;
    }
    if !sup_bounded {
        failures.push(format!("sup {sup} exceeds M_k^(1/p) = {bound}"));
    }
    Ok(AtomVerdict { mean_zero, sup_bounded, supported, exact, sup, bound, failures })
}
