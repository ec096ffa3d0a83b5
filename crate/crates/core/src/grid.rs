//! Functions on the level-`N` grid.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::{translate_index, Point, Sign, VilenkinGroup};
use crate::rational::from_biguint;
use crate::scalar::Scalar;

/// One value per point of the level-`N` quotient, indexed by grid position.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<S> {
    group: VilenkinGroup,
    values: Vec<S>,
}

/// A real-valued grid function, e.g. `|f|` or a maximal function.
#[derive(Clone, Debug, PartialEq)]
pub struct RealGrid {
    pub group: VilenkinGroup,
    pub values: Vec<f64>,
}

impl<S: Scalar> GridFunction<S> {
    pub fn new(group: &VilenkinGroup, values: Vec<S>) -> Result<Self> {
        let len = group.grid_len()?;
        if values.len() != len {
            return Err(Error::DigitCount { expected: len, got: values.len() });
        }
        Ok(GridFunction { group: group.clone(), values })
    }

    pub fn constant(group: &VilenkinGroup, c: S) -> Result<Self> {
        Ok(GridFunction { group: group.clone(), values: vec![c; group.grid_len()?] })
    }

    pub fn zero(group: &VilenkinGroup) -> Result<Self> {
        Self::constant(group, S::zero())
    }

    /// Values from a function of the grid position.
    pub fn from_index_fn(group: &VilenkinGroup, f: impl Fn(usize) -> S) -> Result<Self> {
        let len = group.grid_len()?;
        Ok(GridFunction { group: group.clone(), values: (0..len).map(f).collect() })
    }

    pub fn from_fn(group: &VilenkinGroup, f: impl Fn(&Point) -> S) -> Result<Self> {
        Self::from_index_fn(group, |i| f(&Point::at(group, i)))
    }

    /// Indicator of the cylinder `I_level(x)` where `x` starts with `prefix`.
    pub fn cylinder_indicator(group: &VilenkinGroup, level: usize, prefix: &[u32]) -> Result<Self> {
        let residue = cylinder_residue(group, level, prefix)?;
        let modulus = group.scale(level) as usize;
        Self::from_index_fn(group, |i| if i % modulus == residue { S::one() } else { S::zero() })
    }

    pub fn group(&self) -> &VilenkinGroup {
        &self.group
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn value(&self, index: usize) -> &S {
        &self.values[index]
    }

    pub fn at(&self, x: &Point) -> &S {
        &self.values[x.grid_index(&self.group)]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `∫ f dμ = (1/M_N) Σ f(x)`.
    pub fn integral(&self) -> S {
        let mut sum = S::zero();
        for v in &self.values {
            sum.add_ref(v);
        }
        let inv = BigRational::new(1.into(), from_biguint(self.group.order()).to_integer());
        sum.scale_rational(&inv)
    }

    /// Average over each level-`k` cylinder (conditional expectation onto level `k`).
    pub fn cylinder_average(&self, level: usize) -> Result<Self> {
        if level > self.group.level() {
            return Err(Error::IndexOutOfRange {
                index: level.to_string(),
                limit: self.group.level().to_string(),
            });
        }
        let modulus = self.group.scale(level) as usize;
        let mut sums = vec![S::zero(); modulus];
        for (i, v) in self.values.iter().enumerate() {
            sums[i % modulus].add_ref(v);
        }
        let count = (self.values.len() / modulus) as u64;
        let inv = BigRational::new(1.into(), count.into());
        let sums: Vec<S> = sums.iter().map(|s| s.scale_rational(&inv)).collect();
        Ok(GridFunction {
            group: self.group.clone(),
            values: (0..self.values.len()).map(|i| sums[i % modulus].clone()).collect(),
        })
    }

    /// `g(x) = f(x − y)`.
    pub fn translate(&self, y: &Point) -> Result<Self> {
        let yi = Point::new(&self.group, y.digits().to_vec())?.grid_index(&self.group);
        Ok(GridFunction {
            group: self.group.clone(),
            values: (0..self.values.len())
                .map(|x| self.values[translate_index(&self.group, x, yi, Sign::Minus)].clone())
                .collect(),
        })
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        GridFunction { group: self.group.clone(), values: self.values.iter().map(f).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(GridFunction {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.mul_ref(c))
    }

    pub fn abs(&self) -> RealGrid {
        RealGrid { group: self.group.clone(), values: self.values.iter().map(|v| v.modulus()).collect() }
    }

    pub fn to_complex(&self) -> GridFunction<Complex64> {
        GridFunction { group: self.group.clone(), values: self.values.iter().map(|v| v.to_complex()).collect() }
    }

    /// `max |f − g|` in floating point.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a.to_complex() - b.to_complex()).norm())
            .fold(0.0, f64::max)
    }

    /// Is `f` constant on every level-`k` cylinder?
    pub fn is_measurable_at(&self, level: usize) -> bool {
        let modulus = self.group.scale(level) as usize;
        (modulus..self.values.len()).all(|i| self.values[i] == self.values[i % modulus])
    }
}

impl GridFunction<Complex64> {
    pub fn from_complex(group: &VilenkinGroup, values: Vec<Complex64>) -> Result<Self> {
        Self::new(group, values)
    }
}

impl RealGrid {
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Pointwise maximum, in place.
    pub fn max_assign(&mut self, other: &RealGrid) {
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            if b > *a {
                *a = b;
            }
        }
    }

    /// `(∫ |g|^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let n = self.values.len() as f64;
        let s: f64 = self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / n;
        s.powf(1.0 / p)
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() / self.values.len() as f64
    }
}

/// Grid residue modulo `M_level` of points whose first `level` digits are `prefix`.
pub fn cylinder_residue(group: &VilenkinGroup, level: usize, prefix: &[u32]) -> Result<usize> {
    if level > group.level() {
        return Err(Error::IndexOutOfRange { index: level.to_string(), limit: group.level().to_string() });
    }
    if prefix.len() != level {
        return Err(Error::DigitCount { expected: level, got: prefix.len() });
    }
    let mut r = 0u64;
    for (k, &d) in prefix.iter().enumerate() {
        let m = group.radix(k);
        if d >= m {
            return Err(Error::InvalidDigit { coordinate: k, digit: d as u64, radix: m });
        }
        r += d as u64 * group.scale(k);
    }
    Ok(r as usize)
}
