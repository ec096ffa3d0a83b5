//! Bounded Vilenkin groups truncated at a finite level.
//!
//! A point `x = (x_0, …, x_{N-1})` of the level-`N` quotient is stored by its
//! digits and enumerated on the grid by `Σ x_k M_k`, the same mixed-radix
//! numbering used for character indices. Cylinders `I_k(x)` are then residue
//! classes modulo `M_k`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest grid allowed for dense representations (points).
pub const DENSE_LIMIT: usize = 1 << 22;

/// A radix sequence described either explicitly or as a repeating cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadixSequence {
    Explicit(Vec<u32>),
    Cycle(Vec<u32>),
}

impl RadixSequence {
    pub fn walsh() -> Self {
        RadixSequence::Cycle(vec![2])
    }

    /// Radix `m_k`, if the sequence reaches coordinate `k`.
    pub fn radix(&self, k: usize) -> Option<u32> {
        match self {
            RadixSequence::Explicit(v) => v.get(k).copied(),
            RadixSequence::Cycle(v) if v.is_empty() => None,
            RadixSequence::Cycle(v) => Some(v[k % v.len()]),
        }
    }

    pub fn take(&self, level: usize) -> Result<Vec<u32>> {
        (0..level)
            .map(|k| {
                self.radix(k).ok_or(Error::ShortRadices {
                    available: match self {
                        RadixSequence::Explicit(v) => v.len(),
                        RadixSequence::Cycle(_) => 0,
                    },
                    level,
                })
            })
            .collect()
    }

    /// Fixed-width truncation.
    pub fn group(&self, level: usize) -> Result<VilenkinGroup> {
        VilenkinGroup::new(&self.take(level)?)
    }

    /// Truncation whose scales are only held as big integers.
    pub fn unbounded_group(&self, level: usize) -> Result<VilenkinGroup> {
        VilenkinGroup::unbounded(&self.take(level)?)
    }

    /// `sup m_k` over the first `level` coordinates.
    pub fn lambda(&self, level: usize) -> Result<u32> {
        Ok(self.take(level)?.into_iter().max().unwrap_or(2))
    }
}

#[derive(Debug)]
struct GroupInner {
    radices: Vec<u32>,
    scales: Vec<BigUint>,
    small_scales: Option<Vec<u64>>,
    lambda: u32,
    character_order: u64,
}

/// The level-`N` truncation of a bounded Vilenkin group.
///
/// Cheap to clone; all data is shared.
#[derive(Clone)]
pub struct VilenkinGroup {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for VilenkinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VilenkinGroup")
            .field("radices", &self.inner.radices)
            .finish()
    }
}

impl PartialEq for VilenkinGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.radices == other.inner.radices
    }
}

impl Eq for VilenkinGroup {}

/// Build the truncation with radices `m_0, …, m_{level-1}`.
pub fn make_group(radices: &[u32], level: usize) -> Result<VilenkinGroup> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    if radices.len() < level {
        return Err(Error::ShortRadices { available: radices.len(), level });
    }
    VilenkinGroup::new(&radices[..level])
}

impl VilenkinGroup {
    /// Fixed-width group: every scale must fit in `u64`.
    pub fn new(radices: &[u32]) -> Result<Self> {
        let g = Self::unbounded(radices)?;
        if g.inner.small_scales.is_none() {
            let level = g
                .inner
                .scales
                .iter()
                .position(|s| s.to_u64().is_none())
                .unwrap_or(radices.len());
            return Err(Error::ScaleOverflow { level });
        }
        Ok(g)
    }

    /// Group whose scales may exceed `u64`; grid operations still require a dense-size grid.
    pub fn unbounded(radices: &[u32]) -> Result<Self> {
        if radices.is_empty() {
            return Err(Error::ZeroLevel);
        }
        if let Some((index, &radix)) = radices.iter().enumerate().find(|(_, &m)| m < 2) {
            return Err(Error::InvalidRadix { index, radix: radix as u64 });
        }
        let mut scales = Vec::with_capacity(radices.len() + 1);
        scales.push(BigUint::one());
        for &m in radices {
            let next = scales.last().unwrap() * BigUint::from(m);
            scales.push(next);
        }
        let small_scales: Option<Vec<u64>> = scales.iter().map(|s| s.to_u64()).collect();
        let lambda = *radices.iter().max().unwrap();
        let character_order = radices.iter().fold(1u64, |acc, &m| acc.lcm(&(m as u64)));
        Ok(VilenkinGroup {
            inner: Arc::new(GroupInner {
                radices: radices.to_vec(),
                scales,
                small_scales,
                lambda,
                character_order,
            }),
        })
    }

    pub fn walsh(level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        Self::new(&vec![2; level])
    }

    pub fn level(&self) -> usize {
        self.inner.radices.len()
    }

    pub fn radices(&self) -> &[u32] {
        &self.inner.radices
    }

    pub fn radix(&self, k: usize) -> u32 {
        self.inner.radices[k]
    }

    /// `λ = max m_k` over the retained coordinates.
    pub fn lambda(&self) -> u32 {
        self.inner.lambda
    }

    /// `lcm(m_k)`: every character value is a root of unity of this order.
    pub fn character_order(&self) -> u64 {
        self.inner.character_order
    }

    pub fn is_walsh(&self) -> bool {
        self.inner.lambda == 2
    }

    /// `M_k` for `k ≤ N`.
    ///
    /// Panics if the scale exceeds `u64`, which can only happen for groups built with
    /// [`VilenkinGroup::unbounded`]; use [`VilenkinGroup::big_scale`] there.
    pub fn scale(&self, k: usize) -> u64 {
        self.inner
            .small_scales
            .as_ref()
            .map(|s| s[k])
            .expect("scale exceeds u64; use big_scale")
    }

    pub fn big_scale(&self, k: usize) -> &BigUint {
        &self.inner.scales[k]
    }

    pub fn scales(&self) -> Option<&[u64]> {
        self.inner.small_scales.as_deref()
    }

    /// `M_N`, the order of the truncated group.
    pub fn order(&self) -> &BigUint {
        self.inner.scales.last().unwrap()
    }

    /// Number of grid points, if a dense grid is allowed.
    pub fn grid_len(&self) -> Result<usize> {
        match self.order().to_usize() {
            Some(n) if n <= DENSE_LIMIT => Ok(n),
            _ => Err(Error::GridTooLarge { points: self.order().to_string(), limit: DENSE_LIMIT }),
        }
    }

    /// Same radices cut at a lower level.
    pub fn truncate(&self, level: usize) -> Result<VilenkinGroup> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        if level >= self.level() {
            return Ok(self.clone());
        }
        VilenkinGroup::unbounded(&self.inner.radices[..level])
    }

    /// Is `n` one of the scales `M_0, …, M_N`? Returns `k` with `M_k = n`.
    pub fn scale_index(&self, n: u64) -> Option<usize> {
        self.inner.scales.iter().position(|s| s.to_u64() == Some(n))
    }

    /// Index `|n|` of the largest scale `M_j ≤ n` (`n ≥ 1`).
    pub fn top_scale(&self, n: u64) -> usize {
        let mut j = 0;
        for (k, s) in self.inner.scales.iter().enumerate() {
            if s.to_u64().is_some_and(|s| s <= n) {
                j = k;
            }
        }
        j
    }

    /// Digits of a grid position (same expansion as character indices).
    pub fn digits(&self, mut n: u64) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.level());
        for &m in &self.inner.radices {
            out.push((n % m as u64) as u32);
            n /= m as u64;
        }
        out
    }

    fn check_digits(&self, digits: &[u32]) -> Result<()> {
        if digits.len() != self.level() {
            return Err(Error::DigitCount { expected: self.level(), got: digits.len() });
        }
        for (k, (&d, &m)) in digits.iter().zip(&self.inner.radices).enumerate() {
            if d >= m {
                return Err(Error::InvalidDigit { coordinate: k, digit: d as u64, radix: m });
            }
        }
        Ok(())
    }

    pub fn index_of_digits(&self, digits: &[u32]) -> u64 {
        digits
            .iter()
            .zip(self.inner.small_scales.as_ref().expect("fixed-width scales"))
            .map(|(&d, &s)| d as u64 * s)
            .sum()
    }
}

/// A point of the level-`N` quotient, digits little-endian.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    digits: Vec<u32>,
}

impl Point {
    pub fn new(group: &VilenkinGroup, digits: Vec<u32>) -> Result<Self> {
        group.check_digits(&digits)?;
        Ok(Point { digits })
    }

    pub fn identity(group: &VilenkinGroup) -> Self {
        Point { digits: vec![0; group.level()] }
    }

    /// Point at grid position `index`.
    pub fn at(group: &VilenkinGroup, index: usize) -> Self {
        Point { digits: group.digits(index as u64) }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit(&self, k: usize) -> u32 {
        self.digits[k]
    }

    pub fn grid_index(&self, group: &VilenkinGroup) -> usize {
        group.index_of_digits(&self.digits) as usize
    }

    pub fn is_identity(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }
}

/// Unique expansion `n = Σ n_j M_j` with `n_j ∈ Z_{m_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexDigits {
    pub n: u64,
    pub digits: Vec<u32>,
}

impl IndexDigits {
    pub fn reconstruct(&self, group: &VilenkinGroup) -> u64 {
        group.index_of_digits(&self.digits)
    }
}

/// Digits of an index `0 ≤ n < M_N`.
pub fn digits_of_index(group: &VilenkinGroup, n: u64) -> Result<IndexDigits> {
    let limit = group.order();
    if BigUint::from(n) >= *limit {
        return Err(Error::IndexOutOfRange { index: n.to_string(), limit: limit.to_string() });
    }
    Ok(IndexDigits { n, digits: group.digits(n) })
}

/// Sign of a group translation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Coordinatewise `(x_k ± y_k) mod m_k`.
pub fn group_translate(group: &VilenkinGroup, x: &Point, y: &Point, sign: Sign) -> Result<Point> {
    group.check_digits(&x.digits)?;
    group.check_digits(&y.digits)?;
    let digits = x
        .digits
        .iter()
        .zip(&y.digits)
        .zip(group.radices())
        .map(|((&a, &b), &m)| match sign {
            Sign::Plus => (a + b) % m,
            Sign::Minus => (a + m - b) % m,
        })
        .collect();
    Ok(Point { digits })
}

/// Grid-position form of `x ± y`, used by convolution.
pub(crate) fn translate_index(group: &VilenkinGroup, x: usize, y: usize, sign: Sign) -> usize {
    let mut out = 0u64;
    let (mut a, mut b) = (x as u64, y as u64);
    let mut scale = 1u64;
    for &m in group.radices() {
        let m = m as u64;
        let (da, db) = (a % m, b % m);
        let d = match sign {
            Sign::Plus => (da + db) % m,
            Sign::Minus => (da + m - db) % m,
        };
        out += d * scale;
        scale *= m;
        a /= m;
        b /= m;
    }
    out as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales_and_lambda() {
        let g = make_group(&[2, 3], 2).unwrap();
        assert_eq!(g.scales().unwrap(), &[1, 2, 6]);
        assert_eq!(g.lambda(), 3);
        assert_eq!(make_group(&[2, 2, 2], 3).unwrap().scale(3), 8);
        let g = make_group(&[4], 1).unwrap();
        assert_eq!((g.lambda(), g.scale(1)), (4, 4));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(make_group(&[2, 1], 2), Err(Error::InvalidRadix { index: 1, .. })));
        assert!(matches!(make_group(&[2], 0), Err(Error::ZeroLevel)));
        assert!(matches!(VilenkinGroup::new(&[16; 17]), Err(Error::ScaleOverflow { level: 16 })));
        let big = VilenkinGroup::unbounded(&[16; 17]).unwrap();
        assert_eq!(big.big_scale(17), &BigUint::from(2u8).pow(68));
        assert!(big.grid_len().is_err());
    }

    #[test]
    fn index_digits() {
        let g = make_group(&[2, 3], 2).unwrap();
        assert_eq!(digits_of_index(&g, 5).unwrap().digits, vec![1, 2]);
        assert_eq!(digits_of_index(&g, 0).unwrap().digits, vec![0, 0]);
        assert!(digits_of_index(&g, 6).is_err());
        let w = VilenkinGroup::walsh(3).unwrap();
        let d = digits_of_index(&w, 6).unwrap();
        assert_eq!(d.digits, vec![0, 1, 1]);
        assert_eq!(d.reconstruct(&w), 6);
    }

    #[test]
    fn translation() {
        let g = make_group(&[2, 3], 2).unwrap();
        let x = Point::new(&g, vec![1, 2]).unwrap();
        let sum = group_translate(&g, &x, &x, Sign::Plus).unwrap();
        assert_eq!(sum.digits(), &[0, 1]);
        assert!(group_translate(&g, &x, &x, Sign::Minus).unwrap().is_identity());
        let e = Point::identity(&g);
        assert_eq!(group_translate(&g, &x, &e, Sign::Plus).unwrap(), x);
        assert!(Point::new(&g, vec![2, 0]).is_err());
        for a in 0..6 {
            for b in 0..6 {
                let pa = Point::at(&g, a);
                let pb = Point::at(&g, b);
                let viaop = group_translate(&g, &pa, &pb, Sign::Minus).unwrap();
                assert_eq!(viaop.grid_index(&g), translate_index(&g, a, b, Sign::Minus));
            }
        }
    }

    #[test]
    fn cycle_sequences() {
        let r = RadixSequence::Cycle(vec![2, 3]);
        assert_eq!(r.take(5).unwrap(), vec![2, 3, 2, 3, 2]);
        assert_eq!(r.lambda(4).unwrap(), 3);
        assert!(RadixSequence::Explicit(vec![2]).take(2).is_err());
    }
}
