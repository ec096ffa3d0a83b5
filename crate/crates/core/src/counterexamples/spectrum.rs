//! Block spectra `f̂(j) = c_k` on `[M_{α_k}, M_{α_k+1})`, zero elsewhere.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::counterexamples::sequence::{big_scale, AlphaSequence, Variant};
use crate::error::{Error, Result};
use crate::group::VilenkinGroup;
use crate::rational::{big, big_ln, format_rational, from_biguint, pow, to_f64};
use crate::scalar::Scalar;
use crate::summability::weights::WeightScheme;
use crate::transform::{Block, Spectrum};

/// A real quantity, exact when it is rational.
#[derive(Clone, Debug, PartialEq)]
pub struct RealValue {
    pub exact: Option<BigRational>,
    pub approx: f64,
}

impl RealValue {
    pub fn lift<S: Scalar>(&self) -> Result<S> {
        S::from_real(self.exact.as_ref(), self.approx)
    }
}

impl Serialize for RealValue {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        match &self.exact {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_f64(self.approx),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversarialBlock {
    pub k: usize,
    pub alpha_k: u32,
    #[serde(serialize_with = "ser_big")]
    pub start: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub end: BigUint,
    pub value: RealValue,
    /// Coefficient of the block's atom in the atomic decomposition.
    pub atom_coefficient: f64,
}

fn ser_big<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversarialSpectrum {
    pub sequence: AlphaSequence,
    pub blocks: Vec<AdversarialBlock>,
    /// `Σ λ_k^p` over the built blocks.
    pub coefficient_sum_p: f64,
    pub scheme: Option<String>,
}

/// `c_k = M^{1/p−1}/α_k` (or `(Q_{M+1} M^α/q_0)^{1/2}` for `thm4c`).
pub fn build_adversarial_spectrum(seq: &AlphaSequence, scheme: Option<&WeightScheme>) -> Result<AdversarialSpectrum> {
    let e = seq.p.recip();
    let pf = to_f64(&seq.p);
    let mut blocks = Vec::with_capacity(seq.len());
    let mut sum_p = 0.0;
    for (k, &a) in seq.entries.iter().enumerate() {
        let m = big_scale(&seq.radices, a)?;
        let end = big_scale(&seq.radices, a + 1)?;
        let (value, coefficient) = match seq.variant {
            Variant::Thm4c => {
                let scheme = scheme.ok_or_else(|| Error::Precondition("thm4c needs a weight scheme".into()))?;
                let alpha = to_f64(seq.alpha.as_ref().unwrap());
                let mf = m.to_f64().unwrap_or(f64::INFINITY);
                let ln_q = scheme.big_q((mf + 1.0) as u64).ln();
                let ln_c = 0.5 * (ln_q + alpha * big_ln(&m) - scheme.q0().ln());
                let lambda_k = (ln_c - alpha * big_ln(&m)).exp();
                (RealValue { exact: None, approx: ln_c.exp() }, lambda_k)
            }
            _ => {
                let u = &e - BigRational::one();
                let exact = u.is_integer().then(|| pow(&from_biguint(&m), u.to_integer().to_u32().unwrap()) / big(a as u64));
                let approx = match &exact {
                    Some(r) => to_f64(r),
                    None => (to_f64(&u) * big_ln(&m) - (a as f64).ln()).exp(),
                };
                (RealValue { exact, approx }, seq.lambda as f64 / a as f64)
            }
        };
        sum_p += coefficient.powf(pf);
        blocks.push(AdversarialBlock { k, alpha_k: a, start: m, end, value, atom_coefficient: coefficient });
    }
    Ok(AdversarialSpectrum {
        sequence: seq.clone(),
        blocks,
        coefficient_sum_p: sum_p,
        scheme: scheme.map(|s| s.kind().to_string()),
    })
}

impl AdversarialSpectrum {
    /// Blocks that lie below `M_level`, as a sparse spectrum on the level-`level` group.
    pub fn to_spectrum<S: Scalar>(&self, level: usize) -> Result<Spectrum<S>> {
        let radices = self.sequence.radices.take(level)?;
        let group = VilenkinGroup::new(&radices).or_else(|_| VilenkinGroup::unbounded(&radices))?;
        let top = group.order().clone();
        let mut out = Vec::new();
        for b in &self.blocks {
            if b.end > top {
                break;
            }
            let (Some(start), Some(end)) = (b.start.to_u64(), b.end.to_u64()) else {
                return Err(Error::ScaleOverflow { level: b.alpha_k as usize + 1 });
            };
            out.push(Block { start, end, value: b.value.lift::<S>()? });
        }
        Spectrum::sparse(&group, out)
    }

    pub fn all_exact(&self) -> bool {
        self.blocks.iter().all(|b| b.value.exact.is_some())
    }
}
