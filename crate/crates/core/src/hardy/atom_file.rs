//! JSON atom files.
//!
//! ```json
//! { "radices": [2, 2, 2], "level": 3, "p": "1/2",
//!   "support_level": 1, "base": [0], "values": ["2", "-2", "2", "-2"] }
//! ```
//!
//! `values` lists the atom on its support cylinder in ascending grid order
//! (`M_N / M_k` entries). Entries are `"p/q"` strings, plain numbers, or `[re, im]`.

use std::path::Path;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::grid::{cylinder_residue, GridFunction};
use crate::group::{make_group, VilenkinGroup};
use crate::hardy::atom::Atom;
use crate::rational::{format_rational, parse_rational};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomValue {
    Exact(String),
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomFile {
    pub radices: Vec<u32>,
    pub level: usize,
    pub p: String,
    pub support_level: usize,
    pub base: Vec<u32>,
    pub values: Vec<AtomValue>,
}

impl AtomFile {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn group(&self) -> Result<VilenkinGroup> {
        make_group(&self.radices, self.level)
    }

    pub fn p(&self) -> Result<BigRational> {
        parse_rational(&self.p)
    }

    fn build<S: Scalar>(&self, convert: impl Fn(&AtomValue) -> Result<S>) -> Result<Atom<S>> {
        let g = self.group()?;
        let residue = cylinder_residue(&g, self.support_level, &self.base)?;
        let step = g.scale(self.support_level) as usize;
        let len = g.grid_len()?;
        if self.values.len() != len / step {
            return Err(Error::DigitCount { expected: len / step, got: self.values.len() });
        }
        let mut values = vec![S::zero(); len];
        for (j, v) in self.values.iter().enumerate() {
            values[residue + j * step] = convert(v)?;
        }
        Atom::new(self.support_level, self.base.clone(), GridFunction::new(&g, values)?)
    }

    /// Exact atom; every entry must be a rational (string or integer-valued number).
    pub fn to_exact(&self) -> Result<Atom<Cyclotomic>> {
        self.build(|v| match v {
            AtomValue::Exact(s) => Ok(Cyclotomic::rational(parse_rational(s)?)),
            AtomValue::Real(x) => Ok(Cyclotomic::rational(parse_rational(&format!("{x}"))?)),
            AtomValue::Complex(_) => Err(Error::Inexact("complex float entry in an exact atom".into())),
        })
    }

    pub fn to_float(&self) -> Result<Atom<Complex64>> {
        self.build(|v| match v {
            AtomValue::Exact(s) => Ok(Complex64::new(crate::rational::to_f64(&parse_rational(s)?), 0.0)),
            AtomValue::Real(x) => Ok(Complex64::new(*x, 0.0)),
            AtomValue::Complex([re, im]) => Ok(Complex64::new(*re, *im)),
        })
    }

    /// Describe a rational-valued exact atom.
    pub fn from_exact(atom: &Atom<Cyclotomic>, p: &BigRational) -> Result<Self> {
        let g = atom.group();
        let residue = cylinder_residue(g, atom.support_level, &atom.base)?;
        let step = g.scale(atom.support_level) as usize;
        let values = (residue..atom.values.len())
            .step_by(step)
            .map(|x| {
                atom.values
                    .value(x)
                    .as_rational()
                    .map(|r| AtomValue::Exact(format_rational(&r)))
                    .ok_or_else(|| Error::Inexact("atom value is not rational".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AtomFile {
            radices: g.radices().to_vec(),
            level: g.level(),
            p: format_rational(p),
            support_level: atom.support_level,
            base: atom.base.clone(),
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::atom::validate_atom;

    #[test]
    fn parse_and_round_trip() {
        let text = r#"{"radices":[2,2,2],"level":3,"p":"1/2","support_level":1,"base":[0],"values":["2","-2",2,-2]}"#;
        let file: AtomFile = serde_json::from_str(text).unwrap();
        let atom = file.to_exact().unwrap();
        assert!(validate_atom(&atom, &file.p().unwrap()).unwrap().valid());
        assert_eq!(atom.values.value(1).clone(), Cyclotomic::zero());
        assert_eq!(atom.values.value(2).clone(), Cyclotomic::rational(parse_rational("-2").unwrap()));
        let back = AtomFile::from_exact(&atom, &file.p().unwrap()).unwrap();
        assert_eq!(back.to_exact().unwrap(), atom);
        let float = file.to_float().unwrap();
        assert_eq!(float.values.value(4).re, 2.0);
        let short: AtomFile = serde_json::from_str(&text.replace(",-2]", "]")).unwrap();
        assert!(short.to_exact().is_err());
    }
}
