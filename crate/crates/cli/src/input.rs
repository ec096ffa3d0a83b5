//! Test-function specs: `constant[:c]`, `psi:<n>`, `cylinder:<level>:<digits>`, `file:<path>`,
//! `random[:<seed>]`.

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vilenkin::dirichlet::psi_grid;
use vilenkin::rational::{parse_rational, to_f64};
use vilenkin::{Error, GridFunction, Result, Scalar, VilenkinGroup};

fn lift<S: Scalar>(r: &BigRational) -> Result<S> {
    S::from_real(Some(r), to_f64(r))
}

/// Random values `k/8`, `k ∈ {−8, …, 8}`; identical in both modes.
pub fn random_values(len: usize, seed: u64) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| BigRational::new(rng.random_range(-8i64..=8).into(), 8.into())).collect()
}

fn parse_line<S: Scalar>(line: &str) -> Result<S> {
    if let Some((re, im)) = line.split_once(',') {
        if S::EXACT {
            let re = parse_rational(re.trim())?;
            if parse_rational(im.trim())? == BigRational::from_integer(0.into()) {
                return lift(&re);
            }
            return Err(Error::Inexact(format!("complex value {line:?} in exact mode")));
        }
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad value {t:?}")));
        let z = Complex64::new(parse(re)?, parse(im)?);
        return Ok(S::from_real(None, z.re)? + S::root_of_unity(1, 4) * S::from_real(None, z.im)?);
    }
    lift(&parse_rational(line.trim())?)
}

pub fn build_function<S: Scalar>(spec: &str, group: &VilenkinGroup, seed: u64) -> Result<GridFunction<S>> {
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match head {
        "constant" => {
            let c = if rest.is_empty() { BigRational::from_integer(1.into()) } else { parse_rational(rest)? };
            GridFunction::constant(group, lift(&c)?)
        }
        "psi" => {
            let n: u64 = rest.parse().map_err(|_| Error::Parse(format!("bad character index in {spec:?}")))?;
            psi_grid(group, n)
        }
        "cylinder" => {
            let (level, digits) = rest.split_once(':').unwrap_or((rest, ""));
            let level: usize = level.parse().map_err(|_| Error::Parse(format!("bad cylinder level in {spec:?}")))?;
            let digits: Vec<u32> = digits
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad digit {t:?} in {spec:?}"))))
                .collect::<Result<_>>()?;
            GridFunction::cylinder_indicator(group, level, &digits)
        }
        "file" => {
            let text = std::fs::read_to_string(rest)?;
            let values: Vec<S> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(parse_line::<S>)
                .collect::<Result<_>>()?;
            GridFunction::new(group, values)
        }
        "random" => {
            let seed = if rest.is_empty() { seed } else { rest.parse().map_err(|_| Error::Parse(format!("bad seed in {spec:?}")))? };
            let values = random_values(group.grid_len()?, seed);
            GridFunction::new(group, values.iter().map(lift).collect::<Result<_>>()?)
        }
        _ => Err(Error::Parse(format!(
            "unknown function spec {spec:?} (constant, psi:<n>, cylinder:<level>:<digits>, file:<path>, random:<seed>)"
        ))),
    }
}
