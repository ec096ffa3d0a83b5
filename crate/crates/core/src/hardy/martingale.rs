//! Martingales synthesized from atoms, `f^{(n)} = Σ_k μ_k S_{M_n} a_k`.

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, RealGrid};
use crate::group::VilenkinGroup;
use crate::hardy::atom::{validate_atom, Atom};
use crate::rational::to_f64;
use crate::scalar::Scalar;
use crate::transform::{forward_transform, partial_sum};

#[derive(Clone, Debug)]
pub struct MartingaleSpec<S> {
    pub group: VilenkinGroup,
    pub p: BigRational,
    pub coefficients: Vec<BigRational>,
    pub atoms: Vec<Atom<S>>,
    /// `f^{(0)}, …, f^{(N)}`.
    pub levels: Vec<GridFunction<S>>,
    /// `(Σ |μ_k|^p)^{1/p}`, the coefficient side of the atomic characterization.
    pub coefficient_bound: f64,
}

/// Sum the atoms and take `S_{M_n}` at every level.
pub fn martingale_from_atoms<S: Scalar>(group: &VilenkinGroup, coeffs: &[BigRational], atoms: Vec<Atom<S>>, p: &BigRational) -> Result<MartingaleSpec<S>> {
    if coeffs.len() != atoms.len() {
        return Err(Error::Precondition(format!("{} coefficients for {} atoms", coeffs.len(), atoms.len())));
    }
    for (k, a) in atoms.iter().enumerate() {
        if a.group() != group {
            return Err(Error::GroupMismatch);
        }
        let v = validate_atom(a, p)?;
        if !v.valid() {
            return Err(Error::Precondition(format!("atom {k} is not a p-atom: {}", v.failures.join("; "))));
        }
    }
    let mut sum = GridFunction::<S>::zero(group)?;
    for (mu, a) in coeffs.iter().zip(&atoms) {
        sum = sum.zip_with(&a.values, |s, v| s.clone() + v.scale_rational(mu))?;
    }
    let pf = to_f64(p);
    let coefficient_bound = coeffs.iter().map(|m| to_f64(&m.abs()).powf(pf)).sum::<f64>().powf(1.0 / pf);
    let levels = levels_of(&sum)?;
    Ok(MartingaleSpec { group: group.clone(), p: p.clone(), coefficients: coeffs.to_vec(), atoms, levels, coefficient_bound })
}

/// `S_{M_n} g` for `n = 0…N`; `f^{(0)}` is the zero function since each atom has mean zero.
fn levels_of<S: Scalar>(g: &GridFunction<S>) -> Result<Vec<GridFunction<S>>> {
    let group = g.group();
    let s = forward_transform(g);
    (0..=group.level()).map(|n| partial_sum(&s, group.scale(n))).collect()
}

impl<S: Scalar> MartingaleSpec<S> {
    /// The martingale `(S_{M_n} g)_n` of an arbitrary grid function.
    pub fn from_function(g: &GridFunction<S>, p: &BigRational) -> Result<Self> {
        Ok(MartingaleSpec {
            group: g.group().clone(),
            p: p.clone(),
            coefficients: Vec::new(),
            atoms: Vec::new(),
            levels: levels_of(g)?,
            coefficient_bound: 0.0,
        })
    }

    /// `E_n f^{(n+1)} = f^{(n)}` and level-`n` measurability, exactly in exact mode.
    pub fn is_martingale(&self) -> Result<bool> {
        for n in 0..self.levels.len() {
            if !self.levels[n].is_measurable_at(n) {
                return Ok(false);
            }
            if n + 1 < self.levels.len() {
                let e = self.levels[n + 1].cylinder_average(n)?;
                let same = if S::EXACT { e == self.levels[n] } else { e.max_abs_diff(&self.levels[n]) <= 1e-12 };
                if !same {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct MaximalFunction {
    pub values: RealGrid,
    /// `‖f*‖_p` on the truncation.
    pub hp_quasinorm: f64,
}

/// `f* = max_{n ≤ n_max} |f^{(n)}|`.
pub fn maximal_function<S: Scalar>(ms: &MartingaleSpec<S>, n_max: usize) -> Result<MaximalFunction> {
    if n_max >= ms.levels.len() {
        return Err(Error::IndexOutOfRange { index: n_max.to_string(), limit: (ms.levels.len() - 1).to_string() });
    }
    let mut acc = ms.levels[0].abs();
    for level in &ms.levels[1..=n_max] {
        acc.max_assign(&level.abs());
    }
    let hp = acc.lp_norm(to_f64(&ms.p));
    Ok(MaximalFunction { values: acc, hp_quasinorm: hp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::dirichlet::psi_grid;
    use crate::rational::{big, parse_rational};

    #[test]
    fn single_character_atom() {
        let g = VilenkinGroup::walsh(3).unwrap();
        let p = parse_rational("1/2").unwrap();
        let psi1 = psi_grid::<Cyclotomic>(&g, 1).unwrap();
        let a = Atom::new(0, vec![], psi1.clone()).unwrap();
        let ms = martingale_from_atoms(&g, &[big(1)], vec![a], &p).unwrap();
        assert!(ms.levels[0].values().iter().all(|v| v.is_zero()));
        for n in 1..=3 {
            assert_eq!(ms.levels[n], psi1);
        }
        assert!(ms.is_martingale().unwrap());
        let m = maximal_function(&ms, 3).unwrap();
        assert!(m.values.values.iter().all(|&v| v == 1.0));
        assert_eq!(ms.coefficient_bound, 1.0);
    }

    #[test]
    fn empty_and_constant() {
        let g = VilenkinGroup::walsh(2).unwrap();
        let p = parse_rational("1").unwrap();
        let ms = martingale_from_atoms::<Cyclotomic>(&g, &[], vec![], &p).unwrap();
        assert_eq!(ms.coefficient_bound, 0.0);
        assert!(ms.levels.iter().all(|l| l.values().iter().all(|v| v.is_zero())));
        let c = GridFunction::constant(&g, Cyclotomic::rational(big(3))).unwrap();
        let ms = MartingaleSpec::from_function(&c, &p).unwrap();
        assert!(maximal_function(&ms, 2).unwrap().values.values.iter().all(|&v| v == 3.0));
    }

    #[test]
    fn rejects_invalid_atoms() {
        let g = VilenkinGroup::walsh(2).unwrap();
        let p = parse_rational("1").unwrap();
        let bad = Atom::new(0, vec![], GridFunction::constant(&g, Cyclotomic::one()).unwrap()).unwrap();
        assert!(martingale_from_atoms(&g, &[big(1)], vec![bad], &p).is_err());
    }
}
