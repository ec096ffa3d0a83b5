//! Generalized Rademacher functions and the Vilenkin system.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Point, VilenkinGroup};
use crate::scalar::{unit_root, Scalar};

/// `r_k(x) = exp(2πi·x_k/m_k)`.
pub fn rademacher(group: &VilenkinGroup, k: usize, x: &Point) -> Result<Complex64> {
    if k >= group.level() {
        return Err(Error::IndexOutOfRange { index: k.to_string(), limit: group.level().to_string() });
    }
    Ok(unit_root(x.digit(k) as u64, group.radix(k) as u64))
}

/// Exponent `e` with `ψ_n(x) = ζ_L^e`, `L = lcm(m_k)`.
pub fn psi_exponent(group: &VilenkinGroup, index_digits: &[u32], point_digits: &[u32]) -> u64 {
    let order = group.character_order();
    let mut e = 0u64;
    for ((&nk, &xk), &m) in index_digits.iter().zip(point_digits).zip(group.radices()) {
        if nk != 0 && xk != 0 {
            e += (nk as u64 * xk as u64 % m as u64) * (order / m as u64);
        }
    }
    e % order
}

/// `ψ_n(x) = Π r_k(x)^{n_k}`.
pub fn psi(group: &VilenkinGroup, n: u64, x: &Point) -> Result<Complex64> {
    psi_in::<Complex64>(group, n, x)
}

/// `ψ_n(x)` in any value mode.
pub fn psi_in<S: Scalar>(group: &VilenkinGroup, n: u64, x: &Point) -> Result<S> {
    let digits = crate::group::digits_of_index(group, n)?;
    let e = psi_exponent(group, &digits.digits, x.digits());
    Ok(S::root_of_unity(e, group.character_order()))
}

/// Powers `ζ_L^e`, `e < L`, for fast character evaluation.
#[derive(Clone, Debug)]
pub struct RootTable<S> {
    order: u64,
    roots: Vec<S>,
}

impl<S: Scalar> RootTable<S> {
    pub fn new(order: u64) -> Self {
        RootTable { order, roots: (0..order).map(|e| S::root_of_unity(e, order)).collect() }
    }

    pub fn for_group(group: &VilenkinGroup) -> Self {
        Self::new(group.character_order())
    }

    pub fn get(&self, e: u64) -> &S {
        &self.roots[(e % self.order) as usize]
    }
}

/// Character exponents of every point of the grid, for one index.
pub(crate) fn psi_exponents_on_grid(group: &VilenkinGroup, n: u64) -> Vec<u64> {
    let len = group.grid_len().expect("dense grid");
    let nd = group.digits(n);
    let order = group.character_order();
    let steps: Vec<u64> = nd
        .iter()
        .zip(group.radices())
        .map(|(&d, &m)| d as u64 * (order / m as u64) % order)
        .collect();
    let mut out = vec![0u64; len];
    // grid position p has digits x_k; exponent Σ x_k·steps_k
    let mut stride = 1usize;
    for (k, &m) in group.radices().iter().enumerate() {
        let step = steps[k];
        if step != 0 {
            let block = stride * m as usize;
            for (p, e) in out.iter_mut().enumerate() {
                let xk = ((p % block) / stride) as u64;
                *e = (*e + xk * step) % order;
            }
        }
        stride *= m as usize;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::group::make_group;

    #[test]
    fn rademacher_values() {
        let g = make_group(&[4, 2], 2).unwrap();
        let x = Point::new(&g, vec![1, 0]).unwrap();
        assert_eq!(rademacher(&g, 0, &x).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(rademacher(&g, 1, &x).unwrap(), Complex64::new(1.0, 0.0));
        let w = VilenkinGroup::walsh(1).unwrap();
        assert_eq!(rademacher(&w, 0, &Point::new(&w, vec![1]).unwrap()).unwrap(), Complex64::new(-1.0, 0.0));
        assert!(rademacher(&w, 1, &Point::identity(&w)).is_err());
    }

    #[test]
    fn walsh_psi_values() {
        let w = VilenkinGroup::walsh(3).unwrap();
        let x = Point::new(&w, vec![1, 1, 0]).unwrap();
        assert_eq!(psi(&w, 3, &x).unwrap(), Complex64::new(1.0, 0.0));
        for p in 0..8 {
            assert_eq!(psi(&w, 0, &Point::at(&w, p)).unwrap(), Complex64::new(1.0, 0.0));
        }
        assert!(psi(&w, 8, &x).is_err());
    }

    #[test]
    fn grid_exponents_match_pointwise() {
        let g = make_group(&[2, 3, 4], 3).unwrap();
        for n in 0..24 {
            let es = psi_exponents_on_grid(&g, n);
            for (p, &e) in es.iter().enumerate() {
                let want = psi_in::<Cyclotomic>(&g, n, &Point::at(&g, p)).unwrap();
                assert_eq!(Cyclotomic::root_of_unity(e, g.character_order()), want);
            }
        }
    }

    #[test]
    fn multiplicative_without_carries() {
        // ψ_a ψ_b = ψ_{a+b} whenever the digit sums do not carry
        let g = make_group(&[2, 3, 2], 3).unwrap();
        for a in 0..12u64 {
            for b in 0..12u64 {
                let (da, db) = (g.digits(a), g.digits(b));
                let carries = da.iter().zip(&db).zip(g.radices()).any(|((&x, &y), &m)| x + y >= m);
                if carries {
                    continue;
                }
                for p in 0..12 {
                    let x = Point::at(&g, p);
                    // brute-force digit product
                    let mut direct = Complex64::new(1.0, 0.0);
                    for k in 0..3 {
                        let r = rademacher(&g, k, &x).unwrap();
                        direct *= r.powu(da[k] + db[k]);
                    }
                    let prod = psi(&g, a, &x).unwrap() * psi(&g, b, &x).unwrap();
                    assert!((prod - direct).norm() < 1e-12);
                }
            }
        }
    }
}
