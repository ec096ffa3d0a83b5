//! Dirichlet kernels `D_n = Σ_{k<n} ψ_k`.

use num_bigint::BigUint;

use crate::character::{psi_exponents_on_grid, RootTable};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::group::VilenkinGroup;
use crate::rational::big;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirichletMode {
    /// `D_{M_k} = M_k` on `I_k`, 0 elsewhere; only at scale indices.
    Closed,
    /// Literal character sum.
    Brute,
}

/// `ψ_n` sampled on the grid.
pub fn psi_grid<S: Scalar>(group: &VilenkinGroup, n: u64) -> Result<GridFunction<S>> {
    let limit = group.order();
    if BigUint::from(n) >= *limit {
        return Err(Error::IndexOutOfRange { index: n.to_string(), limit: limit.to_string() });
    }
    let roots = RootTable::<S>::for_group(group);
    let exps = psi_exponents_on_grid(group, n);
    GridFunction::new(group, exps.iter().map(|&e| roots.get(e).clone()).collect())
}

pub fn dirichlet<S: Scalar>(group: &VilenkinGroup, n: u64, mode: DirichletMode) -> Result<GridFunction<S>> {
    let limit = group.order();
    if BigUint::from(n) > *limit {
        return Err(Error::IndexOutOfRange { index: n.to_string(), limit: limit.to_string() });
    }
    match mode {
        DirichletMode::Closed => {
            let k = group.scale_index(n).ok_or(Error::NotAScale(n))?;
            scale_kernel(group, k)
        }
        DirichletMode::Brute => {
            let len = group.grid_len()?;
            let order = group.character_order();
            // tally exponents per point, then combine once
            let mut counts = vec![0u64; len * order as usize];
            for j in 0..n {
                for (x, e) in psi_exponents_on_grid(group, j).into_iter().enumerate() {
                    counts[x * order as usize + e as usize] += 1;
                }
            }
            let roots = RootTable::<S>::for_group(group);
            GridFunction::new(
                group,
                (0..len)
                    .map(|x| {
                        let mut acc = S::zero();
                        for e in 0..order {
                            let c = counts[x * order as usize + e as usize];
                            if c > 0 {
                                acc.add_ref(&roots.get(e).scale_rational(&big(c)));
                            }
                        }
                        acc
                    })
                    .collect(),
            )
        }
    }
}

/// `D_{M_k}`: `M_k` on `I_k = {x : x_0 = … = x_{k-1} = 0}`, 0 elsewhere.
pub fn scale_kernel<S: Scalar>(group: &VilenkinGroup, k: usize) -> Result<GridFunction<S>> {
    let mk = group.scale(k);
    let value = S::from_rational(&big(mk));
    GridFunction::from_index_fn(group, |x| if x as u64 % mk == 0 { value.clone() } else { S::zero() })
}

/// Successive kernels `D_1, D_2, …, D_n` built incrementally.
pub struct DirichletSweep<S> {
    group: VilenkinGroup,
    roots: RootTable<S>,
    next: u64,
    current: Vec<S>,
}

impl<S: Scalar> DirichletSweep<S> {
    pub fn new(group: &VilenkinGroup) -> Result<Self> {
        let len = group.grid_len()?;
        Ok(DirichletSweep { group: group.clone(), roots: RootTable::for_group(group), next: 0, current: vec![S::zero(); len] })
    }

    /// Advance to `D_{k+1}` and return it together with `k + 1`.
    pub fn advance(&mut self) -> Option<(u64, &[S])> {
        if BigUint::from(self.next) >= *self.group.order() {
            return None;
        }
        for (x, e) in psi_exponents_on_grid(&self.group, self.next).into_iter().enumerate() {
            self.current[x].add_ref(self.roots.get(e));
        }
        self.next += 1;
        Some((self.next, &self.current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::group::{make_group, Point};
    use num_complex::Complex64;

    #[test]
    fn closed_equals_brute_at_scales() {
        let g = make_group(&[2, 3, 2], 3).unwrap();
        for k in 0..=3 {
            let n = g.scale(k);
            let c: GridFunction<Cyclotomic> = dirichlet(&g, n, DirichletMode::Closed).unwrap();
            let b: GridFunction<Cyclotomic> = dirichlet(&g, n, DirichletMode::Brute).unwrap();
            assert_eq!(c, b);
        }
        assert!(matches!(dirichlet::<Complex64>(&g, 3, DirichletMode::Closed), Err(Error::NotAScale(3))));
    }

    #[test]
    fn small_walsh_kernels() {
        let w = VilenkinGroup::walsh(2).unwrap();
        let d2: GridFunction<Cyclotomic> = dirichlet(&w, 2, DirichletMode::Closed).unwrap();
        let two = Cyclotomic::rational(big(2));
        for x in 0..4 {
            let want = if x % 2 == 0 { two.clone() } else { Cyclotomic::zero() };
            assert_eq!(*d2.value(x), want);
        }
        let d1: GridFunction<Cyclotomic> = dirichlet(&w, 1, DirichletMode::Brute).unwrap();
        assert!(d1.values().iter().all(|v| *v == Cyclotomic::one()));
        let d3: GridFunction<Cyclotomic> = dirichlet(&w, 3, DirichletMode::Brute).unwrap();
        let x = Point::new(&w, vec![0, 1]).unwrap();
        assert_eq!(*d3.at(&x), Cyclotomic::one());
    }

    #[test]
    fn sweep_matches_brute() {
        let g = make_group(&[3, 2], 2).unwrap();
        let mut sweep = DirichletSweep::<Cyclotomic>::new(&g).unwrap();
        while let Some((n, values)) = sweep.advance() {
            let values = values.to_vec();
            let b: GridFunction<Cyclotomic> = dirichlet(&g, n, DirichletMode::Brute).unwrap();
            assert_eq!(values, b.values());
        }
    }
}
