//! Exact arithmetic in cyclotomic fields `Q(ζ_L)`.
//!
//! Character values of a bounded Vilenkin group are roots of unity of order
//! dividing `L = lcm(m_k)`, so every transform, mean and kernel of a
//! rational-valued function lands in `Q(ζ_L)`. Elements are stored in the
//! power basis `1, ζ, …, ζ^{φ(L)-1}`, reduced modulo the cyclotomic polynomial
//! `Φ_L`, which makes the representation canonical for a fixed `L`.
//! Rational elements are always stored with `L = 1`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::{format_rational, to_f64};

fn poly_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = exact_divide(&num, &div);
        }
    }
    let p = Arc::new(num);
    poly_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    debug_assert!(lead == 1);
    let qlen = rem.len() - dd;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    while quot.len() > 1 && *quot.last().unwrap() == 0 {
        quot.pop();
    }
    quot
}

/// An element of `Q(ζ_order)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn rational(r: BigRational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![r] }
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    /// `exp(2πi·k/m)` as an exact field element.
    pub fn root_of_unity(k: u64, m: u64) -> Self {
        assert!(m >= 1);
        let k = k % m;
        let g = k.gcd(&m);
        let (k, m) = if k == 0 { (0, 1) } else { (k / g, m / g) };
        if m == 1 {
            return Self::one();
        }
        if m == 2 {
            return Self::rational(-BigRational::one());
        }
        let mut poly = vec![BigRational::zero(); k as usize + 1];
        poly[k as usize] = BigRational::one();
        Self::from_poly(m, poly)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients in the reduced power basis of `ζ_order`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn from_poly(order: u64, mut poly: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        if poly.len() > deg {
            for i in (deg..poly.len()).rev() {
                let c = std::mem::take(&mut poly[i]);
                if c.is_zero() {
                    continue;
                }
                for (j, &pj) in phi.iter().enumerate().take(deg) {
                    if pj != 0 {
                        let t = &c * BigRational::from_integer(pj.into());
                        poly[i - deg + j] -= t;
                    }
                }
            }
            poly.truncate(deg);
        }
        poly.resize(deg.max(1), BigRational::zero());
        let mut out = Cyclotomic { order, coeffs: poly };
        out.lower();
        out
    }

    /// Drop to `order = 1` when the element is rational.
    fn lower(&mut self) {
        if self.order != 1 && self.coeffs.iter().skip(1).all(Zero::is_zero) {
            let c = std::mem::take(&mut self.coeffs[0]);
            self.order = 1;
            self.coeffs = vec![c];
        }
    }

    fn lift(&self, order: u64) -> Vec<BigRational> {
        if self.order == order {
            return self.coeffs.clone();
        }
        debug_assert!(order % self.order == 0);
        let step = (order / self.order) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::from_poly(order, poly).coeffs_at(order)
    }

    fn coeffs_at(self, order: u64) -> Vec<BigRational> {
        if self.order == order {
            self.coeffs
        } else {
            // rational after reduction
            let deg = cyclotomic_polynomial(order).len() - 1;
            let mut v = vec![BigRational::zero(); deg.max(1)];
            v[0] = self.coeffs[0].clone();
            v
        }
    }

    fn common(a: &Self, b: &Self) -> (u64, Vec<BigRational>, Vec<BigRational>) {
        let order = a.order.lcm(&b.order);
        (order, a.lift(order), b.lift(order))
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.order == 1).then(|| self.coeffs[0].clone())
    }

    pub fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(n - i) % n] += c;
        }
        Self::from_poly(self.order, poly)
    }

    /// `|z|²` when it is rational (always true for real or Gaussian-type values).
    pub fn norm_sqr_rational(&self) -> Option<BigRational> {
        (self.clone() * self.conj()).as_rational()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.order == 1 {
            return Complex64::new(to_f64(&self.coeffs[0]), 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += crate::scalar::unit_root(i as u64, self.order) * to_f64(c);
            }
        }
        acc
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = Self::common(self, other);
        a == b
    }
}

impl Eq for Cyclotomic {}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(mut self, rhs: Cyclotomic) -> Cyclotomic {
        self += rhs;
        self
    }
}

impl AddAssign for Cyclotomic {
    fn add_assign(&mut self, rhs: Cyclotomic) {
        *self += &rhs;
    }
}

impl<'a> AddAssign<&'a Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &'a Cyclotomic) {
        if rhs.is_zero() {
            return;
        }
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
            self.lower();
            return;
        }
        let (order, mut a, b) = Self::common(self, rhs);
        for (x, y) in a.iter_mut().zip(&b) {
            *x += y;
        }
        self.order = order;
        self.coeffs = a;
        self.lower();
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(mut self, rhs: Cyclotomic) -> Cyclotomic {
        self -= rhs;
        self
    }
}

impl SubAssign for Cyclotomic {
    fn sub_assign(&mut self, rhs: Cyclotomic) {
        *self += &(-rhs);
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        if self.order == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (order, a, b) = Cyclotomic::common(self, rhs);
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_poly(order, prod)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return f.write_str(&format_rational(&self.coeffs[0]));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                _ => write!(f, "({})*z{}^{}", format_rational(c), self.order, i)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
