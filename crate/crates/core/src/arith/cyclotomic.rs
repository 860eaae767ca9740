//! Exact elements of cyclotomic fields.
//!
//! An element of `Q(ζ_n)` is stored as its coordinate vector in the power basis
//! `1, ζ_n, …, ζ_n^{φ(n)-1}`, reduced modulo the cyclotomic polynomial `Φ_n`.
//! Elements living in different fields are lifted to the compositum
//! `Q(ζ_lcm)` before any binary operation, so equality is field-independent.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{divisors, euler_totient, lcm_u64, Rational};

fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Φ_n = (x^n - 1) / ∏_{d | n, d < n} Φ_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n as u64) {
        if d as u32 == n {
            continue;
        }
        num = poly_div_exact(&num, &cyclotomic_poly(d as u32));
    }
    let poly = Arc::new(num);
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `e^{2πi·exp/order}`.
    pub fn root_of_unity(order: u32, exp: u32) -> Self {
        assert!(order >= 1);
        let mut poly = vec![Rational::zero(); order as usize];
        poly[(exp % order) as usize] = Rational::one();
        Self::from_poly(order, poly)
    }

    /// `sum_j counts[j] · ζ_order^j`.
    pub fn from_exponent_weights(order: u32, weights: Vec<Rational>) -> Self {
        assert_eq!(weights.len(), order as usize);
        Self::from_poly(order, weights)
    }

    fn from_poly(order: u32, mut poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        for i in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    let shift = i - deg + j;
                    poly[shift] -= &c * Rational::from_integer(BigInt::from(pj));
                }
            }
        }
        poly.truncate(deg);
        poly.resize(deg, Rational::zero());
        let mut out = Self {
            order,
            coeffs: poly,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.order != 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            self.order = 1;
            self.coeffs.truncate(1);
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    fn lift(&self, order: u32) -> Self {
        if order == self.order {
            return self.clone();
        }
        debug_assert_eq!(order % self.order, 0);
        let step = (order / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        let mut lifted = Self::from_poly(order, poly);
        // from_poly may normalize back down; keep the requested field.
        if lifted.order != order {
            let deg = euler_totient(order as u64) as usize;
            let mut coeffs = vec![Rational::zero(); deg];
            coeffs[0] = lifted.coeffs[0].clone();
            lifted = Self { order, coeffs };
        }
        lifted
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let l = lcm_u64(a.order as u64, b.order as u64) as u32;
        (a.lift(l), b.lift(l))
    }

    pub fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut poly = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(n - i) % n] += c;
        }
        Self::from_poly(self.order, poly)
    }

    /// `|x|^2 = x · conj(x)`, exactly.
    pub fn norm_sq(&self) -> Self {
        if let Some(q) = self.as_rational() {
            return Self::from_rational(q * q);
        }
        self * &self.conj()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        };
        out.normalize();
        out
    }

    /// Complex embedding with `ζ_n ↦ e^{2πi/n}`.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    /// `|x|^2` as a float, computed exactly and converted once.
    pub fn norm_sq_f64(&self) -> f64 {
        let n = self.norm_sq();
        match n.as_rational() {
            Some(q) => q.to_f64().unwrap_or(f64::NAN),
            None => n.to_complex().0,
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == 1 && rhs.order == 1 {
            return Cyclotomic::from_rational(&self.coeffs[0] + &rhs.coeffs[0]);
        }
        let (mut a, b) = Cyclotomic::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a.normalize();
        a
    }
}

impl Add<&Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn add(mut self, rhs: &Cyclotomic) -> Cyclotomic {
        self += rhs;
        self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == 1 && rhs.order == 1 {
            self.coeffs[0] += &rhs.coeffs[0];
        } else {
            *self = &*self + rhs;
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (a, b) = Cyclotomic::common(self, rhs);
        let mut poly = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_poly(a.order, poly)
    }
}

impl fmt::Display for Cyclotomic {
    /// Rationals print as `p` or `p/q`; other values as a polynomial in `zN = e^{2πi/N}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z{}^{i}", self.order)?,
                _ => write!(f, "{mag}*z{}^{i}", self.order)?,
            }
        }
        Ok(())
    }
}
