//! Truncated power series in `q` with exact rational coefficients.
//!
//! Multiplication clears denominators and convolves integer vectors, using
//! `i128` accumulators whenever a bit-size estimate proves they cannot overflow.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{sigma_table, Rational};
use crate::error::{Error, Result};

/// `sum_{n < P} coeffs[n] q^n`, known exactly up to (not including) `q^P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn from_integers(coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(Rational::from_integer).collect())
    }

    pub fn zero(precision: usize) -> Self {
        Self::new(vec![Rational::zero(); precision])
    }

    pub fn one(precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if precision > 0 {
            s.coeffs[0] = Rational::one();
        }
        s
    }

    /// Number of known coefficients `P`.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `q^n`, or `None` beyond the precision.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, precision: usize) -> Self {
        Self::new(self.coeffs[..precision.min(self.precision())].to_vec())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Common denominator and the integer numerators.
    pub(crate) fn to_integers(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (nums, den)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let len = self.precision().min(rhs.precision());
        let (a, da) = self.truncate(len).to_integers();
        let (b, db) = rhs.truncate(len).to_integers();
        let prod = convolve_strided(&a, &b, 1, len);
        let den = da * db;
        QSeries::new(
            prod.into_iter()
                .map(|n| Rational::new(n, den.clone()))
                .collect(),
        )
    }
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

/// `out[d] = sum_{j >= 0, d - stride*j >= 0} a[j] * b[d - stride*j]` for `d < out_len`.
///
/// Entries of `a` or `b` beyond their length count as zero.
pub(crate) fn convolve_strided(a: &[BigInt], b: &[BigInt], stride: usize, out_len: usize) -> Vec<BigInt> {
    assert!(stride >= 1);
    let terms = out_len / stride + 1;
    let budget = max_bits(a) + max_bits(b) + (terms as f64).log2().ceil() as u64 + 1;
    if budget < 126 {
        let a: Vec<i128> = a.iter().map(|x| x.to_i128().unwrap()).collect();
        let b: Vec<i128> = b.iter().map(|x| x.to_i128().unwrap()).collect();
        (0..out_len)
            .into_par_iter()
            .map(|d| {
                let mut acc = 0i128;
                for (j, aj) in a.iter().enumerate().take(d / stride + 1) {
                    if let Some(bk) = b.get(d - stride * j) {
                        acc += aj * bk;
                    }
                }
                BigInt::from(acc)
            })
            .collect()
    } else {
        (0..out_len)
            .into_par_iter()
            .map(|d| {
                let mut acc = BigInt::zero();
                for (j, aj) in a.iter().enumerate().take(d / stride + 1) {
                    if aj.is_zero() {
                        continue;
                    }
                    if let Some(bk) = b.get(d - stride * j) {
                        if !bk.is_zero() {
                            acc += aj * bk;
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n` or `E_6 = 1 - 504 sum sigma_5(n) q^n` to precision `P`.
pub fn eisenstein(k: u32, precision: usize) -> Result<QSeries> {
    let (power, factor) = match k {
        4 => (3, 240),
        6 => (5, -504),
        _ => return Err(Error::InvalidArgument(format!("eisenstein weight {k} not in {{4, 6}}"))),
    };
    if precision == 0 {
        return Ok(QSeries::zero(0));
    }
    let sig = sigma_table(power, precision - 1);
    let coeffs = sig
        .into_iter()
        .enumerate()
        .map(|(n, s)| if n == 0 { BigInt::one() } else { s * factor });
    Ok(QSeries::from_integers(coeffs))
}

/// `true` when every coefficient is an integer.
pub fn is_integral(s: &QSeries) -> bool {
    s.coeffs().iter().all(|c| c.is_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(v: &[i64]) -> QSeries {
        QSeries::new(v.iter().map(|&x| rat(x)).collect())
    }

    /// Oracle: schoolbook Cauchy product on rationals.
    fn naive_mul(a: &QSeries, b: &QSeries) -> QSeries {
        let len = a.precision().min(b.precision());
        QSeries::new(
            (0..len)
                .map(|n| {
                    (0..=n)
                        .map(|i| &a.coeffs()[i] * &b.coeffs()[n - i])
                        .fold(Rational::zero(), |x, y| x + y)
                })
                .collect(),
        )
    }

    fn random_series(rng: &mut ChaCha8Rng, len: usize) -> QSeries {
        QSeries::new(
            (0..len)
                .map(|_| Rational::new(rng.gen_range(-50i64..50).into(), rng.gen_range(1i64..7).into()))
                .collect(),
        )
    }

    #[test]
    fn named_examples() {
        let p = &series(&[1, 1, 0]) * &series(&[1, -1, 0]);
        assert_eq!(p, series(&[1, 0, -1]));
        let z = series(&[1, 2, 3]).scale(&rat(0));
        assert!(z.is_zero());
        let e4 = eisenstein(4, 10).unwrap();
        assert_eq!(e4.coeff(1), Some(&rat(240)));
        assert_eq!(e4.coeff(2), Some(&rat(2160)));
        let e6 = eisenstein(6, 10).unwrap();
        assert_eq!(e6.coeff(1), Some(&rat(-504)));
        let e4sq = &e4 * &e4;
        assert_eq!(e4sq.coeff(1), Some(&rat(480)));
        assert_eq!(e4sq, naive_mul(&e4, &e4));
        assert!(eisenstein(8, 10).is_err());
    }

    #[test]
    fn precision_is_minimum() {
        let a = series(&[1, 2, 3, 4]);
        let b = series(&[1, 1]);
        assert_eq!((&a * &b).precision(), 2);
        assert_eq!((&a + &b).precision(), 2);
        assert_eq!(a.coeff(4), None);
    }

    #[test]
    fn ring_axioms_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let a = random_series(&mut rng, 50);
            let b = random_series(&mut rng, 50);
            let c = random_series(&mut rng, 50);
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&a * &b, naive_mul(&a, &b));
            assert_eq!(&a * &QSeries::one(50), a);
        }
    }

    #[test]
    fn bigint_path_matches_i128_path() {
        let big: BigInt = BigInt::from(10).pow(30);
        let a = QSeries::from_integers((0..40).map(|i| &big * (i + 1)));
        let b = QSeries::from_integers((0..40).map(|i| &big * (2 * i - 7)));
        assert_eq!(&a * &b, naive_mul(&a, &b));
    }

    #[test]
    fn discriminant_form_is_integral() {
        let e4 = eisenstein(4, 200).unwrap();
        let e6 = eisenstein(6, 200).unwrap();
        let delta = (&(&(&e4 * &e4) * &e4) - &(&e6 * &e6)).scale(&Rational::new(1.into(), 1728.into()));
        assert_eq!(delta.coeff(0), Some(&rat(0)));
        assert_eq!(delta.coeff(1), Some(&rat(1)));
        assert_eq!(delta.coeff(2), Some(&rat(-24)));
        assert_eq!(delta.coeff(3), Some(&rat(252)));
        assert!(is_integral(&delta));
    }

    #[test]
    fn strided_convolution() {
        let a: Vec<BigInt> = [1, 2, 3].iter().map(|&x| BigInt::from(x)).collect();
        let b: Vec<BigInt> = (0..10).map(BigInt::from).collect();
        let out = convolve_strided(&a, &b, 4, 10);
        // out[9] = a0 b9 + a1 b5 + a2 b1
        assert_eq!(out[9], BigInt::from(9 + 2 * 5 + 3));
        assert_eq!(out[3], BigInt::from(3));
    }
}
