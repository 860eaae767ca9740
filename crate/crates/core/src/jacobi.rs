//! Jacobi forms on the Fourier side.
//!
//! An index-one form is determined by the single-variable function
//! `c*(D)`, `D = 4n - r^2`, and is stored that way. Forms of higher index
//! (Fourier–Jacobi slices) are stored as explicit `(n, r)` tables.
//!
//! The index-one Eisenstein series have coefficients `H(k-1, D) / H(k-1, 0)`
//! built from Cohen's numbers, and the cusp generators of weight 10 and 12 are
//! the usual combinations with `E_4` and `E_6`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{
    bernoulli, divisors, fundamental_discriminant_decomposition, isqrt, kronecker, moebius,
    quadratic_gen_bernoulli, sigma, Rational,
};
use crate::error::{Error, Result};
use crate::series::{convolve_strided, eisenstein, QSeries};

/// Cohen's number `H(r, N)`.
///
/// `H(r, 0) = -B_{2r}/(2r)`. For `N > 0` it vanishes unless `(-1)^r N ≡ 0, 1 (mod 4)`;
/// then with `(-1)^r N = D f^2`, `D` fundamental,
/// `H(r, N) = L(1-r, χ_D) · sum_{d | f} μ(d) χ_D(d) d^{r-1} σ_{2r-1}(f/d)`
/// and `L(1-r, χ_D) = -B_{r,χ_D} / r`. `H(1, N)` is the Hurwitz class number.
pub fn cohen_h(r: u32, n: u64) -> Rational {
    assert!(r >= 1, "cohen_h: r must be positive");
    if n == 0 {
        return -bernoulli(2 * r) / Rational::from_integer(BigInt::from(2 * r));
    }
    match split(r, n) {
        None => Rational::zero(),
        Some((d0, f)) => l_value(r, d0) * divisor_factor(r, d0, f),
    }
}

fn split(r: u32, n: u64) -> Option<(i64, u64)> {
    let disc = if r % 2 == 1 { -(n as i64) } else { n as i64 };
    fundamental_discriminant_decomposition(disc)
}

/// `L(1 - r, χ_D) = -B_{r,χ_D} / r`.
fn l_value(r: u32, d0: i64) -> Rational {
    -quadratic_gen_bernoulli(r, d0) / Rational::from_integer(BigInt::from(r))
}

fn divisor_factor(r: u32, d0: i64, f: u64) -> Rational {
    let mut s = BigInt::zero();
    for d in divisors(f) {
        let mu = moebius(d);
        if mu == 0 {
            continue;
        }
        let chi = kronecker(d0, d as i64);
        if chi == 0 {
            continue;
        }
        let term = BigInt::from(d).pow(r - 1) * sigma(2 * r - 1, f / d);
        if mu * chi > 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    Rational::from_integer(s)
}

/// `H(r, N)` for all `0 <= N <= bound`, sharing one L-value per fundamental discriminant.
pub fn cohen_h_table(r: u32, bound: u64) -> Vec<Rational> {
    let splits: Vec<Option<(i64, u64)>> = (0..=bound)
        .map(|n| if n == 0 { None } else { split(r, n) })
        .collect();
    let mut fundamentals: Vec<i64> = splits.iter().flatten().map(|&(d0, _)| d0).collect();
    fundamentals.sort_unstable();
    fundamentals.dedup();
    let l_values: HashMap<i64, Rational> = fundamentals
        .par_iter()
        .map(|&d0| (d0, l_value(r, d0)))
        .collect();
    splits
        .par_iter()
        .enumerate()
        .map(|(n, s)| match s {
            _ if n == 0 => cohen_h(r, 0),
            None => Rational::zero(),
            Some((d0, f)) => &l_values[d0] * divisor_factor(r, *d0, *f),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    /// `c*(D)` for `0 <= D <= 4 n_max`.
    IndexOne(Vec<Rational>),
    /// Explicit `c(n, r)`; pairs absent from the map are zero.
    General(BTreeMap<(i64, i64), Rational>),
}

/// A Jacobi form of weight `k` and index `m`, known for `0 <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiForm {
    weight: i64,
    index: u64,
    n_max: u64,
    coeffs: Coeffs,
}

impl JacobiForm {
    /// Index-one form from its table `c*(D)`, `0 <= D <= 4 n_max`.
    pub fn from_index_one_table(weight: i64, table: Vec<Rational>, n_max: u64) -> Result<Self> {
        if (table.len() as u64) < 4 * n_max + 1 {
            return Err(Error::OutOfPrecision {
                needed: 4 * n_max,
                available: table.len() as u64 - 1,
            });
        }
        let mut table = table;
        table.truncate(4 * n_max as usize + 1);
        Ok(Self {
            weight,
            index: 1,
            n_max,
            coeffs: Coeffs::IndexOne(table),
        })
    }

    /// Form of any index from explicit coefficients `c(n, r)` with `0 <= n <= n_max`.
    pub fn from_pairs(
        weight: i64,
        index: u64,
        n_max: u64,
        pairs: impl IntoIterator<Item = ((i64, i64), Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((n, r), v) in pairs {
            if n < 0 || n as u64 > n_max {
                return Err(Error::InvalidArgument(format!("pair ({n}, {r}) outside 0..={n_max}")));
            }
            if 4 * n * index as i64 - r * r < 0 && !v.is_zero() {
                return Err(Error::InvalidArgument(format!("pair ({n}, {r}) has negative discriminant")));
            }
            if !v.is_zero() {
                map.insert((n, r), v);
            }
        }
        Ok(Self {
            weight,
            index,
            n_max,
            coeffs: Coeffs::General(map),
        })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Largest `n` for which every `c(n, r)` is known.
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Largest `D` for which `c*(D)` is known (index one).
    pub fn d_max(&self) -> u64 {
        4 * self.n_max * self.index
    }

    pub fn is_index_one_table(&self) -> bool {
        matches!(self.coeffs, Coeffs::IndexOne(_))
    }

    /// `c(n, r)`, zero when `4nm < r^2`.
    pub fn coeff(&self, n: i64, r: i64) -> Result<Rational> {
        if n < 0 {
            return Ok(Rational::zero());
        }
        if n as u64 > self.n_max {
            return Err(Error::OutOfPrecision {
                needed: n as u64,
                available: self.n_max,
            });
        }
        let disc = 4 * n * self.index as i64 - r * r;
        if disc < 0 {
            return Ok(Rational::zero());
        }
        Ok(match &self.coeffs {
            Coeffs::IndexOne(t) => t[disc as usize].clone(),
            Coeffs::General(map) => map.get(&(n, r)).cloned().unwrap_or_else(Rational::zero),
        })
    }

    /// The common value of `c(n, r)` over `4n - r^2 = D` (index one).
    ///
    /// Discriminants `D ≡ 1, 2 (mod 4)` have no representation and give zero.
    pub fn c_star(&self, d: u64) -> Result<Rational> {
        if self.index != 1 {
            return Err(Error::InvalidArgument(format!("c_star needs index 1, not {}", self.index)));
        }
        if d > self.d_max() {
            return Err(Error::OutOfPrecision {
                needed: d,
                available: self.d_max(),
            });
        }
        match &self.coeffs {
            Coeffs::IndexOne(t) => Ok(t[d as usize].clone()),
            Coeffs::General(_) => {
                let mut value: Option<Rational> = None;
                for r in (d % 2) as i64..=(2 * isqrt(self.n_max)) as i64 + 1 {
                    let num = d as i64 + r * r;
                    if num % 4 != 0 || num / 4 > self.n_max as i64 {
                        continue;
                    }
                    for rr in [r, -r] {
                        let c = self.coeff(num / 4, rr)?;
                        match &value {
                            None => value = Some(c),
                            Some(v) if *v != c => {
                                return Err(Error::InconsistentTable(format!(
                                    "c(n, r) with 4n - r^2 = {d} takes values {v} and {c}"
                                )))
                            }
                            _ => {}
                        }
                    }
                }
                Ok(value.unwrap_or_else(Rational::zero))
            }
        }
    }

    /// All pairs `(n, r)` with `0 <= n <= n_max` and `4nm - r^2 >= 0`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        let m = self.index as i64;
        let mut out = Vec::new();
        for n in 0..=self.n_max as i64 {
            let rmax = isqrt((4 * n * m) as u64) as i64;
            for r in -rmax..=rmax {
                out.push((n, r));
            }
        }
        out
    }

    /// Expands to an explicit `(n, r)` table.
    pub fn to_pairs_form(&self) -> JacobiForm {
        match &self.coeffs {
            Coeffs::General(_) => self.clone(),
            Coeffs::IndexOne(_) => {
                let pairs: Vec<_> = self
                    .pairs()
                    .into_iter()
                    .map(|(n, r)| ((n, r), self.coeff(n, r).expect("pair within precision")))
                    .collect();
                JacobiForm::from_pairs(self.weight, self.index, self.n_max, pairs).expect("valid pairs")
            }
        }
    }

    /// Every stored pair has positive discriminant `4nm - r^2` or a zero coefficient.
    pub fn is_cuspidal(&self) -> bool {
        self.pairs()
            .into_iter()
            .filter(|&(n, r)| 4 * n * self.index as i64 == r * r)
            .all(|(n, r)| self.coeff(n, r).map(|c| c.is_zero()).unwrap_or(false))
    }

    /// `c(n, r) = c(n, -r)` for every stored pair.
    pub fn verify_symmetry(&self) -> bool {
        self.pairs()
            .into_iter()
            .all(|(n, r)| self.coeff(n, r).ok() == self.coeff(n, -r).ok())
    }

    /// `c(n, r)` depends only on `(4nm - r^2, r mod 2m)`; for index one, on `4n - r^2` alone.
    pub fn verify_discriminant_dependence(&self) -> bool {
        let m = self.index as i64;
        let mut seen: HashMap<(i64, i64), Rational> = HashMap::new();
        for (n, r) in self.pairs() {
            let key = (4 * n * m - r * r, r.rem_euclid(2 * m));
            let c = self.coeff(n, r).expect("pair within precision");
            match seen.get(&key) {
                Some(v) if *v != c => return false,
                Some(_) => {}
                None => {
                    seen.insert(key, c);
                }
            }
        }
        true
    }

    /// `c(n, r) = c(n + λr + λ^2 m, r + 2λm)` whenever both pairs are stored.
    pub fn verify_elliptic(&self) -> bool {
        let m = self.index as i64;
        for (n, r) in self.pairs() {
            for lambda in [-2i64, -1, 1, 2] {
                let n2 = n + lambda * r + lambda * lambda * m;
                let r2 = r + 2 * lambda * m;
                if n2 < 0 || n2 as u64 > self.n_max {
                    continue;
                }
                if self.coeff(n, r).ok() != self.coeff(n2, r2).ok() {
                    return false;
                }
            }
        }
        true
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        match &self.coeffs {
            Coeffs::IndexOne(t) => t.iter().all(|c| c.is_integer()),
            Coeffs::General(map) => map.values().all(|c| c.is_integer()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::IndexOne(t) => t.iter().all(Zero::is_zero),
            Coeffs::General(map) => map.values().all(Zero::is_zero),
        }
    }

    pub fn scale(&self, c: &Rational) -> JacobiForm {
        let coeffs = match &self.coeffs {
            Coeffs::IndexOne(t) => Coeffs::IndexOne(t.iter().map(|x| x * c).collect()),
            Coeffs::General(map) => Coeffs::General(
                map.iter()
                    .map(|(k, v)| (*k, v * c))
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            ),
        };
        JacobiForm {
            coeffs,
            ..self.clone()
        }
    }

    /// `self - other`, truncated to the common precision.
    pub fn sub(&self, other: &JacobiForm) -> Result<JacobiForm> {
        if self.weight != other.weight || self.index != other.index {
            return Err(Error::InvalidArgument("weight or index mismatch".into()));
        }
        let n_max = self.n_max.min(other.n_max);
        match (&self.coeffs, &other.coeffs) {
            (Coeffs::IndexOne(a), Coeffs::IndexOne(b)) => {
                let len = 4 * n_max as usize + 1;
                let t = a[..len].iter().zip(&b[..len]).map(|(x, y)| x - y).collect();
                JacobiForm::from_index_one_table(self.weight, t, n_max)
            }
            _ => {
                let (a, b) = (self.to_pairs_form(), other.to_pairs_form());
                let pairs: Vec<_> = a
                    .pairs()
                    .into_iter()
                    .filter(|&(n, _)| n as u64 <= n_max)
                    .map(|(n, r)| Ok(((n, r), a.coeff(n, r)? - b.coeff(n, r)?)))
                    .collect::<Result<_>>()?;
                JacobiForm::from_pairs(self.weight, self.index, n_max, pairs)
            }
        }
    }

    /// Product with a modular form given by its `q`-expansion of weight `series_weight`.
    ///
    /// The series acts on the `n` index: `(A φ)(n, r) = sum_j A_j c(n - j, r)`.
    /// For index one this is the stride-four convolution `sum_j A_j c*(D - 4j)`.
    pub fn mul_series(&self, series: &QSeries, series_weight: i64) -> Result<JacobiForm> {
        if series.precision() == 0 {
            return Err(Error::PrecisionShrunkBelowOne);
        }
        let n_max = self.n_max.min(series.precision() as u64 - 1);
        let (a, da) = series.truncate(n_max as usize + 1).to_integers();
        let weight = self.weight + series_weight;
        match &self.coeffs {
            Coeffs::IndexOne(t) => {
                let len = 4 * n_max as usize + 1;
                let (b, db) = QSeries::new(t[..len].to_vec()).to_integers();
                let prod = convolve_strided(&a, &b, 4, len);
                let den = da * db;
                let table = prod.into_iter().map(|x| Rational::new(x, den.clone())).collect();
                JacobiForm::from_index_one_table(weight, table, n_max)
            }
            Coeffs::General(_) => {
                let m = self.index as i64;
                let rmax = isqrt(4 * n_max * self.index) as i64;
                let columns: Vec<Vec<((i64, i64), Rational)>> = (-rmax..=rmax)
                    .into_par_iter()
                    .map(|r| {
                        let n0 = ((r * r + 4 * m - 1) / (4 * m)) as usize;
                        let col: Vec<Rational> = (0..=n_max as i64)
                            .map(|n| self.coeff(n, r).expect("pair within precision"))
                            .collect();
                        let (b, db) = QSeries::new(col).to_integers();
                        let prod = convolve_strided(&a, &b, 1, n_max as usize + 1);
                        let den = &da * db;
                        prod.into_iter()
                            .enumerate()
                            .skip(n0)
                            .map(|(n, x)| ((n as i64, r), Rational::new(x, den.clone())))
                            .collect()
                    })
                    .collect();
                JacobiForm::from_pairs(weight, self.index, n_max, columns.into_iter().flatten())
            }
        }
    }
}

/// The index-one Jacobi Eisenstein series `E_{k,1}` for `0 <= n < precision`.
///
/// `e(n, r) = H(k-1, 4n - r^2) / H(k-1, 0)`.
pub fn jacobi_eisenstein(k: u32, precision: u64) -> Result<JacobiForm> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Jacobi Eisenstein weight {k} must be even and at least 4")));
    }
    if precision == 0 {
        return Err(Error::PrecisionShrunkBelowOne);
    }
    let n_max = precision - 1;
    let h = cohen_h_table(k - 1, 4 * n_max);
    let h0 = h[0].clone();
    let table = h.into_iter().map(|x| x / &h0).collect();
    JacobiForm::from_index_one_table(k as i64, table, n_max)
}

fn generator_from_parts(
    k: u32,
    precision: u64,
    e41: &JacobiForm,
    e61: &JacobiForm,
) -> Result<JacobiForm> {
    let p = precision as usize;
    let e4 = eisenstein(4, p)?;
    let e6 = eisenstein(6, p)?;
    let (first, second) = match k {
        10 => (e41.mul_series(&e6, 6)?, e61.mul_series(&e4, 4)?),
        12 => (e41.mul_series(&(&e4 * &e4), 8)?, e61.mul_series(&e6, 6)?),
        _ => return Err(Error::InvalidArgument(format!("cusp generator weight {k} not in {{10, 12}}"))),
    };
    let diff = first.sub(&second)?;
    Ok(diff.scale(&Rational::new(BigInt::one(), BigInt::from(144))))
}

/// `φ_{10,1} = (E_6 E_{4,1} - E_4 E_{6,1}) / 144` or `φ_{12,1} = (E_4^2 E_{4,1} - E_6 E_{6,1}) / 144`.
pub fn cusp_generator(k: u32, precision: u64) -> Result<JacobiForm> {
    if k != 10 && k != 12 {
        return Err(Error::InvalidArgument(format!("cusp generator weight {k} not in {{10, 12}}")));
    }
    let e41 = jacobi_eisenstein(4, precision)?;
    let e61 = jacobi_eisenstein(6, precision)?;
    generator_from_parts(k, precision, &e41, &e61)
}

/// The same generator computed on explicit `(n, r)` tables, one `r`-column at a time.
///
/// Used as an independent route: the result must agree with [`cusp_generator`] and
/// must depend on `4n - r^2` alone.
pub fn cusp_generator_by_columns(k: u32, precision: u64) -> Result<JacobiForm> {
    if k != 10 && k != 12 {
        return Err(Error::InvalidArgument(format!("cusp generator weight {k} not in {{10, 12}}")));
    }
    let e41 = jacobi_eisenstein(4, precision)?.to_pairs_form();
    let e61 = jacobi_eisenstein(6, precision)?.to_pairs_form();
    generator_from_parts(k, precision, &e41, &e61)
}
