//! Smoothed second moments of normalized coefficients and the squarefree sieve.
//!
//! Everything upstream is exact; floats first appear here. A sum
//! `sum_n |ã(n)|^2 e^{-n/X}` is truncated at the precision `P` of the form and
//! is only evaluated when `P >= 40 X`, which puts the discarded weights below
//! `e^{-40}`. Sums are accumulated with Neumaier's compensated summation.

use std::sync::OnceLock;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::arith::{gcd_u64, is_squarefree, moebius, omega, prime_divisors, primes_up_to};
use crate::error::{Error, Result};
use crate::halfint::{u_op, GrowthDiagnostics, HalfIntegralForm};

/// Minimum ratio `P / X` accepted by every smoothed sum.
pub const TRUNCATION_FACTOR: f64 = 40.0;

/// Relative tolerance for the two evaluations of the sieve.
pub const SIEVE_TOLERANCE: f64 = 1e-12;

/// Safety factor applied to the empirical constant in [`bound_check_ur2`].
pub const BOUND_SAFETY_FACTOR: f64 = 4.0;

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

fn check_precision(precision: u64, x: f64) -> Result<()> {
    let needed = (TRUNCATION_FACTOR * x).ceil() as u64;
    if !(x > 0.0) || precision < needed {
        return Err(Error::PrecisionTooLow { precision, x, needed });
    }
    Ok(())
}

/// `|ã(f, n)|^2` for `0 <= n <= P`.
pub fn norm_sq_table(f: &HalfIntegralForm) -> Vec<f64> {
    (0..=f.precision())
        .into_par_iter()
        .map(|n| f.normalized_norm_sq(n).expect("index within precision"))
        .collect()
}

fn weighted_sum(table: &[f64], x: f64, filter: impl Fn(u64) -> bool) -> f64 {
    table
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(n, &v)| v != 0.0 && filter(n as u64))
        .map(|(n, &v)| v * (-(n as f64) / x).exp())
        .collect::<CompensatedSum>()
        .value()
}

/// `sum_{1 <= n <= P, filter(n)} |ã(f, n)|^2 e^{-n/X}`.
pub fn smoothed_sum(f: &HalfIntegralForm, x: f64, filter: impl Fn(u64) -> bool) -> Result<f64> {
    check_precision(f.precision(), x)?;
    Ok(weighted_sum(&norm_sq_table(f), x, filter))
}

/// `R(X) = smoothed_sum(f, X, all)` at each grid point.
pub fn smoothed_sums(f: &HalfIntegralForm, grid: &[f64]) -> Result<Vec<f64>> {
    for &x in grid {
        check_precision(f.precision(), x)?;
    }
    let table = norm_sq_table(f);
    Ok(grid.par_iter().map(|&x| weighted_sum(&table, x, |_| true)).collect())
}

/// Least-squares slope of `values` against `grid` for a line through the origin.
pub fn slope_through_origin(grid: &[f64], values: &[f64]) -> f64 {
    let num: CompensatedSum = grid.iter().zip(values).map(|(x, y)| x * y).collect();
    let den: CompensatedSum = grid.iter().map(|x| x * x).collect();
    num.value() / den.value()
}

/// Fits `R(X) ≈ E X` over the grid and records the surrogates for the
/// constants of the asymptotic formula.
pub fn growth_diagnostics(f: &HalfIntegralForm, grid: &[f64]) -> Result<GrowthDiagnostics> {
    let values = smoothed_sums(f, grid)?;
    let slope = slope_through_origin(grid, &values).max(0.0);
    let residuals = grid.iter().zip(&values).map(|(x, v)| v - slope * x).collect();
    let (x_max, r_max) = grid
        .iter()
        .zip(&values)
        .fold((0.0, 0.0), |acc, (&x, &v)| if x > acc.0 { (x, v) } else { acc });
    Ok(GrowthDiagnostics {
        slope_estimate: slope,
        window: grid.to_vec(),
        residuals,
        surrogate_norm: if x_max > 0.0 { r_max / x_max } else { 0.0 },
        exclusion_modulus: prime_divisors(f.level()).iter().product(),
    })
}

/// A squarefree modulus stored through its prime factors, so that products
/// of many primes stay representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeModulus {
    primes: Vec<u64>,
}

impl SquarefreeModulus {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 || !is_squarefree(m) {
            return Err(Error::InvalidArgument(format!("M = {m} is not a positive squarefree integer")));
        }
        Ok(Self { primes: prime_divisors(m) })
    }

    /// `prod_{p <= t} p`.
    pub fn primorial(t: u64) -> Self {
        Self { primes: primes_up_to(t) }
    }

    pub fn from_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        primes.dedup();
        Self { primes }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn value(&self) -> BigUint {
        self.primes.iter().map(|&p| BigUint::from(p)).product()
    }

    pub fn is_coprime(&self, n: u64) -> bool {
        self.primes.iter().all(|&p| !n.is_multiple_of(p))
    }

    /// `M` with the primes of `n` adjoined.
    pub fn with_primes_of(&self, n: u64) -> Self {
        let mut primes = self.primes.clone();
        primes.extend(prime_divisors(n));
        Self::from_primes(primes)
    }
}

impl std::fmt::Display for SquarefreeModulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `S(M, X; f)` evaluated directly and through the Möbius expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SieveValue {
    /// Sum over odd squarefree `d` coprime to `M`.
    pub direct: f64,
    /// `sum_r μ(r) sum_n |ã(U(r^2) f, n)|^2 e^{-r^2 n / X}`.
    pub expanded: f64,
}

impl SieveValue {
    pub fn relative_difference(&self) -> f64 {
        let scale = self.direct.abs().max(self.expanded.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.direct - self.expanded).abs() / scale
        }
    }

    pub fn agrees(&self) -> bool {
        self.relative_difference() < SIEVE_TOLERANCE
    }
}

/// `S(M, X; f) = sum_{d odd squarefree, (d, M) = 1} |ã(f, d)|^2 e^{-d/X}`, computed
/// directly and as `sum_{r odd squarefree, (r, M) = 1} μ(r) sum_{(n, 2M) = 1}
/// |ã(U(r^2) f, n)|^2 e^{-r^2 n / X}`. Both run over the same `d <= P`.
pub fn sieve_s(f: &HalfIntegralForm, m: &SquarefreeModulus, x: f64) -> Result<SieveValue> {
    check_precision(f.precision(), x)?;
    let p = f.precision();
    let admissible = |n: u64| n % 2 == 1 && m.is_coprime(n);
    let direct = weighted_sum(&norm_sq_table(f), x, |d| admissible(d) && is_squarefree(d));
    let rs: Vec<u64> = (1..)
        .take_while(|r| r * r <= p)
        .filter(|&r| admissible(r) && is_squarefree(r))
        .collect();
    let parts = rs
        .par_iter()
        .map(|&r| {
            let u = u_op(f, r)?;
            let r2 = (r * r) as f64;
            let inner = (1..=u.precision())
                .filter(|&n| admissible(n))
                .map(|n| Ok(u.normalized_norm_sq(n)? * (-r2 * n as f64 / x).exp()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .collect::<CompensatedSum>()
                .value();
            Ok(moebius(r) as f64 * inner)
        })
        .collect::<Result<Vec<f64>>>()?;
    let expanded = parts.into_iter().collect::<CompensatedSum>().value();
    Ok(SieveValue { direct, expanded })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SieveReport {
    pub modulus: SquarefreeModulus,
    pub grid: Vec<f64>,
    pub values: Vec<SieveValue>,
    /// Least-squares slope of the direct values through the origin.
    pub slope: f64,
    pub identity_ok: bool,
}

/// `S(M, X; f)` over a grid. Fails if the two evaluations disagree anywhere.
pub fn sieve_report(f: &HalfIntegralForm, m: &SquarefreeModulus, grid: &[f64]) -> Result<SieveReport> {
    let values = grid.iter().map(|&x| sieve_s(f, m, x)).collect::<Result<Vec<_>>>()?;
    let identity_ok = values.iter().all(SieveValue::agrees);
    if !identity_ok {
        return Err(Error::InconsistentTable(format!(
            "squarefree sieve: direct and expanded sums disagree for M = {m}"
        )));
    }
    let direct: Vec<f64> = values.iter().map(|v| v.direct).collect();
    Ok(SieveReport {
        modulus: m.clone(),
        grid: grid.to_vec(),
        slope: slope_through_origin(grid, &direct),
        values,
        identity_ok,
    })
}

/// Checks `sum_{r^2 | n} μ(r) = [n squarefree]` for every `1 <= n <= bound`.
pub fn sieve_identity_selftest(bound: u64) -> bool {
    let n = bound as usize;
    let mut acc = vec![0i32; n + 1];
    let mut r = 1usize;
    while r * r <= n {
        let mu = moebius(r as u64);
        if mu != 0 {
            for m in (r * r..=n).step_by(r * r) {
                acc[m] += mu;
            }
        }
        r += 1;
    }
    (1..=n).all(|m| acc[m] == is_squarefree(m as u64) as i32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub r: u64,
    pub grid: Vec<f64>,
    /// `sum_n |ã(U(r^2) h, n)|^2 e^{-n/Y}` on the grid.
    pub sums: Vec<f64>,
    /// Slope of the `r = 1` sums over the same grid.
    pub c_hat: f64,
    /// `sums[i] / (c_hat * Y_i)`.
    pub ratios: Vec<f64>,
    /// `19^{ω(r)} * BOUND_SAFETY_FACTOR`.
    pub limit: f64,
    pub within_bound: bool,
}

impl BoundReport {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().cloned().fold(0.0, f64::max)
    }
}

/// Compares `sum |ã(U(r^2) h, n)|^2 e^{-n/Y}` with `19^{ω(r)} Ĉ Y` where `Ĉ`
/// is the slope of the `r = 1` sums over the same grid.
pub fn bound_check_ur2(h: &HalfIntegralForm, r: u64, grid: &[f64]) -> Result<BoundReport> {
    if gcd_u64(r, h.level()) != 1 {
        return Err(Error::InvalidArgument(format!("r = {r} shares a prime with the level {}", h.level())));
    }
    let u = u_op(h, r)?;
    let sums = smoothed_sums(&u, grid)?;
    let base = smoothed_sums(h, grid)?;
    let c_hat = slope_through_origin(grid, &base);
    let ratios: Vec<f64> = grid.iter().zip(&sums).map(|(y, s)| s / (c_hat * y)).collect();
    let limit = 19f64.powi(omega(r) as i32) * BOUND_SAFETY_FACTOR;
    let within_bound = ratios.iter().all(|&q| q <= limit);
    Ok(BoundReport {
        r,
        grid: grid.to_vec(),
        sums,
        c_hat,
        ratios,
        limit,
        within_bound,
    })
}

/// Largest prime used explicitly in the tail product of [`easylemma_interval`].
pub const RATIO_PRIME_CAP: u64 = 10_000_000;

fn ratio_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(RATIO_PRIME_CAP))
}

/// Certified enclosure of the ratio in [`easylemma_ratio`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioInterval {
    pub lo: f64,
    pub hi: f64,
}

/// `(-1 + prod_{p > T}(1 + y/p^2)) / prod_{p <= T}(1 - 1/p)` enclosed in an interval.
///
/// The product over `T < p <= P_cap` is evaluated in log space; the remaining
/// factor lies in `[1, exp(y / P_cap)]` because `sum_{n > P} 1/n^2 < 1/P`.
pub fn easylemma_interval(y: f64, t: f64) -> RatioInterval {
    assert!(y >= 0.0 && t >= 2.0, "easylemma_interval needs y >= 0 and T >= 2");
    let owned;
    let cap = (RATIO_PRIME_CAP as f64).max(16.0 * t) as u64;
    let primes: &[u64] = if cap == RATIO_PRIME_CAP {
        ratio_primes()
    } else {
        owned = primes_up_to(cap);
        &owned
    };
    let mut log_num = CompensatedSum::default();
    let mut log_den = CompensatedSum::default();
    for &p in primes {
        let pf = p as f64;
        if pf <= t {
            log_den.add((-1.0 / pf).ln_1p());
        } else {
            log_num.add((y / (pf * pf)).ln_1p());
        }
    }
    let den = log_den.value().exp();
    let s = log_num.value();
    RatioInterval {
        lo: s.exp_m1() / den,
        hi: (s + y / cap as f64).exp_m1() / den,
    }
}

/// The upper end of [`easylemma_interval`].
pub fn easylemma_ratio(y: f64, t: f64) -> f64 {
    easylemma_interval(y, t).hi
}

/// Largest `T` tried by [`choose_m`].
pub const CHOOSE_M_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct ChosenModulus {
    pub t: u64,
    pub modulus: SquarefreeModulus,
}

/// Smallest `T` in the scan `2, 4, 8, ...` with
/// `lower prod_{p <= T}(1 - 1/p) > upper (-1 + prod_{p > T}(1 + y/p^2))`,
/// and `M = prod_{p <= T} p`.
pub fn choose_m(y: f64, slope_lower: f64, slope_upper: f64) -> Result<ChosenModulus> {
    if !(slope_lower > 0.0) || !(slope_upper >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need slope_lower > 0 and slope_upper >= 0, got {slope_lower} and {slope_upper}"
        )));
    }
    let mut t = 2u64;
    while t <= CHOOSE_M_CAP {
        if slope_lower > slope_upper * easylemma_ratio(y, t as f64) {
            return Ok(ChosenModulus {
                t,
                modulus: SquarefreeModulus::primorial(t),
            });
        }
        t *= 2;
    }
    Err(Error::NotFound { cap: CHOOSE_M_CAP })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, DirichletCharacter};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn form(kappa: i64, values: Vec<i64>) -> HalfIntegralForm {
        HalfIntegralForm::from_rationals(
            kappa,
            12,
            DirichletCharacter::trivial(1),
            values.into_iter().map(rat).collect(),
            "test",
        )
        .unwrap()
    }

    #[test]
    fn smoothed_sum_examples() {
        let zero = form(2, vec![0; 400]);
        assert_eq!(smoothed_sum(&zero, 10.0, |_| true).unwrap(), 0.0);
        // A spike at 1 has ã(1) = a(1).
        let mut v = vec![0; 4000];
        v[0] = 1;
        let spike = form(3, v);
        let s = smoothed_sum(&spike, 100.0, |_| true).unwrap();
        assert!((s - (-0.01f64).exp()).abs() < 1e-15);
        assert!(matches!(
            smoothed_sum(&spike, 101.0, |_| true),
            Err(Error::PrecisionTooLow { needed: 4040, .. })
        ));
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let xs = std::iter::once(1.0).chain(std::iter::repeat_n(1e-16, 10_000));
        let s: CompensatedSum = xs.collect();
        assert!((s.value() - (1.0 + 1e-12)).abs() < 1e-18);
    }

    #[test]
    fn sieve_two_ways_agree_on_random_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let f = form(5, (0..4000).map(|_| rng.gen_range(-10_000i64..10_000)).collect());
        for m in [1u64, 6, 30, 35] {
            let v = sieve_s(&f, &SquarefreeModulus::new(m).unwrap(), 100.0).unwrap();
            assert!(v.agrees(), "M = {m}: {v:?}");
            assert!(v.direct > 0.0);
        }
    }

    #[test]
    fn sieve_boundary_semantics() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let f = form(5, (0..400).map(|_| rng.gen_range(1i64..100)).collect());
        let all = SquarefreeModulus::primorial(400);
        let v = sieve_s(&f, &all, 10.0).unwrap();
        let expected = f.normalized_norm_sq(1).unwrap() * (-0.1f64).exp();
        assert!((v.direct - expected).abs() <= 1e-15 * expected);
        assert!(v.agrees());
        let zero = form(5, vec![0; 400]);
        let z = sieve_s(&zero, &SquarefreeModulus::new(6).unwrap(), 10.0).unwrap();
        assert_eq!((z.direct, z.expanded), (0.0, 0.0));
        assert!(SquarefreeModulus::new(12).is_err());
    }

    #[test]
    fn squarefree_indicator_identity() {
        assert!(sieve_identity_selftest(100_000));
    }

    #[test]
    fn easylemma_examples() {
        let a = easylemma_interval(19.0, 100.0);
        let b = easylemma_interval(19.0, 1000.0);
        let c = easylemma_interval(19.0, 10_000.0);
        assert!(a.lo <= a.hi && c.lo <= c.hi);
        assert!(b.hi < a.lo && c.hi < b.lo);
        assert!(c.hi < 0.01);
        assert_eq!(easylemma_ratio(0.0, 100.0), 0.0);
    }

    #[test]
    fn choose_m_examples() {
        let chosen = choose_m(19.0, 1.0, 1.0).unwrap();
        let t = chosen.t as f64;
        assert!(1.0 > easylemma_ratio(19.0, t));
        assert!(1.0 <= easylemma_ratio(19.0, t / 2.0));
        assert_eq!(chosen.modulus.primes(), primes_up_to(chosen.t).as_slice());
        assert_eq!(choose_m(19.0, 1e6, 1.0).unwrap().t, 2);
        assert_eq!(choose_m(19.0, 1e-9, 1.0).err(), Some(Error::NotFound { cap: CHOOSE_M_CAP }));
        assert!(choose_m(19.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn bound_check_at_r_one() {
        // a(n) = floor(n^{1/4}) with κ = 1 keeps |ã(n)|^2 near 1, so R(Y) is close to linear.
        let f = form(1, (1..=4000u64).map(|n| crate::arith::isqrt(crate::arith::isqrt(n)) as i64).collect());
        let report = bound_check_ur2(&f, 1, &[10.0, 20.0, 40.0, 80.0]).unwrap();
        assert!(report.within_bound);
        assert!(report.max_ratio() <= BOUND_SAFETY_FACTOR);
        assert!(bound_check_ur2(&f, 3, &[1.0]).is_err());
        assert!(matches!(bound_check_ur2(&f, 5, &[10.0]), Err(Error::PrecisionTooLow { .. })));
    }

    #[test]
    fn flat_coefficients_grow_like_sqrt() {
        // κ = 1 and a(n) = 1 give |ã(n)|^2 = n^{-1/2}, so R(X) = sqrt(πX) + ζ(1/2) + O(1/X).
        let f = form(1, vec![1; 8000]);
        let d = growth_diagnostics(&f, &[25.0, 50.0, 100.0, 200.0]).unwrap();
        assert!(d.slope_estimate > 0.0);
        assert_eq!(d.exclusion_modulus, 6);
        assert_eq!(d.window.len(), 4);
        let r = smoothed_sums(&f, &[50.0, 100.0]).unwrap();
        let expected = |x: f64| (std::f64::consts::PI * x).sqrt() - 1.460_354_508_8;
        assert!((r[1] / r[0] - expected(100.0) / expected(50.0)).abs() < 1e-3);
    }
}
