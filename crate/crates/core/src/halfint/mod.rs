//! Half-integral weight cusp forms as finite coefficient vectors.
//!
//! A form of weight `κ + 1/2` on `Γ0(N)` with character `χ` is represented
//! only by its Fourier coefficients `a(n)`, `1 <= n <= P`. Operators act on
//! the coefficients and update level and character as the corresponding
//! membership statements dictate. The transformation law itself is never
//! evaluated.
//!
//! Coefficients are exact. The operator `U(r^2)` introduces the irrational
//! factor `sqrt(r)`, so a form carries a squarefree *radicand* `s` and stores
//! `x(n)` with `a(n) = sqrt(s) * x(n)`. Forms coming out of the theta
//! decompositions have `s = 1`.

mod sanitize;
mod theta;

pub use sanitize::{check_hypotheses, sanitize, ChainStep, SanitizeChain, StepKind};
pub use theta::{theta_decompose_even, theta_decompose_odd};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{gcd_u64, is_prime, is_squarefree, kronecker, Cyclotomic, DirichletCharacter, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct HalfIntegralForm {
    kappa: i64,
    level: u64,
    character: DirichletCharacter,
    radicand: u64,
    coeffs: Vec<Cyclotomic>,
    provenance: Vec<String>,
}

/// Forms compare by their data. Provenance is audit metadata and is ignored.
impl PartialEq for HalfIntegralForm {
    fn eq(&self, other: &Self) -> bool {
        self.kappa == other.kappa
            && self.level == other.level
            && self.character == other.character
            && self.radicand == other.radicand
            && self.coeffs == other.coeffs
    }
}

fn pow_rational(base: u64, exp: i64) -> Rational {
    let p = Rational::from_integer(BigInt::from(base).pow(exp.unsigned_abs() as u32));
    if exp >= 0 {
        p
    } else {
        p.recip()
    }
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

impl HalfIntegralForm {
    /// Builds a form from `a(1), ..., a(P)`.
    ///
    /// The character may be given modulo any divisor of the level; it is lifted.
    pub fn new(
        kappa: i64,
        level: u64,
        character: DirichletCharacter,
        coeffs: Vec<Cyclotomic>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        Self::with_radicand(kappa, level, character, 1, coeffs, tag)
    }

    /// Like [`HalfIntegralForm::new`] with rational coefficients.
    pub fn from_rationals(
        kappa: i64,
        level: u64,
        character: DirichletCharacter,
        coeffs: Vec<Rational>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        Self::new(kappa, level, character, coeffs.into_iter().map(Cyclotomic::from).collect(), tag)
    }

    /// Builds a form with `a(n) = sqrt(radicand) * coeffs[n - 1]`.
    pub fn with_radicand(
        kappa: i64,
        level: u64,
        character: DirichletCharacter,
        radicand: u64,
        coeffs: Vec<Cyclotomic>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        if kappa < 1 {
            return Err(Error::InvalidArgument(format!("kappa = {kappa} must be positive")));
        }
        if level == 0 || !level.is_multiple_of(4) {
            return Err(Error::InvalidArgument(format!("level {level} is not a positive multiple of 4")));
        }
        if !level.is_multiple_of(character.modulus()) {
            return Err(Error::InvalidArgument(format!(
                "character modulus {} does not divide level {level}",
                character.modulus()
            )));
        }
        if radicand == 0 || !is_squarefree(radicand) {
            return Err(Error::InvalidArgument(format!("radicand {radicand} is not squarefree")));
        }
        let mut all = Vec::with_capacity(coeffs.len() + 1);
        all.push(Cyclotomic::zero());
        all.extend(coeffs);
        Ok(Self {
            kappa,
            level,
            character: character.lift_to(level),
            radicand,
            coeffs: all,
            provenance: vec![tag.into()],
        })
    }

    /// The weight is `kappa + 1/2`.
    pub fn kappa(&self) -> i64 {
        self.kappa
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// The character, as a table modulo the level.
    pub fn character(&self) -> &DirichletCharacter {
        &self.character
    }

    /// Squarefree `s` with `a(n) = sqrt(s) * coeff(n)`.
    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Largest `n` with known `a(n)`.
    pub fn precision(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    /// Construction steps that produced this form, oldest first.
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Stored value `x(n)` with `a(n) = sqrt(radicand) * x(n)`; `x(0) = 0`.
    pub fn coeff(&self, n: u64) -> Result<&Cyclotomic> {
        self.coeffs.get(n as usize).ok_or(Error::OutOfPrecision {
            needed: n,
            available: self.precision(),
        })
    }

    /// Stored values indexed by `n`, including the zero at `n = 0`.
    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Cyclotomic::is_zero)
    }

    /// Indices `n` with `a(n) != 0`, increasing.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, _)| n as u64)
    }

    /// `ã(n) = a(n) n^{1/4 - κ/2}` as a complex float.
    pub fn normalized(&self, n: u64) -> Result<(f64, f64)> {
        let (re, im) = self.coeff(n)?.to_complex();
        if n == 0 {
            return Ok((0.0, 0.0));
        }
        let w = (self.radicand as f64).sqrt() * (n as f64).powf(0.25 - self.kappa as f64 / 2.0);
        Ok((re * w, im * w))
    }

    /// `|ã(n)|^2`, with the algebraic part computed exactly before conversion.
    pub fn normalized_norm_sq(&self, n: u64) -> Result<f64> {
        let x = self.coeff(n)?;
        if n == 0 || x.is_zero() {
            return Ok(0.0);
        }
        Ok(self.radicand as f64 * x.norm_sq_f64() * (n as f64).powf(0.5 - self.kappa as f64))
    }

    /// `ã(n)^4 = s^2 x(n)^4 n^{1 - 2κ}`, which is exact.
    pub fn normalized_fourth_power(&self, n: u64) -> Result<Cyclotomic> {
        let x = self.coeff(n)?;
        if n == 0 {
            return Ok(Cyclotomic::zero());
        }
        let sq = x * x;
        let factor = pow_rational(self.radicand, 2) * pow_rational(n, 1 - 2 * self.kappa);
        Ok((&sq * &sq).scale(&factor))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        out.provenance.push(format!("scale({c})"));
        out
    }

    /// Sum over the common precision. Both forms must share weight, level,
    /// character and radicand.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.kappa != other.kappa
            || self.level != other.level
            || self.character != other.character
            || self.radicand != other.radicand
        {
            return Err(Error::InvalidArgument("forms live in different spaces".into()));
        }
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        out.provenance.push("add".into());
        Ok(out)
    }

    fn derived(&self, level: u64, character: DirichletCharacter, coeffs: Vec<Cyclotomic>, tag: String) -> Self {
        let mut provenance = self.provenance.clone();
        provenance.push(tag);
        Self {
            kappa: self.kappa,
            level,
            character: character.lift_to(level),
            radicand: self.radicand,
            coeffs,
            provenance,
        }
    }
}

/// `U(r^2)`, normalized so that `ã(U f, n) = ã(f, r^2 n)`.
///
/// `r` must be odd and squarefree. The level becomes `N r / gcd(N, r)` and the
/// precision `floor(P / r^2)`.
pub fn u_op(f: &HalfIntegralForm, r: u64) -> Result<HalfIntegralForm> {
    if r == 0 || r.is_multiple_of(2) || !is_squarefree(r) {
        return Err(Error::InvalidArgument(format!("r = {r} must be odd and squarefree")));
    }
    let precision = f.precision() / (r * r);
    if precision < 1 {
        return Err(Error::PrecisionShrunkBelowOne);
    }
    let g = gcd_u64(r, f.radicand);
    let radicand = r * f.radicand / (g * g);
    let factor = Rational::from_integer(g.into()) * pow_rational(r, -f.kappa);
    let coeffs = (0..=precision)
        .map(|n| f.coeffs[(n * r * r) as usize].scale(&factor))
        .collect();
    let level = f.level * r / gcd_u64(f.level, r);
    let mut out = f.derived(level, f.character.clone(), coeffs, format!("u_op(r={r})"));
    out.radicand = radicand;
    Ok(out)
}

/// Keeps the coefficients with `p ∤ n`. The level is multiplied by `p^2`.
pub fn restrict_coprime(f: &HalfIntegralForm, p: u64) -> Result<HalfIntegralForm> {
    require_prime(p)?;
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| if (n as u64).is_multiple_of(p) { Cyclotomic::zero() } else { c.clone() })
        .collect();
    Ok(f.derived(f.level * p * p, f.character.clone(), coeffs, format!("restrict_coprime(p={p})")))
}

/// `g(z) = f(z/p)` for `f` supported on multiples of `p`: `a(g, n) = a(f, p n)`.
///
/// Level `N/p`, character `χ ε_p` where `ε_p` belongs to `Q(sqrt(p))`.
pub fn descend(f: &HalfIntegralForm, p: u64) -> Result<HalfIntegralForm> {
    require_prime(p)?;
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    if let Some(n) = f.support().find(|n| n % p != 0) {
        return Err(Error::NotSupportedOnMultiples { n, p });
    }
    let quarter = f.level / 4;
    if !quarter.is_multiple_of(p) {
        return Err(Error::LevelObstruction(format!("{p} does not divide N/4 = {quarter}")));
    }
    let twisted = f.character.mul(&DirichletCharacter::quadratic_of_prime(p));
    let conductor = twisted.conductor();
    if !quarter.is_multiple_of(conductor) {
        return Err(Error::LevelObstruction(format!(
            "conductor {conductor} of the twisted character does not divide N/4 = {quarter}"
        )));
    }
    let level = f.level / p;
    let character = twisted.restrict_to(level).ok_or_else(|| {
        Error::LevelObstruction(format!("twisted character is not defined modulo {level}"))
    })?;
    let precision = f.precision() / p;
    let coeffs = (0..=precision).map(|n| f.coeffs[(n * p) as usize].clone()).collect();
    Ok(f.derived(level, character, coeffs, format!("descend(p={p})")))
}

/// `g(z) = f(p z)`: `a(g, p n) = a(f, n)` and zero elsewhere.
///
/// Level `N p`, character `χ ε_p`. Inverse to [`descend`].
pub fn dilate(f: &HalfIntegralForm, p: u64) -> Result<HalfIntegralForm> {
    require_prime(p)?;
    let precision = f.precision() * p;
    let coeffs = (0..=precision)
        .map(|m| {
            if m % p == 0 {
                f.coeffs[(m / p) as usize].clone()
            } else {
                Cyclotomic::zero()
            }
        })
        .collect();
    let level = f.level * p;
    let character = f.character.lift_to(level).mul(&DirichletCharacter::quadratic_of_prime(p).lift_to(level));
    Ok(f.derived(level, character, coeffs, format!("dilate(p={p})")))
}

/// The Hecke operator `T(p^2)` for a prime `p ∤ N`:
///
/// `a(T f, n) = a(f, p^2 n) + χ(p) ((-1)^κ n / p) p^{κ-1} a(f, n) + χ(p)^2 p^{2κ-1} a(f, n/p^2)`.
pub fn hecke_t_p2(f: &HalfIntegralForm, p: u64) -> Result<HalfIntegralForm> {
    require_prime(p)?;
    if f.level.is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("{p} divides the level {}", f.level)));
    }
    let p2 = p * p;
    let precision = f.precision() / p2;
    if precision < 1 {
        return Err(Error::PrecisionShrunkBelowOne);
    }
    let chi_p = f.character.value(p as i64);
    let middle = chi_p.scale(&pow_rational(p, f.kappa - 1));
    let last = (&chi_p * &chi_p).scale(&pow_rational(p, 2 * f.kappa - 1));
    let sign = if f.kappa % 2 == 0 { 1 } else { -1 };
    let coeffs = (0..=precision)
        .map(|n| {
            if n == 0 {
                return Cyclotomic::zero();
            }
            let mut v = f.coeffs[(n * p2) as usize].clone();
            let a_n = &f.coeffs[n as usize];
            if !a_n.is_zero() {
                let k = kronecker(sign * n as i64, p as i64);
                if k != 0 {
                    v += &(&middle * a_n).scale(&Rational::from_integer(k.into()));
                }
            }
            if n % p2 == 0 {
                v += &(&last * &f.coeffs[(n / p2) as usize]);
            }
            v
        })
        .collect();
    Ok(f.derived(f.level, f.character.clone(), coeffs, format!("hecke_t_p2(p={p})")))
}

/// Kohnen plus-space support condition: `a(n) = 0` whenever
/// `(-1)^κ n ≡ 2, 3 (mod 4)`.
pub fn plus_space_check(f: &HalfIntegralForm) -> bool {
    f.support().all(|n| {
        let m = if f.kappa % 2 == 0 { n % 4 } else { (4 - n % 4) % 4 };
        m == 0 || m == 1
    })
}

/// Empirical growth data for `sum |ã(n)|^2 e^{-n/X}` over a grid of `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthDiagnostics {
    /// Least-squares slope of the sums against `X` through the origin.
    pub slope_estimate: f64,
    pub window: Vec<f64>,
    /// Sum minus `slope_estimate * X` at each grid point.
    pub residuals: Vec<f64>,
    /// `R(X_max) / X_max`, a coefficient-norm stand-in for `<f, f>`.
    pub surrogate_norm: f64,
    /// Product of the primes dividing the level.
    pub exclusion_modulus: u64,
}

/// `true` if every stored coefficient is rational.
pub fn has_rational_coefficients(f: &HalfIntegralForm) -> bool {
    f.coeffs.iter().all(|c| c.as_rational().is_some())
}

/// Exact ratio `a(g, n) / a(f, n)` if `g = λ f` on the common range, else `None`.
pub fn proportionality_constant(f: &HalfIntegralForm, g: &HalfIntegralForm) -> Option<Rational> {
    if f.radicand != g.radicand {
        return None;
    }
    let len = f.coeffs.len().min(g.coeffs.len());
    let mut lambda: Option<Rational> = None;
    for n in 1..len {
        let a = f.coeffs[n].as_rational()?;
        let b = g.coeffs[n].as_rational()?;
        match (&lambda, a.is_zero()) {
            (_, true) if !b.is_zero() => return None,
            (_, true) => {}
            (None, false) => lambda = Some(b / a),
            (Some(l), false) => {
                if &(a * l) != b {
                    return None;
                }
            }
        }
    }
    Some(lambda.unwrap_or_else(Rational::one))
}
