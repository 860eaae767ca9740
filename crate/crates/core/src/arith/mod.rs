//! Exact number-theoretic primitives.
//!
//! Multiplicative functions, the Kronecker symbol, Bernoulli numbers,
//! exact cyclotomic numbers and Dirichlet characters stored as value tables.
//! Factorization is trial division against a cached prime list, which is
//! adequate for the arguments below `10^8` that occur here.

mod bernoulli;
mod character;
mod cyclotomic;
mod kronecker;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use bernoulli::{bernoulli, gen_bernoulli, quadratic_gen_bernoulli};
pub use character::DirichletCharacter;
pub use cyclotomic::Cyclotomic;
pub use kronecker::{fundamental_discriminant_decomposition, is_fundamental_discriminant, kronecker};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Converts an integer into a [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Converts `n / d` into a [`Rational`]; panics on `d == 0`.
pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u64(a, b) * b
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r as i64, -old_s as i64, -old_t as i64)
    } else {
        (old_r as i64, old_s as i64, old_t as i64)
    }
}

/// All primes `p <= bound`, by a byte sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

const SMALL_PRIME_BOUND: u64 = 10_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(SMALL_PRIME_BOUND))
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factor: n must be positive");
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    for &p in small_primes() {
        if p * p > n {
            break;
        }
        push(p, &mut n);
    }
    // Past the cached list: continue with odd trial divisors.
    let mut d = SMALL_PRIME_BOUND + 1;
    while d.saturating_mul(d) <= n {
        push(d, &mut n);
        d += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == [(n, 1)]
}

/// The Möbius function.
pub fn moebius(n: u64) -> i32 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Number of distinct prime factors.
pub fn omega(n: u64) -> u32 {
    factor(n).len() as u32
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

/// Euler's totient.
pub fn euler_totient(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Divisor power sum `sigma_k(n) = sum_{d | n} d^k`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    factor(n).into_iter().fold(BigInt::one(), |acc, (p, e)| {
        let pk = BigInt::from(p).pow(k);
        let mut term = BigInt::one();
        let mut s = BigInt::one();
        for _ in 0..e {
            term *= &pk;
            s += &term;
        }
        acc * s
    })
}

/// `sigma_k(n)` for every `n <= bound` by a divisor sieve; entry 0 is zero.
pub fn sigma_table(k: u32, bound: usize) -> Vec<BigInt> {
    let mut table = vec![BigInt::zero(); bound + 1];
    for d in 1..=bound {
        let dk = BigInt::from(d).pow(k);
        let mut m = d;
        while m <= bound {
            table[m] += &dk;
            m += d;
        }
    }
    table
}

/// Largest `s` with `s^2 | n`, i.e. `n = s^2 * (squarefree)`.
pub fn square_part_root(n: u64) -> u64 {
    factor(n)
        .into_iter()
        .map(|(p, e)| p.pow(e / 2))
        .product()
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
