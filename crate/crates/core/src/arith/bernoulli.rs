use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{binomial, kronecker, Cyclotomic, DirichletCharacter, Rational};

const CACHED: usize = 64;

fn table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| bernoulli_table(CACHED))
}

/// `B_0 … B_{len-1}` from `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
fn bernoulli_table(len: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Rational::from_integer(binomial(n as u32 + 1, k as u32)) * bk;
        }
        b.push(-s / Rational::from_integer(BigInt::from(n + 1)));
    }
    b
}

/// Bernoulli number `B_n`, with the convention `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Rational {
    match table().get(n as usize) {
        Some(b) => b.clone(),
        None => bernoulli_table(n as usize + 1).pop().unwrap(),
    }
}

/// Assembles `B_{n,χ} = sum_j C(n, j) B_j f^{j-1} S_{n-j}` from the character
/// power sums `S_m = sum_{a=1}^{f} χ(a) a^m`.
///
/// This is `f^{n-1} sum_a χ(a) B_n(a/f)` with the Bernoulli polynomial expanded.
pub(crate) fn bernoulli_poly_power_sum<T>(n: u32, f: u64, sums: &[T]) -> T
where
    T: Clone + for<'a> std::ops::Add<&'a T, Output = T> + MulRational,
{
    let f = Rational::from_integer(BigInt::from(f));
    let mut acc: Option<T> = None;
    for j in 0..=n {
        let bj = bernoulli(j);
        if bj.is_zero() {
            continue;
        }
        let fpow = if j == 0 {
            f.recip()
        } else {
            num_traits::pow(f.clone(), j as usize - 1)
        };
        let c = Rational::from_integer(binomial(n, j)) * bj * fpow;
        let term = sums[(n - j) as usize].mul_rational(&c);
        acc = Some(match acc {
            None => term,
            Some(a) => a + &term,
        });
    }
    acc.expect("B_0 = 1 always contributes")
}

pub(crate) trait MulRational {
    fn mul_rational(&self, c: &Rational) -> Self;
}

impl MulRational for Rational {
    fn mul_rational(&self, c: &Rational) -> Self {
        self * c
    }
}

impl MulRational for Cyclotomic {
    fn mul_rational(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}

/// Generalized Bernoulli number `B_{n,χ}`, computed from the primitive
/// character over residues modulo the conductor.
pub fn gen_bernoulli(n: u32, chi: &DirichletCharacter) -> Cyclotomic {
    let prim = chi.primitive();
    let f = prim.modulus();
    let order = prim.order();
    let sums: Vec<Cyclotomic> = (0..=n)
        .map(|m| {
            let mut weights = vec![Rational::zero(); order as usize];
            for a in 1..=f {
                if let Some(e) = prim.exponent_at(a as i64) {
                    weights[e as usize] += Rational::from_integer(BigInt::from(a).pow(m));
                }
            }
            Cyclotomic::from_exponent_weights(order, weights)
        })
        .collect();
    bernoulli_poly_power_sum(n, f, &sums)
}

/// `B_{n,χ_D}` for the Kronecker character of a fundamental discriminant `disc`.
pub fn quadratic_gen_bernoulli(n: u32, disc: i64) -> Rational {
    let f = disc.unsigned_abs();
    if f == 1 {
        return gen_bernoulli(n, &DirichletCharacter::trivial(1))
            .as_rational()
            .cloned()
            .expect("trivial character gives a rational value");
    }
    let fits_i128 = (n as f64 + 1.0) * (f as f64).log2() + 1.0 < 125.0;
    let sums: Vec<BigInt> = if fits_i128 {
        let mut s = vec![0i128; n as usize + 1];
        for a in 1..f {
            let chi = kronecker(disc, a as i64);
            if chi == 0 {
                continue;
            }
            let mut p = chi as i128;
            for sm in s.iter_mut() {
                *sm += p;
                p *= a as i128;
            }
        }
        s.into_iter().map(BigInt::from).collect()
    } else {
        let mut s = vec![BigInt::zero(); n as usize + 1];
        for a in 1..f {
            let chi = kronecker(disc, a as i64);
            if chi == 0 {
                continue;
            }
            let mut p = BigInt::from(chi);
            for sm in s.iter_mut() {
                *sm += &p;
                p *= a;
            }
        }
        s
    };
    let sums: Vec<Rational> = sums.into_iter().map(Rational::from_integer).collect();
    bernoulli_poly_power_sum(n, f, &sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    #[test]
    fn named_examples() {
        assert_eq!(bernoulli(0), rat(1));
        assert_eq!(bernoulli(1), rat_frac(-1, 2));
        assert_eq!(bernoulli(8), rat_frac(-1, 30));
        assert_eq!(bernoulli(12), rat_frac(-691, 2730));
        assert!(bernoulli(13).is_zero());
        assert_eq!(bernoulli(70), bernoulli_table(71)[70]);
    }

    /// Oracle: B_{n,χ} = f^{n-1} sum_a χ(a) B_n(a/f), Bernoulli polynomial evaluated directly.
    fn gen_bernoulli_oracle(n: u32, f: u64, chi: impl Fn(u64) -> i64) -> Rational {
        let bpoly = |x: &Rational| -> Rational {
            (0..=n)
                .map(|j| {
                    Rational::from_integer(binomial(n, j)) * bernoulli(j) * num_traits::pow(x.clone(), (n - j) as usize)
                })
                .fold(Rational::zero(), |a, b| a + b)
        };
        let fr = rat(f as i64);
        let s = (1..=f)
            .map(|a| rat(chi(a)) * bpoly(&(rat(a as i64) / &fr)))
            .fold(Rational::zero(), |a, b| a + b);
        s * num_traits::pow(fr, n as usize - 1)
    }

    #[test]
    fn gen_bernoulli_of_chi_minus_four() {
        let oracle = gen_bernoulli_oracle(1, 4, |a| kronecker(-4, a as i64) as i64);
        assert_eq!(oracle, rat_frac(-1, 2));
        assert_eq!(quadratic_gen_bernoulli(1, -4), oracle);
        let chi = DirichletCharacter::epsilon4();
        assert_eq!(gen_bernoulli(1, &chi), Cyclotomic::from_rational(oracle));
    }

    #[test]
    fn quadratic_fast_path_matches_oracle() {
        for d in [-3i64, -4, -7, -8, -15, -20, -23, 5, 8, 12] {
            for n in 1..=6 {
                let oracle = gen_bernoulli_oracle(n, d.unsigned_abs(), |a| kronecker(d, a as i64) as i64);
                assert_eq!(quadratic_gen_bernoulli(n, d), oracle, "B_({n}, {d})");
            }
        }
        assert_eq!(quadratic_gen_bernoulli(3, -3), rat_frac(2, 3));
    }

    #[test]
    fn bigint_fallback_matches() {
        // n = 11 with |D| = 4003 exceeds the i128 budget.
        let d = -4003i64;
        let fast = quadratic_gen_bernoulli(3, d);
        let general = gen_bernoulli(3, &DirichletCharacter::kronecker(d, 4003));
        assert_eq!(Cyclotomic::from_rational(fast), general);
        let big = quadratic_gen_bernoulli(11, -23);
        let oracle = gen_bernoulli_oracle(11, 23, |a| kronecker(-23, a as i64) as i64);
        assert_eq!(big, oracle);
    }

    #[test]
    fn odd_character_parity_kills_even_index() {
        // B_{n,χ} = 0 unless n ≡ parity of χ (mod 2), for n >= 2... checked on an order-4 character.
        let chi = DirichletCharacter::odd_mod_prime(5);
        assert!(gen_bernoulli(2, &chi).is_zero());
        assert!(!gen_bernoulli(1, &chi).is_zero());
    }
}
