//! Dirichlet characters as full value tables.
//!
//! A character modulo `N` is stored as `exps[n] = Some(j)` meaning
//! `χ(n) = e^{2πi j / order}`, and `None` when `gcd(n, N) > 1`.
//! Moduli are tiny here (`4`, `p`, `4p`, `4p^2`), so every operation is
//! a scan of the table.

use std::fmt;

use super::{factor, gcd_u64, kronecker, lcm_u64, Cyclotomic};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u32,
    exps: Vec<Option<u32>>,
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    gcd_u64(a as u64, b as u64) as u32
}

impl DirichletCharacter {
    fn from_table(modulus: u64, order: u32, exps: Vec<Option<u32>>) -> Self {
        let mut chi = Self {
            modulus,
            order,
            exps,
        };
        chi.normalize();
        chi
    }

    fn normalize(&mut self) {
        let g = self
            .exps
            .iter()
            .flatten()
            .fold(self.order, |g, &e| gcd_u32(g, e % self.order));
        if g > 1 {
            self.order /= g;
            for e in self.exps.iter_mut().flatten() {
                *e = (*e % (self.order * g)) / g;
            }
        }
        if self.order == 0 {
            self.order = 1;
        }
    }

    pub fn trivial(modulus: u64) -> Self {
        assert!(modulus >= 1);
        let exps = (0..modulus)
            .map(|n| (gcd_u64(n, modulus) == 1).then_some(0))
            .collect();
        Self::from_table(modulus, 1, exps)
    }

    /// `n ↦ (disc | n)` as a character modulo `modulus`.
    ///
    /// Panics unless the symbol is periodic modulo `modulus` on units.
    pub fn kronecker(disc: i64, modulus: u64) -> Self {
        let exps: Vec<Option<u32>> = (0..modulus)
            .map(|n| {
                if gcd_u64(n, modulus) != 1 {
                    return None;
                }
                match kronecker(disc, n as i64) {
                    1 => Some(0),
                    -1 => Some(1),
                    _ => panic!("({disc} | {n}) vanishes on a unit mod {modulus}"),
                }
            })
            .collect();
        let chi = Self::from_table(modulus, 2, exps);
        debug_assert!(chi.is_multiplicative());
        chi
    }

    /// The character of conductor 4.
    pub fn epsilon4() -> Self {
        Self::kronecker(-4, 4)
    }

    /// Quadratic character of `Q(√p)`: the Kronecker character of its discriminant.
    pub fn quadratic_of_prime(p: u64) -> Self {
        let disc = if p % 4 == 1 { p as i64 } else { 4 * p as i64 };
        Self::kronecker(disc, disc as u64)
    }

    /// An odd character of order `p - 1` modulo an odd prime `p`, sending the
    /// least primitive root to `e^{2πi/(p-1)}`.
    pub fn odd_mod_prime(p: u64) -> Self {
        assert!(p > 2 && super::is_prime(p), "odd_mod_prime: {p} is not an odd prime");
        let g = primitive_root(p);
        let mut exps = vec![None; p as usize];
        let mut x = 1u64;
        for j in 0..(p - 1) as u32 {
            exps[x as usize] = Some(j);
            x = x * g % p;
        }
        Self::from_table(p, (p - 1) as u32, exps)
    }

    /// Every Dirichlet character modulo `modulus`; index 0 is the trivial one.
    pub fn all(modulus: u64) -> Vec<Self> {
        let gens = unit_group_generators(modulus);
        let orders: Vec<u32> = gens.iter().map(|&(_, o)| o).collect();
        let exponent = orders.iter().fold(1u64, |l, &o| lcm_u64(l, o as u64)) as u32;

        // Discrete log of every unit with respect to the generators.
        let mut logs: Vec<Option<Vec<u32>>> = vec![None; modulus as usize];
        let mut tuple = vec![0u32; gens.len()];
        loop {
            let mut x = 1 % modulus;
            for (&(g, _), &e) in gens.iter().zip(&tuple) {
                x = x * pow_mod(g, e as u64, modulus) % modulus;
            }
            logs[x as usize] = Some(tuple.clone());
            if !next_tuple(&mut tuple, &orders) {
                break;
            }
        }

        let mut chars = Vec::new();
        let mut c = vec![0u32; gens.len()];
        loop {
            let exps = logs
                .iter()
                .map(|l| {
                    l.as_ref().map(|l| {
                        l.iter()
                            .zip(&c)
                            .zip(&orders)
                            .map(|((&e, &ci), &o)| (e as u64 * ci as u64 * (exponent / o) as u64) % exponent as u64)
                            .sum::<u64>() as u32
                            % exponent
                    })
                })
                .collect();
            chars.push(Self::from_table(modulus, exponent, exps));
            if !next_tuple(&mut c, &orders) {
                break;
            }
        }
        chars
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Exponent `j` with `χ(n) = e^{2πi j/order}`, or `None` when `χ(n) = 0`.
    pub fn exponent_at(&self, n: i64) -> Option<u32> {
        self.exps[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// `χ(n)` as an exact cyclotomic number.
    pub fn value(&self, n: i64) -> Cyclotomic {
        match self.exponent_at(n) {
            None => Cyclotomic::zero(),
            Some(e) => Cyclotomic::root_of_unity(self.order, e),
        }
    }

    /// `χ(n)` as an integer, for characters of order at most two.
    pub fn value_i32(&self, n: i64) -> Option<i32> {
        match (self.order, self.exponent_at(n)) {
            (_, None) => Some(0),
            (_, Some(0)) => Some(1),
            (2, Some(1)) => Some(-1),
            _ => None,
        }
    }

    /// `χ(-1)` as `±1`.
    pub fn parity(&self) -> i32 {
        match self.exponent_at(-1) {
            Some(0) => 1,
            Some(e) if 2 * e == self.order => -1,
            other => unreachable!("χ(-1) must be ±1, got exponent {other:?}"),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == -1
    }

    /// Pointwise product, as a character modulo the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm_u64(self.modulus, other.modulus);
        let order = lcm_u64(self.order as u64, other.order as u64) as u32;
        let (sa, sb) = (order / self.order, order / other.order);
        let exps = (0..m)
            .map(|n| match (self.exponent_at(n as i64), other.exponent_at(n as i64)) {
                (Some(a), Some(b)) => Some((a * sa + b * sb) % order),
                _ => None,
            })
            .collect();
        Self::from_table(m, order, exps)
    }

    /// The same character viewed modulo a multiple of the modulus.
    pub fn lift_to(&self, modulus: u64) -> Self {
        assert_eq!(modulus % self.modulus, 0, "lift_to: {modulus} is not a multiple of {}", self.modulus);
        let exps = (0..modulus)
            .map(|n| {
                if gcd_u64(n, modulus) == 1 {
                    self.exponent_at(n as i64)
                } else {
                    None
                }
            })
            .collect();
        Self::from_table(modulus, self.order, exps)
    }

    pub fn conductor(&self) -> u64 {
        let mut divs = super::divisors(self.modulus);
        divs.sort_unstable();
        for d in divs {
            let ok = (1..self.modulus)
                .step_by(d as usize)
                .all(|a| match self.exps[a as usize] {
                    None => true,
                    Some(e) => e == 0,
                });
            if ok {
                return d;
            }
        }
        self.modulus
    }

    /// The primitive character inducing this one, modulo the conductor.
    pub fn primitive(&self) -> Self {
        let f = self.conductor();
        let exps = (0..f)
            .map(|a| {
                if gcd_u64(a, f) != 1 {
                    return None;
                }
                let lift = (0..self.modulus)
                    .map(|t| a + t * f)
                    .find(|&x| gcd_u64(x, self.modulus) == 1)
                    .expect("a unit lift exists");
                self.exponent_at(lift as i64)
            })
            .collect();
        Self::from_table(f, self.order, exps)
    }

    /// Re-expresses the character modulo `modulus`, provided its conductor divides it.
    pub fn restrict_to(&self, modulus: u64) -> Option<Self> {
        let prim = self.primitive();
        modulus.is_multiple_of(prim.modulus).then(|| prim.lift_to(modulus))
    }

    /// The `p`-part `χ_p` in the factorization `χ = ∏_p χ_p`, as a character
    /// modulo `p^e` where `p^e` exactly divides the modulus.
    pub fn local_component(&self, p: u64) -> Self {
        let mut q = 1u64;
        while self.modulus.is_multiple_of(q * p) {
            q *= p;
        }
        let rest = self.modulus / q;
        let exps = (0..q)
            .map(|a| {
                if gcd_u64(a, q) != 1 {
                    return None;
                }
                // CRT lift: x ≡ a (mod q), x ≡ 1 (mod rest).
                let x = (0..rest)
                    .map(|t| a + q * t)
                    .find(|x| x % rest == 1 % rest)
                    .expect("moduli are coprime");
                self.exponent_at(x as i64)
            })
            .collect();
        Self::from_table(q, self.order, exps)
    }

    fn is_multiplicative(&self) -> bool {
        let m = self.modulus as i64;
        (0..m).all(|a| {
            (0..m).all(|b| match (self.exponent_at(a), self.exponent_at(b), self.exponent_at(a * b)) {
                (Some(x), Some(y), Some(z)) => (x + y) % self.order == z,
                (None, _, None) | (_, None, None) => true,
                _ => false,
            })
        })
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            write!(f, "trivial mod {}", self.modulus)
        } else {
            write!(
                f,
                "mod {} conductor {} order {}",
                self.modulus,
                self.conductor(),
                self.order
            )
        }
    }
}

fn next_tuple(t: &mut [u32], bounds: &[u32]) -> bool {
    for (x, &b) in t.iter_mut().zip(bounds) {
        *x += 1;
        if *x < b {
            return true;
        }
        *x = 0;
    }
    false
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn multiplicative_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = x * g % m;
        k += 1;
    }
    k
}

fn primitive_root(p: u64) -> u64 {
    (2..p).find(|&g| multiplicative_order(g, p) == p - 1).unwrap_or(1)
}

/// Generators of `(Z/N)^×` with their orders, one cyclic factor per entry,
/// each lifted by CRT to be `≡ 1` at the other prime powers.
fn unit_group_generators(modulus: u64) -> Vec<(u64, u32)> {
    let mut gens = Vec::new();
    if modulus <= 2 {
        return gens;
    }
    let crt_lift = |local: u64, q: u64| -> u64 {
        // x ≡ local (mod q), x ≡ 1 (mod modulus / q)
        let rest = modulus / q;
        (0..q)
            .map(|t| 1 + t * rest)
            .find(|x| x % q == local % q)
            .expect("CRT solution exists")
            % modulus
    };
    for (p, e) in factor(modulus) {
        let q = p.pow(e);
        if p == 2 {
            if e >= 2 {
                gens.push((crt_lift(q - 1, q), 2));
            }
            if e >= 3 {
                gens.push((crt_lift(5, q), (q / 4) as u32));
            }
        } else {
            let phi = q / p * (p - 1);
            let g = (2..q)
                .find(|&g| gcd_u64(g, p) == 1 && multiplicative_order(g, q) == phi)
                .expect("odd prime powers have primitive roots");
            gens.push((crt_lift(g, q), phi as u32));
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_totient;

    #[test]
    fn tables_are_characters() {
        for m in 1..=60u64 {
            let chars = DirichletCharacter::all(m);
            assert_eq!(chars.len() as u64, euler_totient(m), "count mod {m}");
            assert!(chars[0].is_trivial());
            for chi in &chars {
                assert!(chi.is_multiplicative(), "mod {m}: {chi:?}");
                assert_eq!(chi.exponent_at(1), Some(0));
                for n in 0..m {
                    assert_eq!(chi.exponent_at(n as i64).is_none(), gcd_u64(n, m) > 1);
                }
            }
            for i in 0..chars.len() {
                for j in 0..i {
                    assert_ne!(chars[i], chars[j], "duplicate character mod {m}");
                }
            }
        }
    }

    #[test]
    fn character_sums_vanish() {
        for m in 1..=100u64 {
            for chi in DirichletCharacter::all(m).iter().skip(1) {
                let mut weights = vec![crate::arith::rat(0); chi.order() as usize];
                for n in 0..m {
                    if let Some(e) = chi.exponent_at(n as i64) {
                        weights[e as usize] += crate::arith::rat(1);
                    }
                }
                assert!(
                    Cyclotomic::from_exponent_weights(chi.order(), weights).is_zero(),
                    "sum over {chi} is nonzero"
                );
            }
        }
    }

    #[test]
    fn special_characters() {
        let e4 = DirichletCharacter::epsilon4();
        assert_eq!(e4.conductor(), 4);
        assert_eq!(e4.parity(), -1);
        let chi3 = DirichletCharacter::odd_mod_prime(3);
        assert_eq!(chi3, DirichletCharacter::kronecker(-3, 3));
        assert!(chi3.is_odd());
        let chi5 = DirichletCharacter::odd_mod_prime(5);
        assert_eq!(chi5.order(), 4);
        assert!(chi5.is_odd());
        assert_eq!(DirichletCharacter::quadratic_of_prime(5).modulus(), 5);
        assert_eq!(DirichletCharacter::quadratic_of_prime(3).modulus(), 12);
        assert_eq!(DirichletCharacter::quadratic_of_prime(2).modulus(), 8);
        let t = DirichletCharacter::trivial(12);
        assert_eq!(t.conductor(), 1);
        assert_eq!(t.parity(), 1);
    }

    #[test]
    fn conductor_and_lift() {
        let chi = DirichletCharacter::epsilon4().mul(&DirichletCharacter::odd_mod_prime(3));
        assert_eq!(chi.modulus(), 12);
        assert_eq!(chi.conductor(), 12);
        assert_eq!(chi.parity(), 1);
        let lifted = DirichletCharacter::epsilon4().lift_to(36);
        assert_eq!(lifted.conductor(), 4);
        assert_eq!(lifted.primitive(), DirichletCharacter::epsilon4());
        assert_eq!(lifted.restrict_to(12), Some(DirichletCharacter::epsilon4().lift_to(12)));
        assert_eq!(DirichletCharacter::odd_mod_prime(3).restrict_to(4), None);
        for m in [8u64, 12, 15, 16, 20, 36] {
            for chi in DirichletCharacter::all(m) {
                let f = chi.conductor();
                assert_eq!(chi.primitive().conductor(), f);
                assert_eq!(chi.primitive().lift_to(m), chi);
            }
        }
    }

    #[test]
    fn local_components_multiply_back() {
        for m in [12u64, 36, 60, 72] {
            for chi in DirichletCharacter::all(m) {
                let product = factor(m)
                    .into_iter()
                    .map(|(p, _)| chi.local_component(p).lift_to(m))
                    .fold(DirichletCharacter::trivial(m), |acc, c| acc.mul(&c));
                assert_eq!(product, chi);
            }
        }
        let eps3 = DirichletCharacter::kronecker(12, 36);
        assert!(!eps3.local_component(3).is_trivial());
        assert_eq!(eps3.local_component(2).primitive(), DirichletCharacter::epsilon4());
        assert!(DirichletCharacter::trivial(36).local_component(3).is_trivial());
        assert_eq!(eps3.local_component(5).modulus(), 1);
    }
}
