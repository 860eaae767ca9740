//! Theta decomposition of an index-`p` Jacobi form into a single
//! half-integral weight form, by summing `c(n, μ)` along the congruence
//! classes `μ^2 ≡ -N (mod 4p)`.

use rayon::prelude::*;

use super::HalfIntegralForm;
use crate::arith::{is_prime, Cyclotomic, DirichletCharacter, Rational};
use crate::error::{Error, Result};
use crate::jacobi::JacobiForm;

fn odd_prime_index(phi: &JacobiForm) -> Result<u64> {
    let p = phi.index();
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("index {p} is not an odd prime")));
    }
    Ok(p)
}

/// The `μ` in `0..2p` with `μ^2 ≡ -n (mod 4p)`, paired with `(n + μ^2) / 4p`.
fn classes(n: u64, p: u64) -> impl Iterator<Item = (i64, i64)> {
    let m = 4 * p;
    (0..2 * p)
        .filter(move |mu| (n + mu * mu).is_multiple_of(m))
        .map(move |mu| (((n + mu * mu) / m) as i64, mu as i64))
}

fn check_table(phi: &JacobiForm, p: u64, precision: u64) -> Result<()> {
    let needed = (1..=precision)
        .flat_map(|n| classes(n, p).map(|(m, _)| m as u64))
        .max()
        .unwrap_or(0);
    if needed > phi.n_max() {
        return Err(Error::OutOfPrecision {
            needed,
            available: phi.n_max(),
        });
    }
    Ok(())
}

/// `h(τ) = sum_N a(N) q^N` with `a(N) = sum_{μ^2 ≡ -N (4p)} c((N + μ^2)/4p, μ)`,
/// for an index-`p` Jacobi form of even weight `k`. The result has
/// `κ = k - 1`, level `4p` and trivial character.
pub fn theta_decompose_even(phi: &JacobiForm, precision: u64) -> Result<HalfIntegralForm> {
    let p = odd_prime_index(phi)?;
    let k = phi.weight();
    if k % 2 != 0 {
        return Err(Error::InvalidArgument(format!("weight {k} is odd; use the twisted decomposition")));
    }
    check_table(phi, p, precision)?;
    let coeffs = (1..=precision)
        .into_par_iter()
        .map(|n| {
            classes(n, p)
                .map(|(m, mu)| phi.coeff(m, mu))
                .sum::<Result<Rational>>()
                .map(Cyclotomic::from)
        })
        .collect::<Result<Vec<_>>>()?;
    HalfIntegralForm::new(k - 1, 4 * p, DirichletCharacter::trivial(1), coeffs, format!("theta_even(p={p})"))
}

/// The twisted decomposition for odd weight `k`:
/// `a(N) = sum_{μ^2 ≡ -N (4p)} χ(μ) c((N + μ^2)/4p, μ)` with `χ` odd modulo `p`.
/// The result has `κ = k - 1`, level `4p^2` and character `ε_4 χ`.
pub fn theta_decompose_odd(phi: &JacobiForm, chi: &DirichletCharacter, precision: u64) -> Result<HalfIntegralForm> {
    let p = odd_prime_index(phi)?;
    let k = phi.weight();
    if k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("weight {k} is even; use the untwisted decomposition")));
    }
    if p % chi.modulus() != 0 {
        return Err(Error::InvalidArgument(format!(
            "character modulus {} does not divide {p}",
            chi.modulus()
        )));
    }
    if !chi.is_odd() {
        return Err(Error::CharacterParity);
    }
    check_table(phi, p, precision)?;
    let coeffs = (1..=precision)
        .into_par_iter()
        .map(|n| {
            let mut acc = Cyclotomic::zero();
            for (m, mu) in classes(n, p) {
                let c = phi.coeff(m, mu)?;
                acc += &chi.value(mu).scale(&c);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let level = 4 * p * p;
    let character = DirichletCharacter::epsilon4().lift_to(level).mul(&chi.lift_to(level));
    HalfIntegralForm::new(k - 1, level, character, coeffs, format!("theta_odd(p={p})"))
}
