//! The chain `g_0 = f, g_1, ..., g_t` that moves a form to one whose
//! coefficients vanish on every `n` sharing a prime with the level, one
//! prime of `N` at a time.

use super::{descend, restrict_coprime, HalfIntegralForm};
use crate::arith::{factor, DirichletCharacter};
use crate::error::{Contradiction, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// `g_i` is the part of `g_{i-1}` coprime to `p`.
    Restricted,
    /// `g_{i-1}` was supported on multiples of `p`; `g_i` is the part of
    /// `g_{i-1}(z/p)` coprime to `p`.
    DescendedThenRestricted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainStep {
    pub prime: u64,
    pub kind: StepKind,
    pub form: HalfIntegralForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SanitizeChain {
    original: HalfIntegralForm,
    steps: Vec<ChainStep>,
}

impl SanitizeChain {
    pub fn original(&self) -> &HalfIntegralForm {
        &self.original
    }

    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    /// `g_0, g_1, ..., g_t`.
    pub fn forms(&self) -> Vec<&HalfIntegralForm> {
        std::iter::once(&self.original).chain(self.steps.iter().map(|s| &s.form)).collect()
    }

    /// The last form `g_t`.
    pub fn result(&self) -> &HalfIntegralForm {
        self.steps.last().map_or(&self.original, |s| &s.form)
    }

    /// Primes at which the chain descended, increasing.
    pub fn descended_primes(&self) -> Vec<u64> {
        self.steps
            .iter()
            .filter(|s| s.kind == StepKind::DescendedThenRestricted)
            .map(|s| s.prime)
            .collect()
    }

    /// The index `m` with `a(g_t, n) = a(f, m)` for `n` coprime to the level of `g_t`.
    pub fn original_index(&self, n: u64) -> u64 {
        n * self.descended_primes().iter().product::<u64>()
    }
}

/// Level and character conditions under which the chain cannot fail:
/// `p^3 ∤ N` for every prime, and `χ_p` nontrivial whenever `p` is odd and `p^2 | N`.
pub fn check_hypotheses(level: u64, character: &DirichletCharacter) -> Result<()> {
    for (p, e) in factor(level) {
        if e >= 3 {
            return Err(Error::HypothesisViolation {
                which: Contradiction::Hypotheses,
                detail: format!("{p}^3 divides the level {level}"),
            });
        }
        if p != 2 && e == 2 && character.local_component(p).is_trivial() {
            return Err(Error::HypothesisViolation {
                which: Contradiction::Hypotheses,
                detail: format!("{p}^2 divides the level {level} but the {p}-component of the character is trivial"),
            });
        }
    }
    Ok(())
}

/// Runs the chain over the primes of `N` in increasing order.
///
/// At each prime the coprime part is kept if it is nonzero. Otherwise the form
/// is descended by `p` and the coprime part of the result is kept. Both
/// vanishing cases are reported as [`Error::HypothesisViolation`], since they
/// cannot happen for genuine modular input.
pub fn sanitize(f: &HalfIntegralForm) -> Result<SanitizeChain> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    check_hypotheses(f.level(), f.character())?;
    let mut steps: Vec<ChainStep> = Vec::new();
    for (p, _) in factor(f.level()) {
        let prev = steps.last().map_or(f, |s| &s.form);
        let restricted = restrict_coprime(prev, p)?;
        if !restricted.is_zero() {
            steps.push(ChainStep {
                prime: p,
                kind: StepKind::Restricted,
                form: restricted,
            });
            continue;
        }
        if p == 2 {
            return Err(Error::HypothesisViolation {
                which: Contradiction::OddPartVanishes,
                detail: format!("every odd coefficient vanishes at level {}", prev.level()),
            });
        }
        let lowered = descend(prev, p).map_err(|e| Error::HypothesisViolation {
            which: Contradiction::Hypotheses,
            detail: format!("descent by {p} failed: {e}"),
        })?;
        let form = restrict_coprime(&lowered, p)?;
        if form.is_zero() {
            return Err(Error::HypothesisViolation {
                which: Contradiction::DescentVanishes { p },
                detail: format!("the descended form is again supported on multiples of {p}"),
            });
        }
        steps.push(ChainStep {
            prime: p,
            kind: StepKind::DescendedThenRestricted,
            form,
        });
    }
    Ok(SanitizeChain {
        original: f.clone(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gcd_u64, rat, Rational};
    use crate::halfint::dilate;

    fn form(level: u64, character: DirichletCharacter, values: impl Fn(u64) -> i64, len: u64) -> HalfIntegralForm {
        let coeffs = (1..=len).map(|n| rat(values(n))).collect::<Vec<Rational>>();
        HalfIntegralForm::from_rationals(9, level, character, coeffs, "synthetic").unwrap()
    }

    #[test]
    fn coprime_support_passes_through() {
        let f = form(12, DirichletCharacter::trivial(1), |n| (gcd_u64(n, 6) == 1) as i64 * n as i64, 100);
        let chain = sanitize(&f).unwrap();
        assert_eq!(chain.steps().len(), 2);
        assert_eq!(chain.result().coeffs(), f.coeffs());
        assert_eq!(chain.result().level(), 12 * 4 * 9);
        assert!(chain.descended_primes().is_empty());
    }

    #[test]
    fn even_support_is_a_contradiction() {
        let f = form(4, DirichletCharacter::trivial(1), |n| (n % 2 == 0) as i64, 50);
        match sanitize(&f) {
            Err(Error::HypothesisViolation { which, .. }) => assert_eq!(which, Contradiction::OddPartVanishes),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn descent_step_and_index_map() {
        let base = form(12, DirichletCharacter::trivial(1), |n| (n % 4 == 3 || n % 4 == 0) as i64 * n as i64, 100);
        let f = dilate(&base, 3).unwrap();
        assert_eq!(f.level(), 36);
        let chain = sanitize(&f).unwrap();
        assert_eq!(chain.descended_primes(), vec![3]);
        assert_eq!(chain.steps()[1].kind, StepKind::DescendedThenRestricted);
        let g = chain.result();
        assert_eq!(g.level(), 36 * 4 * 3);
        for n in g.support() {
            assert_eq!(gcd_u64(n, g.level()), 1);
            assert_eq!(g.coeff(n).unwrap(), f.coeff(chain.original_index(n)).unwrap());
        }
        assert!(g.support().next().is_some());
    }

    #[test]
    fn repeated_descent_is_a_contradiction() {
        let eps3 = DirichletCharacter::kronecker(12, 36);
        let f = form(36, eps3, |n| (n % 9 == 0 && n % 2 == 1) as i64, 200);
        match sanitize(&f) {
            Err(Error::HypothesisViolation { which, .. }) => {
                assert_eq!(which, Contradiction::DescentVanishes { p: 3 })
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hypotheses() {
        assert!(check_hypotheses(12, &DirichletCharacter::trivial(12)).is_ok());
        assert!(check_hypotheses(8 * 3, &DirichletCharacter::trivial(24)).is_err());
        assert!(check_hypotheses(36, &DirichletCharacter::trivial(36)).is_err());
        assert!(check_hypotheses(36, &DirichletCharacter::kronecker(12, 36)).is_ok());
        let zero = form(12, DirichletCharacter::trivial(1), |_| 0, 10);
        assert_eq!(sanitize(&zero), Err(Error::ZeroInput));
    }
}
