//! Exact identity suites run by `siegelfc selftest`.

use std::io::Write;

use siegelfc::analytics::sieve_identity_selftest;
use siegelfc::arith::{kronecker, rat, rat_frac, DirichletCharacter, Rational};
use siegelfc::halfint::{descend, dilate, hecke_t_p2, u_op, HalfIntegralForm};
use siegelfc::jacobi::{cohen_h, cusp_generator};
use siegelfc::qforms::{class_sum, reduced_forms, ClassGroup, UnimodularTransform};
use siegelfc::siegel::maass_lift;
use siegelfc::Result;

use crate::error::CliError;

type Suite = (&'static str, fn() -> Result<bool>);

const SUITES: [Suite; 8] = [
    ("hurwitz-oracle", hurwitz_oracle),
    ("kronecker-multiplicativity", kronecker_multiplicativity),
    ("index-one-generator", index_one_generator),
    ("class-group-axioms", class_group_axioms),
    ("lift-class-invariance", lift_class_invariance),
    ("class-sums-d23", class_sums_d23),
    ("halfint-operators", halfint_operators),
    ("squarefree-indicator", || Ok(sieve_identity_selftest(100_000))),
];

/// Runs every suite, printing `ok <name>` or `FAIL <name>` per suite.
pub fn run(out: &mut dyn Write) -> std::result::Result<(), CliError> {
    let mut failed = Vec::new();
    for (name, suite) in SUITES {
        let passed = match suite() {
            Ok(b) => b,
            Err(e) => {
                writeln!(out, "# {name}: {e}")?;
                false
            }
        };
        writeln!(out, "{} {name}", if passed { "ok" } else { "FAIL" })?;
        if !passed {
            failed.push(name);
        }
    }
    writeln!(out, "selftest: {}/{} suites passed", SUITES.len() - failed.len(), SUITES.len())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Selftest(failed.join(", ")))
    }
}

fn weighted_form_count(n: u64) -> Rational {
    reduced_forms(n)
        .into_iter()
        .map(|f| {
            if f.a == f.b && f.b == f.c {
                rat_frac(1, 3)
            } else if f.b == 0 && f.a == f.c {
                rat_frac(1, 2)
            } else {
                rat(1)
            }
        })
        .sum()
}

fn hurwitz_oracle() -> Result<bool> {
    Ok((1..=1000).all(|n| cohen_h(1, n) == weighted_form_count(n)))
}

fn kronecker_multiplicativity() -> Result<bool> {
    for a in -40i64..=40 {
        for b in -40i64..=40 {
            for n in 1i64..=60 {
                if kronecker(a * b, n) != kronecker(a, n) * kronecker(b, n) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn index_one_generator() -> Result<bool> {
    let phi = cusp_generator(10, 300)?;
    Ok(phi.c_star(3)? == rat(1) && phi.c_star(4)? == rat(-2) && phi.verify_discriminant_dependence())
}

fn class_group_axioms() -> Result<bool> {
    for d in [3u64, 4, 20, 23, 47, 56, 71, 84, 231] {
        let g = ClassGroup::new(d)?;
        if !(g.verify_axioms() && g.verify_characters()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn lift_class_invariance() -> Result<bool> {
    let table = maass_lift(&cusp_generator(10, 41)?, 40)?;
    let moves = [
        UnimodularTransform::SWAP,
        UnimodularTransform::translation(1),
        UnimodularTransform::translation(-2).compose(&UnimodularTransform::SWAP),
        UnimodularTransform::SWAP.compose(&UnimodularTransform::translation(3)),
    ];
    for d in 3..=160u64 {
        for f in reduced_forms(d) {
            let a = table.coefficient(&f)?;
            let mut g = f;
            for t in &moves {
                g = g.transform(t);
                if table.coefficient(&g)? != a {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn class_sums_d23() -> Result<bool> {
    let table = maass_lift(&cusp_generator(10, 7)?, 6)?;
    let group = ClassGroup::new(23)?;
    let base = table.coefficient(&siegelfc::qforms::QuadForm::new(2, 1, 3)?)?;
    let mut ok = group.num_characters() == 3;
    for j in 0..group.num_characters() {
        let v = class_sum(&table, &group, j)?;
        let expected = if j == 0 { base.clone() * rat(3) } else { rat(0) };
        ok &= v.as_rational() == Some(&expected);
    }
    Ok(ok)
}

/// Deterministic integer vector with no small-period structure.
fn test_vector(len: u64, salt: u64) -> Vec<Rational> {
    (1..=len)
        .map(|n| rat(((n * 7919 + salt * 104_729) % 2001) as i64 - 1000))
        .collect()
}

fn halfint_operators() -> Result<bool> {
    let trivial = DirichletCharacter::trivial(1);
    let f = HalfIntegralForm::from_rationals(8, 4, trivial.clone(), test_vector(10_000, 1), "selftest")?;
    let g = HalfIntegralForm::from_rationals(9, 12, trivial, test_vector(2_000, 2), "selftest")?;
    let mut ok = true;
    for r in [3u64, 5, 7, 15] {
        let u = u_op(&g, r)?;
        for n in 1..=u.precision() {
            ok &= u.normalized_fourth_power(n)? == g.normalized_fourth_power(r * r * n)?;
        }
    }
    ok &= u_op(&u_op(&f, 3)?, 5)? == u_op(&f, 15)?;
    for (r, p) in [(3u64, 5u64), (5, 7), (7, 11)] {
        ok &= hecke_t_p2(&u_op(&f, r)?, p)?.coeffs() == u_op(&hecke_t_p2(&f, p)?, r)?.coeffs();
    }
    for p in [3u64, 5, 7] {
        ok &= descend(&dilate(&f, p)?, p)? == f;
    }
    Ok(ok)
}
