//! The fourteen acceptance criteria. Run with
//! `cargo test -p siegelfc-cli --test acceptance -- --nocapture` to see the report.

use std::process::Command;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use siegelfc::analytics::{
    bound_check_ur2, easylemma_interval, sieve_identity_selftest, sieve_report, sieve_s, smoothed_sums,
    SquarefreeModulus, SIEVE_TOLERANCE, TRUNCATION_FACTOR,
};
use siegelfc::arith::{is_squarefree, rat, rat_frac, Cyclotomic, DirichletCharacter, Rational};
use siegelfc::halfint::{
    dilate, hecke_t_p2, proportionality_constant, sanitize, theta_decompose_even, u_op, HalfIntegralForm, StepKind,
};
use siegelfc::jacobi::{cohen_h_table, cusp_generator, cusp_generator_by_columns};
use siegelfc::qforms::{class_sum, reduced_forms, ClassGroup, QuadForm, UnimodularTransform};
use siegelfc::siegel::{maass_lift, SiegelCoefficientTable};
use siegelfc::{Contradiction, Error};

const THETA_PRIME: u64 = 3;
const THETA_PRECISION: u64 = 8000;
const GRID: [f64; 4] = [25.0, 50.0, 100.0, 200.0];

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn theta_n_bound() -> u64 {
    (THETA_PRECISION + (2 * THETA_PRIME - 1).pow(2)) / (4 * THETA_PRIME)
}

fn f10() -> &'static SiegelCoefficientTable {
    static T: OnceLock<SiegelCoefficientTable> = OnceLock::new();
    T.get_or_init(|| {
        let det_bound = THETA_PRIME * theta_n_bound();
        maass_lift(&cusp_generator(10, det_bound + 1).unwrap(), det_bound).unwrap()
    })
}

fn f12() -> &'static SiegelCoefficientTable {
    static T: OnceLock<SiegelCoefficientTable> = OnceLock::new();
    T.get_or_init(|| maass_lift(&cusp_generator(12, 751).unwrap(), 750).unwrap())
}

/// The theta decomposition of the index-3 slice of F10.
fn h() -> &'static HalfIntegralForm {
    static H: OnceLock<HalfIntegralForm> = OnceLock::new();
    H.get_or_init(|| {
        let phi = f10().fj_slice(THETA_PRIME, theta_n_bound()).unwrap();
        theta_decompose_even(&phi, THETA_PRECISION).unwrap()
    })
}

fn ac1() -> Outcome {
    let phi = cusp_generator(10, 1001).map_err(|e| e.to_string())?;
    let by_columns = cusp_generator_by_columns(10, 1001).map_err(|e| e.to_string())?;
    let c3 = phi.c_star(3).map_err(|e| e.to_string())?;
    let c4 = phi.c_star(4).map_err(|e| e.to_string())?;
    let d_max = by_columns.d_max();
    let dependence = by_columns.verify_discriminant_dependence();
    let mut agree = true;
    for (n, r) in by_columns.pairs() {
        if 4 * n - r * r <= 4000 {
            agree &= by_columns.coeff(n, r).unwrap() == phi.coeff(n, r).unwrap();
        }
    }
    check(
        c3 == rat(1) && c4 == rat(-2) && d_max >= 4000 && dependence && agree,
        format!("c*(3) = {c3}, c*(4) = {c4}, D-only dependence up to {d_max}: {dependence}, routes agree: {agree}"),
    )
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

fn ac2() -> Outcome {
    let table = cohen_h_table(1, 2000);
    let bad: Vec<u64> = (1..=2000u64).filter(|&n| table[n as usize] != weighted_form_count(n)).collect();
    check(bad.is_empty(), format!("H(N) vs weighted reduced forms for N <= 2000, mismatches: {bad:?}"))
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> UnimodularTransform {
    (0..rng.gen_range(1..8)).fold(UnimodularTransform::IDENTITY, |acc, _| {
        let step = if rng.gen_bool(0.5) {
            UnimodularTransform::SWAP
        } else {
            UnimodularTransform::translation(rng.gen_range(-3..=3))
        };
        acc.compose(&step)
    })
}

fn random_form(rng: &mut ChaCha8Rng, det_bound: u64) -> QuadForm {
    loop {
        let a = rng.gen_range(1..=25i64);
        let c = rng.gen_range(1..=25i64);
        let b = rng.gen_range(-2 * a.min(c)..=2 * a.min(c));
        let d = 4 * a * c - b * b;
        if d > 0 && d as u64 <= 4 * det_bound {
            return QuadForm::new(a, b, c).unwrap();
        }
    }
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = 0;
    for table in [f10(), f12()] {
        for _ in 0..200 {
            let t = random_form(&mut rng, table.det_bound());
            let a = random_unimodular(&mut rng);
            let moved = t.transform(&a);
            if table.coefficient(&t).map_err(|e| e.to_string())? != table.coefficient(&moved).map_err(|e| e.to_string())? {
                failures += 1;
            }
        }
    }
    check(failures == 0, format!("200 pairs each on F10 and F12, {failures} mismatches"))
}

fn ac4() -> Outcome {
    let mut counts = Vec::new();
    for table in [f10(), f12()] {
        let rows = table.scan_fundamental(3000).map_err(|e| e.to_string())?;
        let mut ds: Vec<u64> = rows.iter().map(|(d, _, _)| *d).filter(|&d| d % 2 == 1 && is_squarefree(d)).collect();
        ds.dedup();
        counts.push(ds.len());
    }
    check(
        counts.iter().all(|&c| c >= 10),
        format!("odd squarefree D <= 3000 with a nonzero coefficient: F10 {}, F12 {}", counts[0], counts[1]),
    )
}

fn ac5() -> Outcome {
    let h = h();
    let a3 = h.coeff(3).map_err(|e| e.to_string())?.clone();
    let off_support: Vec<u64> = (1..=h.precision())
        .filter(|n| n % 4 == 1 || n % 4 == 2)
        .filter(|&n| !h.coeff(n).unwrap().is_zero())
        .collect();
    check(
        !h.is_zero() && a3 == Cyclotomic::from(rat(1)) && off_support.is_empty() && h.precision() >= THETA_PRECISION,
        format!(
            "precision {}, level {}, a(3) = {a3}, nonzero a(N) with N = 1, 2 mod 4: {}",
            h.precision(),
            h.level(),
            off_support.len()
        ),
    )
}

fn ac6() -> Outcome {
    let h = h();
    let mut parts = Vec::new();
    let mut ok = true;
    for p in [5u64, 7] {
        let t = hecke_t_p2(h, p).map_err(|e| e.to_string())?;
        let truncated = HalfIntegralForm::new(
            h.kappa(),
            h.level(),
            h.character().clone(),
            h.coeffs()[1..=t.precision() as usize].to_vec(),
            "truncated",
        )
        .map_err(|e| e.to_string())?;
        match proportionality_constant(&truncated, &t) {
            Some(c) => parts.push(format!("T({}) h = {c} h on n <= {}", p * p, t.precision())),
            None => {
                ok = false;
                parts.push(format!("T({}) h not proportional", p * p));
            }
        }
    }
    check(ok, parts.join("; "))
}

fn random_form_of_length(rng: &mut ChaCha8Rng, kappa: i64, level: u64, len: usize) -> HalfIntegralForm {
    let coeffs = (0..len).map(|_| rat(rng.gen_range(-1000..=1000))).collect();
    HalfIntegralForm::from_rationals(kappa, level, DirichletCharacter::trivial(1), coeffs, "random").unwrap()
}

fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..4 {
        let f = random_form_of_length(&mut rng, 9, 4, 10_000);
        for r in [3u64, 5, 7, 15, 21] {
            let u = u_op(&f, r).map_err(|e| e.to_string())?;
            for n in 1..=u.precision() {
                if u.normalized_fourth_power(n).unwrap() != f.normalized_fourth_power(r * r * n).unwrap() {
                    return Err(format!("U({}) fails at n = {n}", r * r));
                }
                checked += 1;
            }
        }
        for (r, s) in [(3u64, 5u64), (3, 7), (5, 7)] {
            let lhs = u_op(&u_op(&f, r).unwrap(), s).unwrap();
            if lhs != u_op(&f, r * s).unwrap() {
                return Err(format!("U composition fails for r = {r}, s = {s}"));
            }
        }
        let g = random_form_of_length(&mut rng, 8, 4, 10_000);
        for (r, p) in [(3u64, 5u64), (5, 7), (7, 11), (3, 13)] {
            let a = hecke_t_p2(&u_op(&g, r).unwrap(), p).unwrap();
            let b = u_op(&hecke_t_p2(&g, p).unwrap(), r).unwrap();
            if a.coeffs() != b.coeffs() {
                return Err(format!("T({}) and U({}) do not commute", p * p, r * r));
            }
        }
    }
    Ok(format!("{checked} U-identities, U compositions and T-U commutations on length 10^4"))
}

fn ac8() -> Outcome {
    let identity = sieve_identity_selftest(100_000);
    let mut worst = 0.0f64;
    for m in [1u64, 2, 6, 30, 210] {
        for x in GRID {
            let v = sieve_s(h(), &SquarefreeModulus::new(m).unwrap(), x).map_err(|e| e.to_string())?;
            worst = worst.max(v.relative_difference());
        }
    }
    check(
        identity && worst <= SIEVE_TOLERANCE,
        format!("indicator identity to 10^5: {identity}, max relative difference {worst:e}"),
    )
}

fn ac9() -> Outcome {
    let h = h();
    let r = smoothed_sums(h, &GRID).map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = r.windows(2).map(|w| w[1] / w[0]).collect();
    let report = sieve_report(h, &SquarefreeModulus::new(6).unwrap(), &GRID).map_err(|e| e.to_string())?;
    let s: Vec<f64> = report.values.iter().map(|v| v.direct).collect();
    let increasing = s.windows(2).all(|w| w[1] > w[0]);
    check(
        ratios.iter().all(|q| (1.6..=2.4).contains(q)) && increasing && report.slope > 0.0,
        format!(
            "R ratios {:?}, S(6, X) increasing: {increasing}, slope {:e}",
            ratios.iter().map(|q| format!("{q:.3}")).collect::<Vec<_>>(),
            report.slope
        ),
    )
}

/// Four doublings ending at the largest `Y` the precision of `U(r^2) h` admits.
fn bound_grid(r: u64) -> Vec<f64> {
    let y_max = (THETA_PRECISION / (r * r)) as f64 / TRUNCATION_FACTOR;
    vec![y_max / 8.0, y_max / 4.0, y_max / 2.0, y_max]
}

fn ac10() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for r in [5u64, 7, 35] {
        let report = bound_check_ur2(h(), r, &bound_grid(r)).map_err(|e| e.to_string())?;
        ok &= report.within_bound;
        parts.push(format!("r = {r}: max ratio {:.4} (limit {})", report.max_ratio(), report.limit));
    }
    check(ok, parts.join("; "))
}

fn ac11() -> Outcome {
    let intervals: Vec<_> = [100.0, 1000.0, 10000.0].iter().map(|&t| easylemma_interval(19.0, t)).collect();
    let decreasing = intervals.windows(2).all(|w| w[1].hi < w[0].lo);
    let last = intervals.last().unwrap().hi;
    check(
        decreasing && last < 0.01,
        format!(
            "intervals {:?}",
            intervals.iter().map(|i| format!("[{:.6e}, {:.6e}]", i.lo, i.hi)).collect::<Vec<_>>()
        ),
    )
}

fn mangle(f: &HalfIntegralForm, keep: impl Fn(u64) -> bool) -> HalfIntegralForm {
    let coeffs = (1..=f.precision())
        .map(|n| if keep(n) { f.coeff(n).unwrap().clone() } else { Cyclotomic::zero() })
        .collect();
    HalfIntegralForm::new(f.kappa(), f.level(), f.character().clone(), coeffs, "mangled").unwrap()
}

fn ac12() -> Outcome {
    let h = mangle(h(), |n| n <= 2000);
    let dilated = dilate(&h, 3).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();

    for (name, input, descended) in [("h", &h, false), ("dilate(h, 3)", &dilated, true)] {
        let chain = sanitize(input).map_err(|e| format!("{name}: {e}"))?;
        let g = chain.result();
        let kinds: Vec<StepKind> = chain.steps().iter().map(|s| s.kind).collect();
        let expected_kinds = if descended {
            vec![StepKind::Restricted, StepKind::DescendedThenRestricted]
        } else {
            vec![StepKind::Restricted, StepKind::Restricted]
        };
        let coprime = g.support().all(|n| siegelfc::arith::gcd_u64(n, g.level()) == 1);
        let mapped = g
            .support()
            .all(|n| g.coeff(n).unwrap() == input.coeff(chain.original_index(n)).unwrap());
        if kinds != expected_kinds || !coprime || !mapped || g.is_zero() {
            return Err(format!("{name}: steps {kinds:?}, coprime {coprime}, index map {mapped}"));
        }
        parts.push(format!("{name}: level {} -> {} via {kinds:?}", input.level(), g.level()));
    }

    let even_only = mangle(&h, |n| n % 2 == 0);
    let nine_only = mangle(&dilated, |n| n % 9 == 0 && n % 2 == 1);
    let expected = [
        ("even part of h", &even_only, Contradiction::OddPartVanishes),
        ("odd multiples of 9 in dilate(h, 3)", &nine_only, Contradiction::DescentVanishes { p: 3 }),
    ];
    for (name, input, which) in expected {
        match sanitize(input) {
            Err(Error::HypothesisViolation { which: got, .. }) if got == which => {
                parts.push(format!("{name}: {which:?}"));
            }
            other => return Err(format!("{name}: expected {which:?}, got {other:?}")),
        }
    }
    Ok(parts.join("; "))
}

fn ac13() -> Outcome {
    let table = f10();
    let group = ClassGroup::new(23).map_err(|e| e.to_string())?;
    let base = table.coefficient(&QuadForm::new(2, 1, 3).unwrap()).map_err(|e| e.to_string())?;
    let sums: Vec<Cyclotomic> = (0..group.num_characters())
        .map(|j| class_sum(table, &group, j).unwrap())
        .collect();
    let ok = sums.len() == 3
        && sums[0] == Cyclotomic::from(base.clone() * rat(3))
        && sums[1..].iter().all(Cyclotomic::is_zero);
    check(
        ok,
        format!(
            "a(F10, (2,1,3)) = {base}, sums {:?}",
            sums.iter().map(ToString::to_string).collect::<Vec<_>>()
        ),
    )
}

fn ac14() -> Outcome {
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    let invocations: [&[&str]; 7] = [
        &["selftest"],
        &["fj", "--form", "F10", "--m", "2", "--n-bound", "12"],
        &["theta", "--form", "F10", "--p", "3", "--prec", "400"],
        &["scan", "--form", "F12", "--d-bound", "300"],
        &["class-sum", "--form", "F10", "--disc", "56"],
        &["sieve", "--form", "F10", "--p", "3", "--prec", "2000", "--M", "6", "--grid", "5,10,20,40"],
        &["sieve", "--form", "F10", "--p", "3", "--prec", "2000", "--grid", "5,10,20,40"],
    ];
    let run = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_siegelfc"))
            .args(args)
            .arg("--cache")
            .arg(cache.path())
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
        }
        Ok(out.stdout)
    };
    for args in invocations {
        let first = run(args)?;
        let second = run(args)?;
        if first != second || first.is_empty() {
            return Err(format!("{args:?}: outputs differ across runs"));
        }
    }
    Ok(format!("{} invocations byte-identical across two runs", invocations.len()))
}

#[test]
fn acceptance() {
    let criteria: [fn() -> Outcome; 14] = [
        ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11, ac12, ac13, ac14,
    ];
    let mut failed = Vec::new();
    for (i, criterion) in criteria.iter().enumerate() {
        let n = i + 1;
        let outcome = std::panic::catch_unwind(criterion).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("[PASS] AC-{n}: {detail}"),
            Err(detail) => {
                println!("[FAIL] AC-{n}: {detail}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
