//! Subcommand implementations. Each writes its complete report to `out`.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use siegelfc::analytics::{choose_m, easylemma_ratio, growth_diagnostics, sieve_report, SquarefreeModulus};
use siegelfc::halfint::{theta_decompose_even, HalfIntegralForm};
use siegelfc::qforms::{class_sum, reduced, ClassGroup, QuadForm};

use crate::cache;
use crate::cli::{Cli, Command, MPolicy};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::forms::{obtain_table, FormId};
use crate::selftest;

/// Twelve significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// Parses, validates and runs one invocation.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let config = RunConfig::from_cli(cli)?;
    let mut out: Box<dyn Write> = match &config.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    execute(&cli.command, &config, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn execute(command: &Command, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Build { form, det_bound } => build(*form, *det_bound, config, out),
        Command::Coeff { form, t } => coeff(*form, t, config, out),
        Command::Fj { form, m, n_bound } => fj(*form, *m, *n_bound, config, out),
        Command::Theta { form, p, prec } => theta(*form, *p, *prec, config, out),
        Command::Scan { form, d_bound } => scan(*form, *d_bound, config, out),
        Command::ClassSum { form, disc } => class_sums(*form, *disc, config, out),
        Command::Sieve {
            form,
            p,
            prec,
            m,
            grid,
            y,
        } => sieve(*form, *p, *prec, *m, grid, *y, config, out),
        Command::Ratio { y, t } => {
            writeln!(out, "{}", fmt_float(easylemma_ratio(*y, *t)))?;
            Ok(())
        }
        Command::Selftest => {
            writeln!(out, "{}", config.header())?;
            selftest::run(out)
        }
    }
}

fn csv_writer<'a>(out: &'a mut dyn Write, config: &RunConfig) -> Result<csv::Writer<&'a mut dyn Write>, CliError> {
    writeln!(out, "{}", config.header())?;
    Ok(csv::Writer::from_writer(out))
}

fn build(form: FormId, det_bound: u64, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let table = form.build(det_bound)?;
    let path = cache::write_table(&config.cache, form, &table)?;
    writeln!(
        out,
        "{} det_bound={} records={} path={}",
        form,
        table.det_bound(),
        table.len(),
        path.display()
    )?;
    Ok(())
}

fn coeff(form: FormId, t: &[i64], config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let f = reduced(&QuadForm::new(t[0], t[1], t[2])?)?;
    let det_bound = (f.disc() as u64).div_ceil(4);
    let table = obtain_table(form, det_bound, &config.cache)?;
    writeln!(out, "{}", table.coefficient(&f)?)?;
    Ok(())
}

fn fj(form: FormId, m: u64, n_bound: u64, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let table = obtain_table(form, m * n_bound, &config.cache)?;
    let phi = table.fj_slice(m, n_bound)?;
    let mut w = csv_writer(out, config)?;
    w.write_record(["n", "r", "c"])?;
    for (n, r) in phi.pairs() {
        w.write_record([n.to_string(), r.to_string(), phi.coeff(n, r)?.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Theta decomposition of the index-`p` slice to precision `prec`.
pub fn theta_form(form: FormId, p: u64, prec: u64, config: &RunConfig) -> Result<HalfIntegralForm, CliError> {
    let n_bound = (prec + (2 * p - 1) * (2 * p - 1)) / (4 * p);
    let table = obtain_table(form, p * n_bound, &config.cache)?;
    let phi = table.fj_slice(p, n_bound)?;
    Ok(theta_decompose_even(&phi, prec)?)
}

fn theta(form: FormId, p: u64, prec: u64, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let h = theta_form(form, p, prec, config)?;
    let mut w = csv_writer(out, config)?;
    w.write_record(["n", "a", "a_normalized"])?;
    for n in 1..=h.precision() {
        let (re, _) = h.normalized(n)?;
        w.write_record([n.to_string(), h.coeff(n)?.to_string(), fmt_float(re)])?;
    }
    w.flush()?;
    Ok(())
}

fn scan(form: FormId, d_bound: u64, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let table = obtain_table(form, d_bound.div_ceil(4), &config.cache)?;
    let rows = table.scan_fundamental(d_bound)?;
    let mut w = csv_writer(out, config)?;
    w.write_record(["D", "n", "r", "m", "value"])?;
    for (d, f, v) in rows {
        w.write_record([d.to_string(), f.a.to_string(), f.b.to_string(), f.c.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn class_sums(form: FormId, disc: u64, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let table = obtain_table(form, disc.div_ceil(4), &config.cache)?;
    let group = ClassGroup::new(disc)?;
    let mut w = csv_writer(out, config)?;
    w.write_record(["D", "character", "value"])?;
    for j in 0..group.num_characters() {
        let v = class_sum(&table, &group, j)?;
        w.write_record([disc.to_string(), j.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sieve(
    form: FormId,
    p: u64,
    prec: u64,
    policy: MPolicy,
    grid: &[f64],
    y: f64,
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let h = theta_form(form, p, prec, config)?;
    let (modulus, t) = match policy {
        MPolicy::Fixed(m) => (SquarefreeModulus::new(m)?, None),
        MPolicy::Auto => {
            let growth = growth_diagnostics(&h, grid)?;
            let base = SquarefreeModulus::new(growth.exclusion_modulus)?;
            let lower = sieve_report(&h, &base, grid)?.slope;
            let chosen = choose_m(y, lower, growth.slope_estimate)?;
            (chosen.modulus.with_primes_of(growth.exclusion_modulus), Some(chosen.t))
        }
    };
    let report = sieve_report(&h, &modulus, grid)?;
    writeln!(out, "{}", config.header())?;
    writeln!(
        out,
        "# M={} T={} slope={} identity_ok={}",
        report.modulus,
        t.map_or("-".to_string(), |t| t.to_string()),
        fmt_float(report.slope),
        report.identity_ok
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["X", "S_direct", "S_expanded", "relative_difference"])?;
    for (x, v) in report.grid.iter().zip(&report.values) {
        w.write_record([
            fmt_float(*x),
            fmt_float(v.direct),
            fmt_float(v.expanded),
            fmt_float(v.relative_difference()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
