use std::path::PathBuf;

use siegelfc::arith::is_prime;

use crate::cache::cache_dir;
use crate::cli::{Cli, Command};
use crate::error::CliError;

/// A validated invocation. Its [`header`](RunConfig::header) opens every
/// report, so equal configurations produce equal output.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub output: Option<PathBuf>,
    pub cache: PathBuf,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn odd_prime(p: u64) -> Result<(), CliError> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(usage(format!("--p {p} must be an odd prime")))
    }
}

fn positive(name: &str, v: u64) -> Result<(), CliError> {
    if v == 0 {
        Err(usage(format!("--{name} must be positive")))
    } else {
        Ok(())
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let (subcommand, params): (&'static str, Vec<(&'static str, String)>) = match &cli.command {
            Command::Build { form, det_bound } => {
                positive("det-bound", *det_bound)?;
                ("build", vec![("form", form.to_string()), ("det_bound", det_bound.to_string())])
            }
            Command::Coeff { form, t } => {
                if t.len() != 3 {
                    return Err(usage("--t takes exactly three integers n,r,m"));
                }
                let t = t.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                ("coeff", vec![("form", form.to_string()), ("t", t)])
            }
            Command::Fj { form, m, n_bound } => {
                positive("m", *m)?;
                positive("n-bound", *n_bound)?;
                (
                    "fj",
                    vec![("form", form.to_string()), ("m", m.to_string()), ("n_bound", n_bound.to_string())],
                )
            }
            Command::Theta { form, p, prec } => {
                odd_prime(*p)?;
                positive("prec", *prec)?;
                (
                    "theta",
                    vec![("form", form.to_string()), ("p", p.to_string()), ("prec", prec.to_string())],
                )
            }
            Command::Scan { form, d_bound } => {
                positive("d-bound", *d_bound)?;
                ("scan", vec![("form", form.to_string()), ("d_bound", d_bound.to_string())])
            }
            Command::ClassSum { form, disc } => {
                if *disc < 3 || disc % 4 == 1 || disc % 4 == 2 {
                    return Err(usage(format!("--disc {disc}: -D must be a negative discriminant")));
                }
                ("class-sum", vec![("form", form.to_string()), ("disc", disc.to_string())])
            }
            Command::Sieve {
                form,
                p,
                prec,
                m,
                grid,
                y,
            } => {
                odd_prime(*p)?;
                positive("prec", *prec)?;
                if grid.is_empty() || grid.iter().any(|x| !(*x > 0.0)) {
                    return Err(usage("--grid must list positive numbers"));
                }
                if !(*y >= 0.0) {
                    return Err(usage("--y must be nonnegative"));
                }
                let grid = grid.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
                (
                    "sieve",
                    vec![
                        ("form", form.to_string()),
                        ("p", p.to_string()),
                        ("prec", prec.to_string()),
                        ("M", m.to_string()),
                        ("grid", grid),
                        ("y", y.to_string()),
                    ],
                )
            }
            Command::Ratio { y, t } => {
                if !(*y >= 0.0) || !(*t >= 2.0) {
                    return Err(usage("ratio needs --y >= 0 and --T >= 2"));
                }
                ("ratio", vec![("y", y.to_string()), ("T", t.to_string())])
            }
            Command::Selftest => ("selftest", vec![]),
        };
        Ok(Self {
            subcommand,
            params,
            output: cli.output.clone(),
            cache: cache_dir(cli.cache.as_deref()),
        })
    }

    /// `# siegelfc <subcommand> key=value ... cache=<dir> output=<path or ->`.
    pub fn header(&self) -> String {
        let mut s = format!("# siegelfc {}", self.subcommand);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        s.push_str(&format!(" cache={}", self.cache.display()));
        match &self.output {
            Some(p) => s.push_str(&format!(" output={}", p.display())),
            None => s.push_str(" output=-"),
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use clap::Parser;

    use super::*;
    use crate::cli::MPolicy;

    fn config(args: &[&str]) -> Result<RunConfig, CliError> {
        let mut argv = vec!["siegelfc", "--cache", "/c"];
        argv.extend_from_slice(args);
        RunConfig::from_cli(&Cli::try_parse_from(argv).unwrap())
    }

    #[test]
    fn header_echoes_parameters_in_order() {
        let c = config(&["sieve", "--form", "F12", "--p", "5", "--M", "30"]).unwrap();
        assert_eq!(
            c.header(),
            "# siegelfc sieve form=F12 p=5 prec=8000 M=30 grid=25,50,100,200 y=19 cache=/c output=-"
        );
    }

    #[test]
    fn semantic_validation_gives_usage_errors() {
        for args in [
            &["theta", "--form", "F10", "--p", "2", "--prec", "5"][..],
            &["fj", "--form", "F10", "--m", "0", "--n-bound", "3"],
            &["class-sum", "--form", "F10", "--disc", "6"],
            &["sieve", "--form", "F10", "--p", "3", "--grid", "10,-1"],
            &["ratio", "--y=-1", "--T", "100"],
        ] {
            assert!(matches!(config(args), Err(CliError::Usage(_))), "{args:?}");
        }
        assert!(config(&["class-sum", "--form", "F10", "--disc", "4"]).is_ok());
    }

    #[test]
    fn m_policy_round_trips() {
        for s in ["auto", "1", "30030"] {
            assert_eq!(s.parse::<MPolicy>().unwrap().to_string(), s);
        }
        assert!("six".parse::<MPolicy>().is_err());
    }
}
