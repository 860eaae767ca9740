use std::path::Path;

use clap::ValueEnum;
use siegelfc::jacobi::cusp_generator;
use siegelfc::siegel::{maass_lift, SiegelCoefficientTable};

use crate::cache;
use crate::error::CliError;

/// The Siegel cusp forms the driver can construct: the lifts of the index-one
/// Jacobi cusp forms of weight 10 and 12.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormId {
    #[value(name = "F10")]
    F10,
    #[value(name = "F12")]
    F12,
}

impl FormId {
    pub fn weight(self) -> u32 {
        match self {
            FormId::F10 => 10,
            FormId::F12 => 12,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FormId::F10 => "F10",
            FormId::F12 => "F12",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "F10" => Some(FormId::F10),
            "F12" => Some(FormId::F12),
            _ => None,
        }
    }

    pub fn build(self, det_bound: u64) -> siegelfc::Result<SiegelCoefficientTable> {
        let phi = cusp_generator(self.weight(), det_bound + 1)?;
        maass_lift(&phi, det_bound)
    }
}

impl std::fmt::Display for FormId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A table covering `det_bound`, read from the cache when it is large enough
/// and computed in memory otherwise.
pub fn obtain_table(form: FormId, det_bound: u64, cache_dir: &Path) -> Result<SiegelCoefficientTable, CliError> {
    let path = cache::cache_file(cache_dir, form);
    if let Some(header) = cache::read_header(&path)? {
        if header.det_bound >= det_bound {
            return cache::read_table(&path);
        }
    }
    Ok(form.build(det_bound)?)
}
