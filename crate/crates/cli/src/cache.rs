//! JSONL coefficient cache.
//!
//! A cache file `<dir>/<form>.jsonl` holds one header object followed by one
//! record per reduced form, sorted by `(m, n, r)`. The record key `(n, r, m)`
//! is the reduced form `n x^2 + r x y + m y^2`, that is the matrix
//! `[[n, r/2], [r/2, m]]`. Values are exact decimal strings, with `p/q` for
//! non-integers.
//!
//! Writers hold `<file>.lock`, created exclusively, and publish by renaming a
//! temporary file, so readers never block and never see a partial file.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use siegelfc::arith::Rational;
use siegelfc::qforms::QuadForm;
use siegelfc::siegel::SiegelCoefficientTable;

use crate::error::CliError;
use crate::forms::FormId;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "SIEGELFC_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub form: String,
    pub weight: i64,
    pub det_bound: u64,
    pub source: String,
    pub records: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub form: String,
    pub n: i64,
    pub r: i64,
    pub m: i64,
    pub value: String,
}

impl CacheRecord {
    pub fn key(&self) -> QuadForm {
        QuadForm {
            a: self.n,
            b: self.r,
            c: self.m,
        }
    }

    pub fn parse_value(&self) -> Result<Rational, CliError> {
        self.value
            .parse::<Rational>()
            .map_err(|e| CliError::Cache(format!("bad value {:?}: {e}", self.value)))
    }
}

/// `--cache` if given, else `$SIEGELFC_CACHE_DIR`, else `./.siegelfc-cache`.
pub fn cache_dir(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".siegelfc-cache")),
    }
}

pub fn cache_file(dir: &Path, form: FormId) -> PathBuf {
    dir.join(format!("{}.jsonl", form.name()))
}

fn lock_path(file: &Path) -> PathBuf {
    let mut s = file.as_os_str().to_owned();
    s.push(".lock");
    PathBuf::from(s)
}

/// Exclusive writer lock, released on drop.
struct WriterLock {
    path: PathBuf,
}

impl WriterLock {
    fn acquire(file: &Path) -> Result<Self, CliError> {
        let path = lock_path(file);
        OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
            .map_err(|e| CliError::Cache(format!("cannot lock {}: {e}", path.display())))?;
        Ok(Self { path })
    }
}

impl Drop for WriterLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// Records of a table in file order.
pub fn records(form: FormId, table: &SiegelCoefficientTable) -> Vec<CacheRecord> {
    let mut out: Vec<CacheRecord> = table
        .iter()
        .map(|(k, v)| CacheRecord {
            form: form.name().to_string(),
            n: k.a,
            r: k.b,
            m: k.c,
            value: v.to_string(),
        })
        .collect();
    out.sort_by_key(|r| (r.m, r.n, r.r));
    out
}

/// Writes `table` to `<dir>/<form>.jsonl` under the writer lock.
pub fn write_table(dir: &Path, form: FormId, table: &SiegelCoefficientTable) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    let path = cache_file(dir, form);
    let _lock = WriterLock::acquire(&path)?;
    let tmp = dir.join(format!(".{}.jsonl.tmp", form.name()));
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        let header = CacheHeader {
            form: form.name().to_string(),
            weight: table.weight(),
            det_bound: table.det_bound(),
            source: table.source().to_string(),
            records: table.len(),
        };
        writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))?;
        for rec in records(form, table) {
            writeln!(w, "{}", serde_json::to_string(&rec).expect("record serializes"))?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// The header of a cache file, or `None` if the file does not exist.
pub fn read_header(path: &Path) -> Result<Option<CacheHeader>, CliError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut line = String::new();
    BufReader::new(file).read_line(&mut line)?;
    serde_json::from_str(&line)
        .map(Some)
        .map_err(|e| CliError::Cache(format!("{}: bad header: {e}", path.display())))
}

/// Loads and validates a cache file.
pub fn read_table(path: &Path) -> Result<SiegelCoefficientTable, CliError> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let first = lines
        .next()
        .ok_or_else(|| CliError::Cache(format!("{} is empty", path.display())))??;
    let header: CacheHeader =
        serde_json::from_str(&first).map_err(|e| CliError::Cache(format!("bad header: {e}")))?;
    let mut entries = Vec::with_capacity(header.records);
    for line in lines {
        let line = line?;
        let rec: CacheRecord =
            serde_json::from_str(&line).map_err(|e| CliError::Cache(format!("bad record {line:?}: {e}")))?;
        if rec.form != header.form {
            return Err(CliError::Cache(format!("record for {} in {} cache", rec.form, header.form)));
        }
        entries.push((rec.key(), rec.parse_value()?));
    }
    if entries.len() != header.records {
        return Err(CliError::Cache(format!(
            "header announces {} records, found {}",
            header.records,
            entries.len()
        )));
    }
    Ok(SiegelCoefficientTable::from_records(
        header.weight,
        header.source,
        header.det_bound,
        entries,
    )?)
}
