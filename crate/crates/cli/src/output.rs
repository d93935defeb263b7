//! Output destinations and row formatting.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

/// Directory prepended to relative output paths.
pub const OUTPUT_DIR_ENV: &str = "YAGLOM_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(alias = "json-lines")]
    Jsonl,
}

/// Resolve `path` against the output directory override.
pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writer for `path`, or stdout when absent.
pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let p = resolve(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("cannot create {}", parent.display()))?;
            }
            let f = File::create(&p).with_context(|| format!("cannot create {}", p.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Full-precision float in the shortest form that parses back exactly,
/// switching to exponent notation for very small or large magnitudes.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v != 0.0 && v.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Rows written in either CSV (with a header) or JSON lines.
pub struct Table<W: Write> {
    out: W,
    format: Format,
    header: &'static [&'static str],
    started: bool,
}

impl<W: Write> Table<W> {
    pub fn new(out: W, format: Format, header: &'static [&'static str]) -> Self {
        Self {
            out,
            format,
            header,
            started: false,
        }
    }

    /// `csv` holds the pre-formatted CSV cells; `json` the same row as an
    /// object.
    pub fn row<T: Serialize>(&mut self, csv: &[String], json: &T) -> Result<()> {
        match self.format {
            Format::Csv => {
                if !self.started {
                    writeln!(self.out, "{}", self.header.join(","))?;
                    self.started = true;
                }
                writeln!(self.out, "{}", csv.join(","))?;
            }
            Format::Jsonl => writeln!(self.out, "{}", serde_json::to_string(json)?)?,
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        if self.format == Format::Csv && !self.started {
            writeln!(self.out, "{}", self.header.join(","))?;
        }
        self.out.flush()?;
        Ok(())
    }
}
