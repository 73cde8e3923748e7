use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Where and how results are written.
pub struct Sink {
    pub format: Format,
    out: Option<PathBuf>,
}

impl Sink {
    pub fn new(format: Format, out: Option<PathBuf>) -> Self {
        Self { format, out }
    }

    pub fn require_json(&self, cmd: &str) -> Result<()> {
        if self.format != Format::Json {
            bail!("{cmd} only supports --format json");
        }
        Ok(())
    }

    fn write(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut so = std::io::stdout().lock();
                so.write_all(bytes)?;
                so.flush()?;
                Ok(())
            }
        }
    }

    pub fn json<T: Serialize + ?Sized>(&self, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(s.as_bytes())
    }

    pub fn csv<T: Serialize>(&self, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("csv: {e}"))?;
        self.write(&bytes)
    }
}
