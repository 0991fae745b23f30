use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::config::RunConfig;
use crate::error::CliError;

pub const TOOL: &str = "nfmertens";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Meta<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub field_sha256: String,
    pub config: &'a RunConfig,
}

impl<'a> Meta<'a> {
    pub fn new(descriptor_bytes: &[u8], config: &'a RunConfig) -> Self {
        Meta {
            tool: TOOL,
            version: VERSION,
            field_sha256: hex::encode(Sha256::digest(descriptor_bytes)),
            config,
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a, T: Serialize> {
    meta: &'a Meta<'a>,
    #[serde(flatten)]
    body: &'a T,
}

/// A table of already-formatted cells.
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&'static str]) -> Self {
        CsvTable { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Standard output, or a temporary file renamed onto the target on success.
enum Sink {
    Stdout(BufWriter<io::Stdout>),
    File { tmp: BufWriter<NamedTempFile>, target: PathBuf },
}

impl Sink {
    fn open(out: Option<&Path>) -> Result<Self, CliError> {
        let Some(target) = out else {
            return Ok(Sink::Stdout(BufWriter::new(io::stdout())));
        };
        let dir = match target.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let tmp = NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Sink::File { tmp: BufWriter::new(tmp), target: target.to_path_buf() })
    }

    fn writer(&mut self) -> &mut dyn Write {
        match self {
            Sink::Stdout(w) => w,
            Sink::File { tmp, .. } => tmp,
        }
    }

    fn finish(self) -> Result<(), CliError> {
        match self {
            Sink::Stdout(mut w) => w.flush().map_err(|e| CliError::io("<stdout>", e)),
            Sink::File { tmp, target } => {
                let tmp = tmp.into_inner().map_err(|e| CliError::io(&target, e.into_error()))?;
                tmp.as_file().sync_all().map_err(|e| CliError::io(&target, e))?;
                tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
                Ok(())
            }
        }
    }
}

pub fn emit_json<T: Serialize>(meta: &Meta, body: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut sink = Sink::open(out)?;
    let w = sink.writer();
    serde_json::to_writer_pretty(&mut *w, &JsonReport { meta, body })?;
    w.write_all(b"\n").map_err(|e| CliError::io(display_target(out), e))?;
    sink.finish()
}

/// CSV with the tool version, descriptor hash and config as leading
/// `#` lines.
pub fn emit_csv(meta: &Meta, table: &CsvTable, out: Option<&Path>) -> Result<(), CliError> {
    let mut sink = Sink::open(out)?;
    let io_err = |e| CliError::io(display_target(out), e);
    let w = sink.writer();
    writeln!(w, "# tool: {} {}", meta.tool, meta.version).map_err(io_err)?;
    writeln!(w, "# field_sha256: {}", meta.field_sha256).map_err(io_err)?;
    writeln!(w, "# config: {}", serde_json::to_string(meta.config)?).map_err(io_err)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&table.header)?;
    for row in &table.rows {
        csv.write_record(row)?;
    }
    csv.flush().map_err(io_err)?;
    drop(csv);
    sink.finish()
}

fn display_target(out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("<stdout>"))
}
