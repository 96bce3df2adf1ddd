use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

/// Output directory whose files all open with the same provenance comment.
pub struct Reporter {
    dir: PathBuf,
    stamp: String,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Output { path: path.display().to_string(), source }
}

impl Reporter {
    pub fn new(dir: &Path, config_hash: &str, seed: u64) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        Ok(Reporter { dir: dir.to_path_buf(), stamp: format!("config_hash={config_hash} seed={seed}") })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn stamp(&self) -> &str {
        &self.stamp
    }

    fn write(&self, name: &str, contents: String) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(io_err(&path))?;
        Ok(path)
    }

    /// Writes `body` after a `# config_hash=... seed=...` line.
    pub fn write_text(&self, name: &str, body: &str) -> CliResult<PathBuf> {
        self.write(name, format!("# {}\n{body}", self.stamp))
    }

    /// Same stamp as an XML comment ahead of the `<svg>` element.
    pub fn write_svg(&self, name: &str, svg: &str) -> CliResult<PathBuf> {
        self.write(name, format!("<!-- {} -->\n{svg}", self.stamp))
    }

    pub fn table(&self, columns: &[&str]) -> Table {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(columns).expect("in-memory write");
        Table { writer: w, footer: String::new() }
    }

    pub fn write_table(&self, name: &str, table: Table) -> CliResult<PathBuf> {
        let bytes = table.writer.into_inner().map_err(|e| CliError::Output {
            path: name.into(),
            source: std::io::Error::other(e.to_string()),
        })?;
        let body = String::from_utf8(bytes).expect("csv output is utf-8");
        self.write_text(name, &format!("{body}{}", table.footer))
    }
}

/// CSV rows collected in memory, with an optional trailing block.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    footer: String,
}

impl Table {
    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        Ok(self.writer.write_record(fields)?)
    }

    pub fn footer_line(&mut self, line: &str) {
        self.footer.push_str(line);
        self.footer.push('\n');
    }
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn coords(v: &[f64]) -> String {
    v.iter().map(|c| num(*c)).collect::<Vec<_>>().join(" ")
}
