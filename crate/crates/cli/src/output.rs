//! CSV emission with fixed numeric formatting.

use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Twelve significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// Buffers one CSV table and writes it on [`Table::finish`].
pub struct Table {
    name: String,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self {
            name: name.to_string(),
            writer,
        })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(self, out: &mut Outputs) -> Result<(), CliError> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Io {
                path: self.name.clone(),
                source: e.into_error(),
            })?;
        out.write(&self.name, &bytes)
    }
}

/// Files written into the output directory, in creation order.
pub struct Outputs {
    dir: PathBuf,
    pub files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        log::info!("wrote {}", path.display());
        self.files.push((name.to_string(), bytes.to_vec()));
        Ok(())
    }
}
