use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::commands::CliError;

/// `-` reads standard input.
pub fn open(path: &Path) -> Result<Box<dyn BufRead>, CliError> {
    if path == Path::new("-") {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(Box::new(BufReader::new(file)))
}

pub fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

pub fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

/// Iterates `(line_number, line)` with 1-based numbers.
pub struct Lines {
    path: PathBuf,
    inner: io::Lines<Box<dyn BufRead>>,
    number: usize,
}

impl Lines {
    pub fn open(path: &Path) -> Result<Self, CliError> {
        Ok(Lines {
            path: path.to_path_buf(),
            inner: open(path)?.lines(),
            number: 0,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl Iterator for Lines {
    type Item = Result<(usize, String), CliError>;

    fn next(&mut self) -> Option<Self::Item> {
        let line = self.inner.next()?;
        self.number += 1;
        Some(
            line.map(|l| (self.number, l))
                .map_err(|e| CliError::io(&self.path, e)),
        )
    }
}

pub fn write_line(out: &mut impl Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::io(Path::new("<output>"), e))
}
