//! Parallel corpus preparation: cleaning, tagging, splitting, subword
//! segmentation, factor-file emission and statistics.

use std::fmt;
use std::io::{self, BufRead};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod bpe;
mod clean;
mod emit;
mod pipeline;
mod split;
mod stats;

pub use bpe::{apply_bpe, learn_bpe, undo_bpe, BpeModel, CONTINUATION};
pub use clean::{clean, tag, CleanConfig};
pub use emit::{emit_factor_files, read_factor_files, SPOKEN_SUFFIX};
pub use pipeline::{prepare, Manifest, PrepareConfig, SplitCounts};
pub use split::{split, SplitRatios, SplitResult};
pub use stats::{stats, PairStats, StatsReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sent,
    Dict,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Sent => "sent",
            Kind::Dict => "dict",
        })
    }
}

/// One parallel example: spoken text and its FSW transcription.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub puddle: String,
    pub spoken_lang: String,
    pub country: String,
    pub kind: Kind,
    pub spoken_text: String,
    pub fsw_text: String,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("vocabulary size {requested} is smaller than the {inventory} distinct characters")]
    VocabTooSmall { requested: usize, inventory: usize },
    #[error("line {line}: {message}")]
    InvalidRecord { line: usize, message: String },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CorpusError {
    pub fn kind(&self) -> &'static str {
        match self {
            CorpusError::EmptyCorpus => "EmptyCorpus",
            CorpusError::VocabTooSmall { .. } => "VocabTooSmall",
            CorpusError::InvalidRecord { .. } => "InvalidRecord",
            CorpusError::Format { .. } => "Format",
            CorpusError::Io { .. } => "IoError",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> CorpusError {
        let path = path.into();
        move |source| CorpusError::Io { path, source }
    }
}

fn is_code(code: &str) -> bool {
    code.len() == 2 && code.bytes().all(|b| b.is_ascii_lowercase())
}

impl CorpusRecord {
    /// Checks the language and country codes.
    pub fn validate(&self) -> Result<(), String> {
        if !is_code(&self.spoken_lang) {
            return Err(format!(
                "spoken_lang {:?} is not a 2-letter lowercase code",
                self.spoken_lang
            ));
        }
        if !is_code(&self.country) {
            return Err(format!(
                "country {:?} is not a 2-letter lowercase code",
                self.country
            ));
        }
        Ok(())
    }
}

/// Reads line-delimited JSON records. Blank lines are skipped; the error
/// carries the 1-based line number of the first bad record.
pub fn read_records(reader: impl BufRead) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut records = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: PathBuf::from("<input>"),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let invalid = |message: String| CorpusError::InvalidRecord {
            line: line_no,
            message,
        };
        let record: CorpusRecord =
            serde_json::from_str(&line).map_err(|e| invalid(e.to_string()))?;
        record.validate().map_err(invalid)?;
        records.push(record);
    }
    Ok(records)
}
