use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::bpe::{apply_bpe, BpeModel};
use super::clean::tag;
use super::{CorpusError, CorpusRecord};
use crate::factor::{factorize, FactorBundle, FactorStream};
use crate::fsw::parse_utterance;

pub const SPOKEN_SUFFIX: &str = "spoken";

fn stream_path(dir: &Path, stem: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{stem}.{suffix}"))
}

/// Writes `{stem}.symbol` ... `{stem}.row` plus `{stem}.spoken` under
/// `out_dir`, one line per record. The spoken side is tagged and, when a
/// model is given, BPE-segmented.
pub fn emit_factor_files(
    records: &[CorpusRecord],
    out_dir: &Path,
    stem: &str,
    bpe: Option<&BpeModel>,
) -> Result<(), CorpusError> {
    fs::create_dir_all(out_dir).map_err(CorpusError::io(out_dir))?;
    let mut writers = Vec::with_capacity(FactorStream::ALL.len());
    for stream in FactorStream::ALL {
        let path = stream_path(out_dir, stem, stream.suffix());
        let file = File::create(&path).map_err(CorpusError::io(&path))?;
        writers.push((stream, path, BufWriter::new(file)));
    }
    let spoken_path = stream_path(out_dir, stem, SPOKEN_SUFFIX);
    let mut spoken =
        BufWriter::new(File::create(&spoken_path).map_err(CorpusError::io(&spoken_path))?);

    for record in records {
        let utterance = parse_utterance(&record.fsw_text).map_err(|e| CorpusError::Format {
            path: spoken_path.clone(),
            message: format!("record {}: {e}", record.id),
        })?;
        let bundle = factorize(&utterance);
        for (stream, path, writer) in &mut writers {
            writeln!(writer, "{}", bundle.line(*stream))
                .map_err(CorpusError::io(path.as_path()))?;
        }
        let tagged = tag(record);
        let line = match bpe {
            Some(model) => apply_bpe(model, &tagged),
            None => tagged,
        };
        writeln!(spoken, "{line}").map_err(CorpusError::io(&spoken_path))?;
    }
    for (_, path, writer) in &mut writers {
        writer.flush().map_err(CorpusError::io(path.as_path()))?;
    }
    spoken.flush().map_err(CorpusError::io(&spoken_path))?;
    Ok(())
}

/// Reads the eight sign-side files back into one bundle per line.
pub fn read_factor_files(dir: &Path, stem: &str) -> Result<Vec<FactorBundle>, CorpusError> {
    let mut columns: Vec<(FactorStream, Vec<String>)> = Vec::new();
    for stream in FactorStream::ALL {
        let path = stream_path(dir, stem, stream.suffix());
        let file = File::open(&path).map_err(CorpusError::io(&path))?;
        let lines = BufReader::new(file)
            .lines()
            .collect::<Result<Vec<_>, _>>()
            .map_err(CorpusError::io(&path))?;
        if let Some((_, first)) = columns.first() {
            if first.len() != lines.len() {
                return Err(CorpusError::Format {
                    path,
                    message: format!("{} lines, expected {}", lines.len(), first.len()),
                });
            }
        }
        columns.push((stream, lines));
    }
    let count = columns[0].1.len();
    (0..count)
        .map(|i| {
            FactorBundle::from_lines(columns.iter().map(|(s, lines)| (*s, lines[i].as_str())))
                .map_err(|e| CorpusError::Format {
                    path: stream_path(dir, stem, "*"),
                    message: format!("line {}: {e}", i + 1),
                })
        })
        .collect()
}
