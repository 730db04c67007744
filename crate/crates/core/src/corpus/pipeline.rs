use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::bpe::learn_bpe;
use super::clean::{clean, CleanConfig};
use super::emit::emit_factor_files;
use super::split::{split, SplitRatios, DEFAULT_SEED};
use super::{CorpusError, CorpusRecord};

pub const BPE_MODEL_FILE: &str = "bpe.model";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq)]
pub struct PrepareConfig {
    pub seed: u64,
    pub ratios: SplitRatios,
    pub clean: CleanConfig,
    pub vocab_size: usize,
    /// Recorded in the manifest for the training stage; not used here.
    pub factor_weight: Option<f64>,
}

impl Default for PrepareConfig {
    fn default() -> Self {
        PrepareConfig {
            seed: DEFAULT_SEED,
            ratios: SplitRatios::default(),
            clean: CleanConfig::default(),
            vocab_size: 2000,
            factor_weight: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitCounts {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub seed: u64,
    pub ratios: SplitRatios,
    pub max_dict_words: usize,
    pub max_sent_words: usize,
    pub lowercase: bool,
    pub vocab_size: usize,
    pub merges: usize,
    pub input_records: usize,
    pub dropped_records: usize,
    pub counts: SplitCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor_weight: Option<f64>,
}

/// Clean, split, learn a shared BPE model on the training spoken text, and
/// write factor files for each split plus `bpe.model` and `manifest.json`.
pub fn prepare(
    records: &[CorpusRecord],
    out_dir: &Path,
    config: &PrepareConfig,
) -> Result<Manifest, CorpusError> {
    let kept: Vec<CorpusRecord> = records
        .iter()
        .filter_map(|r| clean(r, &config.clean))
        .collect();
    let parts = split(&kept, config.seed, config.ratios)?;
    let spoken: Vec<&str> = parts.train.iter().map(|r| r.spoken_text.as_str()).collect();
    let model = learn_bpe(&spoken, config.vocab_size)?;

    fs::create_dir_all(out_dir).map_err(CorpusError::io(out_dir))?;
    let model_path = out_dir.join(BPE_MODEL_FILE);
    let mut writer =
        BufWriter::new(File::create(&model_path).map_err(CorpusError::io(&model_path))?);
    model
        .write_to(&mut writer)
        .and_then(|_| writer.flush())
        .map_err(CorpusError::io(&model_path))?;

    for (stem, part) in [
        ("train", &parts.train),
        ("dev", &parts.dev),
        ("test", &parts.test),
    ] {
        emit_factor_files(part, out_dir, stem, Some(&model))?;
    }

    let manifest = Manifest {
        seed: config.seed,
        ratios: config.ratios,
        max_dict_words: config.clean.max_dict_words,
        max_sent_words: config.clean.max_sent_words,
        lowercase: config.clean.lowercase,
        vocab_size: config.vocab_size,
        merges: model.merges().len(),
        input_records: records.len(),
        dropped_records: records.len() - kept.len(),
        counts: SplitCounts {
            train: parts.train.len(),
            dev: parts.dev.len(),
            test: parts.test.len(),
        },
        factor_weight: config.factor_weight,
    };
    let manifest_path = out_dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&manifest_path, json + "\n").map_err(CorpusError::io(&manifest_path))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Kind;

    #[test]
    fn drops_before_splitting() {
        let mut records: Vec<CorpusRecord> = (0..50)
            .map(|i| CorpusRecord {
                id: i.to_string(),
                puddle: "4".into(),
                spoken_lang: "en".into(),
                country: "us".into(),
                kind: Kind::Sent,
                spoken_text: format!("sentence number {i}"),
                fsw_text: "M500x500S10000490x490".into(),
            })
            .collect();
        records[3].fsw_text.clear();
        records[7].spoken_text = "<br>".into();
        let dir = tempfile::tempdir().unwrap();
        let config = PrepareConfig {
            vocab_size: 40,
            factor_weight: Some(0.5),
            ..PrepareConfig::default()
        };
        let manifest = prepare(&records, dir.path(), &config).unwrap();
        assert_eq!(manifest.dropped_records, 2);
        assert_eq!(
            manifest.counts,
            SplitCounts {
                train: 47,
                dev: 1,
                test: 0
            }
        );
        let text = fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
        assert!(text.contains("\"factor_weight\": 0.5"));
        assert!(dir.path().join("train.spoken").exists());
        assert!(dir.path().join(BPE_MODEL_FILE).exists());
    }
}
