use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{CorpusRecord, Kind};
use crate::fsw::parse_utterance;

/// Corpus statistics for one spoken language / country pair.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PairStats {
    pub samples: usize,
    pub sent: usize,
    pub dict: usize,
    pub puddles: usize,
    /// Boxed signs plus punctuation marks over all parsable FSW.
    pub signs: usize,
    /// Records whose FSW failed to parse; they contribute no signs.
    pub unparsed: usize,
    /// Mean whitespace-token count of the spoken text.
    pub mean_words: f64,
    #[serde(skip)]
    words: usize,
    #[serde(skip)]
    puddle_ids: BTreeSet<String>,
}

/// Keyed by `{spoken_lang}-{country}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StatsReport {
    pub pairs: BTreeMap<String, PairStats>,
}

impl StatsReport {
    pub fn add(&mut self, record: &CorpusRecord) {
        let key = format!("{}-{}", record.spoken_lang, record.country);
        let entry = self.pairs.entry(key).or_default();
        entry.samples += 1;
        match record.kind {
            Kind::Sent => entry.sent += 1,
            Kind::Dict => entry.dict += 1,
        }
        if entry.puddle_ids.insert(record.puddle.clone()) {
            entry.puddles = entry.puddle_ids.len();
        }
        match parse_utterance(&record.fsw_text) {
            Ok(u) => entry.signs += u.signs.len(),
            Err(_) => entry.unparsed += 1,
        }
        entry.words += record.spoken_text.split_whitespace().count();
        entry.mean_words = entry.words as f64 / entry.samples as f64;
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub fn stats(records: &[CorpusRecord]) -> StatsReport {
    let mut report = StatsReport::default();
    for record in records {
        report.add(record);
    }
    report
}
