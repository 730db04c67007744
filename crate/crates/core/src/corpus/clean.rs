use std::sync::OnceLock;

use regex::Regex;

use super::CorpusRecord;
use super::Kind;
use crate::fsw::parse_utterance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CleanConfig {
    pub max_dict_words: usize,
    pub max_sent_words: usize,
    pub lowercase: bool,
}

impl Default for CleanConfig {
    fn default() -> Self {
        CleanConfig {
            max_dict_words: 100,
            max_sent_words: 200,
            lowercase: false,
        }
    }
}

fn html_tag() -> &'static Regex {
    static TAG: OnceLock<Regex> = OnceLock::new();
    TAG.get_or_init(|| Regex::new(r"<[^>]*>").expect("valid regex"))
}

/// Strips HTML tags and collapses whitespace in the spoken text,
/// canonicalizes the FSW, and drops records that end up empty, unparsable,
/// or longer than the cap for their kind.
pub fn clean(record: &CorpusRecord, config: &CleanConfig) -> Option<CorpusRecord> {
    let stripped = html_tag().replace_all(&record.spoken_text, " ");
    let mut spoken = stripped.split_whitespace().collect::<Vec<_>>().join(" ");
    if config.lowercase {
        spoken = spoken.to_lowercase();
    }
    let words = spoken.split_whitespace().count();
    let cap = match record.kind {
        Kind::Dict => config.max_dict_words,
        Kind::Sent => config.max_sent_words,
    };
    if words == 0 || words > cap {
        return None;
    }
    let fsw = parse_utterance(&record.fsw_text).ok()?.to_string();
    Some(CorpusRecord {
        spoken_text: spoken,
        fsw_text: fsw,
        ..record.clone()
    })
}

/// Source-side control tags followed by the spoken text.
pub fn tag(record: &CorpusRecord) -> String {
    format!(
        "<2{}> <4{}> <{}> {}",
        record.spoken_lang, record.country, record.kind, record.spoken_text
    )
}
