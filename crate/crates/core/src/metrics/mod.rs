//! Evaluation metrics for spoken-side text and FSW output.
//!
//! BLEU and chrF score symbol (or word) sequences; MAE scores predicted
//! positional numbers; top-n accuracy scores n-best lists for dictionary
//! entries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod bleu;
mod chrf;
mod position;
mod topn;

pub use bleu::{bleu, BleuStats, MAX_NGRAM_ORDER};
pub use chrf::{chrf, ChrfParams, ChrfStats};
pub use position::{mae_positions, MaeAccumulator};
pub use topn::{topn_accuracy, TopnAccumulator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("{hypotheses} hypotheses but {references} references")]
    LengthMismatch {
        hypotheses: usize,
        references: usize,
    },
    #[error("no segments to score")]
    EmptyCorpus,
    #[error("top-n cutoff must be at least 1")]
    InvalidCutoff,
}

impl MetricError {
    pub fn kind(&self) -> &'static str {
        match self {
            MetricError::LengthMismatch { .. } => "LengthMismatch",
            MetricError::EmptyCorpus => "EmptyCorpus",
            MetricError::InvalidCutoff => "InvalidCutoff",
        }
    }
}

pub(crate) fn check_pairs(hypotheses: usize, references: usize) -> Result<(), MetricError> {
    if hypotheses != references {
        return Err(MetricError::LengthMismatch {
            hypotheses,
            references,
        });
    }
    if hypotheses == 0 {
        return Err(MetricError::EmptyCorpus);
    }
    Ok(())
}

/// Results of one evaluation run. Only the metrics that were computed are
/// present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bleu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chrf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mae_x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mae_y: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub top_n: BTreeMap<usize, f64>,
    pub segments: usize,
}
