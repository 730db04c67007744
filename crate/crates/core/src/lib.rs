//! Formal SignWriting toolkit: FSW parsing, factorization for factored
//! translation models, SWU conversion, corpus preparation and evaluation.

pub mod corpus;
pub mod factor;
pub mod fsw;
pub mod fuzz;
pub mod metrics;
pub mod swu;

pub use factor::{defactorize, factorize, reconstruct, relative_ranks, FactorBundle, FactorStream};
pub use fsw::{is_punctuation, parse_symbol, parse_utterance, serialize_utterance, Utterance};
pub use swu::{fsw_to_swu, swu_to_fsw};
