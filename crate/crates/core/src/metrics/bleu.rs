use std::collections::HashMap;

use super::{check_pairs, MetricError};

pub const MAX_NGRAM_ORDER: usize = 4;

/// Corpus-level BLEU sufficient statistics.
///
/// Scoring uses clipped n-gram counts summed over the corpus, the standard
/// brevity penalty, exponential smoothing for orders with no matches, and
/// drops orders for which the hypotheses contain no n-grams at all (so very
/// short corpora are not zeroed out).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BleuStats {
    pub matches: [u64; MAX_NGRAM_ORDER],
    pub totals: [u64; MAX_NGRAM_ORDER],
    pub hyp_len: u64,
    pub ref_len: u64,
    pub segments: usize,
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, u64> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            let key: Vec<&str> = window.iter().map(AsRef::as_ref).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts
}

impl BleuStats {
    pub fn add<H: AsRef<str>, R: AsRef<str>>(&mut self, hypothesis: &[H], reference: &[R]) {
        self.segments += 1;
        self.hyp_len += hypothesis.len() as u64;
        self.ref_len += reference.len() as u64;
        for n in 1..=MAX_NGRAM_ORDER {
            let hyp = ngram_counts(hypothesis, n);
            let reference = ngram_counts(reference, n);
            self.totals[n - 1] += hyp.values().sum::<u64>();
            self.matches[n - 1] += hyp
                .iter()
                .map(|(gram, &count)| count.min(reference.get(gram).copied().unwrap_or(0)))
                .sum::<u64>();
        }
    }

    pub fn score(&self) -> f64 {
        if self.hyp_len == 0 && self.ref_len == 0 {
            return 100.0;
        }
        if self.matches.iter().all(|&m| m == 0) {
            return 0.0;
        }
        let order = self.totals.iter().take_while(|&&t| t > 0).count();
        let mut smoothing = 1.0;
        let mut log_sum = 0.0;
        for n in 0..order {
            let total = self.totals[n] as f64;
            log_sum += if self.matches[n] > 0 {
                (self.matches[n] as f64 / total).ln()
            } else {
                smoothing *= 2.0;
                (1.0 / (smoothing * total)).ln()
            };
        }
        let brevity = if self.hyp_len < self.ref_len {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        } else {
            1.0
        };
        100.0 * brevity * (log_sum / order as f64).exp()
    }
}

/// Corpus BLEU in `[0, 100]` over pre-tokenized segments.
pub fn bleu<H: AsRef<str>, R: AsRef<str>>(
    hypotheses: &[Vec<H>],
    references: &[Vec<R>],
) -> Result<f64, MetricError> {
    check_pairs(hypotheses.len(), references.len())?;
    let mut stats = BleuStats::default();
    for (hyp, reference) in hypotheses.iter().zip(references) {
        stats.add(hyp, reference);
    }
    Ok(stats.score())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn identity_and_disjoint() {
        let corpus = vec![toks("M S32a00 S15d09"), toks("S38800"), toks("a b c d e f")];
        assert_eq!(bleu(&corpus, &corpus).unwrap(), 100.0);
        let other = vec![toks("x"), toks("y"), toks("z")];
        assert_eq!(bleu(&corpus, &other).unwrap(), 0.0);
    }

    #[test]
    fn short_symbol_sequence() {
        // p1 = 2/3, p2 = 1/2, trigram unmatched -> 1/(2*1); no 4-grams
        let score = bleu(
            &[toks("S32a00 S15d09 S15d01")],
            &[toks("S32a00 S15d09 S22114")],
        )
        .unwrap();
        assert!((score - 55.03212081491044).abs() < 1e-9, "{score}");
    }

    #[test]
    fn brevity_penalty_applies() {
        let score = bleu(&[toks("a b")], &[toks("a b c d")]).unwrap();
        assert!((score - 100.0 * (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        let empty: Vec<Vec<&str>> = vec![];
        assert_eq!(bleu(&empty, &empty), Err(MetricError::EmptyCorpus));
        assert!(matches!(
            bleu(&[toks("a")], &empty),
            Err(MetricError::LengthMismatch { .. })
        ));
    }
}
