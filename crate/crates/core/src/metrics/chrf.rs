use std::collections::HashMap;
use std::hash::Hash;

use super::{check_pairs, MetricError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChrfParams {
    pub beta: f64,
    pub char_order: usize,
    /// 0 for chrF, 2 for chrF++.
    pub word_order: usize,
}

impl Default for ChrfParams {
    fn default() -> Self {
        ChrfParams {
            beta: 2.0,
            char_order: 6,
            word_order: 0,
        }
    }
}

impl ChrfParams {
    pub fn chrf_plus_plus() -> Self {
        ChrfParams {
            word_order: 2,
            ..Self::default()
        }
    }
}

/// Per-order `(hypothesis n-grams, reference n-grams, matches)` summed over
/// the corpus; character orders first, then word orders.
#[derive(Debug, Clone, PartialEq)]
pub struct ChrfStats {
    params: ChrfParams,
    orders: Vec<[u64; 3]>,
    pub segments: usize,
}

fn overlap<T: Eq + Hash>(hyp: &[T], reference: &[T], n: usize) -> [u64; 3] {
    fn counts<T: Eq + Hash>(items: &[T], n: usize) -> HashMap<&[T], u64> {
        let mut map = HashMap::new();
        if items.len() >= n {
            for window in items.windows(n) {
                *map.entry(window).or_insert(0) += 1;
            }
        }
        map
    }
    let hyp_counts = counts(hyp, n);
    let ref_counts = counts(reference, n);
    let matches = hyp_counts
        .iter()
        .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    [
        hyp_counts.values().sum(),
        ref_counts.values().sum(),
        matches,
    ]
}

impl ChrfStats {
    pub fn new(params: ChrfParams) -> Self {
        ChrfStats {
            params,
            orders: vec![[0; 3]; params.char_order + params.word_order],
            segments: 0,
        }
    }

    pub fn add(&mut self, hypothesis: &str, reference: &str) {
        self.segments += 1;
        let chars = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<Vec<_>>();
        let (hyp_chars, ref_chars) = (chars(hypothesis), chars(reference));
        let hyp_words: Vec<&str> = hypothesis.split_whitespace().collect();
        let ref_words: Vec<&str> = reference.split_whitespace().collect();
        let char_order = self.params.char_order;
        for (i, slot) in self.orders.iter_mut().enumerate() {
            let counts = if i < char_order {
                overlap(&hyp_chars, &ref_chars, i + 1)
            } else {
                overlap(&hyp_words, &ref_words, i - char_order + 1)
            };
            for (total, c) in slot.iter_mut().zip(counts) {
                *total += c;
            }
        }
    }

    /// F-beta of the precision and recall averaged over every order that has
    /// n-grams on at least one side, scaled to `[0, 100]`.
    pub fn score(&self) -> f64 {
        let active: Vec<&[u64; 3]> = self
            .orders
            .iter()
            .filter(|[hyp, reference, _]| *hyp > 0 || *reference > 0)
            .collect();
        if active.is_empty() {
            return 100.0;
        }
        let ratio = |num: u64, den: u64| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let k = active.len() as f64;
        let precision = active.iter().map(|o| ratio(o[2], o[0])).sum::<f64>() / k;
        let recall = active.iter().map(|o| ratio(o[2], o[1])).sum::<f64>() / k;
        let beta2 = self.params.beta * self.params.beta;
        let denom = beta2 * precision + recall;
        if denom == 0.0 {
            return 0.0;
        }
        100.0 * (1.0 + beta2) * precision * recall / denom
    }
}

/// Corpus-level chrF (`word_order == 0`) or chrF++ (`word_order == 2`).
pub fn chrf<H: AsRef<str>, R: AsRef<str>>(
    hypotheses: &[H],
    references: &[R],
    params: ChrfParams,
) -> Result<f64, MetricError> {
    check_pairs(hypotheses.len(), references.len())?;
    let mut stats = ChrfStats::new(params);
    for (hyp, reference) in hypotheses.iter().zip(references) {
        stats.add(hyp.as_ref(), reference.as_ref());
    }
    Ok(stats.score())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_disjoint() {
        let corpus = ["S32a00 S15d09", "S38800", "ab"];
        assert_eq!(
            chrf(&corpus, &corpus, ChrfParams::default()).unwrap(),
            100.0
        );
        assert_eq!(
            chrf(&corpus, &corpus, ChrfParams::chrf_plus_plus()).unwrap(),
            100.0
        );
        assert_eq!(chrf(&["ab"], &["cd"], ChrfParams::default()).unwrap(), 0.0);
    }

    #[test]
    fn two_order_example() {
        // unigrams 3/4 both ways, bigrams 2/3 both ways
        let params = ChrfParams {
            beta: 2.0,
            char_order: 2,
            word_order: 0,
        };
        let score = chrf(&["abcd"], &["abce"], params).unwrap();
        assert!((score - 100.0 * 17.0 / 24.0).abs() < 1e-9, "{score}");
    }

    #[test]
    fn whitespace_is_ignored_for_characters() {
        let params = ChrfParams::default();
        assert_eq!(chrf(&["a b c"], &["abc"], params).unwrap(), 100.0);
        assert!(chrf(&["a b c"], &["abc"], ChrfParams::chrf_plus_plus()).unwrap() < 100.0);
    }

    #[test]
    fn errors() {
        let none: [&str; 0] = [];
        assert_eq!(
            chrf(&none, &none, ChrfParams::default()),
            Err(MetricError::EmptyCorpus)
        );
        assert!(matches!(
            chrf(&["a"], &none, ChrfParams::default()),
            Err(MetricError::LengthMismatch { .. })
        ));
    }
}
