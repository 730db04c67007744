/// Mean absolute error between two positional-number sequences. The shorter
/// one is zero-padded, and the sum is divided by the padded length. Two
/// empty sequences score 0.
pub fn mae_positions(predicted: &[i64], gold: &[i64]) -> f64 {
    let len = predicted.len().max(gold.len());
    if len == 0 {
        return 0.0;
    }
    let at = |seq: &[i64], i: usize| seq.get(i).copied().unwrap_or(0);
    let total: i64 = (0..len)
        .map(|i| (at(predicted, i) - at(gold, i)).abs())
        .sum();
    total as f64 / len as f64
}

/// Corpus MAE: the mean of per-segment [`mae_positions`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaeAccumulator {
    sum: f64,
    pub segments: usize,
}

impl MaeAccumulator {
    pub fn add(&mut self, predicted: &[i64], gold: &[i64]) {
        self.sum += mae_positions(predicted, gold);
        self.segments += 1;
    }

    pub fn score(&self) -> f64 {
        if self.segments == 0 {
            0.0
        } else {
            self.sum / self.segments as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_rule() {
        assert_eq!(mae_positions(&[550, 482, 455], &[550, 482, 455]), 0.0);
        assert_eq!(mae_positions(&[550, 482], &[550, 480]), 1.0);
        assert_eq!(mae_positions(&[500], &[500, 300]), 150.0);
        assert_eq!(mae_positions(&[], &[]), 0.0);
        assert_eq!(mae_positions(&[], &[10, 20]), 15.0);
    }

    #[test]
    fn corpus_average() {
        let mut acc = MaeAccumulator::default();
        acc.add(&[550, 482], &[550, 480]);
        acc.add(&[500], &[500, 300]);
        assert_eq!(acc.score(), 75.5);
    }
}
