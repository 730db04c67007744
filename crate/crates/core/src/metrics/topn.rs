use super::{check_pairs, MetricError};

/// Fraction of items whose reference is among the first `n` candidates
/// (exact string match).
pub fn topn_accuracy<C: AsRef<str>, R: AsRef<str>>(
    nbest_lists: &[Vec<C>],
    references: &[R],
    n: usize,
) -> Result<f64, MetricError> {
    if n == 0 {
        return Err(MetricError::InvalidCutoff);
    }
    check_pairs(nbest_lists.len(), references.len())?;
    let mut acc = TopnAccumulator::new(vec![n])?;
    for (candidates, reference) in nbest_lists.iter().zip(references) {
        acc.add(candidates, reference.as_ref());
    }
    Ok(acc.scores()[0].1)
}

/// Top-n hit counts for several cutoffs at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopnAccumulator {
    cutoffs: Vec<usize>,
    hits: Vec<usize>,
    pub items: usize,
}

impl TopnAccumulator {
    pub fn new(mut cutoffs: Vec<usize>) -> Result<Self, MetricError> {
        if cutoffs.contains(&0) {
            return Err(MetricError::InvalidCutoff);
        }
        cutoffs.sort_unstable();
        cutoffs.dedup();
        Ok(TopnAccumulator {
            hits: vec![0; cutoffs.len()],
            cutoffs,
            items: 0,
        })
    }

    pub fn add<C: AsRef<str>>(&mut self, candidates: &[C], reference: &str) {
        self.items += 1;
        let rank = candidates.iter().position(|c| c.as_ref() == reference);
        if let Some(rank) = rank {
            for (cutoff, hits) in self.cutoffs.iter().zip(self.hits.iter_mut()) {
                if rank < *cutoff {
                    *hits += 1;
                }
            }
        }
    }

    /// `(n, accuracy)` pairs in ascending `n`.
    pub fn scores(&self) -> Vec<(usize, f64)> {
        self.cutoffs
            .iter()
            .zip(&self.hits)
            .map(|(&n, &hits)| {
                let acc = if self.items == 0 {
                    0.0
                } else {
                    hits as f64 / self.items as f64
                };
                (n, acc)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rank_threshold() {
        let nbest = vec![list(&["x", "y", "house", "z"])];
        let refs = ["house"];
        assert_eq!(topn_accuracy(&nbest, &refs, 1).unwrap(), 0.0);
        assert_eq!(topn_accuracy(&nbest, &refs, 3).unwrap(), 1.0);
        assert_eq!(topn_accuracy(&nbest, &refs, 5).unwrap(), 1.0);
    }

    #[test]
    fn all_first() {
        let nbest = vec![list(&["a", "b"]), list(&["c"])];
        for n in 1..4 {
            assert_eq!(topn_accuracy(&nbest, &["a", "c"], n).unwrap(), 1.0);
        }
    }

    #[test]
    fn mixed_fixture() {
        // ranks of the reference per item; None = absent
        let ranks = [
            Some(0),
            Some(0),
            Some(0),
            Some(0),
            Some(1),
            Some(4),
            Some(2),
            None,
            Some(5),
            None,
        ];
        let mut nbest = Vec::new();
        let mut refs = Vec::new();
        for (i, rank) in ranks.iter().enumerate() {
            let reference = format!("ref{i}");
            let mut cands: Vec<String> = (0..6).map(|j| format!("c{i}_{j}")).collect();
            if let Some(r) = rank {
                cands[*r] = reference.clone();
            }
            nbest.push(cands);
            refs.push(reference);
        }
        assert_eq!(topn_accuracy(&nbest, &refs, 1).unwrap(), 0.4);
        assert_eq!(topn_accuracy(&nbest, &refs, 5).unwrap(), 0.7);
    }

    #[test]
    fn errors() {
        let nbest = vec![list(&["a"])];
        assert_eq!(
            topn_accuracy(&nbest, &["a"], 0),
            Err(MetricError::InvalidCutoff)
        );
        assert!(matches!(
            topn_accuracy(&nbest, &["a", "b"], 1),
            Err(MetricError::LengthMismatch { .. })
        ));
    }
}
