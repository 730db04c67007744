use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CorpusError, CorpusRecord};

pub const DEFAULT_SEED: u64 = 42;

/// Integer percentages for train/dev/test; they must sum to 100.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: u32,
    pub dev: u32,
    pub test: u32,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 95,
            dev: 3,
            test: 2,
        }
    }
}

impl SplitRatios {
    pub fn new(train: u32, dev: u32, test: u32) -> Result<Self, String> {
        if train + dev + test != 100 {
            return Err(format!(
                "split percentages {train}/{dev}/{test} do not sum to 100"
            ));
        }
        Ok(SplitRatios { train, dev, test })
    }

    /// Dev and test sizes are rounded down; the remainder goes to train.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        let dev = n * self.dev as usize / 100;
        let test = n * self.test as usize / 100;
        (n - dev - test, dev, test)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub train: Vec<CorpusRecord>,
    pub dev: Vec<CorpusRecord>,
    pub test: Vec<CorpusRecord>,
    pub seed: u64,
}

/// Seeded shuffle followed by a 95/3/2 (or `ratios`) cut.
pub fn split(
    records: &[CorpusRecord],
    seed: u64,
    ratios: SplitRatios,
) -> Result<SplitResult, CorpusError> {
    if records.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut shuffled = records.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (train, dev, _) = ratios.sizes(shuffled.len());
    let test = shuffled.split_off(train + dev);
    let dev = shuffled.split_off(train);
    Ok(SplitResult {
        train: shuffled,
        dev,
        test,
        seed,
    })
}
