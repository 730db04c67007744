//! Random valid FSW utterances for round-trip testing.

use rand::Rng;

use crate::fsw::{
    BoxMarker, Coordinate, Placement, Sign, SignBox, SortPrefix, SymbolId, Utterance, MAX_COLUMN,
    MAX_POSITION, MAX_ROW, MAX_SYMBOL_BASE, MIN_POSITION, MIN_SYMBOL_BASE, PUNCTUATION_BASES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub max_signs: usize,
    pub max_placements: usize,
    pub max_prefix: usize,
    /// Whether boxed signs may carry an `A` sort prefix.
    pub prefixes: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            max_signs: 6,
            max_placements: 10,
            max_prefix: 4,
            prefixes: true,
        }
    }
}

fn coordinate(rng: &mut impl Rng) -> Coordinate {
    let x = rng.gen_range(MIN_POSITION..=MAX_POSITION);
    let y = rng.gen_range(MIN_POSITION..=MAX_POSITION);
    Coordinate::new(x, y).expect("in range")
}

fn symbol(rng: &mut impl Rng, bases: std::ops::RangeInclusive<u16>) -> SymbolId {
    SymbolId::new(
        rng.gen_range(bases),
        rng.gen_range(0..=MAX_COLUMN),
        rng.gen_range(0..=MAX_ROW),
    )
    .expect("in range")
}

/// A non-empty utterance drawn uniformly over the legal value ranges.
/// Placements never use punctuation symbols, which always form their own
/// sign.
pub fn random_utterance(rng: &mut impl Rng, config: &FuzzConfig) -> Utterance {
    let plain = MIN_SYMBOL_BASE..=*PUNCTUATION_BASES.start() - 1;
    let count = rng.gen_range(1..=config.max_signs.max(1));
    let signs = (0..count)
        .map(|_| {
            if rng.gen_bool(0.15) {
                return Sign::Punctuation {
                    symbol: symbol(rng, PUNCTUATION_BASES),
                    position: coordinate(rng),
                };
            }
            let prefix = if config.prefixes && config.max_prefix > 0 && rng.gen_bool(0.3) {
                let n = rng.gen_range(1..=config.max_prefix);
                SortPrefix::new(
                    (0..n)
                        .map(|_| symbol(rng, MIN_SYMBOL_BASE..=MAX_SYMBOL_BASE))
                        .collect(),
                )
            } else {
                None
            };
            let marker = BoxMarker::ALL[rng.gen_range(0..BoxMarker::ALL.len())];
            let placements = (0..rng.gen_range(0..=config.max_placements))
                .map(|_| Placement {
                    symbol: symbol(rng, plain.clone()),
                    position: coordinate(rng),
                })
                .collect();
            Sign::Boxed {
                prefix,
                sign_box: SignBox {
                    marker,
                    extent: coordinate(rng),
                    placements,
                },
            }
        })
        .collect();
    Utterance::new(signs)
}
