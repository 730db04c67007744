//! Token-aligned factor streams for factored translation models.
//!
//! Every box marker, placed symbol and punctuation mark becomes one token.
//! The primary stream carries the token text; seven factor streams carry the
//! absolute position, the rank of that position within the sign, and the
//! decomposed symbol (core, column, row). Box markers carry their extent as
//! position and `-1` in every derived integer stream.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fsw::{
    parse_symbol, BoxMarker, Coordinate, Placement, Sign, SignBox, Utterance, MAX_POSITION,
    MIN_POSITION,
};

/// The eight streams, in file/listing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorStream {
    Symbol,
    X,
    Y,
    XRel,
    YRel,
    Core,
    Col,
    Row,
}

impl FactorStream {
    pub const ALL: [FactorStream; 8] = [
        FactorStream::Symbol,
        FactorStream::X,
        FactorStream::Y,
        FactorStream::XRel,
        FactorStream::YRel,
        FactorStream::Core,
        FactorStream::Col,
        FactorStream::Row,
    ];

    /// File suffix without the dot, e.g. `x_rel`.
    pub fn suffix(self) -> &'static str {
        match self {
            FactorStream::Symbol => "symbol",
            FactorStream::X => "x",
            FactorStream::Y => "y",
            FactorStream::XRel => "x_rel",
            FactorStream::YRel => "y_rel",
            FactorStream::Core => "core",
            FactorStream::Col => "col",
            FactorStream::Row => "row",
        }
    }

    /// Key used in mapping output, e.g. `feat_x_rel`.
    pub fn key(self) -> &'static str {
        match self {
            FactorStream::Symbol => "symbol",
            FactorStream::X => "feat_x",
            FactorStream::Y => "feat_y",
            FactorStream::XRel => "feat_x_rel",
            FactorStream::YRel => "feat_y_rel",
            FactorStream::Core => "feat_core",
            FactorStream::Col => "feat_col",
            FactorStream::Row => "feat_row",
        }
    }
}

impl fmt::Display for FactorStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("stream `{stream}` has {found} tokens, expected {expected}")]
    MisalignedStreams {
        stream: FactorStream,
        expected: usize,
        found: usize,
    },
    #[error("token {index} ({token}) appears before any box marker")]
    OrphanPlacement { index: usize, token: String },
    #[error("token {index}: {stream} value {value} out of range")]
    ValueOutOfRange {
        index: usize,
        stream: FactorStream,
        value: i64,
    },
    #[error("token {index}: invalid {stream} token {token:?}")]
    InvalidToken {
        index: usize,
        stream: FactorStream,
        token: String,
    },
    #[error("relative ranks of an empty list")]
    EmptyList,
}

impl FactorError {
    pub fn kind(&self) -> &'static str {
        match self {
            FactorError::MisalignedStreams { .. } => "MisalignedStreams",
            FactorError::OrphanPlacement { .. } => "OrphanPlacement",
            FactorError::ValueOutOfRange { .. } => "ValueOutOfRange",
            FactorError::InvalidToken { .. } => "InvalidToken",
            FactorError::EmptyList => "EmptyList",
        }
    }
}

/// Rank of each value in ascending order; equal values are ranked by
/// position, earlier first.
pub fn relative_ranks(values: &[i64]) -> Result<Vec<i64>, FactorError> {
    if values.is_empty() {
        return Err(FactorError::EmptyList);
    }
    Ok(stable_ranks(values))
}

fn stable_ranks(values: &[i64]) -> Vec<i64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| values[i]);
    let mut ranks = vec![0; values.len()];
    for (rank, index) in order.into_iter().enumerate() {
        ranks[index] = rank as i64;
    }
    ranks
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactorBundle {
    pub symbol: Vec<String>,
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub x_rel: Vec<i64>,
    pub y_rel: Vec<i64>,
    pub core: Vec<String>,
    pub col: Vec<i64>,
    pub row: Vec<i64>,
}

impl FactorBundle {
    pub fn len(&self) -> usize {
        self.symbol.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbol.is_empty()
    }

    fn stream_len(&self, stream: FactorStream) -> usize {
        match stream {
            FactorStream::Symbol => self.symbol.len(),
            FactorStream::X => self.x.len(),
            FactorStream::Y => self.y.len(),
            FactorStream::XRel => self.x_rel.len(),
            FactorStream::YRel => self.y_rel.len(),
            FactorStream::Core => self.core.len(),
            FactorStream::Col => self.col.len(),
            FactorStream::Row => self.row.len(),
        }
    }

    pub fn is_aligned(&self) -> bool {
        FactorStream::ALL
            .iter()
            .all(|&s| self.stream_len(s) == self.len())
    }

    /// One stream as space-separated text, the format of a factor file line.
    pub fn line(&self, stream: FactorStream) -> String {
        fn join<T: ToString>(items: &[T]) -> String {
            items
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        }
        match stream {
            FactorStream::Symbol => self.symbol.join(" "),
            FactorStream::X => join(&self.x),
            FactorStream::Y => join(&self.y),
            FactorStream::XRel => join(&self.x_rel),
            FactorStream::YRel => join(&self.y_rel),
            FactorStream::Core => self.core.join(" "),
            FactorStream::Col => join(&self.col),
            FactorStream::Row => join(&self.row),
        }
    }

    /// Parses one line per stream. Streams missing from `lines` stay empty,
    /// which [`defactorize`] treats as absent.
    pub fn from_lines<'a>(
        lines: impl IntoIterator<Item = (FactorStream, &'a str)>,
    ) -> Result<Self, FactorError> {
        fn ints(stream: FactorStream, line: &str) -> Result<Vec<i64>, FactorError> {
            line.split_whitespace()
                .enumerate()
                .map(|(index, token)| {
                    token.parse().map_err(|_| FactorError::InvalidToken {
                        index,
                        stream,
                        token: token.to_string(),
                    })
                })
                .collect()
        }
        fn words(line: &str) -> Vec<String> {
            line.split_whitespace().map(str::to_string).collect()
        }
        let mut bundle = FactorBundle::default();
        for (stream, line) in lines {
            match stream {
                FactorStream::Symbol => bundle.symbol = words(line),
                FactorStream::X => bundle.x = ints(stream, line)?,
                FactorStream::Y => bundle.y = ints(stream, line)?,
                FactorStream::XRel => bundle.x_rel = ints(stream, line)?,
                FactorStream::YRel => bundle.y_rel = ints(stream, line)?,
                FactorStream::Core => bundle.core = words(line),
                FactorStream::Col => bundle.col = ints(stream, line)?,
                FactorStream::Row => bundle.row = ints(stream, line)?,
            }
        }
        Ok(bundle)
    }

    fn push(&mut self, symbol: String, x: i64, y: i64, core: String, col: i64, row: i64) {
        self.symbol.push(symbol);
        self.x.push(x);
        self.y.push(y);
        self.core.push(core);
        self.col.push(col);
        self.row.push(row);
    }
}

/// Serializes as a mapping keyed `symbol`, `feat_x`, ..., `feat_row` whose
/// values are the space-joined stream lines.
impl Serialize for FactorBundle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(FactorStream::ALL.len()))?;
        for stream in FactorStream::ALL {
            map.serialize_entry(stream.key(), &self.line(stream))?;
        }
        map.end()
    }
}

pub fn factorize(utterance: &Utterance) -> FactorBundle {
    let mut bundle = FactorBundle::default();
    for sign in &utterance.signs {
        match sign {
            Sign::Boxed { sign_box, .. } => {
                let marker = sign_box.marker.letter().to_string();
                bundle.push(
                    marker.clone(),
                    i64::from(sign_box.extent.x()),
                    i64::from(sign_box.extent.y()),
                    marker,
                    -1,
                    -1,
                );
                bundle.x_rel.push(-1);
                bundle.y_rel.push(-1);
                let xs: Vec<i64> = sign_box
                    .placements
                    .iter()
                    .map(|p| i64::from(p.position.x()))
                    .collect();
                let ys: Vec<i64> = sign_box
                    .placements
                    .iter()
                    .map(|p| i64::from(p.position.y()))
                    .collect();
                bundle.x_rel.extend(stable_ranks(&xs));
                bundle.y_rel.extend(stable_ranks(&ys));
                for placement in &sign_box.placements {
                    let symbol = placement.symbol;
                    bundle.push(
                        symbol.to_string(),
                        i64::from(placement.position.x()),
                        i64::from(placement.position.y()),
                        symbol.core(),
                        i64::from(symbol.col()),
                        i64::from(symbol.row()),
                    );
                }
            }
            Sign::Punctuation { symbol, position } => {
                bundle.push(
                    symbol.to_string(),
                    i64::from(position.x()),
                    i64::from(position.y()),
                    symbol.core(),
                    i64::from(symbol.col()),
                    i64::from(symbol.row()),
                );
                bundle.x_rel.push(0);
                bundle.y_rel.push(0);
            }
        }
    }
    bundle
}

/// A derived stream that disagrees with what the symbol/x/y streams imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub index: usize,
    pub stream: FactorStream,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "token {}: {} is {}, expected {}",
            self.index, self.stream, self.found, self.expected
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defactorized {
    pub utterance: Utterance,
    pub warnings: Vec<Inconsistency>,
}

/// Rebuilds an utterance from the symbol, x and y streams. Derived streams
/// are optional (empty); when present they must be aligned, and any
/// disagreement with the recomputed values is reported as a warning.
pub fn defactorize(bundle: &FactorBundle) -> Result<Defactorized, FactorError> {
    let len = bundle.len();
    for stream in [FactorStream::X, FactorStream::Y] {
        check_len(bundle.stream_len(stream), len, stream)?;
    }
    for stream in &FactorStream::ALL[3..] {
        let found = bundle.stream_len(*stream);
        if found != 0 {
            check_len(found, len, *stream)?;
        }
    }
    let utterance = assemble(&bundle.symbol, &bundle.x, &bundle.y)?;
    let expected = factorize(&utterance);
    let mut warnings = Vec::new();
    let mut compare = |stream: FactorStream, found: &[String], wanted: &[String]| {
        if found.is_empty() {
            return;
        }
        for (index, (f, w)) in found.iter().zip(wanted).enumerate() {
            if f != w {
                warnings.push(Inconsistency {
                    index,
                    stream,
                    expected: w.clone(),
                    found: f.clone(),
                });
            }
        }
    };
    let text = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>();
    compare(
        FactorStream::XRel,
        &text(&bundle.x_rel),
        &text(&expected.x_rel),
    );
    compare(
        FactorStream::YRel,
        &text(&bundle.y_rel),
        &text(&expected.y_rel),
    );
    compare(FactorStream::Core, &bundle.core, &expected.core);
    compare(FactorStream::Col, &text(&bundle.col), &text(&expected.col));
    compare(FactorStream::Row, &text(&bundle.row), &text(&expected.row));
    warnings.sort_by_key(|w| w.index);
    Ok(Defactorized {
        utterance,
        warnings,
    })
}

fn check_len(found: usize, expected: usize, stream: FactorStream) -> Result<(), FactorError> {
    if found == expected {
        Ok(())
    } else {
        Err(FactorError::MisalignedStreams {
            stream,
            expected,
            found,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub utterance: Utterance,
    /// Number of clamped values (0, 1 or 2) for each input token.
    pub clamped: Vec<u8>,
}

impl Reconstruction {
    pub fn total_clamped(&self) -> usize {
        self.clamped.iter().map(|&c| usize::from(c)).sum()
    }
}

/// Assembles decoder output: symbol tokens plus predicted x/y values, with
/// positions clamped into the legal range.
pub fn reconstruct(
    symbols: &[String],
    xs: &[i64],
    ys: &[i64],
) -> Result<Reconstruction, FactorError> {
    check_len(xs.len(), symbols.len(), FactorStream::X)?;
    check_len(ys.len(), symbols.len(), FactorStream::Y)?;
    let clamp = |v: i64| v.clamp(i64::from(MIN_POSITION), i64::from(MAX_POSITION));
    let clamped: Vec<u8> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| u8::from(clamp(x) != x) + u8::from(clamp(y) != y))
        .collect();
    let xs: Vec<i64> = xs.iter().map(|&v| clamp(v)).collect();
    let ys: Vec<i64> = ys.iter().map(|&v| clamp(v)).collect();
    let utterance = assemble(symbols, &xs, &ys)?;
    Ok(Reconstruction { utterance, clamped })
}

/// Segments the symbol stream into signs: a marker opens a boxed sign, a
/// punctuation symbol is a sign of its own, other symbols join the open box.
fn assemble(symbols: &[String], xs: &[i64], ys: &[i64]) -> Result<Utterance, FactorError> {
    let mut signs = Vec::new();
    let mut open: Option<SignBox> = None;
    for (index, token) in symbols.iter().enumerate() {
        let position = coordinate(index, xs[index], ys[index])?;
        let mut chars = token.chars();
        if let (Some(letter), None) = (chars.next(), chars.next()) {
            let marker =
                BoxMarker::from_letter(letter).ok_or_else(|| FactorError::InvalidToken {
                    index,
                    stream: FactorStream::Symbol,
                    token: token.clone(),
                })?;
            if let Some(sign_box) = open.take() {
                signs.push(Sign::Boxed {
                    prefix: None,
                    sign_box,
                });
            }
            open = Some(SignBox {
                marker,
                extent: position,
                placements: Vec::new(),
            });
            continue;
        }
        let symbol = parse_symbol(token).map_err(|_| FactorError::InvalidToken {
            index,
            stream: FactorStream::Symbol,
            token: token.clone(),
        })?;
        if symbol.is_punctuation() {
            if let Some(sign_box) = open.take() {
                signs.push(Sign::Boxed {
                    prefix: None,
                    sign_box,
                });
            }
            signs.push(Sign::Punctuation { symbol, position });
            continue;
        }
        match open.as_mut() {
            Some(sign_box) => sign_box.placements.push(Placement { symbol, position }),
            None => {
                return Err(FactorError::OrphanPlacement {
                    index,
                    token: token.clone(),
                })
            }
        }
    }
    if let Some(sign_box) = open {
        signs.push(Sign::Boxed {
            prefix: None,
            sign_box,
        });
    }
    Ok(Utterance::new(signs))
}

fn coordinate(index: usize, x: i64, y: i64) -> Result<Coordinate, FactorError> {
    let check = |stream, value: i64| {
        u16::try_from(value)
            .ok()
            .filter(|v| (MIN_POSITION..=MAX_POSITION).contains(v))
            .ok_or(FactorError::ValueOutOfRange {
                index,
                stream,
                value,
            })
    };
    let x = check(FactorStream::X, x)?;
    let y = check(FactorStream::Y, y)?;
    Ok(Coordinate::new(x, y).expect("range checked above"))
}
