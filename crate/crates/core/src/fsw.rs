//! Formal SignWriting in ASCII (FSW).
//!
//! An FSW utterance is a whitespace-separated list of signs. A sign is either
//! a boxed sign or a punctuation mark:
//!
//! ```text
//! boxed       := [ "A" symbol+ ] marker coord ( symbol coord )*
//! punctuation := symbol coord            (symbol base in 0x387..=0x38b)
//! marker      := "B" | "L" | "M" | "R"
//! symbol      := "S" hex hex hex [0-5] hex
//! coord       := digit{3} "x" digit{3}   (each component in 250..=750)
//! ```
//!
//! Parsing is lossless: [`Utterance`]'s `Display` impl writes canonical FSW
//! (lowercase hex, single spaces between signs) and the parser accepts
//! everything the serializer emits. Hex digits are accepted in either case.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MIN_SYMBOL_BASE: u16 = 0x100;
pub const MAX_SYMBOL_BASE: u16 = 0x38b;
pub const PUNCTUATION_BASES: std::ops::RangeInclusive<u16> = 0x387..=0x38b;
pub const MAX_COLUMN: u8 = 5;
pub const MAX_ROW: u8 = 15;
pub const MIN_POSITION: u16 = 250;
pub const MAX_POSITION: u16 = 750;
/// Upper bound used by [`ParseOptions::strict`].
pub const STRICT_MAX_POSITION: u16 = 749;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParseErrorKind {
    MalformedSymbol,
    OutOfRangeBase,
    MalformedSign,
    CoordinateOutOfRange,
    EmptyInput,
}

impl ParseErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ParseErrorKind::MalformedSymbol => "MalformedSymbol",
            ParseErrorKind::OutOfRangeBase => "OutOfRangeBase",
            ParseErrorKind::MalformedSign => "MalformedSign",
            ParseErrorKind::CoordinateOutOfRange => "CoordinateOutOfRange",
            ParseErrorKind::EmptyInput => "EmptyInput",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A parse failure. `column` is the 1-based character column of the
/// offending input character.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at column {column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            column,
            message: message.into(),
        }
    }
}

/// One SignWriting grapheme, decomposed into its core, column and row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId {
    base: u16,
    col: u8,
    row: u8,
}

impl SymbolId {
    pub fn new(base: u16, col: u8, row: u8) -> Result<Self, ParseError> {
        if !(MIN_SYMBOL_BASE..=MAX_SYMBOL_BASE).contains(&base) {
            return Err(ParseError::new(
                ParseErrorKind::OutOfRangeBase,
                1,
                format!("symbol base {base:#x} outside 0x100..=0x38b"),
            ));
        }
        if col > MAX_COLUMN || row > MAX_ROW {
            return Err(ParseError::new(
                ParseErrorKind::MalformedSymbol,
                1,
                format!("column {col} / row {row} outside 0..=5 / 0..=15"),
            ));
        }
        Ok(SymbolId { base, col, row })
    }

    pub fn base(self) -> u16 {
        self.base
    }

    pub fn col(self) -> u8 {
        self.col
    }

    pub fn row(self) -> u8 {
        self.row
    }

    /// The symbol core, e.g. `S1f0`.
    pub fn core(self) -> String {
        format!("S{:03x}", self.base)
    }

    pub fn is_punctuation(self) -> bool {
        is_punctuation(self)
    }
}

pub fn is_punctuation(symbol: SymbolId) -> bool {
    PUNCTUATION_BASES.contains(&symbol.base)
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{:03x}{}{:x}", self.base, self.col, self.row)
    }
}

impl FromStr for SymbolId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_symbol(s)
    }
}

impl Serialize for SymbolId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SymbolId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_symbol(&text).map_err(serde::de::Error::custom)
    }
}

/// A position on the sign plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Coordinate {
    x: u16,
    y: u16,
}

impl Coordinate {
    pub fn new(x: u16, y: u16) -> Result<Self, ParseError> {
        let range = MIN_POSITION..=MAX_POSITION;
        if !range.contains(&x) || !range.contains(&y) {
            return Err(ParseError::new(
                ParseErrorKind::CoordinateOutOfRange,
                1,
                format!("coordinate {x}x{y} outside 250..=750"),
            ));
        }
        Ok(Coordinate { x, y })
    }

    pub fn x(self) -> u16 {
        self.x
    }

    pub fn y(self) -> u16 {
        self.y
    }
}

impl<'de> Deserialize<'de> for Coordinate {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            x: u16,
            y: u16,
        }
        let raw = Raw::deserialize(deserializer)?;
        Coordinate::new(raw.x, raw.y).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:03}x{:03}", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoxMarker {
    B,
    L,
    M,
    R,
}

impl BoxMarker {
    pub const ALL: [BoxMarker; 4] = [BoxMarker::B, BoxMarker::L, BoxMarker::M, BoxMarker::R];

    pub fn letter(self) -> char {
        match self {
            BoxMarker::B => 'B',
            BoxMarker::L => 'L',
            BoxMarker::M => 'M',
            BoxMarker::R => 'R',
        }
    }

    pub fn from_letter(letter: char) -> Option<Self> {
        match letter {
            'B' => Some(BoxMarker::B),
            'L' => Some(BoxMarker::L),
            'M' => Some(BoxMarker::M),
            'R' => Some(BoxMarker::R),
            _ => None,
        }
    }
}

impl fmt::Display for BoxMarker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub symbol: SymbolId,
    pub position: Coordinate,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignBox {
    pub marker: BoxMarker,
    pub extent: Coordinate,
    pub placements: Vec<Placement>,
}

/// The `A`-prefixed list of symbols used for sorting. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SortPrefix(Vec<SymbolId>);

impl SortPrefix {
    pub fn new(symbols: Vec<SymbolId>) -> Option<Self> {
        if symbols.is_empty() {
            None
        } else {
            Some(SortPrefix(symbols))
        }
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.0
    }
}

impl<'de> Deserialize<'de> for SortPrefix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let symbols = Vec::<SymbolId>::deserialize(deserializer)?;
        SortPrefix::new(symbols).ok_or_else(|| serde::de::Error::custom("empty sort prefix"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Sign {
    Boxed {
        #[serde(skip_serializing_if = "Option::is_none")]
        prefix: Option<SortPrefix>,
        #[serde(rename = "box")]
        sign_box: SignBox,
    },
    Punctuation {
        symbol: SymbolId,
        position: Coordinate,
    },
}

impl Sign {
    /// Builds a punctuation sign, rejecting non-punctuation symbols.
    pub fn punctuation(symbol: SymbolId, position: Coordinate) -> Result<Self, ParseError> {
        if !symbol.is_punctuation() {
            return Err(ParseError::new(
                ParseErrorKind::MalformedSign,
                1,
                format!("{symbol} is not a punctuation symbol"),
            ));
        }
        Ok(Sign::Punctuation { symbol, position })
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(tag = "type", rename_all = "snake_case")]
        enum Raw {
            Boxed {
                #[serde(default)]
                prefix: Option<SortPrefix>,
                #[serde(rename = "box")]
                sign_box: SignBox,
            },
            Punctuation {
                symbol: SymbolId,
                position: Coordinate,
            },
        }
        match Raw::deserialize(deserializer)? {
            Raw::Boxed { prefix, sign_box } => Ok(Sign::Boxed { prefix, sign_box }),
            Raw::Punctuation { symbol, position } => {
                Sign::punctuation(symbol, position).map_err(serde::de::Error::custom)
            }
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Boxed { prefix, sign_box } => {
                if let Some(prefix) = prefix {
                    f.write_str("A")?;
                    for symbol in prefix.symbols() {
                        write!(f, "{symbol}")?;
                    }
                }
                write!(f, "{}{}", sign_box.marker, sign_box.extent)?;
                for placement in &sign_box.placements {
                    write!(f, "{}{}", placement.symbol, placement.position)?;
                }
                Ok(())
            }
            Sign::Punctuation { symbol, position } => write!(f, "{symbol}{position}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Utterance {
    pub signs: Vec<Sign>,
}

impl Utterance {
    pub fn new(signs: Vec<Sign>) -> Self {
        Utterance { signs }
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// The same utterance with every `A` sort prefix dropped.
    pub fn without_prefixes(&self) -> Utterance {
        let signs = self
            .signs
            .iter()
            .map(|sign| match sign {
                Sign::Boxed { sign_box, .. } => Sign::Boxed {
                    prefix: None,
                    sign_box: sign_box.clone(),
                },
                other => other.clone(),
            })
            .collect();
        Utterance { signs }
    }
}

impl fmt::Display for Utterance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, sign) in self.signs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{sign}")?;
        }
        Ok(())
    }
}

impl FromStr for Utterance {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_utterance(s)
    }
}

pub fn parse_symbol(text: &str) -> Result<SymbolId, ParseError> {
    if text.len() != 6 || !text.is_ascii() {
        return Err(ParseError::new(
            ParseErrorKind::MalformedSymbol,
            1,
            format!("expected 6-character symbol, found {text:?}"),
        ));
    }
    read_symbol(text.as_bytes(), 0, 1)
}

pub fn parse_utterance(text: &str) -> Result<Utterance, ParseError> {
    ParseOptions::default().parse_utterance(text)
}

/// Canonical FSW text of `utterance`.
pub fn serialize_utterance(utterance: &Utterance) -> String {
    utterance.to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub max_position: u16,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_position: MAX_POSITION,
        }
    }
}

impl ParseOptions {
    /// Caps coordinates at 749, the range expressible in SWU number characters.
    pub fn strict() -> Self {
        ParseOptions {
            max_position: STRICT_MAX_POSITION,
        }
    }

    pub fn parse_utterance(&self, text: &str) -> Result<Utterance, ParseError> {
        if let Some((index, ch)) = text.chars().enumerate().find(|(_, c)| !c.is_ascii()) {
            return Err(ParseError::new(
                ParseErrorKind::MalformedSign,
                index + 1,
                format!("unexpected character {ch:?}"),
            ));
        }
        let bytes = text.as_bytes();
        let mut signs = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            let end = bytes[pos..]
                .iter()
                .position(u8::is_ascii_whitespace)
                .map_or(bytes.len(), |n| pos + n);
            let mut reader = SignReader {
                bytes: &bytes[..end],
                pos,
                max_position: self.max_position,
            };
            while reader.pos < end {
                signs.push(reader.sign()?);
            }
            pos = end;
        }
        if signs.is_empty() {
            return Err(ParseError::new(
                ParseErrorKind::EmptyInput,
                1,
                "no signs in input",
            ));
        }
        Ok(Utterance { signs })
    }
}

struct SignReader<'a> {
    /// Input truncated at the end of the current whitespace-delimited token.
    bytes: &'a [u8],
    pos: usize,
    max_position: u16,
}

impl SignReader<'_> {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn malformed(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(ParseErrorKind::MalformedSign, self.column(), message)
    }

    fn sign(&mut self) -> Result<Sign, ParseError> {
        match self.peek() {
            Some(b'A') => {
                self.pos += 1;
                let mut symbols = Vec::new();
                while self.peek() == Some(b'S') {
                    symbols.push(self.symbol()?);
                }
                let prefix = SortPrefix::new(symbols)
                    .ok_or_else(|| self.malformed("sort prefix without symbols"))?;
                match self.peek().and_then(|b| BoxMarker::from_letter(b as char)) {
                    Some(_) => {
                        let sign_box = self.sign_box()?;
                        Ok(Sign::Boxed {
                            prefix: Some(prefix),
                            sign_box,
                        })
                    }
                    None => Err(self.malformed("sort prefix not followed by a box marker")),
                }
            }
            Some(b'B' | b'L' | b'M' | b'R') => Ok(Sign::Boxed {
                prefix: None,
                sign_box: self.sign_box()?,
            }),
            Some(b'S') => {
                let start = self.column();
                let symbol = self.symbol()?;
                if !symbol.is_punctuation() {
                    return Err(ParseError::new(
                        ParseErrorKind::MalformedSign,
                        start,
                        format!("symbol {symbol} outside a sign box (missing box marker)"),
                    ));
                }
                let position = self.coordinate()?;
                Ok(Sign::Punctuation { symbol, position })
            }
            Some(b) if b.is_ascii_digit() => Err(self.malformed("dangling coordinate")),
            Some(b) => Err(self.malformed(format!("unexpected character {:?}", b as char))),
            None => Err(self.malformed("unexpected end of sign")),
        }
    }

    fn sign_box(&mut self) -> Result<SignBox, ParseError> {
        let marker = BoxMarker::from_letter(self.bytes[self.pos] as char)
            .expect("caller checked the marker letter");
        self.pos += 1;
        let extent = self.coordinate()?;
        let mut placements = Vec::new();
        while self.peek() == Some(b'S') {
            let start = self.pos;
            let symbol = self.symbol()?;
            if symbol.is_punctuation() {
                // punctuation closes the box and starts its own sign
                self.pos = start;
                break;
            }
            let position = self.coordinate()?;
            placements.push(Placement { symbol, position });
        }
        Ok(SignBox {
            marker,
            extent,
            placements,
        })
    }

    fn symbol(&mut self) -> Result<SymbolId, ParseError> {
        let column = self.column();
        let end = self.pos + 6;
        if end > self.bytes.len() {
            return Err(ParseError::new(
                ParseErrorKind::MalformedSymbol,
                column,
                "truncated symbol",
            ));
        }
        let symbol = read_symbol(&self.bytes[self.pos..end], 0, column)?;
        self.pos = end;
        Ok(symbol)
    }

    fn coordinate(&mut self) -> Result<Coordinate, ParseError> {
        let column = self.column();
        let end = self.pos + 7;
        let text = match self.bytes.get(self.pos..end) {
            Some(text) => text,
            None => {
                return Err(self.malformed("missing or truncated coordinate"));
            }
        };
        let digits = |part: &[u8]| -> Option<u16> {
            part.iter().try_fold(0u16, |acc, &b| {
                b.is_ascii_digit().then(|| acc * 10 + u16::from(b - b'0'))
            })
        };
        let (x, y) = match (digits(&text[..3]), text[3], digits(&text[4..])) {
            (Some(x), b'x', Some(y)) => (x, y),
            _ => return Err(self.malformed("malformed coordinate")),
        };
        if x < MIN_POSITION || y < MIN_POSITION || x > self.max_position || y > self.max_position {
            return Err(ParseError::new(
                ParseErrorKind::CoordinateOutOfRange,
                column,
                format!(
                    "coordinate {x}x{y} outside {MIN_POSITION}..={}",
                    self.max_position
                ),
            ));
        }
        self.pos = end;
        Ok(Coordinate { x, y })
    }
}

/// Decodes the 6 bytes at `bytes[offset..]`. `column` locates errors.
fn read_symbol(bytes: &[u8], offset: usize, column: usize) -> Result<SymbolId, ParseError> {
    let b = &bytes[offset..offset + 6];
    let malformed =
        |message: String| ParseError::new(ParseErrorKind::MalformedSymbol, column, message);
    if b[0] != b'S' {
        return Err(malformed("symbol must start with 'S'".into()));
    }
    let hex = |c: u8| (c as char).to_digit(16).map(|d| d as u16);
    let text = String::from_utf8_lossy(b);
    let base = match (hex(b[1]), hex(b[2]), hex(b[3])) {
        (Some(a), Some(b), Some(c)) => (a << 8) | (b << 4) | c,
        _ => return Err(malformed(format!("non-hex symbol base in {text:?}"))),
    };
    let col = match b[4] {
        c @ b'0'..=b'5' => c - b'0',
        _ => return Err(malformed(format!("column digit must be 0-5 in {text:?}"))),
    };
    let row = match hex(b[5]) {
        Some(r) => r as u8,
        None => return Err(malformed(format!("non-hex row digit in {text:?}"))),
    };
    if !(MIN_SYMBOL_BASE..=MAX_SYMBOL_BASE).contains(&base) {
        return Err(ParseError::new(
            ParseErrorKind::OutOfRangeBase,
            column,
            format!("symbol base {base:#x} outside 0x100..=0x38b"),
        ));
    }
    Ok(SymbolId { base, col, row })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LISTING: &str = "M550x535S32a00482x483S15d09455x499S15d01522x497S22114516x484S22114456x484S20f00524x522S20f00451x523";

    #[test]
    fn decomposes_symbols() {
        let s = parse_symbol("S1f010").unwrap();
        assert_eq!((s.base(), s.col(), s.row()), (0x1f0, 1, 0));
        assert_eq!(s.core(), "S1f0");
        let s = parse_symbol("S10000").unwrap();
        assert_eq!((s.base(), s.col(), s.row()), (0x100, 0, 0));
        let s = parse_symbol("S14c2a").unwrap();
        assert_eq!((s.base(), s.col(), s.row()), (0x14c, 2, 10));
    }

    #[test]
    fn symbol_encoding_is_bijective_over_all_triples() {
        let mut seen = std::collections::HashSet::new();
        for base in MIN_SYMBOL_BASE..=MAX_SYMBOL_BASE {
            for col in 0..=MAX_COLUMN {
                for row in 0..=MAX_ROW {
                    let text = format!("S{base:03x}{col}{row:x}");
                    assert_eq!(text.len(), 6);
                    let parsed = parse_symbol(&text).unwrap();
                    assert_eq!(
                        (parsed.base(), parsed.col(), parsed.row()),
                        (base, col, row)
                    );
                    assert_eq!(parsed.to_string(), text);
                    assert!(seen.insert(text));
                }
            }
        }
        assert_eq!(seen.len(), 652 * 96);
    }

    #[test]
    fn uppercase_hex_is_accepted_and_lowercased() {
        assert_eq!(parse_symbol("S1F01A").unwrap().to_string(), "S1f01a");
    }

    #[test]
    fn symbol_errors() {
        let kind = |t: &str| parse_symbol(t).unwrap_err().kind;
        assert_eq!(kind("S1f01"), ParseErrorKind::MalformedSymbol);
        assert_eq!(kind("S1f0100"), ParseErrorKind::MalformedSymbol);
        assert_eq!(kind("S1g010"), ParseErrorKind::MalformedSymbol);
        assert_eq!(kind("S1f060"), ParseErrorKind::MalformedSymbol);
        assert_eq!(kind("T1f010"), ParseErrorKind::MalformedSymbol);
        assert_eq!(kind("S0ff00"), ParseErrorKind::OutOfRangeBase);
        assert_eq!(kind("S38c00"), ParseErrorKind::OutOfRangeBase);
        assert_eq!(kind("S40000"), ParseErrorKind::OutOfRangeBase);
    }

    #[test]
    fn punctuation_range() {
        assert!(parse_symbol("S38800").unwrap().is_punctuation());
        assert!(parse_symbol("S38700").unwrap().is_punctuation());
        assert!(parse_symbol("S38b00").unwrap().is_punctuation());
        assert!(!parse_symbol("S38600").unwrap().is_punctuation());
        assert!(!parse_symbol("S10000").unwrap().is_punctuation());
    }

    #[test]
    fn parses_listing_sign() {
        let u = parse_utterance(LISTING).unwrap();
        assert_eq!(u.signs.len(), 1);
        let Sign::Boxed { prefix, sign_box } = &u.signs[0] else {
            panic!("expected a boxed sign");
        };
        assert!(prefix.is_none());
        assert_eq!(sign_box.marker, BoxMarker::M);
        assert_eq!(sign_box.extent, Coordinate::new(550, 535).unwrap());
        let symbols: Vec<String> = sign_box
            .placements
            .iter()
            .map(|p| p.symbol.to_string())
            .collect();
        assert_eq!(
            symbols,
            ["S32a00", "S15d09", "S15d01", "S22114", "S22114", "S20f00", "S20f00"]
        );
        assert_eq!(u.to_string(), LISTING);
    }

    #[test]
    fn parses_punctuation_and_prefix() {
        let u = parse_utterance("S38800464x496").unwrap();
        assert_eq!(
            u.signs,
            vec![Sign::Punctuation {
                symbol: parse_symbol("S38800").unwrap(),
                position: Coordinate::new(464, 496).unwrap(),
            }]
        );
        assert_eq!(u.to_string(), "S38800464x496");

        let text = "AS14c20S27106M518x529S14c20481x471S27106503x489 S38800464x496";
        let u = parse_utterance(text).unwrap();
        assert_eq!(u.signs.len(), 2);
        match &u.signs[0] {
            Sign::Boxed {
                prefix: Some(prefix),
                ..
            } => assert_eq!(prefix.symbols().len(), 2),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(u.to_string(), text);
    }

    #[test]
    fn whitespace_is_normalized_and_concatenated_signs_split() {
        let u = parse_utterance("  M500x500\t\tM510x510S10000490x490S38800464x496 ").unwrap();
        assert_eq!(u.signs.len(), 3);
        assert_eq!(
            u.to_string(),
            "M500x500 M510x510S10000490x490 S38800464x496"
        );
    }

    #[test]
    fn utterance_errors_carry_columns() {
        let err = |t: &str| parse_utterance(t).unwrap_err();
        assert_eq!(err("").kind, ParseErrorKind::EmptyInput);
        assert_eq!(err("   ").kind, ParseErrorKind::EmptyInput);

        let e = err("S10000500x500");
        assert_eq!((e.kind, e.column), (ParseErrorKind::MalformedSign, 1));

        let e = err("M500x500 500x500");
        assert_eq!((e.kind, e.column), (ParseErrorKind::MalformedSign, 10));

        let e = err("M500x500S10000");
        assert_eq!((e.kind, e.column), (ParseErrorKind::MalformedSign, 15));

        let e = err("M500x500S10000249x500");
        assert_eq!(
            (e.kind, e.column),
            (ParseErrorKind::CoordinateOutOfRange, 15)
        );

        let e = err("M500x751");
        assert_eq!(
            (e.kind, e.column),
            (ParseErrorKind::CoordinateOutOfRange, 2)
        );

        let e = err("M500x500S1z000500x500");
        assert_eq!((e.kind, e.column), (ParseErrorKind::MalformedSymbol, 9));

        let e = err("M500x500S39000500x500");
        assert_eq!((e.kind, e.column), (ParseErrorKind::OutOfRangeBase, 9));

        assert_eq!(err("AS10000").kind, ParseErrorKind::MalformedSign);
        assert_eq!(err("AM500x500").kind, ParseErrorKind::MalformedSign);
        assert_eq!(err("M").kind, ParseErrorKind::MalformedSign);
        assert_eq!(err("M500y500").kind, ParseErrorKind::MalformedSign);
        assert_eq!(err("M500x500é").kind, ParseErrorKind::MalformedSign);
    }

    #[test]
    fn strict_mode_caps_at_749() {
        assert!(parse_utterance("M750x750").is_ok());
        let e = ParseOptions::strict()
            .parse_utterance("M750x500")
            .unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::CoordinateOutOfRange);
        assert!(ParseOptions::strict().parse_utterance("M749x250").is_ok());
    }

    #[test]
    fn json_tree_round_trips() {
        let u = parse_utterance("AS10000M500x500S10000490x490 S38800464x496").unwrap();
        let json = serde_json::to_string(&u).unwrap();
        let back: Utterance = serde_json::from_str(&json).unwrap();
        assert_eq!(back, u);
        let bad = json.replace("S38800", "S10000");
        assert!(serde_json::from_str::<Utterance>(&bad).is_err());
    }
}
