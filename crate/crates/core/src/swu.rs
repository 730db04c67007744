//! Conversion between FSW and SignWriting in Unicode (SWU).
//!
//! Each FSW marker letter, three-digit number and six-character symbol maps
//! to exactly one code point. The mapping constants are read from a small
//! text table (see `data/swu_mapping.txt`) so a revised code point layout can
//! be loaded without touching the converter.

use std::fmt::Write as _;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::fsw::{
    parse_utterance, Coordinate, ParseError, Sign, SymbolId, MAX_POSITION, MAX_SYMBOL_BASE,
    MIN_POSITION, MIN_SYMBOL_BASE,
};

const BUILTIN_TABLE: &str = include_str!("../data/swu_mapping.txt");
const MARKER_LETTERS: [char; 5] = ['A', 'B', 'L', 'M', 'R'];
const SYMBOLS_PER_BASE: u32 = 96;
const SYMBOL_COUNT: u32 = (MAX_SYMBOL_BASE - MIN_SYMBOL_BASE + 1) as u32 * SYMBOLS_PER_BASE;
const NUMBER_COUNT: u32 = (MAX_POSITION - MIN_POSITION + 1) as u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header constant `{0}`")]
    MissingConstant(&'static str),
    #[error("checksum mismatch: file says {stated}, content hashes to {actual}")]
    Checksum { stated: String, actual: String },
    #[error("missing checksum line")]
    MissingChecksum,
    #[error("invalid mapping: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwuError {
    #[error(transparent)]
    Fsw(#[from] ParseError),
    #[error("unknown code point U+{codepoint:04X} at column {column}")]
    UnknownCodepoint { column: usize, codepoint: u32 },
}

impl SwuError {
    pub fn kind(&self) -> &'static str {
        match self {
            SwuError::Fsw(e) => e.kind.name(),
            SwuError::UnknownCodepoint { .. } => "UnknownCodepoint",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwuTable {
    version: u32,
    /// Code points of A, B, L, M, R.
    markers: [u32; 5],
    number_base: u32,
    symbol_base: u32,
}

enum Token {
    Marker(char),
    Number(u16),
    Symbol(SymbolId),
}

impl SwuTable {
    /// The table shipped with the crate.
    pub fn builtin() -> &'static SwuTable {
        static TABLE: OnceLock<SwuTable> = OnceLock::new();
        TABLE
            .get_or_init(|| SwuTable::from_text(BUILTIN_TABLE).expect("bundled SWU table is valid"))
    }

    pub fn from_text(text: &str) -> Result<Self, TableError> {
        let checksum_at = text
            .match_indices("checksum ")
            .find(|(i, _)| *i == 0 || text.as_bytes()[i - 1] == b'\n')
            .map(|(i, _)| i)
            .ok_or(TableError::MissingChecksum)?;
        let (body, tail) = text.split_at(checksum_at);
        let stated = tail["checksum ".len()..]
            .lines()
            .next()
            .unwrap_or("")
            .trim()
            .to_string();
        let actual = format!("sha256:{}", hex_digest(body.as_bytes()));
        if stated != actual {
            return Err(TableError::Checksum { stated, actual });
        }

        let mut version = None;
        let mut marker_base = None;
        let mut number_base = None;
        let mut symbol_base = None;
        let mut overrides = Vec::new();
        for (index, raw) in body.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| TableError::Syntax {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["version", v] => {
                    version = Some(
                        v.parse()
                            .map_err(|_| syntax(format!("bad version {v:?}")))?,
                    )
                }
                ["marker_base", cp] => marker_base = Some(parse_codepoint(cp).map_err(syntax)?),
                ["number_base", cp] => number_base = Some(parse_codepoint(cp).map_err(syntax)?),
                ["symbol_base", cp] => symbol_base = Some(parse_codepoint(cp).map_err(syntax)?),
                ["marker", letter, cp] => {
                    let slot = MARKER_LETTERS
                        .iter()
                        .position(|m| m.to_string() == *letter)
                        .ok_or_else(|| syntax(format!("unknown marker {letter:?}")))?;
                    overrides.push((slot, parse_codepoint(cp).map_err(syntax)?));
                }
                _ => return Err(syntax(format!("unrecognized line {line:?}"))),
            }
        }
        let marker_base = marker_base.ok_or(TableError::MissingConstant("marker_base"))?;
        let mut markers = [0u32; 5];
        for (i, slot) in markers.iter_mut().enumerate() {
            *slot = marker_base + i as u32;
        }
        for (slot, cp) in overrides {
            markers[slot] = cp;
        }
        let table = SwuTable {
            version: version.ok_or(TableError::MissingConstant("version"))?,
            markers,
            number_base: number_base.ok_or(TableError::MissingConstant("number_base"))?,
            symbol_base: symbol_base.ok_or(TableError::MissingConstant("symbol_base"))?,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    fn validate(&self) -> Result<(), TableError> {
        let mut ranges: Vec<(u32, u32, &str)> =
            self.markers.iter().map(|&cp| (cp, cp, "marker")).collect();
        ranges.push((
            self.number_base,
            self.number_base + NUMBER_COUNT - 1,
            "number",
        ));
        ranges.push((
            self.symbol_base,
            self.symbol_base + SYMBOL_COUNT - 1,
            "symbol",
        ));
        for &(lo, hi, what) in &ranges {
            if lo < 0x80 || hi > 0x10FFFF || (lo <= 0xDFFF && hi >= 0xD800) {
                return Err(TableError::Invalid(format!(
                    "{what} range U+{lo:04X}..U+{hi:04X} is not assignable"
                )));
            }
        }
        ranges.sort();
        for pair in ranges.windows(2) {
            if pair[1].0 <= pair[0].1 {
                return Err(TableError::Invalid(format!(
                    "{} and {} ranges overlap",
                    pair[0].2, pair[1].2
                )));
            }
        }
        Ok(())
    }

    fn marker_char(&self, letter: char) -> char {
        let slot = MARKER_LETTERS
            .iter()
            .position(|&m| m == letter)
            .expect("known marker");
        char::from_u32(self.markers[slot]).expect("validated")
    }

    fn number_char(&self, n: u16) -> char {
        char::from_u32(self.number_base + u32::from(n - MIN_POSITION)).expect("validated")
    }

    fn symbol_char(&self, symbol: SymbolId) -> char {
        let index = u32::from(symbol.base() - MIN_SYMBOL_BASE) * SYMBOLS_PER_BASE
            + u32::from(symbol.col()) * 16
            + u32::from(symbol.row());
        char::from_u32(self.symbol_base + index).expect("validated")
    }

    fn coordinate(&self, out: &mut String, c: Coordinate) {
        out.push(self.number_char(c.x()));
        out.push(self.number_char(c.y()));
    }

    fn decode(&self, cp: u32) -> Option<Token> {
        if let Some(slot) = self.markers.iter().position(|&m| m == cp) {
            return Some(Token::Marker(MARKER_LETTERS[slot]));
        }
        if (self.number_base..self.number_base + NUMBER_COUNT).contains(&cp) {
            return Some(Token::Number((cp - self.number_base) as u16 + MIN_POSITION));
        }
        if (self.symbol_base..self.symbol_base + SYMBOL_COUNT).contains(&cp) {
            let index = cp - self.symbol_base;
            let base = (index / SYMBOLS_PER_BASE) as u16 + MIN_SYMBOL_BASE;
            let rest = index % SYMBOLS_PER_BASE;
            let symbol = SymbolId::new(base, (rest / 16) as u8, (rest % 16) as u8)
                .expect("index arithmetic stays in range");
            return Some(Token::Symbol(symbol));
        }
        None
    }

    pub fn fsw_to_swu(&self, text: &str) -> Result<String, SwuError> {
        if text.trim().is_empty() {
            return Ok(String::new());
        }
        let utterance = parse_utterance(text)?;
        let mut out = String::new();
        for (i, sign) in utterance.signs.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            match sign {
                Sign::Boxed { prefix, sign_box } => {
                    if let Some(prefix) = prefix {
                        out.push(self.marker_char('A'));
                        for &symbol in prefix.symbols() {
                            out.push(self.symbol_char(symbol));
                        }
                    }
                    out.push(self.marker_char(sign_box.marker.letter()));
                    self.coordinate(&mut out, sign_box.extent);
                    for placement in &sign_box.placements {
                        out.push(self.symbol_char(placement.symbol));
                        self.coordinate(&mut out, placement.position);
                    }
                }
                Sign::Punctuation { symbol, position } => {
                    out.push(self.symbol_char(*symbol));
                    self.coordinate(&mut out, *position);
                }
            }
        }
        Ok(out)
    }

    pub fn swu_to_fsw(&self, text: &str) -> Result<String, SwuError> {
        let mut fsw = String::with_capacity(text.len() * 2);
        let mut after_number = false;
        for (index, ch) in text.chars().enumerate() {
            if ch.is_whitespace() {
                fsw.push(' ');
                after_number = false;
                continue;
            }
            let token = self.decode(ch as u32).ok_or(SwuError::UnknownCodepoint {
                column: index + 1,
                codepoint: ch as u32,
            })?;
            match token {
                Token::Marker(letter) => {
                    fsw.push(letter);
                    after_number = false;
                }
                Token::Number(n) => {
                    if after_number {
                        fsw.push('x');
                    }
                    write!(fsw, "{n:03}").expect("writing to a String");
                    after_number = !after_number;
                }
                Token::Symbol(symbol) => {
                    write!(fsw, "{symbol}").expect("writing to a String");
                    after_number = false;
                }
            }
        }
        if fsw.trim().is_empty() {
            return Ok(String::new());
        }
        Ok(parse_utterance(&fsw)?.to_string())
    }
}

pub fn fsw_to_swu(text: &str) -> Result<String, SwuError> {
    SwuTable::builtin().fsw_to_swu(text)
}

pub fn swu_to_fsw(text: &str) -> Result<String, SwuError> {
    SwuTable::builtin().swu_to_fsw(text)
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn parse_codepoint(text: &str) -> Result<u32, String> {
    text.strip_prefix("U+")
        .and_then(|hex| u32::from_str_radix(hex, 16).ok())
        .ok_or_else(|| format!("bad code point {text:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LISTING: &str = "M550x535S32a00482x483S15d09455x499S15d01522x497S22114516x484S22114456x484S20f00524x522S20f00451x523";

    fn with_checksum(body: &str) -> String {
        format!("{body}checksum sha256:{}\n", hex_digest(body.as_bytes()))
    }

    #[test]
    fn box_maps_to_three_code_points() {
        let swu = fsw_to_swu("M500x500").unwrap();
        let cps: Vec<u32> = swu.chars().map(|c| c as u32).collect();
        assert_eq!(cps, [0x1D803, 0x1D80C + 250, 0x1D80C + 250]);
        assert_eq!(swu_to_fsw(&swu).unwrap(), "M500x500");
    }

    #[test]
    fn symbol_code_points() {
        let swu = fsw_to_swu("S38800464x496").unwrap();
        let first = swu.chars().next().unwrap() as u32;
        assert_eq!(first, 0x40001 + (0x388 - 0x100) * 96);
        let swu = fsw_to_swu("M500x500S10000500x500").unwrap();
        assert_eq!(swu.chars().nth(3).unwrap() as u32, 0x40001);
        let swu = fsw_to_swu("S38b5f500x500").unwrap();
        assert_eq!(
            swu.chars().next().unwrap() as u32,
            0x40001 + SYMBOL_COUNT - 1
        );
    }

    #[test]
    fn listing_round_trips() {
        let swu = fsw_to_swu(LISTING).unwrap();
        assert_eq!(swu.chars().count(), 3 + 7 * 3);
        assert_eq!(swu_to_fsw(&swu).unwrap(), LISTING);
    }

    #[test]
    fn empty_and_errors() {
        assert_eq!(fsw_to_swu("").unwrap(), "");
        assert_eq!(swu_to_fsw("").unwrap(), "");
        assert!(matches!(
            swu_to_fsw("\u{1D803}a"),
            Err(SwuError::UnknownCodepoint {
                column: 2,
                codepoint: 0x61
            })
        ));
        assert_eq!(
            fsw_to_swu("M500x500S1000").unwrap_err().kind(),
            "MalformedSymbol"
        );
        assert_eq!(
            fsw_to_swu("S10000500x500").unwrap_err().kind(),
            "MalformedSign"
        );
        // odd number of number characters leaves a dangling coordinate
        let dangling = "\u{1D803}\u{1D90C}\u{1D90C}\u{1D90C}";
        assert_eq!(swu_to_fsw(dangling).unwrap_err().kind(), "MalformedSign");
    }

    #[test]
    fn builtin_table_loads() {
        let table = SwuTable::builtin();
        assert_eq!(table.version(), 1);
        assert_eq!(table.markers, [0x1D800, 0x1D801, 0x1D802, 0x1D803, 0x1D804]);
    }

    #[test]
    fn table_checksum_and_overrides() {
        let tampered = BUILTIN_TABLE.replace("U+1D80C", "U+1D80D");
        assert!(matches!(
            SwuTable::from_text(&tampered),
            Err(TableError::Checksum { .. })
        ));

        let body = "version 2\nmarker_base U+1D800\nnumber_base U+1D80C\nsymbol_base U+40001\nmarker M U+1DA10\n";
        let table = SwuTable::from_text(&with_checksum(body)).unwrap();
        let swu = table.fsw_to_swu("M500x500").unwrap();
        assert_eq!(swu.chars().next().unwrap() as u32, 0x1DA10);
        assert_eq!(table.swu_to_fsw(&swu).unwrap(), "M500x500");

        let clash = "version 2\nmarker_base U+1D800\nnumber_base U+1D802\nsymbol_base U+40001\n";
        assert!(matches!(
            SwuTable::from_text(&with_checksum(clash)),
            Err(TableError::Invalid(_))
        ));
        let missing = "version 2\nmarker_base U+1D800\nsymbol_base U+40001\n";
        assert_eq!(
            SwuTable::from_text(&with_checksum(missing)),
            Err(TableError::MissingConstant("number_base"))
        );
    }
}
