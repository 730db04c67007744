//! Byte pair encoding over whitespace-separated words.
//!
//! Learning starts from the character inventory and repeatedly merges the
//! most frequent adjacent symbol pair (ties go to the lexicographically
//! smallest pair) until the vocabulary reaches the target size. Segmented
//! output marks every non-final subword with [`CONTINUATION`], so undoing the
//! segmentation is a plain string replacement.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::CorpusError;

pub const CONTINUATION: &str = "@@";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpeModel {
    merges: Vec<(String, String)>,
    vocab_size_target: usize,
    ranks: HashMap<(String, String), usize>,
}

impl BpeModel {
    pub fn new(merges: Vec<(String, String)>, vocab_size_target: usize) -> Self {
        let ranks = merges
            .iter()
            .enumerate()
            .map(|(rank, pair)| (pair.clone(), rank))
            .collect();
        BpeModel {
            merges,
            vocab_size_target,
            ranks,
        }
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    pub fn vocab_size_target(&self) -> usize {
        self.vocab_size_target
    }

    /// Header line `vocab_size N`, then one `left right` merge per line.
    pub fn write_to(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "vocab_size {}", self.vocab_size_target)?;
        for (left, right) in &self.merges {
            writeln!(out, "{left} {right}")?;
        }
        Ok(())
    }

    pub fn read_from(input: impl BufRead) -> Result<Self, String> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or("empty BPE model file")?
            .map_err(|e| e.to_string())?;
        let vocab_size_target = header
            .strip_prefix("vocab_size ")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| format!("bad BPE header {header:?}"))?;
        let mut merges = Vec::new();
        for (index, line) in lines.enumerate() {
            let line = line.map_err(|e| e.to_string())?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                [left, right] => merges.push((left.to_string(), right.to_string())),
                _ => return Err(format!("line {}: bad merge {line:?}", index + 2)),
            }
        }
        Ok(BpeModel::new(merges, vocab_size_target))
    }

    fn segment(&self, word: &str) -> Vec<String> {
        let mut symbols: Vec<String> = word.chars().map(String::from).collect();
        while symbols.len() > 1 {
            let best = symbols
                .windows(2)
                .filter_map(|w| self.ranks.get(&(w[0].clone(), w[1].clone())))
                .min();
            let Some(&rank) = best else { break };
            let (left, right) = &self.merges[rank];
            let mut merged = Vec::with_capacity(symbols.len());
            let mut i = 0;
            while i < symbols.len() {
                if i + 1 < symbols.len() && &symbols[i] == left && &symbols[i + 1] == right {
                    merged.push(format!("{left}{right}"));
                    i += 2;
                } else {
                    merged.push(std::mem::take(&mut symbols[i]));
                    i += 1;
                }
            }
            symbols = merged;
        }
        symbols
    }
}

struct Learner {
    words: Vec<(Vec<u32>, u64)>,
    symbols: Vec<String>,
    ids: HashMap<String, u32>,
    counts: HashMap<(u32, u32), u64>,
    ranked: BTreeSet<(Reverse<u64>, String, String)>,
    occurs_in: HashMap<(u32, u32), HashSet<usize>>,
}

impl Learner {
    fn intern(&mut self, symbol: &str) -> u32 {
        if let Some(&id) = self.ids.get(symbol) {
            return id;
        }
        let id = self.symbols.len() as u32;
        self.symbols.push(symbol.to_string());
        self.ids.insert(symbol.to_string(), id);
        id
    }

    fn adjust(&mut self, pair: (u32, u32), delta: i64, word: usize) {
        let old = self.counts.get(&pair).copied().unwrap_or(0);
        let new = (old as i64 + delta) as u64;
        let key = |count| {
            (
                Reverse(count),
                self.symbols[pair.0 as usize].clone(),
                self.symbols[pair.1 as usize].clone(),
            )
        };
        if old > 0 {
            self.ranked.remove(&key(old));
        }
        if new > 0 {
            self.ranked.insert(key(new));
            self.counts.insert(pair, new);
        } else {
            self.counts.remove(&pair);
        }
        if delta > 0 {
            self.occurs_in.entry(pair).or_default().insert(word);
        }
    }

    fn count_word(&mut self, word: usize, sign: i64) {
        let (symbols, freq) = self.words[word].clone();
        for w in symbols.windows(2) {
            self.adjust((w[0], w[1]), sign * freq as i64, word);
        }
    }

    fn merge(&mut self, pair: (u32, u32)) -> String {
        let text = format!(
            "{}{}",
            self.symbols[pair.0 as usize], self.symbols[pair.1 as usize]
        );
        let merged = self.intern(&text);
        let mut affected: Vec<usize> = self
            .occurs_in
            .remove(&pair)
            .unwrap_or_default()
            .into_iter()
            .collect();
        affected.sort_unstable();
        for word in affected {
            let symbols = &self.words[word].0;
            if !symbols.windows(2).any(|w| (w[0], w[1]) == pair) {
                continue;
            }
            self.count_word(word, -1);
            let symbols = &self.words[word].0;
            let mut out = Vec::with_capacity(symbols.len());
            let mut i = 0;
            while i < symbols.len() {
                if i + 1 < symbols.len() && (symbols[i], symbols[i + 1]) == pair {
                    out.push(merged);
                    i += 2;
                } else {
                    out.push(symbols[i]);
                    i += 1;
                }
            }
            self.words[word].0 = out;
            self.count_word(word, 1);
        }
        text
    }
}

/// Learns merges from the words of `lines`.
pub fn learn_bpe<S: AsRef<str>>(lines: &[S], vocab_size: usize) -> Result<BpeModel, CorpusError> {
    let mut frequencies: BTreeMap<&str, u64> = BTreeMap::new();
    for line in lines {
        for word in line.as_ref().split_whitespace() {
            *frequencies.entry(word).or_insert(0) += 1;
        }
    }
    if frequencies.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut learner = Learner {
        words: Vec::new(),
        symbols: Vec::new(),
        ids: HashMap::new(),
        counts: HashMap::new(),
        ranked: BTreeSet::new(),
        occurs_in: HashMap::new(),
    };
    let mut vocab: HashSet<String> = HashSet::new();
    for (word, freq) in frequencies {
        let ids = word
            .chars()
            .map(|c| {
                let s = c.to_string();
                vocab.insert(s.clone());
                learner.intern(&s)
            })
            .collect();
        learner.words.push((ids, freq));
    }
    if vocab_size < vocab.len() {
        return Err(CorpusError::VocabTooSmall {
            requested: vocab_size,
            inventory: vocab.len(),
        });
    }
    for word in 0..learner.words.len() {
        learner.count_word(word, 1);
    }
    let mut merges = Vec::new();
    while vocab.len() < vocab_size {
        let Some((_, left, right)) = learner.ranked.first().cloned() else {
            break;
        };
        let pair = (learner.ids[&left], learner.ids[&right]);
        let merged = learner.merge(pair);
        vocab.insert(merged);
        merges.push((left, right));
    }
    Ok(BpeModel::new(merges, vocab_size))
}

fn is_control_tag(token: &str) -> bool {
    token.len() > 2 && token.starts_with('<') && token.ends_with('>')
}

/// Segments every word of `line`, leaving whitespace and `<...>` control
/// tags untouched.
pub fn apply_bpe(model: &BpeModel, line: &str) -> String {
    let mut out = String::with_capacity(line.len() * 2);
    let mut rest = line;
    while !rest.is_empty() {
        let word_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let (word, tail) = rest.split_at(word_end);
        if !word.is_empty() {
            if is_control_tag(word) {
                out.push_str(word);
            } else {
                let pieces = model.segment(word);
                for (i, piece) in pieces.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    out.push_str(piece);
                    if i + 1 < pieces.len() {
                        out.push_str(CONTINUATION);
                    }
                }
            }
        }
        let space_end = tail
            .find(|c: char| !c.is_whitespace())
            .unwrap_or(tail.len());
        out.push_str(&tail[..space_end]);
        rest = &tail[space_end..];
    }
    out
}

/// Joins subwords back into words. Exact inverse of [`apply_bpe`] for text
/// that does not itself contain `"@@ "`.
pub fn undo_bpe(line: &str) -> String {
    let mut pattern = String::new();
    let _ = write!(pattern, "{CONTINUATION} ");
    line.replace(&pattern, "")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    /// Recounts every adjacent pair from scratch, weighted by frequency.
    fn brute_force_pair_counts(words: &[(Vec<String>, u64)]) -> BTreeMap<(String, String), u64> {
        let mut counts = BTreeMap::new();
        for (symbols, freq) in words {
            for w in symbols.windows(2) {
                *counts.entry((w[0].clone(), w[1].clone())).or_insert(0) += freq;
            }
        }
        counts
    }

    #[test]
    fn first_merge_on_toy_corpus() {
        let lines = vec!["aaab"; 5];
        let words = vec![(
            vec!["a", "a", "a", "b"]
                .into_iter()
                .map(String::from)
                .collect(),
            5,
        )];
        let counts = brute_force_pair_counts(&words);
        assert_eq!(counts[&pair("a", "a")], 10);
        assert_eq!(counts[&pair("a", "b")], 5);
        let model = learn_bpe(&lines, 3).unwrap();
        assert_eq!(model.merges(), &[pair("a", "a")]);
    }

    #[test]
    fn inventory_bounds() {
        let model = learn_bpe(&["abc cab"], 3).unwrap();
        assert!(model.merges().is_empty());
        assert!(matches!(
            learn_bpe(&["abc"], 2),
            Err(CorpusError::VocabTooSmall {
                requested: 2,
                inventory: 3
            })
        ));
        assert!(matches!(
            learn_bpe(&["   "], 10),
            Err(CorpusError::EmptyCorpus)
        ));
    }

    #[test]
    fn ties_break_lexicographically() {
        // (a,b) and (c,d) each occur once
        let model = learn_bpe(&["cd ab"], 6).unwrap();
        assert_eq!(model.merges(), &[pair("a", "b"), pair("c", "d")]);
    }

    #[test]
    fn learner_matches_naive_recount() {
        let lines = [
            "the cat sat on the mat",
            "the hat that the cat ate",
            "a thin thatch",
        ];
        let model = learn_bpe(&lines, 40).unwrap();
        // replay with full recounts at each step
        let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
        for l in &lines {
            for w in l.split_whitespace() {
                *freq.entry(w).or_insert(0) += 1;
            }
        }
        let mut words: Vec<(Vec<String>, u64)> = freq
            .into_iter()
            .map(|(w, f)| (w.chars().map(String::from).collect(), f))
            .collect();
        for expected in model.merges() {
            let counts = brute_force_pair_counts(&words);
            let best = counts
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
                .map(|(p, _)| p.clone())
                .unwrap();
            assert_eq!(&best, expected);
            for (symbols, _) in &mut words {
                let mut out = Vec::new();
                let mut i = 0;
                while i < symbols.len() {
                    if i + 1 < symbols.len() && symbols[i] == best.0 && symbols[i + 1] == best.1 {
                        out.push(format!("{}{}", best.0, best.1));
                        i += 2;
                    } else {
                        out.push(symbols[i].clone());
                        i += 1;
                    }
                }
                *symbols = out;
            }
        }
    }

    #[test]
    fn apply_and_undo() {
        let model = learn_bpe(&["lower lowest newer newest"; 3], 20).unwrap();
        let line = "<2en> <4us> <sent> the  lowest\tlowly newcomer";
        let segmented = apply_bpe(&model, line);
        assert!(segmented.starts_with("<2en> <4us> <sent> "));
        assert!(segmented.contains(CONTINUATION));
        assert_eq!(undo_bpe(&segmented), line);
        assert_eq!(apply_bpe(&model, ""), "");
        assert_eq!(undo_bpe(""), "");
        // unseen characters fall back to single characters
        assert_eq!(apply_bpe(&model, "zq"), "z@@ q");
    }

    #[test]
    fn model_file_round_trip() {
        let model = learn_bpe(&["lower lowest newer newest"], 16).unwrap();
        let mut buf = Vec::new();
        model.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("vocab_size 16\n"));
        assert_eq!(BpeModel::read_from(buf.as_slice()).unwrap(), model);
        assert!(BpeModel::read_from("vocab 3\n".as_bytes()).is_err());
    }

    #[test]
    fn deterministic() {
        let lines = ["some words here", "more words there", "here and there"];
        assert_eq!(
            learn_bpe(&lines, 30).unwrap(),
            learn_bpe(&lines, 30).unwrap()
        );
    }
}
