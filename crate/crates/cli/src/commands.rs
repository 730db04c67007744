use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use signwriting::corpus::{
    self, read_records, undo_bpe, CleanConfig, CorpusError, PrepareConfig, SplitRatios,
};
use signwriting::factor::{self, FactorBundle, FactorStream};
use signwriting::fsw::{ParseError, ParseOptions, Sign, Utterance};
use signwriting::fuzz::{random_utterance, FuzzConfig};
use signwriting::metrics::{
    BleuStats, ChrfParams, ChrfStats, EvalReport, MaeAccumulator, MetricError, TopnAccumulator,
};
use signwriting::swu::SwuTable;
use thiserror::Error;

use crate::input::{self, write_line, Lines};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: line {line}, column {column}: {kind}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        kind: String,
        message: String,
    },
    #[error("{path}: line {line}: {message}")]
    Invalid {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Corpus(#[from] CorpusError),
    #[error("{0}")]
    Metric(#[from] MetricError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn parse(path: &Path, line: usize, err: &ParseError) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            line,
            column: err.column,
            kind: err.kind.name().to_string(),
            message: err.message.clone(),
        }
    }

    fn invalid(path: &Path, line: usize, message: impl Into<String>) -> Self {
        CliError::Invalid {
            path: path.to_path_buf(),
            line,
            message: message.into(),
        }
    }
}

/// SignWriting toolkit: parse, factorize, convert, prepare and evaluate FSW data.
#[derive(Debug, Parser)]
#[command(name = "swtk", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InputArg {
    /// Input file, one item per line (`-` for standard input).
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the parse tree of each FSW line.
    Parse {
        #[command(flatten)]
        input: InputArg,
        /// Emit one JSON tree per line instead of the indented view.
        #[arg(long)]
        json: bool,
        /// Reject coordinates above 749.
        #[arg(long)]
        strict: bool,
    },
    /// Turn JSON parse trees (one per line) back into FSW.
    Serialize {
        #[command(flatten)]
        input: InputArg,
    },
    /// Split FSW lines into the eight aligned factor streams.
    Factorize {
        #[command(flatten)]
        input: InputArg,
        /// Directory for `<stem>.symbol` ... `<stem>.row`; without it, print
        /// one JSON mapping per line.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "data")]
        stem: String,
    },
    /// Rebuild FSW lines from factor files.
    Defactorize {
        #[arg(long)]
        in_dir: PathBuf,
        #[arg(long, default_value = "data")]
        stem: String,
        /// Use only symbol/x/y and clamp out-of-range positions (decoder output).
        #[arg(long)]
        reconstruct: bool,
    },
    /// Convert between FSW and SWU.
    Convert {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum)]
        to: Script,
    },
    /// Clean, tag, split, learn BPE and emit factor files for a JSONL corpus.
    Prepare(PrepareArgs),
    /// Corpus statistics per language pair, as JSON.
    Stats {
        #[command(flatten)]
        input: InputArg,
    },
    /// Score hypotheses against references and print a JSON report.
    Evaluate(EvaluateArgs),
    /// Print random valid FSW utterances.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Never emit `A` sort prefixes.
        #[arg(long)]
        no_prefix: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Script {
    Swu,
    Fsw,
}

#[derive(Debug, Args)]
struct PrepareArgs {
    /// Line-delimited JSON corpus.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    vocab_size: usize,
    #[arg(long)]
    lowercase: bool,
    #[arg(long, default_value_t = 100)]
    max_dict_words: usize,
    #[arg(long, default_value_t = 200)]
    max_sent_words: usize,
    /// Train/dev/test percentages.
    #[arg(long, default_value = "95,3,2")]
    split: String,
    /// Factor loss weight, recorded in the manifest for the training stage.
    #[arg(long)]
    factor_weight: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Bleu,
    Chrf,
    #[value(name = "chrf++")]
    ChrfPlusPlus,
    Mae,
    Topn,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Axis {
    X,
    Y,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long, value_enum)]
    metric: Metric,
    /// Hypothesis file; for `topn`, an n-best file of `index ||| candidate` lines.
    #[arg(long)]
    hyp: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Top-n cutoffs.
    #[arg(long = "n", default_values_t = [1, 5])]
    cutoffs: Vec<usize>,
    /// Compare case-insensitively.
    #[arg(long)]
    casefold: bool,
    /// Join BPE subwords before scoring (always on for `topn`).
    #[arg(long)]
    undo_bpe: bool,
    /// Which positional stream the MAE files hold.
    #[arg(long, value_enum, default_value = "x")]
    axis: Axis,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = 6)]
    char_order: usize,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Parse {
            input,
            json,
            strict,
        } => parse(&input.input, json, strict),
        Command::Serialize { input } => serialize(&input.input),
        Command::Factorize { input, out, stem } => factorize(&input.input, out.as_deref(), &stem),
        Command::Defactorize {
            in_dir,
            stem,
            reconstruct,
        } => defactorize(&in_dir, &stem, reconstruct),
        Command::Convert { input, to } => convert(&input.input, to),
        Command::Prepare(args) => prepare(args),
        Command::Stats { input } => stats(&input.input),
        Command::Evaluate(args) => evaluate(args),
        Command::Fuzz {
            count,
            seed,
            no_prefix,
        } => fuzz(count, seed, no_prefix),
    }
}

fn parse_line(
    path: &Path,
    number: usize,
    line: &str,
    options: ParseOptions,
) -> Result<Utterance, CliError> {
    options
        .parse_utterance(line)
        .map_err(|e| CliError::parse(path, number, &e))
}

fn tree(utterance: &Utterance) -> String {
    let mut out = String::new();
    let n = utterance.signs.len();
    let _ = writeln!(out, "utterance: {n} sign{}", if n == 1 { "" } else { "s" });
    for (i, sign) in utterance.signs.iter().enumerate() {
        match sign {
            Sign::Boxed { prefix, sign_box } => {
                let _ = writeln!(
                    out,
                    "  sign {}: box {} extent {}",
                    i + 1,
                    sign_box.marker,
                    sign_box.extent
                );
                if let Some(prefix) = prefix {
                    let symbols: Vec<String> =
                        prefix.symbols().iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "    prefix: {}", symbols.join(" "));
                }
                for p in &sign_box.placements {
                    let _ = writeln!(
                        out,
                        "    {} at {} (core {}, col {}, row {})",
                        p.symbol,
                        p.position,
                        p.symbol.core(),
                        p.symbol.col(),
                        p.symbol.row()
                    );
                }
            }
            Sign::Punctuation { symbol, position } => {
                let _ = writeln!(out, "  sign {}: punctuation {symbol} at {position}", i + 1);
            }
        }
    }
    out
}

fn parse(path: &Path, json: bool, strict: bool) -> Result<(), CliError> {
    let options = if strict {
        ParseOptions::strict()
    } else {
        ParseOptions::default()
    };
    let mut out = input::stdout();
    for item in Lines::open(path)? {
        let (number, line) = item?;
        let utterance = parse_line(path, number, &line, options)?;
        if json {
            write_line(
                &mut out,
                &serde_json::to_string(&utterance).expect("tree serializes"),
            )?;
        } else {
            write_line(&mut out, &tree(&utterance))?;
        }
    }
    out.flush()
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn serialize(path: &Path) -> Result<(), CliError> {
    let mut out = input::stdout();
    for item in Lines::open(path)? {
        let (number, line) = item?;
        let utterance: Utterance = serde_json::from_str(&line)
            .map_err(|e| CliError::invalid(path, number, e.to_string()))?;
        if utterance.is_empty() {
            return Err(CliError::invalid(path, number, "utterance has no signs"));
        }
        write_line(&mut out, &utterance.to_string())?;
    }
    out.flush()
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

#[derive(Serialize)]
struct FactorRow<'a> {
    fsw: String,
    #[serde(flatten)]
    bundle: &'a FactorBundle,
}

fn factorize(path: &Path, out_dir: Option<&Path>, stem: &str) -> Result<(), CliError> {
    let mut files = match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let mut files = Vec::new();
            for stream in FactorStream::ALL {
                let file = dir.join(format!("{stem}.{}", stream.suffix()));
                files.push((stream, input::create(&file)?, file));
            }
            Some(files)
        }
        None => None,
    };
    let mut stdout = input::stdout();
    let mut count = 0;
    for item in Lines::open(path)? {
        let (number, line) = item?;
        let utterance = parse_line(path, number, &line, ParseOptions::default())?;
        let bundle = factor::factorize(&utterance);
        match files.as_mut() {
            Some(files) => {
                for (stream, writer, _) in files.iter_mut() {
                    write_line(writer, &bundle.line(*stream))?;
                }
            }
            None => {
                let row = FactorRow {
                    fsw: utterance.to_string(),
                    bundle: &bundle,
                };
                write_line(
                    &mut stdout,
                    &serde_json::to_string(&row).expect("row serializes"),
                )?;
            }
        }
        count += 1;
    }
    if let Some(files) = files.as_mut() {
        for (_, writer, file) in files.iter_mut() {
            writer.flush().map_err(|e| CliError::io(file, e))?;
        }
    }
    info!("factorized {count} lines");
    stdout
        .flush()
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn defactorize(dir: &Path, stem: &str, reconstruct: bool) -> Result<(), CliError> {
    let mut readers = Vec::new();
    for stream in FactorStream::ALL {
        let file = dir.join(format!("{stem}.{}", stream.suffix()));
        let required = matches!(
            stream,
            FactorStream::Symbol | FactorStream::X | FactorStream::Y
        );
        if reconstruct && !required {
            continue;
        }
        if !required && !file.exists() {
            continue;
        }
        readers.push((stream, Lines::open(&file)?));
    }
    let symbol_path = readers[0].1.path().to_path_buf();
    let mut out = input::stdout();
    loop {
        let mut lines = Vec::with_capacity(readers.len());
        for (stream, reader) in readers.iter_mut() {
            lines.push((*stream, reader.next().transpose()?));
        }
        let present = lines.iter().filter(|(_, l)| l.is_some()).count();
        if present == 0 {
            break;
        }
        if present != lines.len() {
            let number = lines
                .iter()
                .find_map(|(_, l)| l.as_ref().map(|(n, _)| *n))
                .unwrap_or(0);
            return Err(CliError::invalid(
                &symbol_path,
                number,
                "factor files have different line counts",
            ));
        }
        let number = lines[0].1.as_ref().map(|(n, _)| *n).unwrap_or(0);
        let bundle = FactorBundle::from_lines(
            lines
                .iter()
                .filter_map(|(s, l)| l.as_ref().map(|(_, text)| (*s, text.as_str()))),
        )
        .map_err(|e| CliError::invalid(&symbol_path, number, e.to_string()))?;
        let utterance = if reconstruct {
            let r = factor::reconstruct(&bundle.symbol, &bundle.x, &bundle.y)
                .map_err(|e| CliError::invalid(&symbol_path, number, e.to_string()))?;
            if r.total_clamped() > 0 {
                warn!(
                    "line {number}: clamped {} positional values",
                    r.total_clamped()
                );
            }
            r.utterance
        } else {
            let d = factor::defactorize(&bundle)
                .map_err(|e| CliError::invalid(&symbol_path, number, e.to_string()))?;
            for w in &d.warnings {
                warn!("line {number}: {w}");
            }
            d.utterance
        };
        write_line(&mut out, &utterance.to_string())?;
    }
    out.flush()
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn convert(path: &Path, to: Script) -> Result<(), CliError> {
    let table = SwuTable::builtin();
    let mut out = input::stdout();
    for item in Lines::open(path)? {
        let (number, line) = item?;
        let converted = match to {
            Script::Swu => table.fsw_to_swu(&line),
            Script::Fsw => table.swu_to_fsw(&line),
        };
        let converted = converted.map_err(|e| match e {
            signwriting::swu::SwuError::Fsw(p) => CliError::parse(path, number, &p),
            other => CliError::invalid(path, number, other.to_string()),
        })?;
        write_line(&mut out, &converted)?;
    }
    out.flush()
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn parse_ratios(text: &str) -> Result<SplitRatios, CliError> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--split expects three integers, got {text:?}")))?;
    match parts.as_slice() {
        [train, dev, test] => SplitRatios::new(*train, *dev, *test).map_err(CliError::Usage),
        _ => Err(CliError::Usage(format!(
            "--split expects train,dev,test percentages, got {text:?}"
        ))),
    }
}

fn prepare(args: PrepareArgs) -> Result<(), CliError> {
    let config = PrepareConfig {
        seed: args.seed,
        ratios: parse_ratios(&args.split)?,
        clean: CleanConfig {
            max_dict_words: args.max_dict_words,
            max_sent_words: args.max_sent_words,
            lowercase: args.lowercase,
        },
        vocab_size: args.vocab_size,
        factor_weight: args.factor_weight,
    };
    let records = read_records(input::open(&args.input)?).map_err(|e| match e {
        CorpusError::InvalidRecord { line, message } => {
            CliError::invalid(&args.input, line, message)
        }
        other => other.into(),
    })?;
    let manifest = corpus::prepare(&records, &args.out, &config)?;
    info!(
        "prepared {}/{}/{} train/dev/test records",
        manifest.counts.train, manifest.counts.dev, manifest.counts.test
    );
    Ok(())
}

fn stats(path: &Path) -> Result<(), CliError> {
    let mut report = corpus::StatsReport::default();
    for item in Lines::open(path)? {
        let (number, line) = item?;
        if line.trim().is_empty() {
            continue;
        }
        let record: corpus::CorpusRecord = serde_json::from_str(&line)
            .map_err(|e| CliError::invalid(path, number, e.to_string()))?;
        record
            .validate()
            .map_err(|m| CliError::invalid(path, number, m))?;
        report.add(&record);
    }
    let mut out = input::stdout();
    write_line(
        &mut out,
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    out.flush()
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn normalize(text: &str, casefold: bool, bpe: bool) -> String {
    let text = if bpe {
        undo_bpe(text)
    } else {
        text.to_string()
    };
    let text = text.trim().to_string();
    if casefold {
        text.to_lowercase()
    } else {
        text
    }
}

fn positions(path: &Path, number: usize, line: &str) -> Result<Vec<i64>, CliError> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::invalid(path, number, format!("not an integer: {t:?}")))
        })
        .collect()
}

fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let mut report = EvalReport::default();
    if args.metric == Metric::Topn {
        evaluate_topn(&args, &mut report)?;
    } else {
        let mut bleu = BleuStats::default();
        let mut chrf = ChrfStats::new(ChrfParams {
            beta: args.beta,
            char_order: args.char_order,
            word_order: if args.metric == Metric::ChrfPlusPlus {
                2
            } else {
                0
            },
        });
        let mut mae = MaeAccumulator::default();
        let mut hyps = Lines::open(&args.hyp)?;
        let mut refs = Lines::open(&args.reference)?;
        let mut segments = 0;
        loop {
            let (hyp, reference) = match (hyps.next().transpose()?, refs.next().transpose()?) {
                (None, None) => break,
                (Some(h), Some(r)) => (h, r),
                _ => {
                    return Err(CliError::Invalid {
                        path: args.hyp.clone(),
                        line: segments + 1,
                        message: "hypothesis and reference files differ in length".into(),
                    })
                }
            };
            segments += 1;
            let hyp_text = normalize(&hyp.1, args.casefold, args.undo_bpe);
            let ref_text = normalize(&reference.1, args.casefold, args.undo_bpe);
            match args.metric {
                Metric::Bleu => {
                    let h: Vec<&str> = hyp_text.split_whitespace().collect();
                    let r: Vec<&str> = ref_text.split_whitespace().collect();
                    bleu.add(&h, &r);
                }
                Metric::Chrf | Metric::ChrfPlusPlus => chrf.add(&hyp_text, &ref_text),
                Metric::Mae => {
                    let p = positions(&args.hyp, hyp.0, &hyp.1)?;
                    let g = positions(&args.reference, reference.0, &reference.1)?;
                    mae.add(&p, &g);
                }
                Metric::Topn => unreachable!("handled above"),
            }
        }
        if segments == 0 {
            return Err(MetricError::EmptyCorpus.into());
        }
        report.segments = segments;
        match args.metric {
            Metric::Bleu => report.bleu = Some(bleu.score()),
            Metric::Chrf | Metric::ChrfPlusPlus => report.chrf = Some(chrf.score()),
            Metric::Mae => match args.axis {
                Axis::X => report.mae_x = Some(mae.score()),
                Axis::Y => report.mae_y = Some(mae.score()),
            },
            Metric::Topn => {}
        }
    }
    let mut out = input::stdout();
    write_line(
        &mut out,
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    out.flush()
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

/// Streams an n-best file grouped by ascending item index alongside the
/// reference file.
fn evaluate_topn(args: &EvaluateArgs, report: &mut EvalReport) -> Result<(), CliError> {
    let mut acc = TopnAccumulator::new(args.cutoffs.clone())?;
    let mut nbest = Lines::open(&args.hyp)?.peekable();
    let mut refs = Lines::open(&args.reference)?;
    let split = |number: usize, line: &str| -> Result<(usize, String), CliError> {
        let (index, candidate) = line.split_once("|||").ok_or_else(|| {
            CliError::invalid(&args.hyp, number, "expected `index ||| candidate`")
        })?;
        let index = index.trim().parse().map_err(|_| {
            CliError::invalid(&args.hyp, number, format!("bad index {:?}", index.trim()))
        })?;
        Ok((index, normalize(candidate, args.casefold, true)))
    };
    let mut item = 0usize;
    while let Some(reference) = refs.next().transpose()? {
        let reference = normalize(&reference.1, args.casefold, true);
        let mut candidates = Vec::new();
        while let Some(next) = nbest.peek() {
            let (number, line) = match next {
                Ok((n, l)) => (*n, l.clone()),
                Err(_) => return Err(nbest.next().expect("peeked").unwrap_err()),
            };
            let (index, candidate) = split(number, &line)?;
            if index < item {
                return Err(CliError::invalid(
                    &args.hyp,
                    number,
                    format!("index {index} out of order"),
                ));
            }
            if index > item {
                break;
            }
            candidates.push(candidate);
            nbest.next();
        }
        acc.add(&candidates, &reference);
        item += 1;
    }
    if let Some(next) = nbest.next() {
        let (number, _) = next?;
        return Err(CliError::invalid(
            &args.hyp,
            number,
            "n-best entry refers to an item beyond the reference file",
        ));
    }
    if acc.items == 0 {
        return Err(MetricError::EmptyCorpus.into());
    }
    report.segments = acc.items;
    report.top_n = acc.scores().into_iter().collect();
    Ok(())
}

fn fuzz(count: usize, seed: u64, no_prefix: bool) -> Result<(), CliError> {
    let config = FuzzConfig {
        prefixes: !no_prefix,
        ..FuzzConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = input::stdout();
    for _ in 0..count {
        write_line(&mut out, &random_utterance(&mut rng, &config).to_string())?;
    }
    out.flush()
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_ratios_parse() {
        assert_eq!(parse_ratios("95,3,2").unwrap(), SplitRatios::default());
        assert_eq!(
            parse_ratios(" 80, 10 ,10").unwrap(),
            SplitRatios::new(80, 10, 10).unwrap()
        );
        assert!(matches!(parse_ratios("95,3"), Err(CliError::Usage(_))));
        assert!(matches!(parse_ratios("90,3,2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_ratios("a,b,c"), Err(CliError::Usage(_))));
    }

    #[test]
    fn tree_lists_prefix_and_punctuation() {
        let u = signwriting::parse_utterance("AS10000M500x500S10000490x490 S38800464x496").unwrap();
        assert_eq!(
            tree(&u),
            "utterance: 2 signs\n  sign 1: box M extent 500x500\n    prefix: S10000\n    \
             S10000 at 490x490 (core S100, col 0, row 0)\n  sign 2: punctuation S38800 at 464x496\n"
        );
    }

    #[test]
    fn normalize_joins_subwords() {
        assert_eq!(normalize(" He@@ llo World ", true, true), "hello world");
        assert_eq!(normalize("He@@ llo", false, false), "He@@ llo");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
