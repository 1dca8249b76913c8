//! `wobkit` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 I/O error.

mod manifest;

use std::collections::{HashMap, HashSet};
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wobkit::eval::{gold_pairs, render_subset, score_subset};
use wobkit::overlap::SPLIT_ORDER;
use wobkit::perturb::DEFAULT_ATTACK_SUFFIX;
use wobkit::{
    annotate_overlap, attack_dataset, augment_dataset, build_confusion, dataset_stats,
    macro_report, normalize, render_report, split_entailments, Label, NeutralSentencePool,
    NliExample, PerturbationSpec,
};

use crate::manifest::{sidecar_path, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "wobkit",
    version,
    about = "Word-overlap bias diagnostics for NLI datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Markdown,
}

impl From<OutputFormat> for wobkit::Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => wobkit::Format::Json,
            OutputFormat::Markdown => wobkit::Format::Markdown,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count examples per gold label.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "-")]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
    },
    /// Print the normalized tokens of a text, one per line.
    Normalize {
        #[arg(long, default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value = "-")]
        output: PathBuf,
    },
    /// Annotate every example with its word overlap.
    Overlap {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Manifest path, needed to record one when writing to stdout.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Select the k highest- and lowest-overlap entailment examples.
    Split {
        #[arg(long)]
        input: PathBuf,
        /// Directory receiving easy_ids.txt, tough_ids.txt and split.json.
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 1000)]
        k: usize,
    },
    /// Append a fixed suffix to every hypothesis.
    Attack {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = DEFAULT_ATTACK_SUFFIX, allow_hyphen_values = true)]
        suffix: String,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Append a randomly chosen pool suffix to every hypothesis.
    Augment {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Text file with one suffix per line.
        #[arg(long, conflicts_with = "suffix")]
        pool: Option<PathBuf>,
        /// Pool entry; repeat for several. Defaults to the built-in pool.
        #[arg(long, allow_hyphen_values = true)]
        suffix: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Score predictions against gold labels.
    Score {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long, value_enum, default_value = "markdown")]
        format: OutputFormat,
        /// File of example ids (one per line) to restrict scoring to.
        #[arg(long)]
        subset: Option<PathBuf>,
        #[arg(long, default_value = "-")]
        output: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Io(m) => m,
        }
    }
}

impl From<wobkit::Error> for Failure {
    fn from(e: wobkit::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn is_stream(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn open_input(path: &Path) -> Result<Box<dyn BufRead>, Failure> {
    if is_stream(path) {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let file = File::open(path).map_err(|e| io_failure(path, e))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

fn read_examples(path: &Path) -> Result<Vec<NliExample>, Failure> {
    if is_stream(path) {
        Ok(wobkit::read_dataset_from(open_input(path)?)?)
    } else {
        Ok(wobkit::read_dataset(path)?)
    }
}

fn with_output(
    path: &Path,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    let result = if is_stream(path) {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        f(&mut lock).and_then(|_| lock.flush())
    } else {
        File::create(path).and_then(|file| {
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()
        })
    };
    result.map_err(|e| io_failure(path, e))
}

fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), Failure> {
    let mut buf = Vec::new();
    wobkit::corpus::write_jsonl(items, &mut buf)?;
    with_output(path, |w| w.write_all(&buf))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("manifest serializes");
    text.push('\n');
    with_output(path, |w| w.write_all(text.as_bytes()))
}

/// Writes the manifest beside `output`, or to the explicit path if given.
fn record(manifest: RunManifest, output: &Path, explicit: Option<&Path>) -> Result<(), Failure> {
    let target = explicit
        .map(Path::to_path_buf)
        .or_else(|| sidecar_path(output));
    match target {
        Some(path) => write_json(&path, &manifest),
        None => Ok(()),
    }
}

fn cmd_stats(input: &Path, output: &Path, format: OutputFormat) -> Result<(), Failure> {
    let stats = dataset_stats(&read_examples(input)?);
    let text = match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&stats).expect("stats serialize");
            s.push('\n');
            s
        }
        OutputFormat::Markdown => {
            let mut s = String::from("| Hypothesis Type | Number of Examples |\n|---|---|\n");
            for label in Label::ALL {
                s.push_str(&format!("| {} | {} |\n", label.title(), stats.count(label)));
            }
            s.push_str(&format!("| **Total** | **{}** |\n", stats.total));
            s
        }
    };
    with_output(output, |w| w.write_all(text.as_bytes()))
}

fn cmd_normalize(input: &Path, output: &Path) -> Result<(), Failure> {
    let mut text = String::new();
    open_input(input)?
        .read_to_string(&mut text)
        .map_err(|e| io_failure(input, e))?;
    let tokens = normalize(&text);
    with_output(output, |w| {
        for t in &tokens {
            writeln!(w, "{t}")?;
        }
        Ok(())
    })
}

fn cmd_overlap(input: &Path, output: &Path, manifest: Option<&Path>) -> Result<(), Failure> {
    let records = annotate_overlap(&read_examples(input)?)?;
    write_jsonl(output, &records)?;
    let m = RunManifest::new("overlap")
        .input(input)
        .output(output)
        .param("records", records.len());
    record(m, output, manifest)
}

fn cmd_split(input: &Path, dir: &Path, k: usize) -> Result<(), Failure> {
    if k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let split = split_entailments(&read_examples(input)?, k)?;
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let easy = dir.join("easy_ids.txt");
    let tough = dir.join("tough_ids.txt");
    for (path, ids) in [(&easy, &split.easy), (&tough, &split.tough)] {
        with_output(path, |w| {
            for id in ids {
                writeln!(w, "{id}")?;
            }
            Ok(())
        })?;
    }
    let m = RunManifest::new("split")
        .input(input)
        .output(&easy)
        .output(&tough)
        .param("k", k)
        .param("tie_break", SPLIT_ORDER);
    write_json(&dir.join("split.json"), &m)
}

fn cmd_attack(
    input: &Path,
    output: &Path,
    suffix: &str,
    manifest: Option<&Path>,
) -> Result<(), Failure> {
    let spec = PerturbationSpec::attack(suffix).map_err(|e| Failure::Usage(e.to_string()))?;
    let examples = read_examples(input)?;
    let attacked = attack_dataset(&examples, &spec)?;
    write_jsonl(output, &attacked)?;
    let m = RunManifest::new("attack")
        .input(input)
        .output(output)
        .param("suffix", spec.pool.suffixes()[0].clone())
        .param("examples", attacked.len());
    let m = RunManifest {
        pool_digest: Some(spec.pool.digest()),
        ..m
    };
    record(m, output, manifest)
}

fn cmd_augment(
    input: &Path,
    output: &Path,
    pool: Option<&Path>,
    suffixes: &[String],
    seed: u64,
    manifest: Option<&Path>,
) -> Result<(), Failure> {
    let chosen = match (pool, suffixes) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            NeutralSentencePool::from_lines(&text)
                .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?
        }
        (None, []) => NeutralSentencePool::default(),
        (None, list) => {
            NeutralSentencePool::new(list).map_err(|e| Failure::Usage(e.to_string()))?
        }
    };
    let spec = PerturbationSpec::augment(chosen, seed);
    let augmented = augment_dataset(&read_examples(input)?, &spec)?;
    write_jsonl(output, &augmented)?;
    let mut m = RunManifest::new("augment")
        .input(input)
        .output(output)
        .param("pool", spec.pool.suffixes().to_vec())
        .param("examples", augmented.len());
    if let Some(path) = pool {
        m = m.param("pool_file", path.display().to_string());
    }
    m.seed = Some(seed);
    m.pool_digest = Some(spec.pool.digest());
    record(m, output, manifest)
}

fn read_ids(path: &Path) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let mut seen = HashSet::new();
    let mut ids = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if !seen.insert(line) {
            return Err(Failure::Data(format!(
                "{}: duplicate id {line:?}",
                path.display()
            )));
        }
        ids.push(line.to_string());
    }
    Ok(ids)
}

fn cmd_score(
    input: &Path,
    predictions: &Path,
    format: OutputFormat,
    subset: Option<&Path>,
    output: &Path,
) -> Result<(), Failure> {
    let examples = read_examples(input)?;
    let mut preds = if is_stream(predictions) {
        wobkit::read_predictions_from(open_input(predictions)?)?
    } else {
        wobkit::read_predictions(predictions)?
    };
    let format = wobkit::Format::from(format);

    let text = match subset {
        None => {
            let cm = build_confusion(gold_pairs(&examples), &preds)?;
            render_report(&macro_report(&cm)?, format)
        }
        Some(path) => {
            let ids = read_ids(path)?;
            let gold: HashMap<String, Label> =
                examples.iter().map(|e| (e.id.clone(), e.gold)).collect();
            let score = score_subset(&ids, &gold, &preds)?;
            let wanted: HashSet<&str> = ids.iter().map(String::as_str).collect();
            preds.retain(|id, _| wanted.contains(id.as_str()));
            let chosen: Vec<NliExample> = examples
                .into_iter()
                .filter(|e| wanted.contains(e.id.as_str()))
                .collect();
            let report = macro_report(&build_confusion(gold_pairs(&chosen), &preds)?)?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            match format {
                wobkit::Format::Json => {
                    let value = serde_json::json!({
                        "subset": {
                            "name": name,
                            "n": score.n,
                            "correct": score.correct,
                            "accuracy": score.accuracy,
                        },
                        "report": report,
                    });
                    let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
                    s.push('\n');
                    s
                }
                wobkit::Format::Markdown => {
                    format!(
                        "{}\n{}",
                        render_subset(&name, &score, format),
                        render_report(&report, format)
                    )
                }
            }
        }
    };
    with_output(output, |w| w.write_all(text.as_bytes()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Stats {
            input,
            output,
            format,
        } => cmd_stats(&input, &output, format),
        Command::Normalize { input, output } => cmd_normalize(&input, &output),
        Command::Overlap {
            input,
            output,
            manifest,
        } => cmd_overlap(&input, &output, manifest.as_deref()),
        Command::Split { input, output, k } => cmd_split(&input, &output, k),
        Command::Attack {
            input,
            output,
            suffix,
            manifest,
        } => cmd_attack(&input, &output, &suffix, manifest.as_deref()),
        Command::Augment {
            input,
            output,
            pool,
            suffix,
            seed,
            manifest,
        } => cmd_augment(
            &input,
            &output,
            pool.as_deref(),
            &suffix,
            seed,
            manifest.as_deref(),
        ),
        Command::Score {
            input,
            predictions,
            format,
            subset,
            output,
        } => cmd_score(&input, &predictions, format, subset.as_deref(), &output),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("wobkit: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
