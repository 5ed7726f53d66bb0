//! The `ctxlogic` command line. [`run`] does the work and returns the exit
//! status; the binary is a thin wrapper around it.
//!
//! Exit status: 0 success (or "true"), 1 a boolean query answered "false",
//! 2 usage or I/O error, 3 malformed input data.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dataset::{
    convert_help, read_help_records, read_jsonl, split_contexts, split_nli, write_jsonl,
    ContextRecord, DatasetError, Partition, SplitRatio,
};
use crate::evalreport::{read_gold, read_predictions, score, EvalError, Percent};
use crate::labeler::{label, label_pair, Annotations, LabelError, Monotonicity};
use crate::logic::{
    build_canonical_model, classify_context, closure, entails, model_check, Calculus,
    FiniteModel, LogicError, Theory,
};
use crate::selfcheck::{selfcheck, RelationPool};
use crate::surface::{parse_sentence, ContextRegistry, Style, SurfaceError};
use crate::taxonomy::{ConceptRelation, TaxonomyError, TaxonomyGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ctxlogic", version, about = "Context-abstracted monotonicity logic toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StyleArg {
    Natural,
    Symbolic,
}

impl From<StyleArg> for Style {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Natural => Style::Natural,
            StyleArg::Symbolic => Style::Symbolic,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide Γ ⊢ φ by proof search; prints true or false.
    Entail {
        theory: PathBuf,
        query: String,
        /// Registry of allowed context templates (default: any context).
        #[arg(long)]
        contexts: Option<PathBuf>,
    },
    /// Print the deductive closure of a theory, one sentence per line.
    Closure {
        theory: PathBuf,
        #[arg(long, value_enum, default_value = "natural")]
        style: StyleArg,
        #[arg(long)]
        contexts: Option<PathBuf>,
    },
    /// Build the canonical model of a theory as JSON.
    Canonical {
        theory: PathBuf,
        /// Write the model here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        contexts: Option<PathBuf>,
    },
    /// Check a sentence in a finite model; prints true or false.
    Modelcheck {
        model: PathBuf,
        sentence: String,
    },
    /// What a theory says about a context: upward_only, downward_only, both or none.
    Classify {
        theory: PathBuf,
        context: String,
        #[arg(long)]
        contexts: Option<PathBuf>,
    },
    /// Look up one cell of the labeling matrix.
    Label {
        #[arg(long)]
        mon: String,
        #[arg(long)]
        rel: String,
    },
    /// Label a substitution pair from a taxonomy and context annotations.
    LabelPair {
        #[arg(long)]
        premise: String,
        #[arg(long)]
        hypothesis: String,
        #[arg(long)]
        taxonomy: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
    },
    /// Turn NLI records into deduplicated context records.
    ConvertHelp {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        rejects: PathBuf,
    },
    /// Split contexts train/dev/test, and optionally route NLI records along.
    Split {
        #[arg(long)]
        contexts: PathBuf,
        #[arg(long, default_value = "50:20:30")]
        ratio: SplitRatio,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        /// NLI records to split by their context's partition.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Accuracy by monotonicity stratum.
    Eval {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Baseline accuracy (percent) to report the difference against.
        #[arg(long)]
        baseline: Option<Percent>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Randomized soundness and proof/model agreement checks.
    Selfcheck {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Arbitrary context relations used by the soundness fuzz.
        #[arg(long, default_value = "reflexive")]
        relations: RelationPool,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl From<SurfaceError> for Failure {
    fn from(e: SurfaceError) -> Self {
        let io = match &e {
            SurfaceError::Io { .. } => true,
            SurfaceError::Line { source, .. } => matches!(**source, SurfaceError::Io { .. }),
            _ => false,
        };
        if io {
            Self::usage(e.to_string())
        } else {
            Self::data(e.to_string())
        }
    }
}

impl From<LogicError> for Failure {
    fn from(e: LogicError) -> Self {
        match e {
            LogicError::Surface(s) => s.into(),
            other => Self::data(other.to_string()),
        }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::Io { .. } => Self::usage(e.to_string()),
            DatasetError::Record { .. } => Self::data(e.to_string()),
        }
    }
}

impl From<TaxonomyError> for Failure {
    fn from(e: TaxonomyError) -> Self {
        match e {
            TaxonomyError::Surface(s) => s.into(),
            other => Self::data(other.to_string()),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Read(d) => d.into(),
            other => Self::data(other.to_string()),
        }
    }
}

impl From<LabelError> for Failure {
    fn from(e: LabelError) -> Self {
        Self::data(e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

fn registry(path: &Option<PathBuf>) -> Result<ContextRegistry, Failure> {
    match path {
        Some(p) => Ok(ContextRegistry::load(p)?),
        None => Ok(ContextRegistry::open()),
    }
}

fn verdict(out: &mut dyn Write, value: bool) -> Result<i32, Failure> {
    writeln!(out, "{value}").map_err(|e| Failure::usage(e.to_string()))?;
    Ok(if value { EXIT_OK } else { EXIT_FALSE })
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

/// Execute one parsed command, writing its standard output to `out`.
pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let w = |e: std::io::Error| Failure::usage(e.to_string());
    match command {
        Command::Entail {
            theory,
            query,
            contexts,
        } => {
            let reg = registry(&contexts)?;
            let gamma = Theory::load(&theory, &reg)?;
            let phi = parse_sentence(&query, &reg)?;
            verdict(out, entails(&gamma, &phi))
        }
        Command::Closure {
            theory,
            style,
            contexts,
        } => {
            let gamma = Theory::load(&theory, &registry(&contexts)?)?;
            write!(out, "{}", closure(&gamma).to_text(style.into())).map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::Canonical {
            theory,
            out: path,
            contexts,
        } => {
            let gamma = Theory::load(&theory, &registry(&contexts)?)?;
            let json = build_canonical_model(&gamma)?.to_json();
            match path {
                Some(p) => write_file(&p, &format!("{json}\n"))?,
                None => writeln!(out, "{json}").map_err(w)?,
            }
            Ok(EXIT_OK)
        }
        Command::Modelcheck { model, sentence } => {
            let m = FiniteModel::load(&model)?;
            let phi = parse_sentence(&sentence, &ContextRegistry::open())?;
            verdict(out, model_check(&m, &phi)?)
        }
        Command::Classify {
            theory,
            context,
            contexts,
        } => {
            let reg = registry(&contexts)?;
            let gamma = Theory::load(&theory, &reg)?;
            let p = reg.resolve_reference(&context)?;
            writeln!(out, "{}", classify_context(&gamma, &p).as_str()).map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::Label { mon, rel } => {
            let mon: Monotonicity = mon.parse().map_err(Failure::usage)?;
            let rel: ConceptRelation = rel.parse().map_err(Failure::usage)?;
            writeln!(out, "{}", label(mon, rel)).map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::LabelPair {
            premise,
            hypothesis,
            taxonomy,
            annotations,
        } => {
            let g = TaxonomyGraph::load(&taxonomy)?;
            let ann = Annotations::load(&annotations)?;
            let result = label_pair(&premise, &hypothesis, &g, &ann)?;
            match &result.substitution {
                Some(sub) => writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    result.label,
                    result.relation,
                    sub.template,
                    sub.a.name(),
                    sub.b.name()
                ),
                None => writeln!(out, "{}\t{}", result.label, result.relation),
            }
            .map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::ConvertHelp {
            input,
            out: path,
            rejects,
        } => {
            let records = read_help_records(&input)?;
            let conv = convert_help(&records);
            write_jsonl(&path, &conv.contexts)?;
            write_jsonl(&rejects, &conv.rejects)?;
            writeln!(
                out,
                "{} records, {} contexts, {} rejects",
                records.len(),
                conv.contexts.len(),
                conv.rejects.len()
            )
            .map_err(w)?;
            Ok(EXIT_OK)
        }
        Command::Split {
            contexts,
            ratio,
            seed,
            out_dir,
            records,
        } => {
            let ctx: Vec<ContextRecord> = read_jsonl(&contexts)?;
            let assignment = split_contexts(&ctx, seed, ratio);
            fs::create_dir_all(&out_dir).map_err(|e| io_failure(&out_dir, e))?;
            write_jsonl(out_dir.join("assignment.jsonl"), assignment.records())?;
            let [train, dev, test] = assignment.sizes();
            writeln!(out, "contexts: train {train}, dev {dev}, test {test}").map_err(w)?;
            if let Some(records) = records {
                let records = read_help_records(&records)?;
                let split = split_nli(&records, &assignment);
                for part in Partition::ALL {
                    write_jsonl(out_dir.join(format!("{part}.jsonl")), split.part(part))?;
                }
                write_jsonl(out_dir.join("rejects.jsonl"), &split.rejects)?;
                writeln!(
                    out,
                    "records: train {}, dev {}, test {}, rejects {}",
                    split.train.len(),
                    split.dev.len(),
                    split.test.len(),
                    split.rejects.len()
                )
                .map_err(w)?;
            }
            Ok(EXIT_OK)
        }
        Command::Eval {
            gold,
            pred,
            baseline,
            json,
        } => {
            let report = score(&read_gold(&gold)?, &read_predictions(&pred)?, baseline)?;
            write!(out, "{}", report.render_table()).map_err(w)?;
            if let Some(p) = json {
                write_file(&p, &format!("{}\n", report.to_json()))?;
            }
            Ok(EXIT_OK)
        }
        Command::Selfcheck {
            trials,
            seed,
            relations,
        } => {
            if trials == 0 {
                return Err(Failure::usage("--trials must be at least 1"));
            }
            let report = selfcheck(&Calculus::standard(), trials, seed, relations);
            write!(out, "{report}").map_err(w)?;
            Ok(if report.violations() == 0 {
                EXIT_OK
            } else {
                EXIT_FALSE
            })
        }
    }
}

/// Parse `args` (including the program name) and run. Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
