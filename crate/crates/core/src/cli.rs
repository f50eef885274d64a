//! The `dlexplain` command line.
//!
//! Exit codes: 0 success, 1 usage error or unreadable input, 2 data error
//! (bad syntax, unknown names, unsatisfiable ingest) with one JSON
//! diagnostic line on stderr.

use std::collections::BTreeSet;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;
use serde_json::{json, Map, Value};

use crate::fol::{render_fol, translate_gci};
use crate::ingest::{build_abox, emit_problem, parse_annotations, parse_mapping};
use crate::learner::{parse_ratio, search, verify_solution, SearchConfig};
use crate::model::KnowledgeBase;
use crate::reasoner::{materialize, MaterializedKb};
use crate::report;
use crate::text::{
    parse_axiom, parse_axiom_open, parse_expression, parse_kb, parse_problem, serialize_kb, serialize_problem,
    ParseError,
};
use crate::LearningProblem;

#[derive(Parser, Debug)]
#[command(name = "dlexplain", version, about = "Learn and check class expressions over a knowledge base")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for class expressions separating the problem's examples.
    Learn(LearnArgs),
    /// Score one class expression against a problem.
    Verify(VerifyArgs),
    /// Print the first-order translation of an axiom.
    Translate(TranslateArgs),
    /// Build a knowledge base and problem from annotation records.
    Ingest(IngestArgs),
}

#[derive(Args, Debug)]
struct LearnArgs {
    /// Knowledge base in .dlkb format.
    #[arg(long)]
    kb: PathBuf,
    /// Problem file of `+ ind` / `- ind` lines.
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    max_expansions: usize,
    #[arg(long, default_value_t = 10)]
    max_length: usize,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    /// Tolerated inaccuracy, as a decimal or a fraction like 1/10.
    #[arg(long, default_value = "0", value_parser = ratio_arg)]
    noise: Rational64,
    #[arg(long, default_value = "1/100", value_parser = ratio_arg)]
    length_penalty: Rational64,
    /// Priority a search node loses per unit of refinement horizon.
    #[arg(long, default_value = "1/10", value_parser = ratio_arg)]
    expansion_penalty: Rational64,
    #[arg(long)]
    enable_disjunction: bool,
    /// Also write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add `elapsed_ms` to the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    kb: PathBuf,
    #[arg(long)]
    problem: PathBuf,
    /// Class expression in the `some`/`only`/`and`/`or`/`not` syntax.
    #[arg(long)]
    expr: String,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    /// `<expr> => <expr>`; read a `gci` line from stdin when absent.
    #[arg(long)]
    axiom: Option<String>,
    /// Require every name to be declared in this knowledge base.
    #[arg(long)]
    kb: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IngestArgs {
    /// `id<TAB>term, term, ...` per line.
    #[arg(long)]
    annotations: PathBuf,
    /// `term<TAB>ClassName` per line.
    #[arg(long)]
    mapping: PathBuf,
    #[arg(long, default_value = "contains")]
    role: String,
    /// Background ontology in .dlkb format.
    #[arg(long)]
    background: PathBuf,
    /// Comma-separated ids of positively classified inputs.
    #[arg(long, value_delimiter = ',', required = true)]
    positives: Vec<String>,
    #[arg(long)]
    out_kb: PathBuf,
    #[arg(long)]
    out_problem: PathBuf,
}

fn ratio_arg(s: &str) -> Result<Rational64, String> {
    parse_ratio(s).ok_or_else(|| format!("`{s}` is not a number or fraction"))
}

enum Failure {
    Usage(String),
    Data(Value),
}

impl Failure {
    fn data(kind: &str, message: impl ToString) -> Self {
        Failure::Data(report::diagnostic(kind, &message.to_string(), Map::new()))
    }

    fn parse(file: Option<&Path>, err: &ParseError) -> Self {
        let mut extra = Map::new();
        extra.insert("line".into(), json!(err.span.line));
        extra.insert("column".into(), json!(err.span.column));
        if !err.expected.is_empty() {
            extra.insert("expected".into(), json!(err.expected));
        }
        if let Some(f) = file {
            extra.insert("file".into(), json!(f.display().to_string()));
        }
        Failure::Data(report::diagnostic("parse", &err.message, extra))
    }
}

type Outcome = Result<String, Failure>;

/// Run one invocation. `argv[0]` is the program name.
pub fn run(argv: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Learn(args) => learn(args),
        Command::Verify(args) => verify(args),
        Command::Translate(args) => translate(args, stdin),
        Command::Ingest(args) => ingest(args),
    };
    match result {
        Ok(out) => {
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return 1;
            }
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Data(diag)) => {
            let _ = stderr.write_all(report::to_line(&diag).as_bytes());
            2
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_kb(path: &Path) -> Result<KnowledgeBase, Failure> {
    parse_kb(&read(path)?).map_err(|e| Failure::parse(Some(path), &e))
}

fn load(kb: &Path, problem: &Path) -> Result<(MaterializedKb, LearningProblem), Failure> {
    let kb = load_kb(kb)?;
    let text = read(problem)?;
    let problem_value = parse_problem(&text, &kb.signature).map_err(|e| Failure::parse(Some(problem), &e))?;
    Ok((materialize(&kb), problem_value))
}

fn learn(args: LearnArgs) -> Outcome {
    let started = Instant::now();
    let cfg = SearchConfig {
        max_expansions: args.max_expansions,
        max_length: args.max_length,
        top_k: args.top_k,
        length_penalty: args.length_penalty,
        noise: args.noise,
        enable_disjunction: args.enable_disjunction,
        expansion_penalty: args.expansion_penalty,
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let (mkb, problem) = load(&args.kb, &args.problem)?;
    let outcome = search(&mkb, &problem, &cfg).map_err(|e| Failure::data("learn", e))?;
    let mut value = report::learn_json(&cfg, &outcome);
    if args.timing {
        value["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    let mut text = serde_json::to_string_pretty(&value).expect("json values serialize");
    text.push('\n');
    if let Some(out) = &args.out {
        write(out, &text)?;
    }
    Ok(text)
}

fn verify(args: VerifyArgs) -> Outcome {
    let (mkb, problem) = load(&args.kb, &args.problem)?;
    let expr = parse_expression(&args.expr, &mkb.base().signature).map_err(|e| Failure::parse(None, &e))?;
    let solution =
        verify_solution(&mkb, &expr, &problem, &SearchConfig::default()).map_err(|e| Failure::data("verify", e))?;
    Ok(report::to_line(&report::verify_json(&solution)))
}

fn translate(args: TranslateArgs, stdin: &mut dyn Read) -> Outcome {
    let text = match args.axiom {
        Some(a) => a,
        None => {
            let mut buf = String::new();
            stdin.read_to_string(&mut buf).map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            let lines: Vec<&str> =
                buf.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
            match lines[..] {
                [line] => line.to_string(),
                [] => return Err(Failure::Usage("expected --axiom or one `gci` line on stdin".into())),
                _ => return Err(Failure::Usage("expected exactly one axiom line on stdin".into())),
            }
        }
    };
    let axiom = match &args.kb {
        Some(path) => parse_axiom(&text, &load_kb(path)?.signature),
        None => parse_axiom_open(&text),
    }
    .map_err(|e| Failure::parse(None, &e))?;
    Ok(format!("{}\n", render_fol(&translate_gci(&axiom))))
}

fn ingest(args: IngestArgs) -> Outcome {
    let background = load_kb(&args.background)?;
    let records = parse_annotations(&read(&args.annotations)?).map_err(|e| Failure::data("ingest", e))?;
    let mapping = parse_mapping(&read(&args.mapping)?).map_err(|e| Failure::data("ingest", e))?;
    let kb = build_abox(&records, &mapping, &args.role, &background).map_err(|e| Failure::data("ingest", e))?;
    let positives: BTreeSet<String> =
        args.positives.iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect();
    let problem = emit_problem(&records, &positives).map_err(|e| Failure::data("ingest", e))?;
    write(&args.out_kb, &serialize_kb(&kb))?;
    write(&args.out_problem, &serialize_problem(&problem))?;
    let summary = json!({
        "individuals": kb.signature.individuals.len(),
        "negatives": problem.negatives,
        "positives": problem.positives,
        "records": records.len(),
        "subcommand": "ingest",
    });
    Ok(report::to_line(&summary))
}
