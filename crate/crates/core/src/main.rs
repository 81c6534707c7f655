use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use suffix_earley::bench::{compare, render_report, CompareError, ReportFormat};
use suffix_earley::oracle::count_acyclic_parses;
use suffix_earley::sentgen::{generate_sentences, GenConfig, GenError};
use suffix_earley::text::{parse_sentence_file, render_sentences};
use suffix_earley::{
    parse_grammar, recognize_earley, recognize_variant, serialize_grammar, tau2_transform, Grammar,
};

const EXIT_REJECT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DISAGREE: u8 = 3;
const EXIT_GENERATE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "suffix-earley",
    version,
    about = "Earley and suffix-item recognizers with step accounting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recognize one sentence.
    Parse {
        grammar: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Earley)]
        algorithm: Algorithm,
        /// Whitespace-separated terminals.
        #[arg(
            long,
            conflicts_with = "input_file",
            required_unless_present = "input_file"
        )]
        input: Option<String>,
        /// File whose whole content is one whitespace-separated sentence.
        #[arg(long)]
        input_file: Option<PathBuf>,
        #[arg(long)]
        dump_chart: bool,
        #[arg(long)]
        stats: bool,
    },
    /// Run all engines over a sentence file and report mean counts.
    Compare {
        grammar: PathBuf,
        sentences: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the two-normal-form cover of a grammar.
    Transform {
        grammar: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write random sentences of the grammar's language.
    Generate {
        grammar: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = GenConfig::default().max_depth)]
        max_depth: usize,
        #[arg(long, default_value_t = GenConfig::default().max_len)]
        max_len: usize,
        #[arg(long, default_value_t = GenConfig::default().max_attempts)]
        max_attempts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count the cycle-free parse trees of a sentence.
    CountParses {
        grammar: PathBuf,
        #[arg(long)]
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Earley,
    Variant,
    #[value(name = "tau2-earley")]
    Tau2Earley,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Md,
}

/// A failure carrying its exit status.
struct Failure(u8, String);

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure(EXIT_USAGE, message.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Parse {
            grammar,
            algorithm,
            input,
            input_file,
            dump_chart,
            stats,
        } => {
            let g = load_grammar(&grammar)?;
            let text = match (input, input_file) {
                (Some(text), _) => text,
                (None, Some(path)) => read(&path)?,
                (None, None) => {
                    return Err(Failure::usage("one of --input or --input-file is required"))
                }
            };
            cmd_parse(&g, algorithm, &text, dump_chart, stats)
        }
        Command::Compare {
            grammar,
            sentences,
            format,
            out,
        } => {
            let g = load_grammar(&grammar)?;
            let text = read(&sentences)?;
            let mut ws = Vec::new();
            for (line, words) in parse_sentence_file(&text).into_iter().enumerate() {
                let w = g.tokenize_words(words).map_err(|e| {
                    Failure::usage(format!("{}:{}: {e}", sentences.display(), line + 1))
                })?;
                ws.push(w);
            }
            let name = grammar
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let (row, _) = compare(&g, &name, &ws).map_err(|e| match e {
                CompareError::NoSentences => {
                    Failure::usage(format!("{}: no sentences", sentences.display()))
                }
                other => Failure(EXIT_DISAGREE, other.to_string()),
            })?;
            let format = match format {
                Format::Csv => ReportFormat::Csv,
                Format::Json => ReportFormat::Json,
                Format::Md => ReportFormat::Markdown,
            };
            emit(out.as_deref(), &render_report(&[row], format))?;
            Ok(0)
        }
        Command::Transform { grammar, out } => {
            let g = load_grammar(&grammar)?;
            emit(out.as_deref(), &serialize_grammar(&tau2_transform(&g)))?;
            Ok(0)
        }
        Command::Generate {
            grammar,
            count,
            seed,
            max_depth,
            max_len,
            max_attempts,
            out,
        } => {
            let g = load_grammar(&grammar)?;
            let cfg = GenConfig {
                seed,
                count,
                max_depth,
                max_len,
                max_attempts,
            };
            let sentences = generate_sentences(&g, &cfg).map_err(|e| match e {
                GenError::InvalidConfig(_) => Failure::usage(e.to_string()),
                _ => Failure(EXIT_GENERATE, e.to_string()),
            })?;
            emit(out.as_deref(), &render_sentences(&g, &sentences))?;
            Ok(0)
        }
        Command::CountParses { grammar, input } => {
            let g = load_grammar(&grammar)?;
            // A token outside the terminal alphabet cannot occur in any sentence.
            let count = match g.tokenize(&input) {
                Ok(w) => count_acyclic_parses(&g, &w).map_err(|e| Failure::usage(e.to_string()))?,
                Err(_) => 0u32.into(),
            };
            println!("{count}");
            Ok(0)
        }
    }
}

fn cmd_parse(
    g: &Grammar,
    algorithm: Algorithm,
    text: &str,
    dump_chart: bool,
    stats: bool,
) -> Result<u8, Failure> {
    let w = g
        .tokenize(text)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let fail = |e: suffix_earley::RecognizeError| Failure::usage(e.to_string());
    let (accepted, json, dump) = match algorithm {
        Algorithm::Earley => {
            let out = recognize_earley(g, &w).map_err(fail)?;
            (out.stats.accepted, out.stats.to_json(), out.chart.dump(g))
        }
        Algorithm::Tau2Earley => {
            let cover = tau2_transform(g);
            let out = recognize_earley(&cover, &w).map_err(fail)?;
            (
                out.stats.accepted,
                out.stats.to_json(),
                out.chart.dump(&cover),
            )
        }
        Algorithm::Variant => {
            let out = recognize_variant(g, &w).map_err(fail)?;
            let dump = out.forward.dump(g) + &out.backward.dump(g);
            (out.stats.accepted, out.stats.to_json(), dump)
        }
    };
    println!("{}", if accepted { "accept" } else { "reject" });
    if stats {
        println!("{json}");
    }
    if dump_chart {
        print!("{dump}");
    }
    Ok(if accepted { 0 } else { EXIT_REJECT })
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_grammar(path: &Path) -> Result<Grammar, Failure> {
    parse_grammar(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
