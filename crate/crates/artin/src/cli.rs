//! Command-line front end.
//!
//! Exit codes follow decision-tool conventions: 0 for success / "true"
//! answers, 1 for mathematically negative answers (not geodesic, not equal,
//! invalid presentation), 2 for usage and I/O errors.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::oracle::{self, BallConfig};
use crate::presentation::Presentation;
use crate::reducer::{self, DEFAULT_CLOSURE_CAP};
use crate::rrs::ReductionTrace;
use crate::words::Word;

#[derive(Parser, Debug)]
#[command(
    name = "artin",
    about = "Geodesics and the word problem in 3-free Artin groups",
    version
)]
struct Cli {
    /// Emit machine-readable JSON (one object per input word).
    #[arg(long, global = true)]
    json: bool,
    /// Re-check internal guarantees on every reduction step.
    #[arg(long, global = true)]
    verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct WordsInput {
    presentation: PathBuf,
    /// Words in the token grammar; read one per stdin line when omitted.
    words: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a presentation file.
    Validate { presentation: PathBuf },
    /// Rewrite words to equivalent geodesics.
    Reduce(WordsInput),
    /// Decide whether words are geodesic.
    Geodesic(WordsInput),
    /// Decide whether two words represent the same element.
    Equal {
        presentation: PathBuf,
        left: String,
        right: String,
    },
    /// Enumerate the geodesic words equivalent to one geodesic word.
    Closure {
        presentation: PathBuf,
        word: String,
        /// State cap for the closure search.
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
    },
    /// Reduce one word and print the replayable rewrite trace as JSON.
    Trace { presentation: PathBuf, word: String },
    /// Cross-check reductions against the bounded rewrite-ball search.
    OracleCheck {
        #[command(flatten)]
        input: WordsInput,
        /// Extra length the ball search may climb above the input.
        #[arg(long, default_value_t = 2)]
        slack: u32,
        /// Node cap for the ball search.
        #[arg(long, default_value_t = BallConfig::default().node_cap)]
        cap: usize,
    },
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Validate { presentation } => validate(&presentation, cli.json),
        Command::Reduce(input) => {
            let p = load(&input.presentation)?;
            for_words(&p, input.words, |p, text, word| {
                reduce_one(p, text, word, cli.json, cli.verify)
            })
        }
        Command::Geodesic(input) => {
            let p = load(&input.presentation)?;
            for_words(&p, input.words, |p, text, word| {
                let geodesic = reducer::is_geodesic(p, word);
                if cli.json {
                    println!(
                        "{}",
                        serde_json::json!({"input": text, "geodesic": geodesic})
                    );
                } else {
                    println!("{}", if geodesic { "geodesic" } else { "not geodesic" });
                }
                Ok(geodesic)
            })
        }
        Command::Equal {
            presentation,
            left,
            right,
        } => {
            let p = load(&presentation)?;
            let lhs = parse_word(&p, &left)?;
            let rhs = parse_word(&p, &right)?;
            let equal = reducer::equal(&p, &lhs, &rhs);
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({"left": left, "right": right, "equal": equal})
                );
            } else {
                println!("{}", if equal { "equal" } else { "not equal" });
            }
            Ok(if equal { 0 } else { 1 })
        }
        Command::Closure {
            presentation,
            word,
            cap,
        } => {
            let p = load(&presentation)?;
            let parsed = parse_word(&p, &word)?;
            let (geodesic, _) = reducer::reduce(&p, &parsed);
            let class = reducer::geodesic_closure(&p, &geodesic, cap);
            if cli.json {
                let members: Vec<String> = class
                    .members
                    .iter()
                    .map(|m| m.display(&p).to_string())
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "representative": class.representative.display(&p).to_string(),
                        "members": members,
                        "moves": class.move_edges.len(),
                        "complete": class.complete,
                    })
                );
            } else {
                println!(
                    "{} geodesic representative(s){}",
                    class.members.len(),
                    if class.complete {
                        ""
                    } else {
                        " (cap reached, incomplete)"
                    }
                );
                for member in &class.members {
                    println!("{}", member.display(&p));
                }
            }
            Ok(if class.complete { 0 } else { 1 })
        }
        Command::Trace { presentation, word } => {
            let p = load(&presentation)?;
            let parsed = parse_word(&p, &word)?;
            let (reduced, trace) = run_reduce(&p, &parsed, cli.verify)?;
            let mut json = trace.to_json(&p);
            json["input"] = serde_json::json!(parsed.display(&p).to_string());
            json["result"] = serde_json::json!(reduced.display(&p).to_string());
            println!("{json}");
            Ok(0)
        }
        Command::OracleCheck { input, slack, cap } => {
            let p = load(&input.presentation)?;
            let cfg = BallConfig {
                slack,
                node_cap: cap,
            };
            for_words(&p, input.words, |p, text, word| {
                let (reduced, _) = run_reduce(p, word, cli.verify)?;
                let ball = oracle::bfs_min_length(p, word, &cfg);
                let consistent =
                    reduced.len() <= ball.min_len && (!ball.exhausted || reduced.len() == ball.min_len);
                if cli.json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "input": text,
                            "reduced": reduced.display(p).to_string(),
                            "reduced_len": reduced.len(),
                            "oracle_min": ball.min_len,
                            "exhausted": ball.exhausted,
                            "explored": ball.explored,
                            "consistent": consistent,
                        })
                    );
                } else {
                    println!(
                        "reduced {} | oracle min {}{} | {}",
                        reduced.len(),
                        ball.min_len,
                        if ball.exhausted { " (exhausted)" } else { "" },
                        if consistent { "consistent" } else { "INCONSISTENT" }
                    );
                }
                Ok(consistent)
            })
        }
    }
}

fn validate(path: &Path, json: bool) -> Result<i32, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    match Presentation::parse(&text) {
        Ok(p) => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "valid": true,
                        "generators": p.generator_count(),
                        "finite_relations": p.finite_pairs().len(),
                    })
                );
            } else {
                println!(
                    "ok: {} generators, {} finite relations",
                    p.generator_count(),
                    p.finite_pairs().len()
                );
            }
            Ok(0)
        }
        Err(err) => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({"valid": false, "error": err.to_string()})
                );
            } else {
                println!("invalid: {err}");
            }
            Ok(1)
        }
    }
}

fn load(path: &Path) -> Result<Presentation, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Presentation::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_word(p: &Presentation, text: &str) -> Result<Word, String> {
    Word::parse(p, text).map_err(|e| format!("word `{text}`: {e}"))
}

fn run_reduce(
    p: &Presentation,
    word: &Word,
    verify: bool,
) -> Result<(Word, ReductionTrace), String> {
    if verify {
        reducer::reduce_verified(p, word)
            .map(|(w, t, _)| (w, t))
            .map_err(|e| format!("internal contract violation: {e}"))
    } else {
        Ok(reducer::reduce(p, word))
    }
}

fn reduce_one(
    p: &Presentation,
    text: &str,
    word: &Word,
    json: bool,
    verify: bool,
) -> Result<bool, String> {
    let (reduced, trace) = run_reduce(p, word, verify)?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "input": text,
                "result": reduced.display(p).to_string(),
                "length": reduced.len(),
                "trace": trace.to_json(p),
            })
        );
    } else {
        println!("{}", reduced.display(p));
    }
    Ok(true)
}

/// Runs `f` over argv words or stdin lines, preserving input order. The exit
/// code is 0 when every answer was positive, 1 otherwise.
fn for_words<F>(p: &Presentation, words: Vec<String>, mut f: F) -> Result<i32, String>
where
    F: FnMut(&Presentation, &str, &Word) -> Result<bool, String>,
{
    let inputs = if words.is_empty() {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| e.to_string())?;
        buf.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        words
    };
    let mut all_positive = true;
    for text in &inputs {
        let word = parse_word(p, text)?;
        all_positive &= f(p, text, &word)?;
    }
    Ok(if all_positive { 0 } else { 1 })
}
