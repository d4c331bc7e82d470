//! `opax`: evaluate bracket-notation terms from the command line.

mod selftest;

use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use opax::eval::{render_traced, scientific};
use opax::{parse, Error, ErrorKind, NumericContext};

#[derive(Parser, Debug)]
#[command(name = "opax", version, about = "Evaluate bracket-notation arithmetic terms")]
struct Cli {
    /// Output base.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..=36))]
    base: u32,

    /// Fractional digits to print.
    #[arg(long, global = true, default_value_t = 20)]
    digits: usize,

    /// Extra digits of accuracy computed before rendering.
    #[arg(long, global = true, default_value_t = 10)]
    guard: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Print the reduction chain before the value.
    #[arg(long, global = true)]
    trace: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one expression, or every line of a file.
    Eval {
        expr: Option<String>,
        #[arg(long, conflicts_with = "expr")]
        file: Option<PathBuf>,
    },
    /// Print the reduction chain and the value.
    Trace { expr: String },
    /// Print row K of the mediant table.
    Farey { k: u64 },
    /// Read expressions from stdin, one per line.
    Repl,
    /// Run the built-in identity and round-trip checks.
    Selftest,
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    input: &'a str,
    canonical: String,
    value: String,
    radius: String,
    digits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<JsonEvent>>,
}

#[derive(Serialize)]
struct JsonEvent {
    step: usize,
    path: String,
    before: String,
    after: String,
}

#[derive(Clone)]
struct Settings {
    base: u32,
    digits: usize,
    guard: usize,
    format: Format,
    trace: bool,
}

impl Settings {
    fn context(&self) -> Result<NumericContext, Error> {
        Ok(NumericContext::new(self.base, self.digits)?.with_guard(self.guard))
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Parse => 1,
        ErrorKind::Domain => 2,
        _ => 3,
    }
}

fn report(input: &str, e: &Error) -> u8 {
    eprintln!("{}: {e} (input: {input})", e.kind());
    exit_code(e.kind())
}

/// Evaluate one expression and write its output lines.
fn run_one(input: &str, s: &Settings, out: &mut impl Write) -> Result<(), Error> {
    let term = parse(input)?;
    let ctx = s.context()?;
    let (result, expansion) = render_traced(&term, &ctx)?;
    let events = result.trace.unwrap_or_default();
    let text = match s.format {
        Format::Plain => {
            let mut lines: Vec<String> = Vec::new();
            if s.trace {
                lines.extend(
                    events
                        .iter()
                        .take(events.len().saturating_sub(1))
                        .map(|e| e.after.clone()),
                );
            }
            lines.push(expansion.to_string());
            lines.join("\n")
        }
        Format::Json => {
            let trace = s.trace.then(|| {
                events
                    .iter()
                    .map(|e| JsonEvent {
                        step: e.step,
                        path: e.path.to_string(),
                        before: e.before.clone(),
                        after: e.after.clone(),
                    })
                    .collect()
            });
            let doc = JsonOutput {
                input,
                canonical: term.to_string(),
                value: expansion.to_string(),
                radius: scientific(&result.value.radius()),
                digits: s.digits,
                trace,
            };
            serde_json::to_string(&doc).expect("output is serializable")
        }
    };
    writeln!(out, "{text}").expect("stdout is writable");
    Ok(())
}

fn eval_lines(lines: impl Iterator<Item = String>, s: &Settings) -> u8 {
    let mut out = io::stdout().lock();
    let mut code = 0;
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Err(e) = run_one(line, s, &mut out) {
            code = code.max(report(line, &e));
        }
    }
    code
}

fn repl(mut s: Settings) -> u8 {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut out = io::stdout().lock();
    loop {
        if interactive {
            write!(out, "> ").and_then(|_| out.flush()).ok();
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) | Err(_) => return 0,
            Ok(_) => {}
        }
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(meta) = line.strip_prefix(':') {
            let mut words = meta.split_whitespace();
            match (words.next(), words.next().map(str::parse::<u64>)) {
                (Some("quit" | "q"), _) => return 0,
                (Some("base"), Some(Ok(b))) if (2..=36).contains(&b) => s.base = b as u32,
                (Some("digits"), Some(Ok(n))) => s.digits = n as usize,
                (Some("base"), None) => writeln!(out, "{}", s.base).unwrap_or(()),
                (Some("digits"), None) => writeln!(out, "{}", s.digits).unwrap_or(()),
                _ => eprintln!("unknown command `:{meta}` (try :base N, :digits N, :quit)"),
            }
            continue;
        }
        if let Err(e) = run_one(line, &s, &mut out) {
            report(line, &e);
        }
    }
}

fn farey(k: u64) -> u8 {
    match opax::farey::farey_row(k) {
        Ok(row) => {
            let items: Vec<String> = row.iter().map(ToString::to_string).collect();
            println!("{}", items.join(" "));
            0
        }
        Err(e) => report(&k.to_string(), &e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    let mut settings = Settings {
        base: cli.base,
        digits: cli.digits,
        guard: cli.guard,
        format: cli.format,
        trace: cli.trace,
    };
    let code = match cli.command {
        Command::Eval { expr: Some(expr), .. } => eval_lines(std::iter::once(expr), &settings),
        Command::Eval { file: Some(path), .. } => match std::fs::read_to_string(&path) {
            Ok(text) => eval_lines(text.lines().map(String::from), &settings),
            Err(e) => {
                eprintln!("cannot read {}: {e}", path.display());
                3
            }
        },
        Command::Eval { .. } => {
            eprintln!("eval needs an expression or --file");
            2
        }
        Command::Trace { expr } => {
            settings.trace = true;
            eval_lines(std::iter::once(expr), &settings)
        }
        Command::Farey { k } => farey(k),
        Command::Repl => repl(settings),
        Command::Selftest => selftest::run(),
    };
    ExitCode::from(code)
}
