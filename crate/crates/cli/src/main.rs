//! `isocalc`: check, evaluate and format System I programs, query the
//! witness engine, and run the metatheory suite.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isocalc::eval::{evaluate, format_trace_in, EvalError, TraceFormat, DEFAULT_FUEL};
use isocalc::iso::{synth_chain, wrap_chain};
use isocalc::metatheory::{run_suite, GenConfig};
use isocalc::syntax::{
    elaborate_program, parse_context, parse_program, parse_type, print_program, print_term,
    print_type, print_witness_seq, Program,
};
use isocalc::{Term, Type};

const OK: u8 = 0;
const INPUT_ERROR: u8 = 1;
const SUITE_FAILED: u8 = 2;
const OUT_OF_FUEL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "isocalc",
    version,
    about = "A lambda calculus modulo type isomorphisms"
)]
struct Cli {
    /// Report errors on stderr as JSON objects (implied by `--json`).
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the type of a program.
    Check {
        file: PathBuf,
        /// Free variables, e.g. "x:T, f:T->T" (leftmost is outermost).
        #[arg(long)]
        context: Option<String>,
    },
    /// Evaluate a program and print its reduction trace.
    Eval {
        file: PathBuf,
        #[arg(long)]
        context: Option<String>,
        /// Step budget; 0 only classifies the term.
        #[arg(long, env = "ISOCALC_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Print the trace as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Show a witness chain between two types.
    Iso { a: String, b: String },
    /// Print a coercion from A to B applied to a placeholder variable.
    Synth { a: String, b: String },
    /// Run the preservation / progress / termination suite.
    Fuzz {
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum height of generated types.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 0.3)]
        iso_rate: f64,
        /// Generator budget for term size.
        #[arg(long, default_value_t = 6)]
        term_fuel: usize,
        #[arg(long, env = "ISOCALC_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Reprint a program in canonical form.
    Fmt { file: PathBuf },
}

struct Failure {
    code: &'static str,
    message: String,
    exit: u8,
}

impl Failure {
    fn input(code: &'static str, message: impl ToString) -> Failure {
        Failure {
            code,
            message: message.to_string(),
            exit: INPUT_ERROR,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own usage errors exit 2, which is reserved for suite failures.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { OK });
        }
    };
    let json_errors = cli.json_errors
        || matches!(
            cli.command,
            Command::Eval { json: true, .. } | Command::Fuzz { json: true, .. }
        );
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if json_errors {
                let obj = serde_json::json!({ "code": f.code, "message": f.message });
                eprintln!("{obj}");
            } else {
                eprintln!("error[{}]: {}", f.code, f.message);
            }
            ExitCode::from(f.exit)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Check { file, context } => {
            let program = load(&file, context.as_deref())?;
            let (_, ty) = elaborate(&program)?;
            println!("{}", print_type(&ty));
            Ok(OK)
        }
        Command::Eval {
            file,
            context,
            fuel,
            json,
        } => {
            let program = load(&file, context.as_deref())?;
            let (term, _) = elaborate(&program)?;
            let g = program.context();
            let mode = if json {
                TraceFormat::Json
            } else {
                TraceFormat::Text
            };
            match evaluate(&g, &term, fuel) {
                Ok(trace) => {
                    println!("{}", format_trace_in(&g, &program.names(), &trace, mode));
                    Ok(OK)
                }
                Err(e @ EvalError::FuelExhausted(_)) => Err(Failure {
                    code: e.code(),
                    message: e.to_string(),
                    exit: OUT_OF_FUEL,
                }),
                Err(e) => Err(Failure::input(e.code(), e)),
            }
        }
        Command::Iso { a, b } => {
            let (a, b) = (ty(&a)?, ty(&b)?);
            let chain = synth_chain(&a, &b);
            println!("isomorphic: yes");
            println!("chain: {}", show_chain(&chain.witnesses()));
            Ok(OK)
        }
        Command::Synth { a, b } => {
            let (a, b) = (ty(&a)?, ty(&b)?);
            let chain = synth_chain(&a, &b);
            // The skeleton coerces a lambda-bound placeholder of type A.
            let body = wrap_chain(&chain, Term::var(0));
            println!("{}", print_term(&Term::lam(a, body)));
            Ok(OK)
        }
        Command::Fuzz {
            count,
            seed,
            depth,
            iso_rate,
            term_fuel,
            fuel,
            json,
        } => {
            let config = GenConfig {
                seed,
                type_depth: depth,
                term_fuel,
                iso_rate,
                count,
                fuel,
            };
            config
                .validate()
                .map_err(|m| Failure::input("invalid-config", m))?;
            let report = run_suite(&config);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                );
            } else {
                print!("{}", report.to_text());
            }
            Ok(if report.is_clean() { OK } else { SUITE_FAILED })
        }
        Command::Fmt { file } => {
            let program = load(&file, None)?;
            let (term, _) = elaborate(&program)?;
            print!("{}", print_program(&program, &term));
            Ok(OK)
        }
    }
}

fn show_chain(ws: &[isocalc::Witness]) -> String {
    if ws.is_empty() {
        "(empty)".to_string()
    } else {
        print_witness_seq(ws)
    }
}

fn ty(text: &str) -> Result<Type, Failure> {
    parse_type(text).map_err(|e| Failure::input("syntax-error", e))
}

/// Reads a program; bindings from `--context` come before the file's own
/// `assume` declarations.
fn load(file: &PathBuf, context: Option<&str>) -> Result<Program, Failure> {
    let text = fs::read_to_string(file)
        .map_err(|e| Failure::input("io-error", format!("{}: {e}", file.display())))?;
    let mut program = parse_program(&text).map_err(|e| Failure::input("syntax-error", e))?;
    if let Some(ctx) = context {
        let mut bindings = parse_context(ctx).map_err(|e| Failure::input("syntax-error", e))?;
        bindings.append(&mut program.assumptions);
        program.assumptions = bindings;
    }
    Ok(program)
}

fn elaborate(program: &Program) -> Result<(Term, Type), Failure> {
    elaborate_program(program).map_err(|e| Failure::input(e.code(), e))
}
