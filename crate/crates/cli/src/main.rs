//! `scl` computes the stable commutator length of a free-group word as an
//! exact rational, with optional certificate checks and exports.
//!
//! Exit codes: 0 success (an infinite scl is a success), 1 bad input,
//! 2 a resource cap was hit, 3 an internal invariant or verification
//! failure. Output is deterministic: the same invocation produces
//! byte-identical bytes.

use std::fmt::Write as _;
use std::io::BufRead;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use scl_core::sclcore::SclValue;
use scl_core::surface::OracleOptions;
use scl_core::{Error, ErrorCategory, SclOptions, SclResult};

#[derive(Parser, Debug)]
#[command(
    name = "scl",
    about = "Exact stable commutator length for free-group words",
    long_about = "Computes scl of a word in free-group generators as an exact rational \
                  number via turn-graph linear programming. Lowercase letters are \
                  generators, uppercase letters their inverses: abAB is the commutator \
                  [a, b]. Pass '-' to read one word per line from standard input."
)]
struct Args {
    /// Word over [a-zA-Z], or '-' for batch mode on standard input
    word: String,

    /// Print the result as a single JSON object per word
    #[arg(long)]
    json: bool,

    /// Write the certificate surface as JSON to this path
    #[arg(long, value_name = "PATH")]
    surface: Option<PathBuf>,

    /// Write the turn graph in DOT format to this path
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,

    /// Fail (exit 2) if the turn graph has more embedded circuits than this
    #[arg(long, value_name = "INT", default_value_t = 1_000_000)]
    max_circuits: usize,

    /// Also run the brute-force surface oracle up to this degree and
    /// report both values
    #[arg(long, value_name = "INT")]
    oracle: Option<u64>,

    /// Re-derive the certificate surface and check every identity before
    /// printing
    #[arg(long)]
    verify: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{}", e);
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e);
            return ExitCode::from(1);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(error: &Error) -> u8 {
    match error.category() {
        ErrorCategory::Input => 1,
        ErrorCategory::Resource => 2,
        ErrorCategory::Internal => 3,
    }
}

fn run(args: &Args) -> Result<(), Error> {
    if args.max_circuits < 1 {
        return Err(Error::InvalidArgument("--max-circuits must be at least 1".into()));
    }
    if args.oracle == Some(0) {
        return Err(Error::InvalidArgument("--oracle must be at least 1".into()));
    }

    if args.word == "-" {
        if args.surface.is_some() || args.dot.is_some() {
            return Err(Error::InvalidArgument(
                "--surface and --dot are not available in batch mode".into(),
            ));
        }
        let stdin = std::io::stdin();
        let mut first_failure: Option<Error> = None;
        for line in stdin.lock().lines() {
            let line = line.map_err(|e| Error::InvalidArgument(format!("stdin: {}", e)))?;
            let word = line.trim();
            if word.is_empty() {
                continue;
            }
            match run_word(word, args) {
                Ok(output) => print!("{}", output),
                Err(e) => {
                    eprintln!("error({}): {}", word, e);
                    if first_failure.is_none() {
                        first_failure = Some(e);
                    }
                }
            }
        }
        match first_failure {
            None => Ok(()),
            Some(e) => Err(e),
        }
    } else {
        let output = run_word(&args.word, args)?;
        print!("{}", output);
        Ok(())
    }
}

/// Compute one word and return its buffered stdout text. File writes and
/// verification happen before anything is printed.
fn run_word(text: &str, args: &Args) -> Result<String, Error> {
    let options = SclOptions {
        max_circuits: args.max_circuits,
    };
    let result = scl_core::compute_scl(text, &options)?;

    if let Some(path) = &args.dot {
        let graph = scl_core::build_turn_graph(&result.word);
        write_file(path, &scl_core::export_dot(&graph))?;
    }
    if let Some(path) = &args.surface {
        match surface_json(&result)? {
            Some(json) => write_file(path, &json)?,
            None => eprintln!("note: no surface to write, scl({}) is infinite", result.word),
        }
    }

    let mut verified = false;
    if args.verify && result.is_finite() {
        scl_core::verify_certificate(&result)?;
        verified = true;
    }

    let oracle = match (args.oracle, result.is_finite()) {
        (Some(n_max), true) => {
            let bound =
                scl_core::brute_force_scl_bound(&result.word, n_max, &OracleOptions::default())?;
            let lp = result.scl.as_finite().expect("finite here");
            if lp > &bound {
                return Err(Error::Internal(format!(
                    "LP value {} exceeds the degree-{} oracle bound {}",
                    lp, n_max, bound
                )));
            }
            Some((n_max, bound))
        }
        _ => None,
    };

    let mut out = String::new();
    if args.json {
        writeln!(out, "{}", result.to_json()?).unwrap();
        if verified {
            eprintln!("verify({}): ok", result.word);
        }
        if let Some((n_max, bound)) = &oracle {
            eprintln!(
                "oracle({}): scl <= {} at degree <= {}",
                result.word, bound, n_max
            );
        }
    } else {
        match &result.scl {
            SclValue::Finite(value) => writeln!(
                out,
                "scl({}) = {} (n = {}, circuits = {})",
                result.word, value, result.n, result.lp_variables
            )
            .unwrap(),
            SclValue::Infinite => writeln!(out, "scl({}) = infinity", result.word).unwrap(),
        }
        if verified {
            writeln!(out, "verify: ok").unwrap();
        }
        if let Some((n_max, bound)) = &oracle {
            writeln!(
                out,
                "oracle(n <= {}) = {}; lp <= oracle: true",
                n_max, bound
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn surface_json(result: &SclResult) -> Result<Option<String>, Error> {
    if !result.is_finite() {
        return Ok(None);
    }
    let graph = scl_core::build_turn_graph(&result.word);
    let surface = scl_core::build_surface(
        &result.word,
        &graph,
        &result.circuits,
        &result.integer_weights,
    )?;
    Ok(Some(surface.to_json()?))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {}", path.display(), e)))
}
