use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nomfix_cli::{
    cmd_check, cmd_demo, cmd_eval, cmd_suite, cmd_translate, cmd_validate, cmd_validity, cmd_verify, load_signature,
    Report, Settings, TheoryChoice,
};

#[derive(Parser)]
#[command(name = "nomfix", version, about = "Nominal terms with fixed-point and freshness constraints")]
struct Cli {
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Print the derivation tree of a derivable judgement
    #[arg(long, global = true)]
    show_proof: bool,
    /// Signature file with `symbol/arity [comm]` lines
    #[arg(long, global = true, value_name = "FILE")]
    sig: Option<String>,
    /// Equational theory for α-equality: core or c
    #[arg(long, global = true, default_value = "core")]
    theory: String,
    /// Largest permutation group carrier the group-generated rule enumerates
    #[arg(long, global = true, value_name = "N")]
    carrier_bound: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a judgement: `check [SYSTEM] JUDGEMENT`
    Check {
        /// fresh, fix, fix-gvar or strong-fix; detected from the text when omitted
        #[arg(long)]
        system: Option<String>,
        #[arg(num_args = 1..=2, value_name = "[SYSTEM] JUDGEMENT")]
        args: Vec<String>,
    },
    /// Translate a context or judgement between the freshness and fixed-point systems
    Translate {
        /// fresh-to-fix or fix-to-fresh
        direction: String,
        text: String,
    },
    /// Interpret a term: `eval MODEL VALUATION TERM`
    Eval {
        #[arg(long)]
        model: Option<String>,
        #[arg(num_args = 2..=3, value_name = "[MODEL] VALUATION TERM")]
        args: Vec<String>,
    },
    /// Check a judgement in a model: `validity MODEL VALUATION JUDGEMENT`
    Validity {
        #[arg(long)]
        model: Option<String>,
        #[arg(num_args = 2..=3, value_name = "[MODEL] VALUATION JUDGEMENT")]
        args: Vec<String>,
    },
    /// Replay a packaged scenario
    Demo { name: String },
    /// Check a JSON proof tree
    Verify {
        #[arg(value_name = "PROOF.json")]
        proof: String,
        /// fix or fix-gvar
        #[arg(long)]
        system: Option<String>,
    },
    /// Validate a candidate solution of a unification problem
    Validate {
        problem: String,
        candidate: String,
        /// Ground substitution to check against a fix-pair candidate
        #[arg(long, value_name = "SUBST")]
        instance: Option<String>,
    },
    /// Run a randomized property suite
    Suite {
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Splits `[first] rest...` where `first` may instead come from a flag.
fn leading(flag: Option<String>, mut args: Vec<String>, full: usize) -> Result<(Option<String>, Vec<String>), String> {
    match (flag, args.len() == full) {
        (Some(_), true) => Err("the leading argument was given both positionally and as a flag".into()),
        (Some(f), false) => Ok((Some(f), args)),
        (None, true) => {
            let first = args.remove(0);
            Ok((Some(first), args))
        }
        (None, false) => Ok((None, args)),
    }
}

fn read(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
}

fn run(cli: Cli) -> Report {
    let mut settings = Settings::default();
    if let Some(path) = &cli.sig {
        match read(path).and_then(|t| load_signature(&t)) {
            Ok(sig) => settings.signature = sig,
            Err(e) => return Report::error("signature", "input", e),
        }
    }
    match TheoryChoice::parse(&cli.theory) {
        Some(t) => settings.theory = t,
        None => return Report::error("theory", &cli.theory, "--theory expects core or c"),
    }
    if let Some(b) = cli.carrier_bound {
        settings.carrier_bound = b;
    }
    match cli.command {
        Command::Check { system, args } => match leading(system, args, 2) {
            Ok((system, args)) => cmd_check(system.as_deref(), &args[0], &settings),
            Err(e) => Report::error("check", "input", e),
        },
        Command::Translate { direction, text } => cmd_translate(&direction, &text, &settings),
        Command::Eval { model, args } => match leading(model, args, 3) {
            Ok((Some(m), args)) if args.len() == 2 => cmd_eval(&m, &args[0], &args[1], &settings),
            Ok(_) => Report::error("eval", "input", "expected MODEL VALUATION TERM"),
            Err(e) => Report::error("eval", "input", e),
        },
        Command::Validity { model, args } => match leading(model, args, 3) {
            Ok((Some(m), args)) if args.len() == 2 => cmd_validity(&m, &args[0], &args[1], &settings),
            Ok(_) => Report::error("validity", "input", "expected MODEL VALUATION JUDGEMENT"),
            Err(e) => Report::error("validity", "input", e),
        },
        Command::Demo { name } => cmd_demo(&name),
        Command::Verify { proof, system } => match read(&proof) {
            Ok(text) => cmd_verify(&text, system.as_deref(), &settings),
            Err(e) => Report::error("verify", "input", e),
        },
        Command::Validate {
            problem,
            candidate,
            instance,
        } => match (read(&problem), read(&candidate)) {
            (Ok(p), Ok(c)) => cmd_validate(&p, &c, instance.as_deref(), &settings),
            (Err(e), _) | (_, Err(e)) => Report::error("validate", "input", e),
        },
        Command::Suite { name, seed } => cmd_suite(&name, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    let show_proof = cli.show_proof;
    let report = run(cli);
    if json {
        // a closed pipe (`| head`) is not an error worth a panic
        let _ = writeln!(io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    } else if report.exit_code == 2 {
        for d in &report.diagnostics {
            eprintln!("error: {d}");
        }
    } else {
        let _ = write!(io::stdout(), "{}", report.render(show_proof));
    }
    ExitCode::from(report.exit_code as u8)
}
