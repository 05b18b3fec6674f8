mod commands;
mod config;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use bvkit::dsl::{evaluate, parse, Diagnostic, EvalOptions};
use clap::{Parser, Subcommand};

use commands::Outcome;
use config::Config;

/// Checks identities of graded brackets, master equations and star products
/// on scripts written in the bvkit language.
#[derive(Parser, Debug)]
#[command(name = "bvkit", version)]
struct Cli {
    /// Emit JSON reports instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Truncation order for parameters; the Taylor order for `conormal`.
    #[arg(long, global = true, value_name = "N")]
    order: Option<u32>,
    /// Highest bracket arity to probe.
    #[arg(long, global = true, value_name = "K")]
    cap: Option<usize>,
    /// Seed for randomized probes.
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// Defaults file with `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate bindings, `show` and `check` statements.
    Eval { file: String },
    /// Coordinate Jacobiators of the bivector `pi`.
    Jacobi { file: String },
    /// Maurer-Cartan equation [F, F] = 0 for `F` (or `pi`).
    Mc { file: String },
    /// Classical master equation for `S`.
    Cme { file: String },
    /// Quantum master equation for `S`, with volume `phi` if bound.
    Qme { file: String },
    /// L-infinity identities of the derived brackets of `F` (or `pi`).
    Linf { file: String },
    /// Low-arity derived brackets of `F` (or `pi`).
    Derived { file: String },
    /// Associativity of the Moyal product of the constant bivector `pi`.
    StarAssoc { file: String },
    /// Koszul model of `pi` with the declared constraints.
    Koszul { file: String },
    /// Derived brackets on the conormal bundle of the `split` coordinates.
    Conormal { file: String },
}

impl Command {
    fn file(&self) -> &str {
        match self {
            Command::Eval { file }
            | Command::Jacobi { file }
            | Command::Mc { file }
            | Command::Cme { file }
            | Command::Qme { file }
            | Command::Linf { file }
            | Command::Derived { file }
            | Command::StarAssoc { file }
            | Command::Koszul { file }
            | Command::Conormal { file } => file,
        }
    }
}

fn read_source(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("<stdin>: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("bvkit: {msg}");
    ExitCode::from(2)
}

fn report_diagnostics(file: &str, diags: &[Diagnostic], json: bool) -> ExitCode {
    if json {
        let v = serde_json::json!({ "diagnostics": diags });
        println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
    }
    for d in diags {
        eprintln!("{}", d.render(file));
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => return usage_error(&e),
        },
        None => Config::default(),
    };
    if let Some(c) = cli.cap {
        cfg.cap = c;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let conormal = matches!(cli.command, Command::Conormal { .. });
    let taylor = if conormal { cli.order.unwrap_or(cfg.taylor) } else { cfg.taylor };
    if !conormal && cli.order.is_some() {
        cfg.order = cli.order;
    }

    let file = cli.command.file().to_string();
    let label = if file == "-" { "<stdin>" } else { file.as_str() };
    let src = match read_source(&file) {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let script = match parse(&src) {
        Ok(s) => s,
        Err(d) => return report_diagnostics(label, &d, cli.json),
    };
    let env = match evaluate(&script, EvalOptions { order: cfg.order }) {
        Ok(e) => e,
        Err(d) => return report_diagnostics(label, &d, cli.json),
    };

    let result = match &cli.command {
        Command::Eval { .. } => commands::eval(&env),
        Command::Jacobi { .. } => commands::jacobi(&env),
        Command::Mc { .. } => commands::mc(&env),
        Command::Cme { .. } => commands::cme(&env),
        Command::Qme { .. } => commands::qme(&env),
        Command::Linf { .. } => commands::linf(&env, &cfg),
        Command::Derived { .. } => commands::derived(&env, &cfg),
        Command::StarAssoc { .. } => commands::star_assoc(&env, &cfg),
        Command::Koszul { .. } => commands::koszul(&env),
        Command::Conormal { .. } => commands::conormal(&env, &cfg, taylor),
    };
    match result {
        Ok(Outcome { pass, text, json }) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json).expect("serializable"));
            } else {
                print!("{text}");
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => usage_error(&format!("{label}: {e}")),
    }
}
