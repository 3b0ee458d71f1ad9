mod commands;
mod report;

use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser)]
#[command(name = "ivpoly", version, about = "Integer-valued polynomials over Z and its extensions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for randomized checks.
    #[arg(long, default_value_t = ivpoly::verify::DEFAULT_SEED, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Options that pick the ring or the membership target when no explicit
/// target is given.
#[derive(clap::Args, Clone, Default)]
pub struct Context {
    /// Modulus m for Int(Z; mZ).
    #[arg(long)]
    pub modulus: Option<String>,
    /// Multiset S for Int(Z; S), e.g. "[2,2]".
    #[arg(long)]
    pub multiset: Option<String>,
    /// Relation vector of Z[rho_1..rho_n], e.g. "[0,2]".
    #[arg(long)]
    pub relations: Option<String>,
    /// Idealization module: Z(+)Z^n, Z(+)Z/m or Z(+)Q.
    #[arg(long)]
    pub module: Option<String>,
    /// Derivative order k.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of a polynomial.
    Member {
        expr: String,
        /// int | int-k:<k> | int-mod:<m> | int-multiset:<list> | ext:<relations> | idealization:<module>,<k>
        target: Option<String>,
        #[command(flatten)]
        ctx: Context,
    },
    /// HNF basis of a degree-bounded slice.
    Basis {
        /// mod:<m> | diff:<k>
        selector: Option<String>,
        #[arg(short = 'D', long, default_value_t = 8)]
        degree: usize,
        /// Compare with the conjectured generators of Int(Z; 4Z).
        #[arg(long)]
        conjecture: bool,
        #[command(flatten)]
        ctx: Context,
    },
    /// Evaluate a polynomial at a point of Q, Z[rho] or an idealization.
    Eval {
        expr: String,
        point: String,
        #[command(flatten)]
        ctx: Context,
    },
    /// Split a polynomial into its components and test each.
    Decompose {
        expr: String,
        #[command(flatten)]
        ctx: Context,
    },
    /// Vanishing ideal of a finite ring such as Z/4 or Z/2 x Z/3.
    Vanish {
        ring: String,
        #[arg(short = 'D', long)]
        degree: Option<usize>,
    },
    /// Run acceptance checks.
    Verify {
        /// all | section2 | section3 | section4 | section5
        #[arg(default_value = "all")]
        suite: String,
    },
}

/// Outcome of a command, mapped to the exit code.
pub enum Outcome {
    Yes,
    No,
}

pub enum Failure {
    Usage(String),
    Internal(String),
}

impl From<ivpoly::Error> for Failure {
    fn from(e: ivpoly::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("IVPOLY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn run(cli: &Cli, report: &mut Report) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Member { expr, target, ctx } => commands::member(report, expr, target.as_deref(), ctx),
        Command::Basis {
            selector,
            degree,
            conjecture,
            ctx,
        } => commands::basis(report, selector.as_deref(), *degree, *conjecture, ctx),
        Command::Eval { expr, point, ctx } => commands::eval(report, expr, point, ctx),
        Command::Decompose { expr, ctx } => commands::decompose(report, expr, ctx),
        Command::Vanish { ring, degree } => commands::vanish(report, ring, *degree),
        Command::Verify { suite } => commands::verify(report, suite, cli.seed),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Member { .. } => "member",
        Command::Basis { .. } => "basis",
        Command::Eval { .. } => "eval",
        Command::Decompose { .. } => "decompose",
        Command::Vanish { .. } => "vanish",
        Command::Verify { .. } => "verify",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let start = Instant::now();
    let mut report = Report::new(command_name(&cli.command));
    panic::set_hook(Box::new(|_| {}));
    let outcome = panic::catch_unwind(panic::AssertUnwindSafe(|| run(&cli, &mut report)))
        .unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(Failure::Internal(msg))
        });
    report.duration = start.elapsed().as_secs_f64();
    match outcome {
        Ok(o) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            match o {
                Outcome::Yes => ExitCode::SUCCESS,
                Outcome::No => ExitCode::from(1),
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
