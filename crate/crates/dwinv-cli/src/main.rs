//! `dwinv`: Dijkgraaf-Witten link invariants, Montesinos knots and dihedral colorings from the
//! command line.

mod commands;
mod output;

use clap::{ArgGroup, Parser, Subcommand};
use commands::{ColoringArgs, Ctx};
use dwinv::Error;
use output::Format;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "dwinv", version, about = "Dijkgraaf-Witten invariants of links via the quantum double")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Seed for the randomized intertwiner solves and sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Comparison tolerance.
    #[arg(long, global = true, env = "DWINV_TOL", default_value_t = 1e-6, value_parser = positive)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the simple objects of `D(G)`.
    Simples { group: String },
    /// Invariant of a Montesinos knot or link `M(p1/q1,...,pm/qm)`.
    Montesinos {
        group: String,
        /// Comma separated fractions, e.g. `1/1,1/1,1/1`.
        #[arg(allow_hyphen_values = true)]
        fractions: String,
        /// Compare with Wirtinger homomorphism counts.
        #[arg(long)]
        oracle: bool,
        /// Only the blackboard-framed vector.
        #[arg(long, conflicts_with = "corrected")]
        raw: bool,
        /// Only the framing-corrected vector.
        #[arg(long)]
        corrected: bool,
    },
    /// Fox n-colorings by the dihedral formula, the DW path and the Fox matrix.
    #[command(group(ArgGroup::new("input").required(true).args(["fractions", "diagram"])))]
    Colorings {
        /// Odd n, comma separated for several.
        #[arg(value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, allow_hyphen_values = true)]
        fractions: Option<String>,
        #[arg(long)]
        diagram: Option<PathBuf>,
        #[arg(long)]
        formula: bool,
        #[arg(long)]
        dw: bool,
        #[arg(long)]
        oracle: bool,
    },
    /// Evaluate a tangle expression.
    Tangle {
        expr: String,
        #[arg(long)]
        group: String,
        /// One simple index per component.
        #[arg(long, value_delimiter = ',')]
        colors: Option<Vec<usize>>,
    },
    /// Count homomorphisms from a link group.
    Homcount {
        diagram: PathBuf,
        #[arg(long)]
        group: String,
        /// `x:y` per component (meridian and longitude images), or `-` for none.
        #[arg(long = "constraint")]
        constraints: Vec<String>,
        /// Use blackboard instead of Seifert longitudes.
        #[arg(long)]
        blackboard: bool,
    },
    /// Run the built-in consistency checks.
    Selftest,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::GroupSpec(_)
            | Error::Table(_)
            | Error::Parse { .. }
            | Error::Arity { .. }
            | Error::Fraction(_)
            | Error::NotKnot(_)
            | Error::Diagram(_)
            | Error::Coloring(_)
            | Error::SearchGuard(_)
            | Error::Io(_)
    )
}

fn run(cli: &Cli) -> dwinv::Result<bool> {
    let ctx = Ctx { seed: cli.seed, tol: cli.tol };
    let (report, ok) = match &cli.command {
        Command::Simples { group } => commands::simples(&ctx, group)?,
        Command::Montesinos { group, fractions, oracle, raw, corrected } => {
            commands::montesinos(&ctx, group, fractions, *oracle, !corrected, !raw)?
        }
        Command::Colorings { n, fractions, diagram, formula, dw, oracle } => {
            let a = ColoringArgs { n, fractions: fractions.as_deref(), diagram: diagram.as_deref(), formula: *formula, dw: *dw, oracle: *oracle };
            commands::colorings(&ctx, &a)?
        }
        Command::Tangle { expr, group, colors } => commands::tangle(&ctx, expr, group, colors.as_deref())?,
        Command::Homcount { diagram, group, constraints, blackboard } => commands::homcount(&ctx, diagram, group, constraints, *blackboard)?,
        Command::Selftest => {
            let (rep, report) = commands::selftest(&ctx)?;
            if cli.format == Format::Json {
                let mut out = std::io::stdout().lock();
                serde_json::to_writer_pretty(&mut out, &rep).map_err(|e| Error::Io(e.into()))?;
                writeln!(out)?;
                return Ok(rep.pass);
            }
            (report, rep.pass)
        }
    };
    report.render(cli.format, &mut std::io::stdout().lock())?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if usage_error(&e) { 2 } else { 1 })
        }
    }
}
