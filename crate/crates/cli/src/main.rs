//! `bgg`: characters, decompositions, functor tables and verification suites
//! for the integral blocks of category O in ranks one and two.
//!
//! Exit codes: 0 success, 1 verification mismatch or failed computation,
//! 2 usage error.

use std::process::ExitCode;

use bgg_core::charlat::Region;
use bgg_core::functors::{render_simples, FunctorResult};
use bgg_core::label::{parse_expr, parse_label};
use bgg_core::table::{Functor, TableSpec};
use bgg_core::verify::run_suite;
use bgg_core::{CategoryO, RootType};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

#[derive(Parser)]
#[command(
    name = "bgg",
    version,
    about = "Exact computations in the BGG category O"
)]
struct Cli {
    /// Root system type: a1, a1a1 or a2.
    #[arg(long = "type", global = true, default_value = "a2")]
    root_type: RootType,

    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Md,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplication table of a functor (default: all simples of the block of 0).
    Table {
        #[arg(long, default_value = "g")]
        functor: Functor,
        /// Row label; repeat for several rows.
        #[arg(long = "row")]
        rows: Vec<String>,
        /// Column label; repeat for several columns.
        #[arg(long = "column")]
        columns: Vec<String>,
    },
    /// Weight multiplicities of a label or expression on a box below its ceilings.
    Char {
        expr: String,
        /// Depth of the box below the ceilings, per simple root.
        #[arg(long, default_value_t = 4)]
        region_height: i64,
    },
    /// Composition multiplicities of an expression in one block.
    Decompose {
        expr: String,
        /// A weight of the block, as comma-separated coordinates.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        block: String,
    },
    /// Apply a functor: G_M N for characters, F_M N and H_M N for flagged N.
    Apply {
        #[arg(long, default_value = "g")]
        functor: Functor,
        m: String,
        n: String,
    },
    /// Run a verification suite: paper-tables, figure1, fnd, identity, dominance, all.
    Verify { suite: String },
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Mismatch(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn parse_block(o: &CategoryO, text: &str) -> Result<bgg_core::Weight, Failure> {
    let rs = o.root_system();
    if text.trim() == "0" {
        return Ok(rs.zero());
    }
    let coords = text
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("malformed block weight `{text}`: {e}")))?;
    rs.weight(&coords).map_err(usage)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let o = CategoryO::new(cli.root_type);
    let rs = o.root_system().clone();
    match cli.command {
        Command::Table {
            functor,
            rows,
            columns,
        } => {
            let mut spec = TableSpec::simples(&o, functor);
            if !rows.is_empty() || !columns.is_empty() {
                let default: Vec<String> = spec
                    .rows
                    .iter()
                    .map(|l| bgg_core::label::label_name(&rs, l))
                    .collect();
                let rows = if rows.is_empty() {
                    default.clone()
                } else {
                    rows
                };
                let columns = if columns.is_empty() { default } else { columns };
                let r: Vec<&str> = rows.iter().map(String::as_str).collect();
                let c: Vec<&str> = columns.iter().map(String::as_str).collect();
                spec = TableSpec::parse(&o, functor, &r, &c).map_err(usage)?;
            }
            let table = o.mult_table(&spec)?;
            match cli.format {
                Format::Md => print!("{}", table.to_markdown(&o)),
                Format::Json => print_json(&table.to_json(&o)),
            }
        }
        Command::Char {
            expr,
            region_height,
        } => {
            if region_height < 0 {
                return Err(usage("--region-height must be non-negative"));
            }
            let e = parse_expr(&rs, &expr).map_err(usage)?;
            let c = e.character(&o).map_err(usage)?;
            let region = Region::below(&rs, c.ceilings().to_vec(), region_height);
            let dump = c.dump(&region);
            match cli.format {
                Format::Json => print_json(&serde_json::to_value(&dump).expect("serializable")),
                Format::Md => {
                    println!("| weight | multiplicity |");
                    println!("|---|---|");
                    for (w, m) in &dump.entries {
                        println!("| {w} | {m} |");
                    }
                }
            }
        }
        Command::Decompose { expr, block } => {
            let e = parse_expr(&rs, &expr).map_err(usage)?;
            let c = e.character(&o).map_err(usage)?;
            let class = o.linkage_class(parse_block(&o, &block)?);
            let d = o.block_project(&c, &class)?;
            match cli.format {
                Format::Json => print_json(&d.to_json(&rs)),
                Format::Md => println!("{}", render_simples(&rs, &d)),
            }
        }
        Command::Apply { functor, m, n } => {
            let mc = parse_expr(&rs, &m)
                .map_err(usage)?
                .character(&o)
                .map_err(usage)?;
            let result = match functor {
                Functor::G => {
                    let nc = parse_expr(&rs, &n)
                        .map_err(usage)?
                        .character(&o)
                        .map_err(usage)?;
                    FunctorResult::Simples(o.apply_g(&mc, &nc)?)
                }
                Functor::F | Functor::H => {
                    let label = parse_label(&rs, &n).map_err(usage)?;
                    let fp = o.presentation_of(&label).map_err(usage)?;
                    if functor == Functor::H {
                        o.apply_h(&mc, &fp)?
                    } else {
                        let f = o.apply_f(&mc, &fp)?;
                        if f.is_zero() {
                            FunctorResult::Zero
                        } else {
                            FunctorResult::DeltaFlag(f)
                        }
                    }
                }
            };
            match cli.format {
                Format::Json => print_json(&result.to_json(&rs)),
                Format::Md => println!("{}", result.render(&rs)),
            }
        }
        Command::Verify { suite } => {
            let report = run_suite(&o, &suite).map_err(|e| match e {
                bgg_core::verify::VerifyError::Table(t) => Failure::Mismatch(t.to_string()),
                other => usage(other),
            })?;
            match cli.format {
                Format::Json => print_json(&report.to_json()),
                Format::Md => print!("{}", report.to_text()),
            }
            if !report.passed() {
                return Err(Failure::Mismatch(format!("suite `{suite}` failed")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
