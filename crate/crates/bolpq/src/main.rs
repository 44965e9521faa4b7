use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bolpq::{classify, count_range, cross_verify, Error, Fp2, LoopTable, UpTo, VerifyOptions};

/// Classify Bol and Bruck loops of order p*q (p > q odd primes), build and
/// check their multiplication tables, and cross-verify the classification
/// with brute-force oracles.
///
/// Exit codes: 0 success, 1 property or verification failure, 2 invalid input.
#[derive(Parser)]
#[command(name = "bolpq", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the Bol loops of order p*q up to isomorphism or isotopism.
    Classify(ClassifyArgs),
    /// Build the multiplication table of the loop with parameter gamma.
    Table(TableArgs),
    /// Check loop-theoretic properties of a table file.
    Check(CheckArgs),
    /// Sweep class counts over all primes q < p <= pmax.
    Count(CountArgs),
    /// Cross-verify orbit, sequence and table-level classifications.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum UpToArg {
    /// Up to isomorphism.
    Iso,
    /// Up to isotopism.
    Isotopy,
}

impl From<UpToArg> for UpTo {
    fn from(v: UpToArg) -> UpTo {
        match v {
            UpToArg::Iso => UpTo::Isomorphism,
            UpToArg::Isotopy => UpTo::Isotopism,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountEmitArg {
    Text,
    Csv,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(short)]
    p: u64,
    #[arg(short)]
    q: u64,
    #[arg(long, value_enum)]
    upto: UpToArg,
    #[arg(long, value_enum, default_value = "text")]
    emit: EmitArg,
}

#[derive(Args)]
struct TableArgs {
    #[arg(short)]
    p: u64,
    #[arg(short)]
    q: u64,
    /// Parameter gamma as "A" or "A,B" for A + B*sqrt(t).
    #[arg(long)]
    gamma: String,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Table file in the shared text format (element 0 must be the identity
    /// for the loop-level properties).
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated properties: quasigroup, bol, bruck, assoc, comm.
    #[arg(long)]
    props: String,
}

#[derive(Args)]
struct CountArgs {
    #[arg(short)]
    q: u64,
    #[arg(long)]
    pmax: u64,
    #[arg(long, value_enum, default_value = "text")]
    emit: CountEmitArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short)]
    p: u64,
    #[arg(short)]
    q: u64,
    /// Largest order pq for which the brute-force table oracle runs.
    #[arg(long, default_value_t = bolpq::classify::DEFAULT_ORACLE_BOUND)]
    oracle_bound: u64,
    /// Largest order pq for which full table identity checks run.
    #[arg(long, default_value_t = bolpq::classify::DEFAULT_IDENTITY_BOUND)]
    identity_bound: u64,
}

fn parse_gamma(spec: &str, p: u64) -> Result<Fp2, Error> {
    let parts: Vec<&str> = spec.split(',').collect();
    let parse = |s: &str| -> Result<i64, Error> {
        s.trim()
            .parse::<i64>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse gamma component {s:?}")))
    };
    let (re, im) = match parts.as_slice() {
        [a] => (parse(a)?, 0),
        [a, b] => (parse(a)?, parse(b)?),
        _ => {
            return Err(Error::InvalidInput(format!(
                "gamma must be \"A\" or \"A,B\", got {spec:?}"
            )))
        }
    };
    let p = p as i64;
    Ok(Fp2::new(re.rem_euclid(p) as u64, im.rem_euclid(p) as u64))
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Classify(args) => {
            let report = classify(args.p, args.q, args.upto.into())?;
            match args.emit {
                EmitArg::Text => print!("{}", report.render_text()),
                EmitArg::Json => println!("{}", report.to_json()),
            }
            Ok(0)
        }
        Cmd::Table(args) => {
            let params = bolpq::FieldParams::new(args.p, args.q)?;
            let gamma = parse_gamma(&args.gamma, args.p)?;
            let table = LoopTable::from_gamma(&params, gamma)?;
            match args.out {
                Some(path) => table.write_file(path)?,
                None => {
                    let mut stdout = std::io::stdout().lock();
                    stdout.write_all(table.to_text().as_bytes())?;
                }
            }
            Ok(0)
        }
        Cmd::Check(args) => {
            let table = LoopTable::read_file(&args.input)?;
            let mut failed = false;
            for prop in args.props.split(',') {
                let prop = prop.trim();
                let ok = match prop {
                    "quasigroup" => table.is_latin(),
                    "bol" => table.is_bol(),
                    "bruck" => table.is_bruck(),
                    "assoc" => table.is_associative(),
                    "comm" => table.is_commutative(),
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "unknown property {other:?} (expected quasigroup, bol, bruck, assoc, comm)"
                        )))
                    }
                };
                println!("{prop}: {}", if ok { "pass" } else { "FAIL" });
                failed |= !ok;
            }
            Ok(if failed { 1 } else { 0 })
        }
        Cmd::Count(args) => {
            let rows = count_range(args.q, args.pmax)?;
            match args.emit {
                CountEmitArg::Csv => print!("{}", bolpq::classify::count_rows_to_csv(&rows)),
                CountEmitArg::Text => {
                    println!(
                        "{:>8} {:>10} {:>12} {:>15} {:>15} {:>11}",
                        "p", "iso", "isotopism", "remark_formula", "nr_lower_bound", "difference"
                    );
                    for r in &rows {
                        println!(
                            "{:>8} {:>10} {:>12} {:>15} {:>15} {:>11}",
                            r.p,
                            r.iso_count,
                            r.isotop_count,
                            r.remark_formula,
                            r.nr_lower_bound,
                            r.difference
                        );
                    }
                }
            }
            Ok(0)
        }
        Cmd::Verify(args) => {
            let opts = VerifyOptions {
                oracle_bound: args.oracle_bound,
                identity_bound: args.identity_bound,
            };
            let summary = cross_verify(args.p, args.q, &opts)?;
            print!("{}", summary.render_text());
            Ok(if summary.pass { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
