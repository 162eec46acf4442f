use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqcert::words::oracle_conjugate;
use fqcert::{
    certify_nonconjugate, certify_omnipotence, from_json, to_canonical_json, verify, Caps, Certificate, Error,
    SearchMode, Word,
};

mod selftest;

const EXIT_REJECT: u8 = 1;
const EXIT_CONJUGATE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;
const EXIT_DEPENDENT: u8 = 4;
const EXIT_USAGE: u8 = 64;
const EXIT_MALFORMED: u8 = 65;
const EXIT_FAILURE: u8 = 70;

#[derive(Parser)]
#[command(name = "fqcert", version, about = "Finite-quotient certificates for free-group words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a certificate and write it as canonical JSON
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Check a certificate file and print every fact checked
    Verify { path: PathBuf },
    /// Decide conjugacy with the cyclic-word algorithm
    Oracle {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Run randomized property checks
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random cases per property
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Certify that a and b are not conjugate
    Nonconjugacy {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Certify prescribed orders for an independent set
    Omnipotence {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strong,
    Weak,
}

#[derive(Args)]
struct Output {
    /// Certificate path; stdout when absent
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CapArgs {
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_index: u64,
    #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u64).range(1..))]
    max_prime: u64,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    max_rounds: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Accepted for symmetry with selftest; certification is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_index: self.max_index as usize,
            max_prime: self.max_prime,
            max_rounds: self.max_rounds as usize,
            jobs: self.jobs as usize,
            ..Caps::default()
        }
    }
}

fn parse(text: &str, rank: usize) -> Result<Word, ExitCode> {
    Word::parse(text, rank).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_USAGE)
    })
}

fn report_error(e: &Error) -> ExitCode {
    match e {
        Error::ElementsConjugate { conjugator } => {
            println!("conjugator: {conjugator}");
            ExitCode::from(EXIT_CONJUGATE)
        }
        Error::SearchExhausted { obstruction } => {
            eprintln!("search exhausted: {obstruction}");
            ExitCode::from(EXIT_EXHAUSTED)
        }
        Error::NotIndependent { i, j } => {
            eprintln!("elements {i} and {j} are not independent");
            ExitCode::from(EXIT_DEPENDENT)
        }
        Error::TrivialWord | Error::BadArgument(_) | Error::RankMismatch(..) | Error::BadRank(_) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        other => {
            eprintln!("error: {other}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn write_certificate(cert: &Certificate, out: &Output) -> Result<(), ExitCode> {
    let text = to_canonical_json(cert);
    match &out.out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(EXIT_FAILURE)
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Certify(CertifyCommand::Nonconjugacy { rank, a, b, mode, out, caps }) => {
            let (a, b) = (parse(&a, rank)?, parse(&b, rank)?);
            let mode = match mode {
                None => SearchMode::Auto,
                Some(ModeArg::Strong) => SearchMode::Strong,
                Some(ModeArg::Weak) => SearchMode::Weak,
            };
            let cert = certify_nonconjugate(&a, &b, mode, &caps.caps()).map_err(|e| report_error(&e))?;
            eprintln!(
                "cover degree {}, m={}, n={}, N={}, {}",
                cert.cover.degree(),
                cert.m,
                cert.n,
                cert.modulus,
                cert.mode
            );
            write_certificate(&Certificate::Nonconjugacy(cert), &out)?;
        }
        Command::Certify(CertifyCommand::Omnipotence { rank, elements, orders, out, caps }) => {
            let elements = elements.iter().map(|s| parse(s, rank)).collect::<Result<Vec<_>, _>>()?;
            if elements.len() != orders.len() {
                eprintln!("error: {} elements but {} orders", elements.len(), orders.len());
                return Err(ExitCode::from(EXIT_USAGE));
            }
            let cert = certify_omnipotence(&elements, &orders, &caps.caps()).map_err(|e| report_error(&e))?;
            let orders: Vec<String> = cert.promised_orders().iter().map(u64::to_string).collect();
            println!("K={} orders=[{}]", cert.k_const(), orders.join(","));
            write_certificate(&Certificate::Omnipotence(cert), &out)?;
        }
        Command::Verify { path } => {
            let text = fs::read_to_string(&path).map_err(|e| {
                eprintln!("error: cannot read {}: {e}", path.display());
                ExitCode::from(EXIT_MALFORMED)
            })?;
            let cert = from_json(&text).map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_MALFORMED)
            })?;
            let report = verify(&cert);
            println!("{report}");
            if !report.orders.is_empty() {
                println!("orders: {:?}", report.orders);
            }
            if !report.accepted() {
                return Err(ExitCode::from(EXIT_REJECT));
            }
        }
        Command::Oracle { rank, a, b } => {
            let (a, b) = (parse(&a, rank)?, parse(&b, rank)?);
            if oracle_conjugate(&a, &b).map_err(|e| report_error(&e))? {
                println!("conjugate");
            } else {
                println!("non-conjugate");
                return Err(ExitCode::from(EXIT_REJECT));
            }
        }
        Command::Selftest { seed, cases } => {
            if !selftest::run(seed, cases) {
                return Err(ExitCode::from(EXIT_REJECT));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    run(cli).unwrap_or_else(|code| code)
}
