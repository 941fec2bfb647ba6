use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qverify::catalog::{verify, IdentityCase, IdentityId, Params, Sign, Status};
use qverify::suite::{report_text, run_suite, SuiteConfig};
use qverify::HalfInt;

/// Exact coefficient-by-coefficient verification of q-series identities.
#[derive(Parser)]
#[command(name = "qverify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a single identity.
    Verify(VerifyArgs),
    /// Run every case of a JSON suite config.
    Suite {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    id: IdentityId,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    j: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// Half-integer: `3/2`, `2` or `-1/2`.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<HalfInt>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<HalfInt>,
    /// `+` or `-`.
    #[arg(long, allow_hyphen_values = true, requires = "z_exp")]
    z_sign: Option<Sign>,
    #[arg(long, allow_hyphen_values = true, requires = "z_sign")]
    z_exp: Option<HalfInt>,
    /// Comma-separated 1-based indices.
    #[arg(long, value_delimiter = ',')]
    placement: Option<Vec<usize>>,
    #[arg(long)]
    samples: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Perturbs the product-side modulus (negative control).
    #[arg(long, allow_hyphen_values = true)]
    modulus_delta: Option<i64>,
    /// Truncation order as a power of q, e.g. `100` or `121/2`.
    #[arg(long)]
    order: Option<HalfInt>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl VerifyArgs {
    fn case(&self) -> IdentityCase {
        IdentityCase {
            id: self.id,
            params: Params {
                k: self.k,
                r: self.r,
                j: self.j,
                n: self.n,
                a: self.a,
                c: self.c,
                z_sign: self.z_sign,
                z_exp: self.z_exp,
                placement: self.placement.clone(),
                samples: self.samples,
                seed: self.seed,
                modulus_delta: self.modulus_delta,
            },
            order: self.order,
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify(args) => {
            let report = verify(&args.case());
            match args.format {
                Format::Text => println!("{}", report_text(&report)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize")),
            }
            ExitCode::from(match report.status {
                Status::Pass => 0,
                Status::Fail => 1,
                Status::Error => 2,
            })
        }
        Command::Suite { config, format } => {
            let report = SuiteConfig::from_path(&config).and_then(|c| run_suite(&c));
            match report {
                Ok(report) => {
                    match format {
                        Format::Text => println!("{}", report.to_text()),
                        Format::Json => println!("{}", report.to_json()),
                    }
                    ExitCode::from(report.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("qverify: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
