use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modinv_cli::{run_selftest, run_verify, CliError, Scope, VerifyConfig, EXIT_FAILED, EXIT_OK};
use modinv_core::ffield::parse_hex;
use modinv_core::grouplift::DEFAULT_CLOSURE_CAP;
use modinv_core::Variant;

#[derive(Parser)]
#[command(
    name = "modinv",
    version,
    about = "Verify polynomial invariant rings of characteristic-2 reflection groups"
)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the group for one instance and check that its invariant ring is polynomial.
    Verify(VerifyArgs),
    /// Run the exhaustive identity suites.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Degree of the coefficient field GF(2^n); must exceed 1.
    #[arg(long)]
    n: u32,
    /// Dimension of the kernel space over GF(2^n) (default: the number of basis elements, or 0).
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, default_value = "h1", value_parser = parse_variant)]
    variant: Variant,
    /// Modulus of GF(2^n) as a hex bit-string, low bit = constant term.
    #[arg(long, value_parser = parse_hex_arg)]
    modulus_q: Option<u32>,
    /// Modulus of the ambient field as a hex bit-string.
    #[arg(long, value_parser = parse_hex_arg)]
    modulus_ambient: Option<u32>,
    /// Basis of the kernel space as comma-separated hex elements of the ambient field.
    #[arg(long, value_delimiter = ',', value_parser = parse_hex_arg)]
    lambda_basis: Option<Vec<u32>>,
    /// Compare fixed-space and generated dimensions in degrees 0..=K.
    #[arg(long, value_name = "K")]
    oracle_max_degree: Option<u32>,
    /// Upper bound on the group order during closure.
    #[arg(long, value_name = "SIZE", default_value_t = DEFAULT_CLOSURE_CAP)]
    max_group: usize,
    /// Write the JSON report to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Suppress the text summary.
    #[arg(long)]
    quiet: bool,
    /// Leave elapsed_ms null so reports are byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// cocycle, dickson, oracle or all.
    #[arg(default_value = "all", value_parser = parse_scope)]
    scope: Scope,
    /// Restrict to one subfield degree (1..=3).
    #[arg(long)]
    n: Option<u32>,
    /// Write the suite results as JSON to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

fn parse_hex_arg(s: &str) -> Result<u32, String> {
    parse_hex(s).map_err(|e| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: modinv_core::Error| e.to_string())
}

fn parse_scope(s: &str) -> Result<Scope, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn verify(args: VerifyArgs) -> Result<u8, CliError> {
    let cfg = VerifyConfig {
        n: args.n,
        d: args.d,
        variant: args.variant,
        modulus_q: args.modulus_q,
        modulus_ambient: args.modulus_ambient,
        lambda_basis: args.lambda_basis,
        oracle_max_degree: args.oracle_max_degree,
        max_group: args.max_group,
        timing: !args.no_timing,
    };
    let report = run_verify(&cfg)?;
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json())?;
    }
    if !args.quiet {
        print!("{}", report.to_text());
    }
    if report.is_polynomial() {
        Ok(EXIT_OK)
    } else {
        eprintln!("check failed: {}", report.verdict);
        Ok(EXIT_FAILED)
    }
}

fn selftest(args: SelftestArgs) -> Result<u8, CliError> {
    let results = run_selftest(args.scope, args.n)?;
    if let Some(path) = &args.json {
        let mut s = serde_json::to_string_pretty(&results).expect("results serialize");
        s.push('\n');
        std::fs::write(path, s)?;
    }
    if !args.quiet {
        for r in &results {
            println!("{r}");
        }
    }
    Ok(if results.iter().all(|r| r.ok()) {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(modinv_cli::EXIT_INVALID);
        }
    }
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Selftest(args) => selftest(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
