//! `hhbv`: tables, verification suites and BV isomorphism verdicts for
//! Hochschild cohomology of `R[x]/(x^{n+1})`.

mod jobs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hochschild::RingSpec;

#[derive(Parser, Debug)]
#[command(
    name = "hhbv",
    version,
    about = "Hochschild cohomology and BV structure of truncated polynomial algebras"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write the document here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
    Latex,
}

#[derive(Args, Debug, Clone)]
struct Algebra {
    /// Z, Q or Fp for a prime p.
    #[arg(long, default_value = "Z")]
    ring: RingSpec,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Half the degree of x is -m.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Module table of HH^* per resolution level.
    Hh {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        levels: u64,
    },
    /// Presentation and BV operator table.
    Bv {
        #[command(flatten)]
        alg: Algebra,
        /// Largest power of the polynomial generator listed.
        #[arg(long, default_value_t = 2)]
        t_cap: u32,
    },
    /// Gerstenhaber brackets of basis monomials.
    Bracket {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long, default_value_t = 1)]
        t_cap: u32,
    },
    /// Negative cyclic cohomology table and Lie bracket verdict.
    Cyclic {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long, default_value_t = -7, allow_hyphen_values = true)]
        min_degree: i64,
        #[arg(long, default_value_t = 6, allow_hyphen_values = true)]
        max_degree: i64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        window: u64,
    },
    /// Chain-map, BV-identity and bar-complex crosscheck suites.
    Verify {
        #[command(flatten)]
        alg: Algebra,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        word_length: u64,
        #[arg(long, default_value_t = 3)]
        t_cap: u32,
    },
    /// Search for a BV isomorphism between two presentations.
    Iso {
        /// `hh:R:n:m`, `menichi-ls2[:R]` or a JSON presentation file.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 8)]
        degree: i64,
        #[arg(long, default_value_t = 1)]
        coefficient_bound: i64,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("HHBV_THREADS") else {
        return Ok(());
    };
    let k: usize = v
        .parse()
        .ok()
        .filter(|k| *k >= 1)
        .ok_or_else(|| format!("HHBV_THREADS must be an integer >= 1, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> jobs::JobResult {
    let dims = |a: &Algebra| (a.ring, a.n as usize, a.m as usize);
    match &cli.command {
        Command::Hh { alg, levels } => {
            let (r, n, m) = dims(alg);
            jobs::hh(r, n, m, *levels as usize)
        }
        Command::Bv { alg, t_cap } => {
            let (r, n, m) = dims(alg);
            jobs::bv(r, n, m, *t_cap)
        }
        Command::Bracket { alg, t_cap } => {
            let (r, n, m) = dims(alg);
            jobs::bracket(r, n, m, *t_cap)
        }
        Command::Cyclic {
            alg,
            min_degree,
            max_degree,
            window,
        } => {
            let (r, n, m) = dims(alg);
            if min_degree > max_degree {
                return Err(format!("empty degree range {min_degree}..={max_degree}"));
            }
            jobs::cyclic(r, n, m, *min_degree, *max_degree, *window as usize)
        }
        Command::Verify {
            alg,
            word_length,
            t_cap,
        } => {
            let (r, n, m) = dims(alg);
            jobs::verify(r, n, m, *word_length as usize, *t_cap)
        }
        Command::Iso {
            left,
            right,
            degree,
            coefficient_bound,
        } => jobs::iso(left, right, *degree, *coefficient_bound),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fail = |msg: String| {
        eprintln!("hhbv: {msg}");
        ExitCode::from(2)
    };
    if let Err(e) = configure_threads() {
        return fail(e);
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let doc = match cli.format {
        Format::Table => report.to_text(),
        Format::Json => report.to_json(),
        Format::Latex => report.to_latex(),
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, doc) {
                return fail(format!("{}: {e}", path.display()));
            }
        }
        None => print!("{doc}"),
    }
    if report.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
