use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use volpoly_core::checks::Budget;
use volpoly_core::harness::{self, RunConfig, EXIT_OK, EXIT_USAGE};
use volpoly_core::poset::DEFAULT_MAX_EXTENSION_SIZE;
use volpoly_core::{Chain, Error, Partition, Poset};

/// Exact volume-polynomial calculus, Kahn-Saks polynomials and inequality fuzzing.
#[derive(Debug, Parser)]
#[command(name = "volpoly", version)]
struct Cli {
    /// Random seed; falls back to VOLPOLY_SEED.
    #[arg(long, env = "VOLPOLY_SEED", default_value_t = 0, global = true)]
    seed: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
struct BudgetArgs {
    /// Largest |β| tried when decomposing exponents.
    #[arg(long, default_value_t = 3)]
    budget_beta: u32,
    /// Largest |γ| tried when decomposing exponents.
    #[arg(long, default_value_t = 3)]
    budget_gamma: u32,
}

impl From<BudgetArgs> for Budget {
    fn from(b: BudgetArgs) -> Budget {
        Budget {
            beta: b.budget_beta,
            gamma: b.budget_gamma,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a random poset as JSON.
    GenPoset {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
    },
    /// Run the poset checks on one poset and chain.
    CheckPoset {
        /// Poset JSON file, or `-` for stdin.
        poset: String,
        /// Chain elements, e.g. `0,1,3`.
        #[arg(long)]
        chain: String,
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Largest poset size for linear-extension enumeration.
        #[arg(long, default_value_t = DEFAULT_MAX_EXTENSION_SIZE)]
        guard: usize,
    },
    /// Verify the exact identities on seeded random instances.
    VerifyIdentities {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// KT and rKT on a Schur polynomial.
    CheckSchur {
        /// Partition as comma-separated parts, e.g. `3,2,1`.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// All poset checks over a corpus of random posets.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Fixed poset size.
        #[arg(long)]
        n: Option<usize>,
        /// Fixed edge probability.
        #[arg(long)]
        edge_prob: Option<f64>,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_chain: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_EXTENSION_SIZE)]
        guard: usize,
    },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("writing stdout: {e}"))
        }
    }
}

fn lib(e: Error) -> String {
    e.to_string()
}

fn run(cli: Cli) -> Result<i32, String> {
    let (text, code) = match cli.command {
        Command::GenPoset { n, edge_prob } => {
            if !(0.0..=1.0).contains(&edge_prob) {
                return Err(format!("edge probability {edge_prob} outside [0, 1]"));
            }
            let poset = harness::gen_poset(n, edge_prob, cli.seed).map_err(lib)?;
            (poset.to_json_string() + "\n", EXIT_OK)
        }
        Command::CheckPoset {
            poset,
            chain,
            checks,
            budget,
            guard,
        } => {
            let poset = Poset::from_json_str(&read_input(&poset)?).map_err(lib)?;
            let chain = Chain::parse(&poset, &chain).map_err(lib)?;
            let selection = harness::parse_selection(&checks).map_err(lib)?;
            let cfg = RunConfig {
                seed: cli.seed,
                budget: budget.into(),
                extension_guard: guard,
                ..RunConfig::default()
            };
            let reports = harness::check_poset(&poset, &chain, &selection, &cfg).map_err(lib)?;
            harness::render("check-poset", None, &reports)
        }
        Command::VerifyIdentities { trials } => {
            let reports = harness::verify_identities(cli.seed, trials).map_err(lib)?;
            let config = serde_json::json!({ "seed": cli.seed, "trials": trials });
            harness::render("verify-identities", Some(config), &reports)
        }
        Command::CheckSchur { lambda, m, budget } => {
            let lambda: Partition = lambda.parse().map_err(lib)?;
            let reports = harness::check_schur(&lambda, m, budget.into()).map_err(lib)?;
            harness::render("check-schur", None, &reports)
        }
        Command::Fuzz {
            trials,
            n,
            edge_prob,
            max_n,
            max_chain,
            budget,
            guard,
        } => {
            let cfg = RunConfig {
                seed: cli.seed,
                trials,
                poset_size_max: max_n,
                chain_len_max: max_chain,
                poset_size: n,
                edge_prob,
                budget: budget.into(),
                extension_guard: guard,
                ..RunConfig::default()
            };
            let reports = harness::fuzz(&cfg).map_err(lib)?;
            harness::render("fuzz", Some(harness::config_json(&cfg)), &reports)
        }
    };
    emit(&cli.out, &text)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("volpoly: {msg}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
