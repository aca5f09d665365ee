//! `ssework`: command-line workbench for strong shift equivalence of
//! nonnegative integer matrices.
//!
//! Exit codes: 0 verified/computed, 1 refuted (with a `REFUTED ...` line),
//! 2 input error, 3 resource cap hit.

mod actions;
mod output;

use clap::{Parser, Subcommand};
use output::Printer;
use ssework_core::error::Error;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Debug)]
pub struct MergeSpec(pub Vec<usize>);

impl FromStr for MergeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let vertices: Result<Vec<usize>, _> = s.split(',').map(|v| v.trim().parse()).collect();
        match vertices {
            Ok(v) if !v.is_empty() => Ok(MergeSpec(v)),
            _ => Err(format!("bad merge set '{s}', expected e.g. '1,2'")),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ssework",
    version,
    about = "Exact-arithmetic workbench for strong shift equivalence of nonnegative integer matrices"
)]
struct Cli {
    /// Line-oriented machine output (KEY value pairs)
    #[arg(long, global = true)]
    machine: bool,

    /// Arbitrary-precision arithmetic instead of checked 64-bit
    #[arg(long, global = true)]
    bigint: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Bowen-Franks group and unit class of a matrix
    Bf { matrix: PathBuf },

    /// Edge-graph factorization: R, S with R*S = A and S*R = AG
    EdgeGraph { matrix: PathBuf },

    /// Out-split a graph by a partition of its out-edges
    OutSplit {
        matrix: PathBuf,
        partition: PathBuf,
    },

    /// In-split a graph by a partition of its in-edges
    InSplit {
        matrix: PathBuf,
        partition: PathBuf,
    },

    /// List out-amalgamation candidates, or merge one vertex set
    Amalgamate {
        matrix: PathBuf,
        /// Comma-separated 1-based vertices to merge, e.g. 1,2
        #[arg(long)]
        merge: Option<MergeSpec>,
    },

    /// Verify an elementary-equivalence witness A = C*D, B = D*C
    VerifyEe {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        d: PathBuf,
    },

    /// Verify a chain manifest of witness pairs
    VerifyChain { manifest: PathBuf },

    /// Edge pairing of a witness and the 0/1 matrix matching edges that
    /// share their D-layer component
    Dhat { c: PathBuf, d: PathBuf },

    /// Check the cokernel diagram of a chain: step isomorphisms, the
    /// forward-product map, and unit classes
    Diagram { manifest: PathBuf },

    /// Check the edge/vertex cokernel compatibility square and the unit
    /// descent of a witness
    Matui { c: PathBuf, d: PathBuf },

    /// Exhaustively search for witnesses with bounded entries
    SearchEe {
        a: PathBuf,
        b: PathBuf,
        /// Largest entry allowed in C and D
        #[arg(long, default_value_t = 1)]
        bound: u64,
        /// Cap on the raw candidate count
        #[arg(long, default_value_t = 100_000_000)]
        max_candidates: u128,
    },

    /// Trace sequence trace(A^1), ..., trace(A^n)
    Traces {
        matrix: PathBuf,
        #[arg(long, default_value_t = 12)]
        n: usize,
    },

    /// Check the transfer law psi(phi(f)) = f.shift exhaustively on 0/1
    /// cylinder functions up to a depth
    PhiPsiCheck {
        c: PathBuf,
        d: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Cap on enumerated words
        #[arg(long, default_value_t = 1_000_000)]
        max_words: u128,
    },

    /// Verify a transpose-free certificate chain
    TfVerify { manifest: PathBuf },
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::SearchSpaceTooLarge { .. } | Error::ExplosionGuard { .. } | Error::Overflow => 3,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    let printer = Printer::new(cli.machine);
    let outcome = if cli.bigint {
        actions::run::<num_bigint::BigInt>(&cli.command, &printer)
    } else {
        actions::run::<i64>(&cli.command, &printer)
    };
    let code = match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}
