mod commands;
mod examples;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use xmgraph::bridge::{Flavor, ObstructionCase};
use xmgraph::dot::DotMode;

#[derive(Parser)]
#[command(
    name = "xmgraph",
    version,
    about = "Finite (X,M)-graphs: limits, exponentials, nerves and certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a bundle and re-validate every object in it.
    Validate { bundle: PathBuf },
    /// Count (and list) morphisms G → H.
    Homs {
        bundle: PathBuf,
        g: String,
        h: String,
        /// Maximum number of morphisms to list.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Product G × H with its projections.
    Product {
        bundle: PathBuf,
        g: String,
        h: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Coproduct G ⊔ H with its injections.
    Coproduct {
        bundle: PathBuf,
        g: String,
        h: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Equalizer of two parallel morphisms.
    Equalizer {
        bundle: PathBuf,
        f: String,
        g: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Coequalizer of two parallel morphisms.
    Coequalizer {
        bundle: PathBuf,
        f: String,
        g: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exponential G^H.
    Exponential {
        bundle: PathBuf,
        g: String,
        h: String,
        /// Compute via hom(Y × H, G) even when the explicit construction applies.
        #[arg(long)]
        yoneda: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Transpose a morphism F × H → G into F → G^H.
    Curry {
        bundle: PathBuf,
        morphism: String,
        /// The factor F.
        left: String,
        /// The exponent H.
        exponent: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Transpose a morphism F → G^H into F × H → G.
    Uncurry {
        bundle: PathBuf,
        morphism: String,
        /// The base G.
        base: String,
        /// The exponent H.
        exponent: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Nerve of a hypergraph, power graph or reflexive power graph.
    Nerve {
        #[arg(long)]
        flavor: Flavor,
        bundle: PathBuf,
        object: String,
        /// Size of X for hypergraph nerves.
        #[arg(long, default_value_t = 2)]
        x: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Realization of a graph in the chosen comma category.
    Realize {
        #[arg(long)]
        flavor: Flavor,
        bundle: PathBuf,
        graph: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Whether the unit (for graphs) or counit (for comma objects) is an isomorphism.
    FixedPoint {
        #[arg(long)]
        flavor: Flavor,
        bundle: PathBuf,
        object: String,
        /// Size of X for hypergraphs.
        #[arg(long, default_value_t = 2)]
        x: usize,
    },
    /// Check hom(R(G), H) ≅ hom(G, N(H)) on random pairs.
    AdjunctionCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one flavor; all three are cycled otherwise.
        #[arg(long)]
        flavor: Option<Flavor>,
    },
    /// Certificate that a comma category lacks an exponential.
    Obstruction {
        #[arg(long)]
        case: ObstructionCase,
        #[arg(long, default_value_t = 2)]
        x: usize,
    },
    /// Run a worked example.
    Example { name: examples::Example },
    /// Render a graph as DOT.
    ExportDot {
        bundle: PathBuf,
        graph: String,
        /// undirected, directed or bipartite; chosen from the theory by default.
        #[arg(long)]
        mode: Option<DotMode>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Ok(raw) = std::env::var("XMGRAPH_BUDGET") {
        match raw.trim().parse::<u64>() {
            Ok(b) if b > 0 => xmgraph::graph::set_search_budget(b),
            _ => {
                eprintln!("error: XMGRAPH_BUDGET must be a positive integer, got `{raw}`");
                return ExitCode::from(1);
            }
        }
    }
    let mut out = String::new();
    let result = commands::run(cli.command, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
