//! Argument parsing and command dispatch for the `hyperchip` binary. Each
//! command renders into a string so output is complete before anything is
//! printed, and so tests can run commands in-process.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "hyperchip", version, about = "Parking functions, spanning trees and chip-firing on hypergraphs")]
pub struct Cli {
    /// Emit JSON instead of text for summary commands.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the work limit of the command (for `trees`, the node limit
    /// of the incidence graph).
    #[arg(long, global = true, value_name = "N")]
    pub max_size: Option<u64>,
    /// Emit DOT text for trees and digraphs.
    #[arg(long, global = true)]
    pub dot: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Hypergraph JSON file: {"vertices": [...], "edges": [[...], ...], "sink": "..."}.
    pub file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a hypergraph file and print its canonical form.
    Validate(Input),
    /// Test one configuration; non-parking input reports the largest bounded set.
    Check {
        #[command(flatten)]
        input: Input,
        /// Chips on the non-sink vertices, e.g. `2,1,1`.
        #[arg(long, value_name = "C")]
        config: String,
    },
    /// All parking functions as JSON lines.
    Enumerate(Input),
    /// Maximal parking functions as JSON lines.
    Maximal(Input),
    /// Acyclic orientations with the sink as unique source, with their
    /// maximal parking functions.
    Orientations(Input),
    /// Burning classes of spanning trees of the incidence graph.
    Trees {
        #[command(flatten)]
        input: Input,
        /// Tree order from smallest to largest, e.g. `4,3,2,1,e3,e2,e1`.
        #[arg(long)]
        beta: Option<String>,
    },
    /// Round-trip audit of the tree bijection, or one direction of it.
    Bijection {
        #[command(flatten)]
        input: Input,
        /// Tree order from smallest to largest, e.g. `4,3,2,1,e3,e2,e1`.
        #[arg(long)]
        beta: Option<String>,
        /// Map one parking function to its tree.
        #[arg(long, value_name = "C", conflicts_with = "class")]
        config: Option<String>,
        /// Map one class, e.g. `{"lr":[["1","e2"],...]}`, to its canonical tree.
        #[arg(long)]
        class: Option<String>,
    },
    /// Fire a vertex, test a set, or run a script.
    Fire {
        #[command(flatten)]
        input: Input,
        /// Chips on the non-sink vertices, e.g. `1,2,0`.
        #[arg(long, value_name = "C")]
        config: String,
        /// Vertex to fire; needs `--choice`.
        #[arg(long, requires = "choice", conflicts_with_all = ["set", "script"])]
        vertex: Option<String>,
        /// Receivers per incident edge, e.g. `e1=3,e2=4`.
        #[arg(long)]
        choice: Option<String>,
        /// Set to test for readiness, e.g. `1,2,3`.
        #[arg(long, conflicts_with = "script")]
        set: Option<String>,
        /// JSON list of firing steps.
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Cycling digraphs: one order in detail, or the union over all orders.
    Cyclings {
        #[command(flatten)]
        input: Input,
        /// Vertex order from smallest to largest, e.g. `1,3,2,4`.
        #[arg(long)]
        order: Option<String>,
    },
    /// Star digraph, its reduced Laplacian and determinant.
    Star(Input),
    /// Closed-form counts.
    Count {
        /// Steck count of a house vector, e.g. `3,5,6,6`.
        #[arg(long, value_name = "U", group = "what")]
        u: Option<String>,
        /// Complete hypergraph on n+1 vertices with d-element edges: `n=4,d=3`.
        #[arg(long, value_name = "n=N,d=D", group = "what")]
        complete: Option<String>,
        /// Acyclic orientations of K_{m,n}: `m=3,n=3`.
        #[arg(long, value_name = "m=M,n=N", group = "what")]
        bipartite: Option<String>,
    },
    /// Minimal generators of the cut ideal.
    Ideal {
        #[command(flatten)]
        input: Input,
        /// List the generator of every nonempty set instead.
        #[arg(long)]
        all: bool,
    },
}

/// Exit status and both output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Domain(msg)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}
