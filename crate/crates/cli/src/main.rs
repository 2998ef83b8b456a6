//! `k3lat`: lattice computations with JSON in and canonical JSON out.
//!
//! Exit codes: 0 pass/found, 1 fail/not found within bounds, 2 usage or
//! malformed input, 3 resource cap.

mod commands;
mod error;
mod json;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use k3lat::catalog;
use k3lat::pipelines::{Bounds, SCHEMA_VERSION};
use serde_json::{Map, Value};

use commands::Outcome;
use error::Result;

#[derive(Parser)]
#[command(name = "k3lat", version, about = "Exact lattice computations for Leech, Niemeier and K3 lattices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Norm bound for bounded searches.
    #[arg(long, global = true)]
    norm_bound: Option<u64>,
    /// Coordinate bound for bounded searches.
    #[arg(long, global = true)]
    coord_bound: Option<u64>,
    /// Node cap for enumerations and searches.
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Seed for sampled searches.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sampled candidates before giving up.
    #[arg(long, global = true)]
    attempts: Option<u32>,
    /// Worker threads for parallel enumeration. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

impl Cli {
    fn bounds(&self) -> Bounds {
        let d = Bounds::default();
        Bounds {
            norm_bound: self.norm_bound.unwrap_or(d.norm_bound),
            coord_bound: self.coord_bound.unwrap_or(d.coord_bound),
            cap: self.cap.unwrap_or(d.cap),
            seed: self.seed.unwrap_or(d.seed),
            attempts: self.attempts.unwrap_or(d.attempts),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Single-lattice queries.
    #[command(subcommand)]
    Lat(LatCmd),
    /// Print a catalog lattice (or `golay`, `m24`).
    Catalog { name: String },
    /// Group actions.
    #[command(subcommand)]
    Grp(GrpCmd),
    /// Embedding criteria and searches.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Condition ii): rank of the invariant lattice at least four.
    #[command(subcommand)]
    Thm1(Thm1Cmd),
    /// Coinvariant lattices into Leech and back.
    #[command(subcommand)]
    Ghv(GhvCmd),
    /// Condition (*) for rank-3 sublattices.
    #[command(subcommand)]
    Star(StarCmd),
    /// Period data in Mukai coordinates.
    #[command(subcommand)]
    Period(PeriodCmd),
}

#[derive(Subcommand)]
enum LatCmd {
    /// Rank, signature, parity, determinant and discriminant invariants.
    Info { file: String },
    /// Roots (norm ±2 vectors) of a definite lattice, one per sign pair.
    Roots {
        file: String,
        #[arg(long)]
        count_only: bool,
    },
    /// The discriminant form.
    Disc { file: String },
}

#[derive(Subcommand)]
enum GrpCmd {
    /// Invariant and coinvariant lattices of an action.
    Invariant {
        file: String,
        /// Also run the four-clause check on a fixed positive 4-space.
        #[arg(long)]
        lemma: bool,
    },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Existence and uniqueness verdicts for a primitive embedding.
    Check {
        lat: String,
        /// Target signature as P,N.
        #[arg(long, value_parser = commands::parse_target)]
        target: (usize, usize),
        /// Split off A1 instead of A1(-1) in the 2-adic criterion.
        #[arg(long)]
        a1_positive: bool,
    },
    /// Backtracking search for an embedding of definite lattices.
    Search { src: String, dst: String },
}

#[derive(Subcommand)]
enum Thm1Cmd {
    Check { action: String },
}

#[derive(Subcommand)]
enum GhvCmd {
    /// From a coinvariant lattice to an embedding into Leech.
    Forward { lg: String },
    /// From a Leech action to an action on an even unimodular (4, 20) lattice.
    Converse { action: String },
}

#[derive(Subcommand)]
enum StarCmd {
    /// Check a rank-3 sublattice of CONTEXT.
    Check { l: String, context: String },
    /// Search CONTEXT for a rank-3 sublattice satisfying the condition.
    Search { context: String },
}

#[derive(Subcommand)]
enum PeriodCmd {
    Build {
        ng: String,
        /// Comma-separated vector that the second plane must contain.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
    },
}

fn run(cmd: &Cmd, bounds: &Bounds) -> Result<Outcome> {
    let lat = |p: &str| json::parse_lattice_file(p, None);
    match cmd {
        Cmd::Lat(LatCmd::Info { file }) => commands::lat_info(&lat(file)?),
        Cmd::Lat(LatCmd::Roots { file, count_only }) => commands::lat_roots(&lat(file)?, *count_only, bounds),
        Cmd::Lat(LatCmd::Disc { file }) => commands::lat_disc(&lat(file)?),
        Cmd::Catalog { name } => commands::catalog(name),
        Cmd::Grp(GrpCmd::Invariant { file, lemma }) => {
            commands::grp_invariant(&json::parse_action_file(file)?, *lemma, bounds)
        }
        Cmd::Embed(EmbedCmd::Check { lat: l, target, a1_positive }) => {
            commands::embed_check(&lat(l)?, *target, *a1_positive)
        }
        Cmd::Embed(EmbedCmd::Search { src, dst }) => commands::embed_search(&lat(src)?, &lat(dst)?, bounds),
        Cmd::Thm1(Thm1Cmd::Check { action }) => commands::thm1(&json::parse_action_file(action)?),
        Cmd::Ghv(GhvCmd::Forward { lg }) => commands::ghv_forward(&lat(lg)?, bounds),
        Cmd::Ghv(GhvCmd::Converse { action }) => commands::ghv_converse(&json::parse_action_file(action)?, bounds),
        Cmd::Star(StarCmd::Check { l, context }) => {
            let ctx = lat(context)?;
            commands::star_check(&json::parse_lattice_file(l, Some(&ctx))?, &ctx)
        }
        Cmd::Star(StarCmd::Search { context }) => commands::star_search(&lat(context)?, bounds),
        Cmd::Period(PeriodCmd::Build { ng, v }) => {
            let mukai = catalog::make("Mukai")?;
            let v = v.as_deref().map(commands::parse_vector).transpose()?;
            commands::period_build(&json::parse_lattice_file(ng, Some(&mukai))?, v.as_deref(), bounds)
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Lat(LatCmd::Info { .. }) => "lat info",
        Cmd::Lat(LatCmd::Roots { .. }) => "lat roots",
        Cmd::Lat(LatCmd::Disc { .. }) => "lat disc",
        Cmd::Catalog { .. } => "catalog",
        Cmd::Grp(GrpCmd::Invariant { .. }) => "grp invariant",
        Cmd::Embed(EmbedCmd::Check { .. }) => "embed check",
        Cmd::Embed(EmbedCmd::Search { .. }) => "embed search",
        Cmd::Thm1(Thm1Cmd::Check { .. }) => "thm1 check",
        Cmd::Ghv(GhvCmd::Forward { .. }) => "ghv forward",
        Cmd::Ghv(GhvCmd::Converse { .. }) => "ghv converse",
        Cmd::Star(StarCmd::Check { .. }) => "star check",
        Cmd::Star(StarCmd::Search { .. }) => "star search",
        Cmd::Period(PeriodCmd::Build { .. }) => "period build",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("k3lat: cannot configure threads: {e}");
            return ExitCode::from(2);
        }
    }
    let bounds = cli.bounds();
    let (mut body, code) = match run(&cli.cmd, &bounds) {
        Ok(o) => (o.body, o.code),
        Err(e) => {
            eprintln!("k3lat: {e}");
            let mut err = Map::new();
            err.insert("kind".into(), e.kind().into());
            err.insert("message".into(), e.to_string().into());
            let mut body = Map::new();
            body.insert("error".into(), Value::Object(err));
            (body, e.exit_code())
        }
    };
    body.insert("schema_version".into(), SCHEMA_VERSION.into());
    body.insert("tool".into(), "k3lat".into());
    body.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    body.insert("command".into(), command_name(&cli.cmd).into());
    body.insert("bounds".into(), json::evidence(&bounds.to_evidence()));
    let text = json::render(&Value::Object(body));
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
