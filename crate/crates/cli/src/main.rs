use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rbasis::basis::{check_window, is_finite_r_basis};
use rbasis::oracle::{all_r_bases_naive, is_r_basis_naive};
use rbasis::search::{enumerate_with, OutcomeKind};
use rbasis::tree::BoundLimits;
use rbasis::{
    build_profile, parse_spec_pair, Checkpoint, IntSet, Preset, SearchConfig, SearchError, Searcher, SpecError,
    SpecPair, Strategy, TreeError,
};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_BOUND_CAP: u8 = 5;

// expansions between heartbeat/checkpoint polls
const POLL_EVERY: u64 = 256;

/// Representation functions, finite R-bases and tree search.
#[derive(Parser)]
#[command(name = "rbasis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a set is a finite R-basis (window defaults to its maximum).
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = IntSet::parse)]
        set: IntSet,
        #[arg(long)]
        window: Option<u64>,
        /// Answer with the brute-force reference instead.
        #[arg(long, hide = true)]
        oracle: bool,
    },
    /// Print r_A(n, H_n) for n in [0, W] as JSON lines.
    Profile {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = IntSet::parse)]
        set: IntSet,
        #[arg(long)]
        window: u64,
    },
    /// Search the tree for a finite R-basis with maximum at least N.
    Search {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "N")]
        target: u64,
        #[arg(long, default_value = "dfs-smallest-first")]
        strategy: Strategy,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Where checkpoints are written.
        #[arg(long, default_value = "rbasis-checkpoint.json")]
        checkpoint: PathBuf,
        /// Also write a checkpoint every K expansions.
        #[arg(long, value_name = "K")]
        checkpoint_every: Option<u64>,
        #[arg(long, value_name = "PATH")]
        resume: Option<PathBuf>,
        #[arg(long, value_name = "K", default_value_t = 0)]
        parallel: usize,
        /// Include every generated vertex in the outcome.
        #[arg(long)]
        record_vertices: bool,
        #[command(flatten)]
        limits: Limits,
        /// Seconds between progress lines on stderr; 0 disables.
        #[arg(long, value_name = "SECS", default_value_t = 10)]
        heartbeat: u64,
    },
    /// List every finite R-basis with maximum at most M as JSON lines.
    Enumerate {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "M")]
        max_element: u64,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, hide = true)]
        oracle: bool,
    },
    /// Print the expanded configuration of a preset.
    Preset { name: Preset },
}

#[derive(Args)]
struct Source {
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "preset",
        required_unless_present = "preset"
    )]
    config: Option<PathBuf>,
    /// dowd(h,c), exact-f(h,d[,n=v]...) or paper-example.
    #[arg(long, value_name = "NAME")]
    preset: Option<Preset>,
    /// Print the configuration and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct Limits {
    /// Consecutive failed candidates, per unit of max(V), that end a bound scan.
    #[arg(long, default_value_t = BoundLimits::default().stretch_factor)]
    stretch_factor: u64,
    /// Largest gap above max(V) a bound scan may cover.
    #[arg(long, default_value_t = BoundLimits::default().hard_cap)]
    hard_cap: u64,
}

impl From<&Limits> for BoundLimits {
    fn from(l: &Limits) -> Self {
        BoundLimits {
            stretch_factor: l.stretch_factor,
            hard_cap: l.hard_cap,
        }
    }
}

enum Failure {
    Usage(String),
    BoundCap(String),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::BoundCap { .. } => Failure::BoundCap(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Tree(t) => t.into(),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

impl Source {
    fn load(&self) -> Result<SpecPair, Failure> {
        match (&self.config, &self.preset) {
            (Some(path), _) => {
                Ok(parse_spec_pair(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?)
            }
            (None, Some(p)) => Ok(p.expand()?),
            (None, None) => Err(Failure::Usage("one of --config or --preset is required".into())),
        }
    }
}

fn emit(out: &mut impl Write, line: &str) -> Result<(), Failure> {
    writeln!(out, "{line}")?;
    Ok(())
}

fn write_checkpoint(path: &Path, cp: &Checkpoint) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, cp.to_json() + "\n")?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let (source, command) = match &cli.command {
        Command::Preset { name } => {
            emit(&mut out, &name.expand()?.to_json())?;
            return Ok(EXIT_OK);
        }
        Command::Check { source, .. }
        | Command::Profile { source, .. }
        | Command::Search { source, .. }
        | Command::Enumerate { source, .. } => (source, &cli.command),
    };
    let pair = source.load()?;
    if source.dump_config {
        emit(&mut out, &pair.to_json())?;
        return Ok(EXIT_OK);
    }
    let code = match command {
        Command::Check {
            set, window, oracle, ..
        } => {
            if *oracle {
                let ok = is_r_basis_naive(set, &pair).map_err(|e| Failure::Usage(e.to_string()))?;
                emit(&mut out, &json!({ "ok": ok }).to_string())?;
                if ok {
                    EXIT_OK
                } else {
                    EXIT_VIOLATION
                }
            } else {
                let report = match window {
                    Some(w) => check_window(set, &pair, *w),
                    None => is_finite_r_basis(set, &pair),
                };
                emit(&mut out, &report.to_json())?;
                if report.ok {
                    EXIT_OK
                } else {
                    EXIT_VIOLATION
                }
            }
        }
        Command::Profile { set, window, .. } => {
            let profile = build_profile(set, pair.h.clone(), *window, None);
            for (n, r) in profile.counts().iter().enumerate() {
                emit(&mut out, &json!({ "n": n, "r": r }).to_string())?;
            }
            EXIT_OK
        }
        Command::Enumerate {
            max_element,
            limits,
            oracle,
            ..
        } => {
            if *oracle {
                let sets = all_r_bases_naive(&pair, *max_element).map_err(|e| Failure::Usage(e.to_string()))?;
                for s in &sets {
                    emit(&mut out, &json!({ "set": s }).to_string())?;
                }
            } else {
                let mut failed = None;
                enumerate_with(&pair, *max_element, limits.into(), |s| {
                    if failed.is_none() {
                        failed = writeln!(out, "{}", json!({ "set": s })).err();
                    }
                })?;
                if let Some(e) = failed {
                    return Err(e.into());
                }
            }
            EXIT_OK
        }
        Command::Search {
            target,
            strategy,
            budget,
            checkpoint,
            checkpoint_every,
            resume,
            parallel,
            record_vertices,
            limits,
            heartbeat,
            ..
        } => {
            let config = SearchConfig {
                pair,
                target: *target,
                strategy: *strategy,
                budget: *budget,
                checkpoint_every: *checkpoint_every,
                parallel: *parallel,
                limits: limits.into(),
                record_vertices: *record_vertices,
            };
            if config.budget == 0 {
                return Err(Failure::Usage("--budget must be at least 1".into()));
            }
            let mut searcher = match resume {
                Some(path) => Searcher::resume(Checkpoint::from_json(&read(path)?)?, config)?,
                None => Searcher::new(config)?,
            };
            let heartbeat = (*heartbeat > 0).then(|| Duration::from_secs(*heartbeat));
            let every = checkpoint_every.filter(|&k| k > 0);
            let step = every.map_or(POLL_EVERY, |k| k.min(POLL_EVERY));
            let mut last_beat = Instant::now();
            let mut last_saved = searcher.stats().expanded;
            let outcome = loop {
                if let Some(o) = searcher.run(Some(step))? {
                    break o;
                }
                let stats = searcher.stats();
                if every.is_some_and(|k| stats.expanded - last_saved >= k) {
                    write_checkpoint(checkpoint, &searcher.checkpoint())?;
                    last_saved = stats.expanded;
                }
                if heartbeat.is_some_and(|d| last_beat.elapsed() >= d) {
                    eprintln!(
                        "heartbeat expanded={} vertices={} deepest_max={}",
                        stats.expanded, stats.vertices, stats.deepest_max
                    );
                    last_beat = Instant::now();
                }
            };
            let mut outcome = outcome;
            if let Some(cp) = outcome.checkpoint.take() {
                write_checkpoint(checkpoint, &cp)?;
                outcome.checkpoint_path = Some(checkpoint.display().to_string());
            }
            emit(&mut out, &outcome.to_json())?;
            match outcome.kind {
                OutcomeKind::Found => EXIT_OK,
                OutcomeKind::Exhausted => EXIT_EXHAUSTED,
                OutcomeKind::Budget => EXIT_BUDGET,
            }
        }
        Command::Preset { .. } => unreachable!(),
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::BoundCap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BOUND_CAP)
        }
    }
}
