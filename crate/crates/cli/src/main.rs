//! `candidacy`: command-line front end for candidacy games.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input (parse error,
//! missing file, invalid argument), 3 unsupported rule/input pairing,
//! 4 resource limit reached.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use candidacy::control::{bridge_check, decide_control};
use candidacy::fixtures::FixtureSet;
use candidacy::format;
use candidacy::game::{best_response_dynamics, Activation, Termination};
use candidacy::search::{self, BranchOrder, SearchOptions, SearchStatus, SolveConfig};
use candidacy::verify;
use candidacy::{CandidacyGame, EquilibriumKind, Error};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use input::{GameArgs, SourceArgs};
use report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "candidacy",
    version,
    about = "Strategic candidacy games over common voting rules"
)]
struct Cli {
    /// Emit one JSON record per line instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Winner of one or more running sets.
    Winner {
        #[command(flatten)]
        source: SourceArgs,
        /// Running set as labels (`abd`) or a bitstring (`1101`); repeatable.
        /// Defaults to every candidate.
        #[arg(long)]
        subset: Vec<String>,
        /// Print the whole choice table instead.
        #[arg(long, conflicts_with = "subset")]
        all: bool,
    },
    /// Enumerate Nash, k-coalition or strong equilibria.
    Equilibria {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, value_enum, default_value_t = Kind::Ne)]
        kind: Kind,
        /// Coalition bound for `--kind kne`.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Classify every state, with a witness deviation where one exists.
        #[arg(long)]
        all: bool,
        /// With --all, also decide the matching consenting control questions.
        #[arg(long, requires = "all")]
        bridge: bool,
    },
    /// Best-response dynamics from a starting state.
    Dynamics {
        #[command(flatten)]
        game: GameArgs,
        /// Starting state; defaults to every candidate running.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, value_enum, default_value_t = ActivationKind::RoundRobin)]
        activation: ActivationKind,
        /// Round-robin order, e.g. "c a b d"; defaults to candidate order.
        #[arg(long)]
        order: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
    /// Decide a candidate-control instance file.
    Control {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Search for a choice function whose candidacy game has no NE.
    Search {
        #[arg(long)]
        m: usize,
        /// Require the choice function to be Borda on some tournament.
        #[arg(long)]
        borda: bool,
        /// Voter bound of the Borda layer.
        #[arg(long, default_value_t = search::DEFAULT_BORDA_VOTERS)]
        n: u32,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Order::WinnersFirst)]
        order: Order,
        /// Where to write the choice function of a solution.
        #[arg(long)]
        choice_out: Option<PathBuf>,
        /// Where to write the candidate preferences of a solution.
        #[arg(long)]
        prefs_out: Option<PathBuf>,
        /// Where to write the tournament of a Borda solution.
        #[arg(long)]
        tournament_out: Option<PathBuf>,
    },
    /// Run the bundled example checks.
    PaperVerify {
        /// Only run checks whose name contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Read the fixture files from this directory instead of the
        /// compiled-in copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// List the checks without running them.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Ne,
    Kne,
    Se,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ActivationKind {
    RoundRobin,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Order {
    WinnersFirst,
    TournamentLast,
    TournamentFirst,
}

/// A reason to stop with a nonzero exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    const CHECK: u8 = 1;
    const INPUT: u8 = 2;
    const UNSUPPORTED: u8 = 3;
    const RESOURCE: u8 = 4;

    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: Self::INPUT,
            message: message.into(),
        }
    }

    pub fn unsupported(message: impl Into<String>) -> Self {
        Failure {
            code: Self::UNSUPPORTED,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: Self::CHECK,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidArgument(_) => Self::INPUT,
            Error::Unsupported(_) => Self::UNSUPPORTED,
            Error::ResourceLimit { .. } => Self::RESOURCE,
            Error::Certification(_) => Self::CHECK,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Report::new(cli.json);
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, out: &mut Report) -> Result<(), Failure> {
    match command {
        Command::Winner { source, subset, all } => cmd_winner(&source, &subset, all, out),
        Command::Equilibria {
            game,
            kind,
            k,
            all,
            bridge,
        } => {
            let kind = match kind {
                Kind::Ne => EquilibriumKind::Nash,
                Kind::Kne if k == 0 => return Err(Failure::input("--k must be at least 1")),
                Kind::Kne => EquilibriumKind::KNash(k),
                Kind::Se => EquilibriumKind::Strong,
            };
            cmd_equilibria(&game.load()?, kind, all, bridge, out)
        }
        Command::Dynamics {
            game,
            start,
            activation,
            order,
            seed,
            max_steps,
        } => {
            let game = game.load()?;
            let cs = game.candidates();
            let start = match start {
                Some(text) => input::parse_state(cs, &text)?,
                None => game.full_state(),
            };
            let activation = match (activation, order) {
                (ActivationKind::Random, _) => Activation::Random { seed },
                (ActivationKind::RoundRobin, None) => Activation::round_robin(cs.len()),
                (ActivationKind::RoundRobin, Some(text)) => {
                    Activation::RoundRobin(input::parse_tiebreak(cs, &text)?.priority().to_vec())
                }
            };
            cmd_dynamics(&game, start, &activation, max_steps, out)
        }
        Command::Control { instance } => cmd_control(&instance, out),
        Command::Search {
            m,
            borda,
            n,
            node_limit,
            seed,
            order,
            choice_out,
            prefs_out,
            tournament_out,
        } => {
            let options = if borda {
                SearchOptions::borda(m, n)
            } else {
                SearchOptions::plain(m)
            };
            let config = SolveConfig {
                order: match order {
                    Order::WinnersFirst => BranchOrder::WinnersFirst,
                    Order::TournamentLast => BranchOrder::TournamentLast,
                    Order::TournamentFirst => BranchOrder::TournamentFirst,
                },
                node_limit,
                seed,
            };
            let outputs = [choice_out, prefs_out, tournament_out];
            cmd_search(options, &config, &outputs, out)
        }
        Command::PaperVerify { filter, fixtures, list } => {
            cmd_paper_verify(filter.as_deref(), fixtures.as_deref(), list, out)
        }
    }
}

fn cmd_winner(source: &SourceArgs, subsets: &[String], all: bool, out: &mut Report) -> Result<(), Failure> {
    let loaded = source.load()?;
    let cs = loaded.candidates().clone();
    if all {
        let table = input::choice_table(&loaded)?;
        let mut entries: Vec<_> = table.entries().collect();
        entries.sort_by_key(|&(s, _)| (std::cmp::Reverse(s.len()), s.iter().collect::<Vec<_>>()));
        for (s, w) in entries {
            out.winner(&cs, s, Some(w), true);
        }
        return Ok(());
    }
    let states = if subsets.is_empty() {
        vec![cs.full()]
    } else {
        subsets
            .iter()
            .map(|t| input::parse_state(&cs, t))
            .collect::<Result<Vec<_>, _>>()?
    };
    for &s in &states {
        if s.is_empty() {
            return Err(Failure::input("the empty set has no winner"));
        }
        let w = loaded.source.outcome(s, &loaded.tiebreak)?;
        out.winner(&cs, s, w, states.len() > 1);
    }
    Ok(())
}

fn cmd_equilibria(
    game: &CandidacyGame,
    kind: EquilibriumKind,
    all: bool,
    bridge: bool,
    out: &mut Report,
) -> Result<(), Failure> {
    let found = game.enumerate_equilibria(kind)?;
    if all {
        if bridge && game.num_candidates() > candidacy::control::MAX_BRIDGE_CANDIDATES {
            return Err(Failure::from(Error::ResourceLimit {
                what: "bridge check",
                requested: game.num_candidates(),
                bound: candidacy::control::MAX_BRIDGE_CANDIDATES,
            }));
        }
        for s in game.states() {
            let report = game.classify(s);
            let record = if bridge { Some(bridge_check(game, s)?) } else { None };
            out.state_report(game, &report, kind, record.as_ref());
        }
    } else {
        for &s in &found {
            out.equilibrium(game, s);
        }
    }
    out.summary(kind, found.len());
    Ok(())
}

fn cmd_dynamics(
    game: &CandidacyGame,
    start: candidacy::State,
    activation: &Activation,
    max_steps: usize,
    out: &mut Report,
) -> Result<(), Failure> {
    let run = best_response_dynamics(game, start, activation, max_steps)?;
    for mv in &run.moves {
        out.dynamics_move(game, mv);
    }
    out.termination(game, &run.termination, run.activations);
    match run.termination {
        Termination::Truncated(_) => Err(Failure {
            code: Failure::RESOURCE,
            message: format!("no equilibrium or cycle within {max_steps} activations"),
        }),
        _ => Ok(()),
    }
}

fn cmd_control(path: &std::path::Path, out: &mut Report) -> Result<(), Failure> {
    let text = input::read(path)?;
    let inst = format::parse_control_instance(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let verdict = decide_control(&inst)?;
    out.control(&inst, &verdict);
    Ok(())
}

fn cmd_search(
    options: SearchOptions,
    config: &SolveConfig,
    outputs: &[Option<PathBuf>; 3],
    out: &mut Report,
) -> Result<(), Failure> {
    let problem = search::build_problem(options)?;
    let result = search::solve(&problem, config)?;
    let verified = match &result.solution {
        Some(sol) => Some(search::verify_no_ne(&sol.choice, &sol.prefs)?),
        None => None,
    };
    out.search(options, &result, verified);
    if let Some(sol) = &result.solution {
        let cs = sol.choice.candidates();
        let files = [
            Some(format::write_choice_function(&sol.choice)),
            Some(format::write_preferences(&sol.prefs, cs)),
            sol.tournament
                .as_ref()
                .map(|t| format::write_tournament(t, &candidacy::TieBreakOrder::lexicographic(cs.len()))),
        ];
        for (name, (path, text)) in ["choice", "prefs", "tournament"].iter().zip(outputs.iter().zip(files)) {
            let Some(text) = text else { continue };
            match path {
                Some(p) => std::fs::write(p, &text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
                None => out.file_block(name, &text),
            }
        }
    }
    match (result.status, verified) {
        (SearchStatus::Inconclusive, _) => Err(Failure {
            code: Failure::RESOURCE,
            message: "node limit reached before the search finished".into(),
        }),
        (_, Some(false)) => Err(Failure::check("the solution has a Nash equilibrium")),
        _ => Ok(()),
    }
}

fn cmd_paper_verify(
    filter: Option<&str>,
    dir: Option<&std::path::Path>,
    list: bool,
    out: &mut Report,
) -> Result<(), Failure> {
    if list {
        for c in verify::CHECKS
            .iter()
            .filter(|c| filter.is_none_or(|f| c.name.contains(f)))
        {
            out.record(
                format!("{}: {}", c.name, c.summary),
                json!({"check": c.name, "summary": c.summary}),
            );
        }
        return Ok(());
    }
    let fixtures = match dir {
        Some(d) => FixtureSet::from_dir(d)?,
        None => FixtureSet::embedded()?,
    };
    let outcomes = verify::run_checks(&fixtures, filter);
    if outcomes.is_empty() {
        return Err(Failure::input(format!("no check matches {:?}", filter.unwrap_or(""))));
    }
    for o in &outcomes {
        out.check(o);
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    out.record(
        format!("{passed} of {} checks passed", outcomes.len()),
        json!({"passed": passed, "total": outcomes.len()}),
    );
    if passed == outcomes.len() {
        Ok(())
    } else {
        Err(Failure::check(format!("{} check(s) failed", outcomes.len() - passed)))
    }
}
