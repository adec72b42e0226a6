//! Searching for games without a Nash equilibrium.
//!
//! The unknowns are a choice function (which candidate wins each nonempty
//! running set), the candidates' preferences, and for every state a chosen
//! unilateral deviation that improves things for the deviator. A solution
//! therefore describes a game in which every state has an improving move,
//! i.e. a game without NE. With the Borda layer switched on, the choice
//! function must additionally be the Borda winner (lexicographic tie-break)
//! of some weighted tournament with at most `n` voters.
//!
//! Preferences are strict total orders: alongside irreflexivity,
//! transitivity and self-support, every pair is ordered one way or the
//! other.

mod problem;
pub mod solver;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::candidates::{CandidateSet, State};
use crate::error::{Error, Result};
use crate::game::{CandidacyGame, EquilibriumKind};
use crate::profile::CandidatePreferenceProfile;
use crate::rules::ChoiceFunction;
use crate::tournament::WeightedTournament;

pub use problem::{Layer, ProblemCounts, SearchProblem};
pub use solver::{Assignment, SolverStats};

use solver::{Outcome, Solver, Var};

pub const MIN_SEARCH_CANDIDATES: usize = 2;
pub const MAX_SEARCH_CANDIDATES: usize = 5;
/// Default voter bound of the Borda layer.
pub const DEFAULT_BORDA_VOTERS: u32 = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchOptions {
    pub m: usize,
    pub borda: bool,
    /// Voter bound of the Borda layer; ignored without it.
    pub n: u32,
}

impl SearchOptions {
    pub fn plain(m: usize) -> Self {
        SearchOptions {
            m,
            borda: false,
            n: DEFAULT_BORDA_VOTERS,
        }
    }

    pub fn borda(m: usize, n: u32) -> Self {
        SearchOptions { m, borda: true, n }
    }
}

/// Which variable group the solver decides first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum BranchOrder {
    /// Winners (largest states first), then the tournament, preferences and
    /// deviations. Fixing the tournament right after the winners settles
    /// Borda consistency before any preference is explored.
    #[default]
    WinnersFirst,
    /// Winners, preferences, deviations, and the tournament last. Much slower
    /// on the Borda layer, where it must refute every preference assignment
    /// of each inconsistent winner table separately.
    TournamentLast,
    /// Tournament first, then winners, preferences and deviations.
    TournamentFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveConfig {
    pub order: BranchOrder,
    pub node_limit: Option<u64>,
    /// Shuffles the states within each cardinality level when set.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchStatus {
    Sat,
    Unsat,
    /// Node limit reached; says nothing about satisfiability.
    Inconclusive,
}

/// A decoded satisfying assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub choice: ChoiceFunction,
    pub prefs: CandidatePreferenceProfile,
    /// Present when the Borda layer was active.
    pub tournament: Option<WeightedTournament>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub solution: Option<Solution>,
    pub stats: SolverStats,
}

pub fn build_problem(options: SearchOptions) -> Result<SearchProblem> {
    if !(MIN_SEARCH_CANDIDATES..=MAX_SEARCH_CANDIDATES).contains(&options.m) {
        return Err(Error::invalid(format!(
            "search needs {MIN_SEARCH_CANDIDATES} <= m <= {MAX_SEARCH_CANDIDATES}, got {}",
            options.m
        )));
    }
    if options.borda && options.n == 0 {
        return Err(Error::invalid("the Borda layer needs at least one voter"));
    }
    Ok(SearchProblem::new(options))
}

fn branch_order(prob: &SearchProblem, config: &SolveConfig) -> Vec<Var> {
    let m = prob.options().m;
    let mut levels: Vec<Vec<State>> = (1..=m)
        .rev()
        .map(|k| State::all(m).filter(|s| s.len() == k).collect())
        .collect();
    if let Some(seed) = config.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for level in &mut levels {
            level.shuffle(&mut rng);
        }
    }
    let winners = levels
        .iter()
        .flatten()
        .flat_map(|&s| s.iter().map(move |i| Var::Bool(prob.winner_var(s, i))));
    let prefs = prob.preference_vars().into_iter().map(Var::Bool);
    let devs = prob.deviation_vars().into_iter().map(Var::Bool);
    let ints = prob.tournament_vars().into_iter().map(Var::Int);
    match config.order {
        BranchOrder::WinnersFirst => winners.chain(ints).chain(prefs).chain(devs).collect(),
        BranchOrder::TournamentLast => winners.chain(prefs).chain(devs).chain(ints).collect(),
        BranchOrder::TournamentFirst => ints.chain(winners).chain(prefs).chain(devs).collect(),
    }
}

/// Complete search; deterministic for a fixed `config`.
pub fn solve(prob: &SearchProblem, config: &SolveConfig) -> Result<SearchResult> {
    let order = branch_order(prob, config);
    let (outcome, stats) = Solver::new(prob.model()).solve(&order, config.node_limit);
    Ok(match outcome {
        Outcome::Sat(asg) => SearchResult {
            status: SearchStatus::Sat,
            solution: Some(prob.decode(&asg)?),
            stats,
        },
        Outcome::Unsat => SearchResult {
            status: SearchStatus::Unsat,
            solution: None,
            stats,
        },
        Outcome::Inconclusive => SearchResult {
            status: SearchStatus::Inconclusive,
            solution: None,
            stats,
        },
    })
}

/// Whether the choice-function game has no Nash equilibrium, computed by the
/// game engine rather than by the constraint model.
pub fn verify_no_ne(cf: &ChoiceFunction, prefs: &CandidatePreferenceProfile) -> Result<bool> {
    let game = CandidacyGame::from_choice_function(cf.clone(), prefs.clone())?;
    Ok(game.enumerate_equilibria(EquilibriumKind::Nash)?.is_empty())
}

fn alphabetic(m: usize) -> CandidateSet {
    CandidateSet::alphabetic(m).expect("search sizes are small")
}
