//! The candidacy game: each potential candidate decides to run or not, and
//! the outcome of a state is the winner among those who run.
//!
//! The empty state has the outcome `None` (no winner), which every candidate
//! ranks below every real candidate. Joining an empty election is therefore
//! always improving, and leaving a one-candidate election never is.

pub mod dynamics;

use serde::Serialize;

use crate::candidates::{combinations, Candidate, CandidateSet, State, TieBreakOrder};
use crate::error::{Error, Result};
use crate::profile::CandidatePreferenceProfile;
use crate::rules::{ChoiceFunction, Electorate, OutcomeSource, Rule};
use crate::tournament::{MajorityGraph, WeightedTournament};

pub use dynamics::{best_response_dynamics, Activation, DynamicsRun, Termination};

/// Largest game we tabulate outcomes for.
pub const MAX_GAME_CANDIDATES: usize = 16;
/// Default candidate bound for enumerating Nash equilibria.
pub const DEFAULT_NE_BOUND: usize = 12;
/// Default candidate bound for enumerating k-NE (k >= 2) and strong equilibria.
pub const DEFAULT_SE_BOUND: usize = 8;

/// Winner of a state; `None` when nobody runs.
pub type Outcome = Option<Candidate>;

/// A coalition jointly flipping its candidacy bits.
///
/// Only moves where every member changes its choice are listed: a member
/// that keeps its choice could be dropped from the coalition without
/// changing the move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Deviation {
    pub coalition: State,
    pub from: State,
    pub to: State,
    pub old_winner: Outcome,
    pub new_winner: Outcome,
}

impl Deviation {
    /// Coalition members entering the election.
    pub fn joiners(&self) -> State {
        self.coalition.difference(self.from)
    }

    /// Coalition members withdrawing.
    pub fn leavers(&self) -> State {
        self.coalition.intersection(self.from)
    }
}

/// Which solution concept to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EquilibriumKind {
    Nash,
    /// No improving move for any coalition of at most `k` candidates.
    KNash(usize),
    Strong,
}

impl EquilibriumKind {
    /// Largest coalition size the concept guards against (`None` = any).
    pub fn max_coalition(self) -> Option<usize> {
        match self {
            EquilibriumKind::Nash => Some(1),
            EquilibriumKind::KNash(k) => Some(k),
            EquilibriumKind::Strong => None,
        }
    }
}

/// Classification of one state.
///
/// Coalitions are searched by size, so `first_deviation` is the smallest
/// improving move (lexicographically first among those of that size). It is
/// the witness for every flag that is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateReport {
    pub state: State,
    pub winner: Outcome,
    pub first_deviation: Option<Deviation>,
}

impl StateReport {
    pub fn is_ne(&self) -> bool {
        self.is_k_ne(1)
    }

    pub fn is_k_ne(&self, k: usize) -> bool {
        self.first_deviation.is_none_or(|d| d.coalition.len() > k)
    }

    pub fn is_se(&self) -> bool {
        self.first_deviation.is_none()
    }

    pub fn satisfies(&self, kind: EquilibriumKind) -> bool {
        match kind.max_coalition() {
            Some(k) => self.is_k_ne(k),
            None => self.is_se(),
        }
    }

    /// The deviation refuting `kind`, if any.
    pub fn witness(&self, kind: EquilibriumKind) -> Option<Deviation> {
        if self.satisfies(kind) {
            None
        } else {
            self.first_deviation
        }
    }
}

/// A candidacy game over a fixed set of potential candidates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidacyGame {
    candidates: CandidateSet,
    source: OutcomeSource,
    prefs: CandidatePreferenceProfile,
    tiebreak: TieBreakOrder,
    /// Outcome of every state, indexed by bitmask.
    outcomes: Vec<Outcome>,
}

impl CandidacyGame {
    pub fn new(source: OutcomeSource, prefs: CandidatePreferenceProfile, tiebreak: TieBreakOrder) -> Result<Self> {
        let candidates = source.candidates().clone();
        let m = candidates.len();
        if prefs.len() != m || tiebreak.len() != m {
            return Err(Error::invalid(
                "preferences, tie-break and outcome source must cover the same candidates",
            ));
        }
        let table = source.choice_table(&tiebreak, MAX_GAME_CANDIDATES)?;
        let outcomes = State::all(m).map(|s| table.get(s)).collect();
        Ok(CandidacyGame {
            candidates,
            source,
            prefs,
            tiebreak,
            outcomes,
        })
    }

    pub fn from_rule(
        rule: Rule,
        electorate: Electorate,
        prefs: CandidatePreferenceProfile,
        tiebreak: TieBreakOrder,
    ) -> Result<Self> {
        Self::new(OutcomeSource::Rule { rule, electorate }, prefs, tiebreak)
    }

    /// A game given directly by its choice function.
    pub fn from_choice_function(cf: ChoiceFunction, prefs: CandidatePreferenceProfile) -> Result<Self> {
        let m = cf.num_candidates();
        Self::new(OutcomeSource::Table(cf), prefs, TieBreakOrder::lexicographic(m))
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn source(&self) -> &OutcomeSource {
        &self.source
    }

    pub fn prefs(&self) -> &CandidatePreferenceProfile {
        &self.prefs
    }

    pub fn tiebreak(&self) -> &TieBreakOrder {
        &self.tiebreak
    }

    pub fn full_state(&self) -> State {
        self.candidates.full()
    }

    /// Every state of the game.
    pub fn states(&self) -> impl Iterator<Item = State> {
        State::all(self.num_candidates())
    }

    pub fn outcome(&self, s: State) -> Outcome {
        assert!(s.is_subset_of(self.full_state()), "state outside the game");
        self.outcomes[s.bits() as usize]
    }

    /// The choice function underlying the game.
    pub fn choice_function(&self) -> ChoiceFunction {
        ChoiceFunction::from_fn(self.candidates.clone(), |s| Ok(self.outcome(s).expect("nonempty")))
            .expect("outcomes are members of their state")
    }

    /// The move of `coalition` from `s` if every member strictly prefers its
    /// result.
    pub fn try_deviation(&self, s: State, coalition: State) -> Option<Deviation> {
        if coalition.is_empty() {
            return None;
        }
        let to = s.toggle(coalition);
        let (old, new) = (self.outcome(s), self.outcome(to));
        coalition
            .iter()
            .all(|z| self.prefs.prefers(z, new, old))
            .then_some(Deviation {
                coalition,
                from: s,
                to,
                old_winner: old,
                new_winner: new,
            })
    }

    fn coalitions(&self, max_coalition: Option<usize>) -> impl Iterator<Item = State> + '_ {
        let m = self.num_candidates();
        let max = max_coalition.unwrap_or(m).min(m);
        (1..=max).flat_map(move |k| combinations(State::full(m), k))
    }

    /// All improving moves from `s` by coalitions of at most `max_coalition`
    /// members (`None` = any size), by size then lexicographically.
    pub fn improving_deviations(&self, s: State, max_coalition: Option<usize>) -> Vec<Deviation> {
        self.coalitions(max_coalition)
            .filter_map(|z| self.try_deviation(s, z))
            .collect()
    }

    pub fn first_deviation(&self, s: State, max_coalition: Option<usize>) -> Option<Deviation> {
        self.coalitions(max_coalition).find_map(|z| self.try_deviation(s, z))
    }

    pub fn classify(&self, s: State) -> StateReport {
        StateReport {
            state: s,
            winner: self.outcome(s),
            first_deviation: self.first_deviation(s, None),
        }
    }

    /// Classifies `s` only as far as `kind` requires; `first_deviation` is the
    /// smallest improving move of size within the kind's bound.
    pub fn classify_for(&self, s: State, kind: EquilibriumKind) -> StateReport {
        StateReport {
            state: s,
            winner: self.outcome(s),
            first_deviation: self.first_deviation(s, kind.max_coalition()),
        }
    }

    pub fn is_ne(&self, s: State) -> bool {
        self.first_deviation(s, Some(1)).is_none()
    }

    /// Every state satisfying `kind`, in bitmask order, with the default
    /// candidate bounds.
    pub fn enumerate_equilibria(&self, kind: EquilibriumKind) -> Result<Vec<State>> {
        let bound = match kind {
            EquilibriumKind::Nash | EquilibriumKind::KNash(1) => DEFAULT_NE_BOUND,
            _ => DEFAULT_SE_BOUND,
        };
        self.enumerate_equilibria_bounded(kind, bound)
    }

    pub fn enumerate_equilibria_bounded(&self, kind: EquilibriumKind, bound: usize) -> Result<Vec<State>> {
        let m = self.num_candidates();
        if m > bound {
            return Err(Error::ResourceLimit {
                what: "equilibrium enumeration",
                requested: m,
                bound,
            });
        }
        // k >= m cannot be distinguished from any-size coalitions
        let kind = match kind {
            EquilibriumKind::KNash(k) if k >= m => EquilibriumKind::Strong,
            EquilibriumKind::KNash(0) => {
                return Err(Error::invalid("k-NE needs k >= 1"));
            }
            other => other,
        };
        Ok(self
            .states()
            .filter(|&s| self.first_deviation(s, kind.max_coalition()).is_none())
            .collect())
    }

    /// The game with one more potential candidate, ranked last by every voter
    /// and by every existing candidate. The newcomer ranks itself first, then
    /// the others in index order, and has the lowest tie-break priority.
    pub fn lift_with_bottom_candidate(&self, label: &str) -> Result<CandidacyGame> {
        let source = match &self.source {
            OutcomeSource::Rule { rule, electorate } => OutcomeSource::Rule {
                rule: *rule,
                electorate: match electorate {
                    Electorate::Profile(p) => Electorate::Profile(p.lift_with_bottom_candidate(label)?),
                    Electorate::Tournament(t) => Electorate::Tournament(t.lift_with_bottom_candidate(label)?),
                },
            },
            OutcomeSource::Table(_) => {
                return Err(Error::unsupported(
                    "only rule-based games can be lifted with a bottom-ranked candidate",
                ))
            }
        };
        let mut priority = self.tiebreak.priority().to_vec();
        priority.push(self.num_candidates());
        CandidacyGame::new(
            source,
            self.prefs.lift_with_bottom_candidate(),
            TieBreakOrder::new(priority)?,
        )
    }
}

/// `c` together with everyone `c` beats.
pub fn dom_set(c: Candidate, graph: &MajorityGraph) -> State {
    graph.beaten_by(c).with(c)
}

/// For Copeland^0, Copeland^1 and the uncovered set, `Dom(c)` of the full-set
/// winner `c` is a Nash equilibrium. Returns that state with its
/// classification, or a certification error if it is not an NE.
///
/// Copeland^1 uses the weak majority (`N(c,y) >= n/2`) in place of strict
/// majority when building `Dom(c)`.
pub fn certify_dom_equilibrium(game: &CandidacyGame) -> Result<(State, StateReport)> {
    let (rule, electorate) = match game.source() {
        OutcomeSource::Rule { rule, electorate } => (*rule, electorate),
        OutcomeSource::Table(_) => {
            return Err(Error::unsupported("Dom(c) needs a profile or tournament"));
        }
    };
    let t: WeightedTournament = electorate.tournament();
    let c = game.outcome(game.full_state()).expect("a nonempty state has a winner");
    let dom = if rule == Rule::COPELAND1 {
        weak_dom_set(c, &t)
    } else if rule == Rule::COPELAND0 || rule == Rule::UncoveredSet {
        dom_set(c, &t.majority_graph())
    } else {
        return Err(Error::unsupported(format!(
            "Dom(c) equilibria are only claimed for copeland0, copeland1 and uc, not {rule}"
        )));
    };
    let report = game.classify_for(dom, EquilibriumKind::Nash);
    if !report.is_ne() {
        return Err(Error::Certification(format!(
            "Dom({}) = {} is not an NE under {rule}",
            game.candidates().label(c),
            game.candidates().format_subset(dom)
        )));
    }
    Ok((dom, report))
}

/// `c` together with everyone `c` beats or ties.
pub fn weak_dom_set(c: Candidate, t: &WeightedTournament) -> State {
    State::from_indices((0..t.num_candidates()).filter(|&y| y == c || 2 * t.support(c, y) >= t.voter_count()))
}

#[cfg(test)]
mod tests;
