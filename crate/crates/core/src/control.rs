//! Candidate control by deleting and/or adding candidates, with an optional
//! consent requirement on every moved candidate.
//!
//! All modes are decided by exhaustive search over admissible change sets,
//! smallest first and then lexicographically, so the witness returned for a
//! yes-instance is the lexicographically least among the smallest ones.
//!
//! The "unique winner" of the control literature is the tie-broken winner
//! here, since every rule is deterministic.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::candidates::{combinations, Candidate, State, TieBreakOrder};
use crate::error::{Error, Result};
use crate::game::{CandidacyGame, EquilibriumKind, Outcome};
use crate::profile::CandidatePreferenceProfile;
use crate::rules::{ChoiceFunction, OutcomeSource};

/// Exhaustive control search is limited to this many candidates.
pub const MAX_CONTROL_CANDIDATES: usize = 12;
/// Bridge checks classify every coalition, so they are kept smaller.
pub const MAX_BRIDGE_CANDIDATES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ControlMode {
    /// Constructive control by deleting candidates.
    Ccdc,
    /// Constructive control by adding candidates.
    Ccac,
    /// Destructive control by deleting candidates.
    Dcdc,
    /// Destructive control by adding candidates.
    Dcac,
    /// Destructive control by deleting and adding candidates.
    DcDcAc,
}

impl ControlMode {
    pub fn is_constructive(self) -> bool {
        matches!(self, ControlMode::Ccdc | ControlMode::Ccac)
    }

    pub fn deletes(self) -> bool {
        matches!(self, ControlMode::Ccdc | ControlMode::Dcdc | ControlMode::DcDcAc)
    }

    pub fn adds(self) -> bool {
        matches!(self, ControlMode::Ccac | ControlMode::Dcac | ControlMode::DcDcAc)
    }

    pub fn name(self) -> &'static str {
        match self {
            ControlMode::Ccdc => "ccdc",
            ControlMode::Ccac => "ccac",
            ControlMode::Dcdc => "dcdc",
            ControlMode::Dcac => "dcac",
            ControlMode::DcDcAc => "dc-dc+ac",
        }
    }
}

impl fmt::Display for ControlMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ControlMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ccdc" => Ok(ControlMode::Ccdc),
            "ccac" => Ok(ControlMode::Ccac),
            "dcdc" => Ok(ControlMode::Dcdc),
            "dcac" => Ok(ControlMode::Dcac),
            "dc-dc+ac" | "dcdc+ac" | "dc(dc+ac)" => Ok(ControlMode::DcDcAc),
            other => Err(Error::invalid(format!("unknown control mode {other:?}"))),
        }
    }
}

/// One control question.
///
/// `registered` is the status-quo running set: `C` for deleting modes, `C1`
/// for adding modes, the current state for the multimode. `pool` holds the
/// candidates that may be added (`C2`) and is empty for deleting modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlInstance {
    pub mode: ControlMode,
    pub consenting: bool,
    pub source: OutcomeSource,
    pub tiebreak: TieBreakOrder,
    /// The candidate to make win (constructive) or lose (destructive).
    /// `None` is only meaningful for destructive modes and stands for the
    /// empty outcome: any real winner defeats it.
    pub distinguished: Outcome,
    /// Maximum number of candidates deleted plus added; `None` = unlimited.
    pub budget: Option<usize>,
    pub registered: State,
    pub pool: State,
    /// Required iff `consenting`.
    pub consent_prefs: Option<CandidatePreferenceProfile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ControlWitness {
    pub removed: State,
    pub added: State,
    pub running: State,
    pub winner: Outcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ControlVerdict {
    pub decision: bool,
    pub baseline_winner: Outcome,
    pub witness: Option<ControlWitness>,
}

impl ControlInstance {
    /// Deleting-mode instance over all candidates of `source`.
    pub fn deleting(
        mode: ControlMode,
        source: OutcomeSource,
        tiebreak: TieBreakOrder,
        distinguished: Candidate,
        budget: usize,
    ) -> Self {
        let registered = source.candidates().full();
        ControlInstance {
            mode,
            consenting: false,
            source,
            tiebreak,
            distinguished: Some(distinguished),
            budget: Some(budget),
            registered,
            pool: State::empty(),
            consent_prefs: None,
        }
    }

    /// Adding-mode instance with registered set `c1` and pool `c2`.
    pub fn adding(
        mode: ControlMode,
        source: OutcomeSource,
        tiebreak: TieBreakOrder,
        distinguished: Candidate,
        c1: State,
        c2: State,
    ) -> Self {
        ControlInstance {
            mode,
            consenting: false,
            source,
            tiebreak,
            distinguished: Some(distinguished),
            budget: None,
            registered: c1,
            pool: c2,
            consent_prefs: None,
        }
    }

    #[must_use]
    pub fn with_consent(mut self, prefs: CandidatePreferenceProfile) -> Self {
        self.consenting = true;
        self.consent_prefs = Some(prefs);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.source.candidates().len();
        if m > MAX_CONTROL_CANDIDATES {
            return Err(Error::ResourceLimit {
                what: "control search",
                requested: m,
                bound: MAX_CONTROL_CANDIDATES,
            });
        }
        let all = State::full(m);
        if self.tiebreak.len() != m {
            return Err(Error::invalid("tie-break order does not match the candidate set"));
        }
        if !self.registered.is_subset_of(all) || !self.pool.is_subset_of(all) {
            return Err(Error::invalid("control sets name unknown candidates"));
        }
        if !self.registered.intersection(self.pool).is_empty() {
            return Err(Error::invalid("registered candidates and pool must be disjoint"));
        }
        if !self.mode.adds() && !self.pool.is_empty() {
            return Err(Error::invalid(format!(
                "{} has no pool of candidates to add",
                self.mode
            )));
        }
        match self.distinguished {
            Some(c) if c >= m => return Err(Error::invalid("distinguished candidate unknown")),
            Some(c) if !self.mode.adds() && !self.registered.contains(c) => {
                return Err(Error::invalid("distinguished candidate must be running"));
            }
            Some(c) if !self.registered.union(self.pool).contains(c) => {
                return Err(Error::invalid(
                    "distinguished candidate must be registered or in the pool",
                ));
            }
            None if self.mode.is_constructive() => {
                return Err(Error::invalid("constructive control needs a distinguished candidate"));
            }
            _ => {}
        }
        if let Some(k) = self.budget {
            if self.mode.deletes() && !self.mode.adds() && k > self.registered.len() {
                return Err(Error::invalid(format!(
                    "budget {k} exceeds the {} registered candidates",
                    self.registered.len()
                )));
            }
        }
        match (&self.consent_prefs, self.consenting) {
            (None, true) => Err(Error::invalid("consenting control needs candidate preferences")),
            (Some(p), true) if p.len() != m => {
                Err(Error::invalid("consent preferences do not match the candidate set"))
            }
            _ => Ok(()),
        }
    }

    /// Candidates the chair may delete. The distinguished candidate is never
    /// deleted.
    fn removable(&self) -> State {
        if !self.mode.deletes() {
            return State::empty();
        }
        match self.distinguished {
            Some(c) => self.registered.without(c),
            None => self.registered,
        }
    }

    fn addable(&self) -> State {
        if self.mode.adds() {
            self.pool
        } else {
            State::empty()
        }
    }

    /// Whether moving exactly `changes` achieves the goal with consent.
    /// `outcome` maps a running set to its winner.
    fn check(&self, changes: State, outcome: &dyn Fn(State) -> Outcome) -> Option<ControlWitness> {
        let running = self.registered.toggle(changes);
        let winner = outcome(running);
        let goal = if self.mode.is_constructive() {
            winner == self.distinguished
        } else {
            winner != self.distinguished
        };
        if !goal {
            return None;
        }
        if self.consenting {
            let prefs = self.consent_prefs.as_ref().expect("validated");
            let baseline = outcome(self.registered);
            // constructive: movers want c; destructive: movers want the new winner
            let target = if self.mode.is_constructive() {
                self.distinguished
            } else {
                winner
            };
            if !changes.iter().all(|z| prefs.prefers(z, target, baseline)) {
                return None;
            }
        }
        Some(ControlWitness {
            removed: changes.intersection(self.registered),
            added: changes.difference(self.registered),
            running,
            winner,
        })
    }

    /// Replays `witness` against this instance.
    pub fn witness_is_valid(&self, witness: &ControlWitness) -> Result<bool> {
        self.validate()?;
        let changes = witness.removed.union(witness.added);
        let within_budget = self.budget.is_none_or(|k| changes.len() <= k);
        let admissible = witness.removed.is_subset_of(self.removable())
            && witness.added.is_subset_of(self.addable())
            && within_budget;
        if !admissible {
            return Ok(false);
        }
        let outcome = |s: State| self.source.outcome(s, &self.tiebreak).expect("validated");
        Ok(self.check(changes, &outcome).as_ref() == Some(witness))
    }
}

/// Decides `inst` by exhaustive search.
pub fn decide_control(inst: &ControlInstance) -> Result<ControlVerdict> {
    inst.validate()?;
    let table: ChoiceFunction = inst.source.choice_table(&inst.tiebreak, MAX_CONTROL_CANDIDATES)?;
    let outcome = |s: State| table.get(s);
    let movable = inst.removable().union(inst.addable());
    let max = inst.budget.unwrap_or(movable.len()).min(movable.len());
    let witness = (0..=max)
        .flat_map(|k| combinations(movable, k))
        .find_map(|changes| inst.check(changes, &outcome));
    Ok(ControlVerdict {
        decision: witness.is_some(),
        baseline_winner: outcome(inst.registered),
        witness,
    })
}

/// Both sides of the equilibrium / consenting-control correspondence for one
/// state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BridgeRecord {
    pub state: State,
    pub is_ne: bool,
    pub is_se: bool,
    /// Consenting destructive delete+add control against the current winner,
    /// one change at most.
    pub single_change_control: bool,
    /// The same without a bound on the number of changes.
    pub unbounded_control: bool,
    pub ne_equiv: bool,
    pub se_equiv: bool,
}

impl BridgeRecord {
    pub fn agrees(&self) -> bool {
        self.ne_equiv && self.se_equiv
    }
}

/// The consenting multimode instance matching state `s` of `game`.
pub fn bridge_instance(game: &CandidacyGame, s: State, budget: Option<usize>) -> ControlInstance {
    ControlInstance {
        mode: ControlMode::DcDcAc,
        consenting: true,
        source: game.source().clone(),
        tiebreak: game.tiebreak().clone(),
        distinguished: game.outcome(s),
        budget,
        registered: s,
        pool: game.full_state().difference(s),
        consent_prefs: Some(game.prefs().clone()),
    }
}

/// Classifies `s` in the game and, independently, decides the matching
/// consenting control questions.
pub fn bridge_check(game: &CandidacyGame, s: State) -> Result<BridgeRecord> {
    let m = game.num_candidates();
    if m > MAX_BRIDGE_CANDIDATES {
        return Err(Error::ResourceLimit {
            what: "bridge check",
            requested: m,
            bound: MAX_BRIDGE_CANDIDATES,
        });
    }
    let report = game.classify(s);
    let (is_ne, is_se) = (report.satisfies(EquilibriumKind::Nash), report.is_se());
    let single = decide_control(&bridge_instance(game, s, Some(1)))?.decision;
    let unbounded = decide_control(&bridge_instance(game, s, None))?.decision;
    Ok(BridgeRecord {
        state: s,
        is_ne,
        is_se,
        single_change_control: single,
        unbounded_control: unbounded,
        ne_equiv: is_ne == !single,
        se_equiv: is_se == !unbounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rules::Rule;

    fn example1_dcdc(k: usize) -> ControlInstance {
        let f = fixtures::example1();
        ControlInstance::deleting(ControlMode::Dcdc, f.source(Rule::Borda), f.tiebreak.clone(), 2, k)
    }

    #[test]
    fn dcdc_deletes_d() {
        let v = decide_control(&example1_dcdc(1)).unwrap();
        assert!(v.decision);
        let w = v.witness.unwrap();
        assert_eq!(w.removed, State::singleton(3));
        assert_eq!(w.winner, Some(0));
    }

    #[test]
    fn consenting_dcdc_deletes_d() {
        let f = fixtures::example1();
        let v = decide_control(&example1_dcdc(1).with_consent(f.prefs)).unwrap();
        assert!(v.decision);
        assert_eq!(v.witness.unwrap().removed, State::singleton(3));
    }

    #[test]
    fn zero_budget_keeps_status_quo() {
        let f = fixtures::example1();
        assert!(!decide_control(&example1_dcdc(0)).unwrap().decision);
        for c in 0..4 {
            let inst = ControlInstance::deleting(ControlMode::Ccdc, f.source(Rule::Borda), f.tiebreak.clone(), c, 0);
            assert_eq!(decide_control(&inst).unwrap().decision, c == 2);
        }
    }

    #[test]
    fn ccac_with_empty_pool() {
        let f = fixtures::example1();
        let c1 = State::from_indices([0, 1, 2]); // abc elects a
        for c in 0..3 {
            let inst = ControlInstance::adding(
                ControlMode::Ccac,
                f.source(Rule::Borda),
                f.tiebreak.clone(),
                c,
                c1,
                State::empty(),
            );
            assert_eq!(decide_control(&inst).unwrap().decision, c == 0);
        }
    }

    #[test]
    fn consent_is_required() {
        let mut inst = example1_dcdc(1);
        inst.consenting = true;
        assert!(matches!(decide_control(&inst), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn invalid_instances() {
        let f = fixtures::example1();
        let mut inst = example1_dcdc(5);
        assert!(inst.validate().is_err());
        inst.budget = Some(1);
        inst.pool = State::singleton(0);
        assert!(inst.validate().is_err());
        let bad = ControlInstance::adding(
            ControlMode::Ccac,
            f.source(Rule::Borda),
            f.tiebreak.clone(),
            3,
            State::from_indices([0, 1]),
            State::from_indices([1, 2]),
        );
        assert!(bad.validate().is_err());
    }

    #[test]
    fn modes_parse() {
        for mode in [
            ControlMode::Ccdc,
            ControlMode::Ccac,
            ControlMode::Dcdc,
            ControlMode::Dcac,
            ControlMode::DcDcAc,
        ] {
            assert_eq!(mode.name().parse::<ControlMode>().unwrap(), mode);
        }
    }

    #[test]
    fn bridge_on_example1() {
        let f = fixtures::example1();
        let g = CandidacyGame::new(f.source(Rule::Borda), f.prefs.clone(), f.tiebreak.clone()).unwrap();
        let full = bridge_check(&g, State::full(4)).unwrap();
        assert!(!full.is_ne && full.single_change_control && full.agrees());
        let abc = bridge_check(&g, State::from_indices([0, 1, 2])).unwrap();
        assert!(abc.is_se && !abc.unbounded_control && abc.agrees());
    }
}
