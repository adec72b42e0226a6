//! Deterministic single-winner rules over a running subset of candidates.
//!
//! Every rule first computes its (possibly tied) set of co-winners on the
//! restriction of the electorate to the running set, then returns the most
//! prioritary co-winner under the tie-break order projected to that set.
//!
//! Tournament-based rules only need `N(x, y)` for running `x, y`, and those
//! counts do not change under restriction, so they read the full weighted
//! tournament directly. Plurality and the profile route of Borda walk the
//! ballots.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::candidates::{Candidate, CandidateSet, State, TieBreakOrder};
use crate::error::{Error, Result};
use crate::profile::VoterProfile;
use crate::tournament::WeightedTournament;

/// Default bound on the number of candidates for tabulating a choice function.
pub const DEFAULT_TABLE_BOUND: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Plurality,
    Borda,
    Maximin,
    /// Copeland with `alpha` points per head-to-head tie, `0 <= alpha <= 1`.
    Copeland(Ratio<u32>),
    UncoveredSet,
}

impl Rule {
    pub const COPELAND0: Rule = Rule::Copeland(Ratio::new_raw(0, 1));
    pub const COPELAND05: Rule = Rule::Copeland(Ratio::new_raw(1, 2));
    pub const COPELAND1: Rule = Rule::Copeland(Ratio::new_raw(1, 1));

    /// Every rule with a CLI selector.
    pub const ALL: [Rule; 7] = [
        Rule::Plurality,
        Rule::Borda,
        Rule::Maximin,
        Rule::COPELAND0,
        Rule::COPELAND05,
        Rule::COPELAND1,
        Rule::UncoveredSet,
    ];

    pub fn copeland(numer: u32, denom: u32) -> Result<Rule> {
        if denom == 0 || numer > denom {
            return Err(Error::invalid(format!(
                "Copeland tie score {numer}/{denom} must lie in [0, 1]"
            )));
        }
        Ok(Rule::Copeland(Ratio::new(numer, denom)))
    }

    /// Elects the Condorcet winner whenever one exists.
    pub fn is_condorcet_consistent(self) -> bool {
        matches!(self, Rule::Maximin | Rule::Copeland(_) | Rule::UncoveredSet)
    }

    pub fn needs_profile(self) -> bool {
        matches!(self, Rule::Plurality)
    }

    pub fn selector(self) -> String {
        match self {
            Rule::Plurality => "plurality".into(),
            Rule::Borda => "borda".into(),
            Rule::Maximin => "maximin".into(),
            Rule::UncoveredSet => "uc".into(),
            Rule::Copeland(a) if a == Ratio::from_integer(0) => "copeland0".into(),
            Rule::Copeland(a) if a == Ratio::new(1, 2) => "copeland05".into(),
            Rule::Copeland(a) if a == Ratio::from_integer(1) => "copeland1".into(),
            Rule::Copeland(a) => format!("copeland{}/{}", a.numer(), a.denom()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.selector())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plurality" => Ok(Rule::Plurality),
            "borda" => Ok(Rule::Borda),
            "maximin" => Ok(Rule::Maximin),
            "copeland0" => Ok(Rule::COPELAND0),
            "copeland05" => Ok(Rule::COPELAND05),
            "copeland1" => Ok(Rule::COPELAND1),
            "uc" => Ok(Rule::UncoveredSet),
            other => {
                if let Some((p, q)) = other.strip_prefix("copeland").and_then(|r| r.split_once('/')) {
                    if let (Ok(p), Ok(q)) = (p.parse(), q.parse()) {
                        return Rule::copeland(p, q);
                    }
                }
                Err(Error::invalid(format!("unknown rule {s:?}")))
            }
        }
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.selector())
    }
}

impl<'de> Deserialize<'de> for Rule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Rule, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What a rule is evaluated on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Electorate {
    Profile(VoterProfile),
    Tournament(WeightedTournament),
}

impl Electorate {
    pub fn candidates(&self) -> &CandidateSet {
        match self {
            Electorate::Profile(p) => p.candidates(),
            Electorate::Tournament(t) => t.candidates(),
        }
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates().len()
    }

    pub fn tournament(&self) -> WeightedTournament {
        match self {
            Electorate::Profile(p) => WeightedTournament::from_profile(p),
            Electorate::Tournament(t) => t.clone(),
        }
    }
}

fn check_subset(running: State, m: usize) -> Result<()> {
    if running.is_empty() {
        return Err(Error::invalid("a rule needs at least one running candidate"));
    }
    if !running.is_subset_of(State::full(m)) {
        return Err(Error::invalid("running set names unknown candidates"));
    }
    Ok(())
}

/// Most prioritary candidate among those with maximal score.
fn best_by_score(running: State, tb: &TieBreakOrder, score: impl Fn(Candidate) -> i64) -> Candidate {
    let top = running.iter().map(&score).max().expect("nonempty running set");
    let cowinners = State::from_indices(running.iter().filter(|&c| score(c) == top));
    tb.best(cowinners).expect("nonempty co-winner set")
}

/// Winner of `rule` on `electorate` restricted to `running`.
pub fn winner(rule: Rule, electorate: &Electorate, running: State, tb: &TieBreakOrder) -> Result<Candidate> {
    check_subset(running, electorate.num_candidates())?;
    if tb.len() != electorate.num_candidates() {
        return Err(Error::invalid("tie-break order does not match the candidate set"));
    }
    if let Some(c) = running.sole() {
        return Ok(c);
    }
    match (rule, electorate) {
        (Rule::Plurality, Electorate::Profile(p)) => Ok(plurality_winner(p, running, tb)),
        (Rule::Plurality, Electorate::Tournament(_)) => {
            Err(Error::unsupported("plurality needs a voter profile, not a tournament"))
        }
        (Rule::Borda, Electorate::Profile(p)) => Ok(borda_winner_from_profile(p, running, tb)),
        (_, Electorate::Profile(p)) => Ok(tournament_winner(
            rule,
            &WeightedTournament::from_profile(p),
            running,
            tb,
        )),
        (_, Electorate::Tournament(t)) => Ok(tournament_winner(rule, t, running, tb)),
    }
}

fn plurality_winner(p: &VoterProfile, running: State, tb: &TieBreakOrder) -> Candidate {
    let mut firsts = vec![0i64; p.num_candidates()];
    for b in p.ballots() {
        if let Some(top) = b.top_among(running) {
            firsts[top] += i64::from(b.count);
        }
    }
    best_by_score(running, tb, |c| firsts[c])
}

/// Borda scores of the restricted profile: `k-1, ..., 0` points for a
/// running set of size `k`.
pub fn borda_scores_from_profile(p: &VoterProfile, running: State) -> Vec<i64> {
    let k = running.len() as i64;
    let mut scores = vec![0i64; p.num_candidates()];
    for b in p.ballots() {
        let mut points = k - 1;
        for &c in b.ranking.iter().filter(|&&c| running.contains(c)) {
            scores[c] += points * i64::from(b.count);
            points -= 1;
        }
    }
    scores
}

fn borda_winner_from_profile(p: &VoterProfile, running: State, tb: &TieBreakOrder) -> Candidate {
    let scores = borda_scores_from_profile(p, running);
    best_by_score(running, tb, |c| scores[c])
}

/// `B(c) = sum of N(c, x)` over the other running candidates.
pub fn borda_score_from_tournament(t: &WeightedTournament, running: State, c: Candidate) -> i64 {
    running.without(c).iter().map(|x| i64::from(t.support(c, x))).sum()
}

pub fn maximin_score(t: &WeightedTournament, running: State, c: Candidate) -> i64 {
    running
        .without(c)
        .iter()
        .map(|x| i64::from(t.support(c, x)))
        .min()
        .unwrap_or(i64::MAX)
}

/// Copeland score scaled by the denominator of `alpha`, so it stays an
/// integer: `wins * q + ties * p` for `alpha = p/q`.
pub fn copeland_score(t: &WeightedTournament, running: State, c: Candidate, alpha: Ratio<u32>) -> i64 {
    let (mut wins, mut ties) = (0i64, 0i64);
    for x in running.without(c).iter() {
        if t.beats(c, x) {
            wins += 1;
        } else if t.ties(c, x) {
            ties += 1;
        }
    }
    wins * i64::from(*alpha.denom()) + ties * i64::from(*alpha.numer())
}

fn tournament_winner(rule: Rule, t: &WeightedTournament, running: State, tb: &TieBreakOrder) -> Candidate {
    if let Some(c) = running.sole() {
        return c;
    }
    match rule {
        Rule::Borda => best_by_score(running, tb, |c| borda_score_from_tournament(t, running, c)),
        Rule::Maximin => best_by_score(running, tb, |c| maximin_score(t, running, c)),
        Rule::Copeland(alpha) => best_by_score(running, tb, |c| copeland_score(t, running, c, alpha)),
        Rule::UncoveredSet => tb
            .best(uncovered_set_of(t, running))
            .expect("the uncovered set of a nonempty set is nonempty"),
        Rule::Plurality => unreachable!("plurality is dispatched on profiles only"),
    }
}

/// Two-step uncovered set of `running`. When majority ties leave it empty,
/// falls back to the candidates not covered in the usual sense (`x` covers
/// `c` if `x` beats `c` and everything `c` beats). Covering is a strict
/// partial order, so that set is never empty, and on tie-free tournaments
/// the two sets coincide.
fn uncovered_set_of(t: &WeightedTournament, running: State) -> State {
    let beaten_in = |x: Candidate| State::from_indices(running.iter().filter(|&y| t.beats(x, y)));
    let beaten: Vec<State> = (0..t.num_candidates()).map(beaten_in).collect();
    let beaters = |c: Candidate| running.iter().filter(move |&x| t.beats(x, c));
    let two_step = State::from_indices(
        running
            .iter()
            .filter(|&c| beaters(c).all(|x| beaten[c].iter().any(|y| beaten[y].contains(x)))),
    );
    if !two_step.is_empty() {
        return two_step;
    }
    State::from_indices(
        running
            .iter()
            .filter(|&c| !beaters(c).any(|x| beaten[c].is_subset_of(beaten[x]))),
    )
}

/// Candidates `c` of `running` such that every `x` beating `c` is beaten by
/// some `y` that `c` beats (all within `running`). If majority ties leave no
/// such candidate, returns the candidates nobody covers instead, where `x`
/// covers `c` if `x` beats `c` and everything `c` beats.
pub fn uncovered_set(electorate: &Electorate, running: State) -> Result<State> {
    check_subset(running, electorate.num_candidates())?;
    Ok(uncovered_set_of(&electorate.tournament(), running))
}

/// The candidate of `running` beating every other running candidate.
pub fn condorcet_winner(electorate: &Electorate, running: State) -> Result<Option<Candidate>> {
    check_subset(running, electorate.num_candidates())?;
    let t = electorate.tournament();
    Ok(condorcet_winner_of(&t, running))
}

pub fn condorcet_winner_of(t: &WeightedTournament, running: State) -> Option<Candidate> {
    running
        .iter()
        .find(|&c| running.without(c).iter().all(|x| t.beats(c, x)))
}

/// A winner for every nonempty subset of candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChoiceFunction {
    candidates: CandidateSet,
    /// Indexed by subset bitmask; entry 0 (the empty set) is unused.
    table: Vec<Candidate>,
}

impl ChoiceFunction {
    /// Tabulates `f` over all nonempty subsets.
    pub fn from_fn(candidates: CandidateSet, mut f: impl FnMut(State) -> Result<Candidate>) -> Result<Self> {
        let m = candidates.len();
        if m > 20 {
            return Err(Error::ResourceLimit {
                what: "choice function",
                requested: m,
                bound: 20,
            });
        }
        let mut table = vec![usize::MAX; 1 << m];
        for s in State::all(m).skip(1) {
            let w = f(s)?;
            if !s.contains(w) {
                return Err(Error::invalid(format!(
                    "winner {} of {} is not a member",
                    candidates.label(w),
                    candidates.format_subset(s)
                )));
            }
            table[s.bits() as usize] = w;
        }
        Ok(ChoiceFunction { candidates, table })
    }

    /// From explicit `(subset, winner)` entries; every nonempty subset must
    /// appear exactly once.
    pub fn from_entries(candidates: CandidateSet, entries: &[(State, Candidate)]) -> Result<Self> {
        let m = candidates.len();
        let mut table = vec![None; 1 << m];
        for &(s, w) in entries {
            if s.is_empty() || !s.is_subset_of(State::full(m)) {
                return Err(Error::invalid("choice entries must name nonempty known subsets"));
            }
            if table[s.bits() as usize].replace(w).is_some() {
                return Err(Error::invalid(format!(
                    "subset {} listed twice",
                    candidates.format_subset(s)
                )));
            }
        }
        Self::from_fn(candidates.clone(), |s| {
            table[s.bits() as usize]
                .ok_or_else(|| Error::invalid(format!("no winner given for {}", candidates.format_subset(s))))
        })
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    /// Winner of the nonempty subset `s`; `None` for the empty set.
    pub fn get(&self, s: State) -> Option<Candidate> {
        (!s.is_empty()).then(|| self.table[s.bits() as usize])
    }

    /// `(subset, winner)` for every nonempty subset in bitmask order.
    pub fn entries(&self) -> impl Iterator<Item = (State, Candidate)> + '_ {
        State::all(self.num_candidates())
            .skip(1)
            .map(|s| (s, self.table[s.bits() as usize]))
    }
}

/// Tabulates `rule` on every nonempty subset; `bound` caps the candidate count.
pub fn choice_table(rule: Rule, electorate: &Electorate, tb: &TieBreakOrder, bound: usize) -> Result<ChoiceFunction> {
    let m = electorate.num_candidates();
    if m > bound {
        return Err(Error::ResourceLimit {
            what: "choice table",
            requested: m,
            bound,
        });
    }
    if tb.len() != m {
        return Err(Error::invalid("tie-break order does not match the candidate set"));
    }
    let candidates = electorate.candidates().clone();
    match (rule, electorate) {
        (Rule::Plurality | Rule::Borda, Electorate::Profile(_)) => {
            ChoiceFunction::from_fn(candidates, |s| winner(rule, electorate, s, tb))
        }
        (Rule::Plurality, Electorate::Tournament(_)) => {
            Err(Error::unsupported("plurality needs a voter profile, not a tournament"))
        }
        _ => {
            let t = electorate.tournament();
            ChoiceFunction::from_fn(candidates, |s| Ok(tournament_winner(rule, &t, s, tb)))
        }
    }
}

/// Where the outcome of each running set comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeSource {
    Rule { rule: Rule, electorate: Electorate },
    Table(ChoiceFunction),
}

impl OutcomeSource {
    pub fn candidates(&self) -> &CandidateSet {
        match self {
            OutcomeSource::Rule { electorate, .. } => electorate.candidates(),
            OutcomeSource::Table(cf) => cf.candidates(),
        }
    }

    pub fn rule(&self) -> Option<Rule> {
        match self {
            OutcomeSource::Rule { rule, .. } => Some(*rule),
            OutcomeSource::Table(_) => None,
        }
    }

    pub fn electorate(&self) -> Option<&Electorate> {
        match self {
            OutcomeSource::Rule { electorate, .. } => Some(electorate),
            OutcomeSource::Table(_) => None,
        }
    }

    pub fn choice_table(&self, tb: &TieBreakOrder, bound: usize) -> Result<ChoiceFunction> {
        match self {
            OutcomeSource::Rule { rule, electorate } => choice_table(*rule, electorate, tb, bound),
            OutcomeSource::Table(cf) => {
                if cf.num_candidates() > bound {
                    return Err(Error::ResourceLimit {
                        what: "choice table",
                        requested: cf.num_candidates(),
                        bound,
                    });
                }
                Ok(cf.clone())
            }
        }
    }

    /// Winner of a running set, `None` for the empty set.
    pub fn outcome(&self, running: State, tb: &TieBreakOrder) -> Result<Option<Candidate>> {
        if running.is_empty() {
            return Ok(None);
        }
        match self {
            OutcomeSource::Rule { rule, electorate } => winner(*rule, electorate, running, tb).map(Some),
            OutcomeSource::Table(cf) => {
                if !running.is_subset_of(cf.candidates().full()) {
                    return Err(Error::invalid("running set names unknown candidates"));
                }
                Ok(cf.get(running))
            }
        }
    }
}
