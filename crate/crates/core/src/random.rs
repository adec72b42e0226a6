//! Random profiles, preferences and games for property checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::candidates::{Candidate, CandidateSet, State, TieBreakOrder};
use crate::game::CandidacyGame;
use crate::profile::{Ballot, CandidatePreferenceProfile, VoterProfile};
use crate::rules::{ChoiceFunction, Electorate, Rule};

fn random_ranking<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<Candidate> {
    let mut r: Vec<Candidate> = (0..m).collect();
    r.shuffle(rng);
    r
}

/// `n` voters with independent uniformly random rankings over `a, b, ...`.
pub fn profile<R: Rng + ?Sized>(rng: &mut R, m: usize, n: u32) -> VoterProfile {
    let ballots = (0..n).map(|_| Ballot::new(1, random_ranking(rng, m))).collect();
    VoterProfile::new(CandidateSet::alphabetic(m).expect("m <= 26"), ballots).expect("valid profile")
}

/// A random profile in which `winner` is moved to the top of a strict
/// majority of ballots, so it beats every other candidate.
pub fn profile_with_condorcet_winner<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: u32,
    winner: Candidate,
) -> VoterProfile {
    let majority = n / 2 + 1;
    let ballots = (0..n)
        .map(|i| {
            let mut r = random_ranking(rng, m);
            if i < majority {
                r.retain(|&c| c != winner);
                r.insert(0, winner);
            }
            Ballot::new(1, r)
        })
        .collect();
    VoterProfile::new(CandidateSet::alphabetic(m).expect("m <= 26"), ballots).expect("valid profile")
}

/// Self-supported candidate preferences, the rest uniformly random.
pub fn preferences<R: Rng + ?Sized>(rng: &mut R, m: usize) -> CandidatePreferenceProfile {
    let orders = (0..m)
        .map(|c| {
            let mut rest: Vec<Candidate> = (0..m).filter(|&x| x != c).collect();
            rest.shuffle(rng);
            std::iter::once(c).chain(rest).collect()
        })
        .collect();
    CandidatePreferenceProfile::new(orders).expect("self-supported by construction")
}

pub fn tiebreak<R: Rng + ?Sized>(rng: &mut R, m: usize) -> TieBreakOrder {
    TieBreakOrder::new(random_ranking(rng, m)).expect("permutation")
}

/// A uniformly random choice function.
pub fn choice_function<R: Rng + ?Sized>(rng: &mut R, m: usize) -> ChoiceFunction {
    ChoiceFunction::from_fn(CandidateSet::alphabetic(m).expect("m <= 26"), |s: State| {
        let members: Vec<Candidate> = s.iter().collect();
        Ok(members[rng.gen_range(0..members.len())])
    })
    .expect("members are valid winners")
}

/// Game over a random profile with random candidate preferences and the
/// lexicographic tie-break.
pub fn game<R: Rng + ?Sized>(rng: &mut R, rule: Rule, m: usize, n: u32) -> CandidacyGame {
    let p = profile(rng, m, n);
    let prefs = preferences(rng, m);
    CandidacyGame::from_rule(rule, Electorate::Profile(p), prefs, TieBreakOrder::lexicographic(m))
        .expect("random games are well formed")
}
