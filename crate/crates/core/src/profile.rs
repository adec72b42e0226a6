//! Voter profiles (run-length ballots) and the candidates' own preferences.

use serde::{Deserialize, Serialize};

use crate::candidates::{Candidate, CandidateSet, State};
use crate::error::{Error, Result};

/// `count` identical voters casting `ranking` (best first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ballot {
    pub count: u32,
    pub ranking: Vec<Candidate>,
}

impl Ballot {
    pub fn new(count: u32, ranking: Vec<Candidate>) -> Self {
        Ballot { count, ranking }
    }

    /// Highest ranked member of `running`.
    pub fn top_among(&self, running: State) -> Option<Candidate> {
        self.ranking.iter().copied().find(|&c| running.contains(c))
    }
}

fn check_permutation(ranking: &[Candidate], m: usize) -> Result<()> {
    if ranking.len() != m {
        return Err(Error::invalid(format!(
            "ranking has {} entries, expected {m}",
            ranking.len()
        )));
    }
    let mut seen = State::empty();
    for &c in ranking {
        if c >= m || seen.contains(c) {
            return Err(Error::invalid("ranking is not a strict order over the candidates"));
        }
        seen = seen.with(c);
    }
    Ok(())
}

/// A multiset of strict rankings over a candidate set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VoterProfile {
    candidates: CandidateSet,
    ballots: Vec<Ballot>,
}

impl VoterProfile {
    pub fn new(candidates: CandidateSet, ballots: Vec<Ballot>) -> Result<Self> {
        let m = candidates.len();
        if ballots.is_empty() {
            return Err(Error::invalid("a profile needs at least one voter"));
        }
        for b in &ballots {
            if b.count == 0 {
                return Err(Error::invalid("ballot counts must be positive"));
            }
            check_permutation(&b.ranking, m)?;
        }
        Ok(VoterProfile { candidates, ballots })
    }

    /// Builds a profile from label rankings, e.g. `(3, "d c a b")`.
    pub fn from_labels(candidates: CandidateSet, ballots: &[(u32, &str)]) -> Result<Self> {
        let ballots = ballots
            .iter()
            .map(|&(count, text)| {
                let ranking = text
                    .split_whitespace()
                    .map(|l| {
                        candidates
                            .index_of(l)
                            .ok_or_else(|| Error::invalid(format!("unknown candidate {l:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Ballot::new(count, ranking))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(candidates, ballots)
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    /// Total number of voters `n`.
    pub fn voter_count(&self) -> u32 {
        self.ballots.iter().map(|b| b.count).sum()
    }

    /// The profile over `keep` only: same counts, each ranking filtered to
    /// `keep` in its original relative order. Candidates are re-indexed.
    pub fn restrict(&self, keep: State) -> Result<VoterProfile> {
        if keep.is_empty() {
            return Err(Error::invalid("cannot restrict a profile to the empty set"));
        }
        if !keep.is_subset_of(self.candidates.full()) {
            return Err(Error::invalid("restriction names unknown candidates"));
        }
        let mut new_index = vec![usize::MAX; self.num_candidates()];
        for (i, c) in keep.iter().enumerate() {
            new_index[c] = i;
        }
        let ballots = self
            .ballots
            .iter()
            .map(|b| {
                Ballot::new(
                    b.count,
                    b.ranking
                        .iter()
                        .filter(|&&c| keep.contains(c))
                        .map(|&c| new_index[c])
                        .collect(),
                )
            })
            .collect();
        Ok(VoterProfile {
            candidates: self.candidates.restrict(keep)?,
            ballots,
        })
    }

    /// Adds a fresh candidate at the bottom of every ballot.
    pub fn lift_with_bottom_candidate(&self, label: &str) -> Result<VoterProfile> {
        if self.candidates.index_of(label).is_some() {
            return Err(Error::invalid(format!("candidate {label:?} already exists")));
        }
        let mut names = self.candidates.labels().to_vec();
        names.push(label.to_string());
        let newcomer = self.num_candidates();
        let ballots = self
            .ballots
            .iter()
            .map(|b| {
                let mut ranking = b.ranking.clone();
                ranking.push(newcomer);
                Ballot::new(b.count, ranking)
            })
            .collect();
        Ok(VoterProfile {
            candidates: CandidateSet::new(names)?,
            ballots,
        })
    }
}

/// Each potential candidate's strict ranking over all potential candidates.
/// Every candidate ranks itself first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidatePreferenceProfile {
    orders: Vec<Vec<Candidate>>,
    #[serde(skip)]
    rank: Vec<Vec<usize>>,
}

impl CandidatePreferenceProfile {
    pub fn new(orders: Vec<Vec<Candidate>>) -> Result<Self> {
        let m = orders.len();
        if m == 0 {
            return Err(Error::invalid("candidate preferences need at least one candidate"));
        }
        for (c, order) in orders.iter().enumerate() {
            check_permutation(order, m)?;
            if order[0] != c {
                return Err(Error::invalid(format!("candidate #{c} must rank itself first")));
            }
        }
        let rank = orders
            .iter()
            .map(|order| {
                let mut r = vec![0; m];
                for (pos, &c) in order.iter().enumerate() {
                    r[c] = pos;
                }
                r
            })
            .collect();
        Ok(CandidatePreferenceProfile { orders, rank })
    }

    pub fn from_labels(candidates: &CandidateSet, orders: &[&str]) -> Result<Self> {
        let orders = orders
            .iter()
            .map(|text| {
                text.split_whitespace()
                    .map(|l| {
                        candidates
                            .index_of(l)
                            .ok_or_else(|| Error::invalid(format!("unknown candidate {l:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn order(&self, agent: Candidate) -> &[Candidate] {
        &self.orders[agent]
    }

    pub fn orders(&self) -> &[Vec<Candidate>] {
        &self.orders
    }

    /// Position of `c` in `agent`'s ranking (0 = top).
    pub fn rank(&self, agent: Candidate, c: Candidate) -> usize {
        self.rank[agent][c]
    }

    /// Whether `agent` strictly prefers outcome `x` to outcome `y`, where
    /// `None` is the empty election, ranked below every candidate.
    pub fn prefers(&self, agent: Candidate, x: Option<Candidate>, y: Option<Candidate>) -> bool {
        match (x, y) {
            (Some(x), Some(y)) => self.rank[agent][x] < self.rank[agent][y],
            (Some(_), None) => true,
            (None, _) => false,
        }
    }

    /// Appends a new candidate at the bottom of every existing ranking; the
    /// newcomer ranks itself first, then the others in index order.
    pub fn lift_with_bottom_candidate(&self) -> CandidatePreferenceProfile {
        let m = self.len();
        let mut orders: Vec<Vec<Candidate>> = self
            .orders
            .iter()
            .map(|o| {
                let mut o = o.clone();
                o.push(m);
                o
            })
            .collect();
        orders.push(std::iter::once(m).chain(0..m).collect());
        CandidatePreferenceProfile::new(orders).expect("lifting keeps preferences self-supported")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn restriction_filters_rankings() {
        let p = fixtures::example1().profile;
        let y = p.candidates().parse_subset("abc").unwrap();
        let r = p.restrict(y).unwrap();
        // voter "d a c b" becomes "a c b"
        let fifth = &r.ballots()[4];
        let labels: Vec<&str> = fifth.ranking.iter().map(|&c| r.candidates().label(c)).collect();
        assert_eq!(labels, ["a", "c", "b"]);
        assert_eq!(r.voter_count(), p.voter_count());
    }

    #[test]
    fn restriction_identity_and_composition() {
        let p = fixtures::example1().profile;
        assert_eq!(p.restrict(p.candidates().full()).unwrap(), p);
        let abc = p.restrict(p.candidates().parse_subset("abc").unwrap()).unwrap();
        let twice = abc.restrict(abc.candidates().parse_subset("ab").unwrap()).unwrap();
        let once = p.restrict(p.candidates().parse_subset("ab").unwrap()).unwrap();
        assert_eq!(twice, once);
    }

    #[test]
    fn restriction_errors() {
        let p = fixtures::example1().profile;
        assert!(p.restrict(State::empty()).is_err());
        assert!(p.restrict(State::from_indices([0, 7])).is_err());
    }

    #[test]
    fn lift_appends_bottom_candidate() {
        let p = fixtures::plurality13().profile;
        let lifted = p.lift_with_bottom_candidate("e").unwrap();
        let e = lifted.candidates().index_of("e").unwrap();
        assert!(lifted.ballots().iter().all(|b| *b.ranking.last().unwrap() == e));
        assert_eq!(lifted.restrict(p.candidates().full()).unwrap(), p);
        assert!(p.lift_with_bottom_candidate("a").is_err());
    }

    #[test]
    fn profile_validation() {
        let cs = CandidateSet::alphabetic(3).unwrap();
        assert!(VoterProfile::from_labels(cs.clone(), &[(1, "a b")]).is_err());
        assert!(VoterProfile::from_labels(cs.clone(), &[(1, "a b b")]).is_err());
        assert!(VoterProfile::from_labels(cs.clone(), &[(0, "a b c")]).is_err());
        assert!(VoterProfile::from_labels(cs, &[]).is_err());
    }

    #[test]
    fn preferences_must_be_self_supported() {
        let cs = CandidateSet::alphabetic(3).unwrap();
        assert!(CandidatePreferenceProfile::from_labels(&cs, &["a b c", "a b c", "c a b"]).is_err());
        let ok = CandidatePreferenceProfile::from_labels(&cs, &["a b c", "b c a", "c a b"]).unwrap();
        assert!(ok.prefers(0, Some(1), Some(2)));
        assert!(ok.prefers(0, Some(2), None));
        assert!(!ok.prefers(0, None, Some(2)));
        assert!(!ok.prefers(0, None, None));
    }
}
