//! Pairwise support counts, majority graphs and McGarvey realization.

use serde::{Deserialize, Serialize};

use crate::candidates::{Candidate, CandidateSet, State};
use crate::error::{Error, Result};
use crate::profile::{Ballot, VoterProfile};

/// `N(x, y)`: how many voters rank `x` above `y`, with `N(x,y) + N(y,x) = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedTournament {
    candidates: CandidateSet,
    n: u32,
    support: Vec<u32>,
}

impl WeightedTournament {
    /// Builds a tournament from a full support matrix; diagonal entries are
    /// ignored.
    pub fn from_matrix(candidates: CandidateSet, n: u32, matrix: &[Vec<u32>]) -> Result<Self> {
        let m = candidates.len();
        if matrix.len() != m || matrix.iter().any(|row| row.len() != m) {
            return Err(Error::invalid(format!("support matrix must be {m}x{m}")));
        }
        let mut support = vec![0; m * m];
        for x in 0..m {
            for y in 0..m {
                if x != y {
                    support[x * m + y] = matrix[x][y];
                }
            }
        }
        Self::from_support(candidates, n, support)
    }

    fn from_support(candidates: CandidateSet, n: u32, support: Vec<u32>) -> Result<Self> {
        let m = candidates.len();
        for x in 0..m {
            for y in x + 1..m {
                let (a, b) = (support[x * m + y], support[y * m + x]);
                if a.checked_add(b) != Some(n) {
                    return Err(Error::invalid(format!(
                        "N({0},{1}) + N({1},{0}) = {2} + {3} but n = {n}",
                        candidates.label(x),
                        candidates.label(y),
                        a,
                        b
                    )));
                }
            }
        }
        Ok(WeightedTournament { candidates, n, support })
    }

    /// Pairwise counts of a profile.
    pub fn from_profile(profile: &VoterProfile) -> Self {
        let m = profile.num_candidates();
        let mut support = vec![0u32; m * m];
        for b in profile.ballots() {
            for (i, &x) in b.ranking.iter().enumerate() {
                for &y in &b.ranking[i + 1..] {
                    support[x * m + y] += b.count;
                }
            }
        }
        WeightedTournament {
            candidates: profile.candidates().clone(),
            n: profile.voter_count(),
            support,
        }
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn voter_count(&self) -> u32 {
        self.n
    }

    pub fn support(&self, x: Candidate, y: Candidate) -> u32 {
        self.support[x * self.num_candidates() + y]
    }

    /// Strict majority: `N(x,y) > n/2`.
    pub fn beats(&self, x: Candidate, y: Candidate) -> bool {
        x != y && 2 * self.support(x, y) > self.n
    }

    /// Exact tie `N(x,y) = n/2`; only possible for even `n`.
    pub fn ties(&self, x: Candidate, y: Candidate) -> bool {
        x != y && 2 * self.support(x, y) == self.n
    }

    /// Adds a fresh candidate that every voter ranks last.
    pub fn lift_with_bottom_candidate(&self, label: &str) -> Result<WeightedTournament> {
        if self.candidates.index_of(label).is_some() {
            return Err(Error::invalid(format!("candidate {label:?} already exists")));
        }
        let m = self.num_candidates();
        let mut names = self.candidates.labels().to_vec();
        names.push(label.to_string());
        let mut support = vec![0; (m + 1) * (m + 1)];
        for x in 0..m {
            for y in 0..m {
                support[x * (m + 1) + y] = self.support(x, y);
            }
            support[x * (m + 1) + m] = self.n;
        }
        Self::from_support(CandidateSet::new(names)?, self.n, support)
    }

    pub fn majority_graph(&self) -> MajorityGraph {
        let m = self.num_candidates();
        let beaten = (0..m)
            .map(|x| State::from_indices((0..m).filter(|&y| self.beats(x, y))))
            .collect();
        MajorityGraph {
            candidates: self.candidates.clone(),
            beaten,
        }
    }
}

/// Edge `x -> y` whenever `x` beats `y` by a strict majority.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MajorityGraph {
    candidates: CandidateSet,
    /// `beaten[x]`: everyone `x` beats.
    beaten: Vec<State>,
}

impl MajorityGraph {
    pub fn from_edges(candidates: CandidateSet, edges: &[(Candidate, Candidate)]) -> Result<Self> {
        let m = candidates.len();
        let mut beaten = vec![State::empty(); m];
        for &(x, y) in edges {
            if x >= m || y >= m || x == y {
                return Err(Error::invalid(format!("invalid edge ({x}, {y})")));
            }
            if beaten[y].contains(x) {
                return Err(Error::invalid(format!(
                    "edges {0}->{1} and {1}->{0} both present",
                    candidates.label(x),
                    candidates.label(y)
                )));
            }
            beaten[x] = beaten[x].with(y);
        }
        Ok(MajorityGraph { candidates, beaten })
    }

    /// Edges given as label pairs, e.g. `[("a", "b"), ("b", "c")]`.
    pub fn from_label_edges(candidates: CandidateSet, edges: &[(&str, &str)]) -> Result<Self> {
        let idx = |l: &str| {
            candidates
                .index_of(l)
                .ok_or_else(|| Error::invalid(format!("unknown candidate {l:?}")))
        };
        let edges = edges
            .iter()
            .map(|&(x, y)| Ok((idx(x)?, idx(y)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(candidates, &edges)
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn beats(&self, x: Candidate, y: Candidate) -> bool {
        self.beaten[x].contains(y)
    }

    /// Everyone `x` beats.
    pub fn beaten_by(&self, x: Candidate) -> State {
        self.beaten[x]
    }

    /// Everyone beating `x`.
    pub fn beaters_of(&self, x: Candidate) -> State {
        State::from_indices((0..self.num_candidates()).filter(|&y| self.beats(y, x)))
    }

    pub fn edges(&self) -> Vec<(Candidate, Candidate)> {
        (0..self.num_candidates())
            .flat_map(|x| self.beaten[x].iter().map(move |y| (x, y)))
            .collect()
    }

    /// Every pair of distinct candidates is joined by exactly one edge.
    pub fn is_complete(&self) -> bool {
        let m = self.num_candidates();
        (0..m).all(|x| (x + 1..m).all(|y| self.beats(x, y) || self.beats(y, x)))
    }

    /// The graph as a weighted tournament with a single voter, so that
    /// `N(x,y) = 1` exactly on edges. Requires a complete graph.
    pub fn to_unit_tournament(&self) -> Result<WeightedTournament> {
        if !self.is_complete() {
            return Err(Error::unsupported(
                "only complete majority graphs have a unit tournament",
            ));
        }
        let m = self.num_candidates();
        let mut support = vec![0; m * m];
        for (x, y) in self.edges() {
            support[x * m + y] = 1;
        }
        WeightedTournament::from_support(self.candidates.clone(), 1, support)
    }
}

/// A profile whose majority graph is `target`, two ballots per edge: for the
/// edge `x -> y`, one voter ranks `x y` then the rest in index order, and one
/// ranks the rest in reverse order followed by `x y`. All other pairs cancel.
pub fn mcgarvey_realize(target: &MajorityGraph) -> Result<VoterProfile> {
    let m = target.num_candidates();
    if !target.is_complete() {
        return Err(Error::unsupported(
            "McGarvey realization needs a complete asymmetric majority relation",
        ));
    }
    let edges = target.edges();
    if edges.is_empty() {
        return VoterProfile::new(target.candidates().clone(), vec![Ballot::new(1, vec![0])]);
    }
    let mut ballots = Vec::with_capacity(2 * edges.len());
    for (x, y) in edges {
        let rest: Vec<Candidate> = (0..m).filter(|&z| z != x && z != y).collect();
        let mut forward = vec![x, y];
        forward.extend(&rest);
        let mut backward: Vec<Candidate> = rest.iter().rev().copied().collect();
        backward.extend([x, y]);
        ballots.push(Ballot::new(1, forward));
        ballots.push(Ballot::new(1, backward));
    }
    VoterProfile::new(target.candidates().clone(), ballots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn abc() -> CandidateSet {
        CandidateSet::alphabetic(3).unwrap()
    }

    #[test]
    fn single_ballot_counts() {
        let p = VoterProfile::from_labels(CandidateSet::alphabetic(2).unwrap(), &[(1, "a b")]).unwrap();
        let t = WeightedTournament::from_profile(&p);
        assert_eq!(t.support(0, 1), 1);
        assert_eq!(t.support(1, 0), 0);
    }

    #[test]
    fn example1_support() {
        let g = fixtures::example1();
        let t = WeightedTournament::from_profile(&g.profile);
        let (c, d) = (2, 3);
        // direct count: ballots 2,3,4,6,7 rank c above d
        assert_eq!(t.support(c, d), 5);
        assert_eq!(t.voter_count(), 7);
    }

    #[test]
    fn coherence_is_enforced() {
        let bad = WeightedTournament::from_matrix(CandidateSet::alphabetic(2).unwrap(), 3, &[vec![0, 1], vec![1, 0]]);
        assert!(bad.is_err());
    }

    #[test]
    fn mcgarvey_three_cycle() {
        let g = MajorityGraph::from_label_edges(abc(), &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let p = mcgarvey_realize(&g).unwrap();
        assert_eq!(p.voter_count(), 6);
        assert_eq!(WeightedTournament::from_profile(&p).majority_graph(), g);
    }

    #[test]
    fn mcgarvey_transitive() {
        let g = MajorityGraph::from_label_edges(abc(), &[("a", "b"), ("a", "c"), ("b", "c")]).unwrap();
        let p = mcgarvey_realize(&g).unwrap();
        assert_eq!(WeightedTournament::from_profile(&p).majority_graph(), g);
    }

    #[test]
    fn mcgarvey_single_candidate() {
        let g = MajorityGraph::from_edges(CandidateSet::alphabetic(1).unwrap(), &[]).unwrap();
        let p = mcgarvey_realize(&g).unwrap();
        assert_eq!(p.ballots(), &[Ballot::new(1, vec![0])]);
    }

    #[test]
    fn mcgarvey_rejects_incomplete() {
        let g = MajorityGraph::from_label_edges(abc(), &[("a", "b")]).unwrap();
        assert!(matches!(mcgarvey_realize(&g), Err(Error::Unsupported(_))));
    }

    #[test]
    fn graph_rejects_two_way_edges() {
        assert!(MajorityGraph::from_label_edges(abc(), &[("a", "b"), ("b", "a")]).is_err());
    }
}
