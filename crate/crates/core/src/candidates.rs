//! Candidate labels, subsets of candidates and tie-breaking priority.
//!
//! Candidates are identified by their position in a [`CandidateSet`]; labels
//! only matter for parsing and printing. A subset of candidates (a running
//! set, or the strategy profile of a candidacy game) is a [`State`] bitmask.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a candidate inside its [`CandidateSet`].
pub type Candidate = usize;

/// Largest supported number of potential candidates (one bit per candidate).
pub const MAX_CANDIDATES: usize = 32;

/// An ordered sequence of distinct candidate labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateSet {
    names: Vec<String>,
}

impl CandidateSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::invalid("a candidate set needs at least one candidate"));
        }
        if names.len() > MAX_CANDIDATES {
            return Err(Error::ResourceLimit {
                what: "candidate set",
                requested: names.len(),
                bound: MAX_CANDIDATES,
            });
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',' || c == ':') {
                return Err(Error::invalid(format!("invalid candidate label {name:?}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid(format!("duplicate candidate label {name:?}")));
            }
        }
        Ok(CandidateSet { names })
    }

    /// Single-letter labels `a`, `b`, `c`, ... as used in most small examples.
    pub fn alphabetic(m: usize) -> Result<Self> {
        if m > 26 {
            return Err(Error::invalid("alphabetic labels only go up to 26 candidates"));
        }
        Self::new((0..m).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn label(&self, c: Candidate) -> &str {
        &self.names[c]
    }

    pub fn labels(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, label: &str) -> Option<Candidate> {
        self.names.iter().position(|n| n == label)
    }

    pub fn iter(&self) -> impl Iterator<Item = Candidate> {
        0..self.names.len()
    }

    pub fn full(&self) -> State {
        State::full(self.len())
    }

    /// True when every label is a single character, so subsets can be
    /// written compactly as `abc`.
    pub fn single_char_labels(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Builds the subset named by `labels`.
    pub fn subset<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<State> {
        let mut state = State::empty();
        for label in labels {
            let label = label.as_ref();
            let c = self
                .index_of(label)
                .ok_or_else(|| Error::invalid(format!("unknown candidate {label:?}")))?;
            state = state.with(c);
        }
        Ok(state)
    }

    /// Parses a compact subset such as `abd` (single-character labels), or a
    /// comma separated list `x1,x3` for longer labels. `-` is the empty set.
    pub fn parse_subset(&self, text: &str) -> Result<State> {
        let text = text.trim();
        if text == "-" || text.is_empty() {
            return Ok(State::empty());
        }
        if text.contains(',') {
            self.subset(text.split(',').map(str::trim))
        } else if self.single_char_labels() {
            let mut state = State::empty();
            for ch in text.chars() {
                let c = self
                    .index_of(ch.encode_utf8(&mut [0; 4]))
                    .ok_or_else(|| Error::invalid(format!("unknown candidate {ch:?}")))?;
                if state.contains(c) {
                    return Err(Error::invalid(format!("candidate {ch:?} listed twice")));
                }
                state = state.with(c);
            }
            Ok(state)
        } else {
            self.subset([text])
        }
    }

    /// Inverse of [`CandidateSet::parse_subset`].
    pub fn format_subset(&self, s: State) -> String {
        if s.is_empty() {
            return "-".to_string();
        }
        let sep = if self.single_char_labels() { "" } else { "," };
        s.iter().map(|c| self.label(c)).collect::<Vec<_>>().join(sep)
    }

    pub fn format_outcome(&self, o: Option<Candidate>) -> String {
        match o {
            Some(c) => self.label(c).to_string(),
            None => "⊥".to_string(),
        }
    }

    /// The candidate set restricted to `keep`, labels in the original order.
    pub fn restrict(&self, keep: State) -> Result<Self> {
        Self::new(keep.iter().map(|c| self.names[c].clone()))
    }
}

impl fmt::Display for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(" "))
    }
}

/// A subset of candidates, one bit per candidate index.
///
/// In a candidacy game this is the strategy profile: bit `c` is set iff
/// candidate `c` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct State(u32);

impl State {
    pub const fn empty() -> Self {
        State(0)
    }

    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_CANDIDATES);
        if m == 32 {
            State(u32::MAX)
        } else {
            State((1u32 << m) - 1)
        }
    }

    pub const fn from_bits(bits: u32) -> Self {
        State(bits)
    }

    pub fn singleton(c: Candidate) -> Self {
        State(1 << c)
    }

    pub fn from_indices(cs: impl IntoIterator<Item = Candidate>) -> Self {
        cs.into_iter().fold(State::empty(), State::with)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, c: Candidate) -> bool {
        self.0 >> c & 1 == 1
    }

    #[must_use]
    pub fn with(self, c: Candidate) -> Self {
        State(self.0 | 1 << c)
    }

    #[must_use]
    pub fn without(self, c: Candidate) -> Self {
        State(self.0 & !(1 << c))
    }

    #[must_use]
    pub fn flip(self, c: Candidate) -> Self {
        State(self.0 ^ 1 << c)
    }

    /// Flips every candidate in `coalition`.
    #[must_use]
    pub fn toggle(self, coalition: State) -> Self {
        State(self.0 ^ coalition.0)
    }

    #[must_use]
    pub fn union(self, other: State) -> Self {
        State(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: State) -> Self {
        State(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: State) -> Self {
        State(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: State) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = Candidate> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(c)
            }
        })
    }

    /// The single member, if there is exactly one.
    pub fn sole(self) -> Option<Candidate> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as usize)
    }

    /// All `2^m` subsets of an `m`-candidate set, in increasing bitmask order.
    pub fn all(m: usize) -> impl Iterator<Item = State> {
        (0..=State::full(m).0 as u64).map(|b| State(b as u32))
    }

    /// Every subset of `self`, the empty set included.
    pub fn subsets(self) -> impl Iterator<Item = State> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(State(cur))
        })
    }

    /// Bitstring in candidate order, e.g. `1101` for `{a, b, d}` of four.
    pub fn to_bitstring(self, m: usize) -> String {
        (0..m).map(|c| if self.contains(c) { '1' } else { '0' }).collect()
    }

    pub fn parse_bitstring(text: &str, m: usize) -> Result<Self> {
        let text = text.trim();
        if text.chars().count() != m {
            return Err(Error::invalid(format!("state {text:?} must have exactly {m} bits")));
        }
        let mut state = State::empty();
        for (c, ch) in text.chars().enumerate() {
            match ch {
                '1' => state = state.with(c),
                '0' => {}
                other => return Err(Error::invalid(format!("state bit {other:?} is not 0 or 1"))),
            }
        }
        Ok(state)
    }
}

/// Subsets of `universe` of size exactly `k`, in lexicographic order of
/// their sorted member lists.
pub fn combinations(universe: State, k: usize) -> Vec<State> {
    let members: Vec<Candidate> = universe.iter().collect();
    let mut out = Vec::new();
    if k > members.len() {
        return out;
    }
    let n = members.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(State::from_indices(idx.iter().map(|&i| members[i])));
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Fixed priority over all potential candidates; earlier means higher
/// priority. Projection to a subset keeps relative priority, so co-winners in
/// any running set are resolved the same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TieBreakOrder {
    priority: Vec<Candidate>,
    #[serde(skip)]
    rank: Vec<usize>,
}

impl TieBreakOrder {
    pub fn new(priority: Vec<Candidate>) -> Result<Self> {
        let m = priority.len();
        let mut rank = vec![usize::MAX; m];
        for (pos, &c) in priority.iter().enumerate() {
            if c >= m || rank[c] != usize::MAX {
                return Err(Error::invalid(
                    "tie-break order must be a permutation of the candidates",
                ));
            }
            rank[c] = pos;
        }
        Ok(TieBreakOrder { priority, rank })
    }

    /// Candidate order itself: `a` before `b` before `c` ...
    pub fn lexicographic(m: usize) -> Self {
        TieBreakOrder {
            priority: (0..m).collect(),
            rank: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.priority.len()
    }

    pub fn is_empty(&self) -> bool {
        self.priority.is_empty()
    }

    pub fn priority(&self) -> &[Candidate] {
        &self.priority
    }

    /// Position of `c` in the order; smaller is more prioritary.
    pub fn rank(&self, c: Candidate) -> usize {
        self.rank[c]
    }

    pub fn has_priority(&self, x: Candidate, y: Candidate) -> bool {
        self.rank[x] < self.rank[y]
    }

    /// The order restricted to `subset`.
    pub fn project(&self, subset: State) -> Vec<Candidate> {
        self.priority.iter().copied().filter(|&c| subset.contains(c)).collect()
    }

    /// Most prioritary member of `subset`.
    pub fn best(&self, subset: State) -> Option<Candidate> {
        subset.iter().min_by_key(|&c| self.rank[c])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(CandidateSet::new(["a", "b", "a"]).is_err());
        assert!(CandidateSet::new(Vec::<String>::new()).is_err());
        assert!(CandidateSet::new(["a b"]).is_err());
    }

    #[test]
    fn subset_parse_and_format() {
        let cs = CandidateSet::alphabetic(4).unwrap();
        let s = cs.parse_subset("abd").unwrap();
        assert_eq!(s.to_bitstring(4), "1101");
        assert_eq!(cs.format_subset(s), "abd");
        assert_eq!(cs.parse_subset("-").unwrap(), State::empty());
        assert!(cs.parse_subset("abz").is_err());
        assert!(cs.parse_subset("aa").is_err());

        let long = CandidateSet::new(["x1", "x2", "x3"]).unwrap();
        let s = long.parse_subset("x1,x3").unwrap();
        assert_eq!(long.format_subset(s), "x1,x3");
    }

    #[test]
    fn bitstrings() {
        assert_eq!(
            State::parse_bitstring("0111", 4).unwrap(),
            State::from_indices([1, 2, 3])
        );
        assert!(State::parse_bitstring("011", 4).is_err());
        assert!(State::parse_bitstring("01x1", 4).is_err());
    }

    #[test]
    fn combinations_are_lexicographic() {
        let got: Vec<String> = combinations(State::full(4), 2)
            .into_iter()
            .map(|s| s.to_bitstring(4))
            .collect();
        assert_eq!(got, ["1100", "1010", "1001", "0110", "0101", "0011"]);
        assert_eq!(combinations(State::full(3), 0), vec![State::empty()]);
        assert_eq!(combinations(State::full(3), 3), vec![State::full(3)]);
        assert!(combinations(State::full(2), 3).is_empty());
        let sparse = State::from_indices([1, 4, 6]);
        assert_eq!(
            combinations(sparse, 2),
            vec![
                State::from_indices([1, 4]),
                State::from_indices([1, 6]),
                State::from_indices([4, 6])
            ]
        );
    }

    #[test]
    fn subsets_enumerates_all() {
        let s = State::from_indices([0, 2, 5]);
        let subs: Vec<State> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset_of(s)));
    }

    #[test]
    fn tiebreak_projection_keeps_priority() {
        let tb = TieBreakOrder::new(vec![2, 0, 3, 1]).unwrap();
        let y = State::from_indices([0, 1, 2]);
        assert_eq!(tb.project(y), vec![2, 0, 1]);
        assert_eq!(tb.best(y), Some(2));
        assert!(TieBreakOrder::new(vec![0, 0, 1]).is_err());
    }
}
