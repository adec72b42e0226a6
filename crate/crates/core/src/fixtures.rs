//! Bundled example games.
//!
//! The text files live in `crates/core/fixtures/` and are compiled in, so the
//! constructors here never touch the filesystem. [`FixtureSet::from_dir`]
//! loads the same files from disk instead.

use std::path::Path;

use crate::candidates::TieBreakOrder;
use crate::error::{Error, Result};
use crate::format;
use crate::profile::{CandidatePreferenceProfile, VoterProfile};
use crate::rules::{ChoiceFunction, Electorate, OutcomeSource, Rule};
use crate::tournament::{MajorityGraph, WeightedTournament};

/// Every bundled file name with its embedded contents.
pub const FILES: [(&str, &str); 14] = [
    ("example1.prof", include_str!("../fixtures/example1.prof")),
    ("example1.prefs", include_str!("../fixtures/example1.prefs")),
    ("footnote3.cf", include_str!("../fixtures/footnote3.cf")),
    ("footnote3.prefs", include_str!("../fixtures/footnote3.prefs")),
    ("plurality13.prof", include_str!("../fixtures/plurality13.prof")),
    ("plurality13.prefs", include_str!("../fixtures/plurality13.prefs")),
    ("borda-2ne.prof", include_str!("../fixtures/borda-2ne.prof")),
    ("borda-2ne.prefs", include_str!("../fixtures/borda-2ne.prefs")),
    ("maximin5.wt", include_str!("../fixtures/maximin5.wt")),
    ("maximin5.prefs", include_str!("../fixtures/maximin5.prefs")),
    ("g1.wt", include_str!("../fixtures/g1.wt")),
    ("g2.wt", include_str!("../fixtures/g2.wt")),
    ("g3.wt", include_str!("../fixtures/g3.wt")),
    ("g4.wt", include_str!("../fixtures/g4.wt")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileFixture {
    pub profile: VoterProfile,
    pub tiebreak: TieBreakOrder,
    pub prefs: CandidatePreferenceProfile,
}

impl ProfileFixture {
    pub fn source(&self, rule: Rule) -> OutcomeSource {
        OutcomeSource::Rule {
            rule,
            electorate: Electorate::Profile(self.profile.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentFixture {
    pub tournament: WeightedTournament,
    pub tiebreak: TieBreakOrder,
    pub prefs: CandidatePreferenceProfile,
}

impl TournamentFixture {
    pub fn source(&self, rule: Rule) -> OutcomeSource {
        OutcomeSource::Rule {
            rule,
            electorate: Electorate::Tournament(self.tournament.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFixture {
    pub choice: ChoiceFunction,
    pub tiebreak: TieBreakOrder,
    pub prefs: CandidatePreferenceProfile,
}

impl TableFixture {
    pub fn source(&self) -> OutcomeSource {
        OutcomeSource::Table(self.choice.clone())
    }
}

/// All bundled games, parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureSet {
    pub example1: ProfileFixture,
    pub footnote3: TableFixture,
    pub plurality13: ProfileFixture,
    pub borda_2ne: ProfileFixture,
    pub maximin5: TournamentFixture,
    /// The four majority graphs `G1`..`G4` over `a b c d`.
    pub graphs: [MajorityGraph; 4],
}

fn with_name<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{name}: {message}"),
        },
        other => other,
    })
}

impl FixtureSet {
    fn build(read: impl Fn(&str) -> Result<String>) -> Result<Self> {
        let profile_game = |stem: &str| -> Result<ProfileFixture> {
            let prof = format!("{stem}.prof");
            let f = with_name(&prof, format::parse_profile(&read(&prof)?))?;
            let prefs_name = format!("{stem}.prefs");
            let prefs = with_name(
                &prefs_name,
                format::parse_preferences(&read(&prefs_name)?, f.profile.candidates()),
            )?;
            Ok(ProfileFixture {
                profile: f.profile,
                tiebreak: f.tiebreak,
                prefs,
            })
        };
        let maximin = with_name("maximin5.wt", format::parse_tournament(&read("maximin5.wt")?))?;
        let maximin_prefs = with_name(
            "maximin5.prefs",
            format::parse_preferences(&read("maximin5.prefs")?, maximin.tournament.candidates()),
        )?;
        let cf = with_name("footnote3.cf", format::parse_choice_function(&read("footnote3.cf")?))?;
        let cf_prefs = with_name(
            "footnote3.prefs",
            format::parse_preferences(&read("footnote3.prefs")?, cf.choice.candidates()),
        )?;
        let graph = |name: &str| -> Result<MajorityGraph> {
            let t = with_name(name, format::parse_tournament(&read(name)?))?;
            Ok(t.tournament.majority_graph())
        };
        Ok(FixtureSet {
            example1: profile_game("example1")?,
            footnote3: TableFixture {
                choice: cf.choice,
                tiebreak: cf.tiebreak,
                prefs: cf_prefs,
            },
            plurality13: profile_game("plurality13")?,
            borda_2ne: profile_game("borda-2ne")?,
            maximin5: TournamentFixture {
                tournament: maximin.tournament,
                tiebreak: maximin.tiebreak,
                prefs: maximin_prefs,
            },
            graphs: [graph("g1.wt")?, graph("g2.wt")?, graph("g3.wt")?, graph("g4.wt")?],
        })
    }

    /// The compiled-in copies.
    pub fn embedded() -> Result<Self> {
        Self::build(|name| {
            FILES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| Error::invalid(format!("missing fixture {name}")))
        })
    }

    /// Loads every bundled file name from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        Self::build(|name| {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| Error::invalid(format!("missing fixture {}: {e}", dir.join(name).display())))
        })
    }
}

fn embedded() -> FixtureSet {
    FixtureSet::embedded().expect("bundled fixtures parse")
}

/// Borda game over `a b c d`, seven voters.
pub fn example1() -> ProfileFixture {
    embedded().example1
}

/// Three-candidate choice-function game with an NE but no SE.
pub fn footnote3() -> TableFixture {
    embedded().footnote3
}

/// Plurality game over `a b c d`, thirteen voters, no NE.
pub fn plurality13() -> ProfileFixture {
    embedded().plurality13
}

/// Borda game over `a b c d`, five voters, NE but no 2-NE.
pub fn borda_2ne() -> ProfileFixture {
    embedded().borda_2ne
}

/// Five-candidate weighted tournament with no maximin NE.
pub fn maximin5() -> TournamentFixture {
    embedded().maximin5
}

/// Majority graph `G{i}` for `i` in `1..=4`.
pub fn graph(i: usize) -> MajorityGraph {
    embedded().graphs[i - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixtures_parse() {
        let set = FixtureSet::embedded().unwrap();
        assert_eq!(set.plurality13.profile.voter_count(), 13);
        assert_eq!(set.example1.profile.voter_count(), 7);
        assert_eq!(set.borda_2ne.profile.voter_count(), 5);
        assert_eq!(set.maximin5.tournament.voter_count(), 5);
        assert!(set.graphs.iter().all(MajorityGraph::is_complete));
    }

    #[test]
    fn disk_copies_match_embedded() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        assert_eq!(FixtureSet::from_dir(&dir).unwrap(), FixtureSet::embedded().unwrap());
    }

    #[test]
    fn missing_directory_is_reported() {
        let err = FixtureSet::from_dir(Path::new("/nonexistent/fixtures")).unwrap_err();
        assert!(err.to_string().contains("missing fixture"));
    }
}
