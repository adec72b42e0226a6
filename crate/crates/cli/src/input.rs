//! Loading games and electorates from the command line.

use std::fs;
use std::path::{Path, PathBuf};

use candidacy::format;
use candidacy::{CandidacyGame, CandidateSet, ChoiceFunction, Electorate, OutcomeSource, Rule, TieBreakOrder};
use clap::Args;

use crate::Failure;

/// Where outcomes come from: a rule over a profile or tournament, or a
/// choice-function table.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// plurality | borda | maximin | copeland0 | copeland05 | copeland1 | uc | copelandP/Q
    #[arg(long)]
    pub rule: Option<String>,
    /// Ballot profile file.
    #[arg(long, conflicts_with_all = ["tournament", "choice"])]
    pub profile: Option<PathBuf>,
    /// Weighted tournament file.
    #[arg(long, conflicts_with = "choice")]
    pub tournament: Option<PathBuf>,
    /// Choice-function file (no rule needed).
    #[arg(long)]
    pub choice: Option<PathBuf>,
    /// Tie-break priority overriding the file's, e.g. "b a c d".
    #[arg(long)]
    pub tiebreak: Option<String>,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Candidate preference file.
    #[arg(long)]
    pub prefs: PathBuf,
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Wraps a parse error with the file it came from.
fn in_file<T>(path: &Path, r: candidacy::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub struct Loaded {
    pub source: OutcomeSource,
    pub tiebreak: TieBreakOrder,
}

impl Loaded {
    pub fn candidates(&self) -> &CandidateSet {
        self.source.candidates()
    }
}

fn parse_rule(text: &str) -> Result<Rule, Failure> {
    text.parse()
        .map_err(|e: candidacy::Error| Failure::input(e.to_string()))
}

impl SourceArgs {
    pub fn load(&self) -> Result<Loaded, Failure> {
        let rule = self.rule.as_deref().map(parse_rule).transpose()?;
        let (source, tiebreak) = match (&self.profile, &self.tournament, &self.choice) {
            (Some(path), None, None) => {
                let f = in_file(path, format::parse_profile(&read(path)?))?;
                let rule = rule.ok_or_else(|| Failure::input("--profile needs --rule"))?;
                let electorate = Electorate::Profile(f.profile);
                (OutcomeSource::Rule { rule, electorate }, f.tiebreak)
            }
            (None, Some(path), None) => {
                let f = in_file(path, format::parse_tournament(&read(path)?))?;
                let rule = rule.ok_or_else(|| Failure::input("--tournament needs --rule"))?;
                if rule.needs_profile() {
                    return Err(Failure::unsupported(format!("{rule} needs ballots, not a tournament")));
                }
                let electorate = Electorate::Tournament(f.tournament);
                (OutcomeSource::Rule { rule, electorate }, f.tiebreak)
            }
            (None, None, Some(path)) => {
                if rule.is_some() {
                    return Err(Failure::input("--rule does not apply to a choice function"));
                }
                let f = in_file(path, format::parse_choice_function(&read(path)?))?;
                (OutcomeSource::Table(f.choice), f.tiebreak)
            }
            _ => return Err(Failure::input("give exactly one of --profile, --tournament, --choice")),
        };
        let tiebreak = match &self.tiebreak {
            Some(text) => parse_tiebreak(source.candidates(), text)?,
            None => tiebreak,
        };
        Ok(Loaded { source, tiebreak })
    }
}

pub fn parse_tiebreak(cs: &CandidateSet, text: &str) -> Result<TieBreakOrder, Failure> {
    let order = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|l| !l.is_empty())
        .map(|l| {
            cs.index_of(l)
                .ok_or_else(|| Failure::input(format!("unknown candidate {l:?} in --tiebreak")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if order.len() != cs.len() {
        return Err(Failure::input("--tiebreak must list every candidate once"));
    }
    TieBreakOrder::new(order).map_err(Failure::from)
}

impl GameArgs {
    pub fn load(&self) -> Result<CandidacyGame, Failure> {
        let loaded = self.source.load()?;
        let prefs = in_file(
            &self.prefs,
            format::parse_preferences(&read(&self.prefs)?, loaded.candidates()),
        )?;
        Ok(CandidacyGame::new(loaded.source, prefs, loaded.tiebreak)?)
    }
}

/// Parses a state given either as a bitstring (`1101`) or as a subset of
/// labels (`abd`, `-`).
pub fn parse_state(cs: &CandidateSet, text: &str) -> Result<candidacy::State, Failure> {
    let m = cs.len();
    if text.len() == m && text.chars().all(|c| c == '0' || c == '1') {
        return candidacy::State::parse_bitstring(text, m).map_err(Failure::from);
    }
    cs.parse_subset(text).map_err(Failure::from)
}

pub fn choice_table(loaded: &Loaded) -> Result<ChoiceFunction, Failure> {
    Ok(loaded
        .source
        .choice_table(&loaded.tiebreak, candidacy::rules::DEFAULT_TABLE_BOUND)?)
}
