//! Plain-text file formats.
//!
//! Profile:
//! ```text
//! candidates: a b c d
//! tiebreak: a b c d
//! 3: d c a b
//! ```
//! Candidate preferences: one `a: a b c d` line per candidate.
//! Weighted tournament: optional `candidates:`/`tiebreak:` lines, `n: 5`,
//! then `a b: 1` for every ordered pair.
//! Choice function: `candidates:` line, then `abc -> b` for every nonempty
//! subset.
//!
//! Control instance: header lines, then an electorate block and an optional
//! preference block, each introduced by a bracketed section name:
//! ```text
//! mode: dcdc
//! consenting: no
//! distinguished: c      # `-` is the empty outcome
//! budget: 1             # or `unlimited`
//! registered: abcd      # defaults to every candidate
//! pool: -               # adding modes only
//! rule: borda           # not used with a [choice] block
//! [profile]             # or [tournament] or [choice]
//! candidates: a b c d
//! 3: d c a b
//! [preferences]         # required when consenting
//! a: a b c d
//! ```
//!
//! `#` starts a comment. Every parser reports the offending line number.

use std::fmt::Write as _;

use crate::candidates::{Candidate, CandidateSet, State, TieBreakOrder};
use crate::control::{ControlInstance, ControlMode};
use crate::error::{Error, Result};
use crate::profile::{Ballot, CandidatePreferenceProfile, VoterProfile};
use crate::rules::{ChoiceFunction, Electorate, OutcomeSource, Rule};
use crate::tournament::WeightedTournament;

/// Nonblank, comment-stripped lines with their 1-based numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn split_key(line: usize, text: &str) -> Result<(&str, &str)> {
    text.split_once(':')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| Error::parse(line, format!("expected `key: value`, got {text:?}")))
}

fn parse_labels(line: usize, cs: &CandidateSet, text: &str) -> Result<Vec<Candidate>> {
    text.split_whitespace()
        .map(|l| {
            cs.index_of(l)
                .ok_or_else(|| Error::parse(line, format!("unknown candidate {l:?}")))
        })
        .collect()
}

fn parse_candidates(line: usize, text: &str) -> Result<CandidateSet> {
    CandidateSet::new(text.split_whitespace()).map_err(|e| Error::parse(line, e.to_string()))
}

fn parse_tiebreak(line: usize, cs: &CandidateSet, text: &str) -> Result<TieBreakOrder> {
    let order = parse_labels(line, cs, text)?;
    TieBreakOrder::new(order).map_err(|e| Error::parse(line, e.to_string()))
}

fn join_labels(cs: &CandidateSet, order: &[Candidate]) -> String {
    order.iter().map(|&c| cs.label(c)).collect::<Vec<_>>().join(" ")
}

/// A parsed profile file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileFile {
    pub profile: VoterProfile,
    pub tiebreak: TieBreakOrder,
}

pub fn parse_profile(text: &str) -> Result<ProfileFile> {
    let mut candidates: Option<CandidateSet> = None;
    let mut tiebreak = None;
    let mut ballots = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        let (key, value) = split_key(line, content)?;
        match key {
            "candidates" => {
                if candidates.is_some() {
                    return Err(Error::parse(line, "duplicate `candidates:` line"));
                }
                candidates = Some(parse_candidates(line, value)?);
            }
            "tiebreak" => {
                let cs = candidates
                    .as_ref()
                    .ok_or_else(|| Error::parse(line, "`tiebreak:` before `candidates:`"))?;
                tiebreak = Some(parse_tiebreak(line, cs, value)?);
            }
            count => {
                let cs = candidates
                    .as_ref()
                    .ok_or_else(|| Error::parse(line, "ballot before `candidates:`"))?;
                let count: u32 = count
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad ballot count {count:?}")))?;
                if count == 0 {
                    return Err(Error::parse(line, "ballot counts must be positive"));
                }
                let ranking = parse_labels(line, cs, value)?;
                let mut seen = State::empty();
                for &c in &ranking {
                    if seen.contains(c) {
                        return Err(Error::parse(line, "candidate ranked twice"));
                    }
                    seen = seen.with(c);
                }
                if ranking.len() != cs.len() {
                    return Err(Error::parse(
                        line,
                        format!("ballot ranks {} of {} candidates", ranking.len(), cs.len()),
                    ));
                }
                ballots.push(Ballot::new(count, ranking));
            }
        }
    }
    let candidates = candidates.ok_or_else(|| Error::parse(last_line.max(1), "missing `candidates:` line"))?;
    let m = candidates.len();
    let profile = VoterProfile::new(candidates, ballots).map_err(|e| Error::parse(last_line.max(1), e.to_string()))?;
    Ok(ProfileFile {
        profile,
        tiebreak: tiebreak.unwrap_or_else(|| TieBreakOrder::lexicographic(m)),
    })
}

pub fn write_profile(profile: &VoterProfile, tiebreak: &TieBreakOrder) -> String {
    let cs = profile.candidates();
    let mut out = format!("candidates: {cs}\ntiebreak: {}\n", join_labels(cs, tiebreak.priority()));
    for b in profile.ballots() {
        let _ = writeln!(out, "{}: {}", b.count, join_labels(cs, &b.ranking));
    }
    out
}

pub fn parse_preferences(text: &str, cs: &CandidateSet) -> Result<CandidatePreferenceProfile> {
    let mut orders: Vec<Option<Vec<Candidate>>> = vec![None; cs.len()];
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        let (key, value) = split_key(line, content)?;
        if key == "candidates" || key == "tiebreak" {
            continue;
        }
        let agent = cs
            .index_of(key)
            .ok_or_else(|| Error::parse(line, format!("unknown candidate {key:?}")))?;
        let order = parse_labels(line, cs, value)?;
        if order.first() != Some(&agent) {
            return Err(Error::parse(line, format!("{key} must rank itself first")));
        }
        if order.len() != cs.len() || State::from_indices(order.iter().copied()).len() != cs.len() {
            return Err(Error::parse(line, "ranking must list every candidate exactly once"));
        }
        if orders[agent].replace(order).is_some() {
            return Err(Error::parse(line, format!("preferences of {key} given twice")));
        }
    }
    let orders = orders
        .into_iter()
        .enumerate()
        .map(|(c, o)| {
            o.ok_or_else(|| Error::parse(last_line.max(1), format!("missing preferences for {}", cs.label(c))))
        })
        .collect::<Result<Vec<_>>>()?;
    CandidatePreferenceProfile::new(orders).map_err(|e| Error::parse(last_line.max(1), e.to_string()))
}

pub fn write_preferences(prefs: &CandidatePreferenceProfile, cs: &CandidateSet) -> String {
    let mut out = String::new();
    for (c, order) in prefs.orders().iter().enumerate() {
        let _ = writeln!(out, "{}: {}", cs.label(c), join_labels(cs, order));
    }
    out
}

/// A parsed weighted-tournament file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentFile {
    pub tournament: WeightedTournament,
    pub tiebreak: TieBreakOrder,
}

pub fn parse_tournament(text: &str) -> Result<TournamentFile> {
    let mut declared: Option<(usize, CandidateSet)> = None;
    let mut tiebreak_line: Option<(usize, &str)> = None;
    let mut n: Option<u32> = None;
    let mut pairs: Vec<(usize, &str, &str, u32)> = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        let (key, value) = split_key(line, content)?;
        match key {
            "candidates" => declared = Some((line, parse_candidates(line, value)?)),
            "tiebreak" => tiebreak_line = Some((line, value)),
            "n" => {
                n = Some(
                    value
                        .parse()
                        .map_err(|_| Error::parse(line, format!("bad voter count {value:?}")))?,
                )
            }
            pair => {
                let mut it = pair.split_whitespace();
                let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) else {
                    return Err(Error::parse(line, format!("expected `x y: count`, got {content:?}")));
                };
                let count = value
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad support count {value:?}")))?;
                pairs.push((line, x, y, count));
            }
        }
    }
    let n = n.ok_or_else(|| Error::parse(last_line.max(1), "missing `n:` line"))?;
    let cs = match declared {
        Some((_, cs)) => cs,
        None => {
            let mut labels: Vec<&str> = Vec::new();
            for &(_, x, y, _) in &pairs {
                for l in [x, y] {
                    if !labels.contains(&l) {
                        labels.push(l);
                    }
                }
            }
            CandidateSet::new(labels).map_err(|e| Error::parse(last_line.max(1), e.to_string()))?
        }
    };
    let m = cs.len();
    let mut matrix: Vec<Vec<Option<u32>>> = vec![vec![None; m]; m];
    for &(line, x, y, count) in &pairs {
        let xi = cs
            .index_of(x)
            .ok_or_else(|| Error::parse(line, format!("unknown candidate {x:?}")))?;
        let yi = cs
            .index_of(y)
            .ok_or_else(|| Error::parse(line, format!("unknown candidate {y:?}")))?;
        if xi == yi {
            return Err(Error::parse(line, "a candidate cannot face itself"));
        }
        if count > n {
            return Err(Error::parse(line, format!("support {count} exceeds n = {n}")));
        }
        if matrix[xi][yi].replace(count).is_some() {
            return Err(Error::parse(line, format!("pair {x} {y} given twice")));
        }
    }
    let mut full = vec![vec![0; m]; m];
    for x in 0..m {
        for y in 0..m {
            if x != y {
                full[x][y] = matrix[x][y].ok_or_else(|| {
                    Error::parse(
                        last_line.max(1),
                        format!("missing pair {} {}", cs.label(x), cs.label(y)),
                    )
                })?;
            }
        }
    }
    let tiebreak = match tiebreak_line {
        Some((line, value)) => parse_tiebreak(line, &cs, value)?,
        None => TieBreakOrder::lexicographic(m),
    };
    let tournament =
        WeightedTournament::from_matrix(cs, n, &full).map_err(|e| Error::parse(last_line.max(1), e.to_string()))?;
    Ok(TournamentFile { tournament, tiebreak })
}

pub fn write_tournament(t: &WeightedTournament, tiebreak: &TieBreakOrder) -> String {
    let cs = t.candidates();
    let mut out = format!(
        "candidates: {cs}\ntiebreak: {}\nn: {}\n",
        join_labels(cs, tiebreak.priority()),
        t.voter_count()
    );
    for x in cs.iter() {
        for y in cs.iter().filter(|&y| y != x) {
            let _ = writeln!(out, "{} {}: {}", cs.label(x), cs.label(y), t.support(x, y));
        }
    }
    out
}

/// A parsed choice-function file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceFile {
    pub choice: ChoiceFunction,
    pub tiebreak: TieBreakOrder,
}

pub fn parse_choice_function(text: &str) -> Result<ChoiceFile> {
    let mut candidates: Option<CandidateSet> = None;
    let mut tiebreak = None;
    let mut entries: Vec<(State, Candidate)> = Vec::new();
    let mut last_line = 0;
    for (line, content) in content_lines(text) {
        last_line = line;
        if let Some((subset, w)) = content.split_once("->") {
            let cs = candidates
                .as_ref()
                .ok_or_else(|| Error::parse(line, "entry before `candidates:`"))?;
            let s = cs.parse_subset(subset).map_err(|e| Error::parse(line, e.to_string()))?;
            if s.is_empty() {
                return Err(Error::parse(line, "the empty set has no winner"));
            }
            let w = w.trim();
            let wi = cs
                .index_of(w)
                .ok_or_else(|| Error::parse(line, format!("unknown candidate {w:?}")))?;
            if !s.contains(wi) {
                return Err(Error::parse(line, format!("winner {w} is not in {}", subset.trim())));
            }
            if entries.iter().any(|&(t, _)| t == s) {
                return Err(Error::parse(line, format!("subset {} listed twice", subset.trim())));
            }
            entries.push((s, wi));
            continue;
        }
        let (key, value) = split_key(line, content)?;
        match key {
            "candidates" => candidates = Some(parse_candidates(line, value)?),
            "tiebreak" => {
                let cs = candidates
                    .as_ref()
                    .ok_or_else(|| Error::parse(line, "`tiebreak:` before `candidates:`"))?;
                tiebreak = Some(parse_tiebreak(line, cs, value)?);
            }
            other => return Err(Error::parse(line, format!("unexpected key {other:?}"))),
        }
    }
    let cs = candidates.ok_or_else(|| Error::parse(last_line.max(1), "missing `candidates:` line"))?;
    let m = cs.len();
    let choice =
        ChoiceFunction::from_entries(cs, &entries).map_err(|e| Error::parse(last_line.max(1), e.to_string()))?;
    Ok(ChoiceFile {
        choice,
        tiebreak: tiebreak.unwrap_or_else(|| TieBreakOrder::lexicographic(m)),
    })
}

/// Entries are written largest subsets first, then lexicographically.
pub fn write_choice_function(cf: &ChoiceFunction) -> String {
    let cs = cf.candidates();
    let mut out = format!("candidates: {cs}\n");
    let mut entries: Vec<(State, Candidate)> = cf.entries().collect();
    entries.sort_by_key(|&(s, _)| (std::cmp::Reverse(s.len()), s.iter().collect::<Vec<_>>()));
    for (s, w) in entries {
        let _ = writeln!(out, "{} -> {}", cs.format_subset(s), cs.label(w));
    }
    out
}

/// Shifts the line number of a parse error found inside an embedded block.
fn shifted(offset: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { line, message } => Error::Parse {
            line: line + offset,
            message,
        },
        other => Error::parse(offset.max(1), other.to_string()),
    }
}

struct Block {
    name: String,
    /// Line number of the `[name]` header.
    header: usize,
    body: String,
}

pub fn parse_control_instance(text: &str) -> Result<ControlInstance> {
    let mut header_lines = String::new();
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.split('#').next().unwrap_or("").trim();
        if let Some(name) = trimmed.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let name = name.trim().to_ascii_lowercase();
            if blocks.iter().any(|b| b.name == name) {
                return Err(Error::parse(i + 1, format!("duplicate [{name}] block")));
            }
            blocks.push(Block {
                name,
                header: i + 1,
                body: String::new(),
            });
            continue;
        }
        // keep blank lines so that embedded line numbers stay aligned
        let target = match blocks.last_mut() {
            Some(b) => &mut b.body,
            None => &mut header_lines,
        };
        target.push_str(raw);
        target.push('\n');
    }

    let mut mode = None;
    let mut consenting = false;
    let mut distinguished: Option<(usize, String)> = None;
    let mut budget: Option<usize> = None;
    let mut registered: Option<(usize, String)> = None;
    let mut pool: Option<(usize, String)> = None;
    let mut rule: Option<(usize, Rule)> = None;
    let mut last_line = 0;
    for (line, content) in content_lines(&header_lines) {
        last_line = line;
        let (key, value) = split_key(line, content)?;
        match key {
            "mode" => {
                mode = Some(
                    value
                        .parse::<ControlMode>()
                        .map_err(|e| Error::parse(line, e.to_string()))?,
                )
            }
            "consenting" => {
                consenting = match value {
                    "yes" | "true" => true,
                    "no" | "false" => false,
                    _ => return Err(Error::parse(line, format!("expected yes or no, got {value:?}"))),
                }
            }
            "distinguished" => distinguished = Some((line, value.to_string())),
            "budget" => {
                budget = match value {
                    "unlimited" | "-" => None,
                    _ => Some(
                        value
                            .parse()
                            .map_err(|_| Error::parse(line, format!("bad budget {value:?}")))?,
                    ),
                }
            }
            "registered" => registered = Some((line, value.to_string())),
            "pool" => pool = Some((line, value.to_string())),
            "rule" => {
                rule = Some((
                    line,
                    value.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?,
                ))
            }
            other => return Err(Error::parse(line, format!("unexpected key {other:?}"))),
        }
    }
    let end = text.lines().count().max(1);
    let mode = mode.ok_or_else(|| Error::parse(last_line.max(1), "missing `mode:` line"))?;

    let mut source_and_tb = None;
    let mut prefs_block = None;
    for b in &blocks {
        let parsed = match b.name.as_str() {
            "profile" | "tournament" => {
                let (rule_line, rule) =
                    rule.ok_or_else(|| Error::parse(b.header, format!("[{}] needs a `rule:` line", b.name)))?;
                let (electorate, tb) = if b.name == "profile" {
                    let f = parse_profile(&b.body).map_err(shifted(b.header))?;
                    (Electorate::Profile(f.profile), f.tiebreak)
                } else {
                    if rule.needs_profile() {
                        return Err(Error::parse(rule_line, format!("{rule} needs a [profile] block")));
                    }
                    let f = parse_tournament(&b.body).map_err(shifted(b.header))?;
                    (Electorate::Tournament(f.tournament), f.tiebreak)
                };
                (OutcomeSource::Rule { rule, electorate }, tb)
            }
            "choice" => {
                let f = parse_choice_function(&b.body).map_err(shifted(b.header))?;
                (OutcomeSource::Table(f.choice), f.tiebreak)
            }
            "preferences" => {
                prefs_block = Some(b);
                continue;
            }
            other => return Err(Error::parse(b.header, format!("unknown block [{other}]"))),
        };
        if source_and_tb.replace(parsed).is_some() {
            return Err(Error::parse(b.header, "more than one electorate block"));
        }
    }
    let (source, tiebreak) =
        source_and_tb.ok_or_else(|| Error::parse(end, "missing [profile], [tournament] or [choice] block"))?;
    let cs = source.candidates().clone();

    let subset = |entry: Option<(usize, String)>, default: State| -> Result<State> {
        match entry {
            Some((line, text)) => cs.parse_subset(&text).map_err(|e| Error::parse(line, e.to_string())),
            None => Ok(default),
        }
    };
    let registered = subset(registered, cs.full())?;
    let pool = subset(pool, State::empty())?;
    let distinguished = match distinguished {
        None => return Err(Error::parse(last_line.max(1), "missing `distinguished:` line")),
        Some((_, text)) if text == "-" || text == "⊥" => None,
        Some((line, text)) => Some(
            cs.index_of(&text)
                .ok_or_else(|| Error::parse(line, format!("unknown candidate {text:?}")))?,
        ),
    };
    let consent_prefs = match prefs_block {
        Some(b) => Some(parse_preferences(&b.body, &cs).map_err(shifted(b.header))?),
        None => None,
    };

    let inst = ControlInstance {
        mode,
        consenting,
        source,
        tiebreak,
        distinguished,
        budget,
        registered,
        pool,
        consent_prefs,
    };
    inst.validate()
        .map_err(|e| Error::parse(last_line.max(1), e.to_string()))?;
    Ok(inst)
}

pub fn write_control_instance(inst: &ControlInstance) -> String {
    let cs = inst.source.candidates();
    let mut out = format!(
        "mode: {}\nconsenting: {}\ndistinguished: {}\nbudget: {}\nregistered: {}\npool: {}\n",
        inst.mode,
        if inst.consenting { "yes" } else { "no" },
        inst.distinguished.map_or("-", |c| cs.label(c)),
        inst.budget.map_or_else(|| "unlimited".to_string(), |k| k.to_string()),
        cs.format_subset(inst.registered),
        cs.format_subset(inst.pool),
    );
    match &inst.source {
        OutcomeSource::Rule { rule, electorate } => {
            let _ = writeln!(out, "rule: {rule}");
            match electorate {
                Electorate::Profile(p) => {
                    out.push_str("[profile]\n");
                    out.push_str(&write_profile(p, &inst.tiebreak));
                }
                Electorate::Tournament(t) => {
                    out.push_str("[tournament]\n");
                    out.push_str(&write_tournament(t, &inst.tiebreak));
                }
            }
        }
        OutcomeSource::Table(cf) => {
            out.push_str("[choice]\n");
            let body = write_choice_function(cf);
            let (first, rest) = body.split_once('\n').unwrap_or((&body, ""));
            let _ = writeln!(out, "{first}\ntiebreak: {}", join_labels(cs, inst.tiebreak.priority()));
            out.push_str(rest);
        }
    }
    if let Some(p) = &inst.consent_prefs {
        out.push_str("[preferences]\n");
        out.push_str(&write_preferences(p, cs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_errors_carry_line_numbers() {
        let text = "candidates: a b c\n\n2: a b c\n1: a b\n";
        assert_eq!(
            parse_profile(text).unwrap_err(),
            Error::parse(4, "ballot ranks 2 of 3 candidates")
        );
        let text = "candidates: a b c\nx: a b c\n";
        assert!(matches!(parse_profile(text), Err(Error::Parse { line: 2, .. })));
        let text = "1: a b c\n";
        assert!(matches!(parse_profile(text), Err(Error::Parse { line: 1, .. })));
        let text = "candidates: a b\ntiebreak: a a\n1: a b\n";
        assert!(matches!(parse_profile(text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn profile_default_tiebreak_is_candidate_order() {
        let f = parse_profile("candidates: x y\n1: y x # trailing comment\n").unwrap();
        assert_eq!(f.tiebreak, TieBreakOrder::lexicographic(2));
        assert_eq!(f.profile.voter_count(), 1);
    }

    #[test]
    fn preferences_errors() {
        let cs = CandidateSet::alphabetic(3).unwrap();
        assert!(matches!(
            parse_preferences("a: b a c\n", &cs),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_preferences("a: a b c\nb: b a c\n", &cs),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_preferences("a: a b c\na: a c b\n", &cs),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn tournament_requires_coherent_complete_pairs() {
        let ok = "n: 3\na b: 2\nb a: 1\n";
        let t = parse_tournament(ok).unwrap().tournament;
        assert_eq!(t.support(0, 1), 2);
        assert!(parse_tournament("n: 3\na b: 2\nb a: 2\n").is_err());
        assert!(parse_tournament("n: 3\na b: 2\n").is_err());
        assert!(matches!(
            parse_tournament("n: 3\na b: 4\nb a: 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn choice_function_errors() {
        assert!(matches!(
            parse_choice_function("candidates: a b\nab -> c\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_choice_function("candidates: a b\nab -> a\na -> a\n"),
            Err(Error::Parse { .. })
        ));
        let f = parse_choice_function("candidates: a b\nab -> b\na -> a\nb -> b\n").unwrap();
        assert_eq!(f.choice.get(State::full(2)), Some(1));
    }

    const DCDC: &str = "\
mode: dcdc
consenting: no
distinguished: c
budget: 1
rule: borda
[profile]
candidates: a b c d
3: d c a b
2: a c b d
[preferences]
a: a b c d
b: b a c d
c: c a b d
d: d a b c
";

    #[test]
    fn control_instance_round_trips() {
        let inst = parse_control_instance(DCDC).unwrap();
        assert_eq!(inst.mode, ControlMode::Dcdc);
        assert_eq!(inst.distinguished, Some(2));
        assert_eq!(inst.budget, Some(1));
        assert_eq!(inst.registered, State::full(4));
        assert!(inst.consent_prefs.is_some() && !inst.consenting);
        let again = parse_control_instance(&write_control_instance(&inst)).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn control_instance_with_choice_block() {
        let text = "mode: dc-dc+ac\nconsenting: yes\ndistinguished: -\nbudget: unlimited\n\
                    registered: a\npool: b\n[choice]\ncandidates: a b\ntiebreak: b a\n\
                    ab -> b\na -> a\nb -> b\n[preferences]\na: a b\nb: b a\n";
        let inst = parse_control_instance(text).unwrap();
        assert_eq!(inst.distinguished, None);
        assert_eq!(inst.pool, State::singleton(1));
        assert_eq!(inst.tiebreak.priority(), &[1, 0]);
        assert_eq!(parse_control_instance(&write_control_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn control_instance_errors_point_into_blocks() {
        // line 8 of the file is the malformed ballot
        let bad = DCDC.replace("3: d c a b", "3: d c a");
        assert!(matches!(
            parse_control_instance(&bad),
            Err(Error::Parse { line: 8, .. })
        ));
        let bad = DCDC.replace("rule: borda\n", "");
        assert!(matches!(
            parse_control_instance(&bad),
            Err(Error::Parse { line: 5, .. })
        ));
        let bad = DCDC.replace("mode: dcdc", "mode: sideways");
        assert!(matches!(
            parse_control_instance(&bad),
            Err(Error::Parse { line: 1, .. })
        ));
        let bad = DCDC
            .replace("consenting: no", "consenting: yes")
            .replace("[preferences]", "[extra]");
        assert!(parse_control_instance(&bad).is_err());
        let bad = DCDC.replace("budget: 1", "budget: 9");
        assert!(parse_control_instance(&bad).is_err());
    }
}
