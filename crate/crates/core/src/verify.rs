//! Named end-to-end checks of the worked examples and small theorems, run
//! against a [`FixtureSet`] so that a damaged fixture shows up as a failing
//! check rather than a crash.

use serde::Serialize;

use crate::candidates::{CandidateSet, State};
use crate::control::{bridge_check, decide_control, ControlInstance, ControlMode};
use crate::fixtures::FixtureSet;
use crate::game::{certify_dom_equilibrium, dom_set, CandidacyGame, EquilibriumKind};
use crate::profile::CandidatePreferenceProfile;
use crate::rules::{condorcet_winner, Electorate, Rule};
use crate::search::{build_problem, solve, verify_no_ne, SearchOptions, SearchStatus, SolveConfig};
use crate::tournament::mcgarvey_realize;
use crate::TieBreakOrder;

type CheckResult = std::result::Result<(), String>;

pub struct Check {
    pub name: &'static str,
    pub summary: &'static str,
    run: fn(&FixtureSet) -> CheckResult,
}

impl Check {
    pub fn run(&self, fixtures: &FixtureSet) -> CheckOutcome {
        let result = (self.run)(fixtures);
        CheckOutcome {
            name: self.name,
            passed: result.is_ok(),
            detail: result.err().unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Failure explanation; empty on success.
    pub detail: String,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

fn example1_game(fx: &FixtureSet) -> Result<CandidacyGame, String> {
    let f = &fx.example1;
    CandidacyGame::new(f.source(Rule::Borda), f.prefs.clone(), f.tiebreak.clone()).map_err(err)
}

fn state(cs: &CandidateSet, bits: &str) -> Result<State, String> {
    State::parse_bitstring(bits, cs.len()).map_err(err)
}

fn label(cs: &CandidateSet, c: Option<usize>) -> String {
    cs.format_outcome(c)
}

fn expect_outcome(g: &CandidacyGame, running: &str, winner: &str) -> CheckResult {
    let cs = g.candidates();
    let s = cs.parse_subset(running).map_err(err)?;
    let got = label(cs, g.outcome(s));
    ensure(got == winner, || format!("{running} -> {got}, expected {winner}"))
}

fn example1_outcomes(fx: &FixtureSet) -> CheckResult {
    let g = example1_game(fx)?;
    expect_outcome(&g, "abcd", "c")?;
    expect_outcome(&g, "abc", "a")
}

fn example1_equilibria(fx: &FixtureSet) -> CheckResult {
    let g = example1_game(fx)?;
    let cs = g.candidates().clone();
    let full = g.classify(g.full_state());
    let d = full
        .witness(EquilibriumKind::Nash)
        .ok_or("1111 has no unilateral deviation")?;
    ensure(
        d.leavers() == cs.parse_subset("d").map_err(err)? && d.joiners().is_empty(),
        || format!("first deviation from 1111 is {}", cs.format_subset(d.coalition)),
    )?;
    let s = state(&cs, "1110")?;
    let r = g.classify(s);
    ensure(r.is_ne() && r.is_se(), || "1110 is not an SE".into())
}

fn plurality_no_ne(fx: &FixtureSet) -> CheckResult {
    let f = &fx.plurality13;
    let g = CandidacyGame::new(f.source(Rule::Plurality), f.prefs.clone(), f.tiebreak.clone()).map_err(err)?;
    expect_outcome(&g, "abcd", "d")?;
    let mut game = g;
    for (round, label) in ["", "e", "f"].iter().enumerate() {
        if round > 0 {
            game = game.lift_with_bottom_candidate(label).map_err(err)?;
        }
        let ne = game.enumerate_equilibria(EquilibriumKind::Nash).map_err(err)?;
        ensure(ne.is_empty(), || {
            format!("{} NE with {} candidates", ne.len(), game.num_candidates())
        })?;
    }
    Ok(())
}

fn maximin_game(fx: &FixtureSet) -> Result<CandidacyGame, String> {
    let f = &fx.maximin5;
    CandidacyGame::new(f.source(Rule::Maximin), f.prefs.clone(), f.tiebreak.clone()).map_err(err)
}

fn maximin_outcomes(fx: &FixtureSet) -> CheckResult {
    let g = maximin_game(fx)?;
    for (running, winner) in [
        ("abcde", "e"),
        ("abcd", "a"),
        ("abde", "b"),
        ("abce", "e"),
        ("acde", "a"),
        ("bcde", "c"),
    ] {
        expect_outcome(&g, running, winner)?;
    }
    Ok(())
}

fn maximin_no_ne(fx: &FixtureSet) -> CheckResult {
    let ne = maximin_game(fx)?
        .enumerate_equilibria(EquilibriumKind::Nash)
        .map_err(err)?;
    ensure(ne.is_empty(), || format!("{} NE", ne.len()))
}

fn borda_remark(fx: &FixtureSet) -> CheckResult {
    let f = &fx.borda_2ne;
    let g = CandidacyGame::new(f.source(Rule::Borda), f.prefs.clone(), f.tiebreak.clone()).map_err(err)?;
    let cs = g.candidates().clone();
    expect_outcome(&g, "bcd", "b")?;
    expect_outcome(&g, "abd", "d")?;
    let ne = g.enumerate_equilibria(EquilibriumKind::Nash).map_err(err)?;
    let (s1, s2) = (state(&cs, "0111")?, state(&cs, "1101")?);
    let mut expected = vec![s1, s2];
    expected.sort();
    ensure(ne == expected, || {
        let listed: Vec<String> = ne.iter().map(|s| s.to_bitstring(cs.len())).collect();
        format!("NE set {listed:?}")
    })?;
    let k2 = g.enumerate_equilibria(EquilibriumKind::KNash(2)).map_err(err)?;
    ensure(k2.is_empty(), || format!("{} 2-NE", k2.len()))?;
    let from_s1 = g.try_deviation(s1, cs.parse_subset("ac").map_err(err)?);
    ensure(from_s1.is_some_and(|d| d.to == s2), || {
        "{a,c} cannot move from 0111 to 1101".into()
    })?;
    let from_s2 = g.try_deviation(s2, cs.parse_subset("bc").map_err(err)?);
    ensure(
        from_s2.is_some_and(|d| d.leavers() == State::singleton(1) && d.joiners() == State::singleton(2)),
        || "b leaving with c joining is not improving from 1101".into(),
    )
}

fn footnote_game(fx: &FixtureSet) -> CheckResult {
    let f = &fx.footnote3;
    let g = CandidacyGame::new(f.source(), f.prefs.clone(), f.tiebreak.clone()).map_err(err)?;
    let cs = g.candidates().clone();
    let ne = g.enumerate_equilibria(EquilibriumKind::Nash).map_err(err)?;
    ensure(!ne.is_empty(), || "no NE".into())?;
    let se = g.enumerate_equilibria(EquilibriumKind::Strong).map_err(err)?;
    ensure(se.is_empty(), || format!("{} SE", se.len()))?;
    for (from, coalition) in [
        ("abc", "c"),
        ("ab", "bc"),
        ("ac", "b"),
        ("bc", "a"),
        ("a", "c"),
        ("b", "c"),
        ("c", "ab"),
    ] {
        let s = cs.parse_subset(from).map_err(err)?;
        let z = cs.parse_subset(coalition).map_err(err)?;
        ensure(g.try_deviation(s, z).is_some(), || {
            format!("{{{coalition}}} has no improving move from {{{from}}}")
        })?;
    }
    Ok(())
}

/// Every strict order on `m` candidates with `a` first.
fn orders_with_top(m: usize, a: usize) -> Vec<Vec<usize>> {
    fn permute(rest: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == rest.len() {
            out.push(rest.clone());
            return;
        }
        for i in k..rest.len() {
            rest.swap(k, i);
            permute(rest, k + 1, out);
            rest.swap(k, i);
        }
    }
    let mut rest: Vec<usize> = (0..m).filter(|&x| x != a).collect();
    let mut out = Vec::new();
    permute(&mut rest, 0, &mut out);
    out.into_iter().map(|r| std::iter::once(a).chain(r).collect()).collect()
}

/// Every profile of candidate preferences over `m` candidates.
pub fn all_candidate_preferences(m: usize) -> Vec<CandidatePreferenceProfile> {
    let per_agent: Vec<Vec<Vec<usize>>> = (0..m).map(|a| orders_with_top(m, a)).collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; m];
    loop {
        let orders = pick.iter().enumerate().map(|(a, &k)| per_agent[a][k].clone()).collect();
        out.push(CandidatePreferenceProfile::new(orders).expect("self-supported"));
        let mut a = 0;
        loop {
            if a == m {
                return out;
            }
            pick[a] += 1;
            if pick[a] < per_agent[a].len() {
                break;
            }
            pick[a] = 0;
            a += 1;
        }
    }
}

fn prop4_graphs(fx: &FixtureSet) -> CheckResult {
    let prefs = all_candidate_preferences(4);
    for (gi, graph) in fx.graphs.iter().enumerate() {
        let profile = mcgarvey_realize(graph).map_err(err)?;
        let tb = TieBreakOrder::lexicographic(4);
        for rule in [Rule::Maximin, Rule::COPELAND0, Rule::COPELAND1, Rule::UncoveredSet] {
            let electorate = Electorate::Profile(profile.clone());
            // outcomes depend only on the graph and rule; preferences vary
            let base = CandidacyGame::from_rule(rule, electorate, prefs[0].clone(), tb.clone()).map_err(err)?;
            let cf = base.choice_function();
            for p in &prefs {
                let g = CandidacyGame::from_choice_function(cf.clone(), p.clone()).map_err(err)?;
                let has_ne = g.states().any(|s| g.is_ne(s));
                ensure(has_ne, || {
                    format!("G{} under {rule} has a preference profile without NE", gi + 1)
                })?;
            }
        }
    }
    Ok(())
}

fn g1_condorcet(fx: &FixtureSet) -> CheckResult {
    let profile = mcgarvey_realize(&fx.graphs[0]).map_err(err)?;
    let cs = profile.candidates().clone();
    let cw = condorcet_winner(&Electorate::Profile(profile), cs.full()).map_err(err)?;
    ensure(cw == Some(0), || format!("Condorcet winner {}", label(&cs, cw)))
}

fn dom_g4(fx: &FixtureSet) -> CheckResult {
    let g = &fx.graphs[3];
    let cs = g.candidates();
    let dom = dom_set(0, g);
    ensure(dom == cs.parse_subset("acd").map_err(err)?, || {
        format!("Dom(a) = {}", cs.format_subset(dom))
    })?;
    // the Copeland construction on G4 with arbitrary preferences
    let profile = mcgarvey_realize(g).map_err(err)?;
    for rule in [Rule::COPELAND0, Rule::COPELAND1, Rule::UncoveredSet] {
        for p in all_candidate_preferences(4).iter().step_by(37) {
            let game = CandidacyGame::from_rule(
                rule,
                Electorate::Profile(profile.clone()),
                p.clone(),
                TieBreakOrder::lexicographic(4),
            )
            .map_err(err)?;
            certify_dom_equilibrium(&game).map_err(err)?;
        }
    }
    Ok(())
}

fn control_example1(fx: &FixtureSet) -> CheckResult {
    let f = &fx.example1;
    let inst = ControlInstance::deleting(ControlMode::Dcdc, f.source(Rule::Borda), f.tiebreak.clone(), 2, 1);
    for consenting in [false, true] {
        let inst = if consenting {
            inst.clone().with_consent(f.prefs.clone())
        } else {
            inst.clone()
        };
        let v = decide_control(&inst).map_err(err)?;
        let removed = v.witness.map(|w| w.removed);
        ensure(v.decision && removed == Some(State::singleton(3)), || {
            format!("consenting={consenting}: decision {} witness {removed:?}", v.decision)
        })?;
    }
    Ok(())
}

fn bridge_example1(fx: &FixtureSet) -> CheckResult {
    let g = example1_game(fx)?;
    let cs = g.candidates().clone();
    for bits in ["1111", "1110"] {
        let r = bridge_check(&g, state(&cs, bits)?).map_err(err)?;
        ensure(r.agrees(), || format!("bridge disagrees at {bits}: {r:?}"))?;
    }
    Ok(())
}

fn search_plain(m: usize, expect: SearchStatus) -> CheckResult {
    let prob = build_problem(SearchOptions::plain(m)).map_err(err)?;
    let r = solve(&prob, &SolveConfig::default()).map_err(err)?;
    ensure(r.status == expect, || format!("m={m}: {:?}", r.status))?;
    if let Some(sol) = r.solution {
        ensure(verify_no_ne(&sol.choice, &sol.prefs).map_err(err)?, || {
            "solver output has an NE".into()
        })?;
    }
    Ok(())
}

fn search_m4(_: &FixtureSet) -> CheckResult {
    search_plain(4, SearchStatus::Sat)
}

fn search_m3(_: &FixtureSet) -> CheckResult {
    search_plain(3, SearchStatus::Unsat)
}

fn search_borda(_: &FixtureSet) -> CheckResult {
    let prob = build_problem(SearchOptions::borda(4, crate::search::DEFAULT_BORDA_VOTERS)).map_err(err)?;
    let r = solve(&prob, &SolveConfig::default()).map_err(err)?;
    ensure(r.status == SearchStatus::Unsat, || format!("{:?}", r.status))
}

pub const CHECKS: &[Check] = &[
    Check {
        name: "borda-example1-outcomes",
        summary: "abcd elects c, abc elects a",
        run: example1_outcomes,
    },
    Check {
        name: "borda-example1-equilibria",
        summary: "d leaving is the first deviation from 1111; 1110 is an NE and an SE",
        run: example1_equilibria,
    },
    Check {
        name: "plurality-no-ne",
        summary: "13-voter plurality game has no NE, also after two bottom-candidate lifts",
        run: plurality_no_ne,
    },
    Check {
        name: "maximin-outcomes",
        summary: "six listed maximin winners of the five-candidate tournament",
        run: maximin_outcomes,
    },
    Check {
        name: "maximin-no-ne",
        summary: "five-candidate maximin game has no NE",
        run: maximin_no_ne,
    },
    Check {
        name: "borda-no-2ne",
        summary: "NE set is {0111, 1101}, no 2-NE, both coalition moves improve",
        run: borda_remark,
    },
    Check {
        name: "choice-function-ne-without-se",
        summary: "three-candidate choice-function game: NE exists, no SE, seven group deviations",
        run: footnote_game,
    },
    Check {
        name: "prop4-graphs",
        summary: "G1..G4 under maximin, copeland0, copeland1, uc: NE for every preference profile",
        run: prop4_graphs,
    },
    Check {
        name: "prop4-g1-condorcet",
        summary: "G1 realized by McGarvey has Condorcet winner a",
        run: g1_condorcet,
    },
    Check {
        name: "copeland-dom-g4",
        summary: "Dom(a) on G4 is acd and the Dom construction certifies",
        run: dom_g4,
    },
    Check {
        name: "control-dcdc-example1",
        summary: "deleting d defeats c, with and without consent",
        run: control_example1,
    },
    Check {
        name: "control-bridge-example1",
        summary: "equilibrium flags of 1111 and 1110 match consenting control",
        run: bridge_example1,
    },
    Check {
        name: "search-m3-unsat",
        summary: "no three-candidate game without NE",
        run: search_m3,
    },
    Check {
        name: "search-m4-sat",
        summary: "a four-candidate choice-function game without NE exists",
        run: search_m4,
    },
    Check {
        name: "search-m4-borda-unsat",
        summary: "no four-candidate Borda game without NE",
        run: search_borda,
    },
];

/// Runs every check whose name contains `filter` (all when `None`).
pub fn run_checks(fixtures: &FixtureSet, filter: Option<&str>) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .filter(|c| filter.is_none_or(|f| c.name.contains(f)))
        .map(|c| c.run(fixtures))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preference_profiles_are_enumerated() {
        assert_eq!(all_candidate_preferences(3).len(), 8);
        assert_eq!(all_candidate_preferences(4).len(), 1296);
    }

    #[test]
    fn filter_selects_by_name() {
        let fx = FixtureSet::embedded().unwrap();
        let out = run_checks(&fx, Some("maximin"));
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|o| o.passed), "{out:?}");
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), CHECKS.len());
    }
}
