use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures;
use crate::random;

fn bits(text: &str) -> State {
    State::parse_bitstring(text, text.len()).unwrap()
}

fn example1_game() -> CandidacyGame {
    let f = fixtures::example1();
    CandidacyGame::new(f.source(Rule::Borda), f.prefs, f.tiebreak).unwrap()
}

fn borda_2ne_game() -> CandidacyGame {
    let f = fixtures::borda_2ne();
    CandidacyGame::new(f.source(Rule::Borda), f.prefs, f.tiebreak).unwrap()
}

fn footnote_game() -> CandidacyGame {
    let f = fixtures::footnote3();
    CandidacyGame::new(f.source(), f.prefs, f.tiebreak).unwrap()
}

#[test]
fn example1_outcomes_and_deviation() {
    let g = example1_game();
    assert_eq!(g.outcome(bits("1111")), Some(2));
    assert_eq!(g.outcome(bits("1110")), Some(0));
    let d = g.first_deviation(bits("1111"), Some(1)).unwrap();
    assert_eq!(d.coalition, State::singleton(3));
    assert_eq!(d.leavers(), State::singleton(3));
    assert_eq!((d.old_winner, d.new_winner), (Some(2), Some(0)));
    assert!(g
        .improving_deviations(bits("1111"), Some(1))
        .iter()
        .any(|d| d.coalition == State::singleton(3)));
    assert!(g.improving_deviations(bits("1110"), Some(1)).is_empty());
    let r = g.classify(bits("1110"));
    assert!(r.is_ne() && r.is_se());
}

#[test]
fn empty_state_invites_everyone() {
    let g = example1_game();
    let moves = g.improving_deviations(State::empty(), Some(1));
    assert_eq!(moves.len(), 4);
    assert!(moves.iter().all(|d| d.new_winner == d.coalition.sole()));
}

#[test]
fn borda_remark_game() {
    let g = borda_2ne_game();
    assert_eq!(g.outcome(bits("0111")), Some(1));
    assert_eq!(g.outcome(bits("1101")), Some(3));
    assert_eq!(
        g.enumerate_equilibria(EquilibriumKind::Nash).unwrap(),
        vec![bits("1101"), bits("0111")]
    );
    assert!(g.enumerate_equilibria(EquilibriumKind::KNash(2)).unwrap().is_empty());
    let ac = g.try_deviation(bits("0111"), State::from_indices([0, 2])).unwrap();
    assert_eq!((ac.joiners(), ac.leavers()), (State::singleton(0), State::singleton(2)));
    assert_eq!(ac.new_winner, Some(3));
    let bc = g.try_deviation(bits("1101"), State::from_indices([1, 2])).unwrap();
    assert_eq!((bc.joiners(), bc.leavers()), (State::singleton(2), State::singleton(1)));
}

#[test]
fn footnote_game_classification() {
    let g = footnote_game();
    let full = g.classify(bits("111"));
    assert!(!full.is_ne());
    assert_eq!(full.first_deviation.unwrap().coalition, State::singleton(2));
    let ab = g.classify(bits("110"));
    assert!(ab.is_ne() && !ab.is_se());
    let w = ab.witness(EquilibriumKind::Strong).unwrap();
    assert_eq!((w.leavers(), w.joiners()), (State::singleton(1), State::singleton(2)));
    assert!(g.enumerate_equilibria(EquilibriumKind::Strong).unwrap().is_empty());
}

#[test]
fn counterexamples_have_no_ne() {
    let f = fixtures::plurality13();
    let g = CandidacyGame::new(f.source(Rule::Plurality), f.prefs, f.tiebreak).unwrap();
    assert!(g.enumerate_equilibria(EquilibriumKind::Nash).unwrap().is_empty());
    let f = fixtures::maximin5();
    let g = CandidacyGame::new(f.source(Rule::Maximin), f.prefs, f.tiebreak).unwrap();
    assert!(g.enumerate_equilibria(EquilibriumKind::Nash).unwrap().is_empty());
}

#[test]
fn lifting_keeps_plurality_counterexample() {
    let f = fixtures::plurality13();
    let g = CandidacyGame::new(f.source(Rule::Plurality), f.prefs, f.tiebreak).unwrap();
    let g5 = g.lift_with_bottom_candidate("e").unwrap();
    let g6 = g5.lift_with_bottom_candidate("f").unwrap();
    assert_eq!(g6.num_candidates(), 6);
    assert!(g5.enumerate_equilibria(EquilibriumKind::Nash).unwrap().is_empty());
    assert!(g6.enumerate_equilibria(EquilibriumKind::Nash).unwrap().is_empty());
    assert!(footnote_game().lift_with_bottom_candidate("d").is_err());
}

#[test]
fn enumeration_bounds() {
    let g = example1_game();
    assert!(matches!(
        g.enumerate_equilibria_bounded(EquilibriumKind::Nash, 3),
        Err(Error::ResourceLimit {
            requested: 4,
            bound: 3,
            ..
        })
    ));
    assert!(g.enumerate_equilibria(EquilibriumKind::KNash(0)).is_err());
    assert_eq!(
        g.enumerate_equilibria(EquilibriumKind::KNash(9)).unwrap(),
        g.enumerate_equilibria(EquilibriumKind::Strong).unwrap()
    );
}

#[test]
fn dom_sets_of_prop4_graphs() {
    let g4 = fixtures::graph(4);
    assert_eq!(dom_set(0, &g4), State::from_indices([0, 2, 3]));
    let g3 = fixtures::graph(3);
    // a is the Condorcet loser of G3, so b beats both a and c
    assert_eq!(dom_set(1, &g3), State::from_indices([0, 1, 2]));
    // G1 has a Condorcet winner
    assert_eq!(dom_set(0, &fixtures::graph(1)), State::full(4));
}

#[test]
fn dom_certification_rejects_other_rules() {
    assert!(matches!(
        certify_dom_equilibrium(&example1_game()),
        Err(Error::Unsupported(_))
    ));
    assert!(matches!(
        certify_dom_equilibrium(&footnote_game()),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn dom_certification_with_condorcet_winner() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = random::profile_with_condorcet_winner(&mut rng, 5, 7, 3);
    let prefs = random::preferences(&mut rng, 5);
    let g = CandidacyGame::from_rule(
        Rule::COPELAND0,
        Electorate::Profile(p),
        prefs,
        TieBreakOrder::lexicographic(5),
    )
    .unwrap();
    let (s, report) = certify_dom_equilibrium(&g).unwrap();
    assert_eq!(s, State::full(5));
    assert!(report.is_ne());
}

#[test]
fn plurality_dynamics_cycle() {
    let f = fixtures::plurality13();
    let g = CandidacyGame::new(f.source(Rule::Plurality), f.prefs, f.tiebreak).unwrap();
    let run = best_response_dynamics(&g, State::full(4), &Activation::round_robin(4), 1000).unwrap();
    assert!(matches!(run.termination, Termination::Cycle { .. }));
    for mv in &run.moves {
        assert_eq!(mv.to, mv.from.flip(mv.mover));
    }
}

#[test]
fn dynamics_from_an_equilibrium_stays() {
    let g = example1_game();
    let run = best_response_dynamics(&g, bits("1110"), &Activation::Random { seed: 3 }, 50).unwrap();
    assert!(run.moves.is_empty());
    assert_eq!(run.termination, Termination::Equilibrium(bits("1110")));
}

#[test]
fn dynamics_truncation_and_validation() {
    let f = fixtures::plurality13();
    let g = CandidacyGame::new(f.source(Rule::Plurality), f.prefs, f.tiebreak).unwrap();
    let run = best_response_dynamics(&g, State::full(4), &Activation::round_robin(4), 0).unwrap();
    assert_eq!(run.termination, Termination::Truncated(State::full(4)));
    assert!(best_response_dynamics(&g, State::full(5), &Activation::round_robin(4), 5).is_err());
    assert!(best_response_dynamics(&g, State::empty(), &Activation::RoundRobin(vec![7]), 5).is_err());
}

#[test]
fn dynamics_with_condorcet_winner_reach_an_ne_containing_it() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random::profile_with_condorcet_winner(&mut rng, 5, 9, 2);
        let prefs = random::preferences(&mut rng, 5);
        let g = CandidacyGame::from_rule(
            Rule::Maximin,
            Electorate::Profile(p),
            prefs,
            TieBreakOrder::lexicographic(5),
        )
        .unwrap();
        let start = State::from_indices([2, 4]);
        let run = best_response_dynamics(&g, start, &Activation::Random { seed }, 10_000).unwrap();
        let Termination::Equilibrium(end) = run.termination else {
            panic!("seed {seed}: {:?}", run.termination)
        };
        assert!(end.contains(2));
    }
}

const ALL_RULES: [Rule; 7] = Rule::ALL;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equilibrium_sets_nest(seed in any::<u64>(), rule_ix in 0usize..7, m in 2usize..=5, n in 1u32..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random::game(&mut rng, ALL_RULES[rule_ix], m, n);
        let ne = g.enumerate_equilibria(EquilibriumKind::Nash).unwrap();
        let k2 = g.enumerate_equilibria(EquilibriumKind::KNash(2)).unwrap();
        let se = g.enumerate_equilibria(EquilibriumKind::Strong).unwrap();
        prop_assert!(se.iter().all(|s| k2.contains(s)));
        prop_assert!(k2.iter().all(|s| ne.contains(s)));
        prop_assert!(!ne.contains(&State::empty()));
    }

    #[test]
    fn classify_matches_deviation_lists(seed in any::<u64>(), rule_ix in 0usize..7, m in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random::game(&mut rng, ALL_RULES[rule_ix], m, 5);
        for s in g.states() {
            let r = g.classify(s);
            let unilateral = g.improving_deviations(s, Some(1));
            let all = g.improving_deviations(s, None);
            prop_assert_eq!(r.is_ne(), unilateral.is_empty());
            prop_assert_eq!(r.is_se(), all.is_empty());
            prop_assert_eq!(r.first_deviation, all.first().copied());
            for d in all {
                prop_assert_eq!(d.to, s.toggle(d.coalition));
                prop_assert!(d.coalition.iter().all(|z| g.prefs().prefers(z, d.new_winner, d.old_winner)));
            }
        }
    }

    #[test]
    fn three_candidate_games_have_an_ne(seed in any::<u64>(), rule_ix in 0usize..7, n in 1u32..=9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random::game(&mut rng, ALL_RULES[rule_ix], 3, n);
        prop_assert!(!g.enumerate_equilibria(EquilibriumKind::Nash).unwrap().is_empty());
    }

    #[test]
    fn random_choice_function_games_of_three_have_an_ne(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cf = random::choice_function(&mut rng, 3);
        let g = CandidacyGame::from_choice_function(cf, random::preferences(&mut rng, 3)).unwrap();
        prop_assert!(!g.enumerate_equilibria(EquilibriumKind::Nash).unwrap().is_empty());
    }
}
