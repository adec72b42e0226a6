use candidacy::control::{bridge_check, decide_control, ControlInstance, ControlMode};
use candidacy::format;
use candidacy::random;
use candidacy::rules::{Electorate, OutcomeSource, Rule};
use candidacy::{CandidacyGame, State, TieBreakOrder};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const MODES: [ControlMode; 5] = [
    ControlMode::Ccdc,
    ControlMode::Ccac,
    ControlMode::Dcdc,
    ControlMode::Dcac,
    ControlMode::DcDcAc,
];

/// A random valid instance; consent preferences are always attached so the
/// consenting flag can be toggled.
fn instance(seed: u64, mode: ControlMode, m: usize) -> ControlInstance {
    let mut r = rng(seed);
    let rule = Rule::ALL[r.gen_range(0..Rule::ALL.len())];
    let n = r.gen_range(1..=9);
    let p = random::profile(&mut r, m, n);
    let prefs = random::preferences(&mut r, m);
    let source = OutcomeSource::Rule {
        rule,
        electorate: Electorate::Profile(p),
    };
    let tb = random::tiebreak(&mut r, m);
    let c = r.gen_range(0..m);
    let mut inst = if mode.adds() {
        let mut registered = State::singleton(c);
        let mut pool = State::empty();
        for x in (0..m).filter(|&x| x != c) {
            match r.gen_range(0..3) {
                0 => registered = registered.with(x),
                1 => pool = pool.with(x),
                _ => {}
            }
        }
        let mut inst = ControlInstance::adding(mode, source, tb, c, registered, pool);
        if mode == ControlMode::DcDcAc && r.gen_bool(0.5) {
            inst.budget = Some(r.gen_range(0..=m));
        }
        inst
    } else {
        ControlInstance::deleting(mode, source, tb, c, r.gen_range(0..m))
    };
    inst.consent_prefs = Some(prefs);
    inst.validate().unwrap();
    inst
}

/// Exhaustive answer computed from the raw definitions.
fn brute_force(inst: &ControlInstance) -> bool {
    let outcome = |s: State| inst.source.outcome(s, &inst.tiebreak).unwrap();
    let removable = if inst.mode.deletes() {
        inst.distinguished
            .map_or(inst.registered, |c| inst.registered.without(c))
    } else {
        State::empty()
    };
    let addable = if inst.mode.adds() { inst.pool } else { State::empty() };
    let baseline = outcome(inst.registered);
    removable.union(addable).subsets().any(|changes| {
        if inst.budget.is_some_and(|k| changes.len() > k) {
            return false;
        }
        let w = outcome(inst.registered.toggle(changes));
        let goal = if inst.mode.is_constructive() {
            w == inst.distinguished
        } else {
            w != inst.distinguished
        };
        let prefs = inst.consent_prefs.as_ref().unwrap();
        let rank = |a: usize, o: Option<usize>| o.map_or(usize::MAX, |c| prefs.rank(a, c));
        goal && (!inst.consenting || changes.iter().all(|a| rank(a, w) < rank(a, baseline)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decisions_match_brute_force(seed in any::<u64>(), mode_ix in 0usize..5, m in 2usize..=5, consent in any::<bool>()) {
        let mut inst = instance(seed, MODES[mode_ix], m);
        inst.consenting = consent;
        let verdict = decide_control(&inst).unwrap();
        prop_assert_eq!(verdict.decision, brute_force(&inst));
        if let Some(w) = verdict.witness {
            prop_assert!(inst.witness_is_valid(&w).unwrap());
            prop_assert_eq!(w.running, inst.registered.difference(w.removed).union(w.added));
        }
    }

    #[test]
    fn consent_only_removes_options(seed in any::<u64>(), mode_ix in 0usize..5, m in 2usize..=5) {
        let mut inst = instance(seed, MODES[mode_ix], m);
        inst.consenting = true;
        let with_consent = decide_control(&inst).unwrap().decision;
        inst.consenting = false;
        prop_assert!(!with_consent || decide_control(&inst).unwrap().decision);
    }

    #[test]
    fn larger_budgets_never_hurt(seed in any::<u64>(), mode_ix in 0usize..5, m in 2usize..=5, consent in any::<bool>()) {
        let mut inst = instance(seed, MODES[mode_ix], m);
        inst.consenting = consent;
        let limit = if inst.mode.adds() { m } else { inst.registered.len() };
        let mut previous = false;
        for k in 0..=limit {
            inst.budget = Some(k);
            let now = decide_control(&inst).unwrap().decision;
            prop_assert!(!previous || now, "budget {}", k);
            previous = now;
        }
        if inst.mode == ControlMode::DcDcAc {
            inst.budget = None;
            prop_assert!(!previous || decide_control(&inst).unwrap().decision);
        }
    }

    #[test]
    fn bridge_matches_equilibria(seed in any::<u64>(), rule_ix in 0usize..7, m in 1usize..=5, n in 1u32..=9) {
        let g = random::game(&mut rng(seed), Rule::ALL[rule_ix], m, n);
        for s in g.states() {
            let rec = bridge_check(&g, s).unwrap();
            prop_assert!(rec.agrees(), "{:?}", rec);
        }
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>(), mode_ix in 0usize..5, m in 2usize..=5) {
        let inst = instance(seed, MODES[mode_ix], m);
        let text = format::write_control_instance(&inst);
        prop_assert_eq!(format::parse_control_instance(&text).unwrap(), inst);
    }
}

#[test]
fn bridge_on_choice_function_games() {
    for seed in 0..60 {
        let mut r = rng(seed);
        let m = r.gen_range(2..=4);
        let cf = random::choice_function(&mut r, m);
        let g = CandidacyGame::from_choice_function(cf, random::preferences(&mut r, m)).unwrap();
        for s in g.states() {
            assert!(bridge_check(&g, s).unwrap().agrees(), "seed {seed}, state {s:?}");
        }
    }
}

#[test]
fn oversized_instances_are_refused() {
    let mut r = rng(2);
    let p = random::profile(&mut r, 13, 3);
    let source = OutcomeSource::Rule {
        rule: Rule::Borda,
        electorate: Electorate::Profile(p),
    };
    let inst = ControlInstance::deleting(ControlMode::Ccdc, source, TieBreakOrder::lexicographic(13), 0, 1);
    assert!(matches!(
        decide_control(&inst),
        Err(candidacy::Error::ResourceLimit { .. })
    ));
}
