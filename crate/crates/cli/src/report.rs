//! Text and JSON-lines output. Every report line is produced here so the two
//! formats stay in step; states are printed as bitstrings, first character
//! for the first candidate.

use std::io::Write as _;

use candidacy::control::{ControlInstance, ControlVerdict};
use candidacy::game::dynamics::Move;
use candidacy::game::Termination;
use candidacy::search::{SearchOptions, SearchResult, SearchStatus};
use candidacy::verify::CheckOutcome;
use candidacy::{CandidacyGame, CandidateSet, Deviation, EquilibriumKind, Outcome, State, StateReport};
use serde_json::{json, Value};

pub struct Report {
    json: bool,
}

fn kind_name(kind: EquilibriumKind) -> String {
    match kind {
        EquilibriumKind::Nash => "NE".into(),
        EquilibriumKind::KNash(k) => format!("{k}-NE"),
        EquilibriumKind::Strong => "SE".into(),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report {
    pub fn new(json: bool) -> Self {
        Report { json }
    }

    pub fn record(&mut self, text: impl Into<String>, value: Value) {
        let line = if self.json { value.to_string() } else { text.into() };
        if let Err(e) = writeln!(std::io::stdout(), "{line}") {
            // a closed pipe (e.g. `| head`) ends the report quietly
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("cannot write report: {e}");
        }
    }

    pub fn winner(&mut self, cs: &CandidateSet, s: State, w: Outcome, labelled: bool) {
        let (subset, winner) = (cs.format_subset(s), cs.format_outcome(w));
        let text = if labelled {
            format!("{subset} -> {winner}")
        } else {
            winner.clone()
        };
        self.record(
            text,
            json!({"subset": subset, "state": s.to_bitstring(cs.len()), "winner": winner}),
        );
    }

    pub fn equilibrium(&mut self, game: &CandidacyGame, s: State) {
        let cs = game.candidates();
        let bits = s.to_bitstring(cs.len());
        let (running, winner) = (cs.format_subset(s), cs.format_outcome(game.outcome(s)));
        self.record(
            format!("{bits} running={running} winner={winner}"),
            json!({"state": bits, "running": running, "winner": winner}),
        );
    }

    pub fn state_report(
        &mut self,
        game: &CandidacyGame,
        r: &StateReport,
        kind: EquilibriumKind,
        bridge: Option<&candidacy::control::BridgeRecord>,
    ) {
        let cs = game.candidates();
        let m = cs.len();
        let bits = r.state.to_bitstring(m);
        let winner = cs.format_outcome(r.winner);
        let mut text = format!(
            "{bits} winner={winner} ne={} {}={} se={}",
            yes(r.is_ne()),
            kind_name(kind),
            yes(r.satisfies(kind)),
            yes(r.is_se())
        );
        let mut value = json!({
            "state": bits,
            "running": cs.format_subset(r.state),
            "winner": winner,
            "ne": r.is_ne(),
            "kind": kind_name(kind),
            "equilibrium": r.satisfies(kind),
            "se": r.is_se(),
            "witness": r.first_deviation.map(|d| deviation_json(cs, &d)),
        });
        if let Some(d) = &r.first_deviation {
            text.push_str(&format!(" witness={}", deviation_text(cs, d)));
        }
        if let Some(b) = bridge {
            text.push_str(&format!(
                " control1={} control={} agrees={}",
                yes(b.single_change_control),
                yes(b.unbounded_control),
                yes(b.agrees())
            ));
            value["control_single"] = json!(b.single_change_control);
            value["control_unbounded"] = json!(b.unbounded_control);
            value["bridge_agrees"] = json!(b.agrees());
        }
        self.record(text, value);
    }

    pub fn summary(&mut self, kind: EquilibriumKind, count: usize) {
        let name = kind_name(kind);
        self.record(format!("{count} {name}"), json!({"summary": name, "count": count}));
    }

    pub fn dynamics_move(&mut self, game: &CandidacyGame, mv: &Move) {
        let cs = game.candidates();
        let m = cs.len();
        let verb = if mv.to.contains(mv.mover) { "joins" } else { "leaves" };
        let (from, to) = (mv.from.to_bitstring(m), mv.to.to_bitstring(m));
        let (w0, w1) = (
            cs.format_outcome(game.outcome(mv.from)),
            cs.format_outcome(game.outcome(mv.to)),
        );
        let mover = cs.label(mv.mover);
        self.record(
            format!("step {}: {mover} {verb}, {from} -> {to}, winner {w0} -> {w1}", mv.step),
            json!({"step": mv.step, "mover": mover, "from": from, "to": to, "old_winner": w0, "new_winner": w1}),
        );
    }

    pub fn termination(&mut self, game: &CandidacyGame, t: &Termination, activations: usize) {
        let m = game.num_candidates();
        let (text, value) = match *t {
            Termination::Equilibrium(s) => (
                format!("equilibrium {} after {activations} activations", s.to_bitstring(m)),
                json!({"termination": "equilibrium", "state": s.to_bitstring(m), "activations": activations}),
            ),
            Termination::Cycle { state, first_visit } => (
                format!(
                    "cycle at {} (first reached after {first_visit} moves), {activations} activations",
                    state.to_bitstring(m)
                ),
                json!({"termination": "cycle", "state": state.to_bitstring(m), "first_visit": first_visit, "activations": activations}),
            ),
            Termination::Truncated(s) => (
                format!("truncated at {} after {activations} activations", s.to_bitstring(m)),
                json!({"termination": "truncated", "state": s.to_bitstring(m), "activations": activations}),
            ),
        };
        self.record(text, value);
    }

    pub fn control(&mut self, inst: &ControlInstance, v: &ControlVerdict) {
        let cs = inst.source.candidates();
        let baseline = cs.format_outcome(v.baseline_winner);
        let mut value = json!({
            "mode": inst.mode.name(),
            "consenting": inst.consenting,
            "decision": v.decision,
            "baseline_winner": baseline,
        });
        let text = match &v.witness {
            Some(w) => {
                value["removed"] = json!(cs.format_subset(w.removed));
                value["added"] = json!(cs.format_subset(w.added));
                value["running"] = json!(cs.format_subset(w.running));
                value["winner"] = json!(cs.format_outcome(w.winner));
                format!(
                    "yes: delete {}, add {}, running {}, winner {} (was {baseline})",
                    cs.format_subset(w.removed),
                    cs.format_subset(w.added),
                    cs.format_subset(w.running),
                    cs.format_outcome(w.winner)
                )
            }
            None => format!("no (winner stays {baseline})"),
        };
        self.record(text, value);
    }

    pub fn search(&mut self, options: SearchOptions, r: &SearchResult, verified: Option<bool>) {
        let status = match r.status {
            SearchStatus::Sat => "sat",
            SearchStatus::Unsat => "unsat",
            SearchStatus::Inconclusive => "inconclusive",
        };
        let mut text = format!(
            "{status} m={} borda={} nodes={} propagations={} conflicts={}",
            options.m,
            yes(options.borda),
            r.stats.nodes,
            r.stats.propagations,
            r.stats.conflicts
        );
        if options.borda {
            text.push_str(&format!(" n={}", options.n));
        }
        if let Some(v) = verified {
            text.push_str(&format!(" verified_no_ne={}", yes(v)));
        }
        self.record(
            text,
            json!({
                "status": status,
                "m": options.m,
                "borda": options.borda,
                "n": options.borda.then_some(options.n),
                "nodes": r.stats.nodes,
                "propagations": r.stats.propagations,
                "conflicts": r.stats.conflicts,
                "verified_no_ne": verified,
            }),
        );
    }

    /// A file's content; in text mode prefixed by a comment line, so the
    /// block still parses.
    pub fn file_block(&mut self, name: &str, content: &str) {
        self.record(
            format!("# {name}\n{}", content.trim_end()),
            json!({"file": name, "content": content}),
        );
    }

    pub fn check(&mut self, o: &CheckOutcome) {
        let text = if o.passed {
            format!("PASS {}", o.name)
        } else {
            format!("FAIL {}: {}", o.name, o.detail)
        };
        self.record(text, json!({"check": o.name, "passed": o.passed, "detail": o.detail}));
    }
}

fn deviation_text(cs: &CandidateSet, d: &Deviation) -> String {
    let mut parts: Vec<String> = d.joiners().iter().map(|c| format!("+{}", cs.label(c))).collect();
    parts.extend(d.leavers().iter().map(|c| format!("-{}", cs.label(c))));
    format!(
        "{}:{}->{}",
        parts.join(""),
        d.to.to_bitstring(cs.len()),
        cs.format_outcome(d.new_winner)
    )
}

fn deviation_json(cs: &CandidateSet, d: &Deviation) -> Value {
    json!({
        "coalition": cs.format_subset(d.coalition),
        "joiners": cs.format_subset(d.joiners()),
        "leavers": cs.format_subset(d.leavers()),
        "to": d.to.to_bitstring(cs.len()),
        "new_winner": cs.format_outcome(d.new_winner),
    })
}
