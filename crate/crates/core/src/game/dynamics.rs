//! Best-response dynamics on candidacy games.
//!
//! The active candidate switches its candidacy bit only when the other choice
//! gives it a strictly preferred outcome. A run stops at the first Nash
//! equilibrium, at the first state visited twice, or after `max_steps`
//! activations.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::candidates::{Candidate, State};
use crate::error::{Error, Result};

use super::CandidacyGame;

/// Who gets to move next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Activation {
    /// Cycles through the given order forever.
    RoundRobin(Vec<Candidate>),
    /// Uniformly random candidate at each step, reproducible from the seed.
    Random { seed: u64 },
}

impl Activation {
    pub fn round_robin(m: usize) -> Self {
        Activation::RoundRobin((0..m).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Move {
    /// Activation index at which the switch happened.
    pub step: usize,
    pub mover: Candidate,
    pub from: State,
    pub to: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Termination {
    Equilibrium(State),
    /// `state` was reached again; it was first reached after `first_visit` moves.
    Cycle {
        state: State,
        first_visit: usize,
    },
    /// `max_steps` activations ran out first.
    Truncated(State),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynamicsRun {
    pub start: State,
    pub moves: Vec<Move>,
    pub activations: usize,
    pub termination: Termination,
}

impl DynamicsRun {
    pub fn converged(&self) -> bool {
        matches!(self.termination, Termination::Equilibrium(_))
    }
}

pub fn best_response_dynamics(
    game: &CandidacyGame,
    start: State,
    activation: &Activation,
    max_steps: usize,
) -> Result<DynamicsRun> {
    let m = game.num_candidates();
    if !start.is_subset_of(game.full_state()) {
        return Err(Error::invalid("start state outside the game"));
    }
    if let Activation::RoundRobin(order) = activation {
        if order.is_empty() || order.iter().any(|&c| c >= m) {
            return Err(Error::invalid("round-robin order must name candidates of the game"));
        }
    }
    let mut rng = match activation {
        Activation::Random { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        Activation::RoundRobin(_) => None,
    };

    let mut state = start;
    let mut moves = Vec::new();
    let mut visited: HashMap<State, usize> = HashMap::from([(start, 0)]);
    let mut activations = 0;
    let termination = loop {
        if game.is_ne(state) {
            break Termination::Equilibrium(state);
        }
        if activations == max_steps {
            break Termination::Truncated(state);
        }
        let agent = match (activation, rng.as_mut()) {
            (Activation::RoundRobin(order), _) => order[activations % order.len()],
            (Activation::Random { .. }, Some(rng)) => rng.gen_range(0..m),
            (Activation::Random { .. }, None) => unreachable!(),
        };
        activations += 1;
        let alternative = state.flip(agent);
        if game
            .prefs()
            .prefers(agent, game.outcome(alternative), game.outcome(state))
        {
            moves.push(Move {
                step: activations - 1,
                mover: agent,
                from: state,
                to: alternative,
            });
            state = alternative;
            if let Some(&first_visit) = visited.get(&state) {
                break Termination::Cycle { state, first_visit };
            }
            visited.insert(state, moves.len());
        }
    };
    Ok(DynamicsRun {
        start,
        moves,
        activations,
        termination,
    })
}
