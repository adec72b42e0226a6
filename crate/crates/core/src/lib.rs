//! Strategic candidacy games over common voting rules.
//!
//! Potential candidates decide whether to run; the outcome of each running
//! set is given by a voting rule (or directly by a choice function), and
//! candidates have their own preferences over who wins. The crate computes
//! outcomes, Nash / k-coalition / strong equilibria, best-response dynamics,
//! consenting candidate control, and searches for choice functions whose
//! candidacy game has no Nash equilibrium.

pub mod candidates;
pub mod control;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod game;
pub mod profile;
pub mod random;
pub mod rules;
pub mod search;
pub mod tournament;
pub mod verify;

pub use candidates::{Candidate, CandidateSet, State, TieBreakOrder};
pub use error::{Error, Result};
pub use game::{CandidacyGame, Deviation, EquilibriumKind, Outcome, StateReport};
pub use profile::{Ballot, CandidatePreferenceProfile, VoterProfile};
pub use rules::{ChoiceFunction, Electorate, OutcomeSource, Rule};
pub use tournament::{mcgarvey_realize, MajorityGraph, WeightedTournament};
