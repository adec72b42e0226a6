//! The constraint model behind [`super::solve`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::candidates::{Candidate, State};
use crate::error::{Error, Result};
use crate::profile::CandidatePreferenceProfile;
use crate::rules::ChoiceFunction;
use crate::tournament::WeightedTournament;

use super::solver::{Assignment, Linear, Lit, Model};
use super::{alphabetic, SearchOptions, Solution};

/// Constraint families, for checking assignments layer by layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Layer {
    /// One winner per nonempty state.
    Winner,
    /// Transitivity of each candidate's preference.
    Preference,
    /// A declared improving deviation out of every nonempty state.
    Deviation,
    /// Pairwise-support coherence and Borda winners.
    Borda,
}

/// Sizes of the model, for reporting and sanity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProblemCounts {
    pub states: usize,
    pub winner_constraints: usize,
    /// Single-flip arcs of the state lattice, including those touching the
    /// empty state.
    pub deviation_arcs: usize,
    pub coherence_equations: usize,
    pub bool_vars: usize,
    pub int_vars: usize,
    pub clauses: usize,
    pub linears: usize,
}

/// `p[a, i, j]`: does `a` prefer `i` to `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pref {
    Const(bool),
    Lit(Lit),
}

#[derive(Debug, Clone)]
pub struct SearchProblem {
    options: SearchOptions,
    model: Model,
    /// `winner[s][i]`, present iff `i` is in the nonempty state `s`.
    winner: Vec<Vec<Option<usize>>>,
    /// `order[a][i][j]` for `i < j`, both different from `a`: `a` prefers `i`.
    order: Vec<Vec<Vec<Option<usize>>>>,
    /// Arcs `(s, a)` with `s` and `s` flipped at `a` both nonempty.
    deviations: Vec<(State, Candidate, usize)>,
    voters: Option<usize>,
    /// `support[i][j]` for `i < j`.
    support: Vec<Vec<Option<usize>>>,
    clause_layers: Vec<Layer>,
    linear_layers: Vec<Layer>,
}

impl SearchProblem {
    pub(super) fn new(options: SearchOptions) -> Self {
        let m = options.m;
        let mut prob = SearchProblem {
            options,
            model: Model::default(),
            winner: vec![vec![None; m]; 1 << m],
            order: vec![vec![vec![None; m]; m]; m],
            deviations: Vec::new(),
            voters: None,
            support: vec![vec![None; m]; m],
            clause_layers: Vec::new(),
            linear_layers: Vec::new(),
        };
        prob.add_winners();
        prob.add_preferences();
        prob.add_deviations();
        if options.borda {
            prob.add_borda();
        }
        prob
    }

    pub fn options(&self) -> SearchOptions {
        self.options
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    fn clause(&mut self, layer: Layer, lits: Vec<Lit>) {
        self.model.add_clause(lits);
        self.clause_layers.push(layer);
    }

    fn linear(&mut self, layer: Layer, lin: Linear) {
        self.model.add_linear(lin);
        self.linear_layers.push(layer);
    }

    fn nonempty_states(&self) -> impl Iterator<Item = State> {
        State::all(self.options.m).skip(1)
    }

    pub fn winner_var(&self, s: State, i: Candidate) -> usize {
        self.winner[s.bits() as usize][i].expect("winner variables exist for members only")
    }

    fn add_winners(&mut self) {
        for s in State::all(self.options.m).skip(1) {
            let vars: Vec<usize> = s
                .iter()
                .map(|i| {
                    let v = self.model.new_bool();
                    self.winner[s.bits() as usize][i] = Some(v);
                    v
                })
                .collect();
            self.clause(Layer::Winner, vars.iter().map(|&v| Lit::pos(v)).collect());
            for (x, &v) in vars.iter().enumerate() {
                for &u in &vars[x + 1..] {
                    self.clause(Layer::Winner, vec![Lit::neg(v), Lit::neg(u)]);
                }
            }
        }
    }

    fn pref(&self, a: Candidate, i: Candidate, j: Candidate) -> Pref {
        if i == j {
            Pref::Const(false)
        } else if i == a {
            Pref::Const(true)
        } else if j == a {
            Pref::Const(false)
        } else if i < j {
            Pref::Lit(Lit::pos(self.order[a][i][j].expect("allocated")))
        } else {
            Pref::Lit(Lit::neg(self.order[a][j][i].expect("allocated")))
        }
    }

    /// Adds the clause `OR lits`, where constant-true members satisfy it and
    /// constant-false members drop out.
    fn pref_clause(&mut self, layer: Layer, lits: &[Pref]) {
        let mut out = Vec::new();
        for l in lits {
            match *l {
                Pref::Const(true) => return,
                Pref::Const(false) => {}
                Pref::Lit(l) => out.push(l),
            }
        }
        self.clause(layer, out);
    }

    fn negated(p: Pref) -> Pref {
        match p {
            Pref::Const(b) => Pref::Const(!b),
            Pref::Lit(l) => Pref::Lit(l.negate()),
        }
    }

    fn add_preferences(&mut self) {
        let m = self.options.m;
        for a in 0..m {
            for i in 0..m {
                for j in i + 1..m {
                    if i != a && j != a {
                        self.order[a][i][j] = Some(self.model.new_bool());
                    }
                }
            }
        }
        for a in 0..m {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        if i == j || j == k || i == k {
                            continue;
                        }
                        let lits = [
                            Self::negated(self.pref(a, i, j)),
                            Self::negated(self.pref(a, j, k)),
                            self.pref(a, i, k),
                        ];
                        self.pref_clause(Layer::Preference, &lits);
                    }
                }
            }
        }
    }

    fn add_deviations(&mut self) {
        let m = self.options.m;
        let states: Vec<State> = self.nonempty_states().collect();
        for s in states {
            let mut out = Vec::new();
            for a in 0..m {
                let t = s.flip(a);
                // leaving a one-candidate election gives the empty outcome,
                // which nobody prefers
                if t.is_empty() {
                    continue;
                }
                let d = self.model.new_bool();
                self.deviations.push((s, a, d));
                out.push(Lit::pos(d));
                for i in s.iter() {
                    for j in t.iter() {
                        let lits = [
                            Pref::Lit(Lit::neg(d)),
                            Pref::Lit(Lit::neg(self.winner_var(s, i))),
                            Pref::Lit(Lit::neg(self.winner_var(t, j))),
                            self.pref(a, j, i),
                        ];
                        self.pref_clause(Layer::Deviation, &lits);
                    }
                }
            }
            self.clause(Layer::Deviation, out);
        }
        // The empty state needs no declared deviation: any candidate joining
        // it moves from no winner to itself.
    }

    /// `N(i, j)` as terms over the support variables and the voter count.
    fn support_terms(&self, i: Candidate, j: Candidate, sign: i64, terms: &mut BTreeMap<usize, i64>) {
        if i < j {
            *terms.entry(self.support[i][j].expect("allocated")).or_default() += sign;
        } else {
            *terms.entry(self.voters.expect("allocated")).or_default() += sign;
            *terms.entry(self.support[j][i].expect("allocated")).or_default() -= sign;
        }
    }

    fn add_borda(&mut self) {
        let m = self.options.m;
        let n = i64::from(self.options.n);
        let voters = self.model.new_int(1, n);
        self.voters = Some(voters);
        for i in 0..m {
            for j in i + 1..m {
                let v = self.model.new_int(0, n);
                self.support[i][j] = Some(v);
                // N(j, i) = voters - N(i, j) must be nonnegative
                self.linear(
                    Layer::Borda,
                    Linear {
                        guard: None,
                        terms: vec![(voters, 1), (v, -1)],
                        rhs: 0,
                    },
                );
            }
        }
        let states: Vec<State> = self.nonempty_states().filter(|s| s.len() >= 2).collect();
        for s in states {
            for i in s.iter() {
                for j in s.iter().filter(|&j| j != i) {
                    let mut terms = BTreeMap::new();
                    for x in s.without(i).iter() {
                        self.support_terms(i, x, 1, &mut terms);
                    }
                    for x in s.without(j).iter() {
                        self.support_terms(j, x, -1, &mut terms);
                    }
                    // ties go to the lower index
                    let rhs = if i < j { 0 } else { 1 };
                    self.linear(
                        Layer::Borda,
                        Linear {
                            guard: Some(Lit::pos(self.winner_var(s, i))),
                            terms: terms.into_iter().filter(|&(_, a)| a != 0).collect(),
                            rhs,
                        },
                    );
                }
            }
        }
    }

    pub fn counts(&self) -> ProblemCounts {
        let m = self.options.m;
        ProblemCounts {
            states: 1 << m,
            winner_constraints: (1 << m) - 1,
            deviation_arcs: m << m,
            coherence_equations: if self.options.borda { m * (m - 1) / 2 } else { 0 },
            bool_vars: self.model.bool_count(),
            int_vars: self.model.int_count(),
            clauses: self.model.clauses.len(),
            linears: self.model.linears.len(),
        }
    }

    pub(super) fn preference_vars(&self) -> Vec<usize> {
        self.order.iter().flatten().flatten().flatten().copied().collect()
    }

    pub(super) fn deviation_vars(&self) -> Vec<usize> {
        self.deviations.iter().map(|&(_, _, d)| d).collect()
    }

    pub(super) fn tournament_vars(&self) -> Vec<usize> {
        self.voters
            .into_iter()
            .chain(self.support.iter().flatten().flatten().copied())
            .collect()
    }

    /// Whether every constraint of `layer` holds under `asg`.
    pub fn layer_holds(&self, layer: Layer, asg: &Assignment) -> bool {
        let clauses_ok = self
            .clause_layers
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == layer)
            .all(|(i, _)| self.model.clause_holds(i, asg));
        let linears_ok = self
            .linear_layers
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == layer)
            .all(|(i, _)| self.model.linear_holds(i, asg));
        clauses_ok && linears_ok
    }

    /// The assignment describing a concrete game: winners from `cf`, orders
    /// from `prefs`, each deviation variable set iff that flip improves
    /// things for the deviator, and the support matrix of `tournament`.
    /// Integer variables are zero when no tournament is given.
    pub fn encode(
        &self,
        cf: &ChoiceFunction,
        prefs: &CandidatePreferenceProfile,
        tournament: Option<&WeightedTournament>,
    ) -> Result<Assignment> {
        let m = self.options.m;
        if cf.num_candidates() != m || prefs.len() != m {
            return Err(Error::invalid("game size does not match the search problem"));
        }
        let mut bools = vec![false; self.model.bool_count()];
        let mut ints = vec![0; self.model.int_count()];
        for (s, w) in cf.entries() {
            bools[self.winner_var(s, w)] = true;
        }
        for a in 0..m {
            for i in 0..m {
                for j in i + 1..m {
                    if let Some(v) = self.order[a][i][j] {
                        bools[v] = prefs.prefers(a, Some(i), Some(j));
                    }
                }
            }
        }
        for &(s, a, d) in &self.deviations {
            bools[d] = prefs.prefers(a, cf.get(s.flip(a)), cf.get(s));
        }
        if let (Some(t), Some(voters)) = (tournament, self.voters) {
            if t.num_candidates() != m {
                return Err(Error::invalid("tournament size does not match the search problem"));
            }
            ints[voters] = i64::from(t.voter_count());
            for i in 0..m {
                for j in i + 1..m {
                    ints[self.support[i][j].expect("allocated")] = i64::from(t.support(i, j));
                }
            }
        }
        Ok(Assignment { bools, ints })
    }

    /// Reads the game back out of a satisfying assignment.
    pub fn decode(&self, asg: &Assignment) -> Result<Solution> {
        let m = self.options.m;
        let cs = alphabetic(m);
        let choice = ChoiceFunction::from_fn(cs.clone(), |s| {
            let winners: Vec<Candidate> = s.iter().filter(|&i| asg.bools[self.winner_var(s, i)]).collect();
            match winners[..] {
                [w] => Ok(w),
                _ => Err(Error::invalid(format!(
                    "state {} has {} winners",
                    cs.format_subset(s),
                    winners.len()
                ))),
            }
        })?;
        let holds = |p: Pref| match p {
            Pref::Const(b) => b,
            Pref::Lit(l) => l.eval(&asg.bools),
        };
        let mut orders = Vec::with_capacity(m);
        for a in 0..m {
            let mut order: Vec<Candidate> = (0..m).collect();
            // rank by the number of candidates each one is preferred to
            order.sort_by_key(|&i| std::cmp::Reverse((0..m).filter(|&j| holds(self.pref(a, i, j))).count()));
            for (x, &i) in order.iter().enumerate() {
                for &j in &order[x + 1..] {
                    if !holds(self.pref(a, i, j)) {
                        return Err(Error::invalid(format!(
                            "preferences of {} are not a strict total order",
                            cs.label(a)
                        )));
                    }
                }
            }
            orders.push(order);
        }
        let prefs = CandidatePreferenceProfile::new(orders)?;
        let tournament = match self.voters {
            None => None,
            Some(voters) => {
                let n = asg.ints[voters];
                let mut matrix = vec![vec![0u32; m]; m];
                #[allow(clippy::needless_range_loop)]
                for i in 0..m {
                    for j in i + 1..m {
                        let x = asg.ints[self.support[i][j].expect("allocated")];
                        let to_u32 = |v: i64| u32::try_from(v).map_err(|_| Error::invalid("support out of range"));
                        matrix[i][j] = to_u32(x)?;
                        matrix[j][i] = to_u32(n - x)?;
                    }
                }
                let n = u32::try_from(n).map_err(|_| Error::invalid("voter count out of range"))?;
                Some(WeightedTournament::from_matrix(cs, n, &matrix)?)
            }
        };
        Ok(Solution {
            choice,
            prefs,
            tournament,
        })
    }
}
