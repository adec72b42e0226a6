//! A small complete backtracking solver over boolean and bounded integer
//! variables.
//!
//! Constraints are clauses over boolean literals and linear inequalities
//! `sum(a_i * x_i) >= rhs` over integer variables, optionally guarded by a
//! literal (the inequality must hold only when the guard is true). Clauses
//! get unit propagation; linear constraints get bounds propagation, and a
//! guard whose inequality can no longer hold is set false.

use serde::Serialize;

/// A boolean variable or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit((var as u32) << 1)
    }

    pub fn neg(var: usize) -> Lit {
        Lit(((var as u32) << 1) | 1)
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    #[must_use]
    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// Truth value of the literal under a complete boolean assignment.
    pub fn eval(self, bools: &[bool]) -> bool {
        bools[self.var()] != self.is_negated()
    }
}

/// `guard -> sum(coef * x) >= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linear {
    pub guard: Option<Lit>,
    pub terms: Vec<(usize, i64)>,
    pub rhs: i64,
}

impl Linear {
    pub fn holds(&self, bools: &[bool], ints: &[i64]) -> bool {
        if self.guard.is_some_and(|g| !g.eval(bools)) {
            return true;
        }
        self.terms.iter().map(|&(v, a)| a * ints[v]).sum::<i64>() >= self.rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Bool(usize),
    Int(usize),
}

/// A full assignment of every variable of a [`Model`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub bools: Vec<bool>,
    pub ints: Vec<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    bool_count: usize,
    int_bounds: Vec<(i64, i64)>,
    pub clauses: Vec<Vec<Lit>>,
    pub linears: Vec<Linear>,
}

impl Model {
    pub fn new_bool(&mut self) -> usize {
        self.bool_count += 1;
        self.bool_count - 1
    }

    pub fn new_int(&mut self, lo: i64, hi: i64) -> usize {
        assert!(lo <= hi, "empty integer domain");
        self.int_bounds.push((lo, hi));
        self.int_bounds.len() - 1
    }

    pub fn bool_count(&self) -> usize {
        self.bool_count
    }

    pub fn int_count(&self) -> usize {
        self.int_bounds.len()
    }

    pub fn int_bounds(&self, v: usize) -> (i64, i64) {
        self.int_bounds[v]
    }

    pub fn add_clause(&mut self, lits: Vec<Lit>) -> usize {
        self.clauses.push(lits);
        self.clauses.len() - 1
    }

    pub fn add_linear(&mut self, lin: Linear) -> usize {
        self.linears.push(lin);
        self.linears.len() - 1
    }

    pub fn clause_holds(&self, ix: usize, a: &Assignment) -> bool {
        self.clauses[ix].iter().any(|l| l.eval(&a.bools))
    }

    pub fn linear_holds(&self, ix: usize, a: &Assignment) -> bool {
        self.linears[ix].holds(&a.bools, &a.ints)
    }

    /// Whether `a` satisfies every constraint and every integer domain.
    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        a.bools.len() == self.bool_count
            && a.ints.len() == self.int_count()
            && a.ints
                .iter()
                .zip(&self.int_bounds)
                .all(|(&x, &(lo, hi))| lo <= x && x <= hi)
            && (0..self.clauses.len()).all(|i| self.clause_holds(i, a))
            && (0..self.linears.len()).all(|i| self.linear_holds(i, a))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    /// Branching decisions made.
    pub nodes: u64,
    /// Values fixed or bounds tightened by propagation.
    pub propagations: u64,
    pub conflicts: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sat(Assignment),
    Unsat,
    /// The node limit ran out before the search finished.
    Inconclusive,
}

#[derive(Debug, Clone, Copy)]
enum Trail {
    Bool(usize),
    Lo(usize, i64),
    Hi(usize, i64),
}

#[derive(Debug, Clone, Copy)]
enum Event {
    Bool(usize),
    Int(usize),
}

struct Conflict;

/// Solver state for one search over `model`.
pub struct Solver<'m> {
    model: &'m Model,
    bools: Vec<Option<bool>>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    clauses_of: Vec<Vec<usize>>,
    linears_of_bool: Vec<Vec<usize>>,
    linears_of_int: Vec<Vec<usize>>,
    trail: Vec<Trail>,
    queue: Vec<Event>,
    stats: SolverStats,
}

impl<'m> Solver<'m> {
    pub fn new(model: &'m Model) -> Self {
        let mut clauses_of = vec![Vec::new(); model.bool_count];
        for (i, c) in model.clauses.iter().enumerate() {
            for l in c {
                clauses_of[l.var()].push(i);
            }
        }
        let mut linears_of_bool = vec![Vec::new(); model.bool_count];
        let mut linears_of_int = vec![Vec::new(); model.int_count()];
        for (i, lin) in model.linears.iter().enumerate() {
            if let Some(g) = lin.guard {
                linears_of_bool[g.var()].push(i);
            }
            for &(v, _) in &lin.terms {
                linears_of_int[v].push(i);
            }
        }
        Solver {
            model,
            bools: vec![None; model.bool_count],
            lo: model.int_bounds.iter().map(|b| b.0).collect(),
            hi: model.int_bounds.iter().map(|b| b.1).collect(),
            clauses_of,
            linears_of_bool,
            linears_of_int,
            trail: Vec::new(),
            queue: Vec::new(),
            stats: SolverStats::default(),
        }
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.bools[l.var()].map(|b| b != l.is_negated())
    }

    fn set_lit(&mut self, l: Lit) -> Result<(), Conflict> {
        match self.lit_value(l) {
            Some(true) => Ok(()),
            Some(false) => Err(Conflict),
            None => {
                self.bools[l.var()] = Some(!l.is_negated());
                self.trail.push(Trail::Bool(l.var()));
                self.queue.push(Event::Bool(l.var()));
                Ok(())
            }
        }
    }

    fn raise_lo(&mut self, v: usize, x: i64) -> Result<(), Conflict> {
        if x > self.hi[v] {
            return Err(Conflict);
        }
        if x > self.lo[v] {
            self.trail.push(Trail::Lo(v, self.lo[v]));
            self.lo[v] = x;
            self.queue.push(Event::Int(v));
            self.stats.propagations += 1;
        }
        Ok(())
    }

    fn lower_hi(&mut self, v: usize, x: i64) -> Result<(), Conflict> {
        if x < self.lo[v] {
            return Err(Conflict);
        }
        if x < self.hi[v] {
            self.trail.push(Trail::Hi(v, self.hi[v]));
            self.hi[v] = x;
            self.queue.push(Event::Int(v));
            self.stats.propagations += 1;
        }
        Ok(())
    }

    fn propagate_clause(&mut self, ix: usize) -> Result<(), Conflict> {
        let mut unassigned = None;
        let mut open = 0;
        for &l in &self.model.clauses[ix] {
            match self.lit_value(l) {
                Some(true) => return Ok(()),
                Some(false) => {}
                None => {
                    open += 1;
                    unassigned = Some(l);
                }
            }
        }
        match (open, unassigned) {
            (0, _) => Err(Conflict),
            (1, Some(l)) => {
                self.stats.propagations += 1;
                self.set_lit(l)
            }
            _ => Ok(()),
        }
    }

    fn max_activity(&self, lin: &Linear) -> i64 {
        lin.terms
            .iter()
            .map(|&(v, a)| if a > 0 { a * self.hi[v] } else { a * self.lo[v] })
            .sum()
    }

    fn propagate_linear(&mut self, ix: usize) -> Result<(), Conflict> {
        let lin = &self.model.linears[ix];
        let max = self.max_activity(lin);
        let guard = lin.guard.map(|g| (g, self.lit_value(g)));
        match guard {
            Some((_, Some(false))) => return Ok(()),
            Some((g, None)) => {
                if max < lin.rhs {
                    self.stats.propagations += 1;
                    return self.set_lit(g.negate());
                }
                return Ok(());
            }
            _ => {}
        }
        if max < lin.rhs {
            return Err(Conflict);
        }
        // each term must contribute at least rhs minus what the others can give
        for &(v, a) in &lin.terms {
            let own_max = if a > 0 { a * self.hi[v] } else { a * self.lo[v] };
            let need = lin.rhs - (max - own_max);
            if a > 0 {
                self.raise_lo(v, need.div_euclid(a) + i64::from(need.rem_euclid(a) != 0))?;
            } else {
                // a * x >= need  <=>  x <= floor(need / a) for a < 0
                let b = -a;
                self.lower_hi(v, (-need).div_euclid(b))?;
            }
        }
        Ok(())
    }

    fn propagate(&mut self) -> Result<(), Conflict> {
        while let Some(ev) = self.queue.pop() {
            match ev {
                Event::Bool(v) => {
                    for i in 0..self.clauses_of[v].len() {
                        self.propagate_clause(self.clauses_of[v][i])?;
                    }
                    for i in 0..self.linears_of_bool[v].len() {
                        self.propagate_linear(self.linears_of_bool[v][i])?;
                    }
                }
                Event::Int(v) => {
                    for i in 0..self.linears_of_int[v].len() {
                        self.propagate_linear(self.linears_of_int[v][i])?;
                    }
                }
            }
        }
        Ok(())
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("nonempty") {
                Trail::Bool(v) => self.bools[v] = None,
                Trail::Lo(v, old) => self.lo[v] = old,
                Trail::Hi(v, old) => self.hi[v] = old,
            }
        }
        self.queue.clear();
    }

    fn initial_propagation(&mut self) -> Result<(), Conflict> {
        for i in 0..self.model.clauses.len() {
            self.propagate_clause(i)?;
        }
        for i in 0..self.model.linears.len() {
            self.propagate_linear(i)?;
        }
        self.propagate()
    }

    fn is_open(&self, v: Var) -> bool {
        match v {
            Var::Bool(b) => self.bools[b].is_none(),
            Var::Int(i) => self.lo[i] < self.hi[i],
        }
    }

    /// Depth-first search deciding variables in `order`; booleans try
    /// `true` first, integers try values in increasing order. Every variable
    /// of the model must appear in `order`.
    pub fn solve(mut self, order: &[Var], node_limit: Option<u64>) -> (Outcome, SolverStats) {
        if self.initial_propagation().is_err() {
            self.stats.conflicts += 1;
            return (Outcome::Unsat, self.stats);
        }
        let result = self.search(order, 0, node_limit);
        let outcome = match result {
            Search::Found => Outcome::Sat(Assignment {
                bools: self.bools.iter().map(|b| b.expect("all decided")).collect(),
                ints: self.lo.clone(),
            }),
            Search::Exhausted => Outcome::Unsat,
            Search::Limit => Outcome::Inconclusive,
        };
        (outcome, self.stats)
    }

    fn search(&mut self, order: &[Var], from: usize, node_limit: Option<u64>) -> Search {
        let Some(pos) = (from..order.len()).find(|&i| self.is_open(order[i])) else {
            return Search::Found;
        };
        let choices: Vec<Choice> = match order[pos] {
            Var::Bool(b) => vec![Choice::Lit(Lit::pos(b)), Choice::Lit(Lit::neg(b))],
            Var::Int(i) => (self.lo[i]..=self.hi[i]).map(|x| Choice::Value(i, x)).collect(),
        };
        for choice in choices {
            if node_limit.is_some_and(|limit| self.stats.nodes >= limit) {
                return Search::Limit;
            }
            self.stats.nodes += 1;
            let mark = self.trail.len();
            let applied = match choice {
                Choice::Lit(l) => self.set_lit(l),
                Choice::Value(i, x) => self.raise_lo(i, x).and_then(|()| self.lower_hi(i, x)),
            };
            if applied.and_then(|()| self.propagate()).is_ok() {
                match self.search(order, pos + 1, node_limit) {
                    Search::Exhausted => {}
                    other => return other,
                }
            } else {
                self.stats.conflicts += 1;
            }
            self.undo_to(mark);
        }
        Search::Exhausted
    }
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    Lit(Lit),
    Value(usize, i64),
}

enum Search {
    Found,
    Exhausted,
    Limit,
}
