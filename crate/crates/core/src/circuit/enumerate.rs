//! Exhaustive enumeration of single-output fan-in-2 circuits.
//!
//! A circuit with `k` gates is a sequence of gate choices; the output is the
//! last gate. At position `i` the choices are, in order: the `n` variables,
//! the constant menu, and then for every pair `j <= l < i` (lexicographic)
//! first `Add(j, l)` and then `Mul(j, l)`. Circuits are listed in depth-first
//! preorder over these choices, so every circuit precedes its extensions.

use rayon::prelude::*;

use super::{Circuit, Constant, Gate};
use crate::algebra::Ring;
use crate::budget;
use crate::error::Result;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationParams {
    pub n: usize,
    pub max_gates: usize,
    pub constants: Vec<Constant>,
    /// Circuits whose syntactic degree exceeds the cap are not reported.
    pub degree_cap: Option<u32>,
}

impl EnumerationParams {
    fn leaves(&self) -> usize {
        self.n + self.constants.len()
    }

    fn choices(&self, position: usize) -> usize {
        self.leaves() + position * (position + 1)
    }

    fn gate(&self, position: usize, choice: usize) -> Gate {
        if choice < self.n {
            return Gate::Var(choice);
        }
        if choice < self.leaves() {
            return Gate::Const(self.constants[choice - self.n].clone());
        }
        let k = choice - self.leaves();
        let (mut pair, is_mul) = (k / 2, k % 2 == 1);
        for j in 0..position {
            let row = position - j;
            if pair < row {
                let l = j + pair;
                return if is_mul { Gate::Mul(j, l) } else { Gate::Add(j, l) };
            }
            pair -= row;
        }
        unreachable!("choice {choice} out of range at position {position}")
    }
}

/// Number of gate sequences with at most `max_gates` gates (before the
/// degree cap), saturating at `u128::MAX`.
pub fn circuit_count(params: &EnumerationParams) -> u128 {
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for i in 0..params.max_gates {
        level = level.saturating_mul(params.choices(i) as u128);
        total = total.saturating_add(level);
    }
    total
}

/// Stream of all circuits in canonical order. Fails up front when the count
/// exceeds `budget`.
pub fn enumerate_circuits(params: &EnumerationParams, budget: u64) -> Result<CircuitStream> {
    budget::check("circuit enumeration", circuit_count(params), budget as u128)?;
    Ok(CircuitStream { params: params.clone(), choices: Vec::new(), degrees: Vec::new(), started: false })
}

pub struct CircuitStream {
    params: EnumerationParams,
    choices: Vec<usize>,
    degrees: Vec<u64>,
    started: bool,
}

impl CircuitStream {
    fn push(&mut self, choice: usize) {
        let pos = self.choices.len();
        let deg = match self.params.gate(pos, choice) {
            Gate::Var(_) => 1,
            Gate::Const(_) => 0,
            Gate::Add(a, b) => self.degrees[a].max(self.degrees[b]),
            Gate::Mul(a, b) => self.degrees[a] + self.degrees[b],
        };
        self.choices.push(choice);
        self.degrees.push(deg);
    }

    /// Moves to the next sequence in preorder; false when exhausted.
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            if self.params.max_gates == 0 || self.params.choices(0) == 0 {
                return false;
            }
            self.push(0);
            return true;
        }
        if self.choices.len() < self.params.max_gates {
            self.push(0);
            return true;
        }
        while let Some(last) = self.choices.pop() {
            self.degrees.pop();
            let pos = self.choices.len();
            if last + 1 < self.params.choices(pos) {
                self.push(last + 1);
                return true;
            }
        }
        false
    }

    fn current(&self) -> Circuit {
        let gates = self.choices.iter().enumerate().map(|(i, &c)| self.params.gate(i, c)).collect();
        Circuit::new(self.params.n, gates, self.choices.len() - 1).expect("enumerated circuits are well formed")
    }
}

impl Iterator for CircuitStream {
    type Item = Circuit;

    fn next(&mut self) -> Option<Circuit> {
        while self.advance() {
            let within = match self.params.degree_cap {
                Some(cap) => *self.degrees.last().unwrap() <= u64::from(cap),
                None => true,
            };
            if within {
                return Some(self.current());
            }
        }
        None
    }
}

/// Expands every enumerated circuit incrementally and hands its output
/// polynomial to `visit`; the kept values come back in canonical order.
///
/// Subtrees below the first two gates are explored in parallel and merged in
/// order, so the result does not depend on the thread count.
pub fn walk_expansions<R, T, F>(
    params: &EnumerationParams,
    ring: &R,
    budget: u64,
    term_limit: usize,
    visit: F,
) -> Result<Vec<T>>
where
    R: Ring,
    T: Send,
    F: Fn(&Poly<R::Elem>) -> Option<T> + Sync,
{
    budget::check("circuit enumeration", circuit_count(params), budget as u128)?;
    if params.max_gates == 0 {
        return Ok(Vec::new());
    }
    let leaves: Vec<Poly<R::Elem>> = (0..params.leaves()).map(|c| leaf_poly(params, ring, c)).collect::<Result<_>>()?;
    let walker = Walker { params, ring, term_limit, leaves: &leaves, visit: &visit };

    let mut tasks: Vec<(usize, Option<usize>)> = Vec::new();
    for c0 in 0..params.choices(0) {
        tasks.push((c0, None));
        if params.max_gates >= 2 {
            tasks.extend((0..params.choices(1)).map(|c1| (c0, Some(c1))));
        }
    }
    let parts: Vec<Result<Vec<T>>> = tasks
        .par_iter()
        .map(|&(c0, c1)| {
            let mut state = WalkState::default();
            let mut out = Vec::new();
            walker.push(&mut state, 0, c0)?;
            match c1 {
                None => walker.emit(&state, &mut out),
                Some(c1) => {
                    walker.push(&mut state, 1, c1)?;
                    walker.descend(&mut state, &mut out)?;
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for part in parts {
        all.extend(part?);
    }
    Ok(all)
}

fn leaf_poly<R: Ring>(params: &EnumerationParams, ring: &R, choice: usize) -> Result<Poly<R::Elem>> {
    Ok(match params.gate(0, choice) {
        Gate::Var(i) => Poly::variable(ring, params.n, i),
        Gate::Const(c) => Poly::constant(ring, params.n, ring.from_constant(&c)?),
        _ => unreachable!(),
    })
}

struct Walker<'a, R: Ring, F> {
    params: &'a EnumerationParams,
    ring: &'a R,
    term_limit: usize,
    leaves: &'a [Poly<R::Elem>],
    visit: &'a F,
}

struct WalkState<E> {
    polys: Vec<Poly<E>>,
    degrees: Vec<u64>,
}

impl<E> Default for WalkState<E> {
    fn default() -> Self {
        WalkState { polys: Vec::new(), degrees: Vec::new() }
    }
}

impl<'a, R, T, F> Walker<'a, R, F>
where
    R: Ring,
    F: Fn(&Poly<R::Elem>) -> Option<T>,
{
    fn push(&self, state: &mut WalkState<R::Elem>, pos: usize, choice: usize) -> Result<()> {
        let (poly, deg) = match self.params.gate(pos, choice) {
            Gate::Var(_) | Gate::Const(_) => {
                let p = self.leaves[choice].clone();
                let deg = u64::from(choice < self.params.n);
                (p, deg)
            }
            Gate::Add(a, b) => (state.polys[a].add(self.ring, &state.polys[b]), state.degrees[a].max(state.degrees[b])),
            Gate::Mul(a, b) => {
                (state.polys[a].mul(self.ring, &state.polys[b], self.term_limit)?, state.degrees[a] + state.degrees[b])
            }
        };
        state.polys.push(poly);
        state.degrees.push(deg);
        Ok(())
    }

    fn pop(&self, state: &mut WalkState<R::Elem>) {
        state.polys.pop();
        state.degrees.pop();
    }

    fn emit(&self, state: &WalkState<R::Elem>, out: &mut Vec<T>) {
        if let Some(cap) = self.params.degree_cap {
            if *state.degrees.last().unwrap() > u64::from(cap) {
                return;
            }
        }
        if let Some(v) = (self.visit)(state.polys.last().unwrap()) {
            out.push(v);
        }
    }

    fn descend(&self, state: &mut WalkState<R::Elem>, out: &mut Vec<T>) -> Result<()> {
        self.emit(state, out);
        let pos = state.polys.len();
        if pos == self.params.max_gates {
            return Ok(());
        }
        for choice in 0..self.params.choices(pos) {
            self.push(state, pos, choice)?;
            self.descend(state, out)?;
            self.pop(state);
        }
        Ok(())
    }
}
