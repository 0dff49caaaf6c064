use std::collections::HashMap;

use super::{Dfa, State, Symbol};

/// Nondeterministic automaton with spontaneous moves. Only used as an
/// intermediate (regex compilation); never persisted.
#[derive(Debug, Clone)]
pub struct Nfa {
    tracks: usize,
    trans: Vec<Vec<(Symbol, State)>>,
    eps: Vec<Vec<State>>,
    initial: State,
    finals: Vec<bool>,
}

impl Nfa {
    pub fn new(tracks: usize) -> Self {
        Nfa { tracks, trans: Vec::new(), eps: Vec::new(), initial: 0, finals: Vec::new() }
    }

    pub fn add_state(&mut self) -> State {
        self.trans.push(Vec::new());
        self.eps.push(Vec::new());
        self.finals.push(false);
        (self.trans.len() - 1) as State
    }

    pub fn add_transition(&mut self, from: State, s: Symbol, to: State) {
        self.trans[from as usize].push((s, to));
    }

    pub fn add_epsilon(&mut self, from: State, to: State) {
        self.eps[from as usize].push(to);
    }

    pub fn set_initial(&mut self, q: State) {
        self.initial = q;
    }

    pub fn set_final(&mut self, q: State, f: bool) {
        self.finals[q as usize] = f;
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    fn close(&self, set: &mut Vec<State>) {
        let mut i = 0;
        while i < set.len() {
            let q = set[i];
            for &r in &self.eps[q as usize] {
                if !set.contains(&r) {
                    set.push(r);
                }
            }
            i += 1;
        }
    }

    /// Subset construction followed by minimization.
    pub fn determinize_minimize(&self) -> Dfa {
        let mut start = vec![self.initial];
        self.close(&mut start);
        subset_construction(
            self.tracks,
            start,
            false,
            |set, s, out| {
                for &q in set {
                    for &(t, r) in &self.trans[q as usize] {
                        if t == s && !out.contains(&r) {
                            out.push(r);
                        }
                    }
                }
                self.close(out);
            },
            |q| self.finals[q as usize],
        )
        .minimize()
    }
}

/// Generic subset construction. `step` appends the successors of a (sorted,
/// closed) state set on a symbol; the builder sorts and deduplicates.
///
/// With `zero_phase`, the start state loops on the all-zero symbol and stands
/// for every state reachable from `start` by zeros; leaving it on a nonzero
/// symbol moves into ordinary subsets. The resulting language is
/// `{0^j s : s does not start with 0, some zero-reachable state reads s to a final}`.
pub(crate) fn subset_construction(
    tracks: usize,
    start: Vec<State>,
    zero_phase: bool,
    mut step: impl FnMut(&[State], Symbol, &mut Vec<State>),
    is_final: impl Fn(State) -> bool,
) -> Dfa {
    let sigma = 1usize << tracks;
    let mut sets: Vec<Vec<State>> = Vec::new();
    let mut ids: HashMap<Vec<State>, State> = HashMap::new();
    let mut delta: Vec<State> = Vec::new();

    let normalize = |v: &mut Vec<State>| {
        v.sort_unstable();
        v.dedup();
    };

    let mut start = start;
    normalize(&mut start);
    if zero_phase {
        // saturate under the zero symbol
        loop {
            let mut next = start.clone();
            step(&start, 0, &mut next);
            normalize(&mut next);
            if next == start {
                break;
            }
            start = next;
        }
        // slot 0 is the phase state; its set is `start` but it is not
        // registered in `ids`, so an ordinary subset equal to it stays distinct
        sets.push(start.clone());
    } else {
        ids.insert(start.clone(), 0);
        sets.push(start);
    }

    let mut buf = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        for s in 0..sigma as Symbol {
            if zero_phase && i == 0 && s == 0 {
                delta.push(0);
                continue;
            }
            buf.clear();
            step(&sets[i], s, &mut buf);
            normalize(&mut buf);
            let id = match ids.get(&buf) {
                Some(&id) => id,
                None => {
                    let id = sets.len() as State;
                    ids.insert(buf.clone(), id);
                    sets.push(buf.clone());
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let finals = sets.iter().map(|set| set.iter().any(|&q| is_final(q))).collect();
    Dfa { tracks, labels: None, initial: 0, finals, delta }
}
