//! Complete deterministic automata over `{0,1}^k` tuple alphabets.
//!
//! A symbol is a `k`-bit integer; track 0 is the most significant bit, so the
//! symbol `0b10` on two tracks is the tuple `[1,0]`. Every automaton is
//! complete: a dead state is materialized rather than implied, and
//! complementation is a flip of the final set.

mod format;
mod nfa;
mod regex;

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::zeckendorf::{self, ZeckWord};

pub use nfa::Nfa;
pub use regex::regex_to_dfa;

pub type State = u32;
pub type Symbol = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("track arity mismatch: {left} vs {right}")]
    TrackMismatch { left: usize, right: usize },
    #[error("track labels differ: {left:?} vs {right:?}")]
    LabelMismatch { left: Vec<String>, right: Vec<String> },
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("automaton text line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("regex error at offset {pos}: {msg}")]
    Regex { pos: usize, msg: String },
}

pub type Result<T, E = AutomatonError> = std::result::Result<T, E>;

/// Boolean connective applied pointwise to two languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Xor,
    Minus,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Xor => a != b,
            BoolOp::Minus => a && !b,
        }
    }
}

/// Pack one digit per track into a symbol (track 0 is the high bit).
pub fn pack_symbol(bits: &[u8]) -> Symbol {
    bits.iter().fold(0, |acc, &b| (acc << 1) | u32::from(b & 1))
}

/// Digit of track `t` in a `k`-track symbol.
#[inline]
pub fn symbol_bit(s: Symbol, t: usize, k: usize) -> u8 {
    ((s >> (k - 1 - t)) & 1) as u8
}

/// The tuple word reading the given numbers in parallel, each left-padded
/// with zeros to `len` digits (at least the longest canonical length).
pub fn tuple_word(values: &[u64], len: Option<usize>) -> Vec<Symbol> {
    let words: Vec<ZeckWord> = values.iter().map(|&v| zeckendorf::encode(v)).collect();
    let longest = words.iter().map(ZeckWord::len).max().unwrap_or(0);
    let len = len.unwrap_or(longest).max(longest);
    let padded: Vec<ZeckWord> = words.iter().map(|w| w.padded(len)).collect();
    (0..len)
        .map(|i| padded.iter().fold(0, |acc, w| (acc << 1) | u32::from(w.digits()[i])))
        .collect()
}

/// Split a tuple word back into one digit string per track.
pub fn untuple(word: &[Symbol], tracks: usize) -> Vec<Vec<u8>> {
    (0..tracks)
        .map(|t| word.iter().map(|&s| symbol_bit(s, t, tracks)).collect())
        .collect()
}

/// A complete DFA over `{0,1}^tracks`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    tracks: usize,
    labels: Option<Vec<String>>,
    initial: State,
    finals: Vec<bool>,
    delta: Vec<State>,
}

impl Dfa {
    /// Build from a dense table `delta[q * 2^tracks + s]`.
    pub fn from_parts(
        tracks: usize,
        initial: State,
        finals: Vec<bool>,
        delta: Vec<State>,
    ) -> Result<Self> {
        let n = finals.len();
        let sigma = 1usize << tracks;
        if n == 0 {
            return Err(AutomatonError::Malformed("no states".into()));
        }
        if initial as usize >= n {
            return Err(AutomatonError::Malformed(format!("initial state {initial} out of range")));
        }
        if delta.len() != n * sigma {
            return Err(AutomatonError::Malformed(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                n * sigma
            )));
        }
        if let Some(bad) = delta.iter().find(|&&q| q as usize >= n) {
            return Err(AutomatonError::Malformed(format!("transition to missing state {bad}")));
        }
        Ok(Self { tracks, labels: None, initial, finals, delta })
    }

    /// Accepts nothing.
    pub fn empty(tracks: usize) -> Self {
        Self { tracks, labels: None, initial: 0, finals: vec![false], delta: vec![0; 1 << tracks] }
    }

    /// Accepts every tuple word.
    pub fn universal(tracks: usize) -> Self {
        Self { tracks, labels: None, initial: 0, finals: vec![true], delta: vec![0; 1 << tracks] }
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(labels.len(), self.tracks, "label count must equal track count");
        self.labels = Some(labels);
        self
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn symbol_count(&self) -> usize {
        1 << self.tracks
    }

    #[inline]
    pub fn next(&self, q: State, s: Symbol) -> State {
        self.delta[(q as usize) << self.tracks | s as usize]
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q as usize]
    }

    pub fn final_states(&self) -> impl Iterator<Item = State> + '_ {
        self.finals.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q as State)
    }

    pub fn run(&self, word: &[Symbol]) -> State {
        word.iter().fold(self.initial, |q, &s| self.next(q, s))
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.is_final(self.run(word))
    }

    /// Acceptance of the canonical (shortest) parallel encoding of `values`.
    pub fn accepts_values(&self, values: &[u64]) -> bool {
        assert_eq!(values.len(), self.tracks, "value count must equal track count");
        self.accepts(&tuple_word(values, None))
    }

    /// States from which some final state is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let sigma = self.symbol_count();
        let mut rev: Vec<Vec<State>> = vec![Vec::new(); n];
        for q in 0..n {
            for s in 0..sigma {
                rev[self.delta[q * sigma + s] as usize].push(q as State);
            }
        }
        let mut live = self.finals.clone();
        let mut stack: Vec<State> = self.final_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Number of reachable states that can still reach a final state. This
    /// is the state count of the trimmed automaton, i.e. without the sink.
    pub fn live_state_count(&self) -> usize {
        let live = self.live_states();
        let reach = self.reachable_order();
        reach.iter().filter(|&&q| live[q as usize]).count()
    }

    pub fn is_empty_language(&self) -> bool {
        !self.live_states()[self.initial as usize]
    }

    fn reachable_order(&self) -> Vec<State> {
        let sigma = self.symbol_count();
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for s in 0..sigma as Symbol {
                let r = self.next(q, s);
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    order.push(r);
                }
            }
            i += 1;
        }
        order
    }

    /// Accepts exactly the tuple words this automaton rejects.
    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        out.finals.iter_mut().for_each(|f| *f = !*f);
        out
    }

    /// Minimal complete DFA, states numbered in breadth-first order from the
    /// initial state (symbols visited in ascending order). Language-equal
    /// automata minimize to identical values.
    pub fn minimize(&self) -> Dfa {
        let order = self.reachable_order();
        let n = order.len();
        let sigma = self.symbol_count();
        let mut index = vec![u32::MAX; self.num_states()];
        for (i, &q) in order.iter().enumerate() {
            index[q as usize] = i as u32;
        }
        let succ: Vec<u32> = order
            .iter()
            .flat_map(|&q| (0..sigma as Symbol).map(move |s| (q, s)))
            .map(|(q, s)| index[self.next(q, s) as usize])
            .collect();

        // Moore refinement
        let mut class: Vec<u32> = order.iter().map(|&q| u32::from(self.is_final(q))).collect();
        let mut count = {
            let mut c = class.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        let mut sig = vec![0u32; sigma + 1];
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(n);
            let mut next_class = vec![0u32; n];
            for q in 0..n {
                sig[0] = class[q];
                for s in 0..sigma {
                    sig[s + 1] = class[succ[q * sigma + s] as usize];
                }
                let fresh = ids.len() as u32;
                next_class[q] = *ids.entry(sig.clone()).or_insert(fresh);
            }
            let new_count = ids.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // quotient, then canonical BFS numbering
        let mut rep = vec![u32::MAX; count];
        for q in 0..n {
            if rep[class[q] as usize] == u32::MAX {
                rep[class[q] as usize] = q as u32;
            }
        }
        let mut canon = vec![u32::MAX; count];
        let mut queue = VecDeque::new();
        let start = class[0];
        canon[start as usize] = 0;
        queue.push_back(start);
        let mut classes_in_order = vec![start];
        while let Some(c) = queue.pop_front() {
            let q = rep[c as usize] as usize;
            for s in 0..sigma {
                let d = class[succ[q * sigma + s] as usize];
                if canon[d as usize] == u32::MAX {
                    canon[d as usize] = classes_in_order.len() as u32;
                    classes_in_order.push(d);
                    queue.push_back(d);
                }
            }
        }
        let mut finals = Vec::with_capacity(count);
        let mut delta = Vec::with_capacity(count * sigma);
        for &c in &classes_in_order {
            let q = rep[c as usize] as usize;
            finals.push(self.is_final(order[q]));
            for s in 0..sigma {
                delta.push(canon[class[succ[q * sigma + s] as usize] as usize]);
            }
        }
        Dfa { tracks: self.tracks, labels: self.labels.clone(), initial: 0, finals, delta }
    }

    /// Product automaton over an identical alphabet (not minimized).
    fn product(&self, other: &Dfa, op: BoolOp) -> Dfa {
        debug_assert_eq!(self.tracks, other.tracks);
        let sigma = self.symbol_count();
        let nb = other.num_states();
        let dense = self.num_states() * nb <= 1 << 22;
        let mut dense_ids = if dense { vec![u32::MAX; self.num_states() * nb] } else { Vec::new() };
        let mut sparse_ids: HashMap<(State, State), State> = HashMap::new();
        let mut pairs: Vec<(State, State)> = Vec::new();
        let mut lookup = |p: (State, State), pairs: &mut Vec<(State, State)>| -> State {
            let fresh = pairs.len() as State;
            let id = if dense {
                let slot = &mut dense_ids[p.0 as usize * nb + p.1 as usize];
                if *slot == u32::MAX {
                    *slot = fresh;
                }
                *slot
            } else {
                *sparse_ids.entry(p).or_insert(fresh)
            };
            if id == fresh {
                pairs.push(p);
            }
            id
        };
        lookup((self.initial, other.initial), &mut pairs);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            for s in 0..sigma as Symbol {
                let t = lookup((self.next(a, s), other.next(b, s)), &mut pairs);
                delta.push(t);
            }
            i += 1;
        }
        let finals = pairs.iter().map(|&(a, b)| op.apply(self.is_final(a), other.is_final(b))).collect();
        Dfa { tracks: self.tracks, labels: self.labels.clone(), initial: 0, finals, delta }
    }

    /// Pointwise boolean combination of two languages over the same tracks;
    /// the result is minimized.
    pub fn boolean_combine(op: BoolOp, a: &Dfa, b: &Dfa) -> Result<Dfa> {
        if a.tracks != b.tracks {
            return Err(AutomatonError::TrackMismatch { left: a.tracks, right: b.tracks });
        }
        if let (Some(la), Some(lb)) = (&a.labels, &b.labels) {
            if la != lb {
                return Err(AutomatonError::LabelMismatch { left: la.clone(), right: lb.clone() });
            }
        }
        let mut out = a.product(b, op).minimize();
        out.labels = a.labels.clone().or_else(|| b.labels.clone());
        Ok(out)
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        Dfa::boolean_combine(BoolOp::And, self, other)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        Dfa::boolean_combine(BoolOp::Or, self, other)
    }

    /// Language equality (on minimized canonical forms).
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        if self.tracks != other.tracks {
            return Err(AutomatonError::TrackMismatch { left: self.tracks, right: other.tracks });
        }
        let a = self.minimize();
        let b = other.minimize();
        Ok(a.initial == b.initial && a.finals == b.finals && a.delta == b.delta)
    }

    /// Reorder tracks: track `j` of the result is track `order[j]` of `self`.
    pub fn permute_tracks(&self, order: &[usize]) -> Dfa {
        let k = self.tracks;
        assert_eq!(order.len(), k, "permutation length must equal track count");
        let sigma = self.symbol_count();
        let map: Vec<Symbol> = (0..sigma as Symbol)
            .map(|s_new| {
                (0..k).fold(0, |acc, j| acc | (u32::from(symbol_bit(s_new, j, k)) << (k - 1 - order[j])))
            })
            .collect();
        let delta = (0..self.num_states())
            .flat_map(|q| map.iter().map(move |&s| (q, s)))
            .map(|(q, s)| self.delta[q * sigma + s as usize])
            .collect();
        let labels = self.labels.as_ref().map(|l| order.iter().map(|&i| l[i].clone()).collect());
        Dfa { tracks: k, labels, initial: self.initial, finals: self.finals.clone(), delta }
    }

    /// Extend to a larger labeled track set; new tracks are unconstrained.
    /// Every label of `self` must occur in `labels`.
    pub fn align_to(&self, labels: &[String]) -> Dfa {
        let own = self.labels.as_ref().expect("align_to needs a labeled automaton");
        let big = labels.len();
        let positions: Vec<usize> = own
            .iter()
            .map(|l| labels.iter().position(|m| m == l).expect("label missing from target track set"))
            .collect();
        let k = self.tracks;
        let map: Vec<Symbol> = (0..1u32 << big)
            .map(|s| {
                positions
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (j, &p)| acc | (u32::from(symbol_bit(s, p, big)) << (k - 1 - j)))
            })
            .collect();
        let sigma = self.symbol_count();
        let delta = (0..self.num_states())
            .flat_map(|q| map.iter().map(move |&s| (q, s)))
            .map(|(q, s)| self.delta[q * sigma + s as usize])
            .collect();
        Dfa {
            tracks: big,
            labels: Some(labels.to_vec()),
            initial: self.initial,
            finals: self.finals.clone(),
            delta,
        }
    }

    /// Existentially remove one track. Kept tracks may be padded with extra
    /// leading zeros to absorb a longer witness; the result is leading-zero
    /// normalized and minimized.
    pub fn project(&self, track: usize) -> Dfa {
        self.project_tracks(&[track])
    }

    /// Existentially remove several tracks at once.
    pub fn project_tracks(&self, removed: &[usize]) -> Dfa {
        let k = self.tracks;
        assert!(removed.iter().all(|&t| t < k), "projected track out of range");
        let kept: Vec<usize> = (0..k).filter(|t| !removed.contains(t)).collect();
        let small = kept.len();
        let r = k - small;
        // every big symbol, grouped by the small symbol it projects to
        let mut expand: Vec<Vec<Symbol>> = vec![Vec::with_capacity(1 << r); 1 << small];
        for s in 0..1u32 << k {
            let key = kept
                .iter()
                .enumerate()
                .fold(0, |acc, (j, &t)| acc | (u32::from(symbol_bit(s, t, k)) << (small - 1 - j)));
            expand[key as usize].push(s);
        }
        let mut out = nfa::subset_construction(
            small,
            vec![self.initial],
            true,
            |set, s, out| {
                for &q in set {
                    for &big in &expand[s as usize] {
                        out.push(self.next(q, big));
                    }
                }
            },
            |q| self.is_final(q),
        )
        .minimize();
        out.labels = self.labels.as_ref().map(|l| kept.iter().map(|&t| l[t].clone()).collect());
        out
    }

    /// Close the language under adding and removing leading all-zero
    /// symbols: `w` is accepted iff its zero-stripped form `s` is read to a
    /// final state from some state reachable from the start by zeros alone.
    pub fn normalize_leading_zeros(&self) -> Dfa {
        let mut out = nfa::subset_construction(
            self.tracks,
            vec![self.initial],
            true,
            |set, s, out| out.extend(set.iter().map(|&q| self.next(q, s))),
            |q| self.is_final(q),
        )
        .minimize();
        out.labels = self.labels.clone();
        out
    }

    /// `{uv : u in L(a), v in L(b)}`, minimized. May contain words that are
    /// not canonical numerals; see the pipeline's renumeration step.
    pub fn concat(a: &Dfa, b: &Dfa) -> Result<Dfa> {
        if a.tracks != b.tracks {
            return Err(AutomatonError::TrackMismatch { left: a.tracks, right: b.tracks });
        }
        let na = a.num_states() as State;
        let b_init = na + b.initial;
        let close = |out: &mut Vec<State>| {
            if out.iter().any(|&q| q < na && a.is_final(q)) {
                out.push(b_init);
            }
        };
        let mut start = vec![a.initial];
        close(&mut start);
        let mut out = nfa::subset_construction(
            a.tracks,
            start,
            false,
            |set, s, out| {
                for &q in set {
                    if q < na {
                        out.push(a.next(q, s));
                    } else {
                        out.push(na + b.next(q - na, s));
                    }
                }
                close(out);
            },
            |q| q >= na && b.is_final(q - na),
        )
        .minimize();
        out.labels = a.labels.clone();
        Ok(out)
    }

    /// All accepted words of length at most `max_len`, shortest first and
    /// lexicographic (by symbol value) within a length.
    pub fn enumerate_accepted(&self, max_len: usize) -> Vec<Vec<Symbol>> {
        let n = self.num_states();
        let sigma = self.symbol_count();
        // can_finish[d][q]: some word of length exactly d leads q to a final state
        let mut can_finish = vec![self.finals.clone()];
        for d in 1..=max_len {
            let prev = &can_finish[d - 1];
            let row =
                (0..n).map(|q| (0..sigma).any(|s| prev[self.delta[q * sigma + s] as usize])).collect();
            can_finish.push(row);
        }
        let mut out = Vec::new();
        let mut word = Vec::new();
        for len in 0..=max_len {
            self.enumerate_rec(self.initial, len, &can_finish, &mut word, &mut out);
        }
        out
    }

    fn enumerate_rec(
        &self,
        q: State,
        remaining: usize,
        can_finish: &[Vec<bool>],
        word: &mut Vec<Symbol>,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        if !can_finish[remaining][q as usize] {
            return;
        }
        if remaining == 0 {
            out.push(word.clone());
            return;
        }
        for s in 0..self.symbol_count() as Symbol {
            word.push(s);
            self.enumerate_rec(self.next(q, s), remaining - 1, can_finish, word, out);
            word.pop();
        }
    }

    /// All values `v` such that the word with track `out_track` spelling `v`
    /// and the other tracks spelling `inputs` (in track order, skipping
    /// `out_track`) is accepted at word length `len`.
    pub fn values_at(&self, inputs: &[u64], out_track: usize, len: usize) -> Vec<u64> {
        let k = self.tracks;
        assert_eq!(inputs.len() + 1, k, "need one input per non-output track");
        let digits: Vec<ZeckWord> =
            inputs.iter().map(|&v| zeckendorf::encode(v).padded(len)).collect();
        if digits.iter().any(|w| w.len() > len) {
            return Vec::new();
        }
        let live = self.live_states();
        let mut out = Vec::new();
        let mut stack = vec![(self.initial, 0usize, 0u64)];
        while let Some((q, pos, value)) = stack.pop() {
            if !live[q as usize] {
                continue;
            }
            if pos == len {
                if self.is_final(q) {
                    out.push(value);
                }
                continue;
            }
            for bit in 0..2u8 {
                let mut s: Symbol = 0;
                let mut input = digits.iter();
                for t in 0..k {
                    let b = if t == out_track { bit } else { input.next().unwrap().digits()[pos] };
                    s = (s << 1) | u32::from(b);
                }
                let v = value + u64::from(bit) * zeckendorf::weight(len - 1 - pos);
                stack.push((self.next(q, s), pos + 1, v));
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The unique value related to `inputs` when the automaton computes a
    /// function, searching word lengths up to `extra` digits beyond the
    /// inputs. `None` if no value or several values are found.
    pub fn function_value(&self, inputs: &[u64], out_track: usize, extra: usize) -> Option<u64> {
        let base = inputs.iter().map(|&v| zeckendorf::rep_len(v)).max().unwrap_or(0);
        let vals = self.values_at(inputs, out_track, base + extra);
        match vals.as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests;
