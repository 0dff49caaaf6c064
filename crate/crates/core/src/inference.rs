//! Guessing automata for functions from finite data.
//!
//! Prefixes of padded tuple words are classified by their residual
//! behaviour on every extension of length at most `horizon` that stays
//! inside the fully sampled window: for each input suffix, the value the
//! output track still has to spell (or "impossible"). Prefixes with equal
//! residuals become one state. The horizon grows until the resulting
//! machine is closed and agrees with every sample.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::automata::{pack_symbol, symbol_bit, Dfa, State, Symbol};
use crate::zeckendorf::{self, FIB};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InferenceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("input {input} has two values, {first} and {second}")]
    Inconsistent { input: u64, first: u64, second: u64 },
    #[error("no samples")]
    Empty,
    #[error("samples are too sparse: need every input up to at least 2")]
    TooSparse,
    #[error("no consistent automaton with at most {budget} states")]
    Failure { budget: usize },
}

/// Observed values of a sequence, `i -> a(i)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SampleSet {
    pairs: BTreeMap<u64, u64>,
}

impl SampleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self, InferenceError> {
        let mut s = Self::new();
        for (i, v) in pairs {
            s.insert(i, v)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, i: u64, v: u64) -> Result<(), InferenceError> {
        match self.pairs.insert(i, v) {
            Some(old) if old != v => {
                self.pairs.insert(i, old);
                Err(InferenceError::Inconsistent { input: i, first: old, second: v })
            }
            _ => Ok(()),
        }
    }

    pub fn get(&self, i: u64) -> Option<u64> {
        self.pairs.get(&i).copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.pairs.iter().map(|(&i, &v)| (i, v))
    }

    /// Largest `i` such that every `1 <= i' <= i` is present.
    pub fn complete_upto(&self) -> u64 {
        let mut n = 0;
        for &i in self.pairs.keys().skip_while(|&&i| i == 0) {
            if i != n + 1 {
                break;
            }
            n = i;
        }
        n
    }

    /// Lines of `<i> <value>`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, InferenceError> {
        let mut s = Self::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| InferenceError::Parse { line: no + 1, msg: msg.to_owned() };
            let mut parts = line.split_whitespace();
            let (Some(i), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err("expected `<i> <value>`"));
            };
            let i = i.parse().map_err(|_| err("bad index"))?;
            let v = v.parse().map_err(|_| err("bad value"))?;
            s.insert(i, v)?;
        }
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.iter() {
            writeln!(out, "{i} {v}").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuessOptions {
    /// Extra leading zero symbols the result must tolerate on every sample.
    pub max_pad: usize,
    pub state_budget: usize,
}

impl Default for GuessOptions {
    fn default() -> Self {
        GuessOptions { max_pad: 2, state_budget: 256 }
    }
}

/// Guess a 2-track automaton `(i, a(i))` from samples.
pub fn guess_dfa(samples: &SampleSet, opts: &GuessOptions) -> Result<Dfa, InferenceError> {
    if samples.is_empty() {
        return Err(InferenceError::Empty);
    }
    let dense: Vec<Option<u64>> = {
        let top = samples.complete_upto();
        (0..=top).map(|i| samples.get(i)).collect()
    };
    let oracle = |x: &[u64]| dense.get(x[0] as usize).copied().flatten();
    learn_function_checked(1, samples.complete_upto(), &oracle, opts, |dfa| {
        sound_on(dfa, samples.iter().map(|(i, v)| (vec![i], v)), opts.max_pad)
    })
}

/// True if every `(inputs, value)` is accepted with `0..=max_pad` extra
/// leading zeros and no other value is accepted at those lengths.
pub fn sound_on(dfa: &Dfa, data: impl IntoIterator<Item = (Vec<u64>, u64)>, max_pad: usize) -> bool {
    let out = dfa.tracks() - 1;
    data.into_iter().all(|(inputs, v)| {
        let base = inputs.iter().chain([&v]).map(|&x| zeckendorf::rep_len(x)).max().unwrap_or(0);
        (0..=max_pad).all(|pad| dfa.values_at(&inputs, out, base + pad) == [v])
    })
}

/// Words of length `j` with no adjacent ones, as `(value, first digit)`.
fn valid_suffixes(j: usize) -> Vec<(u64, u8)> {
    (0..FIB[j + 2])
        .map(|v| {
            let w = zeckendorf::encode(v).padded(j);
            (v, w.digits().first().copied().unwrap_or(0))
        })
        .collect()
}

struct Learner<'a, F: Fn(&[u64]) -> Option<u64>> {
    inputs: usize,
    oracle: &'a F,
    horizon: usize,
    suffixes: Vec<Vec<(u64, u8)>>,
    cache: HashMap<Vec<u64>, Option<u64>>,
}

/// The value of `digits` followed by `j` zeros, or `None` if the digits
/// contain adjacent ones.
fn shifted_value(digits: &[u8], j: usize) -> Option<u64> {
    let p = digits.len();
    let mut v = 0u64;
    for (i, &d) in digits.iter().enumerate() {
        if d == 1 {
            if i > 0 && digits[i - 1] == 1 {
                return None;
            }
            v += FIB[p - i + 1 + j];
        }
    }
    Some(v)
}

impl<F: Fn(&[u64]) -> Option<u64>> Learner<'_, F> {
    fn lookup(&mut self, x: &[u64]) -> Option<u64> {
        if let Some(v) = self.cache.get(x) {
            return *v;
        }
        let v = (self.oracle)(x);
        self.cache.insert(x.to_vec(), v);
        v
    }

    /// Residual table of a prefix. Entry `None` means no completion exists.
    fn signature(&mut self, word: &[Symbol]) -> Vec<Option<u64>> {
        let k = self.inputs + 1;
        let tracks: Vec<Vec<u8>> =
            (0..k).map(|t| word.iter().map(|&s| symbol_bit(s, t, k)).collect()).collect();
        let mut sig = Vec::new();
        for j in 0..=self.horizon {
            let count = self.suffixes[j].len().pow(self.inputs as u32);
            let heads: Option<Vec<u64>> = tracks.iter().map(|d| shifted_value(d, j)).collect();
            let Some(heads) = heads else {
                sig.extend(std::iter::repeat_n(None, count));
                continue;
            };
            let out_head = heads[k - 1];
            let out_ends_one = tracks[k - 1].last() == Some(&1);
            let cap = if out_ends_one && j > 0 { FIB[j + 1] } else { FIB[j + 2] };
            let mut x = vec![0u64; self.inputs];
            for idx in 0..count {
                let mut rest = idx;
                let mut ok = true;
                for t in 0..self.inputs {
                    let n = self.suffixes[j].len();
                    let (v, first) = self.suffixes[j][rest % n];
                    rest /= n;
                    if first == 1 && tracks[t].last() == Some(&1) {
                        ok = false;
                    }
                    x[t] = heads[t] + v;
                }
                let entry = if ok {
                    self.lookup(&x).and_then(|o| o.checked_sub(out_head)).filter(|&r| r < cap)
                } else {
                    None
                };
                sig.push(entry);
            }
        }
        sig
    }

    /// Breadth-first state discovery. `None` if the machine does not close
    /// within `max_len` or exceeds the budget.
    fn build(&mut self, max_len: usize, budget: usize) -> Option<Dfa> {
        let k = self.inputs + 1;
        let sigma = 1usize << k;
        let mut reps: Vec<Vec<Symbol>> = vec![Vec::new()];
        let mut ids: HashMap<Vec<Option<u64>>, State> = HashMap::new();
        let first = self.signature(&[]);
        let mut finals = vec![first[0] == Some(0)];
        ids.insert(first, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < reps.len() {
            if reps[i].len() >= max_len {
                return None;
            }
            for s in 0..sigma as Symbol {
                let mut w = reps[i].clone();
                w.push(s);
                let sig = self.signature(&w);
                let q = match ids.get(&sig) {
                    Some(&q) => q,
                    None => {
                        if reps.len() > budget {
                            return None;
                        }
                        let q = reps.len() as State;
                        finals.push(sig[0] == Some(0));
                        ids.insert(sig, q);
                        reps.push(w);
                        q
                    }
                };
                delta.push(q);
            }
            i += 1;
        }
        Dfa::from_parts(k, 0, finals, delta).ok().map(|d| d.minimize())
    }
}

/// Learn the graph of a function of `inputs` naturals, output on the last
/// track. `oracle` must be defined (or deliberately `None`) for every input
/// tuple with all components `<= complete_upto`.
pub fn learn_function<F: Fn(&[u64]) -> Option<u64>>(
    inputs: usize,
    complete_upto: u64,
    oracle: &F,
    opts: &GuessOptions,
) -> Result<Dfa, InferenceError> {
    learn_function_checked(inputs, complete_upto, oracle, opts, |_| true)
}

/// As [`learn_function`], additionally rejecting candidates that fail
/// `accept` (for instance on data outside the complete window).
pub fn learn_function_checked<F: Fn(&[u64]) -> Option<u64>>(
    inputs: usize,
    complete_upto: u64,
    oracle: &F,
    opts: &GuessOptions,
    accept: impl Fn(&Dfa) -> bool,
) -> Result<Dfa, InferenceError> {
    // longest word length whose every input value is known
    let window = (0..FIB.len() - 2).take_while(|&l| FIB[l + 2] - 1 <= complete_upto).last().unwrap_or(0);
    if window < 2 {
        return Err(InferenceError::TooSparse);
    }
    let mut learner = Learner { inputs, oracle, horizon: 0, suffixes: Vec::new(), cache: HashMap::new() };
    for horizon in 1..window {
        learner.horizon = horizon;
        learner.suffixes = (0..=horizon).map(valid_suffixes).collect();
        let room = window - horizon;
        let Some(dfa) = learner.build(room, opts.state_budget) else { continue };
        if dfa.num_states() > opts.state_budget + 1 {
            continue;
        }
        if agrees_in_window(&dfa, inputs, window, oracle, opts.max_pad) && accept(&dfa) {
            return Ok(dfa);
        }
    }
    Err(InferenceError::Failure { budget: opts.state_budget })
}

/// Check every input tuple whose words fit in `window` digits.
fn agrees_in_window<F: Fn(&[u64]) -> Option<u64>>(
    dfa: &Dfa,
    inputs: usize,
    window: usize,
    oracle: &F,
    max_pad: usize,
) -> bool {
    let limit = FIB[window + 2];
    let out = inputs;
    let mut x = vec![0u64; inputs];
    loop {
        let base = x.iter().map(|&v| zeckendorf::rep_len(v)).max().unwrap_or(0);
        let expected = oracle(&x);
        let len = base.max(expected.map_or(0, zeckendorf::rep_len));
        for pad in 0..=max_pad {
            let got = dfa.values_at(&x, out, len + pad);
            let ok = match expected {
                Some(v) => got == [v],
                None => got.is_empty(),
            };
            if !ok {
                return false;
            }
        }
        // odometer over all inputs below `limit`
        let mut t = 0;
        loop {
            if t == inputs {
                return true;
            }
            x[t] += 1;
            if x[t] < limit {
                break;
            }
            x[t] = 0;
            t += 1;
        }
    }
}

/// Encode `(inputs, output)` as a padded tuple word.
pub fn pair_word(values: &[u64], pad: usize) -> Vec<Symbol> {
    let len = values.iter().map(|&v| zeckendorf::rep_len(v)).max().unwrap_or(0) + pad;
    let words: Vec<_> = values.iter().map(|&v| zeckendorf::encode(v).padded(len)).collect();
    (0..len).map(|p| pack_symbol(&words.iter().map(|w| w.digits()[p]).collect::<Vec<_>>())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeckendorf::floor_alpha;

    #[test]
    fn sample_file_round_trip() {
        let s = SampleSet::parse("# comment\n1 1\n2 4\n\n3 6\n").unwrap();
        assert_eq!(s.complete_upto(), 3);
        assert_eq!(SampleSet::parse(&s.to_text()).unwrap(), s);
        assert_eq!(
            SampleSet::parse("1 1\n1 2\n"),
            Err(InferenceError::Inconsistent { input: 1, first: 1, second: 2 })
        );
        assert!(matches!(SampleSet::parse("1\n"), Err(InferenceError::Parse { line: 1, .. })));
        assert_eq!(SampleSet::from_pairs([(0, 0), (1, 1), (3, 3)]).unwrap().complete_upto(), 1);
    }

    #[test]
    fn learns_floor_alpha() {
        let samples = SampleSet::from_pairs((0..1000).map(|n| (n, floor_alpha(n)))).unwrap();
        let dfa = guess_dfa(&samples, &GuessOptions::default()).unwrap();
        for n in 0..5000 {
            assert_eq!(dfa.function_value(&[n], 1, 2), Some(floor_alpha(n)), "n={n}");
        }
    }

    #[test]
    fn guess_is_deterministic() {
        let samples = SampleSet::from_pairs((0..600).map(|n| (n, 2 * n))).unwrap();
        let a = guess_dfa(&samples, &GuessOptions::default()).unwrap();
        let b = guess_dfa(&samples, &GuessOptions::default()).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.accepts(&pair_word(&[7, 14], 1)));
        assert!(!a.accepts(&pair_word(&[7, 15], 1)));
    }

    #[test]
    fn sparse_data_is_rejected() {
        let s = SampleSet::from_pairs([(1, 2)]).unwrap();
        assert_eq!(guess_dfa(&s, &GuessOptions::default()), Err(InferenceError::TooSparse));
        assert_eq!(guess_dfa(&SampleSet::new(), &GuessOptions::default()), Err(InferenceError::Empty));
    }

    #[test]
    fn budget_is_enforced() {
        let samples = SampleSet::from_pairs((0..1000).map(|n| (n, floor_alpha(n)))).unwrap();
        let tight = GuessOptions { max_pad: 2, state_budget: 2 };
        assert_eq!(guess_dfa(&samples, &tight), Err(InferenceError::Failure { budget: 2 }));
    }
}
