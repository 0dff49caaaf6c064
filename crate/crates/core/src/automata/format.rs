//! Line-oriented text serialization and DOT export.
//!
//! ```text
//! tracks <k>
//! states <n>
//! initial <i>
//! final <i ...>
//! t <from> <b1b2...bk> <to>
//! ```
//! Transitions are listed in ascending `(from, symbol)` order.

use std::fmt::Write;

use super::{symbol_bit, AutomatonError, Dfa, Result, State, Symbol};

fn symbol_string(s: Symbol, k: usize) -> String {
    (0..k).map(|t| char::from(b'0' + symbol_bit(s, t, k))).collect()
}

impl Dfa {
    pub fn to_text(&self) -> String {
        let k = self.tracks;
        let mut out = String::new();
        let finals: Vec<String> = self.final_states().map(|q| q.to_string()).collect();
        writeln!(out, "tracks {k}").unwrap();
        writeln!(out, "states {}", self.num_states()).unwrap();
        writeln!(out, "initial {}", self.initial).unwrap();
        if finals.is_empty() {
            writeln!(out, "final").unwrap();
        } else {
            writeln!(out, "final {}", finals.join(" ")).unwrap();
        }
        for q in 0..self.num_states() as State {
            for s in 0..self.symbol_count() as Symbol {
                writeln!(out, "t {q} {} {}", symbol_string(s, k), self.next(q, s)).unwrap();
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Dfa> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut header = |key: &str| -> Result<(usize, Vec<String>)> {
            let (no, line) = lines
                .next()
                .ok_or(AutomatonError::Parse { line: 0, msg: format!("missing `{key}` line") })?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(key) {
                return Err(AutomatonError::Parse { line: no + 1, msg: format!("expected `{key}`") });
            }
            Ok((no + 1, parts.map(str::to_owned).collect()))
        };
        let number = |line: usize, s: &str| -> Result<usize> {
            s.parse().map_err(|_| AutomatonError::Parse { line, msg: format!("bad number `{s}`") })
        };
        let single = |(line, parts): (usize, Vec<String>)| -> Result<usize> {
            match parts.as_slice() {
                [v] => number(line, v),
                _ => Err(AutomatonError::Parse { line, msg: "expected one value".into() }),
            }
        };
        let tracks = single(header("tracks")?)?;
        if tracks > 20 {
            return Err(AutomatonError::Parse { line: 1, msg: "too many tracks".into() });
        }
        let states = single(header("states")?)?;
        let initial = single(header("initial")?)?;
        let (fline, fparts) = header("final")?;
        let mut finals = vec![false; states];
        for f in &fparts {
            let q = number(fline, f)?;
            if q >= states {
                return Err(AutomatonError::Parse { line: fline, msg: format!("final state {q} out of range") });
            }
            finals[q] = true;
        }
        let sigma = 1usize << tracks;
        let mut delta = vec![u32::MAX; states * sigma];
        for (no, line) in lines {
            let no = no + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            let (from, bits, to) = match (parts.as_slice(), tracks) {
                (["t", from, to], 0) => (*from, "", *to),
                (["t", from, bits, to], _) => (*from, *bits, *to),
                _ => return Err(AutomatonError::Parse { line: no, msg: "malformed transition".into() }),
            };
            if bits.len() != tracks || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(AutomatonError::Parse { line: no, msg: format!("bad symbol `{bits}`") });
            }
            let s = bits.bytes().fold(0usize, |acc, b| (acc << 1) | usize::from(b - b'0'));
            let (from, to) = (number(no, from)?, number(no, to)?);
            if from >= states || to >= states {
                return Err(AutomatonError::Parse { line: no, msg: "state out of range".into() });
            }
            delta[from * sigma + s] = to as State;
        }
        if delta.contains(&u32::MAX) {
            return Err(AutomatonError::Malformed("transition function is not total".into()));
        }
        Dfa::from_parts(tracks, initial as State, finals, delta)
    }

    /// Graphviz rendering. Parallel edges are merged into one labeled edge;
    /// the dead state is omitted.
    pub fn to_dot(&self, name: &str) -> String {
        let k = self.tracks;
        let live = self.live_states();
        let mut out = String::new();
        writeln!(out, "digraph \"{name}\" {{").unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  start [shape=point];").unwrap();
        for (q, _) in live.iter().enumerate().filter(|(_, l)| **l) {
            let shape = if self.finals[q] { "doublecircle" } else { "circle" };
            writeln!(out, "  {q} [shape={shape}];").unwrap();
        }
        if live[self.initial as usize] {
            writeln!(out, "  start -> {};", self.initial).unwrap();
        }
        for q in 0..self.num_states() as State {
            if !live[q as usize] {
                continue;
            }
            let mut targets: Vec<(State, Vec<String>)> = Vec::new();
            for s in 0..self.symbol_count() as Symbol {
                let r = self.next(q, s);
                if !live[r as usize] {
                    continue;
                }
                let label = if k == 1 { symbol_string(s, k) } else { format!("[{}]", symbol_string(s, k)) };
                match targets.iter_mut().find(|(t, _)| *t == r) {
                    Some((_, labels)) => labels.push(label),
                    None => targets.push((r, vec![label])),
                }
            }
            for (r, labels) in targets {
                writeln!(out, "  {q} -> {r} [label=\"{}\"];", labels.join(",")).unwrap();
            }
        }
        writeln!(out, "}}").unwrap();
        out
    }
}
