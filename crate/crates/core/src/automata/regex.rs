//! Regular expressions over tuple symbols, compiled by Thompson construction.
//!
//! Literals are `[b1,...,bk]`, or a bare `0`/`1` on one track. Operators are
//! alternation `|`, juxtaposition, Kleene star `*`, and parentheses.
//! Whitespace is ignored.

use super::{AutomatonError, Dfa, Nfa, Result, State, Symbol};

#[derive(Debug, Clone)]
enum Re {
    Empty,
    Lit(Symbol),
    Cat(Box<Re>, Box<Re>),
    Alt(Box<Re>, Box<Re>),
    Star(Box<Re>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    tracks: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(AutomatonError::Regex { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn alt(&mut self) -> Result<Re> {
        let mut left = self.cat()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let right = self.cat()?;
            left = Re::Alt(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn cat(&mut self) -> Result<Re> {
        let mut acc = Re::Empty;
        while let Some(c) = self.peek() {
            if c == b'|' || c == b')' {
                break;
            }
            let item = self.star()?;
            acc = match acc {
                Re::Empty => item,
                prev => Re::Cat(Box::new(prev), Box::new(item)),
            };
        }
        Ok(acc)
    }

    fn star(&mut self) -> Result<Re> {
        let mut atom = self.atom()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            atom = Re::Star(Box::new(atom));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Re> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.alt()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut bits = Vec::new();
                loop {
                    match self.peek() {
                        Some(c @ (b'0' | b'1')) => {
                            bits.push(c - b'0');
                            self.pos += 1;
                        }
                        _ => return self.err("expected 0 or 1 in tuple literal"),
                    }
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected ',' or ']'"),
                    }
                }
                if bits.len() != self.tracks {
                    return self.err(format!(
                        "tuple has {} components, expected {}",
                        bits.len(),
                        self.tracks
                    ));
                }
                Ok(Re::Lit(super::pack_symbol(&bits)))
            }
            Some(c @ (b'0' | b'1')) if self.tracks == 1 => {
                self.pos += 1;
                Ok(Re::Lit(Symbol::from(c - b'0')))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of pattern"),
        }
    }
}

/// Returns (entry, exit) of the fragment.
fn build(nfa: &mut Nfa, re: &Re) -> (State, State) {
    match re {
        Re::Empty => {
            let a = nfa.add_state();
            (a, a)
        }
        Re::Lit(s) => {
            let a = nfa.add_state();
            let b = nfa.add_state();
            nfa.add_transition(a, *s, b);
            (a, b)
        }
        Re::Cat(l, r) => {
            let (a, b) = build(nfa, l);
            let (c, d) = build(nfa, r);
            nfa.add_epsilon(b, c);
            (a, d)
        }
        Re::Alt(l, r) => {
            let s = nfa.add_state();
            let (a, b) = build(nfa, l);
            let (c, d) = build(nfa, r);
            let e = nfa.add_state();
            nfa.add_epsilon(s, a);
            nfa.add_epsilon(s, c);
            nfa.add_epsilon(b, e);
            nfa.add_epsilon(d, e);
            (s, e)
        }
        Re::Star(inner) => {
            let s = nfa.add_state();
            let (a, b) = build(nfa, inner);
            nfa.add_epsilon(s, a);
            nfa.add_epsilon(b, s);
            (s, s)
        }
    }
}

/// Minimal DFA for the pattern's language over `tracks` tracks.
pub fn regex_to_dfa(pattern: &str, tracks: usize) -> Result<Dfa> {
    let mut p = Parser { src: pattern.as_bytes(), pos: 0, tracks };
    let re = p.alt()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    let mut nfa = Nfa::new(tracks);
    let (entry, exit) = build(&mut nfa, &re);
    nfa.set_initial(entry);
    nfa.set_final(exit, true);
    Ok(nfa.determinize_minimize())
}
