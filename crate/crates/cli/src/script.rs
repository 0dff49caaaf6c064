//! Proof scripts: `def`, `eval`, `reg`, `concat` and `alphabet` commands,
//! each ending in `:`. Formulas and patterns are double-quoted and may span
//! lines. `#` starts a comment that runs to the end of the line.

use std::fmt;

use thiserror::Error;
use zeckauto::automata::{regex_to_dfa, AutomatonError};
use zeckauto::base_relations::build_validity;
use zeckauto::logic::{self, LogicError};
use zeckauto::pipeline::renumerate;
use zeckauto::{Dfa, Registry};

use crate::store::Store;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Def { name: String, formula: String },
    Eval { name: String, formula: String },
    Reg { name: String, tracks: usize, pattern: String },
    Concat { out: String, left: String, right: String },
    Alphabet { out: String, source: String },
}

impl Command {
    pub fn name(&self) -> &str {
        match self {
            Command::Def { name, .. } | Command::Eval { name, .. } | Command::Reg { name, .. } => name,
            Command::Concat { out, .. } | Command::Alphabet { out, .. } => out,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    /// Script position of the first character inside the quotes, if the
    /// command has a quoted body.
    pub body: Option<(usize, usize)>,
    pub command: Command,
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: `{name}`: {error}")]
    Logic { line: usize, name: String, error: LogicError },
    #[error("line {line}: `{name}`: {error}")]
    Automaton { line: usize, name: String, error: AutomatonError },
    #[error("line {line}: unknown automaton `{name}`")]
    Unknown { line: usize, name: String },
    #[error(transparent)]
    Store(#[from] crate::store::StoreError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Colon,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn next_token(&mut self) -> Result<Option<(usize, usize, Tok)>, ScriptError> {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while !matches!(self.chars.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let Some(&c) = self.chars.peek() else { return Ok(None) };
        let tok = match c {
            ':' => {
                self.bump();
                Tok::Colon
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err(ScriptError::Syntax { line, col, msg: "unterminated string".into() }),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_alphanumeric() || c == '_' || c == '$' => {
                let mut s = String::new();
                while let Some(&ch) = self.chars.peek() {
                    if !(ch.is_alphanumeric() || ch == '_' || ch == '$') {
                        break;
                    }
                    s.push(ch);
                    self.bump();
                }
                Tok::Word(s)
            }
            other => return Err(ScriptError::Syntax { line, col, msg: format!("unexpected `{other}`") }),
        };
        Ok(Some((line, col, tok)))
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, usize, Tok)>, ScriptError> {
    let mut lx = Lexer { chars: src.chars().peekable(), line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(t) = lx.next_token()? {
        out.push(t);
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, usize, Tok)>,
    pos: usize,
    end: (usize, usize),
    body: Option<(usize, usize)>,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.0, t.1))
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ScriptError> {
        let (line, col) = self.here();
        Err(ScriptError::Syntax { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.2)
    }

    fn word(&mut self, what: &str) -> Result<String, ScriptError> {
        match self.peek() {
            Some(Tok::Word(w)) if !w.starts_with('$') => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    fn string(&mut self) -> Result<String, ScriptError> {
        match self.toks.get(self.pos) {
            Some((line, col, Tok::Str(s))) => {
                self.body = Some((*line, col + 1));
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected a quoted string"),
        }
    }

    fn colon(&mut self) -> Result<(), ScriptError> {
        match self.peek() {
            Some(Tok::Colon) => {
                self.pos += 1;
                Ok(())
            }
            _ => self.error("expected `:`"),
        }
    }

    fn numeration(&mut self) -> Result<(), ScriptError> {
        match self.word("`msd_fib`")?.as_str() {
            "msd_fib" => Ok(()),
            other => {
                self.pos -= 1;
                self.error(format!("unsupported numeration system `{other}`"))
            }
        }
    }

    fn command(&mut self) -> Result<Located, ScriptError> {
        let line = self.here().0;
        self.body = None;
        let keyword = self.word("a command")?;
        let command = match keyword.as_str() {
            "def" | "eval" => {
                let name = self.word("a name")?;
                let formula = self.string()?;
                if keyword == "def" {
                    Command::Def { name, formula }
                } else {
                    Command::Eval { name, formula }
                }
            }
            "reg" => {
                let name = self.word("a name")?;
                let mut tracks = 0;
                while matches!(self.peek(), Some(Tok::Word(_))) {
                    self.numeration()?;
                    tracks += 1;
                }
                if tracks == 0 {
                    return self.error("expected `msd_fib`");
                }
                Command::Reg { name, tracks, pattern: self.string()? }
            }
            "concat" => {
                let out = self.word("a name")?;
                let left = self.word("a name")?;
                let right = self.word("a name")?;
                Command::Concat { out, left, right }
            }
            "alphabet" => {
                let out = self.word("a name")?;
                self.numeration()?;
                let source = match self.peek() {
                    Some(Tok::Word(w)) if w.len() > 1 && w.starts_with('$') => w[1..].to_owned(),
                    _ => return self.error("expected `$name`"),
                };
                self.pos += 1;
                Command::Alphabet { out, source }
            }
            other => {
                self.pos -= 1;
                return self.error(format!("unknown command `{other}`"));
            }
        };
        self.colon()?;
        Ok(Located { line, body: self.body, command })
    }
}

pub fn parse_script(src: &str) -> Result<Vec<Located>, ScriptError> {
    let lines = src.lines().count().max(1);
    let mut p = Parser { toks: tokenize(src)?, pos: 0, end: (lines, 1), body: None };
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.command()?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Defined { name: String, states: usize },
    Evaluated { name: String, value: bool },
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Defined { name, states } => write!(f, "{name}: {states} states"),
            Outcome::Evaluated { name, value } => write!(f, "{name}: {}", if *value { "TRUE" } else { "FALSE" }),
        }
    }
}

/// A registry plus an optional store that receives every definition.
pub struct Session {
    pub registry: Registry,
    store: Option<Store>,
}

impl Session {
    pub fn new(registry: Registry, store: Option<Store>) -> Self {
        Session { registry, store }
    }

    fn lookup(&self, line: usize, name: &str) -> Result<Dfa, ScriptError> {
        self.registry.get(name).cloned().ok_or_else(|| ScriptError::Unknown { line, name: name.to_owned() })
    }

    fn register(&mut self, line: usize, name: &str, dfa: Dfa) -> Result<Outcome, ScriptError> {
        let states = dfa.live_state_count();
        self.registry
            .define(name, dfa.clone())
            .map_err(|error| ScriptError::Logic { line, name: name.to_owned(), error })?;
        if let Some(store) = &self.store {
            store.save(name, &dfa)?;
        }
        Ok(Outcome::Defined { name: name.to_owned(), states })
    }

    pub fn execute(&mut self, cmd: &Located) -> Result<Outcome, ScriptError> {
        let line = cmd.line;
        let name = cmd.command.name().to_owned();
        let body = cmd.body;
        let logic_err = |error| match (error, body) {
            // report formula syntax errors at their place in the script
            (LogicError::Syntax { line: l, col: c, msg }, Some((bl, bc))) => ScriptError::Syntax {
                line: bl + l - 1,
                col: if l == 1 { bc + c - 1 } else { c },
                msg,
            },
            (error, _) => ScriptError::Logic { line, name: name.clone(), error },
        };
        let auto_err = |error| ScriptError::Automaton { line, name: name.clone(), error };
        match &cmd.command {
            Command::Def { formula, .. } => {
                let dfa = logic::compile_str(formula, &self.registry).map_err(logic_err)?;
                self.register(line, &name, dfa)
            }
            Command::Eval { formula, .. } => {
                let value = logic::eval_str(formula, &self.registry).map_err(logic_err)?;
                Ok(Outcome::Evaluated { name, value })
            }
            Command::Reg { tracks, pattern, .. } => {
                let dfa = regex_to_dfa(pattern, *tracks)
                    .and_then(|d| d.intersect(&build_validity(*tracks)))
                    .map_err(auto_err)?;
                self.register(line, &name, dfa)
            }
            Command::Concat { left, right, .. } => {
                let (a, b) = (self.lookup(line, left)?, self.lookup(line, right)?);
                let dfa = Dfa::concat(&a, &b).map_err(auto_err)?;
                self.register(line, &name, dfa)
            }
            Command::Alphabet { source, .. } => {
                let dfa = renumerate(&self.lookup(line, source)?);
                self.register(line, &name, dfa)
            }
        }
    }

    /// Execute every command, calling `report` after each. Stops at the
    /// first error.
    pub fn run(&mut self, src: &str, mut report: impl FnMut(&Outcome)) -> Result<Vec<Outcome>, ScriptError> {
        let mut out = Vec::new();
        for cmd in parse_script(src)? {
            let o = self.execute(&cmd)?;
            report(&o);
            out.push(o);
        }
        Ok(out)
    }
}
