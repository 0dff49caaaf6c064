//! First-order queries over Zeckendorf-represented naturals.

pub mod ast;
mod compile;
mod parser;

use std::collections::BTreeMap;

use thiserror::Error;

pub use ast::{CmpOp, Formula, Quantifier, Term};
pub use parser::parse;

use crate::automata::{AutomatonError, Dfa};
use crate::base_relations::build_validity;

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unsupported numeration system `{0}` (only msd_fib is available)")]
    UnsupportedNumeration(String),
    #[error("unknown automaton `{0}`")]
    UnknownAutomaton(String),
    #[error("`{name}` takes {expected} arguments, got {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("multiplication and division need a constant operand: `{0}`")]
    NonConstantOperand(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("sentence has free variables: {}", .0.join(", "))]
    FreeVariables(Vec<String>),
    #[error("variable `{0}` is bound twice")]
    Rebound(String),
    #[error("base relation `{0}` is not available yet")]
    MissingBaseRelation(&'static str),
    #[error("`{0}` is already defined with a different automaton")]
    DuplicateName(String),
    #[error("`{0}` is a reserved base relation")]
    ReservedName(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

pub type Result<T, E = LogicError> = std::result::Result<T, E>;

/// Names of the certified base relations. Validity automata are reserved as
/// `valid_<k>`.
pub const RESERVED: [&str; 6] = ["lt", "succ", "add", "shift", "phin", "phi2n"];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
        || name.strip_prefix("valid_").is_some_and(|k| !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()))
}

#[derive(Debug, Clone)]
struct Entry {
    raw: Dfa,
    /// Valid and leading-zero closed; this is what calls see.
    closed: Dfa,
}

/// Named automata available to `$name(...)` calls.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, Entry>,
}

fn close(dfa: &Dfa) -> Dfa {
    let valid = build_validity(dfa.tracks());
    dfa.normalize_leading_zeros().intersect(&valid).expect("validity has matching track count")
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Install a base relation. Reserved names are allowed here.
    pub fn insert_base(&mut self, name: &str, dfa: Dfa) {
        let closed = close(&dfa);
        self.entries.insert(name.to_owned(), Entry { raw: dfa, closed });
    }

    /// Register a user definition. Re-registering a name is accepted only
    /// when the new automaton has exactly the same language.
    pub fn define(&mut self, name: &str, dfa: Dfa) -> Result<()> {
        if let Some(old) = self.entries.get(name) {
            let same = old.raw.tracks() == dfa.tracks() && old.raw.equivalent(&dfa)?;
            if same {
                return Ok(());
            }
            return Err(if is_reserved(name) {
                LogicError::ReservedName(name.to_owned())
            } else {
                LogicError::DuplicateName(name.to_owned())
            });
        }
        if is_reserved(name) {
            return Err(LogicError::ReservedName(name.to_owned()));
        }
        let closed = close(&dfa);
        self.entries.insert(name.to_owned(), Entry { raw: dfa, closed });
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Dfa> {
        self.entries.get(name).map(|e| &e.raw)
    }

    pub(crate) fn closed(&self, name: &str) -> Option<&Dfa> {
        self.entries.get(name).map(|e| &e.closed)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Compile to an automaton over the free variables of `f`, tracks in
/// alphabetical order of variable name.
pub fn compile(f: &Formula, reg: &Registry) -> Result<Dfa> {
    compile::Compiler::new(reg).formula(f)
}

pub fn compile_str(source: &str, reg: &Registry) -> Result<Dfa> {
    compile(&parse(source)?, reg)
}

pub fn eval_sentence(f: &Formula, reg: &Registry) -> Result<bool> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(LogicError::FreeVariables(free.into_iter().collect()));
    }
    Ok(compile(f, reg)?.accepts(&[]))
}

pub fn eval_str(source: &str, reg: &Registry) -> Result<bool> {
    eval_sentence(&parse(source)?, reg)
}

/// Compile `f` and register it under `name`.
pub fn define(reg: &mut Registry, name: &str, f: &Formula) -> Result<Dfa> {
    let dfa = compile(f, reg)?;
    reg.define(name, dfa.clone())?;
    Ok(dfa)
}

#[cfg(test)]
mod tests;
