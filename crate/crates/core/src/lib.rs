//! Automata over Zeckendorf representations: a first-order decision
//! procedure, certified base relations, and tooling for Stolarsky
//! interspersions (generation, guessing, and proof of column automata).

pub mod automata;
pub mod base_relations;
pub mod inference;
pub mod interspersion;
pub mod logic;
pub mod pipeline;
pub mod zeckendorf;

pub use automata::{AutomatonError, BoolOp, Dfa, Nfa};
pub use base_relations::{BaseRelations, CertBounds, CertificationError, CertifiedRelation};
pub use interspersion::{ArraySpec, FKind, SecondColumn, Table};
pub use inference::{guess_dfa, GuessOptions, InferenceError, SampleSet};
pub use logic::{Formula, LogicError, Registry};
pub use pipeline::{seven_step_verify, theorem_suite, PipelineError, Step, VerificationReport};
pub use zeckendorf::{decode, encode, floor_alpha, ZeckWord};
