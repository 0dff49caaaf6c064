//! Library side of the `zeckauto` command: script execution, the automaton
//! store, and the acceptance checks behind `selftest`.

pub mod acceptance;
pub mod script;
pub mod store;

use zeckauto::inference::{guess_dfa, GuessOptions, InferenceError, SampleSet};
use zeckauto::interspersion::{self, ArraySpec, InterspersionError};
use zeckauto::pipeline::{self, PipelineError, VerificationReport};
use zeckauto::{BaseRelations, CertBounds, CertificationError, Dfa, Registry};

/// Base relations, certified with default bounds or with every exhaustive
/// bound capped at `limit`.
pub fn base_registry(limit: Option<u64>) -> Result<Registry, CertificationError> {
    Ok(match limit {
        None => BaseRelations::shared()?.registry(),
        Some(l) => BaseRelations::build(&CertBounds::capped(l))?.registry(),
    })
}

/// The top-left `rows x cols` corner of a built-in array, as an aligned
/// grid or as TSV.
pub fn array_text(name: &str, rows: usize, cols: usize, tsv: bool) -> Result<String, InterspersionError> {
    let table = interspersion::generate(&ArraySpec::builtin(name)?, rows, cols);
    Ok(if tsv { table.to_tsv() } else { table.to_string() })
}

pub fn guess_from_text(text: &str, max_pad: usize, state_budget: usize) -> Result<Dfa, InferenceError> {
    guess_dfa(&SampleSet::parse(text)?, &GuessOptions { max_pad, state_budget })
}

/// Rows checked against the generator after a successful proof.
pub const ORACLE_ROWS: usize = 1000;

pub struct Proof {
    pub report: VerificationReport,
    /// First `(row, column)` where the automata disagree with the
    /// generator, if the proof got far enough to check.
    pub oracle_mismatch: Option<(u64, usize)>,
}

impl Proof {
    pub fn passed(&self) -> bool {
        self.report.fully_verified()
            && self.report.theorems.iter().all(|(_, ok)| *ok)
            && self.oracle_mismatch.is_none()
    }
}

/// Seven steps, then the theorem suite and the oracle comparison when the
/// steps pass.
pub fn prove(spec: &ArraySpec, samples: Option<usize>, base: &Registry) -> Result<Proof, PipelineError> {
    let samples = samples.unwrap_or_else(|| pipeline::default_samples(&spec.name));
    let mut report = pipeline::seven_step_verify(spec, samples, base)?;
    let mut oracle_mismatch = None;
    if report.fully_verified() {
        pipeline::theorem_suite(&mut report)?;
        oracle_mismatch = pipeline::oracle_mismatch(&report, spec, ORACLE_ROWS);
    }
    Ok(Proof { report, oracle_mismatch })
}
