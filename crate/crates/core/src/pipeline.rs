//! The seven-step method: generate column 1, guess an automaton for it,
//! then prove the guess correct by induction on the mex construction.
//! Also the per-array theorem suites.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::automata::Dfa;
use crate::base_relations::build_validity;
use crate::inference::{guess_dfa, GuessOptions, InferenceError, SampleSet};
use crate::interspersion::{self, ArraySpec, FKind, SecondColumn};
use crate::logic::{self, LogicError, Registry};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Automaton(#[from] crate::automata::AutomatonError),
    #[error("array `{0}` is not fully verified")]
    NotVerified(String),
}

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step {
    Data,
    Guess,
    Functionality,
    Monotonicity,
    Columns,
    SetS,
    MexInduction,
}

impl Step {
    pub const ALL: [Step; 7] = [
        Step::Data,
        Step::Guess,
        Step::Functionality,
        Step::Monotonicity,
        Step::Columns,
        Step::SetS,
        Step::MexInduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Step::Data => "data",
            Step::Guess => "guess",
            Step::Functionality => "functionality",
            Step::Monotonicity => "monotonicity",
            Step::Columns => "columns-2-3",
            Step::SetS => "set-S",
            Step::MexInduction => "mex-induction",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub step: Step,
    pub passed: bool,
    pub detail: String,
}

/// Automaton names used for one array. The built-in arrays use the names
/// from the published scripts so that theorem sentences can refer to them.
#[derive(Debug, Clone)]
pub struct ColumnNames {
    pub col1: String,
    pub col2: String,
    pub col3: String,
    /// Name of the step 4 sentence.
    pub increasing: String,
    /// Name of the step 7 sentence.
    pub mex_check: String,
}

impl ColumnNames {
    pub fn for_array(name: &str) -> ColumnNames {
        let known = match name {
            "wythoff" => Some(("w1", "w2", "w3", "increasing_w", "chk")),
            "stolarsky" => Some(("s1", "s2", "s3", "increasing_s", "chks2")),
            "dual" => Some(("d1", "d2", "d3", "increasing_d", "chkd2")),
            "efc" => Some(("efc1", "efc2", "efc3", "increasing_efc", "chk_efc")),
            "esc" => Some(("esc1", "esc2", "esc3", "increasing_esc", "chk_esc")),
            "k100" => Some(("k100", "k1002", "k1003", "increasing_k100", "chk_k100")),
            _ => None,
        };
        match known {
            Some((a, b, c, inc, chk)) => ColumnNames {
                col1: a.into(),
                col2: b.into(),
                col3: c.into(),
                increasing: inc.into(),
                mex_check: chk.into(),
            },
            None => ColumnNames {
                col1: format!("{name}_c1"),
                col2: format!("{name}_c2"),
                col3: format!("{name}_c3"),
                increasing: format!("increasing_{name}"),
                mex_check: format!("chk_{name}"),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub array: String,
    pub names: ColumnNames,
    pub steps: Vec<StepResult>,
    /// Live states of the col1, col2, col3 automata, when built.
    pub states: [Option<usize>; 3],
    /// Every sentence evaluated by steps 3, 4 and 7, with its value.
    pub sentences: Vec<(String, bool)>,
    pub theorems: Vec<(String, bool)>,
    pub notes: Vec<String>,
    /// Base relations plus every automaton defined while verifying.
    pub registry: Registry,
}

impl VerificationReport {
    pub fn fully_verified(&self) -> bool {
        self.steps.len() == Step::ALL.len() && self.steps.iter().all(|s| s.passed)
    }

    pub fn step(&self, step: Step) -> Option<&StepResult> {
        self.steps.iter().find(|s| s.step == step)
    }

    pub fn column(&self, j: usize) -> Option<&Dfa> {
        let name = match j {
            1 => &self.names.col1,
            2 => &self.names.col2,
            3 => &self.names.col3,
            _ => return None,
        };
        self.registry.get(name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |b: bool| if b { "PASS" } else { "FAIL" };
        for s in &self.steps {
            writeln!(f, "{}.{} {} {}", self.array, s.step.name(), verdict(s.passed), s.detail)?;
        }
        for (name, ok) in &self.theorems {
            writeln!(f, "{}.theorem.{} {} {}", self.array, name, verdict(*ok), if *ok { "TRUE" } else { "FALSE" })?;
        }
        let status = if self.fully_verified() { "fully-verified" } else { "not verified" };
        writeln!(f, "{} {} {}", self.array, verdict(self.fully_verified()), status)?;
        for n in &self.notes {
            writeln!(f, "# {n}")?;
        }
        Ok(())
    }
}

/// Number of column-1 terms used to guess each built-in array.
pub fn default_samples(name: &str) -> usize {
    match name {
        "wythoff" => 500,
        "esc" => 3000,
        "k100" => 20_000,
        _ => 1000,
    }
}

/// Intersect with validity, close under leading zeros, minimize.
pub fn renumerate(a: &Dfa) -> Dfa {
    let valid = build_validity(a.tracks());
    let labels = a.labels().map(<[String]>::to_vec);
    let out = a.intersect(&valid).expect("validity matches track count").normalize_leading_zeros();
    match labels {
        Some(l) => out.with_labels(l),
        None => out,
    }
}

/// Definition of column 2 in terms of column 1, for the array's rule.
fn second_column_formula(spec: &ArraySpec, c1: &str) -> (Vec<(String, String)>, String) {
    let mut helpers = Vec::new();
    let body = match (spec.name.as_str(), &spec.rule) {
        ("efc", _) => format!(
            "?msd_fib (i=1&z=2)| (i>=2 & Ex,y,k,r ${c1}(i,x) & $phin(x,y) & i=2*k+r & r<=1 & z=y+(1-r))"
        ),
        ("esc", _) => format!("?msd_fib Ex,y,r ${c1}(i,x) & $phin(x,y) & i=r+2*(i/2) & z=y+r"),
        ("k100", _) => {
            helpers.push((
                "is1mod3".to_owned(),
                "?msd_fib (z=1 & Ek n=3*k+1)|(z=0 & ~Ek n=3*k+1)".to_owned(),
            ));
            format!("?msd_fib Ex,y,r ${c1}(i,x) & $phin(x,y) & $is1mod3(i,r) & z=y+r")
        }
        (_, SecondColumn::F(kind)) => {
            let f = match kind {
                FKind::Wythoff => "?msd_fib Ey $phin(n+1,y) & z+1=y",
                FKind::Stolarsky => "?msd_fib Ey $phin(2*n,y) & z=(y+1)/2",
                FKind::Dual => "?msd_fib Ex $phin(n-1,x) & z=x+2",
            };
            let fname = match kind {
                FKind::Wythoff => "fw",
                FKind::Stolarsky => "fs",
                FKind::Dual => "fd",
            };
            helpers.push((fname.to_owned(), f.to_owned()));
            format!("?msd_fib Ex ${c1}(i,x) & ${fname}(x,z)")
        }
        (_, SecondColumn::Delta { preperiod, period }) => {
            format!("?msd_fib Ex,y ${c1}(i,x) & $phin(x,y) & ({})", delta_cases(preperiod, period))
        }
    };
    (helpers, body)
}

/// `z = y + delta_i` as a disjunction over the preperiod positions and the
/// residue classes of the period.
fn delta_cases(preperiod: &[u8], period: &[u8]) -> String {
    let mut cases: Vec<String> =
        preperiod.iter().enumerate().map(|(k, d)| format!("(i={} & z=y+{d})", k + 1)).collect();
    let offset = preperiod.len() + 1;
    let p = period.len();
    for (j, d) in period.iter().enumerate() {
        cases.push(format!("((Ek i={p}*k+{}) & z=y+{d})", offset + j));
    }
    cases.join(" | ")
}

struct Run {
    reg: Registry,
    steps: Vec<StepResult>,
    sentences: Vec<(String, bool)>,
}

impl Run {
    fn def(&mut self, name: &str, src: &str) -> Result<Dfa> {
        Ok(logic::define(&mut self.reg, name, &logic::parse(src)?)?)
    }

    fn eval(&self, src: &str) -> Result<bool> {
        Ok(logic::eval_str(src, &self.reg)?)
    }

    /// Record a step; returns whether it passed.
    fn record(&mut self, step: Step, passed: bool, detail: impl Into<String>) -> bool {
        self.steps.push(StepResult { step, passed, detail: detail.into() });
        passed
    }

    /// Evaluate named sentences, all of which must hold.
    fn evals(&mut self, step: Step, sentences: &[(String, String)]) -> Result<bool> {
        let mut failed = Vec::new();
        for (name, src) in sentences {
            let value = self.eval(src)?;
            if !value {
                failed.push(name.as_str());
            }
            self.sentences.push((name.clone(), value));
        }
        let names: Vec<&str> = sentences.iter().map(|(n, _)| n.as_str()).collect();
        let detail =
            if failed.is_empty() { format!("{} TRUE", names.join(" ")) } else { format!("FALSE: {}", failed.join(" ")) };
        Ok(self.record(step, failed.is_empty(), detail))
    }
}

const MEX_NOTE: &str = "step 7 excludes S together with the column-1 values of earlier rows; \
entries of rows j >= i beyond column 1 exceed A(j,1) >= A(i,1), so they cannot change the least excluded value";

/// Run all seven steps for `spec`, guessing from `samples` column-1 terms.
/// `base` must hold the certified base relations.
pub fn seven_step_verify(spec: &ArraySpec, samples: usize, base: &Registry) -> Result<VerificationReport> {
    let column = interspersion::first_column(spec, samples);
    let data = SampleSet::from_pairs(
        std::iter::once((0, 0)).chain(column.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v))),
    )?;
    let guess = guess_dfa(&data, &GuessOptions::default())?;
    let steps = vec![
        StepResult { step: Step::Data, passed: true, detail: format!("{samples} terms of column 1") },
        StepResult {
            step: Step::Guess,
            passed: true,
            detail: format!("{} has {} states", ColumnNames::for_array(&spec.name).col1, guess.live_state_count()),
        },
    ];
    prove_steps(spec, guess, steps, base)
}

/// Steps 3 to 7 for a column-1 automaton obtained elsewhere (a 2-track
/// relation `(n, A(n,1))`).
pub fn verify_column(spec: &ArraySpec, col1: Dfa, base: &Registry) -> Result<VerificationReport> {
    let states = col1.live_state_count();
    let steps = vec![
        StepResult { step: Step::Data, passed: true, detail: "supplied".to_owned() },
        StepResult { step: Step::Guess, passed: true, detail: format!("supplied automaton has {states} states") },
    ];
    prove_steps(spec, col1, steps, base)
}

fn prove_steps(spec: &ArraySpec, col1: Dfa, steps: Vec<StepResult>, base: &Registry) -> Result<VerificationReport> {
    let names = ColumnNames::for_array(&spec.name);
    let (c1, c2, c3) = (names.col1.clone(), names.col2.clone(), names.col3.clone());
    let mut run = Run { reg: base.clone(), steps, sentences: Vec::new() };
    let mut states = [Some(col1.live_state_count()), None, None];
    let report = |run: Run, states, notes| VerificationReport {
        array: spec.name.clone(),
        names: names.clone(),
        steps: run.steps,
        states,
        sentences: run.sentences,
        theorems: Vec::new(),
        notes,
        registry: run.reg,
    };
    run.reg.define(&c1, col1.with_labels(["n", "z"]))?;

    // 3. functionality
    let func = [
        (format!("{c1}_func1"), format!("?msd_fib An (n>=1) => Ex ${c1}(n,x)")),
        (format!("{c1}_func2"), format!("?msd_fib ~En,x,y n>=1 & x!=y & ${c1}(n,x) & ${c1}(n,y)")),
    ];
    if !run.evals(Step::Functionality, &func)? {
        return Ok(report(run, states, Vec::new()));
    }

    // 4. monotonicity
    let inc = [(
        names.increasing.clone(),
        format!("?msd_fib An,x,y (n>=1 & ${c1}(n,x) & ${c1}(n+1,y)) => x<y"),
    )];
    if !run.evals(Step::Monotonicity, &inc)? {
        return Ok(report(run, states, Vec::new()));
    }

    // 5. columns 2 and 3
    let (helpers, col2_src) = second_column_formula(spec, &c1);
    for (name, src) in &helpers {
        run.def(name, src)?;
    }
    let d2 = run.def(&c2, &col2_src)?;
    let d3 = run.def(&c3, &format!("?msd_fib Ex,y ${c1}(i,x) & ${c2}(i,y) & z=x+y"))?;
    states[1] = Some(d2.live_state_count());
    states[2] = Some(d3.live_state_count());
    let col_ok = run.eval(&format!("?msd_fib Ai (i>=1) => (Ex ${c2}(i,x)) & (Ex ${c3}(i,x))"))?;
    let detail = format!("{c2} has {} states, {c3} has {} states", states[1].unwrap(), states[2].unwrap());
    if !run.record(Step::Columns, col_ok, detail) {
        return Ok(report(run, states, Vec::new()));
    }

    // 6. S = col2 values, plus col3 values followed by any number of zeros
    let g3 = run.def(&format!("{}_g3", spec.name), &format!("?msd_fib Ei i>=1 & ${c3}(i,n)"))?;
    let zeros = crate::automata::regex_to_dfa("0*", 1)?;
    let cols3 = renumerate(&Dfa::concat(&g3, &zeros)?);
    let cols3_name = format!("{}_cols3", spec.name);
    run.reg.define(&cols3_name, cols3)?;
    let s_name = format!("{}_cols2", spec.name);
    let s = run.def(&s_name, &format!("?msd_fib (Em m>=1 & ${c2}(m,n))|${cols3_name}(n)"))?;
    let s_ok = !s.is_empty_language();
    run.record(Step::SetS, s_ok, format!("{s_name} has {} states", s.live_state_count()));

    // 7. mex induction
    let chk1 = format!("chk_{}1", spec.name);
    let mex = format!("mex_{}", spec.name);
    run.def(&chk1, &format!("?msd_fib (~${s_name}(n)) & Aj,x (j<i & ${c1}(j,x)) => n!=x"))?;
    run.def(&mex, &format!("?msd_fib ${chk1}(i,x) & Ay (y>=1 & ${chk1}(i,y)) => y>=x"))?;
    let chk = [(names.mex_check.clone(), format!("?msd_fib Ai,x (i>=2 & ${mex}(i,x)) => ${c1}(i,x)"))];
    run.evals(Step::MexInduction, &chk)?;
    Ok(report(run, states, vec![MEX_NOTE.to_owned()]))
}

/// `(name, definitions, sentence)`; definitions are registered first.
pub type TheoremSentence = (&'static str, Vec<(&'static str, &'static str)>, &'static str);

/// Sentences of the theorem suite for a built-in array.
pub fn theorem_sentences(array: &str) -> Vec<TheoremSentence> {
    match array {
        "wythoff" => vec![
            (
                "check_m1",
                vec![
                    ("morrison1", "?msd_fib Ey $phin(n,y) & $phin(y,z)"),
                    ("morrison2", "?msd_fib Ey $phin(n,y) & $phi2n(y,z)"),
                ],
                "?msd_fib An,z1,z2 (n>=1 & $morrison1(n,z1) & $morrison2(n,z2)) => $fw(z1,z2)",
            ),
            ("prop5a", vec![], "?msd_fib Ai,x,y (i>=1 & $w1(i,x) & $phi2n(i,y)) => x+1=y"),
            ("prop5b", vec![], "?msd_fib Ai,x,y (i>=1 & $w2(i,x) & $phin(i,y)) => x+1=2*y+i"),
            (
                "checkeq",
                vec![
                    ("left", "?msd_fib Ei,x,y $w1(i,x) & $w2(i,y) & z+x=y"),
                    ("right", "?msd_fib (Ej j>=1 & $w1(j,n)) | $w3e(n)"),
                ],
                "?msd_fib An (n>=1) => ($left(n) <=> $right(n))",
            ),
        ],
        "stolarsky" => vec![
            ("thms1", vec![], "?msd_fib An,x (n>=1) => ($s1(n,x) <=> Ey,z $phin(2*n-1,y) & z=y/2 & x=z+n)"),
            ("thms2", vec![], "?msd_fib An,x (n>=1) => ($s2(n,x) <=> Ey $phin(2*n-1,y) & x=y+n)"),
            (
                "stol_conjecture",
                vec![],
                "?msd_fib An,x,y (n>=2 & $s1(n,x) & $s2(n,y)) => Ei,a,b 1<=i & i<n & $s1(i,a) & $s2(i,b) & (y=x+a|y=x+b)",
            ),
            (
                "cond",
                vec![],
                "?msd_fib An (n>=1) => ((Ei,x,y,z $s1(n,x) & $s2(n,y) & $s1(i,z) & y=x+z) <=> (Ek,t $phin(2*k-1,t) & n=t/2+1))",
            ),
            (
                "classification",
                vec![
                    ("delta", "?msd_fib Ex,y,t $s1(n,x) & $phin(x,y) & $s2(n,t) & t=y+z"),
                    ("l1", "?msd_fib Ex $phin(2*n-1,x) & z=(x+3)/2"),
                    ("l2", "?msd_fib Ex $phin(2*n-1,x) & z=(x/2)+2"),
                    ("l3", "?msd_fib Ex,y $l1(n,x) & $l2(n,y) & x=y"),
                ],
                "?msd_fib An (n>=1) => ($l3(n) <=> $delta(n,1))",
            ),
        ],
        "dual" => vec![
            ("chkd1", vec![], "?msd_fib Ai,x,y (i>=2 & $d1(i,x) & $phin(i-1,y)) => x=y+i+1"),
            (
                "checka",
                vec![("ddelta", "?msd_fib Ex,y,t $d1(i,x) & $d2(i,y) & $phin(x,t) & z+t=y")],
                "?msd_fib Ai (i>=2) => $ddelta(i,0)",
            ),
            (
                "checkb",
                vec![
                    ("cond", "?msd_fib Ek,x k>=1 & $phin(k,x) & i=x+k+1"),
                    (
                        "d1_alt",
                        "?msd_fib ($cond(i) & Ex $phin(i,x) & z=x+i) | (~$cond(i) & Ex $phin(i,x) & z+1=x+i)",
                    ),
                ],
                "?msd_fib Ai,x,y (i>=1 & $d1(i,x) & $d1_alt(i,y)) => x=y",
            ),
        ],
        "efc" => vec![
            ("efc_even", vec![], "?msd_fib An,x,y (n>=1 & $efc1(2*n,x) & $phin(n,y)) => x=2*y+2*n"),
            ("efc_odd", vec![], "?msd_fib An,x,y (n>=1 & $efc1(2*n+1,x) & $phin(n,y)) => x=2*y+2*n+2"),
        ],
        "esc" => vec![("esc2_even", vec![], "?msd_fib Ai,x (i>=1 & $esc2(i,x)) => Ek x=2*k")],
        "k100" => vec![("col3", vec![], "?msd_fib Ai,x (i>=1 & $k1003(i,x)) => ~Ek x=3*k+2")],
        _ => Vec::new(),
    }
}

/// Evaluate the array's theorem suite on the verified automata and store
/// the results in the report.
pub fn theorem_suite(report: &mut VerificationReport) -> Result<Vec<(String, bool)>> {
    if !report.fully_verified() {
        return Err(PipelineError::NotVerified(report.array.clone()));
    }
    let mut reg = report.registry.clone();
    if report.array == "wythoff" {
        // Morrison's odd columns: column 1, and column 3 followed by an even
        // number of zeros.
        let even0 = crate::automata::regex_to_dfa("(00)*", 1)?;
        let g3 = reg.get("wythoff_g3").expect("defined in step 6").clone();
        reg.define("w3e", renumerate(&Dfa::concat(&g3, &even0)?))?;
    }
    let mut out = Vec::new();
    for (name, defs, sentence) in theorem_sentences(&report.array) {
        for (d, src) in defs {
            logic::define(&mut reg, d, &logic::parse(src)?)?;
        }
        out.push((name.to_owned(), logic::eval_str(sentence, &reg)?));
    }
    report.theorems = out.clone();
    report.registry = reg;
    Ok(out)
}

/// First `i` in `1..=upto` where a column automaton disagrees with the
/// generator, as `(i, column)`. Functionality is certified by the
/// pipeline, so acceptance of the generated value is enough.
pub fn oracle_mismatch(report: &VerificationReport, spec: &ArraySpec, upto: usize) -> Option<(u64, usize)> {
    let table = interspersion::generate(spec, upto, 3);
    for j in 1..=3 {
        let dfa = report.column(j)?;
        for i in 1..=upto {
            let v = u64::try_from(table.get(i, j).expect("generated")).expect("fits u64");
            if !dfa.accepts_values(&[i as u64, v]) {
                return Some((i as u64, j));
            }
        }
    }
    None
}

/// Compare membership in the S automaton with the entries of columns
/// `j >= 2` up to `max`; also checks that no column-1 value lies in S.
/// Returns the first disagreeing value.
pub fn s_set_mismatch(report: &VerificationReport, spec: &ArraySpec, max: u64) -> Option<u64> {
    let s = report.registry.get(&format!("{}_cols2", report.array))?;
    let mut members = BTreeSet::new();
    for (a, b) in interspersion::seeds_upto(spec, max) {
        let (mut x, mut y) = (a, b);
        while y <= max {
            members.insert(y);
            (x, y) = (y, x + y);
        }
    }
    (1..=max).find(|&v| s.accepts_values(&[v]) != members.contains(&v))
}
