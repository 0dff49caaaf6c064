use zeckauto::automata::regex_to_dfa;
use zeckauto::interspersion::{classification_sequence, ArraySpec, SecondColumn};
use zeckauto::pipeline::*;
use zeckauto::{encode, logic, BaseRelations, Dfa, Registry};

fn base() -> Registry {
    BaseRelations::shared().expect("base relations certify").registry()
}

fn verify(name: &str) -> VerificationReport {
    let spec = ArraySpec::builtin(name).unwrap();
    seven_step_verify(&spec, default_samples(name), &base()).unwrap()
}

#[test]
fn wythoff_report() {
    let mut r = verify("wythoff");
    assert!(r.fully_verified());
    assert_eq!(r.states, [Some(10), Some(13), Some(18)]);
    let text = r.to_string();
    let lines: Vec<&str> = text.lines().take(8).collect();
    assert_eq!(
        lines,
        [
            "wythoff.data PASS 500 terms of column 1",
            "wythoff.guess PASS w1 has 10 states",
            "wythoff.functionality PASS w1_func1 w1_func2 TRUE",
            "wythoff.monotonicity PASS increasing_w TRUE",
            "wythoff.columns-2-3 PASS w2 has 13 states, w3 has 18 states",
            "wythoff.set-S PASS wythoff_cols2 has 3 states",
            "wythoff.mex-induction PASS chk TRUE",
            "wythoff PASS fully-verified",
        ]
    );
    let thms = theorem_suite(&mut r).unwrap();
    assert!(thms.iter().all(|(_, ok)| *ok), "{thms:?}");
    assert_eq!(thms.len(), 4);
}

#[test]
fn dual_suite() {
    let mut r = verify("dual");
    assert_eq!(r.states[0], Some(11));
    let thms = theorem_suite(&mut r).unwrap();
    let names: Vec<&str> = thms.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["chkd1", "checka", "checkb"]);
    assert!(thms.iter().all(|(_, ok)| *ok));
}

#[test]
fn columns_agree_with_generator() {
    for name in ["wythoff", "stolarsky", "dual"] {
        let spec = ArraySpec::builtin(name).unwrap();
        let r = verify(name);
        assert_eq!(oracle_mismatch(&r, &spec, 300), None, "{name}");
        assert_eq!(s_set_mismatch(&r, &spec, 5000), None, "{name}");
    }
}

#[test]
fn suite_requires_verification() {
    let spec = ArraySpec::builtin("wythoff").unwrap();
    let mut r = seven_step_verify(&spec, 500, &base()).unwrap();
    r.steps.pop();
    assert!(matches!(theorem_suite(&mut r), Err(PipelineError::NotVerified(_))));
}

#[test]
fn wrong_column_fails_a_step() {
    let base = base();
    let wythoff = verify("wythoff");
    let w1 = wythoff.column(1).unwrap().clone();
    let r = verify_column(&ArraySpec::builtin("stolarsky").unwrap(), w1, &base).unwrap();
    assert!(!r.fully_verified());
    let failed: Vec<Step> = r.steps.iter().filter(|s| !s.passed).map(|s| s.step).collect();
    assert_eq!(failed, [Step::MexInduction]);
    assert!(r.to_string().contains("stolarsky.mex-induction FAIL FALSE: chks2"));

    // not a function at all
    let lt = base.get("lt").unwrap().clone();
    let r = verify_column(&ArraySpec::builtin("wythoff").unwrap(), lt, &base).unwrap();
    assert_eq!(r.steps.len(), 3);
    assert!(!r.steps[2].passed);
}

#[test]
fn generic_delta_rule_matches_builtin() {
    // ESC's rule written out by residue classes instead of the i/2 trick.
    let esc = ArraySpec::builtin("esc").unwrap();
    let custom = ArraySpec { name: "alt".into(), rule: esc.rule.clone() };
    assert!(matches!(custom.rule, SecondColumn::Delta { .. }));
    let base = base();
    let a = seven_step_verify(&esc, 3000, &base).unwrap();
    let b = seven_step_verify(&custom, 3000, &base).unwrap();
    assert!(b.fully_verified());
    for j in 1..=3 {
        // the published esc2 also relates i = 0; compare rows i >= 1
        let rows = |r: &VerificationReport, name: &str| {
            logic::compile_str(&format!("i>=1 & ${name}(i,z)"), &r.registry).unwrap()
        };
        let (na, nb) = match j {
            1 => (&a.names.col1, &b.names.col1),
            2 => (&a.names.col2, &b.names.col2),
            _ => (&a.names.col3, &b.names.col3),
        };
        assert!(rows(&a, na).equivalent(&rows(&b, nb)).unwrap(), "column {j}");
    }
}

#[test]
fn renumeration() {
    let word = regex_to_dfa("101", 1).unwrap();
    let zeros = regex_to_dfa("0*", 1).unwrap();
    let r = renumerate(&Dfa::concat(&word, &zeros).unwrap());
    assert!(r.accepts_values(&[11]));
    assert_eq!(encode(11).to_string(), "10100");
    assert!(r.accepts_values(&[4]));
    assert!(!r.accepts_values(&[5]));
    assert!(renumerate(&r).equivalent(&r).unwrap());
    let ones = renumerate(&regex_to_dfa("(0|1)*", 1).unwrap());
    assert!(!ones.accepts(&[1, 1]));
    assert!(ones.accepts(&[0, 1, 0, 1]));
}

#[test]
fn classification_prefixes() {
    let seq = |n: &str| classification_sequence(&ArraySpec::builtin(n).unwrap(), 200);
    assert!(seq("wythoff").iter().all(|&d| d == 1));
    assert_eq!(seq("stolarsky")[..3], [1, 0, 0]);
    let dual = seq("dual");
    assert_eq!(dual[0], 1);
    assert!(dual[1..].iter().all(|&d| d == 0));
}
