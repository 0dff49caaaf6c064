use std::collections::BTreeMap;

use super::*;
use crate::base_relations::BaseRelations;
use crate::zeckendorf::{self, floor_alpha};

fn reg() -> Registry {
    BaseRelations::shared().expect("base relations certify").registry()
}

type Env = BTreeMap<String, i128>;

fn term(t: &Term, env: &Env) -> i128 {
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => i128::from(*c),
        Term::Add(a, b) => term(a, env) + term(b, env),
        Term::Sub(a, b) => term(a, env) - term(b, env),
        Term::Mul(a, b) => term(a, env) * term(b, env),
        Term::Div(a, b) => term(a, env).div_euclid(term(b, env)),
    }
}

fn call(name: &str, args: &[i128]) -> bool {
    if args.iter().any(|&a| a < 0) {
        return false;
    }
    let a: Vec<u64> = args.iter().map(|&v| v as u64).collect();
    match name {
        "phin" => floor_alpha(a[0]) == a[1],
        "shift" => zeckendorf::decode(&zeckendorf::encode(a[0]).shifted()) == a[1],
        other => panic!("no oracle for {other}"),
    }
}

/// Direct evaluation; quantifiers range over `0..=bound`.
fn holds(f: &Formula, env: &mut Env, bound: i128) -> bool {
    match f {
        Formula::Not(a) => !holds(a, env, bound),
        Formula::And(a, b) => holds(a, env, bound) && holds(b, env, bound),
        Formula::Or(a, b) => holds(a, env, bound) || holds(b, env, bound),
        Formula::Implies(a, b) => !holds(a, env, bound) || holds(b, env, bound),
        Formula::Iff(a, b) => holds(a, env, bound) == holds(b, env, bound),
        Formula::Cmp { op, lhs, rhs } => op.holds(term(lhs, env), term(rhs, env)),
        Formula::Call { name, args } => {
            let vals: Vec<i128> = args.iter().map(|t| term(t, env)).collect();
            call(name, &vals)
        }
        Formula::Quant { kind, vars, body } => quant(*kind, vars, body, env, bound),
    }
}

fn quant(kind: Quantifier, vars: &[String], body: &Formula, env: &mut Env, bound: i128) -> bool {
    let Some((v, rest)) = vars.split_first() else { return holds(body, env, bound) };
    let want = kind == Quantifier::Exists;
    for x in 0..=bound {
        env.insert(v.clone(), x);
        if quant(kind, rest, body, env, bound) == want {
            env.remove(v);
            return want;
        }
    }
    env.remove(v);
    !want
}

/// Formulas whose quantifiers only need witnesses below the oracle bound.
const CORPUS: [&str; 12] = [
    "Ek n=2*k+1",
    "z=2*n+1",
    "z=(y+1)/2",
    "x+3<2*y",
    "x-y<z",
    "x!=y & x<=y+2",
    "$phin(2*n-1,y)",
    "Ey $phin(n+1,y) & z+1=y",
    "n=t/2+1",
    "z=y+(1-r) & r<=1",
    "$shift(x,y) => y>=x",
    "Ek x=3*k+2",
];

fn check_against_oracle(src: &str, reg: &Registry) {
    let f = parse(src).unwrap();
    let dfa = compile(&f, reg).unwrap();
    let vars: Vec<String> = f.free_vars().into_iter().collect();
    assert_eq!(dfa.labels().unwrap(), vars.as_slice(), "{src}");
    let max: u64 = match vars.len() {
        1 => 200,
        2 => 120,
        _ => 25,
    };
    let mut vals = vec![0u64; vars.len()];
    loop {
        let mut env: Env = vars.iter().cloned().zip(vals.iter().map(|&v| i128::from(v))).collect();
        let expected = holds(&f, &mut env, 400);
        assert_eq!(dfa.accepts_values(&vals), expected, "{src} at {vals:?}");
        let mut t = 0;
        loop {
            if t == vals.len() {
                return;
            }
            vals[t] += 1;
            if vals[t] <= max {
                break;
            }
            vals[t] = 0;
            t += 1;
        }
    }
}

#[test]
fn corpus_agrees_with_integer_evaluation() {
    let reg = reg();
    for src in CORPUS {
        check_against_oracle(src, &reg);
    }
}

#[test]
fn forall_matches_negated_exists() {
    let reg = reg();
    for src in CORPUS {
        let f = parse(src).unwrap();
        for v in f.free_vars() {
            let a = compile_str(&format!("A{v} {src}"), &reg).unwrap();
            let b = compile_str(&format!("~E{v} ~({src})"), &reg).unwrap();
            assert!(a.equivalent(&b).unwrap(), "{src} over {v}");
        }
    }
}

#[test]
fn odd_numbers() {
    let odd = compile_str("?msd_fib Ek n=2*k+1", &reg()).unwrap();
    assert_eq!(odd.tracks(), 1);
    assert!(odd.accepts_values(&[3]));
    assert!(!odd.accepts_values(&[4]));
    let words: Vec<String> = odd
        .enumerate_accepted(4)
        .into_iter()
        .filter(|w| w.first() == Some(&1))
        .map(|w| w.iter().map(|b| b.to_string()).collect())
        .collect();
    // 1, 3, 5, 7
    assert_eq!(words, ["1", "100", "1000", "1010"]);
}

#[test]
fn tracks_are_alphabetical() {
    let reg = reg();
    let d = compile_str("?msd_fib z=2*n+1", &reg).unwrap();
    assert_eq!(d.labels().unwrap(), ["n", "z"]);
    assert!(d.accepts_values(&[3, 7]));
    let a = compile_str("x<y & z=x", &reg).unwrap();
    let b = compile_str("z=x & x<y", &reg).unwrap();
    assert_eq!(a.labels().unwrap(), ["x", "y", "z"]);
    assert_eq!(a.to_text(), b.to_text());
}

#[test]
fn sentences() {
    let reg = reg();
    assert!(!eval_str("An n>=1 => n>=2", &reg).unwrap());
    assert!(eval_str("An n>=1 => n>=1", &reg).unwrap());
    let closed = compile_str("Ex x=x+1", &reg).unwrap();
    assert_eq!(closed.tracks(), 0);
    assert!(!closed.accepts(&[]));
    assert!(matches!(eval_str("x=1", &reg), Err(LogicError::FreeVariables(v)) if v == ["x"]));
    assert!(matches!(eval_str("Ex Ex x=1", &reg), Err(LogicError::Rebound(v)) if v == "x"));
    assert!(matches!(eval_str("Ex x*x=1", &reg), Err(LogicError::NonConstantOperand(_))));
    assert!(matches!(eval_str("Ex x/0=1", &reg), Err(LogicError::DivisionByZero)));
}

#[test]
fn definitions_and_calls() {
    let mut reg = reg();
    define(&mut reg, "double1", &parse("?msd_fib z=2*n+1").unwrap()).unwrap();
    assert!(eval_str("$double1(3,7)", &reg).unwrap());
    assert!(!eval_str("$double1(3,8)", &reg).unwrap());
    assert!(eval_str("Ax $double1(x,2*x+1)", &reg).unwrap());
    assert!(matches!(
        eval_str("$double1(1,2,3)", &reg),
        Err(LogicError::Arity { expected: 2, found: 3, .. })
    ));
    assert!(matches!(eval_str("$nope(1)", &reg), Err(LogicError::UnknownAutomaton(_))));
    let other = compile_str("z=n", &reg).unwrap();
    assert!(matches!(reg.define("shift", other.clone()), Err(LogicError::ReservedName(_))));
    assert!(matches!(reg.define("double1", other), Err(LogicError::DuplicateName(_))));
    // an identical redefinition is accepted
    let same = compile_str("z=1+n*2", &reg).unwrap();
    reg.define("double1", same).unwrap();
    let shift = reg.get("shift").unwrap().clone();
    reg.define("shift", shift).unwrap();
}

#[test]
fn repeated_arguments() {
    let reg = reg();
    assert!(eval_str("$shift(0,0) & ~Ex x>0 & $shift(x,x)", &reg).unwrap());
    let fixed = compile_str("$phin(n,n)", &reg).unwrap();
    let words: Vec<u64> = (0..50).filter(|&n| fixed.accepts_values(&[n])).collect();
    assert_eq!(words, [0, 1]);
}

#[test]
fn missing_base_relation() {
    let empty = Registry::new();
    assert!(eval_str("Ax x=x", &empty).unwrap());
    assert!(matches!(eval_str("Ax,y x<y+1", &empty), Err(LogicError::MissingBaseRelation(_))));
}
