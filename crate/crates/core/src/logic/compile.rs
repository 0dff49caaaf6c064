//! Lowering of formulas to automata.
//!
//! Every intermediate relation is a [`Dfa`] whose track labels are its free
//! variables in sorted order. Relations are kept valid (each track a
//! Zeckendorf word) and closed under leading zeros, which makes complement
//! followed by a validity intersection a correct negation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ast::{CmpOp, Formula, Quantifier, Term};
use super::{LogicError, Registry};
use crate::automata::{regex_to_dfa, Dfa};
use crate::base_relations::build_validity;
use crate::zeckendorf;

type Result<T> = std::result::Result<T, LogicError>;

/// `Σ coeffs[v]·v + constant` over the integers.
#[derive(Debug, Clone, Default)]
struct Linear {
    coeffs: BTreeMap<String, i128>,
    constant: i128,
}

impl Linear {
    fn var(v: &str) -> Self {
        Linear { coeffs: BTreeMap::from([(v.to_owned(), 1)]), constant: 0 }
    }

    fn constant(c: i128) -> Self {
        Linear { coeffs: BTreeMap::new(), constant: c }
    }

    fn scaled(mut self, k: i128) -> Self {
        self.coeffs.values_mut().for_each(|c| *c *= k);
        self.constant *= k;
        self
    }

    fn plus(mut self, other: Linear) -> Self {
        for (v, c) in other.coeffs {
            *self.coeffs.entry(v).or_insert(0) += c;
        }
        self.constant += other.constant;
        self.coeffs.retain(|_, c| *c != 0);
        self
    }

    fn as_constant(&self) -> Option<i128> {
        self.coeffs.is_empty().then_some(self.constant)
    }

    /// Split `self ⋈ 0` into `pos ⋈ neg` with nonnegative coefficients.
    fn split(self) -> (Linear, Linear) {
        let mut pos = Linear::default();
        let mut neg = Linear::default();
        for (v, c) in self.coeffs {
            if c > 0 {
                pos.coeffs.insert(v, c);
            } else {
                neg.coeffs.insert(v, -c);
            }
        }
        if self.constant >= 0 {
            pos.constant = self.constant;
        } else {
            neg.constant = -self.constant;
        }
        (pos, neg)
    }
}

pub(super) struct Compiler<'r> {
    reg: &'r Registry,
    fresh: usize,
    bound: Vec<String>,
    valid: HashMap<usize, Dfa>,
    eq: Option<Dfa>,
    mul: HashMap<u64, Dfa>,
    add_const: HashMap<u64, Dfa>,
}

fn labeled(dfa: Dfa, labels: Vec<String>) -> Dfa {
    dfa.with_labels(labels)
}

fn labels(rel: &Dfa) -> &[String] {
    rel.labels().unwrap_or(&[])
}

fn truth(b: bool) -> Dfa {
    let d = if b { Dfa::universal(0) } else { Dfa::empty(0) };
    labeled(d, Vec::new())
}

impl<'r> Compiler<'r> {
    pub(super) fn new(reg: &'r Registry) -> Self {
        Compiler {
            reg,
            fresh: 0,
            bound: Vec::new(),
            valid: HashMap::new(),
            eq: None,
            mul: HashMap::new(),
            add_const: HashMap::new(),
        }
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    fn validity(&mut self, k: usize) -> Dfa {
        self.valid.entry(k).or_insert_with(|| build_validity(k)).clone()
    }

    fn base(&self, name: &'static str) -> Result<&'r Dfa> {
        self.reg.closed(name).ok_or(LogicError::MissingBaseRelation(name))
    }

    // ---- relation algebra over labeled automata ----

    fn and(&mut self, a: &Dfa, b: &Dfa) -> Result<Dfa> {
        if labels(a) == labels(b) {
            return Ok(a.intersect(b)?);
        }
        let all: BTreeSet<String> = labels(a).iter().chain(labels(b)).cloned().collect();
        let all: Vec<String> = all.into_iter().collect();
        Ok(a.align_to(&all).intersect(&b.align_to(&all))?)
    }

    fn or(&mut self, a: &Dfa, b: &Dfa) -> Result<Dfa> {
        let all: BTreeSet<String> = labels(a).iter().chain(labels(b)).cloned().collect();
        let all: Vec<String> = all.into_iter().collect();
        let u = a.align_to(&all).union(&b.align_to(&all))?;
        if labels(a) == labels(b) {
            return Ok(u);
        }
        let valid = self.validity(all.len()).with_labels(all);
        Ok(u.intersect(&valid)?)
    }

    fn not(&mut self, a: &Dfa) -> Result<Dfa> {
        let valid = self.validity(a.tracks()).with_labels(labels(a).to_vec());
        Ok(a.complement().intersect(&valid)?)
    }

    fn exists(&mut self, a: &Dfa, vars: &[String]) -> Dfa {
        let idx: Vec<usize> =
            labels(a).iter().enumerate().filter(|(_, l)| vars.contains(l)).map(|(i, _)| i).collect();
        if idx.is_empty() {
            a.clone()
        } else {
            a.project_tracks(&idx)
        }
    }

    /// Bind the tracks of `dfa` to `names` (positionally). Repeated names
    /// are joined through an equality on a fresh copy.
    fn apply(&mut self, dfa: &Dfa, names: &[String]) -> Result<Dfa> {
        let mut actual = Vec::with_capacity(names.len());
        let mut joins = Vec::new();
        for n in names {
            if actual.contains(n) {
                let f = self.fresh_var();
                joins.push((n.clone(), f.clone()));
                actual.push(f);
            } else {
                actual.push(n.clone());
            }
        }
        let mut sorted = actual.clone();
        sorted.sort();
        let order: Vec<usize> =
            sorted.iter().map(|s| actual.iter().position(|a| a == s).unwrap()).collect();
        let mut rel = dfa.clone().without_labels().permute_tracks(&order).with_labels(sorted);
        for (orig, copy) in joins {
            let eq = self.eq_rel(&orig, &copy)?;
            rel = self.and(&rel, &eq)?;
            rel = self.exists(&rel, &[copy]);
        }
        Ok(rel)
    }

    // ---- primitive relations ----

    fn eq_dfa(&mut self) -> Result<Dfa> {
        if let Some(d) = &self.eq {
            return Ok(d.clone());
        }
        let d = regex_to_dfa("([0,0]|[1,1])*", 2)?.intersect(&self.validity(2))?;
        self.eq = Some(d.clone());
        Ok(d)
    }

    fn eq_rel(&mut self, a: &str, b: &str) -> Result<Dfa> {
        let d = self.eq_dfa()?;
        self.apply(&d, &[a.to_owned(), b.to_owned()])
    }

    fn const_rel(&mut self, var: &str, c: u64) -> Result<Dfa> {
        let pattern = format!("0*{}", zeckendorf::encode(c));
        Ok(regex_to_dfa(&pattern, 1)?.with_labels([var]))
    }

    /// `y = c·x` over tracks (x, y), by doubling and adding.
    fn mul_dfa(&mut self, c: u64) -> Result<Dfa> {
        if let Some(d) = self.mul.get(&c) {
            return Ok(d.clone());
        }
        let (x, y, h) = ("x".to_owned(), "y".to_owned(), "h".to_owned());
        let d = if c == 0 {
            let zero = self.const_rel(&y, 0)?;
            let valid = self.validity(1).with_labels([x.clone()]);
            self.and(&zero, &valid)?
        } else if c == 1 {
            self.eq_dfa()?
        } else {
            let add = self.base("add")?.clone();
            let (inner, step) = if c.is_multiple_of(2) {
                (self.mul_dfa(c / 2)?, self.apply(&add, &[h.clone(), h.clone(), y.clone()])?)
            } else {
                (self.mul_dfa(c - 1)?, self.apply(&add, &[h.clone(), x.clone(), y.clone()])?)
            };
            let inner = self.apply(&inner, &[x, h.clone()])?;
            let both = self.and(&inner, &step)?;
            self.exists(&both, &[h])
        };
        let d = d.without_labels();
        self.mul.insert(c, d.clone());
        Ok(d)
    }

    /// `y = x + c` over tracks (x, y).
    fn add_const_dfa(&mut self, c: u64) -> Result<Dfa> {
        if let Some(d) = self.add_const.get(&c) {
            return Ok(d.clone());
        }
        let add = self.base("add")?.clone();
        let (x, y, k) = ("x".to_owned(), "y".to_owned(), "k".to_owned());
        let sum = self.apply(&add, &[x, k.clone(), y])?;
        let konst = self.const_rel(&k, c)?;
        let both = self.and(&sum, &konst)?;
        let d = self.exists(&both, &[k]).without_labels();
        self.add_const.insert(c, d.clone());
        Ok(d)
    }

    fn cmp_rel(&mut self, op: CmpOp, a: &str, b: &str) -> Result<Dfa> {
        let (a, b) = (a.to_owned(), b.to_owned());
        match op {
            CmpOp::Eq => self.eq_rel(&a, &b),
            CmpOp::Ne => {
                let eq = self.eq_rel(&a, &b)?;
                self.not(&eq)
            }
            CmpOp::Lt | CmpOp::Gt => {
                let lt = self.base("lt")?.clone();
                let args = if op == CmpOp::Lt { [a, b] } else { [b, a] };
                self.apply(&lt, &args)
            }
            CmpOp::Le | CmpOp::Ge => {
                let strict = if op == CmpOp::Le { CmpOp::Lt } else { CmpOp::Gt };
                let s = self.cmp_rel(strict, &a, &b)?;
                let e = self.eq_rel(&a, &b)?;
                self.or(&s, &e)
            }
        }
    }

    // ---- terms ----

    /// Lower a term to a linear expression. Division introduces fresh
    /// quotient and remainder variables whose defining constraints are
    /// pushed onto `side`.
    fn linear(&mut self, t: &Term, side: &mut Vec<Dfa>, fresh: &mut Vec<String>) -> Result<Linear> {
        Ok(match t {
            Term::Var(v) => Linear::var(v),
            Term::Const(c) => Linear::constant(i128::from(*c)),
            Term::Add(a, b) => self.linear(a, side, fresh)?.plus(self.linear(b, side, fresh)?),
            Term::Sub(a, b) => self.linear(a, side, fresh)?.plus(self.linear(b, side, fresh)?.scaled(-1)),
            Term::Mul(a, b) => {
                let la = self.linear(a, side, fresh)?;
                let lb = self.linear(b, side, fresh)?;
                match (la.as_constant(), lb.as_constant()) {
                    (Some(c), _) => lb.scaled(c),
                    (_, Some(c)) => la.scaled(c),
                    _ => return Err(LogicError::NonConstantOperand(t.to_string())),
                }
            }
            Term::Div(a, b) => {
                let num = self.linear(a, side, fresh)?;
                let c = match self.linear(b, side, fresh)?.as_constant() {
                    Some(0) => return Err(LogicError::DivisionByZero),
                    Some(c) if c > 0 => c,
                    _ => return Err(LogicError::NonConstantOperand(t.to_string())),
                };
                let q = self.fresh_var();
                let r = self.fresh_var();
                // num = c*q + r and r < c
                let def = num.plus(Linear::var(&q).scaled(-c)).plus(Linear::var(&r).scaled(-1));
                let def = self.linear_cmp(CmpOp::Eq, def)?;
                let bound = self.linear_cmp(CmpOp::Lt, Linear::var(&r).plus(Linear::constant(-c)))?;
                let both = self.and(&def, &bound)?;
                side.push(self.exists(&both, &[r]));
                fresh.push(q.clone());
                Linear::var(&q)
            }
        })
    }

    /// Relation for `e ⋈ 0` with integer semantics.
    fn linear_cmp(&mut self, op: CmpOp, e: Linear) -> Result<Dfa> {
        let (pos, neg) = e.split();
        if let (Some(p), Some(n)) = (pos.as_constant(), neg.as_constant()) {
            return Ok(truth(op.holds(p, n)));
        }
        // `v = expr` binds directly into v
        if op == CmpOp::Eq {
            for (var_side, other) in [(&pos, &neg), (&neg, &pos)] {
                if var_side.constant == 0 && var_side.coeffs.len() == 1 {
                    let (v, &c) = var_side.coeffs.iter().next().unwrap();
                    if c == 1 && !other.coeffs.is_empty() {
                        let v = v.clone();
                        return self.materialize(other, Some(&v)).map(|(_, rel, _)| rel);
                    }
                }
            }
        }
        let (pv, prel, p_new) = self.materialize(&pos, None)?;
        let (nv, nrel, n_new) = self.materialize(&neg, None)?;
        let cmp = self.cmp_rel(op, &pv, &nv)?;
        let mut rel = self.and(&cmp, &prel)?;
        rel = self.and(&rel, &nrel)?;
        let tmp: Vec<String> = [(pv, p_new), (nv, n_new)].into_iter().filter(|p| p.1).map(|p| p.0).collect();
        Ok(self.exists(&rel, &tmp))
    }

    /// `c·x`, either `x` itself or a new variable with its definition.
    fn operand(&mut self, x: &str, c: i128) -> Result<(String, Dfa, bool)> {
        if c == 1 {
            return Ok((x.to_owned(), truth(true), false));
        }
        let m = self.fresh_var();
        let mul = self.mul_dfa(c as u64)?;
        let rel = self.apply(&mul, &[x.to_owned(), m.clone()])?;
        Ok((m, rel, true))
    }

    /// Name a variable holding the value of a nonnegative linear expression,
    /// with the relation defining it; the flag tells whether that variable
    /// is new. Intermediates are projected away.
    fn materialize(&mut self, e: &Linear, target: Option<&str>) -> Result<(String, Dfa, bool)> {
        let out_name = |s: &mut Self| target.map_or_else(|| s.fresh_var(), str::to_owned);
        let constant = e.constant as u64;
        let mut terms = e.coeffs.iter();
        let Some((x, &c)) = terms.next() else {
            let out = out_name(self);
            let rel = self.const_rel(&out, constant)?;
            return Ok((out, rel, target.is_none()));
        };
        let (mut acc, mut rel, mut acc_new) = self.operand(x, c)?;
        let rest: Vec<(String, i128)> = terms.map(|(v, &c)| (v.clone(), c)).collect();
        let n = rest.len();
        for (i, (x, c)) in rest.into_iter().enumerate() {
            let (o, orel, o_new) = self.operand(&x, c)?;
            let s = if i + 1 == n && constant == 0 { out_name(self) } else { self.fresh_var() };
            let add = self.base("add")?.clone();
            let sum = self.apply(&add, &[acc.clone(), o.clone(), s.clone()])?;
            rel = self.and(&rel, &orel)?;
            rel = self.and(&rel, &sum)?;
            let tmp: Vec<String> =
                [(acc, acc_new), (o, o_new)].into_iter().filter(|p| p.1).map(|p| p.0).collect();
            rel = self.exists(&rel, &tmp);
            acc_new = target.is_none() || s != target.unwrap();
            acc = s;
        }
        if constant > 0 {
            let out = out_name(self);
            let addc = self.add_const_dfa(constant)?;
            let step = self.apply(&addc, &[acc.clone(), out.clone()])?;
            rel = self.and(&rel, &step)?;
            if acc_new {
                rel = self.exists(&rel, &[acc]);
            }
            acc_new = target.is_none();
            acc = out;
        }
        if let Some(t) = target {
            if acc != t {
                let eq = self.eq_rel(&acc, t)?;
                rel = self.and(&rel, &eq)?;
                if acc_new {
                    rel = self.exists(&rel, &[acc]);
                }
                acc = t.to_owned();
                acc_new = false;
            }
        }
        Ok((acc, rel, acc_new))
    }

    fn atom(&mut self, op: CmpOp, lhs: &Term, rhs: &Term) -> Result<Dfa> {
        let mut side = Vec::new();
        let mut fresh = Vec::new();
        let l = self.linear(lhs, &mut side, &mut fresh)?;
        let r = self.linear(rhs, &mut side, &mut fresh)?;
        let mut rel = self.linear_cmp(op, l.plus(r.scaled(-1)))?;
        for s in side {
            rel = self.and(&rel, &s)?;
        }
        Ok(self.exists(&rel, &fresh))
    }

    fn call(&mut self, name: &str, args: &[Term]) -> Result<Dfa> {
        let dfa = self.reg.closed(name).ok_or_else(|| LogicError::UnknownAutomaton(name.to_owned()))?;
        if dfa.tracks() != args.len() {
            return Err(LogicError::Arity { name: name.to_owned(), expected: dfa.tracks(), found: args.len() });
        }
        let mut names = Vec::with_capacity(args.len());
        let mut defs = Vec::new();
        let mut fresh = Vec::new();
        for a in args {
            match a {
                Term::Var(v) => names.push(v.clone()),
                _ => {
                    let f = self.fresh_var();
                    let def = self.atom(CmpOp::Eq, &Term::Var(f.clone()), a)?;
                    defs.push(def);
                    names.push(f.clone());
                    fresh.push(f);
                }
            }
        }
        let mut rel = self.apply(dfa, &names)?;
        for d in defs {
            rel = self.and(&rel, &d)?;
        }
        Ok(self.exists(&rel, &fresh))
    }

    // ---- formulas ----

    pub(super) fn formula(&mut self, f: &Formula) -> Result<Dfa> {
        match f {
            Formula::Not(a) => {
                let a = self.formula(a)?;
                self.not(&a)
            }
            Formula::And(a, b) => {
                let (a, b) = (self.formula(a)?, self.formula(b)?);
                self.and(&a, &b)
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.formula(a)?, self.formula(b)?);
                self.or(&a, &b)
            }
            Formula::Implies(a, b) => {
                let a = self.formula(a)?;
                let na = self.not(&a)?;
                let b = self.formula(b)?;
                self.or(&na, &b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.formula(a)?, self.formula(b)?);
                let both = self.and(&a, &b)?;
                let (na, nb) = (self.not(&a)?, self.not(&b)?);
                let neither = self.and(&na, &nb)?;
                self.or(&both, &neither)
            }
            Formula::Quant { kind, vars, body } => {
                for (i, v) in vars.iter().enumerate() {
                    if self.bound.contains(v) || vars[..i].contains(v) {
                        return Err(LogicError::Rebound(v.clone()));
                    }
                }
                self.bound.extend(vars.iter().cloned());
                let inner = self.formula(body);
                self.bound.truncate(self.bound.len() - vars.len());
                let inner = inner?;
                match kind {
                    Quantifier::Exists => Ok(self.exists(&inner, vars)),
                    Quantifier::Forall => {
                        let neg = self.not(&inner)?;
                        let ex = self.exists(&neg, vars);
                        self.not(&ex)
                    }
                }
            }
            Formula::Cmp { op, lhs, rhs } => self.atom(*op, lhs, rhs),
            Formula::Call { name, args } => self.call(name, args),
        }
    }
}
