//! Recursive-descent parser for the query language.
//!
//! Precedence, tightest first: `~`, `&`, `|`, `=>`, `<=>`. Implication and
//! equivalence associate to the right. A quantifier (`A`/`E` immediately
//! followed by a comma-separated variable list) scopes as far right as
//! possible.

use super::ast::{CmpOp, Formula, Quantifier, Term};
use super::LogicError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Call(String),
    Tag(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 17] =
    ["<=>", "=>", "<=", ">=", "!=", "=", "<", ">", "&", "|", "~", "+", "-", "*", "/", "(", ")"];

fn lex(src: &str) -> Result<Vec<Token>, LogicError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (l, cl) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        let word_end = |start: usize| {
            let mut j = start;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            j
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let j = word_end(i);
            let s: String = chars[i..j].iter().collect();
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n);
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let value = s.parse().map_err(|_| LogicError::Syntax {
                line: l,
                col: cl,
                msg: format!("number `{s}` too large"),
            })?;
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n);
            Tok::Num(value)
        } else if c == '$' || c == '?' {
            let j = word_end(i + 1);
            if j == i + 1 {
                return Err(LogicError::Syntax { line: l, col: cl, msg: format!("expected a name after `{c}`") });
            }
            let s: String = chars[i + 1..j].iter().collect();
            let n = j - i;
            advance(&mut i, &mut line, &mut col, n);
            if c == '$' {
                Tok::Call(s)
            } else {
                Tok::Tag(s)
            }
        } else if c == ',' {
            advance(&mut i, &mut line, &mut col, 1);
            Tok::Sym(",")
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(*s)) {
                Some(s) => {
                    advance(&mut i, &mut line, &mut col, s.len());
                    Tok::Sym(s)
                }
                None => {
                    return Err(LogicError::Syntax { line: l, col: cl, msg: format!("unexpected character `{c}`") })
                }
            }
        };
        out.push(Token { tok, line: l, col: cl });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

type PResult<T> = Result<T, LogicError>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let (line, col) = self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col));
        Err(LogicError::Syntax { line, col, msg: msg.into() })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> PResult<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        self.iff()
    }

    fn iff(&mut self) -> PResult<Formula> {
        let left = self.implies()?;
        if self.eat("<=>") {
            let right = self.iff()?;
            return Ok(Formula::Iff(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn implies(&mut self) -> PResult<Formula> {
        let left = self.or()?;
        if self.eat("=>") {
            let right = self.implies()?;
            return Ok(Formula::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> PResult<Formula> {
        let mut left = self.and()?;
        while self.eat("|") {
            let right = self.and()?;
            left = Formula::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut left = self.unary()?;
        while self.eat("&") {
            let right = self.unary()?;
            left = Formula::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn quantifier_head(&self) -> Option<(Quantifier, String)> {
        let Some(Tok::Ident(s)) = self.peek() else { return None };
        let kind = match s.as_bytes().first() {
            Some(b'A') => Quantifier::Forall,
            Some(b'E') => Quantifier::Exists,
            _ => return None,
        };
        let var = &s[1..];
        var.starts_with(|c: char| c.is_ascii_lowercase()).then(|| (kind, var.to_owned()))
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat("~") {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if let Some((kind, first)) = self.quantifier_head() {
            self.pos += 1;
            let mut vars = vec![first];
            while self.eat(",") {
                match self.peek() {
                    Some(Tok::Ident(v)) => {
                        vars.push(v.clone());
                        self.pos += 1;
                    }
                    _ => return self.err("expected a variable after `,`"),
                }
            }
            let body = self.formula()?;
            return Ok(Formula::Quant { kind, vars, body: Box::new(body) });
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Tok::Call(name)) => {
                let name = name.clone();
                self.pos += 1;
                self.expect("(")?;
                let mut args = vec![self.term()?];
                while self.eat(",") {
                    args.push(self.term()?);
                }
                self.expect(")")?;
                Ok(Formula::Call { name, args })
            }
            Some(Tok::Sym("(")) => {
                // `(y+1)/2 = z` starts like a parenthesized formula; try the
                // comparison reading first and fall back.
                let save = self.pos;
                match self.comparison() {
                    Ok(f) => Ok(f),
                    Err(_) => {
                        self.pos = save;
                        self.expect("(")?;
                        let inner = self.formula()?;
                        self.expect(")")?;
                        Ok(inner)
                    }
                }
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        let op = match self.peek() {
            Some(Tok::Sym("=")) => CmpOp::Eq,
            Some(Tok::Sym("!=")) => CmpOp::Ne,
            Some(Tok::Sym("<")) => CmpOp::Lt,
            Some(Tok::Sym("<=")) => CmpOp::Le,
            Some(Tok::Sym(">")) => CmpOp::Gt,
            Some(Tok::Sym(">=")) => CmpOp::Ge,
            _ => return self.err("expected a comparison operator"),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(Formula::Cmp { op, lhs, rhs })
    }

    fn term(&mut self) -> PResult<Term> {
        let mut left = self.product()?;
        loop {
            if self.eat("+") {
                left = Term::Add(Box::new(left), Box::new(self.product()?));
            } else if self.eat("-") {
                left = Term::Sub(Box::new(left), Box::new(self.product()?));
            } else {
                return Ok(left);
            }
        }
    }

    fn product(&mut self) -> PResult<Term> {
        let mut left = self.factor()?;
        loop {
            if self.eat("*") {
                left = Term::Mul(Box::new(left), Box::new(self.factor()?));
            } else if self.eat("/") {
                left = Term::Div(Box::new(left), Box::new(self.factor()?));
            } else {
                return Ok(left);
            }
        }
    }

    fn factor(&mut self) -> PResult<Term> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Term::Const(n))
            }
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Parse a formula, optionally prefixed by the `?msd_fib` numeration tag.
pub fn parse(source: &str) -> Result<Formula, LogicError> {
    let toks = lex(source)?;
    let end = {
        let lines: Vec<&str> = source.split('\n').collect();
        (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1)
    };
    let mut p = Parser { toks, pos: 0, end };
    if let Some(Tok::Tag(tag)) = p.peek() {
        if tag != "msd_fib" {
            return Err(LogicError::UnsupportedNumeration(tag.clone()));
        }
        p.pos += 1;
    }
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}
