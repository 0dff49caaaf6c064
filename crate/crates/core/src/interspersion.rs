//! Exact generation of Stolarsky interspersions.
//!
//! Row 1 starts `1, 2`. Each later row starts with the least positive
//! integer not yet used by earlier rows; its second entry comes from the
//! array's rule, and the rest follow the Fibonacci recurrence.

use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use thiserror::Error;

use crate::zeckendorf::floor_alpha;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterspersionError {
    #[error("unknown array `{0}`")]
    UnknownArray(String),
    #[error("array `{0}` has no classification rule")]
    NoDeltaRule(String),
    #[error("row and column indices start at 1")]
    ZeroIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FKind {
    /// `floor(alpha n - beta)`
    Wythoff,
    /// `floor(alpha n + 1/2)`
    Stolarsky,
    /// `floor(alpha n + beta^2)`
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecondColumn {
    F(FKind),
    /// `A(i,2) = floor(alpha A(i,1)) + delta_i`, with `delta` given by a
    /// preperiod followed by a repeating period (indices from 1).
    Delta { preperiod: Vec<u8>, period: Vec<u8> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArraySpec {
    pub name: String,
    pub rule: SecondColumn,
}

pub const BUILTIN_NAMES: [&str; 6] = ["wythoff", "stolarsky", "dual", "efc", "esc", "k100"];

impl ArraySpec {
    pub fn builtin(name: &str) -> Result<ArraySpec, InterspersionError> {
        let delta = |pre: &[u8], period: &[u8]| SecondColumn::Delta { preperiod: pre.to_vec(), period: period.to_vec() };
        let rule = match name {
            "wythoff" => SecondColumn::F(FKind::Wythoff),
            "stolarsky" => SecondColumn::F(FKind::Stolarsky),
            "dual" => SecondColumn::F(FKind::Dual),
            "efc" => delta(&[1], &[1, 0]),
            "esc" => delta(&[], &[1, 0]),
            "k100" => delta(&[], &[1, 0, 0]),
            other => return Err(InterspersionError::UnknownArray(other.to_owned())),
        };
        Ok(ArraySpec { name: name.to_owned(), rule })
    }

    /// Second entry of row `i` whose first entry is `a1`.
    pub fn second(&self, i: u64, a1: u64) -> u64 {
        match &self.rule {
            SecondColumn::F(kind) => eval_f(*kind, a1),
            SecondColumn::Delta { .. } => floor_alpha(a1) + u64::from(self.delta(i).expect("delta rule")),
        }
    }

    /// Classification bit of row `i >= 1`.
    pub fn delta(&self, i: u64) -> Result<u8, InterspersionError> {
        let SecondColumn::Delta { preperiod, period } = &self.rule else {
            return Err(InterspersionError::NoDeltaRule(self.name.clone()));
        };
        if i == 0 {
            return Err(InterspersionError::ZeroIndex);
        }
        let k = (i - 1) as usize;
        Ok(if k < preperiod.len() { preperiod[k] } else { period[(k - preperiod.len()) % period.len()] })
    }
}

/// `F^{a,b}(n)`: `a`, `b`, then sums of the two previous terms.
pub fn gen_fib(a: u64, b: u64, n: usize) -> BigUint {
    assert!(n >= 1, "terms are numbered from 1");
    let (mut x, mut y) = (BigUint::from(a), BigUint::from(b));
    for _ in 1..n {
        let z = &x + &y;
        x = std::mem::replace(&mut y, z);
    }
    x
}

/// The second-column function of the three classical arrays, via
/// floor(alpha m) only.
pub fn eval_f(kind: FKind, n: u64) -> u64 {
    match kind {
        FKind::Wythoff => floor_alpha(n + 1) - 1,
        FKind::Stolarsky => floor_alpha(2 * n).div_ceil(2),
        FKind::Dual => floor_alpha(n - 1) + 2,
    }
}

/// Least positive integer not in `set` (sorted or not).
pub fn mex(set: impl IntoIterator<Item = u64>) -> u64 {
    let mut seen: Vec<u64> = set.into_iter().filter(|&v| v > 0).collect();
    seen.sort_unstable();
    seen.dedup();
    let mut m = 1;
    for v in seen {
        if v != m {
            break;
        }
        m += 1;
    }
    m
}

/// First entries of rows, computed incrementally. Entries of earlier rows
/// are marked in a bitmap that doubles whenever the candidate reaches its
/// end.
struct ColumnGenerator<'a> {
    spec: &'a ArraySpec,
    seeds: Vec<(u64, u64)>,
    used: Vec<bool>,
    next: u64,
}

impl<'a> ColumnGenerator<'a> {
    fn new(spec: &'a ArraySpec) -> Self {
        ColumnGenerator { spec, seeds: Vec::new(), used: vec![false; 64], next: 1 }
    }

    fn mark_row(used: &mut [bool], a: u64, b: u64) {
        let (mut x, mut y) = (a, b);
        while (x as usize) < used.len() {
            used[x as usize] = true;
            let z = x.saturating_add(y);
            (x, y) = (y, z);
        }
    }

    fn grow(&mut self) {
        let mut used = vec![false; self.used.len() * 2];
        for &(a, b) in &self.seeds {
            Self::mark_row(&mut used, a, b);
        }
        self.used = used;
    }

    /// Seeds `(A(i,1), A(i,2))` of the next row.
    fn next_row(&mut self) -> (u64, u64) {
        loop {
            while (self.next as usize) < self.used.len() && self.used[self.next as usize] {
                self.next += 1;
            }
            if (self.next as usize) < self.used.len() {
                break;
            }
            self.grow();
        }
        let a = self.next;
        let i = self.seeds.len() as u64 + 1;
        let b = self.spec.second(i, a);
        self.seeds.push((a, b));
        Self::mark_row(&mut self.used, a, b);
        (a, b)
    }
}

/// `(A(i,1), A(i,2))` for `i = 1..=rows`.
pub fn seeds(spec: &ArraySpec, rows: usize) -> Vec<(u64, u64)> {
    let mut g = ColumnGenerator::new(spec);
    (0..rows).map(|_| g.next_row()).collect()
}

/// Seeds of every row whose first entry is at most `max`.
pub fn seeds_upto(spec: &ArraySpec, max: u64) -> Vec<(u64, u64)> {
    let mut g = ColumnGenerator::new(spec);
    let mut out = Vec::new();
    loop {
        let row = g.next_row();
        if row.0 > max {
            return out;
        }
        out.push(row);
    }
}

pub fn first_column(spec: &ArraySpec, count: usize) -> Vec<u64> {
    seeds(spec, count).into_iter().map(|(a, _)| a).collect()
}

pub fn second_column(spec: &ArraySpec, count: usize) -> Vec<u64> {
    seeds(spec, count).into_iter().map(|(_, b)| b).collect()
}

/// `delta_i = A(i,2) - floor(alpha A(i,1))` for `i = 1..=count`.
pub fn classification_sequence(spec: &ArraySpec, count: usize) -> Vec<i64> {
    seeds(spec, count).into_iter().map(|(a, b)| b as i64 - floor_alpha(a) as i64).collect()
}

/// Number of distinct length-`n` factors of `seq`.
pub fn subword_complexity<T: Eq + std::hash::Hash>(seq: &[T], n: usize) -> Result<usize, InsufficientData> {
    let need = 1usize << n.max(12);
    if seq.len() < need {
        return Err(InsufficientData { have: seq.len(), need });
    }
    if n == 0 {
        return Ok(1);
    }
    Ok(seq.windows(n).collect::<std::collections::HashSet<_>>().len())
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("prefix of length {have} is too short; need at least {need}")]
pub struct InsufficientData {
    pub have: usize,
    pub need: usize,
}

/// A finite window of an array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub rows: Vec<Vec<BigUint>>,
}

pub fn generate(spec: &ArraySpec, rows: usize, cols: usize) -> Table {
    let rows = seeds(spec, rows)
        .into_iter()
        .map(|(a, b)| (1..=cols).map(|j| gen_fib(a, b, j)).collect())
        .collect();
    Table { rows }
}

impl Table {
    pub fn get(&self, i: usize, j: usize) -> Option<&BigUint> {
        self.rows.get(i.checked_sub(1)?)?.get(j.checked_sub(1)?)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", cells.join("\t")).unwrap();
        }
        out
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols = self.rows.first().map_or(0, Vec::len);
        let width = self
            .rows
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .chain([self.rows.len().to_string().len()])
            .max()
            .unwrap_or(1);
        write!(f, "{:>width$} |", "")?;
        for j in 1..=cols {
            write!(f, " {j:>width$}")?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat((width + 1) * (cols + 1) + 1))?;
        for (i, row) in self.rows.iter().enumerate() {
            write!(f, "{:>width$} |", i + 1)?;
            for v in row {
                write!(f, " {:>width$}", v.to_string())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(name: &str) -> ArraySpec {
        ArraySpec::builtin(name).unwrap()
    }

    #[test]
    fn gen_fib_examples() {
        assert_eq!(gen_fib(4, 7, 5), BigUint::from(29u32));
        assert_eq!(gen_fib(1, 1, 10), BigUint::from(55u32));
        assert_eq!(gen_fib(0, 0, 7), BigUint::from(0u32));
    }

    #[test]
    fn f_examples() {
        assert_eq!(eval_f(FKind::Wythoff, 4), 7);
        assert_eq!(eval_f(FKind::Stolarsky, 4), 6);
        assert_eq!(eval_f(FKind::Dual, 9), 14);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(spec("efc").delta(2), Ok(1));
        assert_eq!(spec("efc").delta(1), Ok(1));
        assert_eq!(spec("efc").delta(3), Ok(0));
        assert_eq!(spec("esc").delta(3), Ok(1));
        assert_eq!(spec("k100").delta(4), Ok(1));
        assert_eq!(spec("k100").delta(5), Ok(0));
        assert!(spec("wythoff").delta(1).is_err());
        assert!(ArraySpec::builtin("nope").is_err());
    }

    #[test]
    fn mex_examples() {
        assert_eq!(mex([1, 2, 3, 5, 8, 13, 21]), 4);
        assert_eq!(mex([]), 1);
        assert_eq!(mex([1, 2, 3, 4]), 5);
        assert_eq!(mex([0, 2]), 1);
    }

    #[test]
    fn first_columns() {
        assert_eq!(
            first_column(&spec("k100"), 19),
            [1, 4, 7, 9, 12, 14, 17, 20, 23, 25, 27, 30, 33, 35, 38, 40, 44, 46, 49]
        );
        assert_eq!(first_column(&spec("dual"), 4), [1, 4, 7, 9]);
        assert_eq!(first_column(&spec("wythoff"), 1), [1]);
    }

    #[test]
    fn classification_examples() {
        assert!(classification_sequence(&spec("wythoff"), 500).iter().all(|&d| d == 1));
        assert_eq!(classification_sequence(&spec("stolarsky"), 3), [1, 0, 0]);
        let dual = classification_sequence(&spec("dual"), 500);
        assert_eq!(dual[0], 1);
        assert!(dual[1..].iter().all(|&d| d == 0));
    }

    #[test]
    fn subword_complexity_examples() {
        assert_eq!(subword_complexity(&[0u8; 5000], 7), Ok(1));
        assert_eq!(subword_complexity(&[0u8; 100], 3), Err(InsufficientData { have: 100, need: 4096 }));
        let s = classification_sequence(&spec("stolarsky"), 5000);
        assert_eq!(subword_complexity(&s, 1), Ok(2));
        assert_eq!(subword_complexity(&s, 3), Ok(6));
    }

    #[test]
    fn rows_are_interspersed() {
        for name in BUILTIN_NAMES {
            let t = generate(&spec(name), 60, 12);
            let mut seen = std::collections::HashSet::new();
            for (i, row) in t.rows.iter().enumerate() {
                assert!(row.windows(2).all(|w| w[0] < w[1]), "{name} row {i}");
                for (j, v) in row.iter().enumerate() {
                    assert!(seen.insert(v.clone()), "{name}: {v} repeated");
                    if i > 0 {
                        assert!(t.rows[i - 1][j] < *v, "{name} column {j}");
                    }
                }
            }
            // everything below the last first-column entry is already placed
            let last = u32::try_from(&t.rows[59][0]).unwrap();
            for v in 1..last {
                assert!(seen.contains(&BigUint::from(v)), "{name}: {v} missing");
            }
        }
    }

    #[test]
    fn delta_is_a_bit_for_classical_arrays() {
        for name in ["wythoff", "stolarsky", "dual"] {
            assert!(classification_sequence(&spec(name), 2000).iter().all(|&d| d == 0 || d == 1), "{name}");
        }
    }

    #[test]
    fn rows_shift_from_column_three() {
        for name in BUILTIN_NAMES {
            let t = generate(&spec(name), 200, 14);
            for row in &t.rows {
                let third = crate::zeckendorf::encode(u64::try_from(&row[2]).unwrap());
                for (n, v) in row.iter().enumerate().skip(3) {
                    let mut digits = third.digits().to_vec();
                    digits.extend(std::iter::repeat_n(0, n - 2));
                    let w = crate::zeckendorf::ZeckWord::from_digits(digits).unwrap();
                    assert_eq!(crate::zeckendorf::decode(&w), u64::try_from(v).unwrap());
                }
            }
        }
    }

    #[test]
    fn table_text() {
        let t = generate(&spec("wythoff"), 2, 3);
        assert_eq!(t.to_tsv(), "1\t2\t3\n4\t7\t11\n");
        assert_eq!(t.to_string(), "   |  1  2  3\n-------------\n 1 |  1  2  3\n 2 |  4  7 11\n");
    }

    proptest! {
        #[test]
        fn tagiuri_identity(a in 0u64..1000, b in 0u64..1000, n in 3usize..40) {
            let lhs = gen_fib(a, b, n);
            let rhs = BigUint::from(a) * gen_fib(1, 1, n - 2) + BigUint::from(b) * gen_fib(1, 1, n - 1);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
