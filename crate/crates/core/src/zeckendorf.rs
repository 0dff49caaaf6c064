//! Zeckendorf (Fibonacci) numeration and exact golden-ratio floor oracles.
//!
//! Words are most-significant-digit first. A word `a_1 ... a_t` denotes
//! `sum a_i * F_{t+2-i}` with `F_1 = F_2 = 1`, so the last digit has weight 1,
//! the one before it weight 2, then 3, 5, 8, ...
//!
//! Nothing here uses floating point. `floor(alpha * n)` is decided by the
//! integer test `2x - n <= 0 or (2x - n)^2 <= 5 n^2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Roots;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeckError {
    #[error("adjacent ones at digit {0}")]
    AdjacentOnes(usize),
    #[error("invalid digit {0:?}")]
    BadDigit(char),
}

/// Fibonacci numbers with `FIB[0] = 0`, `FIB[1] = FIB[2] = 1`. Every
/// Zeckendorf weight of a `u64` fits in this table.
pub const FIB: [u64; 94] = fib_table();

const fn fib_table() -> [u64; 94] {
    let mut t = [0u64; 94];
    t[1] = 1;
    let mut i = 2;
    while i < 94 {
        t[i] = t[i - 1] + t[i - 2];
        i += 1;
    }
    t
}

/// Weight of the digit at distance `pos` from the right end (0-based).
#[inline]
pub fn weight(pos: usize) -> u64 {
    FIB[pos + 2]
}

/// A binary word with no two adjacent ones, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ZeckWord {
    digits: Vec<u8>,
}

impl ZeckWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_digits(digits: Vec<u8>) -> Result<Self, ZeckError> {
        for (i, &d) in digits.iter().enumerate() {
            if d > 1 {
                return Err(ZeckError::BadDigit(char::from(b'0' + d.min(9))));
            }
            if d == 1 && i > 0 && digits[i - 1] == 1 {
                return Err(ZeckError::AdjacentOnes(i - 1));
            }
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Empty, or starting with 1.
    pub fn is_canonical(&self) -> bool {
        self.digits.first().is_none_or(|&d| d == 1)
    }

    pub fn canonical(&self) -> ZeckWord {
        let start = self.digits.iter().position(|&d| d == 1).unwrap_or(self.digits.len());
        ZeckWord { digits: self.digits[start..].to_vec() }
    }

    /// Left-pad with zeros up to `len` digits. Longer words are returned unchanged.
    pub fn padded(&self, len: usize) -> ZeckWord {
        let mut digits = vec![0; len.saturating_sub(self.digits.len())];
        digits.extend_from_slice(&self.digits);
        ZeckWord { digits }
    }

    pub fn trailing_zeros(&self) -> usize {
        self.digits.iter().rev().take_while(|&&d| d == 0).count()
    }

    /// Append one zero digit (the "shift" map).
    pub fn shifted(&self) -> ZeckWord {
        let mut digits = self.digits.clone();
        digits.push(0);
        ZeckWord { digits }
    }
}

impl fmt::Display for ZeckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for ZeckWord {
    type Err = ZeckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(ZeckError::BadDigit(other)),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        ZeckWord::from_digits(digits)
    }
}

/// Greedy Zeckendorf encoding; `encode(0)` is the empty word.
pub fn encode(n: u64) -> ZeckWord {
    if n == 0 {
        return ZeckWord::empty();
    }
    // highest position whose weight fits
    let mut pos = 0;
    while pos + 1 < FIB.len() - 2 && weight(pos + 1) <= n {
        pos += 1;
    }
    let mut rest = n;
    let mut digits = Vec::with_capacity(pos + 1);
    for p in (0..=pos).rev() {
        if weight(p) <= rest {
            digits.push(1);
            rest -= weight(p);
        } else {
            digits.push(0);
        }
    }
    debug_assert_eq!(rest, 0);
    ZeckWord { digits }
}

pub fn decode(w: &ZeckWord) -> u64 {
    decode_digits(&w.digits)
}

/// Decode raw digits without checking validity.
pub fn decode_digits(digits: &[u8]) -> u64 {
    let t = digits.len();
    digits
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 1)
        .map(|(i, _)| weight(t - 1 - i))
        .sum()
}

/// True iff the bit sequence has no two adjacent ones.
pub fn is_valid(bits: &[u8]) -> bool {
    bits.windows(2).all(|w| !(w[0] == 1 && w[1] == 1)) && bits.iter().all(|&b| b <= 1)
}

/// Length of the canonical representation of `n`.
pub fn rep_len(n: u64) -> usize {
    let mut len = 0;
    while len + 2 < FIB.len() && FIB[len + 2] <= n {
        len += 1;
    }
    len
}

/// `floor(alpha * n)` for the golden ratio alpha, exact.
pub fn floor_alpha(n: u64) -> u64 {
    assert!(n < (1 << 62), "floor_alpha argument out of range");
    let n128 = n as u128;
    // sqrt(5) n is irrational for n > 0, so the floor of (n + sqrt(5 n^2)) / 2
    // only needs the integer square root.
    let s = (5 * n128 * n128).sqrt();
    ((n128 + s) / 2) as u64
}

/// Arbitrary-precision version of [`floor_alpha`].
pub fn floor_alpha_big(n: &BigUint) -> BigUint {
    let s = (n * n * 5u32).sqrt();
    (n + s) >> 1
}

/// `floor(alpha^2 * n) = n + floor(alpha * n)`.
pub fn floor_alpha_sq(n: u64) -> u64 {
    n + floor_alpha(n)
}

/// The defining inequality for `x = floor(alpha * n)`: `x <= alpha * n`.
pub fn at_most_alpha_times(x: u64, n: u64) -> bool {
    let lhs = 2 * x as i128 - n as i128;
    lhs <= 0 || (lhs * lhs) as u128 <= 5 * (n as u128) * (n as u128)
}
