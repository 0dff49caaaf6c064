//! The bootstrap relations behind every formula, each checked before use.
//!
//! Order matters: `lt` is built directly and checked exhaustively; `succ`
//! is learned from data and pinned down by first-order properties over
//! `lt`; `add` is learned and pinned down by induction over `succ`; `shift`
//! comes from a regular expression; `phin` and `phi2n` are compiled from
//! formulas over the earlier relations and compared with exact arithmetic.

use std::sync::OnceLock;

use thiserror::Error;

use crate::automata::{regex_to_dfa, AutomatonError, Dfa, State};
use crate::inference::{self, GuessOptions, InferenceError};
use crate::logic::{self, LogicError, Registry};
use crate::zeckendorf::{self, floor_alpha, floor_alpha_sq, ZeckWord};

#[derive(Debug, Error)]
pub enum CertificationError {
    #[error("{relation}: check `{property}` failed")]
    Failed { relation: &'static str, property: String },
    #[error("{relation}: {source}")]
    Inference { relation: &'static str, source: InferenceError },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("{0}")]
    Cached(String),
}

pub type Result<T, E = CertificationError> = std::result::Result<T, E>;

/// Exhaustive search bounds used while certifying.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertBounds {
    /// `lt` is compared with integer order on all pairs up to this value.
    pub lt_max: u64,
    /// `succ` is learned from `n < succ_samples`.
    pub succ_samples: u64,
    /// `add` is learned from `x, y <= add_samples`.
    pub add_samples: u64,
    pub shift_max: u64,
    pub phin_max: u64,
}

impl Default for CertBounds {
    fn default() -> Self {
        CertBounds { lt_max: 3000, succ_samples: 2000, add_samples: 300, shift_max: 10_000, phin_max: 1_000_000 }
    }
}

impl CertBounds {
    /// Defaults with every exhaustive bound capped at `limit`. The learning
    /// sample sizes are left alone since they decide what gets learned.
    pub fn capped(limit: u64) -> Self {
        let d = Self::default();
        CertBounds {
            lt_max: d.lt_max.min(limit),
            shift_max: d.shift_max.min(limit),
            phin_max: d.phin_max.min(limit),
            ..d
        }
    }
}

/// An automaton together with the checks it passed. Only produced by the
/// builders in this module, and only when every check passed.
#[derive(Debug, Clone)]
pub struct CertifiedRelation {
    name: &'static str,
    automaton: Dfa,
    certificate: Vec<String>,
}

impl CertifiedRelation {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn automaton(&self) -> &Dfa {
        &self.automaton
    }

    /// Names of the passed checks, in the order they ran.
    pub fn certificate(&self) -> &[String] {
        &self.certificate
    }
}

struct Checker {
    relation: &'static str,
    passed: Vec<String>,
}

impl Checker {
    fn new(relation: &'static str) -> Self {
        Checker { relation, passed: Vec::new() }
    }

    fn require(&mut self, property: impl Into<String>, ok: bool) -> Result<()> {
        let property = property.into();
        if !ok {
            return Err(CertificationError::Failed { relation: self.relation, property });
        }
        self.passed.push(property);
        Ok(())
    }

    fn sentence(&mut self, property: &str, reg: &Registry, source: &str) -> Result<()> {
        let ok = logic::eval_str(source, reg)?;
        self.require(format!("{property}: {source}"), ok)
    }

    fn finish(self, automaton: Dfa) -> CertifiedRelation {
        CertifiedRelation { name: self.relation, automaton, certificate: self.passed }
    }
}

/// Tuple words whose every track has no two adjacent ones.
pub fn build_validity(k: usize) -> Dfa {
    if k == 0 {
        return Dfa::universal(0);
    }
    // state = set of tracks whose last digit was 1; the sink comes last
    let sigma = 1usize << k;
    let dead = sigma as State;
    let mut delta = Vec::with_capacity((sigma + 1) * sigma);
    for mask in 0..sigma {
        for s in 0..sigma {
            delta.push(if s & mask != 0 { dead } else { s as State });
        }
    }
    delta.extend(std::iter::repeat_n(dead, sigma));
    let mut finals = vec![true; sigma];
    finals.push(false);
    Dfa::from_parts(k, 0, finals, delta).expect("well-formed table").minimize()
}

fn check_lt_exhaustive(dfa: &Dfa, max: u64) -> bool {
    let len = zeckendorf::rep_len(max);
    let words: Vec<ZeckWord> = (0..=max).map(|v| zeckendorf::encode(v).padded(len)).collect();
    for (x, wx) in words.iter().enumerate() {
        for (y, wy) in words.iter().enumerate() {
            let mut q = dfa.initial();
            for (a, b) in wx.digits().iter().zip(wy.digits()) {
                q = dfa.next(q, u32::from(a << 1 | b));
            }
            if dfa.is_final(q) != (x < y) {
                return false;
            }
        }
    }
    true
}

/// `x < y`, as strict lexicographic order of equal-length padded words.
pub fn build_less_than(bounds: &CertBounds) -> Result<CertifiedRelation> {
    // states: 0 equal so far, 1 already smaller, 2 already larger
    #[rustfmt::skip]
    let delta = vec![
        0, 1, 2, 0,
        1, 1, 1, 1,
        2, 2, 2, 2,
    ];
    let raw = Dfa::from_parts(2, 0, vec![false, true, false], delta)?;
    let dfa = raw.intersect(&build_validity(2))?;
    let mut c = Checker::new("lt");
    c.require(format!("agrees with integer order for x, y <= {}", bounds.lt_max), check_lt_exhaustive(&dfa, bounds.lt_max))?;
    Ok(c.finish(dfa))
}

fn require_name(rel: &CertifiedRelation, name: &'static str) {
    assert_eq!(rel.name, name, "certification chain expects `{name}`");
}

/// `m = n + 1`, learned from data and fixed by its order properties.
pub fn build_successor(lt: &CertifiedRelation, bounds: &CertBounds) -> Result<CertifiedRelation> {
    require_name(lt, "lt");
    let top = bounds.succ_samples.saturating_sub(1);
    let oracle = |x: &[u64]| Some(x[0] + 1);
    let dfa = inference::learn_function(1, top, &oracle, &GuessOptions::default())
        .map_err(|source| CertificationError::Inference { relation: "succ", source })?;
    let mut reg = Registry::new();
    reg.insert_base("lt", lt.automaton.clone());
    reg.insert_base("succ", dfa.clone());
    let mut c = Checker::new("succ");
    c.sentence("total", &reg, "An Em $succ(n,m)")?;
    c.sentence("functional", &reg, "~En,m1,m2 $succ(n,m1) & $succ(n,m2) & m1!=m2")?;
    c.sentence("increasing", &reg, "An,m $succ(n,m) => n<m")?;
    c.sentence("no gap", &reg, "An,m,k $succ(n,m) => ~(n<k & k<m)")?;
    c.sentence("starts at zero", &reg, "$succ(0,1)")?;
    Ok(c.finish(dfa))
}

/// `z = x + y`, learned from data and fixed by induction over `succ`.
pub fn build_adder(
    lt: &CertifiedRelation,
    succ: &CertifiedRelation,
    bounds: &CertBounds,
) -> Result<CertifiedRelation> {
    require_name(lt, "lt");
    require_name(succ, "succ");
    let oracle = |x: &[u64]| Some(x[0] + x[1]);
    let dfa = inference::learn_function(2, bounds.add_samples, &oracle, &GuessOptions::default())
        .map_err(|source| CertificationError::Inference { relation: "add", source })?;
    let mut reg = Registry::new();
    reg.insert_base("lt", lt.automaton.clone());
    reg.insert_base("succ", succ.automaton.clone());
    reg.insert_base("add", dfa.clone());
    let mut c = Checker::new("add");
    c.sentence("total", &reg, "Ax,y Ez $add(x,y,z)")?;
    c.sentence("functional", &reg, "~Ex,y,z1,z2 $add(x,y,z1) & $add(x,y,z2) & z1!=z2")?;
    c.sentence("identity", &reg, "Ax $add(x,0,x)")?;
    c.sentence("commutative", &reg, "Ax,y,z $add(x,y,z) <=> $add(y,x,z)")?;
    c.sentence(
        "successor step",
        &reg,
        "Ax,y,yp,z,zp ($add(x,y,z) & $succ(y,yp) & $succ(z,zp)) => $add(x,yp,zp)",
    )?;
    Ok(c.finish(dfa))
}

/// `(y)_F = (x)_F 0`.
pub fn build_shift(bounds: &CertBounds) -> Result<CertifiedRelation> {
    let dfa = regex_to_dfa("([0,0]|[0,1][1,1]*[1,0])*", 2)?.intersect(&build_validity(2))?;
    let mut c = Checker::new("shift");
    let ok = (0..=bounds.shift_max).all(|x| {
        let expected = zeckendorf::decode(&zeckendorf::encode(x).shifted());
        dfa.function_value(&[x], 1, 1) == Some(expected)
    });
    c.require(format!("agrees with appending a zero for x <= {}", bounds.shift_max), ok)?;
    Ok(c.finish(dfa))
}

fn check_function(dfa: &Dfa, max: u64, f: impl Fn(u64) -> u64) -> bool {
    (0..=max).all(|n| dfa.function_value(&[n], 1, 2) == Some(f(n)))
}

/// `x = floor(alpha n)`: append a zero to the representation of `n`, then
/// subtract one when `n > 0` and that representation ends in an even
/// number of zeros.
pub fn build_phin(
    lt: &CertifiedRelation,
    add: &CertifiedRelation,
    shift: &CertifiedRelation,
    bounds: &CertBounds,
) -> Result<CertifiedRelation> {
    require_name(lt, "lt");
    require_name(add, "add");
    require_name(shift, "shift");
    let mut reg = Registry::new();
    reg.insert_base("lt", lt.automaton.clone());
    reg.insert_base("add", add.automaton.clone());
    reg.insert_base("shift", shift.automaton.clone());
    reg.insert_base("evtz", regex_to_dfa("(0|1)*1(00)*", 1)?.intersect(&build_validity(1))?);
    let dfa = logic::compile_str("Ey $shift(n,y) & (($evtz(n) & x+1=y) | (~$evtz(n) & x=y))", &reg)?
        .without_labels();
    let mut c = Checker::new("phin");
    c.require(format!("agrees with floor(alpha n) for n <= {}", bounds.phin_max), check_function(&dfa, bounds.phin_max, floor_alpha))?;
    reg.insert_base("phin", dfa.clone());
    c.sentence("total", &reg, "An Ex $phin(n,x)")?;
    c.sentence("functional", &reg, "~En,x,y $phin(n,x) & $phin(n,y) & x!=y")?;
    c.sentence("increasing", &reg, "An,m,x,y (n<m & $phin(n,x) & $phin(m,y)) => x<y")?;
    Ok(c.finish(dfa))
}

/// `x = floor(alpha^2 n) = n + floor(alpha n)`.
pub fn build_phi2n(
    lt: &CertifiedRelation,
    add: &CertifiedRelation,
    phin: &CertifiedRelation,
    bounds: &CertBounds,
) -> Result<CertifiedRelation> {
    require_name(lt, "lt");
    require_name(add, "add");
    require_name(phin, "phin");
    let mut reg = Registry::new();
    reg.insert_base("lt", lt.automaton.clone());
    reg.insert_base("add", add.automaton.clone());
    reg.insert_base("phin", phin.automaton.clone());
    let dfa = logic::compile_str("Ey $phin(n,y) & x=n+y", &reg)?.without_labels();
    let mut c = Checker::new("phi2n");
    let max = bounds.phin_max.min(100_000);
    c.require(format!("agrees with floor(alpha^2 n) for n <= {max}"), check_function(&dfa, max, floor_alpha_sq))?;
    Ok(c.finish(dfa))
}

/// The full certified set.
#[derive(Debug, Clone)]
pub struct BaseRelations {
    pub lt: CertifiedRelation,
    pub succ: CertifiedRelation,
    pub add: CertifiedRelation,
    pub shift: CertifiedRelation,
    pub phin: CertifiedRelation,
    pub phi2n: CertifiedRelation,
}

impl BaseRelations {
    pub fn build(bounds: &CertBounds) -> Result<Self> {
        let lt = build_less_than(bounds)?;
        let succ = build_successor(&lt, bounds)?;
        let add = build_adder(&lt, &succ, bounds)?;
        let shift = build_shift(bounds)?;
        let phin = build_phin(&lt, &add, &shift, bounds)?;
        let phi2n = build_phi2n(&lt, &add, &phin, bounds)?;
        Ok(BaseRelations { lt, succ, add, shift, phin, phi2n })
    }

    /// Built once per process with default bounds.
    pub fn shared() -> Result<&'static BaseRelations> {
        static SHARED: OnceLock<std::result::Result<BaseRelations, String>> = OnceLock::new();
        SHARED
            .get_or_init(|| BaseRelations::build(&CertBounds::default()).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| CertificationError::Cached(e.clone()))
    }

    pub fn all(&self) -> [&CertifiedRelation; 6] {
        [&self.lt, &self.succ, &self.add, &self.shift, &self.phin, &self.phi2n]
    }

    /// A registry holding every base relation and `valid_1` to `valid_3`.
    pub fn registry(&self) -> Registry {
        let mut reg = Registry::new();
        for rel in self.all() {
            reg.insert_base(rel.name, rel.automaton.clone());
        }
        for k in 1..=3 {
            reg.insert_base(&format!("valid_{k}"), build_validity(k));
        }
        reg
    }
}

/// Shifting twice adds: if `(y)_F = (x)_F 0` and `(z)_F = (y)_F 0` then
/// `z = x + y`.
pub const SHIFT_SUM_LEMMA: &str = "?msd_fib Ax,y,z ($shift(x,y) & $shift(y,z)) => z=x+y";

/// Generalized Fibonacci rows seeded by `(a, floor(alpha a) + e)` with
/// `e` in {0, 1} continue by shifting.
pub const SEEDED_ROW_LEMMA: &str =
    "?msd_fib Aa,b,c,d,x ($phin(a,x) & (b=x|b=x+1) & c=a+b & d=b+c) => $shift(c,d)";

pub fn check_lemmas(reg: &Registry) -> Result<[(&'static str, bool); 2]> {
    Ok([
        ("lem4", logic::eval_str(SHIFT_SUM_LEMMA, reg)?),
        ("fab", logic::eval_str(SEEDED_ROW_LEMMA, reg)?),
    ])
}
