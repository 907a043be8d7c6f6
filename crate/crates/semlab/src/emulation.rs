//! Constructive emulators built on assertion queries: lexicographic string
//! enumeration with ranking/unranking, the canonical-index equality
//! emulator, the memoizing relation emulator, and a binary-search bound
//! recovery strategy for the leq family.
//!
//! All emulators query only the empty context. Their deciders ignore the
//! context argument; context-sensitive behavior is exactly what they cannot
//! deliver, which the adversary module demonstrates.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::languages::{leq_context, TemplateSlot};
use crate::oracle::{AssertionOracle, OracleError};
use crate::semantics::{Alphabet, Context};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmulationError {
    #[error("candidate budget of {max_candidates} exceeded while emulating {expr:?}")]
    CandidateBudgetExceeded { expr: String, max_candidates: BigUint },
    #[error("neither relation table contains the key ({0:?}, {1:?}); tables were built against different enumerations")]
    InconsistentTables(String, String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Lazily yields the empty string, then all strings of length 1 in alphabet
/// order, then length 2, and so on. Every string over the alphabet appears
/// exactly once.
pub struct StringEnumerator<'a> {
    alphabet: &'a Alphabet,
    /// Symbol positions of the next string; empty means the empty string.
    digits: Vec<usize>,
    started: bool,
}

impl<'a> StringEnumerator<'a> {
    pub fn new(alphabet: &'a Alphabet) -> Self {
        StringEnumerator { alphabet, digits: Vec::new(), started: false }
    }

    fn render(&self) -> String {
        self.digits
            .iter()
            .map(|&d| self.alphabet.symbol(d).expect("digit in range"))
            .collect()
    }

    fn advance(&mut self) {
        let k = self.alphabet.len();
        for i in (0..self.digits.len()).rev() {
            if self.digits[i] + 1 < k {
                self.digits[i] += 1;
                return;
            }
            self.digits[i] = 0;
        }
        self.digits.insert(0, 0);
    }
}

impl Iterator for StringEnumerator<'_> {
    type Item = String;

    fn next(&mut self) -> Option<String> {
        if self.alphabet.is_empty() {
            // Only the empty string exists over an empty alphabet.
            if self.started {
                return None;
            }
            self.started = true;
            return Some(String::new());
        }
        if !self.started {
            self.started = true;
        } else {
            self.advance();
        }
        Some(self.render())
    }
}

/// Rank of `s` in enumeration order. The empty string has index 0.
pub fn string_index(alphabet: &Alphabet, s: &str) -> Option<BigUint> {
    let k = BigUint::from(alphabet.len());
    let mut shorter = BigUint::zero();
    let mut power = BigUint::one();
    for _ in 0..s.chars().count() {
        shorter += &power;
        power *= &k;
    }
    let mut within = BigUint::zero();
    for c in s.chars() {
        let d = alphabet.index_of(c)?;
        within = within * &k + BigUint::from(d);
    }
    Some(shorter + within)
}

/// Inverse of [`string_index`]: the string at a given rank.
pub fn string_at(alphabet: &Alphabet, index: &BigUint) -> String {
    let k = BigUint::from(alphabet.len());
    let mut len = 0usize;
    let mut shorter = BigUint::zero();
    let mut power = BigUint::one();
    // Find the length block containing the index.
    while index >= &(&shorter + &power) {
        shorter += &power;
        power *= &k;
        len += 1;
    }
    let mut within = index - shorter;
    let mut digits = vec![0usize; len];
    for slot in digits.iter_mut().rev() {
        let rem = &within % &k;
        *slot = usize::try_from(&rem).expect("digit fits usize");
        within /= &k;
    }
    digits
        .into_iter()
        .map(|d| alphabet.symbol(d).expect("digit in range"))
        .collect()
}

/// Convenience constructor matching the enumeration contract.
pub fn all_strings(alphabet: &Alphabet) -> StringEnumerator<'_> {
    StringEnumerator::new(alphabet)
}

/// The emulated representation for equality: the rank of the first
/// enumerated string the oracle deems equivalent, plus the string itself
/// for debugging and reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalRepresentation {
    #[serde(serialize_with = "crate::report::biguint_as_string")]
    pub index: BigUint,
    pub canonical: String,
    pub queries_used: u64,
}

/// Scans candidates in enumeration order and returns the first the oracle
/// equates with `expr` in the empty context. Terminates within
/// `index(expr) + 1` candidates, since the expression always matches
/// itself; that tight bound is also the default candidate budget, so misuse
/// on a non-transparent language fails loudly instead of looping.
pub fn emulate_eq(
    expr: &str,
    oracle: &mut AssertionOracle,
) -> Result<CanonicalRepresentation, EmulationError> {
    let bound = string_index(oracle.language().alphabet(), expr)
        .map(|idx| idx + 1u32)
        .unwrap_or_else(|| {
            // Expression not over the alphabet: it can still match the empty
            // string if both are invalid, so allow one candidate.
            BigUint::one()
        });
    emulate_eq_bounded(expr, oracle, &bound)
}

pub fn emulate_eq_bounded(
    expr: &str,
    oracle: &mut AssertionOracle,
    max_candidates: &BigUint,
) -> Result<CanonicalRepresentation, EmulationError> {
    debug_assert_eq!(oracle.relation().name(), "eq");
    let empty = Context::empty();
    let before = oracle.query_count();
    let alphabet = oracle.language().alphabet().clone();
    let limit = u128::try_from(max_candidates).unwrap_or(u128::MAX);
    let mut index: u128 = 0;
    for cand in all_strings(&alphabet) {
        if index >= limit {
            break;
        }
        if oracle.assert_query(expr, &cand, &empty)? {
            return Ok(CanonicalRepresentation {
                index: BigUint::from(index),
                canonical: cand,
                queries_used: oracle.query_count() - before,
            });
        }
        index += 1;
    }
    Err(EmulationError::CandidateBudgetExceeded {
        expr: expr.to_string(),
        max_candidates: max_candidates.clone(),
    })
}

/// The decider paired with [`emulate_eq`]: index equality. The context is
/// ignored, which is sound exactly when the language is strongly
/// transparent.
pub fn delta_eq(
    a: &CanonicalRepresentation,
    b: &CanonicalRepresentation,
    _ctx: &Context,
) -> bool {
    a.index == b.index
}

/// The emulated representation for an arbitrary relation: the relation bits
/// between the subject and every string enumerated up to and including it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTable {
    pub subject: String,
    pub entries: BTreeMap<(String, String), bool>,
}

impl RelationTable {
    pub fn get(&self, a: &str, b: &str) -> Option<bool> {
        self.entries.get(&(a.to_string(), b.to_string())).copied()
    }

    /// Byte-stable rendering: a sorted list of `(pair, bit)` rows.
    pub fn to_sorted_rows(&self) -> Vec<(String, String, bool)> {
        self.entries
            .iter()
            .map(|((a, b), &bit)| (a.clone(), b.clone(), bit))
            .collect()
    }
}

/// Memoizes the relation against every candidate from the empty string up
/// to and including `expr`, in both argument orders. Termination is
/// guaranteed: enumeration reaches `expr` at its own rank.
pub fn emulate_rel(
    expr: &str,
    oracle: &mut AssertionOracle,
) -> Result<RelationTable, EmulationError> {
    let empty = Context::empty();
    let alphabet = oracle.language().alphabet().clone();
    let mut entries = BTreeMap::new();
    for cand in all_strings(&alphabet) {
        let forward = oracle.assert_query(expr, &cand, &empty)?;
        let backward = oracle.assert_query(&cand, expr, &empty)?;
        entries.insert((expr.to_string(), cand.clone()), forward);
        entries.insert((cand.clone(), expr.to_string()), backward);
        if cand == expr {
            return Ok(RelationTable { subject: expr.to_string(), entries });
        }
    }
    unreachable!("enumeration reaches every string over the alphabet")
}

/// The decider paired with [`emulate_rel`]: looks the pair up in the first
/// table, then the second. Whichever subject was enumerated later holds the
/// bit; both hold it when the subjects coincide.
pub fn delta_rel(
    a: &RelationTable,
    b: &RelationTable,
    _ctx: &Context,
) -> Result<bool, EmulationError> {
    if let Some(bit) = a.get(&a.subject, &b.subject) {
        return Ok(bit);
    }
    if let Some(bit) = b.get(&a.subject, &b.subject) {
        return Ok(bit);
    }
    Err(EmulationError::InconsistentTables(a.subject.clone(), b.subject.clone()))
}

/// Outcome of bound recovery over a finite search window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LeqEstimate {
    Exact(#[serde(serialize_with = "crate::report::u64_as_string")] u64),
    AboveBound,
}

/// Recovers the hidden bound of a leq language by binary search over
/// contexts `0..=n_max`, using at most `ceil(log2(n_max + 1)) + 1` queries.
/// Returns the exact bound when it lies in the window, `AboveBound`
/// otherwise (correctness is only claimed for bounds within the window).
pub fn binary_search_emulator(
    oracle: &mut AssertionOracle,
    n_max: u64,
) -> Result<(LeqEstimate, u64), OracleError> {
    let before = oracle.query_count();
    // Smallest n in 0..=n_max whose guard is false; n_max + 1 means none.
    let mut lo: u64 = 0;
    let mut hi: u64 = n_max + 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let ctx = leq_context(TemplateSlot::LeqCall, mid);
        if oracle.assert_query("leq()", "True", &ctx)? {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let queries = oracle.query_count() - before;
    let estimate = if lo > n_max { LeqEstimate::AboveBound } else { LeqEstimate::Exact(lo) };
    Ok((estimate, queries))
}

/// Queries contexts `0, 1, 2, ...` until the guard first fails; `bound + 1`
/// queries for a bound inside the window. The linear baseline for the
/// query-complexity comparison.
pub fn linear_scan_emulator(
    oracle: &mut AssertionOracle,
    n_max: u64,
) -> Result<(LeqEstimate, u64), OracleError> {
    let before = oracle.query_count();
    for n in 0..=n_max {
        let ctx = leq_context(TemplateSlot::LeqCall, n);
        if !oracle.assert_query("leq()", "True", &ctx)? {
            return Ok((LeqEstimate::Exact(n), oracle.query_count() - before));
        }
    }
    Ok((LeqEstimate::AboveBound, oracle.query_count() - before))
}
