//! Foundational types: alphabets, contexts, referents, and the language
//! interface, plus the strong-transparency and comparison checks.
//!
//! A [`Language`] assigns every `(expression, context)` pair a [`Referent`].
//! Invalidity is a value ([`Referent::Null`]), never an error: any string in
//! any context is a legal query.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

/// Default node budget for bounded-exhaustive enumerations.
///
/// Large enough for every run shipped in the test suite; override through
/// the `SEMLAB_BUDGET` environment variable in the CLI.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("enumeration budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("alphabet symbols must be distinct (duplicate {0:?})")]
    DuplicateSymbol(char),
}

/// An ordered set of distinct symbols. The order is fixed for the lifetime
/// of a language and determines the lexicographic enumeration of strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, SemanticsError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        let mut seen = BTreeSet::new();
        for &s in &symbols {
            if !seen.insert(s) {
                return Err(SemanticsError::DuplicateSymbol(s));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn from_str_order(order: &str) -> Self {
        Self::new(order.chars()).expect("alphabet literal has duplicate symbols")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, idx: usize) -> Option<char> {
        self.symbols.get(idx).copied()
    }

    pub fn index_of(&self, sym: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == sym)
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }
}

/// A syntactic context: the pair of strings surrounding an expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Context {
    pub left: String,
    pub right: String,
}

impl Context {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Self {
        Context { left: left.into(), right: right.into() }
    }

    /// The empty context (both sides are the empty string).
    pub fn empty() -> Self {
        Context { left: String::new(), right: String::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }

    /// The full string obtained by plugging `expr` into this context.
    pub fn plug(&self, expr: &str) -> String {
        let mut s = String::with_capacity(self.left.len() + expr.len() + self.right.len());
        s.push_str(&self.left);
        s.push_str(expr);
        s.push_str(&self.right);
        s
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\u{27e8}{:?}, {:?}\u{27e9}", self.left, self.right)
    }
}

/// A tagged semantic value. `Null` is the unique representation of
/// invalidity; `Inf` is a distinct tag so no finite numeral can collide
/// with it. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Referent {
    Nat(BigUint),
    Bool(bool),
    Inf,
    Null,
}

impl Referent {
    pub fn nat(v: impl Into<BigUint>) -> Self {
        Referent::Nat(v.into())
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Referent::Null)
    }

    /// Stable textual rendering used in reports.
    pub fn render(&self) -> String {
        match self {
            Referent::Nat(n) => format!("nat:{n}"),
            Referent::Bool(b) => format!("bool:{b}"),
            Referent::Inf => "inf".to_string(),
            Referent::Null => "null".to_string(),
        }
    }
}

impl fmt::Display for Referent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A named semantics object: a total, deterministic denotation function over
/// a fixed ordered alphabet.
///
/// `template_contexts` and `designated_expressions` let non-transparent
/// languages contribute their interesting long contexts and slot expressions
/// to bounded-exhaustive pools, where plain enumeration would never reach
/// them.
pub trait Language: Send + Sync {
    fn name(&self) -> String;

    fn alphabet(&self) -> &Alphabet;

    /// The contextual denotation. Returns [`Referent::Null`] exactly when
    /// `expr` is invalid in `ctx`.
    fn denote(&self, expr: &str, ctx: &Context) -> Referent;

    /// Contexts the language designates as worth probing even though they
    /// are too long to enumerate.
    fn template_contexts(&self) -> Vec<Context> {
        Vec::new()
    }

    /// Expressions the language designates as worth probing even though
    /// they are too long to enumerate.
    fn designated_expressions(&self) -> Vec<String> {
        Vec::new()
    }
}

pub type LanguageRef = Arc<dyn Language>;

/// All strings over `alphabet` of length `<= max_len`, in enumeration order.
pub fn strings_up_to(alphabet: &Alphabet, max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for prefix in &layer {
            for &sym in alphabet.symbols() {
                let mut s = String::with_capacity(prefix.len() + 1);
                s.push_str(prefix);
                s.push(sym);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The support of a context: every expression of length `<= max_len` that is
/// valid in it, found by exhaustive enumeration.
pub fn support_of_context(
    lang: &dyn Language,
    ctx: &Context,
    max_len: usize,
    budget: u64,
) -> Result<BTreeSet<String>, SemanticsError> {
    let mut support = BTreeSet::new();
    let mut nodes: u64 = 0;
    for e in strings_up_to(lang.alphabet(), max_len) {
        nodes += 1;
        if nodes > budget {
            return Err(SemanticsError::BudgetExceeded { budget });
        }
        if !lang.denote(&e, ctx).is_null() {
            support.insert(e);
        }
    }
    Ok(support)
}

/// A single failure of context-independence: `expr` denotes differently in
/// `context` than in the empty context.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TransparencyWitness {
    pub expr: String,
    pub context: Context,
    pub at_empty: String,
    pub at_context: String,
}

/// Outcome of a bounded-exhaustive transparency check. An empty witness list
/// means the language passed at these bounds; the bounds are part of the
/// report because the property itself quantifies over all contexts.
#[derive(Debug, Clone, Serialize)]
pub struct TransparencyReport {
    pub language: String,
    pub expr_max_len: usize,
    pub ctx_max_len: usize,
    pub expressions_checked: u64,
    pub contexts_checked: u64,
    pub evaluations: u64,
    pub witnesses: Vec<TransparencyWitness>,
}

impl TransparencyReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Exhaustively tests that every expression's denotation is either absent or
/// identical to its denotation in the empty context.
///
/// The expression pool is every string up to `expr_max_len` plus the
/// language's designated expressions; the context pool is every pair with
/// `|l| + |r| <= ctx_max_len` plus the language's template contexts.
pub fn check_strong_transparency(
    lang: &dyn Language,
    expr_max_len: usize,
    ctx_max_len: usize,
    budget: u64,
) -> Result<TransparencyReport, SemanticsError> {
    let mut exprs = strings_up_to(lang.alphabet(), expr_max_len);
    for e in lang.designated_expressions() {
        if !exprs.contains(&e) {
            exprs.push(e);
        }
    }

    let mut contexts = Vec::new();
    for total in 0..=ctx_max_len {
        for left_len in 0..=total {
            let right_len = total - left_len;
            for l in strings_of_len(lang.alphabet(), left_len) {
                for r in strings_of_len(lang.alphabet(), right_len) {
                    contexts.push(Context::new(l.clone(), r));
                }
            }
        }
    }
    for ctx in lang.template_contexts() {
        if !contexts.contains(&ctx) {
            contexts.push(ctx);
        }
    }

    let mut evaluations: u64 = 0;
    let bump = |evaluations: &mut u64| -> Result<(), SemanticsError> {
        *evaluations += 1;
        if *evaluations > budget {
            Err(SemanticsError::BudgetExceeded { budget })
        } else {
            Ok(())
        }
    };

    let empty = Context::empty();
    let mut base = Vec::with_capacity(exprs.len());
    for e in &exprs {
        bump(&mut evaluations)?;
        base.push(lang.denote(e, &empty));
    }

    let mut witnesses = Vec::new();
    for ctx in &contexts {
        if ctx.is_empty() {
            continue;
        }
        for (e, base_val) in exprs.iter().zip(&base) {
            bump(&mut evaluations)?;
            let v = lang.denote(e, ctx);
            if !v.is_null() && v != *base_val {
                witnesses.push(TransparencyWitness {
                    expr: e.clone(),
                    context: ctx.clone(),
                    at_empty: base_val.render(),
                    at_context: v.render(),
                });
            }
        }
    }

    Ok(TransparencyReport {
        language: lang.name(),
        expr_max_len,
        ctx_max_len,
        expressions_checked: exprs.len() as u64,
        contexts_checked: contexts.len() as u64,
        evaluations,
        witnesses,
    })
}

fn strings_of_len(alphabet: &Alphabet, len: usize) -> Vec<String> {
    if len == 0 {
        return vec![String::new()];
    }
    let mut layer = vec![String::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for prefix in &layer {
            for &sym in alphabet.symbols() {
                let mut s = String::with_capacity(len);
                s.push_str(prefix);
                s.push(sym);
                next.push(s);
            }
        }
        layer = next;
    }
    layer
}

/// Ground-truth comparison: evaluates both expressions in `ctx` and applies
/// the relation directly. Used as the independent oracle in tests and by the
/// adversary's replay step.
pub fn compare(
    lang: &dyn Language,
    rel: &crate::oracle::Relation,
    e: &str,
    e_prime: &str,
    ctx: &Context,
) -> bool {
    rel.holds(&lang.denote(e, ctx), &lang.denote(e_prime, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::languages::{make_arith, make_leq, LeqParam};
    use crate::oracle::Relation;

    #[test]
    fn alphabet_rejects_duplicates() {
        assert!(Alphabet::new("aba".chars()).is_err());
        assert_eq!(Alphabet::new("ab".chars()).unwrap().len(), 2);
    }

    #[test]
    fn empty_context_roundtrip() {
        let ctx = Context::empty();
        assert!(ctx.is_empty());
        assert_eq!(ctx.plug("xy"), "xy");
    }

    #[test]
    fn referent_equality_is_structural() {
        assert_eq!(Referent::nat(4u32), Referent::nat(4u32));
        assert_ne!(Referent::Inf, Referent::nat(4u32));
        assert_ne!(Referent::Null, Referent::Bool(false));
        assert_eq!(Referent::Null, Referent::Null);
    }

    #[test]
    fn support_of_arith_digit_slot() {
        let arith = make_arith();
        let ctx = Context::new("", "+4");
        let support = support_of_context(&arith, &ctx, 1, DEFAULT_BUDGET).unwrap();
        let expected: BTreeSet<String> =
            (0..=9).map(|d| d.to_string()).collect();
        assert_eq!(support, expected);
    }

    #[test]
    fn support_after_bare_plus_is_empty() {
        let arith = make_arith();
        let ctx = Context::new("+", "");
        let support = support_of_context(&arith, &ctx, 1, DEFAULT_BUDGET).unwrap();
        assert!(support.is_empty());
    }

    #[test]
    fn support_budget_is_enforced() {
        let arith = make_arith();
        let err = support_of_context(&arith, &Context::empty(), 3, 10).unwrap_err();
        assert_eq!(err, SemanticsError::BudgetExceeded { budget: 10 });
    }

    #[test]
    fn support_characterizes_validity() {
        let arith = make_arith();
        let ctx = Context::new("", "+4");
        let support = support_of_context(&arith, &ctx, 3, DEFAULT_BUDGET).unwrap();
        for e in strings_up_to(arith.alphabet(), 3) {
            assert_eq!(
                support.contains(&e),
                !arith.denote(&e, &ctx).is_null(),
                "support membership disagrees with denotation for {e:?}"
            );
        }
    }

    #[test]
    fn arith_is_transparent_at_small_bounds() {
        let arith = make_arith();
        let report = check_strong_transparency(&arith, 3, 3, DEFAULT_BUDGET).unwrap();
        assert!(report.passed(), "unexpected witnesses: {:?}", report.witnesses);
    }

    #[test]
    fn leq_produces_transparency_witness() {
        let leq = make_leq(LeqParam::finite(5u32));
        let report = check_strong_transparency(&leq, 1, 1, DEFAULT_BUDGET).unwrap();
        assert!(report
            .witnesses
            .iter()
            .any(|w| w.expr == "leq()" && w.at_empty == "null"));
    }

    #[test]
    fn degenerate_bounds_pass_when_empty_string_is_invalid() {
        let arith = make_arith();
        let report = check_strong_transparency(&arith, 0, 0, DEFAULT_BUDGET).unwrap();
        assert!(report.passed());
        assert!(arith.denote("", &Context::empty()).is_null());
    }

    #[test]
    fn compare_matches_direct_evaluation() {
        let arith = make_arith();
        let eq = Relation::equality();
        assert!(compare(&arith, &eq, "4", "2+2", &Context::empty()));
        assert!(!compare(&arith, &eq, "4", "5", &Context::empty()));
        let leq = Relation::nat_leq();
        assert!(compare(&arith, &leq, "2+1", "4", &Context::empty()));
    }

    #[test]
    fn compare_is_reflexive_for_equality() {
        let arith = make_arith();
        let eq = Relation::equality();
        for e in ["", "4", "+", "2+2", "++"] {
            for ctx in [Context::empty(), Context::new("1+", "+3")] {
                assert!(compare(&arith, &eq, e, e, &ctx));
            }
        }
    }
}
