//! Assertion oracles: black boxes answering whether two expressions stand in
//! a relation (by default, equality) within a given context.
//!
//! Every answered query is appended to a transcript in call order. The
//! transcript is the only channel through which the adversary observes an
//! emulator, so entries store full strings verbatim.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::semantics::{Context, Language, LanguageRef, Referent};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("query budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
}

/// A total decidable predicate on pairs of referents.
#[derive(Clone)]
pub struct Relation {
    name: &'static str,
    holds: fn(&Referent, &Referent) -> bool,
}

impl Relation {
    pub fn new(name: &'static str, holds: fn(&Referent, &Referent) -> bool) -> Self {
        Relation { name, holds }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn holds(&self, a: &Referent, b: &Referent) -> bool {
        (self.holds)(a, b)
    }

    /// Structural equality, including `null = null`.
    pub fn equality() -> Self {
        Relation::new("eq", |a, b| a == b)
    }

    /// Entailment as the numeric order on naturals. `null` is related only
    /// to `null`; `inf` sits above every natural.
    pub fn nat_leq() -> Self {
        Relation::new("leq", |a, b| match (a, b) {
            (Referent::Nat(x), Referent::Nat(y)) => x <= y,
            (Referent::Nat(_), Referent::Inf) => true,
            (Referent::Inf, Referent::Inf) => true,
            (Referent::Null, Referent::Null) => true,
            _ => false,
        })
    }

    /// Contrariety on booleans: both cannot be true at the same time.
    /// `null` (the empty set of situations) is contrary to everything.
    pub fn contrary() -> Self {
        Relation::new("contrary", |a, b| match (a, b) {
            (Referent::Bool(x), Referent::Bool(y)) => !(x & y),
            (Referent::Null, _) | (_, Referent::Null) => true,
            _ => false,
        })
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "eq" => Some(Relation::equality()),
            "leq" => Some(Relation::nat_leq()),
            "contrary" => Some(Relation::contrary()),
            _ => None,
        }
    }
}

impl std::fmt::Debug for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Relation").field("name", &self.name).finish()
    }
}

/// The relations shipped with the library.
pub fn relation_library() -> Vec<Relation> {
    vec![Relation::equality(), Relation::nat_leq(), Relation::contrary()]
}

/// One answered query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryRecord {
    pub expr: String,
    pub other: String,
    pub context: Context,
    pub answer: bool,
}

/// An ordered, append-only log of oracle queries.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct QueryTranscript {
    entries: Vec<QueryRecord>,
}

impl QueryTranscript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn entries(&self) -> &[QueryRecord] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &QueryRecord> {
        self.entries.iter()
    }

    pub fn extend(&mut self, other: QueryTranscript) {
        self.entries.extend(other.entries);
    }

    fn push(&mut self, record: QueryRecord) {
        self.entries.push(record);
    }
}

/// An assertion oracle over one language and one relation, with an optional
/// query budget. Single-writer: queries need `&mut self`; snapshots are
/// immutable clones.
pub struct AssertionOracle {
    lang: LanguageRef,
    rel: Relation,
    transcript: QueryTranscript,
    budget: Option<u64>,
}

impl AssertionOracle {
    pub fn new(lang: LanguageRef, rel: Relation) -> Self {
        AssertionOracle { lang, rel, transcript: QueryTranscript::new(), budget: None }
    }

    pub fn with_budget(lang: LanguageRef, rel: Relation, budget: u64) -> Self {
        AssertionOracle { lang, rel, transcript: QueryTranscript::new(), budget: Some(budget) }
    }

    /// Answers 1 iff the relation holds between the two denotations in
    /// `ctx`. For equality this includes `null = null`. The query and its
    /// answer are appended to the transcript.
    pub fn assert_query(
        &mut self,
        expr: &str,
        other: &str,
        ctx: &Context,
    ) -> Result<bool, OracleError> {
        if let Some(budget) = self.budget {
            if self.transcript.count() >= budget {
                return Err(OracleError::BudgetExhausted { budget });
            }
        }
        let answer = self
            .rel
            .holds(&self.lang.denote(expr, ctx), &self.lang.denote(other, ctx));
        self.transcript.push(QueryRecord {
            expr: expr.to_string(),
            other: other.to_string(),
            context: ctx.clone(),
            answer,
        });
        Ok(answer)
    }

    pub fn transcript(&self) -> &QueryTranscript {
        &self.transcript
    }

    /// Immutable snapshot; later queries do not alter it.
    pub fn snapshot(&self) -> QueryTranscript {
        self.transcript.clone()
    }

    pub fn query_count(&self) -> u64 {
        self.transcript.count()
    }

    pub fn language(&self) -> &dyn Language {
        self.lang.as_ref()
    }

    pub fn language_ref(&self) -> LanguageRef {
        Arc::clone(&self.lang)
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }
}

/// Re-answers every entry against `lang` and returns the index of the first
/// entry whose recorded bit differs, if any.
pub fn replay_first_mismatch(
    transcript: &QueryTranscript,
    lang: &dyn Language,
    rel: &Relation,
) -> Option<usize> {
    transcript.iter().position(|rec| {
        crate::semantics::compare(lang, rel, &rec.expr, &rec.other, &rec.context) != rec.answer
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::languages::{leq_context, make_arith, make_leq, LeqParam, TemplateSlot};
    use crate::semantics::{compare, strings_up_to, LanguageRef};
    use std::sync::Arc;

    fn arith_oracle() -> AssertionOracle {
        AssertionOracle::new(Arc::new(make_arith()), Relation::equality())
    }

    #[test]
    fn equality_query_matches_arithmetic() {
        let mut oracle = arith_oracle();
        assert!(oracle.assert_query("4", "2+2", &Context::empty()).unwrap());
        assert!(oracle.assert_query("4", "2+2", &Context::new("1+", "+3")).unwrap());
        assert!(!oracle.assert_query("4", "5", &Context::empty()).unwrap());
    }

    #[test]
    fn reflexivity_holds_even_for_invalid_strings() {
        let mut oracle = arith_oracle();
        for e in ["", "+", "leq()", "3+3"] {
            assert!(oracle.assert_query(e, e, &Context::empty()).unwrap());
        }
    }

    #[test]
    fn infinite_leq_always_equates_call_and_literal() {
        let mut oracle =
            AssertionOracle::new(Arc::new(make_leq(LeqParam::Infinite)), Relation::equality());
        for n in [0u64, 1, 7, 123456] {
            let ctx = leq_context(TemplateSlot::LeqCall, n);
            assert!(oracle.assert_query("leq()", "True", &ctx).unwrap());
        }
    }

    #[test]
    fn transcript_records_in_call_order() {
        let mut oracle = arith_oracle();
        assert_eq!(oracle.transcript().count(), 0);
        oracle.assert_query("1", "2", &Context::empty()).unwrap();
        oracle.assert_query("2", "2", &Context::empty()).unwrap();
        let snapshot = oracle.snapshot();
        oracle.assert_query("3", "3", &Context::empty()).unwrap();
        assert_eq!(snapshot.count(), 2);
        assert_eq!(oracle.transcript().count(), 3);
        assert_eq!(snapshot.entries()[0].expr, "1");
        assert!(!snapshot.entries()[0].answer);
        assert!(snapshot.entries()[1].answer);
    }

    #[test]
    fn transcript_replays_cleanly_on_same_language() {
        let mut oracle = arith_oracle();
        for (a, b) in [("1", "2"), ("2+2", "4"), ("+", "+"), ("", "0")] {
            oracle.assert_query(a, b, &Context::new("", "+1")).unwrap();
        }
        let arith = make_arith();
        assert_eq!(
            replay_first_mismatch(oracle.transcript(), &arith, &Relation::equality()),
            None
        );
    }

    #[test]
    fn budget_triggers_exactly_after_allowance() {
        let mut oracle = AssertionOracle::with_budget(
            Arc::new(make_arith()),
            Relation::equality(),
            3,
        );
        for _ in 0..3 {
            oracle.assert_query("1", "1", &Context::empty()).unwrap();
        }
        let err = oracle.assert_query("1", "1", &Context::empty()).unwrap_err();
        assert_eq!(err, OracleError::BudgetExhausted { budget: 3 });
    }

    #[test]
    fn relation_library_truth_tables() {
        let leq = Relation::nat_leq();
        assert!(leq.holds(&Referent::nat(3u32), &Referent::nat(4u32)));
        assert!(!leq.holds(&Referent::nat(4u32), &Referent::nat(3u32)));
        assert!(leq.holds(&Referent::Null, &Referent::Null));
        assert!(!leq.holds(&Referent::Null, &Referent::nat(0u32)));
        assert!(leq.holds(&Referent::nat(7u32), &Referent::Inf));

        // Brute-force the four boolean cases from the definition: contrary
        // iff not both true.
        let contrary = Relation::contrary();
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(
                    contrary.holds(&Referent::Bool(a), &Referent::Bool(b)),
                    !(a && b)
                );
            }
        }
        assert_eq!(relation_library().len(), 3);
    }

    #[test]
    fn oracle_equals_ground_truth_compare() {
        let arith = make_arith();
        let mut oracle = arith_oracle();
        let pool = strings_up_to(arith.alphabet(), 2);
        let ctxs = [Context::empty(), Context::new("", "+1"), Context::new("9+", "")];
        for e in pool.iter().take(40) {
            for e2 in pool.iter().take(40) {
                for ctx in &ctxs {
                    let via_oracle = oracle.assert_query(e, e2, ctx).unwrap();
                    let direct = compare(&arith, &Relation::equality(), e, e2, ctx);
                    assert_eq!(via_oracle, direct);
                }
            }
        }
    }

    #[test]
    fn equality_answers_track_value_classes_up_to_length_three() {
        // Agreement with value classes implies symmetry and transitivity.
        let arith = Arc::new(make_arith());
        let pool: Vec<String> = strings_up_to(arith.alphabet(), 3)
            .into_iter()
            .filter(|e| !arith.denote(e, &Context::empty()).is_null())
            .collect();
        let values: Vec<_> =
            pool.iter().map(|e| arith.denote(e, &Context::empty())).collect();
        let ctx = Context::empty();
        for (i, a) in pool.iter().enumerate() {
            // Fresh oracle per row keeps the transcript small.
            let mut oracle =
                AssertionOracle::new(Arc::clone(&arith) as LanguageRef, Relation::equality());
            for (j, b) in pool.iter().enumerate() {
                assert_eq!(
                    oracle.assert_query(a, b, &ctx).unwrap(),
                    values[i] == values[j],
                    "class disagreement at ({a}, {b})"
                );
            }
        }
    }

    #[test]
    fn equality_is_symmetric_and_transitive_on_small_arith() {
        let arith = make_arith();
        let mut oracle = arith_oracle();
        let pool: Vec<String> = strings_up_to(arith.alphabet(), 2)
            .into_iter()
            .filter(|e| !arith.denote(e, &Context::empty()).is_null())
            .collect();
        let ctx = Context::empty();
        let n = pool.len();
        let mut bits = vec![vec![false; n]; n];
        for (i, a) in pool.iter().enumerate() {
            for (j, b) in pool.iter().enumerate() {
                bits[i][j] = oracle.assert_query(a, b, &ctx).unwrap();
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(bits[i][j], bits[j][i], "symmetry failed at {i},{j}");
                for k in 0..n {
                    if bits[i][j] && bits[j][k] {
                        assert!(bits[i][k], "transitivity failed at {i},{j},{k}");
                    }
                }
            }
        }
    }
}
