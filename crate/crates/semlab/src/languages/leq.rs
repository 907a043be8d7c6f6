//! The leq family: two fixed program skeletons parameterized by a numeral
//! `n`, with a hidden bound `m` (possibly infinite) governing the truth of
//! the guard. The set variant replaces the order test with membership.
//!
//! Member strings are rendered bit-exactly: newlines are a single LF and
//! indentation is exactly four spaces, so contexts are byte-identical across
//! every member of the family. Semantics are assigned only to designated
//! slots of a member string; every other `(expression, context)` pair is
//! invalid.

use std::collections::BTreeSet;
use std::ops::Range;

use num_bigint::BigUint;

use crate::semantics::{Alphabet, Context, Language, Referent};

/// Digits first, then letters, then punctuation. Fixed for the lifetime of
/// the family.
const LEQ_ORDER: &str = "0123456789bdefilnopqrtuMT \n()-:<>";

const HEADER: &str = "def leq() -> bool:\n    return ";
const PRINT_OPEN: &str = "\nprint(";
const PRINT_CLOSE: &str = ")";

/// The hidden bound: a natural number or infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeqParam {
    Finite(BigUint),
    Infinite,
}

impl LeqParam {
    pub fn finite(m: impl Into<BigUint>) -> Self {
        LeqParam::Finite(m.into())
    }

    pub fn render(&self) -> String {
        match self {
            LeqParam::Finite(m) => m.to_string(),
            LeqParam::Infinite => "inf".to_string(),
        }
    }
}

/// Which expression fills the print slot of a template.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateSlot {
    LeqCall,
    TrueLiteral,
}

impl TemplateSlot {
    /// The expression filling the slot.
    pub fn text(self) -> &'static str {
        match self {
            TemplateSlot::LeqCall => "leq()",
            TemplateSlot::TrueLiteral => "True",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GuardStyle {
    LessThan,
    Membership,
}

impl GuardStyle {
    fn infix(self) -> &'static str {
        match self {
            GuardStyle::LessThan => " < ",
            GuardStyle::Membership => " in ",
        }
    }
}

fn render_context(guard: GuardStyle, variant: TemplateSlot, n: &BigUint) -> Context {
    // Both variants share the same context: the templates differ only in
    // the slot expression itself.
    let _ = variant;
    let left = format!("{HEADER}{n}{}M{PRINT_OPEN}", guard.infix());
    Context::new(left, PRINT_CLOSE)
}

/// The context `kappa_n` surrounding the print-slot expression of the
/// order-test template, rendered bit-exactly.
pub fn leq_context(variant: TemplateSlot, n: impl Into<BigUint>) -> Context {
    render_context(GuardStyle::LessThan, variant, &n.into())
}

/// Same as [`leq_context`] but for the membership-test template.
pub fn leq_in_context(variant: TemplateSlot, n: impl Into<BigUint>) -> Context {
    render_context(GuardStyle::Membership, variant, &n.into())
}

struct ParsedMember {
    n: BigUint,
    numeral_span: Range<usize>,
    guard_span: Range<usize>,
    m_span: Range<usize>,
    arg_span: Range<usize>,
    arg: TemplateSlot,
}

/// Canonical decimal: nonempty, all digits, no leading zero unless "0".
fn is_canonical_numeral(s: &str) -> bool {
    !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_digit())
        && (s.len() == 1 || !s.starts_with('0'))
}

fn parse_member(total: &str, guard: GuardStyle) -> Option<ParsedMember> {
    let rest = total.strip_prefix(HEADER)?;
    let numeral_start = HEADER.len();
    let digits: usize = rest.bytes().take_while(|b| b.is_ascii_digit()).count();
    let numeral = &rest[..digits];
    if !is_canonical_numeral(numeral) {
        return None;
    }
    let after_numeral = &rest[digits..];
    let infix = guard.infix();
    let after_infix = after_numeral.strip_prefix(infix)?;
    let after_m = after_infix.strip_prefix('M')?;
    let arg_text = after_m
        .strip_prefix(PRINT_OPEN)?
        .strip_suffix(PRINT_CLOSE)?;
    let arg = match arg_text {
        "leq()" => TemplateSlot::LeqCall,
        "True" => TemplateSlot::TrueLiteral,
        _ => return None,
    };

    let numeral_end = numeral_start + digits;
    let m_pos = numeral_end + infix.len();
    let arg_start = m_pos + 1 + PRINT_OPEN.len();
    Some(ParsedMember {
        n: numeral.parse().expect("canonical numeral parses"),
        numeral_span: numeral_start..numeral_end,
        guard_span: numeral_start..m_pos + 1,
        m_span: m_pos..m_pos + 1,
        arg_span: arg_start..arg_start + arg_text.len(),
        arg,
    })
}

fn slot_denotation(
    expr_span: Range<usize>,
    parsed: &ParsedMember,
    guard_value: bool,
    m_referent: Referent,
) -> Referent {
    if expr_span == parsed.arg_span {
        return match parsed.arg {
            TemplateSlot::TrueLiteral => Referent::Bool(true),
            TemplateSlot::LeqCall => Referent::Bool(guard_value),
        };
    }
    if expr_span == parsed.m_span {
        return m_referent;
    }
    if expr_span == parsed.numeral_span {
        return Referent::Nat(parsed.n.clone());
    }
    if expr_span == parsed.guard_span {
        return Referent::Bool(guard_value);
    }
    Referent::Null
}

fn shared_template_contexts(guard: GuardStyle) -> Vec<Context> {
    let mut ctxs = Vec::new();
    for n in 0u32..4 {
        let n = BigUint::from(n);
        ctxs.push(render_context(guard, TemplateSlot::LeqCall, &n));
    }
    // Contexts isolating the other designated slots, at n = 1.
    let one = BigUint::from(1u32);
    let infix = guard.infix();
    let tail = format!("{PRINT_OPEN}leq(){PRINT_CLOSE}");
    // numeral slot
    ctxs.push(Context::new(HEADER, format!("{infix}M{tail}")));
    // M slot
    ctxs.push(Context::new(format!("{HEADER}{one}{infix}"), tail.clone()));
    // whole guard expression slot
    ctxs.push(Context::new(HEADER, tail));
    ctxs
}

fn shared_designated_expressions(guard: GuardStyle) -> Vec<String> {
    vec![
        TemplateSlot::LeqCall.text().to_string(),
        TemplateSlot::TrueLiteral.text().to_string(),
        "M".to_string(),
        format!("1{}M", guard.infix()),
    ]
}

/// Order-test language: the guard is `n < m`, and `n < inf` holds for every
/// natural `n`.
#[derive(Debug, Clone)]
pub struct LeqLanguage {
    param: LeqParam,
    alphabet: Alphabet,
}

pub fn make_leq(param: LeqParam) -> LeqLanguage {
    LeqLanguage { param, alphabet: Alphabet::from_str_order(LEQ_ORDER) }
}

impl LeqLanguage {
    pub fn param(&self) -> &LeqParam {
        &self.param
    }

    fn guard_value(&self, n: &BigUint) -> bool {
        match &self.param {
            LeqParam::Finite(m) => n < m,
            LeqParam::Infinite => true,
        }
    }
}

impl Language for LeqLanguage {
    fn name(&self) -> String {
        format!("leq(m={})", self.param.render())
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn denote(&self, expr: &str, ctx: &Context) -> Referent {
        let total = ctx.plug(expr);
        let Some(parsed) = parse_member(&total, GuardStyle::LessThan) else {
            return Referent::Null;
        };
        let expr_span = ctx.left.len()..ctx.left.len() + expr.len();
        let m_referent = match &self.param {
            LeqParam::Finite(m) => Referent::Nat(m.clone()),
            LeqParam::Infinite => Referent::Inf,
        };
        let guard = self.guard_value(&parsed.n);
        slot_denotation(expr_span, &parsed, guard, m_referent)
    }

    fn template_contexts(&self) -> Vec<Context> {
        shared_template_contexts(GuardStyle::LessThan)
    }

    fn designated_expressions(&self) -> Vec<String> {
        shared_designated_expressions(GuardStyle::LessThan)
    }
}

/// Membership-test language: the guard is `n in S` for a finite set `S`.
#[derive(Debug, Clone)]
pub struct LeqInLanguage {
    set: BTreeSet<BigUint>,
    alphabet: Alphabet,
}

pub fn make_leq_in(set: impl IntoIterator<Item = u64>) -> LeqInLanguage {
    LeqInLanguage {
        set: set.into_iter().map(BigUint::from).collect(),
        alphabet: Alphabet::from_str_order(LEQ_ORDER),
    }
}

impl LeqInLanguage {
    pub fn set(&self) -> &BTreeSet<BigUint> {
        &self.set
    }
}

impl Language for LeqInLanguage {
    fn name(&self) -> String {
        let elems: Vec<String> = self.set.iter().map(|v| v.to_string()).collect();
        format!("leq-in({})", elems.join(","))
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn denote(&self, expr: &str, ctx: &Context) -> Referent {
        let total = ctx.plug(expr);
        let Some(parsed) = parse_member(&total, GuardStyle::Membership) else {
            return Referent::Null;
        };
        let expr_span = ctx.left.len()..ctx.left.len() + expr.len();
        let guard = self.set.contains(&parsed.n);
        // A finite set has no referent in our value space, so the M slot
        // itself stays invalid here.
        slot_denotation(expr_span, &parsed, guard, Referent::Null)
    }

    fn template_contexts(&self) -> Vec<Context> {
        shared_template_contexts(GuardStyle::Membership)
    }

    fn designated_expressions(&self) -> Vec<String> {
        shared_designated_expressions(GuardStyle::Membership)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_renders_bit_exactly() {
        let ctx = leq_context(TemplateSlot::LeqCall, 3u32);
        assert_eq!(
            ctx.plug("leq()"),
            "def leq() -> bool:\n    return 3 < M\nprint(leq())"
        );
        assert!(ctx.left.ends_with("print("));
        assert_eq!(ctx.right, ")");
    }

    #[test]
    fn true_literal_context_embeds_smallest_numeral() {
        let ctx = leq_context(TemplateSlot::TrueLiteral, 0u32);
        assert_eq!(
            ctx.plug("True"),
            "def leq() -> bool:\n    return 0 < M\nprint(True)"
        );
    }

    #[test]
    fn finite_guard_compares_against_bound() {
        let leq = make_leq(LeqParam::finite(5u32));
        let at = |n: u64| leq.denote("leq()", &leq_context(TemplateSlot::LeqCall, n));
        assert_eq!(at(3), Referent::Bool(true));
        assert_eq!(at(7), Referent::Bool(false));
        assert_eq!(at(5), Referent::Bool(false));
    }

    #[test]
    fn infinite_bound_equates_call_and_literal_everywhere() {
        let leq = make_leq(LeqParam::Infinite);
        for n in [0u64, 1, 9, 100, 987654321] {
            let ctx = leq_context(TemplateSlot::LeqCall, n);
            assert_eq!(
                leq.denote("leq()", &ctx),
                leq.denote("True", &ctx),
            );
        }
    }

    #[test]
    fn designated_slots_denote() {
        let leq = make_leq(LeqParam::finite(5u32));
        let m_slot = Context::new(
            "def leq() -> bool:\n    return 9 < ",
            "\nprint(leq())",
        );
        assert_eq!(leq.denote("M", &m_slot), Referent::nat(5u32));

        let numeral_slot = Context::new(
            "def leq() -> bool:\n    return ",
            " < M\nprint(True)",
        );
        assert_eq!(leq.denote("9", &numeral_slot), Referent::nat(9u32));

        let guard_slot = Context::new(
            "def leq() -> bool:\n    return ",
            "\nprint(leq())",
        );
        assert_eq!(leq.denote("9 < M", &guard_slot), Referent::Bool(false));
        assert_eq!(leq.denote("4 < M", &guard_slot), Referent::Bool(true));
    }

    #[test]
    fn infinite_m_slot_denotes_inf() {
        let leq = make_leq(LeqParam::Infinite);
        let m_slot = Context::new(
            "def leq() -> bool:\n    return 9 < ",
            "\nprint(leq())",
        );
        assert_eq!(leq.denote("M", &m_slot), Referent::Inf);
    }

    #[test]
    fn non_slot_substrings_are_invalid() {
        let leq = make_leq(LeqParam::finite(5u32));
        // Adjacent to `def`, the call is not a designated slot.
        let def_ctx = Context::new("def ", " -> bool:\n    return 3 < M\nprint(leq())");
        assert_eq!(leq.denote("leq()", &def_ctx), Referent::Null);
        // Whole program, empty expression, empty context: all invalid.
        let whole = leq_context(TemplateSlot::LeqCall, 3u64).plug("leq()");
        assert_eq!(leq.denote(&whole, &Context::empty()), Referent::Null);
        assert_eq!(leq.denote("", &leq_context(TemplateSlot::LeqCall, 3u64)), Referent::Null);
        assert_eq!(leq.denote("leq()", &Context::empty()), Referent::Null);
    }

    #[test]
    fn non_canonical_numerals_invalidate_the_member() {
        let leq = make_leq(LeqParam::finite(5u32));
        let padded = Context::new(
            "def leq() -> bool:\n    return 007 < M\nprint(",
            ")",
        );
        assert_eq!(leq.denote("leq()", &padded), Referent::Null);
    }

    #[test]
    fn membership_variant_tests_the_set() {
        let lang = make_leq_in([2, 4]);
        let at = |n: u64| lang.denote("leq()", &leq_in_context(TemplateSlot::LeqCall, n));
        assert_eq!(at(2), Referent::Bool(true));
        assert_eq!(at(3), Referent::Bool(false));
        assert_eq!(at(4), Referent::Bool(true));

        let empty = make_leq_in([]);
        for n in [0u64, 1, 10] {
            assert_eq!(
                empty.denote("leq()", &leq_in_context(TemplateSlot::LeqCall, n)),
                Referent::Bool(false)
            );
        }
        let zero = make_leq_in([0]);
        assert_eq!(
            zero.denote("leq()", &leq_in_context(TemplateSlot::LeqCall, 0u64)),
            Referent::Bool(true)
        );
    }

    #[test]
    fn membership_variant_rejects_order_template() {
        let lang = make_leq_in([2, 4]);
        assert_eq!(
            lang.denote("leq()", &leq_context(TemplateSlot::LeqCall, 2u64)),
            Referent::Null
        );
    }

    #[test]
    fn alphabet_covers_every_template_symbol() {
        let leq = make_leq(LeqParam::finite(5u32));
        let rendered = leq_context(TemplateSlot::LeqCall, 1234567890u64).plug("leq()");
        for c in rendered.chars() {
            assert!(leq.alphabet().index_of(c).is_some(), "missing symbol {c:?}");
        }
        let rendered_in = leq_in_context(TemplateSlot::TrueLiteral, 5u64).plug("True");
        for c in rendered_in.chars() {
            assert!(leq.alphabet().index_of(c).is_some(), "missing symbol {c:?}");
        }
    }
}
