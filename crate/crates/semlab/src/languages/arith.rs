//! Sums of decimal numerals: strings matching `numeral ("+" numeral)*`.
//!
//! The denotation of an expression is the sum of its numerals, provided the
//! whole surrounding string is a member of the language and the expression
//! sits on token boundaries: the left part must be empty or end with `+`,
//! the right part empty or start with `+`. The boundary rule is what keeps
//! the language strongly transparent.

use num_bigint::BigUint;

use crate::semantics::{Alphabet, Context, Language, Referent};

const ARITH_ORDER: &str = "0123456789+";

#[derive(Debug, Clone)]
pub struct ArithLanguage {
    alphabet: Alphabet,
}

pub fn make_arith() -> ArithLanguage {
    ArithLanguage { alphabet: Alphabet::from_str_order(ARITH_ORDER) }
}

/// Does `s` match `numeral ("+" numeral)*` with nonempty digit runs?
fn is_member(s: &str) -> bool {
    if s.is_empty() {
        return false;
    }
    let bytes = s.as_bytes();
    let mut run = 0usize;
    for &b in bytes {
        match b {
            b'0'..=b'9' => run += 1,
            b'+' => {
                if run == 0 {
                    return false;
                }
                run = 0;
            }
            _ => return false,
        }
    }
    run > 0
}

/// Sum of the numerals of a member string. Leading zeros are permitted and
/// read as decimal.
fn sum_of_numerals(s: &str) -> BigUint {
    let mut total = BigUint::from(0u32);
    for numeral in s.split('+') {
        total += numeral.parse::<BigUint>().expect("member numerals are decimal");
    }
    total
}

impl Language for ArithLanguage {
    fn name(&self) -> String {
        "arith".to_string()
    }

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn denote(&self, expr: &str, ctx: &Context) -> Referent {
        let left_ok = ctx.left.is_empty()
            || (ctx.left.ends_with('+') && is_member(&ctx.left[..ctx.left.len() - 1]));
        if !left_ok {
            return Referent::Null;
        }
        let right_ok = ctx.right.is_empty()
            || (ctx.right.starts_with('+') && is_member(&ctx.right[1..]));
        if !right_ok {
            return Referent::Null;
        }
        if !is_member(expr) {
            return Referent::Null;
        }
        Referent::Nat(sum_of_numerals(expr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_interpretation_in_context() {
        let arith = make_arith();
        assert_eq!(
            arith.denote("2+6", &Context::new("", "+4")),
            Referent::nat(8u32)
        );
    }

    #[test]
    fn bare_operator_is_invalid() {
        let arith = make_arith();
        assert_eq!(arith.denote("+", &Context::new("", "+")), Referent::Null);
        assert_eq!(arith.denote("", &Context::empty()), Referent::Null);
    }

    #[test]
    fn token_boundary_rule_rejects_digit_adjacency() {
        let arith = make_arith();
        // "1" does not end with "+", so "2" is not a complete token here.
        assert_eq!(arith.denote("2", &Context::new("1", "+3")), Referent::Null);
        assert_eq!(
            arith.denote("2", &Context::new("1+", "+3")),
            Referent::nat(2u32)
        );
    }

    #[test]
    fn leading_zeros_read_as_decimal() {
        let arith = make_arith();
        assert_eq!(arith.denote("007", &Context::empty()), Referent::nat(7u32));
        assert_eq!(
            arith.denote("007+01", &Context::empty()),
            Referent::nat(8u32)
        );
    }

    #[test]
    fn context_fragments_must_complete_a_member() {
        let arith = make_arith();
        assert_eq!(arith.denote("5", &Context::new("+", "")), Referent::Null);
        assert_eq!(arith.denote("5", &Context::new("++", "")), Referent::Null);
        assert_eq!(arith.denote("5", &Context::new("3+", "")), Referent::nat(5u32));
        assert_eq!(arith.denote("5", &Context::new("", "+")), Referent::Null);
    }

    #[test]
    fn denotation_is_deterministic() {
        let arith = make_arith();
        let ctx = Context::new("9+", "+0");
        assert_eq!(arith.denote("3+4", &ctx), arith.denote("3+4", &ctx));
    }
}
