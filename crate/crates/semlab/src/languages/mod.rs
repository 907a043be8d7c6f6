//! Concrete language instances: the arithmetic sum language and the
//! leq family (finite bound, infinite bound, and the set-membership
//! variant), with bit-exact template rendering.

mod arith;
mod leq;

pub use arith::{make_arith, ArithLanguage};
pub use leq::{
    leq_context, leq_in_context, make_leq, make_leq_in, LeqInLanguage, LeqLanguage, LeqParam,
    TemplateSlot,
};
