//! A laboratory for a question about meaning: can assertion queries —
//! "do these two expressions denote the same thing here?" — suffice to
//! emulate a language's denotational semantics?
//!
//! The crate implements the full experimental apparatus as runnable,
//! testable pieces:
//!
//! - [`semantics`]: alphabets, contexts, referents, the [`Language`]
//!   interface, and the bounded-exhaustive strong-transparency check.
//! - [`oracle`]: assertion oracles with append-only query transcripts and
//!   opt-in budgets.
//! - [`languages`]: a strongly transparent arithmetic language and the
//!   non-transparent leq family with a hidden bound.
//! - [`emulation`]: string enumeration with ranking/unranking, the
//!   canonical-index and relation-table emulators, and binary-search bound
//!   recovery.
//! - [`adversary`]: the transcript-forging refutation experiment and the
//!   binary-vs-linear query-complexity harness.
//! - [`modal`]: possible-worlds denotations and assertions, the box
//!   theorem sweep, and the diamond underspecification counterexample.
//! - [`report`] and [`cli`]: deterministic experiment reports and the
//!   `semlab` binary driving everything.
//!
//! # Quick taste
//!
//! ```
//! use std::sync::Arc;
//! use semlab::emulation::emulate_eq;
//! use semlab::languages::make_arith;
//! use semlab::oracle::{AssertionOracle, Relation};
//!
//! let mut oracle = AssertionOracle::new(Arc::new(make_arith()), Relation::equality());
//! let rep = emulate_eq("2+2", &mut oracle).unwrap();
//! assert_eq!(rep.canonical, "4");
//! assert_eq!(rep.index.to_string(), "5");
//! ```
//!
//! The long-form guide lives in the `book/` directory and is mirrored into
//! [`guide`] so its snippets run as doc-tests.

pub mod adversary;
pub mod cli;
pub mod emulation;
pub mod guide;
pub mod languages;
pub mod modal;
pub mod oracle;
pub mod report;
pub mod semantics;

pub use languages::{make_arith, make_leq, make_leq_in, LeqParam};
pub use oracle::{AssertionOracle, QueryTranscript, Relation};
pub use semantics::{Context, Language, LanguageRef, Referent};
