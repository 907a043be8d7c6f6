//! The long-form guide from `book/`, mirrored into rustdoc so every code
//! block runs under `cargo test --doc`. One module per chapter keeps
//! failures attributable to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/semantics.md")]
pub mod semantics {}

#[doc = include_str!("../../../book/src/oracles.md")]
pub mod oracles {}

#[doc = include_str!("../../../book/src/emulation.md")]
pub mod emulation {}

#[doc = include_str!("../../../book/src/adversary.md")]
pub mod adversary {}

#[doc = include_str!("../../../book/src/modal.md")]
pub mod modal {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
