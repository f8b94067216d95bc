//! The book, compiled.
//!
//! Each chapter of the mdbook guide under `book/` is included here as a
//! module's documentation, so `cargo test` compiles and runs every code
//! block in the book and the two can never drift apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/regions.md")]
pub mod regions {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting {}

#[doc = include_str!("../../../book/src/symmetry.md")]
pub mod symmetry {}

#[doc = include_str!("../../../book/src/condensation.md")]
pub mod condensation {}

#[doc = include_str!("../../../book/src/formulas.md")]
pub mod formulas {}

#[doc = include_str!("../../../book/src/recurrence.md")]
pub mod recurrence {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
