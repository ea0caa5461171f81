//! Compiles and runs every Rust snippet in the guide (`book/`) as a
//! doc-test, keeping the prose and the crate from drifting apart. mdbook and
//! rustdoc share the `#` hidden-line convention, so the same snippets render
//! cleanly in the book and still compile here in full.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/world-model.md")]
pub mod world_model {}

#[doc = include_str!("../../../book/src/cost-function.md")]
pub mod cost_function {}

#[doc = include_str!("../../../book/src/classic-tlbo.md")]
pub mod classic_tlbo {}

#[doc = include_str!("../../../book/src/multi-subject.md")]
pub mod multi_subject {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
