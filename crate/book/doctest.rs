// mdbook cannot test snippets that depend on an external crate, so every
// chapter is pulled in as a module doc and `cargo test --doc` runs it.

#[doc = include_str!("src/intro.md")]
pub mod intro {}
#[doc = include_str!("src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("src/stabilization.md")]
pub mod stabilization {}
#[doc = include_str!("src/group.md")]
pub mod group {}
#[doc = include_str!("src/programs.md")]
pub mod programs {}
#[doc = include_str!("src/duality.md")]
pub mod duality {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
