//! The guide in `book/src`, compiled so that its Rust snippets run as
//! doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/gamma.md")]
pub mod gamma {}
#[doc = include_str!("../../../book/src/canonical.md")]
pub mod canonical {}
#[doc = include_str!("../../../book/src/calculus.md")]
pub mod calculus {}
#[doc = include_str!("../../../book/src/grid.md")]
pub mod grid {}
#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}
#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}
#[doc = include_str!("../../../book/src/o4.md")]
pub mod o4 {}
#[doc = include_str!("../../../book/src/maxwell.md")]
pub mod maxwell {}
#[doc = include_str!("../../../book/src/boosts.md")]
pub mod boosts {}
#[doc = include_str!("../../../book/src/harness.md")]
pub mod harness {}
#[doc = include_str!("../../../book/src/accuracy.md")]
pub mod accuracy {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
