//! Chapters of the guide in `book/src`, compiled so their examples run as
//! doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/q-polynomials.md")]
pub mod q_polynomials {}

#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}

#[doc = include_str!("../../../book/src/fixed-graphs.md")]
pub mod fixed_graphs {}

#[doc = include_str!("../../../book/src/localization.md")]
pub mod localization {}

#[doc = include_str!("../../../book/src/closed-forms.md")]
pub mod closed_forms {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
