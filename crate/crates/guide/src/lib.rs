//! The chapters of the guide in `book/`, compiled as doc-tests so every
//! snippet stays in sync with the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/logics.md")]
pub mod logics {}
#[doc = include_str!("../../../book/src/spec-language.md")]
pub mod spec_language {}
#[doc = include_str!("../../../book/src/derivatives.md")]
pub mod derivatives {}
#[doc = include_str!("../../../book/src/metatheory.md")]
pub mod metatheory {}
#[doc = include_str!("../../../book/src/shadow-lifting.md")]
pub mod shadow_lifting {}
#[doc = include_str!("../../../book/src/robustness.md")]
pub mod robustness {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
