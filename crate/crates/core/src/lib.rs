//! A small typed logic language and compilers from its formulas to loss
//! functions under six differentiable logics, with numeric checks of their
//! logical and geometric properties.

pub mod diff;
pub mod lang;
pub mod metatheory;
pub mod num;
pub mod optimize;
pub mod semantics;
pub mod speclang;
