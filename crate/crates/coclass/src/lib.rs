//! Descendant trees of finite p-groups.
//!
//! The crate builds p-groups as weighted polycyclic presentations, computes
//! p-covering groups and immediate descendants, p-quotients of finite
//! presentations, Artin transfer patterns, and the rooted in-tree analytics
//! (branches, periodicity, fork topology) used to navigate coclass trees.

pub mod artin;
pub mod cache;
pub mod catalog;
pub mod cli;
pub mod drivers;
pub mod error;
pub mod fplin;
pub mod intree;
pub mod oracle;
pub mod pcgroup;
pub mod pcover;
pub mod pquotient;

pub use error::{Error, Result};
pub use pcgroup::{Definition, Elt, PcGroup};

/// Bumped whenever a change invalidates previously cached computation results.
pub const ENGINE_VERSION: &str = "1";
