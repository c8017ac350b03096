//! Free-product and HNN towers over a base group `(G, A, t)`, with a
//! sharply 2-transitive action oracle on the right cosets of `A` and a
//! bounded certifier.

#![allow(clippy::mutable_key_type)]

pub mod base;
pub mod certifier;
pub mod cli;
pub mod error;
pub mod extension;
pub mod normal_form;
pub mod presets;
pub mod report;
pub mod session;
pub mod tower;
pub mod word;

pub use base::{BaseConfig, BaseElement, BaseGroup};
pub use error::{ConfigError, ParseError, SessionError, TowerError};
pub use extension::{Branch, LevelKind};
pub use normal_form::{Algebra, Element, LevelWord, Sign};
pub use tower::{CosetHandle, Tower};
pub use report::{Check, Report, Verdict};
