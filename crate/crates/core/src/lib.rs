//! Generators of the canonical and anticanonical ideals of Ehrhart rings of
//! chain and order polytopes of finite posets.

pub mod bitset;
pub mod budget;
pub mod canonical;
pub mod catalog;
pub mod construct;
pub mod error;
pub mod level;
pub mod oracle;
pub mod poset;
pub mod sequences;
pub mod symbolic;
pub mod weights;

pub use bitset::ElemSet;
pub use budget::Budget;
pub use error::{Error, Result};
pub use poset::{Chain, ExtElem, Poset, PosetJson};
pub use sequences::{Condition, Epsilon, ZigzagSequence};
pub use weights::{PathWeights, WeightMap, WeightMapJson};
