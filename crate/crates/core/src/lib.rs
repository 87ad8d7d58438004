//! Catalog and string C-group classification for 2-groups of order `2^m`
//! and exponent at least `2^(m-3)`.

pub mod cache;
pub mod catalog;
pub mod error;
pub mod fp;
pub mod group;
pub mod involutions;
pub mod iso;
pub mod pc;
pub mod report;
pub mod stringc;
pub mod structure;
pub mod subgroups;
pub mod verdict;
pub mod word;

pub use error::{Error, Result};
pub use group::{ElementCode, GroupInstance};
pub use verdict::Verdict;
pub use word::Word;
