//! Gradual classical logic: formulas over the object/attribute connective
//! `>` (⋗), normalization to unit chain expansion, valuation frames, an
//! exhaustive validity oracle and a level-wise decision procedure.

pub mod cli;
pub mod decide;
pub mod error;
pub mod formula;
pub mod gen;
pub mod laws;
pub mod parser;
pub mod reduce;
pub mod semantics;

pub use error::Error;
pub use formula::{AtomName, Formula, Polarity, Prefix, SElem, UnitChain};
pub use parser::{parse, pretty, ParseError};
