use thiserror::Error;

use crate::reduce::Rule;

/// Errors from normalization, evaluation and decision.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("formula is not in unit chain expansion")]
    NotUce,
    #[error("E_DEPTH: formula reaches object level {needed} but the frame only covers levels 0..={depth}")]
    Depth { needed: usize, depth: usize },
    #[error("E_TOO_LARGE: {bits} enumeration bits exceed the cap of {cap}")]
    TooLarge { bits: usize, cap: usize },
    #[error("{rule} does not apply at position {position:?}")]
    NotARedex { rule: Rule, position: Vec<usize> },
    #[error("no subterm at position {0:?}")]
    BadPosition(Vec<usize>),
    #[error("frame format error: {0}")]
    FrameFormat(String),
}
