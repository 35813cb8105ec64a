use thiserror::Error;

use crate::algebra::MAX_UNIVERSE;

/// Size caps for the exhaustive operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest board the enumerators accept.
    pub max_board_vertices: usize,
    /// Largest variable universe for position enumeration (at most 64).
    pub max_variables: usize,
    /// Largest universe for checks that visit every subset of the variables.
    pub max_exhaustive_variables: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_board_vertices: 24,
            max_variables: MAX_UNIVERSE,
            max_exhaustive_variables: 24,
        }
    }
}

impl Limits {
    /// Default limits with a different board cap.
    pub fn with_board_cap(max_board_vertices: usize) -> Self {
        Limits {
            max_board_vertices,
            ..Limits::default()
        }
    }

    pub fn check(&self, what: &'static str, size: usize, cap: usize) -> Result<(), SizeError> {
        if size > cap {
            Err(SizeError { what, size, cap })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} of size {size} exceeds the cap of {cap}")]
pub struct SizeError {
    pub what: &'static str,
    pub size: usize,
    pub cap: usize,
}
