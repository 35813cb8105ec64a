//! Strong placement games on graph boards, viewed through simplicial
//! complexes and square-free monomial ideals.
//!
//! The legal positions of a game on a board form the faces of its legal
//! complex. The minimal illegal positions form the facets of its illegal
//! complex, and they also generate the Stanley-Reisner ideal of the legal
//! complex.

pub mod algebra;
pub mod board;
pub mod complex;
pub mod limits;
pub mod play;
pub mod rulesets;
pub mod transform;

pub use algebra::{Monomial, MonomialIdeal, Player, Universe, Variable};
pub use board::Board;
pub use complex::{are_isomorphic, FVector, SimplicialComplex};
pub use limits::Limits;
pub use play::{check_equivalence, Arena, MatchState};
pub use rulesets::{builtin, BasicPosition, Ruleset};
pub use transform::{Analysis, DualityReport, Game, GamePolynomial};
