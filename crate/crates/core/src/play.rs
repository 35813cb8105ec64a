//! Playing a game on its board, on its legal complex (a move must keep the
//! occupied set a face), or on its illegal complex (a move must not complete
//! a facet), and checking that the three agree.
//!
//! Moves are named by variable in every arena, so a sequence recorded in one
//! arena replays verbatim in another. No alternation is imposed: either
//! player may move at any time.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use thiserror::Error;

use crate::algebra::{bits, Monomial, Player, Universe, Variable};
use crate::board::Board;
use crate::complex::SimplicialComplex;
use crate::limits::Limits;
use crate::rulesets::Ruleset;
use crate::transform::{Game, TransformError};

/// Where the pieces go.
#[derive(Debug, Clone)]
pub enum Arena {
    /// The game's own rules on its board.
    Board(Game),
    /// Legal-complex rules: the occupied vertices form a face.
    LegalComplex(SimplicialComplex),
    /// Illegal-complex rules: no facet is fully occupied.
    IllegalComplex(SimplicialComplex),
}

impl Arena {
    pub fn universe(&self) -> &Universe {
        match self {
            Arena::Board(game) => game.universe(),
            Arena::LegalComplex(c) | Arena::IllegalComplex(c) => c.universe(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Arena::Board(_) => "board",
            Arena::LegalComplex(_) => "legal complex",
            Arena::IllegalComplex(_) => "illegal complex",
        }
    }

    /// Whether `mask` is an acceptable occupied set, with the reason if not.
    fn admits(&self, mask: u64) -> Result<(), Violation> {
        match self {
            Arena::Board(game) => {
                if game.is_legal_mask(mask) {
                    Ok(())
                } else {
                    Err(Violation::Rule(game.name()))
                }
            }
            Arena::LegalComplex(delta) => {
                if delta.is_face_mask(mask) {
                    Ok(())
                } else {
                    Err(Violation::NotAFace(delta.universe().monomial(mask)))
                }
            }
            Arena::IllegalComplex(gamma) => match gamma.facet_masks().iter().find(|&&f| f & !mask == 0) {
                Some(&f) => Err(Violation::CompletesFacet(gamma.universe().monomial(f))),
                None => Ok(()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Rule(String),
    NotAFace(Monomial),
    CompletesFacet(Monomial),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Rule(game) => write!(f, "breaks the rules of {game}"),
            Violation::NotAFace(m) => write!(f, "{m} is not a face of the legal complex"),
            Violation::CompletesFacet(m) => write!(f, "occupies every vertex of facet {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("{0} is not a vertex of this arena")]
    UnknownVariable(Variable),
    #[error("{player} may not play {variable}")]
    WrongSide { player: Player, variable: Variable },
    #[error("{0} is already occupied")]
    Occupied(Variable),
    #[error("{variable}: {violation}")]
    Illegal { variable: Variable, violation: Violation },
}

/// A snapshot of play in one arena.
#[derive(Debug, Clone)]
pub struct MatchState {
    arena: Arc<Arena>,
    history: Vec<(Player, Variable)>,
    occupied: u64,
}

impl MatchState {
    pub fn new(arena: Arc<Arena>) -> Self {
        MatchState {
            arena,
            history: Vec::new(),
            occupied: 0,
        }
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn history(&self) -> &[(Player, Variable)] {
        &self.history
    }

    pub fn occupied(&self) -> Monomial {
        self.arena.universe().monomial(self.occupied)
    }

    /// Vertices of `player`'s side that may be occupied next, ascending.
    pub fn legal_moves(&self, player: Player) -> Vec<Variable> {
        let universe = self.arena.universe();
        universe
            .vars()
            .iter()
            .enumerate()
            .filter(|&(i, v)| {
                v.player == player
                    && self.occupied >> i & 1 == 0
                    && self.arena.admits(self.occupied | 1 << i).is_ok()
            })
            .map(|(_, &v)| v)
            .collect()
    }

    /// The state after `player` occupies `variable`; `self` is untouched.
    pub fn apply_move(&self, player: Player, variable: Variable) -> Result<MatchState, MoveError> {
        let bit = self
            .arena
            .universe()
            .position(variable)
            .ok_or(MoveError::UnknownVariable(variable))?;
        if variable.player != player {
            return Err(MoveError::WrongSide { player, variable });
        }
        if self.occupied >> bit & 1 == 1 {
            return Err(MoveError::Occupied(variable));
        }
        let occupied = self.occupied | 1 << bit;
        self.arena
            .admits(occupied)
            .map_err(|violation| MoveError::Illegal { variable, violation })?;
        let mut history = self.history.clone();
        history.push((player, variable));
        Ok(MatchState {
            arena: self.arena.clone(),
            history,
            occupied,
        })
    }

    /// Plays `moves` in order, stopping at the first rejected one.
    pub fn replay(arena: Arc<Arena>, moves: &[(Player, Variable)]) -> Result<MatchState, (usize, MoveError)> {
        moves
            .iter()
            .enumerate()
            .try_fold(MatchState::new(arena), |state, (i, &(p, v))| {
                state.apply_move(p, v).map_err(|e| (i, e))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveParseError {
    #[error("bad move `{0}` (expected L:x<i> or R:y<j>)")]
    Token(String),
}

/// Parses `L:x1 R:y3 L:x4`.
pub fn parse_moves(text: &str) -> Result<Vec<(Player, Variable)>, MoveParseError> {
    text.split_whitespace()
        .map(|token| {
            let bad = || MoveParseError::Token(token.to_string());
            let (p, v) = token.split_once(':').ok_or_else(bad)?;
            let player = match p {
                "L" => Player::Left,
                "R" => Player::Right,
                _ => return Err(bad()),
            };
            Ok((player, v.parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn render_moves(moves: &[(Player, Variable)]) -> String {
    moves
        .iter()
        .map(|(p, v)| format!("{p}:{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A move sequence on which the arenas disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub moves: Vec<(Player, Variable)>,
    /// Per arena, whether the whole sequence is playable there.
    pub playable: Vec<bool>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] playable: {:?}", render_moves(&self.moves), self.playable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("arenas have different vertex sets")]
    UniverseMismatch,
}

fn to_moves(universe: &Universe, order: &[usize]) -> Vec<(Player, Variable)> {
    order
        .iter()
        .map(|&i| {
            let v = universe.vars()[i];
            (v.player, v)
        })
        .collect()
}

fn playable(arena: &Arena, moves: &[(Player, Variable)]) -> bool {
    let mut state = MatchState::new(Arc::new(arena.clone()));
    for &(p, v) in moves {
        match state.apply_move(p, v) {
            Ok(next) => state = next,
            Err(_) => return false,
        }
    }
    true
}

/// Positions reachable in `arena` with up to `depth` moves, by move count,
/// each with the move that last reached it.
fn reachable_levels(arena: &Arena, depth: usize) -> Vec<HashMap<u64, usize>> {
    let n = arena.universe().len();
    let mut levels = vec![HashMap::from([(0u64, usize::MAX)])];
    for _ in 0..depth {
        let mut next = HashMap::new();
        for &s in levels.last().unwrap().keys() {
            for i in bits(!s & crate::algebra::low_bits(n)) {
                let t = s | 1 << i;
                if !next.contains_key(&t) && arena.admits(t).is_ok() {
                    next.insert(t, i);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    levels
}

fn path_to(levels: &[HashMap<u64, usize>], mut s: u64) -> Vec<usize> {
    let mut order = Vec::new();
    for level in levels[1..=s.count_ones() as usize].iter().rev() {
        let i = level[&s];
        order.push(i);
        s &= !(1 << i);
    }
    order.reverse();
    order
}

/// Exhaustively compares the playable positions of `arenas` up to `depth`
/// moves. Legality depends only on the occupied set, so comparing reachable
/// sets level by level covers every ordering. `None` depth means all moves.
pub fn check_arena_equivalence(
    arenas: &[Arena],
    depth: Option<usize>,
) -> Result<Option<Divergence>, EquivalenceError> {
    let Some(first) = arenas.first() else {
        return Ok(None);
    };
    let universe = first.universe();
    if arenas.iter().any(|a| a.universe() != universe) {
        return Err(EquivalenceError::UniverseMismatch);
    }
    let depth = depth.unwrap_or(universe.len()).min(universe.len());
    let all: Vec<_> = arenas.iter().map(|a| reachable_levels(a, depth)).collect();
    for k in 0..=depth {
        let mut union: Vec<u64> = all
            .iter()
            .flat_map(|levels| levels.get(k).into_iter().flat_map(|l| l.keys().copied()))
            .collect();
        union.sort_unstable();
        union.dedup();
        for s in union {
            let present: Vec<bool> = all
                .iter()
                .map(|levels| levels.get(k).is_some_and(|l| l.contains_key(&s)))
                .collect();
            if present.iter().all(|&p| p) {
                continue;
            }
            let witness = all.iter().zip(&present).find(|(_, &p)| p).unwrap().0;
            let moves = to_moves(universe, &path_to(witness, s));
            let playable = arenas.iter().map(|a| playable(a, &moves)).collect();
            return Ok(Some(Divergence { moves, playable }));
        }
    }
    Ok(None)
}

/// Plays random orderings of random vertex sets in every arena and checks
/// that each arena rejects at the same move.
pub fn sample_orderings(
    arenas: &[Arena],
    samples: usize,
    seed: u64,
) -> Result<Option<Divergence>, EquivalenceError> {
    let Some(first) = arenas.first() else {
        return Ok(None);
    };
    let universe = first.universe().clone();
    if arenas.iter().any(|a| a.universe() != &universe) {
        return Err(EquivalenceError::UniverseMismatch);
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..universe.len()).collect();
    for _ in 0..samples {
        order.shuffle(&mut rng);
        let moves = to_moves(&universe, &order);
        let states: Vec<_> = arenas
            .iter()
            .map(|a| MatchState::replay(Arc::new(a.clone()), &moves))
            .collect();
        let stop: Vec<Option<usize>> = states.iter().map(|r| r.as_ref().err().map(|(i, _)| *i)).collect();
        if stop.iter().any(|s| *s != stop[0]) {
            let cut = stop.iter().map(|s| s.map_or(moves.len(), |i| i + 1)).min().unwrap();
            let moves = moves[..cut].to_vec();
            let playable = arenas.iter().map(|a| playable(a, &moves)).collect();
            return Ok(Some(Divergence { moves, playable }));
        }
    }
    Ok(None)
}

/// Builds the board, legal-complex and illegal-complex arenas of a game.
pub fn arenas(ruleset: Arc<dyn Ruleset>, board: Board, limits: &Limits) -> Result<[Arena; 3], TransformError> {
    let game = Game::new(ruleset, board, limits)?;
    let analysis = game.analyze()?;
    Ok([
        Arena::Board(game),
        Arena::LegalComplex(analysis.legal_complex()),
        Arena::IllegalComplex(analysis.illegal_complex()?),
    ])
}

/// Number of random orderings tried by [`check_equivalence`].
pub const SAMPLED_ORDERINGS: usize = 64;

/// Checks that a game plays identically on its board, on its legal complex
/// and on its illegal complex, up to `depth` moves.
pub fn check_equivalence(
    ruleset: Arc<dyn Ruleset>,
    board: Board,
    depth: Option<usize>,
    limits: &Limits,
) -> Result<Option<Divergence>, EquivalenceError> {
    let arenas = arenas(ruleset, board, limits)?;
    if let Some(d) = check_arena_equivalence(&arenas, depth)? {
        return Ok(Some(d));
    }
    sample_orderings(&arenas, SAMPLED_ORDERINGS, 0)
}
