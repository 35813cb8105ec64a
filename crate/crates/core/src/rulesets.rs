//! Rulesets: which basic positions exist on a board and which sets of them
//! are legal.
//!
//! Every builtin game forbids two pieces on one cell. On top of that:
//!
//! * Snort: no edge joins a Left piece and a Right piece.
//! * Col: no edge joins two pieces of the same player.
//! * NoGo: every maximal connected group of one player's pieces touches an
//!   empty cell.
//! * Domineering: Left places vertical dominoes, Right horizontal ones.
//! * Trivial: nothing beyond disjointness.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{bits, AlgebraError, Monomial, MonomialIdeal, Player, Universe, Variable};
use crate::board::Board;
use crate::complex::SimplicialComplex;
use crate::limits::{Limits, SizeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RulesetError {
    #[error("{ruleset} cannot be played on this board: {reason}")]
    UnsupportedBoard { ruleset: String, reason: String },
    #[error("{0} is not a basic position of this game on this board")]
    ForeignVariable(Variable),
    #[error(transparent)]
    Size(#[from] SizeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown game `{0}`")]
    UnknownGame(String),
}

/// One piece of one player; `cells` are the board vertices it covers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasicPosition {
    pub player: Player,
    /// 1-based, per player.
    pub index: u32,
    pub cells: Vec<usize>,
}

impl BasicPosition {
    pub fn variable(&self) -> Variable {
        Variable::new(self.player, self.index)
    }
}

impl fmt::Display for BasicPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {:?}", self.variable(), self.cells)
    }
}

/// A game's rules on a given board.
pub trait Ruleset: Send + Sync {
    fn name(&self) -> String;

    /// Left's then Right's basic positions, each in index order.
    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError>;

    /// Legality of a set of distinct basic positions of `board`.
    fn is_legal(&self, board: &Board, position: &[&BasicPosition]) -> bool;
}

/// Cell owners, or `None` when two pieces share a cell.
pub fn occupancy(board: &Board, position: &[&BasicPosition]) -> Option<Vec<Option<Player>>> {
    let mut owner = vec![None; board.vertex_count() + 1];
    for bp in position {
        for &c in &bp.cells {
            if owner[c].replace(bp.player).is_some() {
                return None;
            }
        }
    }
    Some(owner)
}

fn single_cell_positions(board: &Board) -> Vec<BasicPosition> {
    [Player::Left, Player::Right]
        .into_iter()
        .flat_map(|player| {
            board.vertices().map(move |v| BasicPosition {
                player,
                index: v as u32,
                cells: vec![v],
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Trivial;

#[derive(Debug, Clone, Copy, Default)]
pub struct Snort;

#[derive(Debug, Clone, Copy, Default)]
pub struct Col;

#[derive(Debug, Clone, Copy, Default)]
pub struct NoGo;

#[derive(Debug, Clone, Copy, Default)]
pub struct Domineering;

impl Ruleset for Trivial {
    fn name(&self) -> String {
        "trivial".into()
    }

    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError> {
        Ok(single_cell_positions(board))
    }

    fn is_legal(&self, board: &Board, position: &[&BasicPosition]) -> bool {
        occupancy(board, position).is_some()
    }
}

impl Ruleset for Snort {
    fn name(&self) -> String {
        "snort".into()
    }

    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError> {
        Ok(single_cell_positions(board))
    }

    fn is_legal(&self, board: &Board, position: &[&BasicPosition]) -> bool {
        let Some(owner) = occupancy(board, position) else {
            return false;
        };
        board.edges().iter().all(|&(u, v)| match (owner[u], owner[v]) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        })
    }
}

impl Ruleset for Col {
    fn name(&self) -> String {
        "col".into()
    }

    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError> {
        Ok(single_cell_positions(board))
    }

    fn is_legal(&self, board: &Board, position: &[&BasicPosition]) -> bool {
        let Some(owner) = occupancy(board, position) else {
            return false;
        };
        board.edges().iter().all(|&(u, v)| match (owner[u], owner[v]) {
            (Some(a), Some(b)) => a != b,
            _ => true,
        })
    }
}

impl Ruleset for NoGo {
    fn name(&self) -> String {
        "nogo".into()
    }

    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError> {
        Ok(single_cell_positions(board))
    }

    fn is_legal(&self, board: &Board, position: &[&BasicPosition]) -> bool {
        let Some(owner) = occupancy(board, position) else {
            return false;
        };
        let mut seen = vec![false; owner.len()];
        let mut queue = VecDeque::new();
        for start in board.vertices() {
            let Some(player) = owner[start] else { continue };
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut has_liberty = false;
            while let Some(v) = queue.pop_front() {
                for &w in board.neighbors(v) {
                    match owner[w] {
                        None => has_liberty = true,
                        Some(p) if p == player && !seen[w] => {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                        _ => {}
                    }
                }
            }
            if !has_liberty {
                return false;
            }
        }
        true
    }
}

impl Ruleset for Domineering {
    fn name(&self) -> String {
        "domineering".into()
    }

    /// Left: vertical dominoes; Right: horizontal dominoes. Both ordered by
    /// the (row, col) of the upper or left cell.
    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError> {
        let (rows, cols) = board.grid_shape().ok_or_else(|| RulesetError::UnsupportedBoard {
            ruleset: self.name(),
            reason: "domino orientation needs a grid board".into(),
        })?;
        let id = |r: usize, c: usize| (r - 1) * cols + c;
        let mut out = Vec::new();
        let mut index = 0;
        for r in 1..rows {
            for c in 1..=cols {
                index += 1;
                out.push(BasicPosition {
                    player: Player::Left,
                    index,
                    cells: vec![id(r, c), id(r + 1, c)],
                });
            }
        }
        index = 0;
        for r in 1..=rows {
            for c in 1..cols {
                index += 1;
                out.push(BasicPosition {
                    player: Player::Right,
                    index,
                    cells: vec![id(r, c), id(r, c + 1)],
                });
            }
        }
        Ok(out)
    }

    fn is_legal(&self, board: &Board, position: &[&BasicPosition]) -> bool {
        occupancy(board, position).is_some()
    }
}

/// Basic positions `x_i`/`y_i` sitting on cell `i`, for rulesets defined
/// directly over variables.
fn variable_positions(
    name: &str,
    universe: &Universe,
    board: &Board,
) -> Result<Vec<BasicPosition>, RulesetError> {
    let mut out: Vec<BasicPosition> = universe
        .vars()
        .iter()
        .map(|v| BasicPosition {
            player: v.player,
            index: v.index,
            cells: vec![v.index as usize],
        })
        .collect();
    if let Some(bp) = out.iter().find(|bp| bp.cells[0] > board.vertex_count()) {
        return Err(RulesetError::UnsupportedBoard {
            ruleset: name.to_string(),
            reason: format!("{} needs at least {} vertices", bp.variable(), bp.index),
        });
    }
    out.sort_by_key(|bp| (bp.player, bp.index));
    Ok(out)
}

fn position_mask(universe: &Universe, position: &[&BasicPosition]) -> Option<u64> {
    position.iter().try_fold(0u64, |acc, bp| {
        universe.position(bp.variable()).map(|i| acc | 1 << i)
    })
}

/// Legal iff no listed minimal illegal monomial divides the position.
///
/// Loaded from a file whose first line declares the variables,
/// `vars: x1..xN y1..yM`, followed by one monomial per line.
#[derive(Debug, Clone)]
pub struct MinimalIllegalRuleset {
    name: String,
    illegal: MonomialIdeal,
}

impl MinimalIllegalRuleset {
    pub fn new(name: impl Into<String>, illegal: MonomialIdeal) -> Self {
        MinimalIllegalRuleset {
            name: name.into(),
            illegal,
        }
    }

    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self, RulesetError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(RulesetError::Parse {
            line: 1,
            message: "missing `vars:` header".into(),
        })?;
        let universe = parse_vars_header(header).map_err(|message| RulesetError::Parse { line, message })?;
        let mut gens = Vec::new();
        for (line, text) in lines {
            let m: Monomial = text.parse().map_err(|e: AlgebraError| RulesetError::Parse {
                line,
                message: e.to_string(),
            })?;
            if let Some(v) = m.vars().find(|&v| !universe.contains(v)) {
                return Err(RulesetError::Parse {
                    line,
                    message: format!("{v} is not declared in the header"),
                });
            }
            gens.push(m);
        }
        let illegal = MonomialIdeal::minimal_generators(universe, &gens)?;
        Ok(Self::new(name, illegal))
    }

    pub fn illegal_ideal(&self) -> &MonomialIdeal {
        &self.illegal
    }
}

/// `vars: x1..x3 y1..y3`; either side may be omitted.
fn parse_vars_header(header: &str) -> Result<Universe, String> {
    let rest = header
        .strip_prefix("vars:")
        .ok_or_else(|| format!("expected `vars: x1..xN y1..yM`, found `{header}`"))?;
    let mut vars = Vec::new();
    for token in rest.split_whitespace() {
        let (lo, hi) = token
            .split_once("..")
            .ok_or_else(|| format!("bad range `{token}`"))?;
        let lo: Variable = lo.parse().map_err(|_| format!("bad range `{token}`"))?;
        let hi: Variable = hi.parse().map_err(|_| format!("bad range `{token}`"))?;
        if lo.player != hi.player || lo.index != 1 {
            return Err(format!("range `{token}` must run from index 1 on one side"));
        }
        vars.extend((1..=hi.index).map(|i| Variable::new(lo.player, i)));
    }
    Universe::new(vars).map_err(|e| e.to_string())
}

impl Ruleset for MinimalIllegalRuleset {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError> {
        variable_positions(&self.name, self.illegal.universe(), board)
    }

    fn is_legal(&self, _board: &Board, position: &[&BasicPosition]) -> bool {
        position_mask(self.illegal.universe(), position)
            .is_some_and(|m| !self.illegal.contains_mask(m))
    }
}

/// Legal iff the position is a face of the given complex.
#[derive(Debug, Clone)]
pub struct ComplexRuleset {
    name: String,
    complex: SimplicialComplex,
}

impl ComplexRuleset {
    pub fn new(name: impl Into<String>, complex: SimplicialComplex) -> Self {
        ComplexRuleset {
            name: name.into(),
            complex,
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }
}

impl Ruleset for ComplexRuleset {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn basic_positions(&self, board: &Board) -> Result<Vec<BasicPosition>, RulesetError> {
        variable_positions(&self.name, self.complex.universe(), board)
    }

    fn is_legal(&self, _board: &Board, position: &[&BasicPosition]) -> bool {
        position_mask(self.complex.universe(), position).is_some_and(|m| self.complex.is_face_mask(m))
    }
}

pub const BUILTIN_GAMES: [&str; 5] = ["trivial", "snort", "col", "nogo", "domineering"];

pub fn builtin(name: &str) -> Result<Arc<dyn Ruleset>, RulesetError> {
    Ok(match name {
        "trivial" => Arc::new(Trivial),
        "snort" => Arc::new(Snort),
        "col" => Arc::new(Col),
        "nogo" => Arc::new(NoGo),
        "domineering" => Arc::new(Domineering),
        _ => return Err(RulesetError::UnknownGame(name.to_string())),
    })
}

/// Looks up the basic position behind each variable of `pos`.
pub fn resolve<'a>(
    basics: &'a [BasicPosition],
    pos: &Monomial,
) -> Result<Vec<&'a BasicPosition>, RulesetError> {
    pos.vars()
        .map(|v| {
            basics
                .iter()
                .find(|bp| bp.variable() == v)
                .ok_or(RulesetError::ForeignVariable(v))
        })
        .collect()
}

/// Legality of a position written as a monomial over the game's variables.
pub fn is_legal(ruleset: &dyn Ruleset, board: &Board, pos: &Monomial) -> Result<bool, RulesetError> {
    let basics = ruleset.basic_positions(board)?;
    let chosen = resolve(&basics, pos)?;
    Ok(ruleset.is_legal(board, &chosen))
}

/// The universe of variables named by `basics`.
pub fn universe_of(basics: &[BasicPosition]) -> Result<Universe, AlgebraError> {
    Universe::new(basics.iter().map(BasicPosition::variable))
}

/// Why a ruleset fails to be a strong placement game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrongPlacementViolation {
    /// The starting position is illegal.
    EmptyIllegal,
    /// `legal` is legal but its subposition `illegal_subset` is not.
    NotHereditary {
        legal: Monomial,
        illegal_subset: Monomial,
    },
}

impl fmt::Display for StrongPlacementViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrongPlacementViolation::EmptyIllegal => f.write_str("the empty position is illegal"),
            StrongPlacementViolation::NotHereditary {
                legal,
                illegal_subset,
            } => write!(f, "legal {legal} has illegal subposition {illegal_subset}"),
        }
    }
}

/// Exhaustively checks that every subposition of a legal position is legal.
///
/// `Ok(None)` means the ruleset is hereditary on this board. Only one-smaller
/// subpositions are inspected; heredity then follows by induction.
pub fn check_strong_placement(
    ruleset: &dyn Ruleset,
    board: &Board,
    limits: &Limits,
) -> Result<Option<StrongPlacementViolation>, RulesetError> {
    limits.check("board", board.vertex_count(), limits.max_board_vertices)?;
    let basics = ruleset.basic_positions(board)?;
    limits.check("variable universe", basics.len(), limits.max_exhaustive_variables)?;
    let universe = universe_of(&basics)?;
    let by_bit: Vec<&BasicPosition> = universe
        .vars()
        .iter()
        .map(|&v| basics.iter().find(|bp| bp.variable() == v).unwrap())
        .collect();

    let n = universe.len();
    let mut chosen = Vec::with_capacity(n);
    let legal: Vec<bool> = (0..1u64 << n)
        .map(|s| {
            chosen.clear();
            chosen.extend(bits(s).map(|i| by_bit[i]));
            ruleset.is_legal(board, &chosen)
        })
        .collect();
    if !legal[0] {
        return Ok(Some(StrongPlacementViolation::EmptyIllegal));
    }
    for s in 1..1u64 << n {
        if !legal[s as usize] {
            continue;
        }
        if let Some(i) = bits(s).find(|&i| !legal[(s & !(1 << i)) as usize]) {
            return Ok(Some(StrongPlacementViolation::NotHereditary {
                legal: universe.monomial(s),
                illegal_subset: universe.monomial(s & !(1 << i)),
            }));
        }
    }
    Ok(None)
}
