//! From a game on a board to its legal complex, illegal complex, legal and
//! illegal ideals, and game polynomial.
//!
//! Legal positions are enumerated level by level. A position of size `k+1`
//! is only generated from a legal position of size `k` (pruning supersets of
//! illegal positions), and every legal position found has its one-smaller
//! subpositions checked, so a ruleset that is not hereditary fails loudly.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{bits, AlgebraError, Monomial, MonomialIdeal, Universe, Variable};
use crate::board::Board;
use crate::complex::{above_top, maximal_of_levels, ComplexError, SimplicialComplex};
use crate::limits::{Limits, SizeError};
use crate::rulesets::{universe_of, BasicPosition, Ruleset, RulesetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Ruleset(#[from] RulesetError),
    #[error(transparent)]
    Size(#[from] SizeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{ruleset} is not a strong placement game: the empty position is illegal")]
    EmptyIllegal { ruleset: String },
    #[error("{ruleset} is not a strong placement game: {legal} is legal but {illegal_subset} is not")]
    NotHereditary {
        ruleset: String,
        legal: Monomial,
        illegal_subset: Monomial,
    },
    #[error("minimal illegal positions disagree with the minimal non-faces: {0}")]
    Inconsistent(String),
}

/// A ruleset bound to a board, with its basic positions indexed by the bits
/// of the variable universe.
#[derive(Clone)]
pub struct Game {
    ruleset: Arc<dyn Ruleset>,
    board: Board,
    universe: Universe,
    by_bit: Vec<BasicPosition>,
}

impl Game {
    pub fn new(ruleset: Arc<dyn Ruleset>, board: Board, limits: &Limits) -> Result<Self, TransformError> {
        limits.check("board", board.vertex_count(), limits.max_board_vertices)?;
        let basics = ruleset.basic_positions(&board)?;
        limits.check(
            "variable universe",
            basics.len(),
            limits.max_variables.min(crate::algebra::MAX_UNIVERSE),
        )?;
        let universe = universe_of(&basics)?;
        let by_bit = universe
            .vars()
            .iter()
            .map(|&v| basics.iter().find(|bp| bp.variable() == v).unwrap().clone())
            .collect();
        Ok(Game {
            ruleset,
            board,
            universe,
            by_bit,
        })
    }

    pub fn ruleset(&self) -> &Arc<dyn Ruleset> {
        &self.ruleset
    }

    pub fn name(&self) -> String {
        self.ruleset.name()
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn basic_position(&self, v: Variable) -> Option<&BasicPosition> {
        self.universe.position(v).map(|i| &self.by_bit[i])
    }

    pub(crate) fn is_legal_mask(&self, mask: u64) -> bool {
        let chosen: Vec<&BasicPosition> = bits(mask).map(|i| &self.by_bit[i]).collect();
        self.ruleset.is_legal(&self.board, &chosen)
    }

    pub fn is_legal(&self, pos: &Monomial) -> Result<bool, TransformError> {
        let mask = self
            .universe
            .mask(pos)
            .map_err(|e| match e {
                AlgebraError::UnknownVariable(v) => TransformError::Ruleset(RulesetError::ForeignVariable(v)),
                other => other.into(),
            })?;
        Ok(self.is_legal_mask(mask))
    }

    /// Enumerates all legal positions and the minimal illegal ones.
    pub fn analyze(&self) -> Result<Analysis, TransformError> {
        if !self.is_legal_mask(0) {
            return Err(TransformError::EmptyIllegal {
                ruleset: self.name(),
            });
        }
        let n = self.universe.len();
        let mut levels: Vec<Vec<u64>> = vec![vec![0]];
        let mut minimal_illegal = Vec::new();
        loop {
            let current = levels.last().unwrap();
            let here: HashSet<u64> = current.iter().copied().collect();
            let found: Vec<(Vec<u64>, Vec<u64>, Option<(u64, u64)>)> = current
                .par_iter()
                .map(|&s| {
                    let mut legal = Vec::new();
                    let mut illegal = Vec::new();
                    for v in above_top(s, n) {
                        let t = s | 1 << v;
                        let missing = bits(t).map(|u| t & !(1 << u)).find(|sub| !here.contains(sub));
                        match (self.is_legal_mask(t), missing) {
                            (true, None) => legal.push(t),
                            (true, Some(sub)) => return (legal, illegal, Some((t, sub))),
                            (false, None) => illegal.push(t),
                            (false, Some(_)) => {}
                        }
                    }
                    (legal, illegal, None)
                })
                .collect();

            let mut next = Vec::new();
            for (legal, illegal, violation) in found {
                if let Some((t, sub)) = violation {
                    return Err(TransformError::NotHereditary {
                        ruleset: self.name(),
                        legal: self.universe.monomial(t),
                        illegal_subset: self.universe.monomial(sub),
                    });
                }
                next.extend(legal);
                minimal_illegal.extend(illegal);
            }
            if next.is_empty() {
                break;
            }
            next.sort_unstable();
            levels.push(next);
        }
        minimal_illegal.sort_unstable();
        Ok(Analysis {
            game: self.clone(),
            levels,
            minimal_illegal,
        })
    }
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game")
            .field("ruleset", &self.ruleset.name())
            .field("board", &self.board)
            .field("universe", &self.universe)
            .finish()
    }
}

/// Enumerated positions of one game on one board.
#[derive(Clone, Debug)]
pub struct Analysis {
    game: Game,
    /// Legal positions by piece count, each level sorted.
    levels: Vec<Vec<u64>>,
    /// Illegal positions all of whose one-smaller subpositions are legal.
    minimal_illegal: Vec<u64>,
}

impl Analysis {
    pub fn new(ruleset: Arc<dyn Ruleset>, board: Board, limits: &Limits) -> Result<Self, TransformError> {
        Game::new(ruleset, board, limits)?.analyze()
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn universe(&self) -> &Universe {
        &self.game.universe
    }

    pub fn legal_position_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Every legal position, the empty one (`1`) first, then by size.
    pub fn legal_positions(&self) -> Vec<Monomial> {
        self.levels
            .iter()
            .flatten()
            .map(|&m| self.universe().monomial(m))
            .collect()
    }

    fn maximal_legal(&self) -> Vec<u64> {
        maximal_of_levels(&self.levels, self.universe().len())
    }

    /// Faces are the legal positions; facets the maximal ones.
    pub fn legal_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_masks(self.universe().clone(), self.maximal_legal())
    }

    /// Facets are the minimal illegal positions found by the enumerator.
    fn direct_illegal_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_masks(self.universe().clone(), self.minimal_illegal.iter().copied())
    }

    /// The illegal complex, cross-checked against the minimal non-faces of
    /// the legal complex.
    pub fn illegal_complex(&self) -> Result<SimplicialComplex, TransformError> {
        let direct = self.direct_illegal_complex();
        let via_non_faces = SimplicialComplex::from_masks(
            self.universe().clone(),
            self.legal_complex().minimal_non_face_masks(),
        );
        if direct != via_non_faces {
            return Err(TransformError::Inconsistent(format!(
                "direct {direct} vs non-faces {via_non_faces}"
            )));
        }
        Ok(direct)
    }

    /// Generated by the maximal legal positions.
    pub fn legal_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::from_masks(self.universe().clone(), self.maximal_legal())
    }

    /// Generated by the minimal illegal positions.
    pub fn illegal_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::from_masks(self.universe().clone(), self.minimal_illegal.iter().copied())
    }

    pub fn game_polynomial(&self) -> GamePolynomial {
        GamePolynomial::new(self.levels.iter().map(|l| l.len() as u64).collect())
    }

    /// Compares the legal ideal with the facet ideal of the legal complex,
    /// and the illegal ideal with both the facet ideal of the illegal
    /// complex and the Stanley-Reisner ideal of the legal complex.
    pub fn verify_duality(&self) -> DualityReport {
        let delta = self.legal_complex();
        let gamma = self.direct_illegal_complex();
        let legal = self.legal_ideal();
        let illegal = self.illegal_ideal();
        let clauses = [
            (Clause::LegalIsFacetOfDelta, &legal, delta.facet_ideal()),
            (Clause::IllegalIsFacetOfGamma, &illegal, gamma.facet_ideal()),
            (Clause::IllegalIsStanleyReisnerOfDelta, &illegal, delta.sr_ideal()),
        ];
        let mut report = DualityReport::default();
        for (clause, ideal, other) in clauses {
            let ok = ideal == &other;
            match clause {
                Clause::LegalIsFacetOfDelta => report.legal_ideal_matches_facet_ideal = ok,
                Clause::IllegalIsFacetOfGamma => report.illegal_ideal_matches_gamma_facet_ideal = ok,
                Clause::IllegalIsStanleyReisnerOfDelta => report.illegal_ideal_matches_sr_ideal = ok,
            }
            if !ok {
                report.mismatches.push(Mismatch {
                    clause,
                    only_in_game_ideal: ideal.missing_from(&other),
                    only_in_complex_ideal: other.missing_from(ideal),
                });
            }
        }
        report
    }

    /// Everything about this game on this board in one serializable value.
    pub fn export(&self) -> Result<GameExport, TransformError> {
        Ok(GameExport {
            game: self.game.name(),
            board: self.game.board.clone(),
            variables: self.universe().vars().to_vec(),
            legal_facets: self.legal_complex().facets(),
            illegal_facets: self.illegal_complex()?.facets(),
            legal_ideal: self.legal_ideal().generators(),
            illegal_ideal: self.illegal_ideal().generators(),
            game_polynomial: self.game_polynomial().coefficients,
            duality_report: self.verify_duality(),
        })
    }
}

/// `P(x) = sum f_i x^i`, with `f_i` the number of legal positions holding
/// `i` pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GamePolynomial {
    pub coefficients: Vec<u64>,
}

impl GamePolynomial {
    pub fn new(coefficients: Vec<u64>) -> Self {
        GamePolynomial { coefficients }
    }

    pub fn evaluate(&self, x: u64) -> u64 {
        self.coefficients.iter().rev().fold(0, |acc, &c| acc * x + c)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn multiply(&self, other: &GamePolynomial) -> GamePolynomial {
        let f = crate::complex::FVector(self.coefficients.clone())
            .convolve(&crate::complex::FVector(other.coefficients.clone()));
        GamePolynomial::new(f.0)
    }
}

impl fmt::Display for GamePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    LegalIsFacetOfDelta,
    IllegalIsFacetOfGamma,
    IllegalIsStanleyReisnerOfDelta,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub clause: Clause,
    pub only_in_game_ideal: Vec<Monomial>,
    pub only_in_complex_ideal: Vec<Monomial>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub legal_ideal_matches_facet_ideal: bool,
    pub illegal_ideal_matches_gamma_facet_ideal: bool,
    pub illegal_ideal_matches_sr_ideal: bool,
    pub mismatches: Vec<Mismatch>,
}

impl DualityReport {
    pub fn all_hold(&self) -> bool {
        self.legal_ideal_matches_facet_ideal
            && self.illegal_ideal_matches_gamma_facet_ideal
            && self.illegal_ideal_matches_sr_ideal
    }
}

impl fmt::Display for DualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |ok: bool| if ok { "OK" } else { "FAIL" };
        write!(
            f,
            "duality: {} {} {}",
            word(self.legal_ideal_matches_facet_ideal),
            word(self.illegal_ideal_matches_gamma_facet_ideal),
            word(self.illegal_ideal_matches_sr_ideal)
        )?;
        for m in &self.mismatches {
            let list = |ms: &[Monomial]| ms.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", ");
            write!(
                f,
                "\n  {:?}: only in game ideal [{}]; only in complex ideal [{}]",
                m.clause,
                list(&m.only_in_game_ideal),
                list(&m.only_in_complex_ideal)
            )?;
        }
        Ok(())
    }
}

/// JSON bundle for one game on one board.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameExport {
    pub game: String,
    pub board: Board,
    pub variables: Vec<Variable>,
    pub legal_facets: Vec<Monomial>,
    pub illegal_facets: Vec<Monomial>,
    pub legal_ideal: Vec<Monomial>,
    pub illegal_ideal: Vec<Monomial>,
    pub game_polynomial: Vec<u64>,
    pub duality_report: DualityReport,
}

/// Memoizes analyses by ruleset name and board fingerprint.
#[derive(Default)]
pub struct AnalysisCache {
    entries: Mutex<HashMap<(String, u64), Arc<Analysis>>>,
}

impl AnalysisCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_analyze(
        &self,
        ruleset: Arc<dyn Ruleset>,
        board: &Board,
        limits: &Limits,
    ) -> Result<Arc<Analysis>, TransformError> {
        let key = (ruleset.name(), board.fingerprint());
        if let Some(hit) = self.entries.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let analysis = Arc::new(Analysis::new(ruleset, board.clone(), limits)?);
        self.entries.lock().unwrap().insert(key, analysis.clone());
        Ok(analysis)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
