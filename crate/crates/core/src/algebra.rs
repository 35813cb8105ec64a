//! Square-free monomials and monomial ideals kept as minimal generating sets.
//!
//! A square-free monomial is a set of variables, so divisibility is subset
//! containment. Ideals are stored as bitmasks over an explicit [`Universe`]
//! of at most 64 variables.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest universe a bitmask can address.
pub const MAX_UNIVERSE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Player {
    Left,
    Right,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Left => Player::Right,
            Player::Right => Player::Left,
        }
    }

    /// Variable prefix: `x` for Left, `y` for Right.
    pub fn prefix(self) -> char {
        match self {
            Player::Left => 'x',
            Player::Right => 'y',
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Left => "L",
            Player::Right => "R",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("cannot parse monomial `{0}`")]
    Parse(String),
    #[error("variable {0} is not in the universe")]
    UnknownVariable(Variable),
    #[error("universe of {0} variables exceeds the limit of {MAX_UNIVERSE}")]
    UniverseTooLarge(usize),
    #[error("ideals live over different universes")]
    UniverseMismatch,
}

/// `x<index>` for Left, `y<index>` for Right.
///
/// Ordered by index first and Left before Right, which is the canonical
/// rendering order inside a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub index: u32,
    pub player: Player,
}

impl Variable {
    pub fn new(player: Player, index: u32) -> Self {
        Variable { index, player }
    }

    pub fn x(index: u32) -> Self {
        Variable::new(Player::Left, index)
    }

    pub fn y(index: u32) -> Self {
        Variable::new(Player::Right, index)
    }

    /// Same index, other player.
    pub fn swapped(self) -> Self {
        Variable::new(self.player.opponent(), self.index)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.player.prefix(), self.index)
    }
}

impl FromStr for Variable {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, AlgebraError> {
        let bad = || AlgebraError::Parse(s.to_string());
        let mut chars = s.chars();
        let player = match chars.next() {
            Some('x') => Player::Left,
            Some('y') => Player::Right,
            _ => return Err(bad()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: u32 = digits.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Variable::new(player, index))
    }
}

impl Serialize for Variable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A square-free monomial. The empty monomial is `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeSet<Variable>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.0.iter().copied()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Variable) -> bool {
        self.0.contains(&v)
    }

    /// `self | other`, i.e. subset containment.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn with(&self, v: Variable) -> Monomial {
        let mut m = self.clone();
        m.0.insert(v);
        m
    }

    pub fn swapped(&self) -> Monomial {
        self.vars().map(Variable::swapped).collect()
    }
}

pub fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.divides(b)
}

impl FromIterator<Variable> for Monomial {
    fn from_iter<I: IntoIterator<Item = Variable>>(iter: I) -> Self {
        Monomial(iter.into_iter().collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Accepts `1`, or `x<i>`/`y<j>` tokens joined by `*`. Whitespace around
/// tokens is ignored; repeated variables are rejected.
impl FromStr for Monomial {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, AlgebraError> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut vars = BTreeSet::new();
        for token in s.split('*') {
            let v: Variable = token
                .trim()
                .parse()
                .map_err(|_| AlgebraError::Parse(s.to_string()))?;
            if !vars.insert(v) {
                return Err(AlgebraError::Parse(s.to_string()));
            }
        }
        Ok(Monomial(vars))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical listing order: higher degree first, then lexicographic on the
/// rendered text.
pub fn canonical_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    (Reverse(a.degree()), a.to_string()).cmp(&(Reverse(b.degree()), b.to_string()))
}

/// Ordered variable set; bit `i` of a mask stands for the `i`-th variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    vars: Arc<[Variable]>,
}

impl Universe {
    /// Sorts and deduplicates. Fails beyond [`MAX_UNIVERSE`] variables.
    pub fn new(vars: impl IntoIterator<Item = Variable>) -> Result<Self, AlgebraError> {
        let set: BTreeSet<Variable> = vars.into_iter().collect();
        if set.len() > MAX_UNIVERSE {
            return Err(AlgebraError::UniverseTooLarge(set.len()));
        }
        Ok(Universe {
            vars: set.into_iter().collect(),
        })
    }

    /// `x1..x{left}` and `y1..y{right}`.
    pub fn players(left: u32, right: u32) -> Result<Self, AlgebraError> {
        Universe::new(
            (1..=left)
                .map(Variable::x)
                .chain((1..=right).map(Variable::y)),
        )
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn position(&self, v: Variable) -> Option<usize> {
        self.vars.binary_search(&v).ok()
    }

    pub fn contains(&self, v: Variable) -> bool {
        self.position(v).is_some()
    }

    /// Mask with every variable set.
    pub fn full_mask(&self) -> u64 {
        low_bits(self.len())
    }

    pub fn mask(&self, m: &Monomial) -> Result<u64, AlgebraError> {
        m.vars().try_fold(0u64, |acc, v| {
            self.position(v)
                .map(|i| acc | (1 << i))
                .ok_or(AlgebraError::UnknownVariable(v))
        })
    }

    pub fn monomial(&self, mask: u64) -> Monomial {
        bits(mask).map(|i| self.vars[i]).collect()
    }

    /// Sorts masks into canonical listing order.
    pub fn sort_canonical(&self, masks: &mut [u64]) {
        let mut keyed: Vec<(Reverse<u32>, String, u64)> = masks
            .iter()
            .map(|&m| (Reverse(m.count_ones()), self.monomial(m).to_string(), m))
            .collect();
        keyed.sort();
        for (slot, (_, _, m)) in masks.iter_mut().zip(keyed) {
            *slot = m;
        }
    }

    /// Side of each variable as a mask: `(left, right)`.
    pub fn player_masks(&self) -> (u64, u64) {
        let mut left = 0;
        let mut right = 0;
        for (i, v) in self.vars.iter().enumerate() {
            match v.player {
                Player::Left => left |= 1 << i,
                Player::Right => right |= 1 << i,
            }
        }
        (left, right)
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vars.iter().map(|v| v.to_string())).finish()
    }
}

pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the set bits of `mask`, ascending.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Drops every mask that has a proper subset (divisor) in the list, plus
/// duplicates. Output is sorted ascending by value.
pub(crate) fn minimal_masks(masks: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut all: Vec<u64> = masks.into_iter().collect();
    all.sort_by_key(|m| (m.count_ones(), *m));
    all.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for m in all {
        if !kept.iter().any(|&g| g & !m == 0) {
            kept.push(m);
        }
    }
    kept.sort_unstable();
    kept
}

/// Dual of [`minimal_masks`]: keeps only inclusion-maximal masks.
pub(crate) fn maximal_masks(masks: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut all: Vec<u64> = masks.into_iter().collect();
    all.sort_by_key(|m| (Reverse(m.count_ones()), *m));
    all.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for m in all {
        if !kept.iter().any(|&f| m & !f == 0) {
            kept.push(m);
        }
    }
    kept.sort_unstable();
    kept
}

/// A square-free monomial ideal given by its minimal generators.
///
/// The zero ideal has no generators; the unit ideal is generated by `1`.
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    universe: Universe,
    generators: Vec<u64>,
}

impl MonomialIdeal {
    pub fn zero(universe: Universe) -> Self {
        MonomialIdeal {
            universe,
            generators: Vec::new(),
        }
    }

    /// Minimalizes an arbitrary generating set.
    pub fn minimal_generators<'a>(
        universe: Universe,
        monomials: impl IntoIterator<Item = &'a Monomial>,
    ) -> Result<Self, AlgebraError> {
        let masks = monomials
            .into_iter()
            .map(|m| universe.mask(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_masks(universe, masks))
    }

    pub(crate) fn from_masks(universe: Universe, masks: impl IntoIterator<Item = u64>) -> Self {
        let mut generators = minimal_masks(masks);
        universe.sort_canonical(&mut generators);
        MonomialIdeal {
            universe,
            generators,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub(crate) fn generator_masks(&self) -> &[u64] {
        &self.generators
    }

    /// Generators in canonical listing order.
    pub fn generators(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|&g| self.universe.monomial(g))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub(crate) fn contains_mask(&self, m: u64) -> bool {
        self.generators.iter().any(|&g| g & !m == 0)
    }

    /// Membership: some generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> Result<bool, AlgebraError> {
        Ok(self.contains_mask(self.universe.mask(m)?))
    }

    /// Generator-set equality over a shared universe.
    pub fn equals(&self, other: &MonomialIdeal) -> Result<bool, AlgebraError> {
        if self.universe != other.universe {
            return Err(AlgebraError::UniverseMismatch);
        }
        Ok(self.generators == other.generators)
    }

    /// Generators of `self` missing from `other`.
    pub fn missing_from(&self, other: &MonomialIdeal) -> Vec<Monomial> {
        self.generators()
            .into_iter()
            .filter(|g| !other.generators().contains(g))
            .collect()
    }

    /// One generator per line.
    pub fn render_lines(&self) -> String {
        self.generators()
            .iter()
            .map(|g| format!("{g}\n"))
            .collect()
    }

    /// Inverse of [`MonomialIdeal::render_lines`]; blank and `#` lines are skipped.
    pub fn parse_lines(universe: Universe, text: &str) -> Result<Self, AlgebraError> {
        let monomials = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<Monomial>, _>>()?;
        Self::minimal_generators(universe, &monomials)
    }
}

pub fn ideals_equal(a: &MonomialIdeal, b: &MonomialIdeal) -> Result<bool, AlgebraError> {
    a.equals(b)
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, g) in self.generators().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses a `,`-separated list of monomials, e.g. `"x1*x2, y1"`.
pub fn parse_monomials(text: &str) -> Result<Vec<Monomial>, AlgebraError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn col_universe() -> Universe {
        Universe::players(3, 3).unwrap()
    }

    #[test]
    fn render_and_parse() {
        assert_eq!(m("x3*y2*x1").to_string(), "x1*y2*x3");
        assert_eq!(m("y1*x1").to_string(), "x1*y1");
        assert_eq!(Monomial::one().to_string(), "1");
        assert_eq!(m(" 1 "), Monomial::one());
        for bad in ["", "x0", "z1", "x1**x2", "x1*x1", "x", "x-1", "X1"] {
            assert!(bad.parse::<Monomial>().is_err(), "{bad}");
        }
    }

    #[test]
    fn divisibility() {
        assert!(divides(&m("x1"), &m("x1*y2*x3")));
        assert!(!divides(&m("x1*y3"), &m("x1*y2*x3")));
        for other in ["x1", "y7*x2", "1"] {
            assert!(divides(&Monomial::one(), &m(other)));
        }
    }

    #[test]
    fn minimal_generators_drop_multiples() {
        let u = col_universe();
        let i = MonomialIdeal::minimal_generators(u.clone(), &[m("x1*x2"), m("x1*x2*x3"), m("y1")])
            .unwrap();
        assert_eq!(i.generators(), vec![m("x1*x2"), m("y1")]);

        assert!(MonomialIdeal::minimal_generators(u.clone(), &[]).unwrap().is_zero());

        let facets = [m("x1*y2*x3"), m("y1*x2*y3"), m("x1*y3"), m("y1*x3")];
        let i = MonomialIdeal::minimal_generators(u, &facets).unwrap();
        assert_eq!(i.generators(), facets.to_vec());
    }

    #[test]
    fn canonical_listing() {
        let u = col_universe();
        let gens = parse_monomials("x3*y3, y2*x3, x1*y1, y1*y2*y3, x2*y2, x1*x2*x3").unwrap();
        let i = MonomialIdeal::minimal_generators(u, &gens).unwrap();
        assert_eq!(i.to_string(), "<x1*x2*x3, y1*y2*y3, x1*y1, x2*y2, x3*y3, y2*x3>");
    }

    #[test]
    fn membership() {
        let u = col_universe();
        let i = MonomialIdeal::minimal_generators(
            u.clone(),
            &parse_monomials("x1*x2, x2*x3, y1*y2, y2*y3").unwrap(),
        )
        .unwrap();
        assert!(i.contains(&m("x1*x2*x3")).unwrap());
        assert!(!i.contains(&m("x1*y3")).unwrap());
        assert!(!i.contains(&Monomial::one()).unwrap());
        assert_eq!(
            i.contains(&m("x9")),
            Err(AlgebraError::UnknownVariable(Variable::x(9)))
        );
    }

    #[test]
    fn equality() {
        let u = col_universe();
        let a = MonomialIdeal::minimal_generators(u.clone(), &[m("x1*x2")]).unwrap();
        let b = MonomialIdeal::minimal_generators(u.clone(), &[m("x1*x2")]).unwrap();
        let c = MonomialIdeal::minimal_generators(u, &[m("x1")]).unwrap();
        assert!(ideals_equal(&a, &b).unwrap());
        assert!(!ideals_equal(&a, &c).unwrap());
        let other = MonomialIdeal::zero(Universe::players(2, 0).unwrap());
        assert_eq!(ideals_equal(&a, &other), Err(AlgebraError::UniverseMismatch));
    }

    #[test]
    fn universe_masks() {
        let u = col_universe();
        assert_eq!(
            u.vars().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            ["x1", "y1", "x2", "y2", "x3", "y3"]
        );
        let mask = u.mask(&m("x1*y3")).unwrap();
        assert_eq!(mask, 0b100001);
        assert_eq!(u.monomial(mask), m("x1*y3"));
        assert_eq!(u.player_masks(), (0b010101, 0b101010));
        assert!(Universe::players(40, 40).is_err());
        assert_eq!(Universe::players(32, 32).unwrap().full_mask(), u64::MAX);
    }

    #[test]
    fn line_format() {
        let u = col_universe();
        let i = MonomialIdeal::parse_lines(u.clone(), "# comment\nx1*x2\n\ny3\n").unwrap();
        assert_eq!(i.render_lines(), "x1*x2\ny3\n");
        assert_eq!(MonomialIdeal::parse_lines(u, &i.render_lines()).unwrap(), i);
    }

    fn arb_masks() -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(0u64..64, 0..10)
    }

    proptest! {
        #[test]
        fn minimal_generators_idempotent_and_order_free(masks in arb_masks(), seed in any::<u64>()) {
            let u = col_universe();
            let i = MonomialIdeal::from_masks(u.clone(), masks.clone());
            let again = MonomialIdeal::from_masks(u.clone(), i.generator_masks().to_vec());
            prop_assert_eq!(&again, &i);
            let mut shuffled = masks;
            let k = shuffled.len().max(1);
            shuffled.rotate_left((seed as usize) % k);
            shuffled.reverse();
            prop_assert_eq!(MonomialIdeal::from_masks(u, shuffled), i);
        }

        #[test]
        fn membership_is_upward_closed(masks in arb_masks(), a in 0u64..64, extra in 0u64..64) {
            let i = MonomialIdeal::from_masks(col_universe(), masks);
            if i.contains_mask(a) {
                prop_assert!(i.contains_mask(a | extra));
            }
        }

        #[test]
        fn generators_form_antichain(masks in arb_masks()) {
            let i = MonomialIdeal::from_masks(col_universe(), masks);
            let g = i.generator_masks();
            for (p, &a) in g.iter().enumerate() {
                for (q, &b) in g.iter().enumerate() {
                    prop_assert!(p == q || a & !b != 0);
                }
            }
        }

        #[test]
        fn monomial_text_round_trip(idx in proptest::collection::btree_set((1u32..30, any::<bool>()), 0..6)) {
            let mono: Monomial = idx
                .into_iter()
                .map(|(i, left)| if left { Variable::x(i) } else { Variable::y(i) })
                .collect();
            prop_assert_eq!(mono.to_string().parse::<Monomial>().unwrap(), mono);
        }
    }
}
