//! Simplicial complexes on a variable universe, stored by their facets.
//!
//! The facet and Stanley-Reisner operators convert between complexes and
//! square-free monomial ideals. The void complex (no faces) and the empty
//! complex (only the empty face) are kept apart: the facet complex of the
//! zero ideal is void, the Stanley-Reisner complex of the zero ideal is the
//! full simplex.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{bits, low_bits, maximal_masks, AlgebraError, Monomial, MonomialIdeal, Universe, Variable};

/// Vertex limit for [`are_isomorphic`].
pub const ISOMORPHISM_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{what}: {size} vertices exceeds the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("facet {0} is not an antichain member")]
    NotAntichain(Monomial),
}

/// Face counts by cardinality, starting at the empty face.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Coefficients of the product of the two generating polynomials.
    pub fn convolve(&self, other: &FVector) -> FVector {
        if self.0.is_empty() || other.0.is_empty() {
            return FVector::default();
        }
        let mut out = vec![0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        FVector(out)
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    universe: Universe,
    /// Antichain, canonical listing order.
    facets: Vec<u64>,
}

impl SimplicialComplex {
    /// The complex generated by `facets`; non-maximal entries are absorbed.
    pub fn from_facets<'a>(
        universe: Universe,
        facets: impl IntoIterator<Item = &'a Monomial>,
    ) -> Result<Self, ComplexError> {
        let masks = facets
            .into_iter()
            .map(|f| universe.mask(f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_masks(universe, masks))
    }

    pub(crate) fn from_masks(universe: Universe, masks: impl IntoIterator<Item = u64>) -> Self {
        let mut facets = maximal_masks(masks);
        universe.sort_canonical(&mut facets);
        SimplicialComplex { universe, facets }
    }

    pub fn void(universe: Universe) -> Self {
        SimplicialComplex {
            universe,
            facets: Vec::new(),
        }
    }

    /// The complex whose only face is the empty set.
    pub fn empty(universe: Universe) -> Self {
        SimplicialComplex {
            universe,
            facets: vec![0],
        }
    }

    pub fn full_simplex(universe: Universe) -> Self {
        let all = universe.full_mask();
        SimplicialComplex {
            universe,
            facets: vec![all],
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn vertices(&self) -> &[Variable] {
        self.universe.vars()
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facets(&self) -> Vec<Monomial> {
        self.facets.iter().map(|&f| self.universe.monomial(f)).collect()
    }

    pub(crate) fn facet_masks(&self) -> &[u64] {
        &self.facets
    }

    pub fn dimension_bound(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.count_ones() as usize).max()
    }

    pub(crate) fn is_face_mask(&self, s: u64) -> bool {
        self.facets.iter().any(|&f| s & !f == 0)
    }

    pub fn is_face(&self, s: &Monomial) -> Result<bool, ComplexError> {
        Ok(self.is_face_mask(self.universe.mask(s)?))
    }

    /// All faces grouped by cardinality; `levels[k]` is sorted ascending.
    pub(crate) fn face_levels(&self) -> Vec<Vec<u64>> {
        down_closed_levels(self.universe.len(), |s| self.is_face_mask(s))
    }

    pub fn faces(&self) -> Vec<Monomial> {
        self.face_levels()
            .into_iter()
            .flatten()
            .map(|s| self.universe.monomial(s))
            .collect()
    }

    pub fn f_vector(&self) -> FVector {
        FVector(
            self.face_levels()
                .iter()
                .map(|level| level.len() as u64)
                .collect(),
        )
    }

    pub(crate) fn minimal_non_face_masks(&self) -> Vec<u64> {
        if self.is_void() {
            return vec![0];
        }
        let n = self.universe.len();
        let levels = self.face_levels();
        let mut out = Vec::new();
        for (k, level) in levels.iter().enumerate() {
            let next: HashSet<u64> = levels.get(k + 1).into_iter().flatten().copied().collect();
            let here: HashSet<u64> = level.iter().copied().collect();
            for &f in level {
                for v in above_top(f, n) {
                    let s = f | (1 << v);
                    if next.contains(&s) {
                        continue;
                    }
                    if bits(s).all(|u| here.contains(&(s & !(1 << u)))) {
                        out.push(s);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Inclusion-minimal subsets of the vertices that are not faces.
    pub fn minimal_non_faces(&self) -> Vec<Monomial> {
        let mut masks = self.minimal_non_face_masks();
        self.universe.sort_canonical(&mut masks);
        masks.into_iter().map(|m| self.universe.monomial(m)).collect()
    }

    /// The facet ideal: generated by the facets.
    pub fn facet_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::from_masks(self.universe.clone(), self.facets.iter().copied())
    }

    /// The Stanley-Reisner ideal: generated by the minimal non-faces.
    pub fn sr_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::from_masks(self.universe.clone(), self.minimal_non_face_masks())
    }

    /// The facet complex of `ideal`: its generators become the facets.
    pub fn facet_complex(ideal: &MonomialIdeal) -> Self {
        Self::from_masks(ideal.universe().clone(), ideal.generator_masks().iter().copied())
    }

    /// The Stanley-Reisner complex of `ideal`: faces are the square-free
    /// monomials outside the ideal.
    pub fn sr_complex(ideal: &MonomialIdeal) -> Self {
        let universe = ideal.universe().clone();
        let levels = down_closed_levels(universe.len(), |s| !ideal.contains_mask(s));
        let facets = maximal_of_levels(&levels, universe.len());
        Self::from_masks(universe, facets)
    }

    /// Join. Vertex sets are used as-is when disjoint; otherwise `other`'s
    /// indices are shifted past the largest index of `self`.
    pub fn join(&self, other: &SimplicialComplex) -> Result<SimplicialComplex, ComplexError> {
        let clash = other.vertices().iter().any(|&v| self.universe.contains(v));
        let shift = if clash {
            self.vertices().iter().map(|v| v.index).max().unwrap_or(0)
        } else {
            0
        };
        self.join_shifted(other, shift)
    }

    /// Join with `other`'s indices shifted by `shift`.
    pub fn join_shifted(
        &self,
        other: &SimplicialComplex,
        shift: u32,
    ) -> Result<SimplicialComplex, ComplexError> {
        let moved: Vec<Variable> = other
            .vertices()
            .iter()
            .map(|v| Variable::new(v.player, v.index + shift))
            .collect();
        let universe = Universe::new(self.vertices().iter().copied().chain(moved.iter().copied()))?;
        if universe.len() != self.universe.len() + moved.len() {
            return Err(ComplexError::Algebra(AlgebraError::UniverseMismatch));
        }
        let remap = |mask: u64, vars: &[Variable]| -> u64 {
            bits(mask).fold(0, |acc, i| acc | 1 << universe.position(vars[i]).unwrap())
        };
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for &a in &self.facets {
            let a = remap(a, self.vertices());
            for &b in &other.facets {
                facets.push(a | remap(b, &moved));
            }
        }
        Ok(Self::from_masks(universe, facets))
    }

    /// Edges of the 1-skeleton as pairs of vertex positions.
    pub(crate) fn skeleton_edges(&self) -> Vec<(usize, usize)> {
        let n = self.universe.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.is_face_mask(1 << i | 1 << j) {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self, name: &str) -> String {
        let vars = self.vertices();
        let mut out = format!("graph \"{name}\" {{\n");
        for v in vars {
            out.push_str(&format!("  {v};\n"));
        }
        for (i, j) in self.skeleton_edges() {
            out.push_str(&format!("  {} -- {};\n", vars[i], vars[j]));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: self.vertices().to_vec(),
            facets: self
                .facets()
                .into_iter()
                .map(|f| f.vars().collect())
                .collect(),
            f_vector: self.f_vector(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self, ComplexError> {
        let universe = Universe::new(json.vertices.iter().copied())?;
        let facets: Vec<Monomial> = json
            .facets
            .iter()
            .map(|f| f.iter().copied().collect())
            .collect();
        let complex = Self::from_facets(universe, &facets)?;
        if complex.facets.len() != facets.len() {
            let absorbed = facets
                .into_iter()
                .find(|f| !complex.facets().contains(f))
                .unwrap_or_default();
            return Err(ComplexError::NotAntichain(absorbed));
        }
        Ok(complex)
    }
}

/// JSON shape of an exported complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<Variable>,
    pub facets: Vec<Vec<Variable>>,
    pub f_vector: FVector,
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, facet) in self.facets().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{facet}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} on {:?}", self.universe)
    }
}

/// Bit positions above the highest set bit of `s`, below `n`.
pub(crate) fn above_top(s: u64, n: usize) -> std::ops::Range<usize> {
    let start = if s == 0 { 0 } else { 64 - s.leading_zeros() as usize };
    start..n
}

/// Enumerates a downward-closed family of subsets of `0..n` level by level.
///
/// Each set is reached once, from its subset without the highest bit, so
/// `member` is only consulted on sets whose top-truncation is a member.
pub(crate) fn down_closed_levels(n: usize, mut member: impl FnMut(u64) -> bool) -> Vec<Vec<u64>> {
    debug_assert!(n <= 64);
    if !member(0) {
        return Vec::new();
    }
    let mut levels = vec![vec![0u64]];
    loop {
        let mut next = Vec::new();
        for &s in levels.last().unwrap() {
            for v in above_top(s, n) {
                let t = s | (1 << v);
                if member(t) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        levels.push(next);
    }
    levels
}

/// Members of a down-closed family with no one-larger member.
pub(crate) fn maximal_of_levels(levels: &[Vec<u64>], n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        let next: HashSet<u64> = levels.get(k + 1).into_iter().flatten().copied().collect();
        for &s in level {
            let free = low_bits(n) & !s;
            if bits(free).all(|v| !next.contains(&(s | 1 << v))) {
                out.push(s);
            }
        }
    }
    out
}

/// Searches for a vertex bijection carrying the facets of `a` onto those of
/// `b`. Returns the mapping as `(vertex of a, vertex of b)` pairs.
pub fn are_isomorphic(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Result<Option<Vec<(Variable, Variable)>>, ComplexError> {
    for c in [a, b] {
        if c.universe.len() > ISOMORPHISM_CAP {
            return Err(ComplexError::TooLarge {
                what: "isomorphism",
                size: c.universe.len(),
                cap: ISOMORPHISM_CAP,
            });
        }
    }
    let n = a.universe.len();
    if n != b.universe.len() || a.facets.len() != b.facets.len() {
        return Ok(None);
    }
    let sizes = |c: &SimplicialComplex| {
        let mut s: Vec<u32> = c.facets.iter().map(|f| f.count_ones()).collect();
        s.sort_unstable();
        s
    };
    if sizes(a) != sizes(b) || a.f_vector() != b.f_vector() {
        return Ok(None);
    }

    let profile = |c: &SimplicialComplex, v: usize| {
        let mut p: Vec<u32> = c
            .facets
            .iter()
            .filter(|&&f| f >> v & 1 == 1)
            .map(|f| f.count_ones())
            .collect();
        p.sort_unstable();
        (p.len(), p)
    };
    let pa: Vec<_> = (0..n).map(|v| profile(a, v)).collect();
    let pb: Vec<_> = (0..n).map(|v| profile(b, v)).collect();
    let mut sorted_a = pa.clone();
    let mut sorted_b = pb.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(None);
    }

    // Most constrained first: rarest profile class, then highest degree.
    let mut class_size: HashMap<&(usize, Vec<u32>), usize> = HashMap::new();
    for p in &pa {
        *class_size.entry(p).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&pa[v]], std::cmp::Reverse(pa[v].0), v));

    let mut search = IsoSearch {
        a_facets: &a.facets,
        b_facets: &b.facets,
        b_facet_set: b.facets.iter().copied().collect(),
        candidates: order
            .iter()
            .map(|&v| {
                let mut c: Vec<usize> = (0..n).filter(|&w| pb[w] == pa[v]).collect();
                // Same position first, so a complex maps to itself by the identity.
                c.sort_by_key(|&w| (w != v, w));
                c
            })
            .collect(),
        order,
        image: vec![usize::MAX; n],
        used: 0,
    };
    if !search.extend(0) {
        return Ok(None);
    }
    Ok(Some(
        (0..n)
            .map(|v| (a.vertices()[v], b.vertices()[search.image[v]]))
            .collect(),
    ))
}

struct IsoSearch<'a> {
    a_facets: &'a [u64],
    b_facets: &'a [u64],
    b_facet_set: HashSet<u64>,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: u64,
}

impl IsoSearch<'_> {
    fn map_mask(&self, mask: u64) -> u64 {
        bits(mask).fold(0, |acc, v| acc | 1 << self.image[v])
    }

    /// Every facet of `a` must have, restricted to the assigned vertices, an
    /// image that some equal-size facet of `b` meets exactly.
    fn consistent(&self, assigned: u64) -> bool {
        self.a_facets.iter().all(|&f| {
            let part = f & assigned;
            let img = self.map_mask(part);
            if f == part {
                return self.b_facet_set.contains(&img);
            }
            self.b_facets
                .iter()
                .any(|&g| g.count_ones() == f.count_ones() && g & self.used == img)
        })
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        let assigned = self.order[..=depth].iter().fold(0u64, |acc, &u| acc | 1 << u);
        for i in 0..self.candidates[depth].len() {
            let w = self.candidates[depth][i];
            if self.used >> w & 1 == 1 {
                continue;
            }
            self.image[v] = w;
            self.used |= 1 << w;
            if self.consistent(assigned) && self.extend(depth + 1) {
                return true;
            }
            self.used &= !(1 << w);
            self.image[v] = usize::MAX;
        }
        false
    }
}
