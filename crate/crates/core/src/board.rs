//! Game boards as undirected simple graphs with 1-indexed vertices.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("invalid {kind} size {size}")]
    InvalidSize { kind: &'static str, size: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown board `{0}` (expected path:N, cycle:N or grid:RxC)")]
    UnknownBuiltin(String),
}

/// An undirected simple graph on vertices `1..=vertex_count`.
///
/// Edges are stored normalized (`u < v`) and sorted, so two boards compare
/// equal exactly when they have the same vertex count and edge set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BoardRepr", into = "BoardRepr")]
pub struct Board {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    grid_shape: Option<(usize, usize)>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct BoardRepr {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid_shape: Option<(usize, usize)>,
}

impl From<Board> for BoardRepr {
    fn from(b: Board) -> Self {
        BoardRepr {
            vertex_count: b.vertex_count,
            edges: b.edges,
            grid_shape: b.grid_shape,
        }
    }
}

impl TryFrom<BoardRepr> for Board {
    type Error = BoardError;

    fn try_from(r: BoardRepr) -> Result<Self, BoardError> {
        let board = Board::from_edges(r.vertex_count, r.edges)?;
        match r.grid_shape {
            Some((rows, cols)) => {
                let grid = Board::grid(rows, cols)?;
                if grid.edges != board.edges || grid.vertex_count != board.vertex_count {
                    return Err(BoardError::Parse {
                        line: 0,
                        message: format!("edges do not match grid shape {rows}x{cols}"),
                    });
                }
                Ok(grid)
            }
            None => Ok(board),
        }
    }
}

impl Board {
    /// Builds a board from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints. Errors carry line 0; `parse` reports real lines.
    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, BoardError> {
        if vertex_count == 0 {
            return Err(BoardError::InvalidSize {
                kind: "board",
                size: "0".into(),
            });
        }
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            check_edge(vertex_count, u, v, &seen).map_err(|message| BoardError::Parse {
                line: 0,
                message,
            })?;
            seen.insert((u.min(v), u.max(v)));
        }
        Ok(Self::build(vertex_count, seen.into_iter().collect(), None))
    }

    fn build(vertex_count: usize, edges: Vec<(usize, usize)>, grid_shape: Option<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count + 1];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Board {
            vertex_count,
            edges,
            grid_shape,
            adjacency,
        }
    }

    /// The path P_n.
    pub fn path(n: usize) -> Result<Self, BoardError> {
        if n == 0 {
            return Err(BoardError::InvalidSize {
                kind: "path",
                size: n.to_string(),
            });
        }
        Ok(Self::build(n, (1..n).map(|i| (i, i + 1)).collect(), None))
    }

    /// The cycle C_n, n >= 3.
    pub fn cycle(n: usize) -> Result<Self, BoardError> {
        if n < 3 {
            return Err(BoardError::InvalidSize {
                kind: "cycle",
                size: n.to_string(),
            });
        }
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((1, n));
        edges.sort_unstable();
        Ok(Self::build(n, edges, None))
    }

    /// A `rows x cols` grid; cell (r, c) is vertex `(r - 1) * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Result<Self, BoardError> {
        if rows == 0 || cols == 0 {
            return Err(BoardError::InvalidSize {
                kind: "grid",
                size: format!("{rows}x{cols}"),
            });
        }
        let id = |r: usize, c: usize| (r - 1) * cols + c;
        let mut edges = Vec::new();
        for r in 1..=rows {
            for c in 1..=cols {
                if c < cols {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r < rows {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        edges.sort_unstable();
        Ok(Self::build(rows * cols, edges, Some((rows, cols))))
    }

    /// Disjoint union: `other`'s vertices are shifted past `self`'s.
    pub fn disjoint_union(&self, other: &Board) -> Board {
        let shift = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)))
            .collect();
        Self::build(self.vertex_count + other.vertex_count, edges, None)
    }

    /// Parses the board text format: a vertex count line followed by one
    /// `u v` edge per line. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self, BoardError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (first, header) = lines.next().ok_or(BoardError::Parse {
            line: 1,
            message: "missing vertex count".into(),
        })?;
        let vertex_count: usize = header.parse().map_err(|_| BoardError::Parse {
            line: first,
            message: format!("expected vertex count, found `{header}`"),
        })?;
        if vertex_count == 0 {
            return Err(BoardError::Parse {
                line: first,
                message: "vertex count must be positive".into(),
            });
        }

        let mut seen = BTreeSet::new();
        for (line, content) in lines {
            let err = |message: String| BoardError::Parse { line, message };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [u, v] = fields[..] else {
                return Err(err(format!("expected `u v`, found `{content}`")));
            };
            let u: usize = u.parse().map_err(|_| err(format!("bad vertex `{u}`")))?;
            let v: usize = v.parse().map_err(|_| err(format!("bad vertex `{v}`")))?;
            check_edge(vertex_count, u, v, &seen).map_err(err)?;
            seen.insert((u.min(v), u.max(v)));
        }
        Ok(Self::build(vertex_count, seen.into_iter().collect(), None))
    }

    /// Renders the text format accepted by [`Board::parse`].
    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn grid_shape(&self) -> Option<(usize, usize)> {
        self.grid_shape
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.vertex_count
    }

    /// Neighbours of `v`, sorted ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Stable identity of the vertex count and sorted edge list.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.vertex_count.hash(&mut h);
        self.edges.hash(&mut h);
        h.finish()
    }
}

fn check_edge(
    vertex_count: usize,
    u: usize,
    v: usize,
    seen: &BTreeSet<(usize, usize)>,
) -> Result<(), String> {
    for x in [u, v] {
        if x == 0 || x > vertex_count {
            return Err(format!("endpoint {x} out of range 1..={vertex_count}"));
        }
    }
    if u == v {
        return Err(format!("self-loop at {u}"));
    }
    if seen.contains(&(u.min(v), u.max(v))) {
        return Err(format!("duplicate edge {u} {v}"));
    }
    Ok(())
}

/// Builtin names: `path:N`, `cycle:N`, `grid:RxC`.
impl FromStr for Board {
    type Err = BoardError;

    fn from_str(s: &str) -> Result<Self, BoardError> {
        let unknown = || BoardError::UnknownBuiltin(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(unknown)?;
        match kind {
            "path" => Board::path(arg.parse().map_err(|_| unknown())?),
            "cycle" => Board::cycle(arg.parse().map_err(|_| unknown())?),
            "grid" => {
                let (r, c) = arg.split_once(['x', 'X']).ok_or_else(unknown)?;
                Board::grid(r.parse().map_err(|_| unknown())?, c.parse().map_err(|_| unknown())?)
            }
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.grid_shape {
            Some((r, c)) => write!(f, "grid {r}x{c}"),
            None => write!(f, "board({} vertices, {} edges)", self.vertex_count, self.edges.len()),
        }
    }
}
