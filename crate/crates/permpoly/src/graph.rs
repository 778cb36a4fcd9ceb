//! Simple undirected graphs as bitset adjacency rows, plus the graph6 codec.
//!
//! A [`Graph`] stores one 64-bit word per vertex, so orders up to 62 (the
//! graph6 short-form limit) fit in a single word per row. Bit `j` of row `i`
//! is set iff `{i, j}` is an edge. Symmetry and a zero diagonal are enforced
//! by every constructor.

use thiserror::Error;

/// Largest order representable in graph6 short form.
pub const MAX_GRAPH_ORDER: usize = 62;

const G6_HEADER_PREFIX: &str = ">>graph6<<";

/// Decode errors for the graph6 format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    /// A byte outside the printable graph6 range.
    #[error("invalid graph6 byte {byte:#04x} at offset {pos}")]
    InvalidByte { pos: usize, byte: u8 },
    /// Fewer payload bytes than the order requires.
    #[error("truncated graph6 record: got {got} payload bytes, order {order} needs {need}")]
    TruncatedPayload { order: usize, need: usize, got: usize },
    /// More payload bytes than the order requires.
    #[error("trailing bytes after graph6 payload: got {got}, order {order} needs {need}")]
    TrailingBytes { order: usize, need: usize, got: usize },
    /// Padding bits of the final payload byte must be zero.
    #[error("nonzero padding bits in final graph6 byte")]
    NonzeroPadding,
    /// Long-form headers (order > 62) are not supported.
    #[error("graph6 long form (order > 62) is not supported")]
    OrderTooLarge,
}

/// A simple undirected graph on at most 62 vertices.
///
/// Rows are immutable once built (the mutating methods are constructors in
/// spirit); values are cheap to clone and safe to share across threads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    order: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `order` vertices.
    ///
    /// Panics if `order > 62`; in-memory construction is bounds-checked at
    /// the call site, only the decoder reports order errors as values.
    pub fn empty(order: usize) -> Self {
        assert!(
            order <= MAX_GRAPH_ORDER,
            "graph order {order} exceeds {MAX_GRAPH_ORDER}"
        );
        Graph {
            order,
            adj: vec![0; order],
        }
    }

    /// Graph on `order` vertices with the given edge list.
    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::empty(order);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Complete graph K_n.
    pub fn complete(order: usize) -> Self {
        Graph::empty(order).complement()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Inserts the edge `{u, v}`. Panics on self-loops or out-of-range
    /// vertices; idempotent on existing edges.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loops are not allowed");
        assert!(u < self.order && v < self.order, "vertex out of range");
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order && v < self.order && self.adj[u] >> v & 1 == 1
    }

    /// Neighbourhood of `i` as a bit word.
    pub fn row(&self, i: usize) -> u64 {
        self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    /// Number of unordered edges.
    pub fn edge_count(&self) -> usize {
        let total: u32 = self.adj.iter().map(|r| r.count_ones()).sum();
        (total / 2) as usize
    }

    /// Complement graph: same order, edge `{i, j}` iff `i != j` and `self`
    /// lacks `{i, j}`.
    pub fn complement(&self) -> Graph {
        let mask = if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        };
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(i, &row)| !row & mask & !(1 << i))
            .collect();
        Graph {
            order: self.order,
            adj,
        }
    }

    /// Relabels vertices: vertex `u` of `self` becomes `perm[u]` in the
    /// result. `perm` must be a permutation of `0..order`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order);
        let mut g = Graph::empty(self.order);
        for u in 0..self.order {
            for v in (u + 1)..self.order {
                if self.has_edge(u, v) {
                    g.add_edge(perm[u], perm[v]);
                }
            }
        }
        g
    }

    /// Parses one graph6 record. Tolerates the `>>graph6<<` file header and
    /// a trailing newline; rejects everything else that is not a canonical
    /// short-form encoding, so decode and encode are exact inverses.
    pub fn from_graph6(text: &str) -> Result<Graph, Graph6Error> {
        let s = text.strip_prefix(G6_HEADER_PREFIX).unwrap_or(text);
        let s = s.strip_suffix('\n').unwrap_or(s);
        let s = s.strip_suffix('\r').unwrap_or(s);
        let bytes = s.as_bytes();

        let &header = bytes.first().ok_or(Graph6Error::TruncatedPayload {
            order: 0,
            need: 1,
            got: 0,
        })?;
        if header == 126 {
            return Err(Graph6Error::OrderTooLarge);
        }
        if !(63..=125).contains(&header) {
            return Err(Graph6Error::InvalidByte {
                pos: 0,
                byte: header,
            });
        }
        let order = (header - 63) as usize;
        let nbits = order * order.saturating_sub(1) / 2;
        let need = nbits.div_ceil(6);
        let payload = &bytes[1..];
        if payload.len() < need {
            return Err(Graph6Error::TruncatedPayload {
                order,
                need,
                got: payload.len(),
            });
        }
        if payload.len() > need {
            return Err(Graph6Error::TrailingBytes {
                order,
                need,
                got: payload.len(),
            });
        }

        let mut g = Graph::empty(order);
        let mut bit = 0usize;
        for (k, &b) in payload.iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Graph6Error::InvalidByte { pos: k + 1, byte: b });
            }
            let group = b - 63;
            for shift in (0..6).rev() {
                let set = group >> shift & 1 == 1;
                if bit < nbits {
                    if set {
                        let (i, j) = pair_at(bit);
                        g.add_edge(i, j);
                    }
                } else if set {
                    return Err(Graph6Error::NonzeroPadding);
                }
                bit += 1;
            }
        }
        Ok(g)
    }

    /// Encodes as a graph6 record: header byte `order + 63`, then the strict
    /// upper triangle in column-major order, six bits per byte, MSB first,
    /// zero-padded. No header prefix, no trailing newline.
    pub fn to_graph6(&self) -> String {
        let mut out = String::new();
        out.push((self.order as u8 + 63) as char);
        let mut group = 0u8;
        let mut filled = 0u8;
        for j in 1..self.order {
            for i in 0..j {
                group = group << 1 | self.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push((group + 63) as char);
                    group = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(((group << (6 - filled)) + 63) as char);
        }
        out
    }
}

/// Maps a position in the column-major upper-triangle bit stream to its
/// vertex pair: positions run x(0,1), x(0,2), x(1,2), x(0,3), ...
fn pair_at(mut pos: usize) -> (usize, usize) {
    let mut col = 1;
    while pos >= col {
        pos -= col;
        col += 1;
    }
    (pos, col)
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph({:?})", self.to_graph6())
    }
}
