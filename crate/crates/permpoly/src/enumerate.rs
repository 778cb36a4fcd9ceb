//! Isomorph-free graph generation, canonical forms, and graph6 ingestion.
//!
//! The canonical form of a graph is the minimal packed upper-triangle bit
//! string over all vertex relabelings that respect the degree partition:
//! vertices are bucketed by degree ascending, positions are allocated per
//! bucket, and a branch-and-bound walks bucket-respecting permutations with
//! prefix pruning. Degrees are an isomorphism invariant, so two graphs get
//! the same canonical string exactly when they are isomorphic.
//!
//! Generation proceeds level by level: every order-k representative is
//! extended by one new vertex with every possible neighbourhood mask, the
//! extensions are canonicalized, and duplicates are dropped by canonical
//! string. The per-level set is kept in memory, which is trivially
//! affordable through order 9 (274,668 strings).

use crate::graph::{Graph, Graph6Error};
use std::collections::BTreeSet;
use std::io::BufRead;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Order cap for canonicalization (practical search bound with pruning).
pub const MAX_CANON_ORDER: usize = 10;
/// Order cap for in-repo generation.
pub const MAX_GENERATE_ORDER: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("order {order} exceeds the limit {max} for this operation")]
    OrderTooLarge { order: usize, max: usize },
}

/// Per-line errors from a graph6 stream.
#[derive(Debug, Error)]
pub enum StreamError {
    #[error("line {line}: {source}")]
    Decode { line: usize, source: Graph6Error },
    #[error("line {line}: {source}")]
    Io { line: usize, source: std::io::Error },
}

impl StreamError {
    pub fn line(&self) -> usize {
        match self {
            StreamError::Decode { line, .. } | StreamError::Io { line, .. } => *line,
        }
    }
}

/// A graph together with its canonical graph6 string. Two values have equal
/// `canonical_g6` iff their graphs are isomorphic; `graph` is the relabeled
/// canonical representative, so `graph.to_graph6() == canonical_g6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalGraph {
    pub graph: Graph,
    pub canonical_g6: String,
}

/// Canonicalizes `g` by branch-and-bound over degree-respecting relabelings.
pub fn canonical_form(g: &Graph) -> Result<CanonicalGraph, EnumerateError> {
    let n = g.order();
    if n > MAX_CANON_ORDER {
        return Err(EnumerateError::OrderTooLarge {
            order: n,
            max: MAX_CANON_ORDER,
        });
    }
    if n <= 1 {
        return Ok(CanonicalGraph {
            canonical_g6: g.to_graph6(),
            graph: g.clone(),
        });
    }

    // Ascending target degree for each position.
    let mut deg_at_pos: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    deg_at_pos.sort_unstable();

    let mut search = CanonSearch {
        g,
        deg_at_pos,
        used: 0,
        perm: Vec::with_capacity(n),
        cols: Vec::with_capacity(n),
        best: None,
    };
    search.descend();
    let (best_cols, _) = search.best.expect("canonical search explores at least one labeling");

    let mut canon = Graph::empty(n);
    for (p, &col) in best_cols.iter().enumerate() {
        for q in 0..p {
            if col >> (p - 1 - q) & 1 == 1 {
                canon.add_edge(q, p);
            }
        }
    }
    Ok(CanonicalGraph {
        canonical_g6: canon.to_graph6(),
        graph: canon,
    })
}

struct CanonSearch<'a> {
    g: &'a Graph,
    deg_at_pos: Vec<usize>,
    used: u64,
    /// perm[p] = original vertex placed at position p
    perm: Vec<usize>,
    /// cols[p] = adjacency bits of position p against positions 0..p,
    /// first stream bit most significant
    cols: Vec<u64>,
    best: Option<(Vec<u64>, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn descend(&mut self) {
        let n = self.g.order();
        let p = self.perm.len();
        if p == n {
            if self
                .best
                .as_ref()
                .is_none_or(|(bc, _)| self.cols < *bc)
            {
                self.best = Some((self.cols.clone(), self.perm.clone()));
            }
            return;
        }

        let mut candidates: Vec<(u64, usize)> = (0..n)
            .filter(|&v| self.used >> v & 1 == 0 && self.g.degree(v) == self.deg_at_pos[p])
            .map(|v| {
                let mut col = 0u64;
                for &u in &self.perm {
                    col = col << 1 | self.g.has_edge(u, v) as u64;
                }
                (col, v)
            })
            .collect();
        candidates.sort_unstable();

        for (col, v) in candidates {
            // compare (cols, col) against the incumbent prefix; recomputed
            // per candidate because a descendant may replace the incumbent
            if let Some((bc, _)) = &self.best {
                match self.cols.as_slice().cmp(&bc[..p]) {
                    std::cmp::Ordering::Greater => return,
                    std::cmp::Ordering::Equal if col > bc[p] => break,
                    _ => {}
                }
            }
            self.perm.push(v);
            self.cols.push(col);
            self.used |= 1 << v;
            self.descend();
            self.used &= !(1 << v);
            self.cols.pop();
            self.perm.pop();
        }
    }
}

/// Generates one representative per isomorphism class of simple graphs on
/// `n` vertices, in ascending canonical-graph6 order.
pub fn generate_all(n: usize) -> Result<Vec<Graph>, EnumerateError> {
    if n > MAX_GENERATE_ORDER {
        return Err(EnumerateError::OrderTooLarge {
            order: n,
            max: MAX_GENERATE_ORDER,
        });
    }
    let mut level = vec![Graph::empty(0)];
    for k in 0..n {
        let strings = extend_level(&level, k);
        level = strings
            .iter()
            .map(|s| Graph::from_graph6(s).expect("canonical strings round-trip"))
            .collect();
    }
    Ok(level)
}

/// Extends every order-k representative by one vertex with every
/// neighbourhood mask and dedups by canonical string.
fn extend_level(level: &[Graph], k: usize) -> BTreeSet<String> {
    let extend = |parent: &Graph, mask: u64| {
        let mut g = Graph::empty(k + 1);
        for u in 0..k {
            for v in (u + 1)..k {
                if parent.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
            if mask >> u & 1 == 1 {
                g.add_edge(u, k);
            }
        }
        canonical_form(&g)
            .expect("generated order stays within the canonical bound")
            .canonical_g6
    };

    #[cfg(feature = "parallel")]
    {
        level
            .par_iter()
            .fold(BTreeSet::new, |mut set, parent| {
                for mask in 0..1u64 << k {
                    set.insert(extend(parent, mask));
                }
                set
            })
            .reduce(BTreeSet::new, |mut a, mut b| {
                a.append(&mut b);
                a
            })
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut set = BTreeSet::new();
        for parent in level {
            for mask in 0..1u64 << k {
                set.insert(extend(parent, mask));
            }
        }
        set
    }
}

/// Lazily decodes a line-oriented graph6 stream, attaching 1-based line
/// numbers to errors. Blank lines are skipped.
pub struct Graph6Reader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

pub fn read_graph6_stream<R: BufRead>(source: R) -> Graph6Reader<R> {
    Graph6Reader {
        lines: source.lines(),
        line_no: 0,
    }
}

impl<R: BufRead> Iterator for Graph6Reader<R> {
    type Item = Result<Graph, StreamError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.line_no += 1;
            match self.lines.next()? {
                Err(source) => {
                    return Some(Err(StreamError::Io {
                        line: self.line_no,
                        source,
                    }))
                }
                Ok(line) => {
                    if line.trim().is_empty() {
                        continue;
                    }
                    return Some(Graph::from_graph6(&line).map_err(|source| {
                        StreamError::Decode {
                            line: self.line_no,
                            source,
                        }
                    }));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_up_to_six() {
        let expect = [1usize, 1, 2, 4, 11, 34, 156];
        for (n, &want) in expect.iter().enumerate() {
            assert_eq!(generate_all(n).unwrap().len(), want, "n={n}");
        }
    }

    #[test]
    fn generation_is_sorted_and_duplicate_free() {
        let graphs = generate_all(5).unwrap();
        let strings: Vec<String> = graphs.iter().map(|g| g.to_graph6()).collect();
        let mut sorted = strings.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(strings, sorted);
    }

    #[test]
    fn order_three_classes_have_distinct_canonical_strings() {
        let mut seen = BTreeSet::new();
        for g in generate_all(3).unwrap() {
            seen.insert(canonical_form(&g).unwrap().canonical_g6);
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn canonical_form_constant_on_p3_orbit() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let reference = canonical_form(&p3).unwrap().canonical_g6;
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for perm in perms {
            let relabeled = p3.relabel(&perm);
            assert_eq!(canonical_form(&relabeled).unwrap().canonical_g6, reference);
        }
    }

    #[test]
    fn canonical_form_is_idempotent() {
        for g in generate_all(5).unwrap() {
            let c = canonical_form(&g).unwrap();
            assert_eq!(c.graph.to_graph6(), c.canonical_g6);
            assert_eq!(canonical_form(&c.graph).unwrap().canonical_g6, c.canonical_g6);
        }
    }

    #[test]
    fn canonical_separates_non_isomorphic_regular_graphs() {
        // C6 and two disjoint triangles are both 2-regular
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let tri2 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(
            canonical_form(&c6).unwrap().canonical_g6,
            canonical_form(&tri2).unwrap().canonical_g6
        );
    }

    #[test]
    fn order_guards() {
        assert!(canonical_form(&Graph::empty(11)).is_err());
        assert!(generate_all(10).is_err());
    }

    #[test]
    fn stream_reads_records() {
        let input = "A_\nA?\n";
        let graphs: Result<Vec<Graph>, _> = read_graph6_stream(input.as_bytes()).collect();
        let graphs = graphs.unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(graphs[0].edge_count(), 1);
        assert_eq!(graphs[1].edge_count(), 0);
    }

    #[test]
    fn stream_empty_input() {
        assert_eq!(read_graph6_stream("".as_bytes()).count(), 0);
    }

    #[test]
    fn stream_names_the_malformed_line() {
        let input = "A_\nA1\nA?\n";
        let results: Vec<_> = read_graph6_stream(input.as_bytes()).collect();
        assert_eq!(results.len(), 3);
        assert!(results[0].is_ok());
        match &results[1] {
            Err(e) => assert_eq!(e.line(), 2),
            Ok(_) => panic!("line 2 should fail to decode"),
        }
        assert!(results[2].is_ok());
    }

    #[test]
    fn stream_skips_blank_lines() {
        let input = "\nA_\n\n";
        let graphs: Vec<_> = read_graph6_stream(input.as_bytes()).collect();
        assert_eq!(graphs.len(), 1);
    }
}
