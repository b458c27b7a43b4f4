//! Loopless undirected multigraphs with identity-carrying edges, and the
//! `mg-v1` text format.
//!
//! ```text
//! mg <n> <m>
//! <u> <v>        (exactly m lines, u != v, both < n)
//! # comment lines are ignored
//! ```
//!
//! Edge ids are assigned `0..m` in file order. Parallel edges are distinct
//! edges that happen to share their endpoints.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One edge. Endpoints are stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_incident(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// An immutable-by-convention multigraph on the dense vertex set `0..n`.
///
/// Edges are kept sorted by id; every operation that produces a new graph
/// leaves the ids of untouched edges alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn empty(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    /// Builds a graph from endpoint pairs; ids follow slice order.
    pub fn from_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::empty(n);
        for &(u, v) in pairs {
            g.push_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edge_index(id)
            .map(|i| &self.edges[i])
            .ok_or(Error::UnknownEdge(id))
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edge_index(id).is_some()
    }

    pub(crate) fn edge_index(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    /// The smallest id strictly larger than every id in use.
    pub fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.last().map_or(0, |e| e.id.0 + 1))
    }

    fn check_endpoints(&self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, vertex_count: self.n });
            }
        }
        if u == v {
            return Err(Error::LoopEdge { vertex: u, line: 0 });
        }
        Ok(())
    }

    fn push_edge(&mut self, u: usize, v: usize) -> Result<EdgeId> {
        self.check_endpoints(u, v)?;
        let id = self.next_edge_id();
        self.edges.push(Edge { id, u: u.min(v), v: u.max(v) });
        Ok(id)
    }

    /// Returns `self` plus a new edge `uv` with a fresh id.
    pub fn add_edge(&self, u: usize, v: usize) -> Result<(Multigraph, EdgeId)> {
        let mut g = self.clone();
        let id = g.push_edge(u, v)?;
        Ok((g, id))
    }

    pub(crate) fn insert_edge_with_id(&mut self, id: EdgeId, u: usize, v: usize) -> Result<()> {
        self.check_endpoints(u, v)?;
        match self.edges.binary_search_by_key(&id, |e| e.id) {
            Ok(_) => Err(Error::DuplicateEdge(id)),
            Err(pos) => {
                self.edges.insert(pos, Edge { id, u: u.min(v), v: u.max(v) });
                Ok(())
            }
        }
    }

    pub(crate) fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub(crate) fn remove_edge_in_place(&mut self, id: EdgeId) -> Result<Edge> {
        let i = self.edge_index(id).ok_or(Error::UnknownEdge(id))?;
        Ok(self.edges.remove(i))
    }

    /// Removes the given vertices (which must be isolated or whose edges are
    /// dropped) and reindexes the rest densely, preserving relative order.
    /// Returns the old-to-new vertex map.
    pub(crate) fn remove_vertices(&mut self, gone: &[usize]) -> Vec<Option<usize>> {
        let mut map = vec![None; self.n];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if !gone.contains(&v) {
                *slot = Some(next);
                next += 1;
            }
        }
        self.edges.retain(|e| map[e.u].is_some() && map[e.v].is_some());
        for e in &mut self.edges {
            let (a, b) = (map[e.u].unwrap(), map[e.v].unwrap());
            e.u = a.min(b);
            e.v = a.max(b);
        }
        self.n = next;
        map
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, vertex_count: self.n });
        }
        Ok(self.edges.iter().filter(|e| e.is_incident(v)).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Number of parallel edges joining `u` and `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let (a, b) = (u.min(v), u.max(v));
        self.edges.iter().filter(|e| e.u == a && e.v == b).count()
    }

    /// Incident edges of every vertex, each list in id order, as
    /// `(edge index, other endpoint)`.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push((i, e.v));
            inc[e.v].push((i, e.u));
        }
        inc
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    /// Isolated vertices are singleton components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(self.n, self.edges.iter().map(|e| (e.u, e.v)))
    }

    pub fn delete_edge(&self, id: EdgeId) -> Result<Multigraph> {
        let mut g = self.clone();
        g.remove_edge_in_place(id)?;
        Ok(g)
    }

    /// `self` followed by `other`; the vertices of `other` are shifted by
    /// `self.vertex_count()` and its edge ids by `self.next_edge_id()`.
    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let shift = self.next_edge_id().0;
        let mut g = self.clone();
        g.n += other.n;
        g.edges.extend(other.edges.iter().map(|e| Edge {
            id: EdgeId(e.id.0 + shift),
            u: e.u + self.n,
            v: e.v + self.n,
        }));
        g
    }

    /// Relabels vertex `v` to `perm[v]`. Edge ids are kept.
    pub fn permute(&self, perm: &[usize]) -> Result<Multigraph> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (perm[e.u], perm[e.v]);
                Edge { id: e.id, u: a.min(b), v: a.max(b) }
            })
            .collect();
        Ok(Multigraph { n: self.n, edges })
    }

    /// Endpoint pairs sorted, i.e. the edge multiset.
    pub fn sorted_pairs(&self) -> Vec<(usize, usize)> {
        let mut p: Vec<_> = self.edges.iter().map(|e| (e.u, e.v)).collect();
        p.sort_unstable();
        p
    }

    pub fn to_mg_string(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Multigraph> {
        parse_mg(text)
    }
}

pub(crate) fn components_of(
    n: usize,
    pairs: impl Iterator<Item = (usize, usize)>,
) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for (u, v) in pairs {
        uf.union(u, v);
    }
    uf.classes()
}

/// Serializes in mg-v1: header, then `min max` per edge in id order.
impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mg {} {}", self.n, self.edges.len())?;
        for e in &self.edges {
            writeln!(f, "{} {}", e.u, e.v)?;
        }
        Ok(())
    }
}

/// Serialized as its mg-v1 text.
impl Serialize for Multigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::str::FromStr for Multigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_mg(s)
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

/// Splits a line into tokens separated by exactly one space, returning
/// `(column, token)` pairs with 1-based columns.
fn tokens(line: &str, lineno: usize) -> Result<Vec<(usize, &str)>> {
    if let Some((pos, c)) = line
        .char_indices()
        .find(|&(_, c)| c != ' ' && !c.is_ascii_alphanumeric())
    {
        return Err(syntax(lineno, pos + 1, format!("unexpected character {c:?}")));
    }
    let mut out = Vec::new();
    let mut col = 1;
    for tok in line.split(' ') {
        if tok.is_empty() {
            return Err(syntax(lineno, col, "expected a single space between fields"));
        }
        out.push((col, tok));
        col += tok.len() + 1;
    }
    Ok(out)
}

fn number(tok: &str, lineno: usize, col: usize) -> Result<usize> {
    if !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(lineno, col, format!("expected a decimal number, found {tok:?}")));
    }
    tok.parse()
        .map_err(|_| syntax(lineno, col, format!("number {tok:?} out of range")))
}

fn parse_mg(text: &str) -> Result<Multigraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut g = Multigraph::default();
    let mut last_line = 0;
    for (i, line) in text.split('\n').enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks = tokens(line, lineno)?;
        match header {
            None => {
                if toks[0].1 != "mg" {
                    return Err(syntax(lineno, 1, "expected header `mg <n> <m>`"));
                }
                if toks.len() != 3 {
                    return Err(syntax(lineno, 1, "header must be `mg <n> <m>`"));
                }
                let n = number(toks[1].1, lineno, toks[1].0)?;
                let m = number(toks[2].1, lineno, toks[2].0)?;
                header = Some((n, m));
                g = Multigraph::empty(n);
                g.edges.reserve(m);
            }
            Some((n, m)) => {
                if g.edges.len() == m {
                    return Err(syntax(lineno, 1, format!("more than the declared {m} edge lines")));
                }
                if toks.len() != 2 {
                    return Err(syntax(lineno, 1, "edge line must be `<u> <v>`"));
                }
                let u = number(toks[0].1, lineno, toks[0].0)?;
                let v = number(toks[1].1, lineno, toks[1].0)?;
                for x in [u, v] {
                    if x >= n {
                        return Err(Error::VertexOutOfRange { vertex: x, vertex_count: n });
                    }
                }
                if u == v {
                    return Err(Error::LoopEdge { vertex: u, line: lineno });
                }
                g.push_edge(u, v)?;
            }
        }
    }
    match header {
        None => Err(syntax(last_line.max(1), 1, "missing header `mg <n> <m>`")),
        Some((_, m)) if g.edges.len() < m => Err(syntax(
            last_line,
            1,
            format!("expected {m} edge lines, found {}", g.edges.len()),
        )),
        Some(_) => Ok(g),
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two classes were merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // smaller root wins so representatives are class minima
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = self.find(v);
            by_root[r].push(v);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

/// Small named graphs used throughout the crate and its tests.
pub mod named {
    use super::Multigraph;

    /// `k` parallel edges between two vertices: K2 (1), C2 (2), theta (3).
    pub fn bundle(k: usize) -> Multigraph {
        let pairs = vec![(0, 1); k];
        Multigraph::from_edges(2, &pairs).unwrap()
    }

    pub fn k2() -> Multigraph {
        bundle(1)
    }

    pub fn c2() -> Multigraph {
        bundle(2)
    }

    pub fn theta() -> Multigraph {
        bundle(3)
    }

    /// Cycle of length `len >= 2`; `cycle(2)` is C2.
    pub fn cycle(len: usize) -> Multigraph {
        assert!(len >= 2, "cycles have length at least 2");
        let pairs: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Multigraph::from_edges(len, &pairs).unwrap()
    }

    pub fn path(vertices: usize) -> Multigraph {
        let pairs: Vec<_> = (1..vertices).map(|i| (i - 1, i)).collect();
        Multigraph::from_edges(vertices, &pairs).unwrap()
    }

    pub fn complete(n: usize) -> Multigraph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        Multigraph::from_edges(n, &pairs).unwrap()
    }

    pub fn k4() -> Multigraph {
        complete(4)
    }
}
