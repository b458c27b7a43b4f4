//! Alternating cycles, exchanges, chords and chambers.
//!
//! A cycle `C` is M-alternating when `M ∩ E(C)` is a perfect matching of
//! `C`. Given a second perfect matching `N`, a chord of `C` is an
//! N,M-alternating path (first and last edge in `N`) that meets `C` only at
//! its two ends. With `C` oriented, every cycle vertex is either the initial
//! or the terminal vertex of its M-edge; a chord whose ends are both initial
//! is an out-chord, both terminal an in-chord, and otherwise odd.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, UnionFind};
use crate::matching::{edge_in_some_matching, PerfectMatching};

/// A cycle with a direction: edge `i` joins vertex `i` and vertex `i + 1`
/// (mod length).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientedCycle {
    vertices: Vec<usize>,
    edges: Vec<EdgeId>,
}

impl OrientedCycle {
    /// Validates the cycle against `g`.
    pub fn new(g: &Multigraph, vertices: Vec<usize>, edges: Vec<EdgeId>) -> Result<Self> {
        let len = vertices.len();
        if len < 2 || edges.len() != len {
            return Err(Error::InvalidCycle(format!(
                "{len} vertices and {} edges; need equal counts of at least 2",
                edges.len()
            )));
        }
        let mut seen = vec![false; g.vertex_count()];
        for &v in &vertices {
            if v >= g.vertex_count() {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count: g.vertex_count() });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidCycle(format!("vertex {v} repeated")));
            }
        }
        let mut ids = edges.clone();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCycle("edge repeated".into()));
        }
        for i in 0..len {
            let e = g.edge(edges[i])?;
            let (a, b) = (vertices[i], vertices[(i + 1) % len]);
            if (e.u, e.v) != (a.min(b), a.max(b)) {
                return Err(Error::InvalidCycle(format!("edge {} does not join {a} and {b}", edges[i])));
            }
        }
        Ok(OrientedCycle { vertices, edges })
    }

    /// Builds a cycle from its vertex sequence using the lowest-id unused
    /// edge at each step. With `prefer`, steps alternate between edges in
    /// and out of the matching where the graph allows it, starting inside.
    pub fn from_vertices(g: &Multigraph, vertices: Vec<usize>, prefer: Option<&PerfectMatching>) -> Result<Self> {
        let len = vertices.len();
        let mut edges: Vec<EdgeId> = Vec::with_capacity(len);
        for i in 0..len {
            let (a, b) = (vertices[i], vertices[(i + 1) % len]);
            let (lo, hi) = (a.min(b), a.max(b));
            let joining: Vec<EdgeId> = g
                .edges()
                .iter()
                .filter(|e| (e.u, e.v) == (lo, hi) && !edges.contains(&e.id))
                .map(|e| e.id)
                .collect();
            let pick = prefer
                .and_then(|m| {
                    let want = edges.last().is_none_or(|&prev| !m.contains(prev));
                    joining.iter().copied().find(|&id| m.contains(id) == want)
                })
                .or_else(|| joining.first().copied());
            let Some(id) = pick else {
                return Err(Error::InvalidCycle(format!("no unused edge joins {a} and {b}")));
            };
            edges.push(id);
        }
        OrientedCycle::new(g, vertices, edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edges.contains(&id)
    }

    /// The same cycle traversed the other way round.
    pub fn inverse(&self) -> OrientedCycle {
        let len = self.len();
        let vertices = (0..len).map(|i| self.vertices[(len - i) % len]).collect();
        let edges = (0..len).map(|i| self.edges[(2 * len - 1 - i) % len]).collect();
        OrientedCycle { vertices, edges }
    }

    /// Vertices of the `a,b`-segment following the orientation, both ends
    /// included.
    pub fn segment(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let (i, j) = (self.position(a)?, self.position(b)?);
        let len = self.len();
        let steps = (j + len - i) % len;
        Some((0..=steps).map(|s| self.vertices[(i + s) % len]).collect())
    }
}

fn check_alternating(g: &Multigraph, m: &PerfectMatching, c: &OrientedCycle) -> Result<bool> {
    OrientedCycle::new(g, c.vertices.clone(), c.edges.clone())?;
    PerfectMatching::new(g, m.edges().iter().copied())?;
    let len = c.len();
    if len % 2 == 1 {
        return Ok(false);
    }
    let inm: Vec<bool> = c.edges.iter().map(|&e| m.contains(e)).collect();
    Ok((0..len).all(|i| inm[i] != inm[(i + 1) % len]))
}

/// True when the edges of `c` alternate in and out of `m`.
pub fn is_alternating_cycle(g: &Multigraph, m: &PerfectMatching, c: &OrientedCycle) -> Result<bool> {
    check_alternating(g, m, c)
}

/// The matching obtained from `m` by exchanging along `c`.
pub fn exchange(g: &Multigraph, m: &PerfectMatching, c: &OrientedCycle) -> Result<PerfectMatching> {
    if !check_alternating(g, m, c)? {
        return Err(Error::NotAlternating);
    }
    let mut edges: Vec<EdgeId> = m
        .edges()
        .iter()
        .copied()
        .filter(|e| !c.contains_edge(*e))
        .chain(c.edges.iter().copied().filter(|e| !m.contains(*e)))
        .collect();
    edges.sort_unstable();
    Ok(PerfectMatching::from_sorted(edges))
}

/// Splits `m △ n` into its alternating cycles. Each cycle starts at its
/// smallest vertex and leaves it along the `m`-edge; cycles are ordered by
/// starting vertex.
pub fn symdiff_decompose(g: &Multigraph, m: &PerfectMatching, n: &PerfectMatching) -> Result<Vec<OrientedCycle>> {
    let m_mate = m.mate_edges(g)?;
    let n_mate = n.mate_edges(g)?;
    let mut done = vec![false; g.vertex_count()];
    let mut cycles = Vec::new();
    for start in 0..g.vertex_count() {
        if done[start] || m_mate[start] == n_mate[start] {
            continue;
        }
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut v = start;
        let mut use_m = true;
        loop {
            done[v] = true;
            vertices.push(v);
            let id = if use_m { m_mate[v] } else { n_mate[v] };
            edges.push(id);
            v = g.edge(id)?.other(v);
            use_m = !use_m;
            if v == start {
                break;
            }
        }
        cycles.push(OrientedCycle::new(g, vertices, edges)?);
    }
    Ok(cycles)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChordKind {
    In,
    Out,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chord {
    /// Path vertices from `start` to `end`.
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
    pub start: usize,
    pub end: usize,
    pub kind: ChordKind,
    /// Contains an edge of the designated set.
    pub external: bool,
}

impl Chord {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Whether cycle vertex `pos` is the initial vertex of its oriented M-edge.
fn is_initial(c: &OrientedCycle, m: &PerfectMatching, pos: usize) -> bool {
    m.contains(c.edges[pos])
}

/// Every chord of the `m`-alternating cycle `c` with respect to `n`, each
/// reported once, starting from the end with the smaller cycle position.
/// Chords are ordered by that position.
pub fn find_chords(
    g: &Multigraph,
    c: &OrientedCycle,
    m: &PerfectMatching,
    n: &PerfectMatching,
    f: &[EdgeId],
) -> Result<Vec<Chord>> {
    if !check_alternating(g, m, c)? {
        return Err(Error::NotAlternating);
    }
    let n_mate = n.mate_edges(g)?;
    let m_mate = m.mate_edges(g)?;
    for &id in f {
        g.edge(id)?;
    }
    let mut pos_of = vec![None; g.vertex_count()];
    for (i, &v) in c.vertices.iter().enumerate() {
        pos_of[v] = Some(i);
    }
    let mut chords = Vec::new();
    for (i, &a) in c.vertices.iter().enumerate() {
        let first = n_mate[a];
        if c.contains_edge(first) {
            continue;
        }
        let mut vertices = vec![a];
        let mut edges = vec![first];
        let mut v = g.edge(first)?.other(a);
        // off the cycle every vertex's M-edge leads to another off-cycle
        // vertex, so the walk can only re-enter C along an N-edge
        while pos_of[v].is_none() {
            vertices.push(v);
            let me = m_mate[v];
            edges.push(me);
            v = g.edge(me)?.other(v);
            vertices.push(v);
            let ne = n_mate[v];
            edges.push(ne);
            v = g.edge(ne)?.other(v);
        }
        vertices.push(v);
        let j = pos_of[v].expect("loop exits on the cycle");
        if j < i {
            continue;
        }
        let kind = match (is_initial(c, m, i), is_initial(c, m, j)) {
            (true, true) => ChordKind::Out,
            (false, false) => ChordKind::In,
            _ => ChordKind::Odd,
        };
        let external = edges.iter().any(|e| f.contains(e));
        chords.push(Chord { vertices, edges, start: a, end: v, kind, external });
    }
    Ok(chords)
}

/// Two chords cross when the ends of one lie in different components of
/// `C` minus the ends of the other. Chords sharing an end never cross.
pub fn chords_cross(c: &OrientedCycle, p: &Chord, q: &Chord) -> bool {
    let pos = |v| c.position(v);
    let (Some(a), Some(b), Some(x), Some(y)) = (pos(p.start), pos(p.end), pos(q.start), pos(q.end)) else {
        return false;
    };
    if [x, y].iter().any(|t| *t == a || *t == b) {
        return false;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let inside = |t: usize| lo < t && t < hi;
    inside(x) != inside(y)
}

/// Vertex sets of the components of the subgraph formed by all edges that
/// lie in some perfect matching.
pub fn chambers(g: &Multigraph) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in g.edges() {
        if uf.find(e.u) == uf.find(e.v) {
            continue;
        }
        if edge_in_some_matching(g, e.id).expect("edge of g") {
            uf.union(e.u, e.v);
        }
    }
    uf.classes()
}
