//! Perfect-matching enumeration and the minimally-k-matchable test.
//!
//! Every search here branches on the lowest-index unmatched vertex and tries
//! its incident edges in id order, so enumeration order is a function of the
//! graph alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph};

/// Largest edge count the subset-enumeration oracle accepts.
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 24;

/// A perfect matching, stored as its sorted edge ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PerfectMatching {
    edges: Vec<EdgeId>,
}

impl PerfectMatching {
    /// Validates that `edges` is a perfect matching of `g`.
    pub fn new(g: &Multigraph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let mut edges: Vec<EdgeId> = edges.into_iter().collect();
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotPerfectMatching("repeated edge".into()));
        }
        let mut covered = vec![false; g.vertex_count()];
        for &id in &edges {
            let e = g.edge(id)?;
            for x in [e.u, e.v] {
                if std::mem::replace(&mut covered[x], true) {
                    return Err(Error::NotPerfectMatching(format!("vertex {x} covered twice")));
                }
            }
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::NotPerfectMatching(format!("vertex {v} uncovered")));
        }
        Ok(PerfectMatching { edges })
    }

    /// Trusts the caller: `edges` must be sorted and form a perfect matching.
    pub(crate) fn from_sorted(edges: Vec<EdgeId>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        PerfectMatching { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.edges.binary_search(&id).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// For each vertex, the id of its matching edge.
    pub fn mate_edges(&self, g: &Multigraph) -> Result<Vec<EdgeId>> {
        let mut mate = vec![EdgeId(usize::MAX); g.vertex_count()];
        for &id in &self.edges {
            let e = g.edge(id)?;
            mate[e.u] = id;
            mate[e.v] = id;
        }
        Ok(mate)
    }

    /// Symmetric difference of the edge sets.
    pub fn symmetric_difference(&self, other: &PerfectMatching) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .edges
            .iter()
            .filter(|e| !other.contains(**e))
            .chain(other.edges.iter().filter(|e| !self.contains(**e)))
            .copied()
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingSet {
    pub matchings: Vec<PerfectMatching>,
    /// False when enumeration stopped at the requested limit.
    pub exhaustive: bool,
}

struct Search {
    inc: Vec<Vec<(usize, usize)>>,
    matched: Vec<bool>,
    stack: Vec<usize>,
}

impl Search {
    fn new(g: &Multigraph) -> Self {
        Search {
            inc: g.incidence(),
            matched: vec![false; g.vertex_count()],
            stack: Vec::with_capacity(g.vertex_count() / 2),
        }
    }

    /// Calls `visit` with the edge indices of each perfect matching; stops
    /// as soon as `visit` returns false. Returns false if stopped.
    fn run(&mut self, from: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
        let Some(v) = (from..self.matched.len()).find(|&v| !self.matched[v]) else {
            return visit(&self.stack);
        };
        self.matched[v] = true;
        let mut go_on = true;
        for i in 0..self.inc[v].len() {
            let (ei, w) = self.inc[v][i];
            if self.matched[w] {
                continue;
            }
            self.matched[w] = true;
            self.stack.push(ei);
            go_on = self.run(v + 1, visit);
            self.stack.pop();
            self.matched[w] = false;
            if !go_on {
                break;
            }
        }
        self.matched[v] = false;
        go_on
    }
}

fn has_odd_component(g: &Multigraph) -> bool {
    g.components().iter().any(|c| c.len() % 2 == 1)
}

/// Enumerates perfect matchings in deterministic search order, stopping
/// after `limit` of them if given.
pub fn enumerate_matchings(g: &Multigraph, limit: Option<usize>) -> MatchingSet {
    if has_odd_component(g) {
        return MatchingSet { matchings: Vec::new(), exhaustive: true };
    }
    let edges = g.edges();
    let mut matchings = Vec::new();
    let mut truncated = false;
    let mut search = Search::new(g);
    search.run(0, &mut |stack| {
        if limit.is_some_and(|l| matchings.len() >= l) {
            truncated = true;
            return false;
        }
        let mut ids: Vec<EdgeId> = stack.iter().map(|&i| edges[i].id).collect();
        ids.sort_unstable();
        matchings.push(PerfectMatching::from_sorted(ids));
        true
    });
    MatchingSet { matchings, exhaustive: !truncated }
}

/// `|M(g)|`, or `min(|M(g)|, cap)` when a cap is given.
pub fn count_matchings(g: &Multigraph, cap: Option<u64>) -> u64 {
    if cap == Some(0) || has_odd_component(g) {
        return 0;
    }
    let mut count = 0u64;
    Search::new(g).run(0, &mut |_| {
        count += 1;
        cap.is_none_or(|c| count < c)
    });
    count
}

/// Whether some perfect matching of `g` uses edge `id`.
pub fn edge_in_some_matching(g: &Multigraph, id: EdgeId) -> Result<bool> {
    let e = *g.edge(id)?;
    let mut search = Search::new(g);
    search.matched[e.u] = true;
    search.matched[e.v] = true;
    let mut found = false;
    search.run(0, &mut |_| {
        found = true;
        false
    });
    Ok(found)
}

/// Counts perfect matchings by testing every edge subset of size `n/2`.
/// Independent of the backtracking search; used as its oracle.
pub fn brute_force_count(g: &Multigraph) -> Result<u64> {
    let m = g.edge_count();
    if m > BRUTE_FORCE_EDGE_LIMIT {
        return Err(Error::OracleDomain { edges: m, limit: BRUTE_FORCE_EDGE_LIMIT });
    }
    let n = g.vertex_count();
    if n % 2 == 1 || n / 2 > m {
        return Ok(0);
    }
    let size = n / 2;
    if size == 0 {
        return Ok(1);
    }
    let masks: Vec<u64> = g.edges().iter().map(|e| (1u64 << e.u) | (1u64 << e.v)).collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut count = 0;
    // Gosper's hack over all m-bit words with `size` bits set.
    let mut subset: u32 = (1u32 << size) - 1;
    let end: u32 = 1u32 << m;
    while subset < end {
        let mut covered = 0u64;
        let mut ok = true;
        let mut bits = subset;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if covered & masks[i] != 0 {
                ok = false;
                break;
            }
            covered |= masks[i];
        }
        if ok && covered == full {
            count += 1;
        }
        let c = subset & subset.wrapping_neg();
        let r = subset + c;
        subset = (((r ^ subset) >> 2) / c) | r;
    }
    Ok(count)
}

/// Outcome of the minimally-k-matchable test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityVerdict {
    pub k: u64,
    pub is_k_matchable: bool,
    pub is_minimal: bool,
    /// Lowest-id edge whose deletion still leaves at least `k` matchings.
    pub witness_edge: Option<EdgeId>,
    /// `min(|M(g)|, 2k - 1)`.
    pub count: u64,
    /// True when `count` is `|M(g)|` itself rather than the cap.
    pub count_exact: bool,
}

pub fn is_minimally_k_matchable(g: &Multigraph, k: u64) -> MinimalityVerdict {
    assert!(k >= 1, "k must be positive");
    let cap = 2 * k - 1;
    let count = count_matchings(g, Some(cap));
    let is_k_matchable = count >= k;
    let witness_edge = if is_k_matchable {
        g.edge_ids().find(|&id| {
            let h = g.delete_edge(id).expect("edge from the graph itself");
            count_matchings(&h, Some(k)) >= k
        })
    } else {
        None
    };
    MinimalityVerdict {
        k,
        is_k_matchable,
        is_minimal: is_k_matchable && witness_edge.is_none(),
        witness_edge,
        count,
        count_exact: count < cap,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma1Bound {
    /// `|M| <= d/(d-1) * (k-1)` at a vertex of degree `d >= 2`.
    VertexDegree,
    /// `Δ <= k`.
    MaxDegree,
    /// `|M| <= 2k - 2` once some vertex has degree at least 2.
    TwiceKMinusTwo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Violation {
    pub bound: Lemma1Bound,
    pub vertex: Option<usize>,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    pub holds: bool,
    pub count: u64,
    pub max_degree: usize,
    pub violation: Option<Lemma1Violation>,
}

/// Checks the degree and count bounds that hold for every minimally
/// k-matchable graph. Fails with [`Error::Precondition`] if `g` is not
/// minimally k-matchable; a bound violation is reported in the result.
pub fn lemma1_bound_check(g: &Multigraph, k: u64) -> Result<Lemma1Report> {
    let verdict = is_minimally_k_matchable(g, k);
    if !verdict.is_minimal {
        return Err(Error::Precondition(format!("graph is not minimally {k}-matchable")));
    }
    let count = count_matchings(g, None);
    let degrees = g.degrees();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let mut violation = None;
    for (x, &d) in degrees.iter().enumerate() {
        // |M| (d-1) <= d (k-1), kept in integers
        if d >= 2 && count * (d as u64 - 1) > d as u64 * (k - 1) {
            violation = Some(Lemma1Violation { bound: Lemma1Bound::VertexDegree, vertex: Some(x), degree: d });
            break;
        }
    }
    if violation.is_none() && max_degree as u64 > k {
        let x = degrees.iter().position(|&d| d == max_degree);
        violation = Some(Lemma1Violation { bound: Lemma1Bound::MaxDegree, vertex: x, degree: max_degree });
    }
    if violation.is_none() && max_degree >= 2 && count > 2 * k - 2 {
        violation = Some(Lemma1Violation { bound: Lemma1Bound::TwiceKMinusTwo, vertex: None, degree: max_degree });
    }
    Ok(Lemma1Report { holds: violation.is_none(), count, max_degree, violation })
}
