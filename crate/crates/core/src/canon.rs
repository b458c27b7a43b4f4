//! Canonical labeling of small multigraphs.
//!
//! Partition refinement colours vertices by degree, the multiset of incident
//! edge multiplicities, and the multiset of `(neighbour colour,
//! multiplicity)` pairs until stable. Remaining ties are broken by
//! individualizing vertices one at a time (depth first, lowest vertex
//! first). Leaves are compared by their relabeled sorted edge list and the
//! smallest one wins. Automorphisms discovered at equal leaves prune
//! equivalent branches, and the orbits along the first path give the order
//! of the automorphism group.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, UnionFind};

pub const CANON_VERTEX_LIMIT: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalForm {
    /// mg-v1 text of the canonically relabeled graph, edges sorted.
    pub canonical: String,
    /// Order of the vertex automorphism group (parallel edges are not
    /// permuted among themselves).
    pub automorphism_count: u128,
}

#[derive(Debug, Clone)]
pub struct Labeling {
    /// `label[v]` is the canonical index of vertex `v`.
    pub label: Vec<usize>,
    /// Inverse of `label`.
    pub order: Vec<usize>,
    /// Generators of the automorphism group, as vertex maps.
    pub generators: Vec<Vec<usize>>,
    pub automorphism_count: u128,
    key: Vec<(u8, u8)>,
    vertex_count: usize,
}

impl Labeling {
    /// Canonical edge list (sorted pairs of canonical indices).
    pub fn canonical_pairs(&self) -> Vec<(usize, usize)> {
        self.key.iter().map(|&(a, b)| (a as usize, b as usize)).collect()
    }

    pub fn canonical_graph(&self) -> Multigraph {
        Multigraph::from_edges(self.vertex_count, &self.canonical_pairs())
            .expect("canonical pairs come from a valid graph")
    }

    pub fn form(&self) -> CanonicalForm {
        CanonicalForm {
            canonical: self.canonical_graph().to_mg_string(),
            automorphism_count: self.automorphism_count,
        }
    }

    /// Union-find over unordered vertex pairs `{a, b}`, `a < b`, merged along
    /// the automorphism group. Index with [`pair_index`].
    pub(crate) fn pair_orbits(&self) -> UnionFind {
        let n = self.vertex_count;
        let mut uf = UnionFind::new(n * n);
        for gen in &self.generators {
            for a in 0..n {
                for b in a + 1..n {
                    uf.union(pair_index(n, a, b), pair_index(n, gen[a], gen[b]));
                }
            }
        }
        uf
    }
}

pub(crate) fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a.min(b) * n + a.max(b)
}

#[derive(Clone)]
struct Leaf {
    label: Vec<usize>,
    order: Vec<usize>,
    key: Vec<(u8, u8)>,
    path: Vec<usize>,
}

struct Canon<'g> {
    n: usize,
    /// Distinct neighbours with multiplicity.
    nbrs: Vec<Vec<(usize, u32)>>,
    graph: &'g Multigraph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl<'g> Canon<'g> {
    fn new(g: &'g Multigraph) -> Self {
        let n = g.vertex_count();
        let mut mult = vec![0u32; n * n];
        for e in g.edges() {
            mult[e.u * n + e.v] += 1;
            mult[e.v * n + e.u] += 1;
        }
        let nbrs = (0..n)
            .map(|v| {
                (0..n)
                    .filter(|&w| mult[v * n + w] > 0)
                    .map(|w| (w, mult[v * n + w]))
                    .collect()
            })
            .collect();
        Canon { n, nbrs, graph: g, first: None, best: None, generators: Vec::new() }
    }

    fn initial_colors(&self) -> Vec<usize> {
        let sig: Vec<(u32, Vec<u32>)> = self
            .nbrs
            .iter()
            .map(|ns| {
                let mut ms: Vec<u32> = ns.iter().map(|&(_, m)| m).collect();
                ms.sort_unstable();
                (ms.iter().sum(), ms)
            })
            .collect();
        let mut colors = vec![0; self.n];
        split_cell(&mut colors, 0, (0..self.n).collect(), |v| &sig[v]);
        self.refine(colors)
    }

    /// Refines to the coarsest equitable partition finer than `colors`.
    /// A colour is the start position of its cell.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        loop {
            let sig: Vec<Vec<(usize, u32)>> = self
                .nbrs
                .iter()
                .map(|ns| {
                    let mut s: Vec<(usize, u32)> = ns.iter().map(|&(w, m)| (colors[w], m)).collect();
                    s.sort_unstable();
                    s
                })
                .collect();
            let mut cells: Vec<Vec<usize>> = vec![Vec::new(); self.n];
            for v in 0..self.n {
                cells[colors[v]].push(v);
            }
            let mut changed = false;
            for (start, members) in cells.into_iter().enumerate() {
                if members.len() > 1 {
                    changed |= split_cell(&mut colors, start, members, |v| &sig[v]);
                }
            }
            if !changed {
                return colors;
            }
        }
    }

    fn visit(&mut self, colors: Vec<usize>, path: &mut Vec<usize>) -> Option<usize> {
        let mut size = vec![0usize; self.n];
        for &c in &colors {
            size[c] += 1;
        }
        let Some(target) = (0..self.n).find(|&c| size[c] > 1) else {
            return self.leaf(&colors, path);
        };
        let members: Vec<usize> = (0..self.n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &members {
            if !explored.is_empty() {
                let mut orbits = self.stabilizer_orbits(path);
                let rv = orbits.find(v);
                if explored.iter().any(|&u| orbits.find(u) == rv) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = colors.clone();
            for &w in &members {
                if w != v {
                    child[w] = target + 1;
                }
            }
            let child = self.refine(child);
            path.push(v);
            let jump = self.visit(child, path);
            path.pop();
            if let Some(depth) = jump {
                if depth < path.len() {
                    return Some(depth);
                }
            }
        }
        None
    }

    /// Orbits of the group generated by the known automorphisms that fix
    /// every vertex of `fixed`.
    fn stabilizer_orbits(&self, fixed: &[usize]) -> UnionFind {
        let mut uf = UnionFind::new(self.n);
        for gen in &self.generators {
            if fixed.iter().all(|&p| gen[p] == p) {
                for (v, &w) in gen.iter().enumerate() {
                    uf.union(v, w);
                }
            }
        }
        uf
    }

    fn leaf(&mut self, colors: &[usize], path: &[usize]) -> Option<usize> {
        let label = colors.to_vec();
        let mut order = vec![0; self.n];
        for (v, &l) in label.iter().enumerate() {
            order[l] = v;
        }
        let mut key: Vec<(u8, u8)> = self
            .graph
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (label[e.u], label[e.v]);
                (a.min(b) as u8, a.max(b) as u8)
            })
            .collect();
        key.sort_unstable();
        let leaf = Leaf { label, order, key, path: path.to_vec() };

        let Some(first) = &self.first else {
            self.best = Some(leaf.clone());
            self.first = Some(leaf);
            return None;
        };
        if leaf.key == first.key {
            let gen: Vec<usize> = leaf.label.iter().map(|&l| first.order[l]).collect();
            let depth = common_prefix(path, &first.path);
            self.generators.push(gen);
            return Some(depth);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.key.cmp(&best.key) {
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            std::cmp::Ordering::Equal => {
                let gen: Vec<usize> = leaf.label.iter().map(|&l| best.order[l]).collect();
                let depth = common_prefix(path, &best.path);
                self.generators.push(gen);
                Some(depth)
            }
            std::cmp::Ordering::Greater => None,
        }
    }

    fn automorphism_count(&self) -> u128 {
        let first_path = &self.first.as_ref().expect("search reached a leaf").path;
        let mut total: u128 = 1;
        for (i, &v) in first_path.iter().enumerate() {
            let mut orbits = self.stabilizer_orbits(&first_path[..i]);
            let r = orbits.find(v);
            let size = (0..self.n).filter(|&w| orbits.find(w) == r).count();
            total *= size as u128;
        }
        total
    }
}

/// Splits one cell (starting at `start`) by sorting its members on `sig`.
/// Returns true when the cell actually split.
fn split_cell<'a, S: Ord + ?Sized + 'a>(
    colors: &mut [usize],
    start: usize,
    mut members: Vec<usize>,
    sig: impl Fn(usize) -> &'a S,
) -> bool {
    members.sort_by(|&a, &b| sig(a).cmp(sig(b)).then(a.cmp(&b)));
    let mut pos = start;
    let mut split = false;
    for (i, &v) in members.iter().enumerate() {
        if i > 0 && sig(members[i - 1]) != sig(v) {
            pos = start + i;
            split = true;
        }
        colors[v] = pos;
    }
    split
}

pub fn canonical_labeling(g: &Multigraph) -> Result<Labeling> {
    let n = g.vertex_count();
    if n > CANON_VERTEX_LIMIT {
        return Err(Error::TooLarge { vertices: n, limit: CANON_VERTEX_LIMIT });
    }
    let mut canon = Canon::new(g);
    if n == 0 {
        return Ok(Labeling {
            label: Vec::new(),
            order: Vec::new(),
            generators: Vec::new(),
            automorphism_count: 1,
            key: Vec::new(),
            vertex_count: 0,
        });
    }
    let colors = canon.initial_colors();
    canon.visit(colors, &mut Vec::new());
    let automorphism_count = canon.automorphism_count();
    let best = canon.best.take().expect("search reached a leaf");
    Ok(Labeling {
        label: best.label,
        order: best.order,
        generators: canon.generators,
        automorphism_count,
        key: best.key,
        vertex_count: n,
    })
}

pub fn canonical_form(g: &Multigraph) -> Result<CanonicalForm> {
    Ok(canonical_labeling(g)?.form())
}

pub fn is_isomorphic(a: &Multigraph, b: &Multigraph) -> Result<bool> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        // still enforce the size limit on both inputs
        for g in [a, b] {
            if g.vertex_count() > CANON_VERTEX_LIMIT {
                return Err(Error::TooLarge { vertices: g.vertex_count(), limit: CANON_VERTEX_LIMIT });
            }
        }
        return Ok(false);
    }
    Ok(canonical_labeling(a)?.key == canonical_labeling(b)?.key)
}

/// Twelve hex digits of the SHA-256 of the canonical string.
pub fn short_hash(form: &CanonicalForm) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(form.canonical.as_bytes());
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}
