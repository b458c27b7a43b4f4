//! Exhaustive search for the irreducible minimally k-matchable multigraphs.
//!
//! Graphs are generated up to isomorphism by canonical augmentation: a
//! child is its parent plus one edge, taken once per orbit of vertex pairs
//! under the parent's automorphism group, and kept only when the added
//! edge lies in the orbit of the child's canonical deletion edge (the edge
//! whose canonically relabeled endpoints are lexicographically largest).
//! Every isomorphism class is then reached exactly once.

use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_labeling, pair_index, short_hash, Labeling, CANON_VERTEX_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{named, Multigraph};
use crate::matching::{count_matchings, is_minimally_k_matchable, MinimalityVerdict};
use crate::reduction::{has_k2_component, is_irreducible, reduce};

pub const DEFAULT_GUARD_LIMIT: u64 = 50_000_000;

/// Augmentation-tree depth (in edges) at which subtrees are handed to
/// workers.
const SPLIT_DEPTH: usize = 3;

/// A generated graph together with its canonical labeling.
#[derive(Debug, Clone)]
pub struct Node {
    pub graph: Multigraph,
    pub labeling: Labeling,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationStats {
    /// Graphs accepted into the tree, roots included.
    pub generated: u64,
    /// Candidate pair orbits skipped because an endpoint was at the degree cap.
    pub pruned_degree_cap: u64,
    /// Candidate pair orbits skipped at the multiplicity cap.
    pub pruned_multiplicity_cap: u64,
    /// Children discarded by the canonical-parent test.
    pub rejected_non_canonical: u64,
}

impl GenerationStats {
    fn merge(&mut self, o: &GenerationStats) {
        self.generated += o.generated;
        self.pruned_degree_cap += o.pruned_degree_cap;
        self.pruned_multiplicity_cap += o.pruned_multiplicity_cap;
        self.rejected_non_canonical += o.rejected_non_canonical;
    }
}

/// Generator of all multigraphs on a fixed vertex set within degree and
/// multiplicity caps, one per isomorphism class.
#[derive(Debug, Clone, Copy)]
pub struct Augmenter {
    pub vertices: usize,
    pub max_degree: usize,
    pub max_multiplicity: usize,
}

impl Augmenter {
    pub fn new(vertices: usize, max_degree: usize, max_multiplicity: usize) -> Result<Self> {
        if vertices > CANON_VERTEX_LIMIT {
            return Err(Error::TooLarge { vertices, limit: CANON_VERTEX_LIMIT });
        }
        Ok(Augmenter { vertices, max_degree, max_multiplicity })
    }

    pub fn root(&self) -> Node {
        let graph = Multigraph::empty(self.vertices);
        let labeling = canonical_labeling(&graph).expect("size checked in new");
        Node { graph, labeling }
    }

    /// Canonical children of `node`, in order of their representative pair.
    pub fn children(&self, node: &Node, stats: &mut GenerationStats) -> Vec<Node> {
        let n = self.vertices;
        let g = &node.graph;
        let deg = g.degrees();
        let mut orbits = node.labeling.pair_orbits();
        let mut seen = vec![false; n * n];
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let root = orbits.find(pair_index(n, a, b));
                if std::mem::replace(&mut seen[root], true) {
                    continue;
                }
                if deg[a] >= self.max_degree || deg[b] >= self.max_degree {
                    stats.pruned_degree_cap += 1;
                    continue;
                }
                if g.multiplicity(a, b) >= self.max_multiplicity {
                    stats.pruned_multiplicity_cap += 1;
                    continue;
                }
                let (child, _) = g.add_edge(a, b).expect("a < b < n");
                let labeling = canonical_labeling(&child).expect("same size as parent");
                if is_canonical_extension(&labeling, a, b) {
                    stats.generated += 1;
                    out.push(Node { graph: child, labeling });
                } else {
                    stats.rejected_non_canonical += 1;
                }
            }
        }
        out
    }

    /// Depth-first walk of the subtree below `node`, `node` included.
    pub fn walk<F>(&self, node: &Node, stats: &mut GenerationStats, visit: &mut F) -> Result<()>
    where
        F: FnMut(&Node) -> Result<()>,
    {
        visit(node)?;
        for child in self.children(node, stats) {
            self.walk(&child, stats, visit)?;
        }
        Ok(())
    }
}

fn is_canonical_extension(labeling: &Labeling, a: usize, b: usize) -> bool {
    let &(x, y) = labeling.canonical_pairs().last().expect("child has an edge");
    let (p, q) = (labeling.order[x], labeling.order[y]);
    let (p, q) = (p.min(q), p.max(q));
    if (p, q) == (a, b) {
        return true;
    }
    let n = labeling.label.len();
    let mut orbits = labeling.pair_orbits();
    orbits.find(pair_index(n, a, b)) == orbits.find(pair_index(n, p, q))
}

/// Walks every graph of the given shape, splitting the tree across a pool
/// of `workers` threads. `visit` runs concurrently and must not rely on
/// visiting order. Aborts once more than `guard_limit` graphs have been
/// generated.
pub fn for_each_graph<F>(
    shapes: &[Augmenter],
    workers: usize,
    guard_limit: u64,
    visit: F,
) -> Result<GenerationStats>
where
    F: Fn(&Node) -> Result<()> + Sync,
{
    let counter = AtomicU64::new(0);
    let guard = |stats_before: u64, stats_after: u64| -> Result<()> {
        let total = counter.fetch_add(stats_after - stats_before, Ordering::Relaxed) + (stats_after - stats_before);
        if total > guard_limit {
            Err(Error::ResourceGuard { generated: total, limit: guard_limit })
        } else {
            Ok(())
        }
    };

    let mut stats = GenerationStats::default();
    let mut frontier: Vec<(Augmenter, Node)> = Vec::new();
    for aug in shapes {
        stats.generated += 1;
        let mut level = vec![aug.root()];
        for _ in 0..SPLIT_DEPTH {
            let mut next = Vec::new();
            for node in &level {
                visit(node)?;
                let before = stats.generated;
                next.extend(aug.children(node, &mut stats));
                guard(before, stats.generated)?;
            }
            level = next;
        }
        guard(0, 1)?;
        frontier.extend(level.into_iter().map(|node| (*aug, node)));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let parts: Vec<Result<GenerationStats>> = pool.install(|| {
        frontier
            .par_iter()
            .map(|(aug, node)| {
                let mut local = GenerationStats::default();
                walk_guarded(aug, node, &mut local, &mut |n: &Node| visit(n), &guard)?;
                Ok(local)
            })
            .collect()
    });
    for part in parts {
        stats.merge(&part?);
    }
    Ok(stats)
}

fn walk_guarded<F, G>(aug: &Augmenter, node: &Node, stats: &mut GenerationStats, visit: &mut F, guard: &G) -> Result<()>
where
    F: FnMut(&Node) -> Result<()>,
    G: Fn(u64, u64) -> Result<()>,
{
    visit(node)?;
    let before = stats.generated;
    let children = aug.children(node, stats);
    guard(before, stats.generated)?;
    for child in &children {
        walk_guarded(aug, child, stats, visit, guard)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub k: u64,
    pub max_vertices: usize,
    pub max_multiplicity: usize,
    pub worker_count: usize,
    pub guard_limit: u64,
}

impl SearchConfig {
    /// Defaults: multiplicity up to `k`, one worker per available core.
    pub fn new(k: u64, max_vertices: usize) -> Self {
        SearchConfig {
            k,
            max_vertices,
            max_multiplicity: k as usize,
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
            guard_limit: DEFAULT_GUARD_LIMIT,
        }
    }

    /// Suggested vertex bound when none is given.
    pub fn default_max_vertices(k: u64) -> usize {
        if k <= 3 {
            6
        } else {
            10
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.k == 0 {
            return bad("k must be positive".into());
        }
        if self.max_vertices == 0 || self.max_vertices % 2 == 1 {
            return bad(format!("max_vertices must be even and positive, got {}", self.max_vertices));
        }
        if self.max_vertices > CANON_VERTEX_LIMIT {
            return Err(Error::TooLarge { vertices: self.max_vertices, limit: CANON_VERTEX_LIMIT });
        }
        if self.max_multiplicity == 0 || self.max_multiplicity as u64 > self.k {
            return bad(format!("max_multiplicity must lie in 1..={}, got {}", self.k, self.max_multiplicity));
        }
        if self.worker_count == 0 {
            return bad("worker_count must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub canonical: String,
    pub hash: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub matching_count: u64,
    pub automorphism_count: u128,
    pub certificate: MinimalityVerdict,
}

impl Member {
    pub fn graph(&self) -> Multigraph {
        self.canonical.parse().expect("canonical strings are valid mg-v1")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    #[serde(flatten)]
    pub generation: GenerationStats,
    /// Full candidates with minimum degree at least 2 and more than 2k-2
    /// matchings.
    pub pruned_lemma1: u64,
    pub rejected_k2_component: u64,
    pub rejected_reducible: u64,
    pub rejected_not_k_matchable: u64,
    pub rejected_not_minimal: u64,
    pub accepted: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub k: u64,
    /// Every graph with at most this many vertices was examined.
    pub complete_up_to_vertices: usize,
    pub max_degree: usize,
    pub max_multiplicity: usize,
    pub members: Vec<Member>,
    pub stats: SearchStats,
}

enum Verdict {
    Lemma1,
    K2Component,
    Reducible,
    NotKMatchable,
    NotMinimal,
    Member(Box<Member>),
}

fn assess(node: &Node, k: u64) -> Verdict {
    let g = &node.graph;
    if g.min_degree() >= 2 && count_matchings(g, Some(2 * k - 1)) > 2 * k - 2 {
        return Verdict::Lemma1;
    }
    if has_k2_component(g) {
        return Verdict::K2Component;
    }
    if !is_irreducible(g) {
        return Verdict::Reducible;
    }
    let certificate = is_minimally_k_matchable(g, k);
    if !certificate.is_k_matchable {
        return Verdict::NotKMatchable;
    }
    if !certificate.is_minimal {
        return Verdict::NotMinimal;
    }
    let form = node.labeling.form();
    Verdict::Member(Box::new(Member {
        hash: short_hash(&form),
        canonical: form.canonical,
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        matching_count: count_matchings(g, None),
        automorphism_count: form.automorphism_count,
        certificate,
    }))
}

pub fn search_family(cfg: &SearchConfig) -> Result<FamilyReport> {
    cfg.validate()?;
    let k = cfg.k;
    let max_degree = k as usize;
    let shapes: Vec<Augmenter> = (2..=cfg.max_vertices)
        .step_by(2)
        .map(|n| Augmenter::new(n, max_degree, cfg.max_multiplicity))
        .collect::<Result<_>>()?;

    let tallies: [AtomicU64; 6] = Default::default();
    let members = std::sync::Mutex::new(Vec::new());
    let generation = for_each_graph(&shapes, cfg.worker_count, cfg.guard_limit, |node| {
        let slot = match assess(node, k) {
            Verdict::Lemma1 => 0,
            Verdict::K2Component => 1,
            Verdict::Reducible => 2,
            Verdict::NotKMatchable => 3,
            Verdict::NotMinimal => 4,
            Verdict::Member(m) => {
                members.lock().expect("no panics while held").push(*m);
                5
            }
        };
        tallies[slot].fetch_add(1, Ordering::Relaxed);
        Ok(())
    })?;

    let mut members = members.into_inner().expect("no panics while held");
    members.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    let t = |i: usize| tallies[i].load(Ordering::Relaxed);
    Ok(FamilyReport {
        k,
        complete_up_to_vertices: cfg.max_vertices,
        max_degree,
        max_multiplicity: cfg.max_multiplicity,
        members,
        stats: SearchStats {
            generation,
            pruned_lemma1: t(0),
            rejected_k2_component: t(1),
            rejected_reducible: t(2),
            rejected_not_k_matchable: t(3),
            rejected_not_minimal: t(4),
            accepted: t(5),
        },
    })
}

/// Size bound for minimally (k+1)-matchable graphs built from the members
/// of `family`: the maximum over members `H` of
/// `|V(H)| + (6 log2(k-1) + 12) |E(H)| + 2 log2(k) + 2`, rounded up.
/// `None` for an empty family.
pub fn theorem1_bound(k: u64, family: &FamilyReport) -> Result<Option<u64>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("bound needs k >= 2, got {k}")));
    }
    if family.k != k {
        return Err(Error::InvalidArgument(format!("family was computed for k = {}, not {k}", family.k)));
    }
    Ok(bound_over(k, family.members.iter().map(|m| (m.vertex_count, m.edge_count))))
}

/// Same bound over explicit `(vertex count, edge count)` pairs.
pub fn bound_over(k: u64, sizes: impl IntoIterator<Item = (usize, usize)>) -> Option<u64> {
    let kf = k as f64;
    let slope = 6.0 * (kf - 1.0).log2() + 12.0;
    let tail = 2.0 * kf.log2() + 2.0;
    sizes
        .into_iter()
        .map(|(v, e)| v as f64 + slope * e as f64 + tail)
        .max_by(f64::total_cmp)
        .map(|x| x.ceil() as u64)
}

/// Named base graphs known in closed form.
pub fn known_members(k: u64) -> Vec<(&'static str, Multigraph)> {
    match k {
        2 => vec![("C2", named::c2())],
        3 => vec![
            ("two-2-cycles", named::c2().disjoint_union(&named::c2())),
            ("theta", named::theta()),
            ("K4", named::k4()),
        ],
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub k: u64,
    pub verdict: MinimalityVerdict,
    /// Canonical mg-v1 text of the reduction base, when minimal.
    pub base: Option<String>,
    pub base_hash: Option<String>,
    /// Number of stripped K2 components.
    pub q: Option<usize>,
    pub smoothing_steps: Option<usize>,
    pub name: Option<&'static str>,
}

pub fn classify(g: &Multigraph, k: u64) -> Result<Classification> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let verdict = is_minimally_k_matchable(g, k);
    let mut out = Classification {
        k,
        verdict,
        base: None,
        base_hash: None,
        q: None,
        smoothing_steps: None,
        name: None,
    };
    if !out.verdict.is_minimal {
        return Ok(out);
    }
    let trace = reduce(g);
    let form = canonical_labeling(&trace.base)?.form();
    out.name = known_members(k)
        .into_iter()
        .find(|(_, h)| canonical_labeling(h).map(|l| l.form() == form).unwrap_or(false))
        .map(|(name, _)| name);
    out.q = Some(trace.stripped_k2);
    out.smoothing_steps = Some(trace.steps.len() - trace.stripped_k2);
    out.base_hash = Some(short_hash(&form));
    out.base = Some(form.canonical);
    Ok(out)
}

/// Writes one `<hash>.mg` file per member into `dir`, creating it.
pub fn write_member_files(report: &FamilyReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for m in &report.members {
        std::fs::write(dir.join(format!("{}.mg", m.hash)), &m.canonical)?;
    }
    Ok(())
}
