//! Property suites run over exhaustive or seeded random graph samples.
//!
//! Each suite reports how many cases it checked and describes the first
//! few failures. A suite that fails never errors; errors are reserved for
//! bad arguments and the resource guard.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alternating::{exchange, is_alternating_cycle, symdiff_decompose};
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::family::{classify, for_each_graph, search_family, Augmenter, SearchConfig, DEFAULT_GUARD_LIMIT};
use crate::graph::{named, EdgeId, Multigraph};
use crate::matching::{
    brute_force_count, count_matchings, enumerate_matchings, is_minimally_k_matchable, lemma1_bound_check,
    PerfectMatching, BRUTE_FORCE_EDGE_LIMIT,
};
use crate::reduction::{add_k2, reduce, subdivide_edge, SubdivisionSpec};

const MAX_REPORTED_FAILURES: usize = 10;
const SEED: u64 = 0x6d69_6e6d_6174_6368;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma1,
    Lemma2,
    Oracle,
    Claims,
    Exchange,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemma1" => Suite::Lemma1,
            "lemma2" => Suite::Lemma2,
            "oracle" => Suite::Oracle,
            "claims" => Suite::Claims,
            "exchange" => Suite::Exchange,
            _ => return Err(Error::InvalidArgument(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub k: u64,
    pub max_vertices: usize,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    /// Suite-specific tallies.
    pub counters: BTreeMap<String, u64>,
    /// Up to ten failing cases.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, k: u64, max_vertices: usize) -> Self {
        SuiteReport {
            suite,
            k,
            max_vertices,
            checked: 0,
            passed: 0,
            failed: 0,
            counters: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, failure: Option<String>) {
        self.checked += 1;
        match failure {
            None => self.passed += 1,
            Some(msg) => {
                self.failed += 1;
                if self.failures.len() < MAX_REPORTED_FAILURES {
                    self.failures.push(msg);
                }
            }
        }
    }

    fn bump(&mut self, key: &str, by: u64) {
        *self.counters.entry(key.to_string()).or_default() += by;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub k: u64,
    pub max_vertices: usize,
    pub workers: usize,
    pub guard_limit: u64,
    /// Random cases for the sampled suites.
    pub trials: u64,
}

impl SuiteOptions {
    pub fn new(k: u64, max_vertices: usize) -> Self {
        SuiteOptions {
            k,
            max_vertices,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            guard_limit: DEFAULT_GUARD_LIMIT,
            trials: 0,
        }
    }

    fn trials_or(&self, default: u64) -> u64 {
        if self.trials == 0 {
            default
        } else {
            self.trials
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Lemma1 => {
            let graphs = minimal_graphs(opts)?;
            Ok(lemma1_suite(opts, &graphs))
        }
        Suite::Claims => {
            let graphs = minimal_graphs(opts)?;
            claims_suite(opts, &graphs)
        }
        Suite::Lemma2 => lemma2_suite(opts),
        Suite::Oracle => oracle_suite(opts),
        Suite::Exchange => Ok(exchange_suite(opts)),
    }
}

/// Every minimally k-matchable multigraph up to isomorphism on an even
/// number of vertices up to `max_vertices`, drawn from graphs with maximum
/// degree at most `k + 1`; one more than the degree bound the graphs are
/// expected to satisfy, so that bound is actually tested.
#[derive(Debug, Clone)]
pub struct MinimalGraphs {
    pub k: u64,
    pub max_vertices: usize,
    pub examined: u64,
    /// Examined graphs with a vertex of degree `k + 1`.
    pub examined_above_k: u64,
    pub graphs: Vec<Multigraph>,
}

pub fn minimal_graphs(opts: &SuiteOptions) -> Result<MinimalGraphs> {
    let k = opts.k;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if opts.max_vertices % 2 == 1 || opts.max_vertices == 0 {
        return Err(Error::InvalidArgument("max_vertices must be even and positive".into()));
    }
    let cap = k as usize + 1;
    let shapes: Vec<Augmenter> = (2..=opts.max_vertices)
        .step_by(2)
        .map(|n| Augmenter::new(n, cap, cap))
        .collect::<Result<_>>()?;
    let found = Mutex::new(Vec::new());
    let examined_above = std::sync::atomic::AtomicU64::new(0);
    let stats = for_each_graph(&shapes, opts.workers, opts.guard_limit, |node| {
        let g = &node.graph;
        if g.max_degree() == cap {
            examined_above.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        }
        if g.min_degree() == 0 {
            return Ok(());
        }
        if is_minimally_k_matchable(g, k).is_minimal {
            found.lock().expect("no panics while held").push((node.labeling.form().canonical, g.clone()));
        }
        Ok(())
    })?;
    let mut found = found.into_inner().expect("no panics while held");
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(MinimalGraphs {
        k,
        max_vertices: opts.max_vertices,
        examined: stats.generated,
        examined_above_k: examined_above.into_inner(),
        graphs: found.into_iter().map(|(_, g)| g).collect(),
    })
}

/// Degree and matching-count bounds on every minimal graph found.
pub fn lemma1_suite(opts: &SuiteOptions, found: &MinimalGraphs) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Lemma1, opts.k, opts.max_vertices);
    report.bump("examined", found.examined);
    report.bump("examined_max_degree_k_plus_1", found.examined_above_k);
    for g in &found.graphs {
        let failure = match lemma1_bound_check(g, opts.k) {
            Ok(r) if r.holds => None,
            Ok(r) => Some(format!("{:?} violated by {}", r.violation, g.to_mg_string().escape_debug())),
            Err(e) => Some(format!("{e} for {}", g.to_mg_string().escape_debug())),
        };
        report.record(failure);
    }
    report
}

/// Deletes edges in id order while at least `k` perfect matchings remain.
pub fn greedy_minimal_subgraph(g: &Multigraph, k: u64) -> Multigraph {
    let mut h = g.clone();
    for id in g.edge_ids() {
        let smaller = h.delete_edge(id).expect("edges are only removed once");
        if count_matchings(&smaller, Some(k)) >= k {
            h = smaller;
        }
    }
    h
}

/// For each minimally k-matchable `G` found and its greedy spanning
/// minimally (k-1)-matchable subgraph `H`, with `F = E(G) \ E(H)`: every
/// perfect matching of `G` that is not one of `H` contains all of `F`, and
/// `F` is a matching.
pub fn claims_suite(opts: &SuiteOptions, found: &MinimalGraphs) -> Result<SuiteReport> {
    if opts.k < 2 {
        return Err(Error::InvalidArgument("claims suite needs k >= 2".into()));
    }
    let mut report = SuiteReport::new(Suite::Claims, opts.k, opts.max_vertices);
    for g in &found.graphs {
        let h = greedy_minimal_subgraph(g, opts.k - 1);
        let f: Vec<EdgeId> = g.edge_ids().filter(|&id| !h.contains_edge(id)).collect();
        report.bump("extra_edges", f.len() as u64);
        let mut failure = None;
        if !is_minimally_k_matchable(&h, opts.k - 1).is_minimal {
            failure = Some("greedy subgraph is not minimal".to_string());
        }
        let mut ends: Vec<usize> = Vec::new();
        for &id in &f {
            let e = g.edge(id)?;
            ends.extend([e.u, e.v]);
        }
        ends.sort_unstable();
        if ends.windows(2).any(|w| w[0] == w[1]) {
            failure = Some("F is not a matching".to_string());
        }
        for n in enumerate_matchings(g, None).matchings {
            if f.iter().any(|&id| n.contains(id)) {
                report.bump("new_matchings", 1);
                if !f.iter().all(|&id| n.contains(id)) {
                    failure = Some(format!("matching {:?} meets F only partly", n.edges()));
                }
            }
        }
        report.record(failure.map(|m| format!("{m}: {}", g.to_mg_string().escape_debug())));
    }
    Ok(report)
}

/// Start graphs for the augmentation suite: family members for `k >= 2`,
/// unions of one to three K2 for `k = 1`.
fn lemma2_starts(opts: &SuiteOptions) -> Result<Vec<Multigraph>> {
    if opts.k == 1 {
        let mut out = vec![named::k2()];
        for _ in 0..2 {
            let last = out.last().expect("non-empty").clone();
            out.push(add_k2(&last));
        }
        return Ok(out);
    }
    let mut cfg = SearchConfig::new(opts.k, opts.max_vertices);
    cfg.worker_count = opts.workers.max(1);
    cfg.guard_limit = opts.guard_limit;
    Ok(search_family(&cfg)?.members.iter().map(|m| m.graph()).collect())
}

/// Applies one to six random steps, each an odd subdivision (two or four
/// new vertices) or a K2 addition. With `spare_k2`, edges of K2 components
/// are never subdivided. Returns the number of K2 additions.
fn augment(rng: &mut ChaCha8Rng, g: &mut Multigraph, spare_k2: bool, report: &mut SuiteReport) -> Result<usize> {
    let mut added = 0;
    for _ in 0..rng.gen_range(1..=6) {
        if g.vertex_count() + 4 > crate::canon::CANON_VERTEX_LIMIT {
            break;
        }
        let deg = g.degrees();
        let open: Vec<EdgeId> = g
            .edges()
            .iter()
            .filter(|e| !spare_k2 || deg[e.u] > 1 || deg[e.v] > 1)
            .map(|e| e.id)
            .collect();
        if !open.is_empty() && rng.gen_bool(0.6) {
            let id = open[rng.gen_range(0..open.len())];
            let extra = if rng.gen_bool(0.5) { 2 } else { 4 };
            *g = subdivide_edge(g, SubdivisionSpec { edge: id, extra_path_length: extra })?;
            report.bump("subdivisions", 1);
        } else {
            *g = add_k2(g);
            added += 1;
            report.bump("k2_additions", 1);
        }
    }
    Ok(added)
}

/// Random odd subdivisions and K2 additions keep the matching count, and
/// reduction recovers the same base with the added K2s counted. When K2
/// components are left unsubdivided, minimality and the family name are
/// kept too (a subdivided K2 is a path whose middle edges lie in no
/// perfect matching).
pub fn lemma2_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Lemma2, opts.k, opts.max_vertices);
    let starts = lemma2_starts(opts)?;
    report.bump("start_graphs", starts.len() as u64);
    if starts.is_empty() {
        return Ok(report);
    }
    let traces: Vec<_> = starts.iter().map(reduce).collect();
    let bases: Vec<String> = traces.iter().map(|t| canonical_form(&t.base).map(|f| f.canonical)).collect::<Result<_>>()?;
    let expected: Vec<_> = starts.iter().map(|g| classify(g, opts.k)).collect::<Result<_>>()?;
    let counts: Vec<u64> = starts.iter().map(|g| count_matchings(g, None)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ opts.k);
    for trial in 0..opts.trials_or(1000) {
        let which = trial as usize % starts.len();

        let mut g = starts[which].clone();
        let added = augment(&mut rng, &mut g, false, &mut report)?;
        let trace = reduce(&g);
        let failure = if count_matchings(&g, None) != counts[which] {
            Some("matching count changed".to_string())
        } else if canonical_form(&trace.base)?.canonical != bases[which] {
            Some("reduction base changed".to_string())
        } else if trace.stripped_k2 != traces[which].stripped_k2 + added {
            Some(format!("q = {}, expected {} + {added}", trace.stripped_k2, traces[which].stripped_k2))
        } else {
            None
        };
        report.record(failure.map(|m| format!("trial {trial}: {m}: {}", g.to_mg_string().escape_debug())));

        let mut g = starts[which].clone();
        let added = augment(&mut rng, &mut g, true, &mut report)?;
        let got = classify(&g, opts.k)?;
        let want = &expected[which];
        let failure = if count_matchings(&g, None) != counts[which] {
            Some("matching count changed".to_string())
        } else if !got.verdict.is_minimal {
            Some("lost minimality".to_string())
        } else if got.base != want.base || got.name != want.name {
            Some(format!("base {:?} named {:?}, expected {:?}", got.base, got.name, want.name))
        } else if got.q != want.q.map(|q| q + added) {
            Some(format!("q = {:?}, expected {:?} + {added}", got.q, want.q))
        } else {
            None
        };
        report.record(failure.map(|m| format!("trial {trial}: {m}: {}", g.to_mg_string().escape_debug())));
    }
    Ok(report)
}

/// A random multigraph on `n` vertices with `m` edges, endpoints uniform
/// over distinct vertex pairs.
pub fn random_multigraph(rng: &mut impl Rng, n: usize, m: usize) -> Multigraph {
    assert!(n >= 2 || m == 0, "edges need two vertices");
    let pairs: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    Multigraph::from_edges(n, &pairs).expect("pairs are valid")
}

/// All labeled multigraphs on `n` vertices with every pair multiplicity at
/// most `max_mult`.
pub fn for_each_labeled(n: usize, max_mult: usize, mut visit: impl FnMut(&Multigraph)) {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let base = max_mult + 1;
    let mut digits = vec![0usize; pairs.len()];
    loop {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .zip(&digits)
            .flat_map(|(&p, &d)| std::iter::repeat_n(p, d))
            .collect();
        visit(&Multigraph::from_edges(n, &edges).expect("pairs are valid"));
        let Some(i) = digits.iter().position(|&d| d + 1 < base) else {
            return;
        };
        digits[i] += 1;
        digits[..i].iter_mut().for_each(|d| *d = 0);
    }
}

pub const ORACLE_EXHAUSTIVE_LIMIT: usize = 6;

/// The backtracking count against the subset oracle: exhaustively over
/// labeled multigraphs with multiplicity at most 2 on up to
/// `max_vertices` vertices, then on random graphs with at most 24 edges.
pub fn oracle_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    if opts.max_vertices > ORACLE_EXHAUSTIVE_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "exhaustive oracle comparison supports at most {ORACLE_EXHAUSTIVE_LIMIT} vertices"
        )));
    }
    let mut report = SuiteReport::new(Suite::Oracle, opts.k, opts.max_vertices);
    let check = |g: &Multigraph, report: &mut SuiteReport| {
        let fast = count_matchings(g, None);
        let failure = match brute_force_count(g) {
            Ok(slow) if slow == fast => None,
            Ok(slow) => Some(format!("{fast} vs {slow}: {}", g.to_mg_string().escape_debug())),
            Err(e) => Some(e.to_string()),
        };
        report.record(failure);
    };
    for n in 0..=opts.max_vertices {
        for_each_labeled(n, 2, |g| check(g, &mut report));
    }
    report.bump("exhaustive", report.checked);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let trials = opts.trials_or(10_000);
    for _ in 0..trials {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(0..=BRUTE_FORCE_EDGE_LIMIT);
        let g = random_multigraph(&mut rng, n, m);
        check(&g, &mut report);
    }
    report.bump("random", trials);
    Ok(report)
}

/// A random multigraph guaranteed at least one perfect matching: a random
/// perfect matching plus random extra edges.
pub fn random_matchable(rng: &mut impl Rng, n: usize, extra: usize) -> Multigraph {
    assert!(n.is_multiple_of(2) && n >= 2);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut pairs: Vec<(usize, usize)> = perm.chunks(2).map(|c| (c[0], c[1])).collect();
    pairs.extend(random_multigraph(rng, n, extra).sorted_pairs());
    Multigraph::from_edges(n, &pairs).expect("pairs are valid")
}

fn exchange_case(g: &Multigraph, m: &PerfectMatching, n: &PerfectMatching) -> Result<Option<String>> {
    let cycles = symdiff_decompose(g, m, n)?;
    let mut used = vec![false; g.vertex_count()];
    let mut covered: Vec<EdgeId> = Vec::new();
    let mut current = m.clone();
    for c in &cycles {
        if c.len() % 2 == 1 {
            return Ok(Some("odd cycle".into()));
        }
        for &v in c.vertices() {
            if std::mem::replace(&mut used[v], true) {
                return Ok(Some(format!("cycles share vertex {v}")));
            }
        }
        if !is_alternating_cycle(g, m, c)? || !is_alternating_cycle(g, n, c)? {
            return Ok(Some("cycle does not alternate".into()));
        }
        if c.edges().iter().any(|&e| m.contains(e) == n.contains(e)) {
            return Ok(Some("cycle edge outside the symmetric difference".into()));
        }
        let swapped = exchange(g, m, c)?;
        if swapped == *m || exchange(g, &swapped, c)? != *m {
            return Ok(Some("exchange is not an involution".into()));
        }
        covered.extend_from_slice(c.edges());
        current = exchange(g, &current, c)?;
    }
    covered.sort_unstable();
    if covered != m.symmetric_difference(n) {
        return Ok(Some("cycles do not partition the symmetric difference".into()));
    }
    if current != *n {
        return Ok(Some("exchanging along every cycle does not reach the second matching".into()));
    }
    Ok(None)
}

/// Exchange and symmetric-difference properties on random instances.
pub fn exchange_suite(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Exchange, opts.k, opts.max_vertices);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED.rotate_left(17));
    for _ in 0..opts.trials_or(10_000) {
        let n = 2 * rng.gen_range(1..=7);
        let extra = rng.gen_range(0..=2 * n);
        let g = random_matchable(&mut rng, n, extra);
        let all = enumerate_matchings(&g, Some(256)).matchings;
        let m = &all[rng.gen_range(0..all.len())];
        let other = &all[rng.gen_range(0..all.len())];
        report.bump("cycles", symdiff_decompose(&g, m, other).map_or(0, |c| c.len() as u64));
        let failure = match exchange_case(&g, m, other) {
            Ok(f) => f,
            Err(e) => Some(e.to_string()),
        };
        report.record(failure.map(|msg| format!("{msg}: {}", g.to_mg_string().escape_debug())));
    }
    report
}
