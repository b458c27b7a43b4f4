//! Odd subdivision, K2 addition, and their inverses.
//!
//! Replacing an edge `wz` by a path `wxyz` and adding a disjoint K2 both
//! preserve the number of perfect matchings. [`reduce`] undoes them as far
//! as possible and records every step so the input can be rebuilt from the
//! base graph exactly.

use serde::Serialize;

use crate::canon::{canonical_labeling, CANON_VERTEX_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{named, EdgeId, Multigraph};

/// Replace `edge` by a path of length `1 + extra_path_length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubdivisionSpec {
    pub edge: EdgeId,
    pub extra_path_length: usize,
}

/// Subdivides one edge into an odd path. New internal vertices are appended
/// in path order starting at the lower endpoint; the new edges get fresh ids.
pub fn subdivide_edge(g: &Multigraph, spec: SubdivisionSpec) -> Result<Multigraph> {
    if spec.extra_path_length % 2 == 1 {
        return Err(Error::OddSubdivision(spec.extra_path_length));
    }
    let e = *g.edge(spec.edge)?;
    if spec.extra_path_length == 0 {
        return Ok(g.clone());
    }
    let mut h = g.clone();
    let mut next_id = h.next_edge_id().0;
    h.remove_edge_in_place(e.id)?;
    let mut prev = e.u;
    for _ in 0..spec.extra_path_length {
        let x = h.add_vertex();
        h.insert_edge_with_id(EdgeId(next_id), prev, x)?;
        next_id += 1;
        prev = x;
    }
    h.insert_edge_with_id(EdgeId(next_id), prev, e.v)?;
    Ok(h)
}

pub fn add_k2(g: &Multigraph) -> Multigraph {
    g.disjoint_union(&named::k2())
}

/// One smoothing: the path `w x y z` (`x`, `y` of degree 2) became the
/// single edge `new_edge` joining `w` and `z`. Vertex indices refer to the
/// graph before the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Smoothing {
    pub w: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// Ids of `wx`, `xy`, `yz`.
    pub removed: [EdgeId; 3],
    pub new_edge: EdgeId,
}

/// A recorded reduction step. Vertex numbers are indices of the original
/// input graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    Strip { u: usize, v: usize, edge: EdgeId },
    Smooth {
        w: usize,
        x: usize,
        y: usize,
        z: usize,
        removed: [EdgeId; 3],
        new_edge: EdgeId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub base: Multigraph,
    /// Original index of every base vertex.
    pub base_origin: Vec<usize>,
    pub stripped_k2: usize,
    pub steps: Vec<Step>,
    /// Per step, the map from pre-step to post-step vertex indices
    /// (`None` for removed vertices).
    pub vertex_maps: Vec<Vec<Option<usize>>>,
}

fn smoothing_candidates(g: &Multigraph) -> Vec<Smoothing> {
    let deg = g.degrees();
    let inc = g.incidence();
    let edges = g.edges();
    let fresh = g.next_edge_id();
    let mut out = Vec::new();
    for e in edges {
        let (x, y) = (e.u, e.v);
        if deg[x] != 2 || deg[y] != 2 {
            continue;
        }
        // the other edge at x and at y; a second x-y edge disqualifies
        let other = |a: usize| inc[a].iter().map(|&(i, _)| &edges[i]).find(|f| f.id != e.id);
        let (Some(ex), Some(ey)) = (other(x), other(y)) else { continue };
        let (w, z) = (ex.other(x), ey.other(y));
        if w == y || z == x || w == z {
            continue;
        }
        out.push(Smoothing { w, x, y, z, removed: [ex.id, e.id, ey.id], new_edge: fresh });
    }
    out
}

fn apply_smoothing(g: &Multigraph, s: &Smoothing) -> (Multigraph, Vec<Option<usize>>) {
    let mut h = g.clone();
    for id in s.removed {
        h.remove_edge_in_place(id).expect("candidate edges exist");
    }
    h.insert_edge_with_id(s.new_edge, s.w, s.z).expect("w != z and the id is fresh");
    let map = h.remove_vertices(&[s.x, s.y]);
    (h, map)
}

/// Picks the candidate whose endpoints have the smallest canonical labels,
/// so the choice does not depend on how the input was numbered. Above the
/// canonical-labeling size limit the plain vertex indices are used.
fn choose(g: &Multigraph, candidates: Vec<Smoothing>) -> Option<Smoothing> {
    let label: Vec<usize> = if g.vertex_count() <= CANON_VERTEX_LIMIT && candidates.len() > 1 {
        canonical_labeling(g).expect("within size limit").label
    } else {
        (0..g.vertex_count()).collect()
    };
    candidates.into_iter().min_by_key(|s| {
        let (a, b) = (label[s.x], label[s.y]);
        ((a.min(b), a.max(b)), (s.x, s.y))
    })
}

/// Performs one smoothing step, or returns `None` if `g` is irreducible.
pub fn smooth_once(g: &Multigraph) -> Option<(Multigraph, Smoothing, Vec<Option<usize>>)> {
    let s = choose(g, smoothing_candidates(g))?;
    let (h, map) = apply_smoothing(g, &s);
    Some((h, s, map))
}

pub fn is_irreducible(g: &Multigraph) -> bool {
    smoothing_candidates(g).is_empty()
}

/// Components that are a single edge on two vertices.
pub fn k2_components(g: &Multigraph) -> Vec<(usize, usize)> {
    let deg = g.degrees();
    g.edges()
        .iter()
        .filter(|e| deg[e.u] == 1 && deg[e.v] == 1)
        .map(|e| (e.u, e.v))
        .collect()
}

pub fn has_k2_component(g: &Multigraph) -> bool {
    !k2_components(g).is_empty()
}

/// Smooths to a fixpoint, strips K2 components, and repeats until neither
/// applies.
pub fn reduce(g: &Multigraph) -> ReductionTrace {
    let mut cur = g.clone();
    let mut origin: Vec<usize> = (0..g.vertex_count()).collect();
    let mut steps = Vec::new();
    let mut vertex_maps = Vec::new();
    let mut stripped_k2 = 0;

    let remap = |origin: &[usize], map: &[Option<usize>]| {
        let mut next = vec![0; map.iter().flatten().count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                next[*new] = origin[old];
            }
        }
        next
    };

    loop {
        if let Some((next, s, map)) = smooth_once(&cur) {
            steps.push(Step::Smooth {
                w: origin[s.w],
                x: origin[s.x],
                y: origin[s.y],
                z: origin[s.z],
                removed: s.removed,
                new_edge: s.new_edge,
            });
            origin = remap(&origin, &map);
            vertex_maps.push(map);
            cur = next;
            continue;
        }
        let Some(&(u, v)) = k2_components(&cur).first() else { break };
        let edge = cur.edges().iter().find(|e| e.u == u && e.v == v).expect("K2 edge").id;
        steps.push(Step::Strip { u: origin[u], v: origin[v], edge });
        let map = cur.remove_vertices(&[u, v]);
        origin = remap(&origin, &map);
        vertex_maps.push(map);
        stripped_k2 += 1;
    }
    ReductionTrace { base: cur, base_origin: origin, stripped_k2, steps, vertex_maps }
}

impl ReductionTrace {
    /// Rebuilds the reduced graph from the base by undoing every step in
    /// reverse. The result equals the original input, ids included.
    pub fn replay(&self) -> Result<Multigraph> {
        let mut g = self.base.clone();
        let mut names = self.base_origin.clone();
        for step in self.steps.iter().rev() {
            match *step {
                Step::Strip { u, v, edge } => {
                    let a = g.add_vertex();
                    let b = g.add_vertex();
                    names.extend([u, v]);
                    g.insert_edge_with_id(edge, a, b)?;
                }
                Step::Smooth { w, x, y, z, removed, new_edge } => {
                    let e = g.remove_edge_in_place(new_edge)?;
                    let (pw, pz) = if names[e.u] == w { (e.u, e.v) } else { (e.v, e.u) };
                    if names[pw] != w || names[pz] != z {
                        return Err(Error::Precondition(format!(
                            "trace edge {new_edge} does not join {w} and {z}"
                        )));
                    }
                    let px = g.add_vertex();
                    let py = g.add_vertex();
                    names.extend([x, y]);
                    g.insert_edge_with_id(removed[0], pw, px)?;
                    g.insert_edge_with_id(removed[1], px, py)?;
                    g.insert_edge_with_id(removed[2], py, pz)?;
                }
            }
        }
        g.permute(&names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use crate::graph::named::*;
    use crate::matching::{brute_force_count, count_matchings};

    fn sub(g: &Multigraph, edge: usize, extra: usize) -> Multigraph {
        subdivide_edge(g, SubdivisionSpec { edge: EdgeId(edge), extra_path_length: extra }).unwrap()
    }

    /// K4 with every edge replaced by a path of length 3.
    fn k4_subdivided() -> Multigraph {
        let mut g = k4();
        let ids: Vec<_> = g.edge_ids().collect();
        for id in ids {
            g = subdivide_edge(&g, SubdivisionSpec { edge: id, extra_path_length: 2 }).unwrap();
        }
        g
    }

    #[test]
    fn subdivide_examples() {
        let g = sub(&c2(), 0, 2);
        assert!(is_isomorphic(&g, &cycle(4)).unwrap());
        assert_eq!(g.edge_ids().map(|e| e.0).collect::<Vec<_>>(), vec![1, 2, 3, 4]);

        let g = sub(&k4(), 0, 2);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(brute_force_count(&k4()).unwrap(), 3);
        assert_eq!(brute_force_count(&g).unwrap(), 3);

        assert_eq!(sub(&k4(), 3, 0), k4());
        assert_eq!(
            subdivide_edge(&k4(), SubdivisionSpec { edge: EdgeId(0), extra_path_length: 1 }),
            Err(Error::OddSubdivision(1))
        );
        assert!(subdivide_edge(&k4(), SubdivisionSpec { edge: EdgeId(9), extra_path_length: 2 }).is_err());
    }

    #[test]
    fn add_k2_examples() {
        assert_eq!(add_k2(&Multigraph::empty(0)), k2());
        let g = add_k2(&k4());
        assert_eq!(brute_force_count(&g).unwrap(), 3);
        let g = add_k2(&c2());
        assert_eq!(count_matchings(&g, None), 2);
    }

    #[test]
    fn smooth_examples() {
        let (g, _, map) = smooth_once(&cycle(4)).unwrap();
        assert!(is_isomorphic(&g, &c2()).unwrap());
        assert_eq!(map.iter().flatten().count(), 2);

        let (g, _, _) = smooth_once(&cycle(6)).unwrap();
        assert!(is_isomorphic(&g, &cycle(4)).unwrap());
        let (g, _, _) = smooth_once(&g).unwrap();
        assert!(is_isomorphic(&g, &c2()).unwrap());
        assert!(smooth_once(&g).is_none());

        // triangle w-x-y-w: smoothing would make a loop
        let tri = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap();
        assert!(smooth_once(&tri).is_none());
        assert!(smooth_once(&cycle(3)).is_none());
        assert!(smooth_once(&k4()).is_none());
    }

    #[test]
    fn smoothing_skips_parallel_pairs() {
        // w - x = y - z with x,y joined twice: degrees are 3, nothing to do
        let g = Multigraph::from_edges(4, &[(0, 1), (1, 2), (1, 2), (2, 3)]).unwrap();
        assert!(smooth_once(&g).is_none());
        assert!(is_irreducible(&c2()));
    }

    #[test]
    fn reduce_examples() {
        let t = reduce(&cycle(8).disjoint_union(&k2()));
        assert!(is_isomorphic(&t.base, &c2()).unwrap());
        assert_eq!(t.stripped_k2, 1);
        assert_eq!(t.steps.iter().filter(|s| matches!(s, Step::Smooth { .. })).count(), 3);

        let g = k4_subdivided();
        assert_eq!(g.vertex_count(), 16);
        let t = reduce(&g);
        assert!(is_isomorphic(&t.base, &k4()).unwrap());
        assert_eq!(t.stripped_k2, 0);

        let t = reduce(&k2());
        assert_eq!(t.base, Multigraph::empty(0));
        assert_eq!(t.stripped_k2, 1);
    }

    #[test]
    fn reduce_path_to_nothing() {
        // P4 smooths to K2, which is then stripped
        let t = reduce(&path(4));
        assert_eq!(t.base.vertex_count(), 0);
        assert_eq!(t.stripped_k2, 1);
        assert_eq!(t.steps.len(), 2);
    }

    #[test]
    fn replay_rebuilds_input_exactly() {
        for g in [
            cycle(8).disjoint_union(&k2()),
            k4_subdivided().disjoint_union(&k2()).disjoint_union(&cycle(6)),
            path(6),
            Multigraph::empty(3),
        ] {
            let t = reduce(&g);
            assert_eq!(t.replay().unwrap(), g);
            assert_eq!(t.vertex_maps.len(), t.steps.len());
        }
    }

    #[test]
    fn trace_names_original_vertices() {
        let g = cycle(4).disjoint_union(&k2());
        let t = reduce(&g);
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["stripped_k2"], 1);
        assert_eq!(json["steps"][0]["kind"], "smooth");
        assert_eq!(json["steps"][1], serde_json::json!({"kind": "strip", "u": 4, "v": 5, "edge": 4}));
        assert_eq!(json["base"], "mg 2 2\n0 1\n0 1\n");
    }

    #[test]
    fn counts_survive_every_step() {
        let g = k4_subdivided().disjoint_union(&cycle(4)).disjoint_union(&k2());
        let want = count_matchings(&g, None);
        assert_eq!(want, 6);
        let mut cur = g.clone();
        while let Some((next, _, _)) = smooth_once(&cur) {
            assert_eq!(count_matchings(&next, None), want);
            cur = next;
        }
        assert_eq!(count_matchings(&reduce(&g).base, None), want);
    }
}
