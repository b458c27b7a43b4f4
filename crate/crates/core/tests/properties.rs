mod common;

use std::collections::BTreeSet;

use common::{matchable, multigraph, permutation};
use minmatch::alternating::{chambers, chords_cross, find_chords, symdiff_decompose, ChordKind};
use minmatch::canon::{canonical_form, is_isomorphic};
use minmatch::matching::{
    brute_force_count, count_matchings, edge_in_some_matching, enumerate_matchings, is_minimally_k_matchable,
};
use minmatch::reduction::{add_k2, is_irreducible, reduce, subdivide_edge, SubdivisionSpec};
use minmatch::{EdgeId, Multigraph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn text_round_trip(g in multigraph(9, 20)) {
        let text = g.to_mg_string();
        let back: Multigraph = text.parse().unwrap();
        prop_assert_eq!(back.to_mg_string(), text);
        prop_assert_eq!(back.sorted_pairs(), g.sorted_pairs());
    }

    #[test]
    fn count_matches_oracle(g in multigraph(10, 18)) {
        prop_assert_eq!(count_matchings(&g, None), brute_force_count(&g).unwrap());
    }

    #[test]
    fn capped_count_is_min_with_cap(g in multigraph(8, 16), cap in 1u64..6) {
        prop_assert_eq!(count_matchings(&g, Some(cap)), count_matchings(&g, None).min(cap));
    }

    #[test]
    fn enumeration_agrees_with_count(g in multigraph(8, 16)) {
        let set = enumerate_matchings(&g, None);
        prop_assert!(set.exhaustive);
        prop_assert_eq!(set.matchings.len() as u64, count_matchings(&g, None));
        let unique: BTreeSet<_> = set.matchings.iter().collect();
        prop_assert_eq!(unique.len(), set.matchings.len());
    }

    #[test]
    fn counts_multiply_over_unions(a in multigraph(6, 10), b in multigraph(6, 10)) {
        let u = a.disjoint_union(&b);
        prop_assert_eq!(count_matchings(&u, None), count_matchings(&a, None) * count_matchings(&b, None));
    }

    #[test]
    fn minimality_matches_definition(g in matchable(3, 6), k in 1u64..5) {
        let total = brute_force_count(&g).unwrap();
        let by_definition = total >= k
            && g.edge_ids().all(|id| brute_force_count(&g.delete_edge(id).unwrap()).unwrap() < k);
        let v = is_minimally_k_matchable(&g, k);
        prop_assert_eq!(v.is_minimal, by_definition);
        if let Some(w) = v.witness_edge {
            prop_assert!(brute_force_count(&g.delete_edge(w).unwrap()).unwrap() >= k);
        }
    }

    #[test]
    fn edge_membership_matches_enumeration(g in multigraph(8, 14)) {
        let all = enumerate_matchings(&g, None).matchings;
        for id in g.edge_ids() {
            prop_assert_eq!(edge_in_some_matching(&g, id).unwrap(), all.iter().any(|m| m.contains(id)));
        }
    }

    #[test]
    fn canonical_form_ignores_labels((g, perm) in multigraph(9, 18).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), permutation(n))
    })) {
        let h = g.permute(&perm).unwrap();
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
    }

    #[test]
    fn collapsing_parallel_edges_changes_the_form(g in multigraph(6, 12)) {
        let mut simple = g.sorted_pairs();
        simple.dedup();
        let s = Multigraph::from_edges(g.vertex_count(), &simple).unwrap();
        prop_assert_eq!(is_isomorphic(&g, &s).unwrap(), simple.len() == g.edge_count());
    }

    #[test]
    fn reduction_keeps_counts_and_reaches_a_fixpoint(g in multigraph(10, 14)) {
        let t = reduce(&g);
        prop_assert_eq!(count_matchings(&t.base, None), count_matchings(&g, None));
        prop_assert!(is_irreducible(&t.base));
        prop_assert!(reduce(&t.base).steps.is_empty());
        prop_assert_eq!(t.replay().unwrap(), g);
    }

    #[test]
    fn augmentation_round_trip(
        g in multigraph(6, 8),
        ops in prop::collection::vec((any::<bool>(), any::<prop::sample::Index>(), prop::bool::ANY), 0..6),
    ) {
        let before = reduce(&g);
        let mut h = g.clone();
        let mut added = 0;
        for (subdivide, pick, long) in ops {
            if subdivide && h.edge_count() > 0 {
                let id = h.edges()[pick.index(h.edge_count())].id;
                let extra = if long { 4 } else { 2 };
                h = subdivide_edge(&h, SubdivisionSpec { edge: id, extra_path_length: extra }).unwrap();
            } else {
                h = add_k2(&h);
                added += 1;
            }
        }
        let after = reduce(&h);
        prop_assert!(is_isomorphic(&after.base, &before.base).unwrap());
        prop_assert_eq!(after.stripped_k2, before.stripped_k2 + added);
        prop_assert_eq!(count_matchings(&h, None), count_matchings(&g, None));
    }

    #[test]
    fn chambers_follow_matching_edges(g in multigraph(8, 14)) {
        let parts = chambers(&g);
        let mut chamber = vec![usize::MAX; g.vertex_count()];
        for (i, p) in parts.iter().enumerate() {
            for &v in p {
                prop_assert_eq!(chamber[v], usize::MAX);
                chamber[v] = i;
            }
        }
        let used: BTreeSet<EdgeId> = enumerate_matchings(&g, None).matchings.iter().flat_map(|m| m.edges().to_vec()).collect();
        for e in g.edges() {
            if used.contains(&e.id) {
                prop_assert_eq!(chamber[e.u], chamber[e.v]);
            }
        }
        // each chamber is connected through matching edges
        for p in &parts {
            let mut reach = vec![p[0]];
            let mut i = 0;
            while i < reach.len() {
                let v = reach[i];
                for e in g.edges().iter().filter(|e| used.contains(&e.id) && e.is_incident(v)) {
                    let w = e.other(v);
                    if !reach.contains(&w) {
                        reach.push(w);
                    }
                }
                i += 1;
            }
            prop_assert_eq!(reach.len(), p.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Chords from the symmetric difference of two matchings, checked
    /// against the definitions one by one.
    #[test]
    fn chords_satisfy_their_definition(
        (g, a, b, c) in matchable(5, 10).prop_flat_map(|g| {
            let n = enumerate_matchings(&g, Some(64)).matchings.len();
            (Just(g), 0..n, 0..n, 0..n)
        })
    ) {
        let all = enumerate_matchings(&g, Some(64)).matchings;
        let (m, other, n) = (&all[a], &all[b], &all[c]);
        let f: Vec<EdgeId> = n.edges().iter().copied().step_by(2).collect();
        for cycle in symdiff_decompose(&g, m, other).unwrap() {
            let chords = find_chords(&g, &cycle, m, n, &f).unwrap();
            let on_cycle = |v: usize| cycle.position(v).is_some();
            for ch in &chords {
                prop_assert_eq!(ch.edges.len() % 2, 1);
                prop_assert_eq!(ch.vertices.len(), ch.edges.len() + 1);
                for (i, e) in ch.edges.iter().enumerate() {
                    prop_assert_eq!(n.contains(*e), i % 2 == 0);
                    if i % 2 == 1 {
                        prop_assert!(m.contains(*e));
                    }
                    prop_assert!(!cycle.contains_edge(*e));
                }
                prop_assert!(ch.vertices[1..ch.vertices.len() - 1].iter().all(|&v| !on_cycle(v)));
                prop_assert!(on_cycle(ch.start) && on_cycle(ch.end) && ch.start != ch.end);
                prop_assert_eq!(ch.external, ch.edges.iter().any(|e| f.contains(e)));
            }
            // every N-edge leaving the cycle starts exactly one chord end
            let leaving = cycle.vertices().iter().filter(|&&v| {
                n.edges().iter().any(|&e| {
                    let ed = g.edge(e).unwrap();
                    ed.is_incident(v) && !cycle.contains_edge(e)
                })
            }).count();
            prop_assert_eq!(leaving, 2 * chords.len());

            let reversed = find_chords(&g, &cycle.inverse(), m, n, &f).unwrap();
            prop_assert_eq!(reversed.len(), chords.len());
            for ch in &chords {
                let twin = reversed.iter().find(|r| {
                    let mut x = [r.start, r.end];
                    let mut y = [ch.start, ch.end];
                    x.sort_unstable();
                    y.sort_unstable();
                    x == y
                }).unwrap();
                let flipped = match ch.kind {
                    ChordKind::In => ChordKind::Out,
                    ChordKind::Out => ChordKind::In,
                    ChordKind::Odd => ChordKind::Odd,
                };
                prop_assert_eq!(twin.kind, flipped);
            }
            for p in &chords {
                for q in &chords {
                    prop_assert_eq!(chords_cross(&cycle, p, q), chords_cross(&cycle, q, p));
                }
            }
        }
    }
}
