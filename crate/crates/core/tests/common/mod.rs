#![allow(dead_code)]

use minmatch::Multigraph;
use proptest::prelude::*;

/// Multigraphs on `1..=max_n` vertices with up to `max_m` edges.
pub fn multigraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pair = (0..n, 0..n).prop_filter("no loops", |(a, b)| a != b);
        let edges = if n < 2 { Just(Vec::new()).boxed() } else { prop::collection::vec(pair, 0..=max_m).boxed() };
        edges.prop_map(move |pairs| Multigraph::from_edges(n, &pairs).unwrap())
    })
}

/// Multigraphs on an even number of vertices that contain a perfect
/// matching: a random pairing plus extra edges.
pub fn matchable(max_half: usize, max_extra: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_half).prop_flat_map(move |half| {
        let n = 2 * half;
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        let pair = (0..n, 0..n).prop_filter("no loops", |(a, b)| a != b);
        (perm, prop::collection::vec(pair, 0..=max_extra)).prop_map(move |(perm, extra)| {
            let mut pairs: Vec<(usize, usize)> = perm.chunks(2).map(|c| (c[0], c[1])).collect();
            pairs.extend(extra);
            Multigraph::from_edges(n, &pairs).unwrap()
        })
    })
}

pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}
