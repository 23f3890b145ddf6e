//! Small graph families: trees and connected graphs up to isomorphism,
//! seeded random graphs and tree gluings at free vertices.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Isomorphism-invariant key of a tree: the AHU encoding rooted at a
/// center, minimised over the (at most two) centers.
pub fn tree_canonical_form(t: &Graph) -> Result<String> {
    let n = t.vertex_count();
    if n == 1 {
        return Ok("()".into());
    }
    if !t.is_tree() {
        return Err(Error::input("canonical tree form needs a tree"));
    }
    let mut deg = t.degrees();
    let mut layer: Vec<usize> = t.vertices().filter(|&v| deg[v - 1] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for w in t.neighbors(v) {
                deg[w - 1] -= 1;
                if deg[w - 1] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    Ok(layer.iter().map(|&c| encode_rooted(t, c, 0)).min().expect("a tree has a center"))
}

fn encode_rooted(t: &Graph, v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = t.neighbors(v).into_iter().filter(|&w| w != parent).map(|w| encode_rooted(t, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Brute-force isomorphism key: the lexicographically smallest adjacency
/// bit string over all vertex permutations. Meant for `n <= 8`.
pub fn canonical_key(g: &Graph) -> u128 {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u128::MAX;
    loop {
        best = best.min(edge_code(g, &perm));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

fn edge_code(g: &Graph, perm: &[usize]) -> u128 {
    let mut code = 0u128;
    for e in g.edges() {
        let (a, b) = (perm[e.u() - 1], perm[e.v() - 1]);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        code |= 1 << pair_index(a, b);
    }
    code
}

fn pair_index(a: usize, b: usize) -> usize {
    b * (b - 1) / 2 + a
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All trees on `n` vertices up to isomorphism, decoded from Prüfer
/// sequences. Ordered by canonical form, so the output is deterministic.
pub fn nonisomorphic_trees(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 10 {
        return Err(Error::input("tree enumeration supports 1 <= n <= 10"));
    }
    if n == 1 {
        return Ok(vec![Graph::edgeless(1)?]);
    }
    if n == 2 {
        return Ok(vec![Graph::path(2)?]);
    }
    let mut seen: BTreeMap<String, Graph> = BTreeMap::new();
    let mut seq = vec![1usize; n - 2];
    loop {
        let t = prufer_decode(n, &seq)?;
        seen.entry(tree_canonical_form(&t)?).or_insert(t);
        // odometer over [1, n]^(n-2)
        let mut k = 0;
        while k < seq.len() && seq[k] == n {
            seq[k] = 1;
            k += 1;
        }
        if k == seq.len() {
            break;
        }
        seq[k] += 1;
    }
    Ok(seen.into_values().collect())
}

fn prufer_decode(n: usize, seq: &[usize]) -> Result<Graph> {
    let mut degree = vec![1usize; n + 1];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (1..=n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, edges)
}

/// All trees with `lo <= n <= hi` vertices up to isomorphism.
pub fn trees_in_range(lo: usize, hi: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for n in lo..=hi {
        out.extend(nonisomorphic_trees(n)?);
    }
    Ok(out)
}

/// All connected graphs on `n` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 6 {
        return Err(Error::input("connected graph enumeration supports 1 <= n <= 6"));
    }
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
    let mut seen: BTreeMap<u128, Graph> = BTreeMap::new();
    for subset in 0u64..(1 << pairs.len()) {
        if (subset.count_ones() as usize) + 1 < n {
            continue;
        }
        let edges = pairs.iter().enumerate().filter(|(k, _)| subset >> k & 1 == 1).map(|(_, &p)| p);
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            seen.entry(canonical_key(&g)).or_insert(g);
        }
    }
    let mut out: Vec<Graph> = seen.into_values().collect();
    out.sort_by_key(|g| g.edge_count());
    Ok(out)
}

/// Erdős–Rényi graph `G(n, p)` drawn from `rng`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges)
}

/// `count` random graphs with `2 <= n <= max_n` and at least one edge,
/// reproducible from `seed`.
pub fn seeded_random_graphs(seed: u64, count: usize, max_n: usize) -> Result<Vec<Graph>> {
    if max_n < 2 {
        return Err(Error::input("random graphs need max_n >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=max_n);
        let g = random_graph(n, 0.5, &mut rng)?;
        if g.edge_count() > 0 {
            out.push(g);
        }
    }
    Ok(out)
}

/// A graph glued from two parts at one vertex free in both. The parts are
/// given on the ambient vertex set of `glued`.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub glued: Graph,
    pub first: Graph,
    pub second: Graph,
    pub vertex: usize,
}

/// Every way of identifying a leaf of one tree with a leaf of another, for
/// trees with at least two vertices and glued size at most `max_n`.
/// Gluings are deduplicated up to isomorphism of the ordered triple.
pub fn tree_leaf_gluings(max_n: usize) -> Result<Vec<Gluing>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let trees = trees_in_range(2, max_n.saturating_sub(1).max(2))?;
    for t1 in &trees {
        for t2 in &trees {
            let (n1, n2) = (t1.vertex_count(), t2.vertex_count());
            if n1 + n2 - 1 > max_n {
                continue;
            }
            for l1 in t1.vertices().filter(|&v| t1.degree(v) == 1) {
                for l2 in t2.vertices().filter(|&v| t2.degree(v) == 1) {
                    let gl = glue(t1, l1, t2, l2)?;
                    let key = (
                        canonical_key(&gl.glued),
                        canonical_key(&gl.first),
                        canonical_key(&gl.second),
                        gl.glued.degree(gl.vertex),
                    );
                    if seen.insert(key) {
                        out.push(gl);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Identifies vertex `a` of `g1` with vertex `b` of `g2`. The glued vertex
/// keeps label `a`; the other vertices of `g2` follow those of `g1`.
pub fn glue(g1: &Graph, a: usize, g2: &Graph, b: usize) -> Result<Gluing> {
    let n1 = g1.vertex_count();
    let n = n1 + g2.vertex_count() - 1;
    let map = |w: usize| {
        if w == b {
            a
        } else if w < b {
            n1 + w
        } else {
            n1 + w - 1
        }
    };
    let first = g1.with_vertex_count(n)?;
    let second = Graph::new(n, g2.edges().iter().map(|e| (map(e.u()), map(e.v()))))?;
    let glued = Graph::new(n, first.edges().iter().chain(second.edges()).map(|e| (e.u(), e.v())))?;
    Ok(Gluing { glued, first, second, vertex: a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| nonisomorphic_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
        assert_eq!(trees_in_range(2, 6).unwrap().len(), 13);
    }

    #[test]
    fn connected_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn canonical_forms_detect_isomorphism() {
        let p = Graph::path(4).unwrap();
        let q = Graph::new(4, [(2, 4), (4, 1), (1, 3)]).unwrap();
        let s = Graph::star(4).unwrap();
        assert_eq!(canonical_key(&p), canonical_key(&q));
        assert_ne!(canonical_key(&p), canonical_key(&s));
        assert_eq!(tree_canonical_form(&p).unwrap(), tree_canonical_form(&q).unwrap());
        assert_ne!(tree_canonical_form(&p).unwrap(), tree_canonical_form(&s).unwrap());
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let a = seeded_random_graphs(7, 10, 5).unwrap();
        let b = seeded_random_graphs(7, 10, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|g| g.edge_count() > 0 && g.vertex_count() <= 5));
    }

    #[test]
    fn gluing_two_edges_gives_a_path() {
        let e = Graph::path(2).unwrap();
        let gl = glue(&e, 2, &e, 1).unwrap();
        assert_eq!(canonical_key(&gl.glued), canonical_key(&Graph::path(3).unwrap()));
        assert_eq!(gl.first.edge_count() + gl.second.edge_count(), 2);
        assert!(gl.first.is_free_vertex(gl.vertex) && gl.second.is_free_vertex(gl.vertex));
        let all = tree_leaf_gluings(6).unwrap();
        assert!(all.iter().all(|g| g.glued.is_tree() && g.glued.vertex_count() <= 6));
    }
}
