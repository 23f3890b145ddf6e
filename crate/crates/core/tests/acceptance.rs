//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the
//! process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use edge_betti::families::{connected_graphs, nonisomorphic_trees, seeded_random_graphs, tree_leaf_gluings};
use edge_betti::formulas::{
    beta1_tree, beta2_tree, betti_complete_graph, betti_linear_strand, betti_product_decomposable, betti_star,
    betti_third_row_tree,
};
use edge_betti::koszul::{KoszulBlock, MultigradedBetti};
use edge_betti::linalg::{rref, GradedSubspace, SparseVec};
use edge_betti::monomial::{degree_basis, FineDegree};
use edge_betti::splitting::{
    classify, classify_tables, edge_splitting, intersection_linear_strand, s_partition, vanishing_from_tables,
    verify_degree3_basis, verify_intersection_shift, GeneratorPartition, PartitionKind, SplittingTables,
};
use edge_betti::{
    betti_table, betti_table_multigraded, binomial, BettiTable, Edge, Grading, Graph, IdealSpec, OracleOptions,
    PrimeField, Window,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn field() -> PrimeField {
    PrimeField::default()
}

fn oracle(g: &Graph) -> BettiTable {
    betti_table(&IdealSpec::edge_ideal(g), &OracleOptions::default())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rows(n: usize, printed: &[(u32, &[u64])]) -> BettiTable {
    let mut t = BettiTable::new(Window::for_vertices(n));
    for &(r, vals) in printed {
        for (i, &b) in vals.iter().enumerate() {
            t.set(i as u32, i as u32 + r, b);
        }
    }
    t
}

fn same(what: &str, got: &BettiTable, want: &BettiTable) -> Result<(), String> {
    ensure(!got.is_truncated(), || format!("{what}: truncated"))?;
    ensure(got.same_entries(want), || format!("{what}:\n{}\nexpected\n{}", got.render_text(), want.render_text()))
}

fn example_graph() -> Graph {
    Graph::new(7, [(1, 2), (1, 3), (1, 4), (1, 5), (1, 7), (2, 4), (2, 5), (2, 7), (3, 7), (4, 5), (6, 7)]).unwrap()
}

fn trees_2_to_6() -> Vec<Graph> {
    (2..=6).flat_map(|n| nonisomorphic_trees(n).unwrap()).collect()
}

fn connected_up_to_5() -> Vec<Graph> {
    (1..=5).flat_map(|n| connected_graphs(n).unwrap()).collect()
}

fn strand_row(t: &BettiTable, shift: u32) -> Vec<u64> {
    let mut row: Vec<u64> = (0..=t.pd().unwrap_or(0)).map(|i| t.get(i, i + shift)).collect();
    while row.last() == Some(&0) {
        row.pop();
    }
    row
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let t = oracle(&example_graph());
    let elapsed = start.elapsed();
    let want = rows(7, &[(2, &[11, 12, 3]), (3, &[0, 32, 62, 39, 8]), (4, &[0, 0, 24, 64, 62, 26, 4])]);
    same("J_G", &t, &want)?;
    ensure(t.totals() == vec![11, 44, 89, 103, 70, 26, 4], || format!("totals {:?}", t.totals()))?;
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("total row {:?} in {:.1} s", t.totals(), elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let rep = classify(&s_partition(&example_graph(), 1).map_err(|e| e.to_string())?, None, field())
        .map_err(|e| e.to_string())?;
    same("J", &rep.table_j, &rows(7, &[(2, &[5]), (3, &[0, 20, 30, 18, 4])]))?;
    same("K", &rep.table_k, &rows(7, &[(2, &[6, 2]), (3, &[0, 13, 8]), (4, &[0, 0, 12, 14, 4])]))?;
    same(
        "J ∩ K",
        &rep.table_jk,
        &rows(7, &[(3, &[10, 9, 2]), (4, &[5, 26, 21, 4]), (5, &[0, 12, 50, 58, 26, 4])]),
    )?;
    ensure(rep.table_jk.totals() == vec![15, 47, 73, 62, 26, 4], || "J ∩ K totals".into())?;
    ensure(!rep.complete, || "reported complete".into())?;
    ensure(rep.delta(2, 4) == 6, || format!("delta(2,4) = {}", rep.delta(2, 4)))?;
    ensure(rep.holds_on_region(4, 4), || "identity fails on i >= 4 or j >= i + 4".into())?;
    ensure(!rep.window_limited, || "window limited".into())?;
    Ok(rep.summary())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let trees = trees_2_to_6();
    let mut pendant = 0;
    for t in &trees {
        for e in t.edges() {
            if t.degree(e.u()) != 1 && t.degree(e.v()) != 1 {
                continue;
            }
            let rep = classify(&edge_splitting(t, e).unwrap(), None, field()).unwrap();
            ensure(rep.complete, || format!("tree {t:?}, edge {e}: {}", rep.summary()))?;
            pendant += 1;
        }
    }
    let curated = [
        Graph::new(7, [(1, 2), (2, 3), (2, 4), (4, 5), (4, 6), (4, 7), (6, 7)]).unwrap(),
        Graph::new(6, [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)]).unwrap(),
        Graph::new(5, [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]).unwrap(),
        Graph::new(6, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (4, 5), (5, 6)]).unwrap(),
    ];
    let mut free_cut = 0;
    for g in &curated {
        for e in g.cut_edges() {
            let h = g.delete_edge(&e).unwrap();
            if !(h.is_free_vertex(e.u()) || h.is_free_vertex(e.v())) {
                continue;
            }
            let rep = classify(&edge_splitting(g, &e).unwrap(), None, field()).unwrap();
            ensure(rep.complete, || format!("graph {g:?}, cut edge {e}: {}", rep.summary()))?;
            free_cut += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} trees with 2 <= n <= 6, {pendant} pendant edges, {free_cut} curated cut edges, all complete, {:.1} s",
        trees.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_4() -> Outcome {
    let mut pairs = 0;
    let mut triangle_free = 0;
    for g in connected_up_to_5() {
        for s in g.vertices().filter(|&s| g.degree(s) > 0) {
            let rep = classify(&s_partition(&g, s).unwrap(), None, field()).unwrap();
            let c = g.largest_clique_containing(s).unwrap() as u32;
            ensure(rep.holds_on_region(c, 4), || format!("{g:?}, s = {s}: fails on i >= {c} or j >= i + 4"))?;
            if g.is_triangle_free() {
                ensure(rep.complete, || format!("triangle-free {g:?}, s = {s}: {}", rep.summary()))?;
                triangle_free += 1;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (graph, vertex) pairs, {triangle_free} triangle-free"))
}

fn criterion_5() -> Outcome {
    let mut checks = 0;
    for t in trees_2_to_6() {
        let table = oracle(&t);
        ensure(!table.is_truncated(), || format!("{t:?} truncated"))?;
        ensure(beta1_tree(&t).unwrap().value == table.total(1), || format!("beta_1 of {t:?}"))?;
        ensure(beta2_tree(&t).unwrap().value == table.total(2), || format!("beta_2 of {t:?}"))?;
        for k in 2..=table.pd().unwrap_or(0) {
            let f = betti_third_row_tree(&t, k).unwrap().value;
            ensure(f == table.get(k, k + 3), || format!("beta_{{{k},{}}} of {t:?}: {f} vs {}", k + 3, table.get(k, k + 3)))?;
            checks += 1;
        }
        checks += 2;
    }
    let t = Graph::new(7, [(1, 2), (2, 3), (3, 4), (2, 5), (3, 6), (3, 7)]).unwrap();
    let table = oracle(&t);
    ensure(table.totals() == vec![6, 20, 41, 43, 21, 4], || format!("double-fork totals {:?}", table.totals()))?;
    ensure(beta2_tree(&t).unwrap().value == 41, || "beta_2 formula".into())?;
    ensure(betti_third_row_tree(&t, 2).unwrap().value == 12 && table.get(2, 5) == 12, || "beta_{2,5}".into())?;
    ensure(betti_third_row_tree(&t, 3).unwrap().value == 3 && table.get(3, 6) == 3, || "beta_{3,6}".into())?;
    Ok(format!("{checks} formula values on 13 trees; double-fork tree total row {:?}", table.totals()))
}

fn criterion_6() -> Outcome {
    for n in 2..=5 {
        same(&format!("K_{n}"), &betti_complete_graph(n).unwrap(), &oracle(&Graph::complete(n).unwrap()))?;
    }
    for n in 2..=6 {
        same(&format!("S_{n}"), &betti_star(n).unwrap(), &oracle(&Graph::star(n).unwrap()))?;
    }
    let connected = connected_up_to_5();
    for g in &connected {
        let got = betti_linear_strand(g);
        let want = strand_row(&oracle(g), 2);
        ensure(got == want, || format!("linear strand of {g:?}: {got:?} vs {want:?}"))?;
    }
    let gluings = tree_leaf_gluings(6).unwrap();
    for gl in &gluings {
        let q = betti_product_decomposable(&oracle(&gl.first).to_quotient(), &oracle(&gl.second).to_quotient()).unwrap();
        same(&format!("gluing {:?}", gl.glued), &BettiTable::from_quotient(&q), &oracle(&gl.glued))?;
    }
    Ok(format!("K_2..K_5, S_2..S_6, {} linear strands, {} gluings", connected.len(), gluings.len()))
}

fn criterion_7() -> Outcome {
    let mut pairs = 0;
    for g in connected_up_to_5() {
        for s in g.vertices().filter(|&s| g.degree(s) > 0) {
            let check = verify_degree3_basis(&g, s, field()).unwrap();
            ensure(check.is_basis(), || format!("{g:?}, s = {s}: {check:?}"))?;
            let p = s_partition(&g, s).unwrap();
            let jk = betti_table(p.intersection(), &OracleOptions::default());
            ensure(!jk.is_truncated(), || "intersection truncated".into())?;
            let want = strand_row(&jk, 3);
            let got = intersection_linear_strand(&g, s).unwrap();
            ensure(got == want, || format!("{g:?}, s = {s}: strand {got:?} vs oracle {want:?}"))?;
            pairs += 1;
        }
    }
    let mut cut_edges = 0;
    for t in trees_2_to_6() {
        for e in t.edges() {
            let d_max = t.vertex_count() as u32 + 2;
            ensure(verify_intersection_shift(&t, e, d_max, field()).unwrap(), || format!("shift fails for {t:?} at {e}"))?;
            cut_edges += 1;
        }
    }
    Ok(format!("{pairs} (graph, vertex) pairs; shift identity on {cut_edges} tree cut edges up to degree n + 2"))
}

fn criterion_8() -> Outcome {
    let graphs = seeded_random_graphs(7, 25, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut certified = 0;
    let mut nonzero = 0;
    for g in &graphs {
        let j: Vec<Edge> = g.edges().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let p = GeneratorPartition::new(g, j, PartitionKind::Custom).unwrap();
        let tables = SplittingTables::compute(&p, &OracleOptions::default());
        let rep = classify_tables(&p, &tables).unwrap();
        ensure(!rep.window_limited, || "window limited".into())?;
        ensure(rep.negative_cells().is_empty(), || format!("{g:?}: negative residual {:?}", rep.negative_cells()))?;
        for grading in [Grading::Standard, Grading::Fine] {
            let v = vanishing_from_tables(&p, &tables, grading).unwrap();
            let (r, s) = v.certified_region;
            ensure(rep.holds_on_region(r, s), || format!("{g:?}: certified ({r},{s}) has nonzero residual"))?;
            let bad = rep.failing_cells();
            ensure(bad.iter().all(|c| !v.certified_cells.contains(c)), || format!("{g:?}: certified cell with residual"))?;
            certified += rep.residual.keys().filter(|c| v.certified_cells.contains(c)).count();
        }
        nonzero += bad_count(&rep);
    }
    Ok(format!(
        "25 partitions; delta >= 0 everywhere; {certified} certified occupied cells all with delta = 0; {nonzero} cells with delta > 0"
    ))
}

fn bad_count(rep: &edge_betti::splitting::SplittingReport) -> usize {
    rep.failing_cells().len()
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 1..=n {
                for b in a + 1..=n {
                    if bits[k] {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
    })
}

fn run_property<S: Strategy>(name: &str, cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn euler_holds(g: &Graph) -> Result<(), TestCaseError> {
    let n = g.vertex_count();
    let spec = IdealSpec::edge_ideal(g);
    let t = betti_table(&spec, &OracleOptions::default());
    prop_assert!(!t.is_truncated());
    let q = t.to_quotient();
    let j_max = t.window().j_max;
    let h: Vec<i64> = (0..=j_max).map(|d| (degree_basis(n, d).len() - spec.slice(field(), d).dim()) as i64).collect();
    for j in 0..=j_max {
        let lhs: i64 = (0..=q.window().i_max).map(|i| if i % 2 == 0 { 1 } else { -1 } * q.get(i, j) as i64).sum();
        let rhs: i64 = (0..=j.min(2 * n as u32))
            .map(|k| if k % 2 == 0 { 1 } else { -1 } * binomial(2 * n as i64, k as i64) as i64 * h[(j - k) as usize])
            .sum();
        prop_assert_eq!(lhs, rhs, "degree {}", j);
    }
    Ok(())
}

fn bidegree_symmetric(m: &MultigradedBetti) -> bool {
    let p = m.project(Grading::Bidegree);
    p.iter().all(|((i, key), b)| match key {
        edge_betti::koszul::DegreeKey::Bidegree(x, y) => {
            p.get(&(*i, edge_betti::koszul::DegreeKey::Bidegree(*y, *x))) == Some(b)
        }
        _ => false,
    })
}

fn criterion_9() -> Outcome {
    let f = field();
    let matrix = (1usize..8).prop_flat_map(|ncols| {
        (Just(ncols), proptest::collection::vec(proptest::collection::vec(0u32..5, ncols), 0..8))
    });
    run_property("RREF idempotence", 200, matrix, |(ncols, dense)| {
        let rows: Vec<SparseVec> = dense.iter().map(|r| SparseVec::from_dense(r)).collect();
        let once = rref(f, ncols, &rows);
        prop_assert_eq!(rref(f, ncols, &once), once);
        Ok(())
    })?;

    let basis = degree_basis(2, 2);
    let m = basis.len();
    let pair = (
        proptest::collection::vec(proptest::collection::vec(0u32..3, m), 0..6),
        proptest::collection::vec(proptest::collection::vec(0u32..3, m), 0..6),
    );
    run_property("intersection dimension formula", 200, pair, |(a, b)| {
        let span = |v: &Vec<Vec<u32>>| {
            let rows: Vec<SparseVec> = v.iter().map(|r| SparseVec::from_dense(r)).collect();
            GradedSubspace::span_reduce(f, basis.clone(), &rows)
        };
        let (u, w) = (span(&a), span(&b));
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(meet.dim() + u.sum(&w).unwrap().dim(), u.dim() + w.dim());
        prop_assert!(u.contains_subspace(&meet).unwrap() && w.contains_subspace(&meet).unwrap());
        Ok(())
    })?;

    let degree = (small_graph(), proptest::collection::vec(0u8..=2, 4), 0u8..=4, 1usize..=5);
    run_property("d∘d = 0", 100, degree, |(g, a, b, k)| {
        let n = g.vertex_count();
        let mut d = FineDegree::zero();
        d.a[..n].copy_from_slice(&a[..n]);
        d.b = b.min(d.total() as u8);
        let spec = IdealSpec::edge_ideal(&g);
        let blocks: Vec<KoszulBlock> = (k - 1..=k + 1).map(|kk| KoszulBlock::new(&spec, f, kk, &d)).collect();
        let outer = blocks[2].differential(&blocks[1], f);
        let inner = blocks[1].differential(&blocks[0], f);
        for row in &outer {
            let mut acc = SparseVec::new();
            for &(c, v) in row.entries() {
                acc = acc.add_scaled(v, &inner[c as usize], &f);
            }
            prop_assert!(acc.is_zero());
        }
        Ok(())
    })?;

    run_property("Euler characteristic", 40, small_graph(), |g| euler_holds(&g))?;

    run_property("N^2 x/y symmetry", 40, small_graph(), |g| {
        let opts = OracleOptions::default().symmetry(false);
        let m = betti_table_multigraded(&IdealSpec::edge_ideal(&g), &opts);
        prop_assert!(bidegree_symmetric(&m));
        Ok(())
    })?;

    run_property("isolated-vertex invariance", 40, small_graph(), |g| {
        let bigger = g.with_vertex_count(g.vertex_count() + 1).unwrap();
        prop_assert!(oracle(&g).same_entries(&oracle(&bigger)));
        Ok(())
    })?;
    Ok("RREF idempotence, intersection dimension, d∘d = 0, Euler characteristic, N^2 symmetry, isolated vertices".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("running-example Betti table", criterion_1),
        ("splitting-example tables and classification", criterion_2),
        ("complete splittings at pendant and free cut edges", criterion_3),
        ("s-partition splitting region", criterion_4),
        ("tree formulas against the oracle", criterion_5),
        ("closed forms against the oracle", criterion_6),
        ("intersection structure", criterion_7),
        ("splitting inequality and vanishing conditions", criterion_8),
        ("infrastructure property suites", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.1} s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({secs:.1} s): {detail}", k + 1);
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
