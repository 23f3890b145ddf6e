//! Verification sweeps comparing the formula engine with the oracle, and
//! the published example tables.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::betti::{BettiTable, Window};
use crate::error::{Error, Result};
use crate::families::{nonisomorphic_trees, seeded_random_graphs};
use crate::field::PrimeField;
use crate::formulas::{
    beta1_tree, beta1_tree_clique_sum, beta2_tree, betti_complete_graph, betti_linear_strand, betti_star,
    betti_third_row_tree, cut_edge_recursion, product_of_ideal_tables, DispatchProvider,
};
use crate::graph::{Edge, Graph};
use crate::ideal::IdealSpec;
use crate::koszul::{betti_table, Grading, OracleOptions};
use crate::splitting::{
    classify, edge_splitting, intersection_degree3_basis, intersection_linear_strand, s_partition,
    vanishing_from_tables, GeneratorPartition, PartitionKind, SplittingTables,
};

/// Example graphs with published Betti tables.
pub mod fixtures {
    use crate::betti::{BettiTable, Window};
    use crate::graph::Graph;

    /// Seven vertices, eleven edges; vertex 1 lies in the clique `{1,2,4,5}`.
    pub fn splitting_example_graph() -> Graph {
        Graph::new(7, [(1, 2), (1, 3), (1, 4), (1, 5), (1, 7), (2, 4), (2, 5), (2, 7), (3, 7), (4, 5), (6, 7)])
            .expect("valid graph")
    }

    /// A tree on seven vertices with a triangle glued on at vertex 4.
    pub fn clique_sum_example_graph() -> Graph {
        Graph::new(7, [(1, 2), (2, 3), (2, 4), (4, 5), (4, 6), (4, 7), (6, 7)]).expect("valid graph")
    }

    /// The seven-vertex tree with adjacent vertices of degrees 3 and 4.
    pub fn double_fork_tree() -> Graph {
        Graph::new(7, [(1, 2), (2, 3), (3, 4), (2, 5), (3, 6), (3, 7)]).expect("valid graph")
    }

    /// Builds a table from printed rows: `(r, [beta_{0,r}, beta_{1,1+r}, ...])`.
    pub fn table_from_rows(window: Window, rows: &[(u32, &[u64])]) -> BettiTable {
        let mut t = BettiTable::new(window);
        for &(r, vals) in rows {
            for (i, &b) in vals.iter().enumerate() {
                t.set(i as u32, i as u32 + r, b);
            }
        }
        t
    }

    pub fn splitting_example_table() -> BettiTable {
        table_from_rows(Window::for_vertices(7), &[(2, &[11, 12, 3]), (3, &[0, 32, 62, 39, 8]), (4, &[0, 0, 24, 64, 62, 26, 4])])
    }

    pub fn splitting_example_j_table() -> BettiTable {
        table_from_rows(Window::for_vertices(7), &[(2, &[5]), (3, &[0, 20, 30, 18, 4])])
    }

    pub fn splitting_example_k_table() -> BettiTable {
        table_from_rows(Window::for_vertices(7), &[(2, &[6, 2]), (3, &[0, 13, 8]), (4, &[0, 0, 12, 14, 4])])
    }

    pub fn splitting_example_intersection_table() -> BettiTable {
        table_from_rows(
            Window::for_vertices(7),
            &[(3, &[10, 9, 2]), (4, &[5, 26, 21, 4]), (5, &[0, 12, 50, 58, 26, 4])],
        )
    }

    pub fn double_fork_table() -> BettiTable {
        table_from_rows(Window::for_vertices(7), &[(2, &[6]), (3, &[0, 20, 12, 3]), (4, &[0, 0, 29, 40, 21, 4])])
    }
}

/// The available sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Trees,
    Random,
    PaperFixtures,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trees" => Ok(Suite::Trees),
            "random" => Ok(Suite::Random),
            "paper-fixtures" => Ok(Suite::PaperFixtures),
            _ => Err(Error::input(format!("unknown suite {s:?}"))),
        }
    }
}

/// Parameters shared by the sweeps.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub field: PrimeField,
    pub max_n: usize,
    pub count: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { field: PrimeField::default(), max_n: 6, count: 25, seed: 7 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: Vec<CaseResult>,
    pub total_millis: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed).count()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{mark} {} ({} ms)", c.name, c.millis);
            if !c.detail.is_empty() {
                let _ = write!(out, ": {}", c.detail);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} cases, {} failed, {} ms",
            self.cases.len(),
            self.failures(),
            self.total_millis
        );
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "cases": self.cases,
            "total": self.cases.len(),
            "failed": self.failures(),
            "passed": self.passed(),
            "total_millis": self.total_millis,
        })
    }
}

type Check = Result<std::result::Result<String, String>>;

fn run_case(cases: &mut Vec<CaseResult>, name: String, f: impl FnOnce() -> Check) {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    cases.push(CaseResult { name, passed, detail, millis: start.elapsed().as_millis() });
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn expect_table(what: &str, got: &BettiTable, want: &BettiTable) -> std::result::Result<(), String> {
    if got.is_truncated() {
        return Err(format!("{what}: table truncated"));
    }
    if got.same_entries(want) {
        Ok(())
    } else {
        Err(format!("{what}: tables differ\n{}\nexpected\n{}", got.render_text(), want.render_text()))
    }
}

fn oracle(g: &Graph, field: PrimeField) -> BettiTable {
    betti_table(&IdealSpec::edge_ideal(g), &OracleOptions::with_field(field))
}

/// Runs one sweep.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let cases = match suite {
        Suite::Trees => tree_suite(config)?,
        Suite::Random => random_suite(config)?,
        Suite::PaperFixtures => fixture_suite(config),
    };
    Ok(SuiteReport { suite, cases, total_millis: start.elapsed().as_millis() })
}

/// Formula-versus-oracle checks on one tree: `beta_1`, `beta_2`, the third
/// row, the dispatched table and every pendant-edge recursion.
pub fn check_tree(t: &Graph, field: PrimeField, provider: &DispatchProvider) -> Check {
    let table = oracle(t, field);
    if table.is_truncated() {
        return Ok(Err("oracle table truncated".into()));
    }
    let run = || -> Result<std::result::Result<(), String>> {
        if let Err(e) = expect_eq("beta_1", beta1_tree(t)?.value, table.total(1)) {
            return Ok(Err(e));
        }
        if let Err(e) = expect_eq("beta_2", beta2_tree(t)?.value, table.total(2)) {
            return Ok(Err(e));
        }
        for k in 2..=table.pd().unwrap_or(0) {
            if let Err(e) = expect_eq(&format!("beta_{{{k},{}}}", k + 3), betti_third_row_tree(t, k)?.value, table.get(k, k + 3)) {
                return Ok(Err(e));
            }
        }
        if let Err(e) = expect_table("dispatched formula table", &provider.resolve(t)?.0, &table) {
            return Ok(Err(e));
        }
        for v in t.vertices().filter(|&v| t.degree(v) == 1) {
            let e = Edge::new(v, t.neighbors(v)[0])?;
            if let Err(msg) = expect_table(&format!("recursion at {e}"), &cut_edge_recursion(t, &e, provider)?.value, &table) {
                return Ok(Err(msg));
            }
        }
        Ok(Ok(()))
    };
    Ok(run()?.map(|_| format!("totals {:?}", table.totals())))
}

fn tree_suite(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let provider = DispatchProvider::new(config.field);
    let mut cases = Vec::new();
    for n in 2..=config.max_n {
        for t in nonisomorphic_trees(n)? {
            let name = format!("tree n={n} edges={}", edge_list(&t));
            run_case(&mut cases, name, || check_tree(&t, config.field, &provider));
        }
    }
    Ok(cases)
}

fn edge_list(g: &Graph) -> String {
    g.edges().iter().map(|e| format!("{}-{}", e.u(), e.v())).collect::<Vec<_>>().join(",")
}

/// A seeded bipartition of the edges of `g`.
pub fn random_bipartition<R: Rng>(g: &Graph, rng: &mut R) -> Result<GeneratorPartition> {
    let j: Vec<Edge> = g.edges().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    GeneratorPartition::new(g, j, PartitionKind::Custom)
}

/// Mapping-cone inequality, the linear strand formula and the soundness of
/// the vanishing conditions for one partition.
pub fn check_partition(p: &GeneratorPartition, field: PrimeField) -> Check {
    let tables = SplittingTables::compute(p, &OracleOptions::with_field(field));
    let vanishing = vanishing_from_tables(p, &tables, Grading::Standard)?;
    let fine = vanishing_from_tables(p, &tables, Grading::Fine)?;
    let report = crate::splitting::classify_tables(p, &tables)?;
    if report.window_limited {
        return Ok(Err("tables truncated".into()));
    }
    let neg = report.negative_cells();
    if !neg.is_empty() {
        return Ok(Err(format!("negative residual at {neg:?}")));
    }
    for v in [&vanishing, &fine] {
        let (r, s) = v.certified_region;
        if !report.holds_on_region(r, s) {
            return Ok(Err(format!("{:?}-graded certified region ({r},{s}) has a nonzero residual", v.grading)));
        }
        if let Some(c) = report.failing_cells().into_iter().find(|c| v.certified_cells.contains(c)) {
            return Ok(Err(format!("{:?}-graded certified cell {c:?} has a nonzero residual", v.grading)));
        }
    }
    let strand: Vec<u64> = {
        let mut row: Vec<u64> = (0..=report.table_i.pd().unwrap_or(0)).map(|i| report.table_i.get(i, i + 2)).collect();
        while row.last() == Some(&0) {
            row.pop();
        }
        row
    };
    if let Err(e) = expect_eq("linear strand", betti_linear_strand(p.graph()), strand) {
        return Ok(Err(e));
    }
    Ok(Ok(format!(
        "minimal (r,s) {:?}, certified {:?} (fine {:?})",
        report.minimal_pairs[0], vanishing.certified_region, fine.certified_region
    )))
}

fn random_suite(config: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let graphs = seeded_random_graphs(config.seed, config.count, config.max_n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let mut cases = Vec::new();
    for (k, g) in graphs.iter().enumerate() {
        let p = random_bipartition(g, &mut rng)?;
        let name = format!("random #{k} n={} edges={} J={}", g.vertex_count(), edge_list(g), {
            p.j_edges().iter().map(|e| format!("{}-{}", e.u(), e.v())).collect::<Vec<_>>().join(",")
        });
        run_case(&mut cases, name, || check_partition(&p, config.field));
    }
    Ok(cases)
}

fn fixture_suite(config: &SuiteConfig) -> Vec<CaseResult> {
    let field = config.field;
    let mut cases = Vec::new();
    let w = |n: usize| Window::for_vertices(n);

    run_case(&mut cases, "seven-vertex example: Betti table".into(), || {
        let t = oracle(&fixtures::splitting_example_graph(), field);
        Ok(expect_table("J_G", &t, &fixtures::splitting_example_table()).map(|_| format!("totals {:?}", t.totals())))
    });

    run_case(&mut cases, "seven-vertex example: 1-partition".into(), || {
        let g = fixtures::splitting_example_graph();
        let rep = classify(&s_partition(&g, 1)?, None, field)?;
        let checks = || -> std::result::Result<String, String> {
            expect_table("J", &rep.table_j, &fixtures::splitting_example_j_table())?;
            expect_table("K", &rep.table_k, &fixtures::splitting_example_k_table())?;
            expect_table("J ∩ K", &rep.table_jk, &fixtures::splitting_example_intersection_table())?;
            expect_eq("delta(2,4)", rep.delta(2, 4), 6)?;
            expect_eq("complete", rep.complete, false)?;
            expect_eq("identity on i >= 4 or j >= i + 4", rep.holds_on_region(4, 4), true)?;
            expect_eq(
                "summary",
                rep.summary().as_str(),
                "not complete; counterexample (2,4): 3 ≠ 0+0+9; guaranteed (4,4)",
            )?;
            Ok(rep.summary())
        };
        Ok(checks())
    });

    run_case(&mut cases, "seven-vertex example: intersection strand".into(), || {
        let g = fixtures::splitting_example_graph();
        Ok((|| {
            expect_eq("strand", intersection_linear_strand(&g, 1).map_err(|e| e.to_string())?, vec![10, 9, 2])?;
            expect_eq("degree-3 basis size", intersection_degree3_basis(&g, 1).map_err(|e| e.to_string())?.len(), 10)?;
            expect_eq("linear strand of G", betti_linear_strand(&g), vec![11, 12, 3])?;
            Ok(String::new())
        })())
    });

    run_case(&mut cases, "double-fork tree: Betti table and tree formulas".into(), || {
        let t = fixtures::double_fork_tree();
        let table = oracle(&t, field);
        Ok((|| {
            expect_table("J_T", &table, &fixtures::double_fork_table())?;
            let e = |r: Result<crate::formulas::FormulaResult<u64>>| r.map(|x| x.value).map_err(|e| e.to_string());
            expect_eq("beta_1", e(beta1_tree(&t))?, 20)?;
            expect_eq("beta_2", e(beta2_tree(&t))?, 41)?;
            expect_eq("beta_{2,5}", e(betti_third_row_tree(&t, 2))?, 12)?;
            expect_eq("beta_{3,6}", e(betti_third_row_tree(&t, 3))?, 3)?;
            expect_eq("caterpillars", t.count_caterpillars().map_err(|e| e.to_string())?, 3)?;
            Ok(format!("totals {:?}", table.totals()))
        })())
    });

    run_case(&mut cases, "complete graph K_4".into(), || {
        let want = BettiTable::from_entries(w(4), [((0, 2), 6), ((1, 3), 8), ((2, 4), 3)]);
        Ok(expect_table("formula", &betti_complete_graph(4)?, &want).map(|_| String::new()))
    });

    run_case(&mut cases, "stars S_3 and S_7".into(), || {
        let s3 = BettiTable::from_entries(w(3), [((0, 2), 2), ((1, 4), 1)]);
        let s7 = betti_star(7)?;
        Ok((|| {
            expect_table("S_3", &betti_star(3).map_err(|e| e.to_string())?, &s3)?;
            expect_eq("S_7 row", (1..=5).map(|i| s7.get(i, i + 3)).collect::<Vec<_>>(), vec![35, 70, 63, 28, 5])?;
            Ok(String::new())
        })())
    });

    run_case(&mut cases, "star S_4: recursion and tree formulas".into(), || {
        let s4 = Graph::star(4)?;
        let provider = DispatchProvider::new(field);
        let rec = cut_edge_recursion(&s4, &Edge::new(1, 4)?, &provider)?.value;
        Ok((|| {
            expect_eq("beta_{1,4}", rec.get(1, 4), 4)?;
            expect_eq("beta_1 tree formula", beta1_tree(&s4).map_err(|e| e.to_string())?.value, 4)?;
            expect_eq("beta_2 tree formula", beta2_tree(&s4).map_err(|e| e.to_string())?.value, 2)?;
            Ok(String::new())
        })())
    });

    run_case(&mut cases, "path P_3 as a product of two edges".into(), || {
        let e = betti_complete_graph(2)?;
        let want = BettiTable::from_entries(w(3), [((0, 2), 2), ((1, 4), 1)]);
        Ok(expect_table("product", &product_of_ideal_tables(&e, &e)?, &want).map(|_| String::new()))
    });

    run_case(&mut cases, "clique sum: K_m base case".into(), || {
        Ok((|| {
            for m in 2..=6usize {
                let k = Graph::complete(m).map_err(|e| e.to_string())?;
                let got = beta1_tree_clique_sum(&k, 1, m).map_err(|e| e.to_string())?.value;
                expect_eq(&format!("K_{m}"), got, 2 * crate::binomial(m as i64, 3))?;
            }
            Ok(String::new())
        })())
    });

    run_case(&mut cases, "pendant edge of the double-fork tree splits completely".into(), || {
        let t = fixtures::double_fork_tree();
        let rep = classify(&edge_splitting(&t, &Edge::new(3, 4)?)?, None, field)?;
        Ok(expect_eq("complete", rep.complete, true).map(|_| rep.summary()))
    });

    run_case(&mut cases, "s-partition of C_4 splits completely".into(), || {
        let rep = classify(&s_partition(&Graph::cycle(4)?, 1)?, None, field)?;
        Ok(expect_eq("complete", rep.complete, true).map(|_| rep.summary()))
    });

    cases
}
