use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edge_betti::formulas::{
    beta1_tree, beta2_tree, betti_by_formula, betti_third_row_tree, formula_family, splitting_reg_pd_bounds,
    DispatchProvider, Provenance,
};
use edge_betti::splitting::{
    classify_tables, custom_partition, edge_splitting, s_partition, vanishing_from_tables, GeneratorPartition,
    SplittingReport, SplittingTables, VanishingReport,
};
use edge_betti::verify::{run_suite, Suite, SuiteConfig};
use edge_betti::{betti_table, BettiTable, Edge, Grading, Graph, IdealSpec, OracleOptions, PrimeField, Window};
use serde_json::json;

/// Graded Betti numbers and Betti splittings of binomial edge ideals.
#[derive(Parser, Debug)]
#[command(name = "edge-betti", version)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Graph file: vertex count on the first line, then one "u v" per edge.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Characteristic of the coefficient field.
    #[arg(long, global = true, env = "EDGE_BETTI_PRIME", default_value_t = edge_betti::DEFAULT_PRIME)]
    field: u32,
    /// Recompute over this prime as well and report any discrepancy.
    #[arg(long, global = true)]
    second_prime: Option<u32>,
    /// Largest homological index computed (default 2n).
    #[arg(long, global = true)]
    max_i: Option<u32>,
    /// Largest internal degree computed (default 2n + 2).
    #[arg(long, global = true)]
    max_j: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cross-check results and exit with status 1 on any mismatch.
    #[arg(long, global = true)]
    verify: bool,
    /// Treat a table cut off by the window as an error.
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for the random suite.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Formula,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Betti table of the binomial edge ideal.
    Betti,
    /// Compare the Betti tables of I = J + K, J, K and J ∩ K.
    Split {
        #[command(subcommand)]
        mode: SplitMode,
    },
    /// Evaluate the tree formulas for beta_1, beta_2 and the third row.
    Tree,
    /// Run a verification sweep.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 25)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SplitMode {
    /// J = (f_e), K = the ideal of G without e.
    Edge {
        /// Edge as "u,v".
        #[arg(long, value_parser = parse_edge)]
        edge: Edge,
    },
    /// J = generators of edges through s, K = the rest.
    Vertex {
        #[arg(long)]
        vertex: usize,
    },
    /// J = edges listed in a file, one "u v" per line; K = the rest.
    Custom {
        #[arg(long)]
        file: PathBuf,
    },
}

fn parse_edge(s: &str) -> Result<Edge, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected u,v, found {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad vertex {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad vertex {b:?}"))?;
    Edge::new(a, b).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: edge_betti::Error| e.to_string())
}

/// Why a run stopped early; the variant picks the exit status.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<edge_betti::Error> for Failure {
    fn from(e: edge_betti::Error) -> Self {
        match e {
            edge_betti::Error::Truncated(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<Output, Failure>;

/// Rendered stdout plus any verification problems found along the way.
struct Output {
    text: String,
    problems: Vec<String>,
}

struct Context {
    field: PrimeField,
    second: Option<PrimeField>,
    run: RunArgs,
}

impl Context {
    fn new(run: RunArgs) -> Result<Self, Failure> {
        let field = PrimeField::new(run.field)?;
        let second = run.second_prime.map(PrimeField::new).transpose()?;
        Ok(Context { field, second, run })
    }

    fn graph(&self) -> Result<Graph, Failure> {
        let path = self.run.graph.as_deref().ok_or_else(|| Failure::Usage("--graph is required".into()))?;
        read_graph(path)
    }

    fn window(&self, g: &Graph) -> Window {
        let d = Window::for_vertices(g.vertex_count());
        Window::new(self.run.max_i.unwrap_or(d.i_max), self.run.max_j.unwrap_or(d.j_max))
    }

    fn options(&self, field: PrimeField, g: &Graph) -> OracleOptions {
        OracleOptions::with_field(field).window(self.window(g))
    }

    fn check_truncation(&self, name: &str, t: &BettiTable) -> Result<(), Failure> {
        if self.run.strict && t.is_truncated() {
            return Err(edge_betti::Error::Truncated(format!("{name} exceeds the window")).into());
        }
        Ok(())
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Graph::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_betti(ctx: &Context) -> Outcome {
    let g = ctx.graph()?;
    let window = ctx.window(&g);
    let mut problems = Vec::new();
    let use_formula = match ctx.run.method {
        Method::Oracle => false,
        Method::Formula => true,
        Method::Auto => formula_family(&g).is_some(),
    };
    let (table, provenance) = if use_formula {
        let r = betti_by_formula(&g, &DispatchProvider::new(ctx.field))?;
        (r.value.clipped(window), r.provenance)
    } else {
        (betti_table(&IdealSpec::edge_ideal(&g), &ctx.options(ctx.field, &g)), Provenance::Oracle)
    };
    ctx.check_truncation("J_G", &table)?;
    if ctx.run.verify && use_formula {
        let oracle = betti_table(&IdealSpec::edge_ideal(&g), &ctx.options(ctx.field, &g));
        if !oracle.same_entries(&table) {
            problems.push(format!("formula ({provenance}) disagrees with the oracle"));
        }
    }
    if let Some(p) = ctx.second {
        let other = betti_table(&IdealSpec::edge_ideal(&g), &ctx.options(p, &g));
        if !other.same_entries(&table) {
            problems.push(format!("tables over GF({}) and GF({}) differ", ctx.field.modulus(), p.modulus()));
        }
    }
    let text = match ctx.run.format {
        Format::Table => format!("{}method: {provenance}\n", table.render_text()),
        Format::Json => {
            let mut doc = table.to_json(g.vertex_count(), ctx.field.modulus());
            doc["method"] = json!(provenance.to_string());
            pretty(&doc)
        }
    };
    Ok(Output { text, problems })
}

fn partition(g: &Graph, mode: &SplitMode) -> Result<GeneratorPartition, Failure> {
    Ok(match mode {
        SplitMode::Edge { edge } => edge_splitting(g, edge)?,
        SplitMode::Vertex { vertex } => s_partition(g, *vertex)?,
        SplitMode::Custom { file } => {
            let text =
                std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            custom_partition(g, &text).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?
        }
    })
}

fn split_problems(report: &SplittingReport, vanishing: &VanishingReport) -> Vec<String> {
    let mut problems = Vec::new();
    for (i, j) in report.negative_cells() {
        problems.push(format!("delta({i},{j}) = {} is negative", report.delta(i, j)));
    }
    if let Some(g) = &report.guarantee {
        if !g.holds_on_window {
            problems.push(format!("guaranteed ({},{}) splitting fails on the window", g.r, g.s));
        }
    }
    for &(i, j) in &vanishing.certified_cells {
        if report.delta(i, j) != 0 {
            problems.push(format!("certified cell ({i},{j}) has delta = {}", report.delta(i, j)));
        }
    }
    problems
}

fn cmd_split(ctx: &Context, mode: &SplitMode) -> Outcome {
    let g = ctx.graph()?;
    let p = partition(&g, mode)?;
    let tables = SplittingTables::compute(&p, &ctx.options(ctx.field, &g));
    let report = classify_tables(&p, &tables)?;
    let vanishing = vanishing_from_tables(&p, &tables, Grading::Standard)?;
    for (name, t) in [("I", &report.table_i), ("J", &report.table_j), ("K", &report.table_k), ("J ∩ K", &report.table_jk)] {
        ctx.check_truncation(name, t)?;
    }
    let mut problems = if ctx.run.verify { split_problems(&report, &vanishing) } else { Vec::new() };
    if let Some(q) = ctx.second {
        let other = classify_tables(&p, &SplittingTables::compute(&p, &ctx.options(q, &g)))?;
        if other.residual != report.residual || !other.table_i.same_entries(&report.table_i) {
            problems.push(format!("splitting over GF({}) and GF({}) differ", ctx.field.modulus(), q.modulus()));
        }
    }
    let (r, s) = report.guarantee.as_ref().map_or(report.minimal_pairs[0], |g| (g.r, g.s));
    let bounds = splitting_reg_pd_bounds(&report.table_j, &report.table_k, &report.table_jk, Some(&report.table_i), r, s)
        .ok()
        .map(|b| b.value);
    let text = match ctx.run.format {
        Format::Table => {
            let mut out = report.render_text();
            let (cr, cs) = vanishing.certified_region;
            let _ = writeln!(out, "vanishing-certified region: i >= {cr} or j >= i + {cs}");
            let _ = writeln!(out, "vanishing failures: {}", vanishing.failures.len());
            if let Some(b) = &bounds {
                let show = |v: Option<u32>| v.map_or("not determined".to_string(), |v| v.to_string());
                let _ = writeln!(
                    out,
                    "bounds at ({r},{s}): m = {}, p = {}; reg I {}; pd I {}",
                    b.m,
                    b.p,
                    show(b.reg_conclusion),
                    show(b.pd_conclusion)
                );
            }
            out
        }
        Format::Json => {
            let mut doc = report.to_json(g.vertex_count(), ctx.field.modulus());
            doc["vanishing"] = json!({
                "certified_region": vanishing.certified_region,
                "region_hypothesis": vanishing.region_hypothesis,
                "failures": vanishing.failures.len(),
            });
            doc["bounds"] = json!(bounds);
            pretty(&doc)
        }
    };
    Ok(Output { text, problems })
}

fn cmd_tree(ctx: &Context) -> Outcome {
    let g = ctx.graph()?;
    let b1 = beta1_tree(&g)?.value;
    let b2 = beta2_tree(&g)?.value;
    let third: Vec<u64> = (2..=g.vertex_count() as u32)
        .map(|k| betti_third_row_tree(&g, k).map(|r| r.value))
        .collect::<Result<_, _>>()?;
    let mut problems = Vec::new();
    if ctx.run.verify {
        let t = betti_table(&IdealSpec::edge_ideal(&g), &OracleOptions::with_field(ctx.field));
        if t.total(1) != b1 {
            problems.push(format!("beta_1: formula {b1}, oracle {}", t.total(1)));
        }
        if t.total(2) != b2 {
            problems.push(format!("beta_2: formula {b2}, oracle {}", t.total(2)));
        }
        for (k, &v) in (2u32..).zip(&third) {
            if t.get(k, k + 3) != v {
                problems.push(format!("beta_{{{k},{}}}: formula {v}, oracle {}", k + 3, t.get(k, k + 3)));
            }
        }
    }
    let text = match ctx.run.format {
        Format::Table => {
            let row: Vec<String> = third.iter().map(u64::to_string).collect();
            format!("beta_1: {b1}\nbeta_2: {b2}\nbeta_(k,k+3), k >= 2: {}\n", row.join(" "))
        }
        Format::Json => pretty(&json!({"beta_1": b1, "beta_2": b2, "third_row_from_2": third})),
    };
    Ok(Output { text, problems })
}

fn cmd_verify(ctx: &Context, suite: Suite, max_n: usize, count: usize) -> Outcome {
    let config = SuiteConfig { field: ctx.field, max_n, count, seed: ctx.run.seed };
    let report = run_suite(suite, &config)?;
    let problems = report.cases.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    let text = match ctx.run.format {
        Format::Table => report.render_text(),
        Format::Json => pretty(&report.to_json()),
    };
    Ok(Output { text, problems })
}

fn pretty(doc: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match Context::new(cli.run) {
        Ok(c) => c,
        Err(f) => return finish(Err(f)),
    };
    let outcome = match &cli.command {
        Command::Betti => cmd_betti(&ctx),
        Command::Split { mode } => cmd_split(&ctx, mode),
        Command::Tree => cmd_tree(&ctx),
        Command::Verify { suite, max_n, count } => cmd_verify(&ctx, *suite, *max_n, *count),
    };
    finish(outcome)
}

fn finish(outcome: Outcome) -> ExitCode {
    match outcome {
        Ok(out) => {
            print!("{}", out.text);
            if out.problems.is_empty() {
                return ExitCode::SUCCESS;
            }
            for p in &out.problems {
                eprintln!("verification failure: {p}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
