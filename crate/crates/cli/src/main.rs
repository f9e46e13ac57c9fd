//! `tessdom` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a verification failed
//! (infeasible selection, table cell that differs from the published value),
//! 3 a search ran out of budget and `--strict` was given.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tessdom::bounds::{class_incidence, Granularity};
use tessdom::halfdom::closed_form_global_deficiency;
use tessdom::io::{self, BoundDoc, GraphHeader};
use tessdom::quotient::build;
use tessdom::tessellation::Diagnostic;
use tessdom::{
    aggregated_lp_bound, catalog, cluster_spec, deficiency, density, is_half_dependent,
    pinned_density_bound, render_svg, reproduce_table, solve_exact, validate_cluster,
    weighted_density_bound, BoundReport, Method, OptResult, Quotient, QuotientGraph, Rational,
    RenderSpec, Selection, SolveOptions, Status, TableId, TableSpec, TessKind,
};

const EXIT_USAGE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "tessdom", version, about = "Half-dependent sets on plane tessellations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the tessellation catalog.
    Tess {
        #[command(subcommand)]
        action: TessAction,
    },
    /// Build quotient graphs.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Find a maximum half-dependent set.
    Solve(SolveArgs),
    /// Verify a selection against a graph.
    Check(CheckArgs),
    /// Density upper bounds.
    Bound {
        #[command(subcommand)]
        action: BoundAction,
    },
    /// Recompute a reference table.
    Table(TableArgs),
    /// Draw a graph, optionally with a selection, as SVG.
    Render(RenderArgs),
}

#[derive(Subcommand)]
enum TessAction {
    /// All eleven tessellations.
    List,
    /// Cluster data of one tessellation.
    Show {
        #[arg(long)]
        kind: TessKind,
    },
}

#[derive(Subcommand)]
enum GraphAction {
    Build {
        #[command(flatten)]
        spec: GraphSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct GraphSpec {
    #[arg(long)]
    kind: TessKind,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "torus")]
    quotient: Quotient,
}

/// A graph file, or the parameters to build one.
#[derive(Args, Clone)]
struct GraphSource {
    /// Graph document written by `graph build`.
    #[arg(long, conflicts_with_all = ["kind", "m", "n", "quotient"])]
    graph: Option<PathBuf>,
    #[arg(long, requires_all = ["m", "n"])]
    kind: Option<TessKind>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    quotient: Option<Quotient>,
}

impl GraphSource {
    fn load(&self) -> Result<QuotientGraph, Failure> {
        match (&self.graph, self.kind) {
            (Some(path), _) => Ok(io::graph_from_json(&io::read_text(path)?)?),
            (None, Some(kind)) => Ok(build(
                kind,
                self.m.unwrap_or(0),
                self.n.unwrap_or(0),
                self.quotient.unwrap_or(Quotient::Torus),
            )?),
            (None, None) => Err(Failure::usage("give --graph FILE or --kind/--m/--n")),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Bnb,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Brute => Method::Brute,
            MethodArg::Bnb => Method::Bnb,
        }
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Exit with code 3 when the budget runs out before the search closes.
    #[arg(long)]
    strict: bool,
}

impl BudgetArgs {
    fn duration(&self) -> Result<Option<Duration>, Failure> {
        match self.time_limit {
            None => Ok(None),
            Some(s) if s.is_finite() && s > 0.0 => Ok(Some(Duration::from_secs_f64(s))),
            Some(s) => Err(Failure::usage(format!("--time-limit must be positive, got {s}"))),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Same witness on every run, whatever the thread count.
    #[arg(long)]
    deterministic: bool,
    /// Stop once a selection of at least this density (p/q) is found.
    #[arg(long)]
    target: Option<Rational>,
    /// Vertex ids forced out of the selection.
    #[arg(long, value_delimiter = ',')]
    zero: Vec<usize>,
    /// Write the witness as a selection document.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long)]
    selection: PathBuf,
}

#[derive(Subcommand)]
enum BoundAction {
    /// Class LP of the infinite tiling.
    Aggregate {
        #[arg(long)]
        kind: TessKind,
        #[arg(long, value_enum, default_value = "polygon")]
        granularity: GranularityArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// LP relaxation of a finite graph, divided by its vertex count.
    Lp {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum with some vertices forced out, over the free vertices.
    Pinned {
        #[command(flatten)]
        source: GraphSource,
        /// Comma-separated vertex ids.
        #[arg(long, value_delimiter = ',')]
        zero: Vec<usize>,
        /// Pin every tile of these cluster rows `i` (all `j`).
        #[arg(long, value_delimiter = ',')]
        zero_rows: Vec<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weighted LP relaxation.
    Weighted {
        #[command(flatten)]
        source: GraphSource,
        /// JSON array of "p/q" weights, one per vertex.
        #[arg(long, conflicts_with = "interior")]
        weights: Option<PathBuf>,
        /// Weight 1 on clusters at least this far from the parallelogram's
        /// border, 0 elsewhere.
        #[arg(long)]
        interior: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GranularityArg {
    Polygon,
    Position,
}

impl From<GranularityArg> for Granularity {
    fn from(g: GranularityArg) -> Self {
        match g {
            GranularityArg::Polygon => Granularity::Polygon,
            GranularityArg::Position => Granularity::Position,
        }
    }
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    id: TableId,
    /// Largest grid size to compute.
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    /// Per-cell limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Exit with code 3 when a cell is left open by the budget.
    #[arg(long)]
    strict: bool,
    /// Also write the machine-readable table.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long)]
    selection: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 800.0)]
    width: f64,
    #[arg(long, default_value_t = 600.0)]
    height: f64,
}

/// Everything that ends the program with a non-zero code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_MISMATCH,
            message: message.into(),
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_BUDGET,
            message: message.into(),
        }
    }
}

impl From<tessdom::Error> for Failure {
    fn from(e: tessdom::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => Ok(io::write_text(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tess(action: TessAction) -> Result<(), Failure> {
    match action {
        TessAction::List => {
            println!("{:<16} {:<24} {:>5}  class", "arrangement", "name", "tiles");
            for kind in catalog() {
                println!(
                    "{:<16} {:<24} {:>5}  {}",
                    kind.name(),
                    kind.common_name(),
                    cluster_spec(kind).len(),
                    if kind.is_regular() { "regular" } else { "semi-regular" }
                );
            }
        }
        TessAction::Show { kind } => {
            let spec = cluster_spec(kind);
            println!("{} ({})", kind.name(), kind.common_name());
            println!("tiles:");
            for t in &spec.tiles {
                println!("  {}: {}-gon", t.index, t.sides);
            }
            println!("edges inside the cluster:");
            for (a, b) in &spec.intra_edges {
                println!("  {a} - {b}");
            }
            println!("edges to neighbouring clusters:");
            for e in &spec.inter_edges {
                println!("  {} - {} at offset ({}, {})", e.from, e.to, e.offset.0, e.offset.1);
            }
            for (g, label) in [(Granularity::Polygon, "polygon"), (Granularity::Position, "position")] {
                let inc = class_incidence(kind, g);
                println!("{label} classes:");
                for (a, c) in inc.classes.iter().enumerate() {
                    let row: Vec<String> = inc.incidence[a].iter().map(ToString::to_string).collect();
                    println!(
                        "  {:<14} count {} degree {:>2} neighbours [{}]{}",
                        c.label,
                        c.count,
                        c.degree,
                        row.join(", "),
                        if c.uniform { "" } else { " (not uniform)" }
                    );
                }
            }
            let diags: Vec<Diagnostic> = validate_cluster(&spec);
            if diags.is_empty() {
                println!("validation: ok");
            } else {
                for d in &diags {
                    println!("validation: {d}");
                }
                return Err(Failure::mismatch("cluster failed validation"));
            }
        }
    }
    Ok(())
}

fn print_result(g: &QuotientGraph, r: &OptResult) {
    let h = GraphHeader::of(g);
    println!("graph: {} {}x{} {} ({} vertices)", h.kind, h.m, h.n, h.quotient, h.vertex_count);
    println!("method: {}", r.method);
    println!("cardinality: {}", r.best_cardinality);
    println!("density: {}", r.density);
    println!("status: {}", r.status);
    println!("elapsed: {:.3}s", r.elapsed.as_secs_f64());
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let g = args.source.load()?;
    let opts = SolveOptions {
        method: args.method.into(),
        time_limit: args.budget.duration()?,
        deterministic: args.deterministic,
        target: args.target,
        fixed_zero: args.zero,
        threads: args.budget.threads,
    };
    let r = solve_exact(&g, &opts)?;
    print_result(&g, &r);
    if let Some(path) = &args.out {
        io::write_text(path, &io::selection_to_json(&g, &r.witness)?)?;
    }
    if args.budget.strict && r.budget_exhausted && r.status != Status::Optimal {
        return Err(Failure::budget("time limit reached; result is a lower bound only"));
    }
    Ok(())
}

fn check(args: CheckArgs) -> Result<(), Failure> {
    let g = args.source.load()?;
    let (_, sel) = io::selection_from_json(&io::read_text(&args.selection)?, Some(&g))?;
    let ok = is_half_dependent(&g, &sel)?;
    let rep = deficiency(&g, &sel)?;
    println!("cardinality: {}", sel.count());
    println!("density: {}", density(&g, &sel)?);
    println!("global deficiency: {}", rep.global_delta);
    println!("closed-form deficiency: {}", closed_form_global_deficiency(&g, &sel)?);
    println!("half-dependent: {}", if ok { "yes" } else { "no" });
    if ok {
        Ok(())
    } else {
        let bad: Vec<String> = rep
            .delta
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d > 0)
            .map(|(v, _)| v.to_string())
            .collect();
        Err(Failure::mismatch(format!("over the cap at vertices {}", bad.join(", "))))
    }
}

fn print_bound(rep: &BoundReport) {
    println!("bound: {}", rep.value);
    println!("provenance: {}", rep.provenance);
    if let Some(g) = rep.granularity {
        println!("granularity: {g}");
    }
    match &rep.certificate {
        tessdom::bounds::Certificate::ClassDensities { classes } => {
            for (label, y) in classes {
                println!("  {label}: {y}");
            }
        }
        tessdom::bounds::Certificate::Solver {
            cardinality,
            free_vertices,
            optimal,
            ..
        } => println!(
            "  inner maximum {cardinality} over {free_vertices} free vertices ({})",
            if *optimal { "optimal" } else { "not proved optimal" }
        ),
        tessdom::bounds::Certificate::Weighted { optimum, total_weight } => {
            println!("  weighted optimum {optimum} over total weight {total_weight}")
        }
    }
    if let Some(note) = &rep.note {
        println!("note: {note}");
    }
}

fn bound(action: BoundAction) -> Result<(), Failure> {
    let (doc, out) = match action {
        BoundAction::Aggregate { kind, granularity, out } => {
            let report = aggregated_lp_bound(kind, granularity.into())?;
            (BoundDoc { kind: Some(kind), graph: None, report }, out)
        }
        BoundAction::Lp { source, out } => {
            let g = source.load()?;
            let report = weighted_density_bound(&g, &vec![Rational::one(); g.len()])?;
            (BoundDoc { kind: Some(g.kind), graph: Some(GraphHeader::of(&g)), report }, out)
        }
        BoundAction::Pinned { source, mut zero, zero_rows, budget, out } => {
            let g = source.load()?;
            for v in &g.vertices {
                if zero_rows.contains(&v.i) {
                    zero.push(v.id);
                }
            }
            let opts = SolveOptions {
                time_limit: budget.duration()?,
                threads: budget.threads,
                ..SolveOptions::default()
            };
            let (report, res) = pinned_density_bound(&g, &zero, &opts)?;
            if budget.strict && res.budget_exhausted && res.status != Status::Optimal {
                print_bound(&report);
                return Err(Failure::budget("time limit reached; inner maximum not proved"));
            }
            (BoundDoc { kind: Some(g.kind), graph: Some(GraphHeader::of(&g)), report }, out)
        }
        BoundAction::Weighted { source, weights, interior, out } => {
            let g = source.load()?;
            let w: Vec<Rational> = match (weights, interior) {
                (Some(path), _) => serde_json::from_str(&io::read_text(&path)?)
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
                (None, Some(margin)) => g
                    .vertices
                    .iter()
                    .map(|v| {
                        let inside = |x: usize, size: usize| x >= margin && x + margin < size;
                        if inside(v.i, g.m) && inside(v.j, g.n) {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
                (None, None) => return Err(Failure::usage("give --weights FILE or --interior MARGIN")),
            };
            let report = weighted_density_bound(&g, &w)?;
            (BoundDoc { kind: Some(g.kind), graph: Some(GraphHeader::of(&g)), report }, out)
        }
    };
    print_bound(&doc.report);
    if let Some(path) = out {
        io::write_text(&path, &io::bound_to_json(&doc))?;
    }
    Ok(())
}

fn table(args: TableArgs) -> Result<(), Failure> {
    let spec = TableSpec {
        id: args.id,
        max_n: args.max_n,
        time_limit: match args.time_limit {
            Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => return Err(Failure::usage(format!("--time-limit must be positive, got {s}"))),
            None => None,
        },
        threads: args.threads,
    };
    let report = reproduce_table(&spec)?;
    print!("{}", report.to_text());
    if let Some(path) = &args.json {
        io::write_text(path, &io::table_to_json(&report))?;
    }
    if report.any_differs() {
        return Err(Failure::mismatch("some cells differ from the published values"));
    }
    if args.strict && !report.all_match() {
        return Err(Failure::budget("some cells were left open by the time limit"));
    }
    Ok(())
}

fn render(args: RenderArgs) -> Result<(), Failure> {
    let g = args.source.load()?;
    let sel: Option<Selection> = match &args.selection {
        Some(path) => Some(io::selection_from_json(&io::read_text(path)?, Some(&g))?.1),
        None => None,
    };
    let mut spec = RenderSpec::new(&g);
    spec.width = args.width;
    spec.height = args.height;
    spec.selection = sel.as_ref();
    io::write_text(&args.out, &render_svg(&spec)?)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Tess { action } => tess(action),
        Command::Graph {
            action: GraphAction::Build { spec, out },
        } => {
            let g = build(spec.kind, spec.m, spec.n, spec.quotient)?;
            emit(&io::graph_to_json(&g), out.as_deref())
        }
        Command::Solve(args) => solve(args),
        Command::Check(args) => check(args),
        Command::Bound { action } => bound(action),
        Command::Table(args) => table(args),
        Command::Render(args) => render(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
