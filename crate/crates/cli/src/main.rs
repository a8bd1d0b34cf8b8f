//! `termxform`: transform, query, roundtrip, metrics and check commands.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use termxform::engine::{predicate_known, Clause, DiagSink, Program, Solver, SolverOptions, DEFAULT_DEPTH_LIMIT};
use termxform::metrics::{halstead, measure_source, report_csv, ClassifyConfig, HalsteadCounts, MetricsError, SourceMetricsError};
use termxform::prelude::{parse_with_prelude, prelude};
use termxform::reader::{parse_program_with, parse_query};
use termxform::template::{transform_document, TemplateError, TransformError, TransformOptions, TraversalOptions, UnmatchedText};
use termxform::term::{render_term, term_equal, Term};
use termxform::xml::{parse_document_with, serialize_document, ParseOptions};

const PRELUDE_ONLY: &str = "prelude-only";
// Supplied by user rule files; their absence is not a mistake.
const HOOKS: &[(&str, usize)] = &[("template", 2), ("go", 2)];

#[derive(Parser)]
#[command(name = "termxform", version, about = "Unification-based XML transformation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply a rule file to an XML document.
    Transform(TransformArgs),
    /// Run a goal and print its bindings.
    Query(QueryArgs),
    /// Parse, serialize and parse again; report the first divergence.
    Roundtrip {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        keep_ws: bool,
    },
    /// Halstead measures of a rule file or of raw counts.
    Metrics(MetricsArgs),
    /// Lint a rule file.
    Check {
        #[arg(long)]
        rules: String,
    },
}

#[derive(Args)]
struct EngineArgs {
    /// Resolution step limit; `TERMXFORM_DEPTH` is used when absent.
    #[arg(long)]
    depth_limit: Option<u64>,
    #[arg(long)]
    occurs_check: bool,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long)]
    rules: String,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    /// Write every solution of go/2 to numbered files.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    no_wrap: bool,
    #[arg(long)]
    keep_ws: bool,
    #[arg(long)]
    pretty: bool,
    #[arg(long, value_enum, default_value_t = DefaultText::Drop)]
    default_text: DefaultText,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum DefaultText {
    Drop,
    Copy,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long, default_value = PRELUDE_ONLY)]
    rules: String,
    /// Document bound to the variable `Doc`.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    max: usize,
    goal: String,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long, conflicts_with = "counts", required_unless_present = "counts")]
    src: Option<PathBuf>,
    /// `eta1,eta2,N1,N2`
    #[arg(long)]
    counts: Option<String>,
    #[arg(long)]
    csv: bool,
    /// Classification settings, `key=value` per line.
    #[arg(long)]
    config: Option<PathBuf>,
}

enum Failure {
    NoSolution,
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::NoSolution => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input)
}

fn load_rules(rules: &str) -> Result<Program, Failure> {
    if rules == PRELUDE_ONLY {
        return Ok(prelude().clone());
    }
    let text = read(Path::new(rules))?;
    parse_with_prelude(&text).with_context(|| format!("in {rules}")).map_err(input)
}

fn load_doc(path: &Path, keep_ws: bool) -> Result<Term, Failure> {
    let src = read(path)?;
    parse_document_with(&src, ParseOptions { keep_ws }, &path.display().to_string()).map_err(input)
}

fn solver_options(e: &EngineArgs) -> Result<SolverOptions, Failure> {
    let from_env = match std::env::var("TERMXFORM_DEPTH") {
        Ok(v) => Some(
            v.trim()
                .parse::<u64>()
                .map_err(|_| input(anyhow!("TERMXFORM_DEPTH must be a non-negative integer, got {v:?}")))?,
        ),
        Err(_) => None,
    };
    Ok(SolverOptions {
        occurs_check: e.occurs_check,
        depth_limit: Some(e.depth_limit.or(from_env).unwrap_or(DEFAULT_DEPTH_LIMIT)),
        trace: false,
    })
}

fn numbered(path: &Path, i: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{i}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{i}"),
    };
    path.with_file_name(name)
}

fn transform(a: TransformArgs) -> Outcome {
    let program = load_rules(&a.rules)?;
    let doc = load_doc(&a.input, a.keep_ws)?;
    let solver = Solver::with_options(&program, solver_options(&a.engine)?);
    let opts = TransformOptions {
        traversal: TraversalOptions {
            unmatched_text: match a.default_text {
                DefaultText::Drop => UnmatchedText::Drop,
                DefaultText::Copy => UnmatchedText::Copy,
            },
            max_results: None,
        },
        no_wrap: a.no_wrap,
        all: a.all,
        pretty: a.pretty,
    };
    let report = transform_document(&doc, &solver, &opts).map_err(|e| match e {
        TransformError::NoSolution => Failure::NoSolution,
        TransformError::Solve(s) | TransformError::Template(TemplateError::Solve(s)) => Failure::Internal(s.into()),
        other => input(other),
    })?;
    let targets: Vec<PathBuf> = if a.all {
        (1..=report.outputs.len()).map(|i| numbered(&a.output, i)).collect()
    } else {
        vec![a.output.clone()]
    };
    for (path, text) in targets.iter().zip(&report.outputs) {
        fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Internal)?;
    }
    eprintln!("{report}");
    Ok(())
}

fn query(a: QueryArgs) -> Outcome {
    let program = load_rules(&a.rules)?;
    let rt = parse_query(&a.goal, &program.ops).map_err(input)?;
    let mut goal = rt.term;
    if let Some(path) = &a.input {
        let doc = load_doc(path, false)?;
        let id = rt
            .var_names
            .iter()
            .find(|(n, _)| n == "Doc")
            .map(|(_, id)| *id)
            .unwrap_or(rt.var_count);
        let eq = Term::compound("=", vec![Term::var(id, "Doc"), doc]);
        goal = Term::compound(",", vec![eq, goal]);
    }
    let solver = Solver::with_options(&program, solver_options(&a.engine)?);
    let mut sols = solver.solve(&goal);
    let mut found = 0;
    while found < a.max {
        let s = match sols.next_solution() {
            Ok(Some(s)) => s,
            Ok(None) => break,
            Err(e) => return Err(Failure::Internal(e.into())),
        };
        found += 1;
        let shown: Vec<String> = s
            .bindings
            .iter()
            .filter(|(n, _)| !n.starts_with('_') && !(a.input.is_some() && n == "Doc"))
            .map(|(n, v)| format!("{n}/{}", render_term(v)))
            .collect();
        if shown.is_empty() {
            println!("YES.");
        } else {
            println!("YES. {}", shown.join("  "));
        }
    }
    if found == 0 {
        println!("NO");
        return Err(Failure::NoSolution);
    }
    Ok(())
}

// Child-index path to the first place where the two terms differ.
fn divergence(a: &Term, b: &Term) -> Vec<usize> {
    let mut path = Vec::new();
    let (mut x, mut y) = (a.clone(), b.clone());
    loop {
        let kids = |t: &Term| {
            t.as_compound()
                .filter(|c| &*c.functor == "element" && c.args.len() == 3)
                .and_then(|c| c.args[2].list_items())
        };
        let (Some(kx), Some(ky)) = (kids(&x), kids(&y)) else { return path };
        let Some(i) = (0..kx.len().max(ky.len())).find(|&i| match (kx.get(i), ky.get(i)) {
            (Some(p), Some(q)) => !term_equal(p, q),
            _ => true,
        }) else {
            return path;
        };
        path.push(i);
        match (kx.get(i), ky.get(i)) {
            (Some(p), Some(q)) => (x, y) = (p.clone(), q.clone()),
            _ => return path,
        }
    }
}

fn roundtrip(path: &Path, keep_ws: bool) -> Outcome {
    let first = load_doc(path, keep_ws)?;
    let text = serialize_document(&first).map_err(input)?;
    let opts = ParseOptions { keep_ws };
    let second = parse_document_with(&text, opts, "<serialized>").map_err(|e| Failure::Internal(e.into()))?;
    if term_equal(&first, &second) {
        println!("ok");
        Ok(())
    } else {
        Err(Failure::Internal(anyhow!("roundtrip diverges at path {:?}", divergence(&first, &second))))
    }
}

fn parse_counts(s: &str) -> Result<HalsteadCounts, Failure> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|e| input(anyhow!("--counts {s:?}: {e}")))?;
    match parts[..] {
        [e1, e2, n1, n2] => Ok(HalsteadCounts::new(e1, e2, n1, n2)),
        _ => Err(input(anyhow!("--counts takes four numbers eta1,eta2,N1,N2, got {s:?}"))),
    }
}

fn metrics(a: MetricsArgs) -> Outcome {
    let cfg = match &a.config {
        Some(p) => ClassifyConfig::parse(&read(p)?).map_err(input)?,
        None => ClassifyConfig::default(),
    };
    let (label, report) = match (&a.src, &a.counts) {
        (Some(src), _) => {
            let text = read(src)?;
            let r = measure_source(&text, prelude().ops.clone(), &cfg).map_err(|e| match e {
                SourceMetricsError::Read(e) => input(e),
                SourceMetricsError::Metrics(e) => input(e),
            })?;
            let label = src.file_name().map_or_else(|| src.display().to_string(), |n| n.to_string_lossy().into_owned());
            (label, r)
        }
        (None, Some(c)) => {
            let r = halstead::<f64>(parse_counts(c)?).map_err(|e: MetricsError| input(e))?;
            ("counts".to_string(), r)
        }
        (None, None) => return Err(input(anyhow!("one of --src or --counts is required"))),
    };
    if a.csv {
        print!("{}", report_csv(&[(label, report)]));
    } else {
        println!("{report}");
    }
    Ok(())
}

fn body_goals(t: &Term, out: &mut Vec<Term>) {
    let Some(c) = t.as_compound() else {
        if matches!(t, Term::Atom(_)) {
            out.push(t.clone());
        }
        return;
    };
    match (&*c.functor, c.args.len()) {
        (",", 2) | (";", 2) | ("->", 2) => {
            body_goals(&c.args[0], out);
            body_goals(&c.args[1], out);
        }
        ("\\+", 1) | ("not", 1) | ("call", 1) => body_goals(&c.args[0], out),
        ("findall", 3) => body_goals(&c.args[1], out),
        _ => out.push(t.clone()),
    }
}

fn can_be_node(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        _ => matches!(
            t.functor(),
            Some(("element", 3) | ("text", 1) | ("comment", 1) | ("pi", 1))
        ),
    }
}

fn lint(clauses: &[Clause], full: &Program) -> Vec<String> {
    let mut warnings = Vec::new();
    for c in clauses {
        if let Some(("template", 2)) = c.head.functor() {
            let node = &c.head.as_compound().expect("template/2 head").args[0];
            if !can_be_node(node) {
                warnings.push(format!("template head can never match a node: {}", render_term(&c.head)));
            }
        }
        let mut goals = Vec::new();
        for g in &c.body {
            body_goals(g, &mut goals);
        }
        for g in goals {
            let Some((name, arity)) = g.functor() else { continue };
            let w = format!("unknown predicate {name}/{arity}");
            if !predicate_known(full, name, arity) && !HOOKS.contains(&(name, arity)) && !warnings.contains(&w) {
                warnings.push(w);
            }
        }
    }
    warnings
}

fn check(rules: &str) -> Outcome {
    let full = load_rules(rules)?;
    let own: Vec<Clause> = if rules == PRELUDE_ONLY {
        full.predicates().flat_map(|(_, cs)| cs.iter().cloned()).collect()
    } else {
        let text = read(Path::new(rules))?;
        let user = parse_program_with(&text, prelude().ops.clone()).map_err(input)?;
        user.predicates().flat_map(|(_, cs)| cs.iter().cloned()).collect()
    };
    let warnings = lint(&own, &full);
    for w in &warnings {
        DiagSink::Stderr.warn(w);
    }
    println!("{} clauses, {} warnings", own.len(), warnings.len());
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Transform(a) => transform(a),
        Cmd::Query(a) => query(a),
        Cmd::Roundtrip { input, keep_ws } => roundtrip(&input, keep_ws),
        Cmd::Metrics(a) => metrics(a),
        Cmd::Check { rules } => check(&rules),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::NoSolution => eprintln!("no solution"),
                Failure::Input(e) | Failure::Internal(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}
