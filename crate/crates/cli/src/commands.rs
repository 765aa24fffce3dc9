use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use selfdual::catalog::Catalog;
use selfdual::circulant::{
    build_four_circulant, orbit_representatives, parse_pair_file, write_pair_file, CirculantPair, FourCirculantSearch, SearchConfig,
};
use selfdual::codes::CodeFile;
use selfdual::equivalence::{classify_with, ClassificationReport};
use selfdual::neighbors::{
    neighbor, reaches, survey_from_found, witness, write_descriptors, NeighborDescriptor, NeighborEnumerator,
    SURVEY_BUDGET,
};
use selfdual::reproduce::{reproduce, TableId, TableReport};
use selfdual::wenum::{
    check_shadow_balance, classify_enumerator, min_weight, shadow_distribution_with, solve_shadow_balance,
    weight_distribution_with, BalanceSolution, BalanceVerdict, FamilyParams,
};
use selfdual::{Execution, LinearCode, ParityClass};

use crate::io::{collect_code_files, load_code, load_code_file, parse_list, sidecar, Run};
use crate::Mismatch;

/// Binary self-dual codes: construction, analysis and classification.
#[derive(Parser, Debug)]
#[command(name = "selfdual", version)]
pub struct Cli {
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Self-duality, parity class, minimum weight, distributions and family.
    Analyze(AnalyzeArgs),
    /// Exhaustive four-circulant search.
    Search(SearchArgs),
    /// Survey all self-dual neighbors of a code for high minimum weight.
    Neighbors(NeighborsArgs),
    /// Build one neighbor from the support of `x`.
    Neighbor(NeighborArgs),
    /// Keep codewords with equal entries at two coordinates, then delete both.
    Subtract(SubtractArgs),
    /// Partition codes into permutation-equivalence classes.
    Classify(ClassifyArgs),
    /// Rebuild reference tables from the built-in data and compare.
    Reproduce(ReproduceArgs),
    /// Solve `a0 + a1*t = b0 + b1*t` exactly.
    SolveShadowBalance(BalanceArgs),
}

#[derive(Args, Debug, Serialize)]
struct AnalyzeArgs {
    /// Code file or built-in code name.
    #[arg(long)]
    code: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize, Clone, PartialEq)]
struct SearchArgs {
    #[arg(long)]
    block: usize,
    /// Minimum weight lower bound.
    #[arg(long)]
    dmin: usize,
    /// Minimum weight upper bound.
    #[arg(long)]
    dmax: Option<usize>,
    /// Lower bound on wt(ra) + wt(rb).
    #[arg(long, default_value_t = 0)]
    weight_bound: usize,
    /// Required residue of wt(ra) + wt(rb) modulo 4.
    #[arg(long)]
    congruence: Option<usize>,
    /// Pair file to write; standard output otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Resumable progress file.
    #[arg(long)]
    #[serde(skip)]
    checkpoint: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct NeighborsArgs {
    #[arg(long)]
    code: String,
    /// Keep neighbors with at least this minimum weight.
    #[arg(long)]
    dmin: usize,
    /// Codes (files or names, comma separated) whose class is not new.
    #[arg(long, value_delimiter = ',')]
    known: Vec<String>,
    /// Allow more than the default number of functionals.
    #[arg(long)]
    extended: bool,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Resumable progress file.
    #[arg(long)]
    #[serde(skip)]
    checkpoint: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct NeighborArgs {
    #[arg(long)]
    code: String,
    /// 1-based support of x, comma separated.
    #[arg(long)]
    supp: String,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SubtractArgs {
    #[arg(long)]
    code: String,
    /// Two 1-based coordinates, comma separated.
    #[arg(long)]
    coords: String,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    /// Code files or directories of code files.
    #[arg(long = "in")]
    inputs: Vec<PathBuf>,
    /// Four-circulant pair files, one `ra;rb` per line.
    #[arg(long)]
    pairs: Vec<PathBuf>,
    /// Keep one pair per shift/swap/multiplier orbit before classifying.
    #[arg(long)]
    orbits: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ReproduceArgs {
    /// Table ids (T1, T2, Tnei2, Td10, T4, T5, T6, P1, EQ, P3, P5, C7) or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    table: Vec<String>,
    /// Also run the hour-scale searches.
    #[arg(long)]
    extended: bool,
    /// JSON report file; a text report goes to standard output regardless.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
struct BalanceArgs {
    #[arg(long)]
    a0: i64,
    #[arg(long)]
    a1: i64,
    #[arg(long)]
    b0: i64,
    #[arg(long)]
    b1: i64,
}

pub fn run(cli: Cli) -> Result<()> {
    let threads = match cli.threads {
        Some(0) => return Err(selfdual::Error::Argument("--threads must be positive".into()).into()),
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting thread pool")?;
            n
        }
        None => rayon::current_num_threads(),
    };
    let exec = if threads == 1 { Execution::Sequential } else { Execution::Parallel };
    let ctx = Ctx { threads, exec, catalog: Catalog::builtin()? };
    match cli.command {
        Command::Analyze(a) => analyze(&ctx, a),
        Command::Search(a) => search(&ctx, a),
        Command::Neighbors(a) => neighbors(&ctx, a),
        Command::Neighbor(a) => single_neighbor(&ctx, a),
        Command::Subtract(a) => subtract(&ctx, a),
        Command::Classify(a) => classify(&ctx, a),
        Command::Reproduce(a) => reproduce_tables(&ctx, a),
        Command::SolveShadowBalance(a) => balance(a),
    }
}

struct Ctx {
    threads: usize,
    exec: Execution,
    catalog: Catalog,
}

#[derive(Serialize)]
struct AnalysisReport {
    name: String,
    n: usize,
    k: usize,
    self_dual: bool,
    parity_class: ParityClass,
    min_weight: usize,
    /// `[weight, count]` pairs with nonzero count.
    weight_distribution: Vec<(usize, u64)>,
    shadow_distribution: Option<Vec<(usize, u64)>>,
    family: Option<FamilyParams>,
    shadow_balance: Option<BalanceVerdict>,
}

fn nonzero(counts: &[u64]) -> Vec<(usize, u64)> {
    counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (i, c)).collect()
}

fn analyze(ctx: &Ctx, args: AnalyzeArgs) -> Result<()> {
    let mut run = Run::new("analyze", &args, ctx.threads);
    let input = load_code(&args.code, &ctx.catalog)?;
    run.input(&input);
    let c = &input.code;
    let d = min_weight(c)?;
    let w = weight_distribution_with(c, ctx.exec)?;
    let s = if c.is_singly_even_self_dual() { Some(shadow_distribution_with(c, ctx.exec)?) } else { None };
    let report = AnalysisReport {
        name: input.name.clone(),
        n: c.n(),
        k: c.k(),
        self_dual: c.is_self_dual(),
        parity_class: c.parity_class(),
        min_weight: d,
        weight_distribution: nonzero(w.counts()),
        shadow_distribution: s.as_ref().map(|s| nonzero(s.counts())),
        family: s.as_ref().map(|s| classify_enumerator(&w, s)),
        shadow_balance: s.as_ref().map(|s| check_shadow_balance(&w, s, d)),
    };
    run.emit(args.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    run.finish(args.out.as_deref().map(sidecar).as_deref())
}

#[derive(Serialize, Deserialize)]
struct SearchCheckpoint {
    config: SearchConfig,
    /// First `ra` not yet searched.
    next: u64,
    pairs: Vec<String>,
}

/// `ra` values handled between checkpoint writes.
const SEARCH_SLICE: u64 = 1 << 10;

fn search(ctx: &Ctx, args: SearchArgs) -> Result<()> {
    let mut run = Run::new("search", &args, ctx.threads);
    let config = SearchConfig {
        block: args.block,
        d_min: args.dmin,
        d_max: args.dmax,
        weight_bound: args.weight_bound,
        congruence: args.congruence,
    };
    let search = FourCirculantSearch::new(config.clone())?;
    let mut state = SearchCheckpoint { config: config.clone(), next: 0, pairs: Vec::new() };
    if let Some(path) = args.checkpoint.as_deref().filter(|p| p.exists()) {
        let saved: SearchCheckpoint = serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(|e| selfdual::Error::Parse(format!("checkpoint {}: {e}", path.display())))?;
        if saved.config != config {
            return Err(selfdual::Error::Argument(format!(
                "checkpoint {} belongs to a different search",
                path.display()
            ))
            .into());
        }
        state = saved;
    }
    let total = search.ra_space();
    while state.next < total {
        let end = (state.next + SEARCH_SLICE).min(total);
        let found = search.search_range(state.next..end, ctx.exec);
        state.pairs.extend(found.iter().map(ToString::to_string));
        state.next = end;
        eprintln!("search: {end}/{total} ({:.1}%)", 100.0 * end as f64 / total as f64);
        if let Some(path) = args.checkpoint.as_deref() {
            fs::write(path, serde_json::to_string(&state)?)?;
        }
    }
    let mut pairs: Vec<CirculantPair> = state.pairs.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    pairs.sort();
    run.emit(args.out.as_deref(), &write_pair_file(&pairs))?;
    run.finish(args.out.as_deref().map(sidecar).as_deref())
}

#[derive(Serialize, Deserialize)]
struct SurveyCheckpoint {
    base_digest: String,
    dmin: usize,
    /// First functional index not yet scanned.
    next: u64,
    /// 1-based supports of the extremal neighbors found so far.
    found: Vec<Vec<usize>>,
}

/// Functionals scanned between checkpoint writes.
const SURVEY_SLICE: u64 = 1 << 16;

#[derive(Serialize)]
struct SurveySummary {
    base: String,
    dmin: usize,
    functionals: u64,
    neighbors_scanned: u64,
    extremal_found: usize,
    new_classes: usize,
    new_codes: Vec<String>,
}

fn neighbors(ctx: &Ctx, args: NeighborsArgs) -> Result<()> {
    let mut run = Run::new("neighbors", &args, ctx.threads);
    let base = load_code(&args.code, &ctx.catalog)?;
    run.input(&base);
    let e = NeighborEnumerator::new(&base.code)?;
    let total = e.functional_count();
    if !args.extended && total > SURVEY_BUDGET {
        return Err(selfdual::Error::Budget(format!(
            "{total} functionals exceed the default budget of {SURVEY_BUDGET}; pass --extended"
        ))
        .into());
    }
    let mut known = Vec::new();
    for k in &args.known {
        let kc = load_code(k, &ctx.catalog)?;
        run.input(&kc);
        known.push(kc.code);
    }
    let mut state = SurveyCheckpoint { base_digest: base.digest.clone(), dmin: args.dmin, next: 1, found: Vec::new() };
    if let Some(path) = args.checkpoint.as_deref().filter(|p| p.exists()) {
        let saved: SurveyCheckpoint = serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(|e| selfdual::Error::Parse(format!("checkpoint {}: {e}", path.display())))?;
        if saved.base_digest != state.base_digest || saved.dmin != args.dmin {
            return Err(selfdual::Error::Argument(format!(
                "checkpoint {} belongs to a different survey",
                path.display()
            ))
            .into());
        }
        state = saved;
    }
    while state.next <= total {
        let end = (state.next + SURVEY_SLICE).min(total + 1);
        let hits = e.scan(state.next..end, ctx.exec, |c| reaches(c, args.dmin).unwrap_or(false))?;
        for (_, nb) in hits {
            let x = witness(&base.code, &nb).expect("a neighbor differs from its base");
            state.found.push(x.coords());
        }
        state.next = end;
        eprintln!("neighbors: {}/{total} functionals ({:.1}%)", end - 1, 100.0 * (end - 1) as f64 / total.max(1) as f64);
        if let Some(path) = args.checkpoint.as_deref() {
            fs::write(path, serde_json::to_string(&state)?)?;
        }
    }
    let found: Vec<LinearCode> = state
        .found
        .iter()
        .map(|supp| Ok(neighbor(&base.code, &selfdual::BitVector::from_coords(base.code.n(), supp)?)?))
        .collect::<Result<_>>()?;
    let result = survey_from_found(found, &known, ctx.exec)?;

    let mut descriptors = Vec::new();
    let mut names = Vec::new();
    for (i, code) in result.new_codes().into_iter().enumerate() {
        let name = format!("{}_nb{}", base.name, i + 1);
        let x = witness(&base.code, code).expect("a neighbor differs from its base");
        let mut d = NeighborDescriptor::new(&base.name, &x.coords())?;
        d.name = Some(name.clone());
        descriptors.push(d);
        run.emit(Some(&args.out.join(format!("{name}.json"))), &(CodeFile::from_code(&name, code).to_json() + "\n"))?;
        names.push(name);
    }
    run.emit(Some(&args.out.join("neighbors.jsonl")), &write_descriptors(&descriptors))?;
    let summary = SurveySummary {
        base: base.name.clone(),
        dmin: args.dmin,
        functionals: total,
        neighbors_scanned: 2 * total,
        extremal_found: result.extremal.len(),
        new_classes: result.new_classes.len(),
        new_codes: names,
    };
    let text = serde_json::to_string_pretty(&summary)? + "\n";
    print!("{text}");
    run.emit(Some(&args.out.join("survey.json")), &text)?;
    run.finish(Some(&args.out.join("survey.json.manifest.json")))
}

fn write_code(mut run: Run, name: &str, code: &LinearCode, out: Option<&Path>) -> Result<()> {
    run.emit(out, &(CodeFile::from_code(name, code).to_json() + "\n"))?;
    run.finish(out.map(sidecar).as_deref())
}

fn single_neighbor(ctx: &Ctx, args: NeighborArgs) -> Result<()> {
    let mut run = Run::new("neighbor", &args, ctx.threads);
    let base = load_code(&args.code, &ctx.catalog)?;
    run.input(&base);
    let supp = parse_list(&args.supp)?;
    let d = NeighborDescriptor::new(&base.name, &supp)?;
    let nb = neighbor(&base.code, &d.vector(base.code.n())?)?;
    let name = args.name.clone().unwrap_or_else(|| format!("{}_nb", base.name));
    write_code(run, &name, &nb, args.out.as_deref())
}

fn subtract(ctx: &Ctx, args: SubtractArgs) -> Result<()> {
    let mut run = Run::new("subtract", &args, ctx.threads);
    let base = load_code(&args.code, &ctx.catalog)?;
    run.input(&base);
    let coords = parse_list(&args.coords)?;
    let [i, j] = coords[..] else {
        return Err(selfdual::Error::Argument(format!("expected two coordinates, got {}", coords.len())).into());
    };
    if i == 0 || j == 0 {
        return Err(selfdual::Error::Argument("coordinates are 1-based".into()).into());
    }
    let sub = base.code.subtract_coordinates(i - 1, j - 1)?;
    let name = args.name.clone().unwrap_or_else(|| format!("{}_minus_{i}_{j}", base.name));
    write_code(run, &name, &sub, args.out.as_deref())
}

fn classify(ctx: &Ctx, args: ClassifyArgs) -> Result<()> {
    let mut run = Run::new("classify", &args, ctx.threads);
    let mut names = Vec::new();
    let mut codes = Vec::new();
    for path in collect_code_files(&args.inputs)? {
        let c = load_code_file(&path)?;
        run.input(&c);
        names.push(c.name);
        codes.push(c.code);
    }
    for path in &args.pairs {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        run.input_bytes(&path.display().to_string(), text.as_bytes());
        let mut pairs = parse_pair_file(&text)?;
        if args.orbits {
            pairs = orbit_representatives(&pairs);
        }
        for p in pairs {
            names.push(p.to_string());
            codes.push(build_four_circulant(&p));
        }
    }
    if codes.is_empty() {
        return Err(selfdual::Error::Argument("no codes to classify".into()).into());
    }
    let classes = classify_with(&codes, ctx.exec)?;
    let report = ClassificationReport::new(&names, &classes);
    run.emit(args.out.as_deref(), &(serde_json::to_string(&report)? + "\n"))?;
    eprintln!("classify: {} codes, {} classes", codes.len(), classes.len());
    run.finish(args.out.as_deref().map(sidecar).as_deref())
}

fn reproduce_tables(ctx: &Ctx, args: ReproduceArgs) -> Result<()> {
    let mut run = Run::new("reproduce", &args, ctx.threads);
    run.input_bytes("builtin:tables.json", selfdual::catalog::TABLES_JSON.as_bytes());
    let ids: Vec<TableId> = if args.table.iter().any(|t| t.eq_ignore_ascii_case("all")) {
        TableId::ALL.to_vec()
    } else {
        let ids: Vec<TableId> = args.table.iter().map(|t| t.parse()).collect::<Result<_, _>>()?;
        if let Some(id) = ids.iter().find(|id| id.is_extended() && !args.extended) {
            return Err(selfdual::Error::Budget(format!("table {id} runs for hours; pass --extended")).into());
        }
        ids
    };
    let mut reports: Vec<TableReport> = Vec::new();
    for id in ids {
        let r = reproduce(&ctx.catalog, id, args.extended, ctx.exec)?;
        print!("{r}");
        reports.push(r);
    }
    if let Some(out) = args.out.as_deref() {
        run.emit(Some(out), &(serde_json::to_string_pretty(&reports)? + "\n"))?;
        run.finish(Some(&sidecar(out)))?;
    }
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures().into_iter().map(move |f| format!("{} {}", r.table, f.name)))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Mismatch(format!("mismatched rows: {}", failed.join(", "))).into())
    }
}

fn balance(args: BalanceArgs) -> Result<()> {
    match solve_shadow_balance(args.a0, args.a1, args.b0, args.b1) {
        BalanceSolution::Unique(t) => println!("{t}"),
        BalanceSolution::NoSolution => println!("no solution"),
        BalanceSolution::All => println!("every value"),
    }
    Ok(())
}
