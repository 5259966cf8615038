//! Command dispatch for the `fu-forge` binary.
//!
//! Every subcommand writes its result to `out` and progress or diagnostics
//! to `err`. Exit codes: 0 success or found, 1 not found or a failed
//! check, 2 usage error, 3 budget exceeded.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fu_forge_core::construction::{run_tower_with_progress, verify_trace, ConstructionTrace, SearchParams, StageConstraints};
use fu_forge_core::fu::{enumerate_condensations, fu_set};
use fu_forge_core::meshing::{find_n_witness, gen_base_sequence, meshing_graph, minmax_witness};
use fu_forge_core::partition::{
    classify_canonical, frs_number_with_progress, pair_types, pairs_homogeneity_check, splitting_points, FrsOutcome,
    FrsQuery, LevelVerdict, PairColoring, PairVerdict,
};
use fu_forge_core::{Color, DisjointSeq, Error, FSet, Universe, DEFAULT_UNIVERSE};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "fu-forge", version, about = "Exact combinatorics on finite unions of disjoint sets")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Exclusive upper bound on set members.
    #[arg(long, global = true, default_value_t = DEFAULT_UNIVERSE, value_parser = clap::value_parser!(u32).range(2..))]
    pub universe: u32,
    /// Search budget in nodes.
    #[arg(long, global = true, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Worker threads for sharded searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Leading entries to exempt (construct) or skip (enum-cond, witness).
    #[arg(long, global = true)]
    pub drop_prefix: Option<usize>,
    /// Largest generator count tried by `frs`.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_m: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the nearly ordered base sequence with the given number of blocks.
    GenBase {
        #[arg(short = 'b', long)]
        blocks: usize,
    },
    /// List all length-n condensations of a sequence.
    EnumCond {
        /// Sequence as inline JSON or a file path.
        seq: String,
        #[arg(short)]
        n: usize,
    },
    /// Search for an n-witness over a base sequence.
    Witness {
        #[command(flatten)]
        base: BaseArg,
        #[arg(short)]
        n: usize,
        /// Restrict to FU of this sequence instead of FU(base).
        #[arg(long)]
        within: Option<String>,
        /// Allowed minima (JSON list); switches to the min/max construction.
        #[arg(long, requires = "maxes")]
        mins: Option<String>,
        /// Allowed maxima (JSON list).
        #[arg(long, requires = "mins")]
        maxes: Option<String>,
    },
    /// Least m such that every c-coloring of m generators has a
    /// monochromatic length-n condensation.
    Frs {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        c: u32,
    },
    /// Splitting points of FU(t) and the parity identity.
    PiAudit {
        /// Sequence to audit; omit with --random.
        seq: Option<String>,
        /// Audit this many seeded random sequences instead.
        #[arg(long, conflicts_with = "seq")]
        random: Option<usize>,
        /// Longest random sequence.
        #[arg(long, default_value_t = 7)]
        len: usize,
        /// Random sequences draw members from 0..values.
        #[arg(long, default_value_t = 14)]
        values: u32,
    },
    /// Homogeneity of a pair coloring, or the pair types of FU(t).
    PairsCheck {
        /// Domain as a JSON list of sets.
        #[arg(long, required_unless_present = "types")]
        domain: Option<String>,
        /// Pair coloring as JSON.
        #[arg(long, conflicts_with = "rule")]
        coloring: Option<String>,
        /// Built-in pair coloring.
        #[arg(long)]
        rule: Option<PairRule>,
        /// Report whether FU of this sequence has ordered and meshed pairs.
        #[arg(long, conflicts_with = "domain")]
        types: Option<String>,
    },
    /// Canonical class of a function on a finite set of sets.
    Canonical {
        /// JSON list of [set, value] pairs.
        #[arg(long, conflicts_with = "rule")]
        values: Option<String>,
        /// Built-in function, evaluated on --domain.
        #[arg(long, requires = "domain")]
        rule: Option<SetRule>,
        /// JSON list of sets; defaults to the sets in --values.
        #[arg(long)]
        domain: Option<String>,
    },
    /// Build a tower of refined condensations.
    Construct {
        #[command(flatten)]
        base: BaseArg,
        /// JSON list of stage constraints.
        #[arg(long)]
        stages: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Length of every stage sequence.
        #[arg(long, default_value_t = 8)]
        len: usize,
        /// Most generators merged into one entry.
        #[arg(long, default_value_t = 2)]
        max_union: usize,
    },
    /// Re-check every fact recorded in a construction trace.
    Verify { trace: String },
    /// Meshing graph in DOT format.
    GraphDot {
        seq: String,
        /// Base sequence; defaults to the sequence itself.
        #[arg(long)]
        base: Option<String>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct BaseArg {
    /// Base sequence as inline JSON or a file path.
    #[arg(long)]
    base: Option<String>,
    /// Use the generated base sequence with this many blocks.
    #[arg(long)]
    blocks: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairRule {
    /// 1 iff min(t) = max(s) + 1.
    Adjacent,
    /// (min(t) - max(s)) mod 2.
    GapParity,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetRule {
    Min,
    Max,
    MinMax,
    Size,
    Constant,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<i32, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let (code, msg) = match e {
                CliError::Usage(m) => (EXIT_USAGE, m),
                CliError::Io(e) => (EXIT_USAGE, e.to_string()),
                CliError::Core(e @ Error::BudgetExceeded(_)) => (EXIT_BUDGET, e.to_string()),
                CliError::Core(e @ Error::NotFound) => (EXIT_NOT_FOUND, e.to_string()),
                CliError::Core(e) => (EXIT_USAGE, e.to_string()),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let cfg = &cli.config;
    let universe = Universe::new(cfg.universe)?;
    match &cli.command {
        Command::GenBase { blocks } => {
            let s = gen_base_sequence(*blocks, universe)?;
            emit(out, cfg.json, &s, &s.to_string())?;
            Ok(EXIT_OK)
        }
        Command::EnumCond { seq, n } => {
            let x = load_seq(seq, universe)?;
            let x = x.suffix(cfg.drop_prefix.unwrap_or(0));
            let all = enumerate_condensations(&x, *n, cfg.budget)?;
            writeln!(err, "{} condensations of length {n}", all.len())?;
            if cfg.json {
                writeln!(out, "{}", to_json(&all))?;
            } else {
                for t in &all {
                    writeln!(out, "{t}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Witness {
            base,
            n,
            within,
            mins,
            maxes,
        } => {
            let s = base.load(universe)?;
            let found = match (mins, maxes) {
                (Some(a), Some(b)) => {
                    let a: BTreeSet<u32> = load(a)?;
                    let b: BTreeSet<u32> = load(b)?;
                    minmax_witness(&a, &b, &s, *n)?
                }
                _ => {
                    let domain = match within {
                        Some(t) => load_seq(t, universe)?,
                        None => s.clone(),
                    };
                    let domain = domain.suffix(cfg.drop_prefix.unwrap_or(0));
                    find_n_witness(&fu_set(&domain, 0)?, &s, *n, cfg.budget)?
                }
            };
            match found {
                Some(w) => {
                    let complete = meshing_graph(&w, &s)?.is_complete();
                    if cfg.json {
                        writeln!(out, "{}", json!({ "witness": w, "complete": complete }))?;
                    } else {
                        writeln!(out, "{w}")?;
                    }
                    Ok(EXIT_OK)
                }
                None => {
                    if cfg.json {
                        writeln!(out, "{}", json!({ "witness": null }))?;
                    } else {
                        writeln!(out, "not found")?;
                    }
                    Ok(EXIT_NOT_FOUND)
                }
            }
        }
        Command::Frs { n, c } => frs(cfg, *n, *c, out, err),
        Command::PiAudit {
            seq,
            random,
            len,
            values,
        } => match (seq, random) {
            (Some(t), _) => pi_audit_one(cfg, &load_seq(t, universe)?, out),
            (None, Some(k)) => pi_audit_random(cfg, *k, *len, *values, out, err),
            (None, None) => Err(CliError::Usage("pi-audit needs a sequence or --random".into())),
        },
        Command::PairsCheck {
            domain,
            coloring,
            rule,
            types,
        } => {
            if let Some(t) = types {
                let pt = pair_types(&load_seq(t, universe)?, cfg.budget)?;
                let human = format!("ordered: {}, meshed: {}", pt.has_ordered, pt.has_meshed);
                emit(out, cfg.json, &pt, &human)?;
                return Ok(EXIT_OK);
            }
            let a: BTreeSet<FSet> = load(domain.as_deref().unwrap_or("[]"))?;
            let col = match (coloring, rule) {
                (Some(c), _) => load::<PairColoring>(c)?,
                (None, Some(r)) => PairColoring::from_fn(&a, 2, |s, t| r.color(s, t))?,
                (None, None) => return Err(CliError::Usage("pairs-check needs --coloring or --rule".into())),
            };
            match pairs_homogeneity_check(&a, &col)? {
                PairVerdict::Homogeneous(c) => {
                    let human = match c {
                        Some(c) => format!("homogeneous, color {c}"),
                        None => "homogeneous, no ordered pairs".to_string(),
                    };
                    emit(out, cfg.json, &json!({ "homogeneous": true, "color": c }), &human)?;
                    Ok(EXIT_OK)
                }
                PairVerdict::Mixed { first, other } => {
                    let human = format!(
                        "not homogeneous: ({}, {}) and ({}, {})",
                        first.0, first.1, other.0, other.1
                    );
                    emit(
                        out,
                        cfg.json,
                        &json!({ "homogeneous": false, "witness": [first, other] }),
                        &human,
                    )?;
                    Ok(EXIT_NOT_FOUND)
                }
            }
        }
        Command::Canonical { values, rule, domain } => {
            let fvals: BTreeMap<FSet, u64> = match (values, rule) {
                (Some(v), _) => load::<Vec<(FSet, u64)>>(v)?.into_iter().collect(),
                (None, Some(r)) => load::<BTreeSet<FSet>>(domain.as_deref().unwrap_or("[]"))?
                    .into_iter()
                    .map(|s| {
                        let v = r.value(&s);
                        (s, v)
                    })
                    .collect(),
                (None, None) => return Err(CliError::Usage("canonical needs --values or --rule".into())),
            };
            let a: BTreeSet<FSet> = match domain {
                Some(d) => load(d)?,
                None => fvals.keys().cloned().collect(),
            };
            let class = classify_canonical(&fvals, &a)?;
            let name = serde_json::to_value(class).map_err(|e| CliError::Usage(e.to_string()))?;
            let human = name.as_str().unwrap_or_default().to_string();
            emit(out, cfg.json, &json!({ "class": name }), &human)?;
            Ok(EXIT_OK)
        }
        Command::Construct {
            base,
            stages,
            out: path,
            len,
            max_union,
        } => {
            let s = base.load(universe)?;
            let mut stages: Vec<StageConstraints> = load(stages)?;
            if let Some(d) = cfg.drop_prefix {
                stages.iter_mut().for_each(|st| st.drop_budget = d);
            }
            let params = SearchParams {
                target_len: *len,
                budget: cfg.budget,
                max_union: *max_union,
            };
            let result = run_tower_with_progress(&s, &stages, &params, |i, rec| {
                let _ = writeln!(err, "stage {i}: {} (drop {})", rec.seq, rec.audit.drop);
            });
            let (trace, code) = match result {
                Ok(trace) => (trace, EXIT_OK),
                Err(f) => {
                    writeln!(err, "error: {f}")?;
                    let code = match f.error {
                        Error::BudgetExceeded(_) => EXIT_BUDGET,
                        Error::NotFound => EXIT_NOT_FOUND,
                        _ => EXIT_USAGE,
                    };
                    (f.partial, code)
                }
            };
            write_trace(&trace, path.as_ref(), cfg.json, out)?;
            Ok(code)
        }
        Command::Verify { trace } => {
            let trace: ConstructionTrace = load(trace)?;
            let report = verify_trace(&trace);
            if cfg.json {
                writeln!(out, "{}", to_json(&report))?;
            } else {
                for f in &report.facts {
                    if f.passed {
                        writeln!(out, "ok   {}", f.name)?;
                    } else {
                        writeln!(out, "FAIL {}: {}", f.name, f.detail)?;
                    }
                }
            }
            let failed: Vec<&str> = report.failures().map(|f| f.name.as_str()).collect();
            if failed.is_empty() {
                writeln!(err, "all {} facts pass", report.facts.len())?;
                Ok(EXIT_OK)
            } else {
                writeln!(err, "failed: {}", failed.join(", "))?;
                Ok(EXIT_NOT_FOUND)
            }
        }
        Command::GraphDot { seq, base } => {
            let t = load_seq(seq, universe)?;
            let s = match base {
                Some(b) => load_seq(b, universe)?,
                None => t.clone(),
            };
            let g = meshing_graph(&t, &s)?;
            if cfg.json {
                let edges: Vec<&(usize, usize)> = g.edges().iter().collect();
                writeln!(
                    out,
                    "{}",
                    json!({ "vertices": g.vertices(), "edges": edges, "complete": g.is_complete() })
                )?;
            } else {
                write!(out, "{}", g.to_dot())?;
            }
            Ok(EXIT_OK)
        }
    }
}

impl BaseArg {
    fn load(&self, universe: Universe) -> Result<DisjointSeq, CliError> {
        match (&self.base, self.blocks) {
            (Some(b), _) => load_seq(b, universe),
            (None, Some(k)) => Ok(gen_base_sequence(k, universe)?),
            (None, None) => Err(CliError::Usage("need --base or --blocks".into())),
        }
    }
}

impl PairRule {
    fn color(self, s: &FSet, t: &FSet) -> Color {
        match self {
            PairRule::Adjacent => (t.min_elem() == s.max_elem() + 1) as Color,
            PairRule::GapParity => (t.min_elem() - s.max_elem()) % 2,
        }
    }
}

impl SetRule {
    fn value(self, s: &FSet) -> u64 {
        match self {
            SetRule::Min => s.min_elem() as u64,
            SetRule::Max => s.max_elem() as u64,
            SetRule::MinMax => ((s.min_elem() as u64) << 32) | s.max_elem() as u64,
            SetRule::Size => s.len() as u64,
            SetRule::Constant => 0,
        }
    }
}

/// Inline JSON when the argument starts like JSON, otherwise a file path.
fn load<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with(['[', '{']) || trimmed.parse::<f64>().is_ok() {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{arg}: {e}")))
}

fn load_seq(arg: &str, universe: Universe) -> Result<DisjointSeq, CliError> {
    let s: DisjointSeq = load(arg)?;
    for e in &s {
        universe.check(e.max_elem())?;
    }
    Ok(s)
}

fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("serialisable")
}

fn emit<T: Serialize + ?Sized>(out: &mut dyn Write, json: bool, v: &T, human: &str) -> io::Result<()> {
    if json {
        writeln!(out, "{}", to_json(v))
    } else {
        writeln!(out, "{human}")
    }
}

fn write_trace(trace: &ConstructionTrace, path: Option<&PathBuf>, json: bool, out: &mut dyn Write) -> io::Result<()> {
    match path {
        Some(p) => {
            fs::write(p, to_json(trace) + "\n")?;
            if json {
                writeln!(out, "{}", json!({ "stages": trace.stages.len(), "out": p }))
            } else {
                for (i, st) in trace.stages.iter().enumerate() {
                    writeln!(out, "stage {i}: {} (drop {})", st.seq, st.audit.drop)?;
                }
                Ok(())
            }
        }
        None => writeln!(out, "{}", to_json(trace)),
    }
}

fn frs(cfg: &RunConfig, n: usize, c: u32, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let query = FrsQuery {
        n,
        colors: c,
        max_m: cfg.max_m,
        budget: cfg.budget,
        jobs: cfg.jobs as usize,
    };
    let outcome = frs_number_with_progress(&query, |r| {
        let verdict = match r.verdict {
            LevelVerdict::AllPass => "all colorings pass",
            LevelVerdict::Refuted(_) => "refuted",
            LevelVerdict::BudgetExceeded => "budget exceeded",
        };
        let _ = writeln!(err, "m = {}: {verdict} ({} nodes)", r.m, r.nodes);
    })?;
    let refs_json = |refs: &[fu_forge_core::partition::Refutation]| {
        refs.iter()
            .map(|r| json!({ "m": r.m, "coloring": r.coloring }))
            .collect::<Vec<_>>()
    };
    let (value, human, code) = match &outcome {
        FrsOutcome::Found { m, refutations } => (
            json!({ "n": n, "c": c, "outcome": "found", "m": m, "refutations": refs_json(refutations) }),
            m.to_string(),
            EXIT_OK,
        ),
        FrsOutcome::Exhausted { refutations } => (
            json!({ "n": n, "c": c, "outcome": "exhausted", "max_m": cfg.max_m, "refutations": refs_json(refutations) }),
            format!("> {}", cfg.max_m),
            EXIT_NOT_FOUND,
        ),
        FrsOutcome::BudgetExceeded {
            stalled_at,
            lower_bound,
            refutations,
        } => (
            json!({
                "n": n, "c": c, "outcome": "budget_exceeded", "stalled_at": stalled_at,
                "lower_bound": lower_bound, "refutations": refs_json(refutations)
            }),
            format!("> {lower_bound} (budget exceeded at m = {stalled_at})"),
            EXIT_BUDGET,
        ),
    };
    emit(out, cfg.json, &value, &human)?;
    Ok(code)
}

#[derive(Serialize)]
struct ParityTally {
    pairs: u64,
    violations: Vec<(FSet, FSet)>,
}

/// Checks `π(x ∪ z) = π(x) + π(z) + 1` for disjoint `x < z` in FU(t) with
/// some `t_k` strictly between them.
fn parity_tally(t: &DisjointSeq, pis: &[usize], table: &[FSet]) -> ParityTally {
    let mut tally = ParityTally {
        pairs: 0,
        violations: Vec::new(),
    };
    for a in 1..=table.len() {
        for b in 1..=table.len() {
            let (x, z) = (&table[a - 1], &table[b - 1]);
            if a & b != 0 || !x.precedes(z) || !t.iter().any(|tk| x.precedes(tk) && tk.precedes(z)) {
                continue;
            }
            tally.pairs += 1;
            if pis[(a | b) - 1] != pis[a - 1] + pis[b - 1] + 1 {
                tally.violations.push((x.clone(), z.clone()));
            }
        }
    }
    tally
}

fn pi_table(t: &DisjointSeq) -> Result<(Vec<FSet>, Vec<BTreeSet<u32>>), CliError> {
    let table = t.fu_table()?;
    let points = table
        .iter()
        .map(|x| splitting_points(x, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((table, points))
}

fn pi_audit_one(cfg: &RunConfig, t: &DisjointSeq, out: &mut dyn Write) -> CliResult {
    let (table, points) = pi_table(t)?;
    let pis: Vec<usize> = points.iter().map(BTreeSet::len).collect();
    let tally = parity_tally(t, &pis, &table);
    let mut rows: Vec<(&FSet, &BTreeSet<u32>)> = table.iter().zip(&points).collect();
    rows.sort();
    if cfg.json {
        let elements: Vec<_> = rows
            .iter()
            .map(|(x, p)| json!({ "x": x, "points": p, "pi": p.len() }))
            .collect();
        writeln!(out, "{}", json!({ "elements": elements, "parity": tally }))?;
    } else {
        for (x, p) in &rows {
            writeln!(out, "{x} pi={} points={:?}", p.len(), p)?;
        }
        writeln!(
            out,
            "parity identity: {} pairs checked, {} violations",
            tally.pairs,
            tally.violations.len()
        )?;
    }
    Ok(if tally.violations.is_empty() { EXIT_OK } else { EXIT_NOT_FOUND })
}

/// A random disjoint sequence of length `1..=max_len` over `0..values`.
fn random_seq(rng: &mut ChaCha8Rng, max_len: usize, values: u32) -> DisjointSeq {
    let len = rng.random_range(1..=max_len);
    let mut pool: Vec<u32> = (0..values).collect();
    pool.shuffle(rng);
    let mut parts = vec![Vec::new(); len];
    for (k, v) in pool.into_iter().enumerate() {
        if k < len {
            parts[k].push(v);
        } else if rng.random_bool(0.5) {
            parts[rng.random_range(0..len)].push(v);
        }
    }
    DisjointSeq::new(parts.into_iter().map(|p| FSet::new(p).expect("nonempty")).collect()).expect("disjoint")
}

fn pi_audit_random(
    cfg: &RunConfig,
    count: usize,
    max_len: usize,
    values: u32,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    if max_len == 0 || values < max_len as u32 || values > cfg.universe {
        return Err(CliError::Usage(format!(
            "need 1 ≤ len ≤ values ≤ universe, got len {max_len}, values {values}"
        )));
    }
    writeln!(err, "seed: {}", cfg.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pairs = 0u64;
    let mut violations = Vec::new();
    for _ in 0..count {
        let t = random_seq(&mut rng, max_len, values);
        let (table, points) = pi_table(&t)?;
        let pis: Vec<usize> = points.iter().map(BTreeSet::len).collect();
        let tally = parity_tally(&t, &pis, &table);
        pairs += tally.pairs;
        violations.extend(tally.violations.into_iter().map(|v| (t.clone(), v)));
    }
    let value = json!({ "seed": cfg.seed, "sequences": count, "pairs": pairs, "violations": violations });
    let human = format!(
        "seed {}: {count} sequences, {pairs} pairs checked, {} violations",
        cfg.seed,
        violations.len()
    );
    emit(out, cfg.json, &value, &human)?;
    Ok(if violations.is_empty() { EXIT_OK } else { EXIT_NOT_FOUND })
}
