use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rootfree::coconvex::{enumerate_biconvex, exp_multiset, is_coconvex, is_lower_order_ideal, DEFAULT_ENUM_BUDGET};
use rootfree::mask::{bits, from_hex, to_hex, Mask};
use rootfree::patterns::{
    check_lk, check_tk, find_minimal_patterns_with, CheckReport, PatternClass, PatternDb, Status,
};
use rootfree::peterson::{build_graph, translate, translate_to_ideal, DEFAULT_GRAPH_RANK};
use rootfree::rootsys::Labeling;
use rootfree::weyl::{inversion_set, word_from_inversion_set};
use rootfree::{Error, FreenessVerdict, RootSystem, WeylWord};

/// Freeness of hyperplane arrangements cut out by sets of positive roots.
///
/// Root systems are written as Dynkin types joined by `x`, e.g. `A3`,
/// `B4`, `A1xB2`. Subsets are given as a word (`w: 2 1 3 2`, the inversion
/// set of that element), a hex mask over the root order shown by `roots`
/// (`0x2d`), a list of coefficient vectors (`[1,0,0] [0,1,1]`), or `all`.
///
/// Exit status: 0 success, 1 a check failed, 2 usage error, 3 freeness
/// could not be decided.
#[derive(Parser, Debug)]
#[command(name = "rootfree", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// `full` allows the slow searches (F4, D5 and up) and reports progress
    /// on stderr.
    #[arg(long, value_enum, default_value_t = Tier::Fast, global = true)]
    tier: Tier,

    /// Worker threads for the pattern search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory for cached minimal-pattern databases.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Simple-root numbering. `native` (alias `paper`) puts the double bond
    /// of B_n and C_n between nodes 1 and 2 (C_n: α_1 = 2e_1); `bourbaki`
    /// puts it between n-1 and n. All other types agree.
    #[arg(long, default_value = "native", global = true)]
    labeling: Labeling,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Tier {
    Fast,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the positive roots in index order with their heights.
    Roots { system: String },
    /// Decide freeness of the arrangement of a subset.
    Free {
        system: String,
        #[arg(num_args = 0..)]
        subset: Vec<String>,
        /// Keep the zero coexponents that pad to the ambient dimension.
        #[arg(long)]
        padded: bool,
    },
    /// Peterson translation of a coconvex subset.
    Translate {
        system: String,
        #[arg(num_args = 0..)]
        subset: Vec<String>,
        /// Translate by this positive root, e.g. `[1,1,0]`.
        #[arg(long, conflicts_with = "to_ideal")]
        root: Option<String>,
        /// Follow the canonical path down to a lower order ideal.
        #[arg(long)]
        to_ideal: bool,
    },
    /// The translation graph on coconvex subsets.
    Graph {
        system: String,
        /// Keep only the edges that pass the freeness-preservation test.
        #[arg(long)]
        filtered: bool,
    },
    /// Search for minimal non-free patterns.
    Patterns {
        system: String,
        #[arg(long, default_value = "coconvex")]
        class: PatternClass,
    },
    /// Check a local-to-global freeness property: `L` over all coconvex
    /// sets, `T` over terminal vertices of the filtered graph.
    Verify {
        check: CheckKind,
        k: usize,
        system: String,
    },
    /// Which lower order ideals are reachable by translation from an
    /// inversion set.
    Reach { system: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "T", alias = "t")]
    T,
}

enum Failure {
    Usage(String),
    Ambiguous(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Ambiguous(_) => Failure::Ambiguous(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Ambiguous(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let sys = |spec: &str| RootSystem::parse_with(spec, cli.labeling);
    match &cli.command {
        Command::Roots { system } => roots(cli, &sys(system)?),
        Command::Free { system, subset, padded } => {
            let r = sys(system)?;
            let s = parse_subset(&r, &subset.join(" "))?;
            free(cli, &r, s, *padded)
        }
        Command::Translate { system, subset, root, to_ideal } => {
            let r = sys(system)?;
            let s = parse_subset(&r, &subset.join(" "))?;
            match (root, to_ideal) {
                (Some(a), _) => {
                    let a = r.parse_roots(a)?;
                    let mut it = bits(a);
                    let (Some(a), None) = (it.next(), it.next()) else {
                        return Err(Failure::Usage("--root takes exactly one root".into()));
                    };
                    translate_one(cli, &r, s, a)
                }
                (None, true) => to_ideal_cmd(cli, &r, s),
                (None, false) => Err(Failure::Usage("give --root or --to-ideal".into())),
            }
        }
        Command::Graph { system, filtered } => graph(cli, &sys(system)?, *filtered),
        Command::Patterns { system, class } => patterns(cli, &sys(system)?, *class),
        Command::Verify { check, k, system } => verify(cli, &sys(system)?, *check, *k),
        Command::Reach { system } => reach(cli, &sys(system)?),
    }
}

fn parse_subset(sys: &RootSystem, text: &str) -> Result<Mask, Failure> {
    let t = text.trim();
    if let Some(w) = t.strip_prefix("w:") {
        let w: WeylWord = w.parse()?;
        return Ok(inversion_set(sys, &w)?);
    }
    if t.eq_ignore_ascii_case("all") {
        return Ok(sys.full_mask());
    }
    if t.contains('[') {
        return Ok(sys.parse_roots(t)?);
    }
    let m = from_hex(t).ok_or_else(|| Failure::Usage(format!("cannot read subset `{t}`")))?;
    if m & !sys.full_mask() != 0 {
        return Err(Failure::Usage(format!("mask {t} has bits beyond the {} positive roots", sys.num_positive())));
    }
    Ok(m)
}

fn roots_json(sys: &RootSystem, s: Mask) -> Value {
    Value::Array(bits(s).map(|i| json!(sys.root(i).0)).collect())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("json values serialize"));
}

fn no_dot(cli: &Cli) -> Result<(), Failure> {
    if cli.format == Format::Dot {
        return Err(Failure::Usage("dot output is only available for `graph`".into()));
    }
    Ok(())
}

/// Searches beyond this many positive roots need `--tier full`.
const FAST_TIER_ROOTS: usize = 16;

fn require_tier(cli: &Cli, sys: &RootSystem) -> Result<(), Failure> {
    if sys.num_positive() > FAST_TIER_ROOTS && cli.tier == Tier::Fast {
        return Err(Failure::Usage(format!(
            "{} has {} positive roots; rerun with --tier full",
            sys.name(),
            sys.num_positive()
        )));
    }
    Ok(())
}

fn roots(cli: &Cli, sys: &RootSystem) -> Outcome {
    no_dot(cli)?;
    if cli.format == Format::Json {
        let list: Vec<Value> = (0..sys.num_positive())
            .map(|i| json!({"index": i, "root": sys.root(i).0, "height": sys.height_of(i), "long": sys.is_long(i)}))
            .collect();
        print_json(&json!({"system": sys.name(), "roots": list}));
    } else {
        for i in 0..sys.num_positive() {
            println!("{i:>3}  {}  height {}", sys.root(i), sys.height_of(i));
        }
    }
    Ok(true)
}

fn verdict_text(v: &FreenessVerdict, padded: bool) -> String {
    match (v, padded) {
        (FreenessVerdict::Free(m), true) => {
            let m: Vec<String> = m.iter().map(u32::to_string).collect();
            format!("free {{{}}}", m.join(","))
        }
        _ => v.to_string(),
    }
}

fn free(cli: &Cli, sys: &RootSystem, s: Mask, padded: bool) -> Outcome {
    no_dot(cli)?;
    let v = sys.engine().verdict(s);
    let q = sys.engine().poincare(0, s);
    if cli.format == Format::Json {
        let mut verdict = serde_json::to_value(&v).expect("verdicts serialize");
        if !padded {
            verdict["coexponents"] = json!(v.coexponents().unwrap_or_default());
        }
        print_json(&json!({
            "system": sys.name(),
            "mask": to_hex(s),
            "subset": roots_json(sys, s),
            "verdict": verdict,
            "poincare": q.coeffs(),
        }));
    } else {
        println!("{}", verdict_text(&v, padded));
        println!("Q(t) = {q}");
    }
    if v.is_ambiguous() {
        return Err(Failure::Ambiguous(format!("freeness of {} is not decided", sys.format_mask(s))));
    }
    Ok(true)
}

fn translate_one(cli: &Cli, sys: &RootSystem, s: Mask, a: usize) -> Outcome {
    no_dot(cli)?;
    let t = translate(sys, s, a);
    if cli.format == Format::Json {
        print_json(&json!({
            "system": sys.name(),
            "root": sys.root(a).0,
            "from": roots_json(sys, s),
            "to": roots_json(sys, t),
            "mask": to_hex(t),
        }));
    } else {
        println!("{}", sys.format_mask(t));
    }
    Ok(true)
}

fn to_ideal_cmd(cli: &Cli, sys: &RootSystem, s: Mask) -> Outcome {
    no_dot(cli)?;
    let (ideal, path) = translate_to_ideal(sys, s)?;
    let exps = exp_multiset(sys, ideal)?;
    if cli.format == Format::Json {
        let steps: Vec<Value> =
            path.iter().map(|&(t, a)| json!({"from": roots_json(sys, t), "root": sys.root(a).0})).collect();
        print_json(&json!({
            "system": sys.name(),
            "path": steps,
            "ideal": roots_json(sys, ideal),
            "exponents": exps,
        }));
    } else {
        for (t, a) in &path {
            println!("{}  --{}-->", sys.format_mask(*t), sys.root(*a));
        }
        println!("{}", sys.format_mask(ideal));
        let e: Vec<String> = exps.iter().filter(|&&m| m > 0).map(u32::to_string).collect();
        println!("Exp = {{{}}}", e.join(","));
    }
    Ok(true)
}

fn graph(cli: &Cli, sys: &RootSystem, filtered: bool) -> Outcome {
    let g = build_graph(sys, filtered, DEFAULT_GRAPH_RANK)?;
    match cli.format {
        Format::Dot => print!("{}", g.to_dot(sys)),
        Format::Json => print_json(&g.to_json(sys)),
        Format::Text => {
            let terminal = g.terminal();
            println!("{} vertices, {} edges, {} terminal", g.vertices.len(), g.edges.len(), terminal.len());
            for t in terminal {
                println!("terminal {}", sys.format_mask(t));
            }
        }
    }
    Ok(true)
}

fn patterns(cli: &Cli, sys: &RootSystem, class: PatternClass) -> Outcome {
    no_dot(cli)?;
    require_tier(cli, sys)?;
    if let Some(dir) = &cli.cache {
        if sys.num_components() != 1 {
            return Err(Failure::Usage("the pattern cache holds irreducible systems only".into()));
        }
        let db = PatternDb::load_or_build(dir, &[sys.name().as_str()], class)?;
        let found = db.patterns_of(&sys.name());
        return report_patterns(cli, sys, class, &found, None);
    }
    let verbose = cli.tier == Tier::Full;
    let rep = find_minimal_patterns_with(sys, class, DEFAULT_ENUM_BUDGET, |done, total| {
        if verbose {
            eprintln!("{}: {done}/{total} subsets classified", sys.name());
        }
    })?;
    if rep.count(Status::Ambiguous) > 0 {
        report_patterns(cli, sys, class, &rep.patterns, Some(&rep.counts))?;
        return Err(Failure::Ambiguous(format!("{} subsets are AMBIGUOUS", rep.count(Status::Ambiguous))));
    }
    report_patterns(cli, sys, class, &rep.patterns, Some(&rep.counts))
}

fn report_patterns(
    cli: &Cli,
    sys: &RootSystem,
    class: PatternClass,
    found: &[Mask],
    counts: Option<&std::collections::BTreeMap<Status, usize>>,
) -> Outcome {
    let word = |s: Mask| match class {
        PatternClass::Biconvex => word_from_inversion_set(sys, s).ok(),
        PatternClass::Coconvex => None,
    };
    if cli.format == Format::Json {
        let list: Vec<Value> = found
            .iter()
            .map(|&s| {
                let mut v = json!({"mask": to_hex(s), "roots": roots_json(sys, s)});
                if let Some(w) = word(s) {
                    v["word"] = json!(w.to_string());
                }
                v
            })
            .collect();
        let counts: Option<Value> =
            counts.map(|c| c.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into());
        print_json(&json!({"system": sys.name(), "class": class.name(), "counts": counts, "patterns": list}));
    } else {
        println!("{} {} minimal patterns: {}", sys.name(), class.name(), found.len());
        if let Some(c) = counts {
            let parts: Vec<String> = c.iter().map(|(k, v)| format!("{k} {v}")).collect();
            println!("{}", parts.join(", "));
        }
        for &s in found {
            match word(s) {
                Some(w) => println!("{}  w = {w}", sys.format_mask(s)),
                None => println!("{}", sys.format_mask(s)),
            }
        }
    }
    Ok(true)
}

fn verify(cli: &Cli, sys: &RootSystem, check: CheckKind, k: usize) -> Outcome {
    no_dot(cli)?;
    require_tier(cli, sys)?;
    let name = match check {
        CheckKind::L => "L",
        CheckKind::T => "T",
    };
    let rep: CheckReport = match check {
        CheckKind::L => check_lk(sys, k)?,
        CheckKind::T => check_tk(sys, k)?,
    };
    if cli.format == Format::Json {
        print_json(&json!({
            "check": format!("{name}_{k}"),
            "system": sys.name(),
            "holds": rep.holds,
            "checked": rep.checked,
            "counterexample": rep.counterexample.map(|s| roots_json(sys, s)),
        }));
    } else {
        let verdict = if rep.holds { "holds" } else { "fails" };
        println!("{name}_{k} {verdict} for {} ({} sets checked)", sys.name(), rep.checked);
        if let Some(s) = rep.counterexample {
            println!("counterexample {}", sys.format_mask(s));
            println!("mask {}", to_hex(s));
        }
    }
    Ok(rep.holds)
}

fn reach(cli: &Cli, sys: &RootSystem) -> Outcome {
    no_dot(cli)?;
    let g = build_graph(sys, false, DEFAULT_GRAPH_RANK)?;
    let mut hit = vec![false; g.vertices.len()];
    for s in enumerate_biconvex(sys, DEFAULT_ENUM_BUDGET)? {
        let i = g.index_of(s).expect("inversion sets are coconvex");
        for j in g.reachable(i) {
            hit[j] = true;
        }
    }
    let ideals: Vec<(usize, Mask)> =
        g.vertices.iter().copied().enumerate().filter(|&(_, s)| is_lower_order_ideal(sys, s)).collect();
    debug_assert!(ideals.iter().all(|&(_, s)| is_coconvex(sys, s)));
    let missed: Vec<Mask> = ideals.iter().filter(|&&(i, _)| !hit[i]).map(|&(_, s)| s).collect();
    if cli.format == Format::Json {
        print_json(&json!({
            "system": sys.name(),
            "ideals": ideals.len(),
            "reached": ideals.len() - missed.len(),
            "unreached": missed.iter().map(|&s| roots_json(sys, s)).collect::<Vec<_>>(),
        }));
    } else {
        println!("{} of {} lower order ideals reachable from inversion sets", ideals.len() - missed.len(), ideals.len());
        for s in missed {
            println!("unreached {}", sys.format_mask(s));
        }
    }
    Ok(true)
}
