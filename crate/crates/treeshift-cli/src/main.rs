//! `treeshift`: command-line front end for the treeshift library.
//!
//! Exit codes: 0 verified or true, 1 refuted or false, 2 inconclusive within
//! the budget or out of resources, 64 usage, 65 bad input, 66 unreadable or
//! unwritable file, 70 internal failure.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use treeshift::catalog;
use treeshift::hom_construct::{f1_from_fx, f2_from_ftree, TreeShift, TreeShiftSpec};
use treeshift::mixing::{
    check_block_gluing, check_cpc_ir_pair, check_cpc_ubg, check_cpc_usi, check_ir, check_si, check_tm_pair,
    decide_markov_ir, decide_markov_mixing_family, implication_suite, run_paper_scenarios, scenario_specs,
    search_cpc_bg, Budget, Record, Verdict,
};
use treeshift::shift_core::{is_primitive, Alphabet, ShiftSpec};
use treeshift::sofic_cover::{lift_tree_pattern, powerset_cover, verify_factor_language};
use treeshift::tree_core::{Pattern, Support};
use treeshift::Error;

use report::Report;

const USAGE: u8 = 64;
const DATA: u8 = 65;
const IO: u8 = 66;
const SOFTWARE: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "treeshift", version, about = "Hom tree-shifts, sofic covers and mixing checks")]
struct Cli {
    /// Write a machine-readable report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Worker cap. Checks currently run on one thread.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Largest height of the first pattern.
    #[arg(long, default_value_t = 2)]
    n_max: usize,
    /// Largest height of the second pattern.
    #[arg(long, default_value_t = 2)]
    m_max: usize,
    /// Deepest placement tried.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Height of the supports tried for pattern properties.
    #[arg(long, default_value_t = 1)]
    support_height: usize,
    /// Cap on joint feasibility checks per property.
    #[arg(long, default_value_t = 1 << 22)]
    max_checks: u64,
    /// Enumerate every placement instead of the canonical ones.
    #[arg(long)]
    no_reduce: bool,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            n_max: self.n_max,
            m_max: self.m_max,
            depth: self.depth,
            support_height: self.support_height,
            reduce: !self.no_reduce,
            max_checks: self.max_checks,
        }
    }

    fn json(&self) -> Value {
        json!({
            "n_max": self.n_max,
            "m_max": self.m_max,
            "depth": self.depth,
            "support_height": self.support_height,
            "max_checks": self.max_checks,
            "reduce": !self.no_reduce,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Forbidden words of a one-sided SFT to forbidden 1-blocks of its tree-shift.
    TranslateF1 {
        spec: PathBuf,
        #[arg(short, long, default_value_t = 2)]
        k: u8,
        /// Write the result as an explicit tree-shift spec.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Forbidden 1-blocks of an explicit tree-shift back to forbidden words.
    TranslateF2 {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List admissible words or blocks.
    Enumerate {
        what: Enumerable,
        spec: PathBuf,
        /// Word length or block height.
        #[arg(short, long, default_value_t = 2)]
        size: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Powerset cover of a labeled graph.
    Cover {
        spec: PathBuf,
        /// Write the cover as a labeled-graph spec.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the `subset -> members` table.
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
    /// Compare the cover's factor language with the presented shift.
    VerifyCover {
        spec: PathBuf,
        #[arg(short, long, default_value_t = 10)]
        len: usize,
    },
    /// Lift a block of the presented tree-shift to the cover.
    Lift {
        spec: PathBuf,
        pattern: PathBuf,
        #[arg(short, long, default_value_t = 2)]
        k: u8,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact deciders for hom tree-shifts of Markov shifts.
    Decide { property: Decidable, spec: PathBuf },
    /// Bounded checkers for gluing properties of a tree-shift.
    Check {
        property: Checkable,
        spec: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        gap: usize,
        /// First pattern for cpc-ir.
        #[arg(long)]
        u: Option<PathBuf>,
        /// Second pattern for cpc-ir.
        #[arg(long)]
        v: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// The fixed scenario suite, optionally with implication checks on random SFTs.
    Scenarios {
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0x5eed_2024)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Enumerable {
    Words,
    Blocks,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Decidable {
    MarkovIr,
    MarkovMixing,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Checkable {
    Bg,
    CpcUbg,
    CpcBg,
    CpcIr,
    Si,
    CpcUsi,
    Tm,
    Ir,
}

impl Checkable {
    fn name(self) -> &'static str {
        match self {
            Checkable::Bg => "bg",
            Checkable::CpcUbg => "cpc-ubg",
            Checkable::CpcBg => "cpc-bg",
            Checkable::CpcIr => "cpc-ir",
            Checkable::Si => "si",
            Checkable::CpcUsi => "cpc-usi",
            Checkable::Tm => "tm",
            Checkable::Ir => "ir",
        }
    }
}

/// Anything that ends a run early, with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input(_) | Error::Parse { .. } => DATA,
            Error::Resource { .. } => 2,
            Error::Consistency(_) => SOFTWARE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: IO,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn write(path: &Path, text: &str) -> Run<()> {
    fs::write(path, text).map_err(|e| Failure {
        code: IO,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

/// Parse errors name the file they came from.
fn in_file<T>(path: &Path, r: treeshift::Result<T>) -> Run<T> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn shift_file(path: &Path) -> Run<ShiftSpec> {
    in_file(path, ShiftSpec::parse(&read(path)?))
}

fn tree_file(path: &Path) -> Run<TreeShiftSpec> {
    in_file(path, TreeShiftSpec::parse(&read(path)?))
}

fn compile(spec: &TreeShiftSpec) -> Run<TreeShift> {
    Ok(spec.compile()?)
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: USAGE,
        message: message.into(),
    }
}

/// One `block` line per pattern.
fn block_lines(blocks: &[Pattern], alphabet: &Alphabet) -> String {
    blocks.iter().map(|p| format!("block {}\n", p.to_inline(alphabet))).collect()
}

fn translate_f1(spec: &Path, k: u8, output: Option<&Path>, rep: &mut Report) -> Run<u8> {
    let ShiftSpec::Sft(fx) = shift_file(spec)? else {
        return Err(usage("translate-f1 needs a spec of kind sft"));
    };
    let f1 = f1_from_fx(&fx, k)?;
    let blocks: Vec<Pattern> = f1.iter().cloned().collect();
    println!("{} forbidden 1-blocks", blocks.len());
    print!("{}", block_lines(&blocks, &fx.alphabet));
    if let Some(out) = output {
        let tree = TreeShiftSpec::explicit(fx.alphabet.clone(), k, blocks.clone(), Some(1))?;
        write(out, &tree.to_text())?;
    }
    rep.set("blocks", blocks.iter().map(|p| p.to_inline(&fx.alphabet)).collect::<Vec<_>>());
    Ok(0)
}

fn translate_f2(spec: &Path, output: Option<&Path>, rep: &mut Report) -> Run<u8> {
    let TreeShiftSpec::Explicit {
        alphabet,
        forbidden,
        height,
        ..
    } = tree_file(spec)?
    else {
        return Err(usage("translate-f2 needs an explicit tree-shift spec"));
    };
    if height != 1 {
        return Err(usage(format!("translate-f2 needs 1-blocks, found height {height}")));
    }
    let fx = f2_from_ftree(&forbidden, &alphabet)?;
    let text = ShiftSpec::Sft(fx.clone()).to_text();
    print!("{text}");
    if let Some(out) = output {
        write(out, &text)?;
    }
    let words: Vec<String> = fx.forbidden.iter().map(|w| alphabet.format_word(w)).collect();
    rep.set("forbidden", words);
    Ok(0)
}

fn enumerate(what: Enumerable, spec: &Path, size: usize, output: Option<&Path>, rep: &mut Report) -> Run<u8> {
    let (text, count) = match what {
        Enumerable::Words => {
            let x = shift_file(spec)?;
            let alphabet = x.alphabet();
            let words = x.language()?.words(size);
            let text: String = words.iter().map(|w| format!("{}\n", alphabet.format_word(w))).collect();
            (text, words.len())
        }
        Enumerable::Blocks => {
            let spec = tree_file(spec)?;
            let blocks = compile(&spec)?.blocks(size)?;
            (block_lines(&blocks, &spec.alphabet()), blocks.len())
        }
    };
    print!("{text}");
    eprintln!("{count} admissible");
    if let Some(out) = output {
        write(out, &text)?;
    }
    rep.set("size", size);
    rep.set("count", count);
    rep.set("items", text.lines().collect::<Vec<_>>());
    Ok(0)
}

fn graph_file(spec: &Path) -> Run<treeshift::shift_core::LabeledGraph> {
    match shift_file(spec)? {
        ShiftSpec::Graph(g) => Ok(g),
        _ => Err(usage("expected a spec of kind labeled_graph")),
    }
}

fn cover(spec: &Path, output: Option<&Path>, provenance: Option<&Path>, rep: &mut Report) -> Run<u8> {
    let c = powerset_cover(&graph_file(spec)?)?;
    let text = c.as_shift().to_text();
    let table = c.provenance_table();
    println!("{} cover vertices ({} before pruning)", c.len(), c.size_before);
    print!("{table}");
    if let Some(out) = output {
        write(out, &text)?;
    } else {
        print!("{text}");
    }
    if let Some(out) = provenance {
        write(out, &table)?;
    }
    rep.set("vertices", c.len());
    rep.set("size_before", c.size_before);
    rep.set("provenance", table.lines().collect::<Vec<_>>());
    Ok(0)
}

fn verify_cover(spec: &Path, len: usize, rep: &mut Report) -> Run<u8> {
    let g = graph_file(spec)?;
    let c = powerset_cover(&g)?;
    let (ok, diff) = verify_factor_language(&c, &ShiftSpec::Graph(g.clone()), len)?;
    let diff = diff.map(|w| g.alphabet.format_word(&w));
    match &diff {
        None => println!("languages agree up to length {len}"),
        Some(w) => println!("languages differ at {w}"),
    }
    rep.set("max_len", len);
    rep.set("agree", ok);
    rep.set("difference", diff);
    Ok(u8::from(!ok))
}

fn lift(spec: &Path, pattern: &Path, k: u8, output: Option<&Path>, rep: &mut Report) -> Run<u8> {
    let g = graph_file(spec)?;
    let t = in_file(pattern, Pattern::parse_text(&read(pattern)?, &g.alphabet, k))?;
    let c = powerset_cover(&g)?;
    let up = lift_tree_pattern(&c, &t)?;
    let names = Alphabet::numeric(c.len());
    let text = up.to_text(&names);
    print!("{text}");
    for v in 0..c.len() {
        println!("# {v} = {}", c.vertex_name(v));
    }
    if let Some(out) = output {
        write(out, &text)?;
    }
    rep.set("lift", up.to_inline(&names));
    rep.set("vertices", (0..c.len()).map(|v| c.vertex_name(v)).collect::<Vec<_>>());
    Ok(0)
}

fn decide(property: Decidable, spec: &Path, rep: &mut Report) -> Run<u8> {
    let ShiftSpec::Markov { matrix, .. } = shift_file(spec)? else {
        return Err(usage("decide needs a spec of kind markov"));
    };
    let record = match property {
        Decidable::MarkovIr => {
            let v = decide_markov_ir(&matrix)?;
            let note = if v.is_positive() { "irreducible" } else { "not irreducible" };
            Record::new("ir", v).with_note(note)
        }
        Decidable::MarkovMixing => {
            let (v, family) = decide_markov_mixing_family(&matrix)?;
            let note = match (v.is_positive(), is_primitive(&matrix).1) {
                (true, Some(e)) => format!("primitive, exponent {e}; holds for {}", family.join(", ")),
                (true, None) => format!("primitive; holds for {}", family.join(", ")),
                (false, _) => format!("not primitive; fails for {}", family.join(", ")),
            };
            Record::new("markov-mixing", v).with_note(note)
        }
    };
    println!("{}: {}", record.property, record.note.as_deref().unwrap_or(""));
    let code = record.verdict.exit_code() as u8;
    rep.push(record);
    Ok(code)
}

fn pattern_file(path: Option<&PathBuf>, alphabet: &Alphabet, k: u8, flag: &str) -> Run<Pattern> {
    let path = path.ok_or_else(|| usage(format!("cpc-ir needs --{flag}")))?;
    in_file(path, Pattern::parse_text(&read(path)?, alphabet, k))
}

fn print_verdict(property: &str, v: &Verdict, alphabet: &Alphabet) {
    println!("{property}: {}", v.label());
    if let Some(w) = v.witness() {
        println!("obligation: {} ({:?})", w.obligation, w.scope);
        println!("u: {}", w.u.to_inline(alphabet));
        println!("v: {}", w.v.to_inline(alphabet));
        for alt in &w.placements {
            let at: Vec<String> = alt.iter().map(ToString::to_string).collect();
            println!("at: {}", at.join(" "));
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn check(
    property: Checkable,
    spec: &Path,
    gap: usize,
    u: Option<&PathBuf>,
    v: Option<&PathBuf>,
    args: &BudgetArgs,
    rep: &mut Report,
) -> Run<u8> {
    let spec = tree_file(spec)?;
    let t = compile(&spec)?;
    let b = args.budget();
    if b.depth == 0 || b.max_checks == 0 {
        return Err(Failure {
            code: 2,
            message: "empty budget".into(),
        });
    }
    let verdict = match property {
        Checkable::Bg => check_block_gluing(&t, gap, &b)?,
        Checkable::CpcUbg => check_cpc_ubg(&t, gap, &b)?,
        Checkable::CpcBg => search_cpc_bg(&t, &b)?,
        Checkable::Si => check_si(&t, gap, &b)?,
        Checkable::CpcUsi => check_cpc_usi(&t, gap, &b)?,
        Checkable::Ir => check_ir(&t, &b)?,
        Checkable::Tm => check_tm_pair(&t, &Support::delta(b.n_max, t.k()), &Support::delta(b.m_max, t.k()), gap, &b)?,
        Checkable::CpcIr => {
            let alphabet = spec.alphabet();
            let u = pattern_file(u, &alphabet, t.k(), "u")?;
            let v = pattern_file(v, &alphabet, t.k(), "v")?;
            check_cpc_ir_pair(&t, &u, &v, b.depth)?
        }
    };
    print_verdict(property.name(), &verdict, &spec.alphabet());
    let code = verdict.exit_code() as u8;
    rep.set("budget", args.json());
    rep.set("gap", gap);
    rep.push(Record::new(property.name(), verdict));
    Ok(code)
}

/// Seeded random SFTs over 2 or 3 symbols with forbidden words of length 2.
fn random_sfts(seed: u64, count: usize) -> Run<Vec<(String, TreeShiftSpec)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = rng.gen_range(2..=3usize);
        let mask = (0..d * d).fold(0u64, |m, i| m | (u64::from(rng.gen_bool(0.3)) << i));
        let spec = TreeShiftSpec::hom(catalog::sft_from_code(d, 2, mask), 2)?;
        if !spec.compile()?.is_empty() {
            out.push((format!("sft(d={d},mask={mask:#x})"), spec));
        }
    }
    Ok(out)
}

fn scenarios(random: usize, seed: u64, args: &BudgetArgs, rep: &mut Report) -> Run<u8> {
    let b = args.budget();
    let r = run_paper_scenarios(&b)?;
    for o in &r.outcomes {
        println!("{:<16} {}  {}", o.name, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    let mut ok = r.all_passed();
    rep.set("budget", args.json());
    rep.set("scenarios", serde_json::to_value(&r.outcomes).expect("serializable"));
    if random > 0 {
        let mut specs = scenario_specs()?;
        specs.extend(random_sfts(seed, random)?);
        let small = Budget {
            n_max: 1,
            m_max: 1,
            depth: b.depth.min(5),
            support_height: 1,
            ..b
        };
        let imp = implication_suite(&specs, &[1, 2, 3], &small)?;
        for (rule, n) in &imp.checked {
            println!("{rule:<22} {n} instances");
        }
        for v in &imp.violations {
            println!("violation {} [{}]: {}", v.spec, v.rule, v.detail);
        }
        ok &= imp.violations.is_empty();
        rep.set("seed", seed);
        rep.set("random", random);
        rep.set("implications", serde_json::to_value(&imp).expect("serializable"));
    }
    Ok(u8::from(!ok))
}

fn run(cli: &Cli, rep: &mut Report) -> Run<u8> {
    match &cli.verb {
        Verb::TranslateF1 { spec, k, output } => translate_f1(spec, *k, output.as_deref(), rep),
        Verb::TranslateF2 { spec, output } => translate_f2(spec, output.as_deref(), rep),
        Verb::Enumerate {
            what,
            spec,
            size,
            output,
        } => enumerate(*what, spec, *size, output.as_deref(), rep),
        Verb::Cover {
            spec,
            output,
            provenance,
        } => cover(spec, output.as_deref(), provenance.as_deref(), rep),
        Verb::VerifyCover { spec, len } => verify_cover(spec, *len, rep),
        Verb::Lift { spec, pattern, k, output } => lift(spec, pattern, *k, output.as_deref(), rep),
        Verb::Decide { property, spec } => decide(*property, spec, rep),
        Verb::Check {
            property,
            spec,
            gap,
            u,
            v,
            budget,
        } => check(*property, spec, *gap, u.as_ref(), v.as_ref(), budget, rep),
        Verb::Scenarios { random, seed, budget } => scenarios(*random, *seed, budget, rep),
    }
}

fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::TranslateF1 { .. } => "translate-f1",
        Verb::TranslateF2 { .. } => "translate-f2",
        Verb::Enumerate { .. } => "enumerate",
        Verb::Cover { .. } => "cover",
        Verb::VerifyCover { .. } => "verify-cover",
        Verb::Lift { .. } => "lift",
        Verb::Decide { .. } => "decide",
        Verb::Check { .. } => "check",
        Verb::Scenarios { .. } => "scenarios",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let mut rep = Report::new(verb_name(&cli.verb));
    let (code, error) = match run(&cli, &mut rep) {
        Ok(c) => (c, None),
        Err(f) => {
            eprintln!("error: {}", f.message);
            (f.code, Some(f.message))
        }
    };
    if let Some(path) = &cli.report {
        // Resource errors still produce a report; other errors do not.
        if error.is_none() || code == 2 {
            rep.set("exit_code", code);
            rep.set("error", error);
            if let Err(f) = write(path, &rep.render()) {
                eprintln!("error: {}", f.message);
                return ExitCode::from(f.code);
            }
        }
    }
    ExitCode::from(code)
}
