//! One line per acceptance criterion. Runs without the test harness so the
//! lines always reach the output; exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treeshift::catalog;
use treeshift::hom_construct::{f1_from_fx, f2_from_ftree, TreeShiftSpec};
use treeshift::mixing::{
    check_cpc_ubg, check_ir, decide_markov_ir, decide_markov_mixing_family, implication_suite, run_paper_scenarios,
    scenario_specs, Budget,
};
use treeshift::shift_core::{
    bd_canonical_f, bd_max_window_sum, coordinatewise_max, essentialize, AdjacencyMatrix, Alphabet, BdProfile,
    ShiftSpec, WordSftSpec,
};
use treeshift::sofic_cover::{lift_tree_pattern, powerset_cover, verify_factor_language};
use treeshift::tree_core::{Pattern, TreeWord};

const SEED: u64 = 0x5eed_2024;
const RANDOM_SFTS: usize = 50;

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Duration,
    run: fn() -> Result<String, String>,
}

fn block(root: u16, left: u16, right: u16) -> Pattern {
    let w = |s: &str| TreeWord::parse(s, 2).unwrap();
    Pattern::new(2, [(w("e"), root), (w("0"), left), (w("1"), right)].into()).unwrap()
}

fn f1_exactness() -> Result<String, String> {
    let fx = WordSftSpec::new(Alphabet::binary(), vec![vec![1, 1]]).map_err(|e| e.to_string())?;
    let f1 = f1_from_fx(&fx, 2).map_err(|e| e.to_string())?;
    let want: BTreeSet<Pattern> = [block(1, 1, 0), block(1, 0, 1), block(1, 1, 1)].into();
    if f1 != want {
        return Err(format!("got {} blocks", f1.len()));
    }
    let f2 = f2_from_ftree(&f1, &Alphabet::binary()).map_err(|e| e.to_string())?;
    if f2.forbidden != [vec![1, 1]].into() {
        return Err(format!("back-translation gave {:?}", f2.forbidden));
    }
    Ok("3 one-blocks, back to {11}".into())
}

fn cover_language() -> Result<String, String> {
    let cover = powerset_cover(&catalog::even_shift_graph()).map_err(|e| e.to_string())?;
    let (ok, diff) = verify_factor_language(&cover, &catalog::even_shift(), 12).map_err(|e| e.to_string())?;
    if ok {
        Ok(format!("{} cover vertices, languages agree to length 12", cover.len()))
    } else {
        Err(format!("first difference {diff:?}"))
    }
}

fn matrix_identity() -> Result<String, String> {
    let printed = AdjacencyMatrix::new(vec![
        vec![1, 1, 1, 1, 1],
        vec![0, 1, 1, 1, 0],
        vec![0, 1, 1, 1, 0],
        vec![0, 0, 0, 0, 1],
        vec![0, 1, 1, 1, 0],
    ])
    .map_err(|e| e.to_string())?;
    let a = coordinatewise_max(&[catalog::markov_cover_a0(), catalog::markov_cover_a1()]).map_err(|e| e.to_string())?;
    if a == printed && a == catalog::markov_cover_a1() {
        Ok("max(A0, A1) = A = A1".into())
    } else {
        Err("matrices differ".into())
    }
}

fn tree_lifting() -> Result<String, String> {
    let e = |x: treeshift::error::Error| x.to_string();
    let cover = powerset_cover(&catalog::even_shift_graph()).map_err(e)?;
    let even = TreeShiftSpec::hom(catalog::even_shift(), 2).map_err(e)?.compile().map_err(e)?;
    let lifted_shift = cover.tree_spec(2).map_err(e)?.compile().map_err(e)?;
    // The 2-block whose chains read 001, 001, 001, 000.
    let w = |s: &str| TreeWord::parse(s, 2).unwrap();
    let figure = Pattern::new(
        2,
        [("e", 0), ("0", 0), ("1", 0), ("00", 1), ("01", 1), ("10", 1), ("11", 0)]
            .iter()
            .map(|&(a, s)| (w(a), s))
            .collect(),
    )
    .map_err(e)?;
    let mut count = 0;
    let mut saw_figure = false;
    for n in 0..=3 {
        for t in even.blocks(n).map_err(e)? {
            let up = lift_tree_pattern(&cover, &t).map_err(|x| format!("{}: {x}", t.to_inline(&Alphabet::binary())))?;
            if up.map(|s| cover.symbol_map[s as usize]) != t {
                return Err(format!("lift does not map back for {}", t.to_inline(&Alphabet::binary())));
            }
            if !lifted_shift.admissible(&up).map_err(e)? {
                return Err(format!("lift not admissible for {}", t.to_inline(&Alphabet::binary())));
            }
            saw_figure |= t == figure;
            count += 1;
        }
    }
    if !saw_figure {
        return Err("the illustrated 2-block was not enumerated".into());
    }
    Ok(format!("{count} blocks lifted and mapped back"))
}

/// Every binary matrix of dimension `d`, essentialized, deduplicated.
fn matrices(d: usize) -> BTreeSet<Vec<Vec<u8>>> {
    let mut out = BTreeSet::new();
    for code in 0u32..1 << (d * d) {
        let rows: Vec<Vec<u8>> = (0..d).map(|i| (0..d).map(|j| (code >> (i * d + j) & 1) as u8).collect()).collect();
        let (core, keep) = essentialize(&AdjacencyMatrix::new(rows).unwrap());
        if !keep.is_empty() {
            out.insert(core.rows().to_vec());
        }
    }
    out
}

fn markov_oracles() -> Result<String, String> {
    let e = |x: treeshift::error::Error| x.to_string();
    let mut all: BTreeSet<Vec<Vec<u8>>> = matrices(2);
    all.extend(matrices(3));
    let (mut primitive, mut irreducible) = (0, 0);
    for rows in &all {
        let a = AdjacencyMatrix::new(rows.clone()).map_err(e)?;
        let d = a.dim();
        let t = TreeShiftSpec::hom(ShiftSpec::markov_numeric(a.clone()), 2).map_err(e)?.compile().map_err(e)?;
        let wielandt = (d - 1) * (d - 1) + 1;
        let b = Budget {
            n_max: 1,
            m_max: 1,
            depth: 1 + d * d,
            reduce: false,
            ..Budget::default()
        };
        let family = decide_markov_mixing_family(&a).map_err(e)?.0.is_positive();
        let ubg = check_cpc_ubg(&t, wielandt, &b).map_err(e)?;
        if family != ubg.is_positive() {
            return Err(format!("{rows:?}: decider {family}, search {}", ubg.label()));
        }
        if let Some(w) = ubg.witness() {
            if !w.recheck(&t).map_err(e)? {
                return Err(format!("{rows:?}: witness does not re-check"));
            }
        }
        let ir = decide_markov_ir(&a).map_err(e)?.is_positive();
        let search = check_ir(&t, &b).map_err(e)?.is_positive();
        if ir != search {
            return Err(format!("{rows:?}: IR decider {ir}, search {search}"));
        }
        primitive += usize::from(family);
        irreducible += usize::from(ir);
    }
    Ok(format!("{} matrices, {primitive} primitive, {irreducible} irreducible, full agreement", all.len()))
}

fn scenarios() -> Result<String, String> {
    let r = run_paper_scenarios(&Budget::default()).map_err(|e| e.to_string())?;
    for o in &r.outcomes {
        println!("    scenario {:<16} {}  {}", o.name, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    if r.all_passed() {
        Ok(format!("{} scenarios", r.outcomes.len()))
    } else {
        Err(format!("failed: {}", r.failed().join(", ")))
    }
}

/// Seeded random SFTs over at most 3 symbols with forbidden words of length 2.
pub fn random_sfts(seed: u64, count: usize) -> Vec<(String, TreeShiftSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let d = rng.gen_range(2..=3usize);
        let mask = (0..d * d).fold(0u64, |m, i| m | (u64::from(rng.gen_bool(0.3)) << i));
        let spec = TreeShiftSpec::hom(catalog::sft_from_code(d, 2, mask), 2).unwrap();
        if !spec.compile().unwrap().is_empty() {
            out.push((format!("sft(d={d},mask={mask:#x})"), spec));
        }
    }
    out
}

fn implications() -> Result<String, String> {
    let mut specs = scenario_specs().map_err(|e| e.to_string())?;
    specs.extend(random_sfts(SEED, RANDOM_SFTS));
    let b = Budget {
        n_max: 1,
        m_max: 1,
        depth: 5,
        support_height: 1,
        ..Budget::default()
    };
    let rep = implication_suite(&specs, &[1, 2, 3], &b).map_err(|e| e.to_string())?;
    let total: usize = rep.checked.values().sum();
    for (rule, n) in &rep.checked {
        println!("    rule {rule:<22} {n} instances");
    }
    if rep.violations.is_empty() {
        Ok(format!("{} specs, {total} instances, 0 violations", specs.len()))
    } else {
        for v in &rep.violations {
            println!("    violation {} [{}]: {}", v.spec, v.rule, v.detail);
        }
        Err(format!("{} violations", rep.violations.len()))
    }
}

fn canonicality() -> Result<String, String> {
    for p in 0..=30usize {
        let got = bd_max_window_sum(&BdProfile::Log3, p, 40).map_err(|e| e.to_string())?;
        if got != bd_canonical_f(p as u64) {
            return Err(format!("p = {p}: window sum {got}"));
        }
    }
    Ok("window maxima equal ceil(log3(p + 1)) for p <= 30".into())
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "forbidden-set translation", limit: Duration::from_secs(1), run: f1_exactness },
        Criterion { id: 2, name: "cover language equality", limit: Duration::from_secs(30), run: cover_language },
        Criterion { id: 3, name: "matrix identity", limit: Duration::from_secs(1), run: matrix_identity },
        Criterion { id: 4, name: "tree-pattern lifting", limit: Duration::from_secs(120), run: tree_lifting },
        Criterion { id: 5, name: "Markov oracle agreement", limit: Duration::from_secs(600), run: markov_oracles },
        Criterion { id: 6, name: "scenario suite", limit: Duration::from_secs(600), run: scenarios },
        Criterion { id: 7, name: "implication properties", limit: Duration::from_secs(900), run: implications },
        Criterion { id: 8, name: "density canonicality", limit: Duration::from_secs(60), run: canonicality },
    ];
    let filter: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.contains(&c.id)) {
        let start = Instant::now();
        let res = (c.run)();
        let took = start.elapsed();
        let (verdict, detail) = match (&res, took <= c.limit) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {:?} limit", c.limit)),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        failed += usize::from(verdict == "FAIL");
        println!("criterion {} {:<28} {verdict}  {:.2?}  {detail}", c.id, c.name, took);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
