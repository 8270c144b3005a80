//! The fixed counterexample suite and the implication checks between
//! properties.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::checks::*;
use super::{decide_markov_mixing_family, linkable, tm_gap_bound_bd, Record, Scope, Verdict, Witness};
use crate::catalog;
use crate::error::{resource, Result};
use crate::hom_construct::{axial_admissible, Engine, TreeShift, TreeShiftSpec};
use crate::shift_core::{BdProfile, Language, ShiftSpec, Symbol};
use crate::tree_core::{shift_pattern, sigma_n, Cpc, Pattern, Support, TreeWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub records: Vec<Record>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub outcomes: Vec<ScenarioOutcome>,
}

impl ScenarioReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.outcomes.iter().filter(|o| !o.passed).map(|o| o.name.as_str()).collect()
    }
}

fn outcome(name: &str, failures: Vec<String>, records: Vec<Record>) -> ScenarioOutcome {
    ScenarioOutcome {
        name: name.into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "as expected".into()
        } else {
            failures.join("; ")
        },
        records,
    }
}

fn rechecks(v: &Verdict, t: &TreeShift) -> Result<bool> {
    match v.witness() {
        Some(w) => w.recheck(t),
        None => Ok(false),
    }
}

/// Runs the four scenarios with the even shift in the third.
pub fn run_paper_scenarios(b: &Budget) -> Result<ScenarioReport> {
    run_scenarios_with(catalog::even_shift(), b)
}

/// Same suite with `x` standing in for the even shift.
pub fn run_scenarios_with(x: ShiftSpec, b: &Budget) -> Result<ScenarioReport> {
    if b.depth == 0 || b.max_checks == 0 {
        return resource("scenario budget", 0);
    }
    Ok(ScenarioReport {
        outcomes: vec![
            scenario_layer_constant(b)?,
            scenario_sibling_pair(b)?,
            scenario_even_shift(x, b)?,
            scenario_bd_log3(b)?,
        ],
    })
}

/// `u_w = 1` exactly on level `n + 1` of `{e, 0} + {1^i : i <= n + 1}`.
pub fn layer_clash_pattern(n: usize) -> Pattern {
    let mut nodes = vec![TreeWord::root(), TreeWord::new(vec![0])];
    nodes.extend((1..=n + 1).map(|i| TreeWord::repeat(1, i)));
    let s = Support::new(2, nodes).expect("prefix-closed");
    Pattern::from_fn(&s, |w| Symbol::from(w.len() == n + 1))
}

pub fn scenario_layer_constant(b: &Budget) -> Result<ScenarioOutcome> {
    let t = catalog::layer_constant().compile()?;
    let mut fails = Vec::new();
    let mut records = Vec::new();

    let sigma = Cpc::uniform(1, 2);
    let bg = check_cpc_bg(&t, &sigma, b)?;
    if !bg.is_positive() {
        fails.push("CPC block gluing through the alphabet did not verify".into());
    }
    records.push(Record::new("cpc-bg", bg));

    // Each code P meets its own pair: 0 on the boundary and a 1 on level
    // max |z| + 1.
    let depth = b.depth.min(3);
    let zero = Pattern::point(2, 0);
    let mut first = None;
    let mut codes = 0;
    for p in Cpc::enumerate(2, 0, depth) {
        codes += 1;
        let u = layer_clash_pattern(p.max_len());
        let v = check_cpc_si_code(&t, &p, &u, &zero)?;
        if v.is_positive() || !rechecks(&v, &t)? {
            fails.push(format!("code {p} links the layer clash pair"));
        } else if first.is_none() {
            first = v.witness().cloned();
        }
    }
    if let Some(mut w) = first {
        w.scope = Scope::Universal("layer clash".into());
        records.push(
            Record::new("cpc-si", Verdict::DecidedFalse(Some(Box::new(w))))
                .with_note(format!("{codes} codes of depth at most {depth} each refuted by their own pair")),
        );
    }

    for n in 1..=3 {
        let u = layer_clash_pattern(n);
        let w = TreeWord::repeat(0, n + 1);
        let ok = linkable(&t, &u, &zero, std::slice::from_ref(&w))?;
        let dist = crate::tree_core::set_distance([&w], u.support().nodes())?;
        if ok || dist < n {
            fails.push(format!("SI at distance {n} not refuted"));
        }
        let wit = Witness::new(&u, &zero, vec![vec![w]], format!("distance {n}"), Scope::Exact);
        records.push(Record::new(format!("si({n})"), Verdict::Refuted(Box::new(wit))));
    }
    Ok(outcome("layer-constant", fails, records))
}

pub fn scenario_sibling_pair(b: &Budget) -> Result<ScenarioOutcome> {
    let t = catalog::sibling_pair_sft().compile()?;
    let mut fails = Vec::new();
    let mut records = Vec::new();
    let sb = Budget {
        depth: b.depth.min(5),
        support_height: 1,
        ..b.clone()
    };
    let si2 = check_si(&t, 2, &sb)?;
    if !si2.is_positive() {
        fails.push("SI at distance 2 did not verify".into());
    }
    records.push(Record::new("si(2)", si2));
    let si1 = check_si(&t, 1, &sb)?;
    if si1.is_positive() || !rechecks(&si1, &t)? {
        fails.push("SI at distance 1 not refuted".into());
    }
    records.push(Record::new("si(1)", si1));
    match cpc_sibling_obstruction(&t, 1, b.depth.min(4))? {
        Some(v) if rechecks(&v, &t)? => records.push(Record::new("cpc-bg", v)),
        _ => fails.push("no sibling obstruction for u = v = 1".into()),
    }
    Ok(outcome("sibling-pair", fails, records))
}

/// Criterion for the third scenario, parametrised by the word shift.
pub fn scenario_even_shift(x: ShiftSpec, b: &Budget) -> Result<ScenarioOutcome> {
    let t = TreeShiftSpec::hom(x.clone(), 2)?.compile()?;
    let (u, v) = catalog::even_cpc_ir_blocks();
    let mut fails = Vec::new();
    let mut records = Vec::new();
    if !t.admissible(&u)? || !t.admissible(&v)? {
        fails.push("the blocks are not admissible".into());
        return Ok(outcome("even-shift", fails, records));
    }
    let depth = b.depth.max(u.height().unwrap_or(0) + 2);
    let dp = check_cpc_ir_pair(&t, &u, &v, depth)?;
    if dp.is_positive() {
        fails.push("unexpectedly linkable".into());
    } else if !rechecks(&dp, &t)? {
        fails.push("CPC irreducibility witness does not re-check".into());
    }
    records.push(Record::new("cpc-ir", dp));
    match single_placement_obstruction(&t, &u, &v, depth, "parity obstruction")? {
        Some(p) => records.push(
            Record::new("cpc-ir", p).with_note(format!(
                "no single placement of v below u works for |g| <= {depth}; the argument does not depend on g"
            )),
        ),
        None => {
            if !fails.iter().any(|f| f == "unexpectedly linkable") {
                fails.push("unexpectedly linkable".into());
            }
        }
    }

    let a = catalog::axial_witness();
    let axial = axial_admissible(&x, &a)?;
    let hom = t.admissible(&a)?;
    let g = TreeWord::repeat(0, 2);
    let below = shift_pattern(&a, &g, Some(&v.support()))?;
    let matches = below == v && a.get(&TreeWord::root()) == u.get(&TreeWord::root());
    if !(axial && !hom && matches) {
        fails.push(format!("axial witness: axial {axial}, hom {hom}, carries the pair {matches}"));
    }
    records.push(
        Record::new(
            "axial-witness",
            if axial && !hom {
                Verdict::DecidedTrue
            } else {
                Verdict::DecidedFalse(None)
            },
        )
        .with_note("4-block admissible in the axial product, not in the hom tree-shift; carries u at e and v at 00"),
    );
    Ok(outcome("even-shift", fails, records))
}

/// `x_i = f(i + 1) - f(i)` for `i < len`; the greedy sequence that meets
/// the profile on every prefix.
pub fn bd_increments(f: &BdProfile, len: usize) -> Vec<Symbol> {
    (0..len as u64).map(|i| (f.eval(i + 1) - f.eval(i)) as Symbol).collect()
}

pub fn scenario_bd_log3(b: &Budget) -> Result<ScenarioOutcome> {
    let f = BdProfile::Log3;
    let t = TreeShiftSpec::hom(catalog::bd_log3(), 2)?.compile()?;
    let mut fails = Vec::new();
    let mut records = Vec::new();
    for m in 0..=3usize {
        let gap = tm_gap_bound_bd(&f, m as u64)? as usize;
        let h = Support::delta(m, 2);
        let tb = Budget {
            depth: m + gap + 2,
            ..b.clone()
        };
        let v = check_tm_pair(&t, &h, &h, gap, &tb)?;
        if !v.is_positive() {
            fails.push(format!("TM pair check at M = {m}, N = {gap} failed"));
        }
        records.push(Record::new(format!("tm(M={m},N={gap})"), v));
    }
    let one = Pattern::point(2, 1);
    for n in 1..=2u32 {
        let len = 3usize.pow(n);
        let u = Pattern::layer_constant(&bd_increments(&f, len), 2)?;
        let level = len + n as usize - 1;
        let at = sigma_n(level, 2);
        if !t.admissible(&u)? || linkable(&t, &u, &one, &at)? {
            fails.push(format!("CPC-UBG witness at N = {n} does not refute"));
        }
        let w = Witness::new(&u, &one, vec![at], format!("1 on every node of level {level}"), Scope::Exact);
        records.push(Record::new(format!("cpc-ubg({n})"), Verdict::Refuted(Box::new(w))));
        let chain = TreeWord::repeat(0, level);
        if linkable(&t, &u, &one, std::slice::from_ref(&chain))? {
            fails.push(format!("BG witness at N = {n} does not refute"));
        }
        let w = Witness::new(&u, &one, vec![vec![chain]], format!("1 at 0^{level}"), Scope::Exact);
        records.push(Record::new(format!("bg({n})"), Verdict::Refuted(Box::new(w))));
    }
    Ok(outcome("bounded-density", fails, records))
}

/// Whether some `y` of length `gap` makes `a y b` a word of the shift.
pub fn word_gluing(lang: &Language, a: &[Symbol], b: &[Symbol], gap: usize) -> bool {
    let Some(start) = lang.run(a) else {
        return false;
    };
    let mut front: BTreeSet<_> = [start].into();
    for _ in 0..gap {
        let mut next = BTreeSet::new();
        for c in &front {
            for s in 0..lang.n_symbols() as Symbol {
                if let Some(d) = lang.step(c, s) {
                    next.insert(d);
                }
            }
        }
        front = next;
    }
    front.iter().any(|c| {
        let mut c = Some(c.clone());
        for &s in b {
            c = c.and_then(|c| lang.step(&c, s));
        }
        c.is_some()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub spec: String,
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ImplicationReport {
    /// Instances examined per rule.
    pub checked: BTreeMap<&'static str, usize>,
    /// Antecedent verified but its consequent only failed on an instance the
    /// antecedent's budget did not reach.
    pub out_of_budget: BTreeMap<&'static str, usize>,
    pub violations: Vec<Violation>,
}

impl ImplicationReport {
    fn tick(&mut self, rule: &'static str) {
        *self.checked.entry(rule).or_default() += 1;
    }

    fn violation(&mut self, spec: &str, rule: &'static str, detail: String) {
        self.violations.push(Violation {
            spec: spec.into(),
            rule,
            detail,
        });
    }
}

pub const USI_SI: &str = "cpc-usi => si";
pub const UBG_BG: &str = "cpc-ubg => bg";
pub const BG_TM: &str = "bg => tm";
pub const BG_UBG: &str = "bg => cpc-ubg (hom)";
pub const CPCIR_IR: &str = "cpc-ir => ir (hom)";
pub const IR_CPCIR: &str = "ir => cpc-ir (hom)";
pub const TM_MIXING: &str = "tm => x mixing (hom)";

/// The specs of the scenario suite, by name.
pub fn scenario_specs() -> Result<Vec<(String, TreeShiftSpec)>> {
    Ok(vec![
        ("layer-constant".into(), catalog::layer_constant()),
        ("sibling-pair".into(), catalog::sibling_pair_sft()),
        ("even".into(), TreeShiftSpec::hom(catalog::even_shift(), 2)?),
        ("golden-mean".into(), TreeShiftSpec::hom(catalog::golden_mean(), 2)?),
        ("bounded-density".into(), TreeShiftSpec::hom(catalog::bd_log3(), 2)?),
    ])
}

/// Checks the implications between properties on every spec for each gap.
///
/// A violation is reported only on an instance where the antecedent, checked
/// directly, links a pair that the consequent fails to link.
pub fn implication_suite(specs: &[(String, TreeShiftSpec)], gaps: &[usize], b: &Budget) -> Result<ImplicationReport> {
    let mut rep = ImplicationReport::default();
    for (name, spec) in specs {
        let t = spec.compile()?;
        if t.is_empty() {
            continue;
        }
        for &n in gaps {
            usi_si(name, &t, n, b, &mut rep)?;
            ubg_bg(name, &t, n, b, &mut rep)?;
            bg_tm(name, &t, n, b, &mut rep)?;
            if spec.is_hom() {
                bg_ubg(name, &t, n, b, &mut rep)?;
            }
        }
        if spec.is_hom() {
            ir_rules(name, &t, b, &mut rep)?;
            tm_mixing(name, spec, &t, gaps, b, &mut rep)?;
        }
    }
    Ok(rep)
}

fn first_instance(v: &Verdict) -> Option<(&Pattern, &Pattern, &TreeWord)> {
    match v {
        Verdict::Refuted(w) if w.scope == Scope::Exact && w.placements.len() == 1 && w.placements[0].len() == 1 => {
            Some((&w.u, &w.v, &w.placements[0][0]))
        }
        _ => None,
    }
}

fn grow(s: &Support, j: usize) -> Result<Support> {
    let d = sigma_n_upto(j, s.k());
    Support::new(s.k(), s.nodes().iter().flat_map(|x| d.iter().map(move |y| x.concat(y))))
}

fn sigma_n_upto(j: usize, k: u8) -> Vec<TreeWord> {
    (0..=j).flat_map(|i| sigma_n(i, k)).collect()
}

/// SI at distance `n + 1` against uniform CPC-SI with `Sigma^n`.
fn usi_si(name: &str, t: &TreeShift, n: usize, b: &Budget, rep: &mut ImplicationReport) -> Result<()> {
    let usi = check_cpc_usi(t, n, b)?;
    let si = check_si(t, n + 1, b)?;
    rep.tick(USI_SI);
    let Some((u, v, w)) = first_instance(&si) else {
        return Ok(());
    };
    let s = u.support();
    let keep = (0..=w.len()).rev().map(|i| w.prefix(i)).find(|p| s.contains(p)).expect("root is in s(u)");
    let j = w.len() - keep.len() - n;
    let Some(ubar) = t.extend(u, &grow(&s, j)?)? else {
        return Ok(());
    };
    let at: Vec<TreeWord> = crate::tree_core::boundary(&ubar.support())?
        .iter()
        .flat_map(|x| sigma_n(n, t.k()).into_iter().map(move |z| x.concat(&z)))
        .collect();
    if linkable(t, &ubar, v, &at)? {
        rep.violation(name, USI_SI, format!("u = {:?}, w = {w}: the extended pair links through Sigma^{n}", u.labels()));
    } else if usi.is_positive() {
        *rep.out_of_budget.entry(USI_SI).or_default() += 1;
    }
    Ok(())
}

fn ubg_bg(name: &str, t: &TreeShift, n: usize, b: &Budget, rep: &mut ImplicationReport) -> Result<()> {
    let ubg = check_cpc_ubg(t, n, b)?;
    let bg = check_block_gluing(t, n, b)?;
    rep.tick(UBG_BG);
    let Some((u, v, w)) = first_instance(&bg) else {
        return Ok(());
    };
    let Some(ubar) = t.extend(u, &Support::delta(w.len() - n, t.k()))? else {
        return Ok(());
    };
    if linkable(t, &ubar, v, &sigma_n(w.len(), t.k()))? {
        rep.violation(name, UBG_BG, format!("w = {w}: the extended block links through Sigma^{n}"));
    } else if ubg.is_positive() && ubar.height() <= Some(b.n_max) {
        rep.violation(name, UBG_BG, format!("w = {w}: CPC-UBG verified but the extended block does not link"));
    } else if ubg.is_positive() {
        *rep.out_of_budget.entry(UBG_BG).or_default() += 1;
    }
    Ok(())
}

/// BG with the search reductions against TM on block shapes without them.
fn bg_tm(name: &str, t: &TreeShift, n: usize, b: &Budget, rep: &mut ImplicationReport) -> Result<()> {
    if !check_block_gluing(t, n, b)?.is_positive() {
        return Ok(());
    }
    let plain = Budget { reduce: false, ..b.clone() };
    for h1 in 0..=b.n_max {
        for h2 in 0..=b.m_max {
            rep.tick(BG_TM);
            let tm = check_tm_pair(t, &Support::delta(h1, t.k()), &Support::delta(h2, t.k()), n, &plain)?;
            if let Some((_, _, w)) = first_instance(&tm) {
                rep.violation(name, BG_TM, format!("BG({n}) verified, TM fails on Delta_{h1}, Delta_{h2} at w = {w}"));
            }
        }
    }
    Ok(())
}

fn bg_ubg(name: &str, t: &TreeShift, n: usize, b: &Budget, rep: &mut ImplicationReport) -> Result<()> {
    if b.depth < b.n_max + n || !check_block_gluing(t, n, b)?.is_positive() {
        return Ok(());
    }
    rep.tick(BG_UBG);
    let plain = Budget { reduce: false, ..b.clone() };
    if let Some(w) = check_cpc_ubg(t, n, &plain)?.witness() {
        rep.violation(name, BG_UBG, format!("BG({n}) verified, CPC-UBG fails: {}", w.obligation));
    }
    Ok(())
}

/// The word read along the chain to `x` in `u`, spread over every level.
fn layer_block(u: &Pattern, x: &TreeWord) -> Result<Pattern> {
    let word: Vec<Symbol> = x.prefixes().map(|p| u.get(&p).expect("block")).collect();
    Pattern::layer_constant(&word, u.k())
}

fn ir_rules(name: &str, t: &TreeShift, b: &Budget, rep: &mut ImplicationReport) -> Result<()> {
    if !matches!(t.engine(), Engine::Automaton(_)) {
        return Ok(());
    }
    let plain = Budget { reduce: false, ..b.clone() };
    let nb = b.n_max.min(1);
    for n in 0..=nb {
        let us = t.blocks(n)?;
        for m in 0..=b.m_max.min(1) {
            for v in &t.blocks(m)? {
                for u in &us {
                    let cpc = check_cpc_ir_pair(t, u, v, b.depth)?;
                    rep.tick(CPCIR_IR);
                    if let Verdict::VerifiedUpTo(bd) = &cpc {
                        let lim = Budget {
                            depth: bd.depth.unwrap_or(b.depth),
                            ..plain.clone()
                        };
                        if ir_link(t, u, v, &lim)?.is_none() {
                            rep.violation(name, CPCIR_IR, format!("code found but no single position links (n = {n}, m = {m})"));
                        }
                        continue;
                    }
                    rep.tick(IR_CPCIR);
                    let mut deepest = 0;
                    let mut all = true;
                    for x in sigma_n(n, t.k()) {
                        match ir_link(t, &layer_block(u, &x)?, v, &plain)? {
                            Some(g) => deepest = deepest.max(g.len()),
                            None => {
                                all = false;
                                break;
                            }
                        }
                    }
                    let universal = matches!(&cpc, Verdict::DecidedFalse(_));
                    if all && (universal || deepest <= b.depth) {
                        rep.violation(name, IR_CPCIR, format!("every leaf links by depth {deepest} but no code was found"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn tm_mixing(name: &str, spec: &TreeShiftSpec, t: &TreeShift, gaps: &[usize], b: &Budget, rep: &mut ImplicationReport) -> Result<()> {
    let Some(x) = spec.hom_shift() else {
        return Ok(());
    };
    let Some(&gap) = gaps.iter().find(|&&n| {
        (0..=b.n_max).all(|h| {
            let s = Support::delta(h, t.k());
            check_tm_pair(t, &s, &s, n, b).is_ok_and(|v| v.is_positive())
        })
    }) else {
        return Ok(());
    };
    rep.tick(TM_MIXING);
    if let ShiftSpec::Markov { matrix, .. } = x {
        if !decide_markov_mixing_family(matrix)?.0.is_positive() {
            rep.violation(name, TM_MIXING, "TM verified but the matrix is not primitive".into());
        }
        return Ok(());
    }
    let lang = x.language()?;
    let words: Vec<Vec<Symbol>> = (1..=2).flat_map(|l| lang.words(l)).collect();
    for a in &words {
        for c in &words {
            for g in gap.saturating_sub(1)..=gap + 3 {
                if a.len() + g + c.len() > 10 {
                    break;
                }
                if !word_gluing(&lang, a, c, g) {
                    rep.violation(name, TM_MIXING, format!("TM({gap}) verified but {a:?} and {c:?} do not glue at gap {g}"));
                    return Ok(());
                }
            }
        }
    }
    Ok(())
}
