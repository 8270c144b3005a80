//! Bounded checkers. Each quantifies over the admissible patterns and
//! positions inside a budget and either finds every required joint labeling
//! or reports the first obligation that fails.
//!
//! Two reductions keep the searches small, both switchable through
//! [`Budget::reduce`]:
//!
//! * for hom tree-shifts, a block `u` at the root only matters through the
//!   word it reads along the chain towards `v`, so `u` ranges over
//!   layer-constant blocks and positions over `0^L`;
//! * for shifts invariant under sibling swaps, the part of a position below
//!   the support of `u` can be taken to be `0...0`.

use std::collections::BTreeSet;

use super::{linkable, Bounds, Scope, Verdict, Witness};
use crate::error::{input, resource, Error, Result};
use crate::hom_construct::{Engine, TreeAutomaton, TreeShift};
use crate::shift_core::Symbol;
use crate::tree_core::{boundary, sigma_n, Cpc, Pattern, Support, TreeWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub n_max: usize,
    pub m_max: usize,
    pub depth: usize,
    /// Height of the supports tried for pattern-based properties.
    pub support_height: usize,
    pub reduce: bool,
    /// Cap on the number of joint feasibility checks one call may make.
    pub max_checks: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            n_max: 2,
            m_max: 2,
            depth: 8,
            support_height: 1,
            reduce: true,
            max_checks: 1 << 22,
        }
    }
}

impl Budget {
    pub fn small(n: usize, depth: usize) -> Self {
        Budget {
            n_max: n,
            m_max: n,
            depth,
            ..Budget::default()
        }
    }

    fn bounds(&self) -> Bounds {
        Bounds {
            n_max: Some(self.n_max),
            m_max: Some(self.m_max),
            depth: Some(self.depth),
            ..Bounds::default()
        }
    }
}

/// Counts joint checks against the budget.
struct Meter {
    used: u64,
    cap: u64,
}

impl Meter {
    fn new(b: &Budget) -> Self {
        Meter { used: 0, cap: b.max_checks }
    }

    fn link(&mut self, t: &TreeShift, u: &Pattern, v: &Pattern, at: &[TreeWord]) -> Result<bool> {
        self.used += 1;
        if self.used > self.cap {
            return resource("joint feasibility checks", self.cap);
        }
        linkable(t, u, v, at)
    }
}

fn uses_hom(t: &TreeShift, b: &Budget) -> bool {
    b.reduce && t.spec().is_hom()
}

fn canonical(t: &TreeShift, b: &Budget) -> bool {
    b.reduce && t.spec().is_symmetric()
}

/// Admissible `n`-blocks, or the layer-constant ones when the hom reduction
/// applies.
pub fn root_blocks(t: &TreeShift, n: usize, b: &Budget) -> Result<Vec<Pattern>> {
    if uses_hom(t, b) {
        let x = t.spec().hom_shift().expect("hom spec");
        x.language()?
            .words(n + 1)
            .iter()
            .map(|c| Pattern::layer_constant(c, t.k()))
            .collect()
    } else {
        t.blocks(n)
    }
}

/// Every prefix-closed support of height at most `h` containing the root.
pub fn supports_up_to(k: u8, h: usize) -> Result<Vec<Support>> {
    fn grow(w: &TreeWord, k: u8, h: usize) -> Vec<Vec<TreeWord>> {
        let mut acc: Vec<Vec<TreeWord>> = vec![vec![w.clone()]];
        if w.len() < h {
            for d in 0..k {
                let opts = grow(&w.child(d), k, h);
                let mut next = Vec::with_capacity(acc.len() * (opts.len() + 1));
                for a in &acc {
                    next.push(a.clone());
                    for o in &opts {
                        let mut x = a.clone();
                        x.extend(o.iter().cloned());
                        next.push(x);
                    }
                }
                acc = next;
            }
        }
        acc
    }
    let mut count = 1f64;
    for _ in 0..h {
        count = (1.0 + count).powi(k as i32);
    }
    if count > 4096.0 {
        return resource("supports of the requested height", 4096);
    }
    grow(&TreeWord::root(), k, h)
        .into_iter()
        .map(|ws| Support::new(k, ws))
        .collect()
}

/// Admissible labelings of `s`, by depth-first search with pruning.
pub fn patterns_on(t: &TreeShift, s: &Support) -> Result<Vec<Pattern>> {
    if s.is_delta() {
        return t.blocks(s.height().unwrap_or(0));
    }
    let mut nodes: Vec<TreeWord> = s.nodes().iter().cloned().collect();
    nodes.sort_by_key(|w| (w.len(), w.clone()));
    let d = t.n_symbols() as Symbol;
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Pattern)> = vec![(0, Pattern::empty(t.k()))];
    while let Some((i, p)) = stack.pop() {
        if i == nodes.len() {
            out.push(p);
            continue;
        }
        for a in (0..d).rev() {
            let mut labels = p.labels().clone();
            labels.insert(nodes[i].clone(), a);
            let q = Pattern::new(t.k(), labels)?;
            if t.admissible(&q)? {
                stack.push((i + 1, q));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Positions `w` with `d(w, s) >= min_dist` and `|w| <= max_len`, shortest
/// first. With `canonical`, the part below `s` is `c 0...0`.
pub fn far_positions(s: &Support, min_dist: usize, max_len: usize, canonical: bool) -> Vec<TreeWord> {
    let k = s.k();
    let mut out = Vec::new();
    if min_dist == 0 {
        out.extend(s.nodes().iter().filter(|w| w.len() <= max_len).cloned());
    }
    for p in s.nodes() {
        for c in 0..k {
            let pc = p.child(c);
            if s.contains(&pc) {
                continue;
            }
            for r in min_dist.max(1) - 1..=max_len.saturating_sub(pc.len()) {
                if pc.len() + r > max_len {
                    break;
                }
                if canonical {
                    out.push(pc.concat(&TreeWord::repeat(0, r)));
                } else {
                    out.extend(sigma_n(r, k).iter().map(|z| pc.concat(z)));
                }
            }
        }
    }
    out.sort_by_key(|w| (w.len(), w.clone()));
    out
}

fn exact(u: &Pattern, v: &Pattern, at: Vec<TreeWord>, what: String) -> Verdict {
    Verdict::Refuted(Box::new(Witness::new(u, v, vec![at], what, Scope::Exact)))
}

/// Block gluing at gap `gap`: `u` in `B_n`, `v` in `B_m` and every `w` with
/// `n + gap <= |w| <= depth`.
pub fn check_block_gluing(t: &TreeShift, gap: usize, b: &Budget) -> Result<Verdict> {
    let mut meter = Meter::new(b);
    for n in 0..=b.n_max {
        let us = root_blocks(t, n, b)?;
        let ws: Vec<TreeWord> = if uses_hom(t, b) {
            (n + gap..=b.depth).map(|l| TreeWord::repeat(0, l)).collect()
        } else {
            far_positions(&Support::delta(n, t.k()), gap, b.depth, canonical(t, b))
        };
        for m in 0..=b.m_max {
            let vs = t.blocks(m)?;
            for u in &us {
                for v in &vs {
                    for w in &ws {
                        if !meter.link(t, u, v, std::slice::from_ref(w))? {
                            return Ok(exact(u, v, vec![w.clone()], format!("block gluing at gap {gap}")));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::VerifiedUpTo(Bounds {
        gap: Some(gap),
        ..b.bounds()
    }))
}

/// Uniform CPC block gluing: `v` below every node of `Sigma^(n + gap)` at once.
pub fn check_cpc_ubg(t: &TreeShift, gap: usize, b: &Budget) -> Result<Verdict> {
    let mut meter = Meter::new(b);
    for n in 0..=b.n_max {
        let at = sigma_n(n + gap, t.k());
        let us = root_blocks(t, n, b)?;
        for m in 0..=b.m_max {
            for u in &us {
                for v in &t.blocks(m)? {
                    if !meter.link(t, u, v, &at)? {
                        return Ok(exact(u, v, at, format!("uniform code of length {gap}")));
                    }
                }
            }
        }
    }
    Ok(Verdict::VerifiedUpTo(Bounds {
        gap: Some(gap),
        cpc: Some(Cpc::uniform(gap, t.k())),
        n_max: Some(b.n_max),
        m_max: Some(b.m_max),
        ..Bounds::default()
    }))
}

/// `w z` for `w` in `prefixes` and `z` in `p`.
fn through(prefixes: &[TreeWord], p: &Cpc) -> Vec<TreeWord> {
    prefixes
        .iter()
        .flat_map(|w| p.elements().iter().map(move |z| w.concat(z)))
        .collect()
}

/// CPC block gluing through the fixed code `p`.
pub fn check_cpc_bg(t: &TreeShift, p: &Cpc, b: &Budget) -> Result<Verdict> {
    let mut meter = Meter::new(b);
    for n in 0..=b.n_max {
        let at = through(&sigma_n(n, t.k()), p);
        let us = root_blocks(t, n, b)?;
        for m in 0..=b.m_max {
            for u in &us {
                for v in &t.blocks(m)? {
                    if !meter.link(t, u, v, &at)? {
                        let mut w = Witness::new(u, v, vec![at], format!("code {p}"), Scope::Exact);
                        w.cpc = Some(p.clone());
                        return Ok(Verdict::Refuted(Box::new(w)));
                    }
                }
            }
        }
    }
    Ok(Verdict::VerifiedUpTo(Bounds {
        cpc: Some(p.clone()),
        n_max: Some(b.n_max),
        m_max: Some(b.m_max),
        ..Bounds::default()
    }))
}

/// Looks for one code of depth at most `min(depth, 4)` that glues every pair.
pub fn search_cpc_bg(t: &TreeShift, b: &Budget) -> Result<Verdict> {
    let depth = b.depth.min(4);
    let mut first: Option<Witness> = None;
    let mut failures = Vec::new();
    for p in Cpc::enumerate(t.k(), 0, depth) {
        match check_cpc_bg(t, &p, b)? {
            Verdict::Refuted(w) => {
                failures.push(p);
                first.get_or_insert(*w);
            }
            ok => return Ok(ok),
        }
    }
    let Some(mut w) = first else {
        return Err(Error::Consistency("no codes enumerated".into()));
    };
    // Keep the codes this pair fails on, so the witness re-checks.
    let mut alts = Vec::new();
    for p in failures {
        let at = through(&sigma_n(w.u.height().unwrap_or(0), t.k()), &p);
        if !linkable(t, &w.u, &w.v, &at)? {
            alts.push(at);
        }
    }
    w.placements = alts;
    w.cpc = None;
    w.obligation = format!("codes of depth at most {depth}");
    w.scope = Scope::Bounded { depth };
    Ok(Verdict::Refuted(Box::new(w)))
}

/// True iff every 1-block whose children all carry `a` is inadmissible. Then
/// no code can glue `v = a` below any block: a code other than `{e}` holds
/// two siblings, and `{e}` puts `v` on every leaf of `u`.
pub fn cpc_sibling_obstruction(t: &TreeShift, a: Symbol, depth: usize) -> Result<Option<Verdict>> {
    let k = t.k();
    for r in 0..t.n_symbols() as Symbol {
        let block = Pattern::from_fn(&Support::delta(1, k), |w| if w.is_root() { r } else { a });
        if t.admissible(&block)? {
            return Ok(None);
        }
    }
    let point = Pattern::point(k, a);
    let alts = (0..depth)
        .flat_map(|l| sigma_n(l, k))
        .map(|z| (0..k).map(|i| z.child(i)).collect())
        .collect();
    let w = Witness::new(&point, &point, alts, "siblings of any code", Scope::Universal("sibling obstruction".into()));
    Ok(Some(Verdict::DecidedFalse(Some(Box::new(w)))))
}

/// Placing `v` at a single node `g` below `u` already fails for every `g`
/// with `n < |g| <= depth`. Any code meets some such `g`, so the pair cannot
/// be joined below a code; the per-node argument does not depend on `g`.
pub fn single_placement_obstruction(
    t: &TreeShift,
    u: &Pattern,
    v: &Pattern,
    depth: usize,
    tag: &str,
) -> Result<Option<Verdict>> {
    let n = u.height().unwrap_or(0);
    let mut alts = Vec::new();
    for l in n + 1..=depth {
        for g in sigma_n(l, t.k()) {
            if linkable(t, u, v, std::slice::from_ref(&g))? {
                return Ok(None);
            }
            alts.push(vec![g]);
        }
    }
    let w = Witness::new(u, v, alts, "one copy of v anywhere below u", Scope::Universal(tag.into()));
    Ok(Some(Verdict::DecidedFalse(Some(Box::new(w)))))
}

/// Least-depth code `P` below `u` with `v` at each element, or why there is none.
pub fn check_cpc_ir_pair(t: &TreeShift, u: &Pattern, v: &Pattern, depth: usize) -> Result<Verdict> {
    if !u.is_block() || v.is_empty() {
        return input("u must be a block and v non-empty");
    }
    let n = u.height().expect("block");
    if !t.admissible(u)? || !t.admissible(v)? {
        return input("both blocks must be admissible");
    }
    match t.engine() {
        Engine::Automaton(a) => cpc_ir_automaton(t, a, u, v, depth),
        _ => {
            let depth = depth.min(4);
            let mut alts = Vec::new();
            for p in Cpc::enumerate(t.k(), n + 1, depth) {
                let at: Vec<TreeWord> = p.elements().iter().cloned().collect();
                if linkable(t, u, v, &at)? {
                    return Ok(Verdict::VerifiedUpTo(Bounds {
                        depth: Some(p.max_len()),
                        cpc: Some(p),
                        ..Bounds::default()
                    }));
                }
                alts.push(at);
            }
            let w = Witness::new(u, v, alts, format!("codes of depth at most {depth}"), Scope::Bounded { depth });
            Ok(Verdict::Refuted(Box::new(w)))
        }
    }
}

/// `h[j]`: states below which some code of relative depth at most `j`
/// carries `v` at every element.
fn code_levels(a: &TreeAutomaton, v: &Pattern, max_j: usize) -> (Vec<Vec<bool>>, Option<usize>) {
    let base = a.entry_states(&crate::hom_construct::Constraints::from_pattern(v));
    let mut h = vec![base.clone()];
    let mut fixed = None;
    while h.len() <= max_j {
        let prev = h.last().expect("non-empty");
        let next: Vec<bool> = (0..a.n_states())
            .map(|q| base[q] || a.pick_move(q as u32, |_| true, |_, r| prev[r as usize]).is_some())
            .collect();
        if &next == prev {
            fixed = Some(h.len() - 1);
            break;
        }
        h.push(next);
    }
    (h, fixed)
}

fn cpc_ir_automaton(t: &TreeShift, a: &TreeAutomaton, u: &Pattern, v: &Pattern, depth: usize) -> Result<Verdict> {
    let n = u.height().expect("block");
    let k = t.k();
    if depth <= n {
        return input("depth budget must exceed the height of u");
    }
    let (h, fixed) = code_levels(a, v, depth - n - 1);
    let nodes: Vec<TreeWord> = (0..=n).flat_map(|i| sigma_n(i, k)).collect();
    // States allowed at each node of u when codes may reach relative depth j.
    let allowed = |j: usize| -> std::collections::BTreeMap<TreeWord, Vec<bool>> {
        let level = &h[j.min(h.len() - 1)];
        let mut s = std::collections::BTreeMap::new();
        for w in nodes.iter().rev() {
            let want = u.get(w).expect("block");
            let set: Vec<bool> = (0..a.n_states())
                .map(|q| {
                    a.labels[q] == want
                        && a
                            .pick_move(q as u32, |_| true, |i, r| {
                                if w.len() == n {
                                    level[r as usize]
                                } else {
                                    s.get(&w.child(i as u8)).is_some_and(|c: &Vec<bool>| c[r as usize])
                                }
                            })
                            .is_some()
                })
                .collect();
            s.insert(w.clone(), set);
        }
        s
    };
    let top = depth - n - 1;
    let reach = fixed.map_or(top, |f| f.min(top));
    for j in 0..=reach {
        let s = allowed(j);
        let root = &s[&TreeWord::root()];
        let Some(start) = a.roots.iter().copied().find(|&r| root[r as usize]) else {
            continue;
        };
        let code = extract_code(a, &h, &s, n, j, start);
        let p = Cpc::new(k, code.iter().cloned())?;
        if !linkable(t, u, v, &code)? {
            return Err(Error::Consistency("code found by the automaton does not glue".into()));
        }
        return Ok(Verdict::VerifiedUpTo(Bounds {
            depth: Some(p.max_len()),
            cpc: Some(p),
            ..Bounds::default()
        }));
    }
    let uniform: Vec<Vec<TreeWord>> = (n + 1..=depth.min(n + 3)).map(|l| sigma_n(l, k)).collect();
    match fixed {
        Some(f) if f <= top => {
            let w = Witness::new(
                u,
                v,
                uniform,
                format!("state sets stabilise after {f} levels below u"),
                Scope::Universal("fixpoint".into()),
            );
            Ok(Verdict::DecidedFalse(Some(Box::new(w))))
        }
        _ => {
            let w = Witness::new(u, v, uniform, format!("codes of depth at most {depth}"), Scope::Bounded { depth });
            Ok(Verdict::Refuted(Box::new(w)))
        }
    }
}

fn extract_code(
    a: &TreeAutomaton,
    h: &[Vec<bool>],
    s: &std::collections::BTreeMap<TreeWord, Vec<bool>>,
    n: usize,
    j: usize,
    start: u32,
) -> Vec<TreeWord> {
    let base = &h[0];
    let mut code = Vec::new();
    let mut stack = vec![(TreeWord::root(), start, usize::MAX)];
    while let Some((w, q, left)) = stack.pop() {
        if w.len() <= n {
            let mv = a
                .pick_move(q, |_| true, |i, r| {
                    if w.len() == n {
                        h[j.min(h.len() - 1)][r as usize]
                    } else {
                        s[&w.child(i as u8)][r as usize]
                    }
                })
                .expect("state was feasible");
            for (i, &r) in mv.iter().enumerate() {
                let next = if w.len() == n { j } else { usize::MAX };
                stack.push((w.child(i as u8), r, next));
            }
        } else if base[q as usize] {
            code.push(w);
        } else {
            let lower = &h[(left - 1).min(h.len() - 1)];
            let mv = a
                .pick_move(q, |_| true, |_, r| lower[r as usize])
                .expect("state reaches a code");
            for (i, &r) in mv.iter().enumerate() {
                stack.push((w.child(i as u8), r, left - 1));
            }
        }
    }
    code.sort();
    code
}

/// Strong irreducibility at distance `gap` for patterns on supports of
/// height at most `support_height` and positions of length at most `depth`.
pub fn check_si(t: &TreeShift, gap: usize, b: &Budget) -> Result<Verdict> {
    let mut meter = Meter::new(b);
    let pats = pattern_pool(t, b)?;
    for (su, us) in &pats {
        let ws = far_positions(su, gap, b.depth, canonical(t, b));
        for u in us {
            for (_, vs) in &pats {
                for v in vs {
                    for w in &ws {
                        if !meter.link(t, u, v, std::slice::from_ref(w))? {
                            return Ok(exact(u, v, vec![w.clone()], format!("distance {gap}")));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::VerifiedUpTo(Bounds {
        gap: Some(gap),
        depth: Some(b.depth),
        support_height: Some(b.support_height),
        ..Bounds::default()
    }))
}

fn pattern_pool(t: &TreeShift, b: &Budget) -> Result<Vec<(Support, Vec<Pattern>)>> {
    supports_up_to(t.k(), b.support_height)?
        .into_iter()
        .map(|s| {
            let ps = patterns_on(t, &s)?;
            Ok((s, ps))
        })
        .collect()
}

/// Uniform CPC strong irreducibility: `v` at every `w z`, `w` on the boundary
/// of `u` and `z` in `Sigma^gap`.
pub fn check_cpc_usi(t: &TreeShift, gap: usize, b: &Budget) -> Result<Verdict> {
    let mut meter = Meter::new(b);
    let pats = pattern_pool(t, b)?;
    let code = Cpc::uniform(gap, t.k());
    for (su, us) in &pats {
        let edge: Vec<TreeWord> = boundary(su)?.into_iter().collect();
        let at = through(&edge, &code);
        for u in us {
            for (_, vs) in &pats {
                for v in vs {
                    if !meter.link(t, u, v, &at)? {
                        return Ok(exact(u, v, at, format!("uniform code of length {gap} below the boundary")));
                    }
                }
            }
        }
    }
    Ok(Verdict::VerifiedUpTo(Bounds {
        gap: Some(gap),
        cpc: Some(code),
        support_height: Some(b.support_height),
        ..Bounds::default()
    }))
}

/// One CPC strong irreducibility obligation: `v` at `w z` for every `w` on the
/// boundary of `u` and `z` in `p`.
pub fn check_cpc_si_code(t: &TreeShift, p: &Cpc, u: &Pattern, v: &Pattern) -> Result<Verdict> {
    let edge: Vec<TreeWord> = boundary(&u.support())?.into_iter().collect();
    let at = through(&edge, p);
    if linkable(t, u, v, &at)? {
        return Ok(Verdict::VerifiedUpTo(Bounds {
            cpc: Some(p.clone()),
            ..Bounds::default()
        }));
    }
    let mut w = Witness::new(u, v, vec![at], format!("code {p} below the boundary"), Scope::Exact);
    w.cpc = Some(p.clone());
    Ok(Verdict::Refuted(Box::new(w)))
}

/// Topological mixing for labelings of `h1` and `h2` and positions `w` with
/// `d(w, h1) >= gap`, `|w| <= depth`.
pub fn check_tm_pair(t: &TreeShift, h1: &Support, h2: &Support, gap: usize, b: &Budget) -> Result<Verdict> {
    let mut meter = Meter::new(b);
    let chain = uses_hom(t, b) && h1.is_delta();
    let (firsts, ws) = if chain {
        let n = h1.height().unwrap_or(0);
        let ws = (n + gap..=b.depth).map(|l| TreeWord::repeat(0, l)).collect();
        (root_blocks(t, n, b)?, ws)
    } else {
        let ws = if h1.is_empty() {
            (0..=b.depth).flat_map(|l| sigma_n(l, t.k())).collect()
        } else {
            far_positions(h1, gap, b.depth, canonical(t, b))
        };
        (patterns_on(t, h1)?, ws)
    };
    let seconds = if h2.is_empty() {
        vec![Pattern::empty(t.k())]
    } else {
        patterns_on(t, h2)?
    };
    for a in &firsts {
        for c in &seconds {
            for w in &ws {
                if !meter.link(t, a, c, std::slice::from_ref(w))? {
                    return Ok(exact(a, c, vec![w.clone()], format!("mixing at distance {gap}")));
                }
            }
        }
    }
    Ok(Verdict::VerifiedUpTo(Bounds {
        gap: Some(gap),
        depth: Some(b.depth),
        ..Bounds::default()
    }))
}

/// Irreducibility: every pair joins at some `w` outside `Delta_n` with
/// `|w| <= depth`.
pub fn check_ir(t: &TreeShift, b: &Budget) -> Result<Verdict> {
    let mut meter = Meter::new(b);
    for n in 0..=b.n_max {
        let us = root_blocks(t, n, b)?;
        let ws: Vec<TreeWord> = if uses_hom(t, b) {
            (n + 1..=b.depth).map(|l| TreeWord::repeat(0, l)).collect()
        } else {
            far_positions(&Support::delta(n, t.k()), 1, b.depth, canonical(t, b))
        };
        for m in 0..=b.m_max {
            for u in &us {
                for v in &t.blocks(m)? {
                    if !ir_pair(t, u, v, &ws, &mut meter)? {
                        let alts = ws.iter().map(|w| vec![w.clone()]).collect();
                        let w = Witness::new(u, v, alts, "some position outside u", Scope::Bounded { depth: b.depth });
                        return Ok(Verdict::Refuted(Box::new(w)));
                    }
                }
            }
        }
    }
    Ok(Verdict::VerifiedUpTo(b.bounds()))
}

fn ir_pair(t: &TreeShift, u: &Pattern, v: &Pattern, ws: &[TreeWord], meter: &mut Meter) -> Result<bool> {
    for w in ws {
        if meter.link(t, u, v, std::slice::from_ref(w))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The least `w` outside `Delta_n` (canonical when allowed) joining the pair.
pub fn ir_link(t: &TreeShift, u: &Pattern, v: &Pattern, b: &Budget) -> Result<Option<TreeWord>> {
    let n = u.height().unwrap_or(0);
    let ws = far_positions(&Support::delta(n, t.k()), 1, b.depth, canonical(t, b));
    for w in ws {
        if linkable(t, u, v, std::slice::from_ref(&w))? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Distinct code placements, used by tests.
pub fn code_placements(n: usize, p: &Cpc, k: u8) -> BTreeSet<TreeWord> {
    through(&sigma_n(n, k), p).into_iter().collect()
}
