//! Tree-shifts built from one-sided shifts, forbidden-set translation in both
//! directions, block enumeration, and the axial product.

mod engine;
mod format;

use std::collections::{BTreeSet, HashMap, HashSet};

pub use engine::Constraints;
pub(crate) use engine::{density_ok, Engine, Moves, TreeAutomaton};

use crate::error::{input, resource, Result};
use crate::shift_core::{AdjacencyMatrix, Alphabet, Language, ShiftSpec, Symbol, Word, WordSftSpec};
use crate::tree_core::{sigma_n, Pattern, Support, TreeWord};

/// Largest number of labelings of one forbidden-block shape that is expanded.
pub const MAX_SHAPE_LABELINGS: u64 = 1 << 20;
/// Largest block height accepted by [`enumerate_tree_blocks`].
pub const MAX_BLOCK_HEIGHT: usize = 6;
/// Default cap on the number of blocks one enumeration may return.
pub const DEFAULT_BLOCK_LIMIT: usize = 1 << 21;

/// A finite presentation of a tree-shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeShiftSpec {
    /// Trees whose every chain reads a point of `shift`.
    Hom { shift: ShiftSpec, k: u8 },
    /// `A_i(t_w, t_wi) = 1` for every node and direction; `k` is the number
    /// of matrices.
    MarkovTree {
        alphabet: Alphabet,
        matrices: Vec<AdjacencyMatrix>,
    },
    /// Trees avoiding every listed `height`-block.
    Explicit {
        alphabet: Alphabet,
        k: u8,
        height: usize,
        forbidden: BTreeSet<Pattern>,
    },
    /// Trees constant on each level. Its forbidden set is infinite, so it gets
    /// its own variant.
    LayerConstant { alphabet: Alphabet, k: u8 },
}

fn check_k(k: u8) -> Result<()> {
    if !(2..=10).contains(&k) {
        return input(format!("branching factor {k} outside 2..=10"));
    }
    Ok(())
}

impl TreeShiftSpec {
    pub fn hom(shift: ShiftSpec, k: u8) -> Result<Self> {
        check_k(k)?;
        Ok(TreeShiftSpec::Hom { shift, k })
    }

    pub fn markov_tree(alphabet: Alphabet, matrices: Vec<AdjacencyMatrix>) -> Result<Self> {
        check_k(matrices.len().min(255) as u8)?;
        if matrices.iter().any(|m| m.dim() != alphabet.len()) {
            return input("every matrix must match the alphabet size");
        }
        Ok(TreeShiftSpec::MarkovTree { alphabet, matrices })
    }

    /// `height` is taken from the blocks when present.
    pub fn explicit(
        alphabet: Alphabet,
        k: u8,
        forbidden: impl IntoIterator<Item = Pattern>,
        height: Option<usize>,
    ) -> Result<Self> {
        check_k(k)?;
        let forbidden: BTreeSet<Pattern> = forbidden.into_iter().collect();
        let h = match (forbidden.iter().next(), height) {
            (Some(p), _) => p.height().unwrap_or(0),
            (None, Some(h)) => h,
            (None, None) => 0,
        };
        for p in &forbidden {
            if p.k() != k || !p.is_block() || p.height() != Some(h) {
                return input("forbidden blocks must all be full blocks of one height");
            }
            for &a in p.labels().values() {
                alphabet.check_word(&[a])?;
            }
        }
        if height.is_some_and(|given| given != h) {
            return input("declared height disagrees with the blocks");
        }
        Ok(TreeShiftSpec::Explicit {
            alphabet,
            k,
            height: h,
            forbidden,
        })
    }

    pub fn layer_constant(alphabet: Alphabet, k: u8) -> Result<Self> {
        check_k(k)?;
        Ok(TreeShiftSpec::LayerConstant { alphabet, k })
    }

    pub fn k(&self) -> u8 {
        match self {
            TreeShiftSpec::Hom { k, .. }
            | TreeShiftSpec::Explicit { k, .. }
            | TreeShiftSpec::LayerConstant { k, .. } => *k,
            TreeShiftSpec::MarkovTree { matrices, .. } => matrices.len() as u8,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            TreeShiftSpec::Hom { shift, .. } => shift.alphabet(),
            TreeShiftSpec::MarkovTree { alphabet, .. }
            | TreeShiftSpec::Explicit { alphabet, .. }
            | TreeShiftSpec::LayerConstant { alphabet, .. } => alphabet.clone(),
        }
    }

    pub fn variant(&self) -> &'static str {
        match self {
            TreeShiftSpec::Hom { .. } => "hom",
            TreeShiftSpec::MarkovTree { .. } => "markov_tree",
            TreeShiftSpec::Explicit { .. } => "explicit",
            TreeShiftSpec::LayerConstant { .. } => "layer_constant",
        }
    }

    pub fn is_hom(&self) -> bool {
        matches!(self, TreeShiftSpec::Hom { .. })
    }

    /// The underlying one-sided shift of a hom spec.
    pub fn hom_shift(&self) -> Option<&ShiftSpec> {
        match self {
            TreeShiftSpec::Hom { shift, .. } => Some(shift),
            _ => None,
        }
    }

    /// True iff swapping the subtrees of any two siblings maps the shift to
    /// itself.
    pub fn is_symmetric(&self) -> bool {
        match self {
            TreeShiftSpec::Hom { .. } | TreeShiftSpec::LayerConstant { .. } => true,
            TreeShiftSpec::MarkovTree { matrices, .. } => matrices.windows(2).all(|w| w[0] == w[1]),
            TreeShiftSpec::Explicit {
                k,
                height,
                forbidden,
                ..
            } => {
                let inner: Vec<TreeWord> = (0..*height).flat_map(|i| sigma_n(i, *k)).collect();
                forbidden.iter().all(|p| {
                    inner.iter().all(|y| {
                        (1..*k).all(|j| forbidden.contains(&swap_children(p, y, j - 1, j)))
                    })
                })
            }
        }
    }

    pub fn compile(&self) -> Result<TreeShift> {
        let engine = match self {
            TreeShiftSpec::Hom { shift, k } => match shift.language()? {
                Language::Density(profile) => Engine::Density {
                    profile,
                    k: *k as usize,
                },
                Language::Regular { dfa, .. } => {
                    let d = dfa.n_symbols;
                    let mut ids: HashMap<(u32, Symbol), u32> = HashMap::new();
                    let mut states: Vec<(u32, Symbol)> = Vec::new();
                    let mut intern = |q: u32, a: Symbol, states: &mut Vec<(u32, Symbol)>| {
                        *ids.entry((q, a)).or_insert_with(|| {
                            states.push((q, a));
                            states.len() as u32 - 1
                        })
                    };
                    let mut roots = Vec::new();
                    if let Some(s) = dfa.start {
                        for a in 0..d as Symbol {
                            if let Some(q) = dfa.step(s, a) {
                                roots.push(intern(q, a, &mut states));
                            }
                        }
                    }
                    let mut succ: Vec<Vec<Vec<u32>>> = Vec::new();
                    let mut i = 0;
                    while i < states.len() {
                        let (q, _) = states[i];
                        let mut next = Vec::new();
                        for a in 0..d as Symbol {
                            if let Some(r) = dfa.step(q, a) {
                                next.push(intern(r, a, &mut states));
                            }
                        }
                        succ.push(vec![next; *k as usize]);
                        i += 1;
                    }
                    Engine::Automaton(
                        TreeAutomaton {
                            k: *k as usize,
                            labels: states.iter().map(|&(_, a)| a).collect(),
                            roots,
                            moves: Moves::Product(succ),
                        }
                        .essentialize(),
                    )
                }
            },
            TreeShiftSpec::MarkovTree { alphabet, matrices } => {
                let d = alphabet.len();
                let succ = (0..d)
                    .map(|a| {
                        matrices
                            .iter()
                            .map(|m| m.successors(a).map(|b| b as u32).collect())
                            .collect()
                    })
                    .collect();
                Engine::Automaton(
                    TreeAutomaton {
                        k: matrices.len(),
                        labels: (0..d as Symbol).collect(),
                        roots: (0..d as u32).collect(),
                        moves: Moves::Product(succ),
                    }
                    .essentialize(),
                )
            }
            TreeShiftSpec::Explicit {
                alphabet,
                k,
                height,
                forbidden,
            } => Engine::Automaton(explicit_automaton(alphabet.len(), *k, *height, forbidden)?),
            TreeShiftSpec::LayerConstant { k, .. } => Engine::Layer { k: *k as usize },
        };
        Ok(TreeShift {
            spec: self.clone(),
            engine,
        })
    }
}

/// Swaps the subtrees at `y i` and `y j`.
pub fn swap_children(p: &Pattern, y: &TreeWord, i: u8, j: u8) -> Pattern {
    let (yi, yj) = (y.child(i), y.child(j));
    let swapped = p
        .labels()
        .iter()
        .map(|(w, &a)| {
            let w = if let Some(rest) = w.strip_prefix(&yi) {
                yj.concat(&rest)
            } else if let Some(rest) = w.strip_prefix(&yj) {
                yi.concat(&rest)
            } else {
                w.clone()
            };
            (w, a)
        })
        .collect();
    Pattern::new(p.k(), swapped).expect("swapping siblings keeps prefix closure")
}

/// Nodes of `Delta_n` in breadth-first order.
fn bfs_nodes(n: usize, k: u8) -> Vec<TreeWord> {
    (0..=n).flat_map(|i| sigma_n(i, k)).collect()
}

/// Higher-block recoding: the state at a node is the `(h-1)`-block below it,
/// and a move is a non-forbidden `h`-block.
fn explicit_automaton(d: usize, k: u8, height: usize, forbidden: &BTreeSet<Pattern>) -> Result<TreeAutomaton> {
    // A forbidden symbol is the same as forbidding every 1-block rooted at it.
    let (h, forbidden): (usize, BTreeSet<Pattern>) = if height == 0 {
        let mut out = BTreeSet::new();
        let shape = Support::delta(1, k);
        for p in forbidden {
            let a = p.get(&TreeWord::root()).expect("0-block has a root");
            for rest in 0..(d as u64).pow(k as u32) {
                let mut r = rest;
                out.insert(Pattern::from_fn(&shape, |w| {
                    if w.is_root() {
                        a
                    } else {
                        let s = (r % d as u64) as Symbol;
                        r /= d as u64;
                        s
                    }
                }));
            }
        }
        (1, out)
    } else {
        (height, forbidden.clone())
    };
    let nodes = bfs_nodes(h, k);
    let total = (d as f64).powi(nodes.len() as i32);
    if total > MAX_SHAPE_LABELINGS as f64 {
        return resource("labelings of the forbidden-block shape", MAX_SHAPE_LABELINGS);
    }
    let pos: HashMap<&TreeWord, usize> = nodes.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let inner = bfs_nodes(h - 1, k);
    let n_states = d.pow(inner.len() as u32);
    // Digit positions of the state at the root and at each child.
    let at = |prefix: &TreeWord| -> Vec<usize> { inner.iter().map(|w| pos[&prefix.concat(w)]).collect() };
    let root_digits = at(&TreeWord::root());
    let child_digits: Vec<Vec<usize>> = (0..k).map(|i| at(&TreeWord::new(vec![i]))).collect();
    let encode = |labels: &[Symbol], digits: &[usize]| -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, &p| acc * d as u64 + labels[p] as u64) as u32
    };
    let banned: HashSet<Vec<Symbol>> = forbidden
        .iter()
        .map(|p| nodes.iter().map(|w| p.get(w).expect("full block")).collect())
        .collect();
    let mut tuples: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n_states];
    let mut labels = vec![0 as Symbol; nodes.len()];
    for _ in 0..total as u64 {
        if !banned.contains(&labels) {
            let s = encode(&labels, &root_digits);
            tuples[s as usize].push(child_digits.iter().map(|dg| encode(&labels, dg)).collect());
        }
        // Odometer over labelings, first node least significant.
        for l in labels.iter_mut() {
            *l += 1;
            if (*l as usize) < d {
                break;
            }
            *l = 0;
        }
    }
    for t in &mut tuples {
        t.sort();
        t.dedup();
    }
    // Digit 0 of a state is its root label.
    let state_labels = (0..n_states).map(|s| (s % d) as Symbol).collect();
    Ok(TreeAutomaton {
        k: k as usize,
        labels: state_labels,
        roots: (0..n_states as u32).collect(),
        moves: Moves::Tuples(tuples),
    }
    .essentialize())
}

/// A compiled tree-shift, ready for admissibility queries.
#[derive(Clone, Debug)]
pub struct TreeShift {
    spec: TreeShiftSpec,
    engine: Engine,
}

impl TreeShift {
    pub fn spec(&self) -> &TreeShiftSpec {
        &self.spec
    }

    pub fn k(&self) -> u8 {
        self.spec.k()
    }

    pub fn n_symbols(&self) -> usize {
        self.spec.alphabet().len()
    }

    pub(crate) fn engine(&self) -> &Engine {
        &self.engine
    }

    /// True iff the tree-shift has no points.
    pub fn is_empty(&self) -> bool {
        !self.engine.feasible(&Constraints::new())
    }

    fn check(&self, c: &Constraints) -> Result<()> {
        let d = self.n_symbols();
        for (w, &a) in c.labels() {
            w.check(self.k())?;
            if a as usize >= d {
                return input(format!("symbol {a} outside the alphabet at {w}"));
            }
        }
        for w in c.free() {
            w.check(self.k())?;
        }
        Ok(())
    }

    /// A labeling of the closure of `c` that extends to a point, if any.
    pub fn solve(&self, c: &Constraints) -> Result<Option<Pattern>> {
        self.check(c)?;
        Ok(self.engine.solve(c))
    }

    pub fn feasible(&self, c: &Constraints) -> Result<bool> {
        self.check(c)?;
        Ok(self.engine.feasible(c))
    }

    /// An admissible labeling of `support` agreeing with `p`, if any.
    pub fn extend(&self, p: &Pattern, support: &Support) -> Result<Option<Pattern>> {
        let mut c = Constraints::from_pattern(p);
        for w in support.nodes() {
            c.include(w.clone());
        }
        Ok(self.solve(&c)?.map(|t| t.restrict(support).expect("solution covers the support")))
    }

    pub fn admissible(&self, p: &Pattern) -> Result<bool> {
        if p.k() != self.k() {
            return input("pattern and tree-shift disagree on k");
        }
        self.feasible(&Constraints::from_pattern(p))
    }

    pub fn blocks(&self, n: usize) -> Result<Vec<Pattern>> {
        self.blocks_with_limit(n, DEFAULT_BLOCK_LIMIT)
    }

    /// Admissible `n`-blocks, labeling nodes in breadth-first order and
    /// pruning as soon as a partial block cannot extend.
    pub fn blocks_with_limit(&self, n: usize, limit: usize) -> Result<Vec<Pattern>> {
        if n > MAX_BLOCK_HEIGHT {
            return resource("block height", MAX_BLOCK_HEIGHT as u64);
        }
        let k = self.k();
        let nodes = bfs_nodes(n, k);
        let index: HashMap<&TreeWord, usize> = nodes.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let parent: Vec<Option<usize>> = nodes.iter().map(|w| w.parent().map(|p| index[&p])).collect();
        let level_start: Vec<usize> = nodes.iter().map(|w| index[&TreeWord::repeat(0, w.len())]).collect();
        let mut run = Enumeration {
            shift: self,
            nodes: &nodes,
            parent: &parent,
            level_start: &level_start,
            labels: vec![0; nodes.len()],
            cursors: vec![Cursor::None; nodes.len()],
            out: Vec::new(),
            limit,
        };
        run.dfs(0)?;
        Ok(run.out)
    }
}

#[derive(Clone, Debug)]
enum Cursor {
    None,
    State(u32),
    History(Word),
}

struct Enumeration<'a> {
    shift: &'a TreeShift,
    nodes: &'a [TreeWord],
    parent: &'a [Option<usize>],
    level_start: &'a [usize],
    labels: Vec<Symbol>,
    cursors: Vec<Cursor>,
    out: Vec<Pattern>,
    limit: usize,
}

impl Enumeration<'_> {
    /// Places `a` at node `i`; `None` if the partial block cannot extend.
    fn extend(&self, i: usize, a: Symbol) -> Option<Cursor> {
        let node = &self.nodes[i];
        let dir = node.dirs().last().map(|&d| d as usize);
        match self.shift.engine() {
            Engine::Automaton(aut) if aut.is_label_deterministic() => {
                let q = match (self.parent[i], dir) {
                    (Some(p), Some(d)) => match self.cursors[p] {
                        Cursor::State(q) => aut.next(q, d, a)?,
                        _ => unreachable!("parents carry states"),
                    },
                    _ => aut.root_with(a)?,
                };
                Some(Cursor::State(q))
            }
            Engine::Automaton(_) => {
                let mut c = Constraints::new();
                for j in 0..i {
                    c.fix(self.nodes[j].clone(), self.labels[j]);
                }
                c.fix(node.clone(), a);
                self.shift.engine().feasible(&c).then_some(Cursor::None)
            }
            Engine::Density { profile, .. } => {
                let mut h = match self.parent[i] {
                    Some(p) => match &self.cursors[p] {
                        Cursor::History(h) => h.clone(),
                        _ => unreachable!("parents carry histories"),
                    },
                    None => Vec::new(),
                };
                h.push(a);
                density_ok(profile, &h).then_some(Cursor::History(h))
            }
            Engine::Layer { .. } => {
                let first = self.level_start[i];
                (first == i || self.labels[first] == a).then_some(Cursor::None)
            }
        }
    }

    fn dfs(&mut self, i: usize) -> Result<()> {
        if i == self.nodes.len() {
            if self.out.len() >= self.limit {
                return resource("enumerated blocks", self.limit as u64);
            }
            let labels = self.nodes.iter().cloned().zip(self.labels.iter().copied()).collect();
            self.out.push(Pattern::new(self.shift.k(), labels).expect("full block"));
            return Ok(());
        }
        for a in 0..self.shift.n_symbols() as Symbol {
            if let Some(c) = self.extend(i, a) {
                self.labels[i] = a;
                self.cursors[i] = c;
                self.dfs(i + 1)?;
            }
        }
        Ok(())
    }
}

/// All `(m-1)`-blocks with some root-to-leaf branch spelling a forbidden word.
pub fn f1_from_fx(fx: &WordSftSpec, k: u8) -> Result<BTreeSet<Pattern>> {
    check_k(k)?;
    if fx.m == 0 {
        return input("forbidden-word length must be positive");
    }
    let d = fx.alphabet.len();
    let nodes = bfs_nodes(fx.m - 1, k);
    let total = (d as f64).powi(nodes.len() as i32);
    if total > MAX_SHAPE_LABELINGS as f64 {
        return resource("labelings of the block shape", MAX_SHAPE_LABELINGS);
    }
    let pos: HashMap<&TreeWord, usize> = nodes.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let chains: Vec<Vec<usize>> = sigma_n(fx.m - 1, k)
        .iter()
        .map(|leaf| leaf.prefixes().map(|p| pos[&p]).collect())
        .collect();
    let mut out = BTreeSet::new();
    if fx.forbidden.is_empty() {
        return Ok(out);
    }
    let mut labels = vec![0 as Symbol; nodes.len()];
    let mut word = Vec::with_capacity(fx.m);
    for _ in 0..total as u64 {
        let hit = chains.iter().any(|ch| {
            word.clear();
            word.extend(ch.iter().map(|&p| labels[p]));
            fx.forbidden.contains(&word)
        });
        if hit {
            let map = nodes.iter().cloned().zip(labels.iter().copied()).collect();
            out.insert(Pattern::new(k, map).expect("full block"));
        }
        for l in labels.iter_mut() {
            *l += 1;
            if (*l as usize) < d {
                break;
            }
            *l = 0;
        }
    }
    Ok(out)
}

/// Words whose layer-constant block is forbidden.
pub fn f2_from_ftree(ft: &BTreeSet<Pattern>, alphabet: &Alphabet) -> Result<WordSftSpec> {
    let Some(first) = ft.iter().next() else {
        return WordSftSpec::new(alphabet.clone(), Vec::new());
    };
    let h = first.height().unwrap_or(0);
    let k = first.k();
    for p in ft {
        if !p.is_block() || p.height() != Some(h) || p.k() != k {
            return input("forbidden blocks must all be full blocks of one height");
        }
    }
    let m = h + 1;
    let d = alphabet.len();
    if (d as f64).powi(m as i32) > MAX_SHAPE_LABELINGS as f64 {
        return resource("words of the block height", MAX_SHAPE_LABELINGS);
    }
    let mut words = Vec::new();
    let mut v = vec![0 as Symbol; m];
    for _ in 0..d.pow(m as u32) {
        if ft.contains(&Pattern::layer_constant(&v, k)?) {
            words.push(v.clone());
        }
        for l in v.iter_mut().rev() {
            *l += 1;
            if (*l as usize) < d {
                break;
            }
            *l = 0;
        }
    }
    WordSftSpec::with_length(alphabet.clone(), words, m)
}

pub fn is_tree_pattern_admissible(spec: &TreeShiftSpec, p: &Pattern) -> Result<bool> {
    spec.alphabet().check_word(&p.labels().values().copied().collect::<Vec<_>>())?;
    spec.compile()?.admissible(p)
}

pub fn enumerate_tree_blocks(spec: &TreeShiftSpec, n: usize) -> Result<Vec<Pattern>> {
    spec.compile()?.blocks(n)
}

/// Every maximal single-direction ray inside the support reads an admissible
/// word of `x`.
pub fn axial_admissible(x: &ShiftSpec, p: &Pattern) -> Result<bool> {
    let lang = x.language()?;
    x.alphabet()
        .check_word(&p.labels().values().copied().collect::<Vec<_>>())?;
    for g in p.labels().keys() {
        for i in 0..p.k() {
            // Rays starting inside another ray of the same direction are suffixes.
            if g.dirs().last() == Some(&i) {
                continue;
            }
            let mut word = Vec::new();
            let mut at = g.clone();
            while let Some(a) = p.get(&at) {
                word.push(a);
                at = at.child(i);
            }
            if !lang.accepts(&word) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
