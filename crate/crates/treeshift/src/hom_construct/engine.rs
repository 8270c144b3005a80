//! Top-down tree automata and the joint-constraint solver.
//!
//! A query is a partial labeling of finitely many nodes. Its prefix closure is
//! turned into a trie, equal subtrees are shared, and a bottom-up pass computes
//! for every distinct subtree the automaton states that can sit at its root.
//! Because every state of an essential automaton has an infinite run below it,
//! a state set that is non-empty at the root means the labeling extends to a
//! full tree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::shift_core::{BdProfile, Symbol};
use crate::tree_core::{Pattern, TreeWord};

const NONE: u32 = u32::MAX;

/// Partial labeling of the tree, built by overlaying patterns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    labels: BTreeMap<TreeWord, Symbol>,
    free: BTreeSet<TreeWord>,
}

impl Constraints {
    pub fn new() -> Self {
        Constraints::default()
    }

    pub fn fix(&mut self, w: TreeWord, a: Symbol) -> bool {
        match self.labels.get(&w) {
            Some(&b) => a == b,
            None => {
                self.labels.insert(w, a);
                true
            }
        }
    }

    /// Copies `p` to the subtree at `at`; false if a node is already fixed to a
    /// different symbol.
    pub fn place(&mut self, p: &Pattern, at: &TreeWord) -> bool {
        p.labels().iter().all(|(w, &a)| self.fix(at.concat(w), a))
    }

    /// Asks for a label at `w` in the solution without constraining it.
    pub fn include(&mut self, w: TreeWord) {
        self.free.insert(w);
    }

    pub fn from_pattern(p: &Pattern) -> Self {
        Constraints {
            labels: p.labels().clone(),
            free: BTreeSet::new(),
        }
    }

    fn nodes(&self) -> impl Iterator<Item = (&TreeWord, Option<Symbol>)> {
        self.labels
            .iter()
            .map(|(w, &a)| (w, Some(a)))
            .chain(self.free.iter().map(|w| (w, None)))
    }

    pub fn labels(&self) -> &BTreeMap<TreeWord, Symbol> {
        &self.labels
    }

    pub fn free(&self) -> &BTreeSet<TreeWord> {
        &self.free
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty() && self.free.is_empty()
    }
}

struct Trie {
    k: usize,
    labels: Vec<Option<Symbol>>,
    children: Vec<u32>,
}

impl Trie {
    fn build(c: &Constraints, k: usize) -> Trie {
        let mut t = Trie {
            k,
            labels: vec![None],
            children: vec![NONE; k],
        };
        for (w, a) in c.nodes() {
            let mut node = 0usize;
            for &d in w.dirs() {
                let slot = node * k + d as usize;
                if t.children[slot] == NONE {
                    t.children[slot] = t.labels.len() as u32;
                    t.labels.push(None);
                    t.children.extend(std::iter::repeat(NONE).take(k));
                }
                node = t.children[slot] as usize;
            }
            if a.is_some() {
                t.labels[node] = a;
            }
        }
        t
    }

    fn kids(&self, node: usize) -> &[u32] {
        &self.children[node * self.k..(node + 1) * self.k]
    }

    fn len(&self) -> usize {
        self.labels.len()
    }

    /// Shares equal subtrees. Returns the class of every node and the classes
    /// as (label, child classes), children always before parents.
    fn intern(&self) -> (Vec<u32>, Vec<(Option<Symbol>, Vec<u32>)>) {
        let mut class = vec![0u32; self.len()];
        let mut ids: HashMap<(Option<Symbol>, Vec<u32>), u32> = HashMap::new();
        let mut classes = Vec::new();
        // Nodes are created after their parents, so reverse order is bottom-up.
        for node in (0..self.len()).rev() {
            let kids: Vec<u32> = self
                .kids(node)
                .iter()
                .map(|&c| if c == NONE { NONE } else { class[c as usize] })
                .collect();
            let key = (self.labels[node], kids);
            class[node] = *ids.entry(key.clone()).or_insert_with(|| {
                classes.push(key);
                classes.len() as u32 - 1
            });
        }
        (class, classes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Moves {
    /// Per state and direction, the allowed child states; children are chosen
    /// independently.
    Product(Vec<Vec<Vec<u32>>>),
    /// Per state, the allowed tuples of child states.
    Tuples(Vec<Vec<Vec<u32>>>),
}

/// Top-down automaton on k-ary trees; a run labels each node by its state's
/// symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TreeAutomaton {
    pub k: usize,
    pub labels: Vec<Symbol>,
    pub roots: Vec<u32>,
    pub moves: Moves,
}

impl TreeAutomaton {
    pub fn n_states(&self) -> usize {
        self.labels.len()
    }

    /// Keeps only states with an infinite run below them (greatest fixed point).
    pub fn essentialize(self) -> Self {
        let n = self.labels.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for q in 0..n {
                if !alive[q] {
                    continue;
                }
                let ok = match &self.moves {
                    Moves::Product(s) => s[q]
                        .iter()
                        .all(|succ| succ.iter().any(|&r| alive[r as usize])),
                    Moves::Tuples(t) => t[q]
                        .iter()
                        .any(|tup| tup.iter().all(|&r| alive[r as usize])),
                };
                if !ok {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut index = vec![NONE; n];
        let mut labels = Vec::new();
        for q in 0..n {
            if alive[q] {
                index[q] = labels.len() as u32;
                labels.push(self.labels[q]);
            }
        }
        let keep = |v: &[u32]| -> Vec<u32> {
            v.iter()
                .filter(|&&r| alive[r as usize])
                .map(|&r| index[r as usize])
                .collect()
        };
        let moves = match &self.moves {
            Moves::Product(s) => Moves::Product(
                (0..n)
                    .filter(|&q| alive[q])
                    .map(|q| s[q].iter().map(|succ| keep(succ)).collect())
                    .collect(),
            ),
            Moves::Tuples(t) => Moves::Tuples(
                (0..n)
                    .filter(|&q| alive[q])
                    .map(|q| {
                        t[q].iter()
                            .filter(|tup| tup.iter().all(|&r| alive[r as usize]))
                            .map(|tup| tup.iter().map(|&r| index[r as usize]).collect())
                            .collect()
                    })
                    .collect(),
            ),
        };
        TreeAutomaton {
            k: self.k,
            labels,
            roots: keep(&self.roots),
            moves,
        }
    }

    /// A move of `q` whose child at each direction `i` satisfies `ok(i, state)`
    /// wherever `constrained(i)` holds; the least one in canonical order.
    pub fn pick_move(
        &self,
        q: u32,
        constrained: impl Fn(usize) -> bool,
        ok: impl Fn(usize, u32) -> bool,
    ) -> Option<Vec<u32>> {
        match &self.moves {
            Moves::Product(s) => {
                let mut out = Vec::with_capacity(self.k);
                for (i, succ) in s[q as usize].iter().enumerate() {
                    let r = if constrained(i) {
                        *succ.iter().find(|&&r| ok(i, r))?
                    } else {
                        *succ.first()?
                    };
                    out.push(r);
                }
                Some(out)
            }
            Moves::Tuples(t) => t[q as usize]
                .iter()
                .find(|tup| tup.iter().enumerate().all(|(i, &r)| !constrained(i) || ok(i, r)))
                .cloned(),
        }
    }

    /// For product automata: the child state in direction `i` carrying `a`,
    /// when it is unique.
    pub fn next(&self, q: u32, i: usize, a: Symbol) -> Option<u32> {
        match &self.moves {
            Moves::Product(s) => s[q as usize][i]
                .iter()
                .copied()
                .find(|&r| self.labels[r as usize] == a),
            Moves::Tuples(_) => None,
        }
    }

    pub fn root_with(&self, a: Symbol) -> Option<u32> {
        self.roots
            .iter()
            .copied()
            .find(|&r| self.labels[r as usize] == a)
    }

    /// True when every node's state is determined by its parent's state, the
    /// direction and its own label.
    pub fn is_label_deterministic(&self) -> bool {
        let unique = |v: &[u32]| {
            let mut seen: Vec<Symbol> = v.iter().map(|&r| self.labels[r as usize]).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        match &self.moves {
            Moves::Product(s) => unique(&self.roots) && s.iter().flatten().all(|v| unique(v)),
            Moves::Tuples(_) => false,
        }
    }

    /// States that may sit at the root of each interned class.
    fn class_states(&self, classes: &[(Option<Symbol>, Vec<u32>)]) -> Vec<Vec<bool>> {
        let n = self.n_states();
        let mut sets: Vec<Vec<bool>> = Vec::with_capacity(classes.len());
        for (label, kids) in classes {
            let mut f = vec![false; n];
            for q in 0..n {
                if label.is_some_and(|a| self.labels[q] != a) {
                    continue;
                }
                f[q] = self
                    .pick_move(q as u32, |i| kids[i] != NONE, |i, r| sets[kids[i] as usize][r as usize])
                    .is_some();
            }
            sets.push(f);
        }
        sets
    }

    /// States from which the constraints (rooted at the node) can be met,
    /// ignoring the root restriction.
    pub fn entry_states(&self, c: &Constraints) -> Vec<bool> {
        let trie = Trie::build(c, self.k);
        let (class, classes) = trie.intern();
        let sets = self.class_states(&classes);
        sets[class[0] as usize].clone()
    }

    fn solve(&self, c: &Constraints, with_witness: bool) -> Option<Option<Pattern>> {
        let trie = Trie::build(c, self.k);
        let (class, classes) = trie.intern();
        let sets = self.class_states(&classes);
        let root_set = &sets[class[0] as usize];
        let start = self.roots.iter().copied().find(|&r| root_set[r as usize])?;
        if !with_witness {
            return Some(None);
        }
        let mut labels = BTreeMap::new();
        let mut stack = vec![(0usize, start, TreeWord::root())];
        while let Some((node, q, w)) = stack.pop() {
            let kids = trie.kids(node);
            let mv = self
                .pick_move(q, |i| kids[i] != NONE, |i, r| {
                    sets[class[kids[i] as usize] as usize][r as usize]
                })
                .expect("feasible state has a consistent move");
            for (i, &c) in kids.iter().enumerate() {
                if c != NONE {
                    stack.push((c as usize, mv[i], w.child(i as u8)));
                }
            }
            labels.insert(w, self.labels[q as usize]);
        }
        if c.is_empty() {
            labels.clear();
        }
        Some(Some(Pattern::new(self.k as u8, labels).expect("trie is prefix-closed")))
    }
}

/// The compiled form of a tree-shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Engine {
    Automaton(TreeAutomaton),
    /// Hom tree-shift of a bounded-density shift. Lowering 1s to 0s keeps a
    /// tree inside, so free nodes can always be set to 0.
    Density { profile: BdProfile, k: usize },
    /// Trees constant on every level.
    Layer { k: usize },
}

impl Engine {
    pub fn feasible(&self, c: &Constraints) -> bool {
        match self {
            Engine::Automaton(a) => a.solve(c, false).is_some(),
            _ => self.solve(c).is_some(),
        }
    }

    /// A labeling of the prefix closure of `c` that agrees with `c` and extends
    /// to a tree of the shift.
    pub fn solve(&self, c: &Constraints) -> Option<Pattern> {
        match self {
            Engine::Automaton(a) => a.solve(c, true).map(|w| w.expect("witness requested")),
            Engine::Density { profile, k } => {
                let trie = Trie::build(c, *k);
                let mut labels = BTreeMap::new();
                let mut history = Vec::new();
                if !density_walk(&trie, profile, 0, TreeWord::root(), &mut history, &mut labels) {
                    return None;
                }
                if c.is_empty() {
                    labels.clear();
                }
                Some(Pattern::new(*k as u8, labels).expect("trie is prefix-closed"))
            }
            Engine::Layer { k } => {
                let mut level: Vec<Option<Symbol>> = Vec::new();
                for (w, &a) in c.labels() {
                    if level.len() <= w.len() {
                        level.resize(w.len() + 1, None);
                    }
                    match level[w.len()] {
                        Some(b) if b != a => return None,
                        _ => level[w.len()] = Some(a),
                    }
                }
                let closure = crate::tree_core::Support::closure(*k as u8, c.nodes().map(|(w, _)| w.clone()))
                    .expect("constraint addresses are valid");
                Some(Pattern::from_fn(&closure, |w| level[w.len()].unwrap_or(0)))
            }
        }
    }
}

/// True iff adding `history.last()` keeps every window ending there within
/// the profile.
pub(crate) fn density_ok(profile: &BdProfile, history: &[Symbol]) -> bool {
    if history.last() != Some(&1) {
        return true;
    }
    let mut sum = 0u64;
    for (len, &s) in history.iter().rev().enumerate() {
        sum += s as u64;
        if sum > profile.eval(len as u64 + 1) {
            return false;
        }
    }
    true
}

fn density_walk(
    trie: &Trie,
    profile: &BdProfile,
    node: usize,
    w: TreeWord,
    history: &mut Vec<Symbol>,
    labels: &mut BTreeMap<TreeWord, Symbol>,
) -> bool {
    let a = trie.labels[node].unwrap_or(0);
    history.push(a);
    let mut ok = density_ok(profile, history);
    if ok {
        for (i, &c) in trie.kids(node).iter().enumerate() {
            if c != NONE && !density_walk(trie, profile, c as usize, w.child(i as u8), history, labels) {
                ok = false;
                break;
            }
        }
    }
    history.pop();
    labels.insert(w, a);
    ok
}
