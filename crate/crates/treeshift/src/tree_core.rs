//! Addresses, supports and patterns on the k-ary tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{input, Error, Result};
use crate::shift_core::{Alphabet, Symbol, Word};

/// A node of the k-tree: the directions taken from the root, first step first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeWord(Vec<u8>);

impl TreeWord {
    pub fn new(dirs: Vec<u8>) -> Self {
        TreeWord(dirs)
    }

    pub fn root() -> Self {
        TreeWord(Vec::new())
    }

    /// `d` repeated `n` times.
    pub fn repeat(d: u8, n: usize) -> Self {
        TreeWord(vec![d; n])
    }

    pub fn dirs(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, d: u8) -> Self {
        let mut v = self.0.clone();
        v.push(d);
        TreeWord(v)
    }

    pub fn parent(&self) -> Option<Self> {
        (!self.0.is_empty()).then(|| TreeWord(self.0[..self.0.len() - 1].to_vec()))
    }

    /// The length-`i` prefix.
    pub fn prefix(&self, i: usize) -> Self {
        TreeWord(self.0[..i].to_vec())
    }

    /// All prefixes, from the root up to and including `self`.
    pub fn prefixes(&self) -> impl Iterator<Item = TreeWord> + '_ {
        (0..=self.0.len()).map(|i| self.prefix(i))
    }

    pub fn is_prefix_of(&self, other: &TreeWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, other: &TreeWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TreeWord(v)
    }

    pub fn lcp_len(&self, other: &TreeWord) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }

    /// The suffix after stripping `prefix`, if it is one.
    pub fn strip_prefix(&self, prefix: &TreeWord) -> Option<TreeWord> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| TreeWord(s.to_vec()))
    }

    pub fn check(&self, k: u8) -> Result<()> {
        if self.0.iter().any(|&d| d >= k) {
            return input(format!("address {self} uses a direction outside 0..{k}"));
        }
        Ok(())
    }

    /// Parses `e` for the root or a string of decimal directions.
    pub fn parse(text: &str, k: u8) -> Result<Self> {
        if text == "e" {
            return Ok(TreeWord::root());
        }
        let mut v = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c.to_digit(10) {
                Some(d) if (d as u8) < k => v.push(d as u8),
                _ => return input(format!("bad address {text:?} for k = {k}")),
            }
        }
        if v.is_empty() {
            return input("empty address; use `e` for the root");
        }
        Ok(TreeWord(v))
    }
}

impl fmt::Display for TreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// All words of length `n` in lexicographic order.
pub fn sigma_n(n: usize, k: u8) -> Vec<TreeWord> {
    let mut out = vec![TreeWord::root()];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|w| (0..k).map(move |d| w.child(d)))
            .collect();
    }
    out
}

/// `|x| + |y| - 2 |lcp(x, y)|`.
pub fn word_distance(x: &TreeWord, y: &TreeWord) -> usize {
    x.len() + y.len() - 2 * x.lcp_len(y)
}

pub fn set_distance<'a>(
    h: impl IntoIterator<Item = &'a TreeWord>,
    h2: impl IntoIterator<Item = &'a TreeWord> + Clone,
) -> Result<usize> {
    let mut best: Option<usize> = None;
    for x in h {
        for y in h2.clone() {
            let d = word_distance(x, y);
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best.ok_or_else(|| Error::Input("distance to an empty set".into()))
}

/// A finite prefix-closed set of nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Support {
    k: u8,
    nodes: BTreeSet<TreeWord>,
}

impl Support {
    pub fn new(k: u8, nodes: impl IntoIterator<Item = TreeWord>) -> Result<Self> {
        if k < 2 {
            return input("branching factor must be at least 2");
        }
        let nodes: BTreeSet<TreeWord> = nodes.into_iter().collect();
        for w in &nodes {
            w.check(k)?;
            if let Some(p) = w.parent() {
                if !nodes.contains(&p) {
                    return input(format!("support is not prefix-closed: {w} lacks {p}"));
                }
            }
        }
        Ok(Support { k, nodes })
    }

    /// The smallest prefix-closed set containing `words`.
    pub fn closure(k: u8, words: impl IntoIterator<Item = TreeWord>) -> Result<Self> {
        let mut nodes = BTreeSet::new();
        for w in words {
            w.check(k)?;
            for p in w.prefixes() {
                nodes.insert(p);
            }
        }
        Support::new(k, nodes)
    }

    /// All nodes of depth at most `n`.
    pub fn delta(n: usize, k: u8) -> Self {
        let nodes = (0..=n).flat_map(|i| sigma_n(i, k)).collect();
        Support { k, nodes }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn nodes(&self) -> &BTreeSet<TreeWord> {
        &self.nodes
    }

    pub fn contains(&self, w: &TreeWord) -> bool {
        self.nodes.contains(w)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn height(&self) -> Option<usize> {
        self.nodes.iter().map(TreeWord::len).max()
    }

    /// True iff this is `Delta_n` for some `n`.
    pub fn is_delta(&self) -> bool {
        match self.height() {
            Some(h) => self.len() == Support::delta(h, self.k).len(),
            None => false,
        }
    }
}

/// Nodes of `s` with no child in `s`.
pub fn boundary(s: &Support) -> Result<BTreeSet<TreeWord>> {
    if s.is_empty() {
        return input("boundary of an empty support");
    }
    Ok(s.nodes
        .iter()
        .filter(|w| (0..s.k).all(|d| !s.contains(&w.child(d))))
        .cloned()
        .collect())
}

/// Prefix-freeness plus coverage of every word of length `max |z|`.
pub fn is_cpc<'a>(p: impl IntoIterator<Item = &'a TreeWord>, k: u8) -> bool {
    let p: BTreeSet<&TreeWord> = p.into_iter().collect();
    let Some(depth) = p.iter().map(|w| w.len()).max() else {
        return false;
    };
    for x in &p {
        for y in &p {
            if x != y && x.is_prefix_of(y) {
                return false;
            }
        }
    }
    // Walk the depth-bounded tree, pruning below elements of p.
    let mut stack = vec![TreeWord::root()];
    while let Some(w) = stack.pop() {
        if p.contains(&w) {
            continue;
        }
        if w.len() == depth {
            return false;
        }
        stack.extend((0..k).map(|d| w.child(d)));
    }
    true
}

/// A complete prefix code.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cpc {
    k: u8,
    elements: BTreeSet<TreeWord>,
}

impl Cpc {
    pub fn new(k: u8, elements: impl IntoIterator<Item = TreeWord>) -> Result<Self> {
        let elements: BTreeSet<TreeWord> = elements.into_iter().collect();
        for w in &elements {
            w.check(k)?;
        }
        if !is_cpc(&elements, k) {
            return input("not a complete prefix code");
        }
        Ok(Cpc { k, elements })
    }

    /// `Sigma^n`.
    pub fn uniform(n: usize, k: u8) -> Self {
        Cpc {
            k,
            elements: sigma_n(n, k).into_iter().collect(),
        }
    }

    pub fn elements(&self) -> &BTreeSet<TreeWord> {
        &self.elements
    }

    pub fn max_len(&self) -> usize {
        self.elements.iter().map(TreeWord::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.elements.iter().map(TreeWord::len).min().unwrap_or(0)
    }

    /// Every CPC whose elements have lengths in `min_len..=max_len`, ordered by
    /// maximal length and then by element list.
    pub fn enumerate(k: u8, min_len: usize, max_len: usize) -> Vec<Cpc> {
        fn below(w: &TreeWord, k: u8, lo: usize, hi: usize) -> Vec<Vec<TreeWord>> {
            let mut out = Vec::new();
            if w.len() >= lo {
                out.push(vec![w.clone()]);
            }
            if w.len() < hi {
                let mut acc: Vec<Vec<TreeWord>> = vec![Vec::new()];
                for d in 0..k {
                    let opts = below(&w.child(d), k, lo, hi);
                    acc = acc
                        .iter()
                        .flat_map(|a| {
                            opts.iter().map(move |o| {
                                let mut v = a.clone();
                                v.extend(o.iter().cloned());
                                v
                            })
                        })
                        .collect();
                }
                out.extend(acc);
            }
            out
        }
        let mut all: Vec<Cpc> = below(&TreeWord::root(), k, min_len, max_len)
            .into_iter()
            .map(|v| Cpc {
                k,
                elements: v.into_iter().collect(),
            })
            .collect();
        all.sort_by(|a, b| {
            (a.max_len(), a.elements.iter().collect::<Vec<_>>())
                .cmp(&(b.max_len(), b.elements.iter().collect::<Vec<_>>()))
        });
        all
    }
}

impl fmt::Display for Cpc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|w| w.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A labeling of a finite prefix-closed support.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    k: u8,
    labels: BTreeMap<TreeWord, Symbol>,
}

impl Pattern {
    pub fn new(k: u8, labels: BTreeMap<TreeWord, Symbol>) -> Result<Self> {
        Support::new(k, labels.keys().cloned())?;
        Ok(Pattern { k, labels })
    }

    pub fn empty(k: u8) -> Self {
        Pattern {
            k,
            labels: BTreeMap::new(),
        }
    }

    /// A single-node pattern.
    pub fn point(k: u8, a: Symbol) -> Self {
        Pattern {
            k,
            labels: [(TreeWord::root(), a)].into_iter().collect(),
        }
    }

    pub fn from_fn(support: &Support, mut f: impl FnMut(&TreeWord) -> Symbol) -> Self {
        Pattern {
            k: support.k,
            labels: support.nodes.iter().map(|w| (w.clone(), f(w))).collect(),
        }
    }

    /// The `n`-block with `u_g = x_{|g|}`, where `x` has length `n + 1`.
    pub fn layer_constant(x: &[Symbol], k: u8) -> Result<Self> {
        if x.is_empty() {
            return input("layer-constant block needs a non-empty word");
        }
        Ok(Pattern::from_fn(&Support::delta(x.len() - 1, k), |g| x[g.len()]))
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn get(&self, w: &TreeWord) -> Option<Symbol> {
        self.labels.get(w).copied()
    }

    pub fn labels(&self) -> &BTreeMap<TreeWord, Symbol> {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn support(&self) -> Support {
        Support {
            k: self.k,
            nodes: self.labels.keys().cloned().collect(),
        }
    }

    pub fn height(&self) -> Option<usize> {
        self.labels.keys().map(TreeWord::len).max()
    }

    pub fn is_block(&self) -> bool {
        self.support().is_delta()
    }

    pub fn restrict(&self, s: &Support) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for w in s.nodes() {
            match self.get(w) {
                Some(a) => {
                    labels.insert(w.clone(), a);
                }
                None => return input(format!("node {w} outside the pattern's support")),
            }
        }
        Ok(Pattern { k: self.k, labels })
    }

    /// Applies a symbol map node-wise.
    pub fn map(&self, f: impl Fn(Symbol) -> Symbol) -> Self {
        Pattern {
            k: self.k,
            labels: self.labels.iter().map(|(w, &a)| (w.clone(), f(a))).collect(),
        }
    }

    /// `address=symbol` lines.
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        for (w, &a) in &self.labels {
            s.push_str(&format!("{w}={}\n", alphabet.name(a)));
        }
        s
    }

    /// The same pairs on one line.
    pub fn to_inline(&self, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self
            .labels
            .iter()
            .map(|(w, &a)| format!("{w}={}", alphabet.name(a)))
            .collect();
        parts.join(" ")
    }

    /// Parses whitespace-separated `address=symbol` pairs.
    pub fn parse_text(text: &str, alphabet: &Alphabet, k: u8) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            let mut col = 0;
            for tok in line.split_whitespace() {
                col = line[col..].find(tok).map_or(col, |p| p + col);
                let err = |m: String| Error::Parse {
                    line: line_no + 1,
                    column: col + 1,
                    message: m,
                };
                let (addr, sym) = tok
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected address=symbol, found {tok:?}")))?;
                let w = TreeWord::parse(addr, k).map_err(|e| err(e.to_string()))?;
                let a = alphabet
                    .index(sym)
                    .ok_or_else(|| err(format!("unknown symbol {sym:?}")))?;
                if labels.insert(w, a).is_some() {
                    return Err(err(format!("address {addr} given twice")));
                }
                col += tok.len();
            }
        }
        Pattern::new(k, labels)
    }
}

/// `s_0 = e, s_1, ..., s_n`, each extending the previous by one direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPrefix {
    nodes: Vec<TreeWord>,
}

impl ChainPrefix {
    pub fn new(nodes: Vec<TreeWord>) -> Result<Self> {
        if nodes.first() != Some(&TreeWord::root()) {
            return input("a chain starts at the root");
        }
        for pair in nodes.windows(2) {
            if pair[1].parent().as_ref() != Some(&pair[0]) {
                return input("consecutive chain nodes must differ by one direction");
            }
        }
        Ok(ChainPrefix { nodes })
    }

    /// The chain through the prefixes of `w`.
    pub fn along(w: &TreeWord) -> Self {
        ChainPrefix {
            nodes: w.prefixes().collect(),
        }
    }

    pub fn nodes(&self) -> &[TreeWord] {
        &self.nodes
    }
}

/// Labels read along a chain.
pub fn project_chain(p: &Pattern, c: &ChainPrefix) -> Result<Word> {
    c.nodes
        .iter()
        .map(|w| {
            p.get(w)
                .ok_or_else(|| Error::Input(format!("chain node {w} outside the support")))
        })
        .collect()
}

/// `g -> base(w^{(|g|)})` on `Delta_{|w|}`.
pub fn branch_constant_block(base: &Pattern, w: &TreeWord) -> Result<Pattern> {
    let branch = project_chain(base, &ChainPrefix::along(w))?;
    Pattern::layer_constant(&branch, base.k)
}

/// The branch replacement map: keep the first `n` directions, overwrite the
/// next `gap` with zeros, keep the rest.
pub fn replace_branches(z: &TreeWord, n: usize, gap: usize) -> TreeWord {
    let d = z.dirs();
    let v = d
        .iter()
        .enumerate()
        .map(|(i, &x)| if i >= n && i < n + gap { 0 } else { x })
        .collect();
    TreeWord(v)
}

/// The subpattern rooted at `s`, re-addressed to the root; optionally
/// restricted to `within`.
pub fn shift_pattern(p: &Pattern, s: &TreeWord, within: Option<&Support>) -> Result<Pattern> {
    let mut labels = BTreeMap::new();
    match within {
        Some(sup) => {
            for w in sup.nodes() {
                let at = s.concat(w);
                let a = p
                    .get(&at)
                    .ok_or_else(|| Error::Input(format!("node {at} outside the support")))?;
                labels.insert(w.clone(), a);
            }
        }
        None => {
            if p.get(s).is_none() {
                return input(format!("node {s} outside the support"));
            }
            for (w, &a) in p.labels.range(s.clone()..) {
                match w.strip_prefix(s) {
                    Some(rest) => {
                        labels.insert(rest, a);
                    }
                    None => break,
                }
            }
        }
    }
    Ok(Pattern { k: p.k, labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(s: &str) -> TreeWord {
        TreeWord::parse(s, 2).unwrap()
    }

    fn set(words: &[&str]) -> BTreeSet<TreeWord> {
        words.iter().map(|w| tw(w)).collect()
    }

    fn pat(pairs: &[(&str, Symbol)]) -> Pattern {
        Pattern::new(2, pairs.iter().map(|&(w, a)| (tw(w), a)).collect()).unwrap()
    }

    #[test]
    fn distances() {
        assert_eq!(word_distance(&tw("01"), &tw("00")), 2);
        assert_eq!(word_distance(&tw("101"), &tw("101")), 0);
        assert_eq!(word_distance(&tw("e"), &tw("101")), 3);
        assert_eq!(set_distance(&set(&["e"]), &set(&["11"])).unwrap(), 2);
        assert_eq!(set_distance(&set(&["0", "1"]), &set(&["1", "00"])).unwrap(), 0);
        assert_eq!(set_distance(&set(&["0", "1"]), &set(&["10"])).unwrap(), 1);
        assert!(set_distance(&set(&[]), &set(&["0"])).is_err());
    }

    #[test]
    fn boundaries() {
        assert_eq!(boundary(&Support::delta(1, 2)).unwrap(), set(&["0", "1"]));
        let s = Support::new(2, set(&["e", "0", "1", "10"])).unwrap();
        assert_eq!(boundary(&s).unwrap(), set(&["0", "10"]));
        assert_eq!(boundary(&Support::delta(0, 2)).unwrap(), set(&["e"]));
        assert!(Support::new(2, set(&["e", "10"])).is_err());
    }

    #[test]
    fn prefix_codes() {
        assert!(is_cpc(&set(&["00", "01", "10", "11"]), 2));
        assert!(is_cpc(&set(&["0", "10", "11"]), 2));
        assert!(!is_cpc(&set(&["0"]), 2));
        assert!(!is_cpc(&set(&["0", "00", "1"]), 2));
        assert!(is_cpc(&set(&["e"]), 2));
        assert!(!is_cpc(&set(&[]), 2));
        // Counts of complete prefix codes of the depth-bounded binary tree.
        assert_eq!(Cpc::enumerate(2, 0, 2).len(), 5);
        assert_eq!(Cpc::enumerate(2, 0, 3).len(), 26);
        assert_eq!(Cpc::enumerate(2, 1, 3).len(), 25);
        assert!(Cpc::enumerate(2, 1, 3).iter().all(|p| is_cpc(p.elements(), 2)));
    }

    #[test]
    fn branch_replacement() {
        assert_eq!(replace_branches(&tw("101"), 3, 5), tw("101"));
        assert_eq!(replace_branches(&tw("1111"), 1, 2), tw("1001"));
        assert_eq!(replace_branches(&tw("1"), 0, 1), tw("0"));
        assert_eq!(replace_branches(&tw("111"), 1, 4), tw("100"));
    }

    #[test]
    fn branch_constant_blocks() {
        let base = pat(&[("e", 0), ("0", 1)]);
        assert_eq!(
            branch_constant_block(&base, &tw("0")).unwrap(),
            pat(&[("e", 0), ("0", 1), ("1", 1)])
        );
        assert_eq!(branch_constant_block(&base, &tw("e")).unwrap(), pat(&[("e", 0)]));
        let lc = Pattern::layer_constant(&[1, 0, 1], 2).unwrap();
        for w in sigma_n(2, 2) {
            assert_eq!(branch_constant_block(&lc, &w).unwrap(), lc);
        }
        assert!(branch_constant_block(&base, &tw("1")).is_err());
    }

    #[test]
    fn chains_and_shifts() {
        let p = pat(&[("e", 1), ("0", 0), ("1", 0)]);
        assert_eq!(project_chain(&p, &ChainPrefix::along(&tw("e"))).unwrap(), vec![1]);
        assert_eq!(project_chain(&p, &ChainPrefix::along(&tw("1"))).unwrap(), vec![1, 0]);
        assert!(project_chain(&p, &ChainPrefix::along(&tw("11"))).is_err());
        let lc = Pattern::layer_constant(&[0, 1, 1], 2).unwrap();
        let words: BTreeSet<Word> = sigma_n(2, 2)
            .iter()
            .map(|w| project_chain(&lc, &ChainPrefix::along(w)).unwrap())
            .collect();
        assert_eq!(words.len(), 1);

        assert_eq!(shift_pattern(&p, &tw("e"), None).unwrap(), p);
        let abc = pat(&[("e", 0), ("0", 1), ("1", 2)]);
        assert_eq!(shift_pattern(&abc, &tw("0"), None).unwrap(), pat(&[("e", 1)]));
        let two = Pattern::from_fn(&Support::delta(2, 2), |w| w.len() as Symbol + w.dirs().iter().sum::<u8>() as Symbol);
        let right = shift_pattern(&two, &tw("1"), Some(&Support::delta(1, 2))).unwrap();
        assert_eq!(right, pat(&[("e", 2), ("0", 3), ("1", 4)]));
        assert!(ChainPrefix::new(vec![tw("e"), tw("01")]).is_err());
    }

    #[test]
    fn pattern_text_round_trip() {
        let ab = Alphabet::binary();
        let p = pat(&[("e", 1), ("0", 0), ("1", 1), ("10", 0)]);
        let text = p.to_text(&ab);
        assert_eq!(text, "e=1\n0=0\n1=1\n10=0\n");
        assert_eq!(Pattern::parse_text(&text, &ab, 2).unwrap(), p);
        assert_eq!(Pattern::parse_text(&p.to_inline(&ab), &ab, 2).unwrap(), p);
        let err = Pattern::parse_text("e=1\n0=2\n", &ab, 2).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 1, .. }));
        assert!(Pattern::parse_text("e=1 10=0", &ab, 2).is_err());
    }
}
