//! The powerset cover of a labeled graph and lifting of words and tree
//! patterns through it.
//!
//! `G1` is the edge shift of the input graph, a vertex shift whose vertices
//! carry output symbols. Each cover vertex is a non-empty set of `G1`
//! vertices sharing one symbol, stored as a bit mask over its class. There is
//! an edge `S -> S'` when every member of `S'` has a predecessor in `S`.

use std::collections::BTreeSet;

use crate::error::{input, resource, Error, Result};
use crate::hom_construct::TreeShiftSpec;
use crate::shift_core::{
    edge_shift, essentialize, AdjacencyMatrix, Alphabet, Edge, EdgeShift, LabeledGraph, ShiftSpec, Symbol, Word,
};
use crate::tree_core::{sigma_n, Pattern, Support, TreeWord};

/// Largest class whose subsets are expanded.
pub const MAX_CLASS_SIZE: usize = 12;

/// Partition of vertex indices by label, classes ordered by first member.
pub fn label_classes(labels: &[Symbol]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (v, &a) in labels.iter().enumerate() {
        match classes.iter_mut().find(|c| labels[c[0]] == a) {
            Some(c) => c.push(v),
            None => classes.push(vec![v]),
        }
    }
    classes
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverResult {
    /// The essential part of the input's edge shift.
    pub g1: EdgeShift,
    pub classes: Vec<Vec<usize>>,
    /// `(class, mask)` per cover vertex; bit `b` is `classes[class][b]`.
    pub subsets: Vec<(usize, u32)>,
    pub matrix: AdjacencyMatrix,
    /// Each edge carries the symbol of its source.
    pub graph2: LabeledGraph,
    pub symbol_map: Vec<Symbol>,
    /// Number of subset vertices before pruning dead ends.
    pub size_before: usize,
}

impl CoverResult {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// `G1` vertices of a cover vertex, ascending.
    pub fn members(&self, v: usize) -> Vec<usize> {
        let (c, mask) = self.subsets[v];
        self.classes[c]
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &x)| x)
            .collect()
    }

    pub fn vertex_name(&self, v: usize) -> String {
        let names: Vec<&str> = self.members(v).iter().map(|&x| self.g1.names[x].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// The cover vertex with exactly these `G1` members.
    pub fn find(&self, members: &[usize]) -> Option<usize> {
        let first = members.first()?;
        let c = self.classes.iter().position(|c| c.contains(first))?;
        let mut mask = 0u32;
        for m in members {
            mask |= 1 << self.classes[c].iter().position(|x| x == m)?;
        }
        self.subsets.iter().position(|&s| s == (c, mask))
    }

    /// `G1` vertex by edge name such as `ab`.
    pub fn g1_vertex(&self, name: &str) -> Option<usize> {
        self.g1.names.iter().position(|n| n == name)
    }

    /// `subset -> members` lines.
    pub fn provenance_table(&self) -> String {
        let mut s = String::new();
        for v in 0..self.len() {
            let names: Vec<&str> = self.members(v).iter().map(|&x| self.g1.names[x].as_str()).collect();
            s.push_str(&format!("{} -> {}\n", self.vertex_name(v), names.join(" ")));
        }
        s
    }

    pub fn as_shift(&self) -> ShiftSpec {
        ShiftSpec::Graph(self.graph2.clone())
    }

    /// The hom tree-shift of the cover, as a Markov tree over vertex indices.
    pub fn tree_spec(&self, k: u8) -> Result<TreeShiftSpec> {
        TreeShiftSpec::markov_tree(Alphabet::numeric(self.len()), vec![self.matrix.clone(); k as usize])
    }

    pub fn check_path(&self, path: &[usize]) -> Result<()> {
        if path.iter().any(|&v| v >= self.len()) {
            return input("cover vertex out of range");
        }
        if path.windows(2).any(|w| !self.matrix.get(w[0], w[1])) {
            return input("not a path of the cover");
        }
        Ok(())
    }
}

/// Builds the powerset cover of `g`.
pub fn powerset_cover(g: &LabeledGraph) -> Result<CoverResult> {
    if g.edges.is_empty() {
        return input("graph has no edges");
    }
    let full = edge_shift(g);
    let (m1, keep) = essentialize(&full.matrix);
    if keep.is_empty() {
        return input("graph presents the empty shift");
    }
    let g1 = EdgeShift {
        matrix: m1,
        labels: keep.iter().map(|&i| full.labels[i]).collect(),
        names: keep.iter().map(|&i| full.names[i].clone()).collect(),
    };
    let classes = label_classes(&g1.labels);
    if classes.iter().any(|c| c.len() > MAX_CLASS_SIZE) {
        return resource("label class size", MAX_CLASS_SIZE as u64);
    }
    let mut all: Vec<(usize, u32)> = Vec::new();
    for (ci, c) in classes.iter().enumerate() {
        for mask in 1..(1u32 << c.len()) {
            all.push((ci, mask));
        }
    }
    let members = |&(c, mask): &(usize, u32)| -> Vec<usize> {
        classes[c]
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &x)| x)
            .collect()
    };
    let n = all.len();
    let mem: Vec<Vec<usize>> = all.iter().map(members).collect();
    let mut big = AdjacencyMatrix::zeros(n);
    for s in 0..n {
        let reach: BTreeSet<usize> = mem[s].iter().flat_map(|&x| g1.matrix.successors(x)).collect();
        for t in 0..n {
            if mem[t].iter().all(|y| reach.contains(y)) {
                big.set(s, t, true);
            }
        }
    }
    let (matrix, alive) = essentialize(&big);
    let subsets: Vec<(usize, u32)> = alive.iter().map(|&i| all[i]).collect();
    let symbol_map: Vec<Symbol> = subsets.iter().map(|&(c, _)| g1.labels[classes[c][0]]).collect();
    let mut cover = CoverResult {
        g1,
        classes,
        subsets,
        matrix,
        graph2: LabeledGraph {
            alphabet: g.alphabet.clone(),
            vertices: Vec::new(),
            edges: Vec::new(),
        },
        symbol_map,
        size_before: n,
    };
    let vertices = (0..cover.len()).map(|v| cover.vertex_name(v)).collect();
    let edges = (0..cover.len())
        .flat_map(|s| {
            let label = cover.symbol_map[s];
            cover.matrix.successors(s).map(move |t| Edge { src: s, dst: t, label })
        })
        .collect();
    cover.graph2 = LabeledGraph::new(g.alphabet.clone(), vertices, edges)?;
    Ok(cover)
}

/// Compares the cover's image language with `y` for every length up to `max_len`;
/// on mismatch returns the shortest, then least, word in one language only.
pub fn verify_factor_language(cover: &CoverResult, y: &ShiftSpec, max_len: usize) -> Result<(bool, Option<Word>)> {
    if y.alphabet() != cover.graph2.alphabet {
        return input("cover and target use different alphabets");
    }
    let image = cover.as_shift().language()?;
    let target = y.language()?;
    for len in 0..=max_len {
        let a: BTreeSet<Word> = image.words(len).into_iter().collect();
        let b: BTreeSet<Word> = target.words(len).into_iter().collect();
        if let Some(w) = a.symmetric_difference(&b).next() {
            return Ok((false, Some(w.clone())));
        }
    }
    Ok((true, None))
}

/// A `G1` path inside `path2` ending at `terminal`, choosing the least
/// member at each step from the end backwards.
pub fn lift_path(cover: &CoverResult, path2: &[usize], terminal: usize) -> Result<Vec<usize>> {
    cover.check_path(path2)?;
    let Some(&last) = path2.last() else {
        return input("empty path");
    };
    if !cover.members(last).contains(&terminal) {
        return input("terminal choice is not in the last subset");
    }
    let mut out = vec![terminal];
    for &s in path2.iter().rev().skip(1) {
        let next = *out.last().expect("non-empty");
        let Some(v) = cover.members(s).into_iter().find(|&x| cover.g1.matrix.get(x, next)) else {
            return Err(Error::Consistency("cover edge without a lifting predecessor".into()));
        };
        out.push(v);
    }
    out.reverse();
    Ok(out)
}

/// Position-wise union of two cover paths with equal labels.
pub fn merge_paths(cover: &CoverResult, a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
    cover.check_path(a)?;
    cover.check_path(b)?;
    if a.len() != b.len() {
        return input("paths differ in length");
    }
    let mut out = Vec::with_capacity(a.len());
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        let (cx, mx) = cover.subsets[x];
        let (cy, my) = cover.subsets[y];
        if cx != cy {
            return input(format!("labels differ at position {i}"));
        }
        let Some(v) = cover.subsets.iter().position(|&s| s == (cx, mx | my)) else {
            return Err(Error::Consistency("union of cover vertices was pruned".into()));
        };
        out.push(v);
    }
    if out.windows(2).any(|w| !cover.matrix.get(w[0], w[1])) {
        return Err(Error::Consistency("union of cover paths is not a path".into()));
    }
    Ok(out)
}

/// The least `G1` path reading `y` that continues forever, if any.
fn least_g1_path(cover: &CoverResult, y: &[Symbol]) -> Option<Vec<usize>> {
    let n = cover.g1.labels.len();
    // ok[i][v]: v reads y[i] and some path from v reads the rest of y.
    let mut ok = vec![vec![false; n]; y.len()];
    for i in (0..y.len()).rev() {
        for v in 0..n {
            ok[i][v] = cover.g1.labels[v] == y[i]
                && (i + 1 == y.len() || cover.g1.matrix.successors(v).any(|w| ok[i + 1][w]));
        }
    }
    let mut path: Vec<usize> = Vec::with_capacity(y.len());
    for i in 0..y.len() {
        let v = (0..n).find(|&v| ok[i][v] && path.last().is_none_or(|&p| cover.g1.matrix.get(p, v)))?;
        path.push(v);
    }
    Some(path)
}

/// Lifts a block of the hom tree-shift of the cover's image to one of the
/// cover's own hom tree-shift: each leaf chain, left to right, gets the least
/// `G1` path reading it, and every node takes the union of the path vertices
/// passing through it.
pub fn lift_tree_pattern(cover: &CoverResult, t: &Pattern) -> Result<Pattern> {
    let Some(n) = t.height() else {
        return input("cannot lift an empty pattern");
    };
    if !t.is_block() {
        return input("lifting needs a full block");
    }
    let k = t.k();
    let lang = cover.as_shift().language()?;
    let mut members: Vec<(TreeWord, BTreeSet<usize>)> = Vec::new();
    let mut at = std::collections::BTreeMap::<TreeWord, BTreeSet<usize>>::new();
    for leaf in sigma_n(n, k) {
        let y: Word = leaf.prefixes().map(|p| t.get(&p).expect("full block")).collect();
        if !lang.accepts(&y) {
            return input(format!("chain to {leaf} reads a word outside the shift"));
        }
        let path = least_g1_path(cover, &y)
            .ok_or_else(|| Error::Consistency(format!("no lifting path for the chain to {leaf}")))?;
        for (p, v) in leaf.prefixes().zip(path) {
            at.entry(p).or_default().insert(v);
        }
    }
    members.extend(at);
    let mut labels = std::collections::BTreeMap::new();
    for (w, set) in members {
        let set: Vec<usize> = set.into_iter().collect();
        let v = cover
            .find(&set)
            .ok_or_else(|| Error::Consistency(format!("no cover vertex for the lift at {w}")))?;
        labels.insert(w, v as Symbol);
    }
    let lifted = Pattern::new(k, labels)?;
    debug_assert!(lifted.support() == Support::delta(n, k));
    Ok(lifted)
}

/// The shift read off the vertex shift of `a` through a symbol map onto `alphabet`.
pub fn symbol_factor(a: &AdjacencyMatrix, map: &[Symbol], alphabet: Alphabet) -> Result<ShiftSpec> {
    if map.len() != a.dim() {
        return input("symbol map must cover every vertex");
    }
    let (a, keep) = essentialize(a);
    let vertices = keep.iter().map(|i| format!("v{i}")).collect();
    let edges = (0..a.dim())
        .flat_map(|i| {
            let label = map[keep[i]];
            a.successors(i).map(move |j| Edge { src: i, dst: j, label })
        })
        .collect();
    Ok(ShiftSpec::Graph(LabeledGraph::new(alphabet, vertices, edges)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn even_cover() -> CoverResult {
        powerset_cover(&catalog::even_shift_graph()).unwrap()
    }

    #[test]
    fn classes_of_even_shift() {
        let c = even_cover();
        let names: Vec<Vec<&str>> = c
            .classes
            .iter()
            .map(|cl| cl.iter().map(|&x| c.g1.names[x].as_str()).collect())
            .collect();
        assert_eq!(names, vec![vec!["aa"], vec!["ab", "ba"]]);
        assert_eq!(label_classes(&[0, 1, 2]), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(label_classes(&[3, 3]), vec![vec![0, 1]]);
    }

    #[test]
    fn even_cover_vertices() {
        let c = even_cover();
        let names: BTreeSet<String> = (0..c.len()).map(|v| c.vertex_name(v)).collect();
        let want: BTreeSet<String> = ["{aa}", "{ab}", "{ba}", "{ab,ba}"].iter().map(|s| s.to_string()).collect();
        assert_eq!(names, want);
        assert_eq!(c.size_before, 4);
        let both = c.find(&[c.g1_vertex("ab").unwrap(), c.g1_vertex("ba").unwrap()]).unwrap();
        let aa = c.find(&[c.g1_vertex("aa").unwrap()]).unwrap();
        assert!(c.matrix.get(both, aa));
        assert_eq!(c.symbol_map[aa], 1);
        assert_eq!(c.symbol_map[both], 0);
    }

    #[test]
    fn factor_languages() {
        let c = even_cover();
        assert_eq!(verify_factor_language(&c, &catalog::even_shift(), 12).unwrap(), (true, None));
        let (ok, w) = verify_factor_language(&c, &catalog::odd_shift(), 4).unwrap();
        assert!(!ok);
        assert_eq!(w, Some(vec![1, 0, 1]));
        let golden = LabeledGraph::from_matrix(Alphabet::binary(), &catalog::golden_mean_matrix()).unwrap();
        let gc = powerset_cover(&golden).unwrap();
        assert_eq!(verify_factor_language(&gc, &catalog::golden_mean(), 10).unwrap(), (true, None));
    }

    #[test]
    fn path_lifting_and_merging() {
        let c = even_cover();
        let v = |names: &[&str]| c.find(&names.iter().map(|n| c.g1_vertex(n).unwrap()).collect::<Vec<_>>()).unwrap();
        let aa = c.g1_vertex("aa").unwrap();
        let ba = c.g1_vertex("ba").unwrap();
        assert_eq!(lift_path(&c, &[v(&["ab", "ba"]), v(&["aa"])], aa).unwrap(), vec![ba, aa]);
        assert_eq!(lift_path(&c, &[v(&["aa"])], aa).unwrap(), vec![aa]);
        let p = vec![v(&["ab"]), v(&["ba"]), v(&["aa"])];
        assert_eq!(merge_paths(&c, &p, &p).unwrap(), p);
        let q = vec![v(&["ba"]), v(&["ab"]), v(&["ba"])];
        assert!(merge_paths(&c, &p, &q).is_err());
        let r = vec![v(&["ba"]), v(&["ab"])];
        let s = vec![v(&["ab"]), v(&["ba"])];
        assert_eq!(merge_paths(&c, &r, &s).unwrap(), vec![v(&["ab", "ba"]); 2]);
    }

    #[test]
    fn tree_lifting() {
        let c = even_cover();
        let up = lift_tree_pattern(&c, &Pattern::point(2, 1)).unwrap();
        assert_eq!(up.get(&TreeWord::root()), c.find(&[c.g1_vertex("aa").unwrap()]).map(|v| v as Symbol));
        let t = Pattern::layer_constant(&[1, 0, 0, 1], 2).unwrap();
        let lifted = lift_tree_pattern(&c, &t).unwrap();
        assert_eq!(lifted.map(|s| c.symbol_map[s as usize]), t);
        let bad = Pattern::layer_constant(&[1, 0, 1], 2).unwrap();
        assert!(lift_tree_pattern(&c, &bad).is_err());
    }

    #[test]
    fn markov_factor_is_even_shift() {
        let a = crate::shift_core::coordinatewise_max(&[catalog::markov_cover_a0(), catalog::markov_cover_a1()]).unwrap();
        let y = symbol_factor(&a, &catalog::markov_cover_symbol_map(), Alphabet::binary()).unwrap();
        let ly = y.language().unwrap();
        let le = catalog::even_shift().language().unwrap();
        for len in 0..=10 {
            assert_eq!(ly.words(len), le.words(len), "length {len}");
        }
    }
}
