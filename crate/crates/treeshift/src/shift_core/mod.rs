//! One-sided shift spaces over finite alphabets.

pub(crate) mod format;
mod lang;

pub use lang::{Cursor, Dfa, Language};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{input, resource, Result};

/// Index of a symbol in its alphabet.
pub type Symbol = u16;

/// A finite word, stored as symbol indices.
pub type Word = Vec<Symbol>;

const RESERVED: &[char] = &['.', ',', '=', '#', '{', '}'];

/// Ordered set of symbol names; symbol `i` is `names[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return input("alphabet must be non-empty");
        }
        if names.len() > Symbol::MAX as usize {
            return resource("alphabet size", Symbol::MAX as u64);
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty()
                || n == "-"
                || n.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
            {
                return input(format!("invalid symbol name {n:?}"));
            }
            if !seen.insert(n.as_str()) {
                return input(format!("duplicate symbol name {n:?}"));
            }
        }
        Ok(Alphabet { names })
    }

    /// `{0, 1, ..., d-1}` named by their decimal digits.
    pub fn numeric(d: usize) -> Self {
        Alphabet::new((0..d.max(1)).map(|i| i.to_string())).expect("numeric names are valid")
    }

    pub fn binary() -> Self {
        Alphabet::numeric(2)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s as usize]
    }

    pub fn index(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name).map(|i| i as Symbol)
    }

    fn compact(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Writes a word; single-character alphabets concatenate, others use `.`.
    pub fn format_word(&self, w: &[Symbol]) -> String {
        if w.is_empty() {
            return "-".to_string();
        }
        let parts: Vec<&str> = w.iter().map(|&s| self.name(s)).collect();
        if self.compact() {
            parts.concat()
        } else {
            parts.join(".")
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text == "-" {
            return Ok(Vec::new());
        }
        let tokens: Vec<String> = if text.contains('.') || !self.compact() {
            text.split('.').map(str::to_string).collect()
        } else {
            text.chars().map(|c| c.to_string()).collect()
        };
        tokens
            .iter()
            .map(|t| {
                self.index(t)
                    .ok_or_else(|| crate::Error::Input(format!("symbol {t:?} not in alphabet")))
            })
            .collect()
    }

    pub fn check_word(&self, w: &[Symbol]) -> Result<()> {
        match w.iter().find(|&&s| s as usize >= self.len()) {
            Some(s) => input(format!("symbol index {s} outside alphabet of size {}", self.len())),
            None => Ok(()),
        }
    }
}

/// A shift of finite type given by forbidden words of one common length `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSftSpec {
    pub alphabet: Alphabet,
    pub forbidden: BTreeSet<Word>,
    pub m: usize,
}

impl WordSftSpec {
    /// Normalizes forbidden words of mixed lengths to the longest length by
    /// replacing each short word with all of its right extensions.
    pub fn new(alphabet: Alphabet, forbidden: impl IntoIterator<Item = Word>) -> Result<Self> {
        let words: Vec<Word> = forbidden.into_iter().collect();
        let m = words.iter().map(Vec::len).max().unwrap_or(1).max(1);
        WordSftSpec::with_length(alphabet, words, m)
    }

    /// As [`WordSftSpec::new`] but padding to an explicit length `m`.
    pub fn with_length(alphabet: Alphabet, words: Vec<Word>, m: usize) -> Result<Self> {
        for w in &words {
            alphabet.check_word(w)?;
            if w.len() > m {
                return input("forbidden word longer than the target length");
            }
        }
        if m == 0 {
            return input("forbidden-word length must be positive");
        }
        let d = alphabet.len();
        if (d as f64).powi(m as i32) > (1u64 << 22) as f64 {
            return resource("forbidden-word length", m as u64);
        }
        let mut out = BTreeSet::new();
        for w in words {
            let mut frontier = vec![w];
            while let Some(cur) = frontier.pop() {
                if cur.len() == m {
                    out.insert(cur);
                } else {
                    for a in 0..d {
                        let mut next = cur.clone();
                        next.push(a as Symbol);
                        frontier.push(next);
                    }
                }
            }
        }
        Ok(WordSftSpec {
            alphabet,
            forbidden: out,
            m,
        })
    }

    /// True iff no length-`m` window of `w` is forbidden.
    pub fn avoids(&self, w: &[Symbol]) -> bool {
        w.len() < self.m || w.windows(self.m).all(|win| !self.forbidden.contains(win))
    }
}

/// Square 0-1 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix {
    rows: Vec<Vec<u8>>,
}

impl AdjacencyMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let d = rows.len();
        for r in &rows {
            if r.len() != d {
                return input("adjacency matrix must be square");
            }
            if r.iter().any(|&x| x > 1) {
                return input("adjacency matrix entries must be 0 or 1");
            }
        }
        Ok(AdjacencyMatrix { rows })
    }

    pub fn zeros(d: usize) -> Self {
        AdjacencyMatrix {
            rows: vec![vec![0; d]; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j] == 1
    }

    pub fn set(&mut self, i: usize, j: usize, on: bool) {
        self.rows[i][j] = on as u8;
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i]
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 1)
            .map(|(j, _)| j)
    }

    /// Restriction to the given vertices, in the given order.
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        AdjacencyMatrix {
            rows: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        }
    }

    /// Boolean product.
    fn bool_mul(&self, other: &Self) -> Self {
        let d = self.dim();
        let mut out = AdjacencyMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                if self.rows[i][k] == 1 {
                    for j in 0..d {
                        if other.rows[k][j] == 1 {
                            out.rows[i][j] = 1;
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(u8::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Repeatedly deletes vertices without successors. Returns the reduced
/// matrix and the surviving original indices; an empty result means the
/// Markov shift is empty.
pub fn essentialize(a: &AdjacencyMatrix) -> (AdjacencyMatrix, Vec<usize>) {
    let d = a.dim();
    let mut alive = vec![true; d];
    loop {
        let mut changed = false;
        for i in 0..d {
            if alive[i] && !a.successors(i).any(|j| alive[j]) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<usize> = (0..d).filter(|&i| alive[i]).collect();
    (a.submatrix(&keep), keep)
}

fn reachable_from(a: &AdjacencyMatrix, start: usize, reverse: bool) -> Vec<bool> {
    let d = a.dim();
    let mut seen = vec![false; d];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(i) = stack.pop() {
        for j in 0..d {
            let edge = if reverse { a.get(j, i) } else { a.get(i, j) };
            if edge && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen
}

/// Strong connectivity of the digraph of `a`.
pub fn is_irreducible(a: &AdjacencyMatrix) -> Result<bool> {
    if a.dim() == 0 {
        return input("irreducibility of an empty matrix");
    }
    Ok(reachable_from(a, 0, false).iter().all(|&x| x)
        && reachable_from(a, 0, true).iter().all(|&x| x))
}

/// Smallest `m <= (d-1)^2 + 1` with `A^m` positive, if any.
pub fn is_primitive(a: &AdjacencyMatrix) -> (bool, Option<usize>) {
    let d = a.dim();
    if d == 0 {
        return (false, None);
    }
    let bound = (d - 1) * (d - 1) + 1;
    let mut p = a.clone();
    for m in 1..=bound {
        if p.rows.iter().all(|r| r.iter().all(|&x| x == 1)) {
            return (true, Some(m));
        }
        p = p.bool_mul(a);
    }
    (false, None)
}

/// Entrywise maximum of equally sized matrices.
pub fn coordinatewise_max(ms: &[AdjacencyMatrix]) -> Result<AdjacencyMatrix> {
    let Some(first) = ms.first() else {
        return input("coordinatewise max of an empty list");
    };
    let d = first.dim();
    let mut out = AdjacencyMatrix::zeros(d);
    for m in ms {
        if m.dim() != d {
            return input("coordinatewise max: dimension mismatch");
        }
        for i in 0..d {
            for j in 0..d {
                out.rows[i][j] = out.rows[i][j].max(m.rows[i][j]);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: Symbol,
}

/// A directed graph whose edges carry output symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub alphabet: Alphabet,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl LabeledGraph {
    pub fn new(alphabet: Alphabet, vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for v in &vertices {
            if v.is_empty() || v.chars().any(|c| c.is_whitespace() || c == '#') {
                return input(format!("invalid vertex name {v:?}"));
            }
            if !names.insert(v) {
                return input(format!("duplicate vertex {v:?}"));
            }
        }
        let mut pairs = BTreeSet::new();
        for e in &edges {
            if e.src >= vertices.len() || e.dst >= vertices.len() {
                return input("edge endpoint out of range");
            }
            alphabet.check_word(&[e.label])?;
            if !pairs.insert((e.src, e.dst)) {
                return input(format!(
                    "parallel edges {} -> {}",
                    vertices[e.src], vertices[e.dst]
                ));
            }
        }
        Ok(LabeledGraph {
            alphabet,
            vertices,
            edges,
        })
    }

    /// The graph of a matrix with each edge labeled by its source vertex,
    /// which presents the same language as the vertex shift once essential.
    pub fn from_matrix(alphabet: Alphabet, a: &AdjacencyMatrix) -> Result<Self> {
        if alphabet.len() != a.dim() {
            return input("alphabet size must match matrix dimension");
        }
        let edges = (0..a.dim())
            .flat_map(|i| {
                a.successors(i).map(move |j| Edge {
                    src: i,
                    dst: j,
                    label: i as Symbol,
                })
            })
            .collect();
        let vertices = alphabet.names().to_vec();
        LabeledGraph::new(alphabet, vertices, edges)
    }

    fn edge_name(&self, e: &Edge) -> String {
        let (s, t) = (&self.vertices[e.src], &self.vertices[e.dst]);
        if s.chars().count() == 1 && t.chars().count() == 1 {
            format!("{s}{t}")
        } else {
            format!("{s}>{t}")
        }
    }
}

/// The edge shift of a graph: one vertex per edge, labels carried over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeShift {
    pub matrix: AdjacencyMatrix,
    pub labels: Vec<Symbol>,
    pub names: Vec<String>,
}

pub fn edge_shift(g: &LabeledGraph) -> EdgeShift {
    let n = g.edges.len();
    let mut matrix = AdjacencyMatrix::zeros(n);
    for (i, e1) in g.edges.iter().enumerate() {
        for (j, e2) in g.edges.iter().enumerate() {
            if e1.dst == e2.src {
                matrix.set(i, j, true);
            }
        }
    }
    EdgeShift {
        matrix,
        labels: g.edges.iter().map(|e| e.label).collect(),
        names: g.edges.iter().map(|e| g.edge_name(e)).collect(),
    }
}

/// `f: Z+ -> Z+` defining a bounded-density shift over `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BdProfile {
    /// `ceil(log_3(n + 1))`.
    Log3,
    /// `values[n]` on the table, then growth by `slope` per step.
    Table { values: Vec<u64>, slope: u64 },
}

impl BdProfile {
    pub fn table(values: Vec<u64>, slope: u64) -> Result<Self> {
        if values.first() != Some(&0) {
            return input("profile table must start with f(0) = 0");
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return input("profile must be non-decreasing");
        }
        Ok(BdProfile::Table { values, slope })
    }

    pub fn eval(&self, n: u64) -> u64 {
        match self {
            BdProfile::Log3 => bd_canonical_f(n),
            BdProfile::Table { values, slope } => {
                let last = values.len() as u64 - 1;
                if n <= last {
                    values[n as usize]
                } else {
                    values[last as usize] + slope * (n - last)
                }
            }
        }
    }

    /// Window-sum check of a whole binary word.
    pub fn admits(&self, w: &[Symbol]) -> bool {
        let mut prefix = vec![0u64; w.len() + 1];
        for (i, &s) in w.iter().enumerate() {
            prefix[i + 1] = prefix[i] + s as u64;
        }
        (0..w.len()).all(|i| {
            (i + 1..=w.len()).all(|j| prefix[j] - prefix[i] <= self.eval((j - i) as u64))
        })
    }
}

/// `ceil(log_3(n + 1))` without floating point.
pub fn bd_canonical_f(n: u64) -> u64 {
    let target = n as u128 + 1;
    let mut k = 0;
    let mut pow: u128 = 1;
    while pow < target {
        pow *= 3;
        k += 1;
    }
    k
}

/// Largest sum over a length-`p` window among admissible words of length
/// `search_len`, by exhaustive search.
pub fn bd_max_window_sum(f: &BdProfile, p: usize, search_len: usize) -> Result<u64> {
    if p > search_len {
        return input("window longer than search length");
    }
    if p == 0 {
        return Ok(0);
    }
    let mut best = 0;
    let mut prefix = vec![0u64];
    bd_search(f, p, search_len, &mut prefix, 0, &mut best);
    Ok(best)
}

fn bd_search(f: &BdProfile, p: usize, len: usize, prefix: &mut Vec<u64>, seen: u64, best: &mut u64) {
    let l = prefix.len() - 1;
    if l == len {
        *best = (*best).max(seen);
        return;
    }
    for bit in [0u64, 1] {
        let total = prefix[l] + bit;
        // Appending a 0 never creates a violation.
        if bit == 1 && (0..=l).any(|i| total - prefix[i] > f.eval((l + 1 - i) as u64)) {
            continue;
        }
        prefix.push(total);
        let window = if l + 1 >= p {
            total - prefix[l + 1 - p]
        } else {
            0
        };
        bd_search(f, p, len, prefix, seen.max(window), best);
        prefix.pop();
    }
}

/// A finite presentation of a one-sided shift space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftSpec {
    Sft(WordSftSpec),
    Markov {
        alphabet: Alphabet,
        matrix: AdjacencyMatrix,
    },
    Graph(LabeledGraph),
    BoundedDensity(BdProfile),
}

impl ShiftSpec {
    pub fn markov(alphabet: Alphabet, matrix: AdjacencyMatrix) -> Result<Self> {
        if alphabet.len() != matrix.dim() {
            return input("alphabet size must match matrix dimension");
        }
        Ok(ShiftSpec::Markov { alphabet, matrix })
    }

    /// Markov shift over symbols named `0..d-1`.
    pub fn markov_numeric(matrix: AdjacencyMatrix) -> Self {
        ShiftSpec::Markov {
            alphabet: Alphabet::numeric(matrix.dim()),
            matrix,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            ShiftSpec::Sft(s) => s.alphabet.clone(),
            ShiftSpec::Markov { alphabet, .. } => alphabet.clone(),
            ShiftSpec::Graph(g) => g.alphabet.clone(),
            ShiftSpec::BoundedDensity(_) => Alphabet::binary(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ShiftSpec::Sft(_) => "sft",
            ShiftSpec::Markov { .. } => "markov",
            ShiftSpec::Graph(_) => "labeled_graph",
            ShiftSpec::BoundedDensity(_) => "bounded_density",
        }
    }

    pub fn language(&self) -> Result<Language> {
        Language::compile(self)
    }
}

/// True iff `w` occurs in some point of the shift.
pub fn is_word_admissible(spec: &ShiftSpec, w: &[Symbol]) -> Result<bool> {
    spec.alphabet().check_word(w)?;
    Ok(spec.language()?.accepts(w))
}

/// All admissible words of length `m` in lexicographic order.
pub fn enumerate_words(spec: &ShiftSpec, m: usize) -> Result<Vec<Word>> {
    Ok(spec.language()?.words(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> AdjacencyMatrix {
        AdjacencyMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn essentialize_examples() {
        let golden = m(&[&[1, 1], &[1, 0]]);
        assert_eq!(essentialize(&golden), (golden.clone(), vec![0, 1]));
        assert_eq!(essentialize(&m(&[&[1, 1], &[0, 0]])), (m(&[&[1]]), vec![0]));
        let (e, keep) = essentialize(&AdjacencyMatrix::zeros(2));
        assert_eq!(e.dim(), 0);
        assert!(keep.is_empty());
        // Deleting 2 strands 1, which strands nothing else.
        let chain = m(&[&[1, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(essentialize(&chain).1, vec![0]);
    }

    #[test]
    fn irreducible_and_primitive() {
        assert!(is_irreducible(&m(&[&[1, 1], &[1, 0]])).unwrap());
        assert!(!is_irreducible(&m(&[&[1, 1], &[0, 1]])).unwrap());
        assert!(is_irreducible(&m(&[&[1]])).unwrap());
        assert!(is_irreducible(&AdjacencyMatrix::zeros(0)).is_err());
        assert_eq!(is_primitive(&m(&[&[1, 1], &[1, 0]])), (true, Some(2)));
        assert_eq!(is_primitive(&m(&[&[0, 1], &[1, 0]])), (false, None));
        assert_eq!(is_primitive(&m(&[&[1]])), (true, Some(1)));
        // Wielandt's extremal matrix reaches the bound exactly.
        let w = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        assert_eq!(is_primitive(&w), (true, Some(5)));
    }

    #[test]
    fn max_of_matrices() {
        let a = m(&[&[0, 1], &[0, 0]]);
        let b = m(&[&[1, 0], &[0, 0]]);
        assert_eq!(coordinatewise_max(&[a.clone(), b]).unwrap(), m(&[&[1, 1], &[0, 0]]));
        assert_eq!(coordinatewise_max(&[a.clone(), a.clone()]).unwrap(), a);
        assert!(coordinatewise_max(&[a, m(&[&[1]])]).is_err());
        assert!(coordinatewise_max(&[]).is_err());
    }

    #[test]
    fn edge_shift_examples() {
        let even = crate::catalog::even_shift_graph();
        let es = edge_shift(&even);
        assert_eq!(es.names, vec!["aa", "ab", "ba"]);
        let mut edges = Vec::new();
        for i in 0..3 {
            for j in es.matrix.successors(i) {
                edges.push((es.names[i].as_str(), es.names[j].as_str()));
            }
        }
        assert_eq!(
            edges,
            vec![("aa", "aa"), ("aa", "ab"), ("ab", "ba"), ("ba", "aa"), ("ba", "ab")]
        );
        assert_eq!(es.labels, vec![1, 0, 0]);

        let ab = Alphabet::binary();
        let loop_g = LabeledGraph::new(
            ab.clone(),
            vec!["a".into()],
            vec![Edge { src: 0, dst: 0, label: 1 }],
        )
        .unwrap();
        assert_eq!(edge_shift(&loop_g).matrix, m(&[&[1]]));
        let path = LabeledGraph::new(
            ab,
            vec!["a".into(), "b".into()],
            vec![Edge { src: 0, dst: 1, label: 0 }],
        )
        .unwrap();
        assert_eq!(edge_shift(&path).matrix, AdjacencyMatrix::zeros(1));
    }

    #[test]
    fn parallel_edges_rejected() {
        let r = LabeledGraph::new(
            Alphabet::binary(),
            vec!["a".into()],
            vec![
                Edge { src: 0, dst: 0, label: 0 },
                Edge { src: 0, dst: 0, label: 1 },
            ],
        );
        assert!(r.is_err());
    }

    #[test]
    fn canonical_f_values() {
        assert_eq!(bd_canonical_f(0), 0);
        assert_eq!(bd_canonical_f(2), 1);
        assert_eq!(bd_canonical_f(3), 2);
        assert_eq!(bd_canonical_f(8), 2);
        assert_eq!(bd_canonical_f(9), 3);
        assert_eq!(bd_canonical_f(26), 3);
        assert_eq!(bd_canonical_f(27), 4);
    }

    #[test]
    fn window_sum_examples() {
        let f = BdProfile::Log3;
        assert_eq!(bd_max_window_sum(&f, 1, 8).unwrap(), 1);
        assert_eq!(bd_max_window_sum(&f, 3, 8).unwrap(), 2);
        assert_eq!(bd_max_window_sum(&f, 0, 8).unwrap(), 0);
        assert!(bd_max_window_sum(&f, 9, 8).is_err());
    }

    #[test]
    fn mixed_length_forbidden_words_are_padded() {
        let s = WordSftSpec::new(Alphabet::binary(), vec![vec![1], vec![0, 0]]).unwrap();
        assert_eq!(s.m, 2);
        let expect: BTreeSet<Word> = [vec![0, 0], vec![1, 0], vec![1, 1]].into_iter().collect();
        assert_eq!(s.forbidden, expect);
    }

    #[test]
    fn word_formatting() {
        let ab = Alphabet::binary();
        assert_eq!(ab.format_word(&[0, 1, 1]), "011");
        assert_eq!(ab.parse_word("011").unwrap(), vec![0, 1, 1]);
        assert_eq!(ab.parse_word("-").unwrap(), Vec::<Symbol>::new());
        let long = Alphabet::new(["x1", "y2"]).unwrap();
        assert_eq!(long.format_word(&[1, 0]), "y2.x1");
        assert_eq!(long.parse_word("y2.x1").unwrap(), vec![1, 0]);
        assert!(ab.parse_word("012").is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }
}
