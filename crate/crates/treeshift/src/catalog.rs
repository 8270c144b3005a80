//! Concrete shifts and patterns used by the tests, the scenarios and the CLI.

use crate::hom_construct::TreeShiftSpec;
use crate::shift_core::{AdjacencyMatrix, Alphabet, BdProfile, Edge, LabeledGraph, ShiftSpec, Symbol, WordSftSpec};
use crate::tree_core::{Pattern, TreeWord};

fn matrix(rows: &[&[u8]]) -> AdjacencyMatrix {
    AdjacencyMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).expect("square 0/1 matrix")
}

fn tw(s: &str) -> TreeWord {
    TreeWord::parse(s, 2).expect("binary address")
}

/// No two adjacent 1s.
pub fn golden_mean() -> ShiftSpec {
    ShiftSpec::Sft(WordSftSpec::new(Alphabet::binary(), vec![vec![1, 1]]).expect("valid words"))
}

pub fn golden_mean_matrix() -> AdjacencyMatrix {
    matrix(&[&[1, 1], &[1, 0]])
}

/// Vertices `a`, `b`; a 1-loop at `a` and a 0-labeled two-cycle. Edges come
/// out as `aa`, `ab`, `ba`.
pub fn even_shift_graph() -> LabeledGraph {
    let e = |src, dst, label| Edge { src, dst, label };
    LabeledGraph::new(
        Alphabet::binary(),
        vec!["a".into(), "b".into()],
        vec![e(0, 0, 1), e(0, 1, 0), e(1, 0, 0)],
    )
    .expect("valid graph")
}

/// Even runs of 0 between consecutive 1s.
pub fn even_shift() -> ShiftSpec {
    ShiftSpec::Graph(even_shift_graph())
}

/// Odd runs of 1 between consecutive 0s. The 1-cycle is spread over `b` and
/// `c` so that no two edges share endpoints.
pub fn odd_shift() -> ShiftSpec {
    let e = |src, dst, label| Edge { src, dst, label };
    ShiftSpec::Graph(
        LabeledGraph::new(
            Alphabet::binary(),
            vec!["a".into(), "b".into(), "c".into()],
            vec![e(0, 0, 0), e(0, 1, 1), e(1, 2, 1), e(2, 1, 1), e(1, 0, 0)],
        )
        .expect("valid graph"),
    )
}

/// Direction-0 matrix of the Markov tree covering the even tree-shift.
pub fn markov_cover_a0() -> AdjacencyMatrix {
    matrix(&[
        &[1, 1, 1, 1, 1],
        &[0, 1, 0, 1, 0],
        &[0, 0, 1, 1, 0],
        &[0, 0, 0, 0, 1],
        &[0, 1, 1, 1, 0],
    ])
}

/// Direction-1 matrix; also the coordinatewise maximum of both.
pub fn markov_cover_a1() -> AdjacencyMatrix {
    matrix(&[
        &[1, 1, 1, 1, 1],
        &[0, 1, 1, 1, 0],
        &[0, 1, 1, 1, 0],
        &[0, 0, 0, 0, 1],
        &[0, 1, 1, 1, 0],
    ])
}

pub fn markov_cover_tree() -> TreeShiftSpec {
    TreeShiftSpec::markov_tree(Alphabet::numeric(5), vec![markov_cover_a0(), markov_cover_a1()])
        .expect("matching dimensions")
}

/// The cover vertex each of the five Markov symbols stands for.
pub fn markov_cover_subsets() -> [&'static [&'static str]; 5] {
    [&["ab", "ba"], &["aa"], &["aa"], &["ab"], &["ba"]]
}

/// The symbol map from the five Markov symbols onto the even-shift alphabet.
pub fn markov_cover_symbol_map() -> Vec<Symbol> {
    vec![0, 1, 1, 0, 0]
}

/// Binary trees that are constant on every level.
pub fn layer_constant() -> TreeShiftSpec {
    TreeShiftSpec::layer_constant(Alphabet::binary(), 2).expect("k = 2")
}

/// Binary trees where no node has two children labeled 1.
pub fn sibling_pair_sft() -> TreeShiftSpec {
    let block = |r| Pattern::new(2, [(tw("e"), r), (tw("0"), 1), (tw("1"), 1)].into()).expect("1-block");
    TreeShiftSpec::explicit(Alphabet::binary(), 2, [block(1), block(0)], None).expect("valid blocks")
}

/// The bounded-density shift with `f(p) = ceil(log3(p + 1))`.
pub fn bd_log3() -> ShiftSpec {
    ShiftSpec::BoundedDensity(BdProfile::Log3)
}

/// A pair that cannot be joined below any complete prefix code in the hom
/// tree-shift of the even shift.
pub fn even_cpc_ir_blocks() -> (Pattern, Pattern) {
    let u = Pattern::point(2, 1);
    let v = Pattern::new(2, [(tw("e"), 0), (tw("0"), 1), (tw("1"), 0), (tw("10"), 1)].into()).expect("closed support");
    (u, v)
}

/// A 4-block of the even shift's axial product that is not in its hom
/// tree-shift: 1s at the root and at `000`, `0010`, `0011`.
pub fn axial_witness() -> Pattern {
    let ones = [tw("e"), tw("000"), tw("0010"), tw("0011")];
    let delta = crate::tree_core::Support::delta(4, 2);
    Pattern::from_fn(&delta, |w| Symbol::from(ones.contains(w)))
}

/// The SFT over `d` symbols forbidding the words of length `len` whose
/// lexicographic index has its bit set in `mask`.
pub fn sft_from_code(d: usize, len: usize, mask: u64) -> ShiftSpec {
    let total = d.pow(len as u32);
    let forbidden: Vec<Vec<Symbol>> = (0..total.min(64))
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| {
            let mut w = vec![0; len];
            let mut r = i;
            for slot in w.iter_mut().rev() {
                *slot = (r % d) as Symbol;
                r /= d;
            }
            w
        })
        .collect();
    ShiftSpec::Sft(WordSftSpec::with_length(Alphabet::numeric(d), forbidden, len).expect("valid words"))
}
