//! Brute-force oracles, written without the library's solvers, compared
//! against the library on small exhaustive families.

use std::collections::BTreeSet;

use treeshift::catalog;
use treeshift::hom_construct::{axial_admissible, enumerate_tree_blocks, TreeShiftSpec};
use treeshift::mixing::tm_gap_bound_bd;
use treeshift::shift_core::{
    bd_canonical_f, is_irreducible, is_primitive, AdjacencyMatrix, Alphabet, BdProfile, ShiftSpec, Symbol,
};
use treeshift::sofic_cover::{lift_path, powerset_cover};
use treeshift::tree_core::{boundary, is_cpc, sigma_n, Cpc, Pattern, Support, TreeWord};

/// All labelings of `Delta_n` over `d` symbols.
fn all_labelings(n: usize, d: usize) -> Vec<Pattern> {
    let delta = Support::delta(n, 2);
    let nodes: Vec<TreeWord> = delta.nodes().iter().cloned().collect();
    let total = d.pow(nodes.len() as u32);
    (0..total)
        .map(|mut code| {
            let labels = nodes
                .iter()
                .map(|w| {
                    let a = (code % d) as Symbol;
                    code /= d;
                    (w.clone(), a)
                })
                .collect();
            Pattern::new(2, labels).unwrap()
        })
        .collect()
}

fn chains(p: &Pattern, n: usize) -> Vec<Vec<Symbol>> {
    sigma_n(n, 2)
        .into_iter()
        .map(|leaf| leaf.prefixes().map(|w| p.get(&w).unwrap()).collect())
        .collect()
}

/// Avoids every forbidden word and can be continued `horizon` more steps.
fn sft_word(forbidden: &[Vec<Symbol>], d: usize, x: &mut Vec<Symbol>, horizon: usize) -> bool {
    if forbidden.iter().any(|f| x.windows(f.len()).any(|w| w == &f[..])) {
        return false;
    }
    if horizon == 0 {
        return true;
    }
    (0..d as Symbol).any(|a| {
        x.push(a);
        let ok = sft_word(forbidden, d, x, horizon - 1);
        x.pop();
        ok
    })
}

fn even_word(x: &[Symbol]) -> bool {
    let ones: Vec<usize> = x.iter().enumerate().filter(|(_, &a)| a == 1).map(|(i, _)| i).collect();
    ones.windows(2).all(|w| (w[1] - w[0] - 1) % 2 == 0)
}

fn brute_blocks(n: usize, d: usize, word_ok: impl Fn(&[Symbol]) -> bool) -> BTreeSet<Pattern> {
    all_labelings(n, d).into_iter().filter(|p| chains(p, n).iter().all(|c| word_ok(c))).collect()
}

#[test]
fn golden_mean_tree_blocks_by_brute_force() {
    let spec = TreeShiftSpec::hom(catalog::golden_mean(), 2).unwrap();
    let counts: Vec<usize> = (0..=3)
        .map(|n| {
            let brute = brute_blocks(n, 2, |c| c.windows(2).all(|w| w != [1, 1]));
            let lib: BTreeSet<Pattern> = enumerate_tree_blocks(&spec, n).unwrap().into_iter().collect();
            assert_eq!(lib, brute, "n = {n}");
            brute.len()
        })
        .collect();
    assert_eq!(&counts[..3], &[2, 5, 41]);
}

#[test]
fn even_tree_blocks_by_brute_force() {
    let spec = TreeShiftSpec::hom(catalog::even_shift(), 2).unwrap();
    for n in 0..=3 {
        let brute = brute_blocks(n, 2, even_word);
        let lib: BTreeSet<Pattern> = enumerate_tree_blocks(&spec, n).unwrap().into_iter().collect();
        assert_eq!(lib, brute, "n = {n}");
    }
}

#[test]
fn even_words_match_the_parity_predicate() {
    let lang = catalog::even_shift().language().unwrap();
    for m in 0..=14usize {
        let brute: Vec<Vec<Symbol>> = (0..1u32 << m)
            .map(|c| (0..m).map(|i| (c >> (m - 1 - i) & 1) as Symbol).collect::<Vec<_>>())
            .filter(|x| even_word(x))
            .collect();
        assert_eq!(lang.words(m), brute, "m = {m}");
    }
}

#[test]
fn small_sft_tree_blocks_by_brute_force() {
    // Three-symbol SFTs forbidding a few 2-words, with dead ends.
    for mask in [0b000_000_000u64, 0b000_010_001, 0b100_000_110, 0b011_000_100, 0b001_001_001] {
        let spec = catalog::sft_from_code(3, 2, mask);
        let ShiftSpec::Sft(s) = &spec else { unreachable!() };
        let forbidden: Vec<Vec<Symbol>> = s.forbidden.iter().cloned().collect();
        let t = TreeShiftSpec::hom(spec.clone(), 2).unwrap();
        for n in 0..=2 {
            let brute = brute_blocks(n, 3, |c| sft_word(&forbidden, 3, &mut c.to_vec(), 10));
            let lib: BTreeSet<Pattern> = enumerate_tree_blocks(&t, n).unwrap().into_iter().collect();
            assert_eq!(lib, brute, "mask {mask:#b}, n = {n}");
        }
    }
}

#[test]
fn tm_gap_by_direct_scan() {
    let f = |p: u64| {
        // ceil(log3(p + 1)) in floating point, checked against the exact value.
        let v = ((p + 1) as f64).log(3.0).ceil() as u64;
        assert!(v.abs_diff(bd_canonical_f(p)) <= 1);
        bd_canonical_f(p)
    };
    for m in 0..=3u64 {
        let mut best = 0;
        for l in 1..=m + 1 {
            let n = (0..).find(|&n| f(l + n) >= f(m + 1) + f(l)).unwrap();
            best = best.max(n);
        }
        assert_eq!(tm_gap_bound_bd(&BdProfile::Log3, m).unwrap(), best);
    }
    assert_eq!(
        (0..=3).map(|m| tm_gap_bound_bd(&BdProfile::Log3, m).unwrap()).collect::<Vec<_>>(),
        vec![2, 2, 24, 24]
    );
}

#[test]
fn code_counts_follow_the_tree_recurrence() {
    // Complete binary trees of height <= h: a(h) = 1 + a(h - 1)^2.
    let mut a = 1usize;
    for h in 0..=4 {
        let codes = Cpc::enumerate(2, 0, h);
        assert_eq!(codes.len(), a, "h = {h}");
        assert!(codes.iter().all(|c| is_cpc(c.elements(), 2)));
        a = 1 + a * a;
    }
}

#[test]
fn boundaries_of_full_blocks() {
    for n in 0..=8 {
        let b = boundary(&Support::delta(n, 2)).unwrap();
        let want: BTreeSet<TreeWord> = sigma_n(n, 2).into_iter().collect();
        assert_eq!(b, want);
        assert!(is_cpc(&b, 2));
    }
}

/// Paths of length zero count, so `[0]` is irreducible.
fn brute_irreducible(a: &AdjacencyMatrix) -> bool {
    let d = a.dim();
    let mut reach: Vec<Vec<bool>> = (0..d).map(|i| (0..d).map(|j| i == j || a.get(i, j)).collect()).collect();
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                reach[i][j] |= reach[i][k] && reach[k][j];
            }
        }
    }
    reach.iter().all(|r| r.iter().all(|&x| x))
}

fn brute_primitive(a: &AdjacencyMatrix) -> bool {
    let d = a.dim();
    let mut p: Vec<Vec<bool>> = (0..d).map(|i| (0..d).map(|j| a.get(i, j)).collect()).collect();
    for _ in 0..(d - 1) * (d - 1) + 1 {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        p = (0..d)
            .map(|i| (0..d).map(|j| (0..d).any(|k| p[i][k] && a.get(k, j))).collect())
            .collect();
    }
    p.iter().all(|r| r.iter().all(|&x| x))
}

#[test]
fn matrix_properties_exhaustive_to_dimension_four() {
    for d in 1..=4usize {
        for code in 0u32..1 << (d * d) {
            let rows = (0..d).map(|i| (0..d).map(|j| (code >> (i * d + j) & 1) as u8).collect()).collect();
            let a = AdjacencyMatrix::new(rows).unwrap();
            let irr = is_irreducible(&a).unwrap();
            let (prim, _) = is_primitive(&a);
            assert_eq!(irr, brute_irreducible(&a), "{:?}", a.rows());
            assert_eq!(prim, brute_primitive(&a), "{:?}", a.rows());
            assert!(!prim || irr);
        }
    }
}

#[test]
fn axial_and_hom_coincide_for_markov_shifts() {
    let mats = [
        catalog::golden_mean_matrix(),
        AdjacencyMatrix::new(vec![vec![0, 1], vec![1, 1]]).unwrap(),
        AdjacencyMatrix::new(vec![vec![1, 1], vec![0, 1]]).unwrap(),
    ];
    for a in mats {
        let x = ShiftSpec::markov(Alphabet::binary(), a).unwrap();
        let t = TreeShiftSpec::hom(x.clone(), 2).unwrap().compile().unwrap();
        for n in 0..=3 {
            for p in all_labelings(n, 2) {
                assert_eq!(axial_admissible(&x, &p).unwrap(), t.admissible(&p).unwrap());
            }
        }
    }
}

/// Every walk of `len` vertices in the graph given by `succ`.
fn walks(succ: &dyn Fn(usize) -> Vec<usize>, n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|p| succ(*p.last().unwrap()).into_iter().map(move |s| [p.clone(), vec![s]].concat()))
            .collect();
    }
    out
}

#[test]
fn first_cover_paths_are_second_cover_paths() {
    let cover = powerset_cover(&catalog::even_shift_graph()).unwrap();
    let n1 = cover.g1.matrix.dim();
    let succ1 = |v: usize| cover.g1.matrix.successors(v).collect::<Vec<_>>();
    for len in 1..=8 {
        for p in walks(&succ1, n1, len) {
            let lifted: Vec<usize> = p.iter().map(|&v| cover.find(&[v]).expect("singleton class")).collect();
            cover.check_path(&lifted).unwrap();
        }
    }
}

#[test]
fn lifted_paths_stay_inside_their_subsets() {
    let cover = powerset_cover(&catalog::even_shift_graph()).unwrap();
    let succ2 = |v: usize| cover.matrix.successors(v).collect::<Vec<_>>();
    for len in 1..=6 {
        for p in walks(&succ2, cover.len(), len) {
            for &terminal in &cover.members(*p.last().unwrap()) {
                let q = lift_path(&cover, &p, terminal).unwrap();
                assert_eq!(q.len(), p.len());
                for (v1, v2) in q.iter().zip(&p) {
                    assert!(cover.members(*v2).contains(v1));
                }
                for w in q.windows(2) {
                    assert_eq!(cover.g1.matrix.get(w[0], w[1]), true);
                }
            }
        }
    }
}

#[test]
fn markov_cover_blocks_map_into_the_even_tree_shift() {
    // Random Delta_4 blocks of the Markov tree cover, drawn top-down along
    // the direction matrices from a fixed-seed generator.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mats = [catalog::markov_cover_a0(), catalog::markov_cover_a1()];
    let map = catalog::markov_cover_symbol_map();
    let cover = catalog::markov_cover_tree().compile().unwrap();
    let even = TreeShiftSpec::hom(catalog::even_shift(), 2).unwrap().compile().unwrap();
    for _ in 0..2000 {
        let mut labels = std::collections::BTreeMap::new();
        labels.insert(TreeWord::root(), rng.gen_range(0..5) as Symbol);
        for w in Support::delta(3, 2).nodes() {
            let a = labels[w] as usize;
            for (i, m) in mats.iter().enumerate() {
                let next: Vec<usize> = m.successors(a).collect();
                labels.insert(w.child(i as u8), next[rng.gen_range(0..next.len())] as Symbol);
            }
        }
        let p = Pattern::new(2, labels).unwrap();
        assert!(cover.admissible(&p).unwrap());
        let image = p.map(|s| map[s as usize]);
        assert!(even.admissible(&image).unwrap(), "{:?}", image.labels());
    }
}
