use std::collections::BTreeSet;

use proptest::prelude::*;

use treeshift::catalog;
use treeshift::hom_construct::{f1_from_fx, f2_from_ftree, TreeShiftSpec};
use treeshift::mixing::{check_block_gluing, check_si, Budget};
use treeshift::shift_core::{essentialize, AdjacencyMatrix, Alphabet, ShiftSpec, Symbol};
use treeshift::tree_core::{
    boundary, project_chain, replace_branches, shift_pattern, sigma_n, word_distance, ChainPrefix, Pattern, Support,
    TreeWord,
};

fn tree_word(k: u8, max_len: usize) -> impl Strategy<Value = TreeWord> {
    prop::collection::vec(0..k, 0..=max_len).prop_map(TreeWord::new)
}

/// A random SFT over 2 or 3 symbols with forbidden words of length 2 or 3.
fn sft() -> impl Strategy<Value = ShiftSpec> {
    (2usize..=3, 1usize..=3, any::<u64>()).prop_map(|(d, len, bits)| {
        // Keep roughly a quarter of the words forbidden.
        let mask = bits & bits.rotate_left(17);
        catalog::sft_from_code(d, len.max(2).min(if d == 3 { 2 } else { 3 }), mask)
    })
}

fn hom(x: &ShiftSpec) -> treeshift::hom_construct::TreeShift {
    TreeShiftSpec::hom(x.clone(), 2).unwrap().compile().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn words_are_factorial_and_extendable(x in sft(), m in 0usize..6) {
        let lang = x.language().unwrap();
        let short: BTreeSet<Vec<Symbol>> = lang.words(m).into_iter().collect();
        let long = lang.words(m + 1);
        for w in &long {
            prop_assert!(short.contains(&w[..m]));
        }
        let heads: BTreeSet<&[Symbol]> = long.iter().map(|w| &w[..m]).collect();
        prop_assert_eq!(heads.len(), short.len());
    }

    #[test]
    fn word_distance_is_a_metric(x in tree_word(3, 12), y in tree_word(3, 12), z in tree_word(3, 12)) {
        prop_assert_eq!(word_distance(&x, &x), 0);
        prop_assert_eq!(word_distance(&x, &y), word_distance(&y, &x));
        prop_assert!(word_distance(&x, &z) <= word_distance(&x, &y) + word_distance(&y, &z));
    }

    #[test]
    fn boundaries_are_prefix_sets(ws in prop::collection::vec(tree_word(2, 5), 1..6)) {
        let s = Support::closure(2, ws).unwrap();
        let b = boundary(&s).unwrap();
        for x in &b {
            for y in &b {
                prop_assert!(x == y || !x.is_prefix_of(y));
            }
        }
        // Complete exactly when every inner node has all its children.
        let complete = s.nodes().iter().all(|w| b.contains(w) || (0..2).all(|d| s.contains(&w.child(d))));
        prop_assert_eq!(treeshift::tree_core::is_cpc(&b, 2), complete);
    }

    #[test]
    fn replacement_without_gap_is_identity(z in tree_word(2, 10), n in 0usize..12) {
        prop_assert_eq!(replace_branches(&z, n, 0), z.clone());
        prop_assert_eq!(replace_branches(&z, z.len(), 3), z);
    }

    #[test]
    fn shifts_compose(s in tree_word(2, 2), r in tree_word(2, 2), seed in any::<u64>()) {
        let p = Pattern::from_fn(&Support::delta(5, 2), |w| ((seed >> (w.len() * 3 + w.dirs().iter().map(|&d| d as usize).sum::<usize>())) & 1) as Symbol);
        let once = shift_pattern(&shift_pattern(&p, &s, None).unwrap(), &r, None).unwrap();
        prop_assert_eq!(once, shift_pattern(&p, &s.concat(&r), None).unwrap());
    }

    #[test]
    fn forbidden_sets_round_trip(x in sft()) {
        let ShiftSpec::Sft(fx) = &x else { unreachable!() };
        let f1 = f1_from_fx(fx, 2).unwrap();
        let back = ShiftSpec::Sft(f2_from_ftree(&f1, &fx.alphabet).unwrap());
        let (a, b) = (x.language().unwrap(), back.language().unwrap());
        for m in 0..=8 {
            prop_assert_eq!(a.words(m), b.words(m));
        }
    }

    #[test]
    fn explicit_forbidden_set_gives_the_same_blocks(x in sft()) {
        let ShiftSpec::Sft(fx) = &x else { unreachable!() };
        let f1 = f1_from_fx(fx, 2).unwrap();
        let explicit = TreeShiftSpec::explicit(fx.alphabet.clone(), 2, f1, None).unwrap().compile().unwrap();
        let t = hom(&x);
        let top = if fx.alphabet.len() == 2 { 3 } else { 2 };
        for n in 0..=top {
            prop_assert_eq!(t.blocks(n).unwrap(), explicit.blocks(n).unwrap());
        }
    }

    #[test]
    fn chains_of_blocks_are_words(x in sft(), n in 0usize..3) {
        let lang = x.language().unwrap();
        let words: BTreeSet<Vec<Symbol>> = lang.words(n + 1).into_iter().collect();
        let t = hom(&x);
        for p in t.blocks(n).unwrap().iter().take(200) {
            for leaf in sigma_n(n, 2) {
                let w = project_chain(p, &ChainPrefix::along(&leaf)).unwrap();
                prop_assert!(words.contains(&w));
            }
        }
        for w in &words {
            prop_assert!(t.admissible(&Pattern::layer_constant(w, 2).unwrap()).unwrap());
        }
    }

    #[test]
    fn refutations_recheck(x in sft(), gap in 1usize..3) {
        let t = hom(&x);
        prop_assume!(!t.is_empty());
        let b = Budget { reduce: false, ..Budget::small(1, 4) };
        if let Some(w) = check_block_gluing(&t, gap, &b).unwrap().witness() {
            prop_assert!(w.recheck(&t).unwrap());
        }
        let b = Budget { depth: 3, ..b };
        if let Some(w) = check_si(&t, gap, &b).unwrap().witness() {
            prop_assert!(w.recheck(&t).unwrap());
        }
    }

    #[test]
    fn reduced_gluing_agrees_with_plain(x in sft(), gap in 1usize..3) {
        let t = hom(&x);
        prop_assume!(!t.is_empty());
        let reduced = check_block_gluing(&t, gap, &Budget::small(1, 4)).unwrap();
        let plain = check_block_gluing(&t, gap, &Budget { reduce: false, ..Budget::small(1, 4) }).unwrap();
        prop_assert_eq!(reduced.is_positive(), plain.is_positive());
    }

    #[test]
    fn spec_text_round_trips(x in sft(), k in 2u8..4) {
        let text = x.to_text();
        prop_assert_eq!(ShiftSpec::parse(&text).unwrap(), x.clone());
        let t = TreeShiftSpec::hom(x, k).unwrap();
        prop_assert_eq!(TreeShiftSpec::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn patterns_round_trip_inline(seed in any::<u64>(), n in 0usize..4) {
        let alphabet = Alphabet::numeric(3);
        let p = Pattern::from_fn(&Support::delta(n, 2), |w| ((seed >> (2 * w.len() + w.dirs().first().copied().unwrap_or(0) as usize)) % 3) as Symbol);
        let text = p.to_inline(&alphabet);
        prop_assert_eq!(Pattern::parse_text(&text, &alphabet, 2).unwrap(), p);
    }

    #[test]
    fn essentialize_is_idempotent(code in 0u32..1 << 16) {
        let rows = (0..4).map(|i| (0..4).map(|j| (code >> (i * 4 + j) & 1) as u8).collect()).collect();
        let (once, _) = essentialize(&AdjacencyMatrix::new(rows).unwrap());
        if once.dim() > 0 {
            let (twice, keep) = essentialize(&once);
            prop_assert_eq!(&twice, &once);
            prop_assert_eq!(keep.len(), once.dim());
        }
    }
}
