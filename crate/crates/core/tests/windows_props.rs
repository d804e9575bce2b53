mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use sensory::lexicon::SeedEntry;
use sensory::windows::{count_occurrences, extract_windows, WindowConfig, WindowCounts};
use sensory::{Coarse, SeedLexicon, Sense, TaggedToken, TokenStream, WordKey};

const VOCAB: &[(&str, &str)] = &[
    ("glance", "VB"),
    ("glance", "NN"),
    ("noisy", "JJ"),
    ("rough", "JJ"),
    ("bitter", "JJ"),
    ("stink", "NN"),
    ("road", "NN"),
    ("walked", "VBD"),
    ("old", "JJ"),
    ("then", "RB"),
    (",", ","),
    (".", "."),
    ("?", "."),
    (";", ":"),
    ("(", "-LRB-"),
    ("--", ":"),
    ("'", "POS"),
];

fn lexicon() -> SeedLexicon {
    SeedLexicon::new(vec![
        SeedEntry::new("glance", Coarse::Verb, Sense::Sight),
        SeedEntry::new("noisy", Coarse::Adjective, Sense::Hearing),
        SeedEntry::new("rough", Coarse::Adjective, Sense::Touch),
        SeedEntry::new("bitter", Coarse::Adjective, Sense::Taste),
        SeedEntry::new("stink", Coarse::Noun, Sense::Smell),
    ])
    .unwrap()
}

fn stream() -> impl Strategy<Value = Vec<TaggedToken>> {
    prop::collection::vec((0..VOCAB.len(), prop::bool::weighted(0.15)), 0..60).prop_map(|picks| {
        picks
            .into_iter()
            .enumerate()
            .map(|(i, (w, start))| {
                let mut t = TaggedToken::new(VOCAB[w].0, VOCAB[w].1);
                t.sentence_start = i == 0 || start;
                t
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn matches_rescan(tokens in stream(), half_width in 1usize..30) {
        let lex = lexicon();
        let seeds: HashMap<WordKey, Sense> = lex.entries().iter().map(|e| (e.key(), e.sense)).collect();
        let cfg = WindowConfig::with_half_width(half_width);
        let expected = common::naive_windows(&tokens, &seeds, half_width, &cfg.boundary_puncts);
        let s = TokenStream::new("b", tokens);
        let got: Vec<_> = extract_windows(&s, &lex, &cfg)
            .into_iter()
            .map(|w| {
                let left: Vec<usize> = w.left.iter().map(|m| m.position).collect();
                let right: Vec<usize> = w.right.iter().map(|m| m.position).collect();
                (w.seed_position, w.sense, left, right)
            })
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn members_stay_in_reach(tokens in stream(), half_width in 1usize..12) {
        let cfg = WindowConfig::with_half_width(half_width);
        let s = TokenStream::new("b", tokens);
        for w in extract_windows(&s, &lexicon(), &cfg) {
            prop_assert!(w.left.len() + w.right.len() <= 2 * half_width);
            for m in w.members() {
                prop_assert!(m.position.abs_diff(w.seed_position) <= half_width);
                prop_assert!(!m.token.is_punct());
                prop_assert_eq!(&m.token, &s.tokens[m.position]);
            }
        }
    }

    #[test]
    fn wider_windows_contain_narrower(tokens in stream(), a in 1usize..10, extra in 0usize..10) {
        let s = TokenStream::new("b", tokens);
        let narrow = extract_windows(&s, &lexicon(), &WindowConfig::with_half_width(a));
        let wide = extract_windows(&s, &lexicon(), &WindowConfig::with_half_width(a + extra));
        prop_assert_eq!(narrow.len(), wide.len());
        for (n, w) in narrow.iter().zip(&wide) {
            let wide_pos: Vec<usize> = w.members().map(|m| m.position).collect();
            prop_assert!(n.members().all(|m| wide_pos.contains(&m.position)));
        }
    }

    #[test]
    fn count_merge_is_split_invariant(tokens in stream(), cut in 0usize..60) {
        let s = TokenStream::new("b", tokens);
        let windows = extract_windows(&s, &lexicon(), &WindowConfig::default());
        let cut = cut.min(windows.len());
        let whole = count_occurrences(&windows);
        let mut merged = count_occurrences(&windows[cut..]);
        merged.merge(&count_occurrences(&windows[..cut]));
        prop_assert_eq!(&merged, &whole);
        let mut empty = WindowCounts::default();
        empty.merge(&whole);
        prop_assert_eq!(&empty, &whole);
        for (key, row) in &whole.counts {
            for s in Sense::ALL {
                prop_assert!(row[s.index()] <= whole.total(s), "{} exceeds window total", key);
            }
        }
    }
}
