//! Seeded synthetic corpora with planted co-occurrence structure, used by
//! the bundled mini-corpus and the tests.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lexicon::{SeedLexicon, Sense};
use crate::text::{Coarse, WordKey};

/// Words that co-occur with one sense's seeds.
const POOLS: [&[(&str, &str)]; 5] = [
    &[
        ("bright", "JJ"),
        ("shadow", "NN"),
        ("window", "NN"),
        ("pale", "JJ"),
        ("distant", "JJ"),
        ("colour", "NN"),
        ("shine", "VB"),
        ("clearly", "RB"),
    ],
    &[
        ("bell", "NN"),
        ("song", "NN"),
        ("thunder", "NN"),
        ("ring", "VB"),
        ("shrill", "JJ"),
        ("music", "NN"),
        ("faintly", "RB"),
        ("sing", "VB"),
    ],
    &[
        ("skin", "NN"),
        ("cold", "JJ"),
        ("fingers", "NNS"),
        ("hand", "NN"),
        ("firmly", "RB"),
        ("wet", "JJ"),
        ("fabric", "NN"),
        ("hold", "VB"),
    ],
    &[
        ("bread", "NN"),
        ("wine", "NN"),
        ("salt", "NN"),
        ("delicious", "JJ"),
        ("honey", "NN"),
        ("meal", "NN"),
        ("drink", "VB"),
        ("greedily", "RB"),
    ],
    &[
        ("smoke", "NN"),
        ("rose", "NN"),
        ("flowers", "NNS"),
        ("nose", "NN"),
        ("fresh", "JJ"),
        ("garden", "NN"),
        ("rotten", "JJ"),
        ("breathe", "VB"),
    ],
];

/// Words planted in the windows of several senses.
const SHARED: &[(&str, &str, &[Sense])] = &[
    ("eyes", "NNS", &Sense::ALL),
    ("warm", "JJ", &[Sense::Touch, Sense::Taste, Sense::Smell]),
    ("dark", "JJ", &[Sense::Sight, Sense::Hearing]),
    ("heavy", "JJ", &[Sense::Touch, Sense::Smell]),
];

/// Function words sprinkled in; all are stop words.
const FILLER: &[(&str, &str)] = &[("the", "DT"), ("and", "CC"), ("was", "VBD"), ("of", "IN"), ("a", "DT")];

fn seed_tag(coarse: Coarse) -> &'static str {
    match coarse {
        Coarse::Noun => "NN",
        Coarse::Verb => "VB",
        Coarse::Adjective => "JJ",
        Coarse::Adverb => "RB",
        _ => "NN",
    }
}

/// Pre-tagged text (`surface<TAB>TAG` per line, blank line between
/// sentences). Each sentence holds one uninflected seed of a random sense,
/// three to five words drawn mostly from that sense's pool and sometimes
/// from the shared words, and a little filler.
pub fn synthetic_tagged_text(lexicon: &SeedLexicon, sentences: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<Vec<(&str, &str)>> = Sense::ALL
        .iter()
        .map(|&s| {
            lexicon
                .for_sense(s)
                .filter(|e| !e.inflected)
                .map(|e| (e.surface.as_str(), seed_tag(e.coarse)))
                .collect()
        })
        .collect();
    let mut out = String::new();
    for _ in 0..sentences {
        let sense = *Sense::ALL.choose(&mut rng).expect("five senses");
        let s = sense.index();
        let mut words: Vec<(&str, &str)> = Vec::new();
        if let Some(&w) = seeds[s].choose(&mut rng) {
            words.push(w);
        }
        let shared: Vec<(&str, &str)> = SHARED
            .iter()
            .filter(|(_, _, senses)| senses.contains(&sense))
            .map(|(w, t, _)| (*w, *t))
            .collect();
        for _ in 0..rng.random_range(3..=5) {
            let pick = if rng.random_bool(0.3) {
                shared.choose(&mut rng)
            } else {
                POOLS[s].choose(&mut rng)
            };
            words.extend(pick.copied());
        }
        for _ in 0..rng.random_range(0..=2) {
            words.extend(FILLER.choose(&mut rng).copied());
        }
        words.shuffle(&mut rng);
        for (i, (w, t)) in words.iter().enumerate() {
            if i == 0 {
                let mut c = w.chars();
                let first: String = c.next().map(|f| f.to_uppercase().collect()).unwrap_or_default();
                out.push_str(&format!("{first}{}\t{t}\n", c.as_str()));
            } else {
                out.push_str(&format!("{w}\t{t}\n"));
            }
        }
        out.push_str(".\t.\n\n");
    }
    out
}

/// Training windows over three target words: `alpha` and `beta` each
/// appear with words drawn from one context pool, `gamma` only with words
/// from a disjoint pool. Returns the sequences and the three target keys.
pub fn planted_similarity_windows(seed: u64, windows: usize) -> (Vec<Vec<WordKey>>, [WordKey; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let key = |s: String| WordKey::new(s, Coarse::Noun);
    let shared: Vec<WordKey> = (0..12).map(|i| key(format!("near{i}"))).collect();
    let apart: Vec<WordKey> = (0..12).map(|i| key(format!("far{i}"))).collect();
    let targets = [key("alpha".into()), key("beta".into()), key("gamma".into())];
    let mut out = Vec::with_capacity(windows);
    for i in 0..windows {
        let t = i % 3;
        let pool = if t == 2 { &apart } else { &shared };
        let mut w: Vec<WordKey> = pool.choose_multiple(&mut rng, 4).cloned().collect();
        let at = rng.random_range(0..=w.len());
        w.insert(at, targets[t].clone());
        out.push(w);
    }
    (out, targets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::read_pretagged;
    use std::path::Path;

    #[test]
    fn synthetic_text_is_deterministic_and_parses() {
        let lex = SeedLexicon::bundled();
        let a = synthetic_tagged_text(&lex, 50, 3);
        assert_eq!(a, synthetic_tagged_text(&lex, 50, 3));
        assert_ne!(a, synthetic_tagged_text(&lex, 50, 4));
        let stream = read_pretagged(&a, Path::new("synthetic")).unwrap();
        assert_eq!(stream.iter().filter(|t| t.sentence_start).count(), 50);
    }

    #[test]
    fn pools_avoid_seed_words() {
        let lex = crate::lexicon::Morphology::default()
            .expand_lexicon(&SeedLexicon::bundled())
            .unwrap();
        for (w, t) in POOLS
            .iter()
            .flat_map(|p| p.iter().copied())
            .chain(SHARED.iter().map(|&(w, t, _)| (w, t)))
        {
            let key = WordKey::new(w, crate::text::coarse_pos(t));
            assert_eq!(lex.sense_of(&key), None, "{key}");
        }
    }

    #[test]
    fn planted_windows_shape() {
        let (w, t) = planted_similarity_windows(1, 30);
        assert_eq!(w.len(), 30);
        assert!(w.iter().all(|x| x.len() == 5));
        assert!(w[2].contains(&t[2]));
    }
}
