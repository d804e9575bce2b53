//! Per-sense seed word lists and their rule-based inflection.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{Coarse, WordKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Sight,
    Hearing,
    Touch,
    Taste,
    Smell,
}

impl Sense {
    pub const ALL: [Sense; 5] = [Sense::Sight, Sense::Hearing, Sense::Touch, Sense::Taste, Sense::Smell];

    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Sight => "sight",
            Sense::Hearing => "hearing",
            Sense::Touch => "touch",
            Sense::Taste => "taste",
            Sense::Smell => "smell",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sense {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sense::ALL
            .into_iter()
            .find(|sense| sense.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown sense `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SeedEntry {
    pub surface: String,
    pub coarse: Coarse,
    pub sense: Sense,
    /// Produced by [`expand_morphology`] rather than listed in a seed file.
    #[serde(default)]
    pub inflected: bool,
}

impl SeedEntry {
    pub fn new(surface: &str, coarse: Coarse, sense: Sense) -> Self {
        SeedEntry {
            surface: surface.to_lowercase(),
            coarse,
            sense,
            inflected: false,
        }
    }

    pub fn key(&self) -> WordKey {
        WordKey::new(self.surface.clone(), self.coarse)
    }
}

/// Five pairwise-disjoint seed lists, one per sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedLexicon {
    entries: Vec<SeedEntry>,
    index: HashMap<WordKey, Sense>,
}

impl SeedLexicon {
    /// Validates and indexes `entries`. Fails if a (surface, coarse) pair is
    /// listed under two senses or a sense has no entries.
    pub fn new(entries: Vec<SeedEntry>) -> Result<Self> {
        let mut owners: BTreeMap<WordKey, Vec<Sense>> = BTreeMap::new();
        let mut deduped = Vec::with_capacity(entries.len());
        for e in entries {
            if e.surface.is_empty() {
                return Err(Error::Config(format!("empty seed surface in {} list", e.sense)));
            }
            let senses = owners.entry(e.key()).or_default();
            if !senses.contains(&e.sense) {
                senses.push(e.sense);
                deduped.push(e);
            }
        }
        let pairs: Vec<String> = owners
            .iter()
            .filter(|(_, s)| s.len() > 1)
            .map(|(k, s)| format!("{k} ({})", s.iter().map(|x| x.as_str()).collect::<Vec<_>>().join(", ")))
            .collect();
        if !pairs.is_empty() {
            return Err(Error::SeedOverlap { pairs });
        }
        for sense in Sense::ALL {
            if !deduped.iter().any(|e| e.sense == sense) {
                return Err(Error::EmptySense(sense.to_string()));
            }
        }
        let index = owners.into_iter().map(|(k, s)| (k, s[0])).collect();
        Ok(SeedLexicon {
            entries: deduped,
            index,
        })
    }

    /// The seed lists shipped with the crate.
    pub fn bundled() -> Self {
        let files = [
            (Sense::Sight, include_str!("../data/seeds/sight.txt")),
            (Sense::Hearing, include_str!("../data/seeds/hearing.txt")),
            (Sense::Touch, include_str!("../data/seeds/touch.txt")),
            (Sense::Taste, include_str!("../data/seeds/taste.txt")),
            (Sense::Smell, include_str!("../data/seeds/smell.txt")),
        ];
        let mut entries = Vec::new();
        for (sense, text) in files {
            entries.extend(parse_seed_file(text, sense, Path::new(sense.as_str())).expect("bundled seeds parse"));
        }
        SeedLexicon::new(entries).expect("bundled seeds are disjoint")
    }

    pub fn entries(&self) -> &[SeedEntry] {
        &self.entries
    }

    pub fn sense_of(&self, key: &WordKey) -> Option<Sense> {
        self.index.get(key).copied()
    }

    pub fn for_sense(&self, sense: Sense) -> impl Iterator<Item = &SeedEntry> {
        self.entries.iter().filter(move |e| e.sense == sense)
    }

    pub fn sense_sizes(&self) -> [usize; 5] {
        let mut sizes = [0; 5];
        for e in &self.entries {
            sizes[e.sense.index()] += 1;
        }
        sizes
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn parse_seed_file(text: &str, sense: Sense, path: &Path) -> Result<Vec<SeedEntry>> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let key: WordKey = line.parse().map_err(parse_err)?;
        if !key.coarse.is_content() {
            return Err(parse_err(format!("seed `{line}` must be n, v, a or r")));
        }
        entries.push(SeedEntry::new(&key.surface, key.coarse, sense));
    }
    Ok(entries)
}

/// Loads `sight.txt`, `hearing.txt`, `touch.txt`, `taste.txt` and
/// `smell.txt` from `seed_dir`, one `surface/coarse` per line.
pub fn load_seeds(seed_dir: &Path) -> Result<SeedLexicon> {
    let mut entries = Vec::new();
    for sense in Sense::ALL {
        let path = seed_dir.join(format!("{}.txt", sense.as_str()));
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let parsed = parse_seed_file(&text, sense, &path)?;
        if parsed.is_empty() {
            return Err(Error::EmptySense(sense.to_string()));
        }
        entries.extend(parsed);
    }
    SeedLexicon::new(entries)
}

/// Irregular verb forms beyond the base.
#[derive(Debug, Clone, PartialEq, Eq)]
struct VerbForms {
    forms: Vec<String>,
}

/// Rule-based English inflection with an exception table for irregular
/// verbs and a few irregular nouns.
#[derive(Debug, Clone)]
pub struct Morphology {
    irregular_verbs: HashMap<String, VerbForms>,
}

const IRREGULAR_NOUNS: &[(&str, &str)] = &[
    ("teeth", "tooth"),
    ("tooth", "teeth"),
    ("foot", "feet"),
    ("feet", "foot"),
];

impl Default for Morphology {
    fn default() -> Self {
        Morphology::from_table(include_str!("../data/irregular_verbs.tsv"))
    }
}

impl Morphology {
    /// Tab-separated rows: base, third singular, past, past participle,
    /// present participle. Cells may hold comma-separated alternatives.
    pub fn from_table(tsv: &str) -> Self {
        let irregular_verbs = tsv
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .filter_map(|l| {
                let mut cells = l.split('\t');
                let base = cells.next()?.trim().to_lowercase();
                let forms = cells
                    .flat_map(|c| c.split(','))
                    .map(|f| f.trim().to_lowercase())
                    .filter(|f| !f.is_empty())
                    .collect();
                Some((base, VerbForms { forms }))
            })
            .collect();
        Morphology { irregular_verbs }
    }

    /// Returns the entry followed by its inflections, deduplicated.
    /// Entries already marked as inflected are returned unchanged.
    pub fn expand(&self, entry: &SeedEntry) -> Vec<SeedEntry> {
        let mut out = vec![entry.clone()];
        if entry.inflected {
            return out;
        }
        let w = entry.surface.as_str();
        let forms: Vec<String> = match entry.coarse {
            Coarse::Verb => match self.irregular_verbs.get(w) {
                Some(irr) => irr.forms.clone(),
                None => vec![third_singular(w), past(w), present_participle(w)],
            },
            Coarse::Noun => match IRREGULAR_NOUNS.iter().find(|(n, _)| *n == w) {
                Some((_, other)) => vec![other.to_string()],
                None => vec![third_singular(w)],
            },
            _ => Vec::new(),
        };
        for f in forms {
            if !out.iter().any(|e| e.surface == f) {
                out.push(SeedEntry {
                    surface: f,
                    coarse: entry.coarse,
                    sense: entry.sense,
                    inflected: true,
                });
            }
        }
        out
    }

    /// Expands every entry and re-validates cross-sense disjointness. Warns
    /// when a sense's expanded list falls outside 50..=400 entries.
    pub fn expand_lexicon(&self, lexicon: &SeedLexicon) -> Result<SeedLexicon> {
        let expanded: Vec<SeedEntry> = lexicon.entries().iter().flat_map(|e| self.expand(e)).collect();
        let out = SeedLexicon::new(expanded)?;
        for (sense, n) in Sense::ALL.iter().zip(out.sense_sizes()) {
            if !(50..=400).contains(&n) {
                warn!("expanded {sense} seed list has {n} entries, outside the expected 50-400 band");
            }
        }
        Ok(out)
    }
}

/// [`Morphology::expand`] with the bundled exception table.
pub fn expand_morphology(entry: &SeedEntry) -> Vec<SeedEntry> {
    static DEFAULT: OnceLock<Morphology> = OnceLock::new();
    DEFAULT.get_or_init(Morphology::default).expand(entry)
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn syllables(w: &str) -> usize {
    let b = w.as_bytes();
    let mut groups = 0;
    let mut in_group = false;
    for (i, &c) in b.iter().enumerate() {
        let v = is_vowel(c) || (c == b'y' && i > 0);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    // silent final e
    if groups > 1 && w.ends_with('e') && !w.ends_with("le") && !is_vowel(b[b.len().saturating_sub(2)]) {
        groups -= 1;
    }
    groups
}

/// Single-syllable consonant-vowel-consonant endings double the final
/// consonant before -ed/-ing (rub → rubbing), except after w, x, y.
fn doubles_final(w: &str) -> bool {
    let b = w.as_bytes();
    let n = b.len();
    n >= 3
        && syllables(w) == 1
        && !is_vowel(b[n - 1])
        && !matches!(b[n - 1], b'w' | b'x' | b'y')
        && is_vowel(b[n - 2])
        && !is_vowel(b[n - 3])
}

fn consonant_y(w: &str) -> bool {
    let b = w.as_bytes();
    b.len() >= 2 && b[b.len() - 1] == b'y' && !is_vowel(b[b.len() - 2])
}

fn third_singular(w: &str) -> String {
    if consonant_y(w) {
        format!("{}ies", &w[..w.len() - 1])
    } else if ["s", "x", "z", "ch", "sh"].iter().any(|s| w.ends_with(s)) {
        format!("{w}es")
    } else {
        format!("{w}s")
    }
}

fn past(w: &str) -> String {
    if w.ends_with('e') {
        format!("{w}d")
    } else if consonant_y(w) {
        format!("{}ied", &w[..w.len() - 1])
    } else if doubles_final(w) {
        format!("{w}{}ed", &w[w.len() - 1..])
    } else {
        format!("{w}ed")
    }
}

fn present_participle(w: &str) -> String {
    if let Some(stem) = w.strip_suffix("ie") {
        format!("{stem}ying")
    } else if w.ends_with('e') && !["ee", "ye", "oe"].iter().any(|s| w.ends_with(s)) && w.len() > 2 {
        format!("{}ing", &w[..w.len() - 1])
    } else if doubles_final(w) {
        format!("{w}{}ing", &w[w.len() - 1..])
    } else {
        format!("{w}ing")
    }
}
