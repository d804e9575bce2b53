//! Seed-anchored context windows and per-sense window counts.
//!
//! A window spans up to `half_width` token positions either side of a seed
//! occurrence and is cut short at the first boundary punctuation mark or
//! sentence start in each direction. Punctuation and the anchoring seed are
//! not members.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{SeedLexicon, Sense};
use crate::text::{TaggedToken, TokenStream, WordKey};

/// Window half-widths with a tested cutoff grid.
pub const STANDARD_HALF_WIDTHS: [usize; 4] = [4, 10, 15, 25];

pub const DEFAULT_BOUNDARIES: &[&str] = &[
    ".", ",", ":", ";", "!", "?", "\"", "“", "”", "'", "‘", "’", "``", "''", "...", "…",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowConfig {
    pub half_width: usize,
    pub boundary_puncts: BTreeSet<String>,
}

fn default_boundaries() -> BTreeSet<String> {
    DEFAULT_BOUNDARIES.iter().map(|s| s.to_string()).collect()
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            half_width: 4,
            boundary_puncts: default_boundaries(),
        }
    }
}

impl WindowConfig {
    pub fn with_half_width(half_width: usize) -> Self {
        WindowConfig {
            half_width,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.half_width == 0 {
            return Err(Error::Config("window half_width must be positive".into()));
        }
        if self.boundary_puncts.is_empty() {
            return Err(Error::Config("window boundary punctuation set is empty".into()));
        }
        Ok(())
    }

    pub fn is_standard(&self) -> bool {
        STANDARD_HALF_WIDTHS.contains(&self.half_width)
    }

    pub fn is_boundary(&self, tok: &TaggedToken) -> bool {
        self.boundary_puncts.contains(tok.surface.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowMember {
    /// Index in the (stop-word filtered) token stream.
    pub position: usize,
    pub token: TaggedToken,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextWindow {
    pub sense: Sense,
    pub seed: TaggedToken,
    pub book_id: String,
    pub seed_position: usize,
    /// Members left of the seed, in text order.
    pub left: Vec<WindowMember>,
    /// Members right of the seed, in text order.
    pub right: Vec<WindowMember>,
}

impl ContextWindow {
    pub fn members(&self) -> impl Iterator<Item = &WindowMember> {
        self.left.iter().chain(&self.right)
    }

    pub fn member_tokens(&self) -> impl Iterator<Item = &TaggedToken> {
        self.members().map(|m| &m.token)
    }

    /// Members and the anchoring seed in text order, as used for training.
    pub fn training_tokens(&self) -> Vec<WordKey> {
        self.left
            .iter()
            .map(|m| m.token.key())
            .chain(std::iter::once(self.seed.key()))
            .chain(self.right.iter().map(|m| m.token.key()))
            .collect()
    }
}

/// One window per seed occurrence in `stream`.
pub fn extract_windows(stream: &TokenStream, lexicon: &SeedLexicon, config: &WindowConfig) -> Vec<ContextWindow> {
    let tokens = &stream.tokens;
    let mut windows = Vec::new();
    for (pos, tok) in tokens.iter().enumerate() {
        if tok.is_punct() {
            continue;
        }
        let Some(sense) = lexicon.sense_of(&tok.key()) else {
            continue;
        };

        let mut left = Vec::new();
        if !tok.sentence_start {
            for j in (pos.saturating_sub(config.half_width)..pos).rev() {
                let t = &tokens[j];
                if config.is_boundary(t) {
                    break;
                }
                if !t.is_punct() {
                    left.push(WindowMember {
                        position: j,
                        token: t.clone(),
                    });
                }
                if t.sentence_start {
                    break;
                }
            }
            left.reverse();
        }

        let mut right = Vec::new();
        for (j, t) in tokens.iter().enumerate().skip(pos + 1).take(config.half_width) {
            if t.sentence_start || config.is_boundary(t) {
                break;
            }
            if !t.is_punct() {
                right.push(WindowMember {
                    position: j,
                    token: t.clone(),
                });
            }
        }

        windows.push(ContextWindow {
            sense,
            seed: tok.clone(),
            book_id: stream.book_id.clone(),
            seed_position: pos,
            left,
            right,
        });
    }
    windows
}

/// Number of distinct windows per sense containing each word, plus the
/// number of windows per sense.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "CountsRepr", into = "CountsRepr")]
pub struct WindowCounts {
    pub counts: BTreeMap<WordKey, [u64; 5]>,
    pub totals: [u64; 5],
}

#[derive(Serialize, Deserialize)]
struct CountsRepr {
    totals: [u64; 5],
    rows: Vec<(WordKey, [u64; 5])>,
}

impl From<CountsRepr> for WindowCounts {
    fn from(r: CountsRepr) -> Self {
        WindowCounts {
            counts: r.rows.into_iter().collect(),
            totals: r.totals,
        }
    }
}

impl From<WindowCounts> for CountsRepr {
    fn from(c: WindowCounts) -> Self {
        CountsRepr {
            totals: c.totals,
            rows: c.counts.into_iter().collect(),
        }
    }
}

impl WindowCounts {
    pub fn add_window(&mut self, window: &ContextWindow) {
        let s = window.sense.index();
        self.totals[s] += 1;
        let distinct: BTreeSet<WordKey> = window.member_tokens().map(TaggedToken::key).collect();
        for key in distinct {
            self.counts.entry(key).or_default()[s] += 1;
        }
    }

    /// Associative, commutative merge.
    pub fn merge(&mut self, other: &WindowCounts) {
        for (t, o) in self.totals.iter_mut().zip(other.totals) {
            *t += o;
        }
        for (key, row) in &other.counts {
            let mine = self.counts.entry(key.clone()).or_default();
            for (m, o) in mine.iter_mut().zip(row) {
                *m += o;
            }
        }
    }

    pub fn count(&self, key: &WordKey, sense: Sense) -> u64 {
        self.counts.get(key).map_or(0, |row| row[sense.index()])
    }

    pub fn total(&self, sense: Sense) -> u64 {
        self.totals[sense.index()]
    }
}

pub fn count_occurrences<'a>(windows: impl IntoIterator<Item = &'a ContextWindow>) -> WindowCounts {
    let mut counts = WindowCounts::default();
    for w in windows {
        counts.add_window(w);
    }
    counts
}

fn write_member(out: &mut String, m: &WindowMember, seed_position: usize) {
    let offset = m.position as i64 - seed_position as i64;
    out.push_str(&format!("{}/{}@{}", m.token.surface, m.token.ptb_tag, offset));
}

/// Window dump line: `sense<TAB>seed/TAG<TAB>book_id<TAB>position<TAB>left<TAB>right`,
/// members written as space-separated `surface/TAG@offset`.
pub fn format_window(w: &ContextWindow) -> String {
    let mut line = format!(
        "{}\t{}/{}\t{}\t{}\t",
        w.sense, w.seed.surface, w.seed.ptb_tag, w.book_id, w.seed_position
    );
    for (i, m) in w.left.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        write_member(&mut line, m, w.seed_position);
    }
    line.push('\t');
    for (i, m) in w.right.iter().enumerate() {
        if i > 0 {
            line.push(' ');
        }
        write_member(&mut line, m, w.seed_position);
    }
    line
}

pub fn write_window_dump<'a, W: Write>(
    mut out: W,
    windows: impl IntoIterator<Item = &'a ContextWindow>,
) -> std::io::Result<()> {
    for w in windows {
        writeln!(out, "{}", format_window(w))?;
    }
    Ok(())
}

fn parse_tagged(s: &str) -> Option<TaggedToken> {
    let (surface, tag) = s.rsplit_once('/')?;
    (!surface.is_empty() && !tag.is_empty()).then(|| TaggedToken::new(surface, tag))
}

pub fn parse_window(line: &str) -> std::result::Result<ContextWindow, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 6 {
        return Err(format!("expected 6 tab-separated fields, found {}", fields.len()));
    }
    let sense: Sense = fields[0].parse()?;
    let seed = parse_tagged(fields[1]).ok_or("malformed seed")?;
    let seed_position: usize = fields[3].parse().map_err(|_| "malformed seed position")?;
    let members = |field: &str| -> std::result::Result<Vec<WindowMember>, String> {
        field
            .split(' ')
            .filter(|s| !s.is_empty())
            .map(|s| {
                let (tok, offset) = s.rsplit_once('@').ok_or("member without offset")?;
                let offset: i64 = offset.parse().map_err(|_| "malformed member offset")?;
                let position =
                    usize::try_from(seed_position as i64 + offset).map_err(|_| "member offset before stream start")?;
                let token = parse_tagged(tok).ok_or("malformed member")?;
                Ok(WindowMember { position, token })
            })
            .collect()
    };
    Ok(ContextWindow {
        sense,
        seed,
        book_id: fields[2].to_string(),
        seed_position,
        left: members(fields[4])?,
        right: members(fields[5])?,
    })
}

/// Streams windows from a dump, calling `f` on each.
pub fn read_window_dump<R: BufRead>(
    reader: R,
    source: &std::path::Path,
    mut f: impl FnMut(ContextWindow),
) -> Result<()> {
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.is_empty() {
            continue;
        }
        let w = parse_window(&line).map_err(|message| Error::Parse {
            path: source.to_path_buf(),
            line: i + 1,
            message,
        })?;
        f(w);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::SeedEntry;
    use crate::text::Coarse;

    fn lexicon() -> SeedLexicon {
        SeedLexicon::new(vec![
            SeedEntry::new("see", Coarse::Verb, Sense::Sight),
            SeedEntry::new("hear", Coarse::Verb, Sense::Hearing),
            SeedEntry::new("touch", Coarse::Verb, Sense::Touch),
            SeedEntry::new("taste", Coarse::Verb, Sense::Taste),
            SeedEntry::new("smell", Coarse::Verb, Sense::Smell),
        ])
        .unwrap()
    }

    fn stream(pairs: &[(&str, &str)]) -> TokenStream {
        TokenStream::new("book", pairs.iter().map(|(s, t)| TaggedToken::new(*s, *t)).collect())
    }

    fn surfaces(ms: &[WindowMember]) -> Vec<&str> {
        ms.iter().map(|m| m.token.surface.as_str()).collect()
    }

    #[test]
    fn comma_truncates_right_side() {
        let s = stream(&[
            ("She", "PRP"),
            ("could", "MD"),
            ("smell", "VB"),
            ("the", "DT"),
            ("sweet", "JJ"),
            ("bread", "NN"),
            (",", ","),
            ("and", "CC"),
            ("it", "PRP"),
            ("was", "VBD"),
            ("warm", "JJ"),
            (".", "."),
        ]);
        let ws = extract_windows(&s, &lexicon(), &WindowConfig::with_half_width(4));
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].sense, Sense::Smell);
        assert_eq!(surfaces(&ws[0].left), ["She", "could"]);
        assert_eq!(surfaces(&ws[0].right), ["the", "sweet", "bread"]);
    }

    #[test]
    fn seed_at_stream_start() {
        let s = stream(&[
            ("smell", "VB"),
            ("a", "DT"),
            ("b", "NN"),
            ("c", "NN"),
            ("d", "NN"),
            ("e", "NN"),
        ]);
        let ws = extract_windows(&s, &lexicon(), &WindowConfig::with_half_width(2));
        assert!(ws[0].left.is_empty());
        assert_eq!(surfaces(&ws[0].right), ["a", "b"]);
    }

    #[test]
    fn no_seeds_no_windows() {
        let s = stream(&[("nothing", "NN"), ("here", "RB")]);
        assert!(extract_windows(&s, &lexicon(), &WindowConfig::default()).is_empty());
    }

    #[test]
    fn non_boundary_punct_excluded_but_occupies_positions() {
        let s = stream(&[("a", "NN"), ("(", "-LRB-"), ("b", "NN"), ("see", "VB"), ("c", "NN")]);
        let ws = extract_windows(&s, &lexicon(), &WindowConfig::with_half_width(2));
        assert_eq!(surfaces(&ws[0].left), ["b"]);
    }

    #[test]
    fn sentence_start_stops_windows() {
        let mut s = stream(&[("a", "NN"), ("see", "VB"), ("b", "NN"), ("c", "NN")]);
        s.tokens[2].sentence_start = true;
        let ws = extract_windows(&s, &lexicon(), &WindowConfig::with_half_width(4));
        assert_eq!(surfaces(&ws[0].left), ["a"]);
        assert!(ws[0].right.is_empty());

        let mut s = stream(&[("a", "NN"), ("b", "NN"), ("see", "VB")]);
        s.tokens[1].sentence_start = true;
        let ws = extract_windows(&s, &lexicon(), &WindowConfig::with_half_width(4));
        assert_eq!(surfaces(&ws[0].left), ["b"]);
    }

    #[test]
    fn counts_are_per_window() {
        let mut windows = Vec::new();
        let make = |sense, members: &[&str]| ContextWindow {
            sense,
            seed: TaggedToken::new("x", "VB"),
            book_id: "b".into(),
            seed_position: 0,
            left: vec![],
            right: members
                .iter()
                .enumerate()
                .map(|(i, m)| WindowMember {
                    position: i + 1,
                    token: TaggedToken::new(*m, "NN"),
                })
                .collect(),
        };
        for _ in 0..3 {
            windows.push(make(Sense::Smell, &["bread"]));
        }
        windows.push(make(Sense::Taste, &["bread", "bread"]));
        let c = count_occurrences(&windows);
        let bread = WordKey::new("bread", Coarse::Noun);
        assert_eq!(c.count(&bread, Sense::Smell), 3);
        assert_eq!(c.count(&bread, Sense::Taste), 1);
        assert_eq!(c.total(Sense::Smell), 3);
        assert_eq!(count_occurrences(&[]), WindowCounts::default());
    }

    #[test]
    fn dump_roundtrip() {
        let s = stream(&[
            ("I", "PRP"),
            ("smell", "VB"),
            ("fresh", "JJ"),
            ("1/2", "CD"),
            ("bread", "NN"),
        ]);
        let ws = extract_windows(&s, &lexicon(), &WindowConfig::with_half_width(4));
        let mut buf = Vec::new();
        write_window_dump(&mut buf, &ws).unwrap();
        let mut back = Vec::new();
        read_window_dump(&buf[..], std::path::Path::new("dump"), |w| back.push(w)).unwrap();
        assert_eq!(back, ws);
    }

    #[test]
    fn counts_serde_roundtrip() {
        let mut c = WindowCounts::default();
        c.counts.insert(WordKey::new("a", Coarse::Noun), [1, 2, 3, 4, 5]);
        c.totals = [5, 5, 5, 5, 5];
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<WindowCounts>(&json).unwrap(), c);
    }
}
