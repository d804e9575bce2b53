//! Descriptor identification: content words that appear in at least
//! `cutoff` context windows of some sense, with per-sense top-K rankings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Sense;
use crate::text::{Coarse, WordKey};
use crate::windows::WindowCounts;

/// (half-width, cutoffs) combinations with reference results.
pub const TESTED_GRID: &[(usize, &[u64])] = &[
    (4, &[30, 100, 150, 200, 500, 1000, 2000, 3000]),
    (10, &[300, 400, 500, 1000, 3000]),
    (15, &[400, 600, 2000, 6000]),
    (25, &[500, 800, 3000, 8000]),
];

pub fn is_tested_pair(half_width: usize, cutoff: u64) -> bool {
    TESTED_GRID
        .iter()
        .any(|(w, cutoffs)| *w == half_width && cutoffs.contains(&cutoff))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DescriptorConfig {
    pub cutoff: u64,
    pub top_k: usize,
}

impl Default for DescriptorConfig {
    fn default() -> Self {
        DescriptorConfig { cutoff: 30, top_k: 200 }
    }
}

impl DescriptorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cutoff == 0 {
            return Err(Error::Config("descriptor cutoff must be at least 1".into()));
        }
        if self.top_k == 0 {
            return Err(Error::Config("descriptor top_k must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorRow {
    pub key: WordKey,
    pub counts: [u64; 5],
    pub passes: [bool; 5],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedDescriptor {
    pub key: WordKey,
    pub count: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorTable {
    pub cutoff: u64,
    /// Sorted by key.
    pub rows: Vec<DescriptorRow>,
    pub top: BTreeMap<Sense, Vec<RankedDescriptor>>,
}

pub fn identify_descriptors(counts: &WindowCounts, config: &DescriptorConfig) -> DescriptorTable {
    let rows: Vec<DescriptorRow> = counts
        .counts
        .iter()
        .filter(|(key, _)| key.coarse.is_content())
        .filter_map(|(key, row)| {
            let passes = row.map(|c| c >= config.cutoff);
            passes.iter().any(|&p| p).then(|| DescriptorRow {
                key: key.clone(),
                counts: *row,
                passes,
            })
        })
        .collect();
    let mut table = DescriptorTable {
        cutoff: config.cutoff,
        rows,
        top: BTreeMap::new(),
    };
    for sense in Sense::ALL {
        let ranked = top_k(&table, sense, config.top_k);
        table.top.insert(sense, ranked);
    }
    table
}

/// Descriptors passing the cutoff for `sense`, by descending window count
/// with ties broken by (surface, coarse).
pub fn top_k(table: &DescriptorTable, sense: Sense, k: usize) -> Vec<RankedDescriptor> {
    let s = sense.index();
    let mut ranked: Vec<RankedDescriptor> = table
        .rows
        .iter()
        .filter(|r| r.passes[s])
        .map(|r| RankedDescriptor {
            key: r.key.clone(),
            count: r.counts[s],
        })
        .collect();
    ranked.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.key.cmp(&b.key)));
    ranked.truncate(k);
    ranked
}

/// Counts over n, v, a, r in that order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosHistogram {
    pub counts: [usize; 4],
}

impl PosHistogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn get(&self, coarse: Coarse) -> usize {
        Coarse::CONTENT
            .iter()
            .position(|&c| c == coarse)
            .map_or(0, |i| self.counts[i])
    }
}

pub fn pos_histogram(list: &[RankedDescriptor]) -> PosHistogram {
    let mut h = PosHistogram::default();
    for d in list {
        if let Some(i) = Coarse::CONTENT.iter().position(|&c| c == d.key.coarse) {
            h.counts[i] += 1;
        }
    }
    h
}

pub fn pos_distribution(top: &BTreeMap<Sense, Vec<RankedDescriptor>>) -> BTreeMap<Sense, PosHistogram> {
    Sense::ALL
        .iter()
        .map(|&s| (s, top.get(&s).map(|l| pos_histogram(l)).unwrap_or_default()))
        .collect()
}

/// Which senses' top-K lists each descriptor belongs to.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub sets: BTreeMap<Sense, BTreeSet<WordKey>>,
}

impl Membership {
    pub fn from_top(top: &BTreeMap<Sense, Vec<RankedDescriptor>>) -> Self {
        Membership {
            sets: Sense::ALL
                .iter()
                .map(|&s| (s, top.get(&s).into_iter().flatten().map(|d| d.key.clone()).collect()))
                .collect(),
        }
    }

    pub fn from_sets(sets: impl IntoIterator<Item = (Sense, Vec<WordKey>)>) -> Self {
        let mut m = Membership::default();
        for s in Sense::ALL {
            m.sets.insert(s, BTreeSet::new());
        }
        for (s, words) in sets {
            m.sets.entry(s).or_default().extend(words);
        }
        m
    }

    pub fn set(&self, sense: Sense) -> impl Iterator<Item = &WordKey> {
        self.sets.get(&sense).into_iter().flatten()
    }

    pub fn senses_of(&self, key: &WordKey) -> Vec<Sense> {
        Sense::ALL
            .into_iter()
            .filter(|s| self.sets.get(s).is_some_and(|set| set.contains(key)))
            .collect()
    }

    /// Union of all sets, in key order.
    pub fn union(&self) -> Vec<WordKey> {
        let all: BTreeSet<&WordKey> = self.sets.values().flatten().collect();
        all.into_iter().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(rows: &[(&str, Coarse, [u64; 5])]) -> WindowCounts {
        let mut c = WindowCounts::default();
        for (s, co, r) in rows {
            c.counts.insert(WordKey::new(*s, *co), *r);
        }
        c
    }

    #[test]
    fn cutoff_boundary() {
        let c = counts(&[
            ("thirty", Coarse::Noun, [30, 0, 0, 0, 0]),
            ("twentynine", Coarse::Noun, [29, 0, 0, 0, 0]),
            ("the", Coarse::Other, [100, 100, 100, 100, 100]),
        ]);
        let t = identify_descriptors(&c, &DescriptorConfig { cutoff: 30, top_k: 200 });
        let keys: Vec<_> = t.rows.iter().map(|r| r.key.surface.as_str()).collect();
        assert_eq!(keys, ["thirty"]);
        assert_eq!(t.rows[0].passes, [true, false, false, false, false]);
    }

    #[test]
    fn seed_in_other_senses_windows_is_descriptor() {
        let c = counts(&[("smell", Coarse::Noun, [0, 0, 0, 40, 0])]);
        let t = identify_descriptors(&c, &DescriptorConfig::default());
        assert_eq!(t.top[&Sense::Taste][0].key.surface, "smell");
    }

    #[test]
    fn top_k_order_and_ties() {
        let c = counts(&[
            ("b", Coarse::Noun, [50, 0, 0, 0, 0]),
            ("a", Coarse::Verb, [50, 0, 0, 0, 0]),
            ("a", Coarse::Noun, [50, 0, 0, 0, 0]),
            ("z", Coarse::Noun, [90, 0, 0, 0, 0]),
        ]);
        let t = identify_descriptors(&c, &DescriptorConfig { cutoff: 1, top_k: 10 });
        let order: Vec<_> = t.top[&Sense::Sight].iter().map(|d| d.key.to_string()).collect();
        assert_eq!(order, ["z/n", "a/n", "a/v", "b/n"]);
        assert_eq!(top_k(&t, Sense::Sight, 1)[0].key.surface, "z");
        assert!(t.top[&Sense::Smell].is_empty());
    }

    #[test]
    fn pos_histograms() {
        let list: Vec<RankedDescriptor> = ["x", "y", "z"]
            .iter()
            .map(|s| RankedDescriptor {
                key: WordKey::new(*s, Coarse::Noun),
                count: 1,
            })
            .collect();
        assert_eq!(pos_histogram(&list).counts, [3, 0, 0, 0]);
        assert_eq!(pos_histogram(&[]).counts, [0; 4]);
    }

    #[test]
    fn tested_grid() {
        assert!(is_tested_pair(4, 30));
        assert!(is_tested_pair(25, 8000));
        assert!(!is_tested_pair(4, 31));
        assert!(!is_tested_pair(5, 30));
    }
}
