//! Sensory-blending analyses over PCA score space: mean pairwise distance
//! per sense pair, neighbour pairs within a radius, and descriptors shared
//! between several senses' top-K lists.

use std::collections::{BTreeSet, HashMap};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::descriptors::Membership;
use crate::error::{Error, Result};
use crate::geometry::PcaProjection;
use crate::lexicon::Sense;
use crate::text::WordKey;
use crate::windows::WindowCounts;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    pub radius: f64,
    pub top_k: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            radius: 30.0,
            top_k: 200,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::Config("analysis radius must be a positive finite number".into()));
        }
        if self.top_k == 0 {
            return Err(Error::Config("analysis top_k must be positive".into()));
        }
        Ok(())
    }
}

/// The 15 unordered sense pairs: the five same-sense pairs in sense order,
/// then the ten cross-sense pairs.
pub fn sense_pairs() -> Vec<(Sense, Sense)> {
    let same = Sense::ALL.iter().map(|&s| (s, s));
    let cross = Sense::ALL
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| Sense::ALL[i + 1..].iter().map(move |&b| (a, b)));
    same.chain(cross).collect()
}

fn ordered(a: Sense, b: Sense) -> (Sense, Sense) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensePairStat {
    pub pair: (Sense, Sense),
    /// `None` when no point pairs exist for this sense pair.
    pub value: Option<f64>,
    pub same_sense: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusPairCount {
    pub pair: (Sense, Sense),
    pub count: u64,
    pub same_sense: bool,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn score_index(scores: &PcaProjection) -> HashMap<&WordKey, usize> {
    scores.labels.iter().enumerate().map(|(i, l)| (&l.key, i)).collect()
}

fn member_rows(scores: &PcaProjection, membership: &Membership, sense: Sense) -> Result<Vec<(usize, WordKey)>> {
    let index = score_index(scores);
    membership
        .set(sense)
        .map(|k| {
            index
                .get(k)
                .map(|&i| (i, k.clone()))
                .ok_or_else(|| Error::UnknownLabel(format!("{k} has no PCA score")))
        })
        .collect()
}

pub fn avg_pairwise_distance(scores: &PcaProjection, membership: &Membership) -> Result<Vec<SensePairStat>> {
    let mut rows = HashMap::new();
    for s in Sense::ALL {
        rows.insert(s, member_rows(scores, membership, s)?);
    }
    let dist = |i: usize, j: usize| euclidean(&scores.scores[i], &scores.scores[j]);
    Ok(sense_pairs()
        .into_iter()
        .map(|(s, t)| {
            let (a, b) = (&rows[&s], &rows[&t]);
            let (mut sum, mut n) = (0.0, 0u64);
            if s == t {
                for (x, (i, _)) in a.iter().enumerate() {
                    for (j, _) in &a[x + 1..] {
                        sum += dist(*i, *j);
                        n += 1;
                    }
                }
            } else {
                for (i, ki) in a {
                    for (j, kj) in b {
                        if ki != kj {
                            sum += dist(*i, *j);
                            n += 1;
                        }
                    }
                }
            }
            SensePairStat {
                pair: (s, t),
                value: (n > 0).then(|| sum / n as f64),
                same_sense: s == t,
            }
        })
        .collect())
}

/// Counts unordered descriptor pairs within `radius` of each other, once
/// for every sense-pair label the two descriptors' sense sets produce.
pub fn radius_pairs(scores: &PcaProjection, membership: &Membership, radius: f64) -> Result<Vec<RadiusPairCount>> {
    let index = score_index(scores);
    let points = membership
        .union()
        .into_iter()
        .map(|k| {
            let i = *index
                .get(&k)
                .ok_or_else(|| Error::UnknownLabel(format!("{k} has no PCA score")))?;
            Ok((i, membership.senses_of(&k)))
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs = sense_pairs();
    let mut counts = vec![0u64; pairs.len()];
    let slot: HashMap<(Sense, Sense), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    for (x, (i, si)) in points.iter().enumerate() {
        for (j, sj) in &points[x + 1..] {
            if euclidean(&scores.scores[*i], &scores.scores[*j]) > radius {
                continue;
            }
            let labels: BTreeSet<(Sense, Sense)> = si
                .iter()
                .flat_map(|&a| sj.iter().map(move |&b| ordered(a, b)))
                .collect();
            for l in labels {
                counts[slot[&l]] += 1;
            }
        }
    }
    Ok(pairs
        .into_iter()
        .zip(counts)
        .map(|(pair, count)| RadiusPairCount {
            pair,
            count,
            same_sense: pair.0 == pair.1,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapRow {
    pub key: WordKey,
    pub senses: Vec<Sense>,
    /// Window count divided by the sense's total windows, indexed by
    /// sense; `None` for senses without windows.
    pub normalized: [Option<f64>; 5],
}

/// Descriptors in at least two senses' top-K sets, in key order.
pub fn multi_sense_overlap(counts: &WindowCounts, membership: &Membership) -> Vec<OverlapRow> {
    for s in Sense::ALL {
        if counts.total(s) == 0 {
            warn!("sense {s} has no context windows; excluded from overlap normalization");
        }
    }
    membership
        .union()
        .into_iter()
        .filter_map(|key| {
            let senses = membership.senses_of(&key);
            if senses.len() < 2 {
                return None;
            }
            let normalized = Sense::ALL.map(|s| {
                let total = counts.total(s);
                (total > 0).then(|| counts.count(&key, s) as f64 / total as f64)
            });
            Some(OverlapRow {
                key,
                senses,
                normalized,
            })
        })
        .collect()
}
