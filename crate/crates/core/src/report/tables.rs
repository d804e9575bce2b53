//! CSV exports. Every file has a header row; reals use fixed precision so
//! repeated runs produce identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analyses::{OverlapRow, RadiusPairCount, SensePairStat};
use crate::corpus::{BirthYearHistogram, RankedCount};
use crate::descriptors::{DescriptorTable, PosHistogram};
use crate::error::{Error, Result};
use crate::geometry::{DistanceMatrix, Label, PcaProjection};
use crate::lexicon::Sense;

pub(crate) fn num(x: f64) -> String {
    format!("{x:.9}")
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub(crate) fn senses_cell(senses: &[Sense]) -> String {
    senses.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(";")
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    Ok(csv::Writer::from_path(path)?)
}

fn finish(mut w: csv::Writer<std::fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn sense_columns(prefix: &str) -> impl Iterator<Item = String> + '_ {
    Sense::ALL.iter().map(move |s| format!("{prefix}{}", s.as_str()))
}

pub fn write_descriptors(path: &Path, table: &DescriptorTable) -> Result<()> {
    let mut w = writer(path)?;
    let header: Vec<String> = ["surface".to_string(), "coarse".to_string()]
        .into_iter()
        .chain(sense_columns("count_"))
        .chain(sense_columns("pass_"))
        .collect();
    w.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![row.key.surface.clone(), row.key.coarse.to_string()];
        rec.extend(row.counts.iter().map(u64::to_string));
        rec.extend(row.passes.iter().map(|&p| flag(p).to_string()));
        w.write_record(&rec)?;
    }
    finish(w, path)
}

fn label_cell(l: &Label) -> String {
    l.key.to_string()
}

pub fn write_distance_matrix(path: &Path, dm: &DistanceMatrix) -> Result<()> {
    let mut w = writer(path)?;
    let header: Vec<String> = std::iter::once("label".to_string())
        .chain(dm.labels.iter().map(label_cell))
        .collect();
    w.write_record(&header)?;
    for (i, l) in dm.labels.iter().enumerate() {
        let rec: Vec<String> = std::iter::once(label_cell(l))
            .chain(dm.row(i).iter().map(|&x| num(x)))
            .collect();
        w.write_record(&rec)?;
    }
    finish(w, path)
}

pub fn write_pca_scores(path: &Path, p: &PcaProjection) -> Result<()> {
    let mut w = writer(path)?;
    let header: Vec<String> = ["label".to_string(), "sense".to_string()]
        .into_iter()
        .chain((1..=p.n_components).map(|k| format!("pc{k}")))
        .collect();
    w.write_record(&header)?;
    for (l, row) in p.labels.iter().zip(&p.scores) {
        let rec: Vec<String> = [label_cell(l), senses_cell(&l.senses)]
            .into_iter()
            .chain(row.iter().map(|&x| num(x)))
            .collect();
        w.write_record(&rec)?;
    }
    finish(w, path)
}

pub fn write_pair_distances(path: &Path, stats: &[SensePairStat]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["sense_a", "sense_b", "same_sense", "mean_distance"])?;
    for s in stats {
        w.write_record([
            s.pair.0.as_str(),
            s.pair.1.as_str(),
            flag(s.same_sense),
            &s.value.map(num).unwrap_or_default(),
        ])?;
    }
    finish(w, path)
}

pub fn write_radius_pairs(path: &Path, counts: &[RadiusPairCount], radius: f64) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["sense_a", "sense_b", "same_sense", "radius", "count"])?;
    for c in counts {
        w.write_record([
            c.pair.0.as_str(),
            c.pair.1.as_str(),
            flag(c.same_sense),
            &num(radius),
            &c.count.to_string(),
        ])?;
    }
    finish(w, path)
}

pub fn write_overlap(path: &Path, rows: &[OverlapRow]) -> Result<()> {
    let mut w = writer(path)?;
    let header: Vec<String> = ["surface", "coarse", "senses"]
        .into_iter()
        .map(String::from)
        .chain(sense_columns("norm_"))
        .collect();
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.key.surface.clone(), r.key.coarse.to_string(), senses_cell(&r.senses)];
        rec.extend(r.normalized.iter().map(|v| v.map(num).unwrap_or_default()));
        w.write_record(&rec)?;
    }
    finish(w, path)
}

pub fn write_pos_distribution(path: &Path, dist: &BTreeMap<Sense, PosHistogram>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["sense", "n", "v", "a", "r", "total"])?;
    for (s, h) in dist {
        let mut rec = vec![s.as_str().to_string()];
        rec.extend(h.counts.iter().map(usize::to_string));
        rec.push(h.total().to_string());
        w.write_record(&rec)?;
    }
    finish(w, path)
}

pub fn write_ranked(path: &Path, ranked: &[RankedCount]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["rank", "name", "frequency"])?;
    for (i, r) in ranked.iter().enumerate() {
        w.write_record([(i + 1).to_string(), r.name.clone(), r.count.to_string()])?;
    }
    finish(w, path)
}

pub fn write_birth_years(path: &Path, hist: &BirthYearHistogram) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["bin_start", "bin_end", "count"])?;
    for b in &hist.bins {
        w.write_record([b.start.to_string(), b.end.to_string(), b.count.to_string()])?;
    }
    finish(w, path)
}

/// One PCA fit's explained variance, e.g. for one sense at one component count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceRow {
    pub matrix: String,
    pub half_width: usize,
    pub n_components: usize,
    pub ratios: Vec<f64>,
}

impl VarianceRow {
    pub fn total(&self) -> f64 {
        self.ratios.iter().sum()
    }
}

pub fn write_explained_variance(path: &Path, rows: &[VarianceRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record([
        "matrix",
        "half_width",
        "n_components",
        "pc1",
        "pc2",
        "pc3",
        "pc4",
        "total",
    ])?;
    for r in rows {
        let mut rec = vec![r.matrix.clone(), r.half_width.to_string(), r.n_components.to_string()];
        rec.extend((0..4).map(|k| r.ratios.get(k).map(|&x| num(x)).unwrap_or_default()));
        rec.push(num(r.total()));
        w.write_record(&rec)?;
    }
    finish(w, path)
}
