//! Correlation distances between descriptor vectors and PCA of the
//! resulting distance-matrix rows.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::lexicon::Sense;
use crate::text::WordKey;

/// A descriptor and the senses whose top-K lists contain it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub key: WordKey,
    pub senses: Vec<Sense>,
}

impl Label {
    pub fn new(key: WordKey, senses: Vec<Sense>) -> Self {
        Label { key, senses }
    }
}

/// Sample Pearson correlation, clamped to [-1, 1].
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Degenerate(format!(
            "vector lengths differ ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::Degenerate("correlation needs at least 2 entries".into()));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if !(saa > 0.0 && sbb > 0.0) || !(saa.is_finite() && sbb.is_finite()) {
        return Err(Error::Degenerate("constant or non-finite vector".into()));
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// `0.5 * (1 - r)` for correlation `r`.
pub fn correlation_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    Ok((0.5 * (1.0 - pearson(a, b)?)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub labels: Vec<Label>,
    /// Row-major, `labels.len()` squared entries.
    pub values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Distance matrix over explicit vectors, one per label.
pub fn distance_from_vectors(vectors: &[Vec<f64>], labels: Vec<Label>) -> Result<DistanceMatrix> {
    assert_eq!(vectors.len(), labels.len(), "one vector per label");
    let n = vectors.len();
    for (v, l) in vectors.iter().zip(&labels) {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Degenerate(format!("vector for {} is not finite", l.key)));
        }
    }
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    correlation_distance(&vectors[i], &vectors[j]).map_err(|e| match e {
                        Error::Degenerate(m) => {
                            Error::Degenerate(format!("{} vs {}: {m}", labels[i].key, labels[j].key))
                        }
                        other => other,
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (off, &d) in row.iter().enumerate() {
            let j = i + 1 + off;
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix { labels, values })
}

/// Distance matrix over the embedding vectors of `labels`.
pub fn distance_matrix(matrix: &EmbeddingMatrix, labels: Vec<Label>) -> Result<DistanceMatrix> {
    let vectors = labels
        .iter()
        .map(|l| {
            matrix
                .vector(&l.key)
                .map(|v| v.into_owned())
                .ok_or_else(|| Error::UnknownLabel(l.key.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    distance_from_vectors(&vectors, labels)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaProjection {
    pub n_components: usize,
    /// `n_components` rows of length equal to the feature count.
    pub loadings: Vec<Vec<f64>>,
    pub explained_variance_ratio: Vec<f64>,
    /// One row of `n_components` scores per observation.
    pub scores: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl PcaProjection {
    pub fn total_explained(&self) -> f64 {
        self.explained_variance_ratio.iter().sum()
    }
}

/// Principal components of `data` (rows are observations) after centering
/// the columns. Each component is sign-normalized so that its entry of
/// largest magnitude is non-negative.
pub fn pca_fit(data: &[Vec<f64>], n_components: usize) -> Result<PcaProjection> {
    if !(2..=4).contains(&n_components) {
        return Err(Error::Config(format!(
            "n_components must be in 2..=4, got {n_components}"
        )));
    }
    let n = data.len();
    let m = data.first().map_or(0, Vec::len);
    if data.iter().any(|r| r.len() != m) {
        return Err(Error::Degenerate("rows have different lengths".into()));
    }
    if data.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Degenerate("data contains non-finite values".into()));
    }
    let rank = n.saturating_sub(1).min(m);
    if n_components > rank {
        return Err(Error::RankDeficient {
            requested: n_components,
            rank,
        });
    }

    let mut x = DMatrix::from_fn(n, m, |i, j| data[i][j]);
    for mut col in x.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    let total: f64 = x.iter().map(|v| v * v).sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("data has zero variance".into()));
    }

    // Eigenvectors of the scatter matrix X^T X. The SVD route loses
    // accuracy on rank-deficient wide inputs, which centering always yields
    // when there are no more rows than columns.
    let eig = (x.transpose() * &x).symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let mut loadings = Vec::with_capacity(n_components);
    let mut ratios = Vec::with_capacity(n_components);
    for &k in order.iter().take(n_components) {
        let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
        orient(&mut v);
        ratios.push((eig.eigenvalues[k] / total).clamp(0.0, 1.0));
        loadings.push(v);
    }
    let scores = (0..n)
        .map(|i| {
            loadings
                .iter()
                .map(|v| x.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    Ok(PcaProjection {
        n_components,
        loadings,
        explained_variance_ratio: ratios,
        scores,
        labels: Vec::new(),
    })
}

fn orient(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// PCA over the rows of a distance matrix, carrying its labels.
pub fn pca_of_distances(dm: &DistanceMatrix, n_components: usize) -> Result<PcaProjection> {
    let mut p = pca_fit(&dm.rows(), n_components)?;
    p.labels = dm.labels.clone();
    Ok(p)
}

/// Mean over projections of the total explained-variance ratio.
pub fn explained_variance_summary(projections: &[PcaProjection]) -> Result<f64> {
    if projections.is_empty() {
        return Err(Error::Degenerate("no projections to summarize".into()));
    }
    Ok(projections.iter().map(PcaProjection::total_explained).sum::<f64>() / projections.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pearson_basics() {
        let v = [1.0, 2.0, 5.0];
        assert_abs_diff_eq!(pearson(&v, &v).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pearson(&v, &[-1.0, -2.0, -5.0]).unwrap(), -1.0, epsilon = 1e-15);
        assert!(matches!(pearson(&v, &[3.0, 3.0, 3.0]), Err(Error::Degenerate(_))));
        assert!(pearson(&[1.0], &[2.0]).is_err());
    }

    #[test]
    fn distance_matrix_shape() {
        let labels = (0..3)
            .map(|i| Label::new(WordKey::new(format!("w{i}"), crate::Coarse::Noun), vec![Sense::Sight]))
            .collect();
        let vs = vec![vec![1.0, 2.0, 3.0], vec![-1.0, -2.0, -3.0], vec![1.0, 0.0, 1.0]];
        let d = distance_from_vectors(&vs, labels).unwrap();
        assert_eq!(d.get(0, 0), 0.0);
        assert_abs_diff_eq!(d.get(0, 1), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.get(0, 2), 0.5, epsilon = 1e-12);
        assert_eq!(d.get(2, 1), d.get(1, 2));
    }

    #[test]
    fn points_on_a_line() {
        let data: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 2.0 * i as f64 + 1.0]).collect();
        let p = pca_fit(&data, 2).unwrap();
        assert_abs_diff_eq!(p.explained_variance_ratio[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.explained_variance_ratio[1], 0.0, epsilon = 1e-12);
        assert!(p.loadings[0][1] > 0.0);
    }

    #[test]
    fn too_many_components() {
        let data = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 4.0]];
        assert!(matches!(
            pca_fit(&data, 2),
            Err(Error::RankDeficient { requested: 2, rank: 1 })
        ));
    }

    #[test]
    fn summary() {
        let mk = |r: Vec<f64>| PcaProjection {
            n_components: r.len(),
            loadings: vec![],
            explained_variance_ratio: r,
            scores: vec![],
            labels: vec![],
        };
        assert_abs_diff_eq!(explained_variance_summary(&[mk(vec![0.3, 0.2])]).unwrap(), 0.5);
        assert_abs_diff_eq!(
            explained_variance_summary(&[mk(vec![0.3, 0.1]), mk(vec![0.4, 0.2])]).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert!(explained_variance_summary(&[]).is_err());
    }
}
