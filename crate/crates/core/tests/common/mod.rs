//! Helpers shared by the integration tests: reference implementations
//! written independently of the library, and mini-corpus setup.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use sensory::config::RunConfig;

pub fn minicorpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../minicorpus")
}

/// The bundled mini-corpus config with its output redirected to `out`.
pub fn minicorpus_config(out: &Path) -> RunConfig {
    let mut cfg = RunConfig::load(&minicorpus_dir().join("minicorpus.toml")).expect("mini-corpus config loads");
    cfg.output_dir = out.to_path_buf();
    cfg
}

/// Pearson correlation by the one-pass textbook formula
/// `(nΣxy − ΣxΣy) / sqrt((nΣx² − (Σx)²)(nΣy² − (Σy)²))`.
pub fn pearson_textbook(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    (n * sxy - sx * sy) / ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt()
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in descending order and the matching eigenvectors.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..n {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| v.iter().map(|row| row[i]).collect()).collect();
    (values, vectors)
}

/// Reference PCA: eigenvectors of the sample covariance, flipped so the
/// largest-magnitude entry is non-negative. Returns (ratios, loadings,
/// scores) for the first `k` components.
pub fn reference_pca(data: &[Vec<f64>], k: usize) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = data.len();
    let m = data[0].len();
    let means: Vec<f64> = (0..m)
        .map(|j| data.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let centered: Vec<Vec<f64>> = data
        .iter()
        .map(|r| r.iter().zip(&means).map(|(x, mu)| x - mu).collect())
        .collect();
    let cov: Vec<Vec<f64>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| centered.iter().map(|r| r[a] * r[b]).sum::<f64>() / (n as f64 - 1.0))
                .collect()
        })
        .collect();
    let trace: f64 = (0..m).map(|i| cov[i][i]).sum();
    let (values, vectors) = jacobi_eigen(&cov);
    let mut loadings = Vec::new();
    for mut vec in vectors.into_iter().take(k) {
        let big = vec
            .iter()
            .copied()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if big < 0.0 {
            vec.iter_mut().for_each(|x| *x = -*x);
        }
        loadings.push(vec);
    }
    let ratios = values.iter().take(k).map(|l| l.max(0.0) / trace).collect();
    let scores = centered
        .iter()
        .map(|r| {
            loadings
                .iter()
                .map(|l| r.iter().zip(l).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    (ratios, loadings, scores)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Windows by direct re-scan: for every seed position, the member
/// positions to its left and right. A position is a member when it is not
/// punctuation or a boundary, lies within `half_width`, no boundary sits
/// strictly between it and the seed, and no sentence starts after it up to
/// and including the far side.
pub fn naive_windows(
    tokens: &[sensory::TaggedToken],
    seeds: &std::collections::HashMap<sensory::WordKey, sensory::Sense>,
    half_width: usize,
    boundaries: &std::collections::BTreeSet<String>,
) -> Vec<(usize, sensory::Sense, Vec<usize>, Vec<usize>)> {
    let is_boundary = |j: usize| boundaries.contains(&tokens[j].surface);
    let is_punct = |j: usize| tokens[j].coarse == sensory::Coarse::Punct;
    let mut out = Vec::new();
    for i in 0..tokens.len() {
        if is_punct(i) {
            continue;
        }
        let Some(&sense) = seeds.get(&tokens[i].key()) else {
            continue;
        };
        let lo = i.saturating_sub(half_width);
        let left = (lo..i)
            .filter(|&j| !is_punct(j) && !is_boundary(j))
            .filter(|&j| !(j + 1..i).any(is_boundary))
            .filter(|&j| !(j + 1..=i).any(|k| tokens[k].sentence_start))
            .collect();
        let hi = (i + half_width).min(tokens.len().saturating_sub(1));
        let right = (i + 1..=hi)
            .filter(|&j| !is_punct(j) && !is_boundary(j))
            .filter(|&j| !(i + 1..j).any(is_boundary))
            .filter(|&j| !(i + 1..=j).any(|k| tokens[k].sentence_start))
            .collect();
        out.push((i, sense, left, right));
    }
    out
}

/// Random score fixture for the analyses: `n` points in the plane, some
/// duplicated, each assigned a random non-empty set of senses.
pub struct AnalysisFixture {
    pub keys: Vec<sensory::WordKey>,
    pub points: Vec<Vec<f64>>,
    pub senses: Vec<Vec<sensory::Sense>>,
}

impl AnalysisFixture {
    pub fn random(rng: &mut impl rand::Rng, n: usize) -> Self {
        use sensory::Sense;
        let keys: Vec<sensory::WordKey> = (0..n)
            .map(|i| sensory::WordKey::new(format!("w{i:03}"), sensory::Coarse::Adjective))
            .collect();
        let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 && rng.random_bool(0.1) {
                let copy = points[rng.random_range(0..i)].clone();
                points.push(copy);
            } else {
                points.push(vec![rng.random_range(-40.0..40.0), rng.random_range(-40.0..40.0)]);
            }
        }
        let senses = (0..n)
            .map(|_| {
                let mask = if rng.random_bool(0.6) {
                    1u8 << rng.random_range(0..5)
                } else {
                    rng.random_range(1u8..32)
                };
                Sense::ALL
                    .into_iter()
                    .filter(|s| mask & (1 << s.index()) != 0)
                    .collect()
            })
            .collect();
        AnalysisFixture { keys, points, senses }
    }

    pub fn projection(&self) -> sensory::geometry::PcaProjection {
        sensory::geometry::PcaProjection {
            n_components: 2,
            loadings: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            explained_variance_ratio: vec![0.5, 0.5],
            scores: self.points.clone(),
            labels: self
                .keys
                .iter()
                .zip(&self.senses)
                .map(|(k, s)| sensory::geometry::Label::new(k.clone(), s.clone()))
                .collect(),
        }
    }

    pub fn membership(&self) -> sensory::descriptors::Membership {
        sensory::descriptors::Membership::from_sets(sensory::Sense::ALL.map(|s| {
            (
                s,
                (0..self.keys.len())
                    .filter(|&i| self.senses[i].contains(&s))
                    .map(|i| self.keys[i].clone())
                    .collect(),
            )
        }))
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// Point indices in sense `s`, in key order.
    fn members(&self, s: sensory::Sense) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.keys.len()).filter(|&i| self.senses[i].contains(&s)).collect();
        idx.sort_by(|&a, &b| self.keys[a].cmp(&self.keys[b]));
        idx
    }

    /// Mean distance for one sense pair, `None` without point pairs.
    pub fn mean_distance(&self, s: sensory::Sense, t: sensory::Sense) -> Option<f64> {
        let (a, b) = (self.members(s), self.members(t));
        let mut pairs = Vec::new();
        for (x, &i) in a.iter().enumerate() {
            for (y, &j) in b.iter().enumerate() {
                let keep = if s == t { y > x } else { self.keys[i] != self.keys[j] };
                if keep {
                    pairs.push((i, j));
                }
            }
        }
        if pairs.is_empty() {
            return None;
        }
        let mut sum = 0.0;
        for &(i, j) in &pairs {
            sum += self.dist(i, j);
        }
        Some(sum / pairs.len() as f64)
    }

    /// Unordered point pairs within `radius` where one point carries `s`
    /// and the other `t`.
    pub fn radius_count(&self, s: sensory::Sense, t: sensory::Sense, radius: f64) -> u64 {
        let n = self.keys.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                let (si, sj) = (&self.senses[i], &self.senses[j]);
                let hit = (si.contains(&s) && sj.contains(&t)) || (si.contains(&t) && sj.contains(&s));
                if hit && self.dist(i, j) <= radius {
                    count += 1;
                }
            }
        }
        count
    }
}
