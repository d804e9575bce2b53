use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::subword::{char_ngrams, ngram_bucket};
use super::{EmbeddingConfig, EmbeddingMatrix, Vocabulary};
use crate::error::{Error, Result};

/// Read access to the input (context) and output (target) weight rows.
pub trait ParamStore {
    fn dims(&self) -> usize;
    fn input_row(&self, row: u32, out: &mut [f64]);
    fn output_row(&self, row: u32, out: &mut [f64]);
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseParams {
    pub dims: usize,
    pub input: Vec<f64>,
    pub output: Vec<f64>,
}

impl ParamStore for DenseParams {
    fn dims(&self) -> usize {
        self.dims
    }

    fn input_row(&self, row: u32, out: &mut [f64]) {
        let r = row as usize * self.dims;
        out.copy_from_slice(&self.input[r..r + self.dims]);
    }

    fn output_row(&self, row: u32, out: &mut [f64]) {
        let r = row as usize * self.dims;
        out.copy_from_slice(&self.output[r..r + self.dims]);
    }
}

/// A store that can take an SGD step.
trait Sgd: ParamStore {
    fn step(&mut self, grad: &Gradient, learning_rate: f64);
}

impl Sgd for DenseParams {
    fn step(&mut self, grad: &Gradient, learning_rate: f64) {
        self.apply(grad, learning_rate);
    }
}

impl DenseParams {
    /// Plain SGD step: parameters -= learning_rate * gradient.
    pub fn apply(&mut self, grad: &Gradient, learning_rate: f64) {
        let d = self.dims;
        for &(row, g) in &grad.outputs {
            let r = row as usize * d;
            for (u, h) in self.output[r..r + d].iter_mut().zip(&grad.hidden) {
                *u -= learning_rate * g * h;
            }
        }
        for &(row, s) in &grad.inputs {
            let r = row as usize * d;
            for (v, gh) in self.input[r..r + d].iter_mut().zip(&grad.grad_hidden) {
                *v -= learning_rate * s * gh;
            }
        }
    }
}

/// Weights shared between worker threads without locking. Each entry is
/// an `f64` stored as bits; concurrent updates may be lost.
struct SharedParams {
    dims: usize,
    input: Vec<AtomicU64>,
    output: Vec<AtomicU64>,
}

impl SharedParams {
    fn from_dense(p: DenseParams) -> Self {
        let wrap = |v: Vec<f64>| v.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect();
        SharedParams {
            dims: p.dims,
            input: wrap(p.input),
            output: wrap(p.output),
        }
    }

    fn into_dense(self) -> DenseParams {
        let unwrap = |v: Vec<AtomicU64>| v.into_iter().map(|x| f64::from_bits(x.into_inner())).collect();
        DenseParams {
            dims: self.dims,
            input: unwrap(self.input),
            output: unwrap(self.output),
        }
    }

    fn add(cell: &AtomicU64, delta: f64) {
        let v = f64::from_bits(cell.load(Ordering::Relaxed));
        cell.store((v + delta).to_bits(), Ordering::Relaxed);
    }

    fn apply(&self, grad: &Gradient, learning_rate: f64) {
        let d = self.dims;
        for &(row, g) in &grad.outputs {
            let r = row as usize * d;
            for (cell, h) in self.output[r..r + d].iter().zip(&grad.hidden) {
                Self::add(cell, -learning_rate * g * h);
            }
        }
        for &(row, s) in &grad.inputs {
            let r = row as usize * d;
            for (cell, gh) in self.input[r..r + d].iter().zip(&grad.grad_hidden) {
                Self::add(cell, -learning_rate * s * gh);
            }
        }
    }
}

struct SharedView<'a>(&'a SharedParams);

impl ParamStore for SharedView<'_> {
    fn dims(&self) -> usize {
        self.0.dims
    }

    fn input_row(&self, row: u32, out: &mut [f64]) {
        let d = self.0.dims;
        let r = row as usize * d;
        for (o, cell) in out.iter_mut().zip(&self.0.input[r..r + d]) {
            *o = f64::from_bits(cell.load(Ordering::Relaxed));
        }
    }

    fn output_row(&self, row: u32, out: &mut [f64]) {
        let d = self.0.dims;
        let r = row as usize * d;
        for (o, cell) in out.iter_mut().zip(&self.0.output[r..r + d]) {
            *o = f64::from_bits(cell.load(Ordering::Relaxed));
        }
    }
}

impl Sgd for SharedView<'_> {
    fn step(&mut self, grad: &Gradient, learning_rate: f64) {
        self.0.apply(grad, learning_rate);
    }
}

/// One CBOW prediction: `target` from the context words, contrasted with
/// `negatives`. Each context word is given as its input rows (one row, or
/// the word row plus n-gram rows in subword mode).
#[derive(Debug, Clone)]
pub struct Example<'a> {
    pub context: Vec<&'a [u32]>,
    pub target: u32,
    pub negatives: &'a [u32],
}

/// Gradient of the negative-sampling loss for one example, in factored
/// form: output row `j` has gradient `g_j * hidden`, input row `r` has
/// gradient `s_r * grad_hidden`. Rows may repeat; their gradients add.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub loss: f64,
    pub hidden: Vec<f64>,
    pub grad_hidden: Vec<f64>,
    pub outputs: Vec<(u32, f64)>,
    pub inputs: Vec<(u32, f64)>,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `-ln(sigmoid(x))`, computed without overflow.
fn neg_log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

fn hidden<P: ParamStore>(params: &P, ex: &Example) -> (Vec<f64>, Vec<(u32, f64)>) {
    let d = params.dims();
    let mut h = vec![0.0; d];
    let mut row = vec![0.0; d];
    let mut inputs = Vec::new();
    let n_ctx = ex.context.len() as f64;
    for rows in &ex.context {
        let scale = 1.0 / (n_ctx * rows.len() as f64);
        for &r in rows.iter() {
            params.input_row(r, &mut row);
            for (acc, x) in h.iter_mut().zip(&row) {
                *acc += scale * x;
            }
            inputs.push((r, scale));
        }
    }
    (h, inputs)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `-ln σ(h·u_target) - Σ ln σ(-h·u_neg)` where `h` is the mean context vector.
pub fn example_loss<P: ParamStore>(params: &P, ex: &Example) -> f64 {
    let (h, _) = hidden(params, ex);
    let mut u = vec![0.0; params.dims()];
    params.output_row(ex.target, &mut u);
    let mut loss = neg_log_sigmoid(dot(&h, &u));
    for &n in ex.negatives {
        params.output_row(n, &mut u);
        loss += neg_log_sigmoid(-dot(&h, &u));
    }
    loss
}

pub fn example_gradient<P: ParamStore>(params: &P, ex: &Example) -> Gradient {
    let d = params.dims();
    let (h, inputs) = hidden(params, ex);
    let mut u = vec![0.0; d];
    let mut grad_hidden = vec![0.0; d];
    let mut outputs = Vec::with_capacity(1 + ex.negatives.len());
    let mut loss = 0.0;

    let labelled = std::iter::once((ex.target, 1.0)).chain(ex.negatives.iter().map(|&n| (n, 0.0)));
    for (row, label) in labelled {
        params.output_row(row, &mut u);
        let score = dot(&h, &u);
        loss += if label == 1.0 {
            neg_log_sigmoid(score)
        } else {
            neg_log_sigmoid(-score)
        };
        let g = sigmoid(score) - label;
        for (gh, x) in grad_hidden.iter_mut().zip(&u) {
            *gh += g * x;
        }
        outputs.push((row, g));
    }
    Gradient {
        loss,
        hidden: h,
        grad_hidden,
        outputs,
        inputs,
    }
}

/// CBOW negative-sampling trainer over a fixed vocabulary.
pub struct Trainer {
    vocab: Vocabulary,
    config: EmbeddingConfig,
    /// Input rows composing each vocabulary word.
    components: Vec<Vec<u32>>,
    /// Cumulative negative-sampling weights.
    noise_cdf: Vec<f64>,
}

impl Trainer {
    pub fn new(vocab: Vocabulary, config: EmbeddingConfig) -> Result<Self> {
        config.validate()?;
        let v = vocab.len() as u32;
        let components = vocab
            .words()
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let mut rows = vec![i as u32];
                if let Some(sw) = config.subword {
                    let mut grams: Vec<u32> = char_ngrams(&w.surface, sw.min_n, sw.max_n)
                        .iter()
                        .map(|g| v + ngram_bucket(g, sw.buckets) as u32)
                        .collect();
                    rows.append(&mut grams);
                }
                rows
            })
            .collect();
        let mut acc = 0.0;
        let noise_cdf = vocab
            .counts()
            .iter()
            .map(|&c| {
                acc += (c as f64).powf(config.sampling_exponent);
                acc
            })
            .collect();
        Ok(Trainer {
            vocab,
            config,
            components,
            noise_cdf,
        })
    }

    fn sample_negative(&self, rng: &mut impl Rng) -> u32 {
        let total = *self.noise_cdf.last().expect("non-empty vocabulary");
        let x = rng.random::<f64>() * total;
        self.noise_cdf
            .partition_point(|&c| c <= x)
            .min(self.noise_cdf.len() - 1) as u32
    }

    fn initial_params(&self, rng: &mut impl Rng) -> DenseParams {
        let d = self.config.dims;
        let buckets = self.config.subword.map_or(0, |s| s.buckets);
        let bound = 0.5 / d as f64;
        let input = (0..(self.vocab.len() + buckets) * d)
            .map(|_| rng.random_range(-bound..bound))
            .collect();
        DenseParams {
            dims: d,
            input,
            output: vec![0.0; self.vocab.len() * d],
        }
    }

    fn learning_rate(&self, processed: usize, total: usize) -> f64 {
        let c = &self.config;
        let progress = processed as f64 / total as f64;
        (c.initial_learning_rate - (c.initial_learning_rate - c.min_learning_rate) * progress).max(c.min_learning_rate)
    }

    /// Runs all predictions of one window, returning (loss sum, predictions).
    fn train_window<P: Sgd>(
        &self,
        params: &mut P,
        instance: &[u32],
        learning_rate: f64,
        rng: &mut impl Rng,
        negatives: &mut Vec<u32>,
    ) -> (f64, usize) {
        let mut loss = 0.0;
        for (t, &target) in instance.iter().enumerate() {
            negatives.clear();
            for _ in 0..self.config.negative_samples {
                let n = self.sample_negative(rng);
                if n != target {
                    negatives.push(n);
                }
            }
            let context: Vec<&[u32]> = instance
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != t)
                .map(|(_, &w)| self.components[w as usize].as_slice())
                .collect();
            let ex = Example {
                context,
                target,
                negatives,
            };
            let grad = example_gradient(&*params, &ex);
            loss += grad.loss;
            params.step(&grad, learning_rate);
        }
        (loss, instance.len())
    }

    /// Trains on `instances`, each a window of vocabulary indices with at
    /// least two tokens.
    pub fn train(self, instances: &[Vec<u32>]) -> Result<EmbeddingMatrix> {
        let instances: Vec<&Vec<u32>> = instances.iter().filter(|i| i.len() >= 2).collect();
        if instances.is_empty() {
            return Err(Error::NoTrainingData);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.rng_seed);
        let mut params = self.initial_params(&mut rng);
        let total = self.config.epochs * instances.len();
        let mut loss_trace = Vec::with_capacity(self.config.epochs);

        if self.config.threads <= 1 {
            let mut negatives = Vec::new();
            for epoch in 0..self.config.epochs {
                let (mut loss_sum, mut predictions) = (0.0, 0usize);
                for (i, inst) in instances.iter().enumerate() {
                    let lr = self.learning_rate(epoch * instances.len() + i, total);
                    let (l, n) = self.train_window(&mut params, inst, lr, &mut rng, &mut negatives);
                    loss_sum += l;
                    predictions += n;
                }
                self.finish_epoch(epoch, loss_sum, predictions, &mut loss_trace)?;
            }
        } else {
            params = self.train_parallel(params, &instances, &mut loss_trace)?;
        }
        Ok(self.into_matrix(params, loss_trace))
    }

    fn finish_epoch(&self, epoch: usize, loss_sum: f64, predictions: usize, trace: &mut Vec<f64>) -> Result<()> {
        let mean = loss_sum / predictions.max(1) as f64;
        if !mean.is_finite() {
            return Err(Error::NonFiniteLoss {
                epoch,
                instances: predictions,
                learning_rate: self.config.initial_learning_rate,
            });
        }
        debug!("epoch {epoch}: mean loss {mean:.6}");
        trace.push(mean);
        Ok(())
    }

    fn train_parallel(
        &self,
        params: DenseParams,
        instances: &[&Vec<u32>],
        trace: &mut Vec<f64>,
    ) -> Result<DenseParams> {
        let shared = SharedParams::from_dense(params);
        let threads = self.config.threads.min(instances.len());
        let chunk = instances.len().div_ceil(threads);
        let total = self.config.epochs * instances.len();
        let processed = AtomicUsize::new(0);
        for epoch in 0..self.config.epochs {
            let results: Vec<(f64, usize)> = std::thread::scope(|scope| {
                let handles: Vec<_> = instances
                    .chunks(chunk)
                    .enumerate()
                    .map(|(t, part)| {
                        let shared = &shared;
                        let processed = &processed;
                        scope.spawn(move || {
                            let seed = self.config.rng_seed
                                ^ ((epoch as u64) << 32 | t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                            let mut rng = ChaCha8Rng::seed_from_u64(seed);
                            let mut negatives = Vec::new();
                            let mut view = SharedView(shared);
                            let (mut loss, mut preds) = (0.0, 0);
                            for inst in part {
                                let lr = self.learning_rate(processed.fetch_add(1, Ordering::Relaxed), total);
                                let (l, n) = self.train_window(&mut view, inst, lr, &mut rng, &mut negatives);
                                loss += l;
                                preds += n;
                            }
                            (loss, preds)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("training thread panicked"))
                    .collect()
            });
            let loss: f64 = results.iter().map(|r| r.0).sum();
            let preds: usize = results.iter().map(|r| r.1).sum();
            self.finish_epoch(epoch, loss, preds, trace)?;
        }
        Ok(shared.into_dense())
    }

    fn into_matrix(self, params: DenseParams, loss_trace: Vec<f64>) -> EmbeddingMatrix {
        let d = self.config.dims;
        let v = self.vocab.len();
        let mut vectors = vec![0.0; v * d];
        for (i, rows) in self.components.iter().enumerate() {
            let out = &mut vectors[i * d..(i + 1) * d];
            for &r in rows {
                let r = r as usize * d;
                for (o, x) in out.iter_mut().zip(&params.input[r..r + d]) {
                    *o += x;
                }
            }
            let n = rows.len() as f64;
            out.iter_mut().for_each(|x| *x /= n);
        }
        let ngram_vectors = if self.config.subword.is_some() {
            params.input[v * d..].to_vec()
        } else {
            Vec::new()
        };
        EmbeddingMatrix {
            vocabulary: self.vocab,
            dims: d,
            vectors,
            ngram_vectors,
            config: self.config,
            loss_trace,
        }
    }
}
