//! Binary model format.
//!
//! Layout, all integers little-endian:
//! magic `SENSEMB1`, u64 header length, JSON header, then per vocabulary
//! word: u32 byte length, UTF-8 surface, u8 coarse code, u64 count,
//! `dims` f64 values; then the n-gram bucket rows (`buckets * dims` f64).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EmbeddingConfig, EmbeddingMatrix, Vocabulary};
use crate::error::{Error, Result};
use crate::text::{Coarse, WordKey};

pub const MODEL_MAGIC: &[u8; 8] = b"SENSEMB1";

#[derive(Serialize, Deserialize)]
struct Header {
    dims: usize,
    vocab_size: usize,
    buckets: usize,
    config: EmbeddingConfig,
    loss_trace: Vec<f64>,
}

const COARSE_CODES: [Coarse; 6] = [
    Coarse::Noun,
    Coarse::Verb,
    Coarse::Adjective,
    Coarse::Adverb,
    Coarse::Other,
    Coarse::Punct,
];

fn coarse_code(c: Coarse) -> u8 {
    COARSE_CODES.iter().position(|&x| x == c).expect("all classes coded") as u8
}

pub fn write_model(model: &EmbeddingMatrix, path: &Path) -> Result<()> {
    let io = |e| Error::io(path, e);
    let file = File::create(path).map_err(io)?;
    let mut w = BufWriter::new(file);
    let header = Header {
        dims: model.dims,
        vocab_size: model.len(),
        buckets: model.ngram_vectors.len() / model.dims.max(1),
        config: model.config.clone(),
        loss_trace: model.loss_trace.clone(),
    };
    let json = serde_json::to_vec(&header)?;
    w.write_all(MODEL_MAGIC).map_err(io)?;
    w.write_all(&(json.len() as u64).to_le_bytes()).map_err(io)?;
    w.write_all(&json).map_err(io)?;
    let vocab = &model.vocabulary;
    for (i, (word, count)) in vocab.words().iter().zip(vocab.counts()).enumerate() {
        let bytes = word.surface.as_bytes();
        w.write_all(&(bytes.len() as u32).to_le_bytes()).map_err(io)?;
        w.write_all(bytes).map_err(io)?;
        w.write_all(&[coarse_code(word.coarse)]).map_err(io)?;
        w.write_all(&count.to_le_bytes()).map_err(io)?;
        for x in model.row(i) {
            w.write_all(&x.to_le_bytes()).map_err(io)?;
        }
    }
    for x in &model.ngram_vectors {
        w.write_all(&x.to_le_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}

struct Reader<'a, R> {
    inner: R,
    path: &'a Path,
}

impl<R: Read> Reader<'_, R> {
    fn bad(&self, message: impl Into<String>) -> Error {
        Error::ModelFormat {
            path: self.path.to_path_buf(),
            message: message.into(),
        }
    }

    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner
            .read_exact(&mut buf)
            .map_err(|_| self.bad("unexpected end of file"))?;
        Ok(buf)
    }

    fn vec(&mut self, len: usize) -> Result<Vec<u8>> {
        let mut buf = vec![0u8; len];
        self.inner
            .read_exact(&mut buf)
            .map_err(|_| self.bad("unexpected end of file"))?;
        Ok(buf)
    }

    fn f64s(&mut self, n: usize, out: &mut Vec<f64>) -> Result<()> {
        for _ in 0..n {
            out.push(f64::from_le_bytes(self.bytes()?));
        }
        Ok(())
    }
}

pub fn read_model(path: &Path) -> Result<EmbeddingMatrix> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = Reader {
        inner: BufReader::new(file),
        path,
    };
    if &r.bytes::<8>()? != MODEL_MAGIC {
        return Err(r.bad("not a model file (bad magic)"));
    }
    let header_len = u64::from_le_bytes(r.bytes()?) as usize;
    if header_len > 1 << 24 {
        return Err(r.bad("header too large"));
    }
    let header_bytes = r.vec(header_len)?;
    let header: Header = serde_json::from_slice(&header_bytes).map_err(|e| r.bad(format!("bad header: {e}")))?;
    let d = header.dims;
    let mut words = Vec::with_capacity(header.vocab_size);
    let mut counts = Vec::with_capacity(header.vocab_size);
    let mut vectors = Vec::with_capacity(header.vocab_size * d);
    for _ in 0..header.vocab_size {
        let len = u32::from_le_bytes(r.bytes()?) as usize;
        let surface = String::from_utf8(r.vec(len)?).map_err(|_| r.bad("surface is not UTF-8"))?;
        let [code] = r.bytes::<1>()?;
        let coarse = *COARSE_CODES
            .get(code as usize)
            .ok_or_else(|| r.bad(format!("unknown coarse code {code}")))?;
        words.push(WordKey { surface, coarse });
        counts.push(u64::from_le_bytes(r.bytes()?));
        r.f64s(d, &mut vectors)?;
    }
    let mut ngram_vectors = Vec::with_capacity(header.buckets * d);
    r.f64s(header.buckets * d, &mut ngram_vectors)?;
    let mut rest = [0u8; 1];
    if r.inner.read(&mut rest).map_err(|e| Error::io(path, e))? != 0 {
        return Err(r.bad("trailing bytes after model data"));
    }
    Ok(EmbeddingMatrix {
        vocabulary: Vocabulary::from_parts(words, counts),
        dims: d,
        vectors,
        ngram_vectors,
        config: header.config,
        loss_trace: header.loss_trace,
    })
}
