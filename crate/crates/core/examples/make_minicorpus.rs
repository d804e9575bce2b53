//! Regenerates the synthetic text of the bundled mini-corpus.
//!
//! Usage: cargo run -p sensory-core --example make_minicorpus [out_path]

use std::path::PathBuf;

use sensory::synth::synthetic_tagged_text;
use sensory::SeedLexicon;

pub const SENTENCES: usize = 3000;
pub const SEED: u64 = 20240501;

fn main() {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../minicorpus/texts/synthetic.tagged"));
    let text = synthetic_tagged_text(&SeedLexicon::bundled(), SENTENCES, SEED);
    std::fs::write(&out, text).unwrap_or_else(|e| panic!("cannot write {}: {e}", out.display()));
    println!("wrote {}", out.display());
}
