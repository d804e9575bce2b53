/// Character n-grams of `<word>` with lengths in `min_n..=max_n`, counted
/// in characters. The bracketed whole word itself is not included.
pub fn char_ngrams(word: &str, min_n: usize, max_n: usize) -> Vec<String> {
    let chars: Vec<char> = std::iter::once('<')
        .chain(word.chars())
        .chain(std::iter::once('>'))
        .collect();
    let mut out = Vec::new();
    for n in min_n..=max_n {
        if n > chars.len() {
            break;
        }
        for start in 0..=chars.len() - n {
            if n == chars.len() {
                continue;
            }
            out.push(chars[start..start + n].iter().collect());
        }
    }
    out
}

/// FNV-1a hash of the n-gram's UTF-8 bytes, reduced modulo `buckets`.
pub fn ngram_bucket(ngram: &str, buckets: usize) -> usize {
    let mut h: u32 = 2_166_136_261;
    for &b in ngram.as_bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(16_777_619);
    }
    h as usize % buckets
}
