use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tokenize::RawToken;
use super::TaggedToken;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaggerBackend {
    /// Input text is already tokenized and tagged, `surface<TAB>tag` per line.
    PreTagged,
    /// Built-in lexicon + suffix-rule tagger over raw text.
    Baseline,
}

impl TaggerBackend {
    pub fn as_str(self) -> &'static str {
        match self {
            TaggerBackend::PreTagged => "pre-tagged",
            TaggerBackend::Baseline => "baseline",
        }
    }
}

/// Reads one `surface<TAB>ptb_tag` pair per line. A blank line ends a
/// sentence: the next token is flagged as a sentence start.
pub fn read_pretagged(text: &str, source: &Path) -> Result<Vec<TaggedToken>> {
    let mut tokens = Vec::new();
    let mut pending_break = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            pending_break = true;
            continue;
        }
        let malformed = |message: &str| Error::Parse {
            path: source.to_path_buf(),
            line: i + 1,
            message: format!("{message}: `{line}`"),
        };
        let mut fields = line.split('\t');
        let (Some(surface), Some(tag), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(malformed("expected `surface<TAB>tag`"));
        };
        if surface.is_empty() || tag.is_empty() || tag.contains(char::is_whitespace) {
            return Err(malformed("empty or malformed surface/tag"));
        }
        let mut tok = TaggedToken::new(surface, tag);
        tok.sentence_start = pending_break;
        pending_break = false;
        tokens.push(tok);
    }
    Ok(tokens)
}

const BUNDLED_LEXICON: &str = include_str!("../../data/tagger_lexicon.tsv");

const JJ_SUFFIXES: &[&str] = &["ous", "ful", "ive", "able", "ible", "less", "ish", "ic", "al", "ary"];
const NN_SUFFIXES: &[&str] = &[
    "tion", "sion", "ness", "ment", "ity", "ence", "ance", "ship", "hood", "dom", "ism",
];
const SUBJECT_PRONOUNS: &[&str] = &["i", "you", "he", "she", "it", "we", "they", "who"];

/// Frequency-lexicon tagger with suffix heuristics and a handful of
/// noun/verb/adjective disambiguation rules based on neighbouring tags.
/// Unknown words default to `NN`.
#[derive(Debug, Clone)]
pub struct BaselineTagger {
    lexicon: HashMap<String, Vec<String>>,
}

impl Default for BaselineTagger {
    fn default() -> Self {
        Self::bundled()
    }
}

impl BaselineTagger {
    pub fn bundled() -> Self {
        Self::from_tsv(BUNDLED_LEXICON)
    }

    /// Parses `surface<TAB>TAG[,TAG...]` lines, most frequent tag first.
    pub fn from_tsv(tsv: &str) -> Self {
        let lexicon = tsv
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .filter_map(|l| l.split_once('\t'))
            .map(|(w, tags)| {
                (
                    w.to_lowercase(),
                    tags.split(',').map(|t| t.trim().to_string()).collect(),
                )
            })
            .collect();
        BaselineTagger { lexicon }
    }

    pub fn tag(&self, tokens: &[RawToken]) -> Vec<TaggedToken> {
        let candidates: Vec<Vec<String>> = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| self.candidates(&t.text, i == 0 || t.sentence_start || is_sentence_end(tokens, i)))
            .collect();

        let mut tags: Vec<String> = candidates.iter().map(|c| c[0].clone()).collect();
        for i in 0..tokens.len() {
            if candidates[i].len() < 2 {
                continue;
            }
            let prev_tag = (i > 0).then(|| tags[i - 1].as_str());
            let prev_word = (i > 0).then(|| tokens[i - 1].text.to_lowercase());
            let next_tag = candidates.get(i + 1).map(|c| c[0].as_str());
            if let Some(choice) = disambiguate(&candidates[i], prev_tag, prev_word.as_deref(), next_tag) {
                tags[i] = choice;
            }
        }

        tokens
            .iter()
            .zip(tags)
            .map(|(t, tag)| {
                let mut tok = TaggedToken::new(t.text.clone(), tag);
                tok.sentence_start = t.sentence_start;
                tok
            })
            .collect()
    }

    fn candidates(&self, word: &str, sentence_initial: bool) -> Vec<String> {
        if let Some(tag) = punct_tag(word) {
            return vec![tag.to_string()];
        }
        if word.chars().any(|c| c.is_ascii_digit()) && word.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '.')
        {
            return vec!["CD".into()];
        }
        let lower = word.to_lowercase();
        if let Some(tags) = self.lexicon.get(&lower) {
            return tags.clone();
        }
        let capitalised = word.chars().next().is_some_and(char::is_uppercase);
        if capitalised && !sentence_initial {
            return vec!["NNP".into()];
        }
        self.suffix_candidates(&lower)
    }

    fn suffix_candidates(&self, lower: &str) -> Vec<String> {
        let one = |t: &str| vec![t.to_string()];
        if lower.len() > 4 && lower.ends_with("ly") {
            return one("RB");
        }
        if lower.len() > 4 && lower.ends_with("ing") {
            return one("VBG");
        }
        if lower.len() > 3 && lower.ends_with("ed") {
            return vec!["VBD".into(), "VBN".into()];
        }
        if lower.len() > 3
            && lower.ends_with('s')
            && !lower.ends_with("ss")
            && !lower.ends_with("us")
            && !lower.ends_with("is")
        {
            // -s on a word that is both noun and verb: NNS or VBZ by context
            let stems = [&lower[..lower.len() - 1], lower.strip_suffix("es").unwrap_or("")];
            let ambiguous = stems.iter().any(|s| {
                self.lexicon
                    .get(*s)
                    .is_some_and(|tags| tags.iter().any(|t| t == "VB") && tags.iter().any(|t| t == "NN"))
            });
            return if ambiguous {
                vec!["NNS".into(), "VBZ".into()]
            } else {
                one("NNS")
            };
        }
        if NN_SUFFIXES
            .iter()
            .any(|s| lower.len() > s.len() + 2 && lower.ends_with(s))
        {
            return one("NN");
        }
        if JJ_SUFFIXES
            .iter()
            .any(|s| lower.len() > s.len() + 2 && lower.ends_with(s))
        {
            return one("JJ");
        }
        one("NN")
    }
}

fn is_sentence_end(tokens: &[RawToken], i: usize) -> bool {
    i > 0 && matches!(tokens[i - 1].text.as_str(), "." | "!" | "?" | "\"" | "“" | "``")
}

fn punct_tag(word: &str) -> Option<&'static str> {
    Some(match word {
        "." | "!" | "?" => ".",
        "," => ",",
        ":" | ";" | "--" | "—" | "–" | "..." | "…" | "-" => ":",
        "(" | "[" | "{" => "-LRB-",
        ")" | "]" | "}" => "-RRB-",
        "“" | "‘" | "``" | "«" => "``",
        "”" | "’" | "''" | "\"" | "'" | "»" => "''",
        _ => return None,
    })
}

fn is_noun_tag(t: &str) -> bool {
    t.starts_with("NN")
}

fn is_verb_tag(t: &str) -> bool {
    t.starts_with("VB")
}

fn disambiguate(
    options: &[String],
    prev_tag: Option<&str>,
    prev_word: Option<&str>,
    next_tag: Option<&str>,
) -> Option<String> {
    let pick = |pred: fn(&str) -> bool| options.iter().find(|t| pred(t)).cloned();

    let verb_context = matches!(prev_tag, Some("MD" | "TO"))
        || matches!(prev_word, Some("n't" | "not" | "never" | "to"))
        || prev_word.is_some_and(|w| SUBJECT_PRONOUNS.contains(&w));
    let noun_context = matches!(
        prev_tag,
        Some("DT" | "PRP$" | "POS" | "JJ" | "JJR" | "JJS" | "CD" | "IN")
    ) || prev_word == Some("her");

    if verb_context {
        // prefer a finite form after a subject, the base form elsewhere
        let after_subject = prev_word.is_some_and(|w| SUBJECT_PRONOUNS.contains(&w));
        if after_subject {
            if let Some(t) = options.iter().find(|t| matches!(t.as_str(), "VBZ" | "VBP" | "VBD")) {
                return Some(t.clone());
            }
        }
        return pick(is_verb_tag);
    }
    if options.iter().any(|t| t.starts_with("JJ")) && next_tag.is_some_and(is_noun_tag) {
        return pick(|t| t.starts_with("JJ"));
    }
    if noun_context {
        return pick(is_noun_tag);
    }
    None
}
