//! Penn-Treebank-style tokenizer.
//!
//! Splits off punctuation, separates clitics (`don't` → `do n't`,
//! `can't` → `ca n't`, `she's` → `she 's`) and keeps common abbreviations
//! (`Mr.`) and initials intact. Curly apostrophes inside words are
//! normalised to straight ones; quotation marks are kept as written.

/// A token with a flag marking the first token after a paragraph break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub text: String,
    pub sentence_start: bool,
}

const OPENERS: &[char] = &['"', '\'', '`', '(', '[', '{', '“', '‘', '«'];
const CLOSERS: &[char] = &[
    '.', ',', ';', ':', '!', '?', '"', '\'', ')', ']', '}', '”', '’', '»', '…',
];
const CLITICS: &[&str] = &["'s", "'re", "'ve", "'ll", "'d", "'m"];
const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "st.", "jr.", "sr.", "prof.", "rev.", "capt.", "col.", "gen.", "lt.", "sgt.", "mt.",
    "vs.", "etc.", "messrs.", "hon.",
];

pub fn tokenize(raw: &str) -> Vec<String> {
    tokenize_text(raw).into_iter().map(|t| t.text).collect()
}

/// Tokenizes `raw`, flagging the first token of the text and the first token
/// after each blank line as a sentence start.
pub fn tokenize_text(raw: &str) -> Vec<RawToken> {
    let mut out = Vec::new();
    let mut pending_break = true;
    for line in raw.lines() {
        if line.trim().is_empty() {
            pending_break = true;
            continue;
        }
        for chunk in line.split_whitespace() {
            let before = out.len();
            split_chunk(chunk, &mut out);
            if pending_break && out.len() > before {
                out[before].sentence_start = true;
                pending_break = false;
            }
        }
    }
    out
}

fn push(out: &mut Vec<RawToken>, text: &str) {
    if !text.is_empty() {
        out.push(RawToken {
            text: text.to_string(),
            sentence_start: false,
        });
    }
}

fn normalise_apostrophes(chunk: &str) -> String {
    let chars: Vec<char> = chunk.chars().collect();
    chars
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let inner =
                i > 0 && chars[i - 1].is_alphanumeric() && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
            if c == '’' && inner {
                '\''
            } else {
                c
            }
        })
        .collect()
}

fn is_clitic(s: &str) -> bool {
    let lower = s.to_lowercase();
    lower == "n't" || CLITICS.contains(&lower.as_str())
}

fn keeps_final_period(word: &str) -> bool {
    let lower = word.to_lowercase();
    if ABBREVIATIONS.contains(&lower.as_str()) {
        return true;
    }
    let core = &word[..word.len() - 1];
    // initials ("J.") and dotted abbreviations ("e.g.", "U.S.")
    (core.chars().count() == 1 && core.chars().all(|c| c.is_alphabetic() && c.is_uppercase()))
        || (core.contains('.') && core.chars().all(|c| c.is_alphabetic() || c == '.'))
}

fn split_chunk(chunk: &str, out: &mut Vec<RawToken>) {
    let normalised = normalise_apostrophes(chunk);
    let mut rest: &str = &normalised;

    if is_clitic(rest) {
        push(out, rest);
        return;
    }

    // leading openers
    loop {
        if let Some(r) = rest.strip_prefix("``") {
            push(out, "``");
            rest = r;
        } else if let Some(c) = rest.chars().next().filter(|c| OPENERS.contains(c)) {
            if is_clitic(rest) {
                break;
            }
            push(out, &rest[..c.len_utf8()]);
            rest = &rest[c.len_utf8()..];
        } else {
            break;
        }
    }

    // trailing closers, collected in reverse
    let mut trailing: Vec<&str> = Vec::new();
    loop {
        if rest.is_empty() || is_clitic(rest) {
            break;
        }
        if rest.ends_with("...") {
            trailing.push("...");
            rest = &rest[..rest.len() - 3];
        } else if rest.ends_with("''") && rest.len() > 2 {
            trailing.push("''");
            rest = &rest[..rest.len() - 2];
        } else if let Some(c) = rest.chars().next_back().filter(|c| CLOSERS.contains(c)) {
            if c == '.' && rest.len() > 1 && keeps_final_period(rest) {
                break;
            }
            let cut = rest.len() - c.len_utf8();
            trailing.push(&rest[cut..]);
            rest = &rest[..cut];
        } else {
            break;
        }
    }

    split_dashes(rest, out);
    for t in trailing.into_iter().rev() {
        push(out, t);
    }
}

/// Splits internal `--` and em dashes, then clitics on each piece.
fn split_dashes(mut rest: &str, out: &mut Vec<RawToken>) {
    while !rest.is_empty() {
        let next = [
            rest.find("--").map(|i| (i, 2)),
            rest.find('—').map(|i| (i, '—'.len_utf8())),
        ]
        .into_iter()
        .flatten()
        .min_by_key(|(i, _)| *i);
        match next {
            Some((i, len)) => {
                split_clitics(&rest[..i], out);
                push(out, &rest[i..i + len]);
                rest = &rest[i + len..];
            }
            None => {
                split_clitics(rest, out);
                rest = "";
            }
        }
    }
}

fn split_clitics(word: &str, out: &mut Vec<RawToken>) {
    if word.is_empty() {
        return;
    }
    let lower = word.to_lowercase();
    if lower.len() > 3 && lower.ends_with("n't") {
        let stem_len = match lower.as_str() {
            // can't → ca n't, won't → wo n't, shan't → sha n't
            "can't" | "won't" => 2,
            "shan't" => 3,
            _ => word.len() - 3,
        };
        push(out, &word[..stem_len]);
        push(out, &word[stem_len..]);
        return;
    }
    for clitic in CLITICS {
        if lower.len() > clitic.len() && lower.ends_with(clitic) {
            let cut = word.len() - clitic.len();
            push(out, &word[..cut]);
            push(out, &word[cut..]);
            return;
        }
    }
    push(out, word);
}

fn attaches_left(tok: &str) -> bool {
    matches!(
        tok,
        "," | "." | ";" | ":" | "!" | "?" | ")" | "]" | "}" | "”" | "’" | "»" | "..." | "…" | "'" | "''"
    ) || is_clitic(tok)
}

fn attaches_right(tok: &str) -> bool {
    matches!(tok, "(" | "[" | "{" | "“" | "‘" | "«" | "``")
}

/// Joins tokens back into text so that [`tokenize`] recovers them.
/// Straight double quotes alternate between opening and closing.
pub fn detokenize<S: AsRef<str>>(tokens: &[S]) -> String {
    let mut out = String::new();
    let mut open_quote = false;
    let mut glue_next = true;
    for tok in tokens {
        let tok = tok.as_ref();
        let mut glue_left = attaches_left(tok);
        let mut glue_right = attaches_right(tok);
        if tok == "\"" {
            if open_quote {
                glue_left = true;
            } else {
                glue_right = true;
            }
            open_quote = !open_quote;
        }
        if !(glue_next || glue_left) {
            out.push(' ');
        }
        out.push_str(tok);
        glue_next = glue_right;
    }
    out
}
