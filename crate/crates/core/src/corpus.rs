//! Corpus manifests: loading Gutenberg-style metadata, fiction filtering and
//! corpus-level statistics (author/genre frequencies, birth-year histogram).
//!
//! Metadata files are either JSON Lines (one object per line) or a single JSON
//! array of objects. Recognised fields:
//!
//! | field                               | type                 | notes                          |
//! |-------------------------------------|----------------------|--------------------------------|
//! | `Num` / `Id` / `book_id`            | string or integer    | required, unique               |
//! | `Title`                             | string or [string]   | first element used             |
//! | `Author`                            | string or [string]   | missing → `None Available`     |
//! | `Author Birth`                      | integer or [integer] | optional, negative = BCE       |
//! | `Subject`                           | string or [string]   |                                |
//! | `Language`                          | string or [string]   | first element used             |
//! | `gd-path` / `path` / `text_path`    | string               | default `<book_id>.txt`        |

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Author sentinel used when a record has no author.
pub const NO_AUTHOR: &str = "None Available";

pub const MIN_BIRTH_YEAR: i32 = -1000;
pub const MAX_BIRTH_YEAR: i32 = 2100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BookRecord {
    pub book_id: String,
    pub title: String,
    pub author: String,
    pub author_birth_year: Option<i32>,
    pub subjects: Vec<String>,
    pub language: String,
    pub text_path: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub books: Vec<BookRecord>,
    pub source_label: String,
}

/// Non-fatal problems encountered while loading a manifest.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    /// Book ids whose text file was not found under the text root.
    pub missing_text: Vec<String>,
    /// Records dropped for lacking an id or duplicating an earlier id.
    pub skipped_records: usize,
    /// Birth years outside the accepted range, discarded.
    pub discarded_birth_years: usize,
}

impl LoadReport {
    pub fn warning_count(&self) -> usize {
        self.missing_text.len() + self.skipped_records + self.discarded_birth_years
    }
}

impl CorpusManifest {
    pub fn len(&self) -> usize {
        self.books.len()
    }

    pub fn is_empty(&self) -> bool {
        self.books.is_empty()
    }
}

pub fn load_manifest(metadata_file: &Path, text_root: &Path) -> Result<(CorpusManifest, LoadReport)> {
    let raw = fs::read_to_string(metadata_file).map_err(|e| Error::io(metadata_file, e))?;
    let records = parse_records(&raw, metadata_file)?;

    let mut report = LoadReport::default();
    let mut seen = HashSet::new();
    let mut books = Vec::with_capacity(records.len());

    for (line, value) in records {
        let Some(obj) = value.as_object() else {
            warn!("{}:{line}: record is not an object, skipped", metadata_file.display());
            report.skipped_records += 1;
            continue;
        };
        let Some(book_id) = ["Num", "Id", "book_id"]
            .iter()
            .find_map(|k| obj.get(*k).and_then(scalar_string))
            .filter(|s| !s.is_empty())
        else {
            warn!("{}:{line}: record without a book id, skipped", metadata_file.display());
            report.skipped_records += 1;
            continue;
        };
        if !seen.insert(book_id.clone()) {
            warn!(
                "{}:{line}: duplicate book id {book_id}, skipped",
                metadata_file.display()
            );
            report.skipped_records += 1;
            continue;
        }

        let rel_path = ["gd-path", "path", "text_path"]
            .iter()
            .find_map(|k| obj.get(*k).and_then(first_string))
            .unwrap_or_else(|| format!("{book_id}.txt"));
        let text_path = text_root.join(rel_path);
        if !text_path.is_file() {
            warn!("text for book {book_id} not found at {}", text_path.display());
            report.missing_text.push(book_id);
            continue;
        }

        let author_birth_year = match obj.get("Author Birth").and_then(first_integer) {
            Some(y) if (MIN_BIRTH_YEAR as i64..=MAX_BIRTH_YEAR as i64).contains(&y) => Some(y as i32),
            Some(y) => {
                warn!("book {book_id}: birth year {y} out of range, ignored");
                report.discarded_birth_years += 1;
                None
            }
            None => None,
        };

        books.push(BookRecord {
            title: obj.get("Title").and_then(first_string).unwrap_or_default(),
            author: obj
                .get("Author")
                .and_then(first_string)
                .filter(|s| !s.trim().is_empty())
                .unwrap_or_else(|| NO_AUTHOR.to_string()),
            author_birth_year,
            subjects: obj.get("Subject").map(string_list).unwrap_or_default(),
            language: obj.get("Language").and_then(first_string).unwrap_or_default(),
            text_path,
            book_id,
        });
    }

    let manifest = CorpusManifest {
        books,
        source_label: metadata_file.display().to_string(),
    };
    Ok((manifest, report))
}

fn parse_records(raw: &str, path: &Path) -> Result<Vec<(usize, Value)>> {
    if raw.trim_start().starts_with('[') {
        let values: Vec<Value> = serde_json::from_str(raw).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })?;
        return Ok(values.into_iter().enumerate().map(|(i, v)| (i + 1, v)).collect());
    }
    let mut out = Vec::new();
    for (i, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push((i + 1, value));
    }
    Ok(out)
}

fn scalar_string(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.trim().to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn first_string(v: &Value) -> Option<String> {
    match v {
        Value::Array(items) => items.iter().find_map(scalar_string),
        other => scalar_string(other),
    }
}

fn string_list(v: &Value) -> Vec<String> {
    match v {
        Value::Array(items) => items.iter().filter_map(scalar_string).collect(),
        other => scalar_string(other).into_iter().collect(),
    }
}

fn first_integer(v: &Value) -> Option<i64> {
    match v {
        Value::Array(items) => items.iter().find_map(first_integer),
        Value::Number(n) => n.as_i64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

const LANGUAGE_CODES: &[(&str, &str)] = &[
    ("en", "english"),
    ("fr", "french"),
    ("de", "german"),
    ("es", "spanish"),
    ("it", "italian"),
    ("nl", "dutch"),
    ("pt", "portuguese"),
    ("fi", "finnish"),
];

/// Case-insensitive language comparison that also equates ISO 639-1 codes
/// with English language names (`en` matches `English`).
pub fn language_matches(recorded: &str, wanted: &str) -> bool {
    let a = recorded.trim().to_lowercase();
    let b = wanted.trim().to_lowercase();
    if a == b {
        return true;
    }
    LANGUAGE_CODES
        .iter()
        .any(|(code, name)| (a == *code && b == *name) || (a == *name && b == *code))
}

pub fn is_fiction_subject(subject: &str) -> bool {
    subject.to_lowercase().contains("fiction")
}

/// Keeps books in `language` with at least one subject mentioning fiction.
pub fn filter_fiction(manifest: &CorpusManifest, language: &str) -> CorpusManifest {
    CorpusManifest {
        books: manifest
            .books
            .iter()
            .filter(|b| language_matches(&b.language, language))
            .filter(|b| b.subjects.iter().any(|s| is_fiction_subject(s)))
            .cloned()
            .collect(),
        source_label: manifest.source_label.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedCount {
    pub name: String,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorGenreStats {
    pub authors: Vec<RankedCount>,
    pub genres: Vec<RankedCount>,
}

fn rank(counts: BTreeMap<&str, usize>, k: usize) -> Vec<RankedCount> {
    let mut ranked: Vec<RankedCount> = counts
        .into_iter()
        .map(|(name, count)| RankedCount {
            name: name.to_string(),
            count,
        })
        .collect();
    ranked.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.name.cmp(&b.name)));
    ranked.truncate(k);
    ranked
}

/// Top-`k` authors and genres by number of books.
pub fn author_genre_stats(manifest: &CorpusManifest, k: usize) -> AuthorGenreStats {
    let mut authors: BTreeMap<&str, usize> = BTreeMap::new();
    let mut genres: BTreeMap<&str, usize> = BTreeMap::new();
    for book in &manifest.books {
        *authors.entry(book.author.as_str()).or_default() += 1;
        let distinct: HashSet<&str> = book.subjects.iter().map(String::as_str).collect();
        for subject in distinct {
            *genres.entry(subject).or_default() += 1;
        }
    }
    AuthorGenreStats {
        authors: rank(authors, k),
        genres: rank(genres, k),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBin {
    /// Inclusive lower edge.
    pub start: i32,
    /// Exclusive upper edge.
    pub end: i32,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BirthYearHistogram {
    pub bins: Vec<HistogramBin>,
    /// Books without a recorded birth year.
    pub missing: usize,
}

impl BirthYearHistogram {
    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum::<usize>() + self.missing
    }
}

/// Histogram of author birth years. Years before `floor_year` share one
/// leftmost bin spanning `[earliest, floor_year)`; the rest are binned in
/// `bin_width`-year steps starting at `floor_year`.
pub fn birth_year_histogram(manifest: &CorpusManifest, bin_width: u32, floor_year: i32) -> BirthYearHistogram {
    let width = bin_width.max(1) as i32;
    let years: Vec<i32> = manifest.books.iter().filter_map(|b| b.author_birth_year).collect();
    let missing = manifest.books.len() - years.len();
    let mut bins = Vec::new();

    let early: Vec<i32> = years.iter().copied().filter(|&y| y < floor_year).collect();
    if let Some(&earliest) = early.iter().min() {
        bins.push(HistogramBin {
            start: earliest,
            end: floor_year,
            count: early.len(),
        });
    }
    if let Some(&latest) = years.iter().filter(|&&y| y >= floor_year).max() {
        let n_bins = ((latest - floor_year) / width + 1) as usize;
        let first = bins.len();
        bins.extend((0..n_bins).map(|i| HistogramBin {
            start: floor_year + i as i32 * width,
            end: floor_year + (i as i32 + 1) * width,
            count: 0,
        }));
        for &y in years.iter().filter(|&&y| y >= floor_year) {
            bins[first + ((y - floor_year) / width) as usize].count += 1;
        }
    }
    BirthYearHistogram { bins, missing }
}

/// Strips Project Gutenberg license header and footer when the standard
/// `*** START OF` / `*** END OF` marker lines are present. Text without
/// markers is returned unchanged.
pub fn strip_gutenberg_boilerplate(text: &str) -> &str {
    let mut body = text;
    if let Some(start) = find_marker(body, &["*** START OF", "***START OF"]) {
        body = match body[start..].find('\n') {
            Some(nl) => &body[start + nl + 1..],
            None => "",
        };
    }
    if let Some(end) = find_marker(
        body,
        &[
            "*** END OF",
            "***END OF",
            "End of the Project Gutenberg",
            "End of Project Gutenberg",
        ],
    ) {
        body = &body[..end];
    }
    body
}

fn find_marker(text: &str, markers: &[&str]) -> Option<usize> {
    markers.iter().filter_map(|m| text.find(m)).min().map(|pos| {
        // back up to the start of the marker's line
        text[..pos].rfind('\n').map_or(0, |nl| nl + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book(id: &str, author: &str, year: Option<i32>, subjects: &[&str], lang: &str) -> BookRecord {
        BookRecord {
            book_id: id.into(),
            title: format!("Title {id}"),
            author: author.into(),
            author_birth_year: year,
            subjects: subjects.iter().map(|s| s.to_string()).collect(),
            language: lang.into(),
            text_path: PathBuf::from(format!("{id}.txt")),
        }
    }

    fn manifest(books: Vec<BookRecord>) -> CorpusManifest {
        CorpusManifest {
            books,
            source_label: "test".into(),
        }
    }

    #[test]
    fn fiction_filter_examples() {
        let m = manifest(vec![
            book("1", "A", None, &["England -- Fiction"], "en"),
            book("2", "B", None, &["Science fiction"], "English"),
            book("3", "C", None, &[], "en"),
            book("4", "D", None, &["Poetry"], "en"),
            book("5", "E", None, &["Fiction"], "fr"),
        ]);
        let kept: Vec<_> = filter_fiction(&m, "en").books.into_iter().map(|b| b.book_id).collect();
        assert_eq!(kept, ["1", "2"]);
    }

    #[test]
    fn fiction_filter_is_idempotent() {
        let m = manifest(vec![
            book("1", "A", None, &["Fiction", "Poetry"], "en"),
            book("2", "B", None, &["Essays"], "en"),
        ]);
        let once = filter_fiction(&m, "en");
        assert_eq!(filter_fiction(&once, "en"), once);
    }

    #[test]
    fn stats_count_authors_and_distinct_subjects() {
        let m = manifest(vec![
            book("1", "Same", None, &["Fiction", "Fiction", "Love stories"], "en"),
            book("2", "Same", None, &["Fiction"], "en"),
            book("3", "Other", None, &["Love stories"], "en"),
        ]);
        let stats = author_genre_stats(&m, 20);
        assert_eq!(
            stats.authors[0],
            RankedCount {
                name: "Same".into(),
                count: 2
            }
        );
        assert_eq!(stats.authors.iter().map(|a| a.count).sum::<usize>(), 3);
        assert_eq!(
            stats.genres[0],
            RankedCount {
                name: "Fiction".into(),
                count: 2
            }
        );
        assert_eq!(
            stats.genres[1],
            RankedCount {
                name: "Love stories".into(),
                count: 2
            }
        );
        assert!(author_genre_stats(&m, 0).authors.is_empty());
    }

    #[test]
    fn stats_single_book() {
        let m = manifest(vec![book("1", "Solo", None, &["Fiction"], "en")]);
        let stats = author_genre_stats(&m, 5);
        assert_eq!(stats.authors.len(), 1);
        assert_eq!(
            stats.genres,
            vec![RankedCount {
                name: "Fiction".into(),
                count: 1
            }]
        );
    }

    #[test]
    fn histogram_collapses_early_years_and_counts_missing() {
        let m = manifest(vec![
            book("1", "A", Some(1490), &[], "en"),
            book("2", "B", Some(-750), &[], "en"),
            book("3", "C", Some(1812), &[], "en"),
            book("4", "D", None, &[], "en"),
            book("5", "E", Some(1500), &[], "en"),
        ]);
        let h = birth_year_histogram(&m, 100, 1500);
        assert_eq!(h.missing, 1);
        assert_eq!(
            h.bins[0],
            HistogramBin {
                start: -750,
                end: 1500,
                count: 2
            }
        );
        assert_eq!(
            h.bins[1],
            HistogramBin {
                start: 1500,
                end: 1600,
                count: 1
            }
        );
        assert_eq!(
            h.bins.last().unwrap(),
            &HistogramBin {
                start: 1800,
                end: 1900,
                count: 1
            }
        );
        assert_eq!(h.total(), 5);
        assert!(birth_year_histogram(&manifest(vec![]), 10, 1500).bins.is_empty());
    }

    #[test]
    fn boilerplate_strip() {
        let text = "Header junk\n*** START OF THE PROJECT GUTENBERG EBOOK X ***\nBody line.\n*** END OF THE PROJECT GUTENBERG EBOOK X ***\nLicense";
        assert_eq!(strip_gutenberg_boilerplate(text), "Body line.\n");
        assert_eq!(strip_gutenberg_boilerplate("plain"), "plain");
    }

    #[test]
    fn language_codes() {
        assert!(language_matches("English", "en"));
        assert!(language_matches("EN", "en"));
        assert!(!language_matches("French", "en"));
    }
}
