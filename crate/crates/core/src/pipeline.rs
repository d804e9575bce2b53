//! End-to-end orchestration. Each stage reads the checkpoints of earlier
//! stages from `<output_dir>/checkpoints`, so any stage can be rerun on its
//! own once its inputs exist.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analyses::{
    avg_pairwise_distance, multi_sense_overlap, radius_pairs, OverlapRow, RadiusPairCount, SensePairStat,
};
use crate::config::RunConfig;
use crate::corpus::{
    author_genre_stats, birth_year_histogram, filter_fiction, load_manifest, strip_gutenberg_boilerplate,
    AuthorGenreStats, BirthYearHistogram, BookRecord, CorpusManifest, LoadReport,
};
use crate::descriptors::{identify_descriptors, is_tested_pair, pos_distribution, DescriptorTable, Membership};
use crate::embedding::{read_model, train_sequences, write_model};
use crate::error::{Error, Result};
use crate::geometry::{distance_matrix, explained_variance_summary, pca_of_distances, Label, PcaProjection};
use crate::lexicon::{load_seeds, Morphology, SeedLexicon, Sense};
use crate::report::svg::{self, Bar, BarGroup};
use crate::report::{tables, SenseColorScheme, VarianceRow, DISTANCE_STYLE, RADIUS_STYLE};
use crate::text::{remove_stopwords, tag_pos, BaselineTagger, Stoplist, TaggerBackend};
use crate::windows::{
    count_occurrences, extract_windows, read_window_dump, write_window_dump, ContextWindow, WindowCounts,
};

/// Files with this extension are read as pre-tagged text whatever the
/// configured tagger.
pub const PRETAGGED_EXTENSION: &str = "tagged";

pub const FAILURE_MARKER: &str = "FAILED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Ingest,
    Windows,
    Descriptors,
    Train,
    Geometry,
    Analyze,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Ingest,
        Stage::Windows,
        Stage::Descriptors,
        Stage::Train,
        Stage::Geometry,
        Stage::Analyze,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Windows => "windows",
            Stage::Descriptors => "descriptors",
            Stage::Train => "train",
            Stage::Geometry => "geometry",
            Stage::Analyze => "analyze",
            Stage::Report => "report",
        }
    }
}

/// CSV files written by a complete run.
pub const CSV_OUTPUTS: [&str; 11] = [
    "authors.csv",
    "genres.csv",
    "birth_years.csv",
    "descriptors.csv",
    "pos_distribution.csv",
    "distance_matrix.csv",
    "pca_scores.csv",
    "explained_variance.csv",
    "pair_distances.csv",
    "radius_pairs.csv",
    "overlap.csv",
];

/// SVG figures written by a complete run.
pub const SVG_OUTPUTS: [&str; 6] = [
    "fig1_birth_years.svg",
    "fig2_pos_distribution.svg",
    "fig3_pair_distances.svg",
    "fig4_radius_pairs.svg",
    "fig5_overlap.svg",
    "fig6_pca_blending.svg",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestCheckpoint {
    pub manifest: CorpusManifest,
    pub load_report: LoadReport,
    pub records_loaded: usize,
    pub stats: AuthorGenreStats,
    pub birth_years: BirthYearHistogram,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryCheckpoint {
    pub membership: Membership,
    pub projection: PcaProjection,
    pub variance: Vec<VarianceRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysesCheckpoint {
    pub radius: f64,
    pub pair_distances: Vec<SensePairStat>,
    pub radius_pairs: Vec<RadiusPairCount>,
    pub overlap: Vec<OverlapRow>,
}

pub struct Pipeline {
    config: RunConfig,
}

impl Pipeline {
    /// Validates the config, creates the output directory and writes the
    /// resolved config into it.
    pub fn new(mut config: RunConfig) -> Result<Self> {
        config.apply_overrides();
        config.validate()?;
        let p = Pipeline { config };
        for dir in [p.out(), p.checkpoints()] {
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        p.config.write(&p.out().join("config.toml"))?;
        Ok(p)
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn out(&self) -> PathBuf {
        self.config.output_dir.clone()
    }

    fn checkpoints(&self) -> PathBuf {
        self.config.output_dir.join("checkpoints")
    }

    fn ckpt(&self, name: &str) -> PathBuf {
        self.checkpoints().join(name)
    }

    fn output(&self, name: &str) -> PathBuf {
        self.config.output_dir.join(name)
    }

    pub fn run_all(&self) -> Result<()> {
        for stage in Stage::ALL {
            self.run(stage)?;
        }
        Ok(())
    }

    /// Runs one stage, recording its timing and summary in `metadata.json`.
    /// On failure a `FAILED` marker naming the stage is left in the output
    /// directory; outputs already written are kept.
    pub fn run(&self, stage: Stage) -> Result<()> {
        info!("stage {}", stage.name());
        let marker = self.output(FAILURE_MARKER);
        let start = Instant::now();
        let result = match stage {
            Stage::Ingest => self.ingest(),
            Stage::Windows => self.windows(),
            Stage::Descriptors => self.descriptors(),
            Stage::Train => self.train(),
            Stage::Geometry => self.geometry(),
            Stage::Analyze => self.analyze(),
            Stage::Report => self.report(),
        };
        match result {
            Ok(summary) => {
                if marker.exists() {
                    fs::remove_file(&marker).map_err(|e| Error::io(&marker, e))?;
                }
                self.record(stage, start.elapsed().as_secs_f64(), summary)
            }
            Err(e) => {
                let e = Error::Stage {
                    stage: stage.name(),
                    source: Box::new(e),
                };
                let _ = fs::write(&marker, format!("{e}\n"));
                Err(e)
            }
        }
    }

    fn record(&self, stage: Stage, seconds: f64, summary: Value) -> Result<()> {
        let path = self.output("metadata.json");
        let mut meta: Value = match fs::read_to_string(&path) {
            Ok(s) => serde_json::from_str(&s).unwrap_or_else(|_| json!({})),
            Err(_) => json!({}),
        };
        let c = &self.config;
        meta["tool"] = json!("sensory");
        meta["version"] = json!(env!("CARGO_PKG_VERSION"));
        meta["rng_seed"] = json!(c.embedding.rng_seed);
        meta["threads"] = json!(c.embedding.threads);
        meta["deterministic"] = json!(c.embedding.threads == 1);
        meta["design_decisions"] = design_decisions();
        if !meta["stages"].is_object() {
            meta["stages"] = json!({});
        }
        meta["stages"][stage.name()] = json!({ "seconds": seconds, "summary": summary });
        write_json(&path, &meta)
    }

    fn ingest(&self) -> Result<Value> {
        let c = &self.config.corpus;
        let (loaded, load_report) = load_manifest(&c.metadata, &c.text_root)?;
        let records_loaded = loaded.len();
        let manifest = if c.fiction_only {
            filter_fiction(&loaded, &c.language)
        } else {
            CorpusManifest {
                books: loaded
                    .books
                    .iter()
                    .filter(|b| crate::corpus::language_matches(&b.language, &c.language))
                    .cloned()
                    .collect(),
                source_label: loaded.source_label.clone(),
            }
        };
        let stats = author_genre_stats(&manifest, c.top_k);
        let birth_years = birth_year_histogram(&manifest, c.birth_bin_width, c.birth_floor_year);
        tables::write_ranked(&self.output("authors.csv"), &stats.authors)?;
        tables::write_ranked(&self.output("genres.csv"), &stats.genres)?;
        tables::write_birth_years(&self.output("birth_years.csv"), &birth_years)?;
        let summary = json!({
            "records_with_text": records_loaded,
            "books_after_filter": manifest.len(),
            "missing_text": load_report.missing_text,
            "skipped_records": load_report.skipped_records,
            "discarded_birth_years": load_report.discarded_birth_years,
            "books_without_birth_year": birth_years.missing,
        });
        write_json(
            &self.ckpt("manifest.json"),
            &IngestCheckpoint {
                manifest,
                load_report,
                records_loaded,
                stats,
                birth_years,
            },
        )?;
        Ok(summary)
    }

    fn lexicon(&self) -> Result<SeedLexicon> {
        let l = &self.config.lexicon;
        let seeds = match &l.seed_dir {
            Some(dir) => load_seeds(dir)?,
            None => SeedLexicon::bundled(),
        };
        if l.no_morphology {
            Ok(seeds)
        } else {
            Morphology::default().expand_lexicon(&seeds)
        }
    }

    fn stoplist(&self) -> Result<Stoplist> {
        match &self.config.lexicon.stopwords {
            Some(p) => Stoplist::load(p),
            None => Ok(Stoplist::bundled()),
        }
    }

    fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.embedding.threads)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))
    }

    fn book_windows(
        &self,
        book: &BookRecord,
        lexicon: &SeedLexicon,
        stoplist: &Stoplist,
        tagger: &BaselineTagger,
    ) -> Result<(Vec<ContextWindow>, usize)> {
        let path = &book.text_path;
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = String::from_utf8_lossy(&bytes);
        let pretagged = path.extension().is_some_and(|x| x == PRETAGGED_EXTENSION);
        let backend = if pretagged {
            TaggerBackend::PreTagged
        } else {
            self.config.corpus.tagger
        };
        let body = if self.config.corpus.strip_boilerplate && !pretagged {
            strip_gutenberg_boilerplate(&text)
        } else {
            &text
        };
        let stream = tag_pos(&book.book_id, body, backend, tagger, path)?;
        let n_tokens = stream.tokens.len();
        let stream = remove_stopwords(stream, stoplist);
        Ok((extract_windows(&stream, lexicon, &self.config.windows), n_tokens))
    }

    fn windows(&self) -> Result<Value> {
        let ingest: IngestCheckpoint = read_json(&self.ckpt("manifest.json"))?;
        let lexicon = self.lexicon()?;
        let stoplist = self.stoplist()?;
        let tagger = BaselineTagger::bundled();
        let per_book: Vec<(Vec<ContextWindow>, usize)> = self.thread_pool()?.install(|| {
            ingest
                .manifest
                .books
                .par_iter()
                .map(|b| self.book_windows(b, &lexicon, &stoplist, &tagger))
                .collect::<Result<_>>()
        })?;
        let tokens: usize = per_book.iter().map(|(_, n)| n).sum();
        let windows: Vec<ContextWindow> = per_book.into_iter().flat_map(|(w, _)| w).collect();
        let counts = count_occurrences(&windows);

        let dump = self.ckpt("windows.tsv");
        let file = fs::File::create(&dump).map_err(|e| Error::io(&dump, e))?;
        write_window_dump(BufWriter::new(file), &windows).map_err(|e| Error::io(&dump, e))?;
        write_json(&self.ckpt("counts.json"), &counts)?;
        if windows.is_empty() {
            warn!("no context windows extracted");
        }
        Ok(json!({
            "tokens": tokens,
            "windows": windows.len(),
            "windows_per_sense": sense_map(counts.totals.iter().map(|&n| json!(n))),
            "seed_entries_per_sense": sense_map(lexicon.sense_sizes().iter().map(|&n| json!(n))),
            "half_width": self.config.windows.half_width,
        }))
    }

    fn descriptors(&self) -> Result<Value> {
        let counts: WindowCounts = read_json(&self.ckpt("counts.json"))?;
        let cfg = &self.config.descriptors;
        let tested = is_tested_pair(self.config.windows.half_width, cfg.cutoff);
        if !tested {
            warn!(
                "half-width {} with cutoff {} is outside the tested grid",
                self.config.windows.half_width, cfg.cutoff
            );
        }
        let table = identify_descriptors(&counts, cfg);
        tables::write_descriptors(&self.output("descriptors.csv"), &table)?;
        let pos = pos_distribution(&table.top);
        tables::write_pos_distribution(&self.output("pos_distribution.csv"), &pos)?;
        write_json(&self.ckpt("descriptors.json"), &table)?;
        Ok(json!({
            "descriptors": table.rows.len(),
            "top_k_sizes": sense_map(Sense::ALL.iter().map(|s| json!(table.top[s].len()))),
            "tested_grid_pair": tested,
        }))
    }

    fn train(&self) -> Result<Value> {
        let dump = self.ckpt("windows.tsv");
        let file = fs::File::open(&dump).map_err(|e| Error::io(&dump, e))?;
        let mut sequences = Vec::new();
        read_window_dump(BufReader::new(file), &dump, |w| sequences.push(w.training_tokens()))?;
        let model = train_sequences(&sequences, &self.config.embedding)?;
        write_model(&model, &self.ckpt("model.bin"))?;
        Ok(json!({
            "vocabulary": model.len(),
            "training_windows": sequences.len(),
            "loss_trace": model.loss_trace,
            "subword": model.config.subword.is_some(),
        }))
    }

    fn geometry(&self) -> Result<Value> {
        let table: DescriptorTable = read_json(&self.ckpt("descriptors.json"))?;
        let model = read_model(&self.ckpt("model.bin"))?;
        let top_k = self.config.analysis.top_k;
        let top: BTreeMap<Sense, Vec<_>> = table
            .top
            .iter()
            .map(|(s, list)| {
                let kept: Vec<_> = list
                    .iter()
                    .take(top_k)
                    .filter(|d| {
                        let known = model.vector(&d.key).is_some();
                        if !known {
                            warn!("descriptor {} has no embedding and is left out of the geometry", d.key);
                        }
                        known
                    })
                    .cloned()
                    .collect();
                (*s, kept)
            })
            .collect();
        let membership = Membership::from_top(&top);
        let labels: Vec<Label> = membership
            .union()
            .into_iter()
            .map(|k| {
                let senses = membership.senses_of(&k);
                Label::new(k, senses)
            })
            .collect();

        let g = &self.config.geometry;
        let combined = distance_matrix(&model, labels)?;
        let projection = pca_of_distances(&combined, g.n_components)?;
        tables::write_distance_matrix(&self.output("distance_matrix.csv"), &combined)?;
        tables::write_pca_scores(&self.output("pca_scores.csv"), &projection)?;

        let half_width = self.config.windows.half_width;
        let mut variance = Vec::new();
        let mut per_sense = Vec::new();
        for sense in Sense::ALL {
            let labels: Vec<Label> = membership
                .set(sense)
                .map(|k| Label::new(k.clone(), vec![sense]))
                .collect();
            let dm = distance_matrix(&model, labels)?;
            for &k in &g.variance_components {
                match pca_of_distances(&dm, k) {
                    Ok(p) => {
                        variance.push(VarianceRow {
                            matrix: sense.as_str().to_string(),
                            half_width,
                            n_components: k,
                            ratios: p.explained_variance_ratio.clone(),
                        });
                        per_sense.push(p);
                    }
                    Err(e) => warn!("no {k}-component PCA for {sense}: {e}"),
                }
            }
        }
        for &k in &g.variance_components {
            match pca_of_distances(&combined, k) {
                Ok(p) => variance.push(VarianceRow {
                    matrix: "combined".into(),
                    half_width,
                    n_components: k,
                    ratios: p.explained_variance_ratio,
                }),
                Err(e) => warn!("no {k}-component PCA for the combined matrix: {e}"),
            }
        }
        tables::write_explained_variance(&self.output("explained_variance.csv"), &variance)?;
        let average = explained_variance_summary(&per_sense).ok();
        let summary = json!({
            "descriptors_plotted": combined.len(),
            "explained_variance_ratio": projection.explained_variance_ratio,
            "average_explained_variance_per_sense": average,
        });
        write_json(
            &self.ckpt("geometry.json"),
            &GeometryCheckpoint {
                membership,
                projection,
                variance,
            },
        )?;
        Ok(summary)
    }

    fn analyze(&self) -> Result<Value> {
        let geo: GeometryCheckpoint = read_json(&self.ckpt("geometry.json"))?;
        let counts: WindowCounts = read_json(&self.ckpt("counts.json"))?;
        let radius = self.config.analysis.radius;
        let pair_distances = avg_pairwise_distance(&geo.projection, &geo.membership)?;
        let radius_counts = radius_pairs(&geo.projection, &geo.membership, radius)?;
        let overlap = multi_sense_overlap(&counts, &geo.membership);
        tables::write_pair_distances(&self.output("pair_distances.csv"), &pair_distances)?;
        tables::write_radius_pairs(&self.output("radius_pairs.csv"), &radius_counts, radius)?;
        tables::write_overlap(&self.output("overlap.csv"), &overlap)?;
        let summary = json!({ "overlap_descriptors": overlap.len(), "radius": radius });
        write_json(
            &self.ckpt("analyses.json"),
            &AnalysesCheckpoint {
                radius,
                pair_distances,
                radius_pairs: radius_counts,
                overlap,
            },
        )?;
        Ok(summary)
    }

    fn report(&self) -> Result<Value> {
        let ingest: IngestCheckpoint = read_json(&self.ckpt("manifest.json"))?;
        let table: DescriptorTable = read_json(&self.ckpt("descriptors.json"))?;
        let geo: GeometryCheckpoint = read_json(&self.ckpt("geometry.json"))?;
        let an: AnalysesCheckpoint = read_json(&self.ckpt("analyses.json"))?;
        let colors = SenseColorScheme::default();
        let save = |name: &str, s: String| svg::save(&self.output(name), &s);

        let bins: Vec<BarGroup> = ingest
            .birth_years
            .bins
            .iter()
            .enumerate()
            .map(|(i, b)| BarGroup {
                label: if i == 0 && b.end == self.config.corpus.birth_floor_year && b.start < b.end - 1 {
                    format!("before {}", b.end)
                } else {
                    b.start.to_string()
                },
                bars: vec![Bar {
                    value: b.count as f64,
                    color: "#4e79a7".into(),
                }],
            })
            .collect();
        save(
            "fig1_birth_years.svg",
            svg::render_bars("Author birth years", "books", &bins, &[]),
        )?;

        let pos_colors = ["#4e79a7", "#f28e2b", "#59a14f", "#b07aa1"];
        let pos = pos_distribution(&table.top);
        let groups: Vec<BarGroup> = pos
            .iter()
            .map(|(s, h)| BarGroup {
                label: s.as_str().to_string(),
                bars: h
                    .counts
                    .iter()
                    .zip(pos_colors)
                    .map(|(&n, c)| Bar {
                        value: n as f64,
                        color: c.into(),
                    })
                    .collect(),
            })
            .collect();
        let pos_legend: Vec<(String, String)> = ["noun", "verb", "adjective", "adverb"]
            .iter()
            .zip(pos_colors)
            .map(|(n, c)| (n.to_string(), c.to_string()))
            .collect();
        save(
            "fig2_pos_distribution.svg",
            svg::render_bars("Part of speech of top descriptors", "descriptors", &groups, &pos_legend),
        )?;

        save(
            "fig3_pair_distances.svg",
            svg::render_pair_distances(&an.pair_distances, DISTANCE_STYLE),
        )?;
        save(
            "fig4_radius_pairs.svg",
            svg::render_radius_pairs(&an.radius_pairs, an.radius, RADIUS_STYLE),
        )?;

        let overlap_groups: Vec<BarGroup> = an
            .overlap
            .iter()
            .map(|r| BarGroup {
                label: r.key.surface.clone(),
                bars: Sense::ALL
                    .iter()
                    .map(|&s| Bar {
                        value: r.normalized[s.index()].unwrap_or(0.0),
                        color: colors.color(s).to_string(),
                    })
                    .collect(),
            })
            .collect();
        save(
            "fig5_overlap.svg",
            svg::render_bars(
                "Descriptors shared between senses",
                "normalized window frequency",
                &overlap_groups,
                &svg::sense_legend(&colors),
            ),
        )?;

        let annotate = top_per_sense(&table, &geo, self.config.report.annotate_top);
        save(
            "fig6_pca_blending.svg",
            svg::render_scatter(
                &geo.projection,
                &colors,
                "Descriptors in the first two principal components",
                &annotate,
            )?,
        )?;
        Ok(json!({ "figures": SVG_OUTPUTS }))
    }
}

fn top_per_sense(table: &DescriptorTable, geo: &GeometryCheckpoint, n: usize) -> BTreeSet<crate::text::WordKey> {
    table
        .top
        .iter()
        .flat_map(|(s, list)| {
            list.iter()
                .filter(|d| geo.membership.set(*s).any(|k| *k == d.key))
                .take(n)
                .map(|d| d.key.clone())
        })
        .collect()
}

fn design_decisions() -> Value {
    json!({
        "descriptor_frequency": "number of context windows of the sense containing the word",
        "stopwords_removed_before_windows": true,
        "overlapping_windows": "kept; each seed occurrence anchors its own window",
        "embedding_training_instances": "context windows, seed included",
        "cbow_context_gradient": "exact derivative of the mean context vector",
        "pca_input": "rows of the distance matrix, centered, not scaled",
        "analysis_space": "combined PCA score space",
        "radius_pairs_counting": "unordered descriptor pairs; each sense-pair label counted once per pair",
        "multi_sense_membership": "presence in a sense's top-K list",
    })
}

fn sense_map(values: impl Iterator<Item = Value>) -> Value {
    Value::Object(Sense::ALL.iter().map(|s| s.as_str().to_string()).zip(values).collect())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer_pretty(BufWriter::new(file), value)?;
    Ok(())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}
