//! Minimal SVG emitters for scatter and bar charts. Output uses only inline
//! attributes, no external stylesheets or fonts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analyses::{RadiusPairCount, SensePairStat};
use crate::error::{Error, Result};
use crate::geometry::PcaProjection;
use crate::lexicon::Sense;
use crate::text::WordKey;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 120.0;
const FONT: &str = "font-family=\"sans-serif\"";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseColorScheme {
    pub colors: BTreeMap<Sense, String>,
}

impl Default for SenseColorScheme {
    fn default() -> Self {
        let colors = [
            (Sense::Sight, "#f2c500"),
            (Sense::Hearing, "#d62728"),
            (Sense::Touch, "#7fc8f0"),
            (Sense::Taste, "#8e44ad"),
            (Sense::Smell, "#1a2f8a"),
        ];
        SenseColorScheme {
            colors: colors.into_iter().map(|(s, c)| (s, c.to_string())).collect(),
        }
    }
}

impl SenseColorScheme {
    pub fn color(&self, sense: Sense) -> &str {
        self.colors.get(&sense).map_or("#808080", String::as_str)
    }
}

/// Colors for same-sense and cross-sense bars.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStyle {
    pub same: &'static str,
    pub cross: &'static str,
}

pub const DISTANCE_STYLE: PairStyle = PairStyle {
    same: "#d81b9a",
    cross: "#9e9e9e",
};

pub const RADIUS_STYLE: PairStyle = PairStyle {
    same: "#d62728",
    cross: "#2a9d8f",
};

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

struct Svg {
    buf: String,
}

impl Svg {
    fn new(title: &str) -> Self {
        let mut buf = String::new();
        let _ = writeln!(
            buf,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(
            buf,
            "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
        );
        let mut s = Svg { buf };
        s.text(WIDTH / 2.0, 28.0, title, 18.0, "middle", None);
        s
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.buf,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\"/>"
        );
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.buf,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r:.2}\" fill=\"{fill}\" fill-opacity=\"0.8\" stroke=\"black\" stroke-width=\"0.4\"/>"
        );
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        let _ = writeln!(
            self.buf,
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{stroke}\" stroke-width=\"1\"/>"
        );
    }

    fn text(&mut self, x: f64, y: f64, s: &str, size: f64, anchor: &str, rotate: Option<f64>) {
        let transform = rotate.map_or(String::new(), |deg| {
            format!(" transform=\"rotate({deg} {x:.2} {y:.2})\"")
        });
        let _ = writeln!(
            self.buf,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" {FONT} font-size=\"{size}\" text-anchor=\"{anchor}\"{transform}>{}</text>",
            escape(s)
        );
    }

    fn legend(&mut self, entries: &[(String, String)]) {
        let x = WIDTH - RIGHT + 20.0;
        for (i, (name, color)) in entries.iter().enumerate() {
            let y = TOP + 10.0 + i as f64 * 22.0;
            self.rect(x, y - 10.0, 14.0, 14.0, color);
            self.text(x + 20.0, y + 2.0, name, 13.0, "start", None);
        }
    }

    fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

fn tick_label(v: f64, step: f64) -> String {
    if step >= 1.0 {
        format!("{v:.0}")
    } else if step >= 0.1 {
        format!("{v:.1}")
    } else if step >= 0.01 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

/// Roughly five round tick values spanning `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span.is_finite() && span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Writes `svg` to `path`.
pub fn save(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

pub fn sense_legend(colors: &SenseColorScheme) -> Vec<(String, String)> {
    Sense::ALL
        .iter()
        .map(|&s| (s.as_str().to_string(), colors.color(s).to_string()))
        .collect()
}

/// PCA score plot over the first two components. A descriptor in several
/// senses gets one marker per sense, nudged apart so every color shows.
/// Descriptors in `annotate` get a text label.
pub fn render_scatter(
    scores: &PcaProjection,
    colors: &SenseColorScheme,
    title: &str,
    annotate: &BTreeSet<WordKey>,
) -> Result<String> {
    if scores.n_components < 2 && !scores.scores.is_empty() {
        return Err(Error::Config("scatter plot needs two principal components".into()));
    }
    let mut svg = Svg::new(title);
    let pct = |k: usize| scores.explained_variance_ratio.get(k).map_or(0.0, |r| r * 100.0);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM + 60.0);
    svg.text(
        LEFT + pw / 2.0,
        TOP + ph + 40.0,
        &format!("PC1 ({:.2}%)", pct(0)),
        14.0,
        "middle",
        None,
    );
    svg.text(
        24.0,
        TOP + ph / 2.0,
        &format!("PC2 ({:.2}%)", pct(1)),
        14.0,
        "middle",
        Some(-90.0),
    );
    svg.legend(&sense_legend(colors));

    let xs: Vec<f64> = scores.scores.iter().map(|r| r[0]).collect();
    let ys: Vec<f64> = scores.scores.iter().map(|r| r[1]).collect();
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (-1.0, 1.0)
        } else if hi - lo < 1e-12 {
            (lo - 1.0, hi + 1.0)
        } else {
            let pad = 0.05 * (hi - lo);
            (lo - pad, hi + pad)
        }
    };
    let (x0, x1) = range(&xs);
    let (y0, y1) = range(&ys);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    svg.line(LEFT, TOP + ph, LEFT + pw, TOP + ph, "black");
    svg.line(LEFT, TOP, LEFT, TOP + ph, "black");
    let xt = ticks(x0, x1);
    let xstep = if xt.len() > 1 { xt[1] - xt[0] } else { 1.0 };
    for t in xt {
        svg.line(px(t), TOP + ph, px(t), TOP + ph + 5.0, "black");
        svg.text(px(t), TOP + ph + 18.0, &tick_label(t, xstep), 11.0, "middle", None);
    }
    let yt = ticks(y0, y1);
    let ystep = if yt.len() > 1 { yt[1] - yt[0] } else { 1.0 };
    for t in yt {
        svg.line(LEFT - 5.0, py(t), LEFT, py(t), "black");
        svg.text(LEFT - 8.0, py(t) + 4.0, &tick_label(t, ystep), 11.0, "end", None);
    }

    for (label, row) in scores.labels.iter().zip(&scores.scores) {
        let (cx, cy) = (px(row[0]), py(row[1]));
        let k = label.senses.len();
        if k == 0 {
            svg.circle(cx, cy, 4.0, "#808080");
        }
        for (i, &s) in label.senses.iter().enumerate() {
            let (dx, dy) = if k > 1 {
                let angle = std::f64::consts::TAU * i as f64 / k as f64;
                (3.0 * angle.cos(), 3.0 * angle.sin())
            } else {
                (0.0, 0.0)
            };
            svg.circle(cx + dx, cy + dy, 4.0, colors.color(s));
        }
        if annotate.contains(&label.key) {
            svg.text(cx + 6.0, cy - 6.0, &label.key.surface, 10.0, "start", None);
        }
    }
    Ok(svg.finish())
}

pub fn plot_scatter(
    scores: &PcaProjection,
    colors: &SenseColorScheme,
    title: &str,
    annotate: &BTreeSet<WordKey>,
    output: &Path,
) -> Result<()> {
    save(output, &render_scatter(scores, colors, title, annotate)?)
}

/// One bar of a grouped bar chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Bar {
    pub value: f64,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarGroup {
    pub label: String,
    pub bars: Vec<Bar>,
}

/// Bar chart with one cluster of bars per group. `legend` entries are
/// drawn at the right.
pub fn render_bars(title: &str, y_label: &str, groups: &[BarGroup], legend: &[(String, String)]) -> String {
    let mut svg = Svg::new(title);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    svg.text(24.0, TOP + ph / 2.0, y_label, 14.0, "middle", Some(-90.0));
    svg.legend(legend);

    let max = groups
        .iter()
        .flat_map(|g| g.bars.iter().map(|b| b.value))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let top = if max > 0.0 { max * 1.05 } else { 1.0 };
    let py = |v: f64| TOP + ph - v / top * ph;
    svg.line(LEFT, TOP + ph, LEFT + pw, TOP + ph, "black");
    svg.line(LEFT, TOP, LEFT, TOP + ph, "black");
    let yt = ticks(0.0, top);
    let step = if yt.len() > 1 { yt[1] - yt[0] } else { 1.0 };
    for t in yt {
        svg.line(LEFT - 5.0, py(t), LEFT, py(t), "black");
        svg.text(LEFT - 8.0, py(t) + 4.0, &tick_label(t, step), 11.0, "end", None);
    }

    let slot = pw / groups.len().max(1) as f64;
    for (gi, g) in groups.iter().enumerate() {
        let x = LEFT + gi as f64 * slot;
        let inner = slot * 0.8;
        let bw = inner / g.bars.len().max(1) as f64;
        for (bi, b) in g.bars.iter().enumerate() {
            let v = if b.value.is_finite() { b.value.max(0.0) } else { 0.0 };
            let bx = x + slot * 0.1 + bi as f64 * bw;
            svg.rect(bx, py(v), bw, TOP + ph - py(v), &b.color);
        }
        let lx = x + slot / 2.0;
        let ly = TOP + ph + 12.0;
        svg.text(lx, ly, &g.label, 11.0, "end", Some(-45.0));
    }
    svg.finish()
}

fn pair_label(a: Sense, b: Sense) -> String {
    let (x, y) = if a.as_str() <= b.as_str() { (a, b) } else { (b, a) };
    format!("{}-{}", x.as_str(), y.as_str())
}

/// Same-sense pairs first, then cross-sense pairs, each alphabetical.
fn pair_groups(items: Vec<(Sense, Sense, f64)>, style: PairStyle) -> Vec<BarGroup> {
    let mut rows: Vec<(bool, String, f64)> = items
        .into_iter()
        .map(|(a, b, v)| (a != b, pair_label(a, b), v))
        .collect();
    rows.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
    rows.into_iter()
        .map(|(cross, label, value)| BarGroup {
            label,
            bars: vec![Bar {
                value,
                color: if cross { style.cross } else { style.same }.to_string(),
            }],
        })
        .collect()
}

fn pair_legend(style: PairStyle) -> Vec<(String, String)> {
    vec![
        ("same sense".to_string(), style.same.to_string()),
        ("cross sense".to_string(), style.cross.to_string()),
    ]
}

/// Bars for mean pairwise distances. Undefined values are drawn as zero.
pub fn render_pair_distances(stats: &[SensePairStat], style: PairStyle) -> String {
    let items = stats
        .iter()
        .map(|s| (s.pair.0, s.pair.1, s.value.unwrap_or(0.0)))
        .collect();
    render_bars(
        "Average pairwise distance between sense pairs",
        "mean distance",
        &pair_groups(items, style),
        &pair_legend(style),
    )
}

pub fn render_radius_pairs(counts: &[RadiusPairCount], radius: f64, style: PairStyle) -> String {
    let items = counts.iter().map(|c| (c.pair.0, c.pair.1, c.count as f64)).collect();
    render_bars(
        &format!("Descriptor pairs within radius {radius}"),
        "pair count",
        &pair_groups(items, style),
        &pair_legend(style),
    )
}

pub fn plot_bars(stats: &[SensePairStat], style: PairStyle, output: &Path) -> Result<()> {
    save(output, &render_pair_distances(stats, style))
}
