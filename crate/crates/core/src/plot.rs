//! Deterministic SVG charts on a fixed 800×600 canvas.
//!
//! Every numeric attribute goes through [`num`], which rounds to four
//! decimals, so output is byte-stable across platforms. Data-bearing
//! elements carry `data-*` attributes with the plotted values.

use crate::colorvote::ColorRanking;
use crate::pca::{BiplotData, PcaResult};
use crate::survey::{Gender, MeanTable, SampleBox};
use std::fmt::Write;
use std::str::FromStr;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;
const FONT: &str = "font-family=\"sans-serif\"";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Scree,
    Cumulative,
    Biplot,
    Heatmap,
    Box,
    Swatch,
}

impl PlotKind {
    pub const ALL: [PlotKind; 6] = [
        PlotKind::Scree,
        PlotKind::Cumulative,
        PlotKind::Biplot,
        PlotKind::Heatmap,
        PlotKind::Box,
        PlotKind::Swatch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlotKind::Scree => "scree",
            PlotKind::Cumulative => "cumulative",
            PlotKind::Biplot => "biplot",
            PlotKind::Heatmap => "heatmap",
            PlotKind::Box => "box",
            PlotKind::Swatch => "swatch",
        }
    }
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| s.to_string())
    }
}

/// Rounds to four decimals and drops trailing zeros.
pub fn num(x: f64) -> String {
    let s = format!("{:.4}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
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

struct Canvas {
    buf: String,
}

impl Canvas {
    fn new(title: &str) -> Self {
        let mut buf = String::new();
        writeln!(
            buf,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
            w = num(WIDTH),
            h = num(HEIGHT)
        )
        .unwrap();
        writeln!(
            buf,
            "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>"
        )
        .unwrap();
        let mut c = Canvas { buf };
        c.text(WIDTH / 2.0, 30.0, title, "middle", 18.0, "black");
        c
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, extra: &str) {
        writeln!(
            self.buf,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\"{extra}/>",
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        )
        .unwrap();
    }

    fn text(&mut self, x: f64, y: f64, text: &str, anchor: &str, size: f64, fill: &str) {
        writeln!(
            self.buf,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" font-size=\"{}\" fill=\"{fill}\" {FONT}>{}</text>",
            num(x),
            num(y),
            num(size),
            escape(text)
        )
        .unwrap();
    }

    fn raw(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

/// Maps `[lo, hi]` onto `[a, b]`.
#[derive(Clone, Copy)]
struct Scale {
    lo: f64,
    hi: f64,
    a: f64,
    b: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, a: f64, b: f64) -> Self {
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, lo + 1.0)
        };
        Scale { lo, hi, a, b }
    }

    fn map(&self, v: f64) -> f64 {
        self.a + (v - self.lo) / (self.hi - self.lo) * (self.b - self.a)
    }
}

fn plot_box() -> (f64, f64, f64, f64) {
    (LEFT, TOP, WIDTH - RIGHT, HEIGHT - BOTTOM)
}

fn axes(c: &mut Canvas, x_label: &str, y_label: &str) {
    let (x0, y0, x1, y1) = plot_box();
    c.line(x0, y1, x1, y1, "black", "");
    c.line(x0, y0, x0, y1, "black", "");
    c.text(
        (x0 + x1) / 2.0,
        HEIGHT - 20.0,
        x_label,
        "middle",
        14.0,
        "black",
    );
    writeln!(
        c.buf,
        "<text x=\"20\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\" fill=\"black\" {FONT} transform=\"rotate(-90 20 {})\">{}</text>",
        num((y0 + y1) / 2.0),
        num((y0 + y1) / 2.0),
        escape(y_label)
    )
    .unwrap();
}

fn y_ticks(c: &mut Canvas, scale: Scale, ticks: &[f64], fmt: impl Fn(f64) -> String) {
    for &t in ticks {
        let y = scale.map(t);
        c.line(LEFT - 5.0, y, LEFT, y, "black", "");
        c.text(LEFT - 8.0, y + 4.0, &fmt(t), "end", 11.0, "black");
    }
}

/// Explained-variance ratio per component as bars.
pub fn scree_svg(result: &PcaResult) -> String {
    let mut c = Canvas::new("Explained Variance Ratio");
    axes(&mut c, "Principal component", "Explained variance ratio");
    let (x0, y0, x1, y1) = plot_box();
    let top = result.explained_ratio.iter().copied().fold(0.0, f64::max);
    let top = if top > 0.0 { top } else { 1.0 };
    let ys = Scale::new(0.0, top, y1, y0);
    y_ticks(
        &mut c,
        ys,
        &[0.0, top / 4.0, top / 2.0, 3.0 * top / 4.0, top],
        |t| format!("{:.0}%", t * 100.0),
    );
    let n = result.explained_ratio.len().max(1);
    let slot = (x1 - x0) / n as f64;
    let every = n.div_ceil(15);
    for (i, r) in result.explained_ratio.iter().enumerate() {
        let x = x0 + i as f64 * slot + slot * 0.1;
        let y = ys.map(*r);
        writeln!(
            c.buf,
            "<rect class=\"bar\" data-index=\"{i}\" data-value=\"{}\" data-eigenvalue=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"steelblue\"/>",
            num(*r),
            num(result.eigenvalues[i]),
            num(x),
            num(y),
            num(slot * 0.8),
            num(y1 - y)
        )
        .unwrap();
        if i % every == 0 {
            c.text(
                x + slot * 0.4,
                y1 + 16.0,
                &format!("PC{}", i + 1),
                "middle",
                10.0,
                "black",
            );
        }
    }
    c.finish()
}

/// Cumulative explained variance as a line with markers.
pub fn cumulative_svg(result: &PcaResult) -> String {
    let mut c = Canvas::new("Cumulative Variance");
    axes(
        &mut c,
        "Number of components",
        "Cumulative explained variance",
    );
    let (x0, y0, x1, y1) = plot_box();
    let ys = Scale::new(0.0, 1.0, y1, y0);
    y_ticks(&mut c, ys, &[0.0, 0.25, 0.5, 0.75, 1.0], |t| {
        format!("{:.0}%", t * 100.0)
    });
    let n = result.cumulative.len();
    let xs = Scale::new(1.0, n.max(2) as f64, x0 + 10.0, x1 - 10.0);
    let points: Vec<String> = result
        .cumulative
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{},{}", num(xs.map((i + 1) as f64)), num(ys.map(*v))))
        .collect();
    c.raw(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>",
        points.join(" ")
    ));
    let every = n.div_ceil(15);
    for (i, v) in result.cumulative.iter().enumerate() {
        let (x, y) = (xs.map((i + 1) as f64), ys.map(*v));
        writeln!(
            c.buf,
            "<circle class=\"step\" data-index=\"{i}\" data-value=\"{}\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"steelblue\"/>",
            num(*v),
            num(x),
            num(y)
        )
        .unwrap();
        if i % every == 0 {
            c.text(x, y1 + 16.0, &(i + 1).to_string(), "middle", 10.0, "black");
        }
    }
    c.finish()
}

/// Scores as grey points and variables as red labelled arrows. Arrows are
/// stretched by one common factor so they span the score cloud.
pub fn biplot_svg(data: &BiplotData, explained: (f64, f64)) -> String {
    let mut c = Canvas::new("PCA Biplot");
    let x_label = format!("PC{} ({:.1}%)", data.x_component + 1, explained.0 * 100.0);
    let y_label = format!("PC{} ({:.1}%)", data.y_component + 1, explained.1 * 100.0);
    axes(&mut c, &x_label, &y_label);
    let (x0, y0, x1, y1) = plot_box();

    let score_extent = data
        .points
        .iter()
        .fold(0.0_f64, |m, (x, y)| m.max(x.abs()).max(y.abs()));
    let arrow_extent = data
        .arrows
        .iter()
        .fold(0.0_f64, |m, a| m.max(a.x.abs()).max(a.y.abs()));
    let extent = if score_extent > 0.0 {
        score_extent
    } else {
        1.0
    };
    let stretch = if arrow_extent > 0.0 {
        0.9 * extent / arrow_extent
    } else {
        1.0
    };
    let lim = extent * 1.1;
    let xs = Scale::new(-lim, lim, x0, x1);
    let ys = Scale::new(-lim, lim, y1, y0);

    c.raw("<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 Z\" fill=\"red\"/></marker></defs>");
    c.line(
        xs.map(0.0),
        y0,
        xs.map(0.0),
        y1,
        "#cccccc",
        " stroke-dasharray=\"4 4\"",
    );
    c.line(
        x0,
        ys.map(0.0),
        x1,
        ys.map(0.0),
        "#cccccc",
        " stroke-dasharray=\"4 4\"",
    );
    for (i, (x, y)) in data.points.iter().enumerate() {
        writeln!(
            c.buf,
            "<circle class=\"point\" data-index=\"{i}\" cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"grey\" fill-opacity=\"0.8\"/>",
            num(xs.map(*x)),
            num(ys.map(*y))
        )
        .unwrap();
    }
    for a in &data.arrows {
        let (ex, ey) = (xs.map(a.x * stretch), ys.map(a.y * stretch));
        writeln!(
            c.buf,
            "<line class=\"arrow\" data-label=\"{}\" data-x=\"{}\" data-y=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"red\" stroke-width=\"1.2\" marker-end=\"url(#head)\"/>",
            escape(&a.label),
            num(a.x),
            num(a.y),
            num(xs.map(0.0)),
            num(ys.map(0.0)),
            num(ex),
            num(ey)
        )
        .unwrap();
        c.text(ex, ey - 4.0, &a.label, "middle", 9.0, "red");
    }
    c.finish()
}

fn heat_color(v: f64) -> String {
    // white at 1, dark blue at 5
    let t = ((v - 1.0) / 4.0).clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(247.0, 8.0),
        lerp(251.0, 48.0),
        lerp(255.0, 107.0)
    )
}

/// Mean rating per sample (rows) and word (columns).
pub fn heatmap_svg(table: &MeanTable) -> String {
    let mut c = Canvas::new("Average Ratings across Product Samples and Kansei Words");
    let (x0, y0, x1, y1) = (110.0, 80.0, WIDTH - 40.0, HEIGHT - 60.0);
    let cw = (x1 - x0) / table.words.len().max(1) as f64;
    let ch = (y1 - y0) / table.samples.len().max(1) as f64;
    for (w, word) in table.words.iter().enumerate() {
        c.text(
            x0 + (w as f64 + 0.5) * cw,
            y0 - 10.0,
            word,
            "middle",
            12.0,
            "black",
        );
    }
    for (s, sample) in table.samples.iter().enumerate() {
        let y = y0 + s as f64 * ch;
        c.text(x0 - 10.0, y + ch / 2.0 + 4.0, sample, "end", 12.0, "black");
        for (w, word) in table.words.iter().enumerate() {
            let v = table.get(s, w);
            let x = x0 + w as f64 * cw;
            writeln!(
                c.buf,
                "<rect class=\"cell\" data-sample=\"{}\" data-word=\"{}\" data-mean=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"white\"><title>{} {}: {}</title></rect>",
                escape(sample),
                escape(word),
                num(v),
                num(x),
                num(y),
                num(cw),
                num(ch),
                heat_color(v),
                escape(sample),
                escape(word),
                num(v)
            )
            .unwrap();
            let ink = if v > 3.2 { "white" } else { "black" };
            c.text(
                x + cw / 2.0,
                y + ch / 2.0 + 4.0,
                &format!("{v:.2}"),
                "middle",
                12.0,
                ink,
            );
        }
    }
    c.finish()
}

fn gender_color(g: Gender) -> &'static str {
    match g {
        Gender::Male => "#4c72b0",
        Gender::Female => "#dd8452",
        Gender::Unspecified => "#55a868",
    }
}

/// One box per `(sample, gender)`, grouped by sample.
pub fn box_svg(word: &str, boxes: &[SampleBox]) -> String {
    let mut c = Canvas::new(&format!("Ratings of \"{word}\" by Gender"));
    axes(&mut c, "Product sample", "Rating");
    let (x0, y0, x1, y1) = plot_box();
    let ys = Scale::new(0.5, 5.5, y1, y0);
    y_ticks(&mut c, ys, &[1.0, 2.0, 3.0, 4.0, 5.0], num);

    let mut samples: Vec<&str> = Vec::new();
    let mut genders: Vec<Gender> = Vec::new();
    for b in boxes {
        if !samples.contains(&b.sample.as_str()) {
            samples.push(&b.sample);
        }
        if !genders.contains(&b.gender) {
            genders.push(b.gender);
        }
    }
    genders.sort();
    let slot = (x1 - x0) / samples.len().max(1) as f64;
    let bw = slot * 0.7 / genders.len().max(1) as f64;
    for (si, sample) in samples.iter().enumerate() {
        c.text(
            x0 + (si as f64 + 0.5) * slot,
            y1 + 16.0,
            sample,
            "middle",
            11.0,
            "black",
        );
    }
    for b in boxes {
        let si = samples.iter().position(|s| *s == b.sample).unwrap_or(0);
        let gi = genders.iter().position(|g| *g == b.gender).unwrap_or(0);
        let left = x0 + si as f64 * slot + slot * 0.15 + gi as f64 * bw;
        let mid = left + bw / 2.0;
        let s = &b.stats;
        let color = gender_color(b.gender);
        writeln!(
            c.buf,
            "<g class=\"box\" data-sample=\"{}\" data-gender=\"{}\" data-median=\"{}\" data-q1=\"{}\" data-q3=\"{}\" data-count=\"{}\">",
            escape(&b.sample),
            b.gender,
            num(s.median),
            num(s.q1),
            num(s.q3),
            s.count
        )
        .unwrap();
        c.line(mid, ys.map(s.lower_whisker), mid, ys.map(s.q1), "black", "");
        c.line(mid, ys.map(s.q3), mid, ys.map(s.upper_whisker), "black", "");
        c.line(
            left + bw * 0.25,
            ys.map(s.lower_whisker),
            left + bw * 0.75,
            ys.map(s.lower_whisker),
            "black",
            "",
        );
        c.line(
            left + bw * 0.25,
            ys.map(s.upper_whisker),
            left + bw * 0.75,
            ys.map(s.upper_whisker),
            "black",
            "",
        );
        let top = ys.map(s.q3);
        writeln!(
            c.buf,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{color}\" fill-opacity=\"0.7\" stroke=\"black\"/>",
            num(left + bw * 0.05),
            num(top),
            num(bw * 0.9),
            num(ys.map(s.q1) - top)
        )
        .unwrap();
        c.line(
            left + bw * 0.05,
            ys.map(s.median),
            left + bw * 0.95,
            ys.map(s.median),
            "black",
            " stroke-width=\"2\"",
        );
        for o in &s.outliers {
            writeln!(
                c.buf,
                "<circle class=\"outlier\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>",
                num(mid),
                num(ys.map(*o))
            )
            .unwrap();
        }
        c.raw("</g>");
    }
    for (gi, g) in genders.iter().enumerate() {
        let x = x1 - 110.0;
        let y = y0 + 5.0 + gi as f64 * 18.0;
        writeln!(
            c.buf,
            "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>",
            num(x),
            num(y),
            gender_color(*g)
        )
        .unwrap();
        c.text(x + 18.0, y + 10.0, &g.to_string(), "start", 11.0, "black");
    }
    c.finish()
}

/// Candidate colors as labelled squares in rank order.
pub fn swatch_svg(ranking: &ColorRanking) -> String {
    let mut c = Canvas::new("Kansei Colors by Votes");
    let cols = 3usize;
    let (cell_w, cell_h) = (240.0, 160.0);
    let x_start = (WIDTH - cols as f64 * cell_w) / 2.0;
    for (i, entry) in ranking.entries.iter().enumerate() {
        let x = x_start + (i % cols) as f64 * cell_w;
        let y = 60.0 + (i / cols) as f64 * cell_h;
        let b = &entry.ballot;
        writeln!(
            c.buf,
            "<rect class=\"swatch\" data-name=\"{}\" data-votes=\"{}\" data-rank=\"{}\" x=\"{}\" y=\"{}\" width=\"90\" height=\"90\" fill=\"{}\" stroke=\"black\"/>",
            escape(&b.name),
            b.votes,
            entry.rank,
            num(x + 20.0),
            num(y + 10.0),
            b.hex()
        )
        .unwrap();
        c.text(x + 120.0, y + 40.0, &b.name, "start", 13.0, "black");
        c.text(
            x + 120.0,
            y + 60.0,
            &format!("rgb({}, {}, {})", b.rgb[0], b.rgb[1], b.rgb[2]),
            "start",
            11.0,
            "#444444",
        );
        c.text(
            x + 120.0,
            y + 80.0,
            &format!("#{} · {} votes", entry.rank, b.votes),
            "start",
            11.0,
            "#444444",
        );
    }
    c.finish()
}
