//! Minimal self-contained SVG line charts of regret CSVs: log-scaled x axis,
//! one polyline per input with a ±1 std band, optional log-scaled y axis.

use std::fmt::Write;
use std::path::Path;

use super::output::{parse_trace_csv, CsvRow};
use crate::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const LEGEND_W: f64 = 180.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

#[derive(Debug, Clone, Default)]
pub struct PlotOptions {
    pub log_y: bool,
    pub title: Option<String>,
}

struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn new(lo: f64, hi: f64, log: bool, px_lo: f64, px_hi: f64) -> Self {
        let (lo, mut hi) = if log { (lo.log10(), hi.log10()) } else { (lo, hi) };
        if hi <= lo {
            hi = lo + 1.0;
        }
        Self { lo, hi, log, px_lo, px_hi }
    }

    fn map(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders labelled series into an SVG document.
pub fn render_svg(series: &[(String, Vec<CsvRow>)], opts: &PlotOptions) -> String {
    let floor = |v: f64| if opts.log_y { v.max(1e-3) } else { v };
    let t_max = series.iter().flat_map(|(_, r)| r.iter().map(|p| p.t)).max().unwrap_or(1).max(2) as f64;
    let y_max = series
        .iter()
        .flat_map(|(_, r)| r.iter().map(|p| p.mean + p.std))
        .fold(f64::MIN_POSITIVE, f64::max);
    let y_min = if opts.log_y {
        series
            .iter()
            .flat_map(|(_, r)| r.iter().map(|p| floor(p.mean - p.std)))
            .fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    let plot_right = WIDTH - LEGEND_W;
    let x = Scale::new(1.0, t_max, true, MARGIN, plot_right);
    let y = Scale::new(y_min.min(y_max), y_max, opts.log_y, HEIGHT - MARGIN, MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(title) = &opts.title {
        let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle">{}</text>"#, plot_right / 2.0, escape(title));
    }
    let (bottom, top) = (HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(svg, r#"<line x1="{MARGIN}" y1="{bottom}" x2="{plot_right}" y2="{bottom}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{MARGIN}" y1="{bottom}" x2="{MARGIN}" y2="{top}" stroke="black"/>"#);
    let mut decade = 1.0;
    while decade <= t_max {
        let px = x.map(decade);
        let _ = writeln!(svg, r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{}" stroke="black"/>"#, bottom + 5.0);
        let _ = writeln!(svg, r#"<text x="{px:.2}" y="{}" text-anchor="middle">{decade:e}</text>"#, bottom + 18.0);
        decade *= 10.0;
    }
    for k in 0..=4 {
        let v = if opts.log_y {
            10f64.powf(y.lo + (y.hi - y.lo) * k as f64 / 4.0)
        } else {
            y.lo + (y.hi - y.lo) * k as f64 / 4.0
        };
        let py = y.map(v);
        let _ = writeln!(svg, r#"<text x="{}" y="{py:.2}" text-anchor="end">{}</text>"#, MARGIN - 6.0, super::format_sig(v, 3));
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">t</text>"#, plot_right / 2.0 + MARGIN / 2.0, HEIGHT - 15.0);
    let _ = writeln!(svg, r#"<text x="15" y="{}" transform="rotate(-90 15 {0})" text-anchor="middle">group regret</text>"#, HEIGHT / 2.0);

    for (idx, (label, rows)) in series.iter().enumerate() {
        let colour = PALETTE[idx % PALETTE.len()];
        let upper: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", x.map(r.t as f64), y.map(floor(r.mean + r.std))))
            .collect();
        let lower: Vec<String> = rows
            .iter()
            .rev()
            .map(|r| format!("{:.2},{:.2}", x.map(r.t as f64), y.map(floor(r.mean - r.std))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polygon points="{} {}" fill="{colour}" fill-opacity="0.2" stroke="none"/>"#,
            upper.join(" "),
            lower.join(" ")
        );
        let line: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", x.map(r.t as f64), y.map(floor(r.mean))))
            .collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#, line.join(" "));
        let ly = MARGIN + 20.0 * idx as f64;
        let lx = plot_right + 15.0;
        let _ = writeln!(
            svg,
            r#"<g class="legend"><rect x="{lx}" y="{}" width="14" height="4" fill="{colour}"/><text x="{}" y="{ly}">{}</text></g>"#,
            ly - 6.0,
            lx + 20.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Reads regret CSVs and writes the chart to `out`. Legend labels are the
/// file stems, in input order.
pub fn emit_plot(out: impl AsRef<Path>, inputs: &[impl AsRef<Path>], opts: &PlotOptions) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::Config("plot needs at least one CSV".into()));
    }
    let mut series = Vec::new();
    for path in inputs {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let rows = parse_trace_csv(&text)?;
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        series.push((label, rows));
    }
    let out = out.as_ref();
    std::fs::write(out, render_svg(&series, opts)).map_err(|e| Error::io(out, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(n: u64) -> Vec<CsvRow> {
        (1..=n)
            .map(|i| CsvRow {
                t: 10u64.pow(i as u32 - 1),
                mean: i as f64,
                std: 0.5,
                runs: 3,
            })
            .collect()
    }

    #[test]
    fn one_series_one_polyline() {
        let svg = render_svg(&[("a".into(), rows(3))], &PlotOptions::default());
        assert_eq!(svg.matches("<polyline").count(), 1);
        let start = svg.find("<polyline points=\"").unwrap() + 18;
        let pts = &svg[start..start + svg[start..].find('"').unwrap()];
        assert_eq!(pts.split(' ').count(), 3);
    }

    #[test]
    fn legend_follows_input_order() {
        let series: Vec<_> = ["d", "c", "b", "a"].iter().map(|s| (s.to_string(), rows(2))).collect();
        let svg = render_svg(&series, &PlotOptions { log_y: true, title: None });
        assert_eq!(svg.matches("class=\"legend\"").count(), 4);
        let pos: Vec<usize> = ["d</text>", "c</text>", "b</text>", "a</text>"].iter().map(|s| svg.find(s).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }
}
