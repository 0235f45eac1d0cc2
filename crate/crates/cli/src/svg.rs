//! Minimal SVG plots: axes, scatter series and straight fitted lines, on
//! linear or log-log axes.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Optional `(slope, intercept)` of a line drawn in plot coordinates.
    pub fit: Option<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_log: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Plot {
    fn transform(&self, (x, y): (f64, f64)) -> Option<(f64, f64)> {
        if self.log_log {
            (x > 0.0 && y > 0.0).then(|| (x.ln(), y.ln()))
        } else {
            Some((x, y))
        }
    }

    pub fn render(&self) -> String {
        let pts: Vec<(f64, f64)> =
            self.series.iter().flat_map(|s| s.points.iter().filter_map(|&p| self.transform(p))).collect();
        let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
        );
        if pts.is_empty() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 - x0 < 1e-12 {
            (x0, x1) = (x0 - 0.5, x1 + 0.5);
        }
        if y1 - y0 < 1e-12 {
            (y0, y1) = (y0 - 0.5, y1 + 0.5);
        }
        let pad = 0.05 * (y1 - y0);
        let (y0, y1) = (y0 - pad, y1 + pad);
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
        let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

        let mut out = String::new();
        writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#).unwrap();
        writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(&self.title)).unwrap();
        let (l, r, t, b) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
        writeln!(out, r#"<path d="M{l} {t} L{l} {b} L{r} {b}" stroke="black" fill="none"/>"#).unwrap();
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let (xl, yl) = if self.log_log { (xv.exp(), yv.exp()) } else { (xv, yv) };
            writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, sx(xv), b + 16.0, tick(xl)).unwrap();
            writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, l - 6.0, sy(yv) + 4.0, tick(yl)).unwrap();
        }
        let scale = if self.log_log { " (log)" } else { "" };
        writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}{scale}</text>"#, W / 2.0, H - 16.0, escape(&self.x_label)).unwrap();
        writeln!(out, r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}{scale}</text>"#, H / 2.0, H / 2.0, escape(&self.y_label)).unwrap();

        for (i, s) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            for p in s.points.iter().filter_map(|&p| self.transform(p)) {
                writeln!(out, r#"<circle cx="{:.1}" cy="{:.1}" r="3.5" fill="{color}"/>"#, sx(p.0), sy(p.1)).unwrap();
            }
            if let Some((slope, icpt)) = s.fit {
                let (ya, yb) = (icpt + slope * x0, icpt + slope * x1);
                writeln!(out, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-dasharray="5,3"/>"#, sx(x0), sy(ya), sx(x1), sy(yb)).unwrap();
            }
            let ly = t + 4.0 + 16.0 * i as f64;
            writeln!(out, r#"<circle cx="{}" cy="{ly}" r="4" fill="{color}"/>"#, r - 150.0).unwrap();
            writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, r - 140.0, ly + 4.0, escape(&s.label)).unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_points_and_line() {
        let p = Plot {
            title: "a < b".into(),
            x_label: "n".into(),
            y_label: "v".into(),
            log_log: true,
            series: vec![Series { label: "s".into(), points: vec![(1.0, 1.0), (4.0, 2.0), (0.0, 3.0)], fit: Some((0.5, 0.0)) }],
        };
        let svg = p.render();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 3); // two points plus legend
        assert!(svg.contains("<line"));
        assert!(svg.contains("a &lt; b"));
    }
}
