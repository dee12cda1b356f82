//! Minimal static SVG plots: multi-panel time series and filled 2-D
//! regions.

use std::fmt::Write as _;

const PALETTE: [&str; 6] = ["#d9537a", "#4fa3d9", "#5cb85c", "#f0ad4e", "#8e6cc0", "#777777"];

pub fn color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Rounded axis bounds with a little padding; degenerate ranges are widened.
fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        let pad = 1e-3 * (1.0 + lo.abs());
        lo -= pad;
        hi += pad;
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

struct Frame {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    xr: (f64, f64),
    yr: (f64, f64),
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        self.x + (v - self.xr.0) / (self.xr.1 - self.xr.0) * self.w
    }

    fn py(&self, v: f64) -> f64 {
        self.y + self.h - (v - self.yr.0) / (self.yr.1 - self.yr.0) * self.h
    }

    fn axes(&self, out: &mut String, xlabel: &str, ylabel: &str) {
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333" stroke-width="0.8"/>"##,
            self.x, self.y, self.w, self.h
        );
        let small = r##"font-size="9" fill="#333" font-family="sans-serif""##;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" {small}>{:.3e}</text><text x="{:.2}" y="{:.2}" text-anchor="end" {small}>{:.3e}</text>"#,
            self.x,
            self.y + self.h + 11.0,
            self.xr.0,
            self.x + self.w,
            self.y + self.h + 11.0,
            self.xr.1
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" {small}>{:.3e}</text><text x="{:.2}" y="{:.2}" text-anchor="end" {small}>{:.3e}</text>"#,
            self.x - 3.0,
            self.y + self.h,
            self.yr.0,
            self.x - 3.0,
            self.y + 8.0,
            self.yr.1
        );
        let label = r##"font-size="11" fill="#111" font-family="sans-serif""##;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" {label}>{}</text>"#,
            self.x + self.w / 2.0,
            self.y + self.h + 24.0,
            escape(xlabel)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" {label}>{}</text>"#,
            self.x + self.w / 2.0,
            self.y - 5.0,
            escape(ylabel)
        );
    }

    fn polyline(&self, out: &mut String, pts: &[(f64, f64)], stroke: &str) {
        let mut d = String::with_capacity(pts.len() * 16);
        for (x, y) in pts {
            let _ = write!(d, "{:.2},{:.2} ", self.px(*x), self.py(*y));
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1"/>"#,
            d.trim_end()
        );
    }
}

/// Grid of small line plots sharing the x variable; `panels` holds
/// `(title, points)`. At most `max_points` points are drawn per panel.
pub fn time_series(title: &str, xlabel: &str, panels: &[(String, Vec<(f64, f64)>)], max_points: usize) -> String {
    let cols = 4usize;
    let rows = panels.len().div_ceil(cols).max(1);
    let (pw, ph) = (220.0, 140.0);
    let (mx, my) = (70.0, 45.0);
    let width = cols as f64 * (pw + mx) + 20.0;
    let height = rows as f64 * (ph + my) + 50.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="15" font-family="sans-serif">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    for (k, (name, pts)) in panels.iter().enumerate() {
        let stride = pts.len().div_ceil(max_points.max(2)).max(1);
        let mut shown: Vec<(f64, f64)> = pts.iter().step_by(stride).copied().collect();
        if let (Some(last), Some(end)) = (shown.last(), pts.last()) {
            if last != end {
                shown.push(*end);
            }
        }
        let frame = Frame {
            x: mx + (k % cols) as f64 * (pw + mx),
            y: 50.0 + (k / cols) as f64 * (ph + my),
            w: pw,
            h: ph,
            xr: bounds(pts.iter().map(|p| p.0)),
            yr: bounds(pts.iter().map(|p| p.1)),
        };
        frame.axes(&mut out, xlabel, name);
        frame.polyline(&mut out, &shown, color(1));
    }
    out.push_str("</svg>\n");
    out
}

/// Filled closed curves on one set of axes, drawn in order with
/// transparency, plus a legend.
pub fn regions(title: &str, xlabel: &str, ylabel: &str, curves: &[(String, Vec<[f64; 2]>)]) -> String {
    let (w, h) = (420.0, 420.0);
    let (x0, y0) = (80.0, 50.0);
    let all = || curves.iter().flat_map(|(_, c)| c.iter());
    let xr = bounds(all().map(|p| p[0]));
    let yr = bounds(all().map(|p| p[1]));
    let frame = Frame {
        x: x0,
        y: y0,
        w,
        h,
        xr,
        yr,
    };
    let total_w = x0 + w + 170.0;
    let total_h = y0 + h + 50.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w:.0}" height="{total_h:.0}" viewBox="0 0 {total_w:.0} {total_h:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14" font-family="sans-serif">{}</text>"#,
        x0 + w / 2.0,
        escape(title)
    );
    for (k, (name, pts)) in curves.iter().enumerate() {
        let mut d = String::new();
        for p in pts {
            let _ = write!(d, "{:.2},{:.2} ", frame.px(p[0]), frame.py(p[1]));
        }
        let c = color(k);
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{c}" fill-opacity="0.45" stroke="{c}" stroke-width="1.2"/>"#,
            d.trim_end()
        );
        let ly = y0 + 15.0 + 18.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{:.1}" y="{:.1}" width="12" height="12" fill="{c}" fill-opacity="0.6"/><text x="{:.1}" y="{:.1}" font-size="11" font-family="sans-serif">{}</text>"#,
            x0 + w + 15.0,
            ly - 10.0,
            x0 + w + 32.0,
            ly,
            escape(name)
        );
    }
    frame.axes(&mut out, xlabel, ylabel);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_series_has_one_polyline_per_panel() {
        let panels: Vec<(String, Vec<(f64, f64)>)> = (0..13)
            .map(|k| (format!("s{k}"), (0..100).map(|i| (i as f64, (i * k) as f64)).collect()))
            .collect();
        let svg = time_series("t", "t [s]", &panels, 50);
        assert_eq!(svg.matches("<polyline").count(), 13);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn regions_escape_labels() {
        let circle: Vec<[f64; 2]> = (0..8).map(|k| [(k as f64).cos(), (k as f64).sin()]).collect();
        let svg = regions("a<b", "x", "y", &[("l=2.3 & more".into(), circle)]);
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("&amp; more"));
        assert_eq!(svg.matches("<polygon").count(), 1);
    }

    #[test]
    fn constant_series_does_not_divide_by_zero() {
        let svg = time_series("c", "t", &[("z".into(), vec![(0.0, 10.0), (1.0, 10.0)])], 10);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
