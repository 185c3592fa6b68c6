//! Static SVG chart of a per-image score-difference series.

use std::fmt::Write;

use super::DeltaSeries;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 320.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Image index on x, difference on y, a dashed line at the mean and a
/// solid line at zero.
pub fn delta_plot(series: &DeltaSeries) -> String {
    let values: Vec<f64> = series.deltas.iter().map(|&d| if d.is_finite() { d } else { 0.0 }).collect();
    let mean = series.mean();
    let mean = if mean.is_finite() { mean } else { 0.0 };
    let mut lo = values.iter().copied().fold(0.0f64, f64::min).min(mean);
    let mut hi = values.iter().copied().fold(0.0f64, f64::max).max(mean);
    if hi - lo < 1e-12 {
        lo -= 1.0;
        hi += 1.0;
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let n = values.len().max(1);
    let x_of = |i: usize| LEFT + plot_w * (i as f64 + 0.5) / n as f64;
    let y_of = |v: f64| TOP + plot_h * (hi - v) / (hi - lo);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{} - uso: {} difference (mean {:.4})</text>"#,
        WIDTH / 2.0,
        series.method,
        series.metric,
        mean
    );
    let _ =
        writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#);
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let y = y_of(v);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{:.3}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            v
        );
    }
    let zero = y_of(0.0);
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT}" y1="{zero:.1}" x2="{:.1}" y2="{zero:.1}" stroke="#888" stroke-width="1"/>"##,
        LEFT + plot_w
    );
    let points: Vec<String> =
        values.iter().enumerate().map(|(i, &v)| format!("{:.1},{:.1}", x_of(i), y_of(v))).collect();
    if !points.is_empty() {
        let _ =
            writeln!(s, r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="1"/>"##, points.join(" "));
    }
    for (i, &v) in values.iter().enumerate() {
        let _ = writeln!(s, r##"<circle cx="{:.1}" cy="{:.1}" r="3" fill="#1f77b4"/>"##, x_of(i), y_of(v));
    }
    let m = y_of(mean);
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT}" y1="{m:.1}" x2="{:.1}" y2="{m:.1}" stroke="#d62728" stroke-width="1.5" stroke-dasharray="6,4"/>"##,
        LEFT + plot_w
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">image index</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    for i in 0..values.len() {
        if values.len() <= 30 || i % 5 == 0 {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
                x_of(i),
                TOP + plot_h + 14.0,
                i + 1
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::Method;

    #[test]
    fn plot_contains_points_and_mean_line() {
        let series = DeltaSeries {
            method: Method::FrmExhaustive,
            metric: "ssim",
            images: vec!["a".into(), "b".into(), "c".into()],
            deltas: vec![0.1, -0.05, 0.2],
        };
        let svg = delta_plot(&series);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
