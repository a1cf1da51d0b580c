//! Static SVG line charts from tidy CSV.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    pub y: String,
    /// Column whose values split the rows into separate lines.
    pub series: Option<String>,
    pub title: Option<String>,
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::input(format!("column {name:?} not found")))
}

/// Extracts `(series, x, y)` points, skipping rows whose x or y is empty or
/// not numeric. `true`/`false` are read as 1/0.
pub fn read_points(csv_text: &str, spec: &PlotSpec) -> Result<BTreeMap<String, Vec<(f64, f64)>>> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = reader.headers()?.clone();
    let xi = column(&headers, &spec.x)?;
    let yi = column(&headers, &spec.y)?;
    let si = spec.series.as_deref().map(|s| column(&headers, s)).transpose()?;
    let parse = |s: &str| match s {
        "true" => Some(1.0),
        "false" => Some(0.0),
        _ => s.parse::<f64>().ok().filter(|v| v.is_finite()),
    };
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for row in reader.records() {
        let row = row?;
        let (Some(x), Some(y)) = (parse(&row[xi]), parse(&row[yi])) else {
            continue;
        };
        let key = si.map_or_else(String::new, |i| row[i].to_string());
        series.entry(key).or_default().push((x, y));
    }
    for points in series.values_mut() {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    Ok(series)
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_svg(csv_text: &str, spec: &PlotSpec) -> Result<String> {
    let series = read_points(csv_text, spec)?;
    let all = || series.values().flatten();
    let (x0, x1) = padded_range(all().map(|p| p.0));
    let (y0, y1) = padded_range(all().map(|p| p.1));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(title) = &spec.title {
        let _ = writeln!(svg, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    }
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(svg, r#"<path d="M{left},{top} V{bottom} H{right}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let t = f64::from(i) / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(svg, r#"<line x1="{px:.1}" y1="{bottom}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#, bottom + 4.0);
        let _ = writeln!(svg, r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, bottom + 16.0, tick(xv));
        let _ = writeln!(svg, r#"<line x1="{:.1}" y1="{py:.1}" x2="{left}" y2="{py:.1}" stroke="black"/>"#, left - 4.0);
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, left - 6.0, py + 4.0, tick(yv));
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 12.0, escape(&spec.x));
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&spec.y)
    );

    for (i, (name, points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = points.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, path.join(" "));
        for &(x, y) in points {
            let _ = writeln!(svg, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{color}"/>"#, sx(x), sy(y));
        }
        if !name.is_empty() {
            let ly = top + 14.0 * i as f64;
            let _ = writeln!(svg, r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{}</text>"#, right - 90.0, escape(name));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DATA: &str = "k,rate,model\n10,0.5,a\n12,0.7,a\n10,0.2,b\n12,,b\n14,0.9,a\n";

    fn spec(series: Option<&str>) -> PlotSpec {
        PlotSpec { x: "k".into(), y: "rate".into(), series: series.map(String::from), title: Some("rates".into()) }
    }

    #[test]
    fn groups_and_sorts_points() {
        let pts = read_points(DATA, &spec(Some("model"))).unwrap();
        assert_eq!(pts["a"], vec![(10.0, 0.5), (12.0, 0.7), (14.0, 0.9)]);
        assert_eq!(pts["b"], vec![(10.0, 0.2)]);
        assert_eq!(read_points(DATA, &spec(None)).unwrap()[""].len(), 4);
    }

    #[test]
    fn renders_one_polyline_per_series() {
        let svg = render_svg(DATA, &spec(Some("model"))).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">rates<"));
    }

    #[test]
    fn unknown_column_is_an_error() {
        let bad = PlotSpec { x: "nope".into(), ..spec(None) };
        assert!(render_svg(DATA, &bad).is_err());
    }

    #[test]
    fn empty_data_still_renders() {
        let svg = render_svg("k,rate\n", &spec(None)).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 0);
    }
}
