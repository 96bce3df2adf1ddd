//! Minimal SVG line and scatter charts.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 55.0); // left, right, top, bottom

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    /// Markers only, no connecting line.
    pub scatter: bool,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn axis(v: f64, log: bool) -> f64 {
    if log {
        v.log10()
    } else {
        v
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

impl Chart {
    pub fn render(&self) -> String {
        let usable = |x: f64, y: f64| (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0) && x.is_finite() && y.is_finite();
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .filter(|&(x, y)| usable(x, y))
            .map(|(x, y)| (axis(x, self.log_x), axis(y, self.log_y)))
            .collect();
        let (x0, x1) = bounds(pts.iter().map(|p| p.0));
        let (y0, y1) = bounds(pts.iter().map(|p| p.1));
        let (ml, mr, mt, mb) = MARGIN;
        let sx = |v: f64| ml + (v - x0) / (x1 - x0) * (WIDTH - ml - mr);
        let sy = |v: f64| HEIGHT - mb - (v - y0) / (y1 - y0) * (HEIGHT - mt - mb);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&self.title));
        let _ = writeln!(
            s,
            r#"<rect x="{ml}" y="{mt}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - ml - mr,
            HEIGHT - mt - mb
        );
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let label = |v: f64, log: bool| if log { format!("{:.3}", 10f64.powf(v)) } else { format!("{v:.3}") };
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                sx(xv),
                HEIGHT - mb + 16.0,
                label(xv, self.log_x)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                ml - 6.0,
                sy(yv) + 4.0,
                label(yv, self.log_y)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            ml + (WIDTH - ml - mr) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            mt + (HEIGHT - mt - mb) / 2.0,
            escape(&self.y_label)
        );
        for (i, series) in self.series.iter().enumerate() {
            let mapped: Vec<(f64, f64)> = series
                .points
                .iter()
                .filter(|&&(x, y)| usable(x, y))
                .map(|&(x, y)| (sx(axis(x, self.log_x)), sy(axis(y, self.log_y))))
                .collect();
            if !series.scatter && mapped.len() > 1 {
                let path: Vec<String> = mapped.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                    path.join(" "),
                    series.color
                );
            }
            for (x, y) in &mapped {
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{}"/>"#, series.color);
            }
            let ly = mt + 16.0 + 16.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{ly}" fill="{}">{}</text>"#,
                ml + 10.0,
                series.color,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_points_and_skips_nonpositive_on_log_axes() {
        let chart = Chart {
            title: "t<1>".into(),
            x_label: "h".into(),
            y_label: "s".into(),
            log_x: true,
            log_y: true,
            series: vec![Series {
                label: "data".into(),
                points: vec![(0.5, 1.0), (0.25, 0.5), (0.0, 1.0)],
                color: "black",
                scatter: false,
            }],
        };
        let svg = chart.render();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("t&lt;1&gt;"));
    }

    #[test]
    fn empty_chart_still_renders() {
        let chart = Chart {
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            log_x: false,
            log_y: false,
            series: Vec::new(),
        };
        assert!(chart.render().contains("</svg>"));
    }
}
