//! Two-dimensional boxplot drawings as SVG 1.1.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

/// Curve groups in drawing order, with their stroke colors.
pub const GROUPS: [(&str, &str); 5] = [
    ("extreme1", "red"),
    ("q1", "blue"),
    ("median", "black"),
    ("q3", "green"),
    ("extreme3", "magenta"),
];

/// Curves for one boxplot, keyed like [`GROUPS`]. Missing curves leave their
/// group empty.
#[derive(Debug, Clone, Default)]
pub struct Curves<'a> {
    pub extreme1: Option<&'a [f64]>,
    pub q1: Option<&'a [f64]>,
    pub median: Option<&'a [f64]>,
    pub q3: Option<&'a [f64]>,
    pub extreme3: Option<&'a [f64]>,
}

impl<'a> Curves<'a> {
    fn by_group(&self) -> [Option<&'a [f64]>; 5] {
        [self.extreme1, self.q1, self.median, self.q3, self.extreme3]
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Draws `curves` against `x` (in [0, 1]); `x_span` labels the axis ends.
pub fn render(title: &str, x: &[f64], x_span: [f64; 2], curves: &Curves) -> String {
    let present: Vec<&[f64]> = curves.by_group().into_iter().flatten().collect();
    let (mut lo, mut hi) = present
        .iter()
        .flat_map(|c| c.iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo, hi) = (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    let (lo, hi) = (lo - pad, hi + pad);
    let px = |t: f64| MARGIN + t * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(s, r#"  <rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"  <rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="gray" stroke-width="1"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"  <text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{}</text>"#,
            escape(&text)
        );
    };
    label(&mut s, WIDTH / 2.0, MARGIN / 2.0, "middle", title.to_string());
    label(&mut s, px(0.0), HEIGHT - MARGIN / 2.0, "start", format!("{}", x_span[0]));
    label(&mut s, px(1.0), HEIGHT - MARGIN / 2.0, "end", format!("{}", x_span[1]));
    label(&mut s, MARGIN - 4.0, py(hi - pad), "end", format!("{:.3}", hi - pad));
    label(&mut s, MARGIN - 4.0, py(lo + pad), "end", format!("{:.3}", lo + pad));

    for ((name, color), curve) in GROUPS.iter().zip(curves.by_group()) {
        let _ = writeln!(s, r#"  <g id="{name}" stroke="{color}" fill="none" stroke-width="2">"#);
        if let Some(c) = curve {
            let mut pts = String::new();
            for (t, v) in x.iter().zip(c) {
                let _ = write!(pts, "{:.2},{:.2} ", px(*t), py(*v));
            }
            let _ = writeln!(s, r#"    <polyline points="{}"/>"#, pts.trim_end());
        }
        let _ = writeln!(s, "  </g>");
    }
    let _ = writeln!(s, "</svg>");
    s
}
