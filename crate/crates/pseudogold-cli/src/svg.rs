//! Minimal hand-emitted SVG line plot: axes, ticks, one polyline per error
//! series, and the regression line. No plotting stack required to reproduce
//! the output.

use std::fmt::Write;

pub struct Series<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot<'a> {
    pub series: Vec<Series<'a>>,
    /// (slope, intercept) of the regression drawn across the x-range.
    pub fit: Option<(f64, f64)>,
    pub x_label: &'a str,
    pub y_label: &'a str,
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 20.0;
const MB: f64 = 50.0;

pub fn render(plot: &Plot) -> String {
    let xs: Vec<f64> = plot.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
    let ys: Vec<f64> = plot.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).collect();
    let (x0, x1) = bounds(&xs);
    let (y0, y1) = bounds(&ys);
    let px = |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let py = |y: f64| MT + (y1 - y) / (y1 - y0) * (H - MT - MB);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>"
    );
    // axes
    let _ = writeln!(
        out,
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB
    );
    let _ = writeln!(
        out,
        "<line x1=\"{ML}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"black\"/>",
        H - MB,
        W - MR
    );
    // x ticks at integers, thinned to at most ~12 labels
    let step = (((x1 - x0) / 12.0).ceil() as i64).max(1);
    let mut m = x0.ceil() as i64;
    while m as f64 <= x1 {
        let x = px(m as f64);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{0}\" x2=\"{x:.2}\" y2=\"{1}\" stroke=\"black\"/>",
            H - MB,
            H - MB + 5.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{m}</text>",
            H - MB + 20.0
        );
        m += step;
    }
    // y ticks: six evenly spaced
    for k in 0..=5 {
        let y = y0 + (y1 - y0) * k as f64 / 5.0;
        let yp = py(y);
        let _ = writeln!(
            out,
            "<line x1=\"{0}\" y1=\"{yp:.2}\" x2=\"{ML}\" y2=\"{yp:.2}\" stroke=\"black\"/>",
            ML - 5.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{0}\" y=\"{1:.2}\" font-size=\"12\" text-anchor=\"end\">{y:.1}</text>",
            ML - 8.0,
            yp + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        (ML + W - MR) / 2.0,
        H - 10.0,
        plot.x_label
    );
    let _ = writeln!(
        out,
        "<text x=\"15\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 {})\">{}</text>",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        plot.y_label
    );

    if let Some((slope, intercept)) = plot.fit {
        let (ya, yb) = (slope * x0 + intercept, slope * x1 + intercept);
        let _ = writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>",
            px(x0),
            py(ya.clamp(y0, y1)),
            px(x1),
            py(yb.clamp(y0, y1))
        );
    }
    for s in &plot.series {
        let pts: Vec<String> =
            s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"><title>{}</title></polyline>",
            s.color,
            pts.join(" "),
            s.name
        );
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}
