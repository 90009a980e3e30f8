//! Standalone SVG figures: `x ↦ G_κ^E(x)` on `[E − 1, 1]`, and the log-log rate plot.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mourre::{evaluate_g, x_samples, CoefficientSolution, XRange};
use crate::rate::RateFit;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 56.0;
const TICKS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    GCurve,
    RateLogLog,
}

/// Sampled data for one figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PlotData {
    GCurve {
        kappa: u32,
        energy: f64,
        /// `(x, G(x))`.
        samples: Vec<(f64, f64)>,
        /// Chain points to mark on the axis, if `E` is a band endpoint.
        markers: Vec<f64>,
    },
    RateLogLog {
        kappa: u32,
        /// `(ln n, ln gap)`.
        points: Vec<(f64, f64)>,
        slope: f64,
        intercept: f64,
    },
}

impl PlotData {
    pub fn kind(&self) -> PlotKind {
        match self {
            Self::GCurve { .. } => PlotKind::GCurve,
            Self::RateLogLog { .. } => PlotKind::RateLogLog,
        }
    }

    /// Samples `G` at `samples` points of `[E − 1, 1]`.
    pub fn g_curve(solution: &CoefficientSolution, energy: f64, samples: usize, markers: Vec<f64>) -> Self {
        let pts = x_samples(energy, samples, XRange::Full)
            .map(|x| (x, evaluate_g(solution.kappa, &solution.indices, &solution.rho, energy, x)))
            .collect();
        Self::GCurve {
            kappa: solution.kappa,
            energy,
            samples: pts,
            markers,
        }
    }

    pub fn rate(fit: &RateFit) -> Self {
        Self::RateLogLog {
            kappa: fit.kappa,
            points: fit
                .points
                .iter()
                .map(|p| (f64::from(p.n).ln(), p.gap.ln()))
                .collect(),
            slope: fit.slope,
            intercept: fit.intercept,
        }
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let (x0, x1) = bounds(xs);
        let (y0, y1) = bounds(ys);
        let pad = |a: f64, b: f64| {
            let d = if b > a { 0.05 * (b - a) } else { 0.5f64.max(a.abs() * 0.1) };
            (a - d, b + d)
        };
        let (x0, x1) = if x1 > x0 { (x0, x1) } else { pad(x0, x1) };
        let (y0, y1) = pad(y0, y1);
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B)
    }
}

fn bounds(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn axes(svg: &mut String, f: &Frame, title: &str, xlabel: &str, ylabel: &str) {
    let (l, r, t, b) = (MARGIN_L, WIDTH - MARGIN_R, MARGIN_T, HEIGHT - MARGIN_B);
    let _ = writeln!(svg, r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#, r - l, b - t);
    for i in 0..=TICKS {
        let u = i as f64 / TICKS as f64;
        let xv = f.x0 + u * (f.x1 - f.x0);
        let yv = f.y0 + u * (f.y1 - f.y0);
        let (px, py) = (f.px(xv), f.py(yv));
        let _ = writeln!(svg, r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, b + 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            b + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{py:.2}" x2="{l}" y2="{py:.2}" stroke="black"/>"#, l - 5.0);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            l - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        (l + r) / 2.0,
        HEIGHT - 14.0,
        escape(xlabel)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        (t + b) / 2.0,
        (t + b) / 2.0,
        escape(ylabel)
    );
}

fn polyline(svg: &mut String, f: &Frame, pts: &[(f64, f64)], stroke: &str) {
    let mut d = String::new();
    for (x, y) in pts.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
        let _ = write!(d, "{:.2},{:.2} ", f.px(*x), f.py(*y));
    }
    let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="1.5"/>"#, d.trim_end());
}

/// Renders a figure as a standalone SVG document.
pub fn render_svg(data: &PlotData) -> Result<String> {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    match data {
        PlotData::GCurve {
            kappa,
            energy,
            samples,
            markers,
        } => {
            if samples.is_empty() {
                return Err(Error::InvalidArgument("nothing to plot".into()));
            }
            let ys = samples.iter().map(|p| p.1).chain(std::iter::once(0.0));
            let f = Frame::new(samples.iter().map(|p| p.0), ys);
            axes(
                &mut svg,
                &f,
                &format!("G_{kappa}^E(x), E = {energy:.6}"),
                "x in [E - 1, 1]",
                "G(x)",
            );
            let zero = f.py(0.0);
            let _ = writeln!(
                svg,
                r#"<line x1="{MARGIN_L}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
                WIDTH - MARGIN_R
            );
            polyline(&mut svg, &f, samples, "steelblue");
            for m in markers {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{zero:.2}" r="3" fill="crimson"/>"#,
                    f.px(*m)
                );
            }
        }
        PlotData::RateLogLog {
            kappa,
            points,
            slope,
            intercept,
        } => {
            if points.is_empty() {
                return Err(Error::InvalidArgument("nothing to plot".into()));
            }
            let f = Frame::new(points.iter().map(|p| p.0), points.iter().map(|p| p.1));
            axes(
                &mut svg,
                &f,
                &format!("kappa = {kappa}: slope {slope:.4}"),
                "log(n)",
                "log(E_2n - 2cos(pi/kappa))",
            );
            let line = [
                (f.x0, intercept + slope * f.x0),
                (f.x1, intercept + slope * f.x1),
            ];
            polyline(&mut svg, &f, &line, "darkorange");
            for (x, y) in points {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
                    f.px(*x),
                    f.py(*y)
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes the figure to `path`.
pub fn emit_plot(data: &PlotData, path: &Path) -> Result<()> {
    let svg = render_svg(data)?;
    std::fs::write(path, svg).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_curve_document() {
        let data = PlotData::GCurve {
            kappa: 4,
            energy: 1.65,
            samples: vec![(0.65, 0.2), (0.8, 0.1), (1.0, 0.3)],
            markers: vec![0.8],
        };
        let svg = render_svg(&data).unwrap();
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("polyline") && svg.contains("stroke-dasharray") && svg.contains("circle"));
        assert_eq!(svg, render_svg(&data).unwrap());
    }

    #[test]
    fn empty_is_rejected_and_io_reports_path() {
        let data = PlotData::RateLogLog {
            kappa: 5,
            points: vec![],
            slope: -2.0,
            intercept: 0.0,
        };
        assert!(render_svg(&data).is_err());
        let ok = PlotData::RateLogLog {
            kappa: 5,
            points: vec![(1.0, -2.0), (2.0, -4.0)],
            slope: -2.0,
            intercept: 0.0,
        };
        let err = emit_plot(&ok, Path::new("/nonexistent-dir/x.svg")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.svg"));
    }
}
