//! Deterministic SVG output for curves, surfaces and basis functions.
//!
//! Geometry is written in data coordinates inside a `<g>` whose `transform`
//! maps data space onto the pixel viewport, so every `points` attribute can
//! be parsed back to the exact values that were computed. Numbers use the
//! shortest round-trip form from [`format_number`].

use std::fmt::Write;

use crate::basis::eval_row;
use crate::curve::{uniform_parameters, PQCurve, Variant};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::pq_arith::{check_degree, PQParams};
use crate::scene::{format_number, Geometry, SceneDocument};
use crate::surface::PQSurface;

const MARGIN: f64 = 24.0;
const ISOLINES: usize = 11;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// Points per sampled curve (at least 2).
    pub samples: usize,
    pub width: u32,
    pub height: u32,
    /// Stroke width in pixels.
    pub stroke: f64,
    /// Draw the control polygon (curves) or control net (surfaces).
    pub show_polygon: bool,
    /// Overlay the de Casteljau tableau at this parameter; curves only.
    pub tableau_t: Option<f64>,
    pub variant: Variant,
    /// Append a panel with the basis functions of the curve's degree.
    pub show_basis: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            samples: 201,
            width: 640,
            height: 480,
            stroke: 1.5,
            show_polygon: true,
            tableau_t: None,
            variant: Variant::A,
            show_basis: false,
        }
    }
}

impl RenderOptions {
    fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::SampleCount(self.samples));
        }
        Ok(())
    }
}

/// Pixel rectangle plus the data window mapped onto it.
struct Panel {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x: (f64, f64),
    y: (f64, f64),
}

impl Panel {
    fn new(left: f64, top: f64, width: f64, height: f64) -> Self {
        Panel {
            left,
            top,
            width,
            height,
            x: (0.0, 1.0),
            y: (0.0, 1.0),
        }
    }

    /// Fits the data window to `points` with 5% padding; `equal` keeps the aspect ratio.
    fn fit(mut self, points: impl Iterator<Item = (f64, f64)>, equal: bool) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for (x, y) in points.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        let widen = |lo: f64, hi: f64| {
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (mut x, mut y) = (widen(x0, x1), widen(y0, y1));
        if equal {
            let scale = (self.width / (x.1 - x.0)).min(self.height / (y.1 - y.0));
            let grow = |(lo, hi): (f64, f64), pixels: f64| {
                let extra = pixels / scale - (hi - lo);
                (lo - extra / 2.0, hi + extra / 2.0)
            };
            x = grow(x, self.width);
            y = grow(y, self.height);
        }
        self.x = x;
        self.y = y;
        self
    }

    fn scale(&self) -> (f64, f64) {
        (
            self.width / (self.x.1 - self.x.0),
            self.height / (self.y.1 - self.y.0),
        )
    }

    /// Opens a group mapping data coordinates (y up) onto the panel.
    fn open(&self, out: &mut String, class: &str) {
        let (sx, sy) = self.scale();
        let tx = self.left - self.x.0 * sx;
        let ty = self.top + self.height + self.y.0 * sy;
        let _ = writeln!(
            out,
            r#"<g class="{class}" transform="matrix({} 0 0 {} {} {})">"#,
            format_number(sx),
            format_number(-sy),
            format_number(tx),
            format_number(ty)
        );
    }
}

fn polyline(out: &mut String, attrs: &str, stroke: f64, points: impl Iterator<Item = (f64, f64)>) {
    let coords: Vec<String> = points
        .map(|(x, y)| format!("{},{}", format_number(x), format_number(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline {attrs} fill="none" stroke-width="{}" vector-effect="non-scaling-stroke" points="{}"/>"#,
        format_number(stroke),
        coords.join(" ")
    );
}

fn circle(out: &mut String, class: &str, fill: &str, center: (f64, f64), radius: f64) {
    let _ = writeln!(
        out,
        r#"<circle class="{class}" fill="{fill}" cx="{}" cy="{}" r="{}"/>"#,
        format_number(center.0),
        format_number(center.1),
        format_number(radius)
    );
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = width.round() as u64,
        h = height.round() as u64
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );
}

fn xy<const D: usize>(p: &Point<D>) -> (f64, f64) {
    (p.0[0], p.0[1])
}

fn params_label(params: PQParams) -> String {
    format!(
        "p={}, q={}",
        format_number(params.p()),
        format_number(params.q())
    )
}

/// Renders a scene document. Curves are drawn in the xy plane (3D curves by
/// dropping z); surfaces as an xy wireframe of isoparametric curves.
pub fn render_curve_svg(doc: &SceneDocument, options: &RenderOptions) -> Result<String> {
    options.validate()?;
    match &doc.geometry {
        Geometry::Curve2(c) => render_curve(c, doc.name.as_deref(), options),
        Geometry::Curve3(c) => render_curve(c, doc.name.as_deref(), options),
        Geometry::Surface(s) => render_surface(s, doc.name.as_deref(), options),
    }
}

fn render_curve<const D: usize>(
    curve: &PQCurve<D>,
    name: Option<&str>,
    options: &RenderOptions,
) -> Result<String> {
    let samples: Vec<(f64, f64)> = curve.sample(options.samples)?.iter().map(xy).collect();
    let tableau = options
        .tableau_t
        .map(|t| curve.de_casteljau(t, options.variant).1);
    let polygon: Vec<(f64, f64)> = curve.control_points().iter().map(xy).collect();

    let (w, h) = (options.width as f64, options.height as f64);
    let basis_height = if options.show_basis {
        (h / 2.0).round()
    } else {
        0.0
    };
    let mut fit_points = samples.clone();
    if options.show_polygon {
        fit_points.extend(&polygon);
    }
    if let Some(tab) = &tableau {
        fit_points.extend(tab.levels.iter().flatten().map(xy));
    }
    let panel = Panel::new(MARGIN, MARGIN, w - 2.0 * MARGIN, h - 2.0 * MARGIN)
        .fit(fit_points.into_iter(), true);
    let radius = 3.0 / panel.scale().0;

    let title = format!(
        "{}degree {} curve, {}",
        name.map(|n| format!("{n}: ")).unwrap_or_default(),
        curve.degree(),
        params_label(curve.params())
    );
    let mut out = String::new();
    header(&mut out, w, h + basis_height, &title);
    panel.open(&mut out, "curve-panel");
    if options.show_polygon {
        polyline(
            &mut out,
            r##"class="polygon" stroke="#999999""##,
            options.stroke,
            polygon.iter().copied(),
        );
        for &p in &polygon {
            circle(&mut out, "control-point", "#555555", p, radius);
        }
    }
    polyline(
        &mut out,
        r##"class="curve" stroke="#1f77b4""##,
        options.stroke * 1.5,
        samples.into_iter(),
    );
    if let Some(tab) = &tableau {
        for (level, points) in tab.levels.iter().enumerate().skip(1) {
            let attrs = format!(
                r#"class="tableau" data-level="{level}" stroke="{}""#,
                PALETTE[level % PALETTE.len()]
            );
            polyline(&mut out, &attrs, options.stroke, points.iter().map(xy));
        }
        circle(
            &mut out,
            "tableau-point",
            "#d62728",
            xy(&tab.result()),
            radius * 1.5,
        );
    }
    out.push_str("</g>\n");
    if options.show_basis {
        let basis = Panel::new(MARGIN, h, w - 2.0 * MARGIN, basis_height - MARGIN);
        basis_panel(&mut out, basis, curve.degree(), curve.params(), options);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn render_surface(
    surface: &PQSurface,
    name: Option<&str>,
    options: &RenderOptions,
) -> Result<String> {
    if options.tableau_t.is_some() || options.show_basis {
        return Err(Error::WrongKind { expected: "curve" });
    }
    let iso_u: Vec<Vec<(f64, f64)>> = uniform_parameters(ISOLINES)
        .map(|v| surface.isoparametric_u(v).sample(options.samples))
        .map(|r| r.map(|pts| pts.iter().map(xy).collect()))
        .collect::<Result<_>>()?;
    let iso_v: Vec<Vec<(f64, f64)>> = uniform_parameters(ISOLINES)
        .map(|u| surface.isoparametric_v(u).sample(options.samples))
        .map(|r| r.map(|pts| pts.iter().map(xy).collect()))
        .collect::<Result<_>>()?;
    let net = surface.net().rows();

    let (w, h) = (options.width as f64, options.height as f64);
    let mut fit_points: Vec<(f64, f64)> = iso_u.iter().chain(&iso_v).flatten().copied().collect();
    if options.show_polygon {
        fit_points.extend(net.iter().flatten().map(xy));
    }
    let panel = Panel::new(MARGIN, MARGIN, w - 2.0 * MARGIN, h - 2.0 * MARGIN)
        .fit(fit_points.into_iter(), true);
    let radius = 3.0 / panel.scale().0;

    let title = format!(
        "{}degree ({}, {}) surface, u: {}, v: {}",
        name.map(|n| format!("{n}: ")).unwrap_or_default(),
        surface.degree_u(),
        surface.degree_v(),
        params_label(surface.params_u()),
        params_label(surface.params_v())
    );
    let mut out = String::new();
    header(&mut out, w, h, &title);
    panel.open(&mut out, "surface-panel");
    if options.show_polygon {
        for row in net {
            polyline(
                &mut out,
                r##"class="net" stroke="#bbbbbb""##,
                options.stroke,
                row.iter().map(xy),
            );
        }
        for j in 0..=surface.degree_v() {
            polyline(
                &mut out,
                r##"class="net" stroke="#bbbbbb""##,
                options.stroke,
                net.iter().map(|row| xy(&row[j])),
            );
        }
        for p in net.iter().flatten() {
            circle(&mut out, "control-point", "#555555", xy(p), radius);
        }
    }
    for line in &iso_u {
        polyline(
            &mut out,
            r##"class="iso-u" stroke="#1f77b4""##,
            options.stroke,
            line.iter().copied(),
        );
    }
    for line in &iso_v {
        polyline(
            &mut out,
            r##"class="iso-v" stroke="#2ca02c""##,
            options.stroke,
            line.iter().copied(),
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

fn basis_panel(
    out: &mut String,
    panel: Panel,
    n: usize,
    params: PQParams,
    options: &RenderOptions,
) {
    let ts: Vec<f64> = uniform_parameters(options.samples).collect();
    let rows: Vec<Vec<f64>> = ts.iter().map(|&t| eval_row(n, t, params)).collect();
    let sums: Vec<f64> = rows.iter().map(|r| r.iter().sum()).collect();
    let values = rows.iter().flatten().chain(&sums).map(|&v| (0.0, v));
    let mut panel = panel.fit(values.chain([(0.0, 0.0), (1.0, 1.0)]), false);
    panel.x = (0.0, 1.0);

    panel.open(out, "basis-panel");
    for level in [0.0, 1.0] {
        polyline(
            out,
            r##"class="guide" stroke="#dddddd""##,
            1.0,
            [(0.0, level), (1.0, level)].into_iter(),
        );
    }
    for k in 0..=n {
        let attrs = format!(
            r#"class="basis" data-k="{k}" stroke="{}""#,
            PALETTE[k % PALETTE.len()]
        );
        polyline(
            out,
            &attrs,
            options.stroke,
            ts.iter().zip(&rows).map(|(&t, row)| (t, row[k])),
        );
    }
    polyline(
        out,
        r##"class="sum" stroke="#000000" stroke-dasharray="4 3""##,
        options.stroke,
        ts.iter().copied().zip(sums.iter().copied()),
    );
    out.push_str("</g>\n");
}

/// Plots the `n + 1` basis functions of degree `n` over `[0, 1]` together
/// with their pointwise sum (`class="sum"`).
pub fn render_basis_svg(n: usize, params: PQParams, options: &RenderOptions) -> Result<String> {
    options.validate()?;
    check_degree(n)?;
    let (w, h) = (options.width as f64, options.height as f64);
    let mut out = String::new();
    header(
        &mut out,
        w,
        h,
        &format!("basis of degree {n}, {}", params_label(params)),
    );
    let panel = Panel::new(MARGIN, MARGIN, w - 2.0 * MARGIN, h - 2.0 * MARGIN);
    basis_panel(&mut out, panel, n, params, options);
    out.push_str("</svg>\n");
    Ok(out)
}
