//! SVG output for packings. Geometry stays exact until each number is
//! written, at 12 significant digits.

use std::fmt::Write as _;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::disk::{decode, tangency_point, EuclideanShape, Rational};
use crate::error::{Error, Result};
use crate::exact::Int;
use crate::packing::{verify_packing, Packing, Rect};

const STROKE: &str = "#1f3a5f";
const OUTER_FILL: &str = "#f6f3ea";
const LABEL: &str = "#222222";
const SPINOR: &str = "#b03a2e";
const ARROW_PX: f64 = 14.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub viewport: Rect,
    pub pixel_width: Int,
    /// Disks drawn smaller than this get no curvature label.
    pub label_min_radius_px: Rational,
    pub draw_spinors: bool,
    pub stroke_width_px: Rational,
}

impl RenderOptions {
    pub fn new(viewport: Rect, pixel_width: Int) -> Result<Self> {
        if pixel_width <= 0 {
            return Err(Error::NegativeInput(pixel_width));
        }
        Ok(Self {
            viewport,
            pixel_width,
            label_min_radius_px: Rational::from(6),
            draw_spinors: false,
            stroke_width_px: Rational::from(1),
        })
    }

    /// A square-ish viewport around every circle of `p`, with a 5% margin.
    pub fn fit(p: &Packing, pixel_width: Int) -> Result<Self> {
        let mut bbox: Option<[Rational; 4]> = None;
        for d in &p.disks {
            if let EuclideanShape::Circle { center, radius } = decode(d) {
                let r = radius.abs();
                let b = [center.0 - r, center.1 - r, center.0 + r, center.1 + r];
                bbox = Some(match bbox {
                    None => b,
                    Some(a) => [
                        a[0].min(b[0]),
                        a[1].min(b[1]),
                        a[2].max(b[2]),
                        a[3].max(b[3]),
                    ],
                });
            }
        }
        let [x0, y0, x1, y1] = bbox.ok_or(Error::DegenerateViewport)?;
        let margin = (x1 - x0).max(y1 - y0) / Rational::from(20);
        Self::new(
            Rect::new(x0 - margin, y0 - margin, x1 + margin, y1 + margin)?,
            pixel_width,
        )
    }
}

fn to_f64(r: Rational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Decimal with at most 12 significant digits, trailing zeros dropped.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".to_owned();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_owned();
    }
    if s == "-0" {
        s = "0".to_owned();
    }
    s
}

struct Frame {
    view: Rect,
    scale: Rational,
}

impl Frame {
    fn x(&self, x: Rational) -> Rational {
        (x - self.view.x0) * self.scale
    }

    fn y(&self, y: Rational) -> Rational {
        (self.view.y1 - y) * self.scale
    }
}

/// Endpoints of `{nx·x + ny·y = c}` inside `r`, if the line crosses it.
fn clip_line(normal: (Int, Int), c: Rational, r: &Rect) -> Option<[(Rational, Rational); 2]> {
    let (nx, ny) = (Rational::from(normal.0), Rational::from(normal.1));
    let mut pts: Vec<(Rational, Rational)> = Vec::new();
    let mut push = |p: (Rational, Rational)| {
        if !pts.contains(&p) {
            pts.push(p);
        }
    };
    if !ny.is_zero() {
        for x in [r.x0, r.x1] {
            let y = (c - nx * x) / ny;
            if y >= r.y0 && y <= r.y1 {
                push((x, y));
            }
        }
    }
    if !nx.is_zero() {
        for y in [r.y0, r.y1] {
            let x = (c - ny * y) / nx;
            if x >= r.x0 && x <= r.x1 {
                push((x, y));
            }
        }
    }
    pts.sort();
    (pts.len() >= 2).then(|| [pts[0], pts[pts.len() - 1]])
}

fn circle_visible(center: (Rational, Rational), r: Rational, view: &Rect) -> bool {
    center.0 + r >= view.x0
        && center.0 - r <= view.x1
        && center.1 + r >= view.y0
        && center.1 - r <= view.y1
}

pub fn to_svg(p: &Packing, opts: &RenderOptions) -> Result<String> {
    let report = verify_packing(p);
    if !report.passed() {
        let failed: Vec<&str> = report.failed_checks().map(|c| c.name.as_str()).collect();
        return Err(Error::VerificationFailed(failed.join(", ")));
    }
    if opts.pixel_width <= 0 {
        return Err(Error::NegativeInput(opts.pixel_width));
    }
    let view = opts.viewport;
    let frame = Frame {
        view,
        scale: Rational::from(opts.pixel_width) / view.width(),
    };
    let width = opts.pixel_width;
    let height = (view.height() * frame.scale).ceil().to_integer();
    let stroke = fmt_num(to_f64(opts.stroke_width_px));
    let num = |r: Rational| fmt_num(to_f64(r));

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{SPINOR}"/></marker></defs>"#
    );

    let mut shapes = String::new();
    let mut labels = String::new();
    for d in &p.disks {
        match decode(d) {
            EuclideanShape::Circle { center, radius } => {
                let r = radius.abs();
                if !circle_visible(center, r, &view) {
                    continue;
                }
                let (cx, cy, rp) = (frame.x(center.0), frame.y(center.1), r * frame.scale);
                let fill = if d.curv < 0 { OUTER_FILL } else { "none" };
                let _ = writeln!(
                    shapes,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}" stroke="{STROKE}" stroke-width="{stroke}"/>"#,
                    num(cx),
                    num(cy),
                    num(rp)
                );
                if rp < opts.label_min_radius_px {
                    continue;
                }
                let text = d.curv.to_string();
                let font = (to_f64(rp) * 0.8).min(to_f64(rp) * 1.6 / text.len() as f64);
                // The enclosing disk is labelled just above its top edge.
                let ly = if d.curv < 0 {
                    cy - rp - Rational::new(4, 1)
                } else {
                    cy
                };
                let _ = writeln!(
                    labels,
                    r#"<text x="{}" y="{}" font-size="{}" font-family="sans-serif" text-anchor="middle" dominant-baseline="central" fill="{LABEL}">{text}</text>"#,
                    num(cx),
                    num(ly),
                    fmt_num(if d.curv < 0 { 14.0 } else { font })
                );
            }
            EuclideanShape::HalfPlane { normal, offset } => {
                if let Some([a, b]) = clip_line(normal, offset, &view) {
                    let _ = writeln!(
                        shapes,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{STROKE}" stroke-width="{stroke}"/>"#,
                        num(frame.x(a.0)),
                        num(frame.y(a.1)),
                        num(frame.x(b.0)),
                        num(frame.y(b.1))
                    );
                }
            }
        }
    }
    svg.push_str(&shapes);
    svg.push_str(&labels);

    if opts.draw_spinors {
        for t in &p.tangencies {
            let (a, b) = (&p.disks[t.a], &p.disks[t.b]);
            let Ok(point) = tangency_point(a, b) else {
                continue;
            };
            if point.0 < view.x0 || point.0 > view.x1 || point.1 < view.y0 || point.1 > view.y1 {
                continue;
            }
            // The squared spinor points along the line of centers, from a to b.
            let Ok((re, im)) = t.spinor.square() else {
                continue;
            };
            let (px, py) = (to_f64(frame.x(point.0)), to_f64(frame.y(point.1)));
            let len = ((re as f64).powi(2) + (im as f64).powi(2)).sqrt();
            let (dx, dy) = if len == 0.0 {
                (0.0, 0.0)
            } else {
                (ARROW_PX * re as f64 / len, -ARROW_PX * im as f64 / len)
            };
            let _ = writeln!(
                svg,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{SPINOR}" stroke-width="{stroke}" marker-end="url(#arrow)"/>"#,
                fmt_num(px - dx / 2.0),
                fmt_num(py - dy / 2.0),
                fmt_num(px + dx / 2.0),
                fmt_num(py + dy / 2.0)
            );
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}" font-size="10" font-family="monospace" fill="{SPINOR}">{}</text>"#,
                fmt_num(px + dx / 2.0 + 2.0),
                fmt_num(py + dy / 2.0 - 2.0),
                t.spinor
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
