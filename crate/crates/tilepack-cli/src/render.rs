//! SVG rendering of packings: tiles, chosen rectangles, crowns, and the
//! bounding pentagon, mapped y-up onto a fixed canvas.

use std::fmt::Write as _;

use serde::Deserialize;

use tilepack::charging::{pentagon, Crown};
use tilepack::geometry::Point;
use tilepack::packing::TilePacking;

/// Colors and stroke settings. Defaults mirror the figure convention:
/// light blue tiles, dark blue rectangles, yellow crowns.
#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct RenderStyle {
    pub tile_fill: String,
    pub rect_fill: String,
    pub crown_fill: String,
    pub point_color: String,
    pub stroke_color: String,
    pub stroke_width: f64,
    pub canvas_px: u32,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            tile_fill: "#cfe2f3".into(),
            rect_fill: "#1f4e97".into(),
            crown_fill: "#f6d55c".into(),
            point_color: "#c0392b".into(),
            stroke_color: "#444444".into(),
            stroke_width: 1.0,
            canvas_px: 800,
        }
    }
}

struct Mapper {
    scale: f64,
    margin: f64,
    canvas: f64,
}

impl Mapper {
    fn new(style: &RenderStyle, with_pentagon: bool) -> Self {
        let margin = if with_pentagon { 0.55 } else { 0.05 };
        let canvas = style.canvas_px as f64;
        Mapper { scale: canvas / (1.0 + 2.0 * margin), margin, canvas }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            (p.x + self.margin) * self.scale,
            self.canvas - (p.y + self.margin) * self.scale,
        )
    }
}

fn path_from(points: &[Point], m: &Mapper) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = m.map(*p);
        let _ = write!(d, "{}{x:.4} {y:.4} ", if i == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

/// Outline of a staircase tile: anchor, up the left edge, along the
/// staircase, down the right edge.
fn tile_outline(anchor: Point, gamma: &[Point]) -> Vec<Point> {
    let mut pts = vec![anchor, Point::new(anchor.x, gamma[0].y)];
    for w in gamma.windows(2) {
        pts.push(Point::new(w[0].x, w[0].y));
        pts.push(Point::new(w[0].x, w[1].y));
    }
    let last = gamma[gamma.len() - 1];
    pts.push(last);
    pts.push(Point::new(last.x, anchor.y));
    pts
}

/// Render a packing to an SVG document. Crowns, when given, are drawn as
/// their towers; the pentagon overlay is optional. Output bytes are a pure
/// function of the inputs.
pub fn render_svg(
    pk: &TilePacking,
    crowns: Option<&[Crown]>,
    style: &RenderStyle,
    with_pentagon: bool,
) -> String {
    let m = Mapper::new(style, with_pentagon);
    let mut out = String::new();
    let c = style.canvas_px;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#
    );
    let _ = writeln!(out, r##"<rect width="{c}" height="{c}" fill="#ffffff"/>"##);

    let _ = writeln!(out, r#"<g id="tiles" fill="{}" stroke="{}" stroke-width="{}">"#,
        style.tile_fill, style.stroke_color, style.stroke_width * 0.5);
    for t in pk.tiles() {
        let _ = writeln!(out, r#"<path d="{}"/>"#, path_from(&tile_outline(t.anchor(), t.gamma()), &m));
    }
    let _ = writeln!(out, "</g>");

    if let Some(crowns) = crowns {
        let _ = writeln!(out, r#"<g id="crowns" fill="{}" fill-opacity="0.85" stroke="none">"#, style.crown_fill);
        for crown in crowns {
            for tower in &crown.towers {
                if tower.is_degenerate() {
                    continue;
                }
                let _ = writeln!(out, r#"<path d="{}"/>"#, path_from(&tower.vertices(), &m));
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r#"<g id="rects" fill="{}" fill-opacity="0.9" stroke="none">"#, style.rect_fill);
    for (rect, _) in pk.chosen_rects() {
        let (x, y) = m.map(Point::new(rect.lower_left.x, rect.lower_left.y + rect.height));
        let _ = writeln!(
            out,
            r#"<rect x="{x:.4}" y="{y:.4}" width="{:.4}" height="{:.4}"/>"#,
            rect.width * m.scale,
            rect.height * m.scale
        );
    }
    let _ = writeln!(out, "</g>");

    if with_pentagon {
        let _ = writeln!(
            out,
            r#"<path id="pentagon" d="{}" fill="none" stroke="{}" stroke-width="{}" stroke-dasharray="6 4"/>"#,
            path_from(&pentagon(), &m),
            style.stroke_color,
            style.stroke_width
        );
    }

    // unit square outline is always present
    let square = [
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ];
    let _ = writeln!(
        out,
        r##"<path id="unit-square" d="{}" fill="none" stroke="#000000" stroke-width="{}"/>"##,
        path_from(&square, &m),
        style.stroke_width
    );

    let _ = writeln!(out, r#"<g id="points" fill="{}">"#, style.point_color);
    for t in pk.tiles() {
        let (x, y) = m.map(t.anchor());
        let _ = writeln!(out, r#"<circle cx="{x:.4}" cy="{y:.4}" r="{:.4}"/>"#, style.stroke_width * 2.0);
    }
    let _ = writeln!(out, "</g>");

    out.push_str("</svg>\n");
    out
}
