//! Minimal stroke-only SVG output for pencils and orbits.
//!
//! Conics are drawn as 256-segment closed polylines. Plane coordinates are
//! written with the y axis flipped so that the picture has the usual
//! orientation, and the view box fits every conic with a 5% margin.

use std::fmt::Write as _;

use crate::conics::{Ellipse, PlanePoint};
use crate::pencil::Pencil;
use crate::poncelet::covering;

/// Number of segments used for every conic outline.
pub const CONIC_SEGMENTS: usize = 256;

/// Relative margin added on each side of the bounding box.
pub const MARGIN: f64 = 0.05;

#[derive(Debug, Clone)]
enum Item {
    Outline { points: Vec<PlanePoint>, stroke: &'static str },
    Path { points: Vec<PlanePoint>, stroke: &'static str },
    Dot { at: PlanePoint, stroke: &'static str },
}

/// A drawing assembled from conic outlines, orbit paths and marked points.
#[derive(Debug, Clone, Default)]
pub struct Scene {
    items: Vec<Item>,
}

/// Outline of the outer conic of `p` through the standard covering, so that
/// the vertices of every Poncelet orbit lie on the drawn curve.
pub fn outer_outline(p: &Pencil) -> Vec<PlanePoint> {
    (0..CONIC_SEGMENTS).map(|i| covering(p, i as f64 / CONIC_SEGMENTS as f64)).collect()
}

/// Outline of an arbitrary ellipse.
pub fn ellipse_outline(c: &Ellipse) -> Vec<PlanePoint> {
    c.sample(CONIC_SEGMENTS)
}

impl Scene {
    pub fn new() -> Self {
        Scene::default()
    }

    /// Adds a closed conic outline. Outlines determine the view box.
    pub fn outline(&mut self, points: Vec<PlanePoint>, stroke: &'static str) -> &mut Self {
        self.items.push(Item::Outline { points, stroke });
        self
    }

    /// Adds an open polyline, such as a Poncelet orbit.
    pub fn path(&mut self, points: Vec<PlanePoint>, stroke: &'static str) -> &mut Self {
        self.items.push(Item::Path { points, stroke });
        self
    }

    /// Marks a single point with a small circle.
    pub fn dot(&mut self, at: PlanePoint, stroke: &'static str) -> &mut Self {
        self.items.push(Item::Dot { at, stroke });
        self
    }

    /// View box `(x, y, width, height)` in SVG coordinates.
    pub fn view_box(&self) -> (f64, f64, f64, f64) {
        let mut lo = PlanePoint::new(f64::INFINITY, f64::INFINITY);
        let mut hi = PlanePoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: PlanePoint| {
            lo = PlanePoint::new(lo.x.min(p.x), lo.y.min(-p.y));
            hi = PlanePoint::new(hi.x.max(p.x), hi.y.max(-p.y));
        };
        let mut any_outline = false;
        for item in &self.items {
            if let Item::Outline { points, .. } = item {
                any_outline = true;
                points.iter().copied().for_each(&mut grow);
            }
        }
        if !any_outline {
            for item in &self.items {
                match item {
                    Item::Path { points, .. } => points.iter().copied().for_each(&mut grow),
                    Item::Dot { at, .. } => grow(*at),
                    Item::Outline { .. } => {}
                }
            }
        }
        if !lo.x.is_finite() {
            return (-1.0, -1.0, 2.0, 2.0);
        }
        let size = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
        let m = MARGIN * size;
        (lo.x - m, lo.y - m, hi.x - lo.x + 2.0 * m, hi.y - lo.y + 2.0 * m)
    }

    /// Serializes the scene as a standalone SVG document.
    pub fn render(&self) -> String {
        let (x, y, w, h) = self.view_box();
        let width = w.max(h) * 1e-3;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x} {y} {w} {h}" width="512" height="{}">"#,
            (512.0 * h / w).round()
        );
        for item in &self.items {
            let _ = match item {
                Item::Outline { points, stroke } => writeln!(
                    out,
                    r#"  <polygon points="{}" fill="none" stroke="{stroke}" stroke-width="{}"/>"#,
                    point_list(points),
                    2.0 * width
                ),
                Item::Path { points, stroke } => writeln!(
                    out,
                    r#"  <polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{}"/>"#,
                    point_list(points),
                    2.0 * width
                ),
                Item::Dot { at, stroke } => writeln!(
                    out,
                    r#"  <circle cx="{}" cy="{}" r="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
                    at.x,
                    -at.y,
                    6.0 * width
                ),
            };
        }
        out.push_str("</svg>\n");
        out
    }
}

fn point_list(points: &[PlanePoint]) -> String {
    let mut s = String::new();
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", p.x, -p.y);
    }
    s
}
