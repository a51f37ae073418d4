//! Deterministic SVG figures of planar scenes.

use std::collections::BTreeMap;
use std::fmt::Write;

use hollowkit::bodies::{Body, ConvexBody};
use hollowkit::critical::HollowSimplex;
use hollowkit::geom::Point;
use hollowkit::hollow::{convex_hull_2d, HollowCertificate};

const WIDTH: f64 = 800.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];
const OUTLINE_DIRECTIONS: usize = 96;

/// Layers of a figure; absent layers are simply not drawn.
pub struct Figure<'a> {
    pub bodies: &'a [Body],
    pub witnesses: Option<&'a [Point]>,
    pub hollow: Option<&'a HollowCertificate>,
    pub simplex: Option<&'a HollowSimplex>,
}

enum Shape {
    Circle { center: Point, radius: f64 },
    Polygon(Vec<Point>),
}

fn outline(body: &Body) -> Shape {
    match body {
        Body::Ball(b) => Shape::Circle {
            center: b.center().clone(),
            radius: b.radius(),
        },
        Body::VPoly(v) => Shape::Polygon(convex_hull_2d(v.generators().to_vec())),
        Body::HPoly(h) => {
            let (n, b) = (h.normals(), h.offsets());
            let mut corners = Vec::new();
            for i in 0..n.len() {
                for j in i + 1..n.len() {
                    let det = n[i][0] * n[j][1] - n[i][1] * n[j][0];
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let x = Point::from_column_slice(&[
                        (b[i] * n[j][1] - b[j] * n[i][1]) / det,
                        (n[i][0] * b[j] - n[j][0] * b[i]) / det,
                    ]);
                    if h.max_violation(&x) <= 1e-9 {
                        corners.push(x);
                    }
                }
            }
            Shape::Polygon(convex_hull_2d(corners))
        }
        Body::Intersection(_) => {
            let pts = (0..OUTLINE_DIRECTIONS)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / OUTLINE_DIRECTIONS as f64;
                    body.support(&Point::from_column_slice(&[t.cos(), t.sin()]))
                })
                .collect();
            Shape::Polygon(convex_hull_2d(pts))
        }
    }
}

struct Frame {
    lo: Point,
    scale: f64,
    height: f64,
    margin: f64,
}

impl Frame {
    fn xy(&self, p: &Point) -> (f64, f64) {
        (
            self.margin + (p[0] - self.lo[0]) * self.scale,
            self.height - self.margin - (p[1] - self.lo[1]) * self.scale,
        )
    }

    fn points(&self, pts: &[Point]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.xy(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Renders a figure of two-dimensional bodies.
pub fn render_svg(fig: &Figure) -> String {
    let shapes: Vec<Shape> = fig.bodies.iter().map(outline).collect();
    let mut lo = Point::from_element(2, f64::INFINITY);
    let mut hi = Point::from_element(2, f64::NEG_INFINITY);
    for b in fig.bodies {
        let (l, h) = b.bounding_box();
        lo = lo.inf(&l);
        hi = hi.sup(&h);
    }
    for w in fig.witnesses.into_iter().flatten() {
        lo = lo.inf(w);
        hi = hi.sup(w);
    }
    let span = (&hi - &lo).max().max(1e-9);
    let scale = (WIDTH - 80.0) / span;
    let margin = 40.0;
    let height = (hi[1] - lo[1]) * scale + 2.0 * margin;
    let width = (hi[0] - lo[0]) * scale + 2.0 * margin;
    let frame = Frame { lo, scale, height, margin };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    let _ = writeln!(s, r#"<g id="bodies">"#);
    for (i, shape) in shapes.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        match shape {
            Shape::Circle { center, radius } => {
                let (x, y) = frame.xy(center);
                let _ = writeln!(
                    s,
                    r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="{color}" fill-opacity="0.3" stroke="{color}"/>"#,
                    radius * scale
                );
            }
            Shape::Polygon(pts) => {
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="{color}" fill-opacity="0.3" stroke="{color}" stroke-width="2"/>"#,
                    frame.points(pts)
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");

    if let Some(cert) = fig.hollow {
        let grid = cert.grid();
        let h = grid.h();
        let mut rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &c in cert.cells() {
            let m = grid.multi_index(c);
            rows.entry(m[1]).or_default().push(m[0]);
        }
        let _ = writeln!(s, r##"<g id="hollow" fill="#000000" fill-opacity="0.25">"##);
        for (row, mut xs) in rows {
            xs.sort_unstable();
            let mut start = 0;
            while start < xs.len() {
                let mut end = start;
                while end + 1 < xs.len() && xs[end + 1] == xs[end] + 1 {
                    end += 1;
                }
                let corner = Point::from_column_slice(&[
                    grid.lo()[0] + xs[start] as f64 * h,
                    grid.lo()[1] + (row + 1) as f64 * h,
                ]);
                let (x, y) = frame.xy(&corner);
                let _ = writeln!(
                    s,
                    r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}"/>"#,
                    (end - start + 1) as f64 * h * scale,
                    h * scale
                );
                start = end + 1;
            }
        }
        let _ = writeln!(s, "</g>");
    }

    if let Some(hs) = fig.simplex {
        let _ = writeln!(
            s,
            r##"<polygon id="simplex" points="{}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
            frame.points(hs.vertices())
        );
    }

    if let Some(ws) = fig.witnesses {
        let _ = writeln!(s, r#"<g id="witnesses" font-family="sans-serif" font-size="14">"#);
        for (j, w) in ws.iter().enumerate() {
            let (x, y) = frame.xy(w);
            let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#000000"/>"##);
            let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">a{j}</text>"#, x + 6.0, y - 6.0);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
