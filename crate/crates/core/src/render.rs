//! Deterministic SVG figures.
//!
//! Coordinates are converted to `f64` only here and printed with six decimals.
//! The `y` axis is flipped so the plane reads the usual way up. Octagons carry
//! `class="octagon"` so figures can be checked by counting paths.

use std::fmt::Write as _;

use crate::billiard::TableAtlas;
use crate::error::Result;
use crate::field::QSqrt2;
use crate::geometry::Point2;
use crate::induced::{InducedAtlas, ReturnOutcome};
use crate::renorm::{enumerate_components, spiral_components, RenormalizationData};
use crate::sampling::bounding_box;

/// Width of every figure in user units; the height follows the aspect ratio.
const WIDTH: f64 = 800.0;
/// Margin around the viewport, as a fraction of its larger side.
const MARGIN: f64 = 0.05;

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn xy(p: &Point2) -> (f64, f64) {
    let (x, y) = p.to_f64();
    (x, -y)
}

/// Accumulates SVG elements inside a fixed viewport.
struct Svg {
    view: (f64, f64, f64, f64),
    stroke: f64,
    body: String,
}

impl Svg {
    /// Viewport: bounding box of `frame` plus the margin.
    fn new(frame: &[Point2]) -> Self {
        let (lo, hi) = bounding_box(frame);
        let (x0, y1) = xy(&lo);
        let (x1, y0) = xy(&hi);
        let pad = MARGIN * (x1 - x0).max(y1 - y0);
        let view = (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
        Svg { view, stroke: view.2 / 800.0, body: String::new() }
    }

    fn path(&mut self, class: &str, pts: &[Point2], closed: bool) {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = xy(p);
            let _ = write!(d, "{}{},{} ", if i == 0 { "M" } else { "L" }, num(x), num(y));
        }
        if closed {
            d.push('Z');
        }
        let _ = writeln!(self.body, r#"<path class="{class}" d="{}"/>"#, d.trim_end());
    }

    fn marker(&mut self, class: &str, label: &str, p: &Point2) {
        let (x, y) = xy(p);
        let r = 4.0 * self.stroke;
        let _ = writeln!(self.body, r#"<circle class="{class}" cx="{}" cy="{}" r="{}"/>"#, num(x), num(y), num(r));
        if !label.is_empty() {
            let _ = writeln!(
                self.body,
                r#"<text x="{}" y="{}" font-size="{}">{label}</text>"#,
                num(x + 1.5 * r),
                num(y - 1.5 * r),
                num(12.0 * self.stroke)
            );
        }
    }

    fn finish(self, title: &str) -> String {
        let (x, y, w, h) = self.view;
        let height = WIDTH * h / w;
        let s = self.stroke;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
            num(x),
            num(y),
            num(w),
            num(h),
            num(WIDTH),
            num(height)
        );
        let _ = writeln!(out, "<title>{title}</title>");
        let _ = writeln!(
            out,
            "<style>path{{fill:none;stroke:#222;stroke-width:{sw}}} .table{{fill:#bbb}} .octagon{{fill:#cfe0f5}} \
             .region{{stroke:#c33}} .piece{{fill:#f3ecd6}} .orbit{{stroke:#36c}} .spiral{{stroke:#c33}} \
             circle{{fill:#c33;stroke:none}} text{{font-family:sans-serif}}</style>",
            sw = num(s)
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

/// The table, its eight reflected copies and the region `Z`.
pub fn render_necklace(atlas: &TableAtlas) -> String {
    let mut svg = Svg::new(atlas.region_z.vertices());
    svg.path("region", atlas.region_z.vertices(), true);
    svg.path("octagon table", atlas.table.vertices(), true);
    for g in &atlas.necklace {
        svg.path("octagon", g.vertices(), true);
    }
    svg.finish("table, necklace and Z")
}

/// The three pieces of `T′` on `OKLM` with their rotation centers.
pub fn render_induced(ia: &InducedAtlas) -> String {
    let mut svg = Svg::new(ia.quad.vertices());
    for pc in &ia.pieces {
        svg.path("piece", pc.domain.vertices(), true);
    }
    let np = &ia.points;
    for (label, p) in [("U", &np.u), ("V", &np.v), ("W", &np.w)] {
        svg.marker("center", label, p);
    }
    svg.finish("induced map on OKLM")
}

/// Default start of the `T″` figure: `Γ(O + (K-O)/3 + (M-O)/5)`.
pub fn trajectory_start(ia: &InducedAtlas, rd: &RenormalizationData) -> Point2 {
    let np = &ia.points;
    let third = QSqrt2::from_fracs(1, 3, 0, 1);
    let fifth = QSqrt2::from_fracs(1, 5, 0, 1);
    let x0 = &(&np.o + &(&np.k - &np.o).scale(&third)) + &(&np.m - &np.o).scale(&fifth);
    rd.gamma_map.apply(&x0)
}

/// `returns` iterates of `T″` from `start`, drawn with their `T′` excursions.
pub fn render_trajectory(
    ia: &InducedAtlas,
    rd: &RenormalizationData,
    start: &Point2,
    returns: usize,
    budget: u64,
) -> Result<String> {
    let mut svg = Svg::new(ia.quad.vertices());
    for pc in &ia.pieces {
        svg.path("piece", pc.domain.vertices(), true);
    }
    svg.path("region", rd.quad_image.vertices(), true);
    let mut cur = start.clone();
    svg.marker("return", "", &cur);
    for _ in 0..returns {
        let ReturnOutcome::Returned(rec) = ia.t_double_prime(&cur, &rd.gamma_map, budget)? else { break };
        let mut path = vec![cur.clone()];
        path.extend(rec.prefix.iter().cloned());
        path.push(rec.image.clone());
        svg.path("orbit", &path, false);
        svg.marker("return", "", &rec.image);
        if rec.image == *start {
            break;
        }
        cur = rec.image;
    }
    Ok(svg.finish("trajectory of the first return map"))
}

/// Census octagons of level `≤ depth` and the spiral through the centers
/// converging to the aperiodic point.
pub fn render_census(rd: &RenormalizationData, depth: usize, spiral_rounds: usize) -> Result<String> {
    let mut svg = Svg::new(rd.quad().vertices());
    svg.path("region", rd.quad().vertices(), true);
    for c in enumerate_components(depth, rd)? {
        svg.path("octagon", c.polygon.vertices(), true);
    }
    let centers: Vec<Point2> = spiral_components(rd, spiral_rounds).into_iter().map(|c| c.center).collect();
    if centers.len() > 1 {
        svg.path("spiral", &centers, false);
    }
    if let Ok(c) = rd.g_map.fixed_point() {
        svg.marker("center", "c", &c);
    }
    Ok(svg.finish("periodic components and spiral"))
}

/// A `T`-orbit as a polyline over the necklace viewport.
pub fn render_orbit(atlas: &TableAtlas, points: &[Point2]) -> String {
    let mut frame = atlas.region_z.vertices().to_vec();
    frame.extend(points.iter().cloned());
    let mut svg = Svg::new(&frame);
    svg.path("octagon table", atlas.table.vertices(), true);
    if points.len() > 1 {
        svg.path("orbit", points, false);
    }
    if let Some(p) = points.first() {
        svg.marker("return", "", p);
    }
    svg.finish("orbit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiard::build_table_atlas;
    use crate::induced::build_induced_atlas;
    use crate::renorm::build_renormalization;

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!(r#"class="{class}"#)).count()
    }

    #[test]
    fn necklace_has_nine_octagons() {
        let svg = render_necklace(&build_table_atlas());
        assert_eq!(count(&svg, "octagon"), 9);
        assert_eq!(count(&svg, "region"), 1);
    }

    #[test]
    fn induced_has_pieces_and_centers() {
        let svg = render_induced(&build_induced_atlas(&build_table_atlas()));
        assert_eq!(count(&svg, "piece"), 3);
        assert_eq!(count(&svg, "center"), 3);
        for l in ["U", "V", "W"] {
            assert!(svg.contains(&format!(">{l}</text>")));
        }
    }

    #[test]
    fn census_depth_three_has_forty() {
        let ia = build_induced_atlas(&build_table_atlas());
        let rd = build_renormalization(&ia);
        let svg = render_census(&rd, 3, 3).unwrap();
        assert_eq!(count(&svg, "octagon"), 40);
        assert_eq!(count(&svg, "spiral"), 1);
    }

    #[test]
    fn no_negative_zero() {
        assert_eq!(num(-1e-9), "0.000000");
        assert_eq!(num(-0.5), "-0.500000");
    }
}
