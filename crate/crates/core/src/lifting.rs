//! Grid census of periodic components in the sector `∠KOM` and their
//! explanation as lifts `T′^m(H^n(C₀))` of components `C₀` of `Y = OKLM ∪ γ²`.
//!
//! Each grid point is iterated under the sector map until it returns. Its
//! component is then cut out exactly by intersecting the continuity domains
//! along the orbit. Components are matched by walking back with `T′⁻¹` and
//! `H⁻¹` to a census center, and the match is confirmed by lifting the census
//! polygon forward and comparing vertex sets.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::field::QSqrt2;
use crate::geometry::{AffineMap, ConvexPolygon, HalfPlane, Location, Point2};
use crate::induced::{Branch, InducedAtlas};
use crate::scaled::{sector_step, Frame, ScaledSector, ScaledTable};
use crate::renorm::{census_locate, lift_component, RenormalizationData};

/// Window and effort limits for a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    /// Grid step.
    pub step: QSqrt2,
    /// Exclusive upper bound on `y`.
    pub y_max: QSqrt2,
    /// Sector-map steps allowed per grid point.
    pub period_budget: u64,
    /// Deepest census level searched when matching.
    pub census_depth: usize,
    /// Largest `m` tried by the literal matcher.
    pub max_m: usize,
    /// Largest number of `H` steps tried.
    pub max_n: usize,
}

impl SweepConfig {
    /// The acceptance window: step `h₀/4` and `y < O.y + 2·|H|_y`, where only
    /// one or two `H` steps separate a component from `Y`.
    pub fn acceptance(ia: &InducedAtlas, rd: &RenormalizationData) -> Self {
        let shift_y = &ia.h_map.t[1];
        SweepConfig {
            step: rd.h0.scale(&num_rational::BigRational::new(1.into(), 4.into())),
            y_max: &ia.points.o.y + &shift_y.double(),
            period_budget: 20_000,
            census_depth: 8,
            max_m: 3,
            max_n: 8,
        }
    }
}

/// How a found component is obtained from `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lift {
    /// Sector-map steps after each `H`, outermost first: the component is
    /// `T′^{m₀} H T′^{m₁} H … T′^{m_last}(C₀)`. The literal form has one entry.
    pub ms: Vec<usize>,
    /// Number of `H` applications.
    pub n: usize,
    pub level: i64,
    pub address: Vec<u8>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundComponent {
    pub center: Point2,
    pub period: u64,
    pub area: QSqrt2,
    #[serde(skip)]
    pub polygon: ConvexPolygon,
    /// First grid point that hit the component.
    pub witness: Point2,
    pub literal: Option<Lift>,
    pub recursive: Option<Lift>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub grid_points: usize,
    pub skipped_inside_known: usize,
    pub singular_points: usize,
    pub over_budget_points: usize,
    pub components: Vec<FoundComponent>,
}

impl SweepReport {
    pub fn literal_unmatched(&self) -> Vec<&FoundComponent> {
        self.components.iter().filter(|c| c.literal.is_none()).collect()
    }

    pub fn recursive_unmatched(&self) -> Vec<&FoundComponent> {
        self.components.iter().filter(|c| c.recursive.is_none()).collect()
    }
}

/// Grid points `O + ((-i - 1/3)δ, (j + 1/7)δ)` inside the sector with `y < y_max`.
pub fn grid_points(ia: &InducedAtlas, cfg: &SweepConfig) -> Vec<Point2> {
    let o = &ia.points.o;
    let third = num_rational::BigRational::new(1.into(), 3.into());
    let seventh = num_rational::BigRational::new(1.into(), 7.into());
    let mut out = Vec::new();
    for j in 0.. {
        let y = &o.y + &cfg.step.scale(&(seventh.clone() + num_rational::BigRational::from_integer(j.into())));
        if y >= cfg.y_max {
            break;
        }
        for i in 0.. {
            let x = &o.x - &cfg.step.scale(&(third.clone() + num_rational::BigRational::from_integer(i.into())));
            let p = Point2::new(x, y.clone());
            match ia.sector.locate(&p) {
                Location::Interior => out.push(p),
                Location::Boundary => {}
                Location::Exterior => break,
            }
        }
    }
    out
}

/// Exact period of `x` under the sector map, if it returns within `budget`.
pub fn sector_period(ia: &InducedAtlas, x: &Point2, budget: u64) -> Result<Option<u64>> {
    if let Some(out) = scaled_sector_period(ia, x, budget) {
        return Ok(out);
    }
    exact_sector_period(ia, x, budget)
}

/// Integer-path orbit of `x`: the branch taken at each step until the first
/// return, or `Some(None)` if it is singular or exceeds `budget`.
fn scaled_itinerary(ia: &InducedAtlas, x: &Point2, budget: u64) -> Option<Option<Vec<Branch>>> {
    let s = &ia.sector;
    let mut pts = vec![x.clone(), s.apex.clone(), s.d1.clone(), s.d2.clone()];
    pts.extend(ia.table.table.vertices().iter().cloned());
    // rotations by odd octants need one extra factor of two
    let frame = Frame::for_points(&pts, 2)?;
    let table = ScaledTable::new(&frame, ia.table.table.vertices())?;
    let sector = ScaledSector::new(&frame, &s.apex, &s.d1, &s.d2)?;
    let start = frame.point(x)?;
    let mut cur = start;
    let mut branches = Vec::new();
    for _ in 0..budget {
        let Some((y, vertex, octants)) = sector_step(&table, &sector, &cur)? else { return Some(None) };
        branches.push(Branch { vertex, octants });
        if y == start {
            return Some(Some(branches));
        }
        cur = y;
    }
    Some(None)
}

fn scaled_sector_period(ia: &InducedAtlas, x: &Point2, budget: u64) -> Option<Option<u64>> {
    Some(scaled_itinerary(ia, x, budget)?.map(|b| b.len() as u64))
}

fn exact_itinerary(ia: &InducedAtlas, x: &Point2, period: u64) -> Result<Option<Vec<Branch>>> {
    let sm = ia.sector_map();
    let mut cur = x.clone();
    let mut out = Vec::new();
    for _ in 0..period {
        let Some(br) = sm.branch(&cur)? else { return Ok(None) };
        cur = sm.branch_map(br).apply(&cur);
        out.push(br);
    }
    Ok(Some(out))
}

fn exact_sector_period(ia: &InducedAtlas, x: &Point2, budget: u64) -> Result<Option<u64>> {
    let sm = ia.sector_map();
    let mut cur = x.clone();
    for n in 1..=budget {
        match sm.forward(&cur)? {
            None => return Ok(None),
            Some(y) if y == *x => return Ok(Some(n)),
            Some(y) => cur = y,
        }
    }
    Ok(None)
}

type Affine64 = ([[f64; 2]; 2], [f64; 2]);

fn affine_f64(f: &AffineMap) -> Affine64 {
    let m = |i: usize, j: usize| f.m[i][j].to_f64();
    ([[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]], [f.t[0].to_f64(), f.t[1].to_f64()])
}

fn apply_f64(f: &Affine64, p: (f64, f64)) -> (f64, f64) {
    (f.0[0][0] * p.0 + f.0[0][1] * p.1 + f.1[0], f.0[1][0] * p.0 + f.0[1][1] * p.1 + f.1[1])
}

/// `f ∘ g` in floating point.
fn compose_f64(f: &Affine64, g: &Affine64) -> Affine64 {
    let mut m = [[0.0; 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = f.0[i][0] * g.0[0][j] + f.0[i][1] * g.0[1][j];
        }
    }
    (m, apply_f64(f, (g.1[0], g.1[1])).into())
}

/// Slack for the floating-point test that lets a clip be skipped. Coordinates
/// stay below `10³` and orbits below `10⁵` steps, so drift is far smaller.
const SKIP_MARGIN: f64 = 1e-6;

/// The set of points sharing `x`'s itinerary for `period` steps, mapped forward
/// `period` times. For a periodic component this is the component itself.
///
/// The polygon stays in the coordinates of `x` and each continuity half-plane
/// is pulled back by the composite map so far. A clip is done exactly unless
/// every vertex is clearly inside in floating point.
pub fn component_by_itinerary(ia: &InducedAtlas, x: &Point2, period: u64, bound: &QSqrt2) -> Result<Option<ConvexPolygon>> {
    let branches = match scaled_itinerary(ia, x, period) {
        Some(Some(b)) if b.len() as u64 == period => Some(b),
        _ => exact_itinerary(ia, x, period)?,
    };
    let Some(branches) = branches else { return Ok(None) };
    let sm = ia.sector_map();
    let b = bound.clone();
    let nb = -bound;
    let mut poly = ConvexPolygon::new(vec![
        Point2::new(nb.clone(), nb.clone()),
        Point2::new(b.clone(), nb.clone()),
        Point2::new(b.clone(), b.clone()),
        Point2::new(nb, b),
    ])?;
    let mut verts64: Vec<(f64, f64)> = poly.vertices().iter().map(Point2::to_f64).collect();
    let mut total = AffineMap::identity();
    let mut total64 = affine_f64(&total);
    let mut cache: HashMap<Branch, (AffineMap, Affine64, Vec<HalfPlane>)> = HashMap::new();
    for br in branches {
        let (f, f64map, hps) = cache.entry(br).or_insert_with(|| {
            let f = sm.branch_map(br);
            let f64map = affine_f64(&f);
            (f, f64map, sm.branch_half_planes(br))
        });
        let moved: Vec<(f64, f64)> = verts64.iter().map(|&v| apply_f64(&total64, v)).collect();
        let mut inverse: Option<AffineMap> = None;
        for h in hps.iter() {
            let (a, bb) = (h.a.to_f64(), h.b.to_f64());
            let (dx, dy) = (bb.0 - a.0, bb.1 - a.1);
            let len = dx.hypot(dy);
            let clearly_inside = moved.iter().all(|v| (dx * (v.1 - a.1) - dy * (v.0 - a.0)) / len > SKIP_MARGIN);
            if clearly_inside {
                continue;
            }
            let inv = inverse.get_or_insert_with(|| total.inverse().expect("isometry"));
            match poly.clip(&h.map(inv)) {
                Some(p) => poly = p,
                None => return Ok(None),
            }
            verts64 = poly.vertices().iter().map(Point2::to_f64).collect();
        }
        total = f.compose(&total);
        total64 = compose_f64(f64map, &total64);
    }
    Ok(Some(poly.map(&total)?))
}

/// Exact area centroid.
pub fn centroid(poly: &ConvexPolygon) -> Point2 {
    let v = poly.vertices();
    let n = v.len();
    let mut cx = QSqrt2::zero();
    let mut cy = QSqrt2::zero();
    let mut a2 = QSqrt2::zero();
    for i in 0..n {
        let (p, q) = (&v[i], &v[(i + 1) % n]);
        let cr = p.cross(q);
        cx += &(&(&p.x + &q.x) * &cr);
        cy += &(&(&p.y + &q.y) * &cr);
        a2 += &cr;
    }
    let k = (QSqrt2::from_int(3) * a2).recip().expect("nondegenerate polygon");
    Point2::new(&cx * &k, &cy * &k)
}

fn inv_h(ia: &InducedAtlas, p: &Point2) -> Point2 {
    Point2::new(&p.x - &ia.h_map.t[0], &p.y - &ia.h_map.t[1])
}

fn inv_steps(ia: &InducedAtlas, p: &Point2, m: usize) -> Result<Option<Point2>> {
    let sm = ia.sector_map();
    let mut cur = p.clone();
    for _ in 0..m {
        match sm.inverse(&cur)? {
            Some(q) => cur = q,
            None => return Ok(None),
        }
    }
    Ok(Some(cur))
}

fn confirm(
    ia: &InducedAtlas,
    rd: &RenormalizationData,
    target: &ConvexPolygon,
    lift: &Lift,
) -> Result<bool> {
    let base = if lift.level < 0 { rd.necklace_component() } else { rd.component(&lift.address) };
    // apply in order: innermost m, then H, then the next m, ...
    let mut poly = base.polygon;
    for (idx, m) in lift.ms.iter().rev().enumerate() {
        let h_steps = usize::from(idx > 0);
        poly = match lift_component(&poly, h_steps, *m, ia) {
            Ok(p) => p,
            Err(crate::error::Error::LiftStraddles { .. }) => return Ok(false),
            Err(e) => return Err(e),
        };
    }
    Ok(poly.same_vertex_set(target))
}

/// `C = T′^m(H^n(C₀))` with a single `m ≤ max_m`.
pub fn match_literal(
    ia: &InducedAtlas,
    rd: &RenormalizationData,
    comp: &ConvexPolygon,
    center: &Point2,
    cfg: &SweepConfig,
) -> Result<Option<Lift>> {
    for m in 0..=cfg.max_m {
        let Some(mut z) = inv_steps(ia, center, m)? else { break };
        for n in 0..=cfg.max_n {
            if let Some((level, address)) = census_locate(&z, rd, cfg.census_depth) {
                let lift = Lift { ms: vec![m], n, level, address };
                // literal form: H^n first, then m steps
                let base = if level < 0 { rd.necklace_component() } else { rd.component(&lift.address) };
                match lift_component(&base.polygon, n, m, ia) {
                    Ok(p) if p.same_vertex_set(comp) => return Ok(Some(lift)),
                    _ => {}
                }
            }
            z = inv_h(ia, &z);
            if ia.sector.locate(&z) == Location::Exterior {
                break;
            }
        }
    }
    Ok(None)
}

/// `C = T′^{m₀} H T′^{m₁} H … (C₀)` with every `mᵢ ≤ max_m`.
pub fn match_recursive(
    ia: &InducedAtlas,
    rd: &RenormalizationData,
    comp: &ConvexPolygon,
    center: &Point2,
    cfg: &SweepConfig,
) -> Result<Option<Lift>> {
    fn go(
        ia: &InducedAtlas,
        rd: &RenormalizationData,
        comp: &ConvexPolygon,
        z: &Point2,
        ms: &mut Vec<usize>,
        cfg: &SweepConfig,
    ) -> Result<Option<Lift>> {
        for m in 0..=cfg.max_m {
            let Some(y) = inv_steps(ia, z, m)? else { break };
            ms.push(m);
            if let Some((level, address)) = census_locate(&y, rd, cfg.census_depth) {
                let lift = Lift { ms: ms.clone(), n: ms.len() - 1, level, address };
                if confirm(ia, rd, comp, &lift)? {
                    return Ok(Some(lift));
                }
            }
            if ms.len() <= cfg.max_n {
                let w = inv_h(ia, &y);
                if ia.sector.locate(&w) != Location::Exterior {
                    if let Some(l) = go(ia, rd, comp, &w, ms, cfg)? {
                        return Ok(Some(l));
                    }
                }
            }
            ms.pop();
        }
        Ok(None)
    }
    go(ia, rd, comp, center, &mut Vec::new(), cfg)
}

/// Sweeps the grid, extracts every component hit and matches it both ways.
pub fn sweep(ia: &InducedAtlas, rd: &RenormalizationData, cfg: &SweepConfig) -> Result<SweepReport> {
    let pts = grid_points(ia, cfg);
    let bound = {
        let mut b = cfg.y_max.abs();
        for p in &pts {
            b = b.max(p.x.abs()).max(p.y.abs());
        }
        b.double() + QSqrt2::from_int(10)
    };
    let mut report = SweepReport {
        grid_points: pts.len(),
        skipped_inside_known: 0,
        singular_points: 0,
        over_budget_points: 0,
        components: Vec::new(),
    };
    for x in &pts {
        if report.components.iter().any(|c| c.polygon.locate(x) != Location::Exterior) {
            report.skipped_inside_known += 1;
            continue;
        }
        let Some(period) = sector_period(ia, x, cfg.period_budget)? else {
            report.over_budget_points += 1;
            continue;
        };
        let Some(poly) = component_by_itinerary(ia, x, period, &bound)? else {
            report.singular_points += 1;
            continue;
        };
        let center = centroid(&poly);
        let literal = match_literal(ia, rd, &poly, &center, cfg)?;
        let recursive = match &literal {
            Some(l) => Some(l.clone()),
            None => match_recursive(ia, rd, &poly, &center, cfg)?,
        };
        report.components.push(FoundComponent {
            center,
            period,
            area: poly.area(),
            polygon: poly,
            witness: x.clone(),
            literal,
            recursive,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::renorm::build_renormalization;

    #[test]
    fn scaled_period_matches_exact() {
        let ia = crate::induced::canonical();
        let rd = build_renormalization(&ia);
        let cfg = SweepConfig::acceptance(&ia, &rd);
        for x in grid_points(&ia, &cfg).iter().step_by(97).take(8) {
            let fast = scaled_sector_period(&ia, x, 3000);
            let exact = exact_sector_period(&ia, x, 3000).unwrap();
            assert_eq!(fast, Some(exact), "at {x:?}");
        }
    }
}

#[cfg(test)]
mod culling_tests {
    use super::*;
    use crate::renorm::build_renormalization;

    /// Clip by every half-plane and move the polygon each step.
    fn naive(ia: &InducedAtlas, x: &Point2, period: u64, bound: &QSqrt2) -> Option<ConvexPolygon> {
        let sm = ia.sector_map();
        let (b, nb) = (bound.clone(), -bound);
        let mut poly = ConvexPolygon::new(vec![
            Point2::new(nb.clone(), nb.clone()),
            Point2::new(b.clone(), nb.clone()),
            Point2::new(b.clone(), b.clone()),
            Point2::new(nb, b),
        ])
        .unwrap();
        let mut cur = x.clone();
        for _ in 0..period {
            let br = sm.branch(&cur).unwrap()?;
            for h in sm.branch_half_planes(br) {
                poly = poly.clip(&h)?;
            }
            let f = sm.branch_map(br);
            poly = poly.map(&f).unwrap();
            cur = f.apply(&cur);
        }
        Some(poly)
    }

    #[test]
    fn culled_extraction_matches_naive() {
        let ia = crate::induced::canonical();
        let rd = build_renormalization(&ia);
        let cfg = SweepConfig::acceptance(&ia, &rd);
        let bound = QSqrt2::from_int(60);
        let mut checked = 0;
        for x in grid_points(&ia, &cfg).iter().step_by(13) {
            let Some(p) = sector_period(&ia, x, 400).unwrap() else { continue };
            let fast = component_by_itinerary(&ia, x, p, &bound).unwrap().unwrap();
            let slow = naive(&ia, x, p, &bound).unwrap();
            assert!(fast.same_vertex_set(&slow), "at {x:?}");
            checked += 1;
            if checked == 6 {
                break;
            }
        }
        assert_eq!(checked, 6);
    }
}
