//! The outer billiard map `T` outside the canonical regular octagon.
//!
//! A point `p` outside the table is reflected through the vertex where the
//! right tangent from `p` touches the table. With edge vectors
//! `e_i = A_{i+1} - A_i` and `σ_i(p) = e_i × (p - A_i)`, vertex `A_j` serves
//! the open cone `σ_{j-1} < 0 < σ_j`. The cones are separated by the
//! backward edge extensions `A_j - s·e_j` (`s > 0`), where `T` is undefined.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{QSqrt2, Sign};
use crate::scaled::{Frame, ScaledTable};
use crate::geometry::{
    line_intersection, orientation, reflect_point, AffineMap, ConvexPolygon, Location, Point2, SimplePolygon,
};

/// Default iteration budget for [`orbit`].
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Result of tangent resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tangent {
    Vertex(usize),
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OrbitOutcome {
    Periodic { period: u64 },
    #[serde(rename = "singular")]
    HitSingular { step: u64 },
    BudgetExceeded { budget: u64 },
    /// Never produced for a bounded table; kept for schema stability.
    Escaped { step: u64 },
}

impl OrbitOutcome {
    pub fn period(&self) -> Option<u64> {
        match self {
            OrbitOutcome::Periodic { period } => Some(*period),
            _ => None,
        }
    }
}

/// Which side of the tangent is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

/// Tangent vertex for an arbitrary strictly convex table.
///
/// Errors when `p` is not strictly outside the table.
pub fn tangent_vertex_of(table: &ConvexPolygon, p: &Point2) -> Result<Tangent> {
    tangent_generic(table, p, Direction::Forward)
}

/// Tangent vertex used by `T⁻¹` (the left tangent).
pub fn tangent_vertex_inv_of(table: &ConvexPolygon, p: &Point2) -> Result<Tangent> {
    tangent_generic(table, p, Direction::Backward)
}

fn tangent_generic(table: &ConvexPolygon, p: &Point2, dir: Direction) -> Result<Tangent> {
    if table.locate(p) != Location::Exterior {
        return Err(Error::Precondition(format!("point {p:?} is not outside the table")));
    }
    let v = table.vertices();
    let n = v.len();
    let sigma: Vec<Sign> = (0..n)
        .map(|i| (&v[(i + 1) % n] - &v[i]).cross(&(p - &v[i])).sign())
        .collect();
    for j in 0..n {
        let prev = sigma[(j + n - 1) % n];
        let cur = sigma[j];
        let (served, singular) = match dir {
            Direction::Forward => (
                prev == Sign::Negative && cur == Sign::Positive,
                prev == Sign::Negative && cur == Sign::Zero,
            ),
            Direction::Backward => (
                prev == Sign::Positive && cur == Sign::Negative,
                prev == Sign::Zero && cur == Sign::Negative,
            ),
        };
        if served {
            return Ok(Tangent::Vertex(j));
        }
        if singular {
            return Ok(Tangent::Singular);
        }
    }
    unreachable!("exterior point of a convex polygon lies in some tangent cone or ray")
}

/// The table, its edge lines, corner points, necklace and the region `Z`.
#[derive(Clone, Debug)]
pub struct TableAtlas {
    pub table: ConvexPolygon,
    /// `l_i` through `A_i` and `A_{i+1}`.
    pub edge_lines: [(Point2, Point2); 8],
    /// `C_i = l_{i-1} ∩ l_{i+1}`.
    pub corner_points: [Point2; 8],
    /// `γ^i`, the reflection of the table through `C_i`; vertex `j` is `A^i_j = 2C_i - A_j`.
    pub necklace: [ConvexPolygon; 8],
    pub region_z: SimplePolygon,
}

impl TableAtlas {
    pub fn vertex(&self, j: usize) -> &Point2 {
        &self.table.vertices()[j % 8]
    }

    /// `A^i_j`.
    pub fn necklace_vertex(&self, i: usize, j: usize) -> &Point2 {
        &self.necklace[i % 8].vertices()[j % 8]
    }

    pub fn center(&self) -> Point2 {
        Point2::origin()
    }

    pub fn necklace_center(&self, i: usize) -> Point2 {
        reflect_point(&self.center(), &self.corner_points[i % 8])
    }

    pub fn tangent_vertex(&self, p: &Point2) -> Result<Tangent> {
        tangent_vertex_of(&self.table, p)
    }

    /// `T(p)`; `None` on the singular set.
    pub fn step(&self, p: &Point2) -> Result<Option<Point2>> {
        Ok(match self.tangent_vertex(p)? {
            Tangent::Vertex(j) => Some(reflect_point(p, self.vertex(j))),
            Tangent::Singular => None,
        })
    }

    /// `T⁻¹(p)`; `None` on the singular set of the inverse.
    pub fn step_inv(&self, p: &Point2) -> Result<Option<Point2>> {
        Ok(match tangent_vertex_inv_of(&self.table, p)? {
            Tangent::Vertex(j) => Some(reflect_point(p, self.vertex(j))),
            Tangent::Singular => None,
        })
    }

    /// Membership in the open invariant region: inside `Z`'s cycle and off the table.
    pub fn in_region_z(&self, p: &Point2) -> bool {
        self.region_z.locate(p) == Location::Interior && self.table.locate(p) == Location::Exterior
    }
}

/// Constructs the canonical atlas: `γ` with vertices `(±1, ±(1+√2))`, `(±(1+√2), ±1)`, side 2.
pub fn build_table_atlas() -> TableAtlas {
    let table = crate::geometry::regular_octagon(&Point2::origin(), &QSqrt2::from_int(2));
    let a: Vec<Point2> = table.vertices().to_vec();
    let edge_lines: [(Point2, Point2); 8] =
        std::array::from_fn(|i| (a[i].clone(), a[(i + 1) % 8].clone()));
    let corner_points: [Point2; 8] = std::array::from_fn(|i| {
        let (p1, p2) = &edge_lines[(i + 7) % 8];
        let (q1, q2) = &edge_lines[(i + 1) % 8];
        line_intersection(p1, p2, q1, q2).expect("l_(i-1) and l_(i+1) are perpendicular")
    });
    let necklace: [ConvexPolygon; 8] = std::array::from_fn(|i| {
        table
            .map(&AffineMap::point_reflection(&corner_points[i]))
            .expect("point reflection keeps convexity")
    });
    // outer cycle: A^i_{i+2}, A^i_{i+1}, A^i_i for each i
    let mut z = Vec::with_capacity(24);
    for (i, g) in necklace.iter().enumerate() {
        for d in [2, 1, 0] {
            z.push(g.vertices()[(i + d) % 8].clone());
        }
    }
    let region_z = SimplePolygon::new(z).expect("necklace star cycle is counterclockwise");
    TableAtlas { table, edge_lines, corner_points, necklace, region_z }
}

/// `T(p)` as a free function.
pub fn billiard_step(p: &Point2, atlas: &TableAtlas) -> Result<Option<Point2>> {
    atlas.step(p)
}

/// `T⁻¹(p)` as a free function.
pub fn billiard_step_inv(p: &Point2, atlas: &TableAtlas) -> Result<Option<Point2>> {
    atlas.step_inv(p)
}

/// Iterates `T` until the first exact return to `p`.
///
/// Reflections through the table's vertices never change denominators, so
/// the orbit is run on integer coordinates over a common denominator when
/// they fit in `i128`; the rational path is the fallback and the reference.
pub fn orbit(p: &Point2, atlas: &TableAtlas, budget: u64) -> Result<OrbitOutcome> {
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    if atlas.table.locate(p) != Location::Exterior {
        return Err(Error::Precondition(format!("point {p:?} is not outside the table")));
    }
    if let Some(out) = scaled_orbit(p, atlas, budget) {
        return Ok(out);
    }
    orbit_exact(p, atlas, budget)
}

fn scaled_orbit(p: &Point2, atlas: &TableAtlas, budget: u64) -> Option<OrbitOutcome> {
    let frame = Frame::for_points(std::slice::from_ref(p), 1)?;
    let table = ScaledTable::new(&frame, atlas.table.vertices())?;
    let start = frame.point(p)?;
    let mut cur = start;
    for step in 0..budget {
        let next = match table.tangent(&cur)? {
            Tangent::Vertex(j) => table.reflect(j, &cur)?,
            Tangent::Singular => return Some(OrbitOutcome::HitSingular { step }),
        };
        if next == start {
            return Some(OrbitOutcome::Periodic { period: step + 1 });
        }
        cur = next;
    }
    Some(OrbitOutcome::BudgetExceeded { budget })
}

/// `T` applied to a whole polygon lying in one closed tangent cone.
///
/// `None` if the polygon's vertex mean is singular or the polygon straddles
/// two cones.
pub fn step_polygon(poly: &ConvexPolygon, atlas: &TableAtlas) -> Result<Option<ConvexPolygon>> {
    let Tangent::Vertex(j) = atlas.tangent_vertex(&poly.vertex_mean())? else { return Ok(None) };
    let a = atlas.vertex(j);
    let prev = atlas.vertex(j + 7);
    let next = atlas.vertex(j + 1);
    // closed cone: right of A_{j-1}A_j extended, left of A_jA_{j+1} extended
    let in_cone = poly.vertices().iter().all(|v| {
        orientation(prev, a, v) != Sign::Positive && orientation(a, next, v) != Sign::Negative
    });
    if !in_cone {
        return Ok(None);
    }
    Ok(Some(poly.map(&AffineMap::point_reflection(a))?))
}

/// [`orbit`] on arbitrary-precision rationals only.
pub fn orbit_exact(p: &Point2, atlas: &TableAtlas, budget: u64) -> Result<OrbitOutcome> {
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    let mut cur = p.clone();
    for step in 0..budget {
        match atlas.step(&cur)? {
            None => return Ok(OrbitOutcome::HitSingular { step }),
            Some(next) if next == *p => return Ok(OrbitOutcome::Periodic { period: step + 1 }),
            Some(next) => cur = next,
        }
    }
    Ok(OrbitOutcome::BudgetExceeded { budget })
}

/// The `k` iterates `p, T p, …, T^{k-1} p`, stopping early at a singular point.
pub fn trajectory(p: &Point2, atlas: &TableAtlas, k: usize) -> Result<Vec<Point2>> {
    let mut out = vec![p.clone()];
    while out.len() < k {
        match atlas.step(out.last().expect("nonempty"))? {
            Some(q) => out.push(q),
            None => break,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotate_octant;

    #[test]
    fn corner_points_by_line_intersection() {
        let at = build_table_atlas();
        assert_eq!(at.corner_points[1], Point2::from_ints(1, 1, 1, 1));
        assert_eq!(at.corner_points[2], Point2::from_ints(0, 0, 2, 1));
        assert_eq!(at.corner_points[0], Point2::from_ints(2, 1, 0, 0));
    }

    #[test]
    fn necklace_center_two() {
        let at = build_table_atlas();
        assert_eq!(at.necklace_center(2), Point2::from_ints(0, 0, 4, 2));
    }

    /// Brute force: the vertex whose line from `p` leaves the whole table on its left.
    fn right_tangent_oracle(at: &TableAtlas, p: &Point2) -> Vec<usize> {
        (0..8)
            .filter(|&j| {
                (0..8).filter(|&i| i != j).all(|i| {
                    crate::geometry::orientation(p, at.vertex(j), at.vertex(i)) == Sign::Positive
                })
            })
            .collect()
    }

    #[test]
    fn center_of_gamma2_tangent_matches_scan() {
        let at = build_table_atlas();
        let c = at.necklace_center(2);
        assert_eq!(right_tangent_oracle(&at, &c), vec![4]);
        assert_eq!(at.tangent_vertex(&c).unwrap(), Tangent::Vertex(4));
        let img = at.step(&c).unwrap().unwrap();
        assert_eq!(img, at.necklace_center(5));
    }

    #[test]
    fn backward_extension_is_singular() {
        let at = build_table_atlas();
        // A_1 - e_1 is on the backward extension of edge 1; A_2 + e_1 on its forward one
        let a1 = at.vertex(1).clone();
        let a2 = at.vertex(2).clone();
        let e1 = &a2 - &a1;
        let beyond_a1 = &a1 - &e1;
        assert_eq!(at.tangent_vertex(&beyond_a1).unwrap(), Tangent::Singular);
        let beyond_a2 = &a2 + &e1;
        assert_eq!(at.step_inv(&beyond_a2).unwrap(), None);
    }

    #[test]
    fn inside_is_a_precondition_error() {
        let at = build_table_atlas();
        assert!(matches!(at.step(&Point2::origin()), Err(Error::Precondition(_))));
        assert!(matches!(at.step(at.vertex(0)), Err(Error::Precondition(_))));
    }

    #[test]
    fn gamma2_center_has_period_8() {
        let at = build_table_atlas();
        let out = orbit(&at.necklace_center(2), &at, DEFAULT_BUDGET).unwrap();
        assert_eq!(out, OrbitOutcome::Periodic { period: 8 });
    }

    #[test]
    fn equivariance_advances_vertex() {
        let at = build_table_atlas();
        let p = Point2::from_ints(7, 0, 3, 0);
        let Tangent::Vertex(j) = at.tangent_vertex(&p).unwrap() else { panic!() };
        let q = rotate_octant(&p, &Point2::origin(), 1);
        assert_eq!(at.tangent_vertex(&q).unwrap(), Tangent::Vertex((j + 1) % 8));
    }

    #[test]
    fn scaled_orbit_matches_exact() {
        let at = build_table_atlas();
        let seeds = [
            at.necklace_center(2),
            Point2::new(QSqrt2::from_fracs(18, 17, 14, 17), QSqrt2::from_fracs(30, 17, 12, 17)),
            Point2::new(QSqrt2::from_fracs(7, 3, 0, 1), QSqrt2::from_fracs(5, 2, 1, 5)),
            Point2::from_ints(9, 0, 1, 0),
        ];
        for p in seeds {
            assert_eq!(orbit(&p, &at, 5_000).unwrap(), orbit_exact(&p, &at, 5_000).unwrap(), "{p:?}");
        }
    }

    #[test]
    fn necklace_advances_by_three() {
        let at = build_table_atlas();
        for i in 0..8 {
            let img = step_polygon(&at.necklace[i], &at).unwrap().expect("one cone");
            assert!(img.same_vertex_set(&at.necklace[(i + 3) % 8]), "i = {i}");
        }
    }

    #[test]
    fn zero_budget_rejected() {
        let at = build_table_atlas();
        assert!(orbit(&at.necklace_center(2), &at, 0).is_err());
    }

    #[test]
    fn outcome_json_shape() {
        let s = serde_json::to_string(&OrbitOutcome::Periodic { period: 8 }).unwrap();
        assert_eq!(s, r#"{"outcome":"periodic","period":8}"#);
        let s = serde_json::to_string(&OrbitOutcome::HitSingular { step: 0 }).unwrap();
        assert_eq!(s, r#"{"outcome":"singular","step":0}"#);
    }
}
