//! Exact planar primitives over Q(√2).
//!
//! Points, affine maps, convex and simple polygons, and the orientation
//! predicate everything else is built on. Degenerate inputs are exact
//! outcomes (`Sign::Zero`, `Location::Boundary`), never approximations.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{QSqrt2, Sign};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point2 {
    pub x: QSqrt2,
    pub y: QSqrt2,
}

impl Point2 {
    pub fn new(x: QSqrt2, y: QSqrt2) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(QSqrt2::zero(), QSqrt2::zero())
    }

    /// Point with integer coordinates `(ax + bx√2, ay + by√2)`.
    pub fn from_ints(ax: i64, bx: i64, ay: i64, by: i64) -> Self {
        Point2::new(QSqrt2::from_ints(ax, bx), QSqrt2::from_ints(ay, by))
    }

    pub fn scale(&self, s: &QSqrt2) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, o: &Point2) -> QSqrt2 {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point2) -> QSqrt2 {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm_sq(&self) -> QSqrt2 {
        self.dot(self)
    }

    pub fn midpoint(&self, o: &Point2) -> Point2 {
        Point2::new((&self.x + &o.x).half(), (&self.y + &o.y).half())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<'a> Add<&'a Point2> for &'a Point2 {
    type Output = Point2;
    fn add(self, o: &'a Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Sub<&'a Point2> for &'a Point2 {
    type Output = Point2;
    fn sub(self, o: &'a Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

/// Exact sign of `(q - p) × (r - p)`; positive for a counterclockwise turn.
pub fn orientation(p: &Point2, q: &Point2, r: &Point2) -> Sign {
    (q - p).cross(&(r - p)).sign()
}

/// `2c - p`.
pub fn reflect_point(p: &Point2, c: &Point2) -> Point2 {
    Point2::new(c.x.double() - &p.x, c.y.double() - &p.y)
}

/// Cosine and sine of `k·π/4`, exactly.
pub fn octant_cos_sin(k: i64) -> (QSqrt2, QSqrt2) {
    let h = QSqrt2::from_fracs(0, 1, 1, 2);
    let z = QSqrt2::zero();
    let one = QSqrt2::one();
    match k.rem_euclid(8) {
        0 => (one, z),
        1 => (h.clone(), h),
        2 => (z, one),
        3 => (-&h, h),
        4 => (-one, z),
        5 => (-&h, -&h),
        6 => (z, -one),
        _ => (h.clone(), -h),
    }
}

/// Rotation of `p` about `center` by `k·π/4`.
pub fn rotate_octant(p: &Point2, center: &Point2, k: i64) -> Point2 {
    AffineMap::rotation_octant(center, k).apply(p)
}

/// Intersection of line `p1p2` with line `q1q2`.
pub fn line_intersection(p1: &Point2, p2: &Point2, q1: &Point2, q2: &Point2) -> Result<Point2> {
    let d1 = p2 - p1;
    let d2 = q2 - q1;
    let den = d1.cross(&d2);
    if den.is_zero() {
        return Err(Error::ParallelLines);
    }
    let t = (q1 - p1).cross(&d2).checked_div(&den)?;
    Ok(p1 + &d1.scale(&t))
}

/// Signed shoelace area; positive for counterclockwise order.
pub fn polygon_area(vertices: &[Point2]) -> QSqrt2 {
    let n = vertices.len();
    let mut acc = QSqrt2::zero();
    for i in 0..n {
        acc += &vertices[i].cross(&vertices[(i + 1) % n]);
    }
    acc.half()
}

/// Vertex average.
pub fn vertex_mean(vertices: &[Point2]) -> Point2 {
    let mut sx = QSqrt2::zero();
    let mut sy = QSqrt2::zero();
    for v in vertices {
        sx += &v.x;
        sy += &v.y;
    }
    let n = QSqrt2::from_int(vertices.len() as i64).recip().expect("nonempty");
    Point2::new(&sx * &n, &sy * &n)
}

/// True when the two vertex lists describe the same set of points.
pub fn same_vertex_set(a: &[Point2], b: &[Point2]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.contains(p)) && b.iter().all(|p| a.contains(p))
}

/// `p ↦ M p + t` with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    pub m: [[QSqrt2; 2]; 2],
    pub t: [QSqrt2; 2],
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] + ({}, {})",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1], self.t[0], self.t[1]
        )
    }
}

impl AffineMap {
    pub fn new(m: [[QSqrt2; 2]; 2], t: [QSqrt2; 2]) -> Self {
        AffineMap { m, t }
    }

    pub fn identity() -> Self {
        let (o, z) = (QSqrt2::one(), QSqrt2::zero());
        AffineMap::new([[o.clone(), z.clone()], [z.clone(), o]], [z.clone(), z])
    }

    pub fn translation(v: &Point2) -> Self {
        let mut f = AffineMap::identity();
        f.t = [v.x.clone(), v.y.clone()];
        f
    }

    /// Linear part `m`, fixing `center`.
    fn about(m: [[QSqrt2; 2]; 2], center: &Point2) -> Self {
        let lin = AffineMap::new(m, [QSqrt2::zero(), QSqrt2::zero()]);
        let mc = lin.apply(center);
        AffineMap::new(lin.m, [&center.x - &mc.x, &center.y - &mc.y])
    }

    pub fn rotation_octant(center: &Point2, k: i64) -> Self {
        let (c, s) = octant_cos_sin(k);
        AffineMap::about([[c.clone(), -&s], [s, c]], center)
    }

    /// Central symmetry through `c`.
    pub fn point_reflection(c: &Point2) -> Self {
        AffineMap::rotation_octant(c, 4)
    }

    pub fn homothety(center: &Point2, ratio: &QSqrt2) -> Self {
        let z = QSqrt2::zero();
        AffineMap::about([[ratio.clone(), z.clone()], [z, ratio.clone()]], center)
    }

    /// The orientation-preserving similarity sending `p0 ↦ q0` and `p1 ↦ q1`.
    pub fn direct_similarity(p0: &Point2, p1: &Point2, q0: &Point2, q1: &Point2) -> Result<Self> {
        // complex quotient (q1 - q0) / (p1 - p0)
        let u = q1 - q0;
        let w = p1 - p0;
        let den = w.norm_sq();
        let re = (&u.x * &w.x + &u.y * &w.y).checked_div(&den)?;
        let im = (&u.y * &w.x - &u.x * &w.y).checked_div(&den)?;
        let lin = AffineMap::new([[re.clone(), -&im], [im, re]], [QSqrt2::zero(), QSqrt2::zero()]);
        let lp0 = lin.apply(p0);
        Ok(AffineMap::new(lin.m, [&q0.x - &lp0.x, &q0.y - &lp0.y]))
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        Point2::new(
            &self.m[0][0] * &p.x + &self.m[0][1] * &p.y + &self.t[0],
            &self.m[1][0] * &p.x + &self.m[1][1] * &p.y + &self.t[1],
        )
    }

    /// `self ∘ g`: apply `g` first.
    pub fn compose(&self, g: &AffineMap) -> AffineMap {
        let a = &self.m;
        let b = &g.m;
        let m = [
            [
                &a[0][0] * &b[0][0] + &a[0][1] * &b[1][0],
                &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1],
            ],
            [
                &a[1][0] * &b[0][0] + &a[1][1] * &b[1][0],
                &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1],
            ],
        ];
        let tp = self.apply(&Point2::new(g.t[0].clone(), g.t[1].clone()));
        AffineMap::new(m, [tp.x, tp.y])
    }

    pub fn det(&self) -> QSqrt2 {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let d = self.det();
        let inv_d = d.recip().map_err(|_| Error::SingularSystem)?;
        let m = [
            [&self.m[1][1] * &inv_d, -(&self.m[0][1] * &inv_d)],
            [-(&self.m[1][0] * &inv_d), &self.m[0][0] * &inv_d],
        ];
        let lin = AffineMap::new(m, [QSqrt2::zero(), QSqrt2::zero()]);
        let t = lin.apply(&Point2::new(self.t[0].clone(), self.t[1].clone()));
        Ok(AffineMap::new(lin.m, [-t.x, -t.y]))
    }

    /// Solves `(I - M) x = t` exactly.
    pub fn fixed_point(&self) -> Result<Point2> {
        let one = QSqrt2::one();
        let a = &one - &self.m[0][0];
        let b = -&self.m[0][1];
        let c = -&self.m[1][0];
        let d = &one - &self.m[1][1];
        let det = &a * &d - &b * &c;
        if det.is_zero() {
            return Err(Error::SingularSystem);
        }
        let x = (&d * &self.t[0] - &b * &self.t[1]).checked_div(&det)?;
        let y = (&a * &self.t[1] - &c * &self.t[0]).checked_div(&det)?;
        Ok(Point2::new(x, y))
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineMap::identity()
    }

    /// Columns unit length and perpendicular, exactly.
    pub fn is_isometry(&self) -> bool {
        self.similarity_ratio_sq().map(|r| r == QSqrt2::one()).unwrap_or(false)
    }

    /// `λ²` when the matrix is `λ·(orthogonal)`, else `None`.
    pub fn similarity_ratio_sq(&self) -> Option<QSqrt2> {
        let c0 = Point2::new(self.m[0][0].clone(), self.m[1][0].clone());
        let c1 = Point2::new(self.m[0][1].clone(), self.m[1][1].clone());
        let n0 = c0.norm_sq();
        (n0 == c1.norm_sq() && c0.dot(&c1).is_zero() && !n0.is_zero()).then_some(n0)
    }

    /// Similarity ratio `λ`, when the map is a similarity and `λ ∈ Q(√2)`.
    pub fn similarity_ratio(&self) -> Option<QSqrt2> {
        self.similarity_ratio_sq().and_then(|r| r.sqrt())
    }

    pub fn preserves_orientation(&self) -> bool {
        self.det().is_positive()
    }

    /// `k` when the linear part is `ratio · rotation(k·π/4)`.
    pub fn rotation_octant_index(&self) -> Option<i64> {
        let ratio = self.similarity_ratio()?;
        (0..8).find(|&k| {
            let (c, s) = octant_cos_sin(k);
            self.m[0][0] == &c * &ratio
                && self.m[1][0] == &s * &ratio
                && self.m[0][1] == -(&s * &ratio)
                && self.m[1][1] == &c * &ratio
        })
    }
}

/// Exact point classification against a region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// Closed half-plane to the left of the directed line `a → b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub a: Point2,
    pub b: Point2,
}

impl HalfPlane {
    pub fn left_of(a: Point2, b: Point2) -> Self {
        HalfPlane { a, b }
    }

    /// Positive strictly inside, zero on the line.
    pub fn side(&self, p: &Point2) -> Sign {
        orientation(&self.a, &self.b, p)
    }

    pub fn map(&self, f: &AffineMap) -> HalfPlane {
        let (a, b) = (f.apply(&self.a), f.apply(&self.b));
        if f.preserves_orientation() {
            HalfPlane::left_of(a, b)
        } else {
            HalfPlane::left_of(b, a)
        }
    }

    /// Keeps the part of a convex vertex cycle inside the closed half-plane.
    pub fn clip(&self, poly: &[Point2]) -> Vec<Point2> {
        let n = poly.len();
        let mut out = Vec::with_capacity(n + 1);
        let vals: Vec<QSqrt2> = poly
            .iter()
            .map(|p| (&self.b - &self.a).cross(&(p - &self.a)))
            .collect();
        for i in 0..n {
            let j = (i + 1) % n;
            let (fa, fb) = (&vals[i], &vals[j]);
            if fa.sign() != Sign::Negative {
                out.push(poly[i].clone());
            }
            let crosses = (fa.is_positive() && fb.is_negative()) || (fa.is_negative() && fb.is_positive());
            if crosses {
                let t = fa.checked_div(&(fa - fb)).expect("distinct signs");
                out.push(&poly[i] + &(&poly[j] - &poly[i]).scale(&t));
            }
        }
        cleanup_cycle(out)
    }
}

/// Drops repeated and collinear vertices from a convex cycle.
pub fn cleanup_cycle(mut pts: Vec<Point2>) -> Vec<Point2> {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let drop = (0..n).find(|&i| orientation(&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]) == Sign::Zero);
        match drop {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

/// Strictly convex polygon, counterclockwise.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl fmt::Debug for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}

impl TryFrom<Vec<Point2>> for ConvexPolygon {
    type Error = Error;
    fn try_from(v: Vec<Point2>) -> Result<Self> {
        ConvexPolygon::new(v)
    }
}

impl From<ConvexPolygon> for Vec<Point2> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

impl ConvexPolygon {
    /// Validates strict convexity and counterclockwise order.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices")));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(Error::InvalidPolygon("repeated vertex".into()));
                }
            }
        }
        for i in 0..n {
            let s = orientation(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if s != Sign::Positive {
                return Err(Error::InvalidPolygon(format!(
                    "turn at vertex {} is {:?}",
                    (i + 1) % n,
                    s
                )));
            }
        }
        // a strictly convex turn sequence can still wind twice
        if !polygon_area(&vertices).is_positive() {
            return Err(Error::InvalidPolygon("not counterclockwise".into()));
        }
        Ok(ConvexPolygon { vertices })
    }

    /// Like [`ConvexPolygon::new`] but accepts either orientation.
    pub fn from_cycle(mut vertices: Vec<Point2>) -> Result<Self> {
        if polygon_area(&vertices).is_negative() {
            vertices.reverse();
        }
        ConvexPolygon::new(vertices)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> QSqrt2 {
        polygon_area(&self.vertices)
    }

    pub fn vertex_mean(&self) -> Point2 {
        vertex_mean(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point2, &Point2)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn half_planes(&self) -> Vec<HalfPlane> {
        self.edges()
            .map(|(a, b)| HalfPlane::left_of(a.clone(), b.clone()))
            .collect()
    }

    pub fn locate(&self, p: &Point2) -> Location {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            match orientation(a, b, p) {
                Sign::Negative => return Location::Exterior,
                Sign::Zero => on_edge = true,
                Sign::Positive => {}
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    pub fn contains_interior(&self, p: &Point2) -> bool {
        self.locate(p) == Location::Interior
    }

    pub fn contains_closed(&self, p: &Point2) -> bool {
        self.locate(p) != Location::Exterior
    }

    /// Every vertex of `other` lies in the closure of `self`.
    pub fn contains_polygon(&self, other: &ConvexPolygon) -> bool {
        other.vertices.iter().all(|v| self.contains_closed(v))
    }

    pub fn map(&self, f: &AffineMap) -> Result<ConvexPolygon> {
        ConvexPolygon::from_cycle(self.vertices.iter().map(|v| f.apply(v)).collect())
    }

    pub fn same_vertex_set(&self, other: &ConvexPolygon) -> bool {
        same_vertex_set(&self.vertices, &other.vertices)
    }

    /// Intersection with a closed half-plane; `None` when it has no interior.
    pub fn clip(&self, h: &HalfPlane) -> Option<ConvexPolygon> {
        ConvexPolygon::new(h.clip(&self.vertices)).ok()
    }
}

/// Simple (possibly non-convex) polygon, counterclockwise.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<Point2>")]
pub struct SimplePolygon {
    vertices: Vec<Point2>,
}

impl From<SimplePolygon> for Vec<Point2> {
    fn from(p: SimplePolygon) -> Self {
        p.vertices
    }
}

impl fmt::Debug for SimplePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}

impl SimplePolygon {
    /// Checks orientation and distinct vertices; simplicity is the caller's contract.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon("fewer than 3 vertices".into()));
        }
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if vertices[i] == vertices[j] {
                    return Err(Error::InvalidPolygon("repeated vertex".into()));
                }
            }
        }
        if !polygon_area(&vertices).is_positive() {
            return Err(Error::InvalidPolygon("not counterclockwise".into()));
        }
        Ok(SimplePolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn area(&self) -> QSqrt2 {
        polygon_area(&self.vertices)
    }

    pub fn map(&self, f: &AffineMap) -> Result<SimplePolygon> {
        let mut v: Vec<Point2> = self.vertices.iter().map(|p| f.apply(p)).collect();
        if !f.preserves_orientation() {
            v.reverse();
        }
        SimplePolygon::new(v)
    }

    /// Exact winding-number classification.
    pub fn locate(&self, p: &Point2) -> Location {
        let n = self.vertices.len();
        let mut winding = 0i64;
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            let o = orientation(a, b, p);
            if o == Sign::Zero && within_box(a, b, p) {
                return Location::Boundary;
            }
            let a_le = a.y <= p.y;
            let b_le = b.y <= p.y;
            if a_le && !b_le && o == Sign::Positive {
                winding += 1;
            } else if !a_le && b_le && o == Sign::Negative {
                winding -= 1;
            }
        }
        if winding != 0 {
            Location::Interior
        } else {
            Location::Exterior
        }
    }
}

fn within_box(a: &Point2, b: &Point2, p: &Point2) -> bool {
    let (lo_x, hi_x) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (lo_y, hi_y) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *lo_x <= p.x && p.x <= *hi_x && *lo_y <= p.y && p.y <= *hi_y
}

/// Regular octagon with sides parallel to the coordinate axes and diagonals,
/// given its center and side length.
pub fn regular_octagon(center: &Point2, side: &QSqrt2) -> ConvexPolygon {
    // apothem r = s(1+√2)/2; vertices at (±s/2, ±r) and (±r, ±s/2)
    let h = side.half();
    let r = (side * &QSqrt2::from_ints(1, 1)).half();
    let offs = [
        (r.clone(), -&h),
        (r.clone(), h.clone()),
        (h.clone(), r.clone()),
        (-&h, r.clone()),
        (-&r, h.clone()),
        (-&r, -&h),
        (-&h, -&r),
        (h, -r),
    ];
    let v = offs
        .into_iter()
        .map(|(dx, dy)| Point2::new(&center.x + &dx, &center.y + &dy))
        .collect();
    ConvexPolygon::new(v).expect("regular octagon is convex")
}

/// Area of a regular octagon of side `s`: `2(1+√2)s²`.
pub fn regular_octagon_area(side: &QSqrt2) -> QSqrt2 {
    QSqrt2::from_ints(2, 2) * side.square()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point2 {
        Point2::from_ints(x, 0, y, 0)
    }

    #[test]
    fn orientation_cases() {
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)), Sign::Positive);
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(2, 0)), Sign::Zero);
        assert_eq!(orientation(&p(0, 0), &p(0, 1), &p(1, 0)), Sign::Negative);
    }

    #[test]
    fn rotations() {
        let o = Point2::origin();
        assert_eq!(rotate_octant(&p(1, 0), &o, 2), p(0, 1));
        let h = QSqrt2::from_fracs(0, 1, 1, 2);
        assert_eq!(rotate_octant(&p(1, 0), &o, 1), Point2::new(h.clone(), h));
        let q = Point2::from_ints(3, 1, -2, 5);
        assert_eq!(rotate_octant(&q, &p(7, 7), 0), q);
    }

    #[test]
    fn reflections() {
        assert_eq!(reflect_point(&p(0, 0), &p(1, 1)), p(2, 2));
        assert_eq!(reflect_point(&p(4, 5), &p(4, 5)), p(4, 5));
        assert_eq!(reflect_point(&p(3, -1), &p(0, 0)), p(-3, 1));
    }

    #[test]
    fn fixed_points() {
        let f = AffineMap::rotation_octant(&p(1, 1), 2);
        assert_eq!(f.fixed_point().unwrap(), p(1, 1));
        assert!(matches!(
            AffineMap::identity().fixed_point(),
            Err(Error::SingularSystem)
        ));
    }

    #[test]
    fn axes_intersect_at_origin() {
        let o = line_intersection(&p(-1, 0), &p(1, 0), &p(0, -3), &p(0, 5)).unwrap();
        assert_eq!(o, p(0, 0));
        assert!(matches!(
            line_intersection(&p(0, 0), &p(1, 0), &p(0, 1), &p(1, 1)),
            Err(Error::ParallelLines)
        ));
    }

    #[test]
    fn unit_square_area() {
        let sq = ConvexPolygon::new(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap();
        assert_eq!(sq.area(), QSqrt2::one());
    }

    #[test]
    fn collinear_triangle_is_rejected() {
        assert!(ConvexPolygon::new(vec![p(0, 0), p(1, 0), p(2, 0)]).is_err());
        assert!(ConvexPolygon::new(vec![p(0, 0), p(0, 1), p(1, 0)]).is_err());
    }

    #[test]
    fn octagon_area_closed_form() {
        let s = QSqrt2::from_int(2);
        let oct = regular_octagon(&Point2::origin(), &s);
        assert_eq!(oct.area(), regular_octagon_area(&s));
        assert_eq!(oct.area(), QSqrt2::from_ints(8, 8));
    }

    #[test]
    fn simple_polygon_locate_reflex() {
        // L-shape
        let l = SimplePolygon::new(vec![p(0, 0), p(2, 0), p(2, 1), p(1, 1), p(1, 2), p(0, 2)]).unwrap();
        let half = QSqrt2::from_fracs(1, 2, 0, 1);
        let three_half = QSqrt2::from_fracs(3, 2, 0, 1);
        assert_eq!(l.locate(&Point2::new(half.clone(), half.clone())), Location::Interior);
        assert_eq!(l.locate(&Point2::new(three_half.clone(), three_half.clone())), Location::Exterior);
        assert_eq!(l.locate(&p(1, 1)), Location::Boundary);
        assert_eq!(l.locate(&Point2::new(half, three_half)), Location::Interior);
        assert_eq!(l.locate(&p(3, 0)), Location::Exterior);
    }

    #[test]
    fn similarity_from_pairs() {
        let f = AffineMap::direct_similarity(&p(0, 0), &p(1, 0), &p(1, 1), &p(1, 3)).unwrap();
        assert_eq!(f.apply(&p(0, 0)), p(1, 1));
        assert_eq!(f.apply(&p(1, 0)), p(1, 3));
        assert_eq!(f.similarity_ratio(), Some(QSqrt2::from_int(2)));
        assert_eq!(f.rotation_octant_index(), Some(2));
    }

    #[test]
    fn clipping_square() {
        let sq = ConvexPolygon::new(vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]).unwrap();
        let h = HalfPlane::left_of(p(1, -5), p(1, 5)); // keeps x <= 1
        let c = sq.clip(&h).unwrap();
        assert_eq!(c.area(), QSqrt2::from_int(2));
        let far = HalfPlane::left_of(p(5, -5), p(5, 5)); // keeps x <= 5
        assert_eq!(sq.clip(&far).unwrap(), sq);
        let empty = HalfPlane::left_of(p(-1, -5), p(-1, 5)); // keeps x <= -1
        assert!(sq.clip(&empty).is_none());
    }
}
