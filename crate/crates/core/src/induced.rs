//! Quotient dynamics on the fundamental quadrilateral `OKLM`.
//!
//! The plane outside the table is folded by its 8-fold rotational symmetry.
//! On `OKLM` the folded map `T′` is a three-piece rotation:
//! `OPQ` turns by 3π/4 about `U`, `PQRK` by π/2 about `V`, `LMR` by π/4
//! about `W`. The atlas is built from those rotations alone; the fold of
//! `T` is kept as an independent oracle.
//!
//! The same fold applied to the whole angular sector `∠KOM` gives
//! [`SectorMap`], whose first return to the translated sector is `T₄`.

use serde::Serialize;

use crate::billiard::{build_table_atlas, TableAtlas};
use crate::error::{Error, Result};
use crate::field::{QSqrt2, Sign};
use crate::geometry::{
    line_intersection, orientation, AffineMap, ConvexPolygon, HalfPlane, Location, Point2,
    SimplePolygon,
};

/// Default cap on the orbit prefix kept by [`first_return`].
pub const DEFAULT_PREFIX_CAP: usize = 10_000;

/// One continuity piece of a piecewise isometry.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub name: &'static str,
    pub domain: ConvexPolygon,
    pub map: AffineMap,
    pub center: Point2,
    /// Rotation angle in units of π/4.
    pub octants: i64,
}

/// Named points of the quotient construction.
#[derive(Clone, Debug, Serialize)]
pub struct NamedPoints {
    pub o: Point2,
    pub k: Point2,
    pub l: Point2,
    pub m: Point2,
    pub p: Point2,
    pub q: Point2,
    pub r: Point2,
    pub s: Point2,
    pub u: Point2,
    pub v: Point2,
    pub w: Point2,
}

/// Closed angular sector at `apex`, swept counterclockwise from `d1` to `d2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sector {
    pub apex: Point2,
    pub d1: Point2,
    pub d2: Point2,
}

impl Sector {
    pub fn locate(&self, p: &Point2) -> Location {
        let rel = p - &self.apex;
        let a = self.d1.cross(&rel).sign();
        let b = rel.cross(&self.d2).sign();
        match (a, b) {
            (Sign::Positive, Sign::Positive) => Location::Interior,
            (Sign::Negative, _) | (_, Sign::Negative) => Location::Exterior,
            _ => Location::Boundary,
        }
    }

    pub fn contains_interior(&self, p: &Point2) -> bool {
        self.locate(p) == Location::Interior
    }

    /// The two bounding closed half-planes.
    pub fn half_planes(&self) -> [HalfPlane; 2] {
        let a = self.apex.clone();
        [
            HalfPlane::left_of(a.clone(), &a + &self.d1),
            HalfPlane::left_of(&a + &self.d2, a),
        ]
    }

    pub fn map(&self, f: &AffineMap) -> Sector {
        let lin = AffineMap::new(f.m.clone(), [QSqrt2::zero(), QSqrt2::zero()]);
        Sector { apex: f.apply(&self.apex), d1: lin.apply(&self.d1), d2: lin.apply(&self.d2) }
    }
}

/// `T′` on `OKLM` together with everything needed to check it.
#[derive(Clone, Debug)]
pub struct InducedAtlas {
    pub table: TableAtlas,
    pub quad: SimplePolygon,
    pub pieces: [Piece; 3],
    pub points: NamedPoints,
    /// `∠KOM`.
    pub sector: Sector,
    /// Translation `H` with `H(A₁) = A²₁`.
    pub h_map: AffineMap,
}

/// Outcome of a first-return computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ReturnOutcome {
    Returned(ReturnRecord),
    #[serde(rename = "singular")]
    HitSingular { step: u64 },
    BudgetExceeded { budget: u64 },
}

impl ReturnOutcome {
    pub fn record(&self) -> Option<&ReturnRecord> {
        match self {
            ReturnOutcome::Returned(r) => Some(r),
            _ => None,
        }
    }

    pub fn image(&self) -> Option<&Point2> {
        self.record().map(|r| &r.image)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReturnRecord {
    pub image: Point2,
    pub steps: u64,
    /// Iterates strictly before the return, up to the prefix cap.
    #[serde(skip)]
    pub prefix: Vec<Point2>,
}

/// First `n ≥ 1` with `map^n(x)` in the target, or why there is none.
///
/// `x` itself need not lie in the target. Singular iterates stop the search.
pub fn first_return<F, R>(
    mut map: F,
    target: R,
    x: &Point2,
    budget: u64,
    prefix_cap: usize,
) -> Result<ReturnOutcome>
where
    F: FnMut(&Point2) -> Result<Option<Point2>>,
    R: Fn(&Point2) -> bool,
{
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    let mut prefix = Vec::new();
    let mut cur = x.clone();
    for step in 1..=budget {
        match map(&cur)? {
            None => return Ok(ReturnOutcome::HitSingular { step }),
            Some(next) => {
                if target(&next) {
                    debug_assert!(prefix.iter().all(|p| !target(p)));
                    return Ok(ReturnOutcome::Returned(ReturnRecord { image: next, steps: step, prefix }));
                }
                if prefix.len() < prefix_cap {
                    prefix.push(next.clone());
                }
                cur = next;
            }
        }
    }
    Ok(ReturnOutcome::BudgetExceeded { budget })
}

fn bisector_point(vertex: &Point2, a: &Point2, b: &Point2) -> Point2 {
    // valid as an angle bisector only for |a - vertex| = |b - vertex|
    let da = a - vertex;
    let db = b - vertex;
    assert_eq!(da.norm_sq(), db.norm_sq(), "bisector needs equal arms");
    &(vertex + &da) + &db
}

fn perpendicular_bisector(a: &Point2, b: &Point2) -> (Point2, Point2) {
    let mid = a.midpoint(b);
    let d = b - a;
    let n = Point2::new(-&d.y, d.x.clone());
    let far = &mid + &n;
    (mid, far)
}

/// Builds `OKLM`, its three pieces and their rotation centers from the table atlas.
pub fn build_induced_atlas(atlas: &TableAtlas) -> InducedAtlas {
    let a = |j: usize| atlas.vertex(j).clone();
    let o = a(1);
    let k = atlas.necklace_vertex(2, 4).clone();
    let l = atlas.necklace_vertex(2, 3).clone();
    let m = atlas.necklace_vertex(2, 2).clone();
    let q = a(2);
    let r = atlas.corner_points[2].clone();
    let p = line_intersection(&o, &k, &a(3), &a(2)).expect("OK meets line A3A2");
    let s = line_intersection(&o, &k, &r, &m).expect("OK meets line RM");

    let bis_kom = bisector_point(&o, &k, &m);
    let bis_lrq = bisector_point(&r, &l, &q);
    let (pa, pb) = perpendicular_bisector(&a(1), &a(2));
    let u = line_intersection(&o, &bis_kom, &pa, &pb).expect("U");
    let v = line_intersection(&o, &bis_kom, &r, &bis_lrq).expect("V");
    let (la, lb) = perpendicular_bisector(&l, &m);
    let w = line_intersection(&o, &bis_kom, &la, &lb).expect("W");

    let quad = SimplePolygon::new(vec![o.clone(), k.clone(), l.clone(), m.clone()])
        .expect("OKLM is counterclockwise");
    let piece = |name, verts: Vec<Point2>, center: &Point2, octants| Piece {
        name,
        domain: ConvexPolygon::from_cycle(verts).expect("piece is convex"),
        map: AffineMap::rotation_octant(center, octants),
        center: center.clone(),
        octants,
    };
    let pieces = [
        piece("W1", vec![o.clone(), p.clone(), q.clone()], &u, 3),
        piece("W2", vec![q.clone(), p.clone(), k.clone(), r.clone()], &v, 2),
        piece("W3", vec![l.clone(), m.clone(), r.clone()], &w, 1),
    ];
    let sector = Sector { apex: o.clone(), d1: &k - &o, d2: &m - &o };
    let h_map = AffineMap::translation(&(atlas.necklace_vertex(2, 1) - &o));
    InducedAtlas {
        table: atlas.clone(),
        quad,
        pieces,
        points: NamedPoints { o, k, l, m, p, q, r, s, u, v, w },
        sector,
        h_map,
    }
}

/// Convenience: the canonical table and its induced atlas.
pub fn canonical() -> InducedAtlas {
    build_induced_atlas(&build_table_atlas())
}

impl InducedAtlas {
    /// Index of the open piece containing `x`.
    pub fn piece_of(&self, x: &Point2) -> Option<usize> {
        self.pieces.iter().position(|pc| pc.domain.locate(x) == Location::Interior)
    }

    /// `T′(x)`; `None` on piece boundaries. Errors outside `closure(OKLM)`.
    pub fn t_prime(&self, x: &Point2) -> Result<Option<Point2>> {
        if self.quad.locate(x) == Location::Exterior {
            return Err(Error::Precondition(format!("{x:?} is outside OKLM")));
        }
        Ok(self.piece_of(x).map(|i| self.pieces[i].map.apply(x)))
    }

    /// `T′` computed as `T` followed by the fold into `closure(OKLM)`.
    pub fn t_prime_oracle(&self, x: &Point2) -> Result<Option<Point2>> {
        if self.quad.locate(x) == Location::Exterior {
            return Err(Error::Precondition(format!("{x:?} is outside OKLM")));
        }
        if self.table.table.locate(x) != Location::Exterior {
            return Ok(None);
        }
        let Some(y) = self.table.step(x)? else { return Ok(None) };
        Ok(fold_unique(&y, |q| self.quad.locate(q)))
    }

    /// Fold into `∠KOM` after one step of `T`.
    pub fn sector_map(&self) -> SectorMap<'_> {
        SectorMap { ia: self }
    }

    /// The translated sector `H(∠KOM)`.
    pub fn h_sector(&self) -> Sector {
        self.sector.map(&self.h_map)
    }

    /// `T₄`: first return of the sector map to the interior of `H(∠KOM)`.
    pub fn t4(&self, x: &Point2, budget: u64) -> Result<ReturnOutcome> {
        let target = self.h_sector();
        let sm = self.sector_map();
        first_return(|p| sm.forward(p), |p| target.contains_interior(p), x, budget, DEFAULT_PREFIX_CAP)
    }

    /// `T″`: first return of `T′` to `int(Γ(OKLM))`.
    pub fn t_double_prime(&self, x: &Point2, gamma: &AffineMap, budget: u64) -> Result<ReturnOutcome> {
        let target = self.quad.map(gamma)?;
        first_return(
            |p| self.t_prime(p),
            |p| target.locate(p) == Location::Interior,
            x,
            budget,
            DEFAULT_PREFIX_CAP,
        )
    }

    /// Exact checks of the atlas invariants; returns the violated ones.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let np = &self.points;
        let total = self.pieces.iter().fold(QSqrt2::zero(), |acc, pc| acc + pc.domain.area());
        if total != self.quad.area() {
            bad.push("piece areas do not sum to area(OKLM)".to_string());
        }
        for pc in &self.pieces {
            if !pc.domain.vertices().iter().all(|v| self.quad.locate(v) != Location::Exterior) {
                bad.push(format!("{} leaves OKLM", pc.name));
            }
            if pc.map.rotation_octant_index() != Some(pc.octants) || !pc.map.is_isometry() {
                bad.push(format!("{} is not a rotation by {}π/4", pc.name, pc.octants));
            }
            if pc.map.apply(&pc.center) != pc.center {
                bad.push(format!("{} does not fix its center", pc.name));
            }
        }
        let expected = [3, 2, 1];
        for (pc, e) in self.pieces.iter().zip(expected) {
            if pc.octants != e {
                bad.push(format!("{} angle {}π/4, expected {}π/4", pc.name, pc.octants, e));
            }
        }
        let bis = bisector_point(&np.o, &np.k, &np.m);
        let on = |x: &Point2, a: &Point2, b: &Point2| orientation(a, b, x) == Sign::Zero;
        for (name, c) in [("U", &np.u), ("V", &np.v), ("W", &np.w)] {
            if !on(c, &np.o, &bis) {
                bad.push(format!("{name} is off the bisector of KOM"));
            }
        }
        let a1 = self.table.vertex(1);
        let a2 = self.table.vertex(2);
        if (&np.u - a1).norm_sq() != (&np.u - a2).norm_sq() {
            bad.push("U is off the perpendicular bisector of A1A2".into());
        }
        if (&np.w - &np.l).norm_sq() != (&np.w - &np.m).norm_sq() {
            bad.push("W is off the perpendicular bisector of LM".into());
        }
        if !on(&np.v, &np.r, &bisector_point(&np.r, &np.l, &np.q)) {
            bad.push("V is off the bisector of LRQ".into());
        }
        if !on(&np.p, &np.o, &np.k) || !on(&np.p, self.table.vertex(3), a2) {
            bad.push("P is not OK ∩ A3A2".into());
        }
        bad
    }
}

/// The unique `k` with `rot_k(y)` in the closed region, as long as it lands in the interior.
///
/// Boundary landings and ambiguous folds are singular.
fn fold_unique<L: Fn(&Point2) -> Location>(y: &Point2, locate: L) -> Option<Point2> {
    let origin = Point2::origin();
    let mut hit = None;
    for k in 0..8 {
        let q = crate::geometry::rotate_octant(y, &origin, k);
        match locate(&q) {
            Location::Exterior => {}
            Location::Boundary => return None,
            Location::Interior => {
                if hit.is_some() {
                    return None;
                }
                hit = Some(q);
            }
        }
    }
    hit
}

/// Continuity branch of the sector map: vertex `j` of `T`, then rotation by `kπ/4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Branch {
    pub vertex: usize,
    pub octants: i64,
}

/// `T` followed by the fold into `∠KOM`, and its inverse.
#[derive(Clone, Copy, Debug)]
pub struct SectorMap<'a> {
    ia: &'a InducedAtlas,
}

impl SectorMap<'_> {
    pub fn forward(&self, x: &Point2) -> Result<Option<Point2>> {
        Ok(self.branch(x)?.map(|b| self.branch_map(b).apply(x)))
    }

    pub fn inverse(&self, x: &Point2) -> Result<Option<Point2>> {
        if self.ia.table.table.locate(x) != Location::Exterior {
            return Ok(None);
        }
        let Some(y) = self.ia.table.step_inv(x)? else { return Ok(None) };
        Ok(fold_unique(&y, |q| self.ia.sector.locate(q)))
    }

    /// Branch used at `x`, or `None` on the singular set.
    pub fn branch(&self, x: &Point2) -> Result<Option<Branch>> {
        let table = &self.ia.table;
        if table.table.locate(x) != Location::Exterior {
            return Ok(None);
        }
        let crate::billiard::Tangent::Vertex(j) = table.tangent_vertex(x)? else {
            return Ok(None);
        };
        let y = crate::geometry::reflect_point(x, table.vertex(j));
        let origin = Point2::origin();
        let mut found = None;
        for k in 0..8 {
            let q = crate::geometry::rotate_octant(&y, &origin, k);
            match self.ia.sector.locate(&q) {
                Location::Exterior => {}
                Location::Boundary => return Ok(None),
                Location::Interior => {
                    if found.is_some() {
                        return Ok(None);
                    }
                    found = Some(Branch { vertex: j, octants: k });
                }
            }
        }
        Ok(found)
    }

    pub fn branch_map(&self, b: Branch) -> AffineMap {
        AffineMap::rotation_octant(&Point2::origin(), b.octants)
            .compose(&AffineMap::point_reflection(self.ia.table.vertex(b.vertex)))
    }

    /// Closed half-planes cutting out the domain of a branch inside the sector.
    pub fn branch_half_planes(&self, b: Branch) -> Vec<HalfPlane> {
        let t = &self.ia.table;
        let j = b.vertex;
        let mut hps: Vec<HalfPlane> = self.ia.sector.half_planes().into();
        hps.push(HalfPlane::left_of(t.vertex(j).clone(), t.vertex(j + 7).clone()));
        hps.push(HalfPlane::left_of(t.vertex(j).clone(), t.vertex(j + 1).clone()));
        let inv = self.branch_map(b).inverse().expect("isometry");
        hps.extend(self.ia.sector.half_planes().iter().map(|h| h.map(&inv)));
        hps
    }
}

/// One failed sample of a conjugacy check.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyFailure {
    pub x: Point2,
    pub lhs: Option<Point2>,
    pub rhs: Option<Point2>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyReport {
    pub samples: usize,
    pub failures: Vec<ConjugacyFailure>,
    /// Longest first return seen on the right-hand side.
    pub max_return_steps: u64,
}

impl ConjugacyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn conjugacy<L, R>(samples: &[Point2], mut lhs: L, mut rhs: R) -> Result<ConjugacyReport>
where
    L: FnMut(&Point2) -> Result<Option<Point2>>,
    R: FnMut(&Point2) -> Result<ReturnOutcome>,
{
    let mut failures = Vec::new();
    let mut max_steps = 0;
    for x in samples {
        let l = lhs(x)?;
        let out = rhs(x)?;
        if let Some(r) = out.record() {
            max_steps = max_steps.max(r.steps);
        }
        let ok = match (&l, &out) {
            (None, ReturnOutcome::HitSingular { .. }) => true,
            (Some(a), ReturnOutcome::Returned(r)) => *a == r.image,
            _ => false,
        };
        if !ok {
            failures.push(ConjugacyFailure { x: x.clone(), lhs: l, rhs: out.image().cloned() });
        }
    }
    Ok(ConjugacyReport { samples: samples.len(), failures, max_return_steps: max_steps })
}

/// `Γ(T′x) = T″(Γx)` with matching definedness, sample by sample.
pub fn conjugacy_check_gamma(
    samples: &[Point2],
    ia: &InducedAtlas,
    gamma: &AffineMap,
    budget: u64,
) -> Result<ConjugacyReport> {
    conjugacy(
        samples,
        |x| Ok(ia.t_prime(x)?.map(|y| gamma.apply(&y))),
        |x| ia.t_double_prime(&gamma.apply(x), gamma, budget),
    )
}

/// `H(T′x) = T₄(Hx)` with matching definedness, where `T′` is the sector map.
pub fn conjugacy_check_h(samples: &[Point2], ia: &InducedAtlas, budget: u64) -> Result<ConjugacyReport> {
    let sm = ia.sector_map();
    conjugacy(
        samples,
        |x| Ok(sm.forward(x)?.map(|y| ia.h_map.apply(&y))),
        |x| ia.t4(&ia.h_map.apply(x), budget),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_points() {
        let ia = canonical();
        let np = &ia.points;
        assert_eq!(np.k, Point2::from_ints(1, 1, 3, 2));
        assert_eq!(np.l, Point2::from_ints(1, 0, 3, 1));
        assert_eq!(np.m, Point2::from_ints(-1, 0, 3, 1));
        assert_eq!(np.p, Point2::from_ints(1, 1, 1, 1));
        assert_eq!(np.r, Point2::from_ints(0, 0, 2, 1));
        assert_eq!(np.s, np.o);
        assert_eq!(np.u, Point2::from_ints(2, 0, 2, 0));
        assert_eq!(np.v, Point2::from_ints(0, 1, 2, 1));
        assert_eq!(np.w, Point2::from_ints(0, 0, 4, 2));
    }

    #[test]
    fn atlas_invariants_hold() {
        assert_eq!(canonical().invariant_violations(), Vec::<String>::new());
    }

    #[test]
    fn quad_area() {
        assert_eq!(canonical().quad.area(), QSqrt2::from_ints(4, 2));
    }

    #[test]
    fn pq_is_singular_for_both() {
        let ia = canonical();
        let x = ia.points.p.midpoint(&ia.points.q);
        assert_eq!(ia.t_prime(&x).unwrap(), None);
        assert_eq!(ia.t_prime_oracle(&x).unwrap(), None);
    }

    #[test]
    fn centers_are_fixed() {
        let ia = canonical();
        for (i, c) in [&ia.points.u, &ia.points.v].into_iter().enumerate() {
            assert_eq!(ia.piece_of(c), Some(i));
            assert_eq!(ia.t_prime(c).unwrap().as_ref(), Some(c));
        }
        // W is the center of γ², outside OKLM
        assert!(ia.t_prime(&ia.points.w).is_err());
    }

    #[test]
    fn outside_is_error() {
        let ia = canonical();
        assert!(ia.t_prime(&Point2::from_ints(10, 0, 10, 0)).is_err());
    }

    #[test]
    fn h_sends_a1_to_a2_1() {
        let ia = canonical();
        assert_eq!(ia.h_map.apply(ia.table.vertex(1)), *ia.table.necklace_vertex(2, 1));
    }

    #[test]
    fn whole_quad_target_returns_in_one_step() {
        let ia = canonical();
        let x = Point2::from_ints(2, 0, 3, 0);
        let out = first_return(
            |p| ia.t_prime(p),
            |p| ia.quad.locate(p) == Location::Interior,
            &x,
            10,
            DEFAULT_PREFIX_CAP,
        )
        .unwrap();
        assert_eq!(out.record().unwrap().steps, 1);
    }

    #[test]
    fn sector_map_agrees_with_t_prime_inside_quad() {
        let ia = canonical();
        let sm = ia.sector_map();
        let x = Point2::from_ints(2, 0, 3, 0);
        assert_eq!(sm.forward(&x).unwrap(), ia.t_prime(&x).unwrap());
        let y = sm.forward(&x).unwrap().unwrap();
        assert_eq!(sm.inverse(&y).unwrap(), Some(x));
    }
}
