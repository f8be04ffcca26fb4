//! Self-similar structure of `T′`.
//!
//! The level-0 periodic octagon is inscribed in `PQRK`. Removing it leaves
//! three copies of `OKLM` scaled by `λ = h₀/h₋₁ = √2 - 1`; recursing gives
//! `3^k` octagons of side `h_k = h₀λ^k` at level `k`. The renormalization
//! `Γ` (homothety at `O`) conjugates `T′` to its first return on `Γ(OKLM)`
//! and moves the census down two levels. The spiral contraction `g` is the
//! cell map of a fixed address word; its fixed point is the aperiodic point.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::billiard::{orbit, OrbitOutcome, TableAtlas};
use crate::error::{Error, Result};
use crate::field::{QSqrt2, Sign};
use crate::geometry::{
    orientation, regular_octagon, regular_octagon_area, same_vertex_set, AffineMap, ConvexPolygon,
    Location, Point2, SimplePolygon,
};
use crate::induced::InducedAtlas;

/// Default guard against combinatorial growth of the census.
pub const DEFAULT_DEPTH_CAP: usize = 6;

/// Address word of the spiral contraction `g`.
pub const SPIRAL_WORD: [u8; 4] = [0, 1, 0, 1];

/// Addresses of the three census components bounding the spiral cell `G₀`.
pub const SPIRAL_BASE: [&[u8]; 3] = [&[], &[0, 1], &[0, 1, 0]];

#[derive(Clone, Debug)]
pub struct RenormalizationData {
    pub lambda: QSqrt2,
    /// Side of the table, `h₋₁`.
    pub h_minus1: QSqrt2,
    /// Side of the level-0 component, `h₀`.
    pub h0: QSqrt2,
    pub gamma_map: AffineMap,
    /// `Γ(OKLM) = OK′L′M′`.
    pub quad_image: SimplePolygon,
    /// The three census child maps `S₀, S₁, S₂`.
    pub child_maps: [AffineMap; 3],
    /// `PQRK`.
    pub pqrk: ConvexPolygon,
    /// Level-0 component, inscribed in `PQRK`.
    pub level0: ConvexPolygon,
    /// Octagon inscribed in `OPQ`.
    pub u1: ConvexPolygon,
    pub g_map: AffineMap,
    pub h_map: AffineMap,
    /// `Y = OKLM ∪ γ²`.
    pub region_y: (SimplePolygon, ConvexPolygon),
    quad: SimplePolygon,
}

/// One periodic octagon of the census tree.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicComponent {
    /// `-1` for the necklace octagon `γ²`.
    pub level: i64,
    pub address: Vec<u8>,
    pub center: Point2,
    pub side: QSqrt2,
    #[serde(skip)]
    pub polygon: ConvexPolygon,
    pub period: Option<u64>,
}

impl RenormalizationData {
    /// `h_n = h₀·λⁿ` for `n ≥ -1`.
    pub fn h(&self, n: i64) -> QSqrt2 {
        if n < 0 {
            return &self.h0 * &self.lambda.recip().expect("λ ≠ 0").pow(n.unsigned_abs() as u32);
        }
        &self.h0 * &self.lambda.pow(n as u32)
    }

    pub fn quad(&self) -> &SimplePolygon {
        &self.quad
    }

    /// `S_{w₀} ∘ S_{w₁} ∘ …`.
    pub fn cell_map(&self, address: &[u8]) -> AffineMap {
        address
            .iter()
            .fold(AffineMap::identity(), |acc, &a| acc.compose(&self.child_maps[a as usize]))
    }

    pub fn cell(&self, address: &[u8]) -> SimplePolygon {
        self.quad.map(&self.cell_map(address)).expect("similar image of OKLM")
    }

    pub fn component(&self, address: &[u8]) -> PeriodicComponent {
        let f = self.cell_map(address);
        let polygon = self.level0.map(&f).expect("similar image of an octagon");
        PeriodicComponent {
            level: address.len() as i64,
            address: address.to_vec(),
            center: polygon.vertex_mean(),
            side: self.h(address.len() as i64),
            polygon,
            period: None,
        }
    }

    /// `γ²` as the level `-1` component of `Y`.
    pub fn necklace_component(&self) -> PeriodicComponent {
        let g2 = self.region_y.1.clone();
        PeriodicComponent {
            level: -1,
            address: vec![],
            center: g2.vertex_mean(),
            side: self.h_minus1.clone(),
            polygon: g2,
            period: None,
        }
    }

    /// `3λ²`, the fraction of a cell left after removing its octagon.
    pub fn residual_ratio(&self) -> QSqrt2 {
        QSqrt2::from_int(3) * self.lambda.square()
    }
}

/// Builds `Γ`, `λ`, the census child maps, `g` and `H`.
pub fn build_renormalization(ia: &InducedAtlas) -> RenormalizationData {
    let np = &ia.points;
    let tv = ia.table.table.vertices();
    let h_minus1 = (&tv[1] - &tv[0]).norm_sq().sqrt().expect("side in Q(√2)");

    // level 0: regular octagon centered at V touching PQ (horizontal)
    let pqrk = ia.pieces[1].domain.clone();
    let apothem = &np.v.y - &np.q.y;
    let h0 = apothem.double() * (QSqrt2::sqrt2() - QSqrt2::one());
    let level0 = regular_octagon(&np.v, &h0);
    let lambda = h0.checked_div(&h_minus1).expect("h₋₁ ≠ 0");

    // U₁: centered at U, apothem = distance from U to the vertical side OP
    let u1_side = (&np.o.x - &np.u.x).double() * (QSqrt2::sqrt2() - QSqrt2::one());
    let u1 = regular_octagon(&np.u, &u1_side);

    let gamma2 = ia.table.necklace[2].clone();
    let gamma_map = AffineMap::direct_similarity(&np.o, &gamma2.vertex_mean(), &np.o, &np.u)
        .expect("O ≠ center of γ²");
    let quad = ia.quad.clone();
    let quad_image = quad.map(&gamma_map).expect("similar image");

    let s0 = AffineMap::homothety(&np.o, &lambda);
    let s1 = AffineMap::direct_similarity(&np.o, &np.k, &np.k, &np.l).expect("O ≠ K");
    let s2 = AffineMap::direct_similarity(&np.o, &np.m, &np.m, &np.l).expect("O ≠ M");
    let child_maps = [s0, s1, s2];

    let mut rd = RenormalizationData {
        lambda,
        h_minus1,
        h0,
        gamma_map,
        quad_image,
        child_maps,
        pqrk,
        level0,
        u1,
        g_map: AffineMap::identity(),
        h_map: ia.h_map.clone(),
        region_y: (quad.clone(), gamma2),
        quad,
    };
    rd.g_map = rd.cell_map(&SPIRAL_WORD);
    rd
}

/// Every component of level `≤ depth`, breadth first, addresses in lexicographic order.
pub fn enumerate_components(depth: usize, rd: &RenormalizationData) -> Result<Vec<PeriodicComponent>> {
    enumerate_components_capped(depth, DEFAULT_DEPTH_CAP, rd)
}

pub fn enumerate_components_capped(
    depth: usize,
    cap: usize,
    rd: &RenormalizationData,
) -> Result<Vec<PeriodicComponent>> {
    if depth > cap {
        return Err(Error::DepthCap { depth, cap });
    }
    let mut out = Vec::new();
    let mut frontier: Vec<(Vec<u8>, AffineMap)> = vec![(vec![], AffineMap::identity())];
    for level in 0..=depth {
        for (addr, f) in &frontier {
            let polygon = rd.level0.map(f)?;
            out.push(PeriodicComponent {
                level: level as i64,
                address: addr.clone(),
                center: polygon.vertex_mean(),
                side: rd.h(level as i64),
                polygon,
                period: None,
            });
        }
        if level < depth {
            frontier = frontier
                .iter()
                .flat_map(|(addr, f)| {
                    (0..3u8).map(move |a| {
                        let mut w = addr.clone();
                        w.push(a);
                        (w, f.compose(&rd.child_maps[a as usize]))
                    })
                })
                .collect();
        }
    }
    Ok(out)
}

/// Octagon inscribed in a convex polygon: inside its closure, with an edge on every side line.
pub fn is_inscribed(oct: &ConvexPolygon, host: &ConvexPolygon) -> bool {
    host.contains_polygon(oct)
        && host.edges().all(|(a, b)| {
            oct.vertices().iter().filter(|v| orientation(a, b, v) == Sign::Zero).count() == 2
        })
}

/// The `PQRK` analogue of a census cell.
pub fn cell_pqrk(rd: &RenormalizationData, address: &[u8]) -> ConvexPolygon {
    rd.pqrk.map(&rd.cell_map(address)).expect("similar image")
}

/// Open interiors of two octagons with sides parallel to the table are disjoint.
///
/// Separating-axis test on the four edge normals shared by all such octagons.
pub fn octagons_disjoint(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    let axes = [
        Point2::from_ints(1, 0, 0, 0),
        Point2::from_ints(0, 0, 1, 0),
        Point2::from_ints(1, 0, 1, 0),
        Point2::from_ints(1, 0, -1, 0),
    ];
    axes.iter().any(|n| {
        let proj = |p: &ConvexPolygon| {
            let vals: Vec<QSqrt2> = p.vertices().iter().map(|v| v.dot(n)).collect();
            let lo = vals.iter().min().expect("nonempty").clone();
            let hi = vals.iter().max().expect("nonempty").clone();
            (lo, hi)
        };
        let (alo, ahi) = proj(a);
        let (blo, bhi) = proj(b);
        ahi <= blo || bhi <= alo
    })
}

/// Result of following a polygon under `T′` until it comes back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonReturn {
    pub period: u64,
    /// Piece index used at each step.
    pub itinerary: Vec<usize>,
}

/// Iterates `T′` on a whole polygon, requiring each iterate to sit in one open
/// piece, until the vertex set repeats.
pub fn t_prime_polygon_period(poly: &ConvexPolygon, ia: &InducedAtlas, cap: u64) -> Result<PolygonReturn> {
    let mut cur = poly.clone();
    let mut itinerary = Vec::new();
    for step in 1..=cap {
        let mean = cur.vertex_mean();
        let i = ia
            .piece_of(&mean)
            .ok_or_else(|| Error::Component(format!("iterate {step} has its center on a piece boundary")))?;
        let dom = &ia.pieces[i].domain;
        if !dom.contains_polygon(&cur) {
            return Err(Error::Component(format!("iterate {step} straddles a piece boundary")));
        }
        itinerary.push(i);
        cur = cur.map(&ia.pieces[i].map)?;
        if cur.same_vertex_set(poly) {
            return Ok(PolygonReturn { period: step, itinerary });
        }
    }
    Err(Error::Component(format!("no return within {cap} steps")))
}

/// Exact `T`-period of a component's center.
pub fn measure_component_period(comp: &PeriodicComponent, atlas: &TableAtlas, budget: u64) -> Result<u64> {
    match orbit(&comp.center, atlas, budget)? {
        OrbitOutcome::Periodic { period } => Ok(period),
        other => Err(Error::Component(format!(
            "center of level {} component {:?} is not periodic: {other:?}",
            comp.level, comp.address
        ))),
    }
}

/// Which displayed family a value came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub set: u8,
    pub n: Option<u32>,
    pub k: Option<u64>,
    pub value: u64,
}

/// All members of the four period families for `n ≤ n_max`, `2 ≤ k ≤ k_max`.
pub fn period_family_members(n_max: u32, k_max: u64) -> Result<Vec<FamilyMember>> {
    let overflow = || Error::Overflow("period family");
    let fit = |v: i128| u64::try_from(v).map_err(|_| overflow());
    let mut out = vec![FamilyMember { set: 2, n: None, k: None, value: 8 }];
    for n in 0..=n_max {
        let p9 = 9i128.checked_pow(n).ok_or_else(overflow)?;
        let m3 = (-3i128).checked_pow(n).ok_or_else(overflow)?;
        for v in [12 * p9 - 4 * m3, 12 * p9 + 4 * m3, 4 * p9] {
            out.push(FamilyMember { set: 1, n: Some(n), k: None, value: fit(v)? });
        }
        for k in 2..=k_max as i128 {
            let kk = Some(k as u64);
            if n == 0 {
                out.push(FamilyMember { set: 2, n: None, k: kk, value: fit(8 * k)? });
            }
            let k9 = k.checked_mul(p9).ok_or_else(overflow)?;
            out.push(FamilyMember { set: 2, n: Some(n), k: kk, value: fit(8 * k9)? });
            out.push(FamilyMember { set: 3, n: Some(n), k: kk, value: fit(24 * k9 - 4 * m3 + 12 * p9)? });
            out.push(FamilyMember { set: 4, n: Some(n), k: kk, value: fit(24 * k9 + 4 * m3 - 4 * p9)? });
        }
    }
    Ok(out)
}

/// The union of the four families as a set.
pub fn period_family(n_max: u32, k_max: u64) -> Result<BTreeSet<u64>> {
    Ok(period_family_members(n_max, k_max)?.into_iter().map(|m| m.value).collect())
}

/// The fixed point `c` of the spiral contraction `g`.
pub fn aperiodic_point(rd: &RenormalizationData) -> Result<Point2> {
    rd.g_map.fixed_point()
}

/// `G_i = g^{i+1}(OKLM)`.
pub fn nested_quadrilaterals(rd: &RenormalizationData, count: usize) -> Vec<SimplePolygon> {
    let mut out = Vec::with_capacity(count);
    let mut f = rd.g_map.clone();
    for _ in 0..count {
        out.push(rd.quad.map(&f).expect("similar image"));
        f = rd.g_map.compose(&f);
    }
    out
}

/// Spiral components `C_{3i+r} = g^i(C_r)` for `i < rounds`.
pub fn spiral_components(rd: &RenormalizationData, rounds: usize) -> Vec<PeriodicComponent> {
    let mut out = Vec::new();
    for i in 0..rounds {
        for base in SPIRAL_BASE {
            let mut addr = Vec::new();
            for _ in 0..i {
                addr.extend_from_slice(&SPIRAL_WORD);
            }
            addr.extend_from_slice(base);
            out.push(rd.component(&addr));
        }
    }
    out
}

/// Two polygons share a boundary segment of positive length.
pub fn share_edge(a: &[Point2], b: &[Point2]) -> bool {
    let n = a.len();
    let m = b.len();
    (0..n).any(|i| {
        let (p, q) = (&a[i], &a[(i + 1) % n]);
        (0..m).any(|j| {
            let (r, s) = (&b[j], &b[(j + 1) % m]);
            if orientation(p, q, r) != Sign::Zero || orientation(p, q, s) != Sign::Zero {
                return false;
            }
            // overlap of parameter intervals along pq
            let d = q - p;
            let len = d.norm_sq();
            let t1 = (r - p).dot(&d);
            let t2 = (s - p).dot(&d);
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let lo = lo.max(QSqrt2::zero());
            let hi = hi.min(len);
            lo < hi
        })
    })
}

/// Area of `OKLM` minus the components of level `≤ k`, from the actual polygons.
pub fn residual_measure(k: usize, rd: &RenormalizationData) -> Result<QSqrt2> {
    let comps = enumerate_components(k, rd)?;
    let removed = comps.iter().fold(QSqrt2::zero(), |acc, c| acc + c.polygon.area());
    Ok(rd.quad.area() - removed)
}

/// Closed form of the same quantity, for cross-checking.
pub fn residual_closed_form(k: usize, rd: &RenormalizationData) -> QSqrt2 {
    rd.quad.area() * rd.residual_ratio().pow(k as u32 + 1)
}

/// Level and address of the census component whose center is `p`, searched to `max_depth`.
///
/// The necklace octagon `γ²` is reported as level `-1`.
pub fn census_locate(p: &Point2, rd: &RenormalizationData, max_depth: usize) -> Option<(i64, Vec<u8>)> {
    if *p == rd.region_y.1.vertex_mean() {
        return Some((-1, vec![]));
    }
    if rd.quad.locate(p) != Location::Interior {
        return None;
    }
    let mut addr: Vec<u8> = Vec::new();
    let mut f = AffineMap::identity();
    let v = rd.level0.vertex_mean();
    for level in 0..=max_depth {
        if f.apply(&v) == *p {
            return Some((level as i64, addr));
        }
        let next = (0..3u8).find(|&a| {
            let g = f.compose(&rd.child_maps[a as usize]);
            rd.quad.map(&g).map(|c| c.locate(p) == Location::Interior).unwrap_or(false)
        })?;
        f = f.compose(&rd.child_maps[next as usize]);
        addr.push(next);
    }
    None
}

/// Applies `H` `n` times, then the sector map `m` times, keeping the polygon on one branch.
pub fn lift_component(poly: &ConvexPolygon, n: usize, m: usize, ia: &InducedAtlas) -> Result<ConvexPolygon> {
    let mut cur = poly.clone();
    for _ in 0..n {
        cur = cur.map(&ia.h_map)?;
    }
    let sm = ia.sector_map();
    for _ in 0..m {
        let mean = cur.vertex_mean();
        let b = sm.branch(&mean)?.ok_or(Error::LiftStraddles { n, m })?;
        let inside = sm
            .branch_half_planes(b)
            .iter()
            .all(|h| cur.vertices().iter().all(|v| h.side(v) != Sign::Negative));
        if !inside {
            return Err(Error::LiftStraddles { n, m });
        }
        cur = cur.map(&sm.branch_map(b))?;
    }
    Ok(cur)
}

/// Checks that `poly` is a regular octagon of the given side with sides parallel to the table.
pub fn is_table_octagon(poly: &ConvexPolygon, side: &QSqrt2) -> bool {
    poly.len() == 8 && same_vertex_set(poly.vertices(), regular_octagon(&poly.vertex_mean(), side).vertices())
}

/// Area of a level-`k` component, `2(1+√2)h_k²`.
pub fn component_area(rd: &RenormalizationData, k: i64) -> QSqrt2 {
    regular_octagon_area(&rd.h(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induced::canonical;

    fn setup() -> (InducedAtlas, RenormalizationData) {
        let ia = canonical();
        let rd = build_renormalization(&ia);
        (ia, rd)
    }

    #[test]
    fn lambda_and_sides() {
        let (_, rd) = setup();
        assert_eq!(rd.h_minus1, QSqrt2::from_int(2));
        assert_eq!(rd.h0, QSqrt2::from_ints(-2, 2));
        assert_eq!(rd.lambda, QSqrt2::from_ints(-1, 1));
        assert_eq!(rd.h(-1), rd.h_minus1);
    }

    #[test]
    fn gamma_fixes_o_and_maps_gamma2_to_u1() {
        let (ia, rd) = setup();
        assert_eq!(rd.gamma_map.apply(&ia.points.o), ia.points.o);
        let img = rd.region_y.1.map(&rd.gamma_map).unwrap();
        assert!(img.same_vertex_set(&rd.u1));
        assert_eq!(rd.gamma_map.similarity_ratio(), Some(rd.lambda.square()));
    }

    #[test]
    fn level0_inscribed_in_pqrk() {
        let (_, rd) = setup();
        assert!(is_inscribed(&rd.level0, &rd.pqrk));
    }

    #[test]
    fn u1_is_address_zero() {
        let (_, rd) = setup();
        assert!(rd.component(&[0]).polygon.same_vertex_set(&rd.u1));
        assert_eq!(rd.u1.vertex_mean(), Point2::from_ints(2, 0, 2, 0));
    }

    #[test]
    fn depth_two_count() {
        let (_, rd) = setup();
        assert_eq!(enumerate_components(2, &rd).unwrap().len(), 13);
        assert!(matches!(enumerate_components(7, &rd), Err(Error::DepthCap { depth: 7, cap: 6 })));
    }

    #[test]
    fn family_examples() {
        let f = period_family_members(0, 2).unwrap();
        let s1: BTreeSet<u64> = f.iter().filter(|m| m.set == 1).map(|m| m.value).collect();
        assert_eq!(s1, [4, 8, 16].into_iter().collect());
        assert!(f.iter().any(|m| m.set == 3 && m.value == 56));
        assert!(f.iter().any(|m| m.set == 4 && m.value == 48));
        let one: BTreeSet<u64> =
            period_family_members(1, 2).unwrap().iter().filter(|m| m.set == 1 && m.n == Some(1)).map(|m| m.value).collect();
        assert_eq!(one, [36, 96, 120].into_iter().collect());
    }

    #[test]
    fn residual_base_case() {
        let (_, rd) = setup();
        let r0 = residual_measure(0, &rd).unwrap();
        assert_eq!(r0, rd.residual_ratio() * rd.quad().area());
        assert_eq!(r0, QSqrt2::from_ints(12, -6));
    }

    #[test]
    fn g_fixed_point() {
        let (_, rd) = setup();
        let c = aperiodic_point(&rd).unwrap();
        assert_eq!(rd.g_map.apply(&c), c);
    }

    #[test]
    fn locate_known_centers() {
        let (_, rd) = setup();
        for addr in [vec![], vec![2], vec![1, 0, 2]] {
            let c = rd.component(&addr);
            assert_eq!(census_locate(&c.center, &rd, 4), Some((addr.len() as i64, addr)));
        }
    }
}
