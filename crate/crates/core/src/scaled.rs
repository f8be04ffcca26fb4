//! Machine-integer arithmetic for long orbits.
//!
//! A point with coordinates in `(1/D)·Z[√2]` is stored as its `Z[√2]`
//! numerators over the fixed denominator `D`. Reflections through the table's
//! vertices preserve that lattice, and rotations by `kπ/4` about the center
//! keep orbits inside `(1/2D)·Z[√2]`. Every operation is checked: `None`
//! means "does not fit", and callers fall back to exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::billiard::Tangent;
use crate::field::{QSqrt2, Sign};
use crate::geometry::{Location, Point2};

/// `a + b√2` with `i128` parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Z2 {
    pub a: i128,
    pub b: i128,
}

impl Z2 {
    pub fn add(self, o: Z2) -> Option<Z2> {
        Some(Z2 { a: self.a.checked_add(o.a)?, b: self.b.checked_add(o.b)? })
    }

    pub fn sub(self, o: Z2) -> Option<Z2> {
        Some(Z2 { a: self.a.checked_sub(o.a)?, b: self.b.checked_sub(o.b)? })
    }

    pub fn mul(self, o: Z2) -> Option<Z2> {
        let a = self.a.checked_mul(o.a)?.checked_add(self.b.checked_mul(o.b)?.checked_mul(2)?)?;
        let b = self.a.checked_mul(o.b)?.checked_add(self.b.checked_mul(o.a)?)?;
        Some(Z2 { a, b })
    }

    pub fn neg(self) -> Option<Z2> {
        Some(Z2 { a: self.a.checked_neg()?, b: self.b.checked_neg()? })
    }

    /// `self · √2/2`; needs an even rational part.
    pub fn half_sqrt2(self) -> Option<Z2> {
        (self.a % 2 == 0).then_some(Z2 { a: self.b, b: self.a / 2 })
    }

    pub fn sign(self) -> Option<Sign> {
        let (sa, sb) = (self.a.signum(), self.b.signum());
        let s = if sa == 0 {
            sb
        } else if sb == 0 || sa == sb {
            sa
        } else {
            let a2 = self.a.checked_mul(self.a)?;
            let b2 = self.b.checked_mul(self.b)?.checked_mul(2)?;
            match a2.cmp(&b2) {
                std::cmp::Ordering::Greater => sa,
                std::cmp::Ordering::Less => sb,
                std::cmp::Ordering::Equal => 0,
            }
        };
        Some(match s {
            0 => Sign::Zero,
            1 => Sign::Positive,
            _ => Sign::Negative,
        })
    }
}

pub(crate) type P2 = (Z2, Z2);

pub(crate) fn psub(u: &P2, v: &P2) -> Option<P2> {
    Some((u.0.sub(v.0)?, u.1.sub(v.1)?))
}

pub(crate) fn cross(u: &P2, v: &P2) -> Option<Z2> {
    u.0.mul(v.1)?.sub(u.1.mul(v.0)?)
}

/// Rotation by `kπ/4` about the origin.
pub(crate) fn rotate(p: &P2, k: i64) -> Option<P2> {
    let (x, y) = *p;
    Some(match k.rem_euclid(8) {
        0 => (x, y),
        2 => (y.neg()?, x),
        4 => (x.neg()?, y.neg()?),
        6 => (y, x.neg()?),
        odd => {
            // rotate by π/4 first, then by the even remainder
            let r1 = (x.sub(y)?.half_sqrt2()?, x.add(y)?.half_sqrt2()?);
            return rotate(&r1, odd - 1);
        }
    })
}

/// Common denominator of a set of points.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    d: BigInt,
}

impl Frame {
    /// Smallest denominator covering `points`, times `extra`.
    pub fn for_points(points: &[Point2], extra: i64) -> Option<Frame> {
        let mut d = BigInt::one();
        for p in points {
            for r in [p.x.a(), p.x.b(), p.y.a(), p.y.b()] {
                d = d.lcm(r.denom());
            }
        }
        d *= extra;
        d.to_i128()?;
        Some(Frame { d })
    }

    fn scalar(&self, v: &QSqrt2) -> Option<Z2> {
        let a = v.a() * &self.d;
        let b = v.b() * &self.d;
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
        Some(Z2 { a: a.to_integer().to_i128()?, b: b.to_integer().to_i128()? })
    }

    pub fn point(&self, p: &Point2) -> Option<P2> {
        Some((self.scalar(&p.x)?, self.scalar(&p.y)?))
    }

    #[cfg(test)]
    pub fn unscale(&self, p: &P2) -> Point2 {
        let d = num_rational::BigRational::from_integer(self.d.clone());
        let q = |z: Z2| {
            QSqrt2::new(
                num_rational::BigRational::from_integer(z.a.into()) / &d,
                num_rational::BigRational::from_integer(z.b.into()) / &d,
            )
        };
        Point2::new(q(p.0), q(p.1))
    }
}

/// Table vertices and edges in a frame.
pub(crate) struct ScaledTable {
    verts: Vec<P2>,
    edges: Vec<P2>,
}

impl ScaledTable {
    pub fn new(frame: &Frame, vertices: &[Point2]) -> Option<Self> {
        let verts: Vec<P2> = vertices.iter().map(|v| frame.point(v)).collect::<Option<_>>()?;
        let n = verts.len();
        let edges = (0..n).map(|i| psub(&verts[(i + 1) % n], &verts[i])).collect::<Option<_>>()?;
        Some(ScaledTable { verts, edges })
    }

    /// Same rule as the exact tangent test; the caller guarantees `p` is outside.
    pub fn tangent(&self, p: &P2) -> Option<Tangent> {
        let n = self.verts.len();
        let sigma: Vec<Sign> = (0..n)
            .map(|i| cross(&self.edges[i], &psub(p, &self.verts[i])?)?.sign())
            .collect::<Option<_>>()?;
        for j in 0..n {
            if sigma[(j + n - 1) % n] != Sign::Negative {
                continue;
            }
            match sigma[j] {
                Sign::Positive => return Some(Tangent::Vertex(j)),
                Sign::Zero => return Some(Tangent::Singular),
                Sign::Negative => {}
            }
        }
        None
    }

    /// Like [`Self::tangent`], but `Some(None)` when `p` is not strictly outside.
    pub fn tangent_outside(&self, p: &P2) -> Option<Option<Tangent>> {
        let n = self.verts.len();
        let mut any_neg = false;
        for i in 0..n {
            if cross(&self.edges[i], &psub(p, &self.verts[i])?)?.sign()? == Sign::Negative {
                any_neg = true;
                break;
            }
        }
        if !any_neg {
            return Some(None);
        }
        self.tangent(p).map(Some)
    }

    pub fn reflect(&self, j: usize, p: &P2) -> Option<P2> {
        let v = &self.verts[j];
        let twice = (v.0.add(v.0)?, v.1.add(v.1)?);
        psub(&twice, p)
    }
}

/// A closed sector `apex + cone(d1, d2)` in a frame.
pub(crate) struct ScaledSector {
    apex: P2,
    d1: P2,
    d2: P2,
}

impl ScaledSector {
    pub fn new(frame: &Frame, apex: &Point2, d1: &Point2, d2: &Point2) -> Option<Self> {
        Some(ScaledSector { apex: frame.point(apex)?, d1: frame.point(d1)?, d2: frame.point(d2)? })
    }

    pub fn locate(&self, p: &P2) -> Option<Location> {
        let rel = psub(p, &self.apex)?;
        let a = cross(&self.d1, &rel)?.sign()?;
        let b = cross(&rel, &self.d2)?.sign()?;
        Some(match (a, b) {
            (Sign::Positive, Sign::Positive) => Location::Interior,
            (Sign::Negative, _) | (_, Sign::Negative) => Location::Exterior,
            _ => Location::Boundary,
        })
    }
}

/// One step of the folded sector map: reflect through the tangent vertex,
/// then rotate by the unique octant landing in the open sector.
/// Returns the image with the vertex and octant count used, or `Some(None)`
/// on the singular set.
pub(crate) fn sector_step(table: &ScaledTable, sector: &ScaledSector, p: &P2) -> Option<Option<(P2, usize, i64)>> {
    let Some(Tangent::Vertex(j)) = table.tangent_outside(p)? else { return Some(None) };
    let y = table.reflect(j, p)?;
    let mut found = None;
    for k in 0..8 {
        let q = rotate(&y, k)?;
        match sector.locate(&q)? {
            Location::Exterior => {}
            Location::Boundary => return Some(None),
            Location::Interior => {
                if found.is_some() {
                    return Some(None);
                }
                found = Some((q, j, k));
            }
        }
    }
    Some(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotate_octant;

    #[test]
    fn rotation_matches_exact() {
        let p = Point2::new(QSqrt2::from_fracs(3, 7, 2, 7), QSqrt2::from_fracs(-1, 7, 5, 7));
        let frame = Frame::for_points(std::slice::from_ref(&p), 2).unwrap();
        let sp = frame.point(&p).unwrap();
        for k in 0..8 {
            let exact = rotate_octant(&p, &Point2::origin(), k);
            let fast = rotate(&sp, k).map(|q| frame.unscale(&q));
            if let Some(f) = fast {
                assert_eq!(f, exact, "k = {k}");
            }
        }
        assert_eq!(frame.unscale(&rotate(&sp, 2).unwrap()), rotate_octant(&p, &Point2::origin(), 2));
    }

    #[test]
    fn sign_agrees() {
        for (a, b) in [(3, -2), (1, -1), (0, 0), (-7, 5), (-3, 2)] {
            let z = Z2 { a, b };
            assert_eq!(z.sign().unwrap(), QSqrt2::from_ints(a as i64, b as i64).sign());
        }
    }
}
