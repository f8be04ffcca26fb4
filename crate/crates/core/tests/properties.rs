use proptest::prelude::*;

use octagon_billiard::geometry::{reflect_point, rotate_octant, AffineMap, ConvexPolygon, Location, Point2};
use octagon_billiard::induced::canonical;
use octagon_billiard::{build_table_atlas, QSqrt2, Sign};

fn qs2() -> impl Strategy<Value = QSqrt2> {
    (-60i64..60, 1i64..24, -60i64..60, 1i64..24).prop_map(|(an, ad, bn, bd)| QSqrt2::from_fracs(an, ad, bn, bd))
}

fn point() -> impl Strategy<Value = Point2> {
    (qs2(), qs2()).prop_map(|(x, y)| Point2::new(x, y))
}

/// Points in the box `[-12, 12]²` on a fine rational grid.
fn plane_point() -> impl Strategy<Value = Point2> {
    (-1200i64..1200, -1200i64..1200, -300i64..300, -300i64..300).prop_map(|(ax, ay, bx, by)| {
        Point2::new(QSqrt2::from_fracs(ax, 100, bx, 97), QSqrt2::from_fracs(ay, 100, by, 89))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms(x in qs2(), y in qs2(), z in qs2()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, QSqrt2::zero());
    }

    #[test]
    fn inverse(x in qs2()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(&x * &x.recip().unwrap(), QSqrt2::one());
    }

    #[test]
    fn sign_is_multiplicative(x in qs2(), y in qs2()) {
        prop_assert_eq!((&x * &y).sign(), x.sign() * y.sign());
    }

    #[test]
    fn sign_matches_float_away_from_zero(x in qs2()) {
        let f = x.to_f64();
        prop_assume!(f.abs() > 1e-9);
        prop_assert_eq!(x.sign(), if f > 0.0 { Sign::Positive } else { Sign::Negative });
    }

    #[test]
    fn order_is_total_and_consistent(x in qs2(), y in qs2()) {
        prop_assert_eq!(x < y, (&y - &x).sign() == Sign::Positive);
    }

    #[test]
    fn json_round_trip(x in qs2()) {
        let s = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<QSqrt2>(&s).unwrap(), x);
    }

    #[test]
    fn square_root_of_square(x in qs2()) {
        let s = x.square().sqrt().unwrap();
        prop_assert_eq!(s, x.abs());
    }

    #[test]
    fn eight_octants_is_identity(p in point(), c in point(), k in 0i64..8) {
        let mut q = p.clone();
        for _ in 0..8 {
            q = rotate_octant(&q, &c, k);
        }
        prop_assert_eq!(q, p);
    }

    #[test]
    fn reflection_is_an_involution(p in point(), c in point()) {
        prop_assert_eq!(reflect_point(&reflect_point(&p, &c), &c), p);
    }

    #[test]
    fn compose_then_apply(p in point(), c in point(), d in point(), j in 0i64..8, k in 0i64..8) {
        let f = AffineMap::rotation_octant(&c, j);
        let g = AffineMap::rotation_octant(&d, k).compose(&AffineMap::point_reflection(&c));
        prop_assert_eq!(f.compose(&g).apply(&p), f.apply(&g.apply(&p)));
        let inv = g.inverse().unwrap();
        prop_assert_eq!(inv.apply(&g.apply(&p)), p);
    }

    #[test]
    fn isometries_keep_area(c in point(), k in 0i64..8) {
        let table = build_table_atlas().table;
        let f = AffineMap::rotation_octant(&c, k).compose(&AffineMap::point_reflection(&c));
        let img: ConvexPolygon = table.map(&f).unwrap();
        prop_assert_eq!(img.area(), table.area());
    }

    #[test]
    fn inverse_undoes_step(p in plane_point()) {
        let at = build_table_atlas();
        prop_assume!(at.table.locate(&p) == Location::Exterior);
        if let Some(q) = at.step(&p).unwrap() {
            prop_assert_eq!(at.step_inv(&q).unwrap(), Some(p));
        }
    }

    #[test]
    fn rotation_equivariance(p in plane_point(), k in 0i64..8) {
        let at = build_table_atlas();
        prop_assume!(at.table.locate(&p) == Location::Exterior);
        let r = AffineMap::rotation_octant(&at.center(), k);
        prop_assert_eq!(at.step(&r.apply(&p)).unwrap(), at.step(&p).unwrap().map(|q| r.apply(&q)));
    }

    #[test]
    fn sector_map_inverts(s in 1i64..400, t in 1i64..400) {
        let ia = canonical();
        let sec = &ia.sector;
        // O + s·d1 + t·d2 with s, t in (0, 4)
        let p = &(&sec.apex + &sec.d1.scale(&QSqrt2::from_fracs(s, 100, 0, 1))) + &sec.d2.scale(&QSqrt2::from_fracs(t, 100, 0, 1));
        let sm = ia.sector_map();
        if let Some(q) = sm.forward(&p).unwrap() {
            prop_assert_eq!(sm.inverse(&q).unwrap(), Some(p));
        }
    }
}
