//! Exact arithmetic in the real quadratic field Q(√2).
//!
//! Every coordinate and every map coefficient in the crate is a [`QSqrt2`].
//! Values are kept canonical (both rational parts reduced with positive
//! denominators), so `==` is structural and decides equality of the real
//! numbers exactly. Signs are decided with rational arithmetic only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The number `a + b·√2` with arbitrary-precision rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    a: BigRational,
    b: BigRational,
}

/// Exact sign of a field element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn of_ratio(r: &BigRational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match self.as_i8() * rhs.as_i8() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        // BigRational reduces on construction, so the pair is already canonical.
        QSqrt2 { a, b }
    }

    pub fn zero() -> Self {
        QSqrt2::default()
    }

    pub fn one() -> Self {
        QSqrt2::from_int(1)
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        QSqrt2::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        QSqrt2::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `a + b√2` from small integers.
    pub fn from_ints(a: i64, b: i64) -> Self {
        QSqrt2::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    /// `(an/ad) + (bn/bd)√2`. Panics on a zero denominator.
    pub fn from_fracs(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QSqrt2::new(
            BigRational::new(an.into(), ad.into()),
            BigRational::new(bn.into(), bd.into()),
        )
    }

    pub fn rational(r: BigRational) -> Self {
        QSqrt2::new(r, BigRational::zero())
    }

    /// Rational part `a`.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of √2.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b√2`.
    pub fn conj(&self) -> Self {
        QSqrt2::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² - 2b²` (a rational).
    pub fn norm(&self) -> BigRational {
        let two = BigRational::from_integer(2.into());
        &self.a * &self.a - two * &self.b * &self.b
    }

    /// Exact sign using rational arithmetic only.
    ///
    /// When `a` and `b` disagree in sign the magnitude comparison is
    /// `a²` against `2b²`.
    pub fn sign(&self) -> Sign {
        let sa = Sign::of_ratio(&self.a);
        let sb = Sign::of_ratio(&self.b);
        match (sa, sb) {
            (Sign::Zero, s) | (s, Sign::Zero) => s,
            (x, y) if x == y => x,
            _ => {
                let two = BigRational::from_integer(2.into());
                let a2 = &self.a * &self.a;
                let b2 = two * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    // a² = 2b² has no nonzero rational solution
                    Ordering::Equal => Sign::Zero,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse via the conjugate: `1/x = conj(x) / norm(x)`.
    pub fn recip(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QSqrt2::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &QSqrt2) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QSqrt2::new(&self.a * r, &self.b * r)
    }

    pub fn half(&self) -> Self {
        self.scale(&BigRational::new(1.into(), 2.into()))
    }

    pub fn double(&self) -> Self {
        QSqrt2::new(&self.a + &self.a, &self.b + &self.b)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSqrt2::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Positive square root when it lies in Q(√2).
    pub fn sqrt(&self) -> Option<QSqrt2> {
        match self.sign() {
            Sign::Negative => return None,
            Sign::Zero => return Some(QSqrt2::zero()),
            Sign::Positive => {}
        }
        // (x + y√2)² = a + b√2  ⇔  x² + 2y² = a, 2xy = b
        let two = BigRational::from_integer(2.into());
        let d = ratio_sqrt(&self.norm())?;
        for x2 in [(&self.a + &d) / &two, (&self.a - &d) / &two] {
            let Some(x) = ratio_sqrt(&x2) else { continue };
            let cand = if x.is_zero() {
                match ratio_sqrt(&(&self.a / &two)) {
                    Some(y) => QSqrt2::new(x, y),
                    None => continue,
                }
            } else {
                let y = &self.b / (&two * &x);
                QSqrt2::new(x, y)
            };
            let cand = cand.abs();
            if cand.square() == *self {
                return Some(cand);
            }
        }
        None
    }

    /// Nearest-ish double. Rendering only: never feeds a predicate.
    pub fn to_f64(&self) -> f64 {
        let a = ratio_to_f64(&self.a);
        let b = ratio_to_f64(&self.b);
        let v = a + b * std::f64::consts::SQRT_2;
        if v.is_infinite() {
            log_overflow();
        }
        v
    }
}

fn ratio_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn log_overflow() {
    eprintln!("warning: QSqrt2 value saturated to infinity in float conversion");
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a QSqrt2> for &'a QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, rhs: &'a QSqrt2) -> QSqrt2 {
                let f: fn(&QSqrt2, &QSqrt2) -> QSqrt2 = $body;
                f(self, rhs)
            }
        }
        impl $tr<QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, rhs: &'a QSqrt2) -> QSqrt2 {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QSqrt2> for &'a QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, rhs: QSqrt2) -> QSqrt2 {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| QSqrt2::new(&x.a + &y.a, &x.b + &y.b));
forward_binop!(Sub, sub, |x, y| QSqrt2::new(&x.a - &y.a, &x.b - &y.b));
forward_binop!(Mul, mul, |x, y| {
    // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
    let bd = &x.b * &y.b;
    QSqrt2::new(&x.a * &y.a + &bd + &bd, &x.a * &y.b + &x.b * &y.a)
});

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, rhs: &QSqrt2) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QSqrt2> for QSqrt2 {
    fn sub_assign(&mut self, rhs: &QSqrt2) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a, -self.b)
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a.clone(), -self.b.clone())
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        QSqrt2::from_int(n)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // coefficient of √2 without a redundant 1
        fn root(b: &BigRational) -> String {
            if b.is_one() {
                "√2".into()
            } else {
                format!("{b}√2")
            }
        }
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) if (-self.b.clone()).is_one() => write!(f, "-√2"),
            (true, false) => write!(f, "{}", root(&self.b)),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}", self.a, root(&-self.b.clone()))
                } else {
                    write!(f, "{} + {}", self.a, root(&self.b))
                }
            }
        }
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSqrt2({})", self)
    }
}

/// Formats a rational as `p/q` with an explicit denominator, always.
pub fn ratio_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p` into a reduced rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
    let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

#[derive(Serialize, Deserialize)]
struct QSqrt2Repr {
    a: String,
    b: String,
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSqrt2Repr {
            a: ratio_to_string(&self.a),
            b: ratio_to_string(&self.b),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = QSqrt2Repr::deserialize(d)?;
        let a = parse_ratio(&r.a).map_err(D::Error::custom)?;
        let b = parse_ratio(&r.b).map_err(D::Error::custom)?;
        Ok(QSqrt2::new(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> QSqrt2 {
        QSqrt2::from_ints(a, b)
    }

    #[test]
    fn conjugate_sum_and_product() {
        assert_eq!(q(1, 1) + q(1, -1), q(2, 0));
        assert_eq!(q(1, 1) * q(-1, 1), q(1, 0));
    }

    #[test]
    fn rationalized_division() {
        let r = QSqrt2::one().checked_div(&QSqrt2::sqrt2()).unwrap();
        assert_eq!(r, QSqrt2::from_fracs(0, 1, 1, 2));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            QSqrt2::one().checked_div(&QSqrt2::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn signs() {
        assert_eq!(q(3, -2).sign(), Sign::Positive);
        assert_eq!(q(1, -1).sign(), Sign::Negative);
        assert_eq!(q(0, 0).sign(), Sign::Zero);
        assert_eq!(q(-3, 2).sign(), Sign::Negative);
        assert_eq!(q(-1, 1).sign(), Sign::Positive);
    }

    #[test]
    fn floats() {
        assert!((q(1, 1).to_f64() - 2.414_213_562_373_095).abs() < 1e-12);
        assert_eq!(QSqrt2::zero().to_f64(), 0.0);
        assert!((q(3, -2).to_f64() - 0.171_572_875_253_809_9).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let x = QSqrt2::from_fracs(3, 4, -5, 1);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"3/4","b":"-5/1"}"#);
        let back: QSqrt2 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let y: QSqrt2 = serde_json::from_str(r#"{"a":"6/8","b":"-5"}"#).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn rejects_zero_denominator() {
        assert!(serde_json::from_str::<QSqrt2>(r#"{"a":"1/0","b":"0"}"#).is_err());
    }
}
