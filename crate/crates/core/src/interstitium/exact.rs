//! Exact arithmetic in the field `ℚ(√3)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::geometry::{Point2, SQRT_3};

/// `a + b√3` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt3 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt3 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn rational(a: BigRational) -> Self {
        Self::new(a, BigRational::zero())
    }

    pub fn int(a: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(a)))
    }

    /// `p/q + (r/s)·√3`.
    pub fn frac(p: i64, q: i64, r: i64, s: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            BigRational::new(BigInt::from(r), BigInt::from(s)),
        )
    }

    pub fn sqrt3() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    /// The exact binary value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::rational)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * SQRT_3
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² against 3b²
            (sa, _) => {
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * BigRational::from_integer(BigInt::from(3));
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn half(&self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        Self::new(&self.a / &two, &self.b / &two)
    }
}

impl fmt::Debug for QSqrt3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}√3)", self.a, self.b)
    }
}

impl PartialOrd for QSqrt3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt3 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl Add for &QSqrt3 {
    type Output = QSqrt3;
    fn add(self, o: &QSqrt3) -> QSqrt3 {
        QSqrt3::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, o: &QSqrt3) -> QSqrt3 {
        QSqrt3::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, o: &QSqrt3) -> QSqrt3 {
        let three = BigRational::from_integer(BigInt::from(3));
        QSqrt3::new(
            &self.a * &o.a + &self.b * &o.b * three,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Div for &QSqrt3 {
    type Output = QSqrt3;
    fn div(self, o: &QSqrt3) -> QSqrt3 {
        assert!(!o.is_zero(), "division by zero in Q(√3)");
        let three = BigRational::from_integer(BigInt::from(3));
        // multiply by the conjugate
        let norm = &o.a * &o.a - &o.b * &o.b * &three;
        let conj = QSqrt3::new(o.a.clone(), -&o.b);
        let num = self * &conj;
        QSqrt3::new(num.a / &norm, num.b / &norm)
    }
}

impl Neg for &QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3::new(-&self.a, -&self.b)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for QSqrt3 {
            type Output = QSqrt3;
            fn $m(self, o: QSqrt3) -> QSqrt3 {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        -&self
    }
}

/// A point with coordinates in `ℚ(√3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactPoint {
    pub x: QSqrt3,
    pub y: QSqrt3,
}

impl ExactPoint {
    pub fn new(x: QSqrt3, y: QSqrt3) -> Self {
        Self { x, y }
    }

    /// `u·(2, 0) + v·(1, √3)` for rational lattice coordinates `u = p/n`, `v = q/n`.
    pub fn from_lattice_coords(p: i64, q: i64, n: i64) -> Self {
        Self::new(QSqrt3::frac(2 * p + q, n, 0, 1), QSqrt3::frac(0, 1, q, n))
    }

    pub fn from_point(p: Point2) -> Option<Self> {
        Some(Self::new(QSqrt3::from_f64(p.x)?, QSqrt3::from_f64(p.y)?))
    }

    pub fn to_point(&self) -> Point2 {
        Point2::new(self.x.to_f64(), self.y.to_f64())
    }

    pub fn add(&self, o: &ExactPoint) -> ExactPoint {
        ExactPoint::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &ExactPoint) -> ExactPoint {
        ExactPoint::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn cross(&self, o: &ExactPoint) -> QSqrt3 {
        &(&self.x * &o.y) - &(&self.y * &o.x)
    }

    pub fn dist_sq(&self, o: &ExactPoint) -> QSqrt3 {
        let d = self.sub(o);
        &(&d.x * &d.x) + &(&d.y * &d.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let x = QSqrt3::frac(1, 2, 3, 4);
        let y = QSqrt3::frac(-5, 3, 1, 7);
        let q = &(&x * &y) / &y;
        assert_eq!(q, x);
        assert!(((&x + &y).to_f64() - (x.to_f64() + y.to_f64())).abs() < 1e-12);
        assert!(((&x * &y).to_f64() - x.to_f64() * y.to_f64()).abs() < 1e-12);
        let s = QSqrt3::sqrt3();
        assert_eq!(&s * &s, QSqrt3::int(3));
    }

    #[test]
    fn ordering_is_exact() {
        // 7 − 4√3 ≈ 0.0718 > 0 ; 26 − 15√3 ≈ 0.0192 > 0 ; 97 − 56√3 ≈ 0.00515 > 0
        assert_eq!(QSqrt3::frac(7, 1, -4, 1).signum(), Ordering::Greater);
        assert_eq!(QSqrt3::frac(-26, 1, 15, 1).signum(), Ordering::Less);
        assert_eq!(QSqrt3::frac(97, 1, -56, 1).signum(), Ordering::Greater);
        assert_eq!(QSqrt3::frac(0, 1, 0, 1).signum(), Ordering::Equal);
        assert!(QSqrt3::frac(2, 1, 0, 1) > QSqrt3::sqrt3());
        assert!(QSqrt3::frac(1, 1, 0, 1) < QSqrt3::sqrt3());
        let mut v = [QSqrt3::sqrt3(), QSqrt3::int(2), QSqrt3::frac(3, 2, 0, 1)];
        v.sort();
        assert_eq!(v[0], QSqrt3::frac(3, 2, 0, 1));
    }

    #[test]
    fn float_conversion_is_exact() {
        let q = QSqrt3::from_f64(0.1).unwrap();
        assert_eq!(q.to_f64(), 0.1);
        assert!(QSqrt3::from_f64(f64::NAN).is_none());
    }
}
