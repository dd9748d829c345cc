//! Points of the circle group `T = R/Z`, stored as exact rationals in `[0, 1)`.

use crate::rat::{binom_int, format_rat, fract_mod1, parse_rat, Rat};
use num_traits::Zero;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Exact element of `R/Z`: a reduced rational `q` with `0 <= q < 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint(Rat);

impl TorusPoint {
    pub fn new(q: Rat) -> Self {
        TorusPoint(fract_mod1(q))
    }

    pub fn zero() -> Self {
        TorusPoint(Rat::zero())
    }

    pub fn value(&self) -> Rat {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Integer multiple `n * self` in `T`.
    pub fn mul_int(&self, n: i128) -> Self {
        TorusPoint::new(self.0 * Rat::from_integer(n))
    }

    /// `binom(n, j) * self` wrapped into `T`; the scalar is always an integer.
    pub fn mul_binom(&self, n: i128, j: u32) -> Self {
        self.mul_int(binom_int(n, j))
    }

    /// Order as an element of the torsion subgroup `Q/Z`, i.e. the denominator.
    pub fn order(&self) -> i128 {
        *self.0.denom()
    }

    /// Value of `e(self) = exp(2 pi i self)` in double precision.
    pub fn exp(&self) -> rustfft::num_complex::Complex<f64> {
        let theta = 2.0 * std::f64::consts::PI * (*self.0.numer() as f64) / (*self.0.denom() as f64);
        rustfft::num_complex::Complex::new(theta.cos(), theta.sin())
    }

    pub fn parse(s: &str) -> Option<Self> {
        parse_rat(s).map(TorusPoint::new)
    }
}

impl Add for TorusPoint {
    type Output = TorusPoint;
    fn add(self, rhs: TorusPoint) -> TorusPoint {
        TorusPoint::new(self.0 + rhs.0)
    }
}

impl Sub for TorusPoint {
    type Output = TorusPoint;
    fn sub(self, rhs: TorusPoint) -> TorusPoint {
        TorusPoint::new(self.0 - rhs.0)
    }
}

impl Neg for TorusPoint {
    type Output = TorusPoint;
    fn neg(self) -> TorusPoint {
        TorusPoint::new(-self.0)
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rat(&self.0))
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rat(&self.0))
    }
}
