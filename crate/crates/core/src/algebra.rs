//! Even subalgebra of Cl(3,0): the span of `{1, β_x, β_y, β_z}`.
//!
//! The bivector generators are treated abstractly, defined only by their
//! products
//!
//! ```text
//! β_j β_k = −δ_jk − σ ε_jkl β_l
//! ```
//!
//! where the cross sign `σ` is supplied by the caller. `σ = +1` is the fixed
//! bivector basis; `σ = −1` is its mirror image, used when the sign is tied to
//! a hidden variable that happens to be negative.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::Serialize;

use crate::direction::{cross3, dot3, Direction};
use crate::error::{Error, Result};
use crate::model::HiddenVariable;
use crate::scalar::Real;

/// Sign multiplying the `ε_jkl` term of the bivector product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CrossSign {
    Plus,
    Minus,
}

impl CrossSign {
    /// The cross sign that equals the hidden variable: `σ = λ`.
    pub fn from_lambda(lambda: HiddenVariable) -> Self {
        match lambda {
            HiddenVariable::Plus => CrossSign::Plus,
            HiddenVariable::Minus => CrossSign::Minus,
        }
    }

    #[inline]
    pub fn value<T: Real>(self) -> T {
        match self {
            CrossSign::Plus => T::one(),
            CrossSign::Minus => -T::one(),
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            CrossSign::Plus => CrossSign::Minus,
            CrossSign::Minus => CrossSign::Plus,
        }
    }
}

/// Bivector generator index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// `s + b_x β_x + b_y β_y + b_z β_z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct EvenMultivector<T> {
    s: T,
    b: [T; 3],
}

impl<T: Real> EvenMultivector<T> {
    /// Builds an element without checking finiteness; see [`Self::try_new`].
    #[inline]
    pub fn new(s: T, b: [T; 3]) -> Self {
        debug_assert!(s.is_finite() && b.iter().all(|c| c.is_finite()));
        Self { s, b }
    }

    pub fn try_new(s: T, b: [T; 3]) -> Result<Self> {
        if s.is_finite() && b.iter().all(|c| c.is_finite()) {
            Ok(Self { s, b })
        } else {
            Err(Error::NonFinite)
        }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), [T::zero(); 3])
    }

    #[inline]
    pub fn one() -> Self {
        Self::scalar(T::one())
    }

    #[inline]
    pub fn scalar(s: T) -> Self {
        Self::new(s, [T::zero(); 3])
    }

    #[inline]
    pub fn bivector(b: [T; 3]) -> Self {
        Self::new(T::zero(), b)
    }

    /// The generator `β_axis`.
    pub fn basis(axis: Axis) -> Self {
        let mut b = [T::zero(); 3];
        b[axis.index()] = T::one();
        Self::bivector(b)
    }

    #[inline]
    pub fn scalar_part(&self) -> T {
        self.s
    }

    #[inline]
    pub fn bivector_part(&self) -> [T; 3] {
        self.b
    }

    pub fn reverse(&self) -> Self {
        Self::new(self.s, [-self.b[0], -self.b[1], -self.b[2]])
    }

    #[inline]
    pub fn norm_squared(&self) -> T {
        self.s * self.s + dot3(&self.b, &self.b)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// Euclidean length of the bivector part.
    #[inline]
    pub fn bivector_norm(&self) -> T {
        dot3(&self.b, &self.b).sqrt()
    }

    /// Geometric product under cross sign `sigma`.
    pub fn product(&self, rhs: &Self, sigma: CrossSign) -> Self {
        geometric_product(self, rhs, sigma)
    }

    /// `reverse(x) / norm(x)²`.
    ///
    /// `x · reverse(x)` has no cross term for either sign, so the inverse is
    /// the same element for both conventions; `sigma` is taken to keep the
    /// contract explicit.
    pub fn inverse(&self, sigma: CrossSign) -> Result<Self> {
        let _ = sigma;
        let norm = self.norm();
        if norm.is_nan() || norm <= T::singular_threshold() {
            return Err(Error::Singular {
                norm: norm.as_f64(),
                threshold: T::singular_threshold().as_f64(),
            });
        }
        Ok(self.reverse() / self.norm_squared())
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = (self.s - other.s).abs();
        for k in 0..3 {
            m = m.max((self.b[k] - other.b[k]).abs());
        }
        m
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Component-wise bit identity (distinguishes `0.0` from `-0.0`).
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.s.integer_decode() == other.s.integer_decode()
            && (0..3).all(|k| self.b[k].integer_decode() == other.b[k].integer_decode())
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite() && self.b.iter().all(|c| c.is_finite())
    }
}

/// `(s_x s_y − b_x·b_y) + (s_x b_y + s_y b_x − σ b_x × b_y)·β`.
pub fn geometric_product<T: Real>(
    x: &EvenMultivector<T>,
    y: &EvenMultivector<T>,
    sigma: CrossSign,
) -> EvenMultivector<T> {
    let sg: T = sigma.value();
    let c = cross3(&x.b, &y.b);
    let s = x.s * y.s - dot3(&x.b, &y.b);
    let b = [
        x.s * y.b[0] + y.s * x.b[0] - sg * c[0],
        x.s * y.b[1] + y.s * x.b[1] - sg * c[1],
        x.s * y.b[2] + y.s * x.b[2] - sg * c[2],
    ];
    EvenMultivector::new(s, b)
}

/// The bivector `a_j β_j` attached to a measurement direction.
///
/// [`Direction`] is unit by construction, so the non-unit error surfaces
/// where the direction is built.
pub fn direction_bivector<T: Real>(a: &Direction<T>) -> EvenMultivector<T> {
    EvenMultivector::bivector(a.components())
}

impl<T: Real> Add for EvenMultivector<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.s + rhs.s,
            [
                self.b[0] + rhs.b[0],
                self.b[1] + rhs.b[1],
                self.b[2] + rhs.b[2],
            ],
        )
    }
}

impl<T: Real> AddAssign for EvenMultivector<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for EvenMultivector<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for EvenMultivector<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.s, [-self.b[0], -self.b[1], -self.b[2]])
    }
}

impl<T: Real> Mul<T> for EvenMultivector<T> {
    type Output = Self;

    fn mul(self, k: T) -> Self {
        Self::new(self.s * k, [self.b[0] * k, self.b[1] * k, self.b[2] * k])
    }
}

impl<T: Real> Div<T> for EvenMultivector<T> {
    type Output = Self;

    fn div(self, k: T) -> Self {
        Self::new(self.s / k, [self.b[0] / k, self.b[1] / k, self.b[2] / k])
    }
}
