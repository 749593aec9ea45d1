//! Unit measurement directions in the `e_x, e_y, e_z` frame.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[inline]
pub(crate) fn dot3<T: Real>(u: &[T; 3], v: &[T; 3]) -> T {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

#[inline]
pub(crate) fn cross3<T: Real>(u: &[T; 3], v: &[T; 3]) -> [T; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

#[inline]
pub(crate) fn norm3<T: Real>(u: &[T; 3]) -> T {
    dot3(u, u).sqrt()
}

/// A measurement setting: a unit vector, checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Direction<T> {
    v: [T; 3],
}

impl<T: Real> Direction<T> {
    /// Accepts `(x, y, z)` only if its length is 1 within the scalar tolerance.
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let v = [x, y, z];
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::DegenerateDirection);
        }
        let norm = norm3(&v);
        if (norm - T::one()).abs() > T::tolerance() {
            return Err(Error::NonUnitDirection {
                norm: norm.as_f64(),
            });
        }
        Ok(Self { v })
    }

    /// Rescales any finite non-zero vector to unit length.
    pub fn normalized(x: T, y: T, z: T) -> Result<Self> {
        let v = [x, y, z];
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::DegenerateDirection);
        }
        let norm = norm3(&v);
        if norm <= T::zero() || !norm.is_finite() {
            return Err(Error::DegenerateDirection);
        }
        Ok(Self {
            v: [x / norm, y / norm, z / norm],
        })
    }

    /// Direction at `degrees` from `e_x` in the x-y plane.
    pub fn in_plane_deg(degrees: T) -> Self {
        let t = degrees.to_radians();
        Self {
            v: [t.cos(), t.sin(), T::zero()],
        }
    }

    pub fn e_x() -> Self {
        Self {
            v: [T::one(), T::zero(), T::zero()],
        }
    }

    pub fn e_y() -> Self {
        Self {
            v: [T::zero(), T::one(), T::zero()],
        }
    }

    pub fn e_z() -> Self {
        Self {
            v: [T::zero(), T::zero(), T::one()],
        }
    }

    #[inline]
    pub fn components(&self) -> [T; 3] {
        self.v
    }

    #[inline]
    pub fn x(&self) -> T {
        self.v[0]
    }

    #[inline]
    pub fn y(&self) -> T {
        self.v[1]
    }

    #[inline]
    pub fn z(&self) -> T {
        self.v[2]
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        dot3(&self.v, &other.v)
    }

    #[inline]
    pub fn cross(&self, other: &Self) -> [T; 3] {
        cross3(&self.v, &other.v)
    }

    /// Angle between two settings in degrees, in `[0, 180]`.
    pub fn angle_to_deg(&self, other: &Self) -> T {
        // atan2 stays accurate near 0 and 180 where acos loses digits
        let c = self.dot(other);
        let s = norm3(&self.cross(other));
        s.atan2(c).to_degrees()
    }

    pub fn neg(&self) -> Self {
        Self {
            v: [-self.v[0], -self.v[1], -self.v[2]],
        }
    }
}
