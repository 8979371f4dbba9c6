//! Real 3-vectors and validated unit directions.

use crate::error::{Error, Result};
use crate::rng::SubStream;
use crate::TOL_INPUT;

pub type Vec3 = [f64; 3];

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: &Vec3) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// A direction on the unit sphere.
///
/// Inputs must be unit to within [`TOL_INPUT`] and are renormalized on
/// construction, so downstream dot products can treat `|n|` as exactly 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    v: Vec3,
}

impl UnitVector3 {
    pub const EX: UnitVector3 = UnitVector3 { v: [1.0, 0.0, 0.0] };
    pub const EY: UnitVector3 = UnitVector3 { v: [0.0, 1.0, 0.0] };
    pub const EZ: UnitVector3 = UnitVector3 { v: [0.0, 0.0, 1.0] };

    /// Validates that `v` is unit to within [`TOL_INPUT`], then renormalizes.
    pub fn new(v: Vec3) -> Result<Self> {
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = norm(&v);
        if libm::fabs(n - 1.0) > TOL_INPUT {
            return Err(Error::NonUnitVector { norm: n });
        }
        Ok(Self {
            v: scale(&v, 1.0 / n),
        })
    }

    /// Normalizes an arbitrary vector into a direction; fails on (near-)zero
    /// or non-finite input.
    pub fn normalized(v: Vec3) -> Result<Self> {
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = norm(&v);
        if n < 1e-12 {
            return Err(Error::NonUnitVector { norm: n });
        }
        Ok(Self {
            v: scale(&v, 1.0 / n),
        })
    }

    /// Uniform direction on the sphere from two counter-indexed draws.
    pub fn random(s: &SubStream, index: u64) -> Self {
        let z = 2.0 * s.f64_at(2 * index) - 1.0;
        let phi = 2.0 * core::f64::consts::PI * s.f64_at(2 * index + 1);
        let rho = libm::sqrt((1.0 - z * z).max(0.0));
        Self {
            v: [rho * libm::cos(phi), rho * libm::sin(phi), z],
        }
    }

    pub fn components(&self) -> Vec3 {
        self.v
    }

    pub fn x(&self) -> f64 {
        self.v[0]
    }

    pub fn y(&self) -> f64 {
        self.v[1]
    }

    pub fn z(&self) -> f64 {
        self.v[2]
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        dot(&self.v, &other.v)
    }

    pub fn cross(&self, other: &UnitVector3) -> Vec3 {
        cross(&self.v, &other.v)
    }

    pub fn negated(&self) -> UnitVector3 {
        UnitVector3 {
            v: scale(&self.v, -1.0),
        }
    }
}
