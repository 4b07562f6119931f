//! Planar primitives: vectors, 2x2 matrices, cones and their dual base
//! segments, halfspaces, and polyhedra with a conic recession part.

pub(crate) mod poly;

pub use poly::{intersect_halfspaces, intersect_halfspaces_bounded, Polyhedron};

use crate::{Error, Scalar};

/// Point or direction in the plane. Which one is meant follows from context;
/// the operations are the same.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product; positive when `other` lies
    /// counterclockwise of `self`.
    #[inline]
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    /// Counterclockwise rotation by a quarter turn.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Scalar> std::ops::Add for Vec2<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> std::ops::Sub for Vec2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> std::ops::Neg for Vec2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> std::ops::Mul<T> for Vec2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2<T = f64> {
    pub m00: T,
    pub m01: T,
    pub m10: T,
    pub m11: T,
}

impl<T: Scalar> Mat2<T> {
    #[inline]
    pub fn new(m00: T, m01: T, m10: T, m11: T) -> Self {
        Self { m00, m01, m10, m11 }
    }

    /// Matrix with the given columns.
    #[inline]
    pub fn from_cols(c0: Vec2<T>, c1: Vec2<T>) -> Self {
        Self::new(c0.x, c1.x, c0.y, c1.y)
    }

    #[inline]
    pub fn det(self) -> T {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    #[inline]
    pub fn mul_vec(self, v: Vec2<T>) -> Vec2<T> {
        Vec2::new(
            self.m00 * v.x + self.m01 * v.y,
            self.m10 * v.x + self.m11 * v.y,
        )
    }

    pub fn inverse(self) -> Option<Self> {
        let d = self.det();
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        Some(Self::new(
            self.m11 / d,
            -self.m01 / d,
            -self.m10 / d,
            self.m00 / d,
        ))
    }
}

/// Comparison tolerances used throughout.
///
/// `eps` is an absolute tolerance on scalar products (tie detection,
/// halfspace membership). `eps_rank` bounds determinants away from zero when
/// testing linear independence. `eps_s` is the threshold below which a
/// critical rotation parameter is treated as a tie at zero rather than a
/// blocking constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T = f64> {
    pub eps: T,
    pub eps_rank: T,
    pub eps_s: T,
}

impl<T: Scalar> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            eps: T::c(1e-9),
            eps_rank: T::c(1e-12),
            eps_s: T::c(1e-12),
        }
    }
}

impl<T: Scalar> Tolerance<T> {
    /// Default tolerances with `eps` replaced.
    pub fn with_eps(eps: T) -> Self {
        Self {
            eps,
            ..Self::default()
        }
    }
}

/// Closed halfspace `{ z : w . z >= q }`. The normal `w` points into the
/// halfspace and is stored exactly as constructed, without normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace<T = f64> {
    pub w: Vec2<T>,
    pub q: T,
}

impl<T: Scalar> Halfspace<T> {
    #[inline]
    pub fn new(w: Vec2<T>, q: T) -> Self {
        Self { w, q }
    }

    /// Membership within an absolute slack on the scalar product.
    #[inline]
    pub fn contains(&self, z: Vec2<T>, eps: T) -> bool {
        self.w.dot(z) >= self.q - eps
    }

    /// Intersection point of the two boundary lines, or `None` when the
    /// normals are parallel within `eps_rank`.
    pub fn boundary_intersection(a: &Self, b: &Self, eps_rank: T) -> Option<Vec2<T>> {
        let d = a.w.cross(b.w);
        if d.abs() <= eps_rank * a.w.norm() * b.w.norm() {
            return None;
        }
        Some(Vec2::new(
            (a.q * b.w.y - b.q * a.w.y) / d,
            (a.w.x * b.q - b.w.x * a.q) / d,
        ))
    }
}

/// Pointed convex cone with nonempty interior, spanned by two linearly
/// independent generators. Construction validates the generators; all other
/// cone shapes (rays, lines, halfspaces, the origin) are rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone<T = f64> {
    b1: Vec2<T>,
    b2: Vec2<T>,
}

impl<T: Scalar> Cone<T> {
    pub fn new(b1: Vec2<T>, b2: Vec2<T>) -> Result<Self, Error> {
        Self::with_tolerance(b1, b2, Tolerance::default())
    }

    pub fn with_tolerance(b1: Vec2<T>, b2: Vec2<T>, tol: Tolerance<T>) -> Result<Self, Error> {
        if !b1.is_finite() || !b2.is_finite() {
            return Err(Error::OutOfRange { what: "cone generator" });
        }
        let scale = b1.norm() * b2.norm();
        if scale == T::zero() {
            // A zero generator collapses the cone to a ray or the origin.
            return Err(Error::UnsupportedCone);
        }
        if b1.cross(b2).abs() <= tol.eps_rank * scale {
            return Err(Error::DegenerateCone);
        }
        Ok(Self { b1, b2 })
    }

    /// First-quadrant cone, the componentwise order.
    pub fn orthant() -> Self {
        Self {
            b1: Vec2::new(T::one(), T::zero()),
            b2: Vec2::new(T::zero(), T::one()),
        }
    }

    #[inline]
    pub fn b1(&self) -> Vec2<T> {
        self.b1
    }

    #[inline]
    pub fn b2(&self) -> Vec2<T> {
        self.b2
    }

    pub fn generators(&self) -> [Vec2<T>; 2] {
        [self.b1, self.b2]
    }

    /// Membership of `d` in the cone: both dual base directions see `d` on
    /// their nonnegative side.
    pub fn contains(&self, d: Vec2<T>, eps: T) -> bool {
        let base = self.dual_base();
        base.v1.dot(d) >= -eps && base.v2.dot(d) >= -eps
    }

    /// Endpoints of the base segment of the dual cone.
    ///
    /// `v1` is orthogonal to `b1`, `v2` to `b2`; both are oriented so that
    /// they make a nonnegative product with the opposite generator. The two
    /// candidate orientations flip jointly, so one sign test decides both.
    pub fn dual_base(&self) -> DualBase<T> {
        let mut v1 = Vec2::new(self.b1.y, -self.b1.x);
        let mut v2 = Vec2::new(-self.b2.y, self.b2.x);
        if v1.dot(self.b2) < T::zero() || v2.dot(self.b1) < T::zero() {
            v1 = -v1;
            v2 = -v2;
        }
        DualBase { v1, v2 }
    }

    /// Linear change of basis mapping `b1` to `(1,0)` and `b2` to `(0,1)`,
    /// so the cone becomes the first quadrant. The cone distribution
    /// function is invariant under this map applied to data and query alike.
    pub fn standardizer(&self) -> LinearMap<T> {
        let inv = Mat2::from_cols(self.b1, self.b2);
        let d = inv.det();
        let fwd = Mat2::new(self.b2.y / d, -self.b2.x / d, -self.b1.y / d, self.b1.x / d);
        LinearMap { fwd, inv }
    }
}

/// Segment of directions swept from `v1` to `v2`, parameterized as
/// `(1-s) v1 + s v2` for `s` in `[0,1]`. For a cone this is the base of its
/// dual; the Tukey reduction uses three free segments instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualBase<T = f64> {
    pub v1: Vec2<T>,
    pub v2: Vec2<T>,
}

impl<T: Scalar> DualBase<T> {
    /// Segment between two linearly independent directions.
    pub fn from_directions(v1: Vec2<T>, v2: Vec2<T>) -> Result<Self, Error> {
        let scale = v1.norm() * v2.norm();
        if scale == T::zero() || v1.cross(v2).abs() <= Tolerance::<T>::default().eps_rank * scale {
            return Err(Error::DegenerateCone);
        }
        Ok(Self { v1, v2 })
    }

    /// Direction at parameter `s` in `[0,1]`.
    pub fn at(&self, s: T) -> Result<Vec2<T>, Error> {
        if !(s >= T::zero() && s <= T::one()) {
            return Err(Error::OutOfRange { what: "segment parameter" });
        }
        Ok(self.v1 * (T::one() - s) + self.v2 * s)
    }
}

/// Invertible linear map with its inverse kept explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap<T = f64> {
    pub fwd: Mat2<T>,
    pub inv: Mat2<T>,
}

impl<T: Scalar> LinearMap<T> {
    #[inline]
    pub fn apply(&self, z: Vec2<T>) -> Vec2<T> {
        self.fwd.mul_vec(z)
    }

    #[inline]
    pub fn unapply(&self, z: Vec2<T>) -> Vec2<T> {
        self.inv.mul_vec(z)
    }
}
