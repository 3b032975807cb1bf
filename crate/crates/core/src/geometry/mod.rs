//! Tailleur cocycles on the phase plane and the round sphere, with Moore
//! path mechanics for piecewise-geodesic paths.
//!
//! Plane points are `(q, p)` (position, momentum). Signed plane areas use
//! the orientation in which a momentum leg followed by a position leg,
//! `(0,0) -> (0,p) -> (vt,p)`, encloses `+pvt/2`.

mod plane;
mod sphere;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumCast, Zero};
use thiserror::Error;

use crate::twist::TwistError;

pub use plane::{
    de_broglie_wavelength, free_particle_period, free_particle_phase, free_particle_phase_exact,
    maslov_polygon, plane_cocycle_residual, plane_signed_area, plane_tailleur, PlanePolyline,
};
pub use sphere::{
    equator_scenario, export_sphere_twist, sphere_geodesic, sphere_tailleur, sphere_triangle_area,
    tailleur_cocycle_residual, EquatorPoint, EquatorReport, GeodesicArc, SphereGeodesicPath,
    SphereTwistExport, Triangulation,
};

/// Coincidence tolerance for path endpoints and unit vectors.
pub const POINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("paths are not composable: end of the first is not the start of the second")]
    NotComposable,
    #[error("polygon is not closed")]
    NotClosed,
    #[error("polygon intersects itself")]
    SelfIntersecting,
    #[error("need at least {0} vertices")]
    TooFewVertices(usize),
    #[error("parameter `{0}` must be positive")]
    NonpositiveParameter(&'static str),
    #[error("momentum is zero")]
    ZeroMomentum,
    #[error("geodesic between antipodal points is not unique")]
    AntipodalUndefined,
    #[error("vector is not of unit length")]
    NotUnit,
    #[error("parameter `{0}` out of range")]
    OutOfRange(&'static str),
    #[error("area {0} has no small-denominator rational multiple of π")]
    NotRationalMultiple(f64),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

impl GeometryError {
    pub fn variant(&self) -> &'static str {
        match self {
            GeometryError::NotComposable => "NotComposable",
            GeometryError::NotClosed => "NotClosed",
            GeometryError::SelfIntersecting => "SelfIntersecting",
            GeometryError::TooFewVertices(_) => "TooFewVertices",
            GeometryError::NonpositiveParameter(_) => "NonpositiveParameter",
            GeometryError::ZeroMomentum => "ZeroMomentum",
            GeometryError::AntipodalUndefined => "AntipodalUndefined",
            GeometryError::NotUnit => "NotUnit",
            GeometryError::OutOfRange(_) => "OutOfRange",
            GeometryError::NotRationalMultiple(_) => "NotRationalMultiple",
            GeometryError::Twist(e) => e.variant(),
        }
    }
}

pub(crate) fn tol<T: Float>() -> T {
    T::from(POINT_TOL).unwrap()
}

/// A point of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint<T> {
    pub q: T,
    pub p: T,
}

impl<T: Float> PhasePoint<T> {
    pub fn new(q: T, p: T) -> Self {
        PhasePoint { q, p }
    }

    pub fn dist(&self, other: &Self) -> T {
        (self.q - other.q).hypot(self.p - other.p)
    }

    pub fn lerp(&self, other: &Self, s: T) -> Self {
        PhasePoint {
            q: self.q + (other.q - self.q) * s,
            p: self.p + (other.p - self.p) * s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Float> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Self) -> Self {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Self {
        *self * self.norm().recip()
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - T::one()).abs() <= tol()
    }

    /// Great-circle angle to `o`, for unit vectors.
    pub fn angle_to(&self, o: &Self) -> T {
        self.cross(o).norm().atan2(self.dot(o))
    }
}

impl<T: Float> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Float> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Float> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Float> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A path parameterized by arc length, constant after its length.
pub trait MoorePath: Sized {
    type Scalar: Float;
    type Point: Copy;

    fn length(&self) -> Self::Scalar;
    fn start(&self) -> Self::Point;
    fn end(&self) -> Self::Point;
    /// Position at time `t >= 0`; equals the end for `t >= length`.
    fn point_at(&self, t: Self::Scalar) -> Self::Point;
    /// Arc-length parameters of the vertices, starting at 0.
    fn breakpoints(&self) -> Vec<Self::Scalar>;
    fn point_distance(&self, a: &Self::Point, b: &Self::Point) -> Self::Scalar;
    /// Concatenation, `None` (the zero of the path semigroup) when the end
    /// of `self` is not the start of `other`.
    fn concat(&self, other: &Self) -> Option<Self>;
    /// Whether the pointwise distance of two such paths is convex between
    /// consecutive breakpoints, so its maximum sits at a breakpoint.
    const PIECEWISE_CONVEX_DISTANCE: bool;
}

pub fn moore_concat<P: MoorePath>(a: &P, b: &P) -> Option<P> {
    a.concat(b)
}

/// Interior samples per piece when the distance is not piecewise convex.
pub const DISTANCE_SAMPLES_PER_PIECE: usize = 64;

/// `max_t d(γ1(t), γ2(t)) + (∫ (s1' - s2')² dt)^{1/2} + |ℓ2 - ℓ1|`.
///
/// Both paths run at unit speed until their lengths, so the speed term is
/// `sqrt(|ℓ2 - ℓ1|)`. The maximum is taken over the union of breakpoints,
/// plus [`DISTANCE_SAMPLES_PER_PIECE`] interior samples per piece when the
/// geometry does not make the distance piecewise convex.
pub fn moore_distance<P: MoorePath>(a: &P, b: &P) -> P::Scalar {
    let mut ts = a.breakpoints();
    ts.extend(b.breakpoints());
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ts.dedup();
    let mut max = <P::Scalar as Zero>::zero();
    let mut eval = |t: P::Scalar| {
        let d = a.point_distance(&a.point_at(t), &b.point_at(t));
        if d > max {
            max = d;
        }
    };
    for w in ts.windows(2) {
        eval(w[0]);
        if !P::PIECEWISE_CONVEX_DISTANCE {
            let n = DISTANCE_SAMPLES_PER_PIECE;
            for k in 1..n {
                let s: P::Scalar = <P::Scalar as NumCast>::from(k).unwrap()
                    / <P::Scalar as NumCast>::from(n).unwrap();
                eval(w[0] + (w[1] - w[0]) * s);
            }
        }
    }
    if let Some(&last) = ts.last() {
        eval(last);
    }
    let dl = (a.length() - b.length()).abs();
    max + dl.sqrt() + dl
}

/// The space a tailleur lives on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space<T> {
    Plane,
    Sphere { radius: T },
}

/// The canonical 2-form of a space together with its taille.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailleContext<T> {
    pub space: Space<T>,
}

impl<T: Float + FloatConst> TailleContext<T> {
    pub fn plane() -> Self {
        TailleContext {
            space: Space::Plane,
        }
    }

    pub fn sphere(radius: T) -> Result<Self, GeometryError> {
        if radius <= T::zero() {
            return Err(GeometryError::NonpositiveParameter("radius"));
        }
        Ok(TailleContext {
            space: Space::Sphere { radius },
        })
    }

    /// The taille divided by π: 0 for the plane and `4R²` for the sphere.
    pub fn taille_over_pi(&self) -> T {
        match self.space {
            Space::Plane => T::zero(),
            Space::Sphere { radius } => T::from(4).unwrap() * radius * radius,
        }
    }

    pub fn taille(&self) -> T {
        self.taille_over_pi() * T::PI()
    }

    /// Canonical residue in `[0, τ)`; the identity when `τ = 0`.
    pub fn reduce(&self, x: T) -> T {
        let tau = self.taille();
        if tau == T::zero() {
            return x;
        }
        let r = x - (x / tau).floor() * tau;
        if r >= tau {
            r - tau
        } else {
            r
        }
    }

    /// Distance from `x` to 0 in `R/τ`.
    pub fn circle_norm(&self, x: T) -> T {
        let tau = self.taille();
        if tau == T::zero() {
            return x.abs();
        }
        let r = self.reduce(x);
        r.min(tau - r)
    }
}

/// A value of the twisting function along a one-parameter scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample<T> {
    pub t: T,
    pub area: T,
    pub phase: Complex<T>,
}
