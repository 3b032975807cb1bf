//! Coherent deformations of semigroup and path algebras.
//!
//! The crate covers the additive cochain complex on composable tuples of a
//! finite semigroup with zero, twists (multiplicative 2-cocycles) and the
//! star products they define, a simplicial cross-check through poset nerves,
//! tailleur cocycles on the phase plane and the round sphere, and a lattice
//! random-walk model of packet spreading on a tiled phase space.
//!
//! Exact algebra runs over [`Rational`]; geometry is generic over
//! [`num_traits::Float`] with `f64` aliases below.

pub mod cochain;
pub mod exact;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod nerve;
pub mod semigroup;
pub mod smith;
pub mod twist;

pub use num_bigint::BigInt;

/// Arbitrary-precision rational used for every exact computation.
pub type Rational = num_rational::BigRational;

pub type RationalMatrix = linalg::Matrix<Rational>;
pub type PhasePoint64 = geometry::PhasePoint<f64>;
pub type PlanePolyline64 = geometry::PlanePolyline<f64>;
pub type SpherePath64 = geometry::SphereGeodesicPath<f64>;
pub type Vec3f = geometry::Vec3<f64>;
pub type PhaseSample64 = geometry::PhaseSample<f64>;
pub type ComplexStar = twist::AlgebraElement<num_complex::Complex64>;
pub type ExactTiling = lattice::TilingModel<Rational>;

pub use cochain::{Cochain, CochainError, Coefficients, DegreeZero};
pub use semigroup::{Elem, Poset, Quiver, SemigroupError, SemigroupTable};
pub use twist::{Multiplier, Twist, TwistError, TwistMode};
