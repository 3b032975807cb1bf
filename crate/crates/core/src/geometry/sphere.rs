use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use super::{tol, GeometryError, MoorePath, PhaseSample, TailleContext, Vec3};
use crate::cochain::{Cochain, Coefficients};
use crate::exact::approximate_f64;
use crate::nerve::{barycentric_subdivision, SimplicialComplex};
use crate::semigroup::{poset_semigroup, Poset, SemigroupTable};
use crate::twist::{circle_twist, Twist};
use crate::Rational;

fn check_pair<T: Float>(a: &Vec3<T>, b: &Vec3<T>) -> Result<(), GeometryError> {
    if !a.is_unit() || !b.is_unit() {
        return Err(GeometryError::NotUnit);
    }
    if a.dot(b) <= -T::one() + tol() {
        return Err(GeometryError::AntipodalUndefined);
    }
    Ok(())
}

/// Minor great-circle arc between two non-antipodal unit vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicArc<T> {
    pub from: Vec3<T>,
    pub to: Vec3<T>,
    /// Central angle in radians.
    pub angle: T,
}

impl<T: Float> GeodesicArc<T> {
    /// Point at central angle `s` from `from`, `0 <= s <= angle`.
    pub fn point_at_angle(&self, s: T) -> Vec3<T> {
        if self.angle <= tol() {
            return (self.from
                + (self.to - self.from) * (s / self.angle.max(T::min_positive_value())))
            .normalized();
        }
        let sin = self.angle.sin();
        (self.from * ((self.angle - s).sin() / sin) + self.to * (s.sin() / sin)).normalized()
    }
}

pub fn sphere_geodesic<T: Float>(a: Vec3<T>, b: Vec3<T>) -> Result<GeodesicArc<T>, GeometryError> {
    check_pair(&a, &b)?;
    Ok(GeodesicArc {
        from: a,
        to: b,
        angle: a.angle_to(&b),
    })
}

/// Signed area of the geodesic triangle `(a, b, c)` on the sphere of radius
/// `r`, positive when `a · (b × c) > 0`:
/// `2 atan2(a·(b×c), 1 + a·b + b·c + c·a) r²`.
pub fn sphere_triangle_area<T: Float>(
    a: &Vec3<T>,
    b: &Vec3<T>,
    c: &Vec3<T>,
    r: T,
) -> Result<T, GeometryError> {
    check_pair(a, b)?;
    check_pair(b, c)?;
    check_pair(c, a)?;
    let triple = a.dot(&b.cross(c));
    let denom = T::one() + a.dot(b) + b.dot(c) + c.dot(a);
    Ok((T::one() + T::one()) * triple.atan2(denom) * r * r)
}

/// Piecewise-geodesic Moore path on the sphere of radius `radius`;
/// waypoints are unit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGeodesicPath<T> {
    radius: T,
    waypoints: Vec<Vec3<T>>,
    length: T,
}

impl<T: Float> SphereGeodesicPath<T> {
    pub fn new(radius: T, waypoints: Vec<Vec3<T>>) -> Result<Self, GeometryError> {
        if radius <= T::zero() {
            return Err(GeometryError::NonpositiveParameter("radius"));
        }
        if waypoints.is_empty() {
            return Err(GeometryError::TooFewVertices(1));
        }
        if !waypoints.iter().all(Vec3::is_unit) {
            return Err(GeometryError::NotUnit);
        }
        let mut length = T::zero();
        for w in waypoints.windows(2) {
            length = length + sphere_geodesic(w[0], w[1])?.angle * radius;
        }
        Ok(SphereGeodesicPath {
            radius,
            waypoints,
            length,
        })
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn waypoints(&self) -> &[Vec3<T>] {
        &self.waypoints
    }

    fn arcs(&self) -> impl Iterator<Item = GeodesicArc<T>> + '_ {
        self.waypoints
            .windows(2)
            .map(|w| sphere_geodesic(w[0], w[1]).expect("validated"))
    }
}

impl<T: Float> MoorePath for SphereGeodesicPath<T> {
    type Scalar = T;
    type Point = Vec3<T>;
    const PIECEWISE_CONVEX_DISTANCE: bool = false;

    fn length(&self) -> T {
        self.length
    }

    fn start(&self) -> Vec3<T> {
        self.waypoints[0]
    }

    fn end(&self) -> Vec3<T> {
        *self.waypoints.last().unwrap()
    }

    fn point_at(&self, t: T) -> Vec3<T> {
        let mut acc = T::zero();
        for arc in self.arcs() {
            let len = arc.angle * self.radius;
            if t <= acc + len && len > T::zero() {
                return arc.point_at_angle(((t - acc) / self.radius).max(T::zero()));
            }
            acc = acc + len;
        }
        self.end()
    }

    fn breakpoints(&self) -> Vec<T> {
        let mut acc = T::zero();
        let mut out = vec![acc];
        for arc in self.arcs() {
            acc = acc + arc.angle * self.radius;
            out.push(acc);
        }
        out
    }

    fn point_distance(&self, a: &Vec3<T>, b: &Vec3<T>) -> T {
        a.angle_to(b) * self.radius
    }

    fn concat(&self, other: &Self) -> Option<Self> {
        if self.radius != other.radius || (self.end() - other.start()).norm() > tol() {
            return None;
        }
        let mut waypoints = self.waypoints.clone();
        waypoints.extend_from_slice(&other.waypoints[1..]);
        Some(SphereGeodesicPath::new(self.radius, waypoints).expect("joined valid paths"))
    }
}

/// Area of the geodesic triangle `(start γ, end γ, end γ')`, reduced into
/// `[0, 4πR²)`. On the simply connected sphere it depends only on endpoints.
pub fn sphere_tailleur<T: Float + FloatConst>(
    g: &SphereGeodesicPath<T>,
    h: &SphereGeodesicPath<T>,
) -> Result<T, GeometryError> {
    if g.radius != h.radius || (g.end() - h.start()).norm() > tol() {
        return Err(GeometryError::NotComposable);
    }
    let ctx = TailleContext::sphere(g.radius)?;
    let raw = sphere_triangle_area(&g.start(), &g.end(), &h.end(), g.radius)?;
    Ok(ctx.reduce(raw))
}

/// Largest `|δω̃|` in `R/4πR²` over `samples` random composable triples of
/// geodesic segments. Points are uniform on the sphere (ChaCha8 seeded
/// with `seed`); quadruples with a nearly antipodal pair are redrawn.
pub fn tailleur_cocycle_residual(
    samples: usize,
    seed: u64,
    radius: f64,
) -> Result<f64, GeometryError> {
    let ctx = TailleContext::sphere(radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < samples {
        let pts: Vec<Vec3<f64>> = (0..4)
            .map(|_| {
                let [x, y, z]: [f64; 3] = UnitSphere.sample(&mut rng);
                Vec3::new(x, y, z).normalized()
            })
            .collect();
        let separated = (0..4).all(|i| (i + 1..4).all(|j| pts[i].dot(&pts[j]) > -1.0 + 1e-6));
        if !separated {
            continue;
        }
        let seg = |i: usize, j: usize| SphereGeodesicPath::new(radius, vec![pts[i], pts[j]]);
        let (g1, g2, g3) = (seg(0, 1)?, seg(1, 2)?, seg(2, 3)?);
        let g12 = g1.concat(&g2).ok_or(GeometryError::NotComposable)?;
        let g23 = g2.concat(&g3).ok_or(GeometryError::NotComposable)?;
        let d = sphere_tailleur(&g2, &g3)? - sphere_tailleur(&g12, &g3)?
            + sphere_tailleur(&g1, &g23)?
            - sphere_tailleur(&g1, &g2)?;
        worst = worst.max(ctx.circle_norm(d));
        done += 1;
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquatorPoint<T> {
    pub lambda: T,
    /// `None` where the geodesic triangle is undefined.
    pub sample: Option<PhaseSample<T>>,
    /// Unreduced signed area.
    pub raw_area: Option<T>,
    pub linear_fit_residual: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquatorReport<T> {
    pub points: Vec<EquatorPoint<T>>,
    /// Slope of the least-squares line through the origin.
    pub slope: T,
    /// Largest `|area(λ) - slope λ|` over the defined points.
    pub nonlinearity: T,
}

/// The sphere scenario: start `θ0` below the equator on meridian 0
/// (`θ0 = π/2` is the south pole), move north to the equator, then east to
/// longitude `λ`. For each `λ` the area of the triangle (start, equator at
/// longitude 0, equator at `λ`) is measured with north as momentum and east
/// as position, so that from the south pole `area(λ) = λ`. The phase is
/// `exp(2πi ω̃ / 4π)` with `ω̃` reduced mod `4π`. At `λ = π` the closing
/// geodesic is not unique and the point is left undefined.
pub fn equator_scenario<T: Float + FloatConst>(
    theta0: T,
    lambdas: &[T],
) -> Result<EquatorReport<T>, GeometryError> {
    if !(theta0 > T::zero() && theta0 <= T::FRAC_PI_2()) {
        return Err(GeometryError::OutOfRange("colatitude"));
    }
    let ctx = TailleContext::sphere(T::one())?;
    let start = Vec3::new(theta0.cos(), T::zero(), -theta0.sin());
    let e0 = Vec3::new(T::one(), T::zero(), T::zero());
    let mut points = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        if lambda < T::zero() || lambda >= T::PI() + T::PI() {
            return Err(GeometryError::OutOfRange("lambda"));
        }
        let el = Vec3::new(lambda.cos(), lambda.sin(), T::zero());
        match sphere_triangle_area(&start, &e0, &el, T::one()) {
            Ok(outward) => {
                let raw = -outward;
                let area = ctx.reduce(raw);
                let phase = Complex::from_polar(T::one(), area / (T::one() + T::one()));
                points.push(EquatorPoint {
                    lambda,
                    sample: Some(PhaseSample {
                        t: lambda,
                        area,
                        phase,
                    }),
                    raw_area: Some(raw),
                    linear_fit_residual: None,
                });
            }
            Err(GeometryError::AntipodalUndefined) => points.push(EquatorPoint {
                lambda,
                sample: None,
                raw_area: None,
                linear_fit_residual: None,
            }),
            Err(e) => return Err(e),
        }
    }
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for p in &points {
        if let Some(a) = p.raw_area {
            sxy = sxy + p.lambda * a;
            sxx = sxx + p.lambda * p.lambda;
        }
    }
    let slope = if sxx > T::zero() {
        sxy / sxx
    } else {
        T::zero()
    };
    let mut nonlinearity = T::zero();
    for p in &mut points {
        if let Some(a) = p.raw_area {
            let r = a - slope * p.lambda;
            nonlinearity = nonlinearity.max(r.abs());
            p.linear_fit_residual = Some(r);
        }
    }
    Ok(EquatorReport {
        points,
        slope,
        nonlinearity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangulation {
    Tetrahedral,
    Octahedral,
}

impl Triangulation {
    fn complex(self) -> (SimplicialComplex, Vec<Vec3<f64>>) {
        let (pts, faces): (Vec<Vec3<f64>>, Vec<[usize; 3]>) = match self {
            Triangulation::Tetrahedral => (
                vec![
                    Vec3::new(1.0, 1.0, 1.0),
                    Vec3::new(1.0, -1.0, -1.0),
                    Vec3::new(-1.0, 1.0, -1.0),
                    Vec3::new(-1.0, -1.0, 1.0),
                ],
                vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
            ),
            Triangulation::Octahedral => {
                let pts = vec![
                    Vec3::new(1.0, 0.0, 0.0),
                    Vec3::new(-1.0, 0.0, 0.0),
                    Vec3::new(0.0, 1.0, 0.0),
                    Vec3::new(0.0, -1.0, 0.0),
                    Vec3::new(0.0, 0.0, 1.0),
                    Vec3::new(0.0, 0.0, -1.0),
                ];
                let faces = [0, 1]
                    .iter()
                    .flat_map(|&x| [2, 3].iter().flat_map(move |&y| [4, 5].map(|z| [x, y, z])))
                    .collect();
                (pts, faces)
            }
        };
        let names: Vec<String> = (0..pts.len()).map(|i| format!("v{i}")).collect();
        let maximal: Vec<Vec<String>> = faces
            .iter()
            .map(|f| f.iter().map(|&i| names[i].clone()).collect())
            .collect();
        let k = SimplicialComplex::from_maximal(&names, &maximal).expect("well-formed");
        (k, pts.iter().map(Vec3::normalized).collect())
    }
}

/// A sphere triangulation packaged as a circle twist on its face-poset
/// semigroup.
#[derive(Debug, Clone)]
pub struct SphereTwistExport {
    pub triangulation: Triangulation,
    pub poset: Poset,
    pub semigroup: Arc<SemigroupTable>,
    /// Circle twist with `τ = 4`; exponents are areas in units of π.
    pub twist: Twist,
    /// Unsigned areas of the 2-cells of the subdivision (flags vertex < edge < face).
    pub cell_areas: Vec<f64>,
}

/// Largest denominator used when rationalizing areas as multiples of π.
pub const AREA_MAX_DENOMINATOR: u64 = 10_000;
/// Agreement required between an area and its rational multiple of π.
pub const AREA_RATIONAL_TOL: f64 = 1e-9;

/// Face poset of the triangulation (whose nerve is its barycentric
/// subdivision), with each composable pair `(e_ij, e_jk)` assigned the
/// signed area of the geodesic triangle on the centrally projected
/// barycenters of `i, j, k`, reduced mod 4π. Areas are stored as rational
/// multiples of π, so the circle twist has `τ = 4`.
pub fn export_sphere_twist(tri: Triangulation) -> Result<SphereTwistExport, GeometryError> {
    let (k, verts) = tri.complex();
    let poset = barycentric_subdivision(&k);
    let semigroup = Arc::new(poset_semigroup(&poset).map_err(crate::twist::TwistError::from)?);
    let faces: Vec<&Vec<usize>> = k.simplices().collect();
    let centers: Vec<Vec3<f64>> = faces
        .iter()
        .map(|f| {
            f.iter()
                .fold(Vec3::new(0.0, 0.0, 0.0), |acc, &v| acc + verts[v])
                .normalized()
        })
        .collect();
    // Poset elements are the simplices, in the same order as `faces`.
    let unit_index: HashMap<String, (usize, usize)> = poset
        .comparable_pairs()
        .into_iter()
        .map(|(i, j)| (poset.unit_name(i, j), (i, j)))
        .collect();

    let four = Rational::from_integer(4.into());
    let mut bad = None;
    let pi = std::f64::consts::PI;
    let exponent = Cochain::from_fn(
        semigroup.clone(),
        2,
        Coefficients::ModTau(four.clone()),
        |t| {
            let (i, j) = unit_index[semigroup.name(t[0])];
            let (_, l) = unit_index[semigroup.name(t[1])];
            let area = sphere_triangle_area(&centers[i], &centers[j], &centers[l], 1.0)
                .unwrap_or(f64::NAN);
            let units = area / pi;
            match approximate_f64(units, AREA_MAX_DENOMINATOR) {
                Some(r) if (crate::exact::to_f64(&r) - units).abs() <= AREA_RATIONAL_TOL => r,
                _ => {
                    bad.get_or_insert(area);
                    Rational::from_integer(0.into())
                }
            }
        },
    );
    if let Some(a) = bad {
        return Err(GeometryError::NotRationalMultiple(a));
    }
    let twist = circle_twist(&exponent)?;
    let mut cell_areas = Vec::new();
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            for (l, c) in faces.iter().enumerate() {
                if a.len() == 1
                    && b.len() == 2
                    && c.len() == 3
                    && b.contains(&a[0])
                    && b.iter().all(|v| c.contains(v))
                {
                    cell_areas.push(
                        sphere_triangle_area(&centers[i], &centers[j], &centers[l], 1.0)?.abs(),
                    );
                }
            }
        }
    }
    Ok(SphereTwistExport {
        triangulation: tri,
        poset,
        semigroup,
        twist,
        cell_areas,
    })
}
