use num_complex::{Complex, Complex64};
use num_traits::{Float, FloatConst, Num, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{tol, GeometryError, MoorePath, PhasePoint, PhaseSample};
use crate::exact::{rem_euclid, to_f64};
use crate::Rational;

/// Piecewise-linear Moore path in the phase plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanePolyline<T> {
    vertices: Vec<PhasePoint<T>>,
    length: T,
}

impl<T: Float> PlanePolyline<T> {
    pub fn new(vertices: Vec<PhasePoint<T>>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::TooFewVertices(1));
        }
        let length = vertices
            .windows(2)
            .fold(T::zero(), |acc, w| acc + w[0].dist(&w[1]));
        Ok(PlanePolyline { vertices, length })
    }

    pub fn from_coords(coords: &[(T, T)]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&(q, p)| PhasePoint::new(q, p)).collect())
    }

    pub fn vertices(&self) -> &[PhasePoint<T>] {
        &self.vertices
    }

    fn segment_lengths(&self) -> impl Iterator<Item = T> + '_ {
        self.vertices.windows(2).map(|w| w[0].dist(&w[1]))
    }
}

impl<T: Float> MoorePath for PlanePolyline<T> {
    type Scalar = T;
    type Point = PhasePoint<T>;
    const PIECEWISE_CONVEX_DISTANCE: bool = true;

    fn length(&self) -> T {
        self.length
    }

    fn start(&self) -> PhasePoint<T> {
        self.vertices[0]
    }

    fn end(&self) -> PhasePoint<T> {
        *self.vertices.last().unwrap()
    }

    fn point_at(&self, t: T) -> PhasePoint<T> {
        let mut acc = T::zero();
        for (w, len) in self.vertices.windows(2).zip(self.segment_lengths()) {
            if t <= acc + len && len > T::zero() {
                return w[0].lerp(&w[1], ((t - acc) / len).max(T::zero()));
            }
            acc = acc + len;
        }
        self.end()
    }

    fn breakpoints(&self) -> Vec<T> {
        let mut acc = T::zero();
        let mut out = vec![acc];
        for len in self.segment_lengths() {
            acc = acc + len;
            out.push(acc);
        }
        out
    }

    fn point_distance(&self, a: &PhasePoint<T>, b: &PhasePoint<T>) -> T {
        a.dist(b)
    }

    fn concat(&self, other: &Self) -> Option<Self> {
        if self.end().dist(&other.start()) > tol() {
            return None;
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        Some(PlanePolyline::new(v).expect("nonempty"))
    }
}

/// Signed area of the triangle `(a, b, c)`: `((b-a)_p (c-a)_q - (b-a)_q (c-a)_p) / 2`.
pub fn plane_signed_area<T: Float>(a: &PhasePoint<T>, b: &PhasePoint<T>, c: &PhasePoint<T>) -> T {
    let (dq1, dp1) = (b.q - a.q, b.p - a.p);
    let (dq2, dp2) = (c.q - a.q, c.p - a.p);
    (dp1 * dq2 - dq1 * dp2) / T::from(2).unwrap()
}

/// Area of the triangle spanned by `start γ`, `end γ`, `end γ'`. The plane
/// has taille 0, so no reduction takes place.
pub fn plane_tailleur<T: Float>(
    g: &PlanePolyline<T>,
    h: &PlanePolyline<T>,
) -> Result<T, GeometryError> {
    if g.end().dist(&h.start()) > tol() {
        return Err(GeometryError::NotComposable);
    }
    Ok(plane_signed_area(&g.start(), &g.end(), &h.end()))
}

/// Largest `|δω|` over `samples` random composable triples of segments with
/// vertices in `[-1, 1]²`.
pub fn plane_cocycle_residual(samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let pts: Vec<PhasePoint<f64>> = (0..4)
            .map(|_| PhasePoint::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let seg = |i: usize, j: usize| PlanePolyline::new(vec![pts[i], pts[j]]).unwrap();
        let (g1, g2, g3) = (seg(0, 1), seg(1, 2), seg(2, 3));
        let g12 = g1.concat(&g2).unwrap();
        let g23 = g2.concat(&g3).unwrap();
        let w = |a: &PlanePolyline<f64>, b: &PlanePolyline<f64>| plane_tailleur(a, b).unwrap();
        let d = w(&g2, &g3) - w(&g12, &g3) + w(&g1, &g23) - w(&g1, &g2);
        worst = worst.max(d.abs());
    }
    worst
}

fn cross<T: Float>(a: (T, T), b: (T, T)) -> T {
    a.0 * b.1 - a.1 * b.0
}

fn segments_intersect<T: Float>(
    a: PhasePoint<T>,
    b: PhasePoint<T>,
    c: PhasePoint<T>,
    d: PhasePoint<T>,
) -> bool {
    let orient = |p: PhasePoint<T>, q: PhasePoint<T>, r: PhasePoint<T>| {
        let v = cross((q.q - p.q, q.p - p.p), (r.q - p.q, r.p - p.p));
        if v.abs() <= tol() {
            0
        } else if v > T::zero() {
            1
        } else {
            -1
        }
    };
    let on_segment = |p: PhasePoint<T>, q: PhasePoint<T>, r: PhasePoint<T>| {
        r.q >= p.q.min(q.q) - tol()
            && r.q <= p.q.max(q.q) + tol()
            && r.p >= p.p.min(q.p) - tol()
            && r.p <= p.p.max(q.p) + tol()
    };
    let (o1, o2, o3, o4) = (
        orient(a, b, c),
        orient(a, b, d),
        orient(c, d, a),
        orient(c, d, b),
    );
    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Twice the absolute turning number of a simple closed polygon, given as a
/// polyline whose last vertex repeats the first.
pub fn maslov_polygon<T: Float + FloatConst>(
    poly: &PlanePolyline<T>,
) -> Result<i64, GeometryError> {
    let v = poly.vertices();
    if v.len() < 2 || v[0].dist(v.last().unwrap()) > tol() {
        return Err(GeometryError::NotClosed);
    }
    let pts = &v[..v.len() - 1];
    let n = pts.len();
    if n < 3 {
        return Err(GeometryError::TooFewVertices(3));
    }
    let edge = |i: usize| (pts[(i + 1) % n], pts[i]);
    for i in 0..n {
        let (b, a) = edge(i);
        if a.dist(&b) <= tol() {
            return Err(GeometryError::SelfIntersecting);
        }
        for j in i + 1..n {
            let (d, c) = edge(j);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Adjacent edges may only share their common vertex: reject folds back.
                let shared = if j == i + 1 { b } else { a };
                let (u, w) = if j == i + 1 { (a, d) } else { (b, c) };
                let du = (u.q - shared.q, u.p - shared.p);
                let dw = (w.q - shared.q, w.p - shared.p);
                if cross(du, dw).abs() <= tol() && du.0 * dw.0 + du.1 * dw.1 > T::zero() {
                    return Err(GeometryError::SelfIntersecting);
                }
            } else if segments_intersect(a, b, c, d) {
                return Err(GeometryError::SelfIntersecting);
            }
        }
    }
    let mut total = T::zero();
    for i in 0..n {
        let (b, a) = edge(i);
        let (d, c) = edge((i + 1) % n);
        let e1 = (b.q - a.q, b.p - a.p);
        let e2 = (d.q - c.q, d.p - c.p);
        total = total + cross(e1, e2).atan2(e1.0 * e2.0 + e1.1 * e2.1);
    }
    let turning = (total / (T::PI() + T::PI())).round().to_i64().unwrap();
    Ok(2 * turning.abs())
}

fn require_positive<T: Float>(x: T, name: &'static str) -> Result<(), GeometryError> {
    if x > T::zero() {
        Ok(())
    } else {
        Err(GeometryError::NonpositiveParameter(name))
    }
}

/// Twisting-function value of the free-particle scenario at time `t`:
/// the doubled area `pvt`, reduced modulo `h`, and the phase
/// `exp(2πi pvt / h)`.
pub fn free_particle_phase<T: Float + FloatConst>(
    p: T,
    v: T,
    t: T,
    h: T,
) -> Result<PhaseSample<T>, GeometryError> {
    require_positive(p, "p")?;
    require_positive(v, "v")?;
    require_positive(h, "h")?;
    if t < T::zero() {
        return Err(GeometryError::NonpositiveParameter("t"));
    }
    let raw = p * v * t;
    let mut area = raw - (raw / h).floor() * h;
    if area >= h {
        area = area - h;
    }
    let angle = (T::PI() + T::PI()) * area / h;
    Ok(PhaseSample {
        t,
        area,
        phase: Complex::from_polar(T::one(), angle),
    })
}

/// Exact-rational variant of [`free_particle_phase`]: the reduced area is
/// exact, the phase is evaluated from the exact fraction of a turn.
pub fn free_particle_phase_exact(
    p: &Rational,
    v: &Rational,
    t: &Rational,
    h: &Rational,
) -> Result<(Rational, Complex64), GeometryError> {
    for (x, name) in [(p, "p"), (v, "v"), (h, "h")] {
        if !x.is_positive() {
            return Err(GeometryError::NonpositiveParameter(name));
        }
    }
    if t.is_negative() {
        return Err(GeometryError::NonpositiveParameter("t"));
    }
    let area = rem_euclid(&(p * v * t), h);
    let turn = to_f64(&(&area / h));
    Ok((
        area,
        Complex64::from_polar(1.0, std::f64::consts::TAU * turn),
    ))
}

/// Time period `h / (pv)` of the free-particle phase.
pub fn free_particle_period<T: Num + Clone + PartialOrd>(
    p: T,
    v: T,
    h: T,
) -> Result<T, GeometryError> {
    if p <= T::zero() || v <= T::zero() || h <= T::zero() {
        return Err(GeometryError::NonpositiveParameter("p, v, h"));
    }
    Ok(h / (p * v))
}

/// `h / p`.
pub fn de_broglie_wavelength<T: Num + Clone + PartialOrd>(p: T, h: T) -> Result<T, GeometryError> {
    if p.is_zero() {
        return Err(GeometryError::ZeroMomentum);
    }
    if p < T::zero() {
        return Err(GeometryError::NonpositiveParameter("p"));
    }
    if h <= T::zero() {
        return Err(GeometryError::NonpositiveParameter("h"));
    }
    Ok(h / p)
}
