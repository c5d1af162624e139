//! Exact-formula kernel for the hyperbolic plane, upper half-plane model.
//!
//! Points are pairs `(x, y)` with `y > 0`, geodesics are half-circles
//! centered on the real axis or vertical lines, and orientation-preserving
//! isometries are real 2×2 matrices of determinant one acting by Möbius
//! transformations. All predicates are closed-form; tolerances appear only
//! in validation helpers, never in the formulas themselves.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `|det - 1|` after normalization.
pub const DET_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point must have positive imaginary part, got y = {0}")]
    PointNotInPlane(f64),
    #[error("point coordinates must be finite")]
    PointNotFinite,
    #[error("geodesic endpoints must be distinct")]
    EqualEndpoints,
    #[error("matrix determinant must be positive and finite, got {0}")]
    NonPositiveDeterminant(f64),
    #[error("not a hyperbolic isometry: |trace| = {0} is not > 2")]
    NotHyperbolic(f64),
    #[error("geodesics intersect; no common perpendicular")]
    GeodesicsIntersect,
    #[error("geodesics share an ideal endpoint; no common perpendicular")]
    GeodesicsAsymptotic,
    #[error("Möbius denominator underflow")]
    DenominatorUnderflow,
    #[error("intermediate quantity overflowed the double range")]
    NumericOverflow,
}

/// A point of the upper half-plane, `y > 0` strictly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    x: f64,
    y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(GeometryError::PointNotFinite);
        }
        if y <= 0.0 {
            return Err(GeometryError::PointNotInPlane(y));
        }
        Ok(HPoint { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Hyperbolic distance. Computed as `2 asinh(|z - w| / (2 sqrt(y1 y2)))`,
    /// which is accurate for both very close and very distant points.
    pub fn dist(&self, other: &HPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let chord = dx.hypot(dy);
        2.0 * (chord / (2.0 * (self.y * other.y).sqrt())).asinh()
    }
}

/// A point of the ideal boundary: a real number or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum IdealPoint {
    Finite(f64),
    Infinity,
}

impl IdealPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, IdealPoint::Infinity)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            IdealPoint::Finite(t) => Some(*t),
            IdealPoint::Infinity => None,
        }
    }
}

/// Which Euclidean shape a geodesic takes in the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicShape {
    /// Half-circle centered at `center` on the real axis.
    Circle { center: f64, radius: f64 },
    /// Vertical line at `x`.
    Vertical { x: f64 },
}

/// An oriented geodesic, stored by its ordered pair of ideal endpoints.
///
/// Orientation matters: the "left" side of the geodesic (traveling from
/// `from` towards `to`) is the half-plane selected by [`HalfPlane`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HGeodesic {
    from: IdealPoint,
    to: IdealPoint,
}

impl HGeodesic {
    pub fn new(from: IdealPoint, to: IdealPoint) -> Result<Self, GeometryError> {
        if ideal_eq(&from, &to) {
            return Err(GeometryError::EqualEndpoints);
        }
        if let IdealPoint::Finite(t) = from {
            if !t.is_finite() {
                return Err(GeometryError::PointNotFinite);
            }
        }
        if let IdealPoint::Finite(t) = to {
            if !t.is_finite() {
                return Err(GeometryError::PointNotFinite);
            }
        }
        Ok(HGeodesic { from, to })
    }

    pub fn between(a: f64, b: f64) -> Result<Self, GeometryError> {
        HGeodesic::new(IdealPoint::Finite(a), IdealPoint::Finite(b))
    }

    /// Vertical geodesic at `x`, oriented upward.
    pub fn vertical_up(x: f64) -> Self {
        HGeodesic {
            from: IdealPoint::Finite(x),
            to: IdealPoint::Infinity,
        }
    }

    pub fn from_endpoint(&self) -> IdealPoint {
        self.from
    }

    pub fn to_endpoint(&self) -> IdealPoint {
        self.to
    }

    /// Reverse the orientation.
    pub fn reversed(&self) -> Self {
        HGeodesic {
            from: self.to,
            to: self.from,
        }
    }

    pub fn shape(&self) -> GeodesicShape {
        match (self.from, self.to) {
            (IdealPoint::Finite(p), IdealPoint::Finite(q)) => GeodesicShape::Circle {
                center: 0.5 * (p + q),
                radius: 0.5 * (q - p).abs(),
            },
            (IdealPoint::Finite(p), IdealPoint::Infinity) => GeodesicShape::Vertical { x: p },
            (IdealPoint::Infinity, IdealPoint::Finite(q)) => GeodesicShape::Vertical { x: q },
            (IdealPoint::Infinity, IdealPoint::Infinity) => unreachable!("validated distinct"),
        }
    }

    /// Unit-speed parameterization. `t = 0` is the apex of a half-circle
    /// (respectively the point at height 1 on a vertical line), and `t`
    /// increases towards the `to` endpoint.
    pub fn point_at(&self, t: f64) -> HPoint {
        match (self.from, self.to) {
            (IdealPoint::Finite(p), IdealPoint::Finite(q)) => {
                let m = 0.5 * (p + q);
                let r = 0.5 * (q - p).abs();
                let s = if q > p { 1.0 } else { -1.0 };
                HPoint {
                    x: m + r * s * t.tanh(),
                    y: r / t.cosh(),
                }
            }
            (IdealPoint::Finite(p), IdealPoint::Infinity) => HPoint { x: p, y: t.exp() },
            (IdealPoint::Infinity, IdealPoint::Finite(q)) => HPoint { x: q, y: (-t).exp() },
            (IdealPoint::Infinity, IdealPoint::Infinity) => unreachable!(),
        }
    }

    /// Unit-speed parameter of a point lying on the geodesic (the inverse
    /// of [`point_at`](Self::point_at)). Meaningful only for points on the
    /// geodesic; the projection is not validated.
    pub fn parameter_of(&self, z: &HPoint) -> f64 {
        match (self.from, self.to) {
            (IdealPoint::Finite(p), IdealPoint::Finite(q)) => {
                let m = 0.5 * (p + q);
                let r = 0.5 * (q - p).abs();
                let s = if q > p { 1.0 } else { -1.0 };
                (s * (z.x - m) / r).atanh()
            }
            (IdealPoint::Finite(_), IdealPoint::Infinity) => z.y.ln(),
            (IdealPoint::Infinity, IdealPoint::Finite(_)) => -z.y.ln(),
            (IdealPoint::Infinity, IdealPoint::Infinity) => unreachable!(),
        }
    }

    /// Signed hyperbolic distance from `z` to the geodesic: positive on the
    /// left side of the orientation, negative on the right.
    pub fn signed_dist(&self, z: &HPoint) -> f64 {
        match (self.from, self.to) {
            (IdealPoint::Finite(p), IdealPoint::Finite(q)) => {
                let m = 0.5 * (p + q);
                let r = 0.5 * (q - p).abs();
                let dx = z.x - m;
                let u = (dx * dx + z.y * z.y - r * r) / (2.0 * r * z.y);
                if q > p {
                    u.asinh()
                } else {
                    (-u).asinh()
                }
            }
            // Oriented upward at p: left side is x < p.
            (IdealPoint::Finite(p), IdealPoint::Infinity) => ((p - z.x) / z.y).asinh(),
            // Oriented downward at q: left side is x > q.
            (IdealPoint::Infinity, IdealPoint::Finite(q)) => ((z.x - q) / z.y).asinh(),
            (IdealPoint::Infinity, IdealPoint::Infinity) => unreachable!(),
        }
    }

    /// Distance from a point to the geodesic (unsigned).
    pub fn dist_to_point(&self, z: &HPoint) -> f64 {
        self.signed_dist(z).abs()
    }

    /// Whether an ideal point lies in the closed boundary arc on the left
    /// side of the oriented geodesic.
    pub fn ideal_in_left_arc(&self, t: &IdealPoint) -> bool {
        match (self.from, self.to) {
            (IdealPoint::Finite(p), IdealPoint::Finite(q)) => {
                if q > p {
                    // Left is the outside of the half-disk.
                    match t {
                        IdealPoint::Infinity => true,
                        IdealPoint::Finite(v) => *v <= p || *v >= q,
                    }
                } else {
                    // Left is the inside of the half-disk.
                    match t {
                        IdealPoint::Infinity => false,
                        IdealPoint::Finite(v) => *v >= q && *v <= p,
                    }
                }
            }
            (IdealPoint::Finite(p), IdealPoint::Infinity) => match t {
                IdealPoint::Infinity => true,
                IdealPoint::Finite(v) => *v <= p,
            },
            (IdealPoint::Infinity, IdealPoint::Finite(q)) => match t {
                IdealPoint::Infinity => true,
                IdealPoint::Finite(v) => *v >= q,
            },
            (IdealPoint::Infinity, IdealPoint::Infinity) => unreachable!(),
        }
    }

    /// Endpoint-set equality, ignoring orientation, with tolerance `tol`
    /// relative to the endpoint magnitudes.
    pub fn same_geodesic(&self, other: &HGeodesic, tol: f64) -> bool {
        let fwd = ideal_close(&self.from, &other.from, tol) && ideal_close(&self.to, &other.to, tol);
        let bwd = ideal_close(&self.from, &other.to, tol) && ideal_close(&self.to, &other.from, tol);
        fwd || bwd
    }
}

fn ideal_eq(a: &IdealPoint, b: &IdealPoint) -> bool {
    match (a, b) {
        (IdealPoint::Infinity, IdealPoint::Infinity) => true,
        (IdealPoint::Finite(s), IdealPoint::Finite(t)) => s == t,
        _ => false,
    }
}

fn ideal_close(a: &IdealPoint, b: &IdealPoint, tol: f64) -> bool {
    match (a, b) {
        (IdealPoint::Infinity, IdealPoint::Infinity) => true,
        (IdealPoint::Finite(s), IdealPoint::Finite(t)) => {
            (s - t).abs() <= tol * (1.0 + s.abs().max(t.abs()))
        }
        _ => false,
    }
}

/// An orientation-preserving isometry of the upper half-plane, stored as a
/// real matrix `[[a, b], [c, d]]` normalized to determinant one with trace
/// sign `a + d >= 0` when the trace is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Isometry {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeometryError> {
        let det = a * d - b * c;
        if !(det.is_finite() && det > 0.0) {
            return Err(GeometryError::NonPositiveDeterminant(det));
        }
        let s = det.sqrt();
        let mut m = Isometry {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        };
        m.normalize_sign();
        Ok(m)
    }

    fn normalize_sign(&mut self) {
        let tr = self.a + self.d;
        let flip = if tr != 0.0 {
            tr < 0.0
        } else if self.a != 0.0 {
            self.a < 0.0
        } else {
            self.b < 0.0
        };
        if flip {
            self.a = -self.a;
            self.b = -self.b;
            self.c = -self.c;
            self.d = -self.d;
        }
    }

    pub fn identity() -> Self {
        Isometry {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// Translation along the imaginary axis by hyperbolic length `l`
    /// (towards infinity for `l > 0`), i.e. `z ↦ e^l z`.
    pub fn axis_translation(l: f64) -> Self {
        Isometry {
            a: (0.5 * l).exp(),
            b: 0.0,
            c: 0.0,
            d: (-0.5 * l).exp(),
        }
    }

    pub fn entries(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d)
    }

    /// Largest entry magnitude; a cheap conditioning proxy for products.
    pub fn sup_norm(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        // det = 1, so the inverse is [[d, -b], [-c, a]]; renormalize the sign.
        let mut m = Isometry {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        };
        m.normalize_sign();
        m
    }

    /// Matrix product `self * other` (apply `other` first), renormalized.
    pub fn compose(&self, other: &Isometry) -> Self {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        // Renormalize to keep |det - 1| within DET_TOL over long products.
        let det = a * d - b * c;
        let s = det.sqrt();
        let mut m = Isometry {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        };
        m.normalize_sign();
        m
    }

    /// Möbius action on a point of the upper half-plane.
    pub fn apply(&self, z: &HPoint) -> Result<HPoint, GeometryError> {
        let (x, y) = (z.x, z.y);
        let re_den = self.c * x + self.d;
        let den = re_den * re_den + self.c * self.c * y * y;
        if den < 1e-300 {
            return Err(GeometryError::DenominatorUnderflow);
        }
        let re_num = self.a * x + self.b;
        // Im(g z) = y / |cz + d|^2 for det = 1.
        let nx = (re_num * re_den + self.a * self.c * y * y) / den;
        let ny = y / den;
        HPoint::new(nx, ny)
    }

    /// Action on the ideal boundary.
    pub fn apply_ideal(&self, p: &IdealPoint) -> IdealPoint {
        match p {
            IdealPoint::Infinity => {
                if self.c == 0.0 {
                    IdealPoint::Infinity
                } else {
                    IdealPoint::Finite(self.a / self.c)
                }
            }
            IdealPoint::Finite(t) => {
                let den = self.c * t + self.d;
                if den == 0.0 {
                    IdealPoint::Infinity
                } else {
                    let v = (self.a * t + self.b) / den;
                    if v.is_finite() {
                        IdealPoint::Finite(v)
                    } else {
                        IdealPoint::Infinity
                    }
                }
            }
        }
    }

    pub fn apply_geodesic(&self, g: &HGeodesic) -> HGeodesic {
        HGeodesic {
            from: self.apply_ideal(&g.from),
            to: self.apply_ideal(&g.to),
        }
    }

    /// `|trace| > 2` strictly.
    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0
    }

    /// Translation length `2 acosh(|tr|/2)` of a hyperbolic isometry.
    pub fn translation_length(&self) -> Result<f64, GeometryError> {
        let t = self.trace().abs();
        if t <= 2.0 {
            return Err(GeometryError::NotHyperbolic(t));
        }
        Ok(2.0 * (0.5 * t).acosh())
    }

    /// Axis of a hyperbolic isometry, oriented from the repelling fixed
    /// point to the attracting one.
    pub fn axis(&self) -> Result<HGeodesic, GeometryError> {
        let tr = self.trace();
        if tr.abs() <= 2.0 {
            return Err(GeometryError::NotHyperbolic(tr.abs()));
        }
        let disc = (tr * tr - 4.0).sqrt();
        if self.c != 0.0 {
            let t1 = (self.a - self.d + disc) / (2.0 * self.c);
            let t2 = (self.a - self.d - disc) / (2.0 * self.c);
            // The fixed point with |c t + d| > 1 carries the expanding
            // eigenvalue and is attracting.
            let (att, rep) = if (self.c * t1 + self.d).abs() > (self.c * t2 + self.d).abs() {
                (t1, t2)
            } else {
                (t2, t1)
            };
            HGeodesic::new(IdealPoint::Finite(rep), IdealPoint::Finite(att))
        } else {
            // Fixed points are infinity and b/(d - a).
            let other = self.b / (self.d - self.a);
            if self.a.abs() > self.d.abs() {
                HGeodesic::new(IdealPoint::Finite(other), IdealPoint::Infinity)
            } else {
                HGeodesic::new(IdealPoint::Infinity, IdealPoint::Finite(other))
            }
        }
    }

    /// Entrywise comparison after normalization.
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        (self.a - other.a).abs() <= tol
            && (self.b - other.b).abs() <= tol
            && (self.c - other.c).abs() <= tol
            && (self.d - other.d).abs() <= tol
    }
}

/// Cross-ratio data for a pair of geodesics with all four endpoints
/// distinct. `t = tanh^2(d/2)` for disjoint pairs; `one_minus_t` is carried
/// separately in product form so that distances near the `cosh` range limit
/// do not lose the complement to rounding.
struct EndpointGap {
    t: f64,
    one_minus_t: f64,
}

fn factor(a: &IdealPoint, b: &IdealPoint) -> Option<f64> {
    // A factor (a - b) of a cross-ratio product; None marks a factor that
    // is cancelled against the projective limit at infinity.
    match (a, b) {
        (IdealPoint::Finite(s), IdealPoint::Finite(t)) => Some(s - t),
        _ => None,
    }
}

fn product(f1: Option<f64>, f2: Option<f64>) -> f64 {
    f1.unwrap_or(1.0) * f2.unwrap_or(1.0)
}

fn endpoint_gap(g1: &HGeodesic, g2: &HGeodesic) -> Result<EndpointGap, GeometryError> {
    let (p1, q1, p2, q2) = (&g1.from, &g1.to, &g2.from, &g2.to);
    for a in [p1, q1] {
        for b in [p2, q2] {
            if ideal_eq(a, b) {
                return Err(GeometryError::GeodesicsAsymptotic);
            }
        }
    }
    // lambda = (p1-p2)(q1-q2) / (p1-q2)(q1-p2); exactly one factor of each
    // product contains a given endpoint, so an endpoint at infinity cancels
    // by dropping its factor from all three products. In the complement
    // mu = 1 - lambda = (p1-q1)(q2-p2) / (p1-q2)(q1-p2) the dropped factors
    // for q1 and q2 limit to minus the matching denominator factor, which
    // contributes a sign.
    let num_lambda = product(factor(p1, p2), factor(q1, q2));
    let num_mu = product(factor(p1, q1), factor(q2, p2));
    let den = product(factor(p1, q2), factor(q1, p2));
    let mu_sign = if q1.is_infinity() || q2.is_infinity() {
        -1.0
    } else {
        1.0
    };
    let lambda = num_lambda / den;
    let mu = mu_sign * num_mu / den; // mu = 1 - lambda in exact arithmetic
    if lambda <= 0.0 {
        return if num_lambda == 0.0 {
            Err(GeometryError::GeodesicsAsymptotic)
        } else {
            Err(GeometryError::GeodesicsIntersect)
        };
    }
    if num_mu == 0.0 {
        return Err(GeometryError::GeodesicsAsymptotic);
    }
    if lambda < 1.0 {
        Ok(EndpointGap {
            t: lambda,
            one_minus_t: mu,
        })
    } else {
        Ok(EndpointGap {
            t: den / num_lambda,
            one_minus_t: -mu_sign * num_mu / num_lambda,
        })
    }
}

/// Length of the common perpendicular between two disjoint geodesics,
/// computed from the cross-ratio of their ideal endpoints.
///
/// Errors if the geodesics intersect or share an ideal endpoint.
pub fn geodesic_distance(g1: &HGeodesic, g2: &HGeodesic) -> Result<f64, GeometryError> {
    let gap = endpoint_gap(g1, g2)?;
    // d = 2 atanh(sqrt t); for t near 1 rewrite through the exact complement.
    if gap.t <= 0.5 {
        Ok(2.0 * gap.t.sqrt().atanh())
    } else {
        let s = gap.t.sqrt();
        Ok(((1.0 + s) * (1.0 + s) / gap.one_minus_t).ln())
    }
}

/// Common perpendicular between the upward imaginary axis and the axis of
/// a hyperbolic matrix, computed entirely from matrix entries.
///
/// The fixed points of `[[a,b],[c,d]]` are the roots of
/// `c t² + (d-a) t - b = 0`, so their product is `-b/c` and the half-circle
/// data of the axis follow in product form: `sinh d = 2 √(-bc) / √(tr²-4)`.
/// Unlike mapping ideal endpoints around, no cancellation occurs when the
/// axis subtends a tiny interval far from the observer, so the result
/// stays accurate for distant lifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalPerp {
    pub distance: f64,
    /// Foot on the imaginary axis, at height `√(-b/c)`.
    pub foot_on_axis: HPoint,
    /// Foot on the axis of the matrix.
    pub foot_on_other: HPoint,
}

pub fn perpendicular_from_vertical(m: &Isometry) -> Result<VerticalPerp, GeometryError> {
    let (a, b, c, d) = m.entries();
    let tr = a + d;
    let disc = tr * tr - 4.0;
    if disc <= 0.0 {
        return Err(GeometryError::NotHyperbolic(tr.abs()));
    }
    if c == 0.0 || b == 0.0 {
        // The axis shares an ideal endpoint with the vertical axis.
        return Err(GeometryError::GeodesicsAsymptotic);
    }
    let minus_bc = -b * c;
    if minus_bc <= 0.0 {
        // Fixed points on opposite sides of zero: the axes cross.
        return Err(GeometryError::GeodesicsIntersect);
    }
    let prod = -b / c; // product of the fixed points, > 0 here
    let s = prod.sqrt();
    let sinh_d = 2.0 * minus_bc.sqrt() / disc.sqrt();
    // Center of the axis half-circle is (a-d)/(2c), nonzero since the
    // fixed points share a sign.
    let x2 = -2.0 * b / (a - d);
    let y2 = s * disc.sqrt() / (a - d).abs();
    let distance = sinh_d.asinh();
    if !(distance.is_finite() && s.is_finite() && x2.is_finite() && y2.is_finite() && y2 > 0.0) {
        return Err(GeometryError::NumericOverflow);
    }
    Ok(VerticalPerp {
        distance,
        foot_on_axis: HPoint { x: 0.0, y: s },
        foot_on_other: HPoint { x: x2, y: y2 },
    })
}

/// Isometry mapping `g` to the upward imaginary axis (`from ↦ 0`, `to ↦ ∞`).
pub fn axis_normalizer(g: &HGeodesic) -> Isometry {
    normalizer_to_axis(g)
}

fn normalizer_to_axis(g: &HGeodesic) -> Isometry {
    match (g.from, g.to) {
        (IdealPoint::Finite(p), IdealPoint::Finite(q)) => {
            if p > q {
                Isometry::new(1.0, -p, 1.0, -q).expect("distinct endpoints")
            } else {
                Isometry::new(-1.0, p, 1.0, -q).expect("distinct endpoints")
            }
        }
        (IdealPoint::Finite(p), IdealPoint::Infinity) => {
            Isometry::new(1.0, -p, 0.0, 1.0).expect("translation")
        }
        (IdealPoint::Infinity, IdealPoint::Finite(q)) => {
            Isometry::new(0.0, 1.0, -1.0, q).expect("inversion")
        }
        (IdealPoint::Infinity, IdealPoint::Infinity) => unreachable!("validated distinct"),
    }
}

/// Feet of the common perpendicular: the first point lies on `g1`, the
/// second on `g2`, and their distance equals [`geodesic_distance`].
pub fn common_perpendicular(
    g1: &HGeodesic,
    g2: &HGeodesic,
) -> Result<(HPoint, HPoint), GeometryError> {
    let (feet, _) = perpendicular_data(g1, g2)?;
    Ok(feet)
}

/// The common perpendicular as a geodesic (orientation from `g1` to `g2`).
pub fn common_perpendicular_geodesic(
    g1: &HGeodesic,
    g2: &HGeodesic,
) -> Result<HGeodesic, GeometryError> {
    let (_, perp) = perpendicular_data(g1, g2)?;
    Ok(perp)
}

fn perpendicular_data(
    g1: &HGeodesic,
    g2: &HGeodesic,
) -> Result<((HPoint, HPoint), HGeodesic), GeometryError> {
    // Validate disjointness first so error cases are classified uniformly.
    endpoint_gap(g1, g2)?;
    let t = normalizer_to_axis(g1);
    let r = match t.apply_ideal(&g2.from) {
        IdealPoint::Finite(v) => v,
        IdealPoint::Infinity => return Err(GeometryError::GeodesicsAsymptotic),
    };
    let rr = match t.apply_ideal(&g2.to) {
        IdealPoint::Finite(v) => v,
        IdealPoint::Infinity => return Err(GeometryError::GeodesicsAsymptotic),
    };
    let prod = r * rr;
    if prod <= 0.0 {
        return Err(GeometryError::GeodesicsIntersect);
    }
    // In the normalized chart g1 is the imaginary axis and g2 the half
    // circle over [r, rr]; the perpendicular is the half circle of radius
    // sqrt(r * rr) about the origin.
    let s = prod.sqrt();
    let m = 0.5 * (r + rr);
    let rho = 0.5 * (rr - r).abs();
    let foot1 = HPoint { x: 0.0, y: s };
    let foot2 = HPoint {
        x: prod / m,
        y: s * rho / m.abs(),
    };
    let tinv = t.inverse();
    let f1 = tinv.apply(&foot1)?;
    let f2 = tinv.apply(&foot2)?;
    // Orient the perpendicular from g1 towards g2 (the foot side).
    let sign = if m > 0.0 { 1.0 } else { -1.0 };
    let perp = HGeodesic {
        from: tinv.apply_ideal(&IdealPoint::Finite(-sign * s)),
        to: tinv.apply_ideal(&IdealPoint::Finite(sign * s)),
    };
    Ok(((f1, f2), perp))
}

/// A closed half-plane: the left side of its oriented boundary geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    boundary: HGeodesic,
}

impl HalfPlane {
    pub fn left_of(boundary: HGeodesic) -> Self {
        HalfPlane { boundary }
    }

    /// Half-plane bounded by `boundary` containing the point `inside`.
    pub fn containing(boundary: HGeodesic, inside: &HPoint) -> Self {
        if boundary.signed_dist(inside) >= 0.0 {
            HalfPlane { boundary }
        } else {
            HalfPlane {
                boundary: boundary.reversed(),
            }
        }
    }

    pub fn boundary(&self) -> &HGeodesic {
        &self.boundary
    }

    /// Signed distance: positive inside, negative outside.
    pub fn signed_dist(&self, z: &HPoint) -> f64 {
        self.boundary.signed_dist(z)
    }

    pub fn contains(&self, z: &HPoint) -> bool {
        self.signed_dist(z) >= 0.0
    }

    pub fn ideal_contains(&self, t: &IdealPoint) -> bool {
        self.boundary.ideal_in_left_arc(t)
    }

    pub fn transform(&self, g: &Isometry) -> HalfPlane {
        HalfPlane {
            boundary: g.apply_geodesic(&self.boundary),
        }
    }

    /// Distance from a point to the half-plane (zero inside).
    pub fn dist_to_point(&self, z: &HPoint) -> f64 {
        (-self.signed_dist(z)).max(0.0)
    }

    /// Lower bound for the distance from a geodesic to this half-plane:
    /// the exact distance when the geodesic is disjoint from the half-plane,
    /// zero otherwise.
    pub fn dist_to_geodesic_lb(&self, g: &HGeodesic) -> f64 {
        if self.ideal_contains(&g.from) || self.ideal_contains(&g.to) {
            return 0.0;
        }
        geodesic_distance(&self.boundary, g).unwrap_or(0.0)
    }

    /// Whether two closed half-planes are disjoint, with a positive margin.
    pub fn disjoint_from(&self, other: &HalfPlane) -> bool {
        if self.ideal_contains(&other.boundary.from) || self.ideal_contains(&other.boundary.to) {
            return false;
        }
        if other.ideal_contains(&self.boundary.from) || other.ideal_contains(&self.boundary.to) {
            return false;
        }
        geodesic_distance(&self.boundary, &other.boundary)
            .map(|d| d > 0.0)
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> HPoint {
        HPoint::new(x, y).unwrap()
    }

    #[test]
    fn dist_identical_points_is_zero() {
        let z = pt(0.0, 1.0);
        assert_eq!(z.dist(&z), 0.0);
    }

    #[test]
    fn dist_vertical_is_log_height_ratio() {
        let z = pt(0.0, 1.0);
        let w = pt(0.0, std::f64::consts::E);
        assert!((z.dist(&w) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dist_unit_horizontal_step() {
        let z = pt(0.0, 1.0);
        let w = pt(1.0, 1.0);
        assert!((z.dist(&w) - 1.5f64.acosh()).abs() < 1e-14);
        assert!((z.dist(&w) - 0.962_423_650_119_206_9).abs() < 1e-12);
    }

    #[test]
    fn dist_is_symmetric() {
        let z = pt(-3.2, 0.7);
        let w = pt(5.1, 2.9);
        assert_eq!(z.dist(&w), w.dist(&z));
    }

    #[test]
    fn apply_identity_fixes_points() {
        let z = pt(0.0, 1.0);
        let g = Isometry::identity();
        let w = g.apply(&z).unwrap();
        assert_eq!(w, z);
    }

    #[test]
    fn apply_diagonal_scales() {
        let g = Isometry::axis_translation(2.0);
        let z = pt(0.0, 1.0);
        let w = g.apply(&z).unwrap();
        assert!((w.y() - 2.0f64.exp()).abs() < 1e-12);
        assert!(w.x().abs() < 1e-15);
    }

    #[test]
    fn apply_inverse_round_trip() {
        let g = Isometry::new(3.0, 1.0, 2.0, 1.0).unwrap();
        let z = pt(0.3, 2.4);
        let w = g.apply(&z).unwrap();
        let back = g.inverse().apply(&w).unwrap();
        assert!((back.x() - z.x()).abs() < 1e-12);
        assert!((back.y() - z.y()).abs() < 1e-12);
    }

    #[test]
    fn translation_length_of_diagonal() {
        let g = Isometry::axis_translation(2.0);
        assert!((g.translation_length().unwrap() - 2.0).abs() < 1e-13);
        let h = Isometry::axis_translation(3.7);
        assert!((h.translation_length().unwrap() - 3.7).abs() < 1e-13);
    }

    #[test]
    fn translation_length_conjugation_invariant() {
        let g = Isometry::axis_translation(1.3);
        let h = Isometry::new(2.0, 1.0, 3.0, 2.0).unwrap();
        let conj = h.compose(&g).compose(&h.inverse());
        let l1 = g.translation_length().unwrap();
        let l2 = conj.translation_length().unwrap();
        assert!((l1 - l2).abs() < 1e-12);
    }

    #[test]
    fn translation_length_rejects_elliptic() {
        // Rotation-like matrix with |trace| < 2.
        let g = Isometry::new(0.6, -0.8, 0.8, 0.6).unwrap();
        assert!(matches!(
            g.translation_length(),
            Err(GeometryError::NotHyperbolic(_))
        ));
    }

    #[test]
    fn axis_of_diagonal_is_imaginary_axis() {
        let g = Isometry::axis_translation(2.0);
        let ax = g.axis().unwrap();
        assert_eq!(ax.from_endpoint(), IdealPoint::Finite(0.0));
        assert_eq!(ax.to_endpoint(), IdealPoint::Infinity);
    }

    #[test]
    fn axis_is_equivariant_under_conjugation() {
        let g = Isometry::axis_translation(2.0);
        let h = Isometry::new(1.0, 2.0, 1.0, 3.0).unwrap();
        let conj = h.compose(&g).compose(&h.inverse());
        let ax = conj.axis().unwrap();
        let expected_rep = h.apply_ideal(&IdealPoint::Finite(0.0));
        let expected_att = h.apply_ideal(&IdealPoint::Infinity);
        match (ax.from_endpoint(), expected_rep) {
            (IdealPoint::Finite(u), IdealPoint::Finite(v)) => assert!((u - v).abs() < 1e-10),
            _ => panic!("unexpected infinite endpoint"),
        }
        match (ax.to_endpoint(), expected_att) {
            (IdealPoint::Finite(u), IdealPoint::Finite(v)) => assert!((u - v).abs() < 1e-10),
            _ => panic!("unexpected infinite endpoint"),
        }
    }

    #[test]
    fn axis_midpoint_displaced_by_translation_length() {
        let g = Isometry::new(5.0, 3.0, 2.0, 1.4).unwrap();
        assert!(g.is_hyperbolic());
        let ax = g.axis().unwrap();
        let z = ax.point_at(0.0);
        let gz = g.apply(&z).unwrap();
        let l = g.translation_length().unwrap();
        assert!((z.dist(&gz) - l).abs() < 1e-10);
    }

    #[test]
    fn geodesic_distance_concentric_circles() {
        let g1 = HGeodesic::between(-1.0, 1.0).unwrap();
        let e = std::f64::consts::E;
        let g2 = HGeodesic::between(-e, e).unwrap();
        let d = geodesic_distance(&g1, &g2).unwrap();
        assert!((d - 1.0).abs() < 1e-13);
    }

    #[test]
    fn geodesic_distance_shared_endpoint_errors() {
        let g1 = HGeodesic::between(0.0, 1.0).unwrap();
        let g2 = HGeodesic::between(1.0, 2.0).unwrap();
        assert!(matches!(
            geodesic_distance(&g1, &g2),
            Err(GeometryError::GeodesicsAsymptotic)
        ));
    }

    #[test]
    fn geodesic_distance_crossing_errors() {
        let g1 = HGeodesic::between(-1.0, 1.0).unwrap();
        let g2 = HGeodesic::vertical_up(0.0);
        assert!(matches!(
            geodesic_distance(&g1, &g2),
            Err(GeometryError::GeodesicsIntersect)
        ));
    }

    #[test]
    fn geodesic_distance_large_separation_survives_rounding() {
        // Distance near the cosh range limit: endpoints differ by e^{-,+}.
        let g1 = HGeodesic::between(-1.0, 1.0).unwrap();
        let big = (29.0f64).exp();
        let g2 = HGeodesic::between(-big, big).unwrap();
        let d = geodesic_distance(&g1, &g2).unwrap();
        assert!((d - 29.0).abs() < 1e-9, "d = {d}");
    }

    #[test]
    fn perpendicular_feet_concentric() {
        let g1 = HGeodesic::between(-1.0, 1.0).unwrap();
        let e = std::f64::consts::E;
        let g2 = HGeodesic::between(-e, e).unwrap();
        let (f1, f2) = common_perpendicular(&g1, &g2).unwrap();
        assert!(f1.x().abs() < 1e-12 && (f1.y() - 1.0).abs() < 1e-12);
        assert!(f2.x().abs() < 1e-12 && (f2.y() - e).abs() < 1e-12);
    }

    #[test]
    fn perpendicular_feet_distance_matches() {
        let g1 = HGeodesic::between(0.5, 3.0).unwrap();
        let g2 = HGeodesic::between(4.0, 9.0).unwrap();
        let (f1, f2) = common_perpendicular(&g1, &g2).unwrap();
        let d = geodesic_distance(&g1, &g2).unwrap();
        assert!((f1.dist(&f2) - d).abs() < 1e-10);
        // Feet lie on their geodesics.
        assert!(g1.dist_to_point(&f1) < 1e-10);
        assert!(g2.dist_to_point(&f2) < 1e-10);
    }

    #[test]
    fn perpendicular_equivariance() {
        let g1 = HGeodesic::between(0.5, 3.0).unwrap();
        let g2 = HGeodesic::vertical_up(-2.0);
        let g = Isometry::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let (f1, f2) = common_perpendicular(&g1, &g2).unwrap();
        let (h1, h2) =
            common_perpendicular(&g.apply_geodesic(&g1), &g.apply_geodesic(&g2)).unwrap();
        let gf1 = g.apply(&f1).unwrap();
        let gf2 = g.apply(&f2).unwrap();
        assert!(gf1.dist(&h1) < 1e-10);
        assert!(gf2.dist(&h2) < 1e-10);
    }

    #[test]
    fn signed_dist_sides_of_vertical() {
        let g = HGeodesic::vertical_up(0.0);
        assert!(g.signed_dist(&pt(-1.0, 1.0)) > 0.0); // left of upward axis
        assert!(g.signed_dist(&pt(1.0, 1.0)) < 0.0);
        assert!(g.signed_dist(&pt(0.0, 5.0)).abs() < 1e-15);
    }

    #[test]
    fn signed_dist_matches_point_distance() {
        let g = HGeodesic::between(-2.0, 2.0).unwrap();
        let z = pt(0.0, 3.0);
        // Distance from i*3 to circle radius 2: log(3/2).
        assert!((g.dist_to_point(&z) - (1.5f64).ln()).abs() < 1e-13);
    }

    #[test]
    fn halfplane_orientation_roundtrip_under_isometry() {
        let hp = HalfPlane::left_of(HGeodesic::between(-1.0, 1.0).unwrap());
        let z_out = pt(0.0, 0.5); // inside the half-disk: right side
        let z_in = pt(0.0, 2.0); // outside the half-disk: left side
        assert!(!hp.contains(&z_out));
        assert!(hp.contains(&z_in));
        let g = Isometry::new(1.0, 3.0, 0.5, 2.0).unwrap();
        let hp2 = hp.transform(&g);
        assert!(!hp2.contains(&g.apply(&z_out).unwrap()));
        assert!(hp2.contains(&g.apply(&z_in).unwrap()));
    }

    #[test]
    fn ideal_arc_membership() {
        // Oriented left-to-right: left side is outside the half-disk.
        let g = HGeodesic::between(-1.0, 1.0).unwrap();
        assert!(g.ideal_in_left_arc(&IdealPoint::Infinity));
        assert!(g.ideal_in_left_arc(&IdealPoint::Finite(2.0)));
        assert!(!g.ideal_in_left_arc(&IdealPoint::Finite(0.0)));
        // Reversed: left side is the inside.
        let r = g.reversed();
        assert!(!r.ideal_in_left_arc(&IdealPoint::Infinity));
        assert!(r.ideal_in_left_arc(&IdealPoint::Finite(0.0)));
    }

    #[test]
    fn vertical_perp_matches_generic_machinery() {
        // A hyperbolic matrix whose axis (1, 3) avoids the imaginary axis.
        let s = Isometry::new(3.0, 1.0, 1.0, 1.0).unwrap();
        let g = s
            .compose(&Isometry::axis_translation(2.0))
            .compose(&s.inverse());
        let ax = g.axis().unwrap();
        let vertical = HGeodesic::vertical_up(0.0);
        let d_generic = geodesic_distance(&vertical, &ax).unwrap();
        let perp = perpendicular_from_vertical(&g).unwrap();
        assert!((perp.distance - d_generic).abs() < 1e-12);
        let (f1, f2) = common_perpendicular(&vertical, &ax).unwrap();
        assert!(perp.foot_on_axis.dist(&f1) < 1e-10);
        assert!(perp.foot_on_other.dist(&f2) < 1e-10);
    }

    #[test]
    fn vertical_perp_rejects_crossing_and_asymptotic() {
        // Fixed points straddle zero: axis crosses the vertical axis.
        let g = Isometry::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let ax = g.axis().unwrap();
        assert!(matches!(
            geodesic_distance(&HGeodesic::vertical_up(0.0), &ax),
            Err(GeometryError::GeodesicsIntersect)
        ));
        assert!(matches!(
            perpendicular_from_vertical(&g),
            Err(GeometryError::GeodesicsIntersect)
        ));
        // Diagonal matrix: same axis, shared endpoints.
        let h = Isometry::axis_translation(1.0);
        assert!(matches!(
            perpendicular_from_vertical(&h),
            Err(GeometryError::GeodesicsAsymptotic)
        ));
    }

    #[test]
    fn dist_isometry_invariance_sampled() {
        let gens = [
            Isometry::new(1.0, 2.5, 0.0, 1.0).unwrap(),
            Isometry::new(2.0, 0.0, 0.0, 0.5).unwrap(),
            Isometry::new(0.0, 1.0, -1.0, 0.0).unwrap(),
            Isometry::new(3.0, 1.0, 5.0, 2.0).unwrap(),
        ];
        let pts = [pt(0.0, 1.0), pt(2.0, 0.3), pt(-1.5, 4.0), pt(0.7, 0.01)];
        for g in &gens {
            for z in &pts {
                for w in &pts {
                    let d0 = z.dist(w);
                    let d1 = g.apply(z).unwrap().dist(&g.apply(w).unwrap());
                    assert!((d0 - d1).abs() <= 1e-12 * (1.0 + d0));
                }
            }
        }
    }

    #[test]
    fn triangle_inequality_sampled() {
        let pts = [
            pt(0.0, 1.0),
            pt(1.0, 1.0),
            pt(-2.0, 0.5),
            pt(3.0, 2.0),
            pt(0.1, 0.05),
        ];
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    assert!(a.dist(c) <= a.dist(b) + b.dist(c) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn translation_length_of_powers() {
        let g = Isometry::new(5.0, 3.0, 2.0, 1.4).unwrap();
        let l = g.translation_length().unwrap();
        let mut p = Isometry::identity();
        for n in 1..=5 {
            p = p.compose(&g);
            let ln = p.translation_length().unwrap();
            assert!((ln - n as f64 * l).abs() < 1e-10, "n = {n}");
        }
    }
}
