//! Hyperbolic pairs of pants as discrete free groups of isometries.
//!
//! A pants with boundary lengths `(L1, L2, L3)` is realized by two
//! generators `a`, `b` with translation lengths `L1`, `L2` whose product
//! satisfies `tr(ab) = -2 cosh(L3/2)`. The axis of `a` is the imaginary
//! axis with attracting endpoint at infinity; the axis of `b` is placed so
//! that the common perpendicular between the two axes has the length given
//! by the right-angled hexagon formula and meets the imaginary axis at `i`.
//!
//! Discreteness and freeness are certified at construction by an explicit
//! ping-pong configuration: four pairwise disjoint half-planes, one per
//! generator letter, each mapped by its letter onto the paired wall. The
//! walls are the seam perpendiculars of the hexagon decomposition and their
//! mirror images through the seam between boundaries one and two.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyp2::{
    common_perpendicular_geodesic, geodesic_distance, GeometryError, HGeodesic, HPoint,
    HalfPlane, IdealPoint, Isometry,
};
use crate::words::{Letter, Word, LETTERS};

/// Numeric-range guard on requested boundary lengths.
pub const MAX_BOUNDARY_LENGTH: f64 = 20.0;
/// Tolerance for realized boundary lengths and seam distances.
pub const CONSTRUCTION_TOL: f64 = 1e-9;
/// Ambiguity margin for core membership.
pub const CORE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("boundary length {0} out of range (0, {MAX_BOUNDARY_LENGTH}]")]
    BoundaryLengthOutOfRange(f64),
    #[error("pants spec needs exactly three boundary lengths, got {0}")]
    WrongBoundaryCount(usize),
    #[error("construction not discrete: {0}")]
    NotDiscrete(String),
    #[error("construction inconsistency: {0}")]
    Inconsistent(String),
    #[error("surface kind {0:?} requires the `one-holed-torus` feature")]
    FeatureDisabled(SurfaceKind),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    Pants,
    OneHoledTorus,
}

/// Input description of a surface: its topological kind and the requested
/// boundary lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub boundary_lengths: Vec<f64>,
}

impl SurfaceSpec {
    pub fn pants(l1: f64, l2: f64, l3: f64) -> SurfaceSpec {
        SurfaceSpec {
            kind: SurfaceKind::Pants,
            boundary_lengths: vec![l1, l2, l3],
        }
    }

    pub fn build(&self) -> Result<SurfaceModel, SurfaceError> {
        match self.kind {
            SurfaceKind::Pants => {
                if self.boundary_lengths.len() != 3 {
                    return Err(SurfaceError::WrongBoundaryCount(self.boundary_lengths.len()));
                }
                build_pants(
                    self.boundary_lengths[0],
                    self.boundary_lengths[1],
                    self.boundary_lengths[2],
                )
            }
            #[cfg(feature = "one-holed-torus")]
            SurfaceKind::OneHoledTorus => {
                if self.boundary_lengths.len() != 1 {
                    return Err(SurfaceError::WrongBoundaryCount(self.boundary_lengths.len()));
                }
                torus::build_one_holed_torus(self.boundary_lengths[0])
            }
            #[cfg(not(feature = "one-holed-torus"))]
            SurfaceKind::OneHoledTorus => Err(SurfaceError::FeatureDisabled(self.kind)),
        }
    }
}

/// Seam length between the boundaries of lengths `li` and `lj` on a pants
/// whose third boundary has length `lk`: the right-angled hexagon relation
///
/// `cosh d = (cosh(li/2) cosh(lj/2) + cosh(lk/2)) / (sinh(li/2) sinh(lj/2))`.
pub fn pants_seam_length(li: f64, lj: f64, lk: f64) -> f64 {
    let (a, b, c) = (0.5 * li, 0.5 * lj, 0.5 * lk);
    let ch = (a.cosh() * b.cosh() + c.cosh()) / (a.sinh() * b.sinh());
    ch.acosh()
}

/// Membership of a point in the canonical core region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreMembership {
    pub inside: bool,
    /// Set when the point is within `CORE_TOL` of a wall, in which case
    /// `inside` is reported as false.
    pub ambiguous: bool,
}

/// A hyperbolic surface with totally geodesic boundary, realized as a
/// marked discrete free group of isometries.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    spec: SurfaceSpec,
    /// Generator matrices for the letters `a` and `b`.
    gen_a: Isometry,
    gen_b: Isometry,
    boundary_words: Vec<Word>,
    boundary_axes: Vec<HGeodesic>,
    boundary_lengths: Vec<f64>,
    euler_char: i64,
    area: f64,
    /// Ping-pong wall per letter, indexed like [`LETTERS`].
    walls: [HalfPlane; 4],
    /// Inward-oriented half-planes cutting out the canonical fundamental
    /// domain intersected with the Nielsen region.
    core_walls: Vec<HalfPlane>,
    /// A documented interior point of the core region.
    interior_point: HPoint,
    /// Per boundary: the lifts of that boundary geodesic that are not
    /// contained in any ping-pong wall, with peeled witness words.
    straddle_lifts: Vec<Vec<(Word, HGeodesic)>>,
}

impl SurfaceModel {
    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn letter_matrix(&self, l: Letter) -> Isometry {
        match l {
            Letter::A => self.gen_a,
            Letter::AInv => self.gen_a.inverse(),
            Letter::B => self.gen_b,
            Letter::BInv => self.gen_b.inverse(),
        }
    }

    pub fn word_matrix(&self, w: &Word) -> Isometry {
        let mut m = Isometry::identity();
        for &l in w.letters() {
            m = m.compose(&self.letter_matrix(l));
        }
        m
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_words.len()
    }

    pub fn boundary_words(&self) -> &[Word] {
        &self.boundary_words
    }

    pub fn boundary_axes(&self) -> &[HGeodesic] {
        &self.boundary_axes
    }

    pub fn boundary_lengths(&self) -> &[f64] {
        &self.boundary_lengths
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler_char
    }

    /// Gauss–Bonnet area `2π |χ|` for curvature -1.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Sum of the realized boundary lengths.
    pub fn boundary_total_length(&self) -> f64 {
        self.boundary_lengths.iter().sum()
    }

    pub fn wall(&self, l: Letter) -> &HalfPlane {
        &self.walls[letter_index(l)]
    }

    pub fn walls(&self) -> &[HalfPlane; 4] {
        &self.walls
    }

    pub fn interior_point(&self) -> HPoint {
        self.interior_point
    }

    pub fn straddle_lifts(&self, boundary: usize) -> &[(Word, HGeodesic)] {
        &self.straddle_lifts[boundary]
    }

    /// Reduced-word prefixes that begin a power of the given boundary word;
    /// the orthogeodesic enumeration excludes them to select one
    /// representative per left coset of the boundary stabilizer.
    pub fn forbidden_leading_prefixes(&self, boundary: usize) -> Vec<Vec<Letter>> {
        let b = &self.boundary_words[boundary];
        if b.len() == 1 {
            let l = b.letters()[0];
            vec![vec![l], vec![l.inverse()]]
        } else {
            vec![b.letters().to_vec(), b.inverse().letters().to_vec()]
        }
    }

    /// Whether `z` lies in the canonical fundamental domain intersected
    /// with the Nielsen region. Points within `CORE_TOL` of a wall are
    /// reported as outside with the ambiguity flag set.
    pub fn contains_in_core(&self, z: &HPoint) -> CoreMembership {
        let mut min_sd = f64::INFINITY;
        for hp in &self.core_walls {
            min_sd = min_sd.min(hp.signed_dist(z));
        }
        if min_sd > CORE_TOL {
            CoreMembership {
                inside: true,
                ambiguous: false,
            }
        } else if min_sd < -CORE_TOL {
            CoreMembership {
                inside: false,
                ambiguous: false,
            }
        } else {
            CoreMembership {
                inside: false,
                ambiguous: true,
            }
        }
    }

    /// Signed distance from `z` to the nearest core wall (positive inside).
    pub fn core_margin(&self, z: &HPoint) -> f64 {
        self.core_walls
            .iter()
            .map(|hp| hp.signed_dist(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Deterministic interior points of the core region, jittered around
    /// the documented interior point by a seeded generator.
    pub fn sample_core_points(&self, count: usize, seed: u64) -> Vec<HPoint> {
        let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut next = move || {
            // splitmix64
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z = z ^ (z >> 31);
            (z >> 11) as f64 / (1u64 << 53) as f64
        };
        let base = self.interior_point;
        let mut out = Vec::with_capacity(count);
        let mut scale = 0.4;
        let mut attempts = 0usize;
        while out.len() < count {
            attempts += 1;
            if attempts.is_multiple_of(256) {
                scale *= 0.5;
            }
            let dx = (next() - 0.5) * scale;
            let dy = (next() - 0.5) * scale;
            let y = base.y() * (1.0 + dy);
            if y <= 0.0 {
                continue;
            }
            let Ok(z) = HPoint::new(base.x() + dx * base.y(), y) else {
                continue;
            };
            if self.contains_in_core(&z).inside && self.core_margin(&z) > 1e-3 {
                out.push(z);
            }
        }
        out
    }
}

pub(crate) fn letter_index(l: Letter) -> usize {
    match l {
        Letter::A => 0,
        Letter::AInv => 1,
        Letter::B => 2,
        Letter::BInv => 3,
    }
}

/// Build a hyperbolic pair of pants with the requested boundary lengths.
pub fn build_pants(l1: f64, l2: f64, l3: f64) -> Result<SurfaceModel, SurfaceError> {
    for &l in &[l1, l2, l3] {
        if !(l.is_finite() && l > 0.0 && l <= MAX_BOUNDARY_LENGTH) {
            return Err(SurfaceError::BoundaryLengthOutOfRange(l));
        }
    }
    let alpha = 0.5 * l1;
    let beta = 0.5 * l2;
    let d12 = pants_seam_length(l1, l2, l3);

    // Axis of `a` is the imaginary axis; the common perpendicular to the
    // axis of `b` is the unit half-circle, so the axis of `b` is the circle
    // of radius rho about c with c/rho = -cosh d12 and c^2 - rho^2 = 1.
    let rho = 1.0 / d12.sinh();
    let c = -d12.cosh() * rho;

    let gen_a = Isometry::axis_translation(l1);
    let (eb, ebi) = (beta.exp(), (-beta).exp());
    let gen_b = Isometry::new(
        ((c + rho) * eb - (c - rho) * ebi) / (2.0 * rho),
        -(c * c - rho * rho) * (eb - ebi) / (2.0 * rho),
        (eb - ebi) / (2.0 * rho),
        (-(c - rho) * eb + (c + rho) * ebi) / (2.0 * rho),
    )?;

    let ab = gen_a.compose(&gen_b);
    let b3_word = Word::parse("BA").expect("static word");
    let b3_mat = ab.inverse();

    let ax1 = HGeodesic::vertical_up(0.0);
    let ax2 = HGeodesic::new(
        IdealPoint::Finite(c - rho),
        IdealPoint::Finite(c + rho),
    )?;
    let ax3 = b3_mat.axis()?;

    // Realized boundary lengths.
    let realized = [
        gen_a.translation_length()?,
        gen_b.translation_length()?,
        b3_mat.translation_length()?,
    ];
    for (req, got) in [l1, l2, l3].iter().zip(realized.iter()) {
        if (req - got).abs() > CONSTRUCTION_TOL * (1.0 + req.abs()) {
            return Err(SurfaceError::Inconsistent(format!(
                "realized boundary length {got} differs from requested {req}"
            )));
        }
    }

    // Seam perpendiculars. l3_line is the unit circle by construction;
    // l2_line and its mirror through l3_line have radii e^{±L1/2}.
    let l3_line = common_perpendicular_geodesic(&ax1, &ax2)?;
    let l2_line = common_perpendicular_geodesic(&ax1, &ax3)?;
    let l1_line = common_perpendicular_geodesic(&ax2, &ax3)?;
    let s3 = circle_radius(&l3_line).ok_or_else(|| {
        SurfaceError::Inconsistent("seam (1,2) perpendicular is not a circle".into())
    })?;
    if (s3 - 1.0).abs() > 1e-9 || circle_center(&l3_line).map(f64::abs).unwrap_or(1.0) > 1e-9 {
        return Err(SurfaceError::Inconsistent(format!(
            "seam (1,2) perpendicular not normalized: radius {s3}"
        )));
    }
    let r2 = circle_radius(&l2_line).ok_or_else(|| {
        SurfaceError::Inconsistent("seam (1,3) perpendicular is not a circle".into())
    })?;
    let ea = alpha.exp();
    if !((r2 - ea).abs() < 1e-7 * ea || (r2 - 1.0 / ea).abs() < 1e-7 / ea) {
        return Err(SurfaceError::Inconsistent(format!(
            "seam (1,3) foot radius {r2} is not e^(±L1/2)"
        )));
    }

    // Mirror through the unit circle: t ↦ 1/t on ideal endpoints.
    let m_l1_line = invert_unit(&l1_line)?;

    // Interior sample: midpoint of the seam between boundaries 1 and 2.
    // The seam is the unit circle arc from i (foot on ax1) towards ax2 at
    // negative x; the unit-speed parameter from the apex is -d12/2.
    let seam = HGeodesic::between(-1.0, 1.0).expect("unit circle");
    let interior_point = seam.point_at(-0.5 * d12);
    if l3_line.dist_to_point(&interior_point) > 1e-9 {
        return Err(SurfaceError::Inconsistent(
            "seam midpoint drifted off the seam".into(),
        ));
    }

    // Ping-pong walls. For the letter a: |z| >= e^{L1/2}; for A: |z| <=
    // e^{-L1/2}. For b and B: the far sides of the seam (2,3) line and its
    // mirror, sorted by which contains the respective fixed point.
    let wall_a = HalfPlane::left_of(HGeodesic::between(-ea, ea)?);
    let wall_a_inv = HalfPlane::left_of(HGeodesic::between(1.0 / ea, -1.0 / ea)?);
    let att_b = ax2.to_endpoint();
    let rep_b = ax2.from_endpoint();
    let far_l1 = far_side(&l1_line, &interior_point);
    let far_m_l1 = far_side(&m_l1_line, &interior_point);
    let (wall_b, wall_b_inv) = if far_l1.ideal_contains(&att_b) && far_m_l1.ideal_contains(&rep_b)
    {
        (far_l1, far_m_l1)
    } else if far_m_l1.ideal_contains(&att_b) && far_l1.ideal_contains(&rep_b) {
        (far_m_l1, far_l1)
    } else {
        return Err(SurfaceError::NotDiscrete(
            "walls for letter b do not separate its fixed points".into(),
        ));
    };
    let walls = [wall_a, wall_a_inv, wall_b, wall_b_inv];

    // Core region: the double hexagon bounded by the four seam walls and
    // the adjacent boundary lifts ax1, ax2, ax3 and the mirror of ax3.
    let m_ax3 = invert_unit(&ax3)?;
    let core_lines = [
        ax1, ax2, ax3, m_ax3, l1_line, l2_line, m_l1_line, invert_unit(&l2_line)?,
    ];
    let core_walls: Vec<HalfPlane> = core_lines
        .iter()
        .map(|g| HalfPlane::containing(*g, &interior_point))
        .collect();

    let mut model = SurfaceModel {
        spec: SurfaceSpec::pants(l1, l2, l3),
        gen_a,
        gen_b,
        boundary_words: vec![
            Word::parse("a").expect("static"),
            Word::parse("b").expect("static"),
            b3_word,
        ],
        boundary_axes: vec![ax1, ax2, ax3],
        boundary_lengths: realized.to_vec(),
        euler_char: -1,
        area: 2.0 * std::f64::consts::PI,
        walls,
        core_walls,
        interior_point,
        straddle_lifts: Vec::new(),
    };
    certify_ping_pong(&model)?;
    certify_seams(&model, &[l1, l2, l3])?;
    model.straddle_lifts = compute_straddle_lifts(&model)?;
    let expected: Vec<usize> = vec![1, 1, 2];
    let got: Vec<usize> = model.straddle_lifts.iter().map(Vec::len).collect();
    if got != expected {
        return Err(SurfaceError::Inconsistent(format!(
            "unexpected straddling lift counts {got:?}, expected {expected:?}"
        )));
    }
    Ok(model)
}

fn circle_radius(g: &HGeodesic) -> Option<f64> {
    match g.shape() {
        crate::hyp2::GeodesicShape::Circle { radius, .. } => Some(radius),
        _ => None,
    }
}

fn circle_center(g: &HGeodesic) -> Option<f64> {
    match g.shape() {
        crate::hyp2::GeodesicShape::Circle { center, .. } => Some(center),
        _ => None,
    }
}

/// Image of a geodesic under inversion in the unit circle, `t ↦ 1/t`.
fn invert_unit(g: &HGeodesic) -> Result<HGeodesic, GeometryError> {
    let map = |p: &IdealPoint| match p {
        IdealPoint::Infinity => IdealPoint::Finite(0.0),
        IdealPoint::Finite(t) if *t == 0.0 => IdealPoint::Infinity,
        IdealPoint::Finite(t) => IdealPoint::Finite(1.0 / t),
    };
    HGeodesic::new(map(&g.from_endpoint()), map(&g.to_endpoint()))
}

/// The half-plane bounded by `g` on the side away from `inside`.
fn far_side(g: &HGeodesic, inside: &HPoint) -> HalfPlane {
    let hp = HalfPlane::containing(*g, inside);
    HalfPlane::left_of(hp.boundary().reversed())
}

/// Verify the ping-pong configuration: the four walls are pairwise
/// disjoint, and each letter maps every wall other than its inverse's
/// strictly inside its own wall; sampled on wall boundaries.
pub(crate) fn certify_ping_pong(model: &SurfaceModel) -> Result<(), SurfaceError> {
    let walls = &model.walls;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if !walls[i].disjoint_from(&walls[j]) {
                return Err(SurfaceError::NotDiscrete(format!(
                    "ping-pong walls {i} and {j} are not disjoint"
                )));
            }
        }
    }
    let params: Vec<f64> = (-8..=8).map(|k| k as f64).collect();
    for &l in &LETTERS {
        let m = model.letter_matrix(l);
        let own = model.wall(l);
        let inv_idx = letter_index(l.inverse());
        for (w_idx, w) in walls.iter().enumerate() {
            if w_idx == inv_idx {
                // The paired wall maps onto the boundary of the own wall.
                for &t in &params {
                    let z = w.boundary().point_at(t);
                    let img = m.apply(&z)?;
                    if own.signed_dist(&img).abs() > 1e-6 {
                        return Err(SurfaceError::NotDiscrete(format!(
                            "letter {} does not pair its walls",
                            l.to_char()
                        )));
                    }
                }
            } else {
                for &t in &params {
                    let z = w.boundary().point_at(t);
                    let img = m.apply(&z)?;
                    if own.signed_dist(&img) < 1e-9 {
                        return Err(SurfaceError::NotDiscrete(format!(
                            "letter {} does not map wall {w_idx} into its wall",
                            l.to_char()
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn certify_seams(model: &SurfaceModel, lengths: &[f64; 3]) -> Result<(), SurfaceError> {
    let pairs = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
    for (i, j, k) in pairs {
        let expected = pants_seam_length(lengths[i], lengths[j], lengths[k]);
        let got = geodesic_distance(&model.boundary_axes[i], &model.boundary_axes[j])?;
        // Written so that a NaN distance fails the check.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !((expected - got).abs() <= CONSTRUCTION_TOL * (1.0 + expected)) {
            return Err(SurfaceError::Inconsistent(format!(
                "seam ({i},{j}) length {got} differs from hexagon value {expected}"
            )));
        }
    }
    Ok(())
}

/// Lifts of each boundary geodesic, over words of length at most two, that
/// are not contained in any ping-pong wall. These are the lifts adjacent to
/// the fundamental domain; every other lift peels through a unique wall.
///
/// A lift `w · axis_j` depends on `w` only through the coset `w ⟨b_j⟩`, and
/// in a free group distinct cosets give distinct lifts, so deduplication is
/// exact on canonical coset words. This avoids comparing floating-point
/// endpoints, which lose accuracy when a stabilizer power is applied to its
/// own fixed points.
fn compute_straddle_lifts(
    model: &SurfaceModel,
) -> Result<Vec<Vec<(Word, HGeodesic)>>, SurfaceError> {
    let empty = Word::empty();
    let mut out = Vec::new();
    for b in 0..model.boundary_count() {
        let axis = model.boundary_axes[b];
        let bword = &model.boundary_words[b];
        let mut lifts: Vec<(Word, HGeodesic)> = Vec::new();
        let mut seen: Vec<Word> = Vec::new();
        let mut ball: Vec<Word> = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..2 {
            let mut next = Vec::new();
            for w in &frontier {
                for l in LETTERS {
                    let v = w.appended(l);
                    if v.len() == w.len() + 1 {
                        next.push(v);
                    }
                }
            }
            ball.extend(next.iter().cloned());
            frontier = next;
        }
        for w in &ball {
            let canon = crate::words::double_coset_canonical(w, &empty, bword);
            if seen.contains(&canon) {
                continue;
            }
            seen.push(canon.clone());
            let g = model.word_matrix(&canon).apply_geodesic(&axis);
            let contained = LETTERS.iter().any(|&l| {
                let wall = model.wall(l);
                wall.ideal_contains(&g.from_endpoint()) && wall.ideal_contains(&g.to_endpoint())
            });
            if contained {
                continue;
            }
            lifts.push((canon, g));
        }
        out.push(lifts);
    }
    Ok(out)
}

#[cfg(feature = "one-holed-torus")]
pub mod torus {
    //! One-holed torus support. Experimental: the ping-pong certification
    //! uses symmetric walls that exist only for boundary lengths that are
    //! not too short; construction fails honestly otherwise.

    use super::*;

    pub fn build_one_holed_torus(l: f64) -> Result<SurfaceModel, SurfaceError> {
        if !(l.is_finite() && l > 0.0 && l <= MAX_BOUNDARY_LENGTH) {
            return Err(SurfaceError::BoundaryLengthOutOfRange(l));
        }
        // Symmetric solution of the commutator trace relation
        // tr[a,b] = -2 cosh(l/2) with orthogonal axes through i.
        let c = (0.5 * l).cosh();
        let x = (4.0 + 2.0 * (2.0 + 2.0 * c).sqrt()).sqrt();
        let t = 2.0 * (0.5 * x).acosh();
        let gen_a = Isometry::axis_translation(t);
        let (ch, sh) = ((0.5 * t).cosh(), (0.5 * t).sinh());
        let gen_b = Isometry::new(ch, sh, sh, ch)?;

        let comm_word = Word::parse("abAB").expect("static");
        let comm = gen_a
            .compose(&gen_b)
            .compose(&gen_a.inverse())
            .compose(&gen_b.inverse());
        let realized = comm.translation_length()?;
        if (realized - l).abs() > CONSTRUCTION_TOL * (1.0 + l) {
            return Err(SurfaceError::Inconsistent(format!(
                "realized boundary length {realized} differs from requested {l}"
            )));
        }
        let axis = comm.axis()?;

        let e_half = (0.5 * t).exp();
        let (th, cth) = ((0.25 * t).tanh(), 1.0 / (0.25 * t).tanh());
        let wall_a = HalfPlane::left_of(HGeodesic::between(-e_half, e_half)?);
        let wall_a_inv = HalfPlane::left_of(HGeodesic::between(1.0 / e_half, -1.0 / e_half)?);
        // Perpendiculars to the axis of b (the unit circle through ±1) at
        // parameters ±t/2 have endpoints (tanh(t/4), coth(t/4)) and mirror;
        // each wall is the half-disk containing the fixed point it guards.
        let wall_b = HalfPlane::left_of(HGeodesic::between(cth, th)?);
        let wall_b_inv = HalfPlane::left_of(HGeodesic::between(-th, -cth)?);
        let walls = [wall_a, wall_a_inv, wall_b, wall_b_inv];

        let interior_point = HPoint::new(0.0, 1.0)?;
        // Core region: inside the four walls and on the interior side of
        // the boundary-axis lifts adjacent to the domain (the cyclic
        // conjugates of the commutator).
        let mut core_walls: Vec<HalfPlane> = Vec::new();
        for w in ["abAB", "bABa", "ABab", "BabA"] {
            let word = Word::parse(w).expect("static");
            let mut m = Isometry::identity();
            for &lt in word.letters() {
                m = m.compose(&match lt {
                    Letter::A => gen_a,
                    Letter::AInv => gen_a.inverse(),
                    Letter::B => gen_b,
                    Letter::BInv => gen_b.inverse(),
                });
            }
            core_walls.push(HalfPlane::containing(m.axis()?, &interior_point));
        }
        for w in &walls {
            core_walls.push(HalfPlane::containing(
                w.boundary().reversed(),
                &interior_point,
            ));
        }

        let mut model = SurfaceModel {
            spec: SurfaceSpec {
                kind: SurfaceKind::OneHoledTorus,
                boundary_lengths: vec![l],
            },
            gen_a,
            gen_b,
            boundary_words: vec![comm_word],
            boundary_axes: vec![axis],
            boundary_lengths: vec![realized],
            euler_char: -1,
            area: 2.0 * std::f64::consts::PI,
            walls,
            core_walls,
            interior_point,
            straddle_lifts: Vec::new(),
        };
        certify_ping_pong(&model)?;
        model.straddle_lifts = compute_straddle_lifts(&model)?;
        if model.straddle_lifts[0].len() != 4 {
            return Err(SurfaceError::Inconsistent(format!(
                "unexpected straddling lift count {} for the torus boundary",
                model.straddle_lifts[0].len()
            )));
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_pants_builds_and_matches_requested_lengths() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        for (req, got) in [2.0, 2.0, 2.0].iter().zip(m.boundary_lengths()) {
            assert!((req - got).abs() < 1e-9);
        }
        assert_eq!(m.euler_characteristic(), -1);
        assert!((m.area() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((m.boundary_total_length() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_pants_seam_value() {
        // Independent hexagon evaluation for (2,2,2).
        let d = pants_seam_length(2.0, 2.0, 2.0);
        assert!((d - 1.7049).abs() < 1e-4, "seam length {d}");
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let axes = m.boundary_axes();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let got = geodesic_distance(&axes[i], &axes[j]).unwrap();
            assert!((got - d).abs() < 1e-9, "seam ({i},{j}) = {got}");
        }
    }

    #[test]
    fn asymmetric_pants_matches_hexagon_formula() {
        let (l1, l2, l3) = (1.0, 2.0, 3.0);
        let m = build_pants(l1, l2, l3).unwrap();
        assert!((m.boundary_total_length() - 6.0).abs() < 1e-9);
        let axes = m.boundary_axes();
        let cases = [
            (0, 1, pants_seam_length(l1, l2, l3)),
            (0, 2, pants_seam_length(l1, l3, l2)),
            (1, 2, pants_seam_length(l2, l3, l1)),
        ];
        for (i, j, expected) in cases {
            let got = geodesic_distance(&axes[i], &axes[j]).unwrap();
            assert!(
                (got - expected).abs() < 1e-9,
                "seam ({i},{j}): {got} vs {expected}"
            );
        }
    }

    #[test]
    fn boundary_length_out_of_range_rejected() {
        assert!(matches!(
            build_pants(0.0, 1.0, 1.0),
            Err(SurfaceError::BoundaryLengthOutOfRange(_))
        ));
        assert!(matches!(
            build_pants(1.0, 25.0, 1.0),
            Err(SurfaceError::BoundaryLengthOutOfRange(_))
        ));
    }

    #[test]
    fn interior_point_is_inside_core() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let z = m.interior_point();
        let loc = m.contains_in_core(&z);
        assert!(loc.inside && !loc.ambiguous);
    }

    #[test]
    fn point_beyond_boundary_axis_is_outside() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        // Far up the imaginary axis is beyond the wall for letter a.
        let z = HPoint::new(0.0, 50.0).unwrap();
        let loc = m.contains_in_core(&z);
        assert!(!loc.inside && !loc.ambiguous);
    }

    #[test]
    fn core_classification_stable_under_perturbation() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let eps = 1e-6;
        let mut checked = 0;
        for i in -12..=12 {
            for j in 1..=24 {
                let x = i as f64 * 0.1;
                let y = j as f64 * 0.1;
                let Ok(z) = HPoint::new(x, y) else { continue };
                // Skip points too close to a wall for a stable verdict.
                if m.core_margin(&z).abs() < 10.0 * eps {
                    continue;
                }
                let base = m.contains_in_core(&z).inside;
                for (dx, dy) in [(eps, 0.0), (-eps, 0.0), (0.0, eps), (0.0, -eps)] {
                    let zp = HPoint::new(x + dx, y + dy).unwrap();
                    assert_eq!(m.contains_in_core(&zp).inside, base);
                }
                checked += 1;
            }
        }
        assert!(checked > 50, "grid too sparse: {checked}");
    }

    #[test]
    fn sampled_core_points_are_inside() {
        let m = build_pants(1.0, 2.0, 3.0).unwrap();
        for z in m.sample_core_points(8, 7) {
            assert!(m.contains_in_core(&z).inside);
        }
    }

    #[test]
    fn rebuilding_is_deterministic() {
        let m1 = build_pants(1.3, 2.7, 0.9).unwrap();
        let m2 = build_pants(1.3, 2.7, 0.9).unwrap();
        assert_eq!(m1.gen_a.entries(), m2.gen_a.entries());
        assert_eq!(m1.gen_b.entries(), m2.gen_b.entries());
        assert_eq!(m1.boundary_lengths(), m2.boundary_lengths());
    }

    #[test]
    fn ping_pong_sweep_over_parameter_box() {
        // Deterministic low-discrepancy sweep of (L1, L2, L3) in [0.5, 10]^3.
        let mut failures = Vec::new();
        for k in 0..100 {
            let f = |m: u64| {
                let golden = 0.618_033_988_749_894_9_f64;
                (0.5 + (m as f64) * golden).fract()
            };
            let l1 = 0.5 + 9.5 * f(k * 3 + 1);
            let l2 = 0.5 + 9.5 * f(k * 3 + 2);
            let l3 = 0.5 + 9.5 * f(k * 3 + 3);
            if build_pants(l1, l2, l3).is_err() {
                failures.push((l1, l2, l3));
            }
        }
        assert!(failures.is_empty(), "failed specs: {failures:?}");
    }

    #[test]
    fn straddle_lifts_have_expected_counts() {
        let m = build_pants(2.0, 1.0, 3.0).unwrap();
        assert_eq!(m.straddle_lifts(0).len(), 1);
        assert_eq!(m.straddle_lifts(1).len(), 1);
        assert_eq!(m.straddle_lifts(2).len(), 2);
        // The extra lift of boundary 2 is the mirror of its axis through
        // the seam between boundaries 1 and 2.
        let ax3 = m.boundary_axes()[2];
        let mirrored = invert_unit(&ax3).unwrap();
        let found = m
            .straddle_lifts(2)
            .iter()
            .any(|(_, g)| g.same_geodesic(&mirrored, 1e-9));
        assert!(found);
    }

    #[cfg(feature = "one-holed-torus")]
    #[test]
    fn one_holed_torus_builds_for_moderate_boundary() {
        let spec = SurfaceSpec {
            kind: SurfaceKind::OneHoledTorus,
            boundary_lengths: vec![2.0],
        };
        let m = spec.build().unwrap();
        assert!((m.boundary_lengths()[0] - 2.0).abs() < 1e-9);
        assert_eq!(m.euler_characteristic(), -1);
    }
}
