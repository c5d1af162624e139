//! Brute-force reference implementations.
//!
//! Everything here is deliberately independent of the closed-form paths in
//! the rest of the crate: distances are minimized by sampling, integrals are
//! done by quadrature, and enumerations walk plain word balls. Tests and the
//! acceptance suite compare the fast implementations against these.

use crate::hyp2::{axis_normalizer, perpendicular_from_vertical, HGeodesic, HPoint};
use crate::surfaces::SurfaceModel;
use crate::words::{is_power_of, strip_visible_powers, Word, LETTERS};

/// Minimize `f` over `[lo, hi]` by golden-section search.
fn golden_min(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Hyperbolic projection of a point onto a geodesic.
pub fn project_to_geodesic(g: &HGeodesic, z: &HPoint) -> HPoint {
    let chart = axis_normalizer(g);
    let w = chart.apply(z).expect("point stays in the plane");
    let height = w.x().hypot(w.y());
    chart
        .inverse()
        .apply(&HPoint::new(0.0, height).expect("positive height"))
        .expect("projection stays in the plane")
}

/// Minimum distance between two disjoint geodesics by dense sampling of
/// the first parameterization followed by golden-section refinement; at
/// each sampled point the distance to the second geodesic is minimized
/// over its own parameter by projecting the point onto it. Returns
/// `(distance, argmin on g1, argmin on g2)`.
///
/// The search bracket covers foot parameters up to ±60, ample for the
/// distances this crate works with. The profile of the distance along a
/// unit-speed geodesic is strictly convex, so the refinement converges to
/// machine precision.
pub fn min_distance_between(g1: &HGeodesic, g2: &HGeodesic) -> (f64, HPoint, HPoint) {
    let span = 60.0;
    let profile = |t: f64| {
        let p = g1.point_at(t);
        p.dist(&project_to_geodesic(g2, &p))
    };
    let coarse = 2401;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..coarse {
        let t = -span + 2.0 * span * (i as f64) / ((coarse - 1) as f64);
        let d = profile(t);
        if d < best.0 {
            best = (d, t);
        }
    }
    let spacing = 2.0 * span / ((coarse - 1) as f64);
    let t1 = golden_min(&profile, best.1 - spacing, best.1 + spacing, 160);
    let p1 = g1.point_at(t1);
    let p2 = project_to_geodesic(g2, &p1);
    (p1.dist(&p2), p1, p2)
}

/// Length of the geodesic segment from `z` to `w` by numerical integration
/// of `ds = |dz| / y` along the connecting geodesic (Simpson's rule).
pub fn arc_length_by_quadrature(z: &HPoint, w: &HPoint, panels: usize) -> f64 {
    let n = 2 * panels;
    if (z.x() - w.x()).abs() < 1e-13 * (1.0 + z.x().abs()) {
        // Vertical segment: integrate dy / y numerically all the same.
        let (a, b) = (z.y().min(w.y()), z.y().max(w.y()));
        let h = (b - a) / n as f64;
        let f = |y: f64| 1.0 / y;
        let mut s = f(a) + f(b);
        for k in 1..n {
            let y = a + h * k as f64;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(y);
        }
        return s * h / 3.0;
    }
    // Circle through z and w centered on the real axis.
    let cx = (w.x() * w.x() + w.y() * w.y() - z.x() * z.x() - z.y() * z.y())
        / (2.0 * (w.x() - z.x()));
    let th1 = z.y().atan2(z.x() - cx);
    let th2 = w.y().atan2(w.x() - cx);
    let (a, b) = (th1.min(th2), th1.max(th2));
    // On the circle, ds = r dθ / (r sin θ) = dθ / sin θ.
    let f = |th: f64| 1.0 / th.sin();
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let th = a + h * k as f64;
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(th);
    }
    s * h / 3.0
}

/// Riemann zeta on the real line (away from `s = 1`) by Euler–Maclaurin.
pub fn zeta_euler_maclaurin(s: f64) -> f64 {
    assert!((s - 1.0).abs() > 1e-6, "pole at s = 1");
    let n = 24usize;
    let nf = n as f64;
    let mut sum = 0.0;
    for k in 1..n {
        sum += (k as f64).powf(-s);
    }
    sum += nf.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * nf.powf(-s);
    // Bernoulli correction terms B_2/2! s N^{-s-1}, ...
    let b = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
    ];
    let mut coeff = s;
    let mut power = nf.powf(-s - 1.0);
    let mut fact2k = 2.0; // (2k)!
    for (k, bk) in b.iter().enumerate() {
        let k2 = 2 * (k + 1);
        if k > 0 {
            fact2k *= ((k2 - 1) * k2) as f64;
            coeff *= (s + (k2 - 3) as f64) * (s + (k2 - 2) as f64);
            power /= nf * nf;
        }
        sum += bk / fact2k * coeff * power;
    }
    sum
}

/// Rogers dilogarithm by direct quadrature of
/// `R(x) = -1/2 ∫_0^x [ln(1-t)/t + ln t/(1-t)] dt`.
///
/// The first integrand is smooth on `[0, x]` (value -1 at the origin) and
/// is integrated directly; the second carries the log singularity, which
/// the substitution `t = e^u` flattens.
pub fn rogers_by_quadrature(x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x));
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return std::f64::consts::PI * std::f64::consts::PI / 6.0;
    }
    let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize| -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * k as f64);
        }
        s * h / 3.0
    };
    let f1 = |t: f64| if t == 0.0 { -1.0 } else { (1.0 - t).ln() / t };
    let part1 = simpson(&f1, 0.0, x, 40_000);
    // ∫_0^x ln t/(1-t) dt = ∫_{-∞}^{ln x} u e^u/(1-e^u) du; the integrand
    // decays like u e^u towards -∞.
    let f2 = |u: f64| {
        let t = u.exp();
        u * t / (1.0 - t)
    };
    let part2 = simpson(&f2, -45.0, x.ln(), 40_000);
    -0.5 * (part1 + part2)
}

/// All freely reduced words of length at most `max_len`, including the
/// empty word.
pub fn word_ball(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in LETTERS {
                let v = w.appended(l);
                if v.len() == w.len() + 1 {
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Arc enumeration by brute force: every reduced word of length at most
/// `max_word_len` whose orbit point lies within `cutoff`.
pub fn naive_arcs(
    model: &SurfaceModel,
    x: &HPoint,
    y: &HPoint,
    max_word_len: usize,
    cutoff: f64,
) -> Vec<(Word, f64)> {
    let mut out = Vec::new();
    for w in word_ball(max_word_len) {
        // Extreme translates can underflow the Möbius denominator; such
        // orbit points are far beyond any admissible cutoff.
        let mat = model.word_matrix(&w);
        let Ok(image) = mat.apply(y) else {
            continue;
        };
        // Conditioning guard: the orbit point is trusted only when the
        // word's magnitude cannot have destroyed the Möbius denominator.
        // Orbit points within any admissible cutoff always come from
        // words of modest magnitude, so nothing real is dropped.
        let cond = mat.sup_norm() * (image.y() / y.y()).sqrt();
        if cond > 5e6 {
            continue;
        }
        let d = x.dist(&image);
        if d <= cutoff {
            out.push((w, d));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// An orthogeodesic found by the brute-force search, identified purely by
/// its geometry (ordered feet of the perpendicular segment).
#[derive(Debug, Clone)]
pub struct NaiveOrthoRecord {
    pub from_boundary: usize,
    pub to_boundary: usize,
    pub length: f64,
    pub foot_from: HPoint,
    pub foot_to: HPoint,
}

/// Orthogeodesic enumeration by brute force: for every ordered boundary
/// pair and every word in the ball, drop the common perpendicular from the
/// base axis to the translated axis and deduplicate by comparing the feet
/// of the perpendicular segments within `foot_tol`.
///
/// Everything is computed in the chart where the base axis is the upward
/// imaginary axis, using [`perpendicular_from_vertical`] so that feet stay
/// accurate for distant translates. Two segments represent the same
/// orthogeodesic of the quotient when they differ by a power of the base
/// boundary translation, which in the chart is the exact scaling
/// `z ↦ e^{k L_i} z`; the feet are compared after applying the aligning
/// power.
pub fn naive_orthogeodesics(
    model: &SurfaceModel,
    max_word_len: usize,
    cutoff: f64,
    foot_tol: f64,
) -> Vec<NaiveOrthoRecord> {
    struct ChartRecord {
        from: usize,
        to: usize,
        length: f64,
        t1: f64,
        foot2: HPoint,
    }
    let axes = model.boundary_axes().to_vec();
    let ball = word_ball(max_word_len);
    let mut chart_records: Vec<ChartRecord> = Vec::new();
    for i in 0..axes.len() {
        let chart = axis_normalizer(&axes[i]);
        let chart_inv = chart.inverse();
        let base_len = model.boundary_lengths()[i];
        let base_word = model.boundary_words()[i].clone();
        for j in 0..axes.len() {
            let bword = &model.boundary_words()[j];
            let bmat = model.word_matrix(bword);
            let mut seen_words: Vec<Word> = Vec::new();
            for raw in &ball {
                // Boundary powers on either side translate or fix the
                // lift without changing the quotient record; stripping
                // the visible ones keeps the matrices well conditioned.
                let w = strip_visible_powers(raw, &base_word, bword);
                if seen_words.contains(&w) {
                    continue;
                }
                seen_words.push(w.clone());
                if i == j && is_power_of(&w, bword) {
                    // Stabilizer element: the lift is the base axis itself.
                    continue;
                }
                let m = model.word_matrix(&w);
                let conj = chart
                    .compose(&m)
                    .compose(&bmat)
                    .compose(&m.inverse())
                    .compose(&chart_inv);
                // Conditioning guard: reject evaluations whose chained
                // magnitudes can have cancelled below rounding; every
                // orthogeodesic within the cutoff also arises from a
                // short, well-conditioned witness in the ball.
                let growth = chart.sup_norm().powi(2)
                    * m.sup_norm().powi(2)
                    * bmat.sup_norm();
                if growth / conj.sup_norm().max(1.0) > 1e7 {
                    continue;
                }
                let Ok(perp) = perpendicular_from_vertical(&conj) else {
                    // Shared endpoints or crossings only arise from
                    // stabilizer elements; they carry no orthogeodesic.
                    continue;
                };
                if perp.distance > cutoff {
                    continue;
                }
                let t1 = perp.foot_on_axis.y().ln();
                let f2 = perp.foot_on_other;
                let dup = chart_records.iter().any(|r| {
                    if r.from != i || r.to != j {
                        return false;
                    }
                    let pow = ((r.t1 - t1) / base_len).round();
                    if (t1 + pow * base_len - r.t1).abs() > foot_tol {
                        return false;
                    }
                    let scale = (pow * base_len).exp();
                    let moved = HPoint::new(f2.x() * scale, f2.y() * scale)
                        .expect("scaled foot stays in the plane");
                    r.foot2.dist(&moved) < foot_tol
                });
                if !dup {
                    chart_records.push(ChartRecord {
                        from: i,
                        to: j,
                        length: perp.distance,
                        t1,
                        foot2: f2,
                    });
                }
            }
        }
    }
    let mut out: Vec<NaiveOrthoRecord> = chart_records
        .into_iter()
        .map(|r| {
            let chart_inv = axis_normalizer(&axes[r.from]).inverse();
            let f1 = chart_inv
                .apply(&HPoint::new(0.0, r.t1.exp()).expect("foot height"))
                .expect("foot maps back");
            let f2 = chart_inv.apply(&r.foot2).expect("foot maps back");
            NaiveOrthoRecord {
                from_boundary: r.from,
                to_boundary: r.to,
                length: r.length,
                foot_from: f1,
                foot_to: f2,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.from_boundary, a.to_boundary)
            .cmp(&(b.from_boundary, b.to_boundary))
            .then(a.length.partial_cmp(&b.length).expect("finite"))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp2::{geodesic_distance, HGeodesic, HPoint};

    #[test]
    fn minimizer_matches_concentric_circles() {
        let g1 = HGeodesic::between(-1.0, 1.0).unwrap();
        let e = std::f64::consts::E;
        let g2 = HGeodesic::between(-e, e).unwrap();
        let (d, _, _) = min_distance_between(&g1, &g2);
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn minimizer_matches_cross_ratio_formula() {
        let pairs = [
            (
                HGeodesic::between(0.5, 3.0).unwrap(),
                HGeodesic::between(4.0, 9.0).unwrap(),
            ),
            (
                HGeodesic::between(-5.0, -1.0).unwrap(),
                HGeodesic::vertical_up(2.0),
            ),
            (
                HGeodesic::between(-2.0, 7.0).unwrap(),
                HGeodesic::between(0.0, 1.0).unwrap(),
            ),
        ];
        for (g1, g2) in pairs {
            let d = geodesic_distance(&g1, &g2).unwrap();
            let (dm, p1, p2) = min_distance_between(&g1, &g2);
            assert!((d - dm).abs() < 1e-8, "formula {d} vs oracle {dm}");
            assert!(g1.dist_to_point(&p1) < 1e-6);
            assert!(g2.dist_to_point(&p2) < 1e-6);
        }
    }

    #[test]
    fn arc_length_quadrature_matches_distance() {
        let z = HPoint::new(0.0, 1.0).unwrap();
        let w = HPoint::new(1.0, 1.0).unwrap();
        let l = arc_length_by_quadrature(&z, &w, 4_000);
        assert!((l - z.dist(&w)).abs() < 1e-10);
        let v = HPoint::new(0.0, 3.5).unwrap();
        let l2 = arc_length_by_quadrature(&z, &v, 4_000);
        assert!((l2 - z.dist(&v)).abs() < 1e-10);
    }

    #[test]
    fn zeta_reference_values() {
        assert!((zeta_euler_maclaurin(0.0) + 0.5).abs() < 1e-10);
        let pi = std::f64::consts::PI;
        assert!((zeta_euler_maclaurin(2.0) - pi * pi / 6.0).abs() < 1e-10);
        assert!((zeta_euler_maclaurin(-1.0) + 1.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn pruned_arcs_match_word_ball() {
        let m = crate::surfaces::build_pants(2.0, 1.5, 2.5).unwrap();
        let pts = m.sample_core_points(2, 5);
        let (x, y) = (pts[0], pts[1]);
        let cutoff = 5.0;
        let max_len = 6;
        let naive = naive_arcs(&m, &x, &y, max_len, cutoff);
        let pruned = crate::enumerate::enumerate_arcs(
            &m,
            &x,
            &y,
            cutoff,
            crate::enumerate::EnumBudget::default(),
        )
        .unwrap();
        let mut filtered: Vec<(Word, f64)> = pruned
            .records
            .iter()
            .filter(|r| r.word.len() <= max_len)
            .map(|r| (r.word.clone(), r.length))
            .collect();
        filtered.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(naive.len(), filtered.len());
        for ((wn, dn), (wp, dp)) in naive.iter().zip(filtered.iter()) {
            assert_eq!(wn, wp);
            assert!((dn - dp).abs() < 1e-10);
        }
    }

    #[test]
    fn pruned_orthogeodesics_match_geometric_dedup() {
        let m = crate::surfaces::build_pants(2.0, 1.5, 2.5).unwrap();
        let cutoff = 4.5;
        let max_len = 6;
        let naive = naive_orthogeodesics(&m, max_len, cutoff, 1e-8);
        let pruned = crate::enumerate::enumerate_orthogeodesics(
            &m,
            cutoff,
            crate::enumerate::EnumBudget::default(),
        )
        .unwrap();
        let filtered: Vec<_> = pruned
            .records
            .iter()
            .filter(|r| r.coset_rep.len() <= max_len)
            .collect();
        assert_eq!(naive.len(), filtered.len());
        for i in 0..3 {
            for j in 0..3 {
                let mut a: Vec<f64> = naive
                    .iter()
                    .filter(|r| r.from_boundary == i && r.to_boundary == j)
                    .map(|r| r.length)
                    .collect();
                let mut b: Vec<f64> = filtered
                    .iter()
                    .filter(|r| r.from_boundary == i && r.to_boundary == j)
                    .map(|r| r.length)
                    .collect();
                a.sort_by(|x, y| x.partial_cmp(y).unwrap());
                b.sort_by(|x, y| x.partial_cmp(y).unwrap());
                assert_eq!(a.len(), b.len(), "pair ({i},{j})");
                for (u, v) in a.iter().zip(b.iter()) {
                    assert!((u - v).abs() < 1e-9, "pair ({i},{j}): {u} vs {v}");
                }
            }
        }
    }
}
