//! Exhaustive enumeration of orthogeodesics and point-to-point geodesic
//! arcs up to a length cutoff.
//!
//! Both enumerations walk the tree of freely reduced words. For a prefix
//! `w = g1…gn` every extension maps the target object into the nested
//! half-plane `N(w) = g1…g_{n-1} A(g_n)`, where `A(h)` is the ping-pong
//! wall of the letter `h`. The distance from the base object (a point for
//! arcs, a boundary axis for orthogeodesics) to `N(w)` is therefore a
//! certified lower bound for everything below the prefix, monotone along
//! extensions; a prefix is pruned only when this bound exceeds the cutoff,
//! so the enumeration has no false negatives.
//!
//! Orthogeodesics from boundary `i` to boundary `j` are parameterized by
//! nontrivial double cosets `⟨b_i⟩ \ Γ / ⟨b_j⟩`. Each lift of boundary `j`
//! factors uniquely as a peeled word prefix times a lift adjacent to the
//! fundamental domain (a "straddling" lift), so candidates are emitted at
//! every node for each straddling lift, and records are deduplicated by
//! the canonical double-coset word.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyp2::{geodesic_distance, GeometryError, HGeodesic, HPoint, Isometry};
use crate::surfaces::{SurfaceError, SurfaceModel, SurfaceSpec};
use crate::words::{double_coset_canonical, Letter, Word, LETTERS};

/// Hard cap on length cutoffs, keeping `cosh` of all intermediate
/// quantities comfortably inside the double range.
pub const MAX_CUTOFF: f64 = 60.0;

/// Default node-expansion budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumBudget {
    pub max_expansions: u64,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_expansions: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error(
        "enumeration budget exhausted; smallest unexplored lower bound {lower_bound}"
    )]
    BudgetExhausted {
        lower_bound: f64,
        partial: Box<PartialSpectrum>,
    },
    #[error("basepoint lies outside the core region (signed margin {0})")]
    BasepointOutsideCore(f64),
    #[error("cutoff {0} is not in (0, {MAX_CUTOFF}]")]
    CutoffOutOfRange(f64),
    #[error("query length {query} exceeds the spectrum cutoff {cutoff}")]
    QueryBeyondCutoff { query: f64, cutoff: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Partial result attached to a budget-exhaustion error. Never complete;
/// returned for diagnostics only.
#[derive(Debug)]
pub enum PartialSpectrum {
    Arcs(ArcSpectrum),
    Ortho(Orthospectrum),
}

/// One geodesic arc between the basepoints, witnessed by the group element
/// carrying the second basepoint's lift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcRecord {
    pub length: f64,
    pub word: Word,
}

/// All geodesic arcs from `x` to `y` of length at most `cutoff`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcSpectrum {
    pub x: HPoint,
    pub y: HPoint,
    pub cutoff: f64,
    pub records: Vec<ArcRecord>,
}

impl ArcSpectrum {
    pub fn lengths(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.length).collect()
    }

    pub fn counting(&self, ell: f64) -> Result<usize, EnumError> {
        counting_function(&self.lengths(), self.cutoff, ell)
    }
}

/// One oriented orthogeodesic from `from_boundary` to `to_boundary`,
/// recorded by its canonical double-coset representative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoRecord {
    pub length: f64,
    pub from_boundary: usize,
    pub to_boundary: usize,
    pub coset_rep: Word,
}

/// All oriented orthogeodesics of length at most `cutoff`. A geodesic and
/// its reversal appear as two records of equal length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Orthospectrum {
    pub surface: SurfaceSpec,
    pub cutoff: f64,
    pub records: Vec<OrthoRecord>,
}

impl Orthospectrum {
    pub fn lengths(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.length).collect()
    }

    pub fn counting(&self, ell: f64) -> Result<usize, EnumError> {
        counting_function(&self.lengths(), self.cutoff, ell)
    }

    /// Recompute a record's length from its stored witness word, via the
    /// axis of the conjugated boundary matrix and the generic cross-ratio
    /// distance — a separate route from the one that produced the record.
    pub fn verify_record(model: &SurfaceModel, rec: &OrthoRecord) -> Result<f64, EnumError> {
        let axes = model.boundary_axes();
        let w = model.word_matrix(&rec.coset_rep);
        let b = model.word_matrix(&model.boundary_words()[rec.to_boundary]);
        let lift = w.compose(&b).compose(&w.inverse()).axis()?;
        let d = geodesic_distance(&axes[rec.from_boundary], &lift)?;
        Ok((d - rec.length).abs())
    }
}

/// Cumulative counting function `N(ℓ)` of a sorted length list: the number
/// of entries `≤ ℓ`. Errors for queries beyond the enumeration cutoff,
/// where the spectrum is not known to be complete.
pub fn counting_function(
    sorted_lengths: &[f64],
    cutoff: f64,
    ell: f64,
) -> Result<usize, EnumError> {
    if ell > cutoff {
        return Err(EnumError::QueryBeyondCutoff {
            query: ell,
            cutoff,
        });
    }
    Ok(sorted_lengths.partition_point(|&l| l <= ell))
}

struct Node {
    word: Word,
    mat: Isometry,
    lb: f64,
}

fn validate_cutoff(cutoff: f64) -> Result<(), EnumError> {
    if !(cutoff.is_finite() && cutoff > 0.0 && cutoff <= MAX_CUTOFF) {
        return Err(EnumError::CutoffOutOfRange(cutoff));
    }
    Ok(())
}

/// Enumerate every geodesic arc from `x` to `y` of length at most `cutoff`.
///
/// Arcs correspond bijectively to group elements `g` with
/// `d(x, g y) ≤ cutoff`: the universal cover of the core is convex, so each
/// connecting segment projects to exactly one geodesic arc of the surface.
/// The direct arc (identity element) is included when short enough.
pub fn enumerate_arcs(
    model: &SurfaceModel,
    x: &HPoint,
    y: &HPoint,
    cutoff: f64,
    budget: EnumBudget,
) -> Result<ArcSpectrum, EnumError> {
    validate_cutoff(cutoff)?;
    for p in [x, y] {
        let loc = model.contains_in_core(p);
        if !loc.inside {
            return Err(EnumError::BasepointOutsideCore(model.core_margin(p)));
        }
    }
    let mut records: Vec<ArcRecord> = Vec::new();
    let direct = x.dist(y);
    if direct <= cutoff {
        records.push(ArcRecord {
            length: direct,
            word: Word::empty(),
        });
    }
    let mut queue: VecDeque<Node> = VecDeque::new();
    for l in LETTERS {
        let lb = model.wall(l).dist_to_point(x);
        if lb <= cutoff {
            queue.push_back(Node {
                word: Word::letter(l),
                mat: model.letter_matrix(l),
                lb,
            });
        }
    }
    let mut expansions: u64 = 0;
    while let Some(node) = queue.pop_front() {
        expansions += 1;
        if expansions > budget.max_expansions {
            let lower_bound = queue
                .iter()
                .map(|n| n.lb)
                .fold(node.lb, f64::min);
            sort_arc_records(&mut records);
            return Err(EnumError::BudgetExhausted {
                lower_bound,
                partial: Box::new(PartialSpectrum::Arcs(ArcSpectrum {
                    x: *x,
                    y: *y,
                    cutoff,
                    records,
                })),
            });
        }
        let image = node.mat.apply(y)?;
        let d = x.dist(&image);
        if d <= cutoff {
            records.push(ArcRecord {
                length: d,
                word: node.word.clone(),
            });
        }
        let last = node.word.last().expect("nodes carry nonempty words");
        for l in LETTERS {
            if l == last.inverse() {
                continue;
            }
            let nest = model.wall(l).transform(&node.mat);
            let lb = nest.dist_to_point(x);
            if lb <= cutoff {
                queue.push_back(Node {
                    word: node.word.appended(l),
                    mat: node.mat.compose(&model.letter_matrix(l)),
                    lb,
                });
            }
        }
    }
    sort_arc_records(&mut records);
    Ok(ArcSpectrum {
        x: *x,
        y: *y,
        cutoff,
        records,
    })
}

fn sort_arc_records(records: &mut [ArcRecord]) {
    records.sort_by(|a, b| {
        a.length
            .partial_cmp(&b.length)
            .expect("lengths are finite")
            .then_with(|| a.word.cmp(&b.word))
    });
}

/// Enumerate every oriented orthogeodesic of length at most `cutoff`.
pub fn enumerate_orthogeodesics(
    model: &SurfaceModel,
    cutoff: f64,
    budget: EnumBudget,
) -> Result<Orthospectrum, EnumError> {
    validate_cutoff(cutoff)?;
    let n = model.boundary_count();
    let axes = model.boundary_axes().to_vec();
    let mut found: BTreeMap<(usize, usize, Word), f64> = BTreeMap::new();
    let mut expansions: u64 = 0;

    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            let base = axes[i];
            let chart = crate::hyp2::axis_normalizer(&base);
            let chart_inv = chart.inverse();
            let bw_i = model.boundary_words()[i].clone();
            let bw_j = model.boundary_words()[j].clone();
            let bmat_j = model.word_matrix(&bw_j);
            let blocks = model.forbidden_leading_prefixes(i);
            let straddles: Vec<(Word, HGeodesic)> = model.straddle_lifts(j).to_vec();

            let emit = |word: &Word,
                            mat: &Isometry,
                            found: &mut BTreeMap<(usize, usize, Word), f64>|
             -> Result<(), EnumError> {
                for (tw, tg) in &straddles {
                    if i == j && word.is_empty() && tw.is_empty() {
                        continue;
                    }
                    let lift = mat.apply_geodesic(tg);
                    let Ok(d) = geodesic_distance(&base, &lift) else {
                        // Shared endpoints only occur for stabilizer
                        // elements, which carry no orthogeodesic.
                        continue;
                    };
                    // Generous pre-gate; the accurate length below decides.
                    if d > cutoff + 1e-6 {
                        continue;
                    }
                    let gword = word.concat(tw);
                    let canon = double_coset_canonical(&gword, &bw_i, &bw_j);
                    if i == j && canon.is_empty() {
                        continue;
                    }
                    let key = (i, j, canon.clone());
                    if found.contains_key(&key) {
                        continue;
                    }
                    // Final length from the canonical witness, via the
                    // cancellation-free matrix-entry formula in the chart
                    // where the base axis is vertical.
                    let cmat = model.word_matrix(&canon);
                    let conj = chart
                        .compose(&cmat)
                        .compose(&bmat_j)
                        .compose(&cmat.inverse())
                        .compose(&chart_inv);
                    let Ok(perp) = crate::hyp2::perpendicular_from_vertical(&conj) else {
                        continue;
                    };
                    if perp.distance <= cutoff {
                        found.insert(key, perp.distance);
                    }
                }
                Ok(())
            };

            emit(&Word::empty(), &Isometry::identity(), &mut found)?;

            let mut queue: VecDeque<Node> = VecDeque::new();
            for l in LETTERS {
                let word = Word::letter(l);
                if leading_blocked(&word, &blocks) {
                    continue;
                }
                let lb = model.wall(l).dist_to_geodesic_lb(&base);
                if lb <= cutoff {
                    queue.push_back(Node {
                        word,
                        mat: model.letter_matrix(l),
                        lb,
                    });
                }
            }
            while let Some(node) = queue.pop_front() {
                expansions += 1;
                if expansions > budget.max_expansions {
                    let lower_bound = queue.iter().map(|n| n.lb).fold(node.lb, f64::min);
                    return Err(EnumError::BudgetExhausted {
                        lower_bound,
                        partial: Box::new(PartialSpectrum::Ortho(Orthospectrum {
                            surface: model.spec().clone(),
                            cutoff,
                            records: collect_records(&found),
                        })),
                    });
                }
                emit(&node.word, &node.mat, &mut found)?;
                let last = node.word.last().expect("nodes carry nonempty words");
                for l in LETTERS {
                    if l == last.inverse() {
                        continue;
                    }
                    let word = node.word.appended(l);
                    if leading_blocked(&word, &blocks) {
                        continue;
                    }
                    let nest = model.wall(l).transform(&node.mat);
                    let lb = nest.dist_to_geodesic_lb(&base);
                    if lb <= cutoff {
                        queue.push_back(Node {
                            word,
                            mat: node.mat.compose(&model.letter_matrix(l)),
                            lb,
                        });
                    }
                }
            }
        }
    }

    Ok(Orthospectrum {
        surface: model.spec().clone(),
        cutoff,
        records: collect_records(&found),
    })
}

/// A word is excluded when it begins with a power block of the base
/// boundary word; the check is needed only at the depth of the block.
fn leading_blocked(word: &Word, blocks: &[Vec<Letter>]) -> bool {
    blocks
        .iter()
        .any(|b| word.len() == b.len() && word.starts_with(b))
}

fn collect_records(found: &BTreeMap<(usize, usize, Word), f64>) -> Vec<OrthoRecord> {
    let mut records: Vec<OrthoRecord> = found
        .iter()
        .map(|((i, j, w), &len)| OrthoRecord {
            length: len,
            from_boundary: *i,
            to_boundary: *j,
            coset_rep: w.clone(),
        })
        .collect();
    records.sort_by(|a, b| {
        a.length
            .partial_cmp(&b.length)
            .expect("lengths are finite")
            .then_with(|| (a.from_boundary, a.to_boundary, &a.coset_rep).cmp(&(
                b.from_boundary,
                b.to_boundary,
                &b.coset_rep,
            )))
    });
    records
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{build_pants, pants_seam_length};

    #[test]
    fn seam_records_of_symmetric_pants() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let seam = pants_seam_length(2.0, 2.0, 2.0);
        let spec = enumerate_orthogeodesics(&m, seam + 0.05, EnumBudget::default()).unwrap();
        assert_eq!(spec.records.len(), 6, "records: {:?}", spec.records);
        let mut pairs: Vec<(usize, usize)> = spec
            .records
            .iter()
            .map(|r| (r.from_boundary, r.to_boundary))
            .collect();
        pairs.sort_unstable();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);
        for r in &spec.records {
            assert!((r.length - seam).abs() < 1e-9, "length {}", r.length);
        }
    }

    #[test]
    fn below_shortest_seam_is_empty() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let seam = pants_seam_length(2.0, 2.0, 2.0);
        let spec = enumerate_orthogeodesics(&m, seam - 0.05, EnumBudget::default()).unwrap();
        assert!(spec.records.is_empty());
    }

    #[test]
    fn record_lengths_match_witnesses() {
        let m = build_pants(1.5, 2.0, 2.5).unwrap();
        let spec = enumerate_orthogeodesics(&m, 6.0, EnumBudget::default()).unwrap();
        assert!(!spec.records.is_empty());
        for r in &spec.records {
            let residual = Orthospectrum::verify_record(&m, r).unwrap();
            assert!(residual < 1e-10, "record {r:?} residual {residual}");
        }
    }

    #[test]
    fn orientation_reversal_is_fixed_point_free_involution() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let spec = enumerate_orthogeodesics(&m, 4.5, EnumBudget::default()).unwrap();
        let words = m.boundary_words();
        for r in &spec.records {
            let rev = double_coset_canonical(
                &r.coset_rep.inverse(),
                &words[r.to_boundary],
                &words[r.from_boundary],
            );
            assert!(
                !(r.from_boundary == r.to_boundary && rev == r.coset_rep),
                "record {r:?} is its own reversal"
            );
            let mate = spec.records.iter().find(|s| {
                s.from_boundary == r.to_boundary
                    && s.to_boundary == r.from_boundary
                    && s.coset_rep == rev
            });
            let mate = mate.unwrap_or_else(|| panic!("no reversal mate for {r:?}"));
            assert!((mate.length - r.length).abs() < 1e-9);
        }
    }

    #[test]
    fn arc_spectrum_contains_direct_arc() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let pts = m.sample_core_points(2, 11);
        let (x, y) = (pts[0], pts[1]);
        let d = x.dist(&y);
        let arcs = enumerate_arcs(&m, &x, &y, d + 0.5, EnumBudget::default()).unwrap();
        assert!(arcs.records.iter().any(|r| r.word.is_empty()));
        assert!((arcs.records[0].length - d).abs() < 1e-12);
        let below = enumerate_arcs(&m, &x, &y, 0.9 * d, EnumBudget::default()).unwrap();
        assert!(below.records.is_empty());
    }

    #[test]
    fn arc_basepoint_validation() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let inside = m.interior_point();
        let outside = HPoint::new(0.0, 40.0).unwrap();
        assert!(matches!(
            enumerate_arcs(&m, &inside, &outside, 2.0, EnumBudget::default()),
            Err(EnumError::BasepointOutsideCore(_))
        ));
    }

    #[test]
    fn counting_function_basics() {
        let lengths = [1.0, 2.0, 2.0, 3.0];
        assert_eq!(counting_function(&lengths, 5.0, 0.0).unwrap(), 0);
        assert_eq!(counting_function(&lengths, 5.0, 2.0).unwrap(), 3);
        assert_eq!(counting_function(&lengths, 5.0, 5.0).unwrap(), 4);
        assert!(matches!(
            counting_function(&lengths, 5.0, 6.0),
            Err(EnumError::QueryBeyondCutoff { .. })
        ));
    }

    #[test]
    fn budget_exhaustion_returns_partial() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let tiny = EnumBudget { max_expansions: 3 };
        match enumerate_orthogeodesics(&m, 8.0, tiny) {
            Err(EnumError::BudgetExhausted { lower_bound, partial }) => {
                assert!(lower_bound >= 0.0);
                match *partial {
                    PartialSpectrum::Ortho(o) => assert!(o.records.len() < 1000),
                    _ => panic!("wrong partial kind"),
                }
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let m = build_pants(1.0, 2.0, 3.0).unwrap();
        let a = enumerate_orthogeodesics(&m, 5.5, EnumBudget::default()).unwrap();
        let b = enumerate_orthogeodesics(&m, 5.5, EnumBudget::default()).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (r, s) in a.records.iter().zip(b.records.iter()) {
            assert_eq!(r, s);
        }
    }

    #[test]
    fn arc_swap_gives_same_length_multiset() {
        let m = build_pants(2.0, 2.0, 2.0).unwrap();
        let pts = m.sample_core_points(2, 23);
        let (x, y) = (pts[0], pts[1]);
        let f = enumerate_arcs(&m, &x, &y, 6.0, EnumBudget::default()).unwrap();
        let g = enumerate_arcs(&m, &y, &x, 6.0, EnumBudget::default()).unwrap();
        assert_eq!(f.records.len(), g.records.len());
        for (a, b) in f.lengths().iter().zip(g.lengths().iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
