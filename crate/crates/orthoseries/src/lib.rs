//! Hyperbolic surfaces with totally geodesic boundary: orthospectra,
//! geodesic-arc spectra, and regularized evaluation of the associated
//! Poincaré series at `s = 0`.
//!
//! The crate builds pairs of pants as discrete free groups of Möbius
//! transformations, enumerates their orthogeodesics and point-to-point
//! geodesic arcs exhaustively up to a length cutoff with a certified
//! pruning bound, fits exponential tail models to the counting functions,
//! and continues the series `Σ e^{-s ℓ}` past its abscissa of convergence.
//! The classical Basmajian and Bridgeman boundary-length and area
//! identities are available as consistency checks on enumeration
//! completeness.
//!
//! Start with the runnable programs under `examples/`; each one walks
//! through a single capability end to end.

pub mod accept;
pub mod config;
pub mod enumerate;
pub mod hyp2;
pub mod oracle;
pub mod report;
pub mod series;
pub mod special;
pub mod surfaces;
pub mod tailfit;
pub mod words;

pub use config::RunConfig;
pub use enumerate::{
    enumerate_arcs, enumerate_orthogeodesics, ArcSpectrum, EnumBudget, OrthoRecord, Orthospectrum,
};
pub use hyp2::{GeometryError, HGeodesic, HPoint, HalfPlane, IdealPoint, Isometry};
pub use series::{continue_at_zero, estimate_delta, partial_sum, ContinuationConfig};
pub use surfaces::{build_pants, SurfaceModel, SurfaceSpec};
pub use tailfit::{fit_tail, TailModel};
pub use words::Word;
