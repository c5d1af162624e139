//! Continue the point-pair series to s = 0: the value is 1/χ(Σ).
//!
//! For two interior points x ≠ y, the series Σ e^{-s ℓ} over geodesic
//! arcs from x to y continues to s = 0 with value the reciprocal of the
//! Euler characteristic — independent of the basepoints. For a pair of
//! pants χ = -1, so every basepoint pair should estimate -1.
//!
//! ```bash
//! cargo run --release --example eta_xy_at_zero
//! ```

use orthoseries::enumerate::EnumBudget;
use orthoseries::series::{eta_xy_at_zero, ContinuationConfig};
use orthoseries::surfaces::build_pants;

fn main() {
    let model = build_pants(2.0, 2.0, 2.0).expect("valid pants spec");
    let expected = 1.0 / model.euler_characteristic() as f64;
    let pts = model.sample_core_points(3, 42);
    println!("expected value 1/chi = {expected}");
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let (estimate, arcs) = eta_xy_at_zero(
            &model,
            &pts[a],
            &pts[b],
            14.0,
            EnumBudget::default(),
            &ContinuationConfig::default(),
        )
        .expect("pipeline");
        println!(
            "pair ({a},{b}): {} arcs, eta_xy(0) = {:.4} +- {:.4} ({})",
            arcs.records.len(),
            estimate.value,
            estimate.uncertainty,
            if estimate.conclusive {
                "conclusive"
            } else {
                "inconclusive"
            }
        );
    }
}
