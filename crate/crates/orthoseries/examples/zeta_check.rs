//! Calibrate the continuation engine against the Riemann zeta function.
//!
//! The synthetic spectrum ℓᵢ = log i turns Σ e^{-s ℓᵢ} into ζ(s), whose
//! continuation satisfies ζ(0) = -1/2. The same pipeline that evaluates
//! surface series must recover this value, and rescaling every length by
//! a constant must not change it.
//!
//! ```bash
//! cargo run --release --example zeta_check
//! ```

use orthoseries::oracle::zeta_euler_maclaurin;
use orthoseries::series::{continue_at_zero, ContinuationConfig};

fn main() {
    let reference = zeta_euler_maclaurin(0.0);
    println!("independent Euler-Maclaurin oracle: zeta(0) = {reference:.10}");

    for scale in [1.0, 2.0] {
        let lengths: Vec<f64> = (1..=1_000_000u64)
            .map(|i| scale * (i as f64).ln())
            .collect();
        let cutoff = *lengths.last().unwrap();
        let est = continue_at_zero(&lengths, cutoff, &ContinuationConfig::default())
            .expect("pipeline");
        println!(
            "lengths {scale} * log(i): estimate {:.4} +- {:.4}, growth rate {:.4} (expected {:.1})",
            est.value,
            est.uncertainty,
            est.delta,
            1.0 / scale
        );
    }
    println!("both estimates should sit within 0.05 of -0.5");
}
