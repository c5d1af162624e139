//! Estimate the critical exponent of a pants group from its spectra.
//!
//! The abscissa of convergence of the Poincaré series equals the
//! exponential growth rate of the counting function; the orthogeodesic
//! and arc spectra of one surface share it. Fatter pants (longer
//! boundaries) have thinner limit sets and smaller exponents.
//!
//! ```bash
//! cargo run --release --example critical_exponent
//! ```

use orthoseries::enumerate::{enumerate_orthogeodesics, EnumBudget};
use orthoseries::series::estimate_delta;
use orthoseries::surfaces::build_pants;

fn main() {
    println!("{:>16}  {:>8}  {:>8}", "boundaries", "records", "delta");
    for lengths in [[1.0, 1.0, 1.0], [2.0, 2.0, 2.0], [2.0, 3.0, 4.0], [4.0, 4.0, 4.0]] {
        let model = build_pants(lengths[0], lengths[1], lengths[2]).expect("valid spec");
        let cutoff = 13.0;
        let spectrum = enumerate_orthogeodesics(&model, cutoff, EnumBudget::default())
            .expect("enumeration");
        let lens = spectrum.lengths();
        if lens.len() < 200 {
            println!("{lengths:>16?}  {:>8}  (too few records)", lens.len());
            continue;
        }
        let (delta, stderr) = estimate_delta(&lens).expect("enough records");
        println!(
            "{lengths:>16?}  {:>8}  {delta:.4} +- {stderr:.4}",
            lens.len()
        );
    }
}
