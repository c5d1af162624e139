//! Check the Basmajian and Bridgeman identities on a truncated
//! orthospectrum.
//!
//! For a surface with geodesic boundary, the boundary length is
//! `Σ 2 log coth(ℓ/2)` and the area is `(2/π) Σ R(sech²(ℓ/2))` over the
//! oriented orthogeodesics, with `R` the Rogers dilogarithm. Truncating
//! the sums at a cutoff leaves positive residuals that shrink as the
//! cutoff grows — a sharp end-to-end check that the enumeration misses
//! nothing.
//!
//! ```bash
//! cargo run --release --example identities
//! ```

use orthoseries::enumerate::{enumerate_orthogeodesics, EnumBudget};
use orthoseries::series::{basmajian_residual_at, bridgeman_residual_at};
use orthoseries::surfaces::build_pants;

fn main() {
    let model = build_pants(2.0, 2.0, 2.0).expect("valid pants spec");
    let cutoff = 14.0;
    let spectrum =
        enumerate_orthogeodesics(&model, cutoff, EnumBudget::default()).expect("enumeration");
    println!(
        "pants (2,2,2): boundary length {:.6}, area {:.6}, {} records up to {cutoff}",
        model.boundary_total_length(),
        model.area(),
        spectrum.records.len()
    );
    println!(
        "\n{:>6}  {:>8}  {:>14}  {:>14}",
        "cutoff", "records", "basmajian", "bridgeman"
    );
    for i in 1..=7 {
        let l = 2.0 * i as f64;
        let n = spectrum.counting(l).expect("within cutoff");
        let bas = basmajian_residual_at(&spectrum, &model, l);
        let bri = bridgeman_residual_at(&spectrum, &model, l).expect("dilog in domain");
        println!("{l:6.1}  {n:8}  {bas:14.8}  {bri:14.8}");
    }
    let bas = basmajian_residual_at(&spectrum, &model, cutoff);
    let bri = bridgeman_residual_at(&spectrum, &model, cutoff).expect("dilog in domain");
    println!(
        "\nat cutoff {cutoff}: relative residuals {:.3e} (boundary) and {:.3e} (area)",
        bas / model.boundary_total_length(),
        bri / model.area()
    );
}
