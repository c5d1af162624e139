//! Enumerate geodesic arcs between two interior points.
//!
//! Arcs from x to y correspond one-to-one to group elements g with
//! d(x, g·y) below the cutoff; the direct arc is the identity element.
//! Swapping the basepoints reverses every arc and leaves the length
//! multiset unchanged.
//!
//! ```bash
//! cargo run --release --example arc_spectrum
//! ```

use orthoseries::enumerate::{enumerate_arcs, EnumBudget};
use orthoseries::surfaces::build_pants;

fn main() {
    let model = build_pants(2.0, 2.0, 2.0).expect("valid pants spec");
    let pts = model.sample_core_points(2, 7);
    let (x, y) = (pts[0], pts[1]);
    println!(
        "basepoints x = ({:.6}, {:.6}), y = ({:.6}, {:.6}), direct distance {:.6}",
        x.x(),
        x.y(),
        y.x(),
        y.y(),
        x.dist(&y)
    );

    let cutoff = 9.0;
    let arcs = enumerate_arcs(&model, &x, &y, cutoff, EnumBudget::default()).expect("enumeration");
    println!("\n{} arcs up to length {cutoff}:", arcs.records.len());
    for r in arcs.records.iter().take(10) {
        println!("{:12.8}  {}", r.length, r.word);
    }
    println!("...");

    let swapped =
        enumerate_arcs(&model, &y, &x, cutoff, EnumBudget::default()).expect("enumeration");
    let worst = arcs
        .lengths()
        .iter()
        .zip(swapped.lengths().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!(
        "swapping basepoints: {} arcs, worst length difference {worst:.2e}",
        swapped.records.len()
    );

    // The counting function doubles roughly every 1/delta units of length.
    for ell in [5.0, 6.0, 7.0, 8.0, 9.0] {
        println!("N({ell}) = {}", arcs.counting(ell).expect("within cutoff"));
    }
}
