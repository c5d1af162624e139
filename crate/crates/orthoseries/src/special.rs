//! Dilogarithm and the Rogers dilogarithm.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("argument {0} outside the domain [0, 1]")]
    OutOfDomain(f64),
}

/// Dilogarithm `Li₂(x) = Σ xᵏ/k²` for `x ∈ [0, 1]`.
///
/// Series for `x ≤ 1/2`, Euler reflection through `1 - x` otherwise.
pub fn dilog(x: f64) -> Result<f64, SpecialError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(SpecialError::OutOfDomain(x));
    }
    let pi = std::f64::consts::PI;
    if x == 1.0 {
        return Ok(pi * pi / 6.0);
    }
    if x <= 0.5 {
        Ok(dilog_series(x))
    } else {
        Ok(pi * pi / 6.0 - x.ln() * (1.0 - x).ln() - dilog_series(1.0 - x))
    }
}

fn dilog_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 1..200u32 {
        power *= x;
        let term = power / ((k * k) as f64);
        sum += term;
        if term < 1e-18 * sum.max(1.0) {
            break;
        }
    }
    sum
}

/// Rogers dilogarithm `R(x) = Li₂(x) + ½ ln x ln(1-x)` on `[0, 1]`,
/// normalized so `R(0) = 0` and `R(1) = π²/6`.
///
/// The reflection `R(x) + R(1-x) = π²/6` keeps the log product away from
/// its indeterminate corners.
pub fn rogers_dilog(x: f64) -> Result<f64, SpecialError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(SpecialError::OutOfDomain(x));
    }
    let pi = std::f64::consts::PI;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(pi * pi / 6.0);
    }
    if x <= 0.5 {
        Ok(dilog_series(x) + 0.5 * x.ln() * (1.0 - x).ln())
    } else {
        let y = 1.0 - x;
        Ok(pi * pi / 6.0 - (dilog_series(y) + 0.5 * y.ln() * x.ln()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::rogers_by_quadrature;

    #[test]
    fn rogers_endpoints() {
        let pi = std::f64::consts::PI;
        assert_eq!(rogers_dilog(0.0).unwrap(), 0.0);
        assert!((rogers_dilog(1.0).unwrap() - pi * pi / 6.0).abs() < 1e-15);
        assert!((rogers_dilog(0.5).unwrap() - pi * pi / 12.0).abs() < 1e-14);
    }

    #[test]
    fn rogers_matches_quadrature() {
        for &x in &[0.05, 0.2, 0.37, 0.5, 0.63, 0.8, 0.95] {
            let quad = rogers_by_quadrature(x);
            let val = rogers_dilog(x).unwrap();
            assert!((val - quad).abs() < 1e-6, "x = {x}: {val} vs {quad}");
        }
    }

    #[test]
    fn rogers_duplication_identity() {
        // R(x²) = 2 [R(x) - R(x/(1+x))].
        for &x in &[0.2, 0.3, 0.5, 0.7, 0.9] {
            let lhs = rogers_dilog(x * x).unwrap();
            let rhs =
                2.0 * (rogers_dilog(x).unwrap() - rogers_dilog(x / (1.0 + x)).unwrap());
            assert!((lhs - rhs).abs() < 1e-12, "x = {x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn rogers_monotone_and_reflection() {
        let pi = std::f64::consts::PI;
        let mut prev = -1.0;
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let v = rogers_dilog(x).unwrap();
            assert!(v >= prev);
            prev = v;
            let w = rogers_dilog(1.0 - x).unwrap();
            assert!((v + w - pi * pi / 6.0).abs() < 1e-13);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(rogers_dilog(-0.1).is_err());
        assert!(rogers_dilog(1.1).is_err());
        assert!(dilog(2.0).is_err());
    }
}
