//! Least-squares helpers for exponent and extrapolation fits.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Ordinary least-squares solution with goodness of fit.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LinearFit {
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
    pub residual_norm: f64,
}

/// Solves `min ‖X β − y‖` for the design matrix given row by row.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<LinearFit> {
    let k = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.len() < k.max(2) || rows.len() != y.len() {
        return Err(Error::TooFewPoints {
            needed: k.max(2),
            got: rows.len().min(y.len()),
        });
    }
    let x = DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]);
    let yv = DVector::from_column_slice(y);
    let svd = x.clone().svd(true, true);
    let beta = svd
        .solve(&yv, 1e-13)
        .map_err(|e| Error::InvalidParams(format!("least squares failed: {e}")))?;
    let resid = &x * &beta - &yv;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res = resid.norm_squared();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LinearFit {
        coefficients: beta.iter().copied().collect(),
        r_squared,
        residual_norm: ss_res.sqrt(),
    })
}

/// Straight line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let rows: Vec<Vec<f64>> = x.iter().map(|&v| vec![1.0, v]).collect();
    let f = least_squares(&rows, y)?;
    Ok(LineFit {
        intercept: f.coefficients[0],
        slope: f.coefficients[1],
        r_squared: f.r_squared,
    })
}

/// Exponent of `y ~ C x^s` from a log-log line fit (values are taken in absolute value).
pub fn power_law(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    line(&lx, &ly)
}

/// Value at `t = 0` of the degree-`degree` polynomial through `(t, y)` in the least-squares sense.
pub fn polynomial_intercept(t: &[f64], y: &[f64], degree: usize) -> Result<f64> {
    let rows: Vec<Vec<f64>> = t
        .iter()
        .map(|&v| (0..=degree).map(|k| v.powi(k as i32)).collect())
        .collect();
    Ok(least_squares(&rows, y)?.coefficients[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let x = [1.0, 10.0, 100.0, 1000.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.5)).collect();
        let f = power_law(&x, &y).unwrap();
        assert!((f.slope + 2.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_extrapolation_exact_for_polynomials() {
        let t = [0.1, 0.2, 0.3, 0.4];
        let y: Vec<f64> = t.iter().map(|v| 2.0 - v + 3.0 * v * v).collect();
        assert!((polynomial_intercept(&t, &y, 2).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(line(&[1.0], &[2.0]), Err(Error::TooFewPoints { .. })));
    }
}
