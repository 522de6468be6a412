//! Composite Gauss–Legendre quadrature.
//!
//! Node/weight generation is delegated to `gauss-quad`; this module adds
//! panel splitting, cached reference rules and a few interval maps used
//! throughout the crate.

use gauss_quad::legendre::GaussLegendre;
use std::sync::OnceLock;

/// A Gauss–Legendre rule on the reference interval `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    /// Rule with `order` nodes (`order >= 2`).
    pub fn new(order: usize) -> Self {
        let gl = GaussLegendre::new(order.max(2)).expect("order >= 2");
        let mut pairs: Vec<(f64, f64)> = gl.into_node_weight_pairs();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let m = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (m + h * x, h * w))
    }

    /// Single-panel integral over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Integral over `[a, b]` split into `panels` equal panels.
    pub fn integrate_panels<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + h * k as f64;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }

    /// Nodes and weights of the composite rule on `[a, b]` with `panels` panels.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut xs = Vec::with_capacity(panels * self.order());
        let mut ws = Vec::with_capacity(panels * self.order());
        for k in 0..panels {
            let lo = a + h * k as f64;
            for (x, w) in self.mapped(lo, lo + h) {
                xs.push(x);
                ws.push(w);
            }
        }
        (xs, ws)
    }
}

/// Shared 16-point rule.
pub fn gl16() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::new(16))
}

/// Shared 32-point rule.
pub fn gl32() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::new(32))
}

/// `sin(x)/x`, with a Taylor series near the origin.
pub fn sinc(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-3 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

/// Derivative of [`sinc`], `(x cos x - sin x)/x²`, with a series near the origin.
pub fn sinc_prime(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-2 {
        let x2 = x * x;
        -x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0)))
    } else {
        (x * x.cos() - x.sin()) / (x * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let r = Rule::new(8);
        let v = r.integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-9);
    }

    #[test]
    fn panels_integrate_oscillatory() {
        let v = gl16().integrate_panels(0.0, 50.0, 40, |x| x.sin());
        assert!((v - (1.0 - 50f64.cos())).abs() < 1e-12);
    }

    #[test]
    fn sinc_branches_agree() {
        for &x in &[9.9e-4f64, 1.1e-3, 0.5] {
            let direct = x.sin() / x;
            assert!((sinc(x) - direct).abs() < 1e-15);
        }
        for &x in &[9.9e-3f64, 1.01e-2, 0.3] {
            let direct = (x * x.cos() - x.sin()) / (x * x);
            assert!((sinc_prime(x) - direct).abs() < 1e-12);
        }
    }
}
