//! Energy expansion: the Bogoliubov counterterm sum, the cubic correction
//! sums, constant-term assembly and the closed-form upper bounds.

use crate::coefficients::{add, dot, momentum, norm, norm2, smooth_cutoff, Interaction, KernelSet, ModelParams};
use crate::error::{Error, Result};
use crate::fit::{least_squares, line, polynomial_intercept, power_law};
use crate::lattice::{
    kahan, lattice_sum, orbit, sigma_norms, KahanSum, ShellReps, SumResult, SumSpec, TailModel,
    KERNEL_TRUNCATION,
};
use crate::quad::{gl16, Rule};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::path::Path;

/// `512√π/15`.
pub fn lhy_constant() -> f64 {
    512.0 * PI.sqrt() / 15.0
}

/// `32π(4π/3 − √3)`.
pub fn wu_constant() -> f64 {
    32.0 * PI * (4.0 * PI / 3.0 - 3f64.sqrt())
}

/// `128/(15√π)`.
pub fn lhy_density_coefficient() -> f64 {
    128.0 / (15.0 * PI.sqrt())
}

/// `8(4π/3 − √3)`.
pub fn wu_density_coefficient() -> f64 {
    8.0 * (4.0 * PI / 3.0 - 3f64.sqrt())
}

/// `½(√(p⁴ + 2p²G) − p² − G + G²/(2p²))`, rearranged to avoid cancellation.
#[inline]
pub fn lhy_summand(k: f64, g: f64) -> f64 {
    let p2 = k * k;
    let s = (p2 * p2 + 2.0 * p2 * g).sqrt();
    0.5 * (g * g / (2.0 * p2) - g * g / (s + p2 + g))
}

/// Ground energy `√(p⁴ + 2p²G) − p² − G` of one `±p` Bogoliubov pair.
#[inline]
pub fn bogoliubov_pair_energy(k: f64, g: f64) -> f64 {
    let p2 = k * k;
    let s = (p2 * p2 + 2.0 * p2 * g).sqrt();
    -g * g / (s + p2 + g)
}

/// Outer truncation of the counterterm sum, in units of `L`.
pub const LHY_TRUNCATION: f64 = 8.0;

/// `S₁ = ½ Σ_{p ∈ Λ*₊} (√(p⁴+2p²G_p) − p² − G_p + G_p²/(2p²))`, `G_p = N^κ V̂f(p/L)`.
pub fn bogoliubov_counterterm_sum(ks: &KernelSet) -> Result<SumResult> {
    counterterm_sum_with(ks, &|k| ks.g(k))
}

fn counterterm_sum_with(ks: &KernelSet, g: &(dyn Fn(f64) -> f64 + Sync)) -> Result<SumResult> {
    let outer = LHY_TRUNCATION * ks.params().box_length;
    // domain of the square root: p² + 2G ≥ 0 on the first shell is the binding case
    let k1 = 2.0 * PI;
    let g1 = g(k1);
    if k1 * k1 + 2.0 * g1 < 0.0 {
        return Err(Error::Domain {
            momentum: k1,
            value: 1.0 + 2.0 * g1 / (k1 * k1),
        });
    }
    let f = |k: f64| lhy_summand(k, g(k));
    lattice_sum(&SumSpec::radial(&f, outer).with_tail(TailModel::PowerLaw { exponent: 4.0 }))
}

/// `S₁ / (a^{5/2} N^{5κ/2})`.
pub fn lhy_ratio(ks: &KernelSet) -> Result<f64> {
    let s = bogoliubov_counterterm_sum(ks)?;
    let a = ks.scattering_length();
    let p = ks.params();
    Ok(s.value / (a.powf(2.5) * p.n.powf(2.5 * p.kappa)))
}

/// Constant extracted from ratios measured on an `N` grid.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Extrapolation {
    pub n: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub ratios: Vec<f64>,
    pub value: f64,
    pub target: f64,
}

impl Extrapolation {
    pub fn relative_error(&self) -> f64 {
        (self.value / self.target - 1.0).abs()
    }
}

/// LHY ratio extrapolated to `ε = N^{3κ/2−1} → 0` with a polynomial in `ε`
/// of degree `min(3, len − 1)`.
pub fn lhy_extrapolation(it: &Interaction, kappa: f64, ns: &[f64]) -> Result<Extrapolation> {
    if ns.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: ns.len() });
    }
    let mut eps = Vec::new();
    let mut ratios = Vec::new();
    for &n in ns {
        let params = ModelParams::new(n, kappa)?;
        let ks = it.kernels(params);
        eps.push(params.epsilon());
        ratios.push(lhy_ratio(&ks)?);
    }
    let value = polynomial_intercept(&eps, &ratios, (ns.len() - 1).min(3))?;
    Ok(Extrapolation {
        n: ns.to_vec(),
        epsilon: eps,
        ratios,
        value,
        target: lhy_constant(),
    })
}

/// `∫₀^∞ r²(√(r⁴+2r²) − r² − 1 + 1/(2r²)) dr`: Gauss–Legendre panels on
/// `[0, 1]` and, after `r = 1/t`, on `(0, 1]` for the `1/r²` tail.
pub fn lhy_radial_integral() -> f64 {
    // r²(√(r⁴+2r²) − r² − 1) = −r²/(s + r² + 1) with s = √(r⁴+2r²)
    let f = |r: f64| {
        let r2 = r * r;
        let s = r * (r2 + 2.0).sqrt();
        0.5 - r2 / (s + r2 + 1.0)
    };
    let rule = Rule::new(32);
    let head = rule.integrate_panels(0.0, 1.0, 16, f);
    let tail = rule.integrate_panels(0.0, 1.0, 16, |t| {
        if t == 0.0 {
            0.5
        } else {
            f(1.0 / t) / (t * t)
        }
    });
    head + tail
}

/// Restriction of the cubic correction sums to `|p|, |q| ≥ N^{κ/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cutoff {
    Sharp,
    /// Weights `χ_l(|p|/p_η) χ_l(|q|/p_η)`.
    Smooth,
}

/// Quadrature resolution for the reduced cubic-correction integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WuQuadrature {
    /// Gauss–Legendre panels per unit of `log |p|`.
    pub panels_per_unit: f64,
    /// Panels for `cos θ ∈ [−1, 1]`.
    pub angular_panels: usize,
    /// Upper radial limit in units of `L`.
    pub upper: f64,
}

impl Default for WuQuadrature {
    fn default() -> Self {
        Self {
            panels_per_unit: 6.0,
            angular_panels: 4,
            upper: 300.0,
        }
    }
}

/// `(S₂, S₃)` integrands at radii `(p, q)` and `c = cos θ`, without measure or prefactor.
#[inline]
fn wu_integrand(vp: f64, vq: f64, vpq: f64, p: f64, q: f64, c: f64) -> (f64, f64) {
    let p2 = p * p;
    let q2 = q * q;
    let d = 2.0 * (p2 + q2 + p * q * c);
    let s2 = -(vp + vpq) * vp * vq * vpq / (4.0 * p2 * q2 * d);
    let s3 = (vp + vpq) * (p * q * c) * vp * vq * vq / (4.0 * q2 * q2 * p2 * d);
    (s2, s3)
}

struct RadialNodes {
    x: Vec<f64>,
    w: Vec<f64>,
}

fn log_nodes(lo: f64, hi: f64, per_unit: f64) -> RadialNodes {
    let (a, b) = (lo.ln(), hi.ln());
    let panels = ((b - a) * per_unit).ceil().max(1.0) as usize;
    let (s, ws) = gl16().composite(a, b, panels);
    let x: Vec<f64> = s.iter().map(|v| v.exp()).collect();
    let w = ws.iter().zip(&x).map(|(w, x)| w * x).collect();
    RadialNodes { x, w }
}

fn linear_nodes(lo: f64, hi: f64, panels: usize) -> RadialNodes {
    let (x, w) = gl16().composite(lo, hi, panels);
    RadialNodes { x, w }
}

fn wu_quadrature(
    ks: &KernelSet,
    vf: &(dyn Fn(f64) -> f64 + Sync),
    nodes: &RadialNodes,
    angular_panels: usize,
    cutoff: Cutoff,
) -> (f64, f64) {
    let pe = ks.params().p_eta;
    let (c, wc) = gl16().composite(-1.0, 1.0, angular_panels);
    let weight = |k: f64| match cutoff {
        Cutoff::Sharp => 1.0,
        Cutoff::Smooth => smooth_cutoff(k / pe),
    };
    let vx: Vec<f64> = nodes.x.iter().map(|&k| vf(k)).collect();
    let cw: Vec<f64> = nodes.x.iter().map(|&k| weight(k)).collect();
    let rows: Vec<(f64, f64)> = (0..nodes.x.len())
        .into_par_iter()
        .map(|i| {
            let p = nodes.x[i];
            let mut s2 = KahanSum::new();
            let mut s3 = KahanSum::new();
            for j in 0..nodes.x.len() {
                let q = nodes.x[j];
                let wq = nodes.w[j] * cw[j] * p * p * q * q;
                if wq == 0.0 {
                    continue;
                }
                let mut a2 = 0.0;
                let mut a3 = 0.0;
                for (&cc, &w) in c.iter().zip(&wc) {
                    let pq = (p * p + q * q + 2.0 * p * q * cc).max(0.0).sqrt();
                    let (t2, t3) = wu_integrand(vx[i], vx[j], vf(pq), p, q, cc);
                    a2 += w * t2;
                    a3 += w * t3;
                }
                s2.add(wq * a2);
                s3.add(wq * a3);
            }
            let wp = nodes.w[i] * cw[i];
            (wp * s2.value(), wp * s3.value())
        })
        .collect();
    let s2: KahanSum = rows.iter().map(|r| r.0).collect();
    let s3: KahanSum = rows.iter().map(|r| r.1).collect();
    // N^{4κ−1} · 8π²/(2π)⁶ from d³p d³q / (2π)⁶ on the torus of unit volume
    let p = ks.params();
    let pref = p.n.powf(4.0 * p.kappa - 1.0) * 8.0 * PI * PI / (2.0 * PI).powi(6);
    (pref * s2.value(), pref * s3.value())
}

/// `(S₂, S₃)` by reduced quadrature over `(|p|, |q|, cos θ)`, `|p|, |q| ∈ [p_η, upper·L]`.
pub fn cubic_correction_sums(ks: &KernelSet, cutoff: Cutoff) -> Result<(f64, f64)> {
    cubic_correction_sums_with(ks, cutoff, WuQuadrature::default())
}

pub fn cubic_correction_sums_with(ks: &KernelSet, cutoff: Cutoff, quad: WuQuadrature) -> Result<(f64, f64)> {
    let l = ks.params().box_length;
    let pe = ks.params().p_eta;
    let hi = quad.upper * l;
    if !(hi > pe) {
        return Err(Error::InvalidParams(format!(
            "upper limit {hi:.3e} below the cutoff {pe:.3e}"
        )));
    }
    let table = ks.interaction().vf_table(2.0 * quad.upper + 1.0, 1.0 / 64.0);
    let vf = |k: f64| table.eval(k / l);
    let nodes = log_nodes(pe, hi, quad.panels_per_unit);
    let (s2, s3) = wu_quadrature(ks, &vf, &nodes, quad.angular_panels, cutoff);
    if !(s2.is_finite() && s3.is_finite()) {
        return Err(Error::NonConvergent {
            estimate: f64::NAN,
            tolerance: 0.0,
        });
    }
    Ok((s2, s3))
}

/// Same integral restricted to `p_η ≤ |p|, |q| ≤ outer` with linear panels; sharp cutoff.
pub fn cubic_correction_quadrature_truncated(ks: &KernelSet, outer: f64) -> (f64, f64) {
    let vf = |k: f64| ks.vf(k);
    let nodes = linear_nodes(ks.params().p_eta, outer, 40);
    wu_quadrature(ks, &vf, &nodes, 4, Cutoff::Sharp)
}

/// Direct double lattice sum `(S₂, S₃)` over `p, q ∈ Λ*` with `p_η ≤ |p|, |q|`
/// and `|n_p|, |n_q| ≤ radius`.
pub fn cubic_correction_lattice(ks: &KernelSet, radius: f64) -> (f64, f64) {
    let pe = ks.params().p_eta;
    let m_hi = (radius * radius).floor() as usize;
    let reps = ShellReps::shared(m_hi);
    let pts: Vec<(crate::coefficients::Vec3, f64)> = (1..=m_hi)
        .flat_map(|m| reps.points(m))
        .map(momentum)
        .filter(|p| norm(*p) >= pe)
        .map(|p| (p, ks.vf(norm(p))))
        .collect();
    let rows: Vec<(f64, f64)> = pts
        .par_iter()
        .map(|&(p, vp)| {
            let mut s2 = KahanSum::new();
            let mut s3 = KahanSum::new();
            let p2 = norm2(p);
            for &(q, vq) in &pts {
                let q2 = norm2(q);
                let pq = add(p, q);
                let vpq = ks.vf(norm(pq));
                let d = p2 + q2 + norm2(pq);
                s2.add(-(vp + vpq) * vp * vq * vpq / (4.0 * p2 * q2 * d));
                s3.add((vp + vpq) * dot(p, q) * vp * vq * vq / (4.0 * q2 * q2 * p2 * d));
            }
            (s2.value(), s3.value())
        })
        .collect();
    let pr = ks.params();
    let pref = pr.n.powf(4.0 * pr.kappa - 1.0);
    let s2: KahanSum = rows.iter().map(|r| r.0).collect();
    let s3: KahanSum = rows.iter().map(|r| r.1).collect();
    (pref * s2.value(), pref * s3.value())
}

/// Angular integrals of the `(S₂, S₃)` integrands at fixed radii; with
/// `reflect` the second momentum is replaced by `−q`.
pub fn cubic_correction_angular(ks: &KernelSet, p: f64, q: f64, reflect: bool) -> (f64, f64) {
    let (c, wc) = gl16().composite(-1.0, 1.0, 8);
    let vp = ks.vf(p);
    let vq = ks.vf(q);
    let mut s2 = KahanSum::new();
    let mut s3 = KahanSum::new();
    for (&cc, &w) in c.iter().zip(&wc) {
        let cc = if reflect { -cc } else { cc };
        let pq = (p * p + q * q + 2.0 * p * q * cc).max(0.0).sqrt();
        let (t2, t3) = wu_integrand(vp, vq, ks.vf(pq), p, q, cc);
        s2.add(w * t2);
        s3.add(w * t3);
    }
    (s2.value(), s3.value())
}

/// Regression of `(S₂+S₃)/(a⁴N^{4κ−1})` against `log N^β`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WuRegression {
    pub n: Vec<f64>,
    pub scaled: Vec<f64>,
    /// Slope from the fit on `[log N^β, 1, ε]`.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Slope of the plain two-parameter line.
    pub naive_slope: f64,
    pub target: f64,
}

impl WuRegression {
    pub fn relative_error(&self) -> f64 {
        (self.slope / -self.target - 1.0).abs()
    }
}

pub fn wu_regression(it: &Interaction, kappa: f64, ns: &[f64], cutoff: Cutoff) -> Result<WuRegression> {
    if ns.len() < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: ns.len() });
    }
    let mut x = Vec::new();
    let mut eps = Vec::new();
    let mut y = Vec::new();
    for &n in ns {
        let params = ModelParams::new(n, kappa)?;
        let ks = it.kernels(params);
        let (s2, s3) = cubic_correction_sums(&ks, cutoff)?;
        let a = ks.scattering_length();
        y.push((s2 + s3) / (a.powi(4) * n.powf(4.0 * kappa - 1.0)));
        x.push(params.beta * n.ln());
        eps.push(params.epsilon());
    }
    let rows: Vec<Vec<f64>> = x.iter().zip(&eps).map(|(&l, &e)| vec![l, 1.0, e]).collect();
    let f = least_squares(&rows, &y)?;
    let naive = line(&x, &y)?;
    Ok(WuRegression {
        n: ns.to_vec(),
        scaled: y,
        slope: f.coefficients[0],
        intercept: f.coefficients[1],
        r_squared: f.r_squared,
        naive_slope: naive.slope,
        target: wu_constant(),
    })
}

/// Evaluation of the double sum `Σ_{p,r} V̂(r/L) η∞,p+r σ_p²`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvolutionMode {
    /// Lattice double sum: `p` up to `p_outer·L` over cubic-orbit representatives,
    /// inner sum up to `q_outer·L`.
    Exact { p_outer: f64, q_outer: f64 },
    /// Inner sum replaced through the scattering equation by `N(V̂f − V̂)(p/L)`.
    Continuum,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConstantTerm {
    /// `4πaN^{1+κ}`.
    pub leading: f64,
    pub s1: f64,
    /// `−(N^κ‖σ‖²/N) Σ_p V̂(p/L) η∞,p`.
    pub sigma_eta: f64,
    /// `−N^{κ−1} Σ_{p,r} V̂(r/L) η∞,p+r σ_p²`.
    pub convolution: f64,
    pub total: f64,
}

/// The constant of the quadratic renormalization, term by term.
pub fn constant_term_assembly(ks: &KernelSet, mode: ConvolutionMode) -> Result<ConstantTerm> {
    let p = *ks.params();
    let nk = ks.n_kappa();
    let a = ks.scattering_length();
    let leading = 4.0 * PI * a * p.n * nk;
    let s1 = bogoliubov_counterterm_sum(ks)?.value;
    let sig2 = sigma_norms(ks)?.l2_squared;
    let outer = KERNEL_TRUNCATION * p.box_length;
    let ve = |k: f64| ks.v_hat(k) * ks.eta_inf(k);
    let sum_ve = lattice_sum(&SumSpec::radial(&ve, outer).with_tail(TailModel::PowerLaw { exponent: 6.0 }))?.value;
    let sigma_eta = -nk * sig2 / p.n * sum_ve;
    let conv = match mode {
        ConvolutionMode::Continuum => {
            let f = |k: f64| ks.sigma(k).powi(2) * (ks.vf(k) - ks.v_hat(k));
            let s = lattice_sum(&SumSpec::radial(&f, outer).with_tail(TailModel::PowerLaw { exponent: 8.0 }))?;
            -nk * s.value
        }
        ConvolutionMode::Exact { p_outer, q_outer } => {
            let mp = ((p_outer * p.box_length / (2.0 * PI)).powi(2)).floor() as usize;
            let mq = ((q_outer * p.box_length / (2.0 * PI)).powi(2)).floor() as usize;
            let reps = ShellReps::shared(mp.max(mq));
            let qs: Vec<(crate::coefficients::Vec3, f64)> = (1..=mq)
                .flat_map(|m| reps.points(m))
                .map(momentum)
                .map(|q| (q, ks.eta_inf_at(q)))
                .collect();
            let prs: Vec<[i64; 3]> = (1..=mp).flat_map(|m| reps.shell(m).to_vec()).collect();
            let terms: Vec<f64> = prs
                .par_iter()
                .map(|&r| {
                    let pv = momentum(r);
                    let s2 = ks.sigma_at(pv).powi(2);
                    if s2 == 0.0 {
                        return 0.0;
                    }
                    let inner: KahanSum = qs
                        .iter()
                        .map(|&(q, e)| ks.v_hat(norm(crate::coefficients::sub(q, pv))) * e)
                        .collect();
                    orbit(r).len() as f64 * s2 * inner.value()
                })
                .collect();
            -nk / p.n * kahan(&terms)
        }
    };
    Ok(ConstantTerm {
        leading,
        s1,
        sigma_eta,
        convolution: conv,
        total: leading + s1 + sigma_eta + conv,
    })
}

/// Terms of the upper bound at finite `N`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EnergyBound {
    pub leading: f64,
    pub lhy: f64,
    pub log_term: f64,
    pub total: f64,
}

/// `4πaN^{1+κ} + (512√π/15)a^{5/2}N^{5κ/2} + 32π(4π/3−√3)a⁴N^{4κ−1} log(N^{3κ−2})`.
/// The unknown `C N^{4κ−1}` term is not included.
pub fn energy_upper_bound(n: f64, kappa: f64, a: f64) -> Result<EnergyBound> {
    if !(0.5..2.0 / 3.0).contains(&kappa) {
        return Err(Error::KappaOutOfRange(kappa));
    }
    let leading = 4.0 * PI * a * n.powf(1.0 + kappa);
    let lhy = lhy_constant() * a.powf(2.5) * n.powf(2.5 * kappa);
    let log_term = wu_constant() * a.powi(4) * n.powf(4.0 * kappa - 1.0) * (3.0 * kappa - 2.0) * n.ln();
    Ok(EnergyBound {
        leading,
        lhy,
        log_term,
        total: leading + lhy + log_term,
    })
}

/// `4πaρ²(1 + (128/15√π)√(ρa³) + 8(4π/3−√3)ρa³ log(ρa³))`.
pub fn energy_density(rho: f64, a: f64) -> f64 {
    if rho == 0.0 || a == 0.0 {
        return 0.0;
    }
    let y = rho * a.powi(3);
    4.0 * PI * a * rho * rho * (1.0 + lhy_density_coefficient() * y.sqrt() + wu_density_coefficient() * y * y.ln())
}

/// Relative residuals of the three rescaled terms (leading, LHY, log) when the
/// finite-`N` bound is divided by `L⁵ = N^{5−5κ}` and compared with the
/// density expansion at `ρ = N^{3κ−2}`.
pub fn scaling_consistency_check(kappa: f64, a: f64, n: f64) -> Result<[f64; 3]> {
    if !(kappa > 0.5 && kappa < 2.0 / 3.0) {
        return Err(Error::KappaOutOfRange(kappa));
    }
    let b = energy_upper_bound(n, kappa, a)?;
    let l5 = n.powf(5.0 - 5.0 * kappa);
    let rho = n.powf(3.0 * kappa - 2.0);
    let base = 4.0 * PI * a * rho * rho;
    let y = rho * a.powi(3);
    let rel = |x: f64, y: f64| ((x - y) / y).abs();
    Ok([
        rel(b.leading / l5, base),
        rel(b.lhy / l5, base * lhy_density_coefficient() * y.sqrt()),
        rel(b.log_term / l5, base * wu_density_coefficient() * y * rho.ln()),
    ])
}

/// `g_p(t) = √(p⁴ + 2p²N^κV̂f(tp/L)) − p² − N^κV̂f(tp/L)`.
pub fn g_p(ks: &KernelSet, k: f64, t: f64) -> f64 {
    let g = ks.n_kappa() * ks.interaction().solution().fourier_vf(t * k / ks.params().box_length);
    bogoliubov_pair_energy(k, g)
}

/// `g_p′(0)` from the analytic derivative of `V̂f`, relative to `|g_p(0)|`.
pub fn g_p_derivative_at_zero(ks: &KernelSet, k: f64) -> f64 {
    let l = ks.params().box_length;
    let sol = ks.interaction().solution();
    let g = ks.n_kappa() * sol.fourier_vf(0.0);
    let p2 = k * k;
    let s = (p2 * p2 + 2.0 * p2 * g).sqrt();
    let dg = ks.n_kappa() * sol.fourier_vf_derivative(0.0) * k / l;
    let d = (p2 / s - 1.0) * dg;
    d / g_p(ks, k, 0.0).abs()
}

/// `|S₁ − S₁ʰ| / S₁`, where `S₁ʰ` uses the constant `G = 8πaN^κ`.
pub fn counterterm_flattening(ks: &KernelSet) -> Result<f64> {
    let s1 = bogoliubov_counterterm_sum(ks)?.value;
    let g0 = 8.0 * PI * ks.scattering_length() * ks.n_kappa();
    let sh = counterterm_sum_with(ks, &|_| g0)?.value;
    Ok(((s1 - sh) / s1).abs())
}

/// One row of the energy report.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EnergyReport {
    #[serde(rename = "N")]
    pub n: f64,
    pub kappa: f64,
    pub a: f64,
    #[serde(rename = "S1")]
    pub s1: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
    #[serde(rename = "S3")]
    pub s3: f64,
    pub lhy_ratio: f64,
    pub log_slope: Option<f64>,
    pub assembled_bound: f64,
}

impl EnergyReport {
    /// Rows for each `N`; `log_slope` is the common regression slope (absent with fewer than four points).
    pub fn compute(it: &Interaction, kappa: f64, ns: &[f64]) -> Result<Vec<EnergyReport>> {
        let slope = if ns.len() >= 4 {
            Some(wu_regression(it, kappa, ns, Cutoff::Sharp)?.slope)
        } else {
            None
        };
        ns.iter()
            .map(|&n| {
                let ks = it.kernels(ModelParams::new(n, kappa)?);
                let a = ks.scattering_length();
                let s1 = bogoliubov_counterterm_sum(&ks)?.value;
                let (s2, s3) = cubic_correction_sums(&ks, Cutoff::Sharp)?;
                Ok(EnergyReport {
                    n,
                    kappa,
                    a,
                    s1,
                    s2,
                    s3,
                    lhy_ratio: s1 / (a.powf(2.5) * n.powf(2.5 * kappa)),
                    log_slope: slope,
                    assembled_bound: energy_upper_bound(n, kappa, a)?.total,
                })
            })
            .collect()
    }

    pub fn write_csv(rows: &[EnergyReport], path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(rows: &[EnergyReport], path: impl AsRef<Path>) -> Result<()> {
        let s = serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(path, s)?;
        Ok(())
    }
}

/// Exponent of `|f(N)|` over an `N` grid.
pub fn scaling_exponent(ns: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let v: Vec<f64> = ns.iter().map(|&n| f(n)).collect::<Result<_>>()?;
    Ok(power_law(ns, &v)?.slope)
}
