//! Zero-energy scattering for radial, compactly supported potentials.
//!
//! The radial equation `u'' = ½ V u` with `u(0) = 0` is integrated outward
//! with classical RK4 on a grid that contains every breakpoint of the
//! potential, then normalized so that `u(r) = r - a` outside the support.
//! Fourier transforms of `V` and `V f` are computed by composite
//! Gauss–Legendre quadrature with the support split at breakpoints.

use crate::error::{Error, Result};
use crate::quad::{gl16, sinc, sinc_prime};
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

/// Radial transform `ξ ↦ 4π ∫ r² g(r) sinc(ξ r) dr` of some profile `g`.
pub trait RadialTransform: Send + Sync {
    fn value(&self, xi: f64) -> f64;
    fn derivative(&self, xi: f64) -> f64;
}

/// Monotone piecewise-cubic (Fritsch–Carlson) interpolant.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InvalidPotential(
                "table needs at least two (r, V) rows".into(),
            ));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidPotential(
                "table radii must be strictly increasing".into(),
            ));
        }
        if y.iter().chain(&x).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("table contains non-finite values".into()));
        }
        let n = x.len();
        let d: Vec<f64> = (0..n - 1)
            .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
            .collect();
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            m[i] = if d[i - 1] * d[i] <= 0.0 {
                0.0
            } else {
                0.5 * (d[i - 1] + d[i])
            };
        }
        for i in 0..n - 1 {
            if d[i] == 0.0 {
                m[i] = 0.0;
                m[i + 1] = 0.0;
                continue;
            }
            let alpha = m[i] / d[i];
            let beta = m[i + 1] / d[i];
            let s = alpha * alpha + beta * beta;
            if s > 9.0 {
                let t = 3.0 / s.sqrt();
                m[i] = t * alpha * d[i];
                m[i + 1] = t * beta * d[i];
            }
        }
        Ok(Self { x, y, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.x.partition_point(|&v| v <= t) - 1;
        hermite(
            self.x[i],
            self.x[i + 1],
            self.y[i],
            self.y[i + 1],
            self.m[i],
            self.m[i + 1],
            t,
        )
    }
}

fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, m0: f64, m1: f64, t: f64) -> f64 {
    let h = x1 - x0;
    let s = (t - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * h * m0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * m1
}

/// Whether the profile is an analytic expression or interpolated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    ClosedForm,
    Tabulated,
}

#[derive(Clone)]
enum Profile {
    SoftSphere { v0: f64 },
    Table(MonotoneCubic),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A radial potential `V(r)` vanishing for `r > R`.
#[derive(Clone)]
pub struct RadialPotential {
    profile: Profile,
    radius: f64,
    breakpoints: Vec<f64>,
    nodes: Arc<Vec<(f64, f64)>>,
}

impl std::fmt::Debug for RadialPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match &self.profile {
            Profile::SoftSphere { v0 } => format!("SoftSphere {{ v0: {v0} }}"),
            Profile::Table(t) => format!("Table({} rows)", t.x.len()),
            Profile::Custom(_) => "Custom".to_string(),
        };
        write!(f, "RadialPotential {{ {kind}, radius: {} }}", self.radius)
    }
}

/// Panel width used for the cached quadrature nodes, as a fraction of R.
const BASE_PANELS: usize = 64;

impl RadialPotential {
    /// `V(r) = v0` for `r <= radius`, zero outside.
    pub fn soft_sphere(v0: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidPotential(format!("radius must be positive, got {radius}")));
        }
        if !v0.is_finite() {
            return Err(Error::InvalidPotential(format!("v0 must be finite, got {v0}")));
        }
        Self::build(Profile::SoftSphere { v0 }, radius, vec![0.0, radius])
    }

    /// The zero potential on a ball of the given radius.
    pub fn zero(radius: f64) -> Result<Self> {
        Self::soft_sphere(0.0, radius)
    }

    /// Analytic profile on `[0, radius]`; `breakpoints` lists interior
    /// points where the profile is not smooth.
    pub fn closed_form<F>(profile: F, radius: f64, breakpoints: &[f64]) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidPotential(format!("radius must be positive, got {radius}")));
        }
        let mut bp = vec![0.0, radius];
        bp.extend(breakpoints.iter().copied().filter(|&b| b > 0.0 && b < radius));
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        Self::build(Profile::Custom(Arc::new(profile)), radius, bp)
    }

    /// Tabulated profile; the support radius is the last tabulated radius.
    pub fn from_table(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.first().copied() != Some(0.0) {
            return Err(Error::InvalidPotential("table must start at r = 0".into()));
        }
        let table = MonotoneCubic::new(r, v)?;
        let radius = *table.knots().last().unwrap();
        let bp = table.knots().to_vec();
        Self::build(Profile::Table(table), radius, bp)
    }

    /// Reads a CSV table with header columns `r,V`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path.as_ref())?;
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::InvalidPotential(format!("table is missing column `{name}`")))
        };
        let (ir, iv) = (col("r")?, col("V")?);
        let (mut r, mut v) = (Vec::new(), Vec::new());
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidPotential(format!("bad number on data row {}", line + 1)))
            };
            r.push(parse(ir)?);
            v.push(parse(iv)?);
        }
        Self::from_table(r, v)
    }

    fn build(profile: Profile, radius: f64, breakpoints: Vec<f64>) -> Result<Self> {
        let mut pot = Self {
            profile,
            radius,
            breakpoints,
            nodes: Arc::new(Vec::new()),
        };
        pot.nodes = Arc::new(pot.quadrature_nodes(radius / BASE_PANELS as f64));
        let l2: f64 = pot
            .nodes
            .iter()
            .map(|&(r, w)| {
                let v = pot.value(r);
                w * r * r * v * v
            })
            .sum();
        if !l2.is_finite() {
            return Err(Error::InvalidPotential(
                "potential is not square integrable on its support".into(),
            ));
        }
        Ok(pot)
    }

    pub fn kind(&self) -> PotentialKind {
        match self.profile {
            Profile::Table(_) => PotentialKind::Tabulated,
            _ => PotentialKind::ClosedForm,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Points in `[0, R]` where the profile may fail to be smooth (always
    /// includes both endpoints).
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// `V(r)`; zero for `r > R`.
    pub fn value(&self, r: f64) -> f64 {
        if r > self.radius {
            return 0.0;
        }
        match &self.profile {
            Profile::SoftSphere { v0 } => *v0,
            Profile::Table(t) => t.eval(r),
            Profile::Custom(f) => f(r),
        }
    }

    /// `true` when `V` vanishes identically.
    pub fn is_zero(&self) -> bool {
        match &self.profile {
            Profile::SoftSphere { v0 } => *v0 == 0.0,
            _ => self.nodes.iter().all(|&(r, _)| self.value(r) == 0.0),
        }
    }

    /// Composite Gauss–Legendre nodes on `[0, R]`, split at breakpoints and
    /// with panel width at most `max_width`.
    pub fn quadrature_nodes(&self, max_width: f64) -> Vec<(f64, f64)> {
        let rule = gl16();
        let mut out = Vec::new();
        for seg in self.breakpoints.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let panels = ((b - a) / max_width).ceil().max(1.0) as usize;
            let h = (b - a) / panels as f64;
            for k in 0..panels {
                let lo = a + h * k as f64;
                out.extend(rule.mapped(lo, lo + h));
            }
        }
        out
    }

    fn nodes_for(&self, xi: f64) -> Arc<Vec<(f64, f64)>> {
        let base = self.radius / BASE_PANELS as f64;
        let need = if xi > 0.0 { 3.0 / xi } else { base };
        if need >= base {
            self.nodes.clone()
        } else {
            Arc::new(self.quadrature_nodes(need))
        }
    }

    /// `V̂(ξ) = 4π ∫₀^R r² V(r) sinc(ξ r) dr`.
    pub fn fourier(&self, xi: f64) -> f64 {
        let xi = xi.abs();
        let nodes = self.nodes_for(xi);
        4.0 * PI
            * nodes
                .iter()
                .map(|&(r, w)| w * r * r * self.value(r) * sinc(xi * r))
                .sum::<f64>()
    }

    /// `dV̂/dξ`.
    pub fn fourier_derivative(&self, xi: f64) -> f64 {
        let sgn = xi.signum();
        let xi = xi.abs();
        let nodes = self.nodes_for(xi);
        sgn * 4.0
            * PI
            * nodes
                .iter()
                .map(|&(r, w)| w * r * r * r * self.value(r) * sinc_prime(xi * r))
                .sum::<f64>()
    }

    /// `∫₀^R r² V(r)² dr`.
    pub fn l2_radial(&self) -> f64 {
        self.nodes
            .iter()
            .map(|&(r, w)| {
                let v = self.value(r);
                w * r * r * v * v
            })
            .sum()
    }
}

impl RadialTransform for RadialPotential {
    fn value(&self, xi: f64) -> f64 {
        self.fourier(xi)
    }
    fn derivative(&self, xi: f64) -> f64 {
        self.fourier_derivative(xi)
    }
}

/// Radial integration grid `0 = r₀ < r₁ < … < r_M`.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes[0] != 0.0 {
            return Err(Error::InvalidGrid("grid must start at 0 and have at least two nodes".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
        }
        Ok(Self { nodes })
    }

    /// `steps` equal steps on `[0, radius]`.
    pub fn uniform(radius: f64, steps: usize) -> Result<Self> {
        if !(radius > 0.0) || steps == 0 {
            return Err(Error::InvalidGrid("uniform grid needs radius > 0 and steps > 0".into()));
        }
        let h = radius / steps as f64;
        let mut nodes: Vec<f64> = (0..=steps).map(|i| h * i as f64).collect();
        nodes[steps] = radius;
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn refined(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.nodes.len());
        for w in self.nodes.windows(2) {
            out.push(w[0]);
            out.push(0.5 * (w[0] + w[1]));
        }
        out.push(*self.nodes.last().unwrap());
        out
    }
}

/// Solver tolerances.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Maximum accepted Richardson estimate of the error in `a`.
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tolerance: 1e-9 }
    }
}

/// Normalized zero-energy solution.
#[derive(Clone)]
pub struct ScatteringSolution {
    potential: RadialPotential,
    nodes: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
    a: f64,
    richardson: f64,
    defect: f64,
    outside_residual: f64,
    weights: Arc<Vec<(f64, f64)>>,
}

impl std::fmt::Debug for ScatteringSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScatteringSolution")
            .field("a", &self.a)
            .field("richardson", &self.richardson)
            .field("defect", &self.defect)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

fn rk4(pot: &RadialPotential, nodes: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(nodes.len());
    let mut du = Vec::with_capacity(nodes.len());
    let (mut y, mut yp) = (0.0f64, 1.0f64);
    u.push(y);
    du.push(yp);
    for w in nodes.windows(2) {
        let (r0, r1) = (w[0], w[1]);
        let h = r1 - r0;
        let rm = r0 + 0.5 * h;
        // Sample V strictly inside the step so a jump at a node is seen from the correct side.
        let v0 = pot.value(r0 + 1e-14 * h);
        let vm = pot.value(rm);
        let v1 = pot.value(r1 - 1e-14 * h);
        let k1u = yp;
        let k1p = 0.5 * v0 * y;
        let k2u = yp + 0.5 * h * k1p;
        let k2p = 0.5 * vm * (y + 0.5 * h * k1u);
        let k3u = yp + 0.5 * h * k2p;
        let k3p = 0.5 * vm * (y + 0.5 * h * k2u);
        let k4u = yp + h * k3p;
        let k4p = 0.5 * v1 * (y + h * k3u);
        y += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        yp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        u.push(y);
        du.push(yp);
    }
    (u, du)
}

fn length_from(u_r: f64, du_r: f64, radius: f64) -> f64 {
    radius - u_r / du_r
}

/// Solves `u'' = ½ V u`, `u(0) = 0`, normalized to `u = r - a` for `r >= R`.
pub fn solve_zero_energy(v: &RadialPotential, grid: &RadialGrid) -> Result<ScatteringSolution> {
    solve_zero_energy_with(v, grid, SolverOptions::default())
}

pub fn solve_zero_energy_with(
    v: &RadialPotential,
    grid: &RadialGrid,
    opts: SolverOptions,
) -> Result<ScatteringSolution> {
    let radius = v.radius();
    let last = *grid.nodes().last().unwrap();
    if last < radius * (1.0 - 1e-12) {
        return Err(Error::InvalidGrid(format!(
            "grid ends at {last} but the potential support extends to {radius}"
        )));
    }
    let mut nodes: Vec<f64> = grid.nodes().iter().copied().filter(|&r| r < radius).collect();
    nodes.extend(v.breakpoints().iter().copied());
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * radius);
    let coarse = RadialGrid::new(nodes)?;
    let fine_nodes = coarse.refined();

    let (uc, duc) = rk4(v, coarse.nodes());
    let (uf, duf) = rk4(v, &fine_nodes);
    let (ucr, ducr) = (*uc.last().unwrap(), *duc.last().unwrap());
    let (ufr, dufr) = (*uf.last().unwrap(), *duf.last().unwrap());
    if !(ufr.is_finite() && dufr.is_finite()) {
        return Err(Error::NonConvergent {
            estimate: f64::INFINITY,
            tolerance: opts.tolerance,
        });
    }
    // Nodes of the unnormalized solution inside the support.
    for (i, w) in uf.windows(2).enumerate() {
        if w[1] <= 0.0 && i + 1 < uf.len() {
            return Err(Error::BoundState {
                radius: fine_nodes[i + 1],
            });
        }
    }
    if dufr <= 0.0 {
        return Err(Error::BoundState { radius });
    }
    let a_fine = length_from(ufr, dufr, radius);
    let a_coarse = length_from(ucr, ducr, radius);
    if a_fine > radius {
        // u = c (r - a) vanishes at r = a outside the support.
        return Err(Error::BoundState { radius: a_fine });
    }
    let richardson = (a_fine - a_coarse).abs() / 15.0;
    if !(richardson <= opts.tolerance) {
        return Err(Error::NonConvergent {
            estimate: richardson,
            tolerance: opts.tolerance,
        });
    }
    let c = dufr;
    let u: Vec<f64> = uf.iter().map(|x| x / c).collect();
    let du: Vec<f64> = duf.iter().map(|x| x / c).collect();
    let a = a_fine;
    let outside_residual = (u.last().unwrap() - (radius - a)).abs() + (du.last().unwrap() - 1.0).abs();

    let mut defect: f64 = 0.0;
    for i in 1..fine_nodes.len() - 1 {
        let (r0, r1, r2) = (fine_nodes[i - 1], fine_nodes[i], fine_nodes[i + 1]);
        if v.breakpoints().iter().any(|&b| b > r0 && b < r2 || b == r1) {
            continue;
        }
        let (h1, h2) = (r1 - r0, r2 - r1);
        let d2 = 2.0 * (h1 * u[i + 1] - (h1 + h2) * u[i] + h2 * u[i - 1]) / (h1 * h2 * (h1 + h2));
        defect = defect.max((d2 - 0.5 * v.value(r1) * u[i]).abs());
    }

    let mut sol = ScatteringSolution {
        potential: v.clone(),
        nodes: fine_nodes,
        u,
        du,
        a,
        richardson,
        defect,
        outside_residual,
        weights: Arc::new(Vec::new()),
    };
    sol.weights = Arc::new(sol.weighted_nodes(radius / BASE_PANELS as f64));
    Ok(sol)
}

/// Closed-form scattering length of the soft sphere `V = v0 1(r <= R)`,
/// `v0 >= 0`.
pub fn soft_sphere_scattering_length(v0: f64, radius: f64) -> f64 {
    if v0 == 0.0 {
        return 0.0;
    }
    let k = (0.5 * v0).sqrt();
    radius - (k * radius).tanh() / k
}

impl ScatteringSolution {
    pub fn potential(&self) -> &RadialPotential {
        &self.potential
    }

    /// Scattering length from the outside matching `u = r - a`.
    pub fn scattering_length(&self) -> f64 {
        self.a
    }

    /// Richardson error estimate for `a`.
    pub fn richardson_estimate(&self) -> f64 {
        self.richardson
    }

    /// Max discrete ODE defect `|u'' - ½ V u|` away from breakpoints.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// `|u(R) - (R - a)| + |u'(R) - 1|` after normalization.
    pub fn outside_residual(&self) -> f64 {
        self.outside_residual
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn u_values(&self) -> &[f64] {
        &self.u
    }

    /// `u(r) = r f(r)`; equals `r - a` beyond the support.
    pub fn u(&self, r: f64) -> f64 {
        let radius = self.potential.radius();
        if r >= radius {
            return r - self.a;
        }
        if r <= 0.0 {
            return 0.0;
        }
        let i = (self.nodes.partition_point(|&x| x <= r) - 1).min(self.nodes.len() - 2);
        hermite(
            self.nodes[i],
            self.nodes[i + 1],
            self.u[i],
            self.u[i + 1],
            self.du[i],
            self.du[i + 1],
            r,
        )
    }

    /// `f(r) = u(r)/r`, with `f(0) = u'(0)`.
    pub fn f(&self, r: f64) -> f64 {
        if r <= 0.0 {
            self.du[0]
        } else {
            self.u(r) / r
        }
    }

    /// `sup |f|` sampled on the grid and outside.
    pub fn f_sup(&self) -> f64 {
        let inside = self
            .nodes
            .iter()
            .zip(&self.u)
            .skip(1)
            .map(|(r, u)| (u / r).abs())
            .fold(self.du[0].abs(), f64::max);
        inside.max(1.0)
    }

    fn weighted_nodes(&self, max_width: f64) -> Vec<(f64, f64)> {
        self.potential
            .quadrature_nodes(max_width)
            .into_iter()
            .map(|(r, w)| (r, w * 4.0 * PI * r * self.u(r) * self.potential.value(r)))
            .collect()
    }

    fn weights_for(&self, xi: f64) -> Arc<Vec<(f64, f64)>> {
        let base = self.potential.radius() / BASE_PANELS as f64;
        if xi <= 0.0 || 3.0 / xi >= base {
            self.weights.clone()
        } else {
            Arc::new(self.weighted_nodes(3.0 / xi))
        }
    }

    /// `∫ |V f| d³x = 4π ∫ r² |V f| dr`, a uniform bound on `|Vf̂|`.
    pub fn vf_l1(&self) -> f64 {
        self.weights.iter().map(|&(_, w)| w.abs()).sum()
    }

    /// `V̂f(ξ) = 4π ∫₀^R r² V f sinc(ξ r) dr`.
    pub fn fourier_vf(&self, xi: f64) -> f64 {
        let xi = xi.abs();
        self.weights_for(xi)
            .iter()
            .map(|&(r, w)| w * sinc(xi * r))
            .sum()
    }

    /// `dV̂f/dξ`.
    pub fn fourier_vf_derivative(&self, xi: f64) -> f64 {
        let sgn = xi.signum();
        let xi = xi.abs();
        sgn * self
            .weights_for(xi)
            .iter()
            .map(|&(r, w)| w * r * sinc_prime(xi * r))
            .sum::<f64>()
    }

    /// Envelope `F_m(ξ) = (1 + Σ_{k ∈ ℕ³, |k| ≤ m} |ℱ[x^k V f](ξ)|)^m − 1`
    /// evaluated at the wave vector `ξ e₃`.
    pub fn fm_envelope(&self, m: u32, xi: f64) -> f64 {
        fm_envelope(self, m, xi)
    }
}

impl RadialTransform for ScatteringSolution {
    fn value(&self, xi: f64) -> f64 {
        self.fourier_vf(xi)
    }
    fn derivative(&self, xi: f64) -> f64 {
        self.fourier_vf_derivative(xi)
    }
}

/// `(1/8π) ∫ V f d³x`, the scattering length from the interior integral.
pub fn scattering_length_by_integral(sol: &ScatteringSolution) -> f64 {
    sol.weights.iter().map(|&(_, w)| w).sum::<f64>() / (8.0 * PI)
}

/// `V̂f(ξ)`; continuous at zero with value `8πa`.
pub fn fourier_vf(sol: &ScatteringSolution, xi: f64) -> f64 {
    sol.fourier_vf(xi)
}

fn double_factorial_odd(n: u32) -> f64 {
    // (2n - 1)!!
    (1..=n).map(|k| (2 * k - 1) as f64).product()
}

/// `∫₀^{2π} cos^{k1}φ sin^{k2}φ dφ`.
fn azimuthal(k1: u32, k2: u32) -> f64 {
    if k1 % 2 == 1 || k2 % 2 == 1 {
        return 0.0;
    }
    let (a, b) = (k1 / 2, k2 / 2);
    let num = double_factorial_odd(a) * double_factorial_odd(b);
    let den: f64 = (1..=(a + b)).map(|k| (2 * k) as f64).product();
    2.0 * PI * num / den
}

/// See [`ScatteringSolution::fm_envelope`].
pub fn fm_envelope(sol: &ScatteringSolution, m: u32, xi: f64) -> f64 {
    let m = m.max(1);
    let pot = sol.potential();
    let radius = pot.radius();
    let xi = xi.abs();
    let width = if xi > 0.0 {
        (radius / BASE_PANELS as f64).min(3.0 / xi)
    } else {
        radius / BASE_PANELS as f64
    };
    // Radial nodes carry r² V f.
    let radial: Vec<(f64, f64)> = pot
        .quadrature_nodes(width)
        .into_iter()
        .map(|(r, w)| (r, w * r * sol.u(r) * pot.value(r)))
        .collect();
    let c_panels = ((xi * radius / 3.0).ceil() as usize).max(1) + 1;
    let (cs, cw) = gl16().composite(-1.0, 1.0, c_panels);
    // I_j(c) = ∫ r^{2+j} V f e^{-i ξ r c} dr, j = 0..=m.
    let mut ij = vec![vec![Complex64::new(0.0, 0.0); cs.len()]; m as usize + 1];
    for (ic, &c) in cs.iter().enumerate() {
        for &(r, w) in &radial {
            let phase = Complex64::from_polar(1.0, -xi * r * c);
            let mut rp = w;
            for row in ij.iter_mut() {
                row[ic] += phase * rp;
                rp *= r;
            }
        }
    }
    let mut total = 0.0;
    for k1 in 0..=m {
        for k2 in 0..=(m - k1) {
            let phi = azimuthal(k1, k2);
            if phi == 0.0 {
                continue;
            }
            for k3 in 0..=(m - k1 - k2) {
                let order = (k1 + k2 + k3) as usize;
                let half = (k1 + k2) / 2;
                let mut acc = Complex64::new(0.0, 0.0);
                for (ic, (&c, &w)) in cs.iter().zip(&cw).enumerate() {
                    let ang = c.powi(k3 as i32) * (1.0 - c * c).powi(half as i32);
                    acc += ij[order][ic] * (w * ang);
                }
                total += (acc * phi).norm();
            }
        }
    }
    (1.0 + total).powi(m as i32) - 1.0
}

/// Cubic-Hermite table of a radial transform on `[0, ξ_max]`, with direct
/// evaluation as fallback beyond the table.
#[derive(Clone)]
pub struct TransformTable {
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    source: Arc<dyn RadialTransform>,
}

impl std::fmt::Debug for TransformTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransformTable")
            .field("step", &self.step)
            .field("xi_max", &self.xi_max())
            .finish()
    }
}

impl TransformTable {
    /// Tabulates `source` with spacing `step` up to `xi_max`.
    pub fn new(source: Arc<dyn RadialTransform>, xi_max: f64, step: f64) -> Self {
        use rayon::prelude::*;
        let n = (xi_max / step).ceil() as usize + 1;
        let (values, slopes): (Vec<f64>, Vec<f64>) = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = step * i as f64;
                (source.value(x), source.derivative(x))
            })
            .unzip();
        Self {
            step,
            values,
            slopes,
            source,
        }
    }

    /// Default resolution used by the kernel evaluators.
    pub fn standard(source: Arc<dyn RadialTransform>) -> Self {
        Self::new(source, 64.0, 1.0 / 128.0)
    }

    pub fn xi_max(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        let xi = xi.abs();
        let t = xi / self.step;
        let i = t as usize;
        if i + 1 >= self.values.len() {
            return self.source.value(xi);
        }
        let s = t - i as f64;
        let s2 = s * s;
        let s3 = s2 * s;
        let h = self.step;
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.values[i]
            + (s3 - 2.0 * s2 + s) * h * self.slopes[i]
            + (-2.0 * s3 + 3.0 * s2) * self.values[i + 1]
            + (s3 - s2) * h * self.slopes[i + 1]
    }

    pub fn at_zero(&self) -> f64 {
        self.values[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn soft(k: f64) -> ScatteringSolution {
        let pot = RadialPotential::soft_sphere(2.0 * k * k, 1.0).unwrap();
        solve_zero_energy(&pot, &RadialGrid::uniform(1.0, 2000).unwrap()).unwrap()
    }

    #[test]
    fn zero_potential_has_zero_length() {
        let pot = RadialPotential::zero(1.0).unwrap();
        let sol = solve_zero_energy(&pot, &RadialGrid::uniform(1.0, 100).unwrap()).unwrap();
        assert_eq!(sol.scattering_length(), 0.0);
        assert_eq!(scattering_length_by_integral(&sol), 0.0);
        assert!((sol.f(0.3) - 1.0).abs() < 1e-15);
        assert_eq!(sol.fourier_vf(3.0), 0.0);
    }

    #[test]
    fn soft_sphere_matches_closed_form() {
        for &k in &[0.5, 1.0, 2.0] {
            let sol = soft(k);
            let exact = 1.0 - k.tanh() / k;
            assert!((sol.scattering_length() - exact).abs() < 1e-10, "k={k}");
            assert!((scattering_length_by_integral(&sol) - exact).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn attractive_well_with_bound_state_is_rejected() {
        let pot = RadialPotential::soft_sphere(-12.0, 1.0).unwrap();
        let err = solve_zero_energy(&pot, &RadialGrid::uniform(1.0, 400).unwrap()).unwrap_err();
        assert!(matches!(err, Error::BoundState { .. }));
    }

    #[test]
    fn coarse_grid_fails_richardson() {
        let pot = RadialPotential::soft_sphere(800.0, 1.0).unwrap();
        let err = solve_zero_energy(&pot, &RadialGrid::uniform(1.0, 4).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NonConvergent { .. }));
    }

    #[test]
    fn table_of_soft_sphere_reproduces_length() {
        let n = 200;
        let r: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let v = vec![2.0; n + 1];
        let pot = RadialPotential::from_table(r, v).unwrap();
        assert_eq!(pot.kind(), PotentialKind::Tabulated);
        let sol = solve_zero_energy(&pot, &RadialGrid::uniform(1.0, 1000).unwrap()).unwrap();
        assert!((sol.scattering_length() - (1.0 - 1f64.tanh())).abs() < 1e-10);
    }

    #[test]
    fn monotone_cubic_preserves_monotonicity() {
        let t = MonotoneCubic::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.1, 5.0, 5.1]).unwrap();
        let mut prev = -1.0;
        for i in 0..=300 {
            let v = t.eval(i as f64 / 100.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn table_and_direct_transform_agree() {
        let sol = Arc::new(soft(1.0));
        let table = TransformTable::standard(sol.clone());
        for i in 0..500 {
            let x = 0.123 + i as f64 * 0.1271;
            assert!((table.eval(x) - sol.fourier_vf(x)).abs() < 1e-10, "xi={x}");
        }
        assert!((table.eval(80.0) - sol.fourier_vf(80.0)).abs() < 1e-14);
    }

    #[test]
    fn azimuthal_integrals() {
        assert!((azimuthal(0, 0) - 2.0 * PI).abs() < 1e-15);
        assert!((azimuthal(2, 0) - PI).abs() < 1e-15);
        assert!((azimuthal(2, 2) - PI / 4.0).abs() < 1e-15);
        assert_eq!(azimuthal(1, 0), 0.0);
    }
}
