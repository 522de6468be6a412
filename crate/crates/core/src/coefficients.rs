//! Momentum-space coefficients of the trial state.
//!
//! All evaluators are pure functions of a [`KernelSet`], which bundles the
//! model scales with cached transform tables of `V̂f` and `V̂`. Radial
//! quantities are exposed both as functions of `|p|` (suffix-free names) and
//! of three-vectors (`*_at`).

use crate::error::{Error, Result};
use crate::scattering::{RadialGrid, RadialPotential, ScatteringSolution, TransformTable};
use std::f64::consts::PI;
use std::sync::Arc;

pub type Vec3 = [f64; 3];

#[inline]
pub fn norm(p: Vec3) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

#[inline]
pub fn norm2(p: Vec3) -> f64 {
    p[0] * p[0] + p[1] * p[1] + p[2] * p[2]
}

#[inline]
pub fn add(p: Vec3, q: Vec3) -> Vec3 {
    [p[0] + q[0], p[1] + q[1], p[2] + q[2]]
}

#[inline]
pub fn sub(p: Vec3, q: Vec3) -> Vec3 {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2]]
}

#[inline]
pub fn neg(p: Vec3) -> Vec3 {
    [-p[0], -p[1], -p[2]]
}

#[inline]
pub fn dot(p: Vec3, q: Vec3) -> f64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

/// Dual-lattice momentum `2π n`.
#[inline]
pub fn momentum(n: [i64; 3]) -> Vec3 {
    [
        2.0 * PI * n[0] as f64,
        2.0 * PI * n[1] as f64,
        2.0 * PI * n[2] as f64,
    ]
}

/// Smooth step: 0 for `x <= 1`, 1 for `x >= 2`, `C^∞` and monotone,
/// `χ(x) = g(x−1)/(g(x−1) + g(2−x))` with `g(t) = exp(−1/t)` for `t > 0`.
pub fn smooth_cutoff(x: f64) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    let g = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let a = g(x - 1.0);
    let b = g(2.0 - x);
    a / (a + b)
}

/// `(N, κ)` with all derived scales.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ModelParams {
    pub n: f64,
    pub kappa: f64,
    /// `β = 2 − 3κ`.
    pub beta: f64,
    /// Box length in units of the interaction range, `L = N^{1−κ}`.
    pub box_length: f64,
    /// Infrared cutoff of σ, `N^{κ/2 − β/4}`.
    pub p_sigma: f64,
    /// Infrared cutoff of η, `N^{κ/2}`.
    pub p_eta: f64,
    /// `N^{−κ/2}`.
    pub l_eta: f64,
    /// `N^{−κ/2 + β/4}`.
    pub l_sigma: f64,
    /// `N^{−κ/2 + β/12}`.
    pub l_b: f64,
}

impl ModelParams {
    /// Checked constructor: `κ ∈ [1/2, 2/3)`, `N > 1`.
    pub fn new(n: f64, kappa: f64) -> Result<Self> {
        if !(0.5..2.0 / 3.0).contains(&kappa) {
            return Err(Error::KappaOutOfRange(kappa));
        }
        Self::with_any_kappa(n, kappa)
    }

    /// Constructor accepting any `κ ∈ (0, 2/3)`; used for toy-scale runs.
    pub fn with_any_kappa(n: f64, kappa: f64) -> Result<Self> {
        if !(n > 1.0 && n.is_finite()) {
            return Err(Error::InvalidParams(format!("N must be finite and > 1, got {n}")));
        }
        if !(kappa > 0.0 && kappa < 2.0 / 3.0) {
            return Err(Error::KappaOutOfRange(kappa));
        }
        let beta = 2.0 - 3.0 * kappa;
        Ok(Self {
            n,
            kappa,
            beta,
            box_length: n.powf(1.0 - kappa),
            p_sigma: n.powf(kappa / 2.0 - beta / 4.0),
            p_eta: n.powf(kappa / 2.0),
            l_eta: n.powf(-kappa / 2.0),
            l_sigma: n.powf(-kappa / 2.0 + beta / 4.0),
            l_b: n.powf(-kappa / 2.0 + beta / 12.0),
        })
    }

    /// `N^κ`.
    pub fn n_kappa(&self) -> f64 {
        self.n.powf(self.kappa)
    }

    /// Dimensionless small parameter `N^{3κ/2 − 1}`.
    pub fn epsilon(&self) -> f64 {
        self.n.powf(1.5 * self.kappa - 1.0)
    }
}

/// Scattering solution plus cached transform tables, shared by all
/// [`KernelSet`]s built on the same potential.
#[derive(Clone)]
pub struct Interaction {
    solution: Arc<ScatteringSolution>,
    vf: Arc<TransformTable>,
    v: Arc<TransformTable>,
    a: f64,
}

impl std::fmt::Debug for Interaction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Interaction").field("a", &self.a).finish()
    }
}

impl Interaction {
    pub fn new(solution: ScatteringSolution) -> Self {
        let solution = Arc::new(solution);
        let pot = Arc::new(solution.potential().clone());
        let vf = Arc::new(TransformTable::standard(solution.clone()));
        let v = Arc::new(TransformTable::standard(pot));
        let a = solution.scattering_length();
        Self { solution, vf, v, a }
    }

    /// Solves the scattering problem on a uniform grid and tabulates transforms.
    pub fn from_potential(pot: &RadialPotential, steps: usize) -> Result<Self> {
        let grid = RadialGrid::uniform(pot.radius(), steps)?;
        Ok(Self::new(crate::scattering::solve_zero_energy(pot, &grid)?))
    }

    /// Soft sphere `V = v0 1(r <= R)`.
    pub fn soft_sphere(v0: f64, radius: f64) -> Result<Self> {
        Self::from_potential(&RadialPotential::soft_sphere(v0, radius)?, 4000)
    }

    pub fn solution(&self) -> &ScatteringSolution {
        &self.solution
    }

    pub fn scattering_length(&self) -> f64 {
        self.a
    }

    /// `V̂f(ξ)` from the table.
    #[inline]
    pub fn vf(&self, xi: f64) -> f64 {
        self.vf.eval(xi)
    }

    /// `V̂(ξ)` from the table.
    #[inline]
    pub fn v(&self, xi: f64) -> f64 {
        self.v.eval(xi)
    }

    /// `V̂f` tabulated up to `xi_max` (the shared table stops at 64).
    pub fn vf_table(&self, xi_max: f64, step: f64) -> TransformTable {
        TransformTable::new(self.solution.clone(), xi_max, step)
    }

    pub fn kernels(&self, params: ModelParams) -> KernelSet {
        KernelSet::new(self.clone(), params)
    }
}

/// `(μ∞, μ, σ, γ)` at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bogoliubov {
    pub mu_inf: f64,
    pub mu: f64,
    pub sigma: f64,
    pub gamma: f64,
}

/// Closed forms of the uncut coefficients in terms of `η = η∞`:
/// `(σ∞², γ∞², γ∞σ∞)`.
pub fn uncut_closed_forms(eta: f64) -> (f64, f64, f64) {
    let s = (1.0 - 4.0 * eta).sqrt();
    let sigma2 = (1.0 - 2.0 * eta - s) / (2.0 * s);
    let gamma2 = (1.0 - 2.0 * eta + s) / (2.0 * s);
    (sigma2, gamma2, eta / s)
}

/// Pure evaluators for all trial-state coefficients at fixed `(N, κ)`.
#[derive(Clone, Debug)]
pub struct KernelSet {
    interaction: Interaction,
    params: ModelParams,
    n_kappa: f64,
    inv_l: f64,
    inv_sqrt_n: f64,
}

impl KernelSet {
    pub fn new(interaction: Interaction, params: ModelParams) -> Self {
        Self {
            n_kappa: params.n_kappa(),
            inv_l: 1.0 / params.box_length,
            inv_sqrt_n: 1.0 / params.n.sqrt(),
            interaction,
            params,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn interaction(&self) -> &Interaction {
        &self.interaction
    }

    pub fn scattering_length(&self) -> f64 {
        self.interaction.a
    }

    pub fn n_kappa(&self) -> f64 {
        self.n_kappa
    }

    /// `V̂f(|p|/L)`.
    #[inline]
    pub fn vf(&self, k: f64) -> f64 {
        self.interaction.vf(k * self.inv_l)
    }

    /// `V̂(|p|/L)`.
    #[inline]
    pub fn v_hat(&self, k: f64) -> f64 {
        self.interaction.v(k * self.inv_l)
    }

    /// `G = N^κ V̂f(|p|/L)`.
    #[inline]
    pub fn g(&self, k: f64) -> f64 {
        self.n_kappa * self.vf(k)
    }

    /// `η∞ = −G/(2|p|²)`, zero at the origin.
    #[inline]
    pub fn eta_inf(&self, k: f64) -> f64 {
        if k == 0.0 {
            0.0
        } else {
            -self.g(k) / (2.0 * k * k)
        }
    }

    pub fn eta_inf_at(&self, p: Vec3) -> f64 {
        self.eta_inf(norm(p))
    }

    /// `μ∞ = −¼ log(1 − 4η∞)`; NaN outside the logarithm's domain.
    #[inline]
    pub fn mu_inf(&self, k: f64) -> f64 {
        let e = self.eta_inf(k);
        if 1.0 - 4.0 * e <= 0.0 {
            return f64::NAN;
        }
        -0.25 * (-4.0 * e).ln_1p()
    }

    /// `χ(p) = χ_l(|p|/p_σ)`.
    #[inline]
    pub fn chi(&self, k: f64) -> f64 {
        smooth_cutoff(k / self.params.p_sigma)
    }

    /// `χ̃(p) = χ_l(|p|/p_η)`.
    #[inline]
    pub fn chi_tilde(&self, k: f64) -> f64 {
        smooth_cutoff(k / self.params.p_eta)
    }

    /// `μ = μ∞ χ`.
    #[inline]
    pub fn mu(&self, k: f64) -> f64 {
        let c = self.chi(k);
        if c == 0.0 {
            0.0
        } else {
            self.mu_inf(k) * c
        }
    }

    #[inline]
    pub fn sigma(&self, k: f64) -> f64 {
        self.mu(k).sinh()
    }

    #[inline]
    pub fn gamma(&self, k: f64) -> f64 {
        self.mu(k).cosh()
    }

    pub fn sigma_at(&self, p: Vec3) -> f64 {
        self.sigma(norm(p))
    }

    pub fn gamma_at(&self, p: Vec3) -> f64 {
        self.gamma(norm(p))
    }

    /// `σ∞ = sinh μ∞`.
    #[inline]
    pub fn sigma_inf(&self, k: f64) -> f64 {
        self.mu_inf(k).sinh()
    }

    /// `γ∞ = cosh μ∞`.
    #[inline]
    pub fn gamma_inf(&self, k: f64) -> f64 {
        self.mu_inf(k).cosh()
    }

    /// `(μ∞, μ, σ, γ)` with a domain check on `1 − 4η∞`.
    pub fn mu_sigma_gamma(&self, p: Vec3) -> Result<Bogoliubov> {
        let k = norm(p);
        let e = self.eta_inf(k);
        let arg = 1.0 - 4.0 * e;
        if arg <= 0.0 {
            return Err(Error::Domain {
                momentum: k,
                value: arg,
            });
        }
        let mu_inf = -0.25 * (-4.0 * e).ln_1p();
        let mu = mu_inf * self.chi(k);
        Ok(Bogoliubov {
            mu_inf,
            mu,
            sigma: mu.sinh(),
            gamma: mu.cosh(),
        })
    }

    /// `tanh(2μ∞) + G/(|p|² + G)`.
    pub fn tanh_identity_residual(&self, p: Vec3) -> f64 {
        let k = norm(p);
        if k == 0.0 {
            return 0.0;
        }
        let g = self.g(k);
        (2.0 * self.mu_inf(k)).tanh() + g / (k * k + g)
    }

    /// Cut coefficient `η = η∞ χ̃`.
    #[inline]
    pub fn eta(&self, k: f64) -> f64 {
        let c = self.chi_tilde(k);
        if c == 0.0 {
            0.0
        } else {
            self.eta_inf(k) * c
        }
    }

    pub fn eta_at(&self, p: Vec3) -> f64 {
        self.eta(norm(p))
    }

    /// `A(p,q) = N^{−1/2} 2p² η(p) σ(q) / (p² + q² + (p+q)²)`; zero if `p` or `q` vanishes.
    pub fn cubic(&self, p: Vec3, q: Vec3) -> f64 {
        let p2 = norm2(p);
        let q2 = norm2(q);
        if p2 == 0.0 || q2 == 0.0 {
            return 0.0;
        }
        let e = self.eta(p2.sqrt());
        if e == 0.0 {
            return 0.0;
        }
        let s = self.sigma(q2.sqrt());
        if s == 0.0 {
            return 0.0;
        }
        self.inv_sqrt_n * 2.0 * p2 * e * s / (p2 + q2 + norm2(add(p, q)))
    }

    /// `A⁽³⁾_{p,q} = A_{p,q} + A_{q,p} + A_{−p−q,p}`.
    pub fn cubic3(&self, p: Vec3, q: Vec3) -> f64 {
        let r = neg(add(p, q));
        self.cubic(p, q) + self.cubic(q, p) + self.cubic(r, p)
    }

    /// `A⁽⁶⁾_{p,q} = A⁽³⁾_{p,q} + A⁽³⁾_{−p−q,q}`.
    pub fn cubic6(&self, p: Vec3, q: Vec3) -> f64 {
        let r = neg(add(p, q));
        self.cubic3(p, q) + self.cubic3(r, q)
    }

    /// `(A⁽³⁾, A⁽⁶⁾)`.
    pub fn symmetrized_kernels(&self, p: Vec3, q: Vec3) -> (f64, f64) {
        (self.cubic3(p, q), self.cubic6(p, q))
    }

    /// `A_K^low(p,q) = −N^{−1/2} (1 − χ̃(p)) N^κ V̂f(|p|/L) σ(q)`.
    pub fn kinetic_low(&self, p: Vec3, q: Vec3) -> f64 {
        self.kinetic_low_p(norm(p)) * self.sigma(norm(q))
    }

    /// The `p`-dependent factor of [`Self::kinetic_low`].
    #[inline]
    pub fn kinetic_low_p(&self, k: f64) -> f64 {
        let w = 1.0 - self.chi_tilde(k);
        if w == 0.0 {
            0.0
        } else {
            -self.inv_sqrt_n * w * self.g(k)
        }
    }

    /// `N − Σ_{p ∈ Λ*₊} σ_p²`.
    pub fn condensate_number(&self) -> Result<f64> {
        Ok(self.params.n - crate::lattice::sigma_norms(self)?.l2_squared)
    }
}
